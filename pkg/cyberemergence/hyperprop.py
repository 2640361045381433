"""
TRACE PROPERTIES AND HYPERPROPERTIES

## Purpose
Check security properties over finite sets of traces, and show that some of
them cannot be checked one trace at a time.

## Definition
A trace is a finite sequence of events. A trace property is a set of traces:
a trace set satisfies it when every trace, in isolation, satisfies the same
predicate. A hyperproperty is a set of trace sets and can only be checked by
looking at several traces jointly. Examples:
* noninterference: high-clearance inputs cannot influence what low-clearance
processes observe. Purge form: every trace's low observation is reproduced by
some trace with no High inputs.
* average response time: the grand mean of all response times across all
traces is within a bound.

## Finite-horizon safety and liveness
Over an alphabet Σ and horizon L, completed traces have length exactly L and
partial traces have length < L (the empty trace included). For a property P
(a set of completed traces):
* P is safety iff every completed trace outside P has a partial prefix none
of whose completions lie in P (a bad prefix);
* P is liveness iff every partial trace has some completion in P.
The safety closure of P keeps the completed traces all of whose partial
prefixes extend to a member of P. Every P is the intersection of its safety
closure and the liveness property P ∪ (universe minus closure).

## Witnesses
A set-level predicate H behaves as a trace property on a pool of traces iff
H(S) equals the conjunction of H({t}) over t in S for every candidate set S.
A witness (t, s1, s2) exhibits the first set breaking this: H passes s1,
fails s2, and t lies in both while one of them is {t}.
"""


import enum
import json
from dataclasses import dataclass, field
from itertools import combinations, product
from math import comb

from loguru import logger

from cyberemergence.errors import (CapacityError, InvalidArgumentError,
                                   ParseError)


MAX_POOL_SIZE = 20
MAX_SET_SIZE = 6


class Level(str, enum.Enum):
    HIGH = "H"
    LOW = "L"


class Kind(str, enum.Enum):
    INPUT = "in"
    OUTPUT = "out"


@dataclass(frozen=True)
class Event:
    level: Level
    kind: Kind
    value: int
    response_time: object = None

    def __post_init__(self):
        object.__setattr__(self, "level", Level(self.level))
        object.__setattr__(self, "kind", Kind(self.kind))
        if self.response_time is not None:
            if self.kind is not Kind.OUTPUT:
                raise InvalidArgumentError(
                    "response time is only allowed on output events")
            if self.response_time < 0:
                raise InvalidArgumentError(
                    "response time must be >= 0, got {}".format(
                        self.response_time))

    def sort_key(self):
        rt = -1.0 if self.response_time is None else float(self.response_time)
        return (self.level.value, self.kind.value, self.value, rt)

    def to_dict(self):
        data = {"level": self.level.value, "kind": self.kind.value,
                "value": self.value}
        if self.response_time is not None:
            data["rt"] = self.response_time
        return data

    def __str__(self):
        text = "{}{}({})".format(self.level.value, self.kind.value,
                                 self.value)
        if self.response_time is not None:
            text += "@{:g}".format(self.response_time)
        return text


def high_in(value):
    return Event(Level.HIGH, Kind.INPUT, value)


def low_in(value):
    return Event(Level.LOW, Kind.INPUT, value)


def low_out(value, rt=None):
    return Event(Level.LOW, Kind.OUTPUT, value, rt)


def high_out(value, rt=None):
    return Event(Level.HIGH, Kind.OUTPUT, value, rt)


def symbol_key(symbol):
    """Orders events by their sort key and plain symbols by value."""
    return symbol.sort_key() if isinstance(symbol, Event) else (symbol,)


@dataclass(frozen=True)
class Trace:
    events: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))

    def sort_key(self):
        return len(self.events), tuple(symbol_key(e) for e in self.events)

    @property
    def response_times(self):
        return [e.response_time for e in self.events
                if e.response_time is not None]

    def to_dict(self):
        return {"events": [e.to_dict() for e in self.events]}

    def __str__(self):
        return "[" + ", ".join(str(e) for e in self.events) + "]"


def canonical(traces):
    return sorted(traces, key=Trace.sort_key)


@dataclass(frozen=True)
class PropertyVerdict:
    passed: bool
    detail: object = None

    def __post_init__(self):
        if not self.passed and self.detail is None:
            raise InvalidArgumentError("a failing verdict needs a detail")

    def __bool__(self):
        return self.passed

    def to_dict(self):
        detail = self.detail
        if isinstance(detail, Trace):
            detail = detail.to_dict()
        return {"passed": self.passed, "detail": detail}


# TRACE-SET CHECKS
def check_pointwise(traces, predicate):
    for trace in canonical(traces):
        if not predicate(trace):
            return PropertyVerdict(False, trace)
    return PropertyVerdict(True)


def max_response_time(bound):
    """Per-trace predicate: every response time is <= bound."""
    def predicate(trace):
        return all(rt <= bound for rt in trace.response_times)
    return predicate


def check_avg_response_time(traces, bound):
    if not bound > 0:
        raise InvalidArgumentError("bound must be > 0, got {}".format(bound))
    if not traces:
        raise InvalidArgumentError(
            "average response time of an empty trace set is undefined")

    values = []
    for trace in canonical(traces):
        times = trace.response_times
        if not times:
            raise InvalidArgumentError(
                "trace {} has no response times".format(trace))
        values.extend(times)

    mean = sum(values) / len(values)
    if mean <= bound:
        return PropertyVerdict(True, mean)
    return PropertyVerdict(False, mean)


def low_observation(trace):
    return tuple(e for e in trace.events if e.level is Level.LOW)


def purge(trace):
    return Trace(e for e in trace.events
                 if not (e.level is Level.HIGH and e.kind is Kind.INPUT))


def has_high_input(trace):
    return purge(trace) != trace


def check_noninterference(traces):
    reproducible = {low_observation(t) for t in traces
                    if not has_high_input(t)}
    for trace in canonical(traces):
        if low_observation(trace) not in reproducible:
            return PropertyVerdict(False, trace)
    return PropertyVerdict(True)


def as_predicate(hyper):
    """Wraps a set-level check so that it returns a plain bool."""
    def predicate(traces):
        return bool(hyper(traces))
    return predicate


# FINITE-HORIZON SAFETY AND LIVENESS
@dataclass(frozen=True)
class TraceUniverse:
    alphabet: tuple
    horizon: int

    def __post_init__(self):
        alphabet = tuple(sorted(set(self.alphabet), key=symbol_key))
        if not alphabet:
            raise InvalidArgumentError("alphabet must not be empty")
        if isinstance(self.horizon, bool) or not isinstance(
                self.horizon, int) or self.horizon < 1:
            raise InvalidArgumentError(
                "horizon must be an integer >= 1, got {!r}".format(
                    self.horizon))
        object.__setattr__(self, "alphabet", alphabet)

    @property
    def size(self):
        return len(self.alphabet) ** self.horizon

    def completed(self):
        return [tuple(w) for w in product(self.alphabet,
                                          repeat=self.horizon)]

    def partial(self):
        words = []
        for length in range(self.horizon):
            words.extend(tuple(w) for w in product(self.alphabet,
                                                   repeat=length))
        return words

    def contains(self, word):
        return (len(word) == self.horizon
                and all(symbol in self.alphabet for symbol in word))


@dataclass(frozen=True)
class FiniteProperty:
    universe: TraceUniverse
    members: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        members = frozenset(tuple(w) for w in self.members)
        for word in members:
            if not self.universe.contains(word):
                raise InvalidArgumentError(
                    "{} is not a completed trace of the universe".format(
                        "".join(map(str, word))))
        object.__setattr__(self, "members", members)

    def __contains__(self, word):
        return tuple(word) in self.members

    def complement(self):
        return FiniteProperty(self.universe,
                              frozenset(self.universe.completed())
                              - self.members)

    def sorted_members(self):
        return sorted(self.members,
                      key=lambda word: tuple(symbol_key(s) for s in word))


def _extendable_prefixes(p):
    """Partial traces with at least one completion in p."""
    prefixes = set()
    for word in p.members:
        for length in range(p.universe.horizon):
            prefixes.add(word[:length])
    return prefixes


def is_safety(p):
    extendable = _extendable_prefixes(p)
    for word in p.complement().members:
        if all(word[:length] in extendable
               for length in range(p.universe.horizon)):
            return False
    return True


def is_liveness(p):
    extendable = _extendable_prefixes(p)
    return all(prefix in extendable for prefix in p.universe.partial())


def safety_closure(p):
    extendable = _extendable_prefixes(p)
    members = frozenset(
        word for word in p.universe.completed()
        if all(word[:length] in extendable
               for length in range(p.universe.horizon)))
    return FiniteProperty(p.universe, members)


def decompose(p):
    safe = safety_closure(p)
    outside = frozenset(p.universe.completed()) - safe.members
    live = FiniteProperty(p.universe, p.members | outside)
    return safe, live


def all_properties(universe):
    """Every property of `universe`, in order of the member bitmask."""
    words = universe.completed()
    for mask in range(2 ** len(words)):
        yield FiniteProperty(universe, frozenset(
            w for i, w in enumerate(words) if mask >> i & 1))


def check_decomposition(p):
    safe, live = decompose(p)
    return (is_safety(safe) and is_liveness(live)
            and safe.members & live.members == p.members)


# WITNESSES
@dataclass(frozen=True)
class Witness:
    t: Trace
    s1: frozenset
    s2: frozenset

    def to_dict(self):
        return {"t": self.t.to_dict(),
                "s1": [x.to_dict() for x in canonical(self.s1)],
                "s2": [x.to_dict() for x in canonical(self.s2)]}


def witness_non_trace_property(hyper, pool, max_set_size=MAX_SET_SIZE):
    """
    Searches sets of 2..max_set_size traces from `pool`, smallest first and
    in canonical combination order, for one whose verdict differs from the
    conjunction of its members' verdicts in isolation. `pool` is a
    collection of traces or a TraceUniverse of symbol words.
    """
    if isinstance(pool, TraceUniverse):
        pool = [Trace(word) for word in pool.completed()]
    pool = canonical(set(pool))

    if max_set_size < 2:
        raise InvalidArgumentError(
            "max_set_size must be >= 2, got {}".format(max_set_size))
    if len(pool) > MAX_POOL_SIZE or max_set_size > MAX_SET_SIZE:
        raise CapacityError(
            "exhaustive search is capped at {} traces and sets of {}; got "
            "{} traces and sets of {}".format(MAX_POOL_SIZE, MAX_SET_SIZE,
                                              len(pool), max_set_size))

    check = as_predicate(hyper)
    alone = {t: check(frozenset([t])) for t in pool}
    searched = 0

    for size in range(2, min(max_set_size, len(pool)) + 1):
        for members in combinations(pool, size):
            searched += 1
            s = frozenset(members)
            verdict = check(s)
            if verdict == all(alone[t] for t in members):
                continue

            logger.debug("witness after {} of {} candidate sets", searched,
                         sum(comb(len(pool), k)
                             for k in range(2, max_set_size + 1)))
            if verdict:
                t = next(t for t in members if not alone[t])
                return Witness(t, s, frozenset([t]))
            t = members[0]
            return Witness(t, frozenset([t]), s)

    return None


def is_valid_witness(hyper, witness):
    check = as_predicate(hyper)
    return (witness.t in witness.s1 and witness.t in witness.s2
            and check(witness.s1) and not check(witness.s2))


# COMPOSITION
@dataclass(frozen=True)
class HyperEmergence:
    part_verdicts: tuple
    composite_verdict: bool
    emergent: bool


def hyperproperty_emergence(hyper, parts):
    """
    Each part is the trace set of a component system and the composite is
    their union. Emergent iff all parts agree and the union disagrees.
    """
    if len(parts) < 2:
        raise InvalidArgumentError("need at least 2 trace sets")

    check = as_predicate(hyper)
    verdicts = tuple(check(frozenset(part)) for part in parts)
    union = frozenset().union(*parts)
    composite = check(union)
    emergent = len(set(verdicts)) == 1 and composite != verdicts[0]
    return HyperEmergence(verdicts, composite, emergent)


# FILES
def _parse_event(data, path, where):
    if not isinstance(data, dict):
        raise ParseError("event must be an object", path=path, field=where)
    try:
        level = Level(data.get("level"))
    except ValueError:
        raise ParseError("level must be \"H\" or \"L\"", path=path,
                         field=where + ".level")
    try:
        kind = Kind(data.get("kind"))
    except ValueError:
        raise ParseError("kind must be \"in\" or \"out\"", path=path,
                         field=where + ".kind")

    value = data.get("value")
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError("value must be an integer", path=path,
                         field=where + ".value")

    rt = data.get("rt")
    if rt is not None:
        if isinstance(rt, bool) or not isinstance(rt, (int, float)) or rt < 0:
            raise ParseError("rt must be a non-negative number", path=path,
                             field=where + ".rt")
        if kind is not Kind.OUTPUT:
            raise ParseError("rt is only allowed on output events",
                             path=path, field=where + ".rt")

    return Event(level, kind, value, rt)


def _load_json(text, path):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError("malformed JSON: {}".format(e.msg), path=path,
                         line=e.lineno)


def _read_text(path):
    try:
        with open(path, encoding="utf-8") as f:
            return f.read()
    except OSError as e:
        raise ParseError("cannot read file: {}".format(e.strerror), path=path)


def loads_traces(text, path=None):
    data = _load_json(text, path)
    if not isinstance(data, dict) or not isinstance(data.get("traces"), list):
        raise ParseError("expected an object with a \"traces\" list",
                         path=path, field="traces")

    traces = []
    for i, item in enumerate(data["traces"]):
        where = "traces[{}]".format(i)
        if not isinstance(item, dict) or not isinstance(
                item.get("events"), list):
            raise ParseError("trace must have an \"events\" list", path=path,
                             field=where)
        traces.append(Trace(
            _parse_event(e, path, "{}.events[{}]".format(where, j))
            for j, e in enumerate(item["events"])))
    return traces


def read_traces(path):
    return loads_traces(_read_text(path), path=path)


def dumps_traces(traces):
    return json.dumps({"traces": [t.to_dict() for t in traces]}, indent=2)


def loads_property(text, path=None):
    data = _load_json(text, path)
    if not isinstance(data, dict):
        raise ParseError("top level must be an object", path=path)

    sigma = data.get("sigma")
    if not isinstance(sigma, list) or not sigma or not all(
            isinstance(s, str) for s in sigma):
        raise ParseError("sigma must be a non-empty list of strings",
                         path=path, field="sigma")
    horizon = data.get("L")
    if isinstance(horizon, bool) or not isinstance(horizon, int) \
            or horizon < 1:
        raise ParseError("L must be an integer >= 1", path=path, field="L")

    universe = TraceUniverse(tuple(sigma), horizon)
    members = data.get("members")
    if not isinstance(members, list):
        raise ParseError("members must be a list", path=path,
                         field="members")

    words = []
    for i, word in enumerate(members):
        if not isinstance(word, list) or not universe.contains(tuple(word)):
            raise ParseError(
                "member is not a length-{} word over sigma".format(horizon),
                path=path, field="members[{}]".format(i))
        words.append(tuple(word))
    return FiniteProperty(universe, frozenset(words))


def read_property(path):
    return loads_property(_read_text(path), path=path)


def property_to_dict(p):
    return {"sigma": list(p.universe.alphabet), "L": p.universe.horizon,
            "members": [list(w) for w in p.sorted_members()]}


if __name__ == "__main__":
    pool = [Trace([low_out(1, 1.0)]), Trace([low_out(1, 3.0)])]
    print(witness_non_trace_property(
        lambda s: check_avg_response_time(s, 2.5), pool))
