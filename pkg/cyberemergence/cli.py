"""
Command-line entry point.

Every subcommand writes JSON reports (to --report, or stdout) and CSV time
series (to --out). Exit codes: 0 when the computation finished, whatever the
verdict; 2 on invalid input; 3 on numeric failure. Errors go to stderr as
`error: <category>: <message>`.
"""


import argparse
import json
import sys

import numpy as np
from loguru import logger

from cyberemergence import __version__
from cyberemergence import dynamics, emergence, graph, hyperprop, spectral
from cyberemergence.errors import (CapacityError, ConvergenceError,
                                   CyberEmergenceError, InvalidArgumentError,
                                   ParseError)
from cyberemergence.utils.calculations import spectral_bounds


EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NUMERIC = 3

MAX_DECOMPOSE_WORDS = 16


class _Parser(argparse.ArgumentParser):

    def error(self, message):
        raise InvalidArgumentError(message)


# FLAG TYPES
def _number(cast, check, description):
    def parse(text):
        try:
            value = cast(text)
        except ValueError:
            raise argparse.ArgumentTypeError(
                "expected {}, got {!r}".format(description, text))
        if not check(value):
            raise argparse.ArgumentTypeError(
                "expected {}, got {!r}".format(description, text))
        return value
    return parse


_probability = _number(float, lambda x: 0 <= x <= 1, "a number in [0, 1]")
_positive_float = _number(float, lambda x: x > 0, "a number > 0")
_non_negative_float = _number(float, lambda x: x >= 0, "a number >= 0")
_positive_int = _number(int, lambda x: x >= 1, "an integer >= 1")
_non_negative_int = _number(int, lambda x: x >= 0, "an integer >= 0")
_seed = _number(int, lambda x: 0 <= x < dynamics.SEED_LIMIT,
                "a 64-bit unsigned integer")


def _init_policy(text):
    try:
        dynamics.parse_init_policy(text)
    except InvalidArgumentError as e:
        raise argparse.ArgumentTypeError(str(e))
    return text


def _property(text):
    if text == "noninterference":
        return text
    for prefix in ("avg-rt:", "pointwise:max-rt:"):
        if text.startswith(prefix):
            _positive_float(text[len(prefix):])
            return text
    raise argparse.ArgumentTypeError(
        "expected avg-rt:<bound>, noninterference or "
        "pointwise:max-rt:<bound>, got {!r}".format(text))


def property_check(text):
    """Set-level check named by a --property value."""
    if text == "noninterference":
        return hyperprop.check_noninterference
    if text.startswith("avg-rt:"):
        bound = float(text[len("avg-rt:"):])
        return lambda traces: hyperprop.check_avg_response_time(traces, bound)
    bound = float(text[len("pointwise:max-rt:"):])
    predicate = hyperprop.max_response_time(bound)
    return lambda traces: hyperprop.check_pointwise(traces, predicate)


# OUTPUT
def _emit(payload, path=None):
    text = json.dumps(payload, indent=2) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)


def _write_csv(frame, path):
    frame.to_csv(path, index=False, lineterminator="\n")


def _finite(value):
    return None if np.isinf(value) else value


def _params(args):
    return spectral.DynamicsParams(beta=args.beta, gamma=args.gamma)


def _read_bridge_edges(path):
    try:
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
    except OSError as e:
        raise ParseError("cannot read bridge edges: {}".format(e.strerror),
                         path=path)
    except json.JSONDecodeError as e:
        raise ParseError("malformed JSON: {}".format(e.msg), path=path,
                         line=e.lineno)

    if isinstance(data, dict):
        data = data.get("edges")
    if not isinstance(data, list):
        raise ParseError("expected a list of [u, v] pairs", path=path,
                         field="edges")
    for i, pair in enumerate(data):
        if (not isinstance(pair, list) or len(pair) != 2
                or not all(isinstance(x, int) and not isinstance(x, bool)
                            for x in pair)):
            raise ParseError("edge must be a pair of integers", path=path,
                             field="edges[{}]".format(i))
    return [tuple(pair) for pair in data]


def _components(args):
    if len(args.components) < 2:
        raise InvalidArgumentError("--components needs at least 2 paths")
    if args.op == "bridge" and args.bridge_edges is None:
        raise InvalidArgumentError("--op bridge needs --bridge-edges")
    if args.op != "bridge" and args.bridge_edges is not None:
        raise InvalidArgumentError("--bridge-edges is only valid with "
                                   "--op bridge")

    components = [graph.read_graph(path) for path in args.components]
    bridge_edges = None
    if args.bridge_edges is not None:
        bridge_edges = _read_bridge_edges(args.bridge_edges)
    return components, bridge_edges


def _save_plot(draw, path):
    from cyberemergence.utils.plotting import close_all

    draw(path)
    close_all()


# HANDLERS
def run_graph_gen(args):
    if args.kind == "complete":
        g = graph.make_complete(args.n)
    elif args.kind == "star":
        g = graph.make_star(args.n)
    elif args.kind == "path":
        g = graph.make_path(args.n)
    else:
        g = graph.make_erdos_renyi(args.n, args.p, args.seed)

    if args.out is None:
        sys.stdout.write(graph.dumps_graph(g))
    else:
        graph.write_graph(g, args.out)
    return EXIT_OK


def run_graph_compose(args):
    components, bridge_edges = _components(args)
    g = emergence.compose(components, args.op, bridge_edges)

    if args.out is None:
        sys.stdout.write(graph.dumps_graph(g))
    else:
        graph.write_graph(g, args.out)
    return EXIT_OK


def run_spectral(args):
    g = graph.read_graph(args.graph)
    result = spectral.spectral_radius(g, tol=args.tol, max_iter=args.max_iter)
    lower, upper = spectral_bounds(g)

    payload = {"graph": g.summary(), **result.to_dict(),
               "bounds": {"lower": lower, "upper": upper}}
    _emit(payload, args.report)
    return EXIT_OK


def run_threshold(args):
    if args.gamma == 0:
        raise InvalidArgumentError("gamma must be > 0")

    g = graph.read_graph(args.graph)
    params = _params(args)
    verdict = spectral.threshold_verdict(g, params,
                                         critical_tol=args.critical_tol,
                                         tol=args.tol, max_iter=args.max_iter)
    critical_gamma = spectral.critical_gamma(g, params.beta, tol=args.tol,
                                             max_iter=args.max_iter)

    payload = {"graph": g.summary(), "params": params.to_dict(),
               **verdict.to_dict(),
               "critical_gamma": _finite(critical_gamma)}
    _emit(payload, args.report)
    return EXIT_OK


def run_simulate(args):
    g = graph.read_graph(args.graph)
    params = _params(args)
    init = dynamics.initial_state(g.n, args.init, args.seed)

    summary = dynamics.run_replicates(g, params, init, args.horizon,
                                      args.replicates, args.seed,
                                      workers=args.workers)

    if args.out is not None:
        _write_csv(dynamics.traces_frame(summary.traces), args.out)

    if args.plot is not None:
        from cyberemergence.plots import ensemble_plot

        _save_plot(lambda path: ensemble_plot(
            {"n={}".format(g.n): summary}, show=False, save=True,
            filename=path), args.plot)

    payload = {"graph": g.summary(), "params": params.to_dict(),
               "seed": args.seed, "init": args.init,
               "mean_extinction_step": summary.mean_extinction_step,
               **summary.to_dict()}
    _emit(payload, args.report)
    return EXIT_OK


def run_meanfield(args):
    g = graph.read_graph(args.graph)
    params = _params(args)

    if args.p0 is not None:
        p0 = np.full(g.n, args.p0)
    else:
        p0 = dynamics.initial_state(g.n, args.init, args.seed).as_array()

    trace = dynamics.mean_field_iterate(g, params, p0.astype(float),
                                        args.horizon,
                                        fixed_point_tol=args.fixed_point_tol)

    if args.out is not None:
        _write_csv(trace.to_frame(), args.out)

    if args.plot is not None:
        from cyberemergence.plots import mean_field_plot

        _save_plot(lambda path: mean_field_plot(
            trace, show=False, save=True, filename=path), args.plot)

    payload = {"graph": g.summary(), "params": params.to_dict(),
               **trace.to_dict()}
    _emit(payload, args.report)
    return EXIT_OK


def run_emergence(args):
    if args.gamma == 0:
        raise InvalidArgumentError("gamma must be > 0")

    components, bridge_edges = _components(args)
    sim = emergence.SimulationConfig(horizon=args.horizon,
                                     replicates=args.replicates,
                                     master_seed=args.seed, init=args.init,
                                     workers=args.workers)
    report = emergence.evaluate_emergence(
        components, args.op, _params(args), sim, bridge_edges=bridge_edges,
        critical_tol=args.critical_tol, tol=args.tol, max_iter=args.max_iter)

    if args.plot is not None:
        from cyberemergence.plots import ensemble_plot

        summaries = {"component {}".format(i + 1): c.ensemble
                     for i, c in enumerate(report.components)}
        summaries["composite"] = report.composite.ensemble
        _save_plot(lambda path: ensemble_plot(
            summaries, show=False, save=True, filename=path), args.plot)

    _emit(report.to_dict(), args.report)
    return EXIT_OK


def run_hyperprop_check(args):
    traces = hyperprop.read_traces(args.traces)
    verdict = property_check(args.property)(traces)

    _emit({"property": args.property, "traces": len(traces),
           **verdict.to_dict()}, args.report)
    return EXIT_OK


def run_hyperprop_decompose(args):
    if args.input is not None:
        p = hyperprop.read_property(args.input)
        safe, live = hyperprop.decompose(p)
        payload = {
            "property": hyperprop.property_to_dict(p),
            "is_safety": hyperprop.is_safety(p),
            "is_liveness": hyperprop.is_liveness(p),
            "safe": hyperprop.property_to_dict(safe),
            "live": hyperprop.property_to_dict(live),
            "safe_is_safety": hyperprop.is_safety(safe),
            "live_is_liveness": hyperprop.is_liveness(live),
            "intersection_is_property":
                safe.members & live.members == p.members,
        }
        _emit(payload, args.report)
        return EXIT_OK

    if args.sigma is None or args.len is None:
        raise InvalidArgumentError(
            "decompose needs --input, or --sigma and --len")

    sigma = tuple(s for s in args.sigma.split(",") if s)
    universe = hyperprop.TraceUniverse(sigma, args.len)
    if universe.size > MAX_DECOMPOSE_WORDS:
        raise CapacityError(
            "exhaustive decomposition is capped at {} completed traces, "
            "universe has {}".format(MAX_DECOMPOSE_WORDS, universe.size))

    checked = 0
    failures = []
    for p in hyperprop.all_properties(universe):
        checked += 1
        if not hyperprop.check_decomposition(p):
            failures.append(hyperprop.property_to_dict(p)["members"])

    _emit({"sigma": list(universe.alphabet), "L": universe.horizon,
           "properties": checked, "failures": failures,
           "all_hold": not failures}, args.report)
    return EXIT_OK


def run_hyperprop_witness(args):
    pool = hyperprop.read_traces(args.traces)
    witness = hyperprop.witness_non_trace_property(
        property_check(args.property), pool, max_set_size=args.max_set_size)

    _emit({"property": args.property, "pool": len(set(pool)),
           "witness": None if witness is None else witness.to_dict()},
          args.report)
    return EXIT_OK


# PARSER
def _add_params(parser):
    parser.add_argument("--beta", type=_probability, required=True,
                        help="defense capability: per-node cure probability")
    parser.add_argument("--gamma", type=_probability, required=True,
                        help="attack capability: per-edge compromise "
                             "probability")


def _add_spectral(parser, critical=False):
    parser.add_argument("--tol", type=_positive_float,
                        default=spectral.DEFAULT_TOL,
                        help="power-iteration residual tolerance")
    parser.add_argument("--max-iter", type=_positive_int,
                        default=spectral.DEFAULT_MAX_ITER,
                        help="power-iteration step limit")
    if critical:
        parser.add_argument("--critical-tol", type=_non_negative_float,
                            default=spectral.DEFAULT_CRITICAL_TOL,
                            help="|β/γ - λ1| at or below this is Critical")


def _add_simulation(parser, replicates=True):
    parser.add_argument("--init", type=_init_policy, default="all",
                        help="initially compromised nodes: all, random:<k> "
                             "or nodes:<comma-list>")
    parser.add_argument("--horizon", type=_non_negative_int,
                        default=dynamics.DEFAULT_HORIZON,
                        help="number of time steps")
    parser.add_argument("--seed", type=_seed, default=0,
                        help="master seed")
    if replicates:
        parser.add_argument("--replicates", type=_positive_int,
                            default=dynamics.DEFAULT_REPLICATES,
                            help="number of Monte Carlo replicates")
        parser.add_argument("--workers", type=_positive_int,
                            default=dynamics.DEFAULT_WORKERS,
                            help="worker processes for replicates")


def _add_components(parser):
    parser.add_argument("--components", nargs="+", required=True,
                        metavar="PATH", help="2 or more graph files")
    parser.add_argument("--op", choices=[op.value for op in
                                         emergence.CompositionOp],
                        required=True, help="composition operation")
    parser.add_argument("--bridge-edges", metavar="PATH",
                        help="JSON list of [left-node, right-node] pairs "
                             "(--op bridge)")


def build_parser():
    formatter = argparse.ArgumentDefaultsHelpFormatter
    parser = _Parser(prog="cyberemergence",
                     description="Die-out thresholds, attack-defense "
                                 "dynamics, emergence reports and "
                                 "hyperproperty checks.",
                     formatter_class=formatter)
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--log-level", default="WARNING",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
                        help="stderr logging level")
    commands = parser.add_subparsers(dest="command", metavar="COMMAND",
                                     required=True)

    # graph
    graph_parser = commands.add_parser("graph", help="build graph files",
                                       formatter_class=formatter)
    graph_commands = graph_parser.add_subparsers(dest="graph_command",
                                                 metavar="ACTION",
                                                 required=True)

    gen = graph_commands.add_parser("gen", help="generate a graph",
                                    formatter_class=formatter)
    gen.add_argument("--kind", required=True,
                     choices=["complete", "star", "path", "erdos-renyi"])
    gen.add_argument("--n", type=_positive_int, required=True,
                     help="node count")
    gen.add_argument("--p", type=_probability, default=0.5,
                     help="edge probability (erdos-renyi)")
    gen.add_argument("--seed", type=_seed, default=0,
                     help="generator seed (erdos-renyi)")
    gen.add_argument("--out", help="graph file to write; stdout if omitted")
    gen.set_defaults(handler=run_graph_gen)

    compose = graph_commands.add_parser("compose", help="compose graphs",
                                        formatter_class=formatter)
    _add_components(compose)
    compose.add_argument("--out", help="graph file to write; stdout if "
                                       "omitted")
    compose.set_defaults(handler=run_graph_compose)

    # spectral
    spectral_parser = commands.add_parser("spectral",
                                          help="spectral radius λ1",
                                          formatter_class=formatter)
    spectral_parser.add_argument("--graph", required=True)
    _add_spectral(spectral_parser)
    spectral_parser.add_argument("--report", help="JSON report path")
    spectral_parser.set_defaults(handler=run_spectral)

    # threshold
    threshold = commands.add_parser("threshold",
                                    help="λ1 against β/γ",
                                    formatter_class=formatter)
    threshold.add_argument("--graph", required=True)
    _add_params(threshold)
    _add_spectral(threshold, critical=True)
    threshold.add_argument("--report", help="JSON report path")
    threshold.set_defaults(handler=run_threshold)

    # simulate
    simulate = commands.add_parser("simulate",
                                   help="Monte Carlo dynamics",
                                   formatter_class=formatter)
    simulate.add_argument("--graph", required=True)
    _add_params(simulate)
    _add_simulation(simulate)
    simulate.add_argument("--out", help="time-series CSV path")
    simulate.add_argument("--report", help="JSON report path")
    simulate.add_argument("--plot", help="PNG of the mean compromised "
                                         "fraction")
    simulate.set_defaults(handler=run_simulate)

    # meanfield
    meanfield = commands.add_parser("meanfield",
                                    help="mean-field iteration",
                                    formatter_class=formatter)
    meanfield.add_argument("--graph", required=True)
    _add_params(meanfield)
    _add_simulation(meanfield, replicates=False)
    meanfield.add_argument("--p0", type=_probability,
                           help="uniform initial probability; overrides "
                                "--init")
    meanfield.add_argument("--fixed-point-tol", type=_positive_float,
                           default=dynamics.DEFAULT_FIXED_POINT_TOL,
                           help="stop when no probability moves more")
    meanfield.add_argument("--out", help="time-series CSV path")
    meanfield.add_argument("--report", help="JSON report path")
    meanfield.add_argument("--plot", help="PNG of the total infection")
    meanfield.set_defaults(handler=run_meanfield)

    # emergence
    emergence_parser = commands.add_parser(
        "emergence", help="component vs composite verdicts",
        formatter_class=formatter)
    _add_components(emergence_parser)
    _add_params(emergence_parser)
    _add_simulation(emergence_parser)
    _add_spectral(emergence_parser, critical=True)
    emergence_parser.add_argument("--report", help="JSON report path")
    emergence_parser.add_argument("--plot", help="PNG of the mean "
                                                 "compromised fractions")
    emergence_parser.set_defaults(handler=run_emergence)

    # hyperprop
    hyper_parser = commands.add_parser("hyperprop",
                                       help="trace-set properties",
                                       formatter_class=formatter)
    hyper_commands = hyper_parser.add_subparsers(dest="hyper_command",
                                                 metavar="ACTION",
                                                 required=True)

    check = hyper_commands.add_parser("check", help="check a trace set",
                                      formatter_class=formatter)
    check.add_argument("--traces", required=True)
    check.add_argument("--property", type=_property, required=True,
                       help="avg-rt:<bound>, noninterference or "
                            "pointwise:max-rt:<bound>")
    check.add_argument("--report", help="JSON report path")
    check.set_defaults(handler=run_hyperprop_check)

    decompose = hyper_commands.add_parser(
        "decompose", help="safety/liveness decomposition",
        formatter_class=formatter)
    decompose.add_argument("--input", help="property file")
    decompose.add_argument("--sigma", help="comma-separated alphabet for "
                                           "the exhaustive check")
    decompose.add_argument("--len", type=_positive_int,
                           help="trace length L for the exhaustive check")
    decompose.add_argument("--report", help="JSON report path")
    decompose.set_defaults(handler=run_hyperprop_decompose)

    witness = hyper_commands.add_parser(
        "witness", help="search for a non-trace-property witness",
        formatter_class=formatter)
    witness.add_argument("--traces", required=True, help="candidate pool")
    witness.add_argument("--property", type=_property, required=True,
                         help="avg-rt:<bound>, noninterference or "
                              "pointwise:max-rt:<bound>")
    witness.add_argument("--max-set-size", type=_positive_int,
                         default=hyperprop.MAX_SET_SIZE,
                         help="largest candidate set")
    witness.add_argument("--report", help="JSON report path")
    witness.set_defaults(handler=run_hyperprop_witness)

    return parser


def _configure_logging(level):
    logger.remove()
    logger.add(sys.stderr, level=level, format="{level}: {message}")
    logger.enable("cyberemergence")


def main(argv=None):
    parser = build_parser()

    try:
        args = parser.parse_args(argv)
        _configure_logging(args.log_level)
        return args.handler(args)
    except SystemExit as e:
        # --help and --version
        return e.code if isinstance(e.code, int) else EXIT_OK
    except ConvergenceError as e:
        print("error: {}: {}".format(e.category, e), file=sys.stderr)
        return EXIT_NUMERIC
    except CyberEmergenceError as e:
        print("error: {}: {}".format(e.category, e), file=sys.stderr)
        return EXIT_INVALID
    except OSError as e:
        print("error: io-error: {}".format(e), file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
