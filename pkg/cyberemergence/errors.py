"""Exceptions raised by the library, each tagged with a CLI category."""


class CyberEmergenceError(Exception):
    category = "error"


class InvalidArgumentError(CyberEmergenceError, ValueError):
    category = "invalid-argument"


class CapacityError(CyberEmergenceError, ValueError):
    category = "capacity-error"


class ParseError(CyberEmergenceError, ValueError):
    category = "parse-error"

    def __init__(self, message, path=None, line=None, field=None):
        self.path = path
        self.line = line
        self.field = field

        where = []
        if path is not None:
            where.append(str(path))
        if line is not None:
            where.append("line {}".format(line))
        if field is not None:
            where.append("field '{}'".format(field))

        if where:
            message = "{} ({})".format(message, ", ".join(where))
        super().__init__(message)


class ConvergenceError(CyberEmergenceError, ArithmeticError):
    category = "convergence-error"

    def __init__(self, message, last_iterate=None, residual=None,
                 iterations=None):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.residual = residual
        self.iterations = iterations
