from constants import EXIT_COMPARISON, EXIT_NUMERIC, EXIT_VALIDATION


def _restore(cls, state):
    error = Exception.__new__(cls)
    error.__dict__.update(state)
    return error


class CustomError(Exception):
    exit_code = EXIT_VALIDATION

    def __init__(self, message=None, status=None, payload=None):
        Exception.__init__(self)
        self.message = message
        self.status = status
        self.payload = payload

    def __str__(self):
        return f'{self.message} {self.status}'

    def to_dict(self):
        rv = dict(self.payload or ())
        rv.update({"message": self.message, "status": self.status})
        return rv

    def __reduce__(self):
        # errors cross process-pool boundaries
        return _restore, (self.__class__, self.__dict__)


class ValidationError(CustomError):
    def __init__(self, message="The input is invalid.", payload=None):
        CustomError.__init__(self, message, 400, payload)


class ConfigFileError(ValidationError):
    def __init__(self, message, path=None, line=None, key=None):
        location = f"{path}:{line}" if line is not None else str(path)
        ValidationError.__init__(self, f"{location}: {message}",
                                 payload={"path": str(path), "line": line, "key": key})


class NumericalError(CustomError):
    exit_code = EXIT_NUMERIC

    def __init__(self, message="Numerical evaluation failed.", payload=None):
        CustomError.__init__(self, message, 422, payload)


class ConvergenceError(NumericalError):
    def __init__(self, message, estimate=None, error_bound=None, evaluations=None, dimension=None):
        NumericalError.__init__(self, message, payload={
            "estimate": estimate,
            "error_bound": error_bound,
            "evaluations": evaluations,
            "dimension": dimension,
        })
        self.estimate = estimate
        self.error_bound = error_bound
        self.evaluations = evaluations
        self.dimension = dimension


class SweepError(CustomError):
    def __init__(self, cause, axis_value, scheme, method):
        payload = dict(cause.payload or ()) if isinstance(cause, CustomError) else {}
        payload.update({"axis_value": axis_value, "scheme": scheme, "method": method})
        message = f"sweep aborted at {method}/{scheme}, axis value {axis_value}: " \
                  f"{getattr(cause, 'message', None) or cause}"
        CustomError.__init__(self, message, getattr(cause, 'status', None) or 500, payload)
        self.cause = cause
        self.exit_code = getattr(cause, 'exit_code', EXIT_NUMERIC)


class ComparisonFailed(CustomError):
    exit_code = EXIT_COMPARISON

    def __init__(self, message="Analytic and simulated values disagree.", payload=None):
        CustomError.__init__(self, message, 409, payload)
