"""Exception hierarchy shared by every module of the package."""


class MrmError(Exception):
    """Base class for all errors raised by mrmlearn."""


class UnknownObservation(MrmError, KeyError):
    pass


class UnknownNode(MrmError, KeyError):
    pass


class AlphabetMismatch(MrmError, ValueError):
    pass


class MalformedHistory(MrmError, ValueError):
    pass


class MalformedTrace(MrmError, ValueError):
    pass


class EmptyTrace(MrmError, ValueError):
    pass


class EmptyAlphabet(MrmError, ValueError):
    pass


class LengthMismatch(MrmError, ValueError):
    pass


class TableIncomplete(MrmError, RuntimeError):
    pass


class NotACounterexample(MrmError, ValueError):
    pass


class UndefinedAction(MrmError, KeyError):
    pass


class InvalidModel(MrmError, ValueError):
    """Raised when an MDP fails validation (probabilities, initial state...)."""


class InvalidGamma(MrmError, ValueError):
    pass


class EmptyModel(MrmError, ValueError):
    pass


class IterationLimit(MrmError, RuntimeError):
    pass


class PartialStrategy(MrmError, ValueError):
    pass


class InvalidApf(MrmError, ValueError):
    pass


class ConfigError(MrmError, ValueError):
    pass


class ModelParseError(MrmError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line

    def __str__(self):
        return self.args[0]
