from typing import Any, Optional, Sequence


class ZOProxException(Exception):
    """Raised when an error is caused by the problem, data or configuration handed to the library."""

    def __init__(self, *reasons: str, trace: Optional[str] = None):
        super().__init__(*reasons, trace)
        self.reason = "\n".join(reasons)
        self.trace = trace

    def __str__(self):
        if self.trace is None:
            return self.reason
        return f"{self.reason}\n{self.trace}"


class InternalZOProxException(Exception):
    """Raised when an internal library error occurs, should not happen."""
    pass


class InvalidArgumentException(ZOProxException, ValueError):
    """A precondition on an argument does not hold."""
    pass


class OracleException(ZOProxException):
    """A component oracle was queried badly or returned garbage."""
    pass


class UnsupportedModeException(ZOProxException):
    """White-box access was requested where none is available or allowed."""
    pass


class ConfigException(ZOProxException):
    """Configuration failed validation.

    :fields: names of every offending field.
    """

    def __init__(self, *reasons: str, fields: Sequence[str] = ()):
        super().__init__(*reasons)
        self.fields = list(fields)


class DivergenceException(ZOProxException):
    """A solver produced a non-finite or runaway iterate.

    :checkpoint: the last finite checkpoint recorded before the abort.
    :run: the partial trace up to the abort.
    :stage: reduction stage the inner solver was running, if any.
    """

    def __init__(self, reason: str, *, checkpoint: Any = None, run: Any = None,
                 stage: Optional[int] = None):
        super().__init__(reason)
        self.checkpoint = checkpoint
        self.run = run
        self.stage = stage

    def __str__(self):
        where = "" if self.stage is None else f" (stage {self.stage})"
        last = "" if self.checkpoint is None else f"\nlast finite checkpoint: {self.checkpoint}"
        return f"{self.reason}{where}{last}"


class ConvergenceException(ZOProxException):
    """A subproblem did not reach the requested accuracy."""

    def __init__(self, reason: str, *, residual: float):
        super().__init__(f"{reason} (residual {residual:.3e})")
        self.residual = residual


class UnattainableContractionException(ZOProxException):
    """An inner solver budget can not reach the contraction target."""
    pass


class LibsvmParseException(ZOProxException):
    """Raised for malformed LIBSVM input.

    :line: 1-based line number of the offending line.
    :token: the offending token.
    :column: 0-based column of the token in the line, when known.
    """

    def __init__(self, reason: str, *, line: int, token: str, text: Optional[str] = None,
                 column: Optional[int] = None):
        super().__init__(f"line {line}: {reason} (token {token!r})", trace=text)
        self.line = line
        self.token = token
        self.column = column


class MismatchException(ZOProxException):
    """Two trace directories do not describe the same problem."""
    pass
