"""Exception hierarchy shared by every module of the package."""


class HajosError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(HajosError, ValueError):
    """An integer argument is outside the range an operation accepts."""


class UnknownVertexError(HajosError, KeyError):
    def __init__(self, label):
        super().__init__(label)
        self.label = label

    def __str__(self):
        return f"unknown vertex {self.label}"


class MissingArcError(HajosError, KeyError):
    def __init__(self, tail, head):
        super().__init__((tail, head))
        self.arc = (tail, head)

    def __str__(self):
        return f"missing arc ({self.arc[0]}, {self.arc[1]})"


class InvalidDigraphError(HajosError, ValueError):
    """Loops, negative labels or dangling arc endpoints."""


class DependentSetError(HajosError, ValueError):
    """A set passed to an identification contains two adjacent vertices."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class LabelError(HajosError, ValueError):
    """A requested label is not usable (wrong target, negative result, ...)."""


class LabelCollisionError(HajosError, ValueError):
    """Operands of a join share vertex labels."""


class CyclicSpecError(HajosError, ValueError):
    """Parameters of a cyclic identification violate its side conditions."""


class ShapeError(HajosError, ValueError):
    """A construction stage received or produced an unexpected digraph."""


class TraceSyntaxError(HajosError, ValueError):
    def __init__(self, message, lineno):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class TraceSemanticError(HajosError, ValueError):
    def __init__(self, message, step=None):
        prefix = f"step {step}: " if step is not None else ""
        super().__init__(prefix + message)
        self.step = step


class ReplayError(HajosError):
    """A trace step failed while being replayed."""

    def __init__(self, step, cause):
        super().__init__(f"step {step}: {cause}")
        self.step = step
        self.cause = cause


class VerificationError(HajosError):
    """Replay succeeded but the result contradicts the trace's declarations."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class SizeLimitError(HajosError):
    """The brute-force oracle refused a digraph above its vertex limit."""


class NoColoringError(HajosError):
    """No acyclic coloring exists within the requested number of colors."""
