"""Exception types shared across the package."""


class TlnfpError(Exception):
    """Base class for errors raised by this package."""


class DegeneracyError(TlnfpError):
    """A pinned quantity is exactly zero: the network sits on a
    classification wall (tied edge sign, singular restricted system,
    vanishing basis determinant) and cannot be classified."""


class VertexAtInfinityError(DegeneracyError):
    """The requested vertex lies on the plane at infinity; its cocircuit
    has no finite sign convention and is rejected."""


class PinnedFlipError(TlnfpError):
    """The requested sign flip is forced by the model class and graph and
    cannot be realized by admissible parameter changes."""


class SearchBudgetError(TlnfpError):
    """A randomized search exhausted its evaluation budget."""


class DivergenceError(TlnfpError):
    """Numerical integration produced a non-finite state."""
