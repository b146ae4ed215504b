"""Exception types shared across the package."""


class BogographError(Exception):
    """Base class for all errors raised by this package."""


class GraphValidationError(BogographError):
    """A multigraph or polarized graph violates a structural invariant."""


class NonEffectiveCanonicalDivisor(GraphValidationError):
    """Some vertex has 2*q(p) + valence(p) - 2 < 0."""


class LoopContraction(BogographError):
    """Contracting a loop edge is undefined."""


class SameVertex(BogographError):
    """Fusing a vertex with itself is undefined."""


class ArityMismatch(BogographError):
    """Polynomial operands disagree on the number of variables."""


class OutOfRange(BogographError):
    """Index argument outside its allowed range."""


class GenusTooSmall(BogographError):
    """The requested invariant needs a larger genus."""


class GenusTooLarge(BogographError):
    """Catalog enumeration refused beyond the configured genus limit."""


class SingularSystem(BogographError):
    """Reduced Laplacian solve failed; impossible for a connected graph."""


class NumericLengthsRequired(BogographError):
    """The operation needs every edge length to be a rational number."""


class SymbolicLengthsRequired(BogographError):
    """The operation needs every edge length to be a symbolic variable."""


class NotAPointedSummand(BogographError):
    """Subgraph complement does not attach at single points."""


class NotCanonicalCubic(BogographError):
    """Graph is not a canonical cubic model (3-regular, loopless,
    2-connected, 2g-2 vertices, q identically zero)."""


class UnsupportedGenus(BogographError):
    """Certified constants only exist for genus 2..4 (conjectural beyond)."""


class BadDeltaIndex(BogographError):
    """Node-type index outside [0, g/2]."""


class TwoRouteMismatch(BogographError):
    """The two independent formulas for phi disagreed (internal check)."""


class ParseError(BogographError):
    """Malformed graph JSON."""
