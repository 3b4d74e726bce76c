"""Exception hierarchy shared by all workbench modules."""


class WorkbenchError(Exception):
    """Base class for every error raised by this package."""


class InvariantError(WorkbenchError):
    """A structural invariant of a domain type is violated; the message names it."""


class SchemaError(WorkbenchError):
    """An input file does not match its schema; the message carries the JSON path."""


class DegenerateOrbit(WorkbenchError):
    """A return-map eigenvalue is too close to 1 for the orbit index to be defined."""


class MissingTrace(WorkbenchError):
    """A trace-sequence holonomy was asked for a power it does not store."""


class IndexOutOfRange(WorkbenchError):
    """Exterior-power index exceeds the number of eigenvalues."""


class BadDimension(WorkbenchError):
    """Dimension is not an odd integer >= 3, or rotation-angle count mismatches."""


class ConvergenceDomain(WorkbenchError):
    """Evaluation point lies outside the guaranteed convergence region."""


class Diverging(WorkbenchError):
    """Re(s) is at or below the estimated abscissa of the orbit series."""


class SingularFactor(WorkbenchError):
    """Some Euler factor has |e^{-s l}| >= 1, so its log expansion is invalid."""


class MissingPoincare(WorkbenchError):
    """An orbit lacks the unstable return-map data the operation needs."""


class PoleAtZero(WorkbenchError):
    """The closed form for the regularized sum vanishes or diverges at s = 0."""


class PoleHit(WorkbenchError):
    """Spectral zeta evaluated at (or too close to) one of its poles."""


class BranchCut(WorkbenchError):
    """A shifted eigenvalue landed on the logarithm's cut (-inf, 0]."""


class UnsupportedModel(WorkbenchError):
    """The spectrum/holonomy data is outside the class this operation handles."""


class FitFailure(WorkbenchError):
    """No polynomial up to the maximal degree meets the residual threshold."""


class ZeroMode(WorkbenchError):
    """A spectrum contains a nonpositive eigenvalue; determinants need it removed."""


class NonAcyclic(WorkbenchError):
    """The twist parameter is integral, so the model has a zero mode."""
