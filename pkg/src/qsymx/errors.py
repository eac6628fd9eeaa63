"""Exception hierarchy. Every error raised on purpose by the library derives
from :class:`QsymxError`, so callers (the CLI in particular) can tell a
detected mathematical fault apart from an ordinary bug."""


class QsymxError(Exception):
    pass


class UnsupportedTypeError(QsymxError, ValueError):
    pass


class WeightError(QsymxError, ValueError):
    """Bad weight: wrong rank, or not dominant where dominance is required."""


class RelationError(QsymxError):
    """Generator matrices violate the defining relations beyond tolerance."""


class FormError(QsymxError):
    """No positive-definite invariant form, or an operator is not self-adjoint."""


class ClosureError(QsymxError):
    """A cyclic closure or isotypic decomposition has the wrong dimension."""


class ConventionError(QsymxError):
    """The R-matrix fails the intertwiner test in every product order tried."""


class PathDisagreementError(QsymxError):
    pass


class RankAmbiguityError(QsymxError):
    """A singular value sits too close to the rank cutoff to decide the rank."""


class PeelingError(QsymxError):
    """Character peeling hit a negative multiplicity: the multiset is corrupt."""
