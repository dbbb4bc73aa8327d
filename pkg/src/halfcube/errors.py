"""Exception hierarchy shared by all modules.

Every domain failure derives from DomainError so the CLI can map it to
exit code 1 without special cases.
"""


class DomainError(Exception):
    """Base class for all anticipated failures."""


class ParityError(DomainError):
    """Word parity does not match the graph's vertex class."""


class MalformedFaceError(DomainError):
    """Face anchor overlaps the free mask, or the host is not a halved cube."""


class NotStochasticError(DomainError):
    """Matrix rows do not share a common sum."""


class ShapeError(DomainError):
    """Matrix or vector has the wrong shape or parametric form."""


class NoPreimageError(DomainError):
    """Matrix is not in the image of the minimum-eigenvalue correspondence."""


class DegenerateCellError(DomainError):
    """A declared cell is empty."""


class NotEquitableError(DomainError):
    """Verification failed; carries the offending witness when available."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class EmptyCodeError(DomainError):
    """Code has no words."""


class GraphMismatchError(DomainError):
    """Two objects live on different graphs."""


class RadiusError(DomainError):
    """Covering radius differs from the one the construction requires."""


class TranslateCollisionError(DomainError):
    """Translated codes are closer than the construction allows."""


class FormError(DomainError):
    """Parity-check matrix is not of the required form."""


class BoundError(DomainError):
    """Coset count outside the allowed range."""


class DuplicateCosetError(DomainError):
    """Two representatives name the same coset."""


class CellOverlapError(DomainError):
    """First cells of the two partitions intersect."""


class EigenvalueMismatchError(DomainError):
    """Quotient matrices are not cospectral, or have the wrong eigenvalue."""


class MergeConditionError(DomainError):
    """Face dimension does not satisfy the merge identity."""


class FaceCoverError(DomainError):
    """Faces do not cover the target cell exactly."""
