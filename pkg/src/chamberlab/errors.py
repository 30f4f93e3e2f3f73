"""Exception hierarchy shared by all chamberlab modules."""


class ChamberlabError(Exception):
    """Base class for all errors raised by chamberlab."""


class ParseError(ChamberlabError):
    """Malformed input document (diagram or incidence file)."""


class ValidationError(ChamberlabError):
    """Structurally valid document describing an invalid object."""


class NotSpherical(ChamberlabError):
    """An operation requiring a finite standard subgroup got an infinite one."""


class RankError(ChamberlabError):
    """Residue of the wrong rank for the requested operation."""


class ResourceLimit(ChamberlabError):
    """An enumeration exceeded its configured element cap."""


class SameWall(ChamberlabError):
    """Two roots with the same wall where distinct walls are required."""


class NoSharedResidue(ChamberlabError):
    """No common rank-2 wall residue found within the search ball."""


class NotAdjacent(ChamberlabError):
    """Consecutive panels of a path are not opposite in any rank-2 residue."""


class BudgetExceeded(ChamberlabError):
    """A bounded search ran out of budget before deciding (distinct from 'absent')."""


class PreconditionFailed(ChamberlabError):
    """A documented operation precondition does not hold for the arguments."""


class NotReflection(ChamberlabError):
    """An element that is not an involution conjugate to a generator."""


class BallInconclusive(ChamberlabError):
    """A ball-bounded semi-decision could not decide within the given radius."""


class HypothesisError(ChamberlabError):
    """The ambient Coxeter system fails a theorem hypothesis; refusing to answer."""


class ConstructionError(ChamberlabError):
    """A geometric construction did not produce the object it promises."""


class LemmaViolation(ChamberlabError):
    """A verified lemma failed on concrete data.  Carries a witness payload."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness if witness is not None else {}


class TheoremViolation(LemmaViolation):
    """A verified theorem failed on concrete data.  Carries a witness payload."""
