"""Exception hierarchy shared across the package.

Validation problems (bad files, bad configs, bad shapes) raise
:class:`ValidationError` subclasses; structurally impossible requests
(no feasible pairing, degenerate strata) raise
:class:`InfeasibilityError` subclasses.  The CLI maps the former to
exit code 1 and the latter to exit code 2.
"""


class QuadmatchError(Exception):
    """Base class for all package errors."""


class ValidationError(QuadmatchError):
    """Input data, schema, or configuration is invalid."""


class InfeasibilityError(QuadmatchError):
    """The requested design or estimate does not exist for these inputs."""


# --- data-model -----------------------------------------------------------

class MissingColumn(ValidationError):
    pass


class NonFiniteValue(ValidationError):
    pass


class DuplicateId(ValidationError):
    pass


class MissingOutcome(ValidationError):
    pass


# --- distances ------------------------------------------------------------

class SingularCovariance(ValidationError):
    pass


class BothAlignmentsInfeasible(InfeasibilityError):
    pass


# --- matching solver ------------------------------------------------------

class OddVertexCount(ValidationError):
    pass


class ParityViolation(ValidationError):
    pass


class InfeasibleMatch(InfeasibilityError):
    pass


class TooFewUnits(ValidationError):
    pass


class TooLarge(ValidationError):
    pass


# --- estimation -----------------------------------------------------------

class DegenerateStratum(InfeasibilityError):
    pass


class RankDeficientQ(ValidationError):
    pass


class LeverageOne(InfeasibilityError):
    pass


class TooFewStrata(ValidationError):
    pass


# --- randomization tests --------------------------------------------------

class ExactTooLarge(ValidationError):
    pass


class EmptyGrid(ValidationError):
    pass


# --- example bundle -------------------------------------------------------

class ChecksumMismatch(QuadmatchError):
    pass
