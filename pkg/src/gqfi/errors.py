"""Exception hierarchy.

Every numerical failure raised by the library derives from
:class:`GqfiError`, so callers (and the CLI) can map them to one exit code
while still reporting the specific class name.
"""


class GqfiError(Exception):
    """Base class for all library errors."""


class NonPsdM(GqfiError):
    """The measurement matrix L^dagger L is not positive semidefinite."""


class UncertaintyViolation(GqfiError):
    """A covariance matrix violates Gamma + i sigma / 2 >= 0."""


class SingularCovariance(GqfiError):
    """A linear solve against the covariance matrix failed."""


class DefectiveDrift(GqfiError):
    """The drift matrix is not diagonalizable to working precision."""


class WrongClass(GqfiError):
    """An operation was called for the wrong dynamics class."""


class DegenerateGap(GqfiError):
    """Two distinct oscillation frequencies coincide within tolerance."""


class WrongBlockStructure(GqfiError):
    """The model is not block diagonal in position and momentum."""


class AllGapsDegenerate(GqfiError):
    """Every oscillatory covariance term has vanishing weight."""


class InvalidHopping(GqfiError):
    """Hopping amplitudes with t_R * t_L <= 0."""


class PtBroken(GqfiError):
    """Nonreciprocal chain outside K > gamma |sin dphi|."""


class UnstableModel(GqfiError):
    """A builder produced a model with growing drift modes."""


class CutoffExceeded(GqfiError):
    """Population leaked into the top Fock levels."""


class IllConditioned(GqfiError):
    """A finite-difference fidelity is outside its usable range."""


class ConfigError(GqfiError):
    """A run configuration is malformed."""
