"""Exception types shared across the package."""


class GaitError(Exception):
    """Base class for all gaitbench errors."""


class InvalidTrial(GaitError):
    """Trial input is structurally broken (empty signals, bad rate, non-finite forces)."""


class InvalidPatientMeta(GaitError):
    """Patient metadata violates its constraints (mass/height must be positive, age >= 0)."""


class DegenerateSegment(GaitError):
    """Step segment too short to resample."""


class NoSteps(GaitError):
    """No usable step segments were found."""


class NotFound(GaitError):
    """Unknown category or parameter id."""


class Duplicate(GaitError):
    """Patient id already present in the target category."""


class InvalidRange(GaitError):
    """Range with min > max."""


class InvalidEpsilon(GaitError):
    """Matching epsilon must be positive."""


class EmptyDistribution(GaitError):
    """Statistic requested over an empty distribution."""


class PersistenceError(GaitError):
    """Store file missing, unreadable, or corrupt."""


class VersionError(GaitError):
    """Store file carries an unsupported schema version."""
