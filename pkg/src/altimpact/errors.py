"""Exception types shared across the pipeline stages."""


class AltimpactError(Exception):
    """Base class for all package-specific errors."""


class MalformedCsv(AltimpactError):
    """The sample CSV is missing its header or a required column."""


class DuplicateLocalId(AltimpactError):
    """Two sample rows share the same local identifier."""


class ResolutionFailed(AltimpactError):
    """The metadata resolver found no DOI for a record."""


class ResolverUnavailable(AltimpactError):
    """The metadata resolver could not be reached; retryable."""


class BackendError(AltimpactError):
    """An indicator backend failed for one DOI (transport or parse)."""


class DuplicateObservation(AltimpactError):
    """The same (doi, category, metric, source) was observed twice with
    different values."""


class UnknownArticle(AltimpactError):
    """The requested DOI is not present in the knowledge graph."""


class DegenerateDistribution(AltimpactError):
    """Statistic undefined: fewer than two values, or all values equal."""


class InvalidBandwidth(AltimpactError):
    """A kernel density bandwidth must be strictly positive."""


class LengthMismatch(AltimpactError):
    """Paired vectors have different lengths."""


class ConstantVector(AltimpactError):
    """Correlation is undefined for a constant vector."""


class EmptyInput(AltimpactError):
    """An operation requiring at least one value received none."""


class EmptyIndicatorSet(AltimpactError):
    """A composite score needs at least one category."""


class UnknownCategory(AltimpactError):
    """A category name is not part of the indicator hierarchy."""


class WrongItemCount(AltimpactError):
    """A quality checklist must contain exactly 22 items."""


class DoiMismatch(AltimpactError):
    """Checklists being merged refer to different DOIs."""


class MissingKg(AltimpactError):
    """A command requires a harvested knowledge graph that is absent."""


class MissingSelections(AltimpactError):
    """The assessment stage requires selection results."""


class MissingChecklists(AltimpactError):
    """The assessment stage requires a checklist file."""


class IoError(AltimpactError):
    """A file could not be read or written."""
