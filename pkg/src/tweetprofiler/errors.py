"""Exception hierarchy shared across the package.

Every exception carries an ``exit_code`` so the CLI can map failures onto its
documented exit codes: 1 usage, 2 data error, 3 numeric/convergence error.
"""


class TweetProfilerError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 2


class UsageError(TweetProfilerError):
    """Bad invocation: missing arguments, impossible option combinations."""

    exit_code = 1


class ParameterError(UsageError):
    """A parameter value is outside its valid range (e.g. min_df < 1)."""


class DataError(TweetProfilerError):
    """Input data cannot be parsed or is internally inconsistent."""

    exit_code = 2


class CorpusParseError(DataError):
    """An author XML file is not well-formed."""


class CorpusSchemaError(DataError):
    """An author XML file parses but does not match the expected schema."""


class TruthFormatError(DataError):
    """A truth file line does not have the expected field layout."""


class LabelValueError(DataError):
    """A label field holds a value outside its allowed set."""


class ConsistencyError(DataError):
    """Corpus pieces do not line up (dangling labels, duplicate ids, ...)."""


class EmptyVocabularyError(DataError):
    """The min-document-frequency gate pruned every term."""


class StratificationError(DataError):
    """A class is too small to be spread over the requested folds."""


class ShapeError(DataError):
    """Dimension mismatch between vectors, matrices or label lists."""


class ModelFormatError(DataError):
    """A model file is malformed or has an unsupported version."""


class NumericError(TweetProfilerError):
    """Numeric failure during training or evaluation."""

    exit_code = 3


class DegenerateTrainingError(NumericError):
    """Training input cannot produce a classifier (e.g. a single class)."""


class UndefinedMetricError(NumericError):
    """A metric is undefined for the given input (e.g. empty truth list)."""
