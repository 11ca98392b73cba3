"""Exception taxonomy shared across the toolkit.

Errors are grouped so the command line surface can map them to exit
codes: configuration problems, data problems, and statistical
degeneracies discovered while fitting.
"""

from __future__ import annotations


class ModelSetsError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(ModelSetsError):
    """Invalid configuration (bad field values, inconsistent shapes)."""


class DataError(ModelSetsError):
    """Problems with an input dataset (files, columns, cell values)."""


class StatisticalError(ModelSetsError):
    """A fit or test is undefined or degenerate on the given data."""


# -- configuration ---------------------------------------------------------

class InvalidConfigError(ConfigError):
    pass


class InvalidDfError(ConfigError):
    """Degrees-of-freedom parameter is not positive."""


# -- data ingestion --------------------------------------------------------

class MissingColumnError(DataError):
    pass


class MissingValueError(DataError):
    pass


class NonNumericError(DataError):
    pass


class ColumnMissingError(DataError):
    """A referenced variable id is outside the design matrix."""


# -- fitting ---------------------------------------------------------------

class DimensionMismatchError(StatisticalError):
    pass


class RankDeficientError(StatisticalError):
    """Design columns are collinear beyond tolerance."""


class SeparationError(StatisticalError):
    """Logistic likelihood is unbounded (perfectly separated classes)."""


class NoVariationError(StatisticalError):
    """Binary response contains a single class."""


class NoEventsError(StatisticalError):
    """Survival data contains no observed events."""


class MonotoneLikelihoodError(StatisticalError):
    """Partial likelihood is maximized at infinite coefficients."""


# -- testing ---------------------------------------------------------------

class NotNestedError(StatisticalError):
    """The submodel is not nested in the comprehensive model."""


class InsufficientResidualDfError(StatisticalError):
    """No residual degrees of freedom for the comparison."""


class SampleTooSmallError(StatisticalError):
    """Too few rows to fit the requested model."""


# -- reduction / exploration / selection -----------------------------------

class TooFewIndicesError(ConfigError):
    """A hypercube arrangement needs at least two variable indices."""


class EmptyRetentionError(StatisticalError):
    """A reduction stage retained zero variables.

    The partial trace is attached so the caller can inspect the stages
    that did run and relax the decision rules.
    """

    def __init__(self, message: str, trace=None):
        super().__init__(message)
        self.trace = trace


class DecisionSourceClosedError(ModelSetsError):
    """The interactive decision session ended before all candidates
    were decided.  Decisions made so far are attached."""

    def __init__(self, message: str, partial_decisions=None):
        super().__init__(message)
        self.partial_decisions = dict(partial_decisions or {})


class TargetUnreachableError(StatisticalError):
    """The lasso path never reaches the requested variable count."""


# -- session protocol ------------------------------------------------------

class SessionError(ModelSetsError):
    pass


class UnknownCandidateError(SessionError):
    pass


class AlreadyFinalizedError(SessionError):
    pass


class BadTokenError(SessionError):
    pass
