"""Exception hierarchy shared across the package.

Two branches matter for the CLI exit codes: ``InputError`` (bad files,
bad configuration, missing coverage) and ``NumericalError`` (rank
deficiency, separation, non-convergence).
"""


class ArgStrengthError(Exception):
    """Base class for all package errors."""


class InputError(ArgStrengthError):
    """Malformed or inconsistent input data or configuration."""


class CorpusFormatError(InputError):
    """A corpus record failed validation; carries file position context."""

    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        prefix = ""
        if line is not None:
            prefix += f"line {line}: "
        if field is not None:
            prefix += f"field '{field}': "
        super().__init__(prefix + message)


class DuplicateIdError(InputError):
    def __init__(self, argument_id):
        self.argument_id = argument_id
        super().__init__(f"duplicate argument id: {argument_id!r}")


class LexiconError(InputError):
    """Bad lexicon file or unregistered rule id."""


class ParseSourceError(InputError):
    """Missing or unusable parse for an argument."""


class CoverageError(InputError):
    """Prediction sets or feature maps do not cover the required ids."""

    def __init__(self, message, missing_ids=()):
        self.missing_ids = tuple(missing_ids)
        if self.missing_ids:
            shown = ", ".join(sorted(self.missing_ids)[:10])
            more = len(self.missing_ids) - min(len(self.missing_ids), 10)
            message += f" (missing: {shown}" + (f" and {more} more)" if more else ")")
        super().__init__(message)


class UnknownFeatureError(InputError):
    """An IV name that is not available in the assembled feature set."""


class NumericalError(ArgStrengthError):
    """Model fitting failed for numerical reasons."""


class RankDeficiencyError(NumericalError):
    def __init__(self, columns):
        self.columns = tuple(columns)
        super().__init__(
            "design matrix is rank deficient; collinear columns: "
            + ", ".join(self.columns)
        )


class SeparationError(NumericalError):
    """Logistic likelihood is unbounded (perfectly separable data)."""
