"""Exception types shared across the toolkit."""


class UlsaError(Exception):
    """Base class for all toolkit errors."""


class ParseError(UlsaError):
    """Input file is syntactically malformed (bad JSON, bad header, ...)."""


class SchemaError(UlsaError):
    """A record is structurally valid but violates the dataset schema."""

    def __init__(self, message: str, record_index: int | None = None):
        self.record_index = record_index
        if record_index is not None:
            message = f"record {record_index}: {message}"
        super().__init__(message)


class InvalidRatio(UlsaError):
    """Dataset split ratios do not sum to 1."""


class EmptyCorpus(UlsaError):
    """No sentences available to build a vocabulary or train on."""


class EmptyTrainingSet(UlsaError):
    """Tagger training received no sentences."""


class NonFiniteLoss(UlsaError):
    """Training produced NaN or infinite loss; aborted with diagnostics."""


class ZeroVector(UlsaError):
    """Cosine similarity of a zero-length vector is undefined."""


class LengthMismatch(UlsaError):
    """Prediction and gold tag sequences are not aligned."""


class DegenerateInput(UlsaError):
    """Not enough data for the requested analysis (e.g. PCA on < 2 rows)."""


class DegenerateClass(UlsaError):
    """A class has too few distinct points for a line fit."""


class DegenerateChance(UlsaError):
    """Chance agreement is 1 with imperfect observed agreement; kappa undefined."""


class CheckpointError(UlsaError):
    """Model checkpoint is unreadable or has an unsupported version."""
