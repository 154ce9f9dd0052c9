"""Exception types shared across the package."""


class SenseShiftError(Exception):
    """Base class for all errors raised by this package."""


class StoreError(SenseShiftError):
    """Problems with embedding files or manifests."""


class InvariantError(StoreError):
    """An in-memory embedding set violates its invariants."""


class BadMagicError(StoreError):
    """File does not start with the expected magic bytes."""


class TruncatedPayloadError(StoreError):
    """Payload byte count does not match what the header promises."""


class NonFiniteError(StoreError):
    """Stored vectors contain NaN or infinite components."""


class ManifestError(StoreError):
    """Manifest is malformed or inconsistent with its payload files."""


class MissingWordError(StoreError):
    """A requested word is absent from one or both corpora."""


class DimMismatchError(StoreError):
    """Embedding dimensionality differs between the two corpora of a word."""
