"""Occurrence-embedding extraction for the senseshift toolkit.

Reads one-sentence-per-line corpora, locates target-word occurrences,
runs a pretrained bidirectional transformer encoder, and writes one
contextual vector per occurrence in the senseshift interchange format:
the concatenation of the final hidden layers, averaged over the word's
sub-pieces when the tokenizer splits it.
"""

from .extract import (
    ExtractionConfig,
    ExtractionResult,
    SkipReport,
    extract,
    load_model,
    verify_subtoken_averaging,
)

__all__ = [
    "ExtractionConfig",
    "ExtractionResult",
    "SkipReport",
    "extract",
    "load_model",
    "verify_subtoken_averaging",
]

__version__ = "0.1.0"
