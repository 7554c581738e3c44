"""Plain-text to CoNLL-U adapter over off-the-shelf dependency parsers."""

__version__ = "0.1.0"

from .adapter import (
    AdapterConfig,
    AdapterError,
    AdapterResult,
    ParserUnavailableError,
    TokenRow,
    available_engines,
    register_backend,
    resolve_backend,
    text_to_conllu,
)

__all__ = [
    "AdapterConfig",
    "AdapterError",
    "AdapterResult",
    "ParserUnavailableError",
    "TokenRow",
    "available_engines",
    "register_backend",
    "resolve_backend",
    "text_to_conllu",
]
