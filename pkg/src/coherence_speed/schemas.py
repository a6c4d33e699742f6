"""JSON schema loading and validation for config and channel documents."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

import jsonschema


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    # the schemas/ data directory is addressed through the package root:
    # it shares its name with this module, so it is not importable itself
    text = (resources.files("coherence_speed") / "schemas" / name).read_text("utf-8")
    return json.loads(text)


def validate_document(doc: dict, schema_name: str) -> None:
    """Raise jsonschema.ValidationError with a JSON-path diagnostic on failure."""
    jsonschema.validate(doc, load_schema(schema_name))
