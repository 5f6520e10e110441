"""Versioned JSON schemas for documents read or written by the CLI."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

import jsonschema

from ..errors import DomainError


class SchemaError(DomainError):
    pass


@lru_cache(maxsize=None)
def load(name: str) -> dict:
    text = resources.files(__name__).joinpath(f"{name}.schema.json").read_text()
    return json.loads(text)


def validate(doc: dict, name: str) -> None:
    try:
        jsonschema.validate(doc, load(name))
    except jsonschema.ValidationError as exc:
        raise SchemaError(f"{name} document invalid: {exc.message}") from exc
