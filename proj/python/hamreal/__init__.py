"""Python front end for the hamreal verification engine."""

import json

from ._core import (
    DegenerateStructure,
    DomainError,
    Error,
    IntegrationError,
    Model,
    ModelError,
    ParseError,
    PathSingularity,
    UndeclaredSymbol,
    derivative,
    evaluate,
    get_model,
    integrate,
    list_models,
    load_model,
    parse_model,
    reconstruct,
    run_cli,
    verify_json,
)


def verify(model, samples=500, seed=42, tol=1e-9):
    """Run every applicable check; returns the report as a dict."""
    if isinstance(model, str):
        model = get_model(model)
    return json.loads(verify_json(model, samples=samples, seed=seed, tol=tol))


__all__ = [
    "DegenerateStructure",
    "DomainError",
    "Error",
    "IntegrationError",
    "Model",
    "ModelError",
    "ParseError",
    "PathSingularity",
    "UndeclaredSymbol",
    "derivative",
    "evaluate",
    "get_model",
    "integrate",
    "list_models",
    "load_model",
    "parse_model",
    "reconstruct",
    "run_cli",
    "verify",
    "verify_json",
]
