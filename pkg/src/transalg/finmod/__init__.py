"""Finite models, satisfaction, and bounded model search."""
from .model import (Evaluator, FiniteModel, build_model, compose, eval_action, eval_term, first_failure,
                    satisfies, satisfies_all, star, validate_model, valuations)
from .search import ModelSearch, canonical_key, enumerate_models, find_model, resolve_bounds

__all__ = [
    "Evaluator", "FiniteModel", "ModelSearch", "build_model", "canonical_key", "compose", "enumerate_models",
    "eval_action", "eval_term", "find_model", "first_failure", "resolve_bounds", "satisfies", "satisfies_all",
    "star", "validate_model", "valuations",
]
