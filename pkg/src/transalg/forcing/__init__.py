"""Forcing properties, generic ideals and generic models."""
from .congruence import CongruenceClosure, atomic_consequences, congruence_closure
from .core import (Condition, Diagnostic, Forcer, ForcingProperty, SearchBounds, distance, forces, sentence_over,
                   universe, validate_forcing_property, weakly_forces)
from .generic import (Decision, GenericIdeal, TermQuotientModel, extend_to_generic, generic_forces, generic_model,
                      require_generic, validate_generic)
from .semantic import DLS, OTT, SemanticForcing, SfpReport, build_semantic_forcing, compare_sfp, ground_atoms
