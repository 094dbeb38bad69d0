"""Text format for signatures, models, sentences and proofs."""
from .parser import parse_file, parse_sentence, parse_spec
from .spec import (ForcingDecl, ModelDecl, MorphismDecl, ProofDecl, QueryDecl, SentencesDecl, SetRef, SigDecl,
                   SpecFile, StepDecl, SubstDecl, TypeDecl)
from .printer import print_spec, show_action, show_sentence, show_term
