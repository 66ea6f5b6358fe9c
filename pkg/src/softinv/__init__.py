"""Three-valued shape analysis of concurrent heap programs with soft invariants."""
from .abstraction import (canonical_abstract, canonical_key, embeds, partial_join, signature,
                          structure_key, tight_embed)
from .dot import export_dot
from .evaluation import eval, eval_array, recompute_instrumentation
from .explorer import ResourceError, StateSpace, explore, load_states, save_states
from .formula import Formula, parse_formula, render
from .logic import LogicValue
from .modelspec import (ModelSpec, ModelSyntaxError, SoftInvariantDecl, builtin_model,
                        builtin_models, expand_soft_invariants, load_model, parse_model,
                        resolve_model, serialize_model)
from .oracle import BoundSpec, census, check_soundness, explore_concrete
from .structure import ContractError, PredicateDecl, Structure, Vocabulary
from .transformer import ActionSpec, ModelError, apply_action, coerce, focus, materialize

__version__ = "0.1.0"

__all__ = [
    "ActionSpec", "BoundSpec", "ContractError", "Formula", "LogicValue", "ModelError",
    "ModelSpec", "ModelSyntaxError", "PredicateDecl", "ResourceError", "SoftInvariantDecl",
    "StateSpace", "Structure", "Vocabulary", "apply_action", "builtin_model", "builtin_models",
    "canonical_abstract", "canonical_key", "census", "check_soundness", "coerce", "embeds",
    "eval", "eval_array", "expand_soft_invariants", "explore", "explore_concrete", "export_dot",
    "focus", "load_model", "load_states", "materialize", "parse_formula", "parse_model",
    "partial_join", "recompute_instrumentation", "render", "resolve_model", "save_states",
    "serialize_model", "signature", "structure_key", "tight_embed",
]
