"""Exact computation with families of subsets of [n]."""

from .core import (
    SetFamily,
    UniformFamily,
    and_family,
    apply_permutation,
    cross_intersecting,
    dictatorship,
    dual,
    empty_family,
    forbidden_intersection_witness,
    full_layer,
    is_junta,
    is_t_intersecting,
    junta_generate,
    make_family,
    or_family,
    power_set_family,
    slice_family,
    up_closure,
)
from .errors import ContractError, FamilyError, InputError, ResourceError

__all__ = [
    "SetFamily",
    "UniformFamily",
    "and_family",
    "apply_permutation",
    "cross_intersecting",
    "dictatorship",
    "dual",
    "empty_family",
    "forbidden_intersection_witness",
    "full_layer",
    "is_junta",
    "is_t_intersecting",
    "junta_generate",
    "make_family",
    "or_family",
    "power_set_family",
    "slice_family",
    "up_closure",
    "ContractError",
    "FamilyError",
    "InputError",
    "ResourceError",
]

__version__ = "0.1.0"
