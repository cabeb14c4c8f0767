"""Daisy-free hypergraphs, hypercube transversals and the bounds around them."""

__version__ = "0.1.0"

from .gf import FieldCtx, field_new, rank_of, vec_label, label_vec  # noqa: E402
from .hypergraph import (  # noqa: E402
    DaisyShape,
    DaisyWitness,
    UniformFamily,
    assert_daisy_free,
    blow_up,
    density,
    find_daisy,
    link,
    max_daisy_free,
)
from .constructions import (  # noqa: E402
    construct_independent_family,
    daisy_free_transversal,
    fano_complement,
    independent_family_count,
    special_daisy_params,
)

__all__ = [
    "FieldCtx",
    "field_new",
    "rank_of",
    "vec_label",
    "label_vec",
    "DaisyShape",
    "DaisyWitness",
    "UniformFamily",
    "assert_daisy_free",
    "blow_up",
    "density",
    "find_daisy",
    "link",
    "max_daisy_free",
    "construct_independent_family",
    "daisy_free_transversal",
    "fano_complement",
    "independent_family_count",
    "special_daisy_params",
]
