"""Hypergraph immersion testing: divisions, factor-graph embedding, witnesses."""

from .divisions import DivisionSet, division_set, enumerate_edge_divisions
from .embedding import find_embedding, verify_embedding
from .engine import (
    Decision,
    ImmersionWitness,
    decide_dual_immersion,
    decide_immersion,
    immersion_oracle,
    verify_immersion,
)
from .hypergraph import Hypergraph, from_json, to_json, transpose
from .labeled import Params, default_params, factor_graph, m_factor_graph

__all__ = [
    "Decision",
    "DivisionSet",
    "Hypergraph",
    "ImmersionWitness",
    "Params",
    "decide_dual_immersion",
    "decide_immersion",
    "default_params",
    "division_set",
    "enumerate_edge_divisions",
    "factor_graph",
    "find_embedding",
    "from_json",
    "immersion_oracle",
    "m_factor_graph",
    "to_json",
    "transpose",
    "verify_embedding",
    "verify_immersion",
]
