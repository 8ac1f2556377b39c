import random

import pytest

from himm.canonical import are_isomorphic
from himm.corpus import (
    cat4_guest,
    cat4_host,
    hub,
    k4_3,
    micro_guests,
    micro_hosts,
    path2,
    random_pair,
    single_edge,
    triangle,
)
from himm.divisions import division_set, realize_division
from himm.engine import (
    EdgeSubgraph,
    ImmersionWitness,
    decide_dual_immersion,
    decide_immersion,
    immersion_oracle,
    immersion_violations,
    verify_immersion,
    witness_from_obj,
    witness_to_obj,
)
from himm.hypergraph import Hypergraph, apply_sequence, delete_edge, transpose
from himm.labeled import default_params


class TestNamedInstances:
    def test_path2_in_hub(self):
        d = decide_immersion(path2(), hub())
        assert d.answer == "yes"
        assert verify_immersion(path2(), hub(), d.witness)

    def test_hub_not_in_path2(self):
        assert decide_immersion(hub(), path2()).answer == "no"

    def test_single_edge_in_path2(self):
        d = decide_immersion(single_edge(3), path2())
        assert d.answer == "yes"
        assert verify_immersion(single_edge(3), path2(), d.witness)

    def test_self_immersion(self):
        for g in (path2(), hub(), triangle(), k4_3(), cat4_host()):
            d = decide_immersion(g, g)
            assert d.answer == "yes"
            assert verify_immersion(g, g, d.witness)

    def test_divisions_immerse_in_their_realization(self):
        h = single_edge(3)
        for member in division_set(h).members:
            realized = realize_division(h, member.choice_vector)
            d = decide_immersion(h, realized)
            assert d.answer == "yes"
            assert verify_immersion(h, realized, d.witness)


class TestPipelineOracleAgreement:
    def test_random_sample(self):
        for seed in range(40):
            h, g = random_pair(seed)
            d = decide_immersion(h, g, budget=5_000_000)
            o = immersion_oracle(h, g, budget=5_000_000)
            assert d.answer == o.answer, f"seed {seed}"
            if d.answer == "yes":
                assert verify_immersion(h, g, d.witness)
                assert verify_immersion(h, g, o.witness)

    def test_micro_sample(self):
        rng = random.Random(17)
        gs, hs = micro_guests(), micro_hosts()
        for _ in range(60):
            h, g = rng.choice(gs), rng.choice(hs)
            d = decide_immersion(h, g, budget=5_000_000)
            o = immersion_oracle(h, g, budget=5_000_000)
            assert d.answer == o.answer


class TestModes:
    def test_literal_densify_agrees(self):
        rng = random.Random(23)
        gs, hs = micro_guests(), micro_hosts()
        for _ in range(10):
            h, g = rng.choice(gs), rng.choice(hs)
            pin = decide_immersion(h, g, default_params(h, g, "pin"),
                                   budget=5_000_000)
            lit = decide_immersion(h, g, default_params(h, g, "literalDensify"),
                                   budget=50_000_000)
            assert pin.answer == lit.answer
            if lit.answer == "yes":
                assert verify_immersion(h, g, lit.witness)

    def test_star_only_is_strictly_weaker_somewhere(self):
        # a size-5 hyperedge immerses in the 5-vertex path (the path division
        # matches it exactly), but no star routing exists: whatever the center,
        # two same-side terminals would have to share a host edge
        h = single_edge(5)
        g = Hypergraph.build(
            ["a", "b", "c", "d", "e"],
            [("f1", ["a", "b"]), ("f2", ["b", "c"]),
             ("f3", ["c", "d"]), ("f4", ["d", "e"])],
        )
        full = decide_immersion(h, g)
        star = decide_immersion(h, g, star_only=True)
        assert full.answer == "yes"
        assert verify_immersion(h, g, full.witness)
        assert star.answer == "no"

    def test_star_only_yes_implies_full_yes(self):
        rng = random.Random(29)
        gs, hs = micro_guests(), micro_hosts()
        for _ in range(20):
            h, g = rng.choice(gs), rng.choice(hs)
            if decide_immersion(h, g, star_only=True).answer == "yes":
                assert decide_immersion(h, g).answer == "yes"


class TestBudget:
    def test_unknown_on_tiny_budget(self):
        d = decide_immersion(k4_3(), k4_3(), budget=3)
        assert d.answer == "unknown"
        assert d.witness is None

    def test_oracle_unknown_on_tiny_budget(self):
        assert immersion_oracle(k4_3(), k4_3(), budget=2).answer == "unknown"


class TestMonotonicity:
    def test_removing_host_edges_never_helps(self):
        rng = random.Random(31)
        gs, hs = micro_guests(), micro_hosts()
        checked = 0
        while checked < 25:
            h, g = rng.choice(gs), rng.choice(hs)
            if not g.edges:
                continue
            smaller = delete_edge(g, rng.choice([eid for eid, _ in g.edges]))
            if decide_immersion(h, smaller).answer == "yes":
                assert decide_immersion(h, g).answer == "yes"
            checked += 1


class TestWitness:
    def test_replay_reaches_guest_image(self):
        h, g = path2(), hub()
        d = decide_immersion(h, g)
        w = d.witness
        touched = set(w.vertex_map.values())
        used = [e for sub in w.edge_subgraphs.values() for e in sub.edges]
        for e in used:
            touched |= g.edge_map[e]
        sub_g = Hypergraph(
            tuple(v for v in g.vertices if v in touched),
            tuple((eid, vs) for eid, vs in g.edges if eid in used),
        )
        final = apply_sequence(sub_g, w.replay)
        images = {frozenset(w.vertex_map[v] for v in vs) for _, vs in h.edges}
        assert {vs for _, vs in final.edges} == images

    def test_json_round_trip(self):
        d = decide_immersion(path2(), hub())
        again = witness_from_obj(witness_to_obj(d.witness))
        assert again == d.witness

    def test_tampered_duplicate_edge_detected(self):
        h = Hypergraph.build(["a", "b", "c"],
                             [("p1", ["a", "b"]), ("p2", ["b", "c"])])
        g = hub()
        d = decide_immersion(h, g)
        w = d.witness
        first = w.edge_subgraphs["p1"]
        bad = ImmersionWitness(
            w.vertex_map,
            {"p1": first, "p2": first},
            w.replay,
        )
        problems = immersion_violations(h, g, bad)
        assert any("edge-disjointness violated" in p for p in problems)

    def test_tampered_vertex_map_detected(self):
        d = decide_immersion(path2(), hub())
        w = d.witness
        squashed = {k: list(w.vertex_map.values())[0] for k in w.vertex_map}
        bad = ImmersionWitness(squashed, w.edge_subgraphs, w.replay)
        assert not verify_immersion(path2(), hub(), bad)

    def test_singleton_edge_convention(self):
        h = Hypergraph.build(["a"], [("e1", ["a"])])
        g = path2()
        d = decide_immersion(h, g)
        assert d.answer == "yes"
        assert d.witness.edge_subgraphs["e1"].edges == ()
        assert verify_immersion(h, g, d.witness)


class TestDuality:
    def test_matches_direct_decision(self):
        rng = random.Random(41)
        gs = micro_guests(allow_isolated=False)
        hs = [g for g in micro_hosts() if all(g.degree(v) for v in g.vertices)]
        for _ in range(25):
            h, g = rng.choice(gs), rng.choice(hs)
            direct = decide_immersion(h, g)
            via_dual = decide_dual_immersion(
                transpose(h).hypergraph, transpose(g).hypergraph)
            assert direct.answer == via_dual.answer

    def test_reports_dropped_vertices(self):
        h = Hypergraph.build(["a", "b", "c"], [("e", ["a", "b"])])
        d = decide_dual_immersion(h, hub())
        assert d.stats["droppedGuestVertices"] == ["c"]

    def test_dual_witness_verifies_on_transposes(self):
        h, g = path2(), hub()
        d = decide_dual_immersion(h, g)
        if d.answer == "yes":
            assert verify_immersion(
                transpose(h).hypergraph, transpose(g).hypergraph, d.witness)


class TestOracle:
    def test_respects_necessary_conditions(self):
        big = Hypergraph.build(["a", "b", "c", "d", "e"], [])
        assert immersion_oracle(big, path2()).answer == "no"

    def test_witness_isomorphism_check(self):
        d = immersion_oracle(triangle(), k4_3())
        assert d.answer == "yes"
        assert verify_immersion(triangle(), k4_3(), d.witness)
        realized_image = Hypergraph.build(
            sorted(set(d.witness.vertex_map.values())),
            [(eid, [d.witness.vertex_map[v] for v in vs])
             for eid, vs in triangle().edges],
        )
        ok, _ = are_isomorphic(triangle(), realized_image)
        assert ok
