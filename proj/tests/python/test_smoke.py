"""Smoke tests for the python bindings; the heavy coverage lives in the C++ suites."""

import numpy as np
import pytest

import kpart


def test_graph_metrics():
    g = kpart.Graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])
    assert g.n == 6 and g.m == 7
    assert kpart.edge_expansion(g, [0, 1, 2]) == pytest.approx(2 / 3)
    assert kpart.vertex_expansion(g, [0, 1, 2]) == pytest.approx(4 / 3)
    assert kpart.expansion_exact(g, [0, 1, 2], "edge") == (2, 3)
    assert kpart.edge_boundary(g, [0, 1, 2]) == [(2, 3)]
    assert kpart.vertex_boundary(g, [0, 1, 2]) == [2, 3]
    max_val, per_part = kpart.kway_expansion(g, [[0, 1, 2], [3, 4, 5]], "edge")
    assert max_val == pytest.approx(2 / 3)
    assert per_part == [pytest.approx(2 / 3)] * 2

    with pytest.raises(ValueError):
        kpart.Graph(3, [(0, 1), (1, 0)])


def test_spectral_gap():
    k4 = kpart.Graph(4, [(u, v) for u in range(4) for v in range(u + 1, 4)])
    rep = kpart.spectral_gap(k4)
    assert rep["lambda2"] == pytest.approx(4 / 3, abs=1e-8)


def test_pipeline_on_planted_instance(tmp_path):
    inst = kpart.generate_edge_instance(n=12, k=3, eps=0.0, lambda_min=1.0, d=3, seed=7)
    report = kpart.validate_instance(inst)
    assert report["all_ok"]

    sol = kpart.solve(inst, seed=3)
    assert sol.converged
    assert sol.objective <= 1e-3 * 12
    assert sol.residuals["worst"] <= 1e-4
    assert np.allclose(np.linalg.norm(sol.vectors, axis=1), 1.0, atol=1e-9)

    res = kpart.round_greedy(sol, inst.graph, 3, "edge")
    assert not res.partial
    assert sorted(len(s) for s in res.sets) == [4, 4, 4]
    full = kpart.complete_partition(res, inst.graph, "edge")
    assert full.completed
    assert sorted(v for s in full.sets for v in s) == list(range(12))

    diag = kpart.cluster_diagnostics(sol, inst)
    assert diag["all_pass"]

    oracle = kpart.brute_kway_opt(inst.graph, 3, "edge")
    assert oracle["opt"] == 0.0

    inst_path = tmp_path / "instance.json"
    kpart.save_instance(inst, str(inst_path))
    back = kpart.load_instance(str(inst_path))
    assert back.graph.edges == inst.graph.edges

    emb_path = tmp_path / "embedding.txt"
    kpart.save_embedding(sol, str(emb_path))
    loaded = kpart.load_embedding(str(emb_path))
    assert np.array_equal(loaded.vectors, sol.vectors)


def test_vertex_mode_instance():
    inst = kpart.generate_vertex_instance(n=30, k=3, eps=0.1, lambda_min=0.3, d=3, seed=8)
    rep = kpart.validate_instance(inst)
    assert rep["portal_confinement"]
    assert rep["max_part_expansion"] <= 0.1 * 3 + 1e-12
    sol = kpart.solve(inst, seed=2)
    assert sol.converged
    assert len(sol.eta) == 30


def test_threshold_cut_and_ball():
    inst = kpart.generate_edge_instance(n=12, k=3, eps=0.0, lambda_min=1.0, d=3, seed=7)
    sol = kpart.integral_embedding(inst)
    assert kpart.ball(sol, 0, 0.5) == inst.parts[0]
    cut, expansion = kpart.threshold_cut_l1(sol, inst.graph, 0, "edge")
    assert cut == inst.parts[0]
    assert expansion == 0.0


def test_adversary_is_intra_part_only():
    inst = kpart.generate_edge_instance(n=30, k=3, eps=0.0, lambda_min=0.3, d=3, seed=7)
    denser = kpart.apply_monotone_adversary(inst, "random_intra:3", seed=5)
    assert len(denser.adversary_edges) == 3
    parts = denser.parts
    lookup = {v: t for t, part in enumerate(parts) for v in part}
    for u, v in denser.adversary_edges:
        assert lookup[u] == lookup[v]


def test_brute_oracle_budget():
    big = kpart.Graph(18, [(v, (v + 1) % 18) for v in range(18)])
    with pytest.raises(RuntimeError):
        kpart.brute_kway_opt(big, 3, "edge")
