import json
import math

import numpy as np
import pytest

import hrglab


def small_graph(n=2000, alpha=0.75, seed=3):
    pts = hrglab.sample_poisson(hrglab.ModelParams(n, alpha), seed)
    return pts, hrglab.build_bucketed(pts)


def test_params():
    p = hrglab.ModelParams(1000, 0.75)
    assert p.R == pytest.approx(2 * math.log(1000))
    assert p.tau == pytest.approx(1 / math.log(2))
    assert p.delta == pytest.approx(1.0)
    assert hrglab.ModelParams(1000, 1.5).tau is None
    with pytest.raises(ValueError):
        hrglab.ModelParams(0, 0.75)


def test_points_are_sorted_and_inside_the_disk():
    pts = hrglab.sample_binomial(hrglab.ModelParams(500, 0.75), 500, 1)
    assert len(pts) == 500
    assert np.all(np.diff(pts.theta) >= 0)
    assert np.all((pts.r >= 0) & (pts.r <= pts.params.R))


def test_builders_agree_and_edges_are_short():
    pts, g = small_graph()
    naive = hrglab.build_naive(pts)
    assert np.array_equal(g.edges(), naive.edges())
    ok, problems = hrglab.validate_graph(g)
    assert ok, problems
    e = g.edges()
    assert e.shape == (g.num_edges, 2)
    u, v = e[0]
    assert g.is_adjacent(int(u), int(v))


def test_round_trip(tmp_path):
    pts, g = small_graph()
    hrglab.write_points(pts, tmp_path / "p.hrgp")
    hrglab.write_graph(g, tmp_path / "g.hrgg")
    pts2 = hrglab.read_points(tmp_path / "p.hrgp")
    g2 = hrglab.read_graph(tmp_path / "g.hrgg", pts2)
    assert np.array_equal(pts.theta, pts2.theta)
    assert np.array_equal(g.edges(), g2.edges())
    with pytest.raises(OSError):
        hrglab.read_points(tmp_path / "missing.hrgp")


def test_analysis_and_probes():
    _, g = small_graph(n=5000)
    lab = hrglab.connected_components(g)
    assert lab["sizes"].sum() == g.num_vertices
    assert 0 < lab["giant_fraction"] <= 1
    d = hrglab.bfs_distances(g, 0)
    assert d[0] == 0
    core = hrglab.core(g)
    assert core["clique"]
    records = [json.loads(r) for r in hrglab.analyze(g, seed=1, pairs=200)]
    assert [r["metric"] for r in records][:2] == ["points", "edges"]
    probes = [json.loads(r) for r in hrglab.probe_records(g, seed=1, roots=20)]
    assert all(r["validation_passed"] is not False for r in probes)
    u = hrglab.umbrella(g, int(np.argmax(lab["label"] != lab["label"][0])))
    assert u["outcome"] in {"ok", "wrapped_component"}
