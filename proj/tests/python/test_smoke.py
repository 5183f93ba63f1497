import os
from fractions import Fraction
from pathlib import Path

import pytest

import metachain

FIXTURES = Path(os.environ.get("METACHAIN_FIXTURE_DIR", Path(__file__).resolve().parents[1] / "fixtures"))


def test_update_rule_is_exact():
    assert metachain.updated_exit_weight("14", "1.1", "3") == Fraction(159, 10)
    assert metachain.updated_exit_weight(Fraction(17, 5), "3.1", "3.5") == Fraction(19, 5)


def test_graph_round_trip():
    g = metachain.graph([("a", "b", "3/2", 1.25), ("b", "a", 2, 0.5)])
    assert g.n == 2
    assert g.states == ["a", "b"]
    assert g.arcs == [("a", "b", "3/2", 1.25), ("b", "a", "2", 0.5)]
    with pytest.raises(metachain.ValidationError):
        metachain.graph([("a", "b", "3/2"), ("b", "a", 2, 0.5)])
    again = metachain.Graph.from_json(g.to_json())
    assert again.arcs == g.arcs
    assert metachain.Graph.from_tsv(g.to_tsv()).arcs == g.arcs


def test_integer_example_runs():
    g = metachain.load(FIXTURES / "integer7.json")
    r2 = metachain.alg2(g)
    assert r2["schema"] == 1
    assert [Fraction(t) for t in r2["theta"]] == [1, 3, 4]
    cmp = metachain.compare(g)
    assert cmp["ok"] is True
    r1 = metachain.alg1(g)
    assert r1["kind"] == "alg1"
    assert r1["symmetry"] is True


def test_no_symmetry_spectrum_and_wgraphs():
    g = metachain.load(FIXTURES / "decimal7.json")
    w = metachain.wgraphs(g)
    assert w["schema"] == 1
    e = metachain.eigs(g, [0.1])
    assert e["kind"] == "eigs"
    o = metachain.oracle(g, [0.1])
    assert o["ok"] is True


def test_kmc_is_seeded():
    g = metachain.load(FIXTURES / "integer7.json")
    a = metachain.kmc(g, epsilon=0.2, seed=3, trajectories=100)
    b = metachain.kmc(g, epsilon=0.2, seed=3, trajectories=100)
    assert a == b
    assert 0.0 <= a["coverage"]["fraction"] <= 1.0


def test_kinesin():
    g = metachain.kinesin_graph(7)
    assert g.n == 8
    s = metachain.kinesin_sweep("1:3:1")
    assert len(s["intervals"]) == 1


def test_dot_and_errors():
    g = metachain.load(FIXTURES / "integer7.json")
    dot = metachain.export_dot(g, tgraph="alg2", step=2)
    assert dot.startswith("digraph")
    assert "cluster_0" in dot
    with pytest.raises(metachain.ParseError):
        metachain.Graph.from_tsv("1 2 x\n")
    with pytest.raises(metachain.ValidationError):
        metachain.alg2(metachain.graph([("1", "2", 1), ("1", "3", 1)]))
    assert issubclass(metachain.ValidationError, metachain.Error)
