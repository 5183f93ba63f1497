"""Metastable Markov chains: T-graph hierarchies, optimal W-graphs, spectra
and kinetic Monte Carlo checks.

Report functions return the same JSON documents as the ``metachain`` CLI,
decoded into dicts. Exact weights travel as text ("3/2", "0.5").
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from . import _core
from ._core import (
    CapExceeded,
    Error,
    Graph,
    InvariantViolation,
    NumericalError,
    ParseError,
    ValidationError,
    set_threads,
)

Weight = Union[str, int, Fraction]

__all__ = [
    "Graph",
    "Error",
    "ParseError",
    "ValidationError",
    "InvariantViolation",
    "CapExceeded",
    "NumericalError",
    "graph",
    "load",
    "validate",
    "alg1",
    "alg2",
    "wgraphs",
    "eigs",
    "oracle",
    "compare",
    "kmc",
    "kinesin_sweep",
    "kinesin_graph",
    "export_dot",
    "updated_exit_weight",
    "set_threads",
]


def _text(w: Weight) -> str:
    if isinstance(w, float):
        # Floats are accepted only through their shortest decimal form.
        return repr(w)
    return str(w)


def graph(arcs: Iterable[Sequence], states: Optional[Sequence[str]] = None) -> Graph:
    """Build a graph from (from, to, U[, kappa]) tuples.

    Without ``states`` the order is that of first appearance.
    """
    rows = []
    seen: list[str] = []
    for a in arcs:
        if len(a) not in (3, 4):
            raise ValueError(f"arc needs 3 or 4 fields, got {a!r}")
        tail, head, u = str(a[0]), str(a[1]), _text(a[2])
        kappa = float(a[3]) if len(a) == 4 and a[3] is not None else None
        rows.append((tail, head, u, kappa))
        for s in (tail, head):
            if s not in seen:
                seen.append(s)
    return Graph(list(states) if states is not None else seen, rows)


def load(path, format: Optional[str] = None) -> Graph:
    return Graph.load(str(path), format)


def validate(g: Graph) -> dict:
    return json.loads(_core.validate(g))


def alg1(g: Graph, stop: str = "bucket-empty", tie_break: str = "lex") -> dict:
    return json.loads(_core.alg1(g, stop, tie_break))


def alg2(g: Graph, stop: str = "bucket-empty") -> dict:
    return json.loads(_core.alg2(g, stop))


def wgraphs(g: Graph, tie_break: str = "lex") -> dict:
    return json.loads(_core.wgraphs(g, tie_break))


def eigs(g: Graph, epsilons: Sequence[float] = (0.1,), tie_break: str = "lex") -> dict:
    return json.loads(_core.eigs(g, list(epsilons), tie_break))


def oracle(g: Graph, epsilons: Sequence[float] = (0.1, 0.05, 0.025), cap: Optional[int] = None) -> dict:
    if cap is None:
        return json.loads(_core.oracle(g, list(epsilons)))
    return json.loads(_core.oracle(g, list(epsilons), cap))


def compare(g: Graph, tie_break: str = "lex") -> dict:
    return json.loads(_core.compare(g, tie_break))


def kmc(
    g: Graph,
    epsilon: float = 0.2,
    seed: int = 1,
    trajectories: int = 1000,
    horizon_exponent: Optional[Weight] = None,
    start: Optional[str] = None,
) -> dict:
    h = None if horizon_exponent is None else _text(horizon_exponent)
    return json.loads(_core.kmc(g, epsilon, seed, trajectories, h, start))


def kinesin_sweep(grid: str = "0.25:10.25:0.5", bisect: bool = False) -> dict:
    return json.loads(_core.kinesin_sweep(grid, bisect))


def kinesin_graph(zeta: Weight = 7) -> Graph:
    return _core.kinesin_graph(_text(zeta))


def export_dot(
    g: Graph, tgraph: str = "none", step: int = 0, stop: str = "bucket-empty", tie_break: str = "lex"
) -> str:
    return _core.export_dot(g, tgraph, step, stop, tie_break)


def updated_exit_weight(u: Weight, u_min_tail: Weight, gamma_last: Weight) -> Fraction:
    """U_ij - U_mu(i) + gamma_last, exactly."""
    return Fraction(_core.updated_exit_weight(_text(u), _text(u_min_tail), _text(gamma_last)))
