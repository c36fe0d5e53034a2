"""Explicit Cayley-graph isomorphisms and a verifier for vertex maps."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable

from . import groups as G
from .cayley import FiniteGraph
from .errors import DomainError


def phi_sec2(v: G.Fiber) -> G.Fiber:
    """``(i, n) -> ((-1)^n i, n)`` from Cay(Gamma) to Cay(Delta), k = 3."""
    return G.Fiber((-v.i if v.n % 2 else v.i) % 3, v.n)


def phi_k(v: G.Fiber, k: int) -> G.Fiber:
    """Isomorphism Cay(Gamma_k) -> Cay(Delta_k).

    Even levels ``n = 2m`` rotate the fiber by ``-m``; odd levels ``2m + 1``
    reflect it as ``i -> m + 1 - i``.
    """
    m, odd = divmod(v.n, 2)
    if odd:
        return G.Fiber((m + 1 - v.i) % k, v.n)
    return G.Fiber((v.i - m) % k, v.n)


def phi_k_inverse(v: G.Fiber, k: int) -> G.Fiber:
    m, odd = divmod(v.n, 2)
    if odd:
        return G.Fiber((m + 1 - v.i) % k, v.n)
    return G.Fiber((v.i + m) % k, v.n)


@dataclass(frozen=True)
class Violation:
    u: str
    v: str
    edge_in_src: bool
    edge_in_dst: bool

    def to_json(self) -> dict:
        return {"pair": [self.u, self.v], "edge_in_src": self.edge_in_src,
                "edge_in_dst": self.edge_in_dst}


def vertex_map(src: FiniteGraph, dst: FiniteGraph, f: Callable) -> dict:
    """Turn a label map into an index map; must be total and injective."""
    out = {}
    for v, lab in enumerate(src.labels):
        img = f(lab)
        if img not in dst.index:
            raise DomainError(f"map sends {lab} outside the target graph")
        out[v] = dst.index[img]
    if len(set(out.values())) != len(out):
        raise DomainError("vertex map is not injective")
    return out


def interior_vertices(g: FiniteGraph) -> list:
    """Vertices whose full generator neighborhood lies in the window."""
    if g.spec is None:
        return list(range(g.n))
    d = len(g.spec.generators)
    return [v for v in range(g.n) if g.degree(v) == d]


def verify_isomorphism(src: FiniteGraph, dst: FiniteGraph, f, interior_only: bool = True) -> list:
    """Every adjacency disagreement of ``f`` on audited pairs.

    ``f`` is a dict of vertex indices or a callable on labels.  An empty
    result means ``f`` preserves edges and non-edges on the audited pairs.
    """
    if src.n != dst.n:
        raise DomainError(f"size mismatch: {src.n} vs {dst.n}")
    fmap = f if isinstance(f, dict) else vertex_map(src, dst, f)
    audited = interior_vertices(src) if interior_only else list(range(src.n))
    out = []
    for a, u in enumerate(audited):
        for v in audited[a + 1:]:
            e1 = src.has_edge(u, v)
            e2 = dst.has_edge(fmap[u], fmap[v])
            if e1 != e2:
                out.append(Violation(src.label_str(u), src.label_str(v), e1, e2))
    return out


def violations_json(violations: list) -> str:
    return json.dumps([x.to_json() for x in violations], sort_keys=True)


def embed_line_config(x: dict, k: int = 3) -> dict:
    """Lift a 0/1 line configuration to a fiber configuration.

    Row ``i = 0`` carries ``x``; every other row is 0.  Keys of ``x`` are
    integers ``n``; keys of the result are ``Fiber(i, n)``.
    """
    return {G.Fiber(i, n): (val if i == 0 else 0) for n, val in x.items() for i in range(k)}
