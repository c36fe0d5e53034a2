"""Finite windows, cyclic quotients and balls of the Cayley graphs.

Edges are computed twice for the fiber, line and pair families: once from
group multiplication and once from the literal adjacency rule of the family.
Any disagreement raises :class:`ConsistencyError`.

Vertex indexing is deterministic: row-major ``(n, then i)`` for fiber and
pair families, by line coordinate for line families, by BFS discovery order
for balls.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

from . import groups as G
from .errors import ConsistencyError, DomainError, ResourceError
from .groups import Family, MarkedGroupSpec

DEFAULT_BALL_CAP = 200_000


@dataclass(frozen=True)
class Segment:
    L: int

    def __post_init__(self):
        if self.L < 2:
            raise DomainError(f"Segment needs L >= 2, got {self.L}")


@dataclass(frozen=True)
class Cycle:
    m: int

    def __post_init__(self):
        if self.m < 3:
            raise DomainError(f"Cycle needs m >= 3 (parallel-edge collapse), got {self.m}")


@dataclass(frozen=True)
class Ball:
    r: int

    def __post_init__(self):
        if self.r < 0:
            raise DomainError(f"Ball radius must be >= 0, got {self.r}")


InstanceShape = Segment | Cycle | Ball


@dataclass(frozen=True, eq=False)
class FiniteGraph:
    """Immutable simple graph with group-element vertex labels."""

    labels: tuple
    neighbors: tuple  # sorted tuple of neighbor indices per vertex
    spec: MarkedGroupSpec | None = None
    shape: InstanceShape | None = None
    meta: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    @cached_property
    def index(self) -> dict:
        return {lab: v for v, lab in enumerate(self.labels)}

    @cached_property
    def masks(self) -> tuple:
        return tuple(sum(1 << u for u in nbrs) for nbrs in self.neighbors)

    def has_edge(self, u: int, v: int) -> bool:
        return (self.masks[u] >> v) & 1 == 1

    def degree(self, v: int) -> int:
        return len(self.neighbors[v])

    def max_degree(self) -> int:
        return max((len(nb) for nb in self.neighbors), default=0)

    def edges(self) -> list:
        return [(u, v) for u, nbrs in enumerate(self.neighbors) for v in nbrs if u < v]

    def label_str(self, v: int) -> str:
        lab = self.labels[v]
        if self.spec is not None and self.spec.family is Family.DELTA_PRIME_K:
            return str(self.meta["coords"][v])
        return lab.label() if hasattr(lab, "label") else str(lab)

    def to_dot(self) -> str:
        lines = ["graph G {"]
        lines += [f'  "{self.label_str(v)}";' for v in range(self.n)]
        lines += [f'  "{self.label_str(u)}" -- "{self.label_str(v)}";' for u, v in self.edges()]
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        payload = {
            "vertices": [self.label_str(v) for v in range(self.n)],
            "edges": [list(e) for e in self.edges()],
        }
        if self.spec is not None:
            payload["spec"] = self.spec.to_json()
        return json.dumps(payload, sort_keys=True)


def from_edges(n: int, edges: Iterable, labels=None, **kw) -> FiniteGraph:
    """Plain graph on ``range(n)``; used for tests and ad-hoc instances."""
    nbrs = [set() for _ in range(n)]
    for u, v in edges:
        if u == v:
            raise DomainError("self-loop")
        nbrs[u].add(v)
        nbrs[v].add(u)
    return FiniteGraph(
        tuple(labels) if labels is not None else tuple(range(n)),
        tuple(tuple(sorted(s)) for s in nbrs),
        **kw,
    )


# ------------------------------------------------------------------- build


def build(spec: MarkedGroupSpec, shape: InstanceShape, cap: int = DEFAULT_BALL_CAP) -> FiniteGraph:
    fam = spec.family
    if isinstance(shape, Ball):
        return _build_ball(spec, shape, cap)
    if fam in G.FIBER_FAMILIES:
        return _build_fiber(spec, shape)
    if fam in G.LINE_FAMILIES:
        return _build_line(spec, shape)
    if fam in G.PAIR_FAMILIES:
        return _build_pair(spec, shape)
    raise DomainError(f"shape {shape} not supported for {spec}; use Ball")


def _finish(labels, edge_sets, rule_edges, spec, shape, meta) -> FiniteGraph:
    group_edges = {frozenset(e) for e in edge_sets}
    if rule_edges is not None and group_edges != rule_edges:
        diff = sorted(tuple(sorted(e)) for e in group_edges ^ rule_edges)[:5]
        raise ConsistencyError(
            f"group-law edges differ from literal edge rule for {spec} on {shape}: {diff}"
        )
    nbrs = [[] for _ in labels]
    for e in group_edges:
        u, v = tuple(e)
        nbrs[u].append(v)
        nbrs[v].append(u)
    return FiniteGraph(
        tuple(labels), tuple(tuple(sorted(s)) for s in nbrs), spec, shape, meta
    )


def _group_edges(spec, labels, index, reduce):
    """Edges ``{x, s*x}`` for every generator, restricted to the vertex set."""
    out = set()
    for v, x in enumerate(labels):
        for s in spec.generators:
            y = reduce(G.mul(s, x, spec))
            if y is None:
                continue
            u = index.get(y)
            if u is None:
                continue
            if u == v:
                raise DomainError(f"self-loop at {x} via {s}: quotient too small for {spec}")
            out.add((min(u, v), max(u, v)))
    return out


def fiber_edge_rule(family: Family, k: int, i: int, j: int, step: int) -> bool:
    """Literal adjacency of ``(i, n)`` and ``(j, n + step)`` for ``step`` in {0, 1}."""
    if step == 0:
        return i != j
    if family is Family.GAMMA_K:
        return (j - i) % k not in (0, 1)
    if family is Family.DELTA_K:
        return (i + j) % k not in (0, 1)
    if family is Family.GAMMA_SEC2:
        return i == j
    return (i + j) % k == 0


def _build_fiber(spec, shape):
    k = spec.fiber_size
    if isinstance(shape, Segment):
        levels, m = shape.L, None
    else:
        levels, m = shape.m, shape.m
    labels = [G.Fiber(i, n) for n in range(levels) for i in range(k)]
    index = {lab: v for v, lab in enumerate(labels)}

    def reduce(y):
        return G.Fiber(y.i, y.n % m) if m is not None else y

    edges = _group_edges(spec, labels, index, reduce)
    rule = set()
    for n in range(levels):
        nxt = [(n, 0)]
        if m is not None or n + 1 < levels:
            nxt.append(((n + 1) % levels, 1))
        for n2, step in nxt:
            for i in range(k):
                for j in range(k):
                    if fiber_edge_rule(spec.family, k, i, j, step):
                        u, v = n * k + i, n2 * k + j
                        if u != v:
                            rule.add(frozenset((u, v)))
    meta = {"levels": levels, "k": k}
    if m is not None:
        meta["faithful"] = m >= 2 * k + 1
    return _finish(labels, edges, rule, spec, shape, meta)


def line_lengths(spec: MarkedGroupSpec) -> list:
    if spec.family is Family.PLAIN_Z:
        return [1]
    return list(range(2, 2 * spec.k - 2))


def _build_line(spec, shape):
    fam = spec.family
    if isinstance(shape, Segment):
        size, m = shape.L, None
    else:
        size, m = shape.m, shape.m
        if fam is Family.DELTA_PRIME_K and m % 2:
            raise DomainError("delta-prime-k cycles need even m (dihedral quotient)")
        if any(d % m == 0 for d in line_lengths(spec)):
            raise DomainError(f"self-loop: a generator length is 0 mod {m}")
    coords = list(range(size))
    if fam is Family.DELTA_PRIME_K:
        labels = [G.dihedral_from_cayley_coordinate(p) for p in coords]

        def coord(y):
            return G.cayley_line_coordinate(y)
    else:
        labels = [G.Line(p) for p in coords]

        def coord(y):
            return y.x

    index = {lab: v for v, lab in enumerate(labels)}

    def reduce(y):
        p = coord(y)
        if m is not None:
            p %= m
        return labels[p] if 0 <= p < size else None

    edges = _group_edges(spec, labels, index, reduce)
    lengths = line_lengths(spec)
    rule = set()
    for p in range(size):
        for d in lengths:
            q = p + d
            if m is not None:
                q %= m
            elif q >= size:
                continue
            if q != p:
                rule.add(frozenset((p, q)))
    meta = {"coords": coords}
    if m is not None:
        span = 1 if fam is Family.PLAIN_Z else 2 * spec.k - 3
        meta["faithful"] = m >= 2 * span + 1
    return _finish(labels, edges, rule, spec, shape, meta)


def _build_pair(spec, shape):
    if isinstance(shape, Segment):
        h = shape.L // 2
        cols = list(range(-h, h + 1))
        levels, m = shape.L, None
    else:
        cols = list(range(shape.m))
        levels, m = shape.m, shape.m
    labels = [G.Pair(a, n) for n in range(levels) for a in cols]
    index = {lab: v for v, lab in enumerate(labels)}

    def reduce(y):
        return G.Pair(y.a % m, y.b % m) if m is not None else y

    edges = _group_edges(spec, labels, index, reduce)
    twisted = spec.family is Family.ZSEMIZ
    rule = set()
    for u, x in enumerate(labels):
        for v, y in enumerate(labels):
            if v <= u:
                continue
            da = y.a - x.a
            dn = y.b - x.b
            if m is not None:
                da %= m
                dn %= m
                steps = {d % m for d in (2, -2, 3, -3)}
            else:
                steps = {2, -2, 3, -3}
            if dn == 0 and da in steps:
                rule.add(frozenset((u, v)))
                continue
            for lo, hi, up in ((x, y, 1), (y, x, 1)):
                dn2 = hi.b - lo.b
                if m is not None:
                    dn2 %= m
                if dn2 == up:
                    target = -lo.a if twisted else lo.a
                    ok = (hi.a - target) % m == 0 if m is not None else hi.a == target
                    if ok:
                        rule.add(frozenset((u, v)))
    meta = {"levels": levels}
    if m is not None:
        meta["faithful"] = m >= 7
    return _finish(labels, edges, rule, spec, shape, meta)


def _build_ball(spec, shape, cap):
    ident = spec.identity
    labels = [ident]
    dist = {ident: 0}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        if dist[x] == shape.r:
            continue
        for s in spec.generators:
            y = G.mul(s, x, spec)
            if y not in dist:
                if len(labels) >= cap:
                    raise ResourceError(f"ball of radius {shape.r} exceeds cap {cap}")
                dist[y] = dist[x] + 1
                labels.append(y)
                queue.append(y)
    index = {lab: v for v, lab in enumerate(labels)}
    edges = _group_edges(spec, labels, index, lambda y: y)
    return _finish(labels, edges, None, spec, shape, {"radius": dict(enumerate(dist[x] for x in labels))})


def free_product_ball(left: MarkedGroupSpec, right: MarkedGroupSpec, r: int,
                      cap: int = DEFAULT_BALL_CAP) -> FiniteGraph:
    return build(G.free_product(left, right), Ball(r), cap)


# ---------------------------------------------------------------- distance


def bfs_distances(g: FiniteGraph, source: int, max_depth: int | None = None) -> dict:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        if max_depth is not None and dist[u] >= max_depth:
            continue
        for w in g.neighbors[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def path_distance(g: FiniteGraph, u: int, v: int):
    """Shortest path length, ``math.inf`` when disconnected."""
    return bfs_distances(g, u).get(v, math.inf)


def fiber_level(g: FiniteGraph, v: int) -> int:
    return g.labels[v].n


def level_vertices(g: FiniteGraph, n: int) -> list:
    """Vertices of fiber level ``n``, ordered by fiber coordinate."""
    k = g.meta["k"]
    return list(range(n * k, n * k + k))
