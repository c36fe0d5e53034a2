"""Structural invariants of colorings and block structure of graphs."""

from __future__ import annotations

from dataclasses import dataclass, field

from .cayley import Cycle, FiniteGraph
from .errors import DomainError
from .groups import Family
from .solver import Coloring, is_proper


@dataclass(frozen=True, order=True)
class Permutation:
    """Permutation of ``{1..k}`` in one-line form: ``images[i-1]`` is the image of ``i``."""

    images: tuple

    def __post_init__(self):
        imgs = tuple(self.images)
        object.__setattr__(self, "images", imgs)
        if sorted(imgs) != list(range(1, len(imgs) + 1)):
            raise DomainError(f"{imgs} is not a permutation of 1..{len(imgs)}")

    @classmethod
    def identity(cls, k: int) -> Permutation:
        return cls(tuple(range(1, k + 1)))

    @classmethod
    def from_cycles(cls, k: int, *cycles) -> Permutation:
        imgs = list(range(1, k + 1))
        for cyc in cycles:
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                imgs[a - 1] = b
        return cls(tuple(imgs))

    @property
    def k(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: Permutation) -> Permutation:
        """``(self * other)(i) = self(other(i))``: ``other`` acts first."""
        return Permutation(tuple(self(other(i)) for i in range(1, self.k + 1)))

    def inverse(self) -> Permutation:
        inv = [0] * self.k
        for i, img in enumerate(self.images, 1):
            inv[img - 1] = i
        return Permutation(tuple(inv))

    def cycles(self) -> list:
        seen = set()
        out = []
        for start in range(1, self.k + 1):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            nxt = self(start)
            while nxt != start:
                cyc.append(nxt)
                seen.add(nxt)
                nxt = self(nxt)
            out.append(tuple(cyc))
        return out

    def is_k_cycle(self) -> bool:
        return len(self.cycles()) == 1 and self.k > 1

    def __str__(self):
        cyc = [c for c in self.cycles() if len(c) > 1]
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) or "id"


def transposition(k: int, a: int, b: int) -> Permutation:
    return Permutation.from_cycles(k, (a, b))


def transposition_decomposition(sigma: Permutation) -> list:
    """Transpositions ``[rho_l, ..., rho_1]`` with ``sigma = rho_l * ... * rho_1``.

    Each cycle ``(a1 a2 ... an)``, taken in order of its smallest point,
    contributes ``(a1 a2), (a1 a3), ..., (a1 an)`` in application order, so
    ``l = k - #cycles <= k - 1``.  Pairs are returned as ``(a, b)`` with
    ``a < b``; the list is in product order (last applied first).
    """
    applied = []
    for cyc in sigma.cycles():
        a1 = cyc[0]
        applied.extend((min(a1, x), max(a1, x)) for x in cyc[1:])
    return applied[::-1]


def compose_transpositions(k: int, product_order: list) -> Permutation:
    out = Permutation.identity(k)
    for a, b in product_order:
        out = out * transposition(k, a, b)
    return out


def cycle_class(tau: Permutation) -> int:
    """1 if the one-line form of ``tau`` is lexicographically below its inverse's, else 2."""
    if not tau.is_k_cycle():
        raise DomainError(f"{tau} is not a {tau.k}-cycle")
    return 1 if tau.images < tau.inverse().images else 2


# ------------------------------------------------------ fiber colorings


def _fiber_levels(g: FiniteGraph) -> int:
    if g.spec is None or g.spec.family not in (
        Family.GAMMA_SEC2, Family.DELTA_SEC2, Family.GAMMA_K, Family.DELTA_K
    ):
        raise DomainError("a fiber-family graph is required")
    return g.meta["levels"]


def _colors(c) -> tuple:
    return c.colors if isinstance(c, Coloring) else tuple(c)


def level_colors(g: FiniteGraph, c, n: int) -> list:
    k = g.meta["k"]
    cols = _colors(c)
    return list(cols[n * k:(n + 1) * k])


def extract_tau(g: FiniteGraph, c, n: int) -> Permutation:
    """Color permutation induced by ``(1, 0)`` on fiber level ``n``.

    ``tau(color of x) = color of (1,0)*x``; ``(1,0)`` adds 1 to ``i`` in
    every fiber family.
    """
    levels = _fiber_levels(g)
    if not 0 <= n < levels:
        raise DomainError(f"level {n} not in window")
    k = g.meta["k"]
    row = level_colors(g, c, n)
    if sorted(x for x in row if x is not None) != list(range(1, k + 1)):
        raise DomainError(f"level {n} does not use each of the colors 1..{k} once: {row}")
    imgs = [0] * k
    for i in range(k):
        imgs[row[i] - 1] = row[(i + 1) % k]
    return Permutation(tuple(imgs))


def level_pairs(g: FiniteGraph) -> list:
    levels = _fiber_levels(g)
    pairs = [(n, n + 1) for n in range(levels - 1)]
    if isinstance(g.shape, Cycle):
        pairs.append((levels - 1, 0))
    return pairs


def _full_level(g, c, n) -> bool:
    k = g.meta["k"]
    return sorted(x for x in level_colors(g, c, n) if x is not None) == list(range(1, k + 1))


def audit_tau_law(g: FiniteGraph, c, skip_partial: bool = False) -> list:
    """Level pairs violating ``tau_{n+1} = tau_n`` (Gamma) or ``tau_n^-1`` (Delta).

    With ``skip_partial`` only pairs where both levels use exactly the
    colors ``1..k`` are audited (colorings with a spare color).
    """
    ok, edge = is_proper(g, c)
    if not ok:
        raise DomainError(f"coloring is not proper at edge {edge}")
    twisted = g.spec.family in (Family.DELTA_SEC2, Family.DELTA_K)
    out = []
    for n1, n2 in level_pairs(g):
        if skip_partial and not (_full_level(g, c, n1) and _full_level(g, c, n2)):
            continue
        t1 = extract_tau(g, c, n1)
        t2 = extract_tau(g, c, n2)
        expected = t1.inverse() if twisted else t1
        if t2 != expected:
            out.append((n1, n2, str(t1), str(t2)))
    return out


def orbit_two_coloring(g: FiniteGraph, c) -> list:
    """Per-level class (1 or 2) of the level's tau; alternates on Delta families."""
    ok, edge = is_proper(g, c)
    if not ok:
        raise DomainError(f"coloring is not proper at edge {edge}")
    vals = [cycle_class(extract_tau(g, c, n)) for n in range(_fiber_levels(g))]
    for n1, n2 in level_pairs(g):
        if g.spec.family in (Family.DELTA_SEC2, Family.DELTA_K) and vals[n1] == vals[n2]:
            raise DomainError(f"levels {n1} and {n2} share class {vals[n1]}")
    return vals


# -------------------------------------------------------- line colorings


@dataclass
class LevelProfile:
    values: list = field(default_factory=list)  # (position, value) pairs
    skipped: list = field(default_factory=list)

    def distinct(self) -> set:
        return {v for _, v in self.values}

    def to_json(self) -> dict:
        return {"values": [list(x) for x in self.values], "skipped": self.skipped}


def extract_delta(colors, k: int) -> LevelProfile:
    """Mod-``k`` increment to the next differently colored position.

    ``colors`` is the coloring of a line window in coordinate order.
    Positions whose next change lies outside the window are skipped.
    """
    colors = list(colors)
    if any(c is None or not 1 <= c <= k for c in colors):
        raise DomainError("delta needs a total coloring with colors 1..k")
    for p in range(len(colors) - 1):
        if colors[p] == colors[p + 1] and p + 2 < len(colors) and colors[p + 2] == colors[p]:
            raise DomainError(f"three equal colors from position {p}: not a proper coloring")
    prof = LevelProfile()
    for p, col in enumerate(colors):
        q = p + 1
        while q < len(colors) and colors[q] == col:
            q += 1
        if q >= len(colors):
            prof.skipped.append(p)
            continue
        prof.values.append((p, (colors[q] - col) % k))
    return prof


# ------------------------------------------------------------- blocks


@dataclass
class BlockReport:
    blocks: list
    kinds: list
    is_gallai_tree: bool

    def to_json(self) -> dict:
        return {"blocks": self.blocks, "kinds": self.kinds, "is_gallai_tree": self.is_gallai_tree}


def biconnected_blocks(g: FiniteGraph) -> list:
    """Vertex sets of the blocks (edge-biconnected components), Hopcroft-Tarjan.

    Isolated vertices belong to no block.  Output sorted.
    """
    disc = [-1] * g.n
    low = [0] * g.n
    blocks = []
    counter = 0
    for root in range(g.n):
        if disc[root] >= 0 or not g.neighbors[root]:
            continue
        disc[root] = low[root] = counter
        counter += 1
        edge_stack = []
        stack = [(root, -1, iter(g.neighbors[root]))]
        while stack:
            u, parent, it = stack[-1]
            advanced = False
            for w in it:
                if w == parent:
                    continue
                if disc[w] < 0:
                    edge_stack.append((u, w))
                    disc[w] = low[w] = counter
                    counter += 1
                    stack.append((w, u, iter(g.neighbors[w])))
                    advanced = True
                    break
                if disc[w] < disc[u]:
                    edge_stack.append((u, w))
                    low[u] = min(low[u], disc[w])
            if advanced:
                continue
            stack.pop()
            if parent >= 0:
                low[parent] = min(low[parent], low[u])
                if low[u] >= disc[parent]:
                    comp = set()
                    while True:
                        e = edge_stack.pop()
                        comp.update(e)
                        if e == (parent, u):
                            break
                    blocks.append(sorted(comp))
    return sorted(blocks)


def classify_block(g: FiniteGraph, block: list) -> str:
    members = set(block)
    size = len(block)
    inner = [len(members.intersection(g.neighbors[v])) for v in block]
    if all(d == size - 1 for d in inner):
        return f"K{size}"
    if all(d == 2 for d in inner):
        return f"C{size}"
    return "other"


def blocks_and_gallai(g: FiniteGraph) -> BlockReport:
    blocks = biconnected_blocks(g)
    kinds = [classify_block(g, b) for b in blocks]

    def gallai_ok(kind):
        return kind.startswith("K") or (kind.startswith("C") and int(kind[1:]) % 2 == 1)

    return BlockReport(blocks, kinds, all(gallai_ok(x) for x in kinds))
