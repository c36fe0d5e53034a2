"""Anchor-driven colorers for the fiber and line families.

Each colorer takes a graph and a spaced anchor set and returns a proper
coloring whose provenance records the algorithm, its parameters and the
swap-interior vertices (the only places a spare color may appear).

Boundary policy: on Segment instances only the stretch between the first
and the last anchor is colored; on Cycle instances runs between
consecutive anchors wrap around, and a single anchor forms a run with
itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cayley import Cycle, FiniteGraph
from .errors import ContractViolation, DomainError
from .groups import Family
from .solver import AnchorSet, Coloring, coloring, is_proper
from .structure import Permutation, transposition_decomposition


def _require(g: FiniteGraph, *families: Family) -> None:
    if g.spec is None or g.spec.family not in families:
        names = ", ".join(f.value for f in families)
        raise DomainError(f"expected a graph of family {names}, got {g.spec}")


def _anchor_tuple(A) -> tuple:
    anchors = tuple(A.anchors) if isinstance(A, AnchorSet) else tuple(A)
    if not anchors:
        raise DomainError("anchor set is empty")
    return anchors


def _runs(positions: list, size: int, cyclic: bool) -> list:
    """``(start, gap)`` for consecutive sorted positions, wrapping on cycles."""
    pos = sorted(positions)
    runs = [(a, b - a) for a, b in zip(pos, pos[1:])]
    if cyclic:
        runs.append((pos[-1], pos[0] + size - pos[-1]))
    return runs


def _certify(g: FiniteGraph, c: Coloring, spare: int | None = None) -> Coloring:
    ok, edge = is_proper(g, c)
    if not ok:
        raise ContractViolation(f"{c.provenance.get('algorithm')} produced a clash at {edge}")
    if spare is not None:
        interior = set(c.provenance["swap_interior"])
        stray = [v for v, col in enumerate(c.colors) if col == spare and v not in interior]
        if stray:
            raise ContractViolation(f"spare color {spare} outside swap interiors at {stray[:5]}")
    return c


def _fiber_anchors(g: FiniteGraph, anchors: tuple) -> dict:
    k = g.meta["k"]
    out = {}
    for v in anchors:
        n, i = divmod(v, k)
        if n in out:
            raise DomainError(f"two anchors on fiber level {n}")
        out[n] = i
    return out


def _check_level_gaps(runs: list, need: int, what: str) -> None:
    for n0, gap in runs:
        if gap < need:
            raise DomainError(f"anchor levels {n0} and {n0 + gap} are {gap} apart; {what} needs >= {need}")


# ------------------------------------------------------- transversal (k=3)


def color_transversal_sec2(g: FiniteGraph, A) -> Coloring:
    """3-coloring of the k = 3 Gamma graph from a maximal independent set.

    On a cycle every fiber holds exactly one anchor ``(a_n, n)``; the
    coloring is ``(j, 0) * anchor -> j + 1``.
    """
    _require(g, Family.GAMMA_SEC2)
    if not isinstance(g.shape, Cycle):
        raise DomainError("the transversal colorer needs a Cycle instance")
    anchors = _anchor_tuple(A)
    for a, u in enumerate(anchors):
        for v in anchors[a + 1:]:
            if g.has_edge(u, v):
                raise DomainError(f"anchors {g.label_str(u)} and {g.label_str(v)} are adjacent")
    rows = _fiber_anchors(g, anchors)
    levels = g.meta["levels"]
    missing = [n for n in range(levels) if n not in rows]
    if missing:
        raise ContractViolation(f"anchor set misses fibers {missing}; it is not maximal")
    colors = [(lab.i - rows[lab.n]) % 3 + 1 for lab in g.labels]
    c = coloring(colors, 3, algorithm="transversal-sec2", anchors=list(anchors), swap_interior=[])
    return _certify(g, c)


# ---------------------------------------------------------------- Gamma_k


def staircase(x: int, y: int, gap: int, k: int) -> list:
    """Transversal positions ``a_0 .. a_gap`` climbing from ``x`` to ``y`` one step per level."""
    i = (y - x) % k
    if i > gap:
        raise DomainError(f"staircase of height {i} does not fit in {gap} levels")
    return [(x + min(t, i)) % k for t in range(gap + 1)]


def color_gamma_k(g: FiniteGraph, A) -> Coloring:
    """Proper k-coloring of a Gamma_k window with anchor levels >= k - 1 apart."""
    _require(g, Family.GAMMA_K)
    k, levels = g.meta["k"], g.meta["levels"]
    anchors = _anchor_tuple(A)
    rows = _fiber_anchors(g, anchors)
    cyclic = isinstance(g.shape, Cycle)
    runs = _runs(list(rows), levels, cyclic)
    _check_level_gaps(runs, k - 1, "the staircase")
    a = [None] * levels
    a[min(rows)] = rows[min(rows)]
    for n0, gap in runs:
        y = rows[(n0 + gap) % levels]
        for t, pos in enumerate(staircase(rows[n0], y, gap, k)):
            a[(n0 + t) % levels] = pos
    for n, i in rows.items():
        if a[n] != i:
            raise ContractViolation(f"staircase does not close at level {n}")
    colors = [None if a[lab.n] is None else (lab.i - a[lab.n]) % k + 1 for lab in g.labels]
    c = coloring(colors, k, algorithm="gamma-k", k=k, anchors=list(anchors),
                 transversal=[x for x in a], swap_interior=[])
    return _certify(g, c)


# ---------------------------------------------------------------- Delta_k


@dataclass
class SwapScheduleState:
    """Running state of a swap schedule.

    ``sigma`` is the current color sequence read at the spaced positions;
    ``pending`` holds the transpositions still to apply, first one next.
    """

    sigma: tuple
    pending: list = field(default_factory=list)
    spare: int = 0

    def missing(self) -> set:
        return set(range(1, self.spare + 1)) - set(self.sigma)

    def check(self) -> None:
        if len(set(self.sigma)) != len(self.sigma) or not self.sigma:
            raise ContractViolation(f"sigma {self.sigma} repeats a color")
        if len(self.missing()) != 1:
            raise ContractViolation(f"sigma {self.sigma} should miss exactly one color")


def delta_shift(row: list) -> list:
    """``c_shift`` on a Delta_k fiber: ``(0, 1) * (j, n) = (-j, n + 1)``."""
    k = len(row)
    return [row[(-j) % k] for j in range(k)]


def swap_gadget(row: list, a: int, b: int, spare: int) -> list:
    """Three rows after ``row`` that exchange colors ``a`` and ``b`` via ``spare``."""
    out = []
    for old, new in ((a, spare), (b, a), (spare, b)):
        row = [new if x == old else x for x in delta_shift(row)]
        out.append(row)
    return out


def alignment_permutation(x: int, y: int, gap: int, k: int) -> Permutation:
    """Color map taking the shifted anchor fiber at ``x`` onto the one wanted at ``y``.

    After ``gap`` plain shifts color ``i`` sits at ``(-1)^gap (i - 1 + x)``;
    the anchor rule at ``y`` wants color ``pos - y + 1`` there.
    """
    sign = -1 if gap % 2 else 1
    return Permutation(tuple((sign * (i - 1 + x) - y) % k + 1 for i in range(1, k + 1)))


def color_delta_k(g: FiniteGraph, A) -> Coloring:
    """Proper (k+1)-coloring of a Delta_k window with anchor levels >= 3(k - 1) apart."""
    _require(g, Family.DELTA_K)
    k, levels = g.meta["k"], g.meta["levels"]
    anchors = _anchor_tuple(A)
    rows = _fiber_anchors(g, anchors)
    runs = _runs(list(rows), levels, isinstance(g.shape, Cycle))
    _check_level_gaps(runs, 3 * (k - 1), "the swap schedule")
    spare = k + 1
    fill = [None] * levels
    first = min(rows)
    fill[first] = [(j - rows[first]) % k + 1 for j in range(k)]
    interior_levels = []
    schedules = []
    for n0, gap in runs:
        x, y = rows[n0], rows[(n0 + gap) % levels]
        sigma = alignment_permutation(x, y, gap, k)
        rhos = transposition_decomposition(sigma)
        schedules.append({"from": n0, "gap": gap, "sigma": list(sigma.images),
                          "transpositions": [list(r) for r in rhos]})
        row = [(j - x) % k + 1 for j in range(k)]
        new_rows = []
        state = SwapScheduleState(tuple(row), list(reversed(rhos)), spare)
        while state.pending:
            a, b = state.pending.pop(0)
            trio = swap_gadget(row, a, b, spare)
            for step in trio[:2]:
                SwapScheduleState(tuple(step), [], spare).check()
                interior_levels.append((n0 + len(new_rows) + 1) % levels)
                new_rows.append(step)
            new_rows.append(trio[2])
            row = trio[2]
        while len(new_rows) < gap:
            row = delta_shift(row)
            new_rows.append(row)
        want = [(j - y) % k + 1 for j in range(k)]
        if new_rows[-1] != want:
            raise ContractViolation(f"run from level {n0} ends at {new_rows[-1]}, expected {want}")
        for t, r in enumerate(new_rows, 1):
            fill[(n0 + t) % levels] = r
    colors = [None if fill[lab.n] is None else fill[lab.n][lab.i] for lab in g.labels]
    interior = sorted(n * k + i for n in set(interior_levels) for i in range(k))
    c = coloring(colors, spare, algorithm="delta-k", k=k, anchors=list(anchors),
                 schedules=schedules, swap_levels=sorted(set(interior_levels)),
                 swap_interior=interior)
    return _certify(g, c, spare)


# ----------------------------------------------------------- line tapes


def fill_color(d: int) -> int:
    """Color at distance ``d`` (1 .. 2k-2) past a marker."""
    return (d + 1) // 2 + 1


def marker_tape(markers: list, length: int) -> list:
    """Colors for tape positions ``0..length`` filled forward from ``markers``."""
    marks = set(markers)
    if 0 not in marks:
        raise ContractViolation("tape must start on a marker")
    out = []
    last = 0
    for t in range(length + 1):
        if t in marks:
            last = t
            out.append(1)
        else:
            out.append(fill_color(t - last))
    return out


def _line_positions(g: FiniteGraph, anchors: tuple) -> list:
    if len(set(anchors)) != len(anchors):
        raise DomainError("repeated anchor")
    return sorted(anchors)


def _check_line_spacing(g: FiniteGraph, pos: list, need: int) -> None:
    m = g.shape.m if isinstance(g.shape, Cycle) else None
    for a, u in enumerate(pos):
        for v in pos[a + 1:]:
            d = v - u
            if m is not None:
                d = min(d, m - d)
            if d <= need:
                raise DomainError(f"anchors {u} and {v} are {d} apart; need > {need}")


def gamma_prime_markers(N: int, k: int) -> list:
    """Marker offsets for one run of length ``N`` (the end ``N`` itself excluded)."""
    period = 2 * k - 1
    l = (-N) % (2 * k)
    M = period * l
    if M > N:
        raise DomainError(f"run of length {N} is too short for {l} marker steps of {period}")
    marks = [period * n for n in range(l + 1)]
    for n in range((N - M) // (2 * k)):
        marks += [2 * k * n + M, 2 * k * n + 1 + M]
    return sorted(x for x in set(marks) if x < N)


def same_color_gap_problems(g: FiniteGraph, c, k: int) -> list:
    """Same-colored pairs at line distance strictly between 1 and 2k - 2."""
    m = g.shape.m if isinstance(g.shape, Cycle) else None
    colors = c.colors if isinstance(c, Coloring) else tuple(c)
    out = []
    for u in range(g.n):
        for d in range(2, 2 * k - 2):
            v = u + d
            if m is not None:
                v %= m
            elif v >= g.n:
                break
            if colors[u] is not None and colors[u] == colors[v]:
                out.append((u, v))
    return out


def color_gamma_prime_k(g: FiniteGraph, A) -> Coloring:
    """Proper k-coloring of a Gamma'_k window with anchors > (2k-1)^2 apart."""
    _require(g, Family.GAMMA_PRIME_K)
    k = g.spec.k
    anchors = _anchor_tuple(A)
    pos = _line_positions(g, anchors)
    _check_line_spacing(g, pos, (2 * k - 1) ** 2)
    cyclic = isinstance(g.shape, Cycle)
    runs = _runs(pos, g.n, cyclic)
    colors = [None] * g.n
    record = []
    for p, N in runs:
        marks = gamma_prime_markers(N, k)
        record.append({"from": p, "gap": N, "l": (-N) % (2 * k)})
        for t, col in enumerate(marker_tape(marks, N - 1)):
            colors[(p + t) % g.n] = col
    if not cyclic:
        colors[pos[-1]] = 1
    c = coloring(colors, k, algorithm="gamma-prime-k", k=k, anchors=list(anchors),
                 runs=record, swap_interior=[])
    if same_color_gap_problems(g, c, k):
        raise ContractViolation("same-colored vertices closer than 2k - 2")
    return _certify(g, c)


# ----------------------------------------------------------- Delta'_k


def delta_prime_spacing(k: int) -> int:
    """Anchors must be more than this far apart for the Delta'_k colorer.

    The reversal schedule occupies ``6k floor(k/2) + 2k - 3`` tape steps and
    the closing marker fill needs up to ``(2k - 1)^2`` more.
    """
    return 6 * k * (k // 2) + 4 * k * k - 2 * k - 3


def natural_orientation(p: int) -> int:
    """Direction of ``a * x`` along the coordinate axis at coordinate ``p``."""
    return 1 if p % 2 == 0 else -1


def cluster_colors(k: int, orientation: int) -> dict:
    """Offsets around an anchor and their forced colors."""
    out = {0: 1}
    for n in range(1, 2 * (k - 1) + 1):
        c = fill_color(n)
        out[orientation * n] = c
        out[-orientation * n] = k + 2 - c
    return out


def reversal_blocks(k: int) -> list:
    """Color sequences from ``(1..k)`` to ``(k..1)``, three per transposition."""
    cur = list(range(1, k + 1))
    blocks = [tuple(cur)]
    spare = k + 1
    for m in range(k // 2):
        c, d = m + 1, k - m
        for old, new in ((c, spare), (d, c), (spare, d)):
            cur = [new if x == old else x for x in cur]
            blocks.append(tuple(cur))
    return blocks


def reversal_tape(k: int) -> tuple:
    """Tape colors ``0..t_u`` and the swap-interior tape positions.

    The flattened block values ``e_0, e_1, ...`` are laid out as
    ``e_0`` at 0 and ``e_j`` at ``2j - 1`` and ``2j``; the tape stops on the
    first copy of the final 1 so that it ends on a single marker.
    """
    blocks = reversal_blocks(k)
    e = [x for b in blocks for x in b]
    J = len(e) - 1
    t_u = 2 * J - 1
    tape = [e[0]]
    owner = [0]
    for j in range(1, J + 1):
        tape += [e[j], e[j]]
        owner += [j, j]
    tape = tape[:t_u + 1]
    owner = owner[:t_u + 1]
    interior = [t for t, j in enumerate(owner) if (j // k) % 3 in (1, 2)]
    return tape, interior


def _steps_to_marks(start: int, steps: list, sign: int) -> list:
    out = [start]
    for s in steps:
        out.append(out[-1] + sign * s)
    return out


def equal_orientation_steps(G: int, k: int) -> list:
    """Marker steps of sizes 1 and 2k - 1 summing to ``G``, first and last 2k - 1."""
    period = 2 * k - 1
    r = (-G) % (2 * k) or 2 * k
    b, rest = divmod(G - r * period, 2 * k)
    if b < 0 or rest:
        raise DomainError(f"gap {G} too short for an equal-orientation fill")
    return [period] + [1, period] * b + [period] * (r - 1)


def closing_steps(D: int, k: int) -> list:
    """Marker steps from the far anchor back to the end of the reversal tape."""
    period = 2 * k - 1
    r = (-D) % (2 * k)
    b, rest = divmod(D - r * period, 2 * k)
    if b < 0 or rest or (r == 0 and b == 0):
        raise DomainError(f"remaining gap {D} too short to close the reversal")
    return [period, 1] * b + [period] * r


def _fill_between(marks: list, length: int) -> list:
    """Colors on ``0..length`` with markers ``marks``, counted back from the marker above."""
    marks = sorted(marks)
    out = []
    for t in range(length + 1):
        above = min(x for x in marks if x >= t)
        out.append(1 if above == t else fill_color(above - t))
    return out


def _gap_colors(k: int, P1: int, o1: int, P2: int, o2: int, lower_is_P1: bool) -> tuple:
    """Colors on offsets ``0..G`` from ``P1`` (positions ``P1 .. P1 + G``).

    Returns ``(colors, interior_offsets, kind)``.
    """
    G = P2 - P1
    if o1 == o2:
        steps = equal_orientation_steps(G, k)
        if o1 == 1:
            tape = marker_tape(_steps_to_marks(0, steps, 1), G)
        else:
            tape = marker_tape(_steps_to_marks(0, steps, 1), G)[::-1]
        return tape, [], "equal"
    # z is the lower-index anchor; its forward side decides mu
    if lower_is_P1:
        z_forward_in = o1 == 1
    else:
        z_forward_in = o2 == -1
    e_tape, e_interior = reversal_tape(k)
    t_u = len(e_tape) - 1
    D = G - t_u
    if D < 0:
        raise DomainError(f"gap {G} shorter than the reversal schedule {t_u}")
    marks = [G - x for x in _steps_to_marks(0, closing_steps(D, k), 1)]
    tail = _fill_between(marks, G)
    tape = e_tape + tail[t_u + 1:]
    if not z_forward_in:
        tape = [x if x in (1, k + 1) else k + 2 - x for x in tape]
    interior = list(e_interior)
    if not lower_is_P1:
        tape = tape[::-1]
        interior = [G - t for t in interior]
    return tape, interior, "opposite"


def color_delta_prime_k(g: FiniteGraph, A, orientation: dict | None = None) -> Coloring:
    """Proper (k+1)-coloring of a Delta'_k window from oriented anchors.

    ``orientation`` maps anchor coordinate to +1 or -1 (the side its ``a``
    neighbor lies on).  Defaults to ``A.orientation`` and then to the
    natural orientation of each anchor.
    """
    _require(g, Family.DELTA_PRIME_K)
    k = g.spec.k
    anchors = _anchor_tuple(A)
    if orientation is None and isinstance(A, AnchorSet):
        orientation = A.orientation
    orient = {p: (orientation or {}).get(p, natural_orientation(p)) for p in anchors}
    if any(o not in (1, -1) for o in orient.values()):
        raise DomainError("orientations must be +1 or -1")
    pos = _line_positions(g, anchors)
    _check_line_spacing(g, pos, delta_prime_spacing(k))
    cyclic = isinstance(g.shape, Cycle)
    size = g.n
    colors = [None] * size
    interior = set()
    record = []
    for P1, G in _runs(pos, size, cyclic):
        P2 = P1 + G
        q2 = P2 % size
        lower_is_P1 = P1 <= q2
        tape, inner, kind = _gap_colors(k, P1, orient[P1], P2, orient[q2], lower_is_P1)
        record.append({"from": P1, "gap": G, "kind": kind})
        for t, col in enumerate(tape):
            colors[(P1 + t) % size] = col
        interior.update((P1 + t) % size for t in inner)
    for p in pos:
        for off, want in cluster_colors(k, orient[p]).items():
            q = p + off
            if cyclic:
                q %= size
            elif not 0 <= q < size or colors[q] is None:
                continue
            if colors[q] != want:
                raise ContractViolation(f"fill disagrees with the cluster of {p} at {q}")
    c = coloring(colors, k + 1, algorithm="delta-prime-k", k=k, anchors=list(anchors),
                 orientation={str(p): o for p, o in sorted(orient.items())},
                 runs=record, swap_interior=sorted(interior))
    return _certify(g, c, k + 1)
