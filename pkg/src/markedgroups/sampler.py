"""Finite windows of Bernoulli shift configurations.

Each element's bit is drawn from its own counter-based stream: a BLAKE2b
hash of ``(seed, stream, element key)`` turned into a uniform number in
[0, 1).  Windows of different shapes therefore agree on shared elements,
which makes the shift action exactly testable.
"""

from __future__ import annotations

import hashlib
import json
from collections import Counter, deque
from dataclasses import dataclass, field

from . import groups as G
from .errors import DomainError, ResourceError
from .groups import MarkedGroupSpec


def element_key(g) -> str:
    return json.dumps(G.element_to_json(g), sort_keys=True, separators=(",", ":"))


def uniform(seed: int, key: str, stream: int = 0) -> float:
    h = hashlib.blake2b(f"{seed}|{stream}|{key}".encode(), digest_size=8)
    return int.from_bytes(h.digest(), "big") / 2.0**64


def _check_p(p: float) -> None:
    if not 0 < p < 1:
        raise DomainError(f"p must lie strictly between 0 and 1, got {p}")


@dataclass(frozen=True)
class Configuration:
    spec: MarkedGroupSpec
    window: tuple
    values: dict = field(compare=False)
    p: float = 0.5
    seed: int = 0

    def __post_init__(self):
        _check_p(self.p)
        if set(self.values) != set(self.window):
            raise DomainError("values must be defined exactly on the window")
        if any(v not in (0, 1) for v in self.values.values()):
            raise DomainError("values must be bits")

    def __getitem__(self, g):
        return self.values[g]

    def to_json(self) -> str:
        return json.dumps({
            "spec": self.spec.to_json(),
            "p": self.p,
            "seed": self.seed,
            "values": {element_key(g): self.values[g] for g in self.window},
        }, sort_keys=True)


def ball_elements(spec: MarkedGroupSpec, r: int, cap: int = 200_000) -> list:
    """Elements within word length ``r`` of the identity, in BFS order."""
    if r < 0:
        raise DomainError("radius must be >= 0")
    ident = spec.identity
    dist = {ident: 0}
    out = [ident]
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        if dist[x] == r:
            continue
        for s in spec.generators:
            y = G.mul(s, x, spec)
            if y not in dist:
                if len(out) >= cap:
                    raise ResourceError(f"ball of radius {r} exceeds cap {cap}")
                dist[y] = dist[x] + 1
                out.append(y)
                queue.append(y)
    return out


def sample(spec: MarkedGroupSpec, window, p: float, seed: int, stream: int = 0) -> Configuration:
    """Independent bits on ``window``, each 0 with probability ``p``."""
    _check_p(p)
    window = tuple(window)
    values = {g: 0 if uniform(seed, element_key(g), stream) < p else 1 for g in window}
    return Configuration(spec, window, values, p, seed)


def shift(x: Configuration, g) -> Configuration:
    """``(g . x)(h) = x(g^-1 h)``, carried on the translated window ``g . window``."""
    window = tuple(G.mul(g, w, x.spec) for w in x.window)
    values = {G.mul(g, w, x.spec): x.values[w] for w in x.window}
    return Configuration(x.spec, window, values, x.p, x.seed)


def window_freeness_check(x: Configuration, r: int) -> list:
    """Nontrivial ``g`` in the ``r``-ball with ``g . x = x`` wherever both are defined.

    This only checks a window: an empty answer is necessary for ``x`` to
    lie in the free part, never sufficient.
    """
    ball = ball_elements(x.spec, r)
    dom = set(x.window)
    if not dom.issuperset(ball):
        raise DomainError(f"window does not contain the {r}-ball")
    ident = x.spec.identity
    out = []
    for g in ball:
        if g == ident:
            continue
        ginv = G.inverse(g, x.spec)
        same = True
        for h in x.window:
            src = G.mul(ginv, h, x.spec)
            if src in dom and x.values[src] != x.values[h]:
                same = False
                break
        if same:
            out.append(g)
    return out


def cylinder_probability(pattern: dict, p: float) -> float:
    """Measure of the cylinder fixing ``pattern``: ``p^#0 (1-p)^#1``."""
    _check_p(p)
    zeros = sum(1 for v in pattern.values() if v == 0)
    return p**zeros * (1 - p) ** (len(pattern) - zeros)


def cylinder_counts(spec: MarkedGroupSpec, domain, p: float, samples: int, seed: int) -> Counter:
    """Pattern counts on ``domain`` over ``samples`` independent configurations."""
    domain = tuple(domain)
    keys = [element_key(g) for g in domain]
    counts = Counter()
    for s in range(samples):
        counts[tuple(0 if uniform(seed, key, s) < p else 1 for key in keys)] += 1
    return counts
