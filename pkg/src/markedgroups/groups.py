"""Marked groups: element normal forms, multiplication and generator sets.

Every family used by the package is covered here.  Elements are small frozen
dataclasses in normal form, so equality of elements is equality of
representations.

Semidirect products use the law ``(a, m)(b, n) = (a + (-1)^m b, m + n)``;
Cayley edges are generated by left multiplication ``x -> s*x``.  The builder
cross-checks this against the literal edge rules of each family.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Union

from .errors import DomainError


class Family(str, enum.Enum):
    GAMMA_SEC2 = "gamma-sec2"
    DELTA_SEC2 = "delta-sec2"
    GAMMA_K = "gamma-k"
    DELTA_K = "delta-k"
    GAMMA_PRIME_K = "gamma-prime-k"
    DELTA_PRIME_K = "delta-prime-k"
    ZXZ = "zxz"
    ZSEMIZ = "zsemiz"
    FREE_PRODUCT = "free-product"
    CYCLIC = "cyclic"
    PLAIN_Z = "z"


FIBER_FAMILIES = frozenset(
    {Family.GAMMA_SEC2, Family.DELTA_SEC2, Family.GAMMA_K, Family.DELTA_K}
)
LINE_FAMILIES = frozenset({Family.GAMMA_PRIME_K, Family.DELTA_PRIME_K, Family.PLAIN_Z})
PAIR_FAMILIES = frozenset({Family.ZXZ, Family.ZSEMIZ})
# families whose fiber/level action is twisted by inversion
TWISTED = frozenset({Family.DELTA_SEC2, Family.DELTA_K, Family.ZSEMIZ})
K_FAMILIES = frozenset(
    {Family.GAMMA_K, Family.DELTA_K, Family.GAMMA_PRIME_K, Family.DELTA_PRIME_K}
)


# ---------------------------------------------------------------- elements


@dataclass(frozen=True, order=True)
class Fiber:
    """``(i, n)`` with ``i`` a residue mod k and ``n`` the level."""

    i: int
    n: int

    def label(self) -> str:
        return f"{self.i},{self.n}"


@dataclass(frozen=True, order=True)
class Line:
    x: int

    def label(self) -> str:
        return str(self.x)


@dataclass(frozen=True, order=True)
class Dihedral:
    """``(ab)^t a^e`` in the infinite dihedral group ``<a, b | a^2 = b^2 = 1>``."""

    t: int
    e: int

    def label(self) -> str:
        return dihedral_word(self) or "1"


@dataclass(frozen=True, order=True)
class Pair:
    a: int
    b: int

    def label(self) -> str:
        return f"{self.a},{self.b}"


@dataclass(frozen=True, order=True)
class AltWord:
    """Reduced word in a free product: letters ``(side, factor_element)``.

    Sides strictly alternate and no letter is a factor identity.
    """

    letters: tuple = ()

    def label(self) -> str:
        if not self.letters:
            return "1"
        names = "LR"
        return ".".join(f"{names[s]}{g.label()}" for s, g in self.letters)


GroupElement = Union[Fiber, Line, Dihedral, Pair, AltWord]


# ------------------------------------------------------------------- specs


@dataclass(frozen=True)
class MarkedGroupSpec:
    """A group family, its parameter and (derived) fixed generator list."""

    family: Family
    k: int = 3
    modulus: int | None = None
    left: MarkedGroupSpec | None = field(default=None, compare=True)
    right: MarkedGroupSpec | None = field(default=None, compare=True)

    def __post_init__(self):
        fam = Family(self.family)
        object.__setattr__(self, "family", fam)
        if fam in K_FAMILIES and self.k < 3:
            raise DomainError(f"{fam.value} requires k >= 3, got k={self.k}")
        if fam in (Family.GAMMA_SEC2, Family.DELTA_SEC2) and self.k != 3:
            raise DomainError(f"{fam.value} is defined for k = 3 only")
        if fam is Family.CYCLIC and (self.modulus is None or self.modulus < 2):
            raise DomainError("cyclic group needs modulus >= 2")
        if fam is Family.FREE_PRODUCT:
            if self.left is None or self.right is None:
                raise DomainError("free product needs two factors")
            if Family.FREE_PRODUCT in (self.left.family, self.right.family):
                raise DomainError("nested free products are not supported")

    @property
    def fiber_size(self) -> int:
        return 3 if self.family in (Family.GAMMA_SEC2, Family.DELTA_SEC2) else self.k

    @cached_property
    def generators(self) -> tuple:
        return tuple(_generators(self))

    @cached_property
    def identity(self) -> GroupElement:
        return identity(self)

    def to_json(self) -> dict:
        out = {"family": self.family.value, "k": self.k}
        if self.modulus is not None:
            out["modulus"] = self.modulus
        if self.left is not None:
            out["left"] = self.left.to_json()
            out["right"] = self.right.to_json()
        return out

    @classmethod
    def from_json(cls, data: dict) -> MarkedGroupSpec:
        left = cls.from_json(data["left"]) if "left" in data else None
        right = cls.from_json(data["right"]) if "right" in data else None
        return cls(Family(data["family"]), data.get("k", 3), data.get("modulus"), left, right)

    def __str__(self) -> str:
        fam = self.family
        if fam is Family.CYCLIC:
            return f"cyclic:{self.modulus}"
        if fam is Family.FREE_PRODUCT:
            return f"({self.left})*({self.right})"
        if fam in K_FAMILIES:
            return f"{fam.value}[k={self.k}]"
        return fam.value


def gamma_sec2() -> MarkedGroupSpec:
    return MarkedGroupSpec(Family.GAMMA_SEC2)


def delta_sec2() -> MarkedGroupSpec:
    return MarkedGroupSpec(Family.DELTA_SEC2)


def gamma_k(k: int) -> MarkedGroupSpec:
    return MarkedGroupSpec(Family.GAMMA_K, k)


def delta_k(k: int) -> MarkedGroupSpec:
    return MarkedGroupSpec(Family.DELTA_K, k)


def gamma_prime_k(k: int) -> MarkedGroupSpec:
    return MarkedGroupSpec(Family.GAMMA_PRIME_K, k)


def delta_prime_k(k: int) -> MarkedGroupSpec:
    return MarkedGroupSpec(Family.DELTA_PRIME_K, k)


def cyclic(modulus: int) -> MarkedGroupSpec:
    return MarkedGroupSpec(Family.CYCLIC, modulus=modulus)


def plain_z() -> MarkedGroupSpec:
    return MarkedGroupSpec(Family.PLAIN_Z)


def free_product(left: MarkedGroupSpec, right: MarkedGroupSpec) -> MarkedGroupSpec:
    return MarkedGroupSpec(Family.FREE_PRODUCT, left=left, right=right)


# -------------------------------------------------------------- arithmetic

_ELEMENT_TYPE = {
    **{f: Fiber for f in FIBER_FAMILIES},
    Family.GAMMA_PRIME_K: Line,
    Family.PLAIN_Z: Line,
    Family.CYCLIC: Line,
    Family.DELTA_PRIME_K: Dihedral,
    Family.ZXZ: Pair,
    Family.ZSEMIZ: Pair,
    Family.FREE_PRODUCT: AltWord,
}


def _check(g, spec: MarkedGroupSpec):
    if not isinstance(g, _ELEMENT_TYPE[spec.family]):
        raise DomainError(f"{g!r} is not an element of {spec}")


def identity(spec: MarkedGroupSpec) -> GroupElement:
    return {
        Fiber: Fiber(0, 0),
        Line: Line(0),
        Dihedral: Dihedral(0, 0),
        Pair: Pair(0, 0),
        AltWord: AltWord(()),
    }[_ELEMENT_TYPE[spec.family]]


def mul(g: GroupElement, h: GroupElement, spec: MarkedGroupSpec) -> GroupElement:
    """Normal-form product ``g*h``."""
    _check(g, spec)
    _check(h, spec)
    fam = spec.family
    if fam in FIBER_FAMILIES:
        k = spec.fiber_size
        b = -h.i if fam in TWISTED and g.n % 2 else h.i
        return Fiber((g.i + b) % k, g.n + h.n)
    if fam is Family.CYCLIC:
        return Line((g.x + h.x) % spec.modulus)
    if fam in (Family.GAMMA_PRIME_K, Family.PLAIN_Z):
        return Line(g.x + h.x)
    if fam is Family.DELTA_PRIME_K:
        # a (ab) a = ba = (ab)^-1, so a^e (ab)^t = (ab)^((-1)^e t) a^e
        t = g.t - h.t if g.e else g.t + h.t
        return Dihedral(t, (g.e + h.e) % 2)
    if fam in PAIR_FAMILIES:
        b = -h.a if fam is Family.ZSEMIZ and g.b % 2 else h.a
        return Pair(g.a + b, g.b + h.b)
    return _word_mul(g, h, spec)


def _factor(spec: MarkedGroupSpec, side: int) -> MarkedGroupSpec:
    return spec.left if side == 0 else spec.right


def _word_mul(g: AltWord, h: AltWord, spec: MarkedGroupSpec) -> AltWord:
    left = list(g.letters)
    right = list(h.letters)
    while left and right and left[-1][0] == right[0][0]:
        side = left[-1][0]
        fspec = _factor(spec, side)
        prod = mul(left[-1][1], right[0][1], fspec)
        left.pop()
        right.pop(0)
        if prod != fspec.identity:
            left.append((side, prod))
            break
    return AltWord(tuple(left + right))


def inverse(g: GroupElement, spec: MarkedGroupSpec) -> GroupElement:
    _check(g, spec)
    fam = spec.family
    if fam in FIBER_FAMILIES:
        k = spec.fiber_size
        i = g.i if fam in TWISTED and g.n % 2 else -g.i
        return Fiber(i % k, -g.n)
    if fam is Family.CYCLIC:
        return Line(-g.x % spec.modulus)
    if fam in (Family.GAMMA_PRIME_K, Family.PLAIN_Z):
        return Line(-g.x)
    if fam is Family.DELTA_PRIME_K:
        return g if g.e else Dihedral(-g.t, 0)
    if fam in PAIR_FAMILIES:
        a = g.a if fam is Family.ZSEMIZ and g.b % 2 else -g.a
        return Pair(a, -g.b)
    return AltWord(
        tuple((s, inverse(x, _factor(spec, s))) for s, x in reversed(g.letters))
    )


def power(g: GroupElement, n: int, spec: MarkedGroupSpec) -> GroupElement:
    base = g if n >= 0 else inverse(g, spec)
    out = spec.identity
    for _ in range(abs(n)):
        out = mul(out, base, spec)
    return out


def is_normal_form(g: GroupElement, spec: MarkedGroupSpec) -> bool:
    """Representation invariants of an element of ``spec``."""
    if not isinstance(g, _ELEMENT_TYPE[spec.family]):
        return False
    fam = spec.family
    if fam in FIBER_FAMILIES:
        return 0 <= g.i < spec.fiber_size
    if fam is Family.CYCLIC:
        return 0 <= g.x < spec.modulus
    if fam is Family.DELTA_PRIME_K:
        return g.e in (0, 1)
    if fam is Family.FREE_PRODUCT:
        prev = None
        for side, x in g.letters:
            fspec = _factor(spec, side)
            if side == prev or x == fspec.identity or not is_normal_form(x, fspec):
                return False
            prev = side
    return True


# -------------------------------------------------------------- generators


def _generators(spec: MarkedGroupSpec) -> Iterator[GroupElement]:
    fam = spec.family
    if fam in (Family.GAMMA_SEC2, Family.DELTA_SEC2):
        yield from (Fiber(1, 0), Fiber(2, 0), Fiber(0, 1), Fiber(0, -1))
    elif fam in (Family.GAMMA_K, Family.DELTA_K):
        k = spec.k
        yield from (Fiber(i, 0) for i in range(1, k))
        ups = [Fiber(i, 1) for i in range(2, k)]
        yield from ups
        yield from (inverse(s, spec) for s in ups)
    elif fam is Family.GAMMA_PRIME_K:
        for d in range(2, 2 * spec.k - 2):
            yield Line(d)
            yield Line(-d)
    elif fam is Family.DELTA_PRIME_K:
        for length in range(2, 2 * spec.k - 2):
            yield dihedral_from_coordinate(length)
            yield dihedral_from_coordinate(-length)
    elif fam is Family.PLAIN_Z:
        yield from (Line(1), Line(-1))
    elif fam is Family.CYCLIC:
        yield Line(1)
        if spec.modulus > 2:
            yield Line(spec.modulus - 1)
    elif fam in PAIR_FAMILIES:
        yield from (Pair(2, 0), Pair(-2, 0), Pair(3, 0), Pair(-3, 0), Pair(0, 1), Pair(0, -1))
    else:
        for side, fspec in ((0, spec.left), (1, spec.right)):
            yield from (AltWord(((side, s),)) for s in fspec.generators)


def generator_set(spec: MarkedGroupSpec) -> list:
    return list(spec.generators)


def check_generators(spec: MarkedGroupSpec) -> None:
    """Raise DomainError unless the generator list is symmetric and identity-free."""
    gens = spec.generators
    if len(set(gens)) != len(gens):
        raise DomainError(f"duplicate generators in {spec}")
    if spec.identity in gens:
        raise DomainError(f"identity among generators of {spec}")
    missing = [s for s in gens if inverse(s, spec) not in gens]
    if missing:
        raise DomainError(f"generators of {spec} not symmetric: {missing}")


# ---------------------------------------------------------- dihedral lines


def dihedral_line_coordinate(g: Dihedral) -> int:
    """Signed word length: ``+len`` if the reduced word starts with ``a``,
    ``-len`` if it starts with ``b``.

    Right multiplication by ``a`` or ``b`` moves this coordinate by one.
    """
    return 2 * g.t + g.e


def dihedral_from_coordinate(x: int) -> Dihedral:
    e = x % 2
    return Dihedral((x - e) // 2, e)


def cayley_line_coordinate(g: Dihedral) -> int:
    """Coordinate of ``g`` on the left-multiplication Cayley line.

    Left multiplication by ``a`` or ``b`` moves it by one; it equals
    ``dihedral_line_coordinate(g^-1)``.
    """
    return -2 * g.t if g.e == 0 else 2 * g.t + 1


def dihedral_from_cayley_coordinate(p: int) -> Dihedral:
    if p % 2 == 0:
        return Dihedral(-p // 2, 0)
    return Dihedral((p - 1) // 2, 1)


def dihedral_word(g: Dihedral) -> str:
    x = dihedral_line_coordinate(g)
    first, second = ("a", "b") if x > 0 else ("b", "a")
    return "".join(first if j % 2 == 0 else second for j in range(abs(x)))


# --------------------------------------------------------- serialization


def element_to_json(g: GroupElement):
    if isinstance(g, Fiber):
        return [g.i, g.n]
    if isinstance(g, Line):
        return g.x
    if isinstance(g, Dihedral):
        return {"t": g.t, "e": g.e}
    if isinstance(g, Pair):
        return [g.a, g.b]
    return [[s, element_to_json(x)] for s, x in g.letters]


def element_from_json(data, spec: MarkedGroupSpec) -> GroupElement:
    typ = _ELEMENT_TYPE[spec.family]
    if typ is Fiber:
        return Fiber(*data)
    if typ is Line:
        return Line(data)
    if typ is Dihedral:
        return Dihedral(data["t"], data["e"])
    if typ is Pair:
        return Pair(*data)
    return AltWord(
        tuple((s, element_from_json(x, _factor(spec, s))) for s, x in data)
    )
