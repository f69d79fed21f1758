"""Homology lattice of a k-fold blow-up of the projective plane.

The lattice has basis L, E1, ..., Ek with the diagonal intersection form
(+1, -1, ..., -1) and anticanonical pairing vector 3L - sum(Ei).  Classes
are stored as d*L - sum(m[i]*E_{i+1}) with integer coefficients, so all
pairings are exact integer arithmetic; areas against symplectic data are
exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "BlowupLattice",
    "HClass",
    "SymplecticShape",
    "make_lattice",
    "intersect",
    "c1",
    "adjunction_defect",
    "enumerate_exceptional",
    "kodaira_nonneg",
    "omega_area",
    "is_reduced",
]


@dataclass(frozen=True)
class HClass:
    """Integer homology class d*L - sum(m[i]*E_{i+1}).

    The sign convention puts the exceptional basis classes at m = -1: the
    class E_i is HClass(0, (0, ..., -1, ..., 0)) with the -1 in slot i-1.
    """

    d: int
    m: tuple[int, ...]

    def __post_init__(self):
        if not isinstance(self.d, int):
            raise TypeError(f"d must be an integer, got {self.d!r}")
        m = tuple(self.m)
        if not all(isinstance(x, int) for x in m):
            raise TypeError(f"m must be a tuple of integers, got {self.m!r}")
        object.__setattr__(self, "m", m)

    @property
    def k(self) -> int:
        return len(self.m)

    def __add__(self, other: "HClass") -> "HClass":
        _check_rank(self, other)
        return HClass(self.d + other.d, tuple(a + b for a, b in zip(self.m, other.m)))

    def __sub__(self, other: "HClass") -> "HClass":
        _check_rank(self, other)
        return HClass(self.d - other.d, tuple(a - b for a, b in zip(self.m, other.m)))

    def __neg__(self) -> "HClass":
        return HClass(-self.d, tuple(-a for a in self.m))

    def __rmul__(self, c: int) -> "HClass":
        if not isinstance(c, int):
            return NotImplemented
        return HClass(c * self.d, tuple(c * a for a in self.m))

    def __str__(self) -> str:
        terms = [(self.d, "L")] + [(-mi, f"E{i}") for i, mi in enumerate(self.m, start=1)]
        parts = [(("-" if c < 0 else "+"), f"{'' if abs(c) == 1 else abs(c)}{s}")
                 for c, s in terms if c != 0]
        if not parts:
            return "0"
        head = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        return head + "".join(f" {sign} {body}" for sign, body in parts[1:])


@dataclass(frozen=True)
class BlowupLattice:
    """The rank k+1 lattice 1 (+) k<-1> with basis L, E1..Ek."""

    k: int

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 0:
            raise ValueError(f"number of blow-up points must be a non-negative integer, got {self.k!r}")

    @property
    def rank(self) -> int:
        return self.k + 1

    def zero(self) -> HClass:
        return HClass(0, (0,) * self.k)

    def line(self) -> HClass:
        return HClass(1, (0,) * self.k)

    def exceptional(self, i: int) -> HClass:
        """The i-th exceptional class E_i, 1-based."""
        if not 1 <= i <= self.k:
            raise ValueError(f"exceptional index {i} out of range 1..{self.k}")
        return HClass(0, tuple(-1 if j == i - 1 else 0 for j in range(self.k)))

    def canonical_class_pairing(self) -> HClass:
        """The vector realizing the first Chern class, 3L - sum(Ei)."""
        return HClass(3, (1,) * self.k)

    def contains(self, a: HClass) -> bool:
        return a.k == self.k


def make_lattice(k: int) -> BlowupLattice:
    return BlowupLattice(k)


def _check_rank(a: HClass, b: HClass) -> None:
    if a.k != b.k:
        raise ValueError(f"classes live in different lattices: k={a.k} vs k={b.k}")


def intersect(a: HClass, b: HClass) -> int:
    """Intersection number under the diagonal form (+1, -1, ..., -1)."""
    _check_rank(a, b)
    return a.d * b.d - sum(x * y for x, y in zip(a.m, b.m))


def c1(a: HClass) -> int:
    """First Chern number 3d - sum(m), the pairing with 3L - sum(Ei)."""
    return 3 * a.d - sum(a.m)


def adjunction_defect(a: HClass) -> int:
    """Genus-zero adjunction defect (2 + a.a - c1(a)) / 2.

    Embedded-sphere candidates have defect 0.  The numerator is even for
    every integer class here (d^2 + 3d and m^2 + m are even termwise), so
    the division is exact; the check is kept as a guard.
    """
    num = 2 + intersect(a, a) - c1(a)
    if num % 2 != 0:
        raise ValueError(f"adjunction defect of {a} is not an integer")
    return num // 2


def _bounded_nonneg_vectors(k: int, total: int, total_sq: int, cap: int):
    """All m in {0..cap}^k with sum(m) = total and sum(m^2) = total_sq."""

    def rec(i: int, s: int, q: int, prefix: tuple[int, ...]):
        if i == k:
            if s == 0 and q == 0:
                yield prefix
            return
        t = k - i
        # Cauchy-Schwarz prune: s^2 <= t*q, and q <= s*cap since entries <= cap.
        if s < 0 or q < 0 or s * s > t * q or q > s * cap:
            return
        for v in range(min(cap, s) + 1):
            if v * v > q:
                break
            yield from rec(i + 1, s - v, q - v * v, prefix + (v,))

    yield from rec(0, total, total_sq, ())


def enumerate_exceptional(lat: BlowupLattice, d_max: int) -> list[HClass]:
    """All numerically exceptional classes (E.E = -1, c1 = 1) with d <= d_max.

    These are the basis classes E_i together with the classes
    d*L - sum(m_i E_i), d >= 1, m_i >= 0, solving sum(m) = 3d - 1 and
    sum(m^2) = d^2 + 1.  Each coefficient then satisfies m_i <= d, which
    bounds the search.  Output is sorted by d, then lexicographically on m.
    """
    if d_max < 0:
        raise ValueError("d_max must be non-negative")
    k = lat.k
    found: list[HClass] = [lat.exceptional(i) for i in range(1, k + 1)]
    for d in range(1, d_max + 1):
        for m in _bounded_nonneg_vectors(k, 3 * d - 1, d * d + 1, d):
            found.append(HClass(d, m))
    found.sort(key=lambda a: (a.d, a.m))
    return found


def kodaira_nonneg(classes: Sequence[HClass]) -> bool:
    """True iff all distinct pairs are disjoint (E.E' = 0).

    This is the numerical criterion for the ambient manifold to have
    Kodaira dimension >= 0 when applied to its set of exceptional classes.
    """
    for i in range(len(classes)):
        for j in range(i + 1, len(classes)):
            if intersect(classes[i], classes[j]) != 0:
                return False
    return True


def _to_fraction(x) -> Fraction:
    if isinstance(x, float):
        raise TypeError("floating point is not allowed in exact shape data")
    return Fraction(x)


@dataclass(frozen=True)
class SymplecticShape:
    """Cohomology data (mu; eps_1 >= ... >= eps_k) of a blow-up form.

    mu is the integral over the line class, eps_i the blow-up weights.
    Weights re-sort non-increasing on construction; all entries must be
    positive rationals.  The type does not know about realizability:
    shapes with non-positive anticanonical volume are representable, and
    degeneracy is reported by the operations that would need positivity.
    """

    mu: Fraction
    eps: tuple[Fraction, ...]

    def __post_init__(self):
        mu = _to_fraction(self.mu)
        eps = tuple(sorted((_to_fraction(e) for e in self.eps), reverse=True))
        if mu <= 0:
            raise ValueError(f"mu must be positive, got {mu}")
        if any(e <= 0 for e in eps):
            raise ValueError("all blow-up weights must be positive")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "eps", eps)

    @property
    def k(self) -> int:
        return len(self.eps)

    @property
    def n(self) -> int:
        """Complex dimension of the fiber; this calculus is the surface case."""
        return 2

    def anticanonical_volume(self) -> Fraction:
        return self.mu ** 2 / 2 - sum((e ** 2 for e in self.eps), Fraction(0)) / 2

    def __str__(self) -> str:
        return f"({self.mu}; {', '.join(str(e) for e in self.eps)})"


def omega_area(shape: SymplecticShape, a: HClass) -> Fraction:
    """Area d*mu - sum(m_i eps_i) of a class against a shape."""
    if shape.k != a.k:
        raise ValueError(f"shape has {shape.k} weights but class has rank {a.k}")
    return a.d * shape.mu - sum((mi * ei for mi, ei in zip(a.m, shape.eps)), Fraction(0))


def is_reduced(shape: SymplecticShape) -> bool:
    """True iff eps_1 + eps_2 + eps_3 <= mu, padding with zeros when k < 3."""
    return sum(shape.eps[:3], Fraction(0)) <= shape.mu
