"""Nodal degenerations of exceptional classes and blow-up size constraints.

When an exceptional sphere degenerates in a generic two-parameter family
it breaks into exactly two embedded components: one of square -1 with
Chern number 1 and one of square -2 with Chern number 0, meeting once.
This module searches for such splittings in the lattice, checks the
stability statements that rule them out for minimal-weight classes and
reduced shapes, and exposes the intersection-number values that the
degeneration arguments extract from Gromov-Witten counts.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .lattice import (
    BlowupLattice,
    HClass,
    SymplecticShape,
    adjunction_defect,
    c1,
    intersect,
    is_reduced,
    kodaira_nonneg,
    omega_area,
)

__all__ = [
    "Decomposition",
    "NotReducedError",
    "GW_EXCEPTIONAL_SELF_PAIR",
    "decompose_exceptional",
    "min_class_stability",
    "cp2_minimal_stability",
    "nested_size_check",
    "blowup_size_bound",
    "gw_blowdown_pair",
]

# Two-point invariant of an exceptional line class paired with itself
# through hyperplane classes of the exceptional divisor: always 1.
GW_EXCEPTIONAL_SELF_PAIR = 1


class NotReducedError(Exception):
    """The shape fails eps1 + eps2 + eps3 <= mu, so the check does not apply."""


@dataclass(frozen=True)
class Decomposition:
    """Splitting of a class into embedded-sphere components.

    Components must sum to the decomposed class and each have adjunction
    defect zero.
    """

    hclass: HClass
    components: tuple[HClass, ...]

    def __post_init__(self):
        components = tuple(self.components)
        if not components:
            raise ValueError("a decomposition needs at least one component")
        total = components[0]
        for comp in components[1:]:
            total = total + comp
        if total != self.hclass:
            raise ValueError(f"components sum to {total}, not {self.hclass}")
        for comp in components:
            if adjunction_defect(comp) != 0:
                raise ValueError(f"component {comp} is not an embedded-sphere candidate")
        object.__setattr__(self, "components", components)


def _classes_in_box(k: int, d_bound: int):
    """All integer classes with |d| <= d_bound, |m_i| <= d_bound, pruned to
    candidates for the square -1, Chern 1 component."""

    def rec(i, prefix, s, q):
        # s, q: remaining sum and sum of squares still to allocate.
        if i == k:
            if s == 0 and q == 0:
                yield prefix
            return
        t = k - i
        if q < 0 or s * s > t * q or q > t * d_bound * d_bound:
            return
        for v in range(-d_bound, d_bound + 1):
            yield from rec(i + 1, prefix + (v,), s - v, q - v * v)

    for d in range(-d_bound, d_bound + 1):
        # c1 = 1 and square -1 pin sum(m) and sum(m^2).
        target_sum = 3 * d - 1
        target_sq = d * d + 1
        for m in rec(0, (), target_sum, target_sq):
            yield HClass(d, m)


def decompose_exceptional(
    lat: BlowupLattice,
    E: HClass,
    shape: SymplecticShape | None = None,
    d_bound: int = 3,
) -> list[Decomposition]:
    """All splittings E = A0 + A1 into a (-1)- and a (-2)-component.

    Requires c1(A0) = 1, A0.A0 = -1, c1(A1) = 0, A1.A1 = -2 and
    A0.A1 = 1, with every coefficient of both components bounded by
    d_bound in absolute value.  When a shape is given, both components
    must have strictly positive area: zero-area components are not
    symplectic spheres.  Results are sorted by the (-1)-component.
    """
    if not lat.contains(E):
        raise ValueError(f"class {E} does not live in the rank-{lat.rank} lattice")
    if intersect(E, E) != -1 or c1(E) != 1:
        raise ValueError(f"{E} is not an exceptional class (square {intersect(E, E)}, c1 {c1(E)})")
    if shape is not None and shape.k != lat.k:
        raise ValueError("shape and lattice sizes differ")

    found = []
    for a0 in _classes_in_box(lat.k, d_bound):
        a1 = E - a0
        if abs(a1.d) > d_bound or any(abs(x) > d_bound for x in a1.m):
            continue
        if c1(a1) != 0 or intersect(a1, a1) != -2 or intersect(a0, a1) != 1:
            continue
        if shape is not None:
            if omega_area(shape, a0) <= 0 or omega_area(shape, a1) <= 0:
                continue
        found.append(Decomposition(hclass=E, components=(a0, a1)))
    found.sort(key=lambda dec: (dec.components[0].d, dec.components[0].m))
    return found


def min_class_stability(
    lat: BlowupLattice,
    shape: SymplecticShape,
    exceptional_set: list[HClass],
) -> bool:
    """Whether the minimal-weight exceptional class can never degenerate.

    Models the situation where exceptional_set is the full set of
    exceptional classes of a minimal, non-rational ambient manifold (so
    they are pairwise disjoint).  A degeneration E_k = A0 + A1 with A0
    in the set needs strictly positive area on A1 = E_k - A0; since the
    last weight is minimal this never happens, and the check makes that
    executable.  Equal weights block degeneration (area 0 is not > 0).
    """
    if shape.k != lat.k:
        raise ValueError("shape and lattice sizes differ")
    if lat.k == 0:
        return True
    if not kodaira_nonneg(exceptional_set):
        raise ValueError("exceptional classes must be pairwise disjoint")
    minimal = lat.exceptional(lat.k)
    for a0 in exceptional_set:
        if omega_area(shape, minimal - a0) > 0:
            return False
    return True


def cp2_minimal_stability(shape: SymplecticShape) -> bool:
    """Degeneration bound for reduced shapes on blow-ups of the plane.

    A degeneration of the minimal class would force a square -2 class
    sum(E_i, i in I) - d*L with |I| = 3d of positive area, i.e.
    sum of 3d weights > d*mu.  For a reduced shape, grouping the 3d
    largest weights into d triples bounds each triple by mu, so the
    check always passes; it is run honestly over every d.
    """
    if not is_reduced(shape):
        raise NotReducedError(f"shape {shape} is not reduced")
    for d in range(1, shape.k // 3 + 1):
        if sum(shape.eps[: 3 * d], Fraction(0)) > d * shape.mu:
            return False
    return True


def nested_size_check(eps1, eps2, link: int) -> bool:
    """Size constraint for a blow-up along a section meeting an earlier
    exceptional divisor bundle: if the pairing is nonzero, the earlier
    weight must strictly exceed the later one."""
    eps1, eps2 = Fraction(eps1), Fraction(eps2)
    if eps1 <= 0 or eps2 <= 0:
        raise ValueError("weights must be positive")
    return link == 0 or eps1 > eps2


def blowup_size_bound(alpha, eps, link: int) -> bool:
    """Size constraint for blowing up along a graph section in a manifold
    that is itself a blow-up of size alpha: a nonzero pairing with the
    exceptional divisor forces eps strictly below alpha."""
    alpha, eps = Fraction(alpha), Fraction(eps)
    if alpha <= 0 or eps <= 0:
        raise ValueError("sizes must be positive")
    return link == 0 or eps < alpha


def gw_blowdown_pair(link: int) -> int:
    """Two-point invariant of the graph section against the exceptional
    sublevel, evaluated as an intersection number: minus the pairing."""
    return -link
