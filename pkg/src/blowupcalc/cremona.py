"""Cremona moves on blow-up classes and shapes, and reduction to normal form.

A Cremona move on three blow-up indices is the lattice isometry
L -> 2L - Ei - Ej - El, Ei -> L - Ej - El (cyclically), fixing the other
basis classes.  On shape data it sends mu to 2mu - ei - ej - el and each
acted weight to mu minus the other two, preserving the anticanonical
volume mu^2/2 - sum(eps^2)/2 exactly.  Repeatedly applying the move to
the three largest weights reaches a reduced shape in finitely many steps
for rational input.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction

from .lattice import HClass, SymplecticShape, is_reduced

__all__ = [
    "CremonaMove",
    "ReductionTrace",
    "DegenerateShapeError",
    "IterationLimitError",
    "DEFAULT_MAX_ITERATIONS",
    "MAX_ITERATIONS_ENV",
    "cremona_on_class",
    "cremona_on_shape",
    "reduce",
    "shape_volume",
]

DEFAULT_MAX_ITERATIONS = 10 ** 6
MAX_ITERATIONS_ENV = "BLOWUPCALC_MAX_ITERATIONS"


class DegenerateShapeError(Exception):
    """A move produced non-positive shape data, or no move is available.

    Signals that the input is not realizable as a blow-up form reachable
    through Cremona moves.
    """


class IterationLimitError(RuntimeError):
    """The reduction iteration cap was exceeded.

    Reduction of rational shapes provably terminates, so hitting the cap
    indicates a bug or a deliberately tiny cap, never a valid outcome.
    """


@dataclass(frozen=True)
class CremonaMove:
    """Ordered triple of distinct 1-based blow-up indices to act on."""

    indices: tuple[int, int, int]

    def __post_init__(self):
        idx = tuple(self.indices)
        if len(idx) != 3 or len(set(idx)) != 3:
            raise ValueError(f"move needs three distinct indices, got {idx!r}")
        if not all(isinstance(i, int) and i >= 1 for i in idx):
            raise ValueError(f"move indices must be positive integers, got {idx!r}")
        object.__setattr__(self, "indices", idx)


@dataclass(frozen=True)
class ReductionTrace:
    """A reduction run: start shape, the moves applied in order, end shape."""

    start: SymplecticShape
    moves: tuple[CremonaMove, ...]
    end: SymplecticShape

    def __post_init__(self):
        object.__setattr__(self, "moves", tuple(self.moves))


def _check_move(rank_k: int, move: CremonaMove) -> None:
    if rank_k < 3:
        raise ValueError(f"Cremona move needs at least 3 blow-up points, have {rank_k}")
    if max(move.indices) > rank_k:
        raise ValueError(f"move indices {move.indices} out of range 1..{rank_k}")


def cremona_on_class(a: HClass, move: CremonaMove) -> HClass:
    """Apply the move to a class; preserves intersections and c1.

    For dL - sum(m_i E_i) the acted coefficients shift by
    t = d - (m_i + m_j + m_l): d' = d + t and m' = m + t on the triple.
    """
    _check_move(a.k, move)
    i, j, l = (x - 1 for x in move.indices)
    t = a.d - (a.m[i] + a.m[j] + a.m[l])
    m = list(a.m)
    for x in (i, j, l):
        m[x] += t
    return HClass(a.d + t, tuple(m))


def cremona_on_shape(shape: SymplecticShape, move: CremonaMove) -> SymplecticShape:
    """Apply the move to shape data and re-sort the weights.

    Raises DegenerateShapeError if the new mu or any new weight fails to
    be positive; a zero-size exceptional divisor has no symplectic
    meaning, so such inputs are rejected rather than silently truncated.
    """
    _check_move(shape.k, move)
    i, j, l = (x - 1 for x in move.indices)
    s = shape.eps[i] + shape.eps[j] + shape.eps[l]
    new_mu = 2 * shape.mu - s
    eps = list(shape.eps)
    for x in (i, j, l):
        eps[x] = shape.mu - (s - shape.eps[x])
    if new_mu <= 0 or any(eps[x] <= 0 for x in (i, j, l)):
        raise DegenerateShapeError(
            f"Cremona move {move.indices} degenerates shape {shape}: "
            f"mu'={new_mu}, new weights {[eps[x] for x in (i, j, l)]}"
        )
    return SymplecticShape(new_mu, tuple(eps))


def _resolve_cap(max_iterations: int | None) -> int:
    if max_iterations is not None:
        return max_iterations
    env = os.environ.get(MAX_ITERATIONS_ENV)
    if env is not None:
        return int(env)
    return DEFAULT_MAX_ITERATIONS


def reduce(shape: SymplecticShape, max_iterations: int | None = None) -> ReductionTrace:
    """Reduce a shape by Cremona moves on the three largest weights.

    The weights are stored sorted, so every step acts on indices (1,2,3);
    ties are thereby broken by position.  mu strictly decreases at each
    step, which for rational data gives termination by scaling to
    integers.  The cap (argument, else the BLOWUPCALC_MAX_ITERATIONS
    environment variable, else 10^6) only guards against bugs.
    """
    cap = _resolve_cap(max_iterations)
    moves: list[CremonaMove] = []
    cur = shape
    while not is_reduced(cur):
        if cur.k < 3:
            # Padding with zero weights, the would-be move immediately
            # produces a non-positive weight, so these inputs are
            # unrealizable: eps1 + eps2 > mu violates two-ball packing.
            raise DegenerateShapeError(
                f"shape {cur} with k={cur.k} < 3 is not reduced and admits no move"
            )
        if len(moves) >= cap:
            raise IterationLimitError(
                f"reduction exceeded {cap} iterations; this should be unreachable "
                f"for rational shapes"
            )
        move = CremonaMove((1, 2, 3))
        cur = cremona_on_shape(cur, move)
        moves.append(move)
    return ReductionTrace(start=shape, moves=tuple(moves), end=cur)


def shape_volume(shape: SymplecticShape) -> Fraction:
    """Anticanonical volume mu^2/2 - sum(eps^2)/2, invariant under moves."""
    return shape.anticanonical_volume()
