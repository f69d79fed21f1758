"""Volume polynomials of blow-up bundles over the sphere.

Blowing up an M-bundle over S^2 along a section with weight eps removes
mu0*V - style volume: the total volume of the blown-up bundle is

    mu0*V - v_eps * (mu0 + lambda - ell*eps/(n+1)),   v_eps = eps^n/n!,

where lambda is the coupling-class integral over the section and ell the
vertical Chern number of its normal data.  Keeping V formal, failure of
this polynomial to factor as (V - v_eps)*(base size) certifies that the
bundle is not smoothly trivial.  Iterated blow-ups are described by
towers of per-stage section data; their volume polynomials drive the
rank certificate and the fiber-sum feasibility test.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Sequence

from . import linalg
from .polynomial import VolumePolynomial, monomial_key

__all__ = [
    "TowerStage",
    "BundleTower",
    "TrivialityFactorization",
    "RankCertificate",
    "RankDeficientError",
    "FiberSumWitness",
    "ball_volume",
    "vol_single_blowup",
    "triviality_test",
    "symp_image_family",
    "vol_multi_blowup",
    "vol_tower",
    "chern_consistency",
    "rank_certificate",
    "fibersum_feasibility",
    "nested_blowup_tower",
    "tower_correction",
]


def _frac(value) -> Fraction:
    if isinstance(value, float):
        raise TypeError("floating point is not allowed in exact tower data")
    return Fraction(value)


def ball_volume(n: int, eps: str = "eps1") -> VolumePolynomial:
    """Volume eps^n / n! of a ball of capacity eps, as a polynomial."""
    if n < 1:
        raise ValueError("fiber dimension must be at least 1")
    return VolumePolynomial.variable(eps) ** n / factorial(n)


def _volume_symbol(V) -> VolumePolynomial:
    if isinstance(V, str):
        return VolumePolynomial.variable(V)
    return VolumePolynomial.constant(_frac(V))


def vol_single_blowup(n: int, V="V", lam=0, ell: int = 0,
                      mu: str = "mu0", eps: str = "eps1") -> VolumePolynomial:
    """Volume polynomial of a single blow-up bundle over S^2.

    Returns mu0*V - v_eps*(mu0 + lam - ell*eps/(n+1)).  V may be a formal
    symbol name or an exact rational fiber volume.
    """
    v = ball_volume(n, eps)
    mu_p = VolumePolynomial.variable(mu)
    eps_p = VolumePolynomial.variable(eps)
    section = mu_p + _frac(lam) - Fraction(ell, n + 1) * eps_p
    return mu_p * _volume_symbol(V) - v * section


@dataclass(frozen=True)
class TrivialityFactorization:
    """Witness p = (V - eps^n/n!) * (mu1 + slope*eps)."""

    mu1: VolumePolynomial
    slope: Fraction


def triviality_test(p: VolumePolynomial, n: int, V="V") -> TrivialityFactorization | None:
    """Try to factor p as (V - eps^n/n!) * (mu1 + slope*eps).

    Returns the unique factorization when it exists; None is a
    certificate that the bundle with volume polynomial p is not smoothly
    trivial.  p must involve exactly one eps-family variable and at most
    one mu-family variable besides V.
    """
    used = p.canonical().variables
    eps_vars = [v for v in used if v.startswith("eps")]
    mu_vars = [v for v in used if v.startswith("mu")]
    extra = [v for v in used if not (v.startswith("eps") or v.startswith("mu")
                                     or (isinstance(V, str) and v == V))]
    if len(eps_vars) != 1 or len(mu_vars) > 1 or extra:
        raise ValueError(f"polynomial in unexpected variables {used}")
    eps = eps_vars[0]
    mu = mu_vars[0] if mu_vars else None

    divisor = _volume_symbol(V) - ball_volume(n, eps)
    q = p.exact_divide(divisor)
    if q is None:
        return None
    q = q.canonical()
    # The quotient must be affine of the shape mu1(mu0) + slope*eps.
    allowed = [{}, {eps: 1}]
    if mu is not None:
        allowed.append({mu: 1})
    for exp, _ in q.terms.items():
        mono = {v: e for v, e in zip(q.variables, exp) if e}
        if mono not in allowed:
            return None
    slope = q.coefficient({eps: 1})
    mu1 = (q - slope * VolumePolynomial.variable(eps)).canonical()
    return TrivialityFactorization(mu1=mu1, slope=slope)


def symp_image_family(lam, ell: int) -> bool:
    """Volume-profile membership for families of the one-point blow-up of CP^2.

    The profiles realizable from symplectic bundle classes are exactly
    those with lam = ell/3.
    """
    return _frac(lam) == Fraction(ell, 3)


@dataclass(frozen=True)
class TowerStage:
    """Section data of one blow-up stage.

    n_coeffs: coefficients on the chosen basis of the base's second
    homology; m_coeffs: couplings to the earlier exceptional classes
    (entry j is the coefficient on stage j+1 < i); lambda_offset: the
    rational part of the coupling-class integral; chern: the vertical
    Chern number ell of the stage.
    """

    n_coeffs: tuple[int, ...]
    m_coeffs: tuple[int, ...]
    lambda_offset: Fraction = Fraction(0)
    chern: int = 0

    def __post_init__(self):
        object.__setattr__(self, "n_coeffs", tuple(int(x) for x in self.n_coeffs))
        object.__setattr__(self, "m_coeffs", tuple(int(x) for x in self.m_coeffs))
        object.__setattr__(self, "lambda_offset", _frac(self.lambda_offset))
        if not isinstance(self.chern, int):
            raise TypeError(f"chern weight must be an integer, got {self.chern!r}")


@dataclass(frozen=True)
class BundleTower:
    """Iterated blow-up bundle descriptor over S^2.

    n is the complex fiber dimension, r the rank of the base's second
    homology, k the number of blow-up stages.  base_Ia lists the
    coordinates of the coupling-class integral of the reference section
    (a degree-1 function of the lam variables) and base_Ic its vertical
    Chern number.  The symplectic flag is a claim checked against a
    Chern basis by chern_consistency, not a self-validating invariant.
    """

    n: int
    r: int
    k: int
    stages: tuple[TowerStage, ...]
    base_Ia: tuple[Fraction, ...] = ()
    base_Ic: int = 0
    symplectic: bool = False

    def __post_init__(self):
        object.__setattr__(self, "stages", tuple(self.stages))
        object.__setattr__(self, "base_Ia", tuple(_frac(x) for x in self.base_Ia))
        if self.n < 1:
            raise ValueError("fiber dimension must be at least 1")
        if self.r < 0 or self.k < 0:
            raise ValueError("r and k must be non-negative")
        if len(self.stages) != self.k:
            raise ValueError(f"expected {self.k} stages, got {len(self.stages)}")
        if len(self.base_Ia) != self.r:
            raise ValueError(f"base_Ia must have length r={self.r}")
        for i, stage in enumerate(self.stages, start=1):
            if len(stage.n_coeffs) != self.r:
                raise ValueError(f"stage {i} has {len(stage.n_coeffs)} n-coefficients, expected {self.r}")
            if len(stage.m_coeffs) != i - 1:
                raise ValueError(
                    f"stage {i} couples to {len(stage.m_coeffs)} earlier stages, expected {i - 1}"
                )


def _eps(i: int) -> VolumePolynomial:
    return VolumePolynomial.variable(f"eps{i}")


def _lam(alpha: int) -> VolumePolynomial:
    return VolumePolynomial.variable(f"lam{alpha}")


def _stage_coupling(tower: BundleTower, i: int) -> VolumePolynomial:
    """Coupling integral of stage i: I_a(s0) + sum(n*lam) + sum(m*eps) + offset."""
    stage = tower.stages[i - 1]
    out = VolumePolynomial.constant(stage.lambda_offset)
    for alpha, coef in enumerate(tower.base_Ia, start=1):
        if coef:
            out = out + coef * _lam(alpha)
    for alpha, coef in enumerate(stage.n_coeffs, start=1):
        if coef:
            out = out + coef * _lam(alpha)
    for j, coef in enumerate(stage.m_coeffs, start=1):
        if coef:
            out = out + coef * _eps(j)
    return out


def vol_multi_blowup(tower: BundleTower, mu: Sequence[str]) -> VolumePolynomial:
    """Volume polynomial of a fiber sum of k single blow-up bundles.

    Each stage i blows up a trivial bundle whose fiber already carries the
    other blow-ups, with its own base size mu[i-1]:

        sum_i [ (V - sum_{j != i} v_j) * mu_i
                - v_i * (mu_i + lambda_i - ell_i*eps_i/(n+1)) ].
    """
    if len(mu) != tower.k:
        raise ValueError(f"need {tower.k} base-size symbols, got {len(mu)}")
    n = tower.n
    v = [ball_volume(n, f"eps{i}") for i in range(1, tower.k + 1)]
    total = VolumePolynomial.zero()
    for i in range(1, tower.k + 1):
        stage = tower.stages[i - 1]
        mu_p = VolumePolynomial.variable(mu[i - 1])
        fiber = _volume_symbol("V")
        for j in range(1, tower.k + 1):
            if j != i:
                fiber = fiber - v[j - 1]
        section = mu_p + _stage_coupling(tower, i) - Fraction(stage.chern, n + 1) * _eps(i)
        total = total + fiber * mu_p - v[i - 1] * section
    return total


def vol_tower(tower: BundleTower, mu: str = "mu0") -> VolumePolynomial:
    """Volume polynomial of an iterated blow-up bundle with one base size.

    Returns mu*(V - sum v_i) - sum_i (coupling_i - ell_i*eps_i/(n+1)) * v_i
    with coupling_i = I_a(s0) + sum(n_ia*lam_a) + sum_{j<i}(m_ij*eps_j)
    plus the stage's rational offset.
    """
    n = tower.n
    mu_p = VolumePolynomial.variable(mu)
    fiber = _volume_symbol("V")
    total_correction = VolumePolynomial.zero()
    for i in range(1, tower.k + 1):
        stage = tower.stages[i - 1]
        v_i = ball_volume(n, f"eps{i}")
        fiber = fiber - v_i
        section = _stage_coupling(tower, i) - Fraction(stage.chern, n + 1) * _eps(i)
        total_correction = total_correction + v_i * section
    return mu_p * fiber - total_correction


def tower_correction(tower: BundleTower) -> VolumePolynomial:
    """The mu-independent coefficient data of a tower's volume polynomial.

    This is vol_tower(t, mu) minus mu*(V - sum v_i); fiber sums add
    exactly on this part, which is what the feasibility test matches.
    """
    n = tower.n
    total = VolumePolynomial.zero()
    for i in range(1, tower.k + 1):
        stage = tower.stages[i - 1]
        v_i = ball_volume(n, f"eps{i}")
        section = _stage_coupling(tower, i) - Fraction(stage.chern, n + 1) * _eps(i)
        total = total - v_i * section
    return total


def chern_consistency(tower: BundleTower, chern_basis: Sequence[int]) -> bool:
    """Check the vertical Chern numbers demanded of a symplectic tower.

    Stage i of a symplectic blow-up satisfies
    ell_i = I_c(s0) + sum(n_ia * c1(B_a)) + sum_{j<i} m_ij.
    """
    if len(chern_basis) != tower.r:
        raise ValueError(f"chern basis must have length r={tower.r}")
    for stage in tower.stages:
        expected = (
            tower.base_Ic
            + sum(na * ca for na, ca in zip(stage.n_coeffs, chern_basis))
            + sum(stage.m_coeffs)
        )
        if stage.chern != expected:
            return False
    return True


class RankDeficientError(Exception):
    """The stage-parameter map failed injectivity; indicates a bug."""


@dataclass(frozen=True)
class RankCertificate:
    """Exact-rank certificate for the stage-parameter coefficient map."""

    n: int
    r: int
    k: int
    chern_basis: tuple[int, ...]
    rank: int
    expected: int
    parameters: tuple[str, ...]
    functionals: tuple[str, ...]

    @property
    def injective(self) -> bool:
        return self.rank == self.expected == len(self.parameters)


def _monomial_label(variables: tuple[str, ...], exp: tuple[int, ...]) -> str:
    parts = [v if e == 1 else f"{v}^{e}" for v, e in zip(variables, exp) if e]
    return "*".join(parts) if parts else "1"


def rank_certificate(n: int, r: int, k: int, chern_basis: Sequence[int]) -> RankCertificate:
    """Certify that the per-stage parameters inject into volume coefficients.

    Per stage i the free parameters are the section-class coefficients
    n_i1..n_ir on the base homology and m_ij on the other exceptional
    classes (j != i), plus the vertical Chern twist ell_i: r + k
    parameters per stage, k*(r+k) in total.  Each is sent to the
    derivative of the volume polynomial in that parameter (with the
    Chern numbers of symplectic stages tied to the section class through
    the given basis), and the rank of the resulting coefficient matrix is
    computed exactly.  Full rank certifies the k*(r+k) lower bound on
    independent bundle classes.
    """
    chern_basis = tuple(int(c) for c in chern_basis)
    if len(chern_basis) != r:
        raise ValueError(f"chern basis must have length r={r}")
    if r < 0 or k < 0:
        raise ValueError("r and k must be non-negative")

    params: list[tuple[str, VolumePolynomial]] = []
    for i in range(1, k + 1):
        v_i = ball_volume(n, f"eps{i}")
        twist = Fraction(1, n + 1) * v_i * _eps(i)
        for alpha in range(1, r + 1):
            col = -(v_i * _lam(alpha)) + chern_basis[alpha - 1] * twist
            params.append((f"n[{i},{alpha}]", col))
        for j in range(1, k + 1):
            if j == i:
                continue
            col = -(v_i * _eps(j)) + (twist if j < i else VolumePolynomial.zero())
            params.append((f"m[{i},{j}]", col))
        params.append((f"ell[{i}]", twist))

    expected = k * (r + k)
    if not params:
        return RankCertificate(n, r, k, chern_basis, 0, expected, (), ())

    columns = [col.canonical() for _, col in params]
    monomials: set[tuple[str, tuple[int, ...]]] = set()
    all_vars = sorted({v for col in columns for v in col.variables})
    var_tuple = tuple(all_vars)

    def embed(col: VolumePolynomial) -> dict[tuple[int, ...], Fraction]:
        pos = {v: i for i, v in enumerate(var_tuple)}
        out = {}
        for exp, coef in col.terms.items():
            new = [0] * len(var_tuple)
            for v, e in zip(col.variables, exp):
                new[pos[v]] = e
            out[tuple(new)] = coef
        return out

    embedded = [embed(col) for col in columns]
    row_monos = sorted({e for col in embedded for e in col}, key=monomial_key, reverse=True)
    matrix = [[col.get(mono, Fraction(0)) for col in embedded] for mono in row_monos]
    got, pivots = linalg.rank_with_pivots(matrix)

    functionals = tuple(_monomial_label(var_tuple, row_monos[row]) for row, _ in pivots)
    cert = RankCertificate(
        n=n, r=r, k=k, chern_basis=chern_basis, rank=got, expected=expected,
        parameters=tuple(name for name, _ in params), functionals=functionals,
    )
    if got < expected:
        raise RankDeficientError(
            f"coefficient map has rank {got} < {expected} for n={n}, r={r}, k={k}"
        )
    return cert


@dataclass(frozen=True)
class FiberSumWitness:
    """Summand towers whose coefficient data add up to a target tower."""

    summands: tuple[BundleTower, ...]

    @property
    def m(self) -> int:
        return len(self.summands)


def nested_blowup_tower(n: int, r: int, k: int, ell_last: int) -> BundleTower:
    """Tower of k trivial blow-ups whose last stage follows a line in the
    first exceptional divisor (coupling m_{k,1} = 1) with vertical Chern
    number ell_last.  All other data vanish.
    """
    if k < 1:
        raise ValueError("need at least one stage")
    stages = [TowerStage((0,) * r, (0,) * (i - 1)) for i in range(1, k)]
    last_m = tuple(1 if j == 0 else 0 for j in range(k - 1))
    stages.append(TowerStage((0,) * r, last_m, Fraction(0), ell_last))
    return BundleTower(n=n, r=r, k=k, stages=tuple(stages),
                       base_Ia=(Fraction(0),) * r, base_Ic=0)


def fibersum_feasibility(
    target: BundleTower, m_max: int = 8, chern_basis: Sequence[int] = ()
) -> FiberSumWitness | None:
    """Decide whether a tower's coefficient data splits into symplectic summands.

    Searches m = 1..m_max summand towers, each required to satisfy the
    Chern consistency of a symplectic blow-up, with the coupling and
    Chern integrals of the reference section summing to the target's and
    the volume coefficient vector matching monomial by monomial.  The
    constraints are linear; each m is solved exactly, and the smallest
    feasible m is returned as a witness (None when every m fails).
    """
    chern_basis = tuple(int(c) for c in chern_basis)
    if len(chern_basis) != target.r:
        raise ValueError(f"chern basis must have length r={target.r}")
    if m_max < 1:
        raise ValueError("m_max must be at least 1")

    r, k = target.r, target.k
    n_m = k * (k - 1) // 2
    # Per-summand unknown block: a (r), c (1), n (k*r), m (n_m), w (k), ell (k).
    block = r + 1 + k * r + n_m + 2 * k

    def a_idx(g, alpha):
        return g * block + (alpha - 1)

    def c_idx(g):
        return g * block + r

    def n_idx(g, i, alpha):
        return g * block + r + 1 + (i - 1) * r + (alpha - 1)

    def m_idx(g, i, j):
        return g * block + r + 1 + k * r + (i - 1) * (i - 2) // 2 + (j - 1)

    def w_idx(g, i):
        return g * block + r + 1 + k * r + n_m + (i - 1)

    def ell_idx(g, i):
        return g * block + r + 1 + k * r + n_m + k + (i - 1)

    for m in range(1, m_max + 1):
        ncols = m * block
        rows: list[list[Fraction]] = []
        rhs: list[Fraction] = []

        def add_row(entries: dict[int, Fraction], value: Fraction):
            row = [Fraction(0)] * ncols
            for idx, coef in entries.items():
                row[idx] = coef
            rows.append(row)
            rhs.append(Fraction(value))

        one = Fraction(1)
        for i in range(1, k + 1):
            stage = target.stages[i - 1]
            for alpha in range(1, r + 1):
                # eps_i^n * lam_alpha coefficient: sum of a + n over summands.
                add_row(
                    {a_idx(g, alpha): one for g in range(m)}
                    | {n_idx(g, i, alpha): one for g in range(m)},
                    target.base_Ia[alpha - 1] + stage.n_coeffs[alpha - 1],
                )
            for j in range(1, i):
                add_row({m_idx(g, i, j): one for g in range(m)},
                        Fraction(stage.m_coeffs[j - 1]))
            add_row({ell_idx(g, i): one for g in range(m)}, Fraction(stage.chern))
            add_row({w_idx(g, i): one for g in range(m)}, stage.lambda_offset)
        for alpha in range(1, r + 1):
            add_row({a_idx(g, alpha): one for g in range(m)}, target.base_Ia[alpha - 1])
        add_row({c_idx(g): one for g in range(m)}, Fraction(target.base_Ic))
        for g in range(m):
            for i in range(1, k + 1):
                entries = {ell_idx(g, i): one, c_idx(g): -one}
                for alpha in range(1, r + 1):
                    if chern_basis[alpha - 1]:
                        entries[n_idx(g, i, alpha)] = Fraction(-chern_basis[alpha - 1])
                for j in range(1, i):
                    entries[m_idx(g, i, j)] = entries.get(m_idx(g, i, j), Fraction(0)) - one
                add_row(entries, Fraction(0))

        solution = linalg.solve_particular(rows, rhs)
        if solution is None:
            continue

        summands = []
        for g in range(m):
            stages = []
            for i in range(1, k + 1):
                n_co = tuple(_as_int(solution[n_idx(g, i, alpha)]) for alpha in range(1, r + 1))
                m_co = tuple(_as_int(solution[m_idx(g, i, j)]) for j in range(1, i))
                stages.append(TowerStage(
                    n_coeffs=n_co, m_coeffs=m_co,
                    lambda_offset=solution[w_idx(g, i)],
                    chern=_as_int(solution[ell_idx(g, i)]),
                ))
            summands.append(BundleTower(
                n=target.n, r=r, k=k, stages=tuple(stages),
                base_Ia=tuple(solution[a_idx(g, alpha)] for alpha in range(1, r + 1)),
                base_Ic=_as_int(solution[c_idx(g)]),
                symplectic=True,
            ))
        witness = FiberSumWitness(summands=tuple(summands))
        _verify_witness(target, witness, chern_basis)
        return witness
    return None


def _as_int(q: Fraction) -> int:
    if q.denominator != 1:
        raise ArithmeticError(f"expected an integral solution entry, got {q}")
    return q.numerator


def _verify_witness(target: BundleTower, witness: FiberSumWitness,
                    chern_basis: tuple[int, ...]) -> None:
    total = VolumePolynomial.zero()
    for summand in witness.summands:
        if not chern_consistency(summand, chern_basis):
            raise ArithmeticError("witness summand violates Chern consistency")
        total = total + tower_correction(summand)
    if not (total == tower_correction(target)):
        raise ArithmeticError("witness coefficient data does not reproduce the target")
    for alpha in range(target.r):
        got = sum((s.base_Ia[alpha] for s in witness.summands), Fraction(0))
        if got != target.base_Ia[alpha]:
            raise ArithmeticError("witness coupling integrals do not sum to the target's")
    if sum(s.base_Ic for s in witness.summands) != target.base_Ic:
        raise ArithmeticError("witness Chern integrals do not sum to the target's")
