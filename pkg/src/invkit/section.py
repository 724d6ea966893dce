"""Polynomial invariants of the principal nilpotent one-parameter group.

The group ``exp(tX)`` with ``X`` the upper shift matrix acts on ``K^n``.
For ``x_n != 0`` the orbit of ``x`` meets the hyperplane ``x_{n-1} = 0``
exactly once, at ``t* = -x_{n-1}/x_n``; the coordinates of that point are
rational invariants ``Q_r`` whose only denominators are powers of ``x_n``.
Clearing them gives the polynomials ``P_r = x_n^(n-r-1) Q_r`` and
``P_{n-1} = x_n``.

Note that ``dP_1/dx_1 = x_n^(n-2)`` follows from the construction (for
``n = 3``, ``P_1 = x_1 x_3 - x_2^2/2``); an exponent of ``n - 1`` for this
derivative would contradict the ``n = 3`` case.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence

from .errors import VerificationError
from .fields import VectorField, apply_field, field_from_matrix
from .linalg import identity, mat_mul, zeros
from .poly import Polynomial, Ring, as_fraction

__all__ = [
    "shift_matrix",
    "nilpotent_flow",
    "NotNilpotentError",
    "RationalSectionCoordinate",
    "section_coordinates",
    "section_invariants",
    "SectionInvariants",
    "principal_field",
]


class NotNilpotentError(ValueError):
    pass


def shift_matrix(n: int) -> list[list[Fraction]]:
    """Ones on the superdiagonal: ``X e_1 = 0``, ``X e_j = e_{j-1}``."""
    if n < 2:
        raise ValueError("n must be >= 2")
    X = zeros(n)
    for i in range(n - 1):
        X[i][i + 1] = Fraction(1)
    return X


def principal_field(n: int, ring: Ring | None = None) -> VectorField:
    """``x_2 d/dx_1 + ... + x_n d/dx_{n-1}``."""
    return field_from_matrix(shift_matrix(n), ring or Ring.numbered(n))


def nilpotent_flow(X: Sequence[Sequence], symbolic: bool = True, t=None,
                   ring: Ring | None = None) -> list[Polynomial]:
    """``exp(tX) x`` via the terminating series ``sum_k t^k X^k / k!``.

    With ``symbolic=True`` the result lives in ``x1..xn`` plus a parameter
    ``t``; otherwise ``t`` must be a rational value and is substituted.
    """
    n = len(X)
    X = [[as_fraction(a) for a in row] for row in X]
    powers = [identity(n)]
    while any(any(row) for row in powers[-1]):
        if len(powers) > n:
            raise NotNilpotentError(f"X^{n} != 0")
        powers.append(mat_mul(powers[-1], X))
    powers.pop()
    if symbolic:
        ring = ring or Ring.numbered(n, params=("t",))
        tpoly = ring.var("t") if "t" in ring.param_names else ring.gen(ring.nvars - 1)
    else:
        if t is None:
            raise ValueError("a numeric flow needs a value for t")
        ring = ring or Ring.numbered(n)
        tpoly = ring.const(t)
    xs = [ring.gen(i) for i in range(n)]
    out = []
    for i in range(n):
        acc = ring.zero()
        for k, P in enumerate(powers):
            lin = ring.zero()
            for j in range(n):
                if P[i][j]:
                    lin = lin + xs[j] * P[i][j]
            if lin:
                acc = acc + tpoly ** k * lin / factorial(k)
        out.append(acc)
    return out


@dataclass(frozen=True)
class RationalSectionCoordinate:
    """``numerator / x_n**power``."""

    numerator: Polynomial
    power: int

    def __str__(self):
        if self.power == 0:
            return str(self.numerator)
        return f"({self.numerator})/x{self.numerator.ring.n_state}^{self.power}"


def _divide_by_xn(p: Polynomial, k: int) -> Polynomial:
    """Exact division by ``x_n**k``; raises if it is not exact."""
    n = p.ring.n_state
    out = {}
    for e, c in p.terms():
        if e[n - 1] < k:
            raise VerificationError(f"x{n}^{k} does not divide {p}")
        e2 = list(e)
        e2[n - 1] -= k
        out[tuple(e2)] = c
    return Polynomial(p.ring, out)


def section_coordinates(n: int) -> list[RationalSectionCoordinate]:
    """Coordinates of the orbit point on ``x_{n-1} = 0``, in lowest terms."""
    X = shift_matrix(n)
    flow = nilpotent_flow(X, symbolic=True)
    fring = flow[0].ring
    ring = Ring.numbered(n)
    tidx = fring.nvars - 1
    pivot = flow[n - 2]
    if any(e[tidx] > 1 for e, _ in pivot.terms()):
        raise VerificationError("hyperplane equation is not linear in t")
    # pivot = x_{n-1} + t * x_n; t* = -x_{n-1}/x_n
    lead = Polynomial(fring, {e[:tidx] + (0,): c for e, c in pivot.terms() if e[tidx] == 1})
    if lead != fring.gen(n - 1):
        raise VerificationError("coefficient of t in the hyperplane equation is not x_n")
    xs = ring.gens()
    coords = []
    for comp in flow:
        K = max((e[tidx] for e, _ in comp.terms()), default=0)
        num = ring.zero()
        for e, c in comp.terms():
            k = e[tidx]
            mono = ring.monomial(e[:tidx], c)
            num = num + mono * (-xs[n - 2]) ** k * xs[n - 1] ** (K - k)
        # lowest terms: strip common powers of x_n
        if num:
            common = min(e[n - 1] for e, _ in num.terms())
            strip = min(common, K)
            num = _divide_by_xn(num, strip)
            K -= strip
        else:
            K = 0
        coords.append(RationalSectionCoordinate(num, K))
    if coords[n - 2].numerator:
        raise VerificationError("section point is not on the hyperplane")
    return coords


@dataclass(frozen=True)
class SectionInvariants:
    n: int
    polys: tuple[Polynomial, ...]


def section_invariants(n: int) -> SectionInvariants:
    """``[P_1, ..., P_{n-1}]`` on ``x1..xn``; each is checked to be a
    polynomial annihilated by the principal field."""
    if n < 2:
        raise ValueError("n must be >= 2")
    coords = section_coordinates(n)
    polys = []
    for r in range(1, n - 1):
        q = coords[r - 1]
        shift = n - r - 1
        if q.power > shift:
            raise VerificationError(f"denominator x{n}^{q.power} of Q_{r} does not cancel against x{n}^{shift}")
        polys.append(q.numerator * q.numerator.ring.gen(n - 1) ** (shift - q.power))
    last = coords[n - 1]
    if last.power != 0:
        raise VerificationError("last section coordinate is not a polynomial")
    polys.append(last.numerator)
    N = principal_field(n)
    for p in polys:
        if apply_field(N, p):
            raise VerificationError(f"{p} is not annihilated by the principal field")
    return SectionInvariants(n, tuple(polys))
