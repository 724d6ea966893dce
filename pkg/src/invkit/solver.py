"""Graded invariants, linear stabilizers, module membership and rank.

Every question here reduces to one exact linear system over the rationals,
solved by :mod:`invkit.linalg`. Generator fields are required to be linear,
so all systems split by degree.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence

from . import linalg
from .errors import NotInvariantError, VerificationError
from .fields import VectorField, apply_field, field_from_matrix, rep_fields
from .poly import ContextError, Polynomial, Ring, as_fraction, monomial_basis

__all__ = [
    "invariant_space",
    "graded_invariants",
    "linear_stabilizer",
    "StabilizerAlgebra",
    "module_membership",
    "MembershipCertificate",
    "jacobian_rank",
    "characteristic_verdict",
    "Verdict",
    "VerdictRecord",
    "thread_count",
]


def thread_count() -> int | None:
    """Worker cap from ``INVKIT_THREADS``; ``None`` means library default."""
    raw = os.environ.get("INVKIT_THREADS")
    if raw is None or raw == "":
        return None
    try:
        k = int(raw)
    except ValueError:
        raise ValueError(f"INVKIT_THREADS must be a positive integer, got {raw!r}") from None
    if k < 1:
        raise ValueError(f"INVKIT_THREADS must be a positive integer, got {raw!r}")
    return k


def _shared_ring(fields: Sequence[VectorField]) -> Ring:
    if not fields:
        raise ValueError("need at least one field")
    ring = fields[0].ring
    for L in fields:
        if L.ring != ring:
            raise ContextError("fields live in different rings")
    return ring


def _field_action_rows(mats, ring: Ring, degree: int):
    """Rows of the stacked action of linear fields on the degree slice.

    The unknowns are the coefficients on the state monomials of ``degree``.
    """
    n = ring.n_state
    basis = monomial_basis(n, degree)
    index = {e: k for k, e in enumerate(basis)}
    rows: dict = {}
    for f, A in enumerate(mats):
        nz = [(i, j, A[i][j]) for i in range(n) for j in range(n) if A[i][j]]
        for col, e in enumerate(basis):
            for i, j, a in nz:
                if e[i]:
                    out = list(e)
                    out[i] -= 1
                    out[j] += 1
                    key = (f, tuple(out))
                    row = rows.setdefault(key, {})
                    row[col] = row.get(col, 0) + e[i] * a
    return basis, index, list(rows.values())


def _vector_to_poly(ring: Ring, basis, vec) -> Polynomial:
    pad = (0,) * (ring.nvars - ring.n_state)
    return Polynomial(ring, {e + pad: c for e, c in zip(basis, vec) if c})


def invariant_space(fields: Sequence[VectorField], degree: int) -> list[Polynomial]:
    """Basis of the homogeneous degree-``degree`` polynomials (in the state
    variables) killed by every field. Primitive integer coefficients,
    distinct leading monomials, ordered by leading monomial."""
    ring = _shared_ring(fields)
    if degree < 1:
        raise ValueError("degree must be >= 1")
    for L in fields:
        if not L.is_linear() and not L.is_zero():
            raise ValueError("invariant_space needs linear fields")
    mats = [L.matrix() if not L.is_zero() else None for L in fields]
    mats = [M for M in mats if M is not None]
    basis, _, rows = _field_action_rows(mats, ring, degree)
    kernel = linalg.nullspace(rows, len(basis))
    polys = [_vector_to_poly(ring, basis, v) for v in kernel]
    for p in polys:
        for L in fields:
            if apply_field(L, p):
                raise VerificationError(f"computed invariant {p} is not annihilated by {L}")
    return polys


def graded_invariants(fields: Sequence[VectorField], max_degree: int,
                      min_degree: int = 1, threads: int | None = None) -> dict[int, list[Polynomial]]:
    """``invariant_space`` for each degree in ``min_degree..max_degree``.

    Degrees are solved independently, possibly concurrently; the result is
    assembled in degree order.
    """
    degrees = list(range(min_degree, max_degree + 1))
    workers = threads if threads is not None else thread_count()
    if workers == 1 or len(degrees) <= 1:
        return {d: invariant_space(fields, d) for d in degrees}
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(lambda d: invariant_space(fields, d), degrees))
    return dict(zip(degrees, results))


# -- stabilizer ---------------------------------------------------------------

@dataclass(frozen=True)
class StabilizerAlgebra:
    n: int
    basis: tuple = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def vectors(self) -> list[list[Fraction]]:
        return [[x for row in M for x in row] for M in self.basis]

    def contains(self, A: Sequence[Sequence]) -> bool:
        flat = [as_fraction(x) for row in A for x in row]
        return linalg.in_span(self.vectors(), flat)

    def contains_span(self, mats: Sequence) -> bool:
        vecs = self.vectors()
        r0 = linalg.rank(_rows(vecs))
        extra = [[as_fraction(x) for row in M for x in row] for M in mats]
        return linalg.rank(_rows(vecs + extra)) == r0

    def is_closed(self) -> bool:
        """Every commutator of basis elements lies in the span."""
        vecs = self.vectors()
        ech = linalg.echelon(_rows(vecs))
        r0 = len(ech)
        for a in range(self.dim):
            for b in range(a + 1, self.dim):
                A, B = self.basis[a], self.basis[b]
                C = linalg.mat_sub(linalg.mat_mul(A, B), linalg.mat_mul(B, A))
                flat = {k: x for k, x in enumerate(v for row in C for v in row) if x}
                if flat and linalg.rank([r for _, r in ech] + [flat]) != r0:
                    return False
        return True


def _rows(vecs):
    return [{k: x for k, x in enumerate(v) if x} for v in vecs]


def linear_stabilizer(polys: Sequence[Polynomial], check_closed: bool = True) -> StabilizerAlgebra:
    """All ``n x n`` matrices whose linear field kills every polynomial.

    Unknowns are the ``n**2`` entries of the matrix, row-major.
    """
    if not polys:
        raise ValueError("need at least one polynomial")
    ring = polys[0].ring
    for p in polys:
        if p.ring != ring:
            raise ContextError("polynomials live in different rings")
    n = ring.n_state
    rows: dict = {}
    for k, p in enumerate(polys):
        for e, c in p.terms():
            for i in range(n):
                if not e[i]:
                    continue
                for j in range(n):
                    out = list(e)
                    out[i] -= 1
                    out[j] += 1
                    row = rows.setdefault((k, tuple(out)), {})
                    col = i * n + j
                    row[col] = row.get(col, 0) + c * e[i]
    kernel = linalg.nullspace(list(rows.values()), n * n)
    basis = tuple(
        tuple(tuple(Fraction(v[i * n + j]) for j in range(n)) for i in range(n))
        for v in kernel
    )
    stab = StabilizerAlgebra(n, basis)
    for A in basis:
        L = field_from_matrix(A, ring)
        for p in polys:
            if apply_field(L, p):
                raise VerificationError("stabilizer element fails to annihilate an input polynomial")
    if check_closed and not stab.is_closed():
        raise VerificationError("stabilizer is not closed under the commutator")
    return stab


# -- module membership --------------------------------------------------------

@dataclass(frozen=True)
class MembershipCertificate:
    outcome: str  # "YES" or "NO"
    bound: int
    coefficients: tuple[Polynomial, ...] | None = None
    reason: str = ""

    @property
    def found(self) -> bool:
        return self.outcome == "YES"


def module_membership(target: VectorField, generators: Sequence[VectorField],
                      coeff_degree_bound: int) -> MembershipCertificate:
    """Look for polynomials ``phi_g`` of total degree <= bound (state and
    parameter variables) with ``sum_g phi_g * generators[g] == target``.

    Each homogeneous component of the target of degree ``k`` needs
    coefficients of degree ``k - 1`` and is solved on its own; zero
    components take zero coefficients.
    """
    ring = target.ring
    for L in generators:
        if L.ring != ring:
            raise ContextError("generator lives in a different ring")
        if not (L.is_linear() or L.is_zero()):
            raise ValueError("generators must be linear fields")
    if coeff_degree_bound < 0:
        raise ValueError("bound must be >= 0")
    n, nv = ring.n_state, ring.nvars
    mats = [L.matrix() if not L.is_zero() else None for L in generators]
    degrees = sorted({sum(e) for c in target.coeffs for e, _ in c.terms()})
    phis = [ring.zero() for _ in generators]
    for k in degrees:
        if k == 0:
            return MembershipCertificate("NO", coeff_degree_bound,
                                         reason="target has a constant component; linear generators vanish at 0")
        if k - 1 > coeff_degree_bound:
            return MembershipCertificate("NO", coeff_degree_bound,
                                         reason=f"target component of degree {k} needs coefficients of degree {k - 1}")
        mono = monomial_basis(nv, k - 1)
        nm = len(mono)
        rows: dict = {}
        for g, A in enumerate(mats):
            if A is None:
                continue
            for c in range(n):
                nz = [(j, a) for j, a in enumerate(A[c]) if a]
                for midx, m in enumerate(mono):
                    for j, a in nz:
                        out = list(m)
                        out[j] += 1
                        row = rows.setdefault((c, tuple(out)), {})
                        col = g * nm + midx
                        row[col] = row.get(col, 0) + a
        for c, coeff in enumerate(target.coeffs):
            for e, v in coeff.terms():
                if sum(e) == k:
                    rows.setdefault((c, e), {})
        keys = list(rows)
        rhs = [target.coeffs[c].coeff(e) for c, e in keys]
        sol = linalg.solve([rows[key] for key in keys], rhs, len(generators) * nm)
        if sol is None:
            return MembershipCertificate("NO", coeff_degree_bound,
                                         reason=f"no solution for the degree-{k} component")
        for g in range(len(generators)):
            part = {mono[midx]: sol[g * nm + midx] for midx in range(nm) if sol[g * nm + midx]}
            if part:
                phis[g] = phis[g] + Polynomial(ring, part)
    total = VectorField.zero(ring)
    for phi, L in zip(phis, generators):
        total = total + L.times(phi)
    if total != target:
        raise VerificationError("membership certificate does not reproduce the target")
    return MembershipCertificate("YES", coeff_degree_bound, tuple(phis))


# -- rank ---------------------------------------------------------------------

def jacobian_rank(polys: Sequence[Polynomial], point: Sequence) -> int:
    """Rank of the matrix of partial derivatives (state variables) at ``point``."""
    if not polys:
        return 0
    ring = polys[0].ring
    if len(point) != ring.n_state:
        raise ValueError(f"point must have {ring.n_state} coordinates")
    rows = []
    for p in polys:
        if p.ring != ring:
            raise ContextError("polynomials live in different rings")
        rows.append({i: v for i in range(ring.n_state) if (v := p.diff(i).evaluate(point))})
    return linalg.rank(rows)


# -- verdict ------------------------------------------------------------------

class Verdict(str, Enum):
    CHARACTERISTIC = "CHARACTERISTIC"
    NOT_CHARACTERISTIC = "NOT_CHARACTERISTIC"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class VerdictRecord:
    verdict: Verdict
    stabilizer_dim: int
    rep_dim: int
    generators_complete: bool
    max_invariant_degree: int
    stabilizer: StabilizerAlgebra = field(repr=False)
    note: str = ""


def characteristic_verdict(rep, invariant_polys: Sequence[Polynomial],
                           generators_complete: bool) -> VerdictRecord:
    """Compare the linear stabilizer of the invariants with the span of the
    representation matrices.

    Equal dimensions prove the invariants characteristic. A strictly larger
    stabilizer proves the opposite only when the invariants are known to
    generate all invariants; otherwise more invariants could shrink it.
    """
    ring = rep.ring
    polys = [p if p.ring == ring else p.to_ring(ring) for p in invariant_polys]
    fields = rep_fields(rep, ring)
    for p in polys:
        for idx, L in enumerate(fields):
            if apply_field(L, p):
                raise NotInvariantError(
                    f"{p} is not annihilated by the field of basis element {rep.algebra.basis_names[idx]}")
    stab = linear_stabilizer(polys)
    rep_vecs = [[x for row in M for x in row] for M in rep.matrices]
    rep_dim = linalg.rank(_rows(rep_vecs))
    if not stab.contains_span(rep.matrices):
        raise VerificationError("representation matrices are not in the stabilizer")
    max_deg = max(p.degree() for p in polys)
    if stab.dim == rep_dim:
        verdict, note = Verdict.CHARACTERISTIC, "stabilizer equals the represented algebra"
    elif generators_complete:
        verdict, note = Verdict.NOT_CHARACTERISTIC, "stabilizer strictly larger and invariants generate all invariants"
    else:
        verdict, note = Verdict.INCONCLUSIVE, (
            "stabilizer strictly larger but the invariants are not known to be complete "
            f"(checked up to degree {max_deg})")
    if rep_dim == 0:
        note = "represented algebra acts trivially; " + note
    return VerdictRecord(verdict, stab.dim, rep_dim, generators_complete, max_deg, stab, note)
