"""Lie algebras given by structure constants, and their matrix representations."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .linalg import mat_mul, mat_sub, solve, zeros
from .poly import Ring, as_fraction

__all__ = [
    "LieAlgebra",
    "Representation",
    "JacobiError",
    "HomomorphismError",
    "make_lie_algebra",
    "lie_algebra_from_matrices",
    "adjoint_rep",
    "coadjoint_rep",
    "takiff",
    "abelian",
]

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

Vector = tuple[Fraction, ...]


class JacobiError(ValueError):
    def __init__(self, triple, defect):
        self.triple = triple
        self.defect = defect
        i, j, k = triple
        super().__init__(
            f"Jacobi identity fails for basis triple ({i}, {j}, {k}); "
            f"defect vector {[str(c) for c in defect]}"
        )


class HomomorphismError(ValueError):
    def __init__(self, pair, defect):
        self.pair = pair
        self.defect = defect
        super().__init__(f"matrices do not represent the bracket of basis pair {pair}")


@dataclass(frozen=True)
class LieAlgebra:
    """Structure constants ``[e_i, e_j] = sum_k c_ij^k e_k`` stored for i < j.

    Construct through :func:`make_lie_algebra`, which validates Jacobi.
    """

    dim: int
    basis_names: tuple[str, ...]
    structure: Mapping[tuple[int, int], Vector] = field(hash=False)

    def bracket_basis(self, i: int, j: int) -> Vector:
        if i == j:
            return (Fraction(0),) * self.dim
        if i < j:
            return self.structure.get((i, j), (Fraction(0),) * self.dim)
        return tuple(-c for c in self.bracket_basis(j, i))

    def bracket(self, u: Sequence, v: Sequence) -> Vector:
        out = [Fraction(0)] * self.dim
        for (i, j), c in self.structure.items():
            s = u[i] * v[j] - u[j] * v[i]
            if s:
                for k, ck in enumerate(c):
                    if ck:
                        out[k] += s * ck
        return tuple(out)

    def basis_vector(self, i: int) -> Vector:
        return tuple(Fraction(int(k == i)) for k in range(self.dim))

    def ad_matrix(self, i: int) -> list[list[Fraction]]:
        """Matrix of ``ad(e_i)``: column j holds ``[e_i, e_j]``."""
        out = zeros(self.dim)
        for j in range(self.dim):
            for k, c in enumerate(self.bracket_basis(i, j)):
                out[k][j] = c
        return out

    def brackets_list(self) -> list[tuple[int, int, list[tuple[int, Fraction]]]]:
        return [
            (i, j, [(k, c) for k, c in enumerate(vec) if c])
            for (i, j), vec in sorted(self.structure.items())
        ]

    def is_abelian(self) -> bool:
        return not self.structure

    def __eq__(self, other):
        if not isinstance(other, LieAlgebra):
            return NotImplemented
        return (self.dim, self.basis_names, dict(self.structure)) == (
            other.dim, other.basis_names, dict(other.structure))

    def __hash__(self):
        return hash((self.dim, self.basis_names, tuple(sorted(self.structure.items()))))


def _check_names(names, dim):
    names = tuple(names)
    if len(names) != dim:
        raise ValueError(f"expected {dim} basis names, got {len(names)}")
    if len(set(names)) != dim:
        raise ValueError("basis names must be distinct")
    for n in names:
        if not _NAME_RE.match(n):
            raise ValueError(f"basis name {n!r} is not an identifier")
    return names


def jacobi_defect(g: LieAlgebra, i: int, j: int, k: int) -> Vector:
    ei, ej, ek = g.basis_vector(i), g.basis_vector(j), g.basis_vector(k)
    t1 = g.bracket(ei, g.bracket(ej, ek))
    t2 = g.bracket(ej, g.bracket(ek, ei))
    t3 = g.bracket(ek, g.bracket(ei, ej))
    return tuple(a + b + c for a, b, c in zip(t1, t2, t3))


def validate_jacobi(g: LieAlgebra) -> None:
    for triple in combinations(range(g.dim), 3):
        d = jacobi_defect(g, *triple)
        if any(d):
            raise JacobiError(triple, d)


def make_lie_algebra(dim: int, basis_names: Sequence[str] | None,
                     brackets: Iterable) -> LieAlgebra:
    """Build and validate a Lie algebra.

    ``brackets`` holds ``(i, j, coeffs)`` with 0-based indices; ``coeffs`` is
    either a mapping ``k -> c`` or a sequence of ``(k, c)`` pairs. Pairs with
    ``i > j`` are stored negated; a pair given twice is an error.
    """
    if dim < 0:
        raise ValueError("dim must be >= 0")
    if basis_names is None:
        basis_names = [f"e{i + 1}" for i in range(dim)]
    names = _check_names(basis_names, dim)
    structure: dict[tuple[int, int], Vector] = {}
    for i, j, coeffs in brackets:
        if not (0 <= i < dim and 0 <= j < dim):
            raise ValueError(f"bracket indices ({i}, {j}) out of range")
        if i == j:
            raise ValueError(f"[e_{i}, e_{i}] must not be specified")
        sign = 1
        if i > j:
            i, j, sign = j, i, -1
        if (i, j) in structure:
            raise ValueError(f"bracket ({i}, {j}) given twice")
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        vec = [Fraction(0)] * dim
        for k, c in items:
            if not 0 <= k < dim:
                raise ValueError(f"bracket target index {k} out of range")
            vec[k] += sign * as_fraction(c)
        if any(vec):
            structure[(i, j)] = tuple(vec)
    g = LieAlgebra(dim, names, structure)
    validate_jacobi(g)
    return g


def abelian(dim: int, basis_names: Sequence[str] | None = None) -> LieAlgebra:
    return make_lie_algebra(dim, basis_names, [])


def _flatten(M):
    return [x for row in M for x in row]


def lie_algebra_from_matrices(mats: Sequence, basis_names: Sequence[str] | None = None) -> LieAlgebra:
    """Structure constants of the span of linearly independent matrices,
    which must be closed under the commutator."""
    flat = [_flatten(M) for M in mats]
    d = len(flat)
    size = len(flat[0]) if flat else 0
    rows = [{k: flat[k][p] for k in range(d) if flat[k][p]} for p in range(size)]
    brackets = []
    for i, j in combinations(range(d), 2):
        C = mat_sub(mat_mul(mats[i], mats[j]), mat_mul(mats[j], mats[i]))
        rhs = _flatten(C)
        sol = solve(rows, rhs, d)
        if sol is None:
            raise ValueError(f"commutator of matrices {i}, {j} leaves their span")
        if any(sol):
            brackets.append((i, j, {k: c for k, c in enumerate(sol) if c}))
    return make_lie_algebra(d, basis_names, brackets)


@dataclass(frozen=True)
class Representation:
    """A Lie algebra with one ``n x n`` matrix per basis element."""

    algebra: LieAlgebra
    space_dim: int
    matrices: tuple = field(hash=False)
    coord_names: tuple[str, ...] = ()

    def __post_init__(self):
        mats = tuple(tuple(tuple(as_fraction(x) for x in row) for row in M) for M in self.matrices)
        object.__setattr__(self, "matrices", mats)
        if len(mats) != self.algebra.dim:
            raise ValueError("need one matrix per basis element")
        n = self.space_dim
        for M in mats:
            if len(M) != n or any(len(r) != n for r in M):
                raise ValueError(f"representation matrices must be {n}x{n}")
        names = tuple(self.coord_names) or tuple(f"x{i + 1}" for i in range(n))
        if len(names) != n:
            raise ValueError("one coordinate name per dimension of the space")
        object.__setattr__(self, "coord_names", names)
        validate_homomorphism(self)

    @property
    def ring(self) -> Ring:
        return Ring(self.coord_names)

    def image(self, v: Sequence) -> list[list[Fraction]]:
        out = zeros(self.space_dim)
        for c, M in zip(v, self.matrices):
            if c:
                for r in range(self.space_dim):
                    for s in range(self.space_dim):
                        out[r][s] += c * M[r][s]
        return out


def validate_homomorphism(rep: Representation) -> None:
    g = rep.algebra
    mats = rep.matrices
    for i, j in combinations(range(g.dim), 2):
        lhs = rep.image(g.bracket_basis(i, j))
        rhs = mat_sub(mat_mul(mats[i], mats[j]), mat_mul(mats[j], mats[i]))
        if lhs != rhs:
            raise HomomorphismError((i, j), mat_sub(lhs, rhs))


def adjoint_rep(g: LieAlgebra, coord_names: Sequence[str] | None = None) -> Representation:
    """Adjoint action; coordinates default to the basis names."""
    mats = [g.ad_matrix(i) for i in range(g.dim)]
    return Representation(g, g.dim, tuple(mats), tuple(coord_names or g.basis_names))


def coadjoint_rep(g: LieAlgebra, coord_names: Sequence[str] | None = None) -> Representation:
    """Coadjoint action with ``<ad*(x) xi, y> = -<xi, [x, y]>``.

    Coordinates default to ``y1..yn`` (dual basis).
    """
    mats = []
    for i in range(g.dim):
        A = g.ad_matrix(i)
        mats.append([[-A[c][r] for c in range(g.dim)] for r in range(g.dim)])
    names = tuple(coord_names) if coord_names else tuple(f"y{i + 1}" for i in range(g.dim))
    return Representation(g, g.dim, tuple(mats), names)


def takiff(g: LieAlgebra, m: int) -> LieAlgebra:
    """Truncated current algebra ``g (x) K[T] / (T^{m+1})``.

    Basis ``e_i T^a`` is ordered block by block in ``a`` (index ``a*dim + i``)
    and named ``<name>_<a>``.
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    n = g.dim
    names = [f"{name}_{a}" for a in range(m + 1) for name in g.basis_names]
    brackets = []
    for I, J in combinations(range((m + 1) * n), 2):
        a, i = divmod(I, n)
        b, j = divmod(J, n)
        if a + b > m:
            continue
        vec = g.bracket_basis(i, j)
        if any(vec):
            brackets.append((I, J, {(a + b) * n + k: c for k, c in enumerate(vec) if c}))
    return make_lie_algebra((m + 1) * n, names, brackets)
