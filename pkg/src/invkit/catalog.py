"""Named example actions with their known invariants and expected facts.

Every entry is rebuilt on each lookup; nothing is cached.

sl2 uses the basis (h, e, f) with [h,e] = 2e, [h,f] = -2f, [e,f] = h and
adjoint coordinates named after the basis. Its Casimir is normalised as
``h^2 + e*f``, which is ``tr(x^2)/2`` for ``x = h*H + e*E + f*F`` in the
defining 2x2 representation (1/8 of the Killing form).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import linalg
from .lie import (Representation, abelian, adjoint_rep, coadjoint_rep, lie_algebra_from_matrices,
                  make_lie_algebra)
from .poly import Polynomial, Ring
from .section import section_invariants, shift_matrix

__all__ = [
    "CatalogEntry",
    "catalog_get",
    "catalog_names",
    "UnknownEntryError",
    "sl2",
    "heisenberg",
    "dixmier6",
    "casimir_sl2",
    "matrix_unit",
    "trace_power",
    "transposition_operator",
    "transposition_check",
    "TranspositionReport",
    "gl_conjugation",
]


class UnknownEntryError(KeyError):
    def __str__(self):
        return self.args[0]


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    rep: Representation
    provenance: str
    invariants: tuple[Polynomial, ...] = ()
    generators_complete: bool = False
    expected: dict = field(default_factory=dict, hash=False)


# -- algebras -------------------------------------------------------------------

def sl2():
    return make_lie_algebra(3, ["h", "e", "f"], [(0, 1, {1: 2}), (0, 2, {2: -2}), (1, 2, {0: 1})])


def heisenberg():
    return make_lie_algebra(3, ["P", "Q", "Z"], [(0, 1, {2: 1})])


def dixmier6():
    return make_lie_algebra(6, None, [(0, 1, {4: 1}), (0, 2, {5: 1}), (1, 3, {5: 1})])


def so3():
    return make_lie_algebra(3, ["L1", "L2", "L3"], [(0, 1, {2: 1}), (1, 2, {0: 1}), (0, 2, {1: -1})])


def matrix_unit(n: int, i: int, j: int):
    E = linalg.zeros(n)
    E[i][j] = Fraction(1)
    return E


def sl3():
    d = [matrix_unit(3, 0, 0), matrix_unit(3, 1, 1), matrix_unit(3, 2, 2)]
    mats = [linalg.mat_sub(d[0], d[1]), linalg.mat_sub(d[1], d[2])]
    names = ["h1", "h2"]
    for i, j in [(0, 1), (0, 2), (1, 2), (1, 0), (2, 0), (2, 1)]:
        mats.append(matrix_unit(3, i, j))
        names.append(f"e{i + 1}{j + 1}")
    return lie_algebra_from_matrices(mats, names), mats


def casimir_sl2(ring: Ring | None = None) -> Polynomial:
    ring = ring or Ring(("h", "e", "f"))
    return ring.parse("h^2 + e*f")


def _poly_matrix(ring: Ring, mats, coords):
    """``sum_k coords[k] * mats[k]`` as a matrix of polynomials."""
    n = len(mats[0])
    out = [[ring.zero() for _ in range(n)] for _ in range(n)]
    for c, M in zip(coords, mats):
        for i in range(n):
            for j in range(n):
                if M[i][j]:
                    out[i][j] = out[i][j] + c * M[i][j]
    return out


def trace_power(X, k: int) -> Polynomial:
    n = len(X)
    P = X
    for _ in range(k - 1):
        P = [[sum((P[i][l] * X[l][j] for l in range(n)), X[0][0].ring.zero()) for j in range(n)]
             for i in range(n)]
    return sum((P[i][i] for i in range(n)), X[0][0].ring.zero())


def _matrix_coords(n: int) -> tuple[Ring, list]:
    names = [f"x{i + 1}{j + 1}" for i in range(n) for j in range(n)]
    ring = Ring(names)
    X = [[ring.gen(i * n + j) for j in range(n)] for i in range(n)]
    return ring, X


def gl_conjugation(n: int) -> Representation:
    """gl_n acting on n x n matrices by ``x -> [E, x]``; coordinates x_ij."""
    units = [matrix_unit(n, i, j) for i in range(n) for j in range(n)]
    g = lie_algebra_from_matrices(units, [f"E{i + 1}{j + 1}" for i in range(n) for j in range(n)])
    rep = adjoint_rep(g, [f"x{i + 1}{j + 1}" for i in range(n) for j in range(n)])
    return rep


def transposition_operator(n: int) -> list[list[Fraction]]:
    """Permutation of the n^2 matrix coordinates sending x_ij to x_ji."""
    T = linalg.zeros(n * n)
    for i in range(n):
        for j in range(n):
            T[i * n + j][j * n + i] = Fraction(1)
    return T


# -- entries --------------------------------------------------------------------

def _heisenberg3_coadjoint():
    rep = coadjoint_rep(heisenberg(), ["x", "y", "z"])
    z = rep.ring.var("z")
    return CatalogEntry(
        "heisenberg3-coadjoint", rep,
        "Heisenberg group, coadjoint action on the dual with coordinates x, y, z",
        (z,), True,
        {"invariant_dims": {d: 1 for d in range(1, 6)},
         "stabilizer_dim": 6, "rep_dim": 2, "verdict": "NOT_CHARACTERISTIC"},
    )


def _dixmier6_coadjoint():
    rep = coadjoint_rep(dixmier6())
    r = rep.ring
    return CatalogEntry(
        "dixmier6-coadjoint", rep,
        "six-dimensional nilpotent algebra [e1,e2]=e5, [e1,e3]=e6, [e2,e4]=e6, coadjoint action",
        (r.var("y5"), r.var("y6")), False,
        {"invariant_dims": {d: d + 1 for d in range(1, 5)},
         "stabilizer_dim": 24, "rep_dim": 4, "verdict": "INCONCLUSIVE"},
    )


def _unipotent_standard(n: int):
    if n < 2:
        raise UnknownEntryError(f"unipotent-standard-{n}: need n >= 2")
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    mats = [matrix_unit(n, i, j) for i, j in pairs]
    g = lie_algebra_from_matrices(mats, [f"E{i + 1}{j + 1}" for i, j in pairs])
    rep = Representation(g, n, tuple(mats))
    xn = rep.ring.gen(n - 1)
    return CatalogEntry(
        f"unipotent-standard-{n}", rep,
        f"upper unitriangular group acting on R^{n}; fields x_j d/dx_i for i < j",
        (xn,), True,
        {"invariant_dims": {d: 1 for d in range(1, 5)},
         "stabilizer_dim": n * n - n, "rep_dim": n * (n - 1) // 2, "verdict": "NOT_CHARACTERISTIC"},
    )


def _principal_nilpotent(n: int):
    if n < 2:
        raise UnknownEntryError(f"principal-nilpotent-{n}: need n >= 2")
    g = abelian(1, ["X"])
    rep = Representation(g, n, (shift_matrix(n),))
    polys = section_invariants(n).polys
    if n == 2:
        # x2 generates all invariants of a single 2x2 Jordan block
        expected = {"stabilizer_dim": 2, "rep_dim": 1, "verdict": "NOT_CHARACTERISTIC"}
        complete = True
    else:
        expected = {"stabilizer_dim": 1, "rep_dim": 1, "verdict": "CHARACTERISTIC"}
        complete = False
    return CatalogEntry(
        f"principal-nilpotent-{n}", rep,
        f"one-parameter group exp(tX), X the {n}x{n} upper shift; invariants from the rational section",
        tuple(polys), complete, expected,
    )


def _sl2_adjoint():
    rep = adjoint_rep(sl2())
    return CatalogEntry(
        "sl2-adjoint", rep, "sl2 in basis (h, e, f), adjoint action",
        (casimir_sl2(rep.ring),), True,
        {"invariant_dims": {1: 0, 2: 1, 3: 0, 4: 1},
         "stabilizer_dim": 3, "rep_dim": 3, "verdict": "CHARACTERISTIC"},
    )


def _sl3_adjoint():
    g, mats = sl3()
    rep = adjoint_rep(g)
    X = _poly_matrix(rep.ring, mats, rep.ring.gens())
    return CatalogEntry(
        "sl3-adjoint", rep, "sl3 adjoint action; invariants tr(x^2), tr(x^3) on the 8-dimensional space",
        (trace_power(X, 2), trace_power(X, 3)), True,
        {"invariant_dims": {1: 0, 2: 1, 3: 1, 4: 1},
         "stabilizer_dim": 8, "rep_dim": 8, "verdict": "CHARACTERISTIC"},
    )


def _so3_standard():
    g = so3()
    mats = (
        [[0, 0, 0], [0, 0, -1], [0, 1, 0]],
        [[0, 0, 1], [0, 0, 0], [-1, 0, 0]],
        [[0, -1, 0], [1, 0, 0], [0, 0, 0]],
    )
    rep = Representation(g, 3, mats, ("x", "y", "z"))
    return CatalogEntry(
        "so3-standard", rep, "rotations of R^3",
        (rep.ring.parse("x^2 + y^2 + z^2"),), True,
        {"invariant_dims": {1: 0, 2: 1, 3: 0, 4: 1},
         "stabilizer_dim": 3, "rep_dim": 3, "verdict": "CHARACTERISTIC"},
    )


def _gln_conjugation(n: int):
    if n not in (2, 3):
        raise UnknownEntryError(f"gln-conjugation-{n}: only n = 2, 3 are published")
    rep = gl_conjugation(n)
    ring, X = _matrix_coords(n)
    invs = tuple(trace_power(X, k) for k in range(1, n + 1))
    return CatalogEntry(
        f"gln-conjugation-{n}", rep,
        f"gl_{n} acting on {n}x{n} matrices by conjugation; invariants tr(x^k)",
        invs, True,
        {"invariant_dims": {1: 1, 2: 2},
         "stabilizer_dim": n * n - 1, "rep_dim": n * n - 1, "verdict": "CHARACTERISTIC"},
    )


_FIXED: dict[str, Callable[[], CatalogEntry]] = {
    "heisenberg3-coadjoint": _heisenberg3_coadjoint,
    "dixmier6-coadjoint": _dixmier6_coadjoint,
    "sl2-adjoint": _sl2_adjoint,
    "sl3-adjoint": _sl3_adjoint,
    "so3-standard": _so3_standard,
}

_FAMILIES: dict[str, tuple[Callable[[int], CatalogEntry], tuple[int, ...]]] = {
    "unipotent-standard": (_unipotent_standard, (2, 3, 4, 5)),
    "principal-nilpotent": (_principal_nilpotent, (2, 3, 4, 5, 6)),
    "gln-conjugation": (_gln_conjugation, (2, 3)),
}


def catalog_names() -> list[str]:
    names = list(_FIXED)
    for prefix, (_, ns) in _FAMILIES.items():
        names.extend(f"{prefix}-{n}" for n in ns)
    return sorted(names)


def catalog_get(name: str) -> CatalogEntry:
    if name in _FIXED:
        return _FIXED[name]()
    m = re.fullmatch(r"([a-z-]+)-(\d+)", name)
    if m and m.group(1) in _FAMILIES:
        return _FAMILIES[m.group(1)][0](int(m.group(2)))
    raise UnknownEntryError(f"unknown catalog entry {name!r}; available: {', '.join(catalog_names())}")


# -- transposition ------------------------------------------------------------

@dataclass(frozen=True)
class TranspositionReport:
    n: int
    k_max: int
    fixed: dict
    in_ad_span: bool

    @property
    def passed(self) -> bool:
        return all(self.fixed.values()) and not self.in_ad_span


def transposition_check(n: int, k_max: int, operator=None) -> TranspositionReport:
    """Pull ``tr(x^k)`` (k <= k_max) back along an operator on n x n
    matrices (transposition by default) and test whether the operator lies
    in the span of the conjugation matrices ``ad(E_ij)``."""
    if n < 2 or k_max < 2:
        raise ValueError("need n >= 2 and k_max >= 2")
    T = operator if operator is not None else transposition_operator(n)
    ring, X = _matrix_coords(n)
    fixed = {}
    for k in range(1, k_max + 1):
        p = trace_power(X, k)
        fixed[k] = p.pullback(T) == p
    rep = gl_conjugation(n)
    vecs = [[x for row in M for x in row] for M in rep.matrices]
    target = [Fraction(x) for row in T for x in row]
    return TranspositionReport(n, k_max, fixed, linalg.in_span(vecs, target))
