"""Independent reference computations for the tests.

Everything here uses dense lists of Fractions and plain exponent tuples,
and shares no code with the package's elimination or polynomial modules.
"""

from fractions import Fraction
from itertools import combinations_with_replacement


def dense_rref(M):
    """Reduced row echelon form by textbook Gauss-Jordan; returns (R, pivots)."""
    R = [[Fraction(x) for x in row] for row in M]
    if not R:
        return R, []
    rows, cols = len(R), len(R[0])
    pivots = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if R[i][c] != 0), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        inv = 1 / R[r][c]
        R[r] = [x * inv for x in R[r]]
        for i in range(rows):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return R[:r], pivots


def dense_rank(M):
    return len(dense_rref(M)[1])


def dense_kernel(M, ncols):
    """Basis of {v : M v = 0}."""
    R, pivots = dense_rref(M) if M else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(R, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def dense_solve(M, b, ncols):
    """Some solution of M v = b, or None."""
    aug = [list(row) + [rhs] for row, rhs in zip(M, b)]
    R, pivots = dense_rref(aug)
    if ncols in pivots:
        return None
    v = [Fraction(0)] * ncols
    for row, p in zip(R, pivots):
        v[p] = row[ncols]
    return v


def monomials(n, d):
    """All exponent tuples of total degree d (order irrelevant to callers)."""
    out = []
    for combo in combinations_with_replacement(range(n), d):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return sorted(set(out))


def linear_field_on_monomial(A, e):
    """Image of x^e under sum_i (A x)_i d/dx_i, as {exponent: coefficient}."""
    n = len(e)
    out = {}
    for i in range(n):
        if not e[i]:
            continue
        for j in range(n):
            if A[i][j] == 0:
                continue
            f = list(e)
            f[i] -= 1
            f[j] += 1
            f = tuple(f)
            out[f] = out.get(f, 0) + Fraction(A[i][j]) * e[i]
    return out


def invariant_kernel(mats, d):
    """Dense kernel of the stacked linear fields on degree-d forms.

    Returns (monomial list, kernel vectors in that basis)."""
    n = len(mats[0])
    mons = monomials(n, d)
    targets = monomials(n, d)
    tindex = {m: k for k, m in enumerate(targets)}
    rows = []
    for A in mats:
        block = [[Fraction(0)] * len(mons) for _ in targets]
        for c, e in enumerate(mons):
            for f, v in linear_field_on_monomial(A, e).items():
                block[tindex[f]][c] += v
        rows.extend(block)
    return mons, dense_kernel(rows, len(mons))


def poly_vector(p, mons):
    """Coefficient vector of a package polynomial in a fixed monomial list."""
    return [Fraction(p.coeff(m)) for m in mons]


def same_span(U, V):
    if not U and not V:
        return True
    r = dense_rank(U + V)
    return r == dense_rank(U) == dense_rank(V)


def brute_membership(target, gens, bound):
    """Ungraded dense search for phi_g of degree <= bound with
    sum phi_g * L_g = target. Fields are lists of {exponent: coeff} dicts on
    n state variables; returns True/False."""
    n = len(target)
    cmons = [m for d in range(bound + 1) for m in monomials(n, d)]
    rows = {}
    nunk = len(gens) * len(cmons)

    def row(c, e):
        if (c, e) not in rows:
            rows[(c, e)] = [Fraction(0)] * nunk
        return rows[(c, e)]

    for g, L in enumerate(gens):
        for c in range(n):
            for e, v in L[c].items():
                for k, m in enumerate(cmons):
                    f = tuple(a + b for a, b in zip(e, m))
                    row(c, f)[g * len(cmons) + k] += v
    for c in range(n):
        for e in target[c]:
            row(c, e)
    keys = list(rows)
    rhs = [Fraction(target[c].get(e, 0)) for c, e in keys]
    return dense_solve([rows[k] for k in keys], rhs, nunk) is not None
