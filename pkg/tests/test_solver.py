from fractions import Fraction

import pytest

from invkit.catalog import catalog_get, catalog_names, dixmier6
from invkit.errors import NotInvariantError
from invkit.fields import VectorField, apply_field, field_from_matrix, rep_fields
from invkit.lie import coadjoint_rep
from invkit.poly import Ring
from invkit.solver import (Verdict, characteristic_verdict, graded_invariants, invariant_space,
                           jacobian_rank, linear_stabilizer, module_membership)

from oracles import brute_membership, dense_rank, invariant_kernel, poly_vector, same_span


def _degrees(entry):
    n = entry.rep.space_dim
    return [1, 2, 3] if n <= 6 else [1, 2]


CASES = [(name, d) for name in catalog_names() for d in _degrees(catalog_get(name))]


@pytest.mark.parametrize("name,d", CASES)
def test_invariant_space_matches_dense_oracle(name, d):
    rep = catalog_get(name).rep
    mats = [[list(r) for r in M] for M in rep.matrices]
    mons, kernel = invariant_kernel(mats, d)
    got = invariant_space(rep_fields(rep), d)
    assert len(got) == len(kernel)
    assert same_span([poly_vector(p, mons) for p in got], kernel)


def test_invariant_basis_is_canonical():
    rep = catalog_get("dixmier6-coadjoint").rep
    got = invariant_space(rep_fields(rep), 2)
    assert [str(p) for p in got] == ["y5^2", "y5*y6", "y6^2"]


def test_threaded_solve_is_identical():
    fields = rep_fields(catalog_get("sl2-adjoint").rep)
    one = graded_invariants(fields, 4, threads=1)
    many = graded_invariants(fields, 4, threads=4)
    assert {d: [str(p) for p in v] for d, v in one.items()} == {d: [str(p) for p in v] for d, v in many.items()}


def test_nonlinear_fields_rejected():
    R = Ring.numbered(2)
    with pytest.raises(ValueError):
        invariant_space([VectorField.parse(R, ["x2^2", "0"])], 2)


def test_stabilizer_of_single_coordinate():
    R = Ring(("x", "y", "z"))
    stab = linear_stabilizer([R.var("z")])
    assert stab.dim == 6
    for M in stab.basis:
        assert list(M[2]) == [0, 0, 0]


def test_stabilizer_shrinks_when_polynomials_are_added():
    R = Ring.numbered(3)
    P = [R.parse("x1^2 + x2^2 + x3^2")]
    Q = P + [R.parse("x3")]
    big, small = linear_stabilizer(P), linear_stabilizer(Q)
    assert big.dim == 3 and small.dim == 1
    assert big.contains_span(small.basis)


def test_stabilizer_ignores_recombination():
    R = Ring.numbered(3)
    p, q = R.parse("x1*x3 - 1/2*x2^2"), R.parse("x3")
    a = linear_stabilizer([p, q])
    b = linear_stabilizer([p + q * q * 3, q * 2])
    assert a.dim == b.dim and a.contains_span(b.basis) and b.contains_span(a.basis)
    pt = [Fraction(1), Fraction(2), Fraction(-3)]
    assert jacobian_rank([p, q], pt) == jacobian_rank([p + q, q * 5], pt) == 2


def _unit(k):
    return [[Fraction(int(k == 3 * i + j)) for j in range(3)] for i in range(3)]


def test_stabilizer_against_dense_oracle():
    # columns: images of the polynomials under the nine elementary fields
    R = Ring.numbered(3)
    polys = [R.parse("x1*x3 - 1/2*x2^2"), R.parse("x3")]
    images = [[apply_field(field_from_matrix(_unit(k), R), p) for k in range(9)] for p in polys]
    rows = []
    for per_poly in images:
        support = sorted({e for q in per_poly for e, _ in q.terms()})
        rows.extend([q.coeff(e) for q in per_poly] for e in support)
    assert linear_stabilizer(polys).dim == 9 - dense_rank(rows)


@pytest.mark.parametrize("name", catalog_names())
def test_every_stabilizer_is_closed(name):
    e = catalog_get(name)
    stab = linear_stabilizer(list(e.invariants), check_closed=False)
    assert stab.is_closed()


def test_membership_yes_is_reverified():
    rep = coadjoint_rep(dixmier6())
    gens = rep_fields(rep)
    R = rep.ring
    phis = [R.parse("y5"), R.parse("y6^2 - 3*y5"), R.zero(), R.parse("2")]
    target = VectorField.zero(R)
    for phi, L in zip(phis, gens):
        target = target + L.times(phi)
    cert = module_membership(target, gens, 2)
    assert cert.found
    total = VectorField.zero(R)
    for phi, L in zip(cert.coefficients, gens):
        total = total + L.times(phi)
    assert total == target


def test_membership_degree_bound_is_respected():
    rep = coadjoint_rep(dixmier6())
    gens = rep_fields(rep)
    target = gens[1].times(rep.ring.parse("y6^2"))
    assert not module_membership(target, gens, 1).found
    assert module_membership(target, gens, 2).found


def _as_dicts(L):
    return [{e: c for e, c in comp.terms()} for comp in L.coeffs]


@pytest.mark.parametrize("bound", [0, 1, 2])
def test_dixmier_membership_agrees_with_ungraded_search(bound):
    rep = coadjoint_rep(dixmier6())
    gens = [L for L in rep_fields(rep) if not L.is_zero()]
    target = VectorField.parse(rep.ring, ["y5", "0", "0", "0", "0", "0"])
    ours = module_membership(target, gens, bound).found
    assert ours == brute_membership(_as_dicts(target), [_as_dicts(L) for L in gens], bound)
    assert not ours


def test_dixmier_forced_chain():
    # With L1..L4 the only nonzero fields, the third and fourth components
    # force phi1 = phi2 = 0, after which the first reads phi3*y6 = y5.
    rep = coadjoint_rep(dixmier6())
    L = rep_fields(rep)
    R = rep.ring
    y5, y6 = R.var("y5"), R.var("y6")
    assert L[0].coeffs[2] == -y6 and L[1].coeffs[3] == -y6
    assert [c for c in L[0].coeffs[2:4]] == [-y6, R.zero()]
    assert [c for c in L[1].coeffs[2:4]] == [R.zero(), -y6]
    assert all(not L[k].coeffs[2] and not L[k].coeffs[3] for k in (2, 3))
    assert L[2].coeffs[0] == y6 and L[3].coeffs[0] == R.zero()
    # y5 is not a multiple of y6
    assert not module_membership(VectorField.parse(R, ["y5", "0", "0", "0", "0", "0"]), L, 6).found


def test_verdict_rejects_non_invariants():
    e = catalog_get("sl2-adjoint")
    with pytest.raises(NotInvariantError):
        characteristic_verdict(e.rep, [e.rep.ring.parse("h")], True)


def test_verdict_incomplete_generators_are_inconclusive():
    e = catalog_get("dixmier6-coadjoint")
    rec = characteristic_verdict(e.rep, list(e.invariants), generators_complete=False)
    assert rec.verdict is Verdict.INCONCLUSIVE
    assert (rec.stabilizer_dim, rec.rep_dim) == (24, 4)


def test_jacobian_rank_at_generic_and_special_points():
    R = Ring.numbered(3)
    polys = [R.parse("x1*x3 - 1/2*x2^2"), R.parse("x3")]
    assert jacobian_rank(polys, [1, 1, 1]) == 2
    assert jacobian_rank(polys, [1, 0, 0]) == 1
    assert jacobian_rank(polys, [0, 0, 0]) == 1
