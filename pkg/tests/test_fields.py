import random
from fractions import Fraction

import pytest

from invkit.fields import VectorField, apply_field, commutator, field_from_matrix, rep_fields
from invkit.catalog import sl2
from invkit.lie import adjoint_rep
from invkit.poly import Ring

R = Ring.numbered(3)


def rand_mat(rng):
    return [[Fraction(rng.randint(-3, 3)) for _ in range(3)] for _ in range(3)]


def mul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(3)) for j in range(3)] for i in range(3)]


def test_matrix_round_trip():
    A = [[1, 2, 0], [0, -1, Fraction(1, 2)], [3, 0, 0]]
    L = field_from_matrix(A, R)
    assert L.is_linear()
    assert L.matrix() == [[Fraction(a) for a in row] for row in A]
    assert L.to_strings() == ["x1 + 2*x2", "-x2 + 1/2*x3", "3*x1"]


def test_commutator_sign_convention():
    rng = random.Random(3)
    for _ in range(10):
        A, B = rand_mat(rng), rand_mat(rng)
        BA_AB = [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(mul(B, A), mul(A, B))]
        assert commutator(field_from_matrix(A, R), field_from_matrix(B, R)) == field_from_matrix(BA_AB, R)


def test_commutator_acts_as_derivation_commutator():
    rng = random.Random(4)
    p = R.parse("x1^2*x3 - x2*x3 + 4*x1")
    for _ in range(5):
        L, M = field_from_matrix(rand_mat(rng), R), field_from_matrix(rand_mat(rng), R)
        lhs = apply_field(commutator(L, M), p)
        rhs = apply_field(L, apply_field(M, p)) - apply_field(M, apply_field(L, p))
        assert lhs == rhs


def test_field_is_a_derivation():
    rng = random.Random(5)
    L = field_from_matrix(rand_mat(rng), R)
    p, q = R.parse("x1*x2 + x3^2"), R.parse("x2^3 - x1")
    assert apply_field(L, p * q) == apply_field(L, p) * q + p * apply_field(L, q)


def test_jacobi_for_fields():
    rng = random.Random(6)
    L, M, N = (field_from_matrix(rand_mat(rng), R) for _ in range(3))
    total = commutator(L, commutator(M, N)) + commutator(M, commutator(N, L)) + commutator(N, commutator(L, M))
    assert total.is_zero()


def test_rep_fields_are_an_anti_homomorphism():
    g = sl2()
    rep = adjoint_rep(g)
    Ls = rep_fields(rep)
    for i in range(3):
        for j in range(3):
            image = field_from_matrix(rep.image(g.bracket_basis(i, j)), rep.ring)
            assert commutator(Ls[i], Ls[j]) == VectorField.zero(rep.ring) - image


def test_parse_and_print():
    L = VectorField.parse(R, ["x3", "0", "-x1"])
    assert str(L) == "(x3)*d/dx1 + (-x1)*d/dx3"
    assert apply_field(L, R.parse("x1^2 + x3^2")).is_zero()


def test_nonlinear_field_has_no_matrix():
    L = VectorField.parse(R, ["x2^2", "0", "0"])
    assert not L.is_linear()
    with pytest.raises(ValueError):
        L.matrix()
