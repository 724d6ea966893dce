import pytest

from invkit.catalog import casimir_sl2, heisenberg, sl2
from invkit.errors import NotInvariantError
from invkit.lie import abelian
from invkit.poly import Ring, taylor_coefficients
from invkit.solver import Verdict, jacobian_rank
from invkit.takiff import derived_invariants, restrict_to_lower, verify_takiff_corollary


def _base(g):
    if g.basis_names == ("h", "e", "f"):
        return casimir_sl2()
    return Ring(g.basis_names).var("P")


CASES = [(sl2, 1), (sl2, 2), (heisenberg, 1)]


@pytest.mark.parametrize("build,m", CASES)
def test_lower_members_ignore_top_block(build, m):
    g = build()
    fam = derived_invariants(g, _base(g), m)
    n = g.dim
    for j in range(m):
        assert not any(fam.derived[j].involves(m * n + i) for i in range(n))


@pytest.mark.parametrize("build,m", CASES)
def test_restriction_gives_lower_family(build, m):
    g = build()
    p = _base(g)
    fam = derived_invariants(g, p, m)
    lower = taylor_coefficients(p, m - 1)
    for j in range(m):
        assert restrict_to_lower(fam.derived[j], g.dim, m) == lower[j]


def test_sl2_first_derived_invariant():
    fam = derived_invariants(sl2(), casimir_sl2(), 1)
    assert str(fam.derived[1]) == "2*h_0*h_1 + e_0*f_1 + f_0*e_1"


@pytest.mark.parametrize("m,dim", [(0, 3), (1, 6), (2, 9)])
def test_sl2_families_are_characteristic(m, dim):
    tv = verify_takiff_corollary(sl2(), [casimir_sl2()], m)
    assert tv.verdict is Verdict.CHARACTERISTIC
    assert tv.record.stabilizer_dim == tv.ad_dim == dim


def test_sl2_family_is_independent():
    fam = derived_invariants(sl2(), casimir_sl2(), 2)
    assert jacobian_rank(list(fam.derived), [1, 2, 3, -1, 5, 7, 2, -3, 4]) == 3


def test_heisenberg_family_is_inconclusive():
    g = heisenberg()
    tv = verify_takiff_corollary(g, [Ring(g.basis_names).var("P")], 1)
    assert tv.verdict is Verdict.INCONCLUSIVE
    assert tv.ad_dim == 4 and tv.record.stabilizer_dim > tv.ad_dim


def test_abelian_is_inconclusive():
    g = abelian(2, ["a", "b"])
    tv = verify_takiff_corollary(g, [Ring(g.basis_names).var("a")], 1)
    assert tv.verdict is Verdict.INCONCLUSIVE
    assert tv.ad_dim == 0


def test_non_invariant_base_rejected():
    with pytest.raises(NotInvariantError):
        derived_invariants(sl2(), Ring(("h", "e", "f")).var("h"), 1)
