import pytest
from hypothesis import given, strategies as st

from liebialg.algebra_core import IDX, LieAlgebra, bianchi, jacobi_check
from liebialg.bialgebra import Bialgebra, build_double, cocycle_check, cocommutator, dual_from_r
from liebialg.rmatrix import parse_r
from liebialg.tables import listed_r


def test_every_entry_is_a_bialgebra(catalog):
    for name in catalog.names():
        b = catalog[name]
        assert cocycle_check(b) == [], name
        D = build_double(b)
        assert D.invariance_violations() == [], name


def test_dual_is_an_involution(catalog):
    for name in catalog.names():
        b = catalog[name]
        bb = b.dual().dual()
        assert bb.g == b.g and bb.g_dual == b.g_dual


def test_swapped_entries_are_registered(catalog):
    b = catalog["(IX,V|b)"]
    assert catalog[b.dual().name].g == b.g_dual


@pytest.mark.parametrize("entry", ["(IX,V|b)", "(VIII,V.i|b)", "(VI_o,V.ii)", "(III,III.ii)",
                                   "(VI_a,VI_1/a.ii)", "(II.i,V)", "(IV,II.i)"])
def test_dual_from_listed_r_reconstructs_dual(catalog, entry):
    b = catalog[entry]
    r = parse_r(listed_r(entry))
    # r may carry free constants; the cobracket does not depend on them
    assert dual_from_r(b.g, r, check=True) == b.g_dual


def test_non_invariant_symmetric_part_rejected():
    with pytest.raises(ValueError):
        dual_from_r(bianchi("IX"), parse_r("t(1,1)"))


def test_cocommutator_components(catalog):
    b = catalog["(IX,V|b)"]
    for i in IDX:
        d = cocommutator(b, i)
        assert d == -d.T


def random_dual(values):
    return LieAlgebra.from_brackets("d", {(1, 2): values[0:3], (1, 3): values[3:6], (2, 3): values[6:9]})


@given(st.sampled_from(["II", "VI_o", "VIII", "IV", "V"]),
       st.lists(st.integers(-1, 1), min_size=9, max_size=9))
def test_cocycle_condition_iff_double_is_lie(kind, values):
    g = bianchi(kind)
    d = random_dual(values)
    if jacobi_check(d.f):
        return
    b = Bialgebra("x", g, d)
    assert (cocycle_check(b) == []) == (build_double(b, check=False).jacobi_violations() == [])


def test_double_reports_failure():
    b = Bialgebra("x", bianchi("II"), LieAlgebra.from_brackets("d", {(2, 3): [0, 1, 0]}))
    assert cocycle_check(b)
    with pytest.raises(ValueError):
        build_double(b)
