import pytest
import sympy as sp

from liebialg.algebra_core import bianchi
from liebialg.poisson import (BOX, NotCYBE, PAIRS, compare_table, frame_residuals, invariant_fields,
                              jacobi_deviation, linearization_check, max_abs, max_deviation,
                              sample_points, sklyanin)
from liebialg.rmatrix import parse_r
from liebialg.symbolic import COORDS
from liebialg.tables import listed_r

FRAME_TYPES = ["II", "VII_o", "VI_o", "IX", "VIII", "V", "IV", "VII_a", "III", "VI_a"]


@pytest.mark.parametrize("kind", FRAME_TYPES)
def test_invariant_frame_properties(kind):
    g = bianchi(kind)
    res = frame_residuals(invariant_fields(g), g)
    for key, M in res.items():
        assert max(max_abs(list(M), samples=5)) < 1e-10, key


def test_frames_are_identity_at_origin():
    fr = invariant_fields(bianchi("VIII"))
    origin = dict.fromkeys(COORDS, 0)
    assert fr.left.subs(origin) == sp.eye(3)
    assert fr.right.subs(origin) == sp.eye(3)


def test_known_frame_rows():
    fr = invariant_fields(bianchi("V"))
    x1 = COORDS[0]
    # on the book algebra the left translates of X2, X3 rescale by exp(x1)
    assert sp.simplify(fr.right.row(0) - sp.Matrix([[1, 0, 0]]).row(0)) == sp.zeros(1, 3)
    assert fr.left.free_symbols | fr.right.free_symbols <= set(COORDS)
    assert any(e.has(sp.exp(x1)) or e.has(sp.exp(-x1)) for e in fr.right)


@pytest.mark.parametrize("entry", ["(IX,V|b)", "(VII_o,V.i)", "(VI_a,II)", "(III,III.ii)", "(V.ii,VI_o)"])
def test_sklyanin_is_poisson_and_linearizes_to_dual(catalog, entry):
    bb = catalog[entry]
    P = sklyanin(bb.g, parse_r(listed_r(entry)))
    assert P.P.subs(dict.fromkeys(COORDS, 0)) == sp.zeros(3)
    assert P.P == -P.P.T
    assert jacobi_deviation(P) < 1e-9
    assert linearization_check(P, bb.g_dual) == []


def test_one_sided_brackets_need_cybe(catalog):
    bb = catalog["(IX,V|b)"]
    with pytest.raises(NotCYBE):
        sklyanin(bb.g, parse_r("b*w(2,3)"), "left")
    tri = catalog["(IV,II.i)"]
    P = sklyanin(tri.g, parse_r("-w(2,3)"), "right")
    assert jacobi_deviation(P) < 1e-9


def test_sklyanin_is_left_minus_right(catalog):
    bb = catalog["(III,III.iii)"]
    r = parse_r(listed_r("(III,III.iii)"))
    S, L, R = (sklyanin(bb.g, r, f) for f in ("sklyanin", "left", "right"))
    assert (S.P - L.P + R.P).applyfunc(sp.simplify) == sp.zeros(3)


def test_su2_brackets_match_closed_form(catalog):
    bb = catalog["(IX,V|b)"]
    P = sklyanin(bb.g, parse_r("b*w(2,3)"))
    expected = ["-b*tan(x2)", "-b*sin(x3)/cos(x2)", "b*(cos(x3) - 1/cos(x2))"]
    assert compare_table(P, [sp.sympify(e, locals={"b": sp.Symbol("b", real=True)}) for e in expected])["pass"]


def test_sampling_is_deterministic_and_inside_box():
    pts = sample_points(20, seed=3)
    assert pts == sample_points(20, seed=3)
    assert all(abs(x) <= BOX for p in pts for x in p)
    assert max_deviation(["x1"], ["x1 + 1/1000"], samples=3)[0] == pytest.approx(1e-3)


def test_pairs_order():
    assert PAIRS == ((0, 1), (0, 2), (1, 2))
