import itertools

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, strategies as st

from liebialg.algebra_core import (BIANCHI_TABLE, IDX, LieAlgebra, bianchi, entries, identify,
                                   jacobi_check, killing_form, tensor_from_adjoints, transform)
from liebialg.scalars import a

TYPES = sorted(BIANCHI_TABLE)


def random_tensor(values):
    """Antisymmetric integer tensor from 9 values ([X1,X2], [X1,X3], [X2,X3])."""
    f = sp.MutableDenseNDimArray.zeros(3, 3, 3)
    for n, (i, j) in enumerate(((0, 1), (0, 2), (1, 2))):
        for k in IDX:
            f[i, j, k] = values[3 * n + k]
            f[j, i, k] = -values[3 * n + k]
    return f


def jacobi_by_adjoints(f):
    """Independent oracle: ad is a representation iff [ad X_i, ad X_j] = f_ij^k ad X_k."""
    F = np.array(entries(f), dtype=float).reshape(3, 3, 3)
    ad = [F[i].T for i in IDX]  # (ad X_i)[k, j] = f[i, j, k]
    return all(np.allclose(ad[i] @ ad[j] - ad[j] @ ad[i], sum(F[i, j, k] * ad[k] for k in IDX))
               for i, j in itertools.combinations(IDX, 2))


@pytest.mark.parametrize("kind", TYPES)
def test_bianchi_types_satisfy_jacobi(kind):
    assert jacobi_check(bianchi(kind).f) == []


@pytest.mark.parametrize("kind", TYPES)
def test_identify_recovers_type(kind):
    assert identify(bianchi(kind))[0] == kind


def test_killing_forms_of_semisimple_types():
    assert bianchi("VIII").killing() == sp.diag(2, 2, -2)
    assert bianchi("IX").killing() == -2 * sp.eye(3)


def test_trace_of_first_adjoint_matrix():
    assert sp.simplify(bianchi("VI_a").X(0).trace() - 2 * a) == 0
    assert bianchi("IX").X(0).trace() == 0


def test_parameter_rules():
    with pytest.raises(ValueError):
        bianchi("VI_a", 1)
    with pytest.raises(ValueError):
        bianchi("IX", 2)
    with pytest.raises(ValueError):
        bianchi("XI")


def test_antisymmetry_enforced():
    f = sp.MutableDenseNDimArray.zeros(3, 3, 3)
    f[0, 1, 2] = 1
    with pytest.raises(ValueError):
        LieAlgebra("bad", f)


def test_brackets_round_trip():
    g = bianchi("VII_a")
    h = LieAlgebra.from_brackets("h", {k: v for k, v in g.brackets().items()})
    assert h == g


def test_adjoint_round_trip():
    g = bianchi("VI_a")
    assert tensor_from_adjoints([g.X(i) for i in IDX]) == g.f


@given(st.lists(st.integers(-2, 2), min_size=9, max_size=9))
def test_jacobi_check_agrees_with_adjoint_oracle(values):
    f = random_tensor(values)
    assert (jacobi_check(f) == []) == jacobi_by_adjoints(f)


invertible = st.lists(st.integers(-2, 2), min_size=9, max_size=9).map(
    lambda v: sp.Matrix(3, 3, v)).filter(lambda M: M.det() != 0)


@given(st.sampled_from(["II", "VI_o", "VIII", "IV", "III"]), invertible)
def test_change_of_basis_preserves_type(kind, M):
    g = bianchi(kind)
    h = transform(g, M)
    assert jacobi_check(h.f) == []
    assert identify(h)[0] == kind
    # the Killing form transforms as a bilinear form
    assert killing_form(h.f) == (M * g.killing() * M.T).applyfunc(sp.simplify)
