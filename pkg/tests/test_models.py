import itertools
import random
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plovlab.exact import DimensionError, PreconditionError, RatMatrix
from plovlab.gallery import HK_OMEGA, HK_PARABOLIC, HK_Q
from plovlab.models import (
    AutoAction,
    ModelError,
    SparseModel,
    basis_vector,
    build_fujiki,
    build_product,
    build_torus,
    jordan_torus,
    pascal_check,
    torus_positivity,
    validate,
)
from plovlab.spectral import unipotent_reduction

from conftest import gallery_pair


def b(d, i, j):
    """b_ij with 1-based indices."""
    return basis_vector(d * d, (i - 1) * d + (j - 1))


def from_matrix(C):
    return tuple(Fraction(x) for row in C for x in row)


def rand_class(rng, h, lo=-3, hi=3):
    return tuple(Fraction(rng.randint(lo, hi)) for _ in range(h))


def test_torus_signs_d2():
    m, _ = build_torus([[1, 0], [0, 1]])
    assert m.eval_I([b(2, 1, 1), b(2, 2, 2)]) == 1
    assert m.eval_I([b(2, 1, 2), b(2, 2, 1)]) == -1
    assert m.eval_I([b(2, 1, 1), b(2, 1, 1)]) == 0


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_torus_volume_is_factorial(d):
    m, _ = jordan_torus([1] * d)
    assert m.volume() == factorial(d)


def test_zero_argument_gives_zero():
    rng = random.Random(0)
    for name in ("torus-jordan-d3", "fujiki-parabolic-d2", "product-j2xj2"):
        m, _ = gallery_pair(name)
        classes = [tuple(Fraction(0) for _ in range(m.h))] + [rand_class(rng, m.h) for _ in range(m.d - 1)]
        assert m.eval_I(classes) == 0


def test_arity_and_length_are_checked():
    m, _ = jordan_torus([2])
    with pytest.raises(DimensionError):
        m.eval_I([m.omega])
    with pytest.raises(DimensionError):
        m.eval_I([m.omega, (1, 0)])


def test_e2_jordan_nilpotent_orbit():
    m, a = jordan_torus([2])
    N = a.F - RatMatrix.identity(4)
    w = m.omega
    Nw = N.apply(w)
    assert Nw == from_matrix([[1, 1], [1, 0]])
    N2w = N.apply(Nw)
    assert N2w == from_matrix([[2, 0], [0, 0]])
    assert all(x == 0 for x in N.apply(N2w))
    assert validate(m, a).ok


def test_identity_torus_has_trivial_action():
    m, a = jordan_torus([1, 1, 1])
    assert a.F == RatMatrix.identity(9)
    assert a.cert.k == 0


@pytest.mark.parametrize("d", [3, 4])
def test_pascal_pyramid(d):
    m, a = jordan_torus([d])
    for q in range(2 * d - 1):
        assert pascal_check(m, a, q)


def test_torus_rejects_non_unimodular():
    with pytest.raises(ModelError):
        build_torus([[2, 0], [0, 1]])
    with pytest.raises(ModelError):
        build_torus([[Fraction(1, 2), 0], [0, 2]])


def test_golden_torus_builds_and_validates():
    # structural validation does not look at quasi-unipotence
    m, a = build_torus([[2, 1], [1, 1]])
    assert validate(m, a).ok
    assert not a.quasi.is_quasi_unipotent


def test_corrupted_tensor_is_caught():
    m, a = jordan_torus([2])
    sparse = m.to_sparse()
    tensor = dict(sparse.tensor)
    key = (0, 3)
    tensor[key] = tensor.get(key, 0) + 1
    bad = SparseModel(2, sparse.labels, tensor, sparse.omega)
    rep = validate(bad, a)
    assert not rep.ok
    fail = rep.failures()[0]
    assert fail.name == "preservation" and fail.witness is not None


def test_torus_matches_sparse_export():
    rng = random.Random(4)
    for part in ([2], [3], [2, 1], [4], [2, 2]):
        m, _ = jordan_torus(part)
        sparse = m.to_sparse()
        for _ in range(10):
            cs = [rand_class(rng, m.h) for _ in range(m.d)]
            assert m.eval_I(cs) == sparse.eval_I(cs)


@pytest.mark.parametrize("name", ["torus-jordan-d3", "fujiki-parabolic-d2", "product-j2xj2", "torus-j21"])
def test_evaluation_is_symmetric(name):
    rng = random.Random(hash(name) % 1000)
    m, _ = gallery_pair(name)
    for _ in range(5):
        cs = [rand_class(rng, m.h) for _ in range(m.d)]
        base = m.eval_I(cs)
        for perm in itertools.permutations(range(m.d)):
            assert m.eval_I([cs[p] for p in perm]) == base


@pytest.mark.parametrize("name", ["identity-d3", "rotation-order4", "torus-jordan-d4", "torus-j31", "product-j2xj2", "fujiki-parabolic", "fujiki-finite"])
def test_gallery_models_validate(name):
    m, a = gallery_pair(name)
    rep = validate(m, a)
    assert rep.ok, rep.failures()


def test_action_preserves_form_on_random_tuples():
    rng = random.Random(9)
    for name in ("torus-jordan-d5", "fujiki-parabolic-d2", "torus-j22"):
        m, a = gallery_pair(name)
        for _ in range(5):
            cs = [rand_class(rng, m.h, -1, 1) for _ in range(m.d)]
            assert m.eval_I([a.F.apply(c) for c in cs]) == m.eval_I(cs)


def test_product_of_elliptic_curves():
    e1, a1 = jordan_torus([1])
    p, ap = build_product(e1, a1, e1, a1)
    assert p.volume() == 2
    e2, _ = jordan_torus([1, 1])
    # diagonal classes b11 (+) 0 and 0 (+) b11 correspond to b11 and b22 on E^2
    x = (Fraction(1), Fraction(0))
    y = (Fraction(0), Fraction(1))
    assert p.eval_I([x, y]) == e2.eval_I([b(2, 1, 1), b(2, 2, 2)])
    assert p.eval_I([x, x]) == e2.eval_I([b(2, 1, 1), b(2, 1, 1)])
    assert validate(p, ap).ok


def test_product_refuses_k():
    p, _ = gallery_pair("product-j2xj2")
    assert p.supports_k is False


fujiki_x = st.lists(st.integers(-4, 4), min_size=3, max_size=3)


@settings(max_examples=30, deadline=None)
@given(fujiki_x, st.integers(1, 3), st.fractions(min_value=Fraction(1, 5), max_value=5, max_denominator=5))
def test_fujiki_relation(x, half, c):
    m = build_fujiki(HK_Q, c, half, HK_OMEGA)
    x = tuple(Fraction(v) for v in x)
    assert m.eval_I([x] * m.d) == c * m.qform(x, x) ** half


def test_fujiki_example_volume():
    m = build_fujiki(HK_Q, 1, 1, HK_OMEGA)
    assert m.eval_I([m.omega, m.omega]) == 2


def test_fujiki_rejections():
    with pytest.raises(ModelError):
        build_fujiki([[1, 0, 0], [0, 1, 0], [0, 0, -1]], 1, 1, [1, 0, 0])
    with pytest.raises(ModelError):
        build_fujiki(HK_Q, 1, 1, [0, 1, 0])


def test_parabolic_isometry():
    m = build_fujiki(HK_Q, 1, 1, HK_OMEGA)
    F = HK_PARABOLIC
    assert F.T @ m.q @ F == m.q
    N = F - RatMatrix.identity(3)
    u, v = basis_vector(3, 0), basis_vector(3, 2)
    assert N.apply(N.apply(v)) == u
    assert (N ** 3).is_zero()
    assert unipotent_reduction(F).k == 2
    assert validate(m, AutoAction(F)).ok


def test_torus_positivity_examples():
    m, a = jordan_torus([2])
    assert torus_positivity(m, m.omega) == "positive"
    assert torus_positivity(m, from_matrix([[2, 0], [0, 0]])) == "semidefinite"
    assert torus_positivity(m, from_matrix([[1, 0], [0, -1]])) == "indefinite"
    with pytest.raises(PreconditionError):
        torus_positivity(m, from_matrix([[0, 1], [-1, 0]]))
    with pytest.raises(ModelError):
        torus_positivity(build_fujiki(HK_Q, 1, 1, HK_OMEGA), HK_OMEGA)


def test_nef_monotonicity_on_tori():
    rng = random.Random(21)

    def psd(d):
        B = RatMatrix([[rng.randint(-2, 2) for _ in range(d)] for _ in range(d)])
        return B @ B.T

    for d in (2, 3):
        m, _ = jordan_torus([1] * d)
        for _ in range(15):
            Ls = [psd(d) for _ in range(d)]
            Ms = [L + psd(d) for L in Ls]
            lo = m.eval_I([from_matrix(L.tolist()) for L in Ls])
            hi = m.eval_I([from_matrix(M.tolist()) for M in Ms])
            assert hi >= lo >= 0
