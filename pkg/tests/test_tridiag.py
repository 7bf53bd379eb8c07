import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracbs import tridiag
from fracbs.assembly import build_stencil, reduce_boundaries
from fracbs.basis import basis_constants
from fracbs.fractional import make_weights
from fracbs.problems import manufactured_problem
from fracbs.verification.oracles import dense_solve


def _second_difference(n):
    return np.full(n, -1.0), np.full(n, 2.0), np.full(n, -1.0)


def test_identity(backend_name):
    f = tridiag.factorize(np.zeros(5), np.ones(5), np.zeros(5))
    np.testing.assert_array_equal(f.pivots, np.ones(5))
    b = np.arange(5.0)
    np.testing.assert_array_equal(tridiag.solve(f, b, backend=backend_name), b)
    np.testing.assert_array_equal(tridiag.dominance_report(np.zeros(5), np.ones(5), np.zeros(5)), np.ones(5))


def test_hand_elimination(backend_name):
    f = tridiag.factorize(*_second_difference(3))
    np.testing.assert_allclose(f.pivots, [2.0, 1.5, 4.0 / 3.0], rtol=1e-15)
    np.testing.assert_allclose(tridiag.solve(f, [1.0, 0.0, 1.0], backend=backend_name), [1.0, 1.0, 1.0], rtol=1e-15)
    np.testing.assert_array_equal(tridiag.dominance_report(*_second_difference(3)), [1.0, 0.0, 1.0])


def _random_dominant(rng, n):
    sub, sup = rng.uniform(-1, 1, n), rng.uniform(-1, 1, n)
    diag = (np.abs(sub) + np.abs(sup) + rng.uniform(0.1, 2.0, n)) * rng.choice([-1, 1], n)
    return sub, diag, sup


@pytest.mark.parametrize("n", [2, 3, 8, 16])
def test_random_dominant_vs_dense(rng, n, backend_name):
    for _ in range(20):
        sub, diag, sup = _random_dominant(rng, n)
        b = rng.normal(size=n)
        x = tridiag.solve(tridiag.factorize(sub, diag, sup), b, backend=backend_name)
        ref = dense_solve(tridiag.to_dense(sub, diag, sup), b)
        assert np.linalg.norm(x - ref) <= 1e-12 * np.linalg.norm(ref)
        assert np.all(tridiag.dominance_report(sub, diag, sup) > 0)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 16))
def test_property_dense_agreement(seed, n):
    rng = np.random.default_rng(seed)
    sub, diag, sup = _random_dominant(rng, n)
    b = rng.normal(size=n)
    x = tridiag.solve(tridiag.factorize(sub, diag, sup), b)
    ref = dense_solve(tridiag.to_dense(sub, diag, sup), b)
    assert np.linalg.norm(x - ref) <= 1e-12 * max(np.linalg.norm(ref), 1e-300)


def test_factorization_reuse(rng):
    sub, diag, sup = _random_dominant(rng, 12)
    f = tridiag.factorize(sub, diag, sup)
    for _ in range(5):
        b = rng.normal(size=12)
        once = tridiag.solve(f, b)
        fresh = tridiag.solve(tridiag.factorize(sub, diag, sup), b)
        np.testing.assert_array_equal(once, fresh)


def test_backends_agree_bitwise(rng):
    from fracbs import _backend

    if len(_backend.available()) < 2:
        pytest.skip("compiled backend not built")
    sub, diag, sup = _random_dominant(rng, 40)
    f = tridiag.factorize(sub, diag, sup)
    b = rng.normal(size=40)
    np.testing.assert_array_equal(tridiag.solve(f, b, backend="compiled"), tridiag.solve(f, b, backend="python"))


def test_manufactured_stencil_system_vs_dense(rng):
    spec = manufactured_problem(0.5)
    J = 8
    b = basis_constants(1.0, 1.0 / J)
    st_ = build_stencil(b, make_weights(0.5, 1.0 / J, J), spec.kappas)
    system = reduce_boundaries(st_, rng.normal(size=J + 1), 0.3, -0.2)
    x = tridiag.solve(tridiag.factorize(system.sub, system.diag, system.sup), system.rhs)
    ref = dense_solve(system.dense(), system.rhs)
    assert np.linalg.norm(x - ref) <= 1e-12 * np.linalg.norm(ref)


def test_singular_pivot_names_row():
    with pytest.raises(tridiag.SingularSystemError) as info:
        tridiag.factorize([0.0, 1.0, 1.0], [1.0, 1.0, 1.0], [1.0, 1.0, 0.0])
    assert info.value.row == 1
    assert "1" in str(info.value)
    with pytest.raises(tridiag.SingularSystemError) as info:
        tridiag.factorize([0.0, 1.0], [0.0, 1.0], [1.0, 0.0])
    assert info.value.row == 0


def test_shape_errors():
    with pytest.raises(ValueError):
        tridiag.factorize([0, 1], [1, 1, 1], [1, 1, 0])
    f = tridiag.factorize(np.zeros(3), np.ones(3), np.zeros(3))
    with pytest.raises(ValueError):
        tridiag.solve(f, np.ones(4))
