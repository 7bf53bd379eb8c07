import dataclasses

import numpy as np
import pytest

from fracbs import _backend
from fracbs.grid import Grid
from fracbs.marcher import SOURCE_RULES, StepError, half_step_source, nodal_row, run, solve_problem
from fracbs.problems import constant_problem, manufactured_problem, zero_problem
from fracbs.verification.norms import error_norms
from fracbs.verification.oracles import dense_reference_solve


def test_zero_problem_stays_zero(backend_name):
    res = solve_problem(zero_problem(), 0.5, 1.0, 16, 20, backend=backend_name)
    assert np.max(np.abs(res.nodal)) <= 1e-13
    np.testing.assert_array_equal(nodal_row(res, 20), np.zeros(17))


@pytest.mark.parametrize("mu", [0.2, 0.8])
@pytest.mark.parametrize("p", [0.01, 1.0, 30.0])
def test_constant_steady_state(mu, p):
    c = 7.25
    res = solve_problem(constant_problem(c), mu, p, 12, 100)
    assert np.max(np.abs(res.nodal - c)) <= 1e-11 * c


@pytest.mark.parametrize("mu", [0.3, 0.7])
def test_dense_end_to_end(mu):
    spec = manufactured_problem(mu)
    grid = Grid(0.0, 1.0, 4, 1.0, 4)
    res = run(spec, grid, mu, 1.0)
    ref = dense_reference_solve(spec, grid, mu, 1.0)
    assert np.max(np.abs(res.nodal - ref)) <= 1e-12 * np.max(np.abs(ref))


def test_dense_end_to_end_midpoint_rule():
    spec = manufactured_problem(0.5)
    grid = Grid(0.0, 1.0, 4, 1.0, 4)
    res = run(spec, grid, 0.5, 0.1, source_rule="midpoint")
    ref = dense_reference_solve(spec, grid, 0.5, 0.1, source_rule="midpoint")
    assert np.max(np.abs(res.nodal - ref)) <= 1e-12 * np.max(np.abs(ref))


def test_boundary_fidelity():
    spec = manufactured_problem(0.6)
    spec = dataclasses.replace(spec, h1=lambda t: 0.1 * np.sin(3 * t), h2=lambda t: 1.0 + t, exact=None)
    res = solve_problem(spec, 0.6, 1.0, 20, 30)
    tau = res.grid.tau
    assert np.all(np.abs(res.nodal[1:, 0] - 0.1 * np.sin(3 * tau[1:])) <= 1e-10)
    assert np.all(np.abs(res.nodal[1:, -1] - (1.0 + tau[1:])) <= 1e-10 * (1.0 + tau[1:]))


def test_initial_row_interpolates():
    spec = manufactured_problem(0.5)
    res = solve_problem(spec, 0.5, 1.0, 10, 5)
    np.testing.assert_allclose(nodal_row(res, 0), spec.initial(res.grid.y), atol=1e-15)
    with pytest.raises(IndexError):
        nodal_row(res, 6)


def test_deterministic():
    spec = manufactured_problem(0.4)
    a = solve_problem(spec, 0.4, 0.5, 30, 40)
    b = solve_problem(spec, 0.4, 0.5, 30, 40)
    np.testing.assert_array_equal(a.nodal, b.nodal)
    np.testing.assert_array_equal(a.final_delta, b.final_delta)


def test_backends_agree():
    if len(_backend.available()) < 2:
        pytest.skip("compiled backend not built")
    spec = manufactured_problem(0.7)
    a = solve_problem(spec, 0.7, 0.1, 25, 60, backend="compiled")
    b = solve_problem(spec, 0.7, 0.1, 25, 60, backend="python")
    assert a.meta["backend"] == "compiled" and b.meta["backend"] == "python"
    np.testing.assert_allclose(a.nodal, b.nodal, rtol=1e-13, atol=1e-15)


def test_table_entry():
    spec = manufactured_problem(0.5)
    res = solve_problem(spec, 0.5, 0.01, 200, 320)
    l2, _ = error_norms(res.nodal[-1], spec.exact(res.grid.y, 1.0), res.grid.dy)
    assert abs(l2 - 4.9530e-06) / 4.9530e-06 <= 0.10


def test_meta_fields():
    res = solve_problem(zero_problem(), 0.5, 1.0, 4, 2)
    for key in ("mu", "p", "J", "N", "domain", "horizon", "wall_time", "backend", "source_rule", "constants"):
        assert key in res.meta


def test_source_rules():
    spec = manufactured_problem(0.5)
    grid = Grid(0.0, 1.0, 4, 1.0, 2)
    avg = half_step_source(spec, grid, "average")
    mid = half_step_source(spec, grid, "midpoint")
    assert avg.shape == mid.shape == (2, 5)
    np.testing.assert_allclose(avg[0], 0.5 * (spec.source(grid.y, 0.0) + spec.source(grid.y, 0.5)))
    np.testing.assert_allclose(mid[1], spec.source(grid.y, 0.75))
    assert SOURCE_RULES == ("average", "midpoint")
    with pytest.raises(ValueError):
        half_step_source(spec, grid, "left")


def test_domain_mismatch_rejected():
    with pytest.raises(ValueError, match="does not match"):
        run(manufactured_problem(0.5), Grid(0.0, 2.0, 4, 1.0, 4), 0.5, 1.0)


@pytest.mark.filterwarnings("ignore:invalid value:RuntimeWarning")
def test_nonfinite_raises_step_error():
    spec = dataclasses.replace(zero_problem(), h1=lambda t: np.where(t > 0.5, np.inf, 0.0))
    with pytest.raises(StepError) as info:
        solve_problem(spec, 0.5, 1.0, 6, 4)
    assert info.value.step == 2


def test_grid_validation():
    for bad in [(0, 1, 1, 1, 1), (1, 0, 4, 1, 1), (0, 1, 4, 0, 1), (0, 1, 4, 1, 0)]:
        with pytest.raises(ValueError):
            Grid(*bad)
    g = Grid(0.0, 2.0, 8, 1.0, 4)
    assert g.dy == 0.25 and g.dtau == 0.25 and g.y[-1] == 2.0 and g.tau[-1] == 1.0
