import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lambda_potts import gibbs_recursion as gr
from lambda_potts.model import ModelParams

LOG4 = math.log(4.0)
WINDOW = gr.params_for(0.0315, 4.0)  # a = b = 1, d = 4, alpha inside (1/32, 4/125)

pos = st.floats(min_value=0.05, max_value=20.0)
weights = st.builds(gr.Weights, pos, pos, pos, pos)
fields = st.lists(st.floats(min_value=1e-3, max_value=1e3), min_size=8, max_size=8)


def sign_change_roots(alpha, upsilon, lo=1e-9, hi=1e9, n=200_001):
    """Count positive roots of the cubic by sign changes on a log grid."""
    x = np.logspace(math.log10(lo), math.log10(hi), n)
    a, b, c, d = gr.cubic_coefficients(alpha, upsilon)
    v = ((a * x + b) * x + c) * x + d
    s = np.sign(v)
    # a grid point that hits a simple root exactly counts once
    return int(np.count_nonzero(s[1:] * s[:-1] < 0) + np.count_nonzero(s == 0))


def test_weights_examples():
    assert gr.weights(ModelParams()).astuple() == (1.0, 1.0, 1.0, 1.0)
    assert gr.weights(ModelParams(J=LOG4)).d == pytest.approx(4.0, rel=1e-15)
    assert gr.weights(ModelParams(a_bar=0.5, beta=2)).a == pytest.approx(math.e, rel=1e-15)
    with pytest.raises(ValueError):
        gr.weights(ModelParams(beta=0))


def test_rhs_symmetric_point():
    ones = np.ones(8)
    assert np.allclose(gr.rhs_map(ones, gr.Weights(2, 2, 2, 1)), ones, rtol=0, atol=1e-15)
    assert np.allclose(gr.rhs_map(ones, gr.Weights(1.7, 1.7, 0.4, 1)), ones, rtol=0, atol=1e-15)


def test_rhs_matches_kernel_rows():
    """The matrix form of the map agrees with the row-by-row kernel formula."""
    rng = np.random.default_rng(0)
    from lambda_potts import _fallback

    for _ in range(50):
        w = gr.Weights(*rng.uniform(0.1, 5, 4))
        u = rng.uniform(0.01, 10, 8)
        den = u[0] * w.b + u[1] * w.a + w.c * w.d
        expect = (_fallback.numerators(u, *w.astuple()) / den) ** 3
        assert np.allclose(gr.rhs_map(u, w, 3), expect, rtol=1e-14)


def test_rhs_rejects_nonpositive():
    with pytest.raises(ValueError):
        gr.rhs_map(np.zeros(8), gr.Weights(1, 1, 1, 1))


@given(weights, fields)
def test_rhs_positive(w, u):
    out = gr.rhs_map(np.array(u), w)
    assert np.all(out > 0)


def test_set_a_invariance():
    rng = np.random.default_rng(1)
    for _ in range(1000):
        a, c, d = rng.uniform(0.1, 5, 3)
        w = gr.Weights(a, a, c, d)
        x = rng.uniform(1e-2, 1e2)
        u = np.array([x, x, x, 1, x, x, x, 1.0])
        out = gr.rhs_map(u, w, int(rng.integers(2, 5)))
        six = out[[0, 1, 2, 4, 5, 6]]
        assert np.ptp(six) <= 1e-12 * six[0]
        assert abs(out[3] - out[7]) <= 1e-12 * out[3]


def test_reduce_to_scalar_examples():
    assert gr.reduce_to_scalar(gr.Weights(1.3, 1.3, 1.3, 1)) == pytest.approx((0.5, 1.0))
    assert gr.reduce_to_scalar(gr.Weights(1, 1, 1, 4))[1] == 10
    assert gr.reduce_to_scalar(gr.Weights(1, 1, 2, 1))[0] == 1
    with pytest.raises(ValueError):
        gr.reduce_to_scalar(gr.Weights(1, 2, 1, 1))


def test_scalar_roots_examples():
    assert gr.scalar_fixed_points(1, 1) == pytest.approx([1.0])
    two = gr.scalar_fixed_points(1 / 32, 10)
    assert two == pytest.approx([2.0, 8.0], rel=1e-8)
    three = gr.scalar_fixed_points(0.0315, 10)
    assert len(three) == 3 and sign_change_roots(0.0315, 10) == 3
    for X in three:
        assert 0.0315 * X == pytest.approx(((1 + X) / (10 + X)) ** 2, rel=1e-12)


def test_zeta_bounds():
    z1, z2 = gr.zeta_bounds(10)
    assert z1 == pytest.approx(1 / 32, abs=1e-15) and z2 == pytest.approx(4 / 125, abs=1e-15)
    assert gr.critical_points(10) == pytest.approx((2.0, 5.0))
    with pytest.raises(ValueError):
        gr.zeta_bounds(9)
    assert gr.zeta_bounds(9, boundary=True) == (1 / 27, 1 / 27)
    v1, v2 = gr.critical_points(12.5)
    assert v1 * v1 - 9.5 * v1 + 12.5 == pytest.approx(0, abs=1e-12)
    z1, z2 = gr.zeta_bounds(12.5)
    mid = 0.5 * (z1 + z2)
    assert len(gr.scalar_fixed_points(mid, 12.5)) == 3
    assert len(gr.scalar_fixed_points(z1 * 0.99, 12.5)) == 1
    assert len(gr.scalar_fixed_points(z2 * 1.01, 12.5)) == 1


def test_zeta_window_monotone_and_coalescing():
    ups = np.linspace(9 + 1e-9, 40, 400)
    z = np.array([gr.zeta_bounds(u) for u in ups])
    assert np.all(z[:, 0] < z[:, 1])
    assert np.all(np.abs(np.diff(z, axis=0)) < 1e-2)
    assert z[0] == pytest.approx([1 / 27, 1 / 27], abs=1e-5)


def test_count_solutions_examples():
    assert gr.count_solutions(3.0, 5) == 1
    assert gr.count_solutions(1e-4, 5) == 1
    assert gr.count_solutions(0.0315, 10) == 3
    assert gr.count_solutions(1 / 32, 10) == 2
    assert gr.count_solutions(0.04, 10) == 1


@settings(max_examples=200)
@given(
    st.floats(min_value=1e-4, max_value=10.0),
    st.floats(min_value=0.5, max_value=30.0),
)
def test_count_matches_root_finder(alpha, upsilon):
    if upsilon > 9:
        z1, z2 = gr.zeta_bounds(upsilon)
        if min(abs(alpha - z1), abs(alpha - z2)) < 1e-9:
            return
    n = gr.count_solutions(alpha, upsilon)
    assert len(gr.scalar_fixed_points(alpha, upsilon)) == n
    assert sign_change_roots(alpha, upsilon, n=20_001) == n


def test_lift_is_fixed_point():
    w = gr.weights(WINDOW)
    alpha, ups = gr.reduce_to_scalar(w)
    lifted = [gr.lift_scalar_to_A(X, w) for X in gr.scalar_fixed_points(alpha, ups)]
    assert len(lifted) == 3
    for u in lifted:
        assert gr.in_set_A(u)
        assert gr.residual(u, w) < 1e-10
    sym = gr.Weights(1.5, 1.5, 1.5, 1.0)
    assert np.allclose(gr.lift_scalar_to_A(gr.scalar_fixed_points(*gr.reduce_to_scalar(sym))[0], sym), 1)


def test_fixed_points_symmetric_case():
    sols = gr.fixed_points_TI(ModelParams(0.7, 0.7, 0.7, 0))
    assert len(sols) == 1 and np.allclose(sols[0], 1, atol=1e-12)


def test_fixed_points_window():
    sols = gr.fixed_points_TI(WINDOW)
    on_a = [u for u in sols if gr.in_set_A(u, 1e-10)]
    assert len(on_a) == 3
    for u in sols:
        assert gr.residual(u, WINDOW) < gr.RESIDUAL_TOL


def test_fixed_points_without_seeding():
    # the multi-start search alone already finds several solutions here
    assert len(gr.fixed_points_TI(WINDOW, seed_invariant=False)) >= 3


def test_unique_on_a_below_threshold():
    p = gr.params_for(0.03, 2.0)  # upsilon = 3
    on_a = [u for u in gr.fixed_points_TI(p) if gr.in_set_A(u, 1e-10)]
    assert len(on_a) == 1


def test_fixed_points_other_k():
    sols = gr.fixed_points_TI(ModelParams(0.2, -0.1, 0.3, 0.4), k=3, starts=16)
    assert sols and all(gr.residual(u, ModelParams(0.2, -0.1, 0.3, 0.4), 3) < 1e-12 for u in sols)
    with pytest.raises(ValueError):
        gr.fixed_points_TI(WINDOW, k=1)


def test_fixed_points_deterministic():
    a = gr.fixed_points_TI(WINDOW, seed=3)
    b = gr.fixed_points_TI(WINDOW, seed=3)
    assert len(a) == len(b) and all(np.array_equal(x, y) for x, y in zip(a, b))


def test_flip_maps_fixed_points_to_fixed_points():
    sols = gr.fixed_points_TI(WINDOW)
    for u in sols:
        f = gr.flip_u(u)
        assert gr.residual(f, WINDOW) < 1e-10
        assert any(gr.relative_distance(f, v) < 1e-8 for v in sols)
        assert np.allclose(gr.flip_u(f), u, rtol=1e-12)


def test_phase_transition_examples():
    diag = gr.phase_transition(WINDOW)
    assert diag.phase_transition and diag.n_solutions == 3
    assert diag.upsilon == pytest.approx(10)
    assert not gr.phase_transition(gr.params_for(0.0315, 2.0)).phase_transition
    at = gr.phase_transition(gr.params_for(1 / 27, gr.D_STAR))
    assert not at.phase_transition
    with pytest.raises(ValueError):
        gr.phase_transition(ModelParams(0, 1, 0, 1))


def test_transition_threshold():
    assert abs(gr.transition_threshold() - (math.sqrt(73) - 1) / 2) < 1e-9
    assert gr.D_STAR**2 + gr.D_STAR - 18 == pytest.approx(0, abs=1e-12)
