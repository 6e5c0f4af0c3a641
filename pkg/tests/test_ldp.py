import json
import math

import numpy as np
import pytest
from scipy import optimize

from betadet.entropy import (
    Ensemble,
    EnsembleParams,
    energy_E,
    entropy_J,
    limiting_cgf_density_g,
    primitive_F,
)
from betadet.ldp import (
    PathMeasure,
    RateBranch,
    check_infI,
    check_infIW,
    inf_convolution_check,
    legendre_dual_La,
    limiting_cgf_LT,
    marginal_rate,
    path_rate,
    recession_Ls,
    spectral_rate_jacobi,
    spectral_rate_laguerre,
)
from betadet.ldp import _mckay_log_energy_quad, _pair_log_window
from betadet.sampler import sample_cumlog_matrix
from betadet.specfun import log_gamma
from betadet.spectral import SpectralDist, a_pm, log_energy_mckay

GRAM = EnsembleParams(Ensemble.GRAM, 2.0, 2)
LAG = EnsembleParams(Ensemble.LAGUERRE, 2.0, 2)
JAC = EnsembleParams(Ensemble.JACOBI, 2.0, 2, 1.0, 2.0)
AUX = EnsembleParams(Ensemble.AUX_S, 2.0, 2)
ALL = (GRAM, LAG, JAC, AUX)

# frozen marginal rates at the Gram junction terminal value xi = -T,
# cross-validated against the cgf quadrature and the path functional
GRAM_JUNCTION_RATES = {
    0.25: 0.131338884092067,
    0.50: 0.125,
    0.75: 0.056161115907933,
}


def lln_terminal(params, T):
    if params.kind is Ensemble.JACOBI:
        return float(energy_E(params.tau1, params.tau2, T))
    if params.kind is Ensemble.AUX_S:
        return 0.0
    return -float(entropy_J(1.0 - T))


def junction_terminal(params, T):
    """Terminal value where the Interior branch hands over to the tail."""
    if params.kind is Ensemble.GRAM:
        return -T
    if params.kind is Ensemble.LAGUERRE:
        return float(entropy_J(T)) - 1.0
    return float(energy_E(T, params.tau2, T))


def lln_slope(params):
    if params.kind is Ensemble.JACOBI:
        t1, t2 = params.tau1, params.tau2
        return lambda t: math.log((t1 - t) / (t1 + t2 - t))
    if params.kind is Ensemble.AUX_S:
        return lambda t: 0.0
    return lambda t: math.log(1.0 - t)


# ---------------------------------------------------------------- domains


def test_horizon_validation():
    for params, bad in ((GRAM, 1.0), (LAG, 1.0), (JAC, 1.0)):
        with pytest.raises(ValueError):
            marginal_rate(params, bad, -0.1)
        with pytest.raises(ValueError):
            limiting_cgf_LT(params, bad, 0.1)
    with pytest.raises(ValueError):
        marginal_rate(GRAM, 0.0, -0.1)
    # the auxiliary process is steep up to and including its endpoint
    assert marginal_rate(AUX, 1.0, 0.2).branch is RateBranch.INTERIOR
    with pytest.raises(ValueError):
        marginal_rate(AUX, 1.2, 0.2)


def test_time_validation():
    with pytest.raises(ValueError):
        legendre_dual_La(GRAM, 1.0, -0.5)
    with pytest.raises(ValueError):
        legendre_dual_La(JAC, 1.0, -0.5)
    with pytest.raises(ValueError):
        recession_Ls(LAG, -0.1, -0.5)
    with pytest.raises(ValueError):
        limiting_cgf_LT(GRAM, 0.5, 0.1, method="series")


def test_path_measure_validation():
    with pytest.raises(ValueError):
        PathMeasure(grid=np.array([0.0]), ac_density=np.array([]))
    with pytest.raises(ValueError):
        PathMeasure(grid=np.array([0.0, 0.5, 0.5]), ac_density=np.zeros(2))
    with pytest.raises(ValueError):
        PathMeasure(grid=np.array([-0.1, 0.5]), ac_density=np.zeros(1))
    with pytest.raises(ValueError):
        PathMeasure(grid=np.array([0.0, 0.5]), ac_density=np.zeros(2))
    with pytest.raises(ValueError):
        PathMeasure(grid=np.array([0.0, 0.5]), ac_density=np.zeros(1), atoms=((0.7, -0.1),))
    pm = PathMeasure(grid=np.array([0.0, 0.25, 0.5]), ac_density=np.array([1.0, -2.0]), atoms=((0.5, -0.3),))
    assert pm.horizon == 0.5
    assert abs(pm.terminal_value() - (0.25 - 0.5 - 0.3)) < 1e-15


def test_spectral_route_domain_errors():
    with pytest.raises(ValueError):
        spectral_rate_laguerre(SpectralDist.mckay(0.2, 0.7), 0.5)
    with pytest.raises(ValueError):
        spectral_rate_laguerre(SpectralDist.mp(2.0, 1.0), 0.5)  # atom at zero
    with pytest.raises(ValueError):
        spectral_rate_laguerre(SpectralDist.mp(0.5, 1.0), 1.0)
    with pytest.raises(ValueError):
        spectral_rate_jacobi(SpectralDist.mp(0.5, 1.0), 0.4, 1.0, 2.0)
    with pytest.raises(ValueError):
        spectral_rate_jacobi(SpectralDist.mckay(0.2, 0.7), 1.0, 1.0, 2.0)
    with pytest.raises(ValueError):
        check_infIW(0.5, float(entropy_J(0.5)) - 1.0)  # endpoint not strictly above
    with pytest.raises(ValueError):
        check_infI(0.4, 0.1, 1.0, 2.0)


# ------------------------------------------------- instantaneous duality


def golden_sup(fn, lo, hi):
    res = optimize.minimize_scalar(
        lambda v: -fn(v), bounds=(lo, hi), method="bounded", options={"xatol": 1e-10}
    )
    return -float(res.fun)


def test_dual_pair_sup_identity():
    # L_a(t, y) = sup_theta { theta y - g(t, theta) } at random points
    rng = np.random.default_rng(42)
    for params in ALL:
        horizon = 1.0 if params.kind is Ensemble.AUX_S else params.horizon
        for _ in range(25):
            t = float(rng.uniform(0.05, 0.9) * horizon)
            if params.kind in (Ensemble.GRAM, Ensemble.JACOBI):
                y = float(rng.uniform(-3.0, -0.05))
            else:
                y = float(rng.uniform(-2.0, 1.5))
            if params.kind is Ensemble.JACOBI:
                floor = -(params.tau1 - t)
            elif params.kind is Ensemble.AUX_S:
                floor = -1.0
            else:
                floor = -(1.0 - t)
            sup = golden_sup(
                lambda th: th * y - limiting_cgf_density_g(params, t, th),
                floor + 1e-9,
                1e3,
            )
            assert abs(legendre_dual_La(params, t, y) - sup) < 1e-6


def test_dual_pair_double_transform():
    # g(t, theta) = sup_y { theta y - L_a(t, y) } closes the loop
    rng = np.random.default_rng(7)
    for params in ALL:
        horizon = 1.0 if params.kind is Ensemble.AUX_S else params.horizon
        for _ in range(25):
            t = float(rng.uniform(0.05, 0.9) * horizon)
            theta = float(rng.uniform(-0.3, 2.0))
            hi = -1e-9 if params.kind in (Ensemble.GRAM, Ensemble.JACOBI) else 5.0
            sup = golden_sup(
                lambda y: theta * y - legendre_dual_La(params, t, y), -30.0, hi
            )
            assert abs(float(limiting_cgf_density_g(params, t, theta)) - sup) < 1e-6


def test_recession_is_linear_tail():
    # the singular integrand is the y -> -inf linear asymptote of L_a
    for params, t in ((GRAM, 0.3), (LAG, 0.3), (JAC, 0.3), (AUX, 0.3)):
        s1 = recession_Ls(params, t, -1.0)
        assert recession_Ls(params, t, -2.0) == pytest.approx(2.0 * s1, rel=1e-12)
        far = legendre_dual_La(params, t, -40.0) - legendre_dual_La(params, t, -41.0)
        assert abs(far - (-s1)) < 1e-6
        assert recession_Ls(params, t, 0.1) == math.inf


# --------------------------------------------------------- limiting cgf


def test_cgf_zero_at_zero():
    for params in ALL:
        assert limiting_cgf_LT(params, 0.4, 0.0) == 0.0


def test_cgf_closed_matches_quadrature():
    thetas = (-0.3, -0.05, 0.0, 0.4, 1.5, 6.0)
    for params in ALL:
        T = 0.5 * (1.0 if params.kind is Ensemble.AUX_S else params.horizon)
        for theta in thetas:
            closed = limiting_cgf_LT(params, T, theta)
            quad = limiting_cgf_LT(params, T, theta, method="quadrature")
            assert abs(closed - quad) < 1e-9


def test_cgf_infinite_below_floor():
    assert limiting_cgf_LT(GRAM, 0.5, -0.51) == math.inf
    assert limiting_cgf_LT(LAG, 0.5, -0.6) == math.inf
    assert limiting_cgf_LT(JAC, 0.5, -0.55) == math.inf
    assert limiting_cgf_LT(AUX, 0.5, -1.0) == math.inf
    assert math.isfinite(limiting_cgf_LT(GRAM, 0.5, -0.5))


def test_cgf_derivative_matches_multiplier_map():
    # dL_T/dtheta equals the terminal value of the optimal path
    h = 1e-5
    for params in ALL:
        T = 0.45 * (1.0 if params.kind is Ensemble.AUX_S else params.horizon)
        for theta in (-0.2, 0.1, 0.8, 3.0):
            fd = (
                limiting_cgf_LT(params, T, theta + h)
                - limiting_cgf_LT(params, T, theta - h)
            ) / (2.0 * h)
            xi = marginal_rate(params, T, fd, cells=2).theta
            assert abs(xi - theta) < 1e-4


# ------------------------------------------------------- marginal rates


def test_lln_terminal_value_has_zero_rate():
    for params in ALL:
        T = 0.5 * (1.0 if params.kind is Ensemble.AUX_S else params.horizon)
        res = marginal_rate(params, T, lln_terminal(params, T), cells=2)
        assert res.branch is RateBranch.INTERIOR
        assert abs(res.theta) < 1e-10
        assert abs(res.rate) < 1e-12


def test_rate_nonnegative_with_unique_zero():
    for params in ALL:
        T = 0.5 * (1.0 if params.kind is Ensemble.AUX_S else params.horizon)
        center = lln_terminal(params, T)
        # even count: the grid straddles the zero without containing it
        if params.kind in (Ensemble.LAGUERRE, Ensemble.AUX_S):
            grid = np.linspace(center - 0.8, center + 0.8, 34)
        else:
            grid = np.linspace(center - 0.8, -1e-6, 34)
        grid = np.append(grid, center)
        rates = np.array([marginal_rate(params, T, x, cells=2).rate for x in grid])
        assert np.all(rates >= -1e-12)
        assert np.sum(rates < 1e-12) == 1


def test_rate_infinite_at_nonnegative_terminal():
    for params in (GRAM, JAC):
        for xi in (0.0, 0.3):
            res = marginal_rate(params, 0.5, xi)
            assert res.branch is RateBranch.INFINITE
            assert res.rate == math.inf
            assert res.theta is None and res.optimal_path is None
    # the other two kinds reach positive terminal values
    assert marginal_rate(LAG, 0.5, 0.3, cells=2).rate < math.inf
    assert marginal_rate(AUX, 0.5, 0.3, cells=2).rate < math.inf


def test_multiplier_increases_with_terminal_value():
    for params in ALL:
        T = 0.5 * (1.0 if params.kind is Ensemble.AUX_S else params.horizon)
        lo = junction_terminal(params, T) + 1e-6 if params.kind is not Ensemble.AUX_S else -1.5
        hi = -1e-3 if params.kind in (Ensemble.GRAM, Ensemble.JACOBI) else 1.5
        thetas = [
            marginal_rate(params, T, x, cells=2).theta
            for x in np.linspace(lo, hi, 20)
        ]
        assert np.all(np.diff(thetas) > 0.0)


def test_gram_junction_closed_form():
    for T, frozen in GRAM_JUNCTION_RATES.items():
        res = marginal_rate(GRAM, T, -T, cells=2)
        assert res.branch is RateBranch.INTERIOR
        assert abs(res.rate - frozen) < 1e-12
        telescoped = (
            2.0 * T * (1.0 - T)
            + float(primitive_F(1.0) - primitive_F(1.0 - T) - primitive_F(T))
            + T * T * math.log(T)
        )
        expanded = (
            0.5 * T * (1.0 - T)
            + 0.5 * T * T * math.log(T)
            - 0.5 * (1.0 - T) ** 2 * math.log(1.0 - T)
        )
        assert abs(res.rate - telescoped) < 1e-12
        assert abs(res.rate - expanded) < 1e-12


def test_branch_junction_continuity_and_slopes():
    eps = 1e-9
    for params in (GRAM, LAG, JAC):
        T = 0.5
        xi_end = junction_terminal(params, T)
        inner = marginal_rate(params, T, xi_end + eps, cells=2)
        outer = marginal_rate(params, T, xi_end - eps, cells=2)
        assert inner.branch is RateBranch.INTERIOR
        assert outer.branch is RateBranch.AFFINE_TAIL
        assert abs(inner.rate - outer.rate) < 1e-8
        expected = -(params.tau1 - T) if params.kind is Ensemble.JACOBI else -(1.0 - T)
        h = 1e-6
        slope_in = (
            marginal_rate(params, T, xi_end + 2 * h, cells=2).rate
            - marginal_rate(params, T, xi_end + h, cells=2).rate
        ) / h
        slope_out = (
            marginal_rate(params, T, xi_end - h, cells=2).rate
            - marginal_rate(params, T, xi_end - 2 * h, cells=2).rate
        ) / h
        assert abs(slope_in - expected) < 1e-5
        assert abs(slope_out - expected) < 1e-9  # tail is exactly affine


def test_aux_rate_closed_identity():
    for T, xi in ((0.5, 0.3), (0.5, -0.7), (1.0, 0.2), (0.25, -0.1)):
        res = marginal_rate(AUX, T, xi, cells=2)
        closed = T * (math.exp(xi / T) - xi / T - 1.0)
        assert abs(res.rate - closed) < 1e-12
        assert abs(res.theta - math.expm1(xi / T)) < 1e-12


def test_rate_layer_ignores_beta_and_n():
    a = EnsembleParams(Ensemble.GRAM, 1.0, 3)
    b = EnsembleParams(Ensemble.GRAM, 7.3, 250)
    for xi in (-0.1, -0.45, -0.8):
        assert marginal_rate(a, 0.5, xi, cells=2).rate == marginal_rate(
            b, 0.5, xi, cells=2
        ).rate


# ------------------------------------------------------- optimal paths


def test_lln_slope_path_has_zero_rate():
    for params in ALL:
        T = 0.5 * (1.0 if params.kind is Ensemble.AUX_S else params.horizon)
        grid = np.linspace(0.0, T, 513)
        mids = 0.5 * (grid[:-1] + grid[1:])
        slope = lln_slope(params)
        dens = np.array([slope(float(t)) for t in mids])
        assert abs(path_rate(params, PathMeasure(grid=grid, ac_density=dens))) < 1e-12


def test_positive_singular_mass_is_forbidden():
    grid = np.linspace(0.0, 0.5, 9)
    dens = np.full(8, -0.1)
    path = PathMeasure(grid=grid, ac_density=dens, atoms=((0.5, 0.1),))
    for params in ALL:
        assert path_rate(params, path) == math.inf
    # nonnegative slopes are unreachable for the bounded-factor kinds
    up = PathMeasure(grid=grid, ac_density=np.full(8, 0.05))
    assert path_rate(GRAM, up) == math.inf
    assert path_rate(JAC, up) == math.inf
    assert math.isfinite(path_rate(LAG, up))


def test_interior_optimal_path_attains_rate():
    cases = (
        (GRAM, 0.5, -0.30),
        (GRAM, 0.7, -0.05),
        (LAG, 0.5, -0.05),
        (LAG, 0.5, 0.40),
        (LAG, 0.3, -0.60),
        (JAC, 0.5, -0.40),
        (JAC, 0.8, -0.20),
        (AUX, 0.5, 0.30),
        (AUX, 0.5, -0.70),
    )
    for params, T, xi in cases:
        res = marginal_rate(params, T, xi)
        assert res.branch is RateBranch.INTERIOR
        assert abs(path_rate(params, res.optimal_path) - res.rate) < 1e-6
        assert abs(res.optimal_path.terminal_value() - xi) < 1e-6


def test_near_junction_path_still_converges():
    res = marginal_rate(GRAM, 0.5, -0.49)
    assert abs(path_rate(GRAM, res.optimal_path) - res.rate) < 2e-6


def test_affine_tail_path_attains_rate():
    # the endpoint slope is log-singular at T, so the midpoint rule on a
    # uniform grid converges slower here; tolerance reflects that
    cases = ((GRAM, 0.5, -0.62), (LAG, 0.5, -1.20), (JAC, 0.5, -1.50))
    for params, T, xi in cases:
        res = marginal_rate(params, T, xi)
        assert res.branch is RateBranch.AFFINE_TAIL
        atoms = res.optimal_path.atoms
        assert len(atoms) == 1
        loc, mass = atoms[0]
        assert loc == T and mass < 0.0
        assert abs(res.optimal_path.terminal_value() - xi) < 5e-4
        assert abs(path_rate(params, res.optimal_path) - res.rate) < 2e-4


def test_descent_oracle_matches_closed_rate():
    # projected gradient descent on the discretized functional, fixed
    # terminal value, no use of the multiplier machinery
    params, T, xi = LAG, 0.5, -0.05
    cells = 200
    grid = np.linspace(0.0, T, cells + 1)
    mids = 0.5 * (grid[:-1] + grid[1:])
    w = T / cells
    y = np.full(cells, xi / T)
    for _ in range(20000):
        grad = np.exp(y) - (1.0 - mids)
        grad -= grad.mean()  # keep the terminal value fixed
        y -= 0.8 * grad
    obj = float(np.dot(np.exp(y) - 1.0 - (1.0 - mids) * y, np.full(cells, w)))
    obj += float(np.sum(entropy_J(1.0 - mids)) * w)
    closed = marginal_rate(params, T, xi, cells=2).rate
    assert abs(obj - closed) < 1e-3


# ------------------------------------------------------- serialization


def test_rate_result_json_round_trip():
    res = marginal_rate(JAC, 0.5, -1.5, cells=16)
    blob = json.loads(res.to_json())
    assert blob["ensemble"] == "jacobi"
    assert blob["branch"] == "AffineTail"
    assert blob["T"] == 0.5 and blob["xi"] == -1.5
    assert len(blob["path"]["points"]) == 16
    assert blob["path"]["atoms"] == [[0.5, pytest.approx(-1.5 - junction_terminal(JAC, 0.5))]]
    inf_blob = json.loads(marginal_rate(GRAM, 0.5, 0.2).to_json())
    assert inf_blob["rate"] == "inf" and inf_blob["path"] is None
    slim = marginal_rate(AUX, 0.5, 0.1, cells=4).to_dict(include_path=False)
    assert slim["path"] is None and math.isfinite(slim["rate"])


# ------------------------------------------- decomposition vs spectral


def test_laguerre_spectral_route_matches():
    for T, xi in ((0.5, -0.10), (0.5, -0.50), (0.3, -0.05), (0.7, -0.90), (0.25, 0.15)):
        lhs, rhs, gap = check_infIW(T, xi)
        assert gap < 1e-8
    # zero rate at the limiting law on both routes
    lhs, rhs, gap = check_infIW(0.5, -float(entropy_J(0.5)))
    assert abs(lhs) < 1e-12 and abs(rhs) < 1e-12
    assert abs(spectral_rate_laguerre(SpectralDist.mp(0.5, 1.0), 0.5)) < 1e-13


def test_laguerre_junction_maps_to_degenerate_scale():
    # at the junction the optimizing law has ratio 1 and scale T
    T = 0.5
    res = marginal_rate(LAG, T, junction_terminal(LAG, T) + 1e-12, cells=2)
    assert abs((1.0 + res.theta) - T) < 1e-5


def test_jacobi_spectral_route_matches():
    for tup in ((0.4, -0.30, 1.0, 2.0), (0.3, -0.80, 1.0, 2.0), (0.5, -0.45, 1.0, 1.5)):
        T, xi, t1, t2 = tup
        lhs, rhs, gap = check_infI(T, xi, t1, t2)
        assert gap < 1e-3
    lhs, rhs, gap = check_infI(0.4, float(energy_E(1.0, 2.0, 0.4)), 1.0, 2.0)
    assert abs(lhs) < 1e-12 and abs(rhs) < 1e-3


def test_arc_parameterizations_agree():
    # the two published coordinate routes to the optimizing arc edges
    z1 = z2 = 0.5
    denom = 1.0 + z1 + z2
    s_lo = (1.0 + 2.0 * z1) / (2.0 * denom)
    s_hi = (1.0 + 2.0 * z1 + 2.0 * z2) / (2.0 * denom)
    lo, hi = a_pm(s_lo, s_hi)
    th1, th2 = z1 / denom, z2 / denom
    disc = (1.0 - (th1 + th2) ** 2) * (1.0 - (th1 - th2) ** 2)
    b_lo = th2 * th2 - th1 * th1 - math.sqrt(disc)
    b_hi = th2 * th2 - th1 * th1 + math.sqrt(disc)
    assert abs(lo - 0.5 * (1.0 + b_lo)) < 1e-12
    assert abs(hi - 0.5 * (1.0 + b_hi)) < 1e-12
    assert abs(lo - 0.0669872981077806) < 1e-12
    assert abs(hi - 0.9330127018922193) < 1e-12


def test_pair_log_window_closed_forms():
    assert _pair_log_window(0) == -1.5
    assert abs(_pair_log_window(1) - (2.0 * math.log(2.0) - 1.5)) < 1e-14
    assert abs(_pair_log_window(2) - (4.5 * math.log(3.0) - 4.0 * math.log(2.0) - 1.5)) < 1e-14


def test_arc_log_energy_quadrature_accuracy():
    for lo, hi in ((0.2, 0.7), (0.0669872981077806, 0.9330127018922193), (0.3, 0.97)):
        assert abs(_mckay_log_energy_quad(lo, hi) - log_energy_mckay(lo, hi)) < 1e-4


def test_combined_rate_is_infimal_convolution():
    T = 0.5
    center = -float(entropy_J(0.5))
    xi_values = np.linspace(center - 1.0, center + 0.9, 50)
    assert inf_convolution_check(T, xi_values) < 1e-4


def test_rate_midpoint_convexity():
    for params in (GRAM, LAG, JAC):
        T = 0.5
        lo = junction_terminal(params, T) - 0.6
        hi = -1e-3 if params.kind is not Ensemble.LAGUERRE else 0.8
        xs = np.linspace(lo, hi, 21)
        r = np.array([marginal_rate(params, T, x, cells=2).rate for x in xs])
        assert np.all(r[:-2] + r[2:] - 2.0 * r[1:-1] > -1e-12)


# ------------------------------------------------ finite-size agreement


def finite_size_gram_cgf(n, T, theta):
    """Normalized cgf of the finite Hadamard-ratio process at beta = 2.

    Exact via log-gamma: each factor is a Beta moment, summed over the
    first floor(n T) factors on the scale 1/n^2.
    """
    k = np.arange(1, int(n * T) + 1, dtype=float)
    a = n - k + 1.0
    b = k - 1.0
    s = n * theta
    terms = log_gamma(a + s) - log_gamma(a) + log_gamma(a + b) - log_gamma(a + b + s)
    return float(np.sum(terms)) / n**2


def test_finite_size_cgf_converges_to_limit():
    T, theta = 0.3, 0.5
    limit = limiting_cgf_LT(GRAM, T, theta)
    gaps = [abs(finite_size_gram_cgf(n, T, theta) - limit) for n in (500, 1000, 2000)]
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[2] < 1e-2


def test_monte_carlo_tail_probability_scale():
    # left-tail probability of the terminal value vs the rate, at a
    # sanity scale only: one-digit agreement of the log-probability
    n, T = 120, 0.5
    params = EnsembleParams(Ensemble.GRAM, 2.0, n)
    target = math.log(1e3) / n**2
    xi_lo, xi_hi = -T + 1e-6, -float(entropy_J(1.0 - T))
    for _ in range(80):
        mid = 0.5 * (xi_lo + xi_hi)
        if marginal_rate(GRAM, T, mid, cells=2).rate > target:
            xi_lo = mid
        else:
            xi_hi = mid
    xi_star = 0.5 * (xi_lo + xi_hi)
    rate_star = marginal_rate(GRAM, T, xi_star, cells=2).rate
    # seed pinned; re-pinning requires re-measuring the ratio bracket
    m = sample_cumlog_matrix(params, 200_000, 901)
    theta_T = m[:, int(n * T) - 1] / n
    p_hat = float(np.mean(theta_T <= xi_star))
    assert p_hat > 0.0
    est = -math.log(p_hat) / n**2
    assert 0.5 < est / rate_star < 2.0
