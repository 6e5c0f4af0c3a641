"""Desk-scale verification suite, shared by the CLI and the test gate.

Every criterion is a standalone function returning a CriterionResult
with the measured value, the target, the tolerance actually applied and
a detail map of sub-measurements.  ``run`` executes a filtered subset.

All randomized criteria pin their seeds.  Re-pinning a seed is allowed
but requires re-measuring the affected criterion and checking that the
measured value clears the tolerance with slack; the surrounding numbers
were bracketed under the seeds recorded here.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .entropy import Ensemble, EnsembleParams, energy_E, entropy_J
from .ldp import (
    RateBranch,
    _pair_log_window,
    check_infI,
    check_infIW,
    legendre_dual_La,
    limiting_cgf_LT,
    marginal_rate,
)
from .moments import (
    asymptotic_mean,
    asymptotic_var,
    constant_K1,
    constant_K2,
    exact_mean_logdet,
    exact_var_logdet,
)
from .sampler import (
    RngStream,
    couple_jacobi_from_laguerre,
    couple_laguerre_from_gram,
    sample_bidiagonal_laguerre,
    sample_coupled_laguerre_pair,
    sample_cumlog_matrix,
    sample_det_process,
)
from .specfun import digamma, log_gamma, polygamma
from .spectral import (
    SpectralDist,
    cc_moments,
    density,
    esd_vs_density,
    gram_tridiagonal,
    log_energy_mp,
    mckay_log_moment,
    mp_edges,
    mp_log_moment,
    tridiag_eigenvalues,
)

__all__ = ["CriterionResult", "CRITERIA", "run", "report_json"]


@dataclass(frozen=True)
class CriterionResult:
    """Outcome of one acceptance criterion."""

    name: str
    passed: bool
    measured: float
    target: str
    tolerance: float
    runtime_s: float
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return (
            f"{tag} {self.name}: measured {self.measured:.3g} vs {self.target} "
            f"(tolerance {self.tolerance:.3g}) [{self.runtime_s:.1f}s]"
        )

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "measured": self.measured,
            "target": self.target,
            "tolerance": self.tolerance,
            "runtime_s": self.runtime_s,
            "details": self.details,
        }


def _finish(name, passed, measured, target, tol, t0, details) -> CriterionResult:
    return CriterionResult(
        name=name,
        passed=bool(passed),
        measured=float(measured),
        target=target,
        tolerance=float(tol),
        runtime_s=time.time() - t0,
        details={k: float(v) for k, v in details.items()},
    )


# ------------------------------------------------------------ criterion 1


def specfun_certification(tol: float = 1e-10) -> CriterionResult:
    """Certified digamma/polygamma envelopes at 10^4 random arguments
    plus the log-gamma recurrence residual."""
    t0 = time.time()
    rng = np.random.default_rng(2024)
    x = rng.uniform(1e-3, 100.0, size=10_000)
    lx = np.log(x)
    psi = digamma(x)
    v1 = x * (lx - psi)
    excess = max(float(np.max(v1 - 1.0)), float(np.max(-v1)))
    v2 = lx - psi - 0.5 / x
    excess = max(excess, float(np.max(v2 - 1.0 / (12.0 * x**2))), float(np.max(-v2)))
    for q, lead, bound in ((1, 1.0, 1.0), (2, 1.0, 2.0), (3, 2.0, 6.0)):
        sign = 1.0 if q % 2 == 1 else -1.0
        resid = np.abs(polygamma(q, x) - sign * lead * x**-q)
        excess = max(excess, float(np.max(resid - bound * x ** -(q + 1))))
    recurrence = float(np.max(np.abs(log_gamma(x + 1.0) - log_gamma(x) - lx)))
    passed = excess <= 1e-12 and recurrence < tol
    return _finish(
        "specfun-certification",
        passed,
        recurrence,
        "envelope excess <= 0 and recurrence residual < tol",
        tol,
        t0,
        {"envelope_excess": excess, "recurrence_residual": recurrence},
    )


# ------------------------------------------------------------ criterion 2


def _lln_curve(params: EnsembleParams, ts: np.ndarray) -> np.ndarray:
    if params.kind is Ensemble.JACOBI:
        t1, t2 = params.tau1, params.tau2
        return np.asarray(
            entropy_J(t1) - entropy_J(t1 - ts) - entropy_J(t1 + t2) + entropy_J(t1 + t2 - ts),
            dtype=float,
        )
    if params.kind is Ensemble.AUX_S:
        return np.zeros_like(ts)
    return -np.asarray(entropy_J(1.0 - ts), dtype=float)


def lln(tol: float = 6e-3, mc_tol: float = 0.05) -> CriterionResult:
    """Exact finite-size means against the limit curve at n = 2000 plus
    a 200-path Monte Carlo sweep."""
    t0 = time.time()
    n = 2000
    worst_exact = 0.0
    worst_mc = 0.0
    details: dict = {}
    seed = 3001
    for kind in (Ensemble.GRAM, Ensemble.LAGUERRE, Ensemble.JACOBI):
        for beta in (1.0, 2.0, 0.7):
            params = EnsembleParams(kind, beta, n, 1.0, 2.0)
            for t in (0.25, 0.5, 0.75):
                p = math.floor(n * t)
                gap = abs(
                    exact_mean_logdet(params, p) / n
                    - float(_lln_curve(params, np.array([t]))[0])
                )
                worst_exact = max(worst_exact, gap)
            m = sample_cumlog_matrix(params, 200, seed)
            seed += 1
            ts = np.arange(1, params.index_count + 1) / n
            sup = float(np.max(np.abs(m.mean(axis=0) / n - _lln_curve(params, ts))))
            worst_mc = max(worst_mc, sup)
            details[f"mc_sup_{kind.value}_beta{beta:g}"] = sup
    details["worst_exact_gap"] = worst_exact
    details["worst_mc_sup"] = worst_mc
    passed = worst_exact < tol and worst_mc < mc_tol
    return _finish(
        "lln",
        passed,
        worst_exact,
        f"exact gap < {tol:g} and MC sup < {mc_tol:g}",
        tol,
        t0,
        details,
    )


# ------------------------------------------------------------ criterion 3


def endpoint_constants(tol: float = 2e-3) -> CriterionResult:
    """Finite-size digamma/trigamma endpoint sums against the two
    limiting constants from independent quadrature."""
    t0 = time.time()
    n = 4000
    worst = 0.0
    details: dict = {}
    for beta in (1.0, 2.0):
        params = EnsembleParams(Ensemble.GRAM, beta, n)
        k1_fin = (
            exact_mean_logdet(params, n)
            + n
            + (1.0 / beta - 0.5) * math.log(n)
        )
        k2_fin = exact_var_logdet(params, n) - (2.0 / beta) * math.log(n)
        g1 = abs(k1_fin - constant_K1(beta))
        g2 = abs(k2_fin - constant_K2(beta))
        details[f"K1_gap_beta{beta:g}"] = g1
        details[f"K2_gap_beta{beta:g}"] = g2
        worst = max(worst, g1, g2)
    return _finish(
        "endpoint-constants",
        worst < tol,
        worst,
        "finite-size sums vs quadrature constants",
        tol,
        t0,
        details,
    )


# ------------------------------------------------------------ criterion 4


def clt(var_window: float = 0.1, end_window: float = 0.15) -> CriterionResult:
    """Mean and variance of the centered process at t = 1/2 for the
    three ensembles, plus the log-size endpoint variance window.

    The exact finite-size ratios at n = 1000 are 0.9987/1.0/1.0 at the
    midpoint and 1.0835 at the endpoint (the endpoint normalization
    omits the order-one constant, which is why its window is wider), so
    the test is fair but noisy: one-sigma of a 1000-path variance ratio
    is about 0.045.  Seeds are pinned to a block measured to pass with
    at least one sigma to spare; re-pinning requires re-measuring.
    """
    t0 = time.time()
    beta, n, n_paths = 2.0, 1000, 1000
    details: dict = {}
    passed = True
    worst_ratio_err = 0.0
    seed = 4301
    for kind in (Ensemble.GRAM, Ensemble.LAGUERRE, Ensemble.JACOBI):
        params = EnsembleParams(kind, beta, n, 1.0, 1.0)
        m = sample_cumlog_matrix(params, n_paths, seed)
        seed += 1
        p = math.floor(n * 0.5)
        vals = m[:, p - 1]
        mean_gap = abs(float(vals.mean()) - asymptotic_mean(params, 0.5))
        se = float(vals.std(ddof=1)) / math.sqrt(n_paths)
        ratio = float(vals.var(ddof=1)) / asymptotic_var(params, 0.5)
        details[f"mean_gap_over_se_{kind.value}"] = mean_gap / se
        details[f"var_ratio_{kind.value}"] = ratio
        passed = passed and mean_gap < 3.0 * se and (1 - var_window) < ratio < (1 + var_window)
        worst_ratio_err = max(worst_ratio_err, abs(ratio - 1.0))
    # endpoint window: at beta = 2 the centering is exactly -n
    params = EnsembleParams(Ensemble.GRAM, beta, n)
    m = sample_cumlog_matrix(params, n_paths, 4401)
    end_ratio = float((m[:, -1] + n).var(ddof=1)) / ((2.0 / beta) * math.log(n))
    details["endpoint_var_ratio"] = end_ratio
    passed = passed and (1 - end_window) < end_ratio < (1 + end_window)
    worst_ratio_err = max(worst_ratio_err, abs(end_ratio - 1.0))
    return _finish(
        "clt",
        passed,
        worst_ratio_err,
        "mean within 3 SE, variance ratios inside their windows",
        var_window,
        t0,
        details,
    )


# ------------------------------------------------------------ criterion 5


def _dual_gradient(params: EnsembleParams, t: np.ndarray, y: np.ndarray) -> np.ndarray:
    kind = params.kind
    ey = np.exp(y)
    if kind is Ensemble.GRAM:
        return -(1.0 - t) + t * ey / (1.0 - ey)
    if kind is Ensemble.LAGUERRE:
        return ey - (1.0 - t)
    if kind is Ensemble.JACOBI:
        return -(params.tau1 - t) + params.tau2 * ey / (1.0 - ey)
    return ey - 1.0


def _dual_curvature(params: EnsembleParams, t: np.ndarray, y: np.ndarray) -> np.ndarray:
    kind = params.kind
    ey = np.exp(y)
    if kind is Ensemble.GRAM:
        return t * ey / (1.0 - ey) ** 2
    if kind is Ensemble.JACOBI:
        return params.tau2 * ey / (1.0 - ey) ** 2
    return ey


def descent_rate(
    params: EnsembleParams, T: float, xi: float, cells: int = 200, iters: int = 20000
) -> float:
    """Projected-gradient oracle for the marginal rate.

    Minimizes the discretized path functional over constant-terminal
    slopes directly, without the multiplier machinery it is used to
    check.  The step is rescaled from the current curvature each
    iteration; slopes of the bounded-factor kinds are kept strictly
    negative by halving the step when an update would cross zero.
    """
    bounded = params.kind in (Ensemble.GRAM, Ensemble.JACOBI)
    grid = np.linspace(0.0, T, cells + 1)
    mids = 0.5 * (grid[:-1] + grid[1:])
    w = T / cells
    y = np.full(cells, xi / T)
    for _ in range(iters):
        grad = _dual_gradient(params, mids, y)
        grad -= grad.mean()
        step = 0.9 / float(np.max(_dual_curvature(params, mids, y)))
        if bounded:
            trial = y - step * grad
            for _ in range(60):
                if np.max(trial) <= -1e-9:
                    break
                step *= 0.5
                trial = y - step * grad
            y = trial
        else:
            y = y - step * grad
    return float(
        sum(legendre_dual_La(params, float(t), float(v)) for t, v in zip(mids, y)) * w
    )


def ldp_marginals(tol: float = 1e-3, junction_tol: float = 1e-8) -> CriterionResult:
    """Closed marginal rates against the independent descent oracle,
    junction continuity, zero at the limit value, infinite branch."""
    t0 = time.time()
    gram = EnsembleParams(Ensemble.GRAM, 2.0, 2)
    lag = EnsembleParams(Ensemble.LAGUERRE, 2.0, 2)
    jac = EnsembleParams(Ensemble.JACOBI, 2.0, 2, 1.0, 2.0)
    cases = {
        gram: (-0.45, -0.35, -0.25, -0.15, -0.08),
        lag: (-0.6, -0.3, -0.05, 0.2, 0.5),
        jac: (-1.1, -0.9, -0.66, -0.4, -0.2),
    }
    T = 0.5
    worst_oracle = 0.0
    worst_junction = 0.0
    worst_zero = 0.0
    details: dict = {}
    passed = True
    for params, xis in cases.items():
        kind_worst = 0.0
        for xi in xis:
            res = marginal_rate(params, T, xi, cells=2)
            gap = abs(descent_rate(params, T, xi) - res.rate)
            kind_worst = max(kind_worst, gap)
        worst_oracle = max(worst_oracle, kind_worst)
        if params.kind is Ensemble.GRAM:
            xi_end = -T
            lln_xi = -float(entropy_J(1.0 - T))
        elif params.kind is Ensemble.LAGUERRE:
            xi_end = float(entropy_J(T)) - 1.0
            lln_xi = -float(entropy_J(1.0 - T))
        else:
            xi_end = float(energy_E(T, params.tau2, T))
            lln_xi = float(energy_E(params.tau1, params.tau2, T))
        eps = 1e-9
        jump = abs(
            marginal_rate(params, T, xi_end + eps, cells=2).rate
            - marginal_rate(params, T, xi_end - eps, cells=2).rate
        )
        worst_junction = max(worst_junction, jump)
        worst_zero = max(worst_zero, abs(marginal_rate(params, T, lln_xi, cells=2).rate))
        details[f"oracle_gap_{params.kind.value}"] = kind_worst
    for params in (gram, jac):
        res = marginal_rate(params, T, 0.0)
        passed = passed and res.branch is RateBranch.INFINITE and res.rate == math.inf
    details["worst_junction_jump"] = worst_junction
    details["worst_limit_zero"] = worst_zero
    passed = passed and worst_oracle < tol and worst_junction < junction_tol
    passed = passed and worst_zero < junction_tol
    return _finish(
        "ldp-marginals",
        passed,
        worst_oracle,
        "descent oracle gap < tol; junction and zero < 1e-8",
        tol,
        t0,
        details,
    )


# ------------------------------------------------------------ criterion 6


def _finite_size_cgf(params: EnsembleParams, T: float, theta: float) -> float:
    # log Beta-moment telescopes of the first floor(nT) factors, exact
    # through log-gamma, at beta = 2 so the half-beta prefactors drop
    n = params.n
    j = np.arange(1, math.floor(n * T) + 1, dtype=float)
    if params.kind is Ensemble.GRAM:
        a = n - j + 1.0
        b = j - 1.0
    elif params.kind is Ensemble.JACOBI:
        a = params.n1 - j + 1.0
        b = float(params.n2) * np.ones_like(j)
    else:
        raise ValueError("finite-size cgf: Gram or Jacobi only")
    s = n * theta
    terms = log_gamma(a + s) - log_gamma(a) + log_gamma(a + b) - log_gamma(a + b + s)
    return float(np.sum(terms)) / n**2


def finite_size_cgf(tol: float = 1e-2) -> CriterionResult:
    """Finite-size normalized cgf converging monotonically to the
    limiting one over n in {500, 1000, 2000}."""
    t0 = time.time()
    T = 0.3
    worst = 0.0
    monotone = True
    details: dict = {}
    for kind, tau in ((Ensemble.GRAM, (1.0, 1.0)), (Ensemble.JACOBI, (1.0, 2.0))):
        for theta in (-0.2, 0.5, 1.5):
            limit = limiting_cgf_LT(
                EnsembleParams(kind, 2.0, 2, tau[0], tau[1]), T, theta
            )
            gaps = []
            for n in (500, 1000, 2000):
                params = EnsembleParams(kind, 2.0, n, tau[0], tau[1])
                gaps.append(abs(_finite_size_cgf(params, T, theta) - limit))
            monotone = monotone and gaps[0] > gaps[1] > gaps[2]
            worst = max(worst, gaps[-1])
            details[f"gap_n2000_{kind.value}_theta{theta:g}"] = gaps[-1]
    return _finish(
        "ldp-finite-size-cgf",
        monotone and worst < tol,
        worst,
        "gaps decreasing in n and final < tol",
        tol,
        t0,
        details,
    )


# ------------------------------------------------------------ criterion 7


def dual_route(tol_ratio: float = 1e-8, tol_arc: float = 1e-3) -> CriterionResult:
    """Decomposition rates against the spectral variational functional
    on both the scaled-ratio-law and arc-law sides."""
    t0 = time.time()
    worst_ratio = 0.0
    for T, xi in ((0.5, -0.1), (0.5, -0.5), (0.3, -0.05), (0.7, -0.9), (0.25, 0.15)):
        worst_ratio = max(worst_ratio, check_infIW(T, xi)[2])
    worst_arc = 0.0
    for T, xi, t1, t2 in ((0.4, -0.3, 1.0, 2.0), (0.3, -0.8, 1.0, 2.0)):
        worst_arc = max(worst_arc, check_infI(T, xi, t1, t2)[2])
    passed = worst_ratio < tol_ratio and worst_arc < tol_arc
    return _finish(
        "ldp-dual-route",
        passed,
        worst_ratio,
        f"ratio-law side < {tol_ratio:g}, arc side < {tol_arc:g}",
        tol_ratio,
        t0,
        {"worst_ratio_law_gap": worst_ratio, "worst_arc_law_gap": worst_arc},
    )


# ------------------------------------------------------------ criterion 8

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(128)


def _arc_integral(lo: float, hi: float, fn) -> float:
    # integral of fn over [lo, hi] under the sine substitution, which
    # absorbs square-root edge behavior of spectral densities
    mid, half = 0.5 * (hi + lo), 0.5 * (hi - lo)
    phi = 0.5 * math.pi * _GL_NODES
    x = mid + half * np.sin(phi)
    vals = fn(x) * half * np.cos(phi)
    return float(0.5 * math.pi * np.dot(_GL_WEIGHTS, vals))


def _mp_log_energy_quad(c: float, n_cells: int = 768, band: int = 8) -> float:
    """Two-dimensional quadrature of the ratio-law logarithmic energy,
    with banded diagonal cells integrated in linearized closed form."""
    lo, hi = mp_edges(c)
    mid, half = 0.5 * (hi + lo), 0.5 * (hi - lo)
    step = math.pi / n_cells
    phi = -0.5 * math.pi + step * (np.arange(n_cells) + 0.5)
    x = mid + half * np.sin(phi)
    w = (half * np.cos(phi)) ** 2 / (2.0 * math.pi * c * x) * step
    w = w / w.sum()
    diff = np.abs(x[:, None] - x[None, :])
    with np.errstate(divide="ignore"):
        kernel = np.log(np.where(diff > 0.0, diff, 1.0))
    total = float(w @ kernel @ w)
    for k in range(0, band + 1):
        idx = np.arange(n_cells - k)
        wi, wj = w[idx], w[idx + k]
        pair_phi = 0.5 * (phi[idx] + phi[idx + k])
        local = np.log(step * half * np.cos(pair_phi)) + _pair_log_window(k)
        if k == 0:
            total += float(np.sum(wi * wj * local))
        else:
            crude = np.log(np.abs(x[idx] - x[idx + k]))
            total += 2.0 * float(np.sum(wi * wj * (local - crude)))
    return total


def spectral_identities(tol_energy: float = 1e-4) -> CriterionResult:
    """Closed spectral formulas against direct quadrature: log moments,
    arc normalization, mixture moments with atoms, logarithmic energy."""
    t0 = time.time()
    details: dict = {}
    # ratio-law log moment, closed vs quadrature, scaled by the ratio
    worst_mp_log = 0.0
    for c in (0.3, 0.5, 0.8):
        lo, hi = mp_edges(c)
        quad = _arc_integral(
            lo, hi, lambda x: np.log(x) * np.sqrt((hi - x) * (x - lo)) / (2 * math.pi * c * x)
        )
        worst_mp_log = max(worst_mp_log, abs(c * quad - float(mp_log_moment(c))))
    details["mp_log_moment_gap"] = worst_mp_log
    # arc-law normalization constant
    worst_norm = 0.0
    for lo, hi in ((0.2, 0.7), (0.06698729810778, 0.93301270189222)):
        dist = SpectralDist.mckay(lo, hi)
        mass = _arc_integral(lo, hi, lambda x: np.atleast_1d(density(dist, x)))
        worst_norm = max(worst_norm, abs(mass - 1.0))
    details["mckay_normalization_gap"] = worst_norm
    # arc-law log moment in both mixture regimes (atom at one present
    # or absent, i.e. second ratio below or above 1)
    worst_mckay_log = 0.0
    for u_prime, v_prime in ((2.0, 0.7), (2.0, 1.5)):
        d = SpectralDist.cc(u_prime, v_prime)
        lo, hi = d.a_minus, d.a_plus
        arc = SpectralDist.mckay(lo, hi)
        quad = _arc_integral(lo, hi, lambda x: np.log(x) * np.atleast_1d(density(arc, x)))
        worst_mckay_log = max(worst_mckay_log, abs(quad - mckay_log_moment(lo, hi)))
    details["mckay_log_moment_gap"] = worst_mckay_log
    # mixture mean/variance with atoms
    worst_cc = 0.0
    for u_prime, v_prime in ((2.0, 0.7), (0.8, 1.6), (2.0, 1.5), (0.7, 0.8)):
        mom = cc_moments(u_prime, v_prime)
        d = SpectralDist.cc(u_prime, v_prime)
        lo, hi = d.a_minus, d.a_plus
        m1 = _arc_integral(lo, hi, lambda x: x * np.atleast_1d(density(d, x)))
        m2 = _arc_integral(lo, hi, lambda x: x * x * np.atleast_1d(density(d, x)))
        m1 += d.atom_at_one
        m2 += d.atom_at_one
        worst_cc = max(worst_cc, abs(m1 - mom.mean), abs(m2 - m1 * m1 - mom.variance))
    details["cc_moment_gap"] = worst_cc
    # ratio-law logarithmic energy, closed vs two-dimensional quadrature
    energy_gap = abs(_mp_log_energy_quad(0.5) - log_energy_mp(0.5))
    details["mp_log_energy_gap"] = energy_gap
    passed = (
        worst_mp_log < 1e-6
        and worst_norm < 1e-8
        and worst_mckay_log < 1e-6
        and worst_cc < 1e-7
        and energy_gap < tol_energy
    )
    return _finish(
        "spectral-identities",
        passed,
        energy_gap,
        "log moments 1e-6/1e-8/1e-6, mixture moments 1e-7, energy < tol",
        tol_energy,
        t0,
        details,
    )


# ------------------------------------------------------------ criterion 9


def sampler_couplings(level: float = 0.05) -> CriterionResult:
    """Two-sample KS agreement of the three coupling identities at
    10^4 paths each, seeds pinned."""
    t0 = time.time()
    n_paths = 10_000
    details: dict = {}
    gram = EnsembleParams(Ensemble.GRAM, 1.5, 60)
    aux = EnsembleParams(Ensemble.AUX_S, 1.5, 60)
    lag = EnsembleParams(Ensemble.LAGUERRE, 1.5, 60)
    jac = EnsembleParams(Ensemble.JACOBI, 1.3, 120, 1.0 / 3.0, 2.0 / 3.0)
    p = gram.n // 2
    coupled = np.empty(n_paths)
    direct = np.empty(n_paths)
    for i in range(n_paths):
        g = sample_det_process(gram, RngStream(141, 2 * i))
        s = sample_det_process(aux, RngStream(141, 2 * i + 1))
        coupled[i] = couple_laguerre_from_gram(g, s).cumlog[p - 1]
        direct[i] = sample_det_process(lag, RngStream(142, i)).cumlog[p - 1]
    details["laguerre_from_gram_pvalue"] = stats.ks_2samp(coupled, direct).pvalue
    r = jac.n1 // 2
    for i in range(n_paths):
        short, long = sample_coupled_laguerre_pair(jac, RngStream(261, i))
        coupled[i] = couple_jacobi_from_laguerre(short, jac, long).cumlog[r - 1]
        direct[i] = sample_det_process(jac, RngStream(262, i)).cumlog[r - 1]
    details["jacobi_from_laguerre_pvalue"] = stats.ks_2samp(coupled, direct).pvalue
    n, rr, beta = 50, 30, 1.3
    lag2 = EnsembleParams(Ensemble.LAGUERRE, beta, n)
    for i in range(n_paths):
        diag, _ = sample_bidiagonal_laguerre(n, rr, beta, RngStream(81, i))
        coupled[i] = 2.0 * float(np.log(diag).sum())
        direct[i] = sample_det_process(lag2, RngStream(82, i)).raw_cumlog[rr - 1]
    details["bidiagonal_determinant_pvalue"] = stats.ks_2samp(coupled, direct).pvalue
    worst = min(details.values())
    return _finish(
        "sampler-couplings",
        worst > level,
        worst,
        "all three KS p-values above the level",
        level,
        t0,
        details,
    )


# ----------------------------------------------------------- criterion 10


def spectral_esd(tol: float = 0.05) -> CriterionResult:
    """Bidiagonal-model eigenvalues against the limiting ratio law."""
    t0 = time.time()
    n, r, beta = 600, 300, 2.0
    diag, sub = sample_bidiagonal_laguerre(n, r, beta, RngStream(21))
    tdiag, toff = gram_tridiagonal(diag, sub)
    evs = tridiag_eigenvalues(tdiag, toff) / (beta * n)
    ks = esd_vs_density(evs, SpectralDist.mp(r / n, 1.0))
    return _finish(
        "spectral-esd",
        ks < tol,
        ks,
        "KS distance of the normalized spectrum vs the ratio law",
        tol,
        t0,
        {"ks": ks, "mean_gap": abs(float(evs.mean()) - 1.0)},
    )


CRITERIA = {
    "specfun-certification": specfun_certification,
    "lln": lln,
    "endpoint-constants": endpoint_constants,
    "clt": clt,
    "ldp-marginals": ldp_marginals,
    "ldp-finite-size-cgf": finite_size_cgf,
    "ldp-dual-route": dual_route,
    "spectral-identities": spectral_identities,
    "sampler-couplings": sampler_couplings,
    "spectral-esd": spectral_esd,
}


def run(only=None, tol_overrides=None) -> list[CriterionResult]:
    """Execute the criteria whose name contains any ``only`` token.

    ``tol_overrides`` maps a criterion name to a replacement for its
    leading tolerance argument.
    """
    tokens = None
    if only:
        tokens = [t.strip() for t in only if t.strip()]
    overrides = tol_overrides or {}
    results = []
    for name, fn in CRITERIA.items():
        if tokens is not None and not any(tok in name for tok in tokens):
            continue
        if name in overrides:
            results.append(fn(overrides[name]))
        else:
            results.append(fn())
    return results


def report_json(results) -> str:
    payload = {
        "schema": "betadet-verify-v1",
        "passed": all(r.passed for r in results),
        "criteria": [r.to_json() for r in results],
    }
    return json.dumps(payload, indent=2)


