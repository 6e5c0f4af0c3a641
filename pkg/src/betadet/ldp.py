"""Large-deviation rate functions for the log-determinant processes.

Everything is stated in the scale 2/(beta n^2), which makes the layer
beta-free: the beta and n fields of an EnsembleParams are ignored here.

Two independent routes are kept side by side.  The decomposition route
integrates per-time Legendre duals along paths, evaluates the limiting
cumulant generating function in closed form, and solves for the
Lagrange multiplier of the terminal constraint.  The spectral route
evaluates the variational free-energy functional at the candidate
optimizing law by quadrature (two-dimensional for the logarithmic
energy of the arc law, which has no closed form here on purpose).
check_infIW and check_infI compare the two routes and return the gap
instead of asserting, so callers pick their own tolerance.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import integrate, optimize

from .entropy import (
    Ensemble,
    EnsembleParams,
    bernoulli_entropy_H,
    energy_E,
    energy_E1,
    entropy_J,
    free_energy_2B,
    free_energy_B,
    limiting_cgf_density_g,
    primitive_F,
)
from .spectral import SpectralDist, SpectralKind, a_pm, log_energy_mp, mp_log_moment

__all__ = [
    "PathMeasure",
    "RateBranch",
    "RateResult",
    "legendre_dual_La",
    "recession_Ls",
    "path_rate",
    "limiting_cgf_LT",
    "marginal_rate",
    "spectral_rate_laguerre",
    "check_infIW",
    "spectral_rate_jacobi",
    "check_infI",
    "inf_convolution_check",
]

_BISECT_WIDTH = 1e-12
_NEWTON_POLISH = 3
_DEFAULT_CELLS = 2048


@dataclass(frozen=True, eq=False)
class PathMeasure:
    """Lebesgue decomposition of a path derivative on a time grid.

    ``grid`` holds m+1 increasing times; ``ac_density`` holds the m
    cell values of the absolutely continuous part (interpreted at cell
    midpoints by the quadratures); ``atoms`` holds (location, mass)
    pairs of the singular part.  Masses of any sign are storable; sign
    constraints are enforced by path_rate, not here.
    """

    grid: np.ndarray
    ac_density: np.ndarray
    atoms: tuple[tuple[float, float], ...] = ()

    def __post_init__(self) -> None:
        grid = np.asarray(self.grid, dtype=float)
        dens = np.asarray(self.ac_density, dtype=float)
        if grid.ndim != 1 or grid.size < 2:
            raise ValueError("PathMeasure: grid needs at least two times")
        if np.any(np.diff(grid) <= 0.0):
            raise ValueError("PathMeasure: grid must be strictly increasing")
        if grid[0] < 0.0:
            raise ValueError("PathMeasure: grid must start at time >= 0")
        if dens.shape != (grid.size - 1,):
            raise ValueError("PathMeasure: ac_density must have one value per cell")
        atoms = tuple((float(loc), float(mass)) for loc, mass in self.atoms)
        for loc, _ in atoms:
            if not grid[0] <= loc <= grid[-1]:
                raise ValueError("PathMeasure: atom outside the time grid")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "ac_density", dens)
        object.__setattr__(self, "atoms", atoms)

    @property
    def horizon(self) -> float:
        return float(self.grid[-1])

    def terminal_value(self) -> float:
        """v(T): integral of the density plus the atom masses."""
        total = float(np.dot(self.ac_density, np.diff(self.grid)))
        return total + sum(mass for _, mass in self.atoms)


class RateBranch(Enum):
    INTERIOR = "Interior"
    AFFINE_TAIL = "AffineTail"
    INFINITE = "Infinite"


@dataclass(frozen=True, eq=False)
class RateResult:
    """Marginal rate evaluation at one terminal value.

    ``theta`` is the multiplier: the interior solution on the Interior
    branch, the bracket endpoint on the AffineTail branch, None when
    the rate is infinite.  ``optimal_path`` carries cell-midpoint
    slopes; the AffineTail path ends with a single atom at T whose
    mass closes the terminal-value gap.
    """

    ensemble: Ensemble
    T: float
    xi: float
    theta: float | None
    rate: float
    branch: RateBranch
    optimal_path: PathMeasure | None

    def to_dict(self, include_path: bool = True) -> dict:
        out = {
            "ensemble": self.ensemble.value,
            "T": self.T,
            "xi": self.xi,
            "theta": self.theta,
            "rate": self.rate if math.isfinite(self.rate) else "inf",
            "branch": self.branch.value,
            "path": None,
        }
        if include_path and self.optimal_path is not None:
            mids = 0.5 * (self.optimal_path.grid[:-1] + self.optimal_path.grid[1:])
            out["path"] = {
                "points": [
                    [float(t), float(y)]
                    for t, y in zip(mids, self.optimal_path.ac_density)
                ],
                "atoms": [[loc, mass] for loc, mass in self.optimal_path.atoms],
            }
        return out

    def to_json(self, include_path: bool = True) -> str:
        return json.dumps(self.to_dict(include_path=include_path))


def _check_time(params: EnsembleParams, t: float) -> None:
    if params.kind is Ensemble.AUX_S:
        if not 0.0 <= t <= 1.0:
            raise ValueError("time outside [0,1]")
        return
    horizon = params.horizon
    if not 0.0 <= t < horizon:
        raise ValueError("time outside the ensemble interval")


def legendre_dual_La(params: EnsembleParams, t: float, y: float) -> float:
    """Instantaneous rate of the absolutely continuous part at slope y."""
    _check_time(params, t)
    kind = params.kind
    if kind is Ensemble.AUX_S:
        return math.exp(y) - y - 1.0
    if kind is Ensemble.LAGUERRE:
        return (math.exp(y) - 1.0) - (1.0 - t) * y + float(entropy_J(1.0 - t))
    if kind is Ensemble.GRAM:
        if y >= 0.0:
            return math.inf
        return bernoulli_entropy_H(1.0 - t, math.exp(y))
    tau1, tau2 = params.tau1, params.tau2
    if y >= 0.0:
        return math.inf
    span = tau1 + tau2 - t
    return span * bernoulli_entropy_H((tau1 - t) / span, math.exp(y))


def recession_Ls(params: EnsembleParams, t: float, y: float) -> float:
    """Instantaneous rate of the singular part; linear on y <= 0."""
    _check_time(params, t)
    if y > 0.0:
        return math.inf
    if params.kind is Ensemble.AUX_S:
        return -y
    if params.kind is Ensemble.JACOBI:
        return -(params.tau1 - t) * y
    return -(1.0 - t) * y


def path_rate(params: EnsembleParams, path: PathMeasure) -> float:
    """Rate of a path: midpoint quadrature of the ac part plus atoms.

    Returns +inf as soon as one cell slope or atom mass violates a
    sign constraint; never raises for that.
    """
    mids = 0.5 * (path.grid[:-1] + path.grid[1:])
    widths = np.diff(path.grid)
    total = 0.0
    for t, y, w in zip(mids, path.ac_density, widths):
        val = legendre_dual_La(params, float(t), float(y))
        if not math.isfinite(val):
            return math.inf
        total += val * float(w)
    for loc, mass in path.atoms:
        val = recession_Ls(params, loc, mass)
        if not math.isfinite(val):
            return math.inf
        total += val
    return total


def _F_window(a: float, T: float) -> float:
    # F(a) - F(a - T), the J-antiderivative over a window of width T
    return float(primitive_F(a) - primitive_F(a - T))


def _theta_floor(params: EnsembleParams, T: float) -> float:
    if params.kind is Ensemble.AUX_S:
        return -1.0
    if params.kind is Ensemble.JACOBI:
        return T - params.tau1
    return -(1.0 - T)


def _check_horizon(params: EnsembleParams, T: float) -> None:
    if params.kind is Ensemble.AUX_S:
        if not 0.0 < T <= 1.0:
            raise ValueError("need 0 < T <= 1")
        return
    # the critical horizon itself is rejected: only one-sided results
    # exist there and the rate below the limit value is unknown
    if not 0.0 < T < params.horizon:
        raise ValueError("need 0 < T < %g" % params.horizon)


def limiting_cgf_LT(
    params: EnsembleParams, T: float, theta: float, *, method: str = "closed"
) -> float:
    """Limiting normalized cgf of the terminal value, L_T(theta).

    The closed form telescopes the antiderivative F of J; the
    quadrature method integrates the cumulant density directly and is
    kept as a derivation check (tests pin agreement to 1e-9).
    """
    _check_horizon(params, T)
    if method not in ("closed", "quadrature"):
        raise ValueError("method must be 'closed' or 'quadrature'")
    kind = params.kind
    floor = _theta_floor(params, T)
    if theta < floor or (kind is Ensemble.AUX_S and theta == floor):
        return math.inf
    if method == "quadrature":
        val, _ = integrate.quad(
            lambda t: limiting_cgf_density_g(params, t, theta), 0.0, T, limit=200
        )
        return float(val)
    if kind is Ensemble.AUX_S:
        return T * float(entropy_J(1.0 + theta))
    if kind is Ensemble.LAGUERRE:
        return _F_window(1.0 + theta, T) - _F_window(1.0, T)
    if kind is Ensemble.GRAM:
        base = _F_window(1.0 + theta, T) - _F_window(1.0, T)
        return base - T * float(entropy_J(1.0 + theta))
    tau1, tau2 = params.tau1, params.tau2
    return (
        _F_window(tau1 + theta, T)
        - _F_window(tau1, T)
        - _F_window(tau1 + tau2 + theta, T)
        + _F_window(tau1 + tau2, T)
    )


def _terminal_map(params: EnsembleParams, T: float):
    """Value and derivative of theta -> terminal value of the optimal path."""
    kind = params.kind
    if kind is Ensemble.GRAM:

        def value(theta: float) -> float:
            return float(
                entropy_J(1.0 + theta)
                - entropy_J(1.0 - T + theta)
                - T * math.log1p(theta)
            )

        def deriv(theta: float) -> float:
            u = T / (1.0 + theta)
            if u >= 1.0:
                return math.inf
            return -(math.log1p(-u) + u)

        return value, deriv
    if kind is Ensemble.LAGUERRE:

        def value(theta: float) -> float:
            return float(entropy_J(1.0 + theta) - entropy_J(1.0 - T + theta))

        def deriv(theta: float) -> float:
            if theta == T - 1.0:
                return math.inf
            return math.log1p(theta) - math.log(1.0 - T + theta)

        return value, deriv
    if kind is Ensemble.JACOBI:
        tau1, tau2 = params.tau1, params.tau2
        # theta + tau1 can land a few ulps under T at the bracket floor
        # (T - tau1) + tau1; the map is only ever used on theta >= floor

        def value(theta: float) -> float:
            return energy_E(max(theta + tau1, T), tau2, T)

        def deriv(theta: float) -> float:
            return energy_E1(max(theta + tau1, T), tau2, T)

        return value, deriv

    def value(theta: float) -> float:
        return T * math.log1p(theta)

    def deriv(theta: float) -> float:
        return T / (1.0 + theta)

    return value, deriv


def _solve_multiplier(value, deriv, lo: float, xi: float) -> float:
    """Root of value(theta) = xi on [lo, inf); value is increasing."""
    f_lo = value(lo)
    if xi <= f_lo:
        return lo
    hi = lo + 1.0
    while value(hi) < xi:
        hi = lo + 2.0 * (hi - lo)
        if hi - lo > 1e15:
            raise RuntimeError("multiplier bracket failed to close")
    a, b = lo, hi
    # width target is relative once theta grows past O(1): an absolute
    # 1e-12 is below the float64 ulp for theta ~ 1e5 and would never close
    while b - a > _BISECT_WIDTH * max(1.0, abs(a), abs(b)):
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            break
        if value(mid) < xi:
            a = mid
        else:
            b = mid
    theta = 0.5 * (a + b)
    # Newton polish stays inside the final bracket; the derivative is
    # infinite at the floor endpoint and the step degenerates safely
    for _ in range(_NEWTON_POLISH):
        d = deriv(theta)
        if not math.isfinite(d) or d <= 0.0:
            break
        theta = min(max(theta - (value(theta) - xi) / d, a), b)
    return theta


def _slope_function(params: EnsembleParams, theta: float):
    kind = params.kind
    if kind is Ensemble.GRAM:
        return lambda t: math.log(1.0 - t + theta) - math.log1p(theta)
    if kind is Ensemble.LAGUERRE:
        return lambda t: math.log(1.0 - t + theta)
    if kind is Ensemble.JACOBI:
        tau1, tau2 = params.tau1, params.tau2
        return lambda t: math.log(theta + tau1 - t) - math.log(theta + tau1 + tau2 - t)
    return lambda t: math.log1p(theta)


def _interior_path(
    params: EnsembleParams, T: float, theta: float, cells: int
) -> PathMeasure:
    grid = np.linspace(0.0, T, cells + 1)
    slope = _slope_function(params, theta)
    mids = 0.5 * (grid[:-1] + grid[1:])
    dens = np.array([slope(float(t)) for t in mids])
    return PathMeasure(grid=grid, ac_density=dens)


def marginal_rate(
    params: EnsembleParams, T: float, xi: float, *, cells: int = _DEFAULT_CELLS
) -> RateResult:
    """Rate of the terminal value xi, with multiplier and optimal path.

    Branches: Interior solves the monotone multiplier equation by
    bisection plus a Newton polish and evaluates theta*xi - L_T(theta);
    AffineTail continues past the reachable endpoint with the linear
    extension, representing the optimizer as the endpoint path plus
    one atom at T; Infinite covers terminal values the process cannot
    attain (xi >= 0 for the Gram and Jacobi kinds).
    """
    T, xi = float(T), float(xi)
    _check_horizon(params, T)
    kind = params.kind
    if kind in (Ensemble.GRAM, Ensemble.JACOBI) and xi >= 0.0:
        return RateResult(kind, T, xi, None, math.inf, RateBranch.INFINITE, None)

    value, deriv = _terminal_map(params, T)
    floor = _theta_floor(params, T)

    if kind is Ensemble.AUX_S:
        theta = math.expm1(xi / T)
        rate = theta * xi - limiting_cgf_LT(params, T, theta)
        path = _interior_path(params, T, theta, cells)
        return RateResult(kind, T, xi, theta, rate, RateBranch.INTERIOR, path)

    xi_end = value(floor)
    if xi >= xi_end:
        theta = _solve_multiplier(value, deriv, floor, xi)
        rate = theta * xi - limiting_cgf_LT(params, T, theta)
        path = _interior_path(params, T, theta, cells)
        return RateResult(kind, T, xi, theta, rate, RateBranch.INTERIOR, path)

    # affine tail: beyond the endpoint the optimal measure keeps the
    # endpoint density and dumps the deficit in an atom at T
    rate_end = floor * xi_end - limiting_cgf_LT(params, T, floor)
    slope = params.tau1 - T if kind is Ensemble.JACOBI else 1.0 - T
    rate = rate_end + slope * (xi_end - xi)
    base = _interior_path(params, T, floor, cells)
    path = PathMeasure(
        grid=base.grid,
        ac_density=base.ac_density,
        atoms=((T, xi - xi_end),),
    )
    return RateResult(kind, T, xi, floor, rate, RateBranch.AFFINE_TAIL, path)


def _params_for(kind: Ensemble, tau1: float = 1.0, tau2: float = 1.0) -> EnsembleParams:
    # beta and n are ignored by this layer; n only has to satisfy the
    # EnsembleParams floor constraints
    if kind is Ensemble.JACOBI:
        n = max(2, math.ceil(1.0 / tau1), math.ceil(1.0 / tau2))
        return EnsembleParams(kind, 2.0, n, tau1, tau2)
    return EnsembleParams(kind, 2.0, 2)


def spectral_rate_laguerre(dist: SpectralDist, T: float) -> float:
    """Spectral-route rate functional at a scaled ratio law.

    Assembled from the closed logarithmic energy, the unit mean of the
    unit-scale law, and the closed log moment; the scale enters as an
    additive log shift of both integrals.
    """
    if dist.kind is not SpectralKind.MP:
        raise ValueError("spectral_rate_laguerre: expects a ratio law")
    if dist.atom_at_zero > 0.0:
        raise ValueError("spectral_rate_laguerre: law must not carry an atom")
    if not 0.0 < T < 1.0:
        raise ValueError("spectral_rate_laguerre: need 0 < T < 1")
    c, sigma2 = dist.c, dist.sigma2
    energy = math.log(sigma2) + log_energy_mp(c)
    mean = sigma2
    log_moment = math.log(sigma2) + mp_log_moment(c) / c
    return (
        -T * T * energy
        + T * (mean - (1.0 - T) * log_moment)
        + free_energy_2B(T)
    )


def check_infIW(T: float, xi: float) -> tuple[float, float, float]:
    """Decomposition rate vs spectral functional, scaled-ratio-law side.

    Maps the interior multiplier to the optimizing law via
    scale = 1 + theta and ratio = T / scale, then evaluates both
    routes.  Returns (decomposition, spectral, absolute gap).
    """
    params = _params_for(Ensemble.LAGUERRE)
    xi_end = float(entropy_J(T)) - 1.0
    if not xi > xi_end:
        raise ValueError("check_infIW: xi must lie strictly above the endpoint")
    res = marginal_rate(params, T, xi)
    sigma2 = 1.0 + res.theta
    dist = SpectralDist.mp(T / sigma2, sigma2)
    rhs = spectral_rate_laguerre(dist, T)
    return res.rate, rhs, abs(res.rate - rhs)


def _arc_weights(a_minus: float, a_plus: float, n_cells: int):
    """Midpoint masses of the arc law under the sine substitution.

    Returns (support points, cell masses, local scale half*cos(phi),
    phi step).  The substitution absorbs the square-root edge factor,
    so the transformed weight is smooth and vanishes at the edges.
    """
    mid = 0.5 * (a_plus + a_minus)
    half = 0.5 * (a_plus - a_minus)
    inv_norm = 0.5 * (
        1.0
        - math.sqrt(a_minus * a_plus)
        - math.sqrt((1.0 - a_minus) * (1.0 - a_plus))
    )
    step = math.pi / n_cells
    phi = -0.5 * math.pi + step * (np.arange(n_cells) + 0.5)
    x = mid + half * np.sin(phi)
    scale = half * np.cos(phi)
    weights = (scale**2) / (2.0 * math.pi * x * (1.0 - x) * inv_norm) * step
    weights = weights / weights.sum()
    return x, weights, scale, step


def _pair_log_window(k: int) -> float:
    # integral of log|u - v + k| over the unit square, via the
    # antiderivatives of log and x log x
    if k == 0:
        return -1.5

    def phi(x: float) -> float:
        return x * math.log(x) - x if x > 0.0 else 0.0

    def psi(x: float) -> float:
        return 0.5 * x * x * math.log(x) - 0.25 * x * x if x > 0.0 else 0.0

    return (
        (1.0 - k) * (phi(k) - phi(k - 1))
        + (psi(k) - psi(k - 1))
        + (1.0 + k) * (phi(k + 1) - phi(k))
        - (psi(k + 1) - psi(k))
    )


def _mckay_log_energy_quad(
    a_minus: float, a_plus: float, n_cells: int = 768, band: int = 8
) -> float:
    """Logarithmic energy of the arc law by two-dimensional quadrature.

    Product midpoint rule away from the diagonal; pairs within ``band``
    cells of the diagonal use the analytic integral of the locally
    linearized log kernel, which removes the singular-cell error.
    Declared accuracy about 1e-4 near degenerate arcs, much better on
    well-separated ones.
    """
    x, w, scale, step = _arc_weights(a_minus, a_plus, n_cells)
    diff = np.abs(x[:, None] - x[None, :])
    with np.errstate(divide="ignore"):
        kernel = np.log(np.where(diff > 0.0, diff, 1.0))
    total = float(w @ kernel @ w)
    # replace the near-diagonal band with the linearized closed form
    phi_mid = -0.5 * math.pi + step * (np.arange(n_cells) + 0.5)
    mid = 0.5 * (a_plus + a_minus)
    half = 0.5 * (a_plus - a_minus)
    for k in range(0, band + 1):
        idx = np.arange(n_cells - k)
        wi, wj = w[idx], w[idx + k]
        pair_log = float(_pair_log_window(k))
        pair_phi = 0.5 * (phi_mid[idx] + phi_mid[idx + k])
        local = np.log(step * half * np.cos(pair_phi)) + pair_log
        if k == 0:
            total += float(np.sum(wi * wj * local))
        else:
            crude = np.log(np.abs(x[idx] - x[idx + k]))
            total += 2.0 * float(np.sum(wi * wj * (local - crude)))
    return total


_ARC_GL_NODES, _ARC_GL_WEIGHTS = np.polynomial.legendre.leggauss(128)


def _mckay_moment_quad(a_minus: float, a_plus: float, fn) -> float:
    """Integral of fn(x) against the arc law, sine-substituted Gauss rule."""
    mid = 0.5 * (a_plus + a_minus)
    half = 0.5 * (a_plus - a_minus)
    inv_norm = 0.5 * (
        1.0
        - math.sqrt(a_minus * a_plus)
        - math.sqrt((1.0 - a_minus) * (1.0 - a_plus))
    )
    phi = 0.5 * math.pi * _ARC_GL_NODES
    x = mid + half * np.sin(phi)
    weight = (half * np.cos(phi)) ** 2 / (2.0 * math.pi * x * (1.0 - x) * inv_norm)
    vals = fn(x) * weight
    return float(0.5 * math.pi * np.dot(_ARC_GL_WEIGHTS, vals))


def spectral_rate_jacobi(
    dist: SpectralDist, T: float, tau1: float, tau2: float
) -> float:
    """Spectral-route rate functional at an arc law.

    The logarithmic energy is computed by two-dimensional quadrature
    (independently of the closed form elsewhere in the package, so the
    two routes stay separate); the two log moments by one-dimensional
    quadrature; the free-energy constant in closed form.
    """
    if dist.kind is not SpectralKind.MCKAY:
        raise ValueError("spectral_rate_jacobi: expects an arc law")
    if not (0.0 < T < min(tau1, tau2)):
        raise ValueError("spectral_rate_jacobi: need 0 < T < min(tau1, tau2)")
    a_minus, a_plus = dist.a_minus, dist.a_plus
    energy = _mckay_log_energy_quad(a_minus, a_plus)
    m_log = _mckay_moment_quad(a_minus, a_plus, np.log)
    m_log1m = _mckay_moment_quad(a_minus, a_plus, lambda x: np.log1p(-x))
    field = (tau1 - T) * m_log + (tau2 - T) * m_log1m
    const = T * T * free_energy_B((tau1 - T) / T, (tau2 - T) / T)
    return -T * T * energy - T * field + const


def check_infI(
    T: float, xi: float, tau1: float, tau2: float
) -> tuple[float, float, float]:
    """Decomposition rate vs spectral functional, arc-law side.

    Maps the interior multiplier theta to the optimizing arc through
    the coordinate change s = ((tau1+theta)/(tau1+tau2+theta),
    (tau1+theta+tau2-T)/(tau1+tau2+theta)).  Returns (decomposition,
    spectral, absolute gap).
    """
    if not (0.0 < T < min(tau1, tau2)):
        raise ValueError("check_infI: need 0 < T < min(tau1, tau2)")
    params = _params_for(Ensemble.JACOBI, tau1, tau2)
    xi_end = energy_E(T, tau2, T)
    if not (xi_end < xi < 0.0):
        raise ValueError("check_infI: xi must lie strictly inside the branch window")
    res = marginal_rate(params, T, xi)
    theta = res.theta
    denom = tau1 + tau2 + theta
    s_lo = (tau1 + theta) / denom
    s_hi = (tau1 + theta + tau2 - T) / denom
    a_lo, a_hi = a_pm(s_lo, s_hi)
    rhs = spectral_rate_jacobi(SpectralDist.mckay(a_lo, a_hi), T, tau1, tau2)
    return res.rate, rhs, abs(res.rate - rhs)


def inf_convolution_check(T: float, xi_values) -> float:
    """Max gap between the combined rate and its convolution build-up.

    For each terminal value, compares the directly computed combined
    rate with the infimum over splits of the two component rates,
    the infimum taken by bounded scalar minimization.
    """
    lag = _params_for(Ensemble.LAGUERRE)
    gram = _params_for(Ensemble.GRAM)
    aux = _params_for(Ensemble.AUX_S)
    worst = 0.0
    for xi in np.asarray(xi_values, dtype=float):
        direct = marginal_rate(lag, T, float(xi), cells=2).rate

        def split_cost(s: float) -> float:
            left = marginal_rate(gram, T, s, cells=2).rate
            right = marginal_rate(aux, T, float(xi) - s, cells=2).rate
            return left + right

        span = 5.0 * T * (1.0 + abs(float(xi)))
        best = optimize.minimize_scalar(
            split_cost,
            bounds=(float(xi) - span, -1e-12),
            method="bounded",
            options={"xatol": 1e-11},
        )
        worst = max(worst, abs(direct - float(best.fun)))
    return worst
