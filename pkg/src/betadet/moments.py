"""Finite-size and asymptotic moments of the log-determinant processes.

Exact means and variances come from digamma/trigamma sums over the
independent factors; asymptotic values use the entropy limits plus
closed antiderivatives of the drift and diffusion coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .entropy import Ensemble, EnsembleParams, energy_E, energy_E1, entropy_J
from .specfun import binet_f, digamma, polygamma

EULER_GAMMA = float(np.euler_gamma)

_MOMENT_SCHEMA_VERSION = 1


def _check_index(params: EnsembleParams, p: int) -> int:
    p = int(p)
    if not 1 <= p <= params.index_count:
        raise ValueError(f"index p={p} out of range 1..{params.index_count}")
    return p


def _mean_increments(params: EnsembleParams, p: int) -> np.ndarray:
    bh, n = params.beta_half, params.n
    j = np.arange(1, p + 1, dtype=float)
    kind = params.kind
    if kind is Ensemble.LAGUERRE:
        return digamma(bh * (n - j + 1.0)) - math.log(bh * n)
    if kind is Ensemble.GRAM:
        return digamma(bh * (n - j + 1.0)) - digamma(bh * n)
    if kind is Ensemble.JACOBI:
        n1, n2 = params.n1, params.n2
        return digamma(bh * (n1 - j + 1.0)) - digamma(bh * (n1 + n2 - j + 1.0))
    return np.full(p, float(digamma(bh * n)) - math.log(bh * n))


def _var_increments(params: EnsembleParams, p: int) -> np.ndarray:
    bh, n = params.beta_half, params.n
    j = np.arange(1, p + 1, dtype=float)
    kind = params.kind
    if kind is Ensemble.LAGUERRE:
        return polygamma(1, bh * (n - j + 1.0))
    if kind is Ensemble.GRAM:
        return polygamma(1, bh * (n - j + 1.0)) - polygamma(1, bh * n)
    if kind is Ensemble.JACOBI:
        n1, n2 = params.n1, params.n2
        return polygamma(1, bh * (n1 - j + 1.0)) - polygamma(1, bh * (n1 + n2 - j + 1.0))
    return np.full(p, float(polygamma(1, bh * n)))


def exact_mean_logdet(params: EnsembleParams, p: int) -> float:
    """Exact mean of the cumulative log-determinant at index p.

    Each ensemble's value is the sum over factors of the first
    derivative at zero of the factor's log-Mellin transform: digamma
    terms for Gamma/Beta laws plus the explicit normalizations.
    """
    p = _check_index(params, p)
    return float(np.sum(_mean_increments(params, p)))


def exact_var_logdet(params: EnsembleParams, p: int) -> float:
    """Exact variance at index p (independent increments, so a plain
    sum of trigamma terms)."""
    p = _check_index(params, p)
    return float(np.sum(_var_increments(params, p)))


def exact_mean_profile(params: EnsembleParams) -> np.ndarray:
    """Exact means at every index 1..p_max in one pass."""
    return np.cumsum(_mean_increments(params, params.index_count))


def exact_var_profile(params: EnsembleParams) -> np.ndarray:
    """Exact variances at every index 1..p_max in one pass."""
    return np.cumsum(_var_increments(params, params.index_count))


def lln_limit(params: EnsembleParams, t: float) -> float:
    """Law-of-large-numbers limit of cumlog/n at time t."""
    kind = params.kind
    if not 0.0 <= t <= params.horizon:
        raise ValueError("lln_limit: t outside the time interval")
    if kind in (Ensemble.GRAM, Ensemble.LAGUERRE):
        return -float(entropy_J(1.0 - t))
    if kind is Ensemble.JACOBI:
        return float(energy_E(params.tau1, params.tau2, t))
    return 0.0


def _check_interior(params: EnsembleParams, t: float) -> float:
    t = float(t)
    if not 0.0 < t < params.horizon:
        raise ValueError(f"t={t} outside the open interval (0, {params.horizon})")
    return t


def drift_integral(params: EnsembleParams, t: float) -> float:
    """Closed antiderivative of the drift coefficient from 0 to t."""
    t = _check_interior(params, t)
    beta = params.beta
    kind = params.kind
    if kind is Ensemble.GRAM:
        return t / beta - (0.5 - 1.0 / beta) * math.log1p(-t)
    if kind is Ensemble.LAGUERRE:
        return -(0.5 - 1.0 / beta) * math.log1p(-t)
    if kind is Ensemble.JACOBI:
        return (0.5 - 1.0 / beta) * float(energy_E1(params.tau1, params.tau2, t))
    return -t / beta


def variance_integral(params: EnsembleParams, t: float) -> float:
    """Closed antiderivative of the squared diffusion coefficient."""
    t = _check_interior(params, t)
    beta = params.beta
    kind = params.kind
    if kind is Ensemble.GRAM:
        return (2.0 / beta) * (-t - math.log1p(-t))
    if kind is Ensemble.LAGUERRE:
        return -(2.0 / beta) * math.log1p(-t)
    if kind is Ensemble.JACOBI:
        return (2.0 / beta) * float(energy_E1(params.tau1, params.tau2, t))
    return (2.0 / beta) * t


def asymptotic_mean(params: EnsembleParams, t: float) -> float:
    """Large-n mean approximation at time t: scaled entropy centering
    plus the integrated drift."""
    t = _check_interior(params, t)
    n = params.n
    p = math.floor(n * t)
    if params.kind in (Ensemble.GRAM, Ensemble.LAGUERRE):
        center = -n * float(entropy_J(1.0 - p / n))
    elif params.kind is Ensemble.JACOBI:
        center = float(energy_E(float(params.n1), float(params.n2), float(p)))
    else:
        center = 0.0
    return center + drift_integral(params, t)


def asymptotic_var(params: EnsembleParams, t: float) -> float:
    """Large-n variance approximation at time t."""
    return variance_integral(params, t)


def _tail_cut(beta: float, second: bool, tol: float) -> float:
    # kernel bounds: s f(s) < 1/2 and s(s f(s) + 1/2) < s, and
    # 1/(e^{bs/2} - 1) <= 2 e^{-bs/2} once bs/2 >= log 2
    s = max(2.0 / beta, (2.0 / beta) * math.log(2.0 / (beta * tol)))
    if second:
        for _ in range(4):
            s = (2.0 / beta) * math.log(4.0 * (s + 2.0 / beta) / (beta * tol))
    return s


_PANEL_NODES, _PANEL_WEIGHTS = np.polynomial.legendre.leggauss(48)


def _k_integral(beta: float, second: bool, tol: float = 1e-13) -> float:
    cut = _tail_cut(beta, second, tol)
    edges = [0.0, min(1.0, cut)]
    while edges[-1] < cut:
        edges.append(min(2.0 * edges[-1], cut))
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        s = 0.5 * (hi - lo) * (_PANEL_NODES + 1.0) + lo
        kernel = s * binet_f(s)
        if second:
            kernel = s * (kernel + 0.5)
        vals = kernel / np.expm1(beta * s / 2.0)
        total += 0.5 * (hi - lo) * float(np.dot(_PANEL_WEIGHTS, vals))
    return total


def constant_K1(beta: float) -> float:
    """Endpoint mean constant: the limit of the fully accumulated
    process mean plus n + (1/beta - 1/2) log n."""
    if beta <= 0.0:
        raise ValueError("constant_K1: beta must be > 0")
    return 0.5 * math.log(2.0 * math.pi) + (1.0 - EULER_GAMMA) / beta - _k_integral(beta, False)


def constant_K2(beta: float) -> float:
    """Endpoint variance constant: the limit of the fully accumulated
    process variance minus (2/beta) log n."""
    if beta <= 0.0:
        raise ValueError("constant_K2: beta must be > 0")
    return 2.0 * (EULER_GAMMA - 1.0) / beta + _k_integral(beta, True)


def jacobi_endpoint_corrections(params: EnsembleParams) -> tuple[float, float]:
    """Constants in the Jacobi endpoint mean/variance expansions.

    mean_shift is the limit of (exact mean) - (entropy centering at
    integer arguments) + (1/beta - 1/2) log n, and var_shift the limit
    of (exact variance) - (2/beta) log n.  Both include the auxiliary
    normalization process's endpoint contribution (-1/beta to the mean,
    +2/beta to the variance) on top of the endpoint constants; dropping
    those terms leaves an O(1) gap, checked in the tests against the
    exact digamma sums.
    """
    if params.kind is not Ensemble.JACOBI:
        raise ValueError("jacobi_endpoint_corrections: Jacobi params required")
    beta = params.beta
    log_ratio = math.log(params.tau1 * params.tau2 / (params.tau1 + params.tau2))
    mean_shift = (0.5 - 1.0 / beta) * log_ratio + constant_K1(beta) - 1.0 / beta
    var_shift = (2.0 / beta) * log_ratio + constant_K2(beta) + 2.0 / beta
    return mean_shift, var_shift


@dataclass(frozen=True)
class MomentReport:
    """Exact vs asymptotic moments at one index of one ensemble."""

    params: EnsembleParams
    p: int
    exact_mean: float
    exact_var: float
    asymptotic_mean: float
    asymptotic_var: float
    gap_mean: float
    gap_var: float

    def to_json(self) -> dict:
        return {
            "schema_version": _MOMENT_SCHEMA_VERSION,
            "params": {
                "kind": self.params.kind.value,
                "beta": self.params.beta,
                "n": self.params.n,
                "tau1": self.params.tau1,
                "tau2": self.params.tau2,
            },
            "p": self.p,
            "exact_mean": self.exact_mean,
            "exact_var": self.exact_var,
            "asymptotic_mean": self.asymptotic_mean,
            "asymptotic_var": self.asymptotic_var,
            "gap_mean": self.gap_mean,
            "gap_var": self.gap_var,
        }

    @staticmethod
    def csv_header() -> str:
        return "ensemble,beta,n,tau1,tau2,p,exact_mean,exact_var,asymptotic_mean,asymptotic_var,gap_mean,gap_var"

    def csv_row(self) -> str:
        q = self.params
        return (
            f"{q.kind.value},{q.beta:.12g},{q.n},{q.tau1:.12g},{q.tau2:.12g},{self.p},"
            f"{self.exact_mean:.17g},{self.exact_var:.17g},"
            f"{self.asymptotic_mean:.17g},{self.asymptotic_var:.17g},"
            f"{self.gap_mean:.17g},{self.gap_var:.17g}"
        )


def moment_report(params: EnsembleParams, p: int) -> MomentReport:
    """Assemble exact and asymptotic moments at index p (p/n must lie
    strictly inside the time interval for the asymptotics to exist)."""
    p = _check_index(params, p)
    t = p / params.n
    em = exact_mean_logdet(params, p)
    ev = exact_var_logdet(params, p)
    am = asymptotic_mean(params, t)
    av = asymptotic_var(params, t)
    return MomentReport(
        params=params,
        p=p,
        exact_mean=em,
        exact_var=ev,
        asymptotic_mean=am,
        asymptotic_var=av,
        gap_mean=em - am,
        gap_var=ev - av,
    )
