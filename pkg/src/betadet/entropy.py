"""Deterministic auxiliary functions of the determinant-process limits.

Entropy-type functions (J, its primitive F, the free energy B, the
Jacobi energy E, Bernoulli relative entropy) plus the per-ensemble
drift/diffusion coefficients and the limiting cumulant-density g.
Everything here is a pure function; infinities are returned as
math.inf, never raised.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np


class Ensemble(str, Enum):
    LAGUERRE = "laguerre"
    GRAM = "gram"
    JACOBI = "jacobi"
    AUX_S = "auxs"


@dataclass(frozen=True)
class EnsembleParams:
    """Which ensemble, Dyson beta, base dimension, Jacobi time ratios.

    Laguerre/Gram/AuxS processes live on t in [0,1]; Jacobi on
    [0, tau1] with n1 = floor(n*tau1), n2 = floor(n*tau2) column blocks.
    """

    kind: Ensemble
    beta: float
    n: int
    tau1: float = 1.0
    tau2: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", Ensemble(self.kind))
        if not (self.beta > 0.0 and math.isfinite(self.beta)):
            raise ValueError("EnsembleParams: beta must be > 0")
        if self.n < 1 or self.n != int(self.n):
            raise ValueError("EnsembleParams: n must be a positive integer")
        if self.kind is Ensemble.JACOBI:
            if not (self.tau1 > 0.0 and self.tau2 > 0.0):
                raise ValueError("EnsembleParams: Jacobi needs tau1, tau2 > 0")
            if min(self.n1, self.n2) < 1:
                raise ValueError("EnsembleParams: floor(n*tau) must be >= 1")

    @property
    def beta_half(self) -> float:
        return 0.5 * self.beta

    @property
    def n1(self) -> int:
        return int(math.floor(self.n * self.tau1))

    @property
    def n2(self) -> int:
        return int(math.floor(self.n * self.tau2))

    @property
    def horizon(self) -> float:
        return self.tau1 if self.kind is Ensemble.JACOBI else 1.0

    @property
    def index_count(self) -> int:
        # number of factors in the determinant process
        return self.n1 if self.kind is Ensemble.JACOBI else self.n


def xlogx(u):
    """u log u with the 0 log 0 = 0 convention (u >= 0)."""
    u_arr = np.atleast_1d(np.asarray(u, dtype=float))
    out = np.zeros_like(u_arr)
    pos = u_arr > 0.0
    out[pos] = u_arr[pos] * np.log(u_arr[pos])
    if np.ndim(u) == 0:
        return float(out[0])
    return out


def entropy_J(u):
    """J(u) = u log u - u + 1 for u > 0, J(0) = 1, +inf for u < 0."""
    u_arr = np.atleast_1d(np.asarray(u, dtype=float))
    out = np.full_like(u_arr, np.inf)
    zero = u_arr == 0.0
    out[zero] = 1.0
    pos = u_arr > 0.0
    up = u_arr[pos]
    out[pos] = up * np.log(up) - up + 1.0
    if np.ndim(u) == 0:
        return float(out[0])
    return out


def primitive_F(t):
    """F(t) = (t^2/2) log t - 3 t^2/4 + t on t >= 0, the antiderivative of J."""
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t_arr < 0.0):
        raise ValueError("primitive_F: t must be >= 0")
    out = np.zeros_like(t_arr)
    pos = t_arr > 0.0
    tp = t_arr[pos]
    out[pos] = 0.5 * tp * tp * np.log(tp) - 0.75 * tp * tp + tp
    if np.ndim(t) == 0:
        return float(out[0])
    return out


def free_energy_B(s: float, t: float, via_primitive: bool = False) -> float:
    """Two-argument free energy B(s,t); symmetric in its arguments.

    ``via_primitive`` evaluates the equivalent telescoped form
    F(1+s)-F(s)+F(1+t)-F(t)-F(2+s+t)+F(1+s+t) - 7/4; both routes agree
    to 1e-12 and tests pin that.
    """
    if s < 0.0 or t < 0.0:
        raise ValueError("free_energy_B: arguments must be >= 0")
    if via_primitive:
        return float(
            primitive_F(1.0 + s)
            - primitive_F(s)
            + primitive_F(1.0 + t)
            - primitive_F(t)
            - primitive_F(2.0 + s + t)
            + primitive_F(1.0 + s + t)
            - 1.75
        )
    u = s + t
    return float(
        0.5 * ((1.0 + s) ** 2) * math.log1p(s)
        - xlogx(s) * 0.5 * s
        + 0.5 * ((1.0 + t) ** 2) * math.log1p(t)
        - xlogx(t) * 0.5 * t
        - 0.5 * ((2.0 + u) ** 2) * math.log(2.0 + u)
        + 0.5 * ((1.0 + u) ** 2) * math.log1p(u)
    )


def free_energy_2B(T: float) -> float:
    """Endpoint free energy 2B(T) = -(1/2)(3T - T^2 log T + (1-T)^2 log(1-T))."""
    if not 0.0 < T < 1.0:
        raise ValueError("free_energy_2B: need 0 < T < 1")
    return -0.5 * (3.0 * T - T * T * math.log(T) + (1.0 - T) ** 2 * math.log1p(-T))


def _four_J(x: float, y: float, z: float) -> float:
    # J(x) - J(x-z) - J(x+y) + J(x+y-z), no domain checks
    return float(
        entropy_J(x) - entropy_J(x - z) - entropy_J(x + y) + entropy_J(x + y - z)
    )


def energy_E(x: float, y: float, z: float) -> float:
    """Jacobi energy E(x,y,z) = J(x) - J(x-z) - J(x+y) + J(x+y-z).

    Homogeneous of degree 1; E(x,y,0) = 0; z = x is allowed through the
    0 log 0 limit.
    """
    if not (x > 0.0 and y > 0.0 and 0.0 <= z <= x):
        raise ValueError("energy_E: need x > 0, y > 0, 0 <= z <= x")
    return _four_J(x, y, z)


def energy_E1(x: float, y: float, z: float) -> float:
    """Partial derivative of E in x: log[x(x+y-z) / ((x-z)(x+y))]."""
    if not (x > 0.0 and y > 0.0 and 0.0 <= z <= x):
        raise ValueError("energy_E1: need x > 0, y > 0, 0 <= z <= x")
    if z == x:
        return math.inf
    return math.log(x) + math.log(x + y - z) - math.log(x - z) - math.log(x + y)


def bernoulli_entropy_H(x: float, p: float) -> float:
    """Relative entropy of Bernoulli(x) with respect to Bernoulli(p)."""
    if not (0.0 <= x <= 1.0):
        raise ValueError("bernoulli_entropy_H: need 0 <= x <= 1")
    if not (0.0 < p < 1.0):
        raise ValueError("bernoulli_entropy_H: need 0 < p < 1")
    val = -x * math.log(p) - (1.0 - x) * math.log1p(-p)
    val += xlogx(x) + xlogx(1.0 - x)
    return float(val)


def drift_diffusion(params: EnsembleParams, t: float) -> tuple[float, float]:
    """LLN drift d(t) and CLT variance rate of the log-determinant process.

    The variance rate is the square of the diffusion coefficient; its
    2/beta factor is NOT repeated inside the drift (the drift carries
    (1/2 - 1/beta) against the unscaled kernel).
    """
    beta = params.beta
    if params.kind is Ensemble.AUX_S:
        if not 0.0 <= t <= 1.0:
            raise ValueError("drift_diffusion: t outside [0,1]")
        return -1.0 / beta, 2.0 / beta
    if params.kind in (Ensemble.GRAM, Ensemble.LAGUERRE):
        if not 0.0 <= t < 1.0:
            raise ValueError("drift_diffusion: t outside [0,1)")
        if params.kind is Ensemble.GRAM:
            return (
                1.0 / beta + (0.5 - 1.0 / beta) / (1.0 - t),
                2.0 * t / (beta * (1.0 - t)),
            )
        return (0.5 - 1.0 / beta) / (1.0 - t), 2.0 / (beta * (1.0 - t))
    # Jacobi
    tau1, tau2 = params.tau1, params.tau2
    if not 0.0 <= t < tau1:
        raise ValueError("drift_diffusion: t outside [0,tau1)")
    kernel = tau2 / ((tau1 - t) * (tau1 + tau2 - t))
    return (0.5 - 1.0 / beta) * kernel, (2.0 / beta) * kernel


def limiting_cgf_density_g(params: EnsembleParams, t: float, theta: float) -> float:
    """Density g(t, theta) of the limiting normalized cgf; +inf outside
    the finiteness region."""
    kind = params.kind
    if kind is Ensemble.AUX_S:
        if theta <= -1.0:
            return math.inf
        return float(entropy_J(1.0 + theta))
    if kind in (Ensemble.GRAM, Ensemble.LAGUERRE):
        if not 0.0 <= t < 1.0:
            raise ValueError("limiting_cgf_density_g: t outside [0,1)")
        if theta <= -(1.0 - t):
            return math.inf
        val = entropy_J(1.0 - t + theta) - entropy_J(1.0 - t)
        if kind is Ensemble.GRAM:
            val -= entropy_J(1.0 + theta)
        return float(val)
    tau1, tau2 = params.tau1, params.tau2
    if not 0.0 <= t < tau1:
        raise ValueError("limiting_cgf_density_g: t outside [0,tau1)")
    if theta <= -(tau1 - t):
        return math.inf
    return _four_J(tau1 - t + theta, tau2, theta)
