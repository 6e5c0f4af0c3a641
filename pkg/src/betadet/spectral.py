"""Limit spectral laws of the three ensembles and ESD utilities.

The determinant processes admit two computational routes. The
decomposition route multiplies independent scalar factors; the spectral
route integrates log x against a limiting eigenvalue law. This module
owns the spectral side: the Marchenko-Pastur family (ratio index c,
scale index sigma2), the arc law on (0,1) behind the Jacobi limits
(generalized McKay), the atom-decorated mixture of the two-ratio limit
(the cc variant), their log moments and logarithmic energies, plus a
symmetric-tridiagonal eigensolver and a mixed-distribution KS distance
for empirical cross-checks.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

from .entropy import entropy_J, free_energy_B, xlogx

# constructors refuse arc parameters this close to a degenerate law;
# the density is fine there mathematically but its normalization is
# 0/0 in floating point and callers needing the limit use limit formulas
_DEGENERACY_GUARD = 1e-10

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(64)


def sigma_pm(b: float, c: float) -> tuple[float, float]:
    """Forward coordinate map (b, c) -> (sigma_minus, sigma_plus)."""
    if not (0.0 < b < 1.0 and 0.0 < c < 1.0):
        raise ValueError("sigma_pm: arguments must lie in (0,1)")
    root = math.sqrt(b * c)
    comp = math.sqrt((1.0 - b) * (1.0 - c))
    return 0.5 * (1.0 + root - comp), 0.5 * (1.0 + root + comp)


def a_pm(x: float, y: float) -> tuple[float, float]:
    """Inverse coordinate map (x, y) -> (a_minus, a_plus)."""
    if not (0.0 < x < 1.0 and 0.0 < y < 1.0):
        raise ValueError("a_pm: arguments must lie in (0,1)")
    u = math.sqrt((1.0 - x) * (1.0 - y))
    v = math.sqrt(x * y)
    return (u - v) ** 2, (u + v) ** 2


def mp_edges(c: float) -> tuple[float, float]:
    """Support endpoints of the unit-scale Marchenko-Pastur law."""
    if c <= 0.0:
        raise ValueError("mp_edges: c must be positive")
    root = math.sqrt(c)
    return (1.0 - root) ** 2, (1.0 + root) ** 2


def _check_arc_params(a_minus: float, a_plus: float) -> None:
    if not (0.0 < a_minus < a_plus < 1.0):
        raise ValueError("arc parameters must satisfy 0 < a_minus < a_plus < 1")
    if (
        a_minus < _DEGENERACY_GUARD
        or a_plus > 1.0 - _DEGENERACY_GUARD
        or a_plus - a_minus < _DEGENERACY_GUARD
    ):
        raise ValueError("arc parameters within 1e-10 of a degenerate law")


def _arc_norm(a_minus: float, a_plus: float) -> float:
    inv = 0.5 * (
        1.0
        - math.sqrt(a_minus * a_plus)
        - math.sqrt((1.0 - a_minus) * (1.0 - a_plus))
    )
    return 1.0 / inv


class SpectralKind(Enum):
    MP = "mp"
    MCKAY = "mckay"
    CC = "cc"


@dataclass(frozen=True)
class SpectralDist:
    """One limit spectral law: up to two atoms plus one continuous arc.

    Built through the factory constructors ``mp``, ``mckay`` and ``cc``;
    the continuous part carries mass ``cont_mass`` between square-root
    edges at ``support``.
    """

    kind: SpectralKind
    support: tuple[float, float]
    atom_at_zero: float
    atom_at_one: float
    cont_mass: float
    c: float | None = None
    sigma2: float | None = None
    a_minus: float | None = None
    a_plus: float | None = None
    u_prime: float | None = None
    v_prime: float | None = None

    @staticmethod
    def mp(c: float, sigma2: float = 1.0) -> "SpectralDist":
        if c <= 0.0 or sigma2 <= 0.0:
            raise ValueError("SpectralDist.mp: c and sigma2 must be positive")
        lo, hi = mp_edges(c)
        atom0 = max(0.0, 1.0 - 1.0 / c)
        return SpectralDist(
            kind=SpectralKind.MP,
            support=(sigma2 * lo, sigma2 * hi),
            atom_at_zero=atom0,
            atom_at_one=0.0,
            cont_mass=1.0 - atom0,
            c=float(c),
            sigma2=float(sigma2),
        )

    @staticmethod
    def mckay(a_minus: float, a_plus: float) -> "SpectralDist":
        _check_arc_params(a_minus, a_plus)
        return SpectralDist(
            kind=SpectralKind.MCKAY,
            support=(float(a_minus), float(a_plus)),
            atom_at_zero=0.0,
            atom_at_one=0.0,
            cont_mass=1.0,
            a_minus=float(a_minus),
            a_plus=float(a_plus),
        )

    @staticmethod
    def cc(u_prime: float, v_prime: float) -> "SpectralDist":
        if u_prime <= 0.0 or v_prime <= 0.0:
            raise ValueError("SpectralDist.cc: ratios must be positive")
        total = u_prime + v_prime
        if total <= 1.0:
            raise ValueError("SpectralDist.cc: need u_prime + v_prime > 1")
        am, ap = a_pm(u_prime / total, 1.0 - 1.0 / total)
        _check_arc_params(am, ap)
        atom0 = max(0.0, 1.0 - u_prime)
        atom1 = max(0.0, 1.0 - v_prime)
        return SpectralDist(
            kind=SpectralKind.CC,
            support=(am, ap),
            atom_at_zero=atom0,
            atom_at_one=atom1,
            cont_mass=1.0 - atom0 - atom1,
            a_minus=am,
            a_plus=ap,
            u_prime=float(u_prime),
            v_prime=float(v_prime),
        )


def density(dist: SpectralDist, x):
    """Continuous-part density at x; atoms are not included.

    Zero outside the support interval. The value at an interior edge
    singularity (ratio index 1 at the origin) is +inf.
    """
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    lo, hi = dist.support
    out = np.zeros_like(x_arr)
    inside = (x_arr >= lo) & (x_arr <= hi)
    xs = x_arr[inside]
    prod = np.clip((xs - lo) * (hi - xs), 0.0, None)
    if dist.kind is SpectralKind.MP:
        vals = np.full_like(xs, np.inf)
        pos = xs > 0.0
        vals[pos] = np.sqrt(prod[pos]) / (
            2.0 * np.pi * dist.sigma2 * dist.c * xs[pos]
        )
    else:
        norm = dist.cont_mass * _arc_norm(dist.a_minus, dist.a_plus)
        vals = norm * np.sqrt(prod) / (2.0 * np.pi * xs * (1.0 - xs))
    out[inside] = vals
    if np.ndim(x) == 0:
        return float(out[0])
    return out


def _cont_cdf(dist: SpectralDist, x_arr: np.ndarray) -> np.ndarray:
    # substitution x = mid + half sin(phi) cancels the square-root edges,
    # leaving a smooth integrand for the cached Gauss-Legendre nodes
    lo, hi = dist.support
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    u = np.clip((x_arr - mid) / half, -1.0, 1.0)
    span = 0.5 * (np.arcsin(u) + 0.5 * np.pi)
    phi = -0.5 * np.pi + span[:, None] * (_GL_NODES[None, :] + 1.0)
    xv = mid + half * np.sin(phi)
    cos2 = np.cos(phi) ** 2
    if dist.kind is SpectralKind.MP:
        integ = half * half * cos2 / (2.0 * np.pi * dist.sigma2 * dist.c * xv)
    else:
        norm = dist.cont_mass * _arc_norm(dist.a_minus, dist.a_plus)
        integ = norm * half * half * cos2 / (2.0 * np.pi * xv * (1.0 - xv))
    return (integ @ _GL_WEIGHTS) * span


def cdf(dist: SpectralDist, x):
    """Distribution function at x, atoms included (right-continuous)."""
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    out = _cont_cdf(dist, x_arr)
    if dist.atom_at_zero > 0.0:
        out[x_arr >= 0.0] += dist.atom_at_zero
    if dist.atom_at_one > 0.0:
        out[x_arr >= 1.0] += dist.atom_at_one
    if np.ndim(x) == 0:
        return float(out[0])
    return out


def ppf(dist: SpectralDist, q):
    """Quantile function; atoms produce flat segments mapped to 0 and 1."""
    q_arr = np.atleast_1d(np.asarray(q, dtype=float))
    if np.any((q_arr < 0.0) | (q_arr > 1.0)):
        raise ValueError("ppf: probabilities must lie in [0,1]")
    lo, hi = dist.support
    target = np.clip(q_arr - dist.atom_at_zero, 0.0, dist.cont_mass)
    lo_v = np.full(q_arr.shape, lo)
    hi_v = np.full(q_arr.shape, hi)
    for _ in range(60):
        mid = 0.5 * (lo_v + hi_v)
        below = _cont_cdf(dist, mid) < target
        lo_v = np.where(below, mid, lo_v)
        hi_v = np.where(below, hi_v, mid)
    out = 0.5 * (lo_v + hi_v)
    if dist.atom_at_zero > 0.0:
        out[q_arr <= dist.atom_at_zero] = 0.0
    if dist.atom_at_one > 0.0:
        out[q_arr > 1.0 - dist.atom_at_one] = 1.0
    if np.ndim(q) == 0:
        return float(out[0])
    return out


def mp_log_moment(T: float) -> float:
    """T times the log moment of the ratio-T unit-scale law.

    Evaluates through the same entropy kernel as the decomposition
    route, so the two sides agree bit for bit.
    """
    if not 0.0 < T < 1.0:
        raise ValueError("mp_log_moment: need 0 < T < 1")
    return -float(entropy_J(1.0 - T))


def mckay_log_moment(a_minus: float, a_plus: float) -> float:
    """Log moment of the arc law, in closed form through sigma_pm."""
    if not (0.0 < a_minus < a_plus < 1.0):
        raise ValueError("mckay_log_moment: need 0 < a_minus < a_plus < 1")
    s_minus, s_plus = sigma_pm(a_minus, a_plus)
    gap = s_plus + s_minus - 1.0
    num = float(xlogx(s_plus)) + float(xlogx(s_minus)) - float(xlogx(gap))
    return num / (1.0 - s_plus)


class CCMoments(NamedTuple):
    mean: float
    variance: float
    situation: str
    atom_at_zero: float
    atom_at_one: float


def cc_moments(u_prime: float, v_prime: float) -> CCMoments:
    """Mean, variance and atom structure of the two-ratio mixture.

    The situation label records which of the two atoms are present:
    I neither, II only at 0, III only at 1, IV both.
    """
    if u_prime <= 0.0 or v_prime <= 0.0:
        raise ValueError("cc_moments: ratios must be positive")
    total = u_prime + v_prime
    if total <= 1.0:
        raise ValueError("cc_moments: need u_prime + v_prime > 1")
    mean = u_prime / total
    variance = u_prime * v_prime / total**3
    if u_prime >= 1.0 and v_prime >= 1.0:
        situation = "I"
    elif u_prime < 1.0 <= v_prime:
        situation = "II"
    elif v_prime < 1.0 <= u_prime:
        situation = "III"
    else:
        situation = "IV"
    return CCMoments(
        mean=mean,
        variance=variance,
        situation=situation,
        atom_at_zero=max(0.0, 1.0 - u_prime),
        atom_at_one=max(0.0, 1.0 - v_prime),
    )


def log_energy_mp(c: float) -> float:
    """Logarithmic energy of the unit-scale ratio-c law, 0 < c < 1."""
    if not 0.0 < c < 1.0:
        raise ValueError("log_energy_mp: need 0 < c < 1")
    cinv = 1.0 / c
    return -1.0 + 0.5 * (
        cinv + math.log(c) + (cinv - 1.0) ** 2 * math.log1p(-c)
    )


def log_energy_mckay(a_minus: float, a_plus: float) -> float:
    """Logarithmic energy of the arc law.

    The arc law is the equilibrium measure of an external field with two
    logarithmic terms; at equilibrium the energy balances the field
    integrals against the free energy of the field weights, which turns
    the double integral into a closed form.
    """
    _check_arc_params(a_minus, a_plus)
    s_minus, s_plus = sigma_pm(a_minus, a_plus)
    z1 = (s_minus + s_plus - 1.0) / (1.0 - s_plus)
    z2 = (s_plus - s_minus) / (1.0 - s_plus)
    m_x = mckay_log_moment(a_minus, a_plus)
    m_1mx = mckay_log_moment(1.0 - a_plus, 1.0 - a_minus)
    return free_energy_B(z1, z2) - z1 * m_x - z2 * m_1mx


def log_energy(dist: SpectralDist) -> float:
    """Logarithmic energy of an atom-free spectral law.

    Scale changes shift the energy by the log of the scale factor.
    """
    if dist.atom_at_zero > 0.0 or dist.atom_at_one > 0.0:
        raise ValueError("log_energy: diverges for a law with atoms")
    if dist.kind is SpectralKind.MP:
        return math.log(dist.sigma2) + log_energy_mp(dist.c)
    return log_energy_mckay(dist.a_minus, dist.a_plus)


def gram_tridiagonal(
    diag: np.ndarray, subdiag: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal and offdiagonal of B B' for a lower-bidiagonal factor B."""
    d = np.asarray(diag, dtype=float)
    s = np.asarray(subdiag, dtype=float)
    if s.size != d.size - 1:
        raise ValueError("gram_tridiagonal: subdiag must have length r-1")
    tdiag = d * d
    tdiag[1:] += s * s
    toff = d[:-1] * s
    return tdiag, toff


def tridiag_eigenvalues(diag, offdiag, max_sweeps: int = 64) -> np.ndarray:
    """All eigenvalues of a symmetric tridiagonal matrix, ascending.

    Implicit QL with Wilkinson shifts, eigenvalues only. Well-posed
    inputs converge in two or three sweeps per eigenvalue; the sweep cap
    signals numerical pathology (NaN or Inf entries, typically).
    """
    d = np.array(diag, dtype=float, copy=True).ravel()
    n = d.size
    if n == 0:
        return d
    off = np.asarray(offdiag, dtype=float).ravel()
    if off.size != n - 1:
        raise ValueError("tridiag_eigenvalues: offdiag must have length n-1")
    e = np.zeros(n)
    e[: n - 1] = off
    eps = np.finfo(float).eps
    for low in range(n):
        sweeps = 0
        while True:
            m = low
            while m < n - 1 and abs(e[m]) > eps * (abs(d[m]) + abs(d[m + 1])):
                m += 1
            if m == low:
                break
            sweeps += 1
            if sweeps > max_sweeps:
                raise ArithmeticError("tridiag_eigenvalues: sweep cap hit")
            g = (d[low + 1] - d[low]) / (2.0 * e[low])
            r = math.hypot(g, 1.0)
            g = d[m] - d[low] + e[low] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            restart = False
            for i in range(m - 1, low - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    # a rotation annihilated early; deflate and retry
                    d[i + 1] -= p
                    e[m] = 0.0
                    restart = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
            if restart:
                continue
            d[low] -= p
            e[low] = g
            e[m] = 0.0
    d.sort()
    return d


def esd_vs_density(samples, dist: SpectralDist) -> float:
    """Kolmogorov-Smirnov distance between a sample set and the law.

    Atoms enter the reference CDF as exact jumps at 0 and 1; the
    empirical CDF uses the right-continuous convention, and both
    one-sided limits are examined at every candidate point.
    """
    x = np.sort(np.asarray(samples, dtype=float).ravel())
    if x.size == 0:
        raise ValueError("esd_vs_density: empty sample set")
    n = x.size
    atoms = []
    if dist.atom_at_zero > 0.0:
        atoms.append(0.0)
    if dist.atom_at_one > 0.0:
        atoms.append(1.0)
    cand = np.unique(np.concatenate([x, np.asarray(atoms)])) if atoms else x
    f_right = np.atleast_1d(cdf(dist, cand))
    jumps = np.zeros_like(cand)
    if dist.atom_at_zero > 0.0:
        jumps[cand == 0.0] = dist.atom_at_zero
    if dist.atom_at_one > 0.0:
        jumps[cand == 1.0] = dist.atom_at_one
    f_left = f_right - jumps
    e_right = np.searchsorted(x, cand, side="right") / n
    e_left = np.searchsorted(x, cand, side="left") / n
    return float(
        max(np.max(np.abs(e_right - f_right)), np.max(np.abs(e_left - f_left)))
    )


def table_csv(dist: SpectralDist, grid) -> str:
    """CSV table (x, pdf, cdf) on a caller-supplied grid."""
    g = np.asarray(grid, dtype=float).ravel()
    if g.size == 0:
        raise ValueError("table_csv: empty grid")
    pdf = np.atleast_1d(density(dist, g))
    cdfv = np.atleast_1d(cdf(dist, g))
    params = {
        SpectralKind.MP: lambda: f"c={dist.c:.12g} sigma2={dist.sigma2:.12g}",
        SpectralKind.MCKAY: lambda: (
            f"a_minus={dist.a_minus:.12g} a_plus={dist.a_plus:.12g}"
        ),
        SpectralKind.CC: lambda: (
            f"u_prime={dist.u_prime:.12g} v_prime={dist.v_prime:.12g} "
            f"atom0={dist.atom_at_zero:.12g} atom1={dist.atom_at_one:.12g}"
        ),
    }[dist.kind]()
    buf = io.StringIO()
    buf.write(
        "# betadet spectral table schema v1: x,pdf,cdf\n"
        f"# kind={dist.kind.value} {params}\n"
    )
    buf.write("x,pdf,cdf\n")
    for xi, pi, fi in zip(g, pdf, cdfv):
        buf.write(f"{xi:.12g},{pi:.17g},{fi:.17g}\n")
    return buf.getvalue()
