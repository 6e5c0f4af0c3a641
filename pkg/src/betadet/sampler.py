"""Exact sampling of the determinant processes.

Each ensemble's log-determinant is a sum of independent log-Gamma or
log-Beta factors; paths are sampled directly from those factor laws,
never through a dense matrix.  Increments are generated in log space so
tiny shape parameters (small beta) cannot underflow to -inf.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass

import numpy as np

from .entropy import Ensemble, EnsembleParams

_PATH_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class RngStream:
    """Name of a deterministic random sequence: (seed, stream) -> bits.

    Counter-based (Philox) underneath, so streams are independent and
    cheap to create; every operation consuming an RngStream reads the
    sequence from its start, which is what makes samplers pure.
    """

    seed: int
    stream: int = 0
    algorithm: str = "philox4x64"

    def __post_init__(self) -> None:
        if self.algorithm != "philox4x64":
            raise ValueError("RngStream: unsupported algorithm")
        if not (0 <= self.seed < 2**64) or not (0 <= self.stream < 2**64):
            raise ValueError("RngStream: seed and stream must fit in 64 bits")

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(key=[self.seed, self.stream]))


# Below this shape, log-Gamma draws go through the boost representation
# log X = log G + log(U)/a with G ~ Gamma(a+1): exact in law, immune to
# the underflow of a direct Gamma draw.
_SMALL_SHAPE = 0.1


def _log_gamma_draws(gen: np.random.Generator, shapes: np.ndarray, rate: float) -> np.ndarray:
    shapes = np.asarray(shapes, dtype=float)
    out = np.empty_like(shapes)
    big = shapes >= _SMALL_SHAPE
    if big.any():
        out[big] = np.log(gen.gamma(shapes[big]))
    small = ~big
    if small.any():
        g = gen.gamma(shapes[small] + 1.0)
        u = gen.random(int(small.sum()))
        out[small] = np.log(g) + np.log(u) / shapes[small]
    return out - math.log(rate)


def _log_beta_draws(gen: np.random.Generator, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # log of gamma(a) / (gamma(a) + gamma(b)); always <= 0 in floating point
    la = _log_gamma_draws(gen, a, 1.0)
    lb = _log_gamma_draws(gen, b, 1.0)
    return la - np.logaddexp(la, lb)


def sample_gamma(shape: float, rate: float, rng: RngStream, size: int | None = None):
    """Gamma(shape, rate) draws, rate parameterization (mean shape/rate)."""
    if shape <= 0.0 or rate <= 0.0:
        raise ValueError("sample_gamma: shape and rate must be > 0")
    gen = rng.generator()
    n = 1 if size is None else int(size)
    draws = np.exp(_log_gamma_draws(gen, np.full(n, float(shape)), float(rate)))
    return float(draws[0]) if size is None else draws


def sample_beta(a: float, b: float, rng: RngStream, size: int | None = None):
    """Beta(a, b) draws built as gamma(a) / (gamma(a) + gamma(b))."""
    if a <= 0.0 or b <= 0.0:
        raise ValueError("sample_beta: parameters must be > 0")
    gen = rng.generator()
    n = 1 if size is None else int(size)
    draws = np.exp(_log_beta_draws(gen, np.full(n, float(a)), np.full(n, float(b))))
    # extreme parameter ratios put draws within half an ulp of the
    # endpoints; keep the advertised open interval
    draws = np.clip(draws, 5e-324, np.nextafter(1.0, 0.0))
    return float(draws[0]) if size is None else draws


@dataclass(frozen=True, eq=False)
class DetProcessPath:
    """One realization of the cumulative log-determinant process.

    ``raw_cumlog[p-1]`` holds the unnormalized running sum of log factors
    up to index p; ``cumlog`` applies the per-index normalization
    (nonzero only for directly sampled Laguerre paths, where each factor
    is divided by beta*n).  Storing the raw sum keeps both the
    normalized process and the un-normalized coupling identities exact.
    """

    params: EnsembleParams
    indices: np.ndarray
    raw_cumlog: np.ndarray
    seed: int
    stream: int = 0
    norm_per_index: float = 0.0

    def __post_init__(self) -> None:
        if len(self.indices) != len(self.raw_cumlog):
            raise ValueError("DetProcessPath: index/value length mismatch")
        if not np.all(np.isfinite(self.raw_cumlog)):
            raise ValueError("DetProcessPath: increments must be finite")
        if self.params.kind in (Ensemble.GRAM, Ensemble.JACOBI):
            if np.any(self.cumlog > 0.0):
                raise ValueError(
                    "DetProcessPath: Gram/Jacobi cumulative log-determinant "
                    "must be <= 0 (Hadamard / Beta-factor bound)"
                )

    @property
    def cumlog(self) -> np.ndarray:
        if self.norm_per_index == 0.0:
            return self.raw_cumlog
        return self.raw_cumlog - self.indices * self.norm_per_index

    @property
    def times(self) -> np.ndarray:
        return self.indices / self.params.n

    def increments(self) -> np.ndarray:
        return np.diff(self.cumlog, prepend=0.0)

    def value_at(self, p: int) -> float:
        if not 1 <= p <= len(self.indices):
            raise ValueError("value_at: index out of range")
        return float(self.cumlog[p - 1])

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(
            f"# betadet path schema v{_PATH_SCHEMA_VERSION}: index,time,cumlog\n"
            f"# ensemble={self.params.kind.value} beta={self.params.beta} "
            f"n={self.params.n} tau1={self.params.tau1} tau2={self.params.tau2} "
            f"seed={self.seed} stream={self.stream}\n"
        )
        buf.write("index,time,cumlog\n")
        cum = self.cumlog
        for i, idx in enumerate(self.indices):
            buf.write(f"{int(idx)},{idx / self.params.n:.12g},{cum[i]:.17g}\n")
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "schema_version": _PATH_SCHEMA_VERSION,
            "params": {
                "kind": self.params.kind.value,
                "beta": self.params.beta,
                "n": self.params.n,
                "tau1": self.params.tau1,
                "tau2": self.params.tau2,
            },
            "seed": self.seed,
            "stream": self.stream,
            "indices": [int(i) for i in self.indices],
            "cumlog": [float(v) for v in self.cumlog],
        }

    @staticmethod
    def from_json(payload: dict) -> "DetProcessPath":
        p = payload["params"]
        params = EnsembleParams(
            Ensemble(p["kind"]), p["beta"], p["n"], p.get("tau1", 1.0), p.get("tau2", 1.0)
        )
        return DetProcessPath(
            params=params,
            indices=np.asarray(payload["indices"], dtype=np.int64),
            raw_cumlog=np.asarray(payload["cumlog"], dtype=float),
            seed=int(payload["seed"]),
            stream=int(payload.get("stream", 0)),
            norm_per_index=0.0,
        )


def _factor_log_increments(params: EnsembleParams, gen: np.random.Generator) -> np.ndarray:
    """Raw per-index log factors of the determinant decomposition."""
    bh = params.beta_half
    n = params.n
    kind = params.kind
    if kind is Ensemble.LAGUERRE:
        shapes = bh * np.arange(n, 0, -1, dtype=float)
        return _log_gamma_draws(gen, shapes, 0.5)
    if kind is Ensemble.GRAM:
        j = np.arange(2, n + 1, dtype=float)
        inc = np.zeros(n)
        if n > 1:
            inc[1:] = _log_beta_draws(gen, bh * (n - j + 1.0), bh * (j - 1.0))
        return inc
    if kind is Ensemble.JACOBI:
        n1, n2 = params.n1, params.n2
        j = np.arange(1, n1 + 1, dtype=float)
        return _log_beta_draws(gen, bh * (n1 - j + 1.0), np.full(n1, bh * n2))
    # AuxS
    shapes = np.full(n, bh * n)
    return _log_gamma_draws(gen, shapes, bh * n)


def sample_det_process(params: EnsembleParams, rng: RngStream) -> DetProcessPath:
    """Draw one full path of the determinant process for ``params``."""
    gen = rng.generator()
    inc = _factor_log_increments(params, gen)
    p_max = params.index_count
    norm = math.log(params.beta * params.n) if params.kind is Ensemble.LAGUERRE else 0.0
    return DetProcessPath(
        params=params,
        indices=np.arange(1, p_max + 1, dtype=np.int64),
        raw_cumlog=np.cumsum(inc),
        seed=rng.seed,
        stream=rng.stream,
        norm_per_index=norm,
    )


def sample_cumlog_matrix(
    params: EnsembleParams, n_paths: int, seed: int, start_stream: int = 0
) -> np.ndarray:
    """Normalized cumlog rows for n_paths independent paths (one RNG
    stream per path, so the result is worker-count independent)."""
    p_max = params.index_count
    out = np.empty((n_paths, p_max))
    for i in range(n_paths):
        out[i] = sample_det_process(params, RngStream(seed, start_stream + i)).cumlog
    return out


def couple_laguerre_from_gram(gram: DetProcessPath, aux: DetProcessPath) -> DetProcessPath:
    """Pathwise Gram + AuxS sum; equal in law to the normalized Laguerre
    path when the two inputs are independent."""
    if gram.params.kind is not Ensemble.GRAM or aux.params.kind is not Ensemble.AUX_S:
        raise ValueError("couple_laguerre_from_gram: expected (Gram, AuxS) paths")
    if gram.params.beta != aux.params.beta or gram.params.n != aux.params.n:
        raise ValueError("couple_laguerre_from_gram: (beta, n) mismatch")
    lag_params = EnsembleParams(Ensemble.LAGUERRE, gram.params.beta, gram.params.n)
    # both inputs are unnormalized views, so the sum is already the
    # normalized Laguerre process: store it with a zero view constant
    return DetProcessPath(
        params=lag_params,
        indices=gram.indices.copy(),
        raw_cumlog=gram.cumlog + aux.cumlog,
        seed=gram.seed,
        stream=gram.stream,
        norm_per_index=0.0,
    )


def couple_jacobi_from_laguerre(
    lag_n1: DetProcessPath,
    jac_target: EnsembleParams,
    lag_n1n2_aux: DetProcessPath,
) -> DetProcessPath:
    """Jacobi path recovered from a beta-gamma coupled Laguerre pair.

    Index by index, cumlog is lag_n1 - lag_aux + r log(n1/(n1+n2)) in
    the normalized bookkeeping (the raw sums subtract with no correction
    at all).  The result carries the Jacobi law only when the inputs are
    the jointly constructed pair of sample_coupled_laguerre_pair: the
    factor-law identity Beta(a,b) * Gamma(a+b) = Gamma(a) couples the
    two Laguerre processes through shared Gamma draws, and subtracting
    two *independent* Laguerre paths would add their variances instead
    of canceling the shared part.
    """
    if jac_target.kind is not Ensemble.JACOBI:
        raise ValueError("couple_jacobi_from_laguerre: target must be Jacobi")
    n1, n2 = jac_target.n1, jac_target.n2
    if lag_n1.params.kind is not Ensemble.LAGUERRE or lag_n1.params.n != n1:
        raise ValueError("couple_jacobi_from_laguerre: first path must be Laguerre(n1)")
    if (
        lag_n1n2_aux.params.kind is not Ensemble.LAGUERRE
        or lag_n1n2_aux.params.n != n1 + n2
    ):
        raise ValueError(
            "couple_jacobi_from_laguerre: auxiliary path must be Laguerre(n1+n2)"
        )
    if lag_n1.params.beta != jac_target.beta or lag_n1n2_aux.params.beta != jac_target.beta:
        raise ValueError("couple_jacobi_from_laguerre: beta mismatch")
    corr = math.log(n1 / (n1 + n2))
    inc = (
        np.diff(lag_n1.cumlog, prepend=0.0)
        - np.diff(lag_n1n2_aux.cumlog[:n1], prepend=0.0)
        + corr
    )
    # each true increment is the log of a Beta factor, <= 0 with
    # probability one; the reconstruction above can leave a +1ulp
    # residue when a factor sits at the law's upper boundary
    inc = np.minimum(inc, 0.0)
    return DetProcessPath(
        params=jac_target,
        indices=np.arange(1, n1 + 1, dtype=np.int64),
        raw_cumlog=np.cumsum(inc),
        seed=lag_n1.seed,
        stream=lag_n1.stream,
        norm_per_index=0.0,
    )


def sample_coupled_laguerre_pair(
    jac_target: EnsembleParams, rng: RngStream
) -> tuple[DetProcessPath, DetProcessPath]:
    """Laguerre(n1) and Laguerre(n1+n2) paths coupled through shared
    Gamma draws, so their difference is an exact Jacobi path.

    For each index j <= n1, with a_j = beta'(n1-j+1) and b = beta' n2,
    the n1 factor is 2 gamma(a_j) and the n1+n2 factor is
    2 (gamma(a_j) + gamma(b)); indices beyond n1 of the long path are
    filled with fresh independent factors, so both marginals are genuine
    Laguerre processes.
    """
    if jac_target.kind is not Ensemble.JACOBI:
        raise ValueError("sample_coupled_laguerre_pair: target must be Jacobi")
    beta, bh = jac_target.beta, jac_target.beta_half
    n1, n2 = jac_target.n1, jac_target.n2
    gen = rng.generator()
    j = np.arange(1, n1 + 1, dtype=float)
    la = _log_gamma_draws(gen, bh * (n1 - j + 1.0), 1.0)
    lb = _log_gamma_draws(gen, np.full(n1, bh * n2), 1.0)
    log2 = math.log(2.0)
    inc_short = la + log2
    inc_long_head = np.logaddexp(la, lb) + log2
    jtail = np.arange(n1 + 1, n1 + n2 + 1, dtype=float)
    inc_long_tail = _log_gamma_draws(gen, bh * (n1 + n2 - jtail + 1.0), 0.5)

    short = DetProcessPath(
        params=EnsembleParams(Ensemble.LAGUERRE, beta, n1),
        indices=np.arange(1, n1 + 1, dtype=np.int64),
        raw_cumlog=np.cumsum(inc_short),
        seed=rng.seed,
        stream=rng.stream,
        norm_per_index=math.log(beta * n1),
    )
    long = DetProcessPath(
        params=EnsembleParams(Ensemble.LAGUERRE, beta, n1 + n2),
        indices=np.arange(1, n1 + n2 + 1, dtype=np.int64),
        raw_cumlog=np.cumsum(np.concatenate([inc_long_head, inc_long_tail])),
        seed=rng.seed,
        stream=rng.stream,
        norm_per_index=math.log(beta * (n1 + n2)),
    )
    return short, long


def sample_bidiagonal_laguerre(
    n: int, r: int, beta: float, rng: RngStream
) -> tuple[np.ndarray, np.ndarray]:
    """Bidiagonal model of the beta-Laguerre ensemble: returns the
    diagonal (length r) and subdiagonal (length r-1) of the factor B."""
    if not 1 <= r <= n:
        raise ValueError("sample_bidiagonal_laguerre: need 1 <= r <= n")
    if beta <= 0.0:
        raise ValueError("sample_bidiagonal_laguerre: beta must be > 0")
    bh = 0.5 * beta
    gen = rng.generator()
    i = np.arange(1, r + 1, dtype=float)
    diag = np.sqrt(np.exp(_log_gamma_draws(gen, bh * (n - i + 1.0), 0.5)))
    isub = np.arange(2, r + 1, dtype=float)
    subdiag = np.sqrt(np.exp(_log_gamma_draws(gen, bh * (r - isub + 1.0), 0.5)))
    return diag, subdiag


def write_path(path: DetProcessPath, destination, fmt: str = "csv") -> None:
    """Write a path to a file object or filesystem path in csv or json."""
    if fmt not in ("csv", "json"):
        raise ValueError("write_path: format must be csv or json")
    payload = path.to_csv() if fmt == "csv" else json.dumps(path.to_json(), indent=1)
    if hasattr(destination, "write"):
        destination.write(payload)
    else:
        with open(destination, "w", encoding="utf-8") as fh:
            fh.write(payload)
