"""Command-line front end: samplers, moment reports, rate sweeps,
spectral tables, and the verification suite, as CSV or JSON.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3
numeric domain error.  Every output carries a config header (seed
included) that reproduces the file bit-exactly; the worker count is
deliberately absent from it because results never depend on it.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import verify as verify_suite
from .entropy import Ensemble, EnsembleParams
from .ldp import marginal_rate
from .moments import MomentReport, moment_report
from .sampler import RngStream, sample_det_process
from .spectral import (
    SpectralDist,
    cc_moments,
    cdf,
    density,
    log_energy,
    mckay_log_moment,
    mp_log_moment,
    table_csv,
)

__all__ = ["RunConfig", "main", "cmd_sample", "cmd_moments", "cmd_rate", "cmd_spectral", "cmd_verify"]

_ENSEMBLE_CHOICES = ("gram", "laguerre", "jacobi", "auxs")


@dataclasses.dataclass(frozen=True)
class RunConfig:
    """Resolved invocation: one subcommand plus every knob it reads.

    Defaults: ensemble gram, beta 2, n 100, tau1 = tau2 = 1, T 0.5,
    xi grid [-T - 0.2, -0.01] with 25 steps, 10 paths, seed 0, CSV to
    stdout.  The worker count comes from BETADET_THREADS (default 1)
    and never changes any emitted value, only wall time.
    """

    subcommand: str
    ensemble: str = "gram"
    beta: float = 2.0
    n: int = 100
    tau1: float = 1.0
    tau2: float = 1.0
    t: float | None = None
    T: float = 0.5
    xi_min: float | None = None
    xi_max: float | None = None
    xi_steps: int = 25
    paths: int = 10
    seed: int = 0
    out: str | None = None
    format: str = "csv"
    only: tuple[str, ...] = ()
    threads: int = 1

    def params(self) -> EnsembleParams:
        return EnsembleParams(
            Ensemble(self.ensemble), self.beta, self.n, self.tau1, self.tau2
        )

    def header(self) -> str:
        # every field that affects emitted bytes, in one stable line
        keys = (
            "subcommand", "ensemble", "beta", "n", "tau1", "tau2",
            "t", "T", "xi_min", "xi_max", "xi_steps", "paths", "seed", "format",
        )
        parts = []
        for k in keys:
            v = getattr(self, k)
            parts.append(f"{k}={'none' if v is None else v}")
        return " ".join(parts)

    def to_dict(self) -> dict:
        out = dataclasses.asdict(self)
        out.pop("threads")
        out.pop("out")
        out["only"] = list(out["only"])
        return out


def _emit(config: RunConfig, text: str) -> None:
    if config.out:
        with open(config.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fmt(v: float) -> str:
    return repr(float(v))


# ---------------------------------------------------------------- sample


def _sample_chunk(args: tuple) -> list:
    kind, beta, n, tau1, tau2, seed, lo, hi = args
    params = EnsembleParams(Ensemble(kind), beta, n, tau1, tau2)
    return [(i, sample_det_process(params, RngStream(seed, i))) for i in range(lo, hi)]


def _sample_paths(params: EnsembleParams, config: RunConfig) -> list:
    """One path per RNG stream, returned in stream order regardless of
    how many workers produced them."""
    n_paths, seed = config.paths, config.seed
    if config.threads <= 1 or n_paths < 2 * config.threads:
        return [
            (i, sample_det_process(params, RngStream(seed, i)))
            for i in range(n_paths)
        ]
    chunk = math.ceil(n_paths / config.threads)
    jobs = [
        (
            params.kind.value, params.beta, params.n, params.tau1, params.tau2,
            seed, lo, min(lo + chunk, n_paths),
        )
        for lo in range(0, n_paths, chunk)
    ]
    out: list = []
    with ProcessPoolExecutor(max_workers=config.threads) as pool:
        for part in pool.map(_sample_chunk, jobs):
            out.extend(part)
    out.sort(key=lambda item: item[0])
    return out


def cmd_sample(config: RunConfig) -> int:
    if config.paths < 1:
        raise ValueError("paths must be >= 1")
    params = config.params()
    pairs = _sample_paths(params, config)
    if config.format == "json":
        payload = {
            "schema": "betadet-sample-v1",
            "config": config.to_dict(),
            "paths": [path.to_json() for _, path in pairs],
        }
        _emit(config, json.dumps(payload, indent=2) + "\n")
        return 0
    buf = io.StringIO()
    buf.write("# betadet sample schema v1: path,index,time,cumlog\n")
    buf.write(f"# config: {config.header()}\n")
    buf.write("path,index,time,cumlog\n")
    n = params.n
    for i, path in pairs:
        for idx, v in zip(path.indices, path.cumlog):
            buf.write(f"{i},{idx},{_fmt(idx / n)},{_fmt(v)}\n")
    _emit(config, buf.getvalue())
    return 0


# --------------------------------------------------------------- moments


def cmd_moments(config: RunConfig) -> int:
    params = config.params()
    if config.t is not None:
        p = math.floor(params.n * config.t)
        grid = [p]
    else:
        # interior indices only: the asymptotics need 0 < p/n < horizon
        top = params.index_count - 1
        if top < 1:
            raise ValueError("n too small for a moments sweep")
        grid = sorted(set(np.linspace(1, top, min(25, top), dtype=int).tolist()))
    reports = [moment_report(params, int(p)) for p in grid]
    if config.format == "json":
        payload = {
            "schema": "betadet-moments-v1",
            "config": config.to_dict(),
            "reports": [r.to_json() for r in reports],
        }
        _emit(config, json.dumps(payload, indent=2) + "\n")
        return 0
    buf = io.StringIO()
    buf.write(f"# betadet moments schema v1: {MomentReport.csv_header()}\n")
    buf.write(f"# config: {config.header()}\n")
    buf.write(MomentReport.csv_header() + "\n")
    for r in reports:
        buf.write(r.csv_row() + "\n")
    _emit(config, buf.getvalue())
    return 0


# ------------------------------------------------------------------ rate


def cmd_rate(config: RunConfig) -> int:
    params = config.params()
    T = config.T
    xi_lo = -T - 0.2 if config.xi_min is None else config.xi_min
    xi_hi = -0.01 if config.xi_max is None else config.xi_max
    if config.xi_steps < 1:
        raise ValueError("xi-steps must be >= 1")
    if config.xi_steps == 1:
        xis = [xi_lo]
    else:
        xis = np.linspace(xi_lo, xi_hi, config.xi_steps).tolist()
    config = dataclasses.replace(config, xi_min=xi_lo, xi_max=xi_hi)
    results = [marginal_rate(params, T, float(x), cells=16) for x in xis]
    if config.format == "json":
        payload = {
            "schema": "betadet-rate-v1",
            "config": config.to_dict(),
            "results": [r.to_dict() for r in results],
        }
        _emit(config, json.dumps(payload, indent=2) + "\n")
        return 0
    buf = io.StringIO()
    buf.write("# betadet rate schema v1: xi,theta,rate,branch,path_json\n")
    buf.write(f"# config: {config.header()}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["xi", "theta", "rate", "branch", "path_json"])
    for r in results:
        d = r.to_dict()
        theta = "" if r.theta is None else _fmt(r.theta)
        rate = "inf" if not math.isfinite(r.rate) else _fmt(r.rate)
        path_json = json.dumps(d["path"], separators=(",", ":"))
        writer.writerow([_fmt(r.xi), theta, rate, r.branch.value, path_json])
    _emit(config, buf.getvalue())
    return 0


# -------------------------------------------------------------- spectral


class _UsageError(Exception):
    pass


def cmd_spectral(config: RunConfig) -> int:
    T = config.T
    if config.ensemble in ("gram", "laguerre"):
        dist = SpectralDist.mp(T, 1.0)
        notes = {
            "log_moment_times_ratio": mp_log_moment(T),
            "log_energy": log_energy(dist),
        }
    elif config.ensemble == "jacobi":
        u_prime, v_prime = config.tau1 / T, config.tau2 / T
        dist = SpectralDist.cc(u_prime, v_prime)
        mom = cc_moments(u_prime, v_prime)
        notes = {
            "mean": mom.mean,
            "variance": mom.variance,
            "situation": mom.situation,
            "arc_log_moment": mckay_log_moment(dist.a_minus, dist.a_plus),
        }
    else:
        raise _UsageError("the auxiliary ensemble has no companion spectral law")
    lo, hi = dist.support
    grid = np.linspace(lo, hi, 1024)
    if config.format == "json":
        payload = {
            "schema": "betadet-spectral-v1",
            "config": config.to_dict(),
            "kind": dist.kind.value,
            "support": [lo, hi],
            "atom_at_zero": dist.atom_at_zero,
            "atom_at_one": dist.atom_at_one,
            "notes": notes,
            "x": grid.tolist(),
            "pdf": np.atleast_1d(density(dist, grid)).tolist(),
            "cdf": np.atleast_1d(cdf(dist, grid)).tolist(),
        }
        _emit(config, json.dumps(payload, indent=2) + "\n")
        return 0
    table = table_csv(dist, grid)
    head, body = table.split("\n", 1)
    note_line = " ".join(f"{k}={v}" for k, v in notes.items())
    text = f"{head}\n# config: {config.header()}\n# {note_line}\n{body}"
    _emit(config, text)
    return 0


# ---------------------------------------------------------------- verify


def cmd_verify(config: RunConfig) -> int:
    results = verify_suite.run(only=config.only or None)
    if not results:
        print("error: --only matched no criteria", file=sys.stderr)
        return 2
    for r in results:
        print(r.line(), file=sys.stderr)
    payload = json.loads(verify_suite.report_json(results))
    payload["config"] = config.to_dict()
    report = json.dumps(payload, indent=2)
    if config.out:
        with open(config.out, "w", encoding="utf-8") as fh:
            fh.write(report + "\n")
    else:
        sys.stdout.write(report + "\n")
    return 0 if all(r.passed for r in results) else 1


# ------------------------------------------------------------- arg wiring


def _add_common(sub: argparse.ArgumentParser, *names: str) -> None:
    if "ensemble" in names:
        sub.add_argument("--ensemble", choices=_ENSEMBLE_CHOICES, default="gram")
    if "beta" in names:
        sub.add_argument("--beta", type=float, default=2.0)
    if "n" in names:
        sub.add_argument("--n", type=int, default=100)
    if "tau" in names:
        sub.add_argument("--tau1", type=float, default=1.0)
        sub.add_argument("--tau2", type=float, default=1.0)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--out", default=None)
    sub.add_argument("--format", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="betadet",
        description="Determinant processes of beta ensembles: sample, report, sweep, verify.",
    )
    subs = parser.add_subparsers(dest="subcommand", required=True)

    p = subs.add_parser("sample", help="draw determinant-process paths")
    _add_common(p, "ensemble", "beta", "n", "tau")
    p.add_argument("--paths", type=int, default=10)
    p.set_defaults(func=cmd_sample)

    p = subs.add_parser("moments", help="exact vs asymptotic moment report")
    _add_common(p, "ensemble", "beta", "n", "tau")
    p.add_argument("--t", type=float, default=None)
    p.set_defaults(func=cmd_moments)

    p = subs.add_parser("rate", help="marginal rate-function sweep")
    _add_common(p, "ensemble", "tau")
    p.add_argument("--T", type=float, default=0.5)
    p.add_argument("--xi-min", dest="xi_min", type=float, default=None)
    p.add_argument("--xi-max", dest="xi_max", type=float, default=None)
    p.add_argument("--xi-steps", dest="xi_steps", type=int, default=25)
    p.set_defaults(func=cmd_rate)

    p = subs.add_parser("spectral", help="limiting spectral density table")
    _add_common(p, "ensemble", "tau")
    p.add_argument("--T", type=float, default=0.5)
    p.set_defaults(func=cmd_spectral)

    p = subs.add_parser("verify", help="run the acceptance criteria suite")
    p.add_argument("--only", action="append", default=[])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.set_defaults(func=cmd_verify)
    return parser


def _config_from(ns: argparse.Namespace) -> RunConfig:
    threads = int(os.environ.get("BETADET_THREADS", "1") or "1")
    fields = {f.name for f in dataclasses.fields(RunConfig)}
    kwargs = {k: v for k, v in vars(ns).items() if k in fields}
    only = kwargs.get("only")
    if only is not None:
        tokens: list[str] = []
        for item in only:
            tokens.extend(tok for tok in item.split(",") if tok)
        kwargs["only"] = tuple(tokens)
    return RunConfig(threads=max(1, threads), **kwargs)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        config = _config_from(ns)
        return int(ns.func(config))
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ZeroDivisionError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
