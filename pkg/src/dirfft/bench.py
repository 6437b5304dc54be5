"""Benchmark harness: timed setup/apply runs with verified error columns."""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass, replace

import numpy as np

from .evaluate import evaluate
from .geometry import Bean, Ellipse, build_geometry, discretize
from .kernels import HelmholtzKernel, OperatorKind
from .oracle import dense_evaluate_at, relative_error, sample_points
from .plan import build_plan, load_plan, save_plan

__all__ = ["RunConfig", "ResultRow", "make_density", "run_experiment", "run_sweep", "write_csv"]

CSV_HEADER = "mc,omega,n,Ts,Ta,e"

_OPERATORS = {
    "S": OperatorKind.SINGLE_LAYER,
    "D": OperatorKind.DOUBLE_LAYER,
    "Dp": OperatorKind.NORMAL_DERIV_SINGLE,
    "N": OperatorKind.NORMAL_DERIV_DOUBLE,
}


@dataclass(frozen=True)
class RunConfig:
    """One benchmark cell. Defaults follow the standard setting:
    p=8 points per wavelength, 4-wavelength leaves, m_freq=2, m_cheb=8."""

    shape: str = "ellipse"
    a: float = 1.0
    b: float = 0.5
    bean_scale: float | None = None
    bean_c1: float = 0.3
    bean_c2: float = 0.15
    q: int = 5
    p: int = 8
    m_leaf: int = 4
    m_freq: int = 2
    m_cheb: int = 8
    op: str = "S"
    density: str = "random"  # random | planewave | impulse
    seed: int = 0
    reps: int = 1
    verify: str = "sample"  # sample | full | off
    out: str | None = None
    dump_plan: str | None = None
    load_plan: str | None = None
    verbose: bool = False

    def validate(self) -> None:
        if self.shape not in ("ellipse", "bean"):
            raise ValueError(f"unknown shape {self.shape!r}; use 'ellipse' or 'bean'")
        if self.op not in _OPERATORS:
            raise ValueError(f"unknown operator {self.op!r}; use one of {sorted(_OPERATORS)}")
        if self.density not in ("random", "planewave", "impulse"):
            raise ValueError(f"unknown density {self.density!r}")
        if self.verify not in ("sample", "full", "off"):
            raise ValueError(f"unknown verify mode {self.verify!r}")
        if self.q < 1:
            raise ValueError("q must be >= 1")
        if self.reps < 1:
            raise ValueError("reps must be >= 1")

    def make_shape(self):
        if self.shape == "ellipse":
            return Ellipse(self.a, self.b)
        kwargs = {"c1": self.bean_c1, "c2": self.bean_c2}
        if self.bean_scale is not None:
            kwargs["scale"] = self.bean_scale
        return Bean(**kwargs)


@dataclass(frozen=True)
class ResultRow:
    """One CSV row: Chebyshev order, frequency, size, timings, error."""

    m_cheb: int
    omega: float
    n: int
    t_setup: float
    t_apply: float
    err: float

    def csv(self) -> str:
        return (
            f"{self.m_cheb},{self.omega:.6e},{self.n},"
            f"{self.t_setup:.6e},{self.t_apply:.6e},{self.err:.6e}"
        )


def make_density(disc, kind: str, seed: int) -> np.ndarray:
    """Test densities: complex Gaussian noise, a plane-wave trace, or a
    single unit impulse at a seed-chosen point."""
    rng = np.random.default_rng(seed)
    if kind == "random":
        return rng.standard_normal(disc.n) + 1j * rng.standard_normal(disc.n)
    if kind == "planewave":
        direction = np.array([1.0, 0.0])
        return np.exp(1j * disc.omega * disc.positions @ direction)
    f = np.zeros(disc.n, dtype=np.complex128)
    f[int(rng.integers(disc.n))] = 1.0
    return f


def _log(config: RunConfig, message: str) -> None:
    if config.verbose:
        print(message, file=sys.stderr)


def run_experiment(config: RunConfig) -> ResultRow:
    """One timed setup + apply + verification pass.

    Geometry construction is excluded from the reported setup time (it is
    reusable across operators and Chebyshev orders); T_s covers tree,
    classification, and factor computation, T_a one operator application.
    """
    config.validate()
    geom = build_geometry(config.make_shape())
    disc = discretize(geom, config.q, config.p)
    kernel = HelmholtzKernel(_OPERATORS[config.op], disc.omega)
    _log(config, f"shape={config.shape} L={geom.L:.6g} n={disc.n} omega={disc.omega:.6g}")

    clock = time.perf_counter
    if config.load_plan:
        t0 = clock()
        plan = load_plan(config.load_plan, disc)
        t_setup = clock() - t0
        _log(config, f"loaded plan from {config.load_plan}")
    else:
        t0 = clock()
        plan = build_plan(
            disc, kernel, m_cheb=config.m_cheb, m_freq=config.m_freq, m_leaf=config.m_leaf
        )
        t_setup = clock() - t0
    _log(
        config,
        f"|cover|={len(plan.cover)} pairs: dense={plan.n_dense} "
        f"both={len(plan.mod_both)} source-only={len(plan.mod_source)} "
        f"target-only={len(plan.mod_target)}  Ts={t_setup:.3f}s",
    )
    if config.dump_plan:
        save_plan(plan, config.dump_plan)
        _log(config, f"saved plan to {config.dump_plan}")

    f = make_density(disc, config.density, config.seed)
    t0 = clock()
    u = evaluate(plan, f)
    t_apply = clock() - t0

    if config.verify == "off":
        err = float("nan")
    elif config.verify == "full":
        exact = dense_evaluate_at(disc, kernel, f, np.arange(disc.n))
        err = relative_error(exact, u, sample=np.arange(disc.n)).relative_l2
    else:
        sample = sample_points(disc.n, seed=config.seed)
        exact = dense_evaluate_at(disc, kernel, f, sample)
        err = relative_error(exact, u[sample], sample=np.arange(len(sample))).relative_l2
    _log(config, f"Ta={t_apply:.3f}s e={err:.3e}")
    return ResultRow(
        m_cheb=config.m_cheb,
        omega=disc.omega,
        n=disc.n,
        t_setup=t_setup,
        t_apply=t_apply,
        err=err,
    )


def run_sweep(configs) -> tuple[list[ResultRow], list[tuple[RunConfig, Exception]]]:
    """Run a list of configs (each repeated config.reps times).

    Failures are recorded and the sweep continues; returns (rows, failures).
    """
    rows: list[ResultRow] = []
    failures: list[tuple[RunConfig, Exception]] = []
    for config in configs:
        for rep in range(config.reps):
            run = replace(config, seed=config.seed + rep)
            try:
                rows.append(run_experiment(run))
            except Exception as exc:  # keep sweeping, report at the end
                failures.append((run, exc))
                print(f"FAILED {run}: {exc}", file=sys.stderr)
    return rows, failures


def write_csv(rows, stream) -> None:
    stream.write(CSV_HEADER + "\n")
    for row in rows:
        stream.write(row.csv() + "\n")
