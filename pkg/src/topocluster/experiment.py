"""Monte Carlo memory experiments and threshold estimation."""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, asdict
from typing import Sequence

import numpy as np
from scipy.optimize import curve_fit
from scipy.stats import binomtest

from .decoder import decode_flips
from .lattice import Boundaries, Lattice, Parity, build_lattice
from .noise import ErrorModel, make_sampler
from .syndrome import syndrome_bits

CSV_HEADER = ("p", "d", "trials", "failures", "rate", "ci_lo", "ci_hi")

MEMORY_BOUNDARIES = Boundaries.from_mapping(
    {"x-": "primal", "x+": "primal", "y-": "dual", "y+": "dual", "z-": "dual", "z+": "dual"}
)


def memory_lattice(d: int, t: int | None = None) -> Lattice:
    """d x d x t block; a primal logical error is a primal chain from x- to x+."""
    return build_lattice((d, d, t or d), MEMORY_BOUNDARIES)


def membrane_qubits(l: Lattice) -> np.ndarray:
    """Primal face qubits on the plane x = 0, which every x- to x+ chain crosses an odd number of times."""
    mask = np.zeros(l.n_qubits, dtype=bool)
    for i, (x, y, z) in enumerate(l.qubits):
        if x == l.lo[0] and y % 2 == 1 and z % 2 == 1:
            mask[i] = True
    return mask


@dataclass(frozen=True)
class TrialConfig:
    model: ErrorModel
    ps: tuple[float, ...]
    ds: tuple[int, ...]
    trials: int
    base_seed: int = 0
    time_extent: int | None = None
    decode_dual: bool = True

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if list(self.ps) != sorted(self.ps):
            raise ValueError("p list must be sorted")
        object.__setattr__(self, "ps", tuple(float(p) for p in self.ps))
        object.__setattr__(self, "ds", tuple(int(d) for d in self.ds))


@dataclass
class PointResult:
    p: float
    d: int
    trials: int
    failures: int
    failures_primal: int
    failures_dual: int
    uncleared: int = 0
    seconds: float = field(default=0.0, compare=False)

    @property
    def rate(self) -> float:
        return self.failures / self.trials

    @property
    def ci(self) -> tuple[float, float]:
        return wilson_interval(self.failures, self.trials)


@dataclass
class MCResult:
    config: TrialConfig
    points: list[PointResult]

    def point(self, p: float, d: int) -> PointResult:
        for r in self.points:
            if r.d == d and math.isclose(r.p, p):
                return r
        raise KeyError((p, d))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in self.points:
            lo, hi = r.ci
            w.writerow([repr(r.p), r.d, r.trials, r.failures, f"{r.rate:.6g}", f"{lo:.6g}", f"{hi:.6g}"])
        return buf.getvalue()


def wilson_interval(k: int, n: int, confidence: float = 0.95) -> tuple[float, float]:
    ci = binomtest(k, n).proportion_ci(confidence_level=confidence, method="wilson")
    return float(ci.low), float(ci.high)


def trial_rng(base_seed: int, p_index: int, d: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(base_seed, spawn_key=(p_index, d, trial)))


def _run_chunk(args) -> tuple[int, int, int, int]:
    model, p_index, d, t_ext, start, stop, base_seed, decode_dual = args
    l = memory_lattice(d, t_ext)
    sample = make_sampler(l, model)
    membrane = membrane_qubits(l)
    fail = fail_p = fail_d = unclear = 0
    for trial in range(start, stop):
        rng = trial_rng(base_seed, p_index, d, trial)
        flips = sample(rng)
        corr = decode_flips(l, flips, Parity.PRIMAL)
        res = flips ^ corr
        if syndrome_bits(l, res, Parity.PRIMAL).any():
            unclear += 1
        bad_p = bool(np.count_nonzero(res & membrane) % 2)
        # no dual membrane can end on the x/z boundary mix of this block, so a
        # dual residual never acts on the encoded state; decoding it only
        # confirms the syndrome clears
        bad_d = False
        if decode_dual:
            corr_d = decode_flips(l, flips, Parity.DUAL)
            if syndrome_bits(l, flips ^ corr_d, Parity.DUAL).any():
                unclear += 1
        fail_p += bad_p
        fail_d += bad_d
        fail += bad_p or bad_d
    return fail, fail_p, fail_d, unclear


def run_memory_trials(cfg: TrialConfig, *, workers: int = 1, progress=None) -> MCResult:
    """Sample, decode and score ``cfg.trials`` memory runs at every (p, d).

    Every trial has its own seed derived from (base seed, p index, d, trial),
    so results do not depend on ``workers`` or on scheduling order.
    """
    points = []
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for d in cfg.ds:
            for pi, p in enumerate(cfg.ps):
                model = ErrorModel(cfg.model.kind, p, cfg.base_seed, cfg.model.cz_mode)
                t0 = time.perf_counter()
                if p == 0.0:
                    totals = (0, 0, 0, 0)
                else:
                    n_chunks = max(1, workers) * 4 if pool else 1
                    bounds = np.linspace(0, cfg.trials, n_chunks + 1).astype(int)
                    jobs = [
                        (model, pi, d, cfg.time_extent, int(a), int(b), cfg.base_seed, cfg.decode_dual)
                        for a, b in zip(bounds[:-1], bounds[1:])
                        if b > a
                    ]
                    parts = list(pool.map(_run_chunk, jobs)) if pool else [_run_chunk(j) for j in jobs]
                    totals = tuple(int(sum(v)) for v in zip(*parts))
                r = PointResult(p, d, cfg.trials, totals[0], totals[1], totals[2], totals[3])
                r.seconds = time.perf_counter() - t0
                points.append(r)
                if progress:
                    progress(r)
    finally:
        if pool:
            pool.shutdown()
    return MCResult(cfg, points)


# -- threshold estimation -----------------------------------------------------


@dataclass
class ThresholdEstimate:
    crossing_found: bool
    p_th: float | None = None
    ci: tuple[float, float] | None = None
    pairwise: dict[str, float | None] = field(default_factory=dict)
    p_th_fixed_nu: float | None = None
    p_th_free_nu: float | None = None
    nu_free: float | None = None
    message: str = ""

    def to_dict(self) -> dict:
        out = asdict(self)
        out["ci"] = list(self.ci) if self.ci else None
        return out


def _rows(points: Sequence[PointResult]):
    ps = np.array([r.p for r in points], dtype=float)
    ds = np.array([r.d for r in points], dtype=float)
    n = np.array([r.trials for r in points], dtype=float)
    k = np.array([r.failures for r in points], dtype=float)
    return ps, ds, n, k


def pairwise_crossing(pa, ra, pb, rb) -> float | None:
    """Lowest p where curve b (larger d) rises above curve a, by linear interpolation."""
    diff = np.asarray(rb, float) - np.asarray(ra, float)
    p = np.asarray(pa, float)
    for i in range(len(p) - 1):
        if diff[i] < 0 <= diff[i + 1] or diff[i] <= 0 < diff[i + 1]:
            if diff[i + 1] == diff[i]:
                return float(p[i])
            return float(p[i] - diff[i] * (p[i + 1] - p[i]) / (diff[i + 1] - diff[i]))
    return None


def _scaling(nu_fixed):
    if nu_fixed is not None:
        def f(X, pth, a, b, c):
            p, d = X
            x = (p - pth) * d ** (1.0 / nu_fixed)
            return a + b * x + c * x * x
    else:
        def f(X, pth, a, b, c, nu):
            p, d = X
            x = (p - pth) * d ** (1.0 / nu)
            return a + b * x + c * x * x
    return f


def _fit(ps, ds, rates, sigma, p0, nu_fixed):
    f = _scaling(nu_fixed)
    guess = [p0, float(np.mean(rates)), 1.0, 0.0] + ([] if nu_fixed is not None else [1.0])
    popt, _ = curve_fit(f, (ps, ds), rates, p0=guess, sigma=sigma, maxfev=20000)
    return popt


def estimate_threshold(
    points: Sequence[PointResult], *, bootstrap: int = 1000, seed: int = 0
) -> ThresholdEstimate:
    """Crossing point of the failure-rate curves of successive code sizes.

    Pairwise crossings locate the threshold; a joint fit of
    ``a + b x + c x^2`` with ``x = (p - p_th) d^(1/nu)`` refines it, with nu
    fixed at 1 (reported as the estimate) and free. The interval comes from a
    parametric bootstrap over the binomial trial counts.
    """
    by_d: dict[int, list[PointResult]] = {}
    for r in points:
        by_d.setdefault(r.d, []).append(r)
    sizes = sorted(by_d)
    est = ThresholdEstimate(crossing_found=False)
    if len(sizes) < 2:
        est.message = "need at least two sizes"
        return est
    crossings = []
    for a, b in zip(sizes, sizes[1:]):
        ra = sorted(by_d[a], key=lambda r: r.p)
        rb = {round(r.p, 12): r for r in by_d[b]}
        common = [r for r in ra if round(r.p, 12) in rb]
        x = pairwise_crossing(
            [r.p for r in common], [r.rate for r in common], [r.p for r in common],
            [rb[round(r.p, 12)].rate for r in common],
        )
        est.pairwise[f"{a}-{b}"] = x
        if x is not None:
            crossings.append(x)
    if not crossings:
        est.message = "failure-rate curves do not cross in the sampled range"
        return est
    est.crossing_found = True
    ps, ds, n, k = _rows(points)
    rates = k / n
    sigma = np.sqrt(np.maximum(rates * (1 - rates), 1.0 / n) / n)
    p0 = float(np.mean(crossings))
    try:
        est.p_th_fixed_nu = float(_fit(ps, ds, rates, sigma, p0, 1.0)[0])
    except (RuntimeError, ValueError):
        est.p_th_fixed_nu = None
    try:
        popt = _fit(ps, ds, rates, sigma, p0, None)
        est.p_th_free_nu, est.nu_free = float(popt[0]), float(popt[4])
    except (RuntimeError, ValueError):
        pass
    fit_ok = est.p_th_fixed_nu is not None and ps.min() <= est.p_th_fixed_nu <= ps.max()
    est.p_th = est.p_th_fixed_nu if fit_ok else p0
    rng = np.random.default_rng(seed)
    samples = []
    for _ in range(bootstrap):
        kb = rng.binomial(n.astype(np.int64), rates)
        rb = kb / n
        sb = np.sqrt(np.maximum(rb * (1 - rb), 1.0 / n) / n)
        try:
            val = float(_fit(ps, ds, rb, sb, est.p_th, 1.0)[0]) if fit_ok else _mean_crossing(by_d, sizes, ps, ds, rb)
        except (RuntimeError, ValueError):
            continue
        if val is not None and np.isfinite(val):
            samples.append(val)
    if samples:
        est.ci = (float(np.percentile(samples, 2.5)), float(np.percentile(samples, 97.5)))
    return est


def _mean_crossing(by_d, sizes, ps, ds, rates) -> float | None:
    xs = []
    for a, b in zip(sizes, sizes[1:]):
        ma, mb = ds == a, ds == b
        pa, ra = ps[ma], rates[ma]
        order = np.argsort(pa)
        pa, ra = pa[order], ra[order]
        rb_map = {round(p, 12): r for p, r in zip(ps[mb], rates[mb])}
        keep = [i for i, p in enumerate(pa) if round(p, 12) in rb_map]
        x = pairwise_crossing(pa[keep], ra[keep], pa[keep], [rb_map[round(pa[i], 12)] for i in keep])
        if x is not None:
            xs.append(x)
    return float(np.mean(xs)) if xs else None


def summary_json(result: MCResult, est: ThresholdEstimate) -> str:
    cfg = result.config
    doc = {
        "model": {
            "kind": cfg.model.kind.value,
            "cz_mode": cfg.model.cz_mode.value,
        },
        "base_seed": cfg.base_seed,
        "trials": cfg.trials,
        "ps": list(cfg.ps),
        "ds": list(cfg.ds),
        "p_th": est.p_th,
        "threshold": est.to_dict(),
        "points": [
            {
                "p": r.p,
                "d": r.d,
                "trials": r.trials,
                "failures": r.failures,
                "failures_primal": r.failures_primal,
                "failures_dual": r.failures_dual,
                "uncleared": r.uncleared,
            }
            for r in result.points
        ],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
