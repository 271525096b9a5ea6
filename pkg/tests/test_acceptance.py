"""Acceptance criteria 1-9, one test each.

Every test prints a single ``PASS|FAIL criterion N: ...`` line (also repeated in
the terminal summary) and then asserts. Criteria 7 and 8 run the Monte Carlo
experiments and take most of the suite's half hour.
"""

import itertools
import math
import time

import numpy as np

import conftest
from chains import enumerate_chains, odd_cells_batch
from test_cli import _outputs
from topocluster.decoder import build_match_graph, min_weight_matching
from topocluster.experiment import TrialConfig, estimate_threshold, run_memory_trials
from topocluster.lattice import Boundaries, Parity, build_lattice
from topocluster.logical.verify import (
    verify_cell_stabilizers,
    verify_cnot,
    verify_even_parity,
    verify_identity_gate,
    verify_injection,
    verify_primal_cnot,
)
from topocluster.matching import brute_force_min_weight
from topocluster.noise import ErrorModel, FlipPattern
from topocluster.syndrome import Syndrome


def report(n: int, passed: bool, detail: str) -> None:
    line = f"{'PASS' if passed else 'FAIL'} criterion {n}: {detail}"
    conftest.ACCEPTANCE[n] = line
    print(line)
    assert passed, line


def failed_checks(rep) -> str:
    bad = [c.name for c in rep.checks if not c.passed]
    return f" failing={bad[:3]}" if bad else ""


def test_criterion_1_cell_stabilizer_identity():
    worst, ok, count = 0.0, True, 0
    for ext in itertools.product(range(1, 5), repeat=3):
        rep = verify_cell_stabilizers(ext)
        ok &= rep.passed
        worst = max(worst, rep.seconds)
        count += 1
    report(1, ok and worst < 1.0, f"{count} lattices 1x1x1..4x4x4 symbolic +X^6 products, slowest {worst * 1e3:.1f} ms")


def test_criterion_2_even_parity():
    rep = verify_even_parity(runs=1000, seed=0)
    report(2, rep.passed, f"1000 seeded noiseless tableau runs, all six-face parities even{failed_checks(rep)}")


def test_criterion_3_chain_endpoints():
    expected_odd = {"bulk": 2, "one-exit": 1, "two-exit": 0}
    total, bad, kinds = 0, 0, {}
    for bound in (Parity.PRIMAL, Parity.DUAL):
        l = build_lattice((4, 4, 4), Boundaries.uniform(bound))
        for parity in Parity:
            chains = list(enumerate_chains(l, parity, 5))
            for (faces, expect, kind), got in zip(chains, odd_cells_batch(l, parity, chains)):
                total += 1
                kinds[kind] = kinds.get(kind, 0) + 1
                bad += got != expect or len(got) != expected_odd[kind]
    detail = ", ".join(f"{k}={v}" for k, v in sorted(kinds.items()))
    report(3, bad == 0 and total > 0, f"{total} chains of length 1-5 on 4x4x4 ({detail}), mismatches={bad}")


def _random_graph_cases(rng):
    while True:
        ext = tuple(int(v) for v in rng.integers(2, 6, size=3))
        bounds = Boundaries(*(Parity.PRIMAL if rng.random() < 0.5 else Parity.DUAL for _ in range(6)))
        l = build_lattice(ext, bounds)
        parity = Parity.PRIMAL if rng.random() < 0.5 else Parity.DUAL
        cells = [c.cell for c in l.checks(parity)]
        k = int(rng.integers(1, 11))
        pick = rng.choice(len(cells), size=min(k, len(cells)), replace=False)
        yield l, Syndrome(parity, {cells[i] for i in pick})


def test_criterion_4_decoder_optimality():
    rng = np.random.default_rng(2024)
    done = bad = biggest = 0
    for l, s in _random_graph_cases(rng):
        g = build_match_graph(l, s)
        if g.n > 20 or g.n % 2:  # odd only for unphysical syndromes on closed lattices
            continue
        bad += min_weight_matching(g).total_weight != brute_force_min_weight(g.n, g.edges)
        biggest = max(biggest, g.n)
        done += 1
        if done == 1000:
            break
    report(4, bad == 0, f"{done} random decoder graphs (up to {biggest} vertices) vs subset-DP optimum, mismatches={bad}")


def test_criterion_5_gate_mappings():
    reps = {
        "identity primal": verify_identity_gate(Parity.PRIMAL),
        "identity dual": verify_identity_gate(Parity.DUAL),
        "cnot braid": verify_cnot(branches="all"),
        "primal-primal cnot": verify_primal_cnot(),
    }
    rows = sum(len(r.rows) for r in reps.values())
    secs = sum(r.seconds for r in reps.values())
    bad = [k for k, r in reps.items() if not r.passed]
    report(5, not bad, f"identity and CNOT tables over all forced branches, {rows} rows in {secs:.0f} s, failing={bad}")


def test_criterion_6_injection():
    rep = verify_injection((0.0, math.pi / 2, math.pi / 3))
    dense = [c for c in rep.checks if c.name.startswith("theta=")]
    report(6, rep.passed and len(dense) == 12, f"theta in {{0, pi/2, pi/3}}: {len(dense)} dense checks at 1e-10{failed_checks(rep)}")


PHEN_PS = (0.02, 0.0225, 0.025, 0.0275, 0.03)
PHEN_SEEDS = (11, 23)
PHEN_TRIALS = 3000
SUB_TRIALS = 40000


def test_criterion_7_phenomenological_threshold():
    t0 = time.perf_counter()
    ests = []
    for seed in PHEN_SEEDS:
        cfg = TrialConfig(ErrorModel("phenomenological"), PHEN_PS, (3, 5, 7), PHEN_TRIALS, base_seed=seed, decode_dual=False)
        ests.append(estimate_threshold(run_memory_trials(cfg).points, bootstrap=200))
    crossed = all(e.crossing_found for e in ests)
    spread = abs(ests[0].p_th - ests[1].p_th) if crossed else math.inf
    p_th = float(np.mean([e.p_th for e in ests])) if crossed else None

    # below the crossing, failure rates must fall strictly with d at 3 sigma
    p_sub = round(0.6 * p_th, 4) if crossed else 0.012
    cfg = TrialConfig(ErrorModel("phenomenological"), (p_sub,), (3, 5, 7), SUB_TRIALS, base_seed=99, decode_dual=False)
    pts = sorted(run_memory_trials(cfg).points, key=lambda r: r.d)
    decreasing = True
    for a, b in zip(pts, pts[1:]):
        sigma = math.sqrt(a.rate * (1 - a.rate) / a.trials + b.rate * (1 - b.rate) / b.trials)
        decreasing &= a.rate - b.rate > 3 * sigma
    rates = ", ".join(f"d{r.d}={r.rate:.4f}" for r in pts)
    got = ", ".join(f"{e.p_th:.4%}" if e.p_th else "none" for e in ests)
    report(
        7,
        crossed and spread <= 0.003 and decreasing,
        f"p_th per seed {got}, spread {spread:.4%} (<= 0.3 pp); at p={p_sub} {rates}; "
        f"{time.perf_counter() - t0:.0f} s",
    )


CIRC_PS = (0.002, 0.003, 0.004, 0.005, 0.006)
REFERENCE_P_TH = 0.0075


def test_criterion_8_circuit_threshold():
    est = {}
    for mode in ("two_qubit", "single_pair"):
        cfg = TrialConfig(ErrorModel("circuit", cz_mode=mode), CIRC_PS, (3, 5, 7), 6000, base_seed=7, decode_dual=False)
        est[mode] = estimate_threshold(run_memory_trials(cfg).points, bootstrap=300)
    primary = est["two_qubit"]
    lo, hi = REFERENCE_P_TH / 2, REFERENCE_P_TH * 2
    ok = primary.crossing_found and lo <= primary.p_th <= hi
    parts = []
    for mode, e in est.items():
        if e.crossing_found:
            inside = "inside" if lo <= e.p_th <= hi else "outside"
            parts.append(f"{mode} p_th={e.p_th:.3%} CI=({e.ci[0]:.3%}, {e.ci[1]:.3%}) {inside}")
        else:
            parts.append(f"{mode} no crossing")
    report(8, ok, f"band [{lo:.3%}, {hi:.3%}] judged on two_qubit; " + "; ".join(parts))


def test_criterion_9_determinism(tmp_path):
    l = build_lattice((4, 4, 4))
    lat = tmp_path / "cube.json"
    lat.write_text(l.to_json())
    flips = tmp_path / "f.txt"
    flips.write_text(FlipPattern.from_coords(l, [(4, 3, 3), (3, 3, 4), (2, 2, 5)]).to_text(l))
    runs = {t: _outputs(tmp_path, t, lat, flips) for t in (1, 2, 4)}
    same = [name for name in runs[1] if runs[1][name] and runs[1][name] == runs[2][name] == runs[4][name]]
    report(9, len(same) == 4, f"verify/decode/simulate/threshold byte-identical across 1, 2, 4 threads: {same}")
