"""Command-line entry point: ``topocluster {verify,decode,simulate,threshold}``.

Data goes to stdout or to files, diagnostics to stderr. Exit codes: 0 on
success, 1 when a verification fails (or no threshold crossing is found with
``--require-crossing``), 2 on malformed input or I/O errors.

``TOPOCLUSTER_OUT_DIR`` and ``TOPOCLUSTER_THREADS`` supply defaults for
``--out`` and ``--threads``; explicit flags win over them, and both win over
values from a ``--config`` file.
"""

from __future__ import annotations

import argparse
import configparser
import logging
import os
import sys
from pathlib import Path

import numpy as np

from .decoder import decode
from .experiment import TrialConfig, estimate_threshold, run_memory_trials, summary_json
from .lattice import Lattice, LatticeError, Parity, lattice_from_json
from .noise import CZFaultMode, ErrorModel, FlipPattern, NoiseKind, make_sampler
from .syndrome import extract_syndrome

log = logging.getLogger("topocluster")

ENV_OUT = "TOPOCLUSTER_OUT_DIR"
ENV_THREADS = "TOPOCLUSTER_THREADS"

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    """Malformed input; maps to exit status 2."""


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _load_lattice(path: str) -> Lattice:
    try:
        return lattice_from_json(_read(path))
    except LatticeError as exc:
        raise InputError(f"{path}: {exc}") from None


def _out_dir(args, default: str | None = None) -> Path | None:
    raw = args.out or os.environ.get(ENV_OUT) or default
    if not raw:
        return None
    out = Path(raw)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise InputError(f"cannot create output directory {out}: {exc.strerror}") from None
    return out


def _threads(args, fallback: int = 1) -> int:
    if args.threads is not None:
        return args.threads
    env = os.environ.get(ENV_THREADS)
    if env:
        try:
            n = int(env)
        except ValueError:
            raise InputError(f"{ENV_THREADS} must be an integer, got {env!r}") from None
        if n < 1:
            raise InputError(f"{ENV_THREADS} must be at least 1")
        return n
    return fallback


def _write(out: Path, name: str, text: str) -> None:
    try:
        (out / name).write_text(text)
    except OSError as exc:
        raise InputError(f"cannot write {out / name}: {exc.strerror}") from None


def _parities(choice: str) -> list[Parity]:
    return list(Parity) if choice == "both" else [Parity(choice)]


# -- verify -----------------------------------------------------------------------


def cmd_verify(args) -> int:
    from .logical import verify as v

    lattice = _load_lattice(args.lattice) if args.lattice else None
    if lattice is not None and args.suite not in ("cell-stabilizer", "all"):
        raise InputError("--lattice only applies to the cell-stabilizer suite")
    suites = {
        "cell-stabilizer": lambda: (
            [v.verify_cell_stabilizers(lattice)]
            if lattice is not None
            else [v.verify_cell_stabilizers((1, 1, 1)), v.verify_cell_stabilizers((4, 4, 4))]
        )
        + [v.verify_even_parity(args.runs, args.seed)],
        "correlation-surface": lambda: [v.verify_tube(), v.verify_deformation("primal"), v.verify_deformation("dual")],
        "identity": lambda: [v.verify_identity_gate(p, branches=args.branches) for p in ("primal", "dual")],
        "cnot": lambda: [v.verify_cnot(branches=args.branches), v.verify_primal_cnot()],
        "init": lambda: [
            v.verify_initialization("plus", branches=args.branches),
            v.verify_initialization("zero", branches=args.branches),
            v.verify_round_trip("plus", seed=args.seed),
            v.verify_round_trip("zero", seed=args.seed),
        ],
        "injection": lambda: [v.verify_injection()],
    }
    names = list(suites) if args.suite == "all" else [args.suite]
    reports = []
    for name in names:
        log.info("running %s", name)
        for r in suites[name]():
            log.info("suite %s took %.2f s", r.suite, r.seconds)
            reports.append(r)
    text = "".join(r.to_text() for r in reports)
    ok = all(r.passed for r in reports)
    out = _out_dir(args)
    if out is not None:
        _write(out, "verify.txt", text)
    else:
        sys.stdout.write(text)
    log.info("%s", "all checks passed" if ok else "verification FAILED")
    return EXIT_OK if ok else EXIT_FAIL


# -- decode -------------------------------------------------------------------------


def cmd_decode(args) -> int:
    l = _load_lattice(args.lattice)
    try:
        flips = FlipPattern.from_text(l, _read(args.flips))
    except (ValueError, LatticeError) as exc:
        raise InputError(f"{args.flips}: {exc}") from None
    out = _out_dir(args)
    cleared = True
    chunks = []
    for parity in _parities(args.parity):
        s = extract_syndrome(l, flips, parity)
        corr = decode(l, s, prune=args.prune)
        left = extract_syndrome(l, flips ^ corr.flips, parity)
        cleared &= not left.odd_cells
        if out is not None:
            _write(out, f"correction-{parity.value}.txt", corr.to_text(l))
            _write(out, f"residual-syndrome-{parity.value}.txt", left.to_text())
        else:
            chunks.append(corr.to_text(l))
    if chunks:
        sys.stdout.write("".join(chunks))
    if not cleared:
        log.error("correction leaves odd cells")
        return EXIT_FAIL
    return EXIT_OK


# -- simulate -----------------------------------------------------------------------------


def _model(args, p: float) -> ErrorModel:
    return ErrorModel(NoiseKind(args.model), p, args.seed, CZFaultMode(args.cz_mode))


def cmd_simulate(args) -> int:
    """Sample flip patterns on a lattice (one file per sample, or stdout for one)."""
    l = _load_lattice(args.lattice)
    if not 0.0 <= args.p <= 1.0:
        raise InputError("--p must lie in [0, 1]")
    sample = make_sampler(l, _model(args, args.p))
    rng = np.random.default_rng(args.seed)
    texts = [FlipPattern.from_array(sample(rng)).to_text(l) for _ in range(args.samples)]
    out = _out_dir(args)
    if out is not None:
        for i, text in enumerate(texts):
            _write(out, f"flips-{i:04d}.txt", text)
    else:
        sys.stdout.write("".join(texts))
    return EXIT_OK


# -- threshold ----------------------------------------------------------------------------


def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(sorted(float(x) for x in text.replace(",", " ").split()))
    except ValueError:
        raise InputError(f"not a list of numbers: {text!r}") from None


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(",", " ").split())
    except ValueError:
        raise InputError(f"not a list of integers: {text!r}") from None


THRESHOLD_DEFAULTS = {
    "model": "phenomenological",
    "cz_mode": "two_qubit",
    "ps": "0.02 0.025 0.03 0.035 0.04",
    "ds": "3 5 7",
    "trials": "1000",
    "seed": "0",
    "bootstrap": "1000",
    "time_extent": "",
    "decode_dual": "false",
    "threads": "1",
}


def _threshold_settings(args) -> dict[str, str]:
    settings = dict(THRESHOLD_DEFAULTS)
    if args.config:
        cp = configparser.ConfigParser()
        try:
            cp.read_string(_read(args.config))
        except configparser.Error as exc:
            raise InputError(f"{args.config}: {exc}") from None
        if "threshold" not in cp:
            raise InputError(f"{args.config}: missing [threshold] section")
        unknown = set(cp["threshold"]) - set(settings)
        if unknown:
            raise InputError(f"{args.config}: unknown keys {sorted(unknown)}")
        settings.update(cp["threshold"])
    for key in ("model", "cz_mode", "ps", "ds", "trials", "seed", "bootstrap", "time_extent"):
        val = getattr(args, key, None)
        if val is not None:
            settings[key] = str(val)
    if args.decode_dual:
        settings["decode_dual"] = "true"
    return settings


def cmd_threshold(args) -> int:
    st = _threshold_settings(args)
    try:
        model = ErrorModel(NoiseKind(st["model"]), 0.0, int(st["seed"]), CZFaultMode(st["cz_mode"]))
        cfg = TrialConfig(
            model,
            _floats(st["ps"]),
            _ints(st["ds"]),
            int(st["trials"]),
            base_seed=int(st["seed"]),
            time_extent=int(st["time_extent"]) if st["time_extent"].strip() else None,
            decode_dual=st["decode_dual"].strip().lower() in ("1", "true", "yes", "on"),
        )
        bootstrap = int(st["bootstrap"])
        fallback_threads = int(st["threads"])
    except ValueError as exc:
        raise InputError(f"bad threshold settings: {exc}") from None
    out = _out_dir(args, default="results")
    workers = _threads(args, fallback_threads)

    def progress(r):
        log.info("p=%g d=%d failures=%d/%d (%.1f s)", r.p, r.d, r.failures, r.trials, r.seconds)

    result = run_memory_trials(cfg, workers=workers, progress=progress)
    est = estimate_threshold(result.points, bootstrap=bootstrap, seed=cfg.base_seed)
    _write(out, "threshold.csv", result.to_csv())
    _write(out, "threshold.json", summary_json(result, est))
    if est.crossing_found:
        log.info("p_th = %.5g, 95%% CI %s", est.p_th, est.ci)
    else:
        log.warning("no crossing: %s", est.message)
        if args.require_crossing:
            return EXIT_FAIL
    return EXIT_OK


# -- parser -----------------------------------------------------------------------------------


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="topocluster", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="count", default=0, help="more diagnostics on stderr")
    ap.add_argument("-q", "--quiet", action="store_true", help="only errors on stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0, help="the single source of randomness")
        p.add_argument("--threads", type=_positive, default=None, help=f"worker processes (env {ENV_THREADS})")
        p.add_argument("--out", default=None, help=f"output directory (env {ENV_OUT})")

    p = sub.add_parser("verify", help="exact verification suites")
    p.add_argument(
        "suite",
        choices=["cell-stabilizer", "correlation-surface", "identity", "cnot", "init", "injection", "all"],
    )
    p.add_argument("--lattice", help="lattice JSON for the cell-stabilizer suite")
    p.add_argument("--branches", choices=["all", "single"], default="all",
                   help="sign branches to force: every combination or zero plus single flips")
    p.add_argument("--runs", type=_positive, default=1000, help="seeded runs for the even-parity check")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("decode", help="decode a flip-pattern fixture")
    p.add_argument("--lattice", required=True)
    p.add_argument("--flips", required=True)
    p.add_argument("--parity", choices=["primal", "dual", "both"], default="both")
    p.add_argument("--prune", action="store_true", help="exact graph pruning (same optimum, faster)")
    common(p)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("simulate", help="sample fault patterns on a lattice")
    p.add_argument("--lattice", required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--model", choices=[k.value for k in NoiseKind], default="phenomenological")
    p.add_argument("--cz-mode", dest="cz_mode", choices=[m.value for m in CZFaultMode], default="two_qubit")
    p.add_argument("--samples", type=_positive, default=1)
    common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("threshold", help="memory-experiment Monte Carlo and threshold estimate")
    p.add_argument("--config", help="INI file with a [threshold] section; flags override it")
    p.add_argument("--model", choices=[k.value for k in NoiseKind])
    p.add_argument("--cz-mode", dest="cz_mode", choices=[m.value for m in CZFaultMode])
    p.add_argument("--ps", help="physical error rates, comma or space separated")
    p.add_argument("--ds", help="code distances")
    p.add_argument("--trials", type=_positive)
    p.add_argument("--bootstrap", type=int)
    p.add_argument("--time-extent", dest="time_extent", type=_positive)
    p.add_argument("--decode-dual", action="store_true", help="also decode the dual syndrome")
    p.add_argument("--require-crossing", action="store_true", help="exit 1 if the curves do not cross")
    p.add_argument("--seed", type=int, default=None, help="the single source of randomness")
    p.add_argument("--threads", type=_positive, default=None, help=f"worker processes (env {ENV_THREADS})")
    p.add_argument("--out", default=None, help=f"output directory (env {ENV_OUT}, default ./results)")
    p.set_defaults(func=cmd_threshold)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    level = logging.ERROR if args.quiet else (logging.DEBUG if args.verbose > 1 else logging.INFO if args.verbose else logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except InputError as exc:
        log.error("%s", exc)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
