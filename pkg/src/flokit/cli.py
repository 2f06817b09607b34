"""``flokit`` command line: analyze a state, run a verification suite, emit the M_phi table.

Exit codes: 0 success, 1 suite assertion failures, 2 bad input or usage,
3 I/O failure while reading or writing files.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import extent as ext
from .fidelity import FidelityConfig, optimize_fidelity
from .fock import MIXED, PureState
from .magic4 import a8, extract_rsa, fidelity4, m_phi, to_even
from .suites import SUITES, TABLE_HEADER, SuiteConfig, mphi_table, run_suite, workers

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_IO = 0, 1, 2, 3


class InputError(Exception):
    pass


def _clean(obj):
    """Make ``obj`` JSON-safe: numpy scalars to Python, non-finite floats to null."""
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj) if math.isfinite(obj) else None
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    return obj


def _stamp(label: str) -> str:
    now = datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
    return f"# flokit {label} generated {now}\n"


# --- analyze -------------------------------------------------------------------

def load_state(args) -> tuple[PureState, str]:
    if args.a8:
        return a8(), "a8"
    if args.mphi is not None:
        return m_phi(args.mphi), f"m_phi({args.mphi!r})"
    if args.state is None:
        raise InputError("analyze needs one of --state, --mphi, --a8")
    text = Path(args.state).read_text()
    try:
        return PureState.from_json(text), str(args.state)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def analyze(psi: PureState, state_ref: str, config: FidelityConfig) -> dict:
    """Certificate record: bounds, witness, decomposition and (on 4 qubits) magic coordinates."""
    out = {"state_ref": state_ref, "n": psi.n, "parity": psi.parity_class}
    if psi.n <= 4:
        br = ext.extent_bracket(psi, config)
        out.update(lower=br.lower, upper=br.upper, gap=br.gap, extent=br.upper,
                   provenance=br.provenance, witness=br.witness.to_json(),
                   witness_fidelity=br.witness_fidelity,
                   decomposition=br.decomposition.to_json())
        if psi.n == 4:
            out["fidelity"] = fidelity4(psi)
            out["fidelity_provenance"] = ext.CLOSED_FORM
            if psi.parity_class != MIXED:
                out["magic"] = extract_rsa(to_even(psi)).to_json()
                out["magic"]["parity"] = psi.parity_class
        else:
            res = optimize_fidelity(psi, config)
            out["fidelity"] = res.value
            out["fidelity_provenance"] = ext.OPTIMIZER
    else:
        res = optimize_fidelity(psi, config)
        # psi itself as a dual witness gives 1/F; no decomposition is attempted
        out.update(lower=1.0 / res.value, upper=None, gap=None, extent=None,
                   provenance=ext.OPTIMIZER, witness=psi.to_json(), witness_fidelity=res.value,
                   decomposition=None, fidelity=res.value, fidelity_provenance=ext.OPTIMIZER,
                   fidelity_witness=res.witness.to_json(), converged=res.converged)
    return out


def cmd_analyze(args) -> int:
    psi, ref = load_state(args)
    record = analyze(psi, ref, FidelityConfig(restarts=args.restarts, seed=args.seed))
    text = json.dumps(_clean(record), indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return EXIT_OK


# --- verify --------------------------------------------------------------------

def cmd_verify(args) -> int:
    cfg = SuiteConfig(args.suite, args.trials, args.seed, args.tol, args.n, args.factors,
                      args.restarts, args.out)
    out_dir = Path(args.out or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    res = run_suite(cfg)
    (out_dir / f"{cfg.suite}.csv").write_text(_stamp(f"verify {cfg.suite}") + res.to_csv())
    summary = {"suite": cfg.suite, "ok": res.ok, "trials": cfg.n_trials, "seed": cfg.seed,
               "tolerance": cfg.tolerance, "rows": len(res.rows), "summary": res.summary,
               "failures": res.failures}
    (out_dir / f"{cfg.suite}.json").write_text(json.dumps(_clean(summary), indent=2) + "\n")
    print(f"{cfg.suite}: {'PASS' if res.ok else 'FAIL'} ({len(res.rows)} rows, "
          f"{len(res.failures)} failures)")
    for f in res.failures:
        print(f"  {f}", file=sys.stderr)
    return EXIT_OK if res.ok else EXIT_FAIL


# --- table ---------------------------------------------------------------------

def table_csv(grid: int, config: FidelityConfig) -> str:
    rows = mphi_table(grid, config)
    lines = [",".join(TABLE_HEADER)]
    lines += [",".join(f"{x:.12g}" for x in row) for row in rows]
    return "\n".join(lines) + "\n"


def cmd_table(args) -> int:
    text = _stamp(f"table grid={args.grid}") + table_csv(
        args.grid, FidelityConfig(restarts=args.restarts, seed=args.seed))
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# --- entry point ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="flokit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--restarts", type=int, default=32)
        p.add_argument("--out", default=None)

    p = sub.add_parser("analyze", help="certificate JSON for one state")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--state", help="state JSON file {n, amplitudes: [[re, im], ...]}")
    src.add_argument("--mphi", type=float, help="built-in M_phi at angle phi")
    src.add_argument("--a8", action="store_true", help="built-in a_8")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify", help="run a verification suite, write <suite>.csv/.json")
    p.add_argument("--suite", required=True, choices=SUITES)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--factors", type=int, default=2)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("table", help="M_phi extent/fidelity table as CSV")
    p.add_argument("--grid", type=int, default=64)
    common(p)
    p.set_defaults(func=cmd_table)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "grid", 2) < 2:
        print("error: --grid must be >= 2", file=sys.stderr)
        return EXIT_INPUT
    if getattr(args, "restarts", 1) < 1:
        print("error: --restarts must be positive", file=sys.stderr)
        return EXIT_INPUT
    try:
        workers()
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
