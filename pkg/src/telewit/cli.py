"""Command-line front end.

Every command prints one JSON report ``{command, inputs, outputs, timing}``
on stdout; ``sweep`` additionally writes a CSV table. Exit status is 0 on
success, 2 for invalid input and 3 when an internal consistency check fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import evaluation, fef, jsonio, shots
from .errors import ConsistencyError, ValidationError
from .linalg import unitary_from_params
from .operators import witness
from .states import FAMILIES, StateFamilySpec, example_state, isotropic, werner_qubit

EXIT_INPUT = 2
EXIT_INTERNAL = 3

SWEEP_FAMILIES = {
    "example": ("a", lambda n, x: example_state(x)),
    "isotropic": ("p", lambda n, x: isotropic(n, x)),
    "werner_qubit": ("p", lambda n, x: werner_qubit(x)),
}


def thread_count() -> int:
    raw = os.environ.get("TELEWIT_THREADS")
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValidationError(f"TELEWIT_THREADS must be an integer, got {raw!r}") from None


def parse_floats(text: str, what: str) -> list[float]:
    try:
        return [float(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise ValidationError(f"{what} must be a comma-separated list of numbers, got {text!r}") from None


def parse_grid(text: str) -> list[float]:
    """``start:stop:step`` (inclusive of stop) or a comma-separated list."""
    text = (text or "").strip()
    if ":" in text:
        try:
            start, stop, step = (float(x) for x in text.split(":"))
        except ValueError:
            raise ValidationError(f"grid must be start:stop:step, got {text!r}") from None
        if step <= 0:
            raise ValidationError(f"grid step must be positive, got {step}")
        count = int(np.floor((stop - start) / step + 1e-9)) + 1 if stop >= start else 0
        values = [round(start + k * step, 12) for k in range(count)]
    else:
        values = parse_floats(text, "grid")
    if not values:
        raise ValidationError("empty parameter grid")
    return values


def resolve_unitary(args, n: int) -> tuple[np.ndarray, object]:
    """Unitary from ``--theta`` or ``--unitary {identity,pauli-x,PATH}``, plus its echo."""
    if args.theta is not None:
        theta = parse_floats(args.theta, "--theta")
        return unitary_from_params(theta, n), {"theta": theta}
    source = args.unitary
    if source == "identity":
        return np.eye(n, dtype=complex), source
    if source == "pauli-x":
        if n != 2:
            raise ValidationError(f"pauli-x shortcut needs n=2, state has n={n}")
        return evaluation.PAULI_X.copy(), source
    U = jsonio.read_unitary(source)
    if U.shape[0] != n:
        raise ValidationError(f"unitary from {source} is {U.shape[0]}x{U.shape[0]}, state has n={n}")
    return U, source


def _state_summary(rho) -> dict:
    w = rho.eigenvalues
    return {
        "n": rho.local_dim,
        "trace": float(np.trace(rho.matrix).real),
        "min_eigenvalue": float(w[0]),
        "eigenvalues": [float(x) for x in w[::-1]],
        "purity": rho.purity,
    }


def cmd_gen_state(args) -> dict:
    params = {k: getattr(args, k) for k in ("a", "p", "n", "rank") if getattr(args, k) is not None}
    if args.vector is not None:
        try:
            raw = json.loads(args.vector)
            params["vector"] = [complex(*z) if isinstance(z, list) else complex(z) for z in raw]
        except (json.JSONDecodeError, TypeError, ValueError):
            raise ValidationError("--vector must be a JSON list of numbers or [re, im] pairs") from None
    rho = StateFamilySpec(args.family, params, args.seed).build()
    inputs = {"family": args.family, "params": {k: v for k, v in params.items() if k != "vector"}, "seed": args.seed}
    if args.vector is not None:
        inputs["params"]["vector"] = args.vector
    outputs = {"validation": _state_summary(rho)}
    if args.out:
        jsonio.write_state(rho, args.out)
        outputs["path"] = args.out
    else:
        outputs["state"] = jsonio.state_to_dict(rho)
    return {"inputs": inputs, "outputs": outputs}


def _witness_outputs(U, rho, margin: float) -> dict:
    verdict = evaluation.decide(witness(rho.local_dim, U), rho, margin)
    out = {
        "n": rho.local_dim,
        "expectation": verdict.expectation,
        "threshold": verdict.threshold,
        "margin": margin,
        "detected": bool(verdict.detected),
    }
    if rho.local_dim == 2:
        out["eq5_value"] = evaluation.qubit_witness_value(U, rho)
    return out


def cmd_eval_witness(args) -> dict:
    rho = jsonio.read_state(args.state)
    U, source = resolve_unitary(args, rho.local_dim)
    outputs = _witness_outputs(U, rho, args.margin)
    outputs["unitary"] = jsonio.encode_matrix(U)
    return {"inputs": {"state": args.state, "unitary": source, "margin": args.margin}, "outputs": outputs}


def _fef_config(args) -> fef.OptimizerConfig:
    return fef.OptimizerConfig(
        restarts=args.restarts,
        max_evaluations=args.budget,
        step_tolerance=args.tolerance,
        seed=args.seed,
        workers=thread_count(),
    )


def cmd_estimate_fef(args) -> dict:
    rho = jsonio.read_state(args.state)
    cfg = _fef_config(args)
    verdict, est = fef.is_useful(rho, cfg)
    n = rho.local_dim
    outputs = {
        "n": n,
        "fef": est.value,
        "fidelity": evaluation.fidelity_from_fef(min(est.value, 1.0), n),
        "verdict": verdict,
        "witness_expectation": evaluation.expectation(witness(n, est.certificate), rho),
        "restarts_used": est.restarts_used,
        "evaluations": est.evaluations,
        "converged": bool(est.converged),
        "certificate": jsonio.encode_matrix(est.certificate),
    }
    if args.certificate_out:
        jsonio.write_unitary(est.certificate, args.certificate_out)
        outputs["certificate_path"] = args.certificate_out
    inputs = {
        "state": args.state,
        "restarts": cfg.restarts,
        "budget": cfg.max_evaluations,
        "tolerance": cfg.step_tolerance,
        "seed": cfg.seed,
        "margin": cfg.margin,
    }
    return {"inputs": inputs, "outputs": outputs}


def _shot_outputs(U, rho, plan: shots.ShotPlan, sigmas: float) -> dict:
    res = shots.estimate_witness_mean(rho.local_dim, U, rho, plan)
    return {
        "mean": res.mean,
        "standard_error": res.standard_error,
        "verdict": shots.detect_with_confidence(res, sigmas),
        "exact_expectation": evaluation.expectation(witness(rho.local_dim, U), rho),
        "constant": res.constant,
        "per_term": [
            {"label": t.label, "coefficient": t.coefficient, "mean": t.mean, "shots": t.shots, "variance": t.variance}
            for t in res.per_term
        ],
    }


def cmd_simulate_shots(args) -> dict:
    rho = jsonio.read_state(args.state)
    U, source = resolve_unitary(args, rho.local_dim)
    plan = shots.ShotPlan(args.shots, args.allocation, args.seed)
    inputs = {
        "state": args.state,
        "unitary": source,
        "shots": plan.total_shots,
        "allocation": plan.allocation,
        "seed": plan.seed,
        "sigmas": args.sigmas,
    }
    return {"inputs": inputs, "outputs": _shot_outputs(U, rho, plan, args.sigmas)}


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    return repr(x) if isinstance(x, float) else str(x)


def cmd_sweep(args) -> dict:
    if args.family not in SWEEP_FAMILIES:
        raise ValidationError(f"sweep supports families {', '.join(SWEEP_FAMILIES)}, got {args.family!r}")
    pname, build = SWEEP_FAMILIES[args.family]
    n = 2 if args.family != "isotropic" else (args.n or 2)
    grid = parse_grid(args.grid)
    states = [build(n, x) for x in grid]
    U, source = resolve_unitary(args, n) if args.evaluator != "fef" else (None, None)

    if args.evaluator == "exact":
        header = ["param", "witness_expectation"] + (["eq5_value", "eq5_minus_1"] if n == 2 else []) + ["detected"]

        def row(k):
            out = _witness_outputs(U, states[k], args.margin)
            extra = [out["eq5_value"], out["eq5_value"] - 1] if n == 2 else []
            return [grid[k], out["expectation"], *extra, out["detected"]]

    elif args.evaluator == "shots":
        header = ["param", "witness_estimate", "standard_error", "verdict", "detected"]

        def row(k):
            plan = shots.ShotPlan(args.shots, args.allocation, args.seed + k)
            out = _shot_outputs(U, states[k], plan, args.sigmas)
            return [grid[k], out["mean"], out["standard_error"], out["verdict"], out["verdict"] == shots.DETECTED]

    else:
        header = ["param", "fef", "fidelity", "witness_expectation", "detected"]
        cfg = _fef_config(args)

        def row(k):
            verdict, est = fef.is_useful(states[k], cfg)
            return [
                grid[k],
                est.value,
                evaluation.fidelity_from_fef(min(est.value, 1.0), n),
                evaluation.expectation(witness(n, est.certificate), states[k]),
                verdict == fef.CERTIFIED_USEFUL,
            ]

    workers = thread_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(row, range(len(grid))))
    else:
        rows = [row(k) for k in range(len(grid))]

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows([[_fmt(x) for x in r] for r in rows])
    inputs = {
        "family": args.family,
        "n": n,
        "parameter": pname,
        "grid": grid,
        "evaluator": args.evaluator,
        "unitary": source,
        "seed": args.seed,
    }
    if args.evaluator == "shots":
        inputs.update(shots=args.shots, allocation=args.allocation, sigmas=args.sigmas, row_seeds="seed + row index")
    if args.evaluator == "fef":
        inputs.update(restarts=args.restarts, budget=args.budget, tolerance=args.tolerance)
    outputs = {"rows": len(rows), "columns": header}
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(buf.getvalue())
        outputs["path"] = args.out
    else:
        outputs["csv"] = buf.getvalue()
    return {"inputs": inputs, "outputs": outputs}


def _add_unitary_flags(p):
    p.add_argument("--unitary", default="identity", help="identity, pauli-x, or a unitary JSON file")
    p.add_argument("--theta", help="comma-separated n^2 exponential-map coordinates (overrides --unitary)")


def _add_fef_flags(p):
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--budget", type=int, default=5000, help="max objective evaluations per restart")
    p.add_argument("--tolerance", type=float, default=1e-9)


def _add_shot_flags(p, default_shots):
    p.add_argument("--shots", type=int, default=default_shots)
    p.add_argument("--allocation", choices=("uniform", "proportional"), default="proportional")
    p.add_argument("--sigmas", type=float, default=3.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="telewit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-state", help="build a state and write it as JSON")
    p.add_argument("--family", required=True, choices=FAMILIES)
    p.add_argument("--a", type=float)
    p.add_argument("--p", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--rank", type=int)
    p.add_argument("--vector", help="JSON list of amplitudes for the pure family")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen_state)

    p = sub.add_parser("eval-witness", help="exact witness expectation and verdict")
    p.add_argument("state")
    _add_unitary_flags(p)
    p.add_argument("--margin", type=float, default=0.0)
    p.set_defaults(func=cmd_eval_witness)

    p = sub.add_parser("estimate-fef", help="fully entangled fraction lower bound")
    p.add_argument("state")
    _add_fef_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--certificate-out")
    p.set_defaults(func=cmd_estimate_fef)

    p = sub.add_parser("simulate-shots", help="finite-shot witness estimate")
    p.add_argument("state")
    _add_unitary_flags(p)
    _add_shot_flags(p, 300_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_simulate_shots)

    p = sub.add_parser("sweep", help="evaluate a state family over a parameter grid")
    p.add_argument("--family", required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--grid", required=True, help="start:stop:step or comma-separated values")
    p.add_argument("--evaluator", choices=("exact", "shots", "fef"), default="exact")
    _add_unitary_flags(p)
    p.add_argument("--margin", type=float, default=0.0)
    _add_shot_flags(p, 100_000)
    _add_fef_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        report = args.func(args)
    except ValidationError as exc:
        print(f"telewit {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ConsistencyError as exc:
        print(f"telewit {args.command}: internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    report = {"command": args.command, **report, "timing": {"wall_seconds": time.perf_counter() - start}}
    json.dump(report, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
