"""
Command-line front end.

Every command reads a JSON document (complex entries as ``[re, im]``),
computes one report and writes it as sorted, indented JSON. Each report
embeds the full request, so feeding a report back in as ``--input``
reproduces it.

Exit codes: 0 computed, 2 input or precondition error, 3 numerical breakdown.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .echelon import (JordanSpec, block_echelon_reduce, build_selector_T, check_row_spec, is_block_echelon,
                      jordan_col_spec, jordan_row_spec)
from .errors import NumericalBreakdown, PreconditionError, RealizationLabError
from .families import conjecture_probe, family_report
from .feedback import (completion_disjoint, criterion_iii, minimality_equivalence_report,
                       sample_persistent_eigenvalues, siso_all_D_check, squared_counterpart)
from .jsonio import complex_from_json, matrix_from_json, to_jsonable
from .minimality import alpha, is_minimal, rank_formula_check
from .numeric import DEFAULT_TOL, Tolerances, cluster_eigenvalues
from .realization import Realization, assemble_L
from .squaring import square_realization

COMMANDS = ("analyze", "square", "feedback", "complete", "family", "probe", "echelon")
EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3


class InputError(RealizationLabError, ValueError):
    """Malformed request or input document."""


# --------------------------------------------------------------- commands ---

def _system(data) -> Realization:
    if not isinstance(data, dict):
        raise InputError("input must be a JSON object")
    return Realization.from_dict(data.get("system", data))


def _analyze(req, tol):
    R = _system(req["input"])
    verdict = is_minimal(R, tol, cross_check=True)
    rf = rank_formula_check(R, tol)
    clusters = cluster_eigenvalues(R.A, tol)
    return {
        "dims": {"n": R.n, "m": R.m, "p": R.p},
        "minimality": verdict,
        "alpha": alpha(R.A, tol),
        "eigenvalues": {
            "representatives": clusters.representatives,
            "algebraic": list(clusters.algebraic_mult),
            "geometric": list(clusters.geometric_mult),
            "warning": clusters.warning,
        },
        "rank_formula": rf._asdict(),
    }


def _square(req, tol):
    data = req["input"]
    R = _system(data)
    T_b = matrix_from_json(data["T_b"], "T_b") if data.get("T_b") is not None else None
    T_c = matrix_from_json(data["T_c"], "T_c") if data.get("T_c") is not None else None
    R_sq, T = square_realization(R, tol, req["seed"], T_b=T_b, T_c=T_c)
    return {"L_sq": assemble_L(R_sq).L, "squared": R_sq.to_dict(), "transform": T,
            "minimal": is_minimal(R_sq, tol)}


def _feedback(req, tol):
    R = _system(req["input"])
    return minimality_equivalence_report(R, tol, req["seed"], d_samples=int(req.get("d_samples", 20)))


def _complete(req, tol):
    R = _system(req["input"])
    out = {}
    if R.m == R.p:
        disjoint, matched = completion_disjoint(R.A, R.B, R.C, R.D, tol)
        out["given_D"] = {"disjoint": disjoint, "matched": [m._asdict() for m in matched]}
    R_sq = squared_counterpart(R, tol, req["seed"])
    if R_sq is None:
        out["per_eigenvalue"] = None
    else:
        crit = criterion_iii(R_sq, tol)
        out["squared_dims"] = list(R_sq.dims)
        out["per_eigenvalue"] = [
            {"lambda": c.lam, "D": (c.lam - crit.epsilon) * np.eye(R_sq.p), "cleared": c.disjoint,
             "distance": c.distance}
            for c in crit.per_lambda]
        out["epsilon"] = crit.epsilon
        out["persistent_over_samples"] = sample_persistent_eigenvalues(R_sq, 20, req["seed"], tol)
    if R.m == R.p == 1 and is_minimal(R, tol).minimal:
        out["siso_all_D"] = siso_all_D_check(R, 100, req["seed"], tol)
    return out


def _family(req, tol):
    if not req.get("psi"):
        raise InputError("family needs polynomial coefficients (--psi or 'psi' in the input)")
    R = _system(req["input"])
    return family_report(R, [complex_from_json(c) for c in req["psi"]], tol)


def _probe(req, tol):
    cfg = req.get("probe") or {}
    n, p, trials = int(cfg.get("n", 4)), int(cfg.get("p", 2)), int(cfg.get("trials", 100))
    cand, stats = conjecture_probe(n, p, trials, req["seed"], tol)
    return {"n": n, "p": p, "counterexample": None if cand is None else cand.to_dict(), "stats": stats}


def _echelon(req, tol):
    data = req["input"]
    if not isinstance(data, dict) or "jordan" not in data or "B" not in data:
        raise InputError("echelon input needs 'jordan' and 'B'")
    spec = JordanSpec.from_json(data["jordan"])
    B = matrix_from_json(data["B"], "B")
    rows = jordan_row_spec(spec)
    if not check_row_spec(B, rows, tol):
        raise PreconditionError("B violates the controllability row spec of the Jordan structure")
    U, Bt = block_echelon_reduce(B, rows, tol)
    T = build_selector_T(B, rows, tol, req["seed"])
    out = {"alpha": spec.alpha, "rho": rows.rho, "row_spec": [list(ix) for _, ix in rows.blocks],
           "U": U, "B_tilde": Bt, "echelon": is_block_echelon(Bt, rows, tol), "T": T}
    if data.get("C") is not None:
        C = matrix_from_json(data["C"], "C")
        out["C_col_spec_ok"] = check_row_spec(C.T, jordan_col_spec(spec), tol)
    return out


HANDLERS = {"analyze": _analyze, "square": _square, "feedback": _feedback, "complete": _complete,
            "family": _family, "probe": _probe, "echelon": _echelon}


# ------------------------------------------------------------------ core ---

def _tolerances(overrides) -> Tolerances:
    overrides = overrides or {}
    if not isinstance(overrides, dict):
        raise InputError("tolerances must be an object")
    return DEFAULT_TOL.replace(**{k: overrides.get(k) for k in ("rank_rel", "eig_match", "max_retries")})


def run(request: dict) -> tuple[dict, int]:
    """Execute one request and return ``(report, exit_code)``.

    The request holds ``command``, ``input`` (the parsed document), ``seed``,
    optional ``tolerances``, ``psi``, ``probe`` and ``d_samples``. Errors are
    reported inside the document rather than raised.
    """
    report = {"request": request}
    try:
        command = request.get("command")
        if command not in HANDLERS:
            raise InputError(f"unknown command {command!r}; choose from {', '.join(COMMANDS)}")
        seed = request.get("seed", 0)
        if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
            raise InputError("seed must be a non-negative integer")
        tol = _tolerances(request.get("tolerances"))
        report["tolerances"] = tol.to_dict()
        result = HANDLERS[command](request, tol)
        report.update(status="ok", result=to_jsonable(result))
        return report, EXIT_OK
    except NumericalBreakdown as exc:
        report.update(status="error", error={"type": type(exc).__name__, "message": str(exc)})
        return report, EXIT_NUMERIC
    except (ValueError, KeyError, TypeError) as exc:
        report.update(status="error", error={"type": type(exc).__name__, "message": str(exc)})
        return report, EXIT_INPUT


def dumps(report: dict) -> str:
    return json.dumps(to_jsonable(report), sort_keys=True, indent=2) + "\n"


def _is_pair(x) -> bool:
    return isinstance(x, list) and len(x) == 2 and all(isinstance(y, float) for y in x)


def _fmt(x) -> str:
    """Render ``[re, im]`` pairs as complex literals; anything else as JSON."""
    if _is_pair(x):
        return f"{complex(x[0], x[1]):.6g}"
    if isinstance(x, list) and x and all(_is_pair(y) or isinstance(y, list) for y in x):
        return "[" + ", ".join(_fmt(y) for y in x) + "]"
    return json.dumps(x)


def render_text(obj, prefix: str = "") -> list[str]:
    """Flatten a JSON report into ``path: value`` lines."""
    if isinstance(obj, dict):
        lines = []
        for k in sorted(obj):
            lines += render_text(obj[k], f"{prefix}.{k}" if prefix else str(k))
        return lines
    if isinstance(obj, list) and any(isinstance(x, dict) for x in obj):
        lines = []
        for i, x in enumerate(obj):
            lines += render_text(x, f"{prefix}[{i}]")
        return lines
    return [f"{prefix}: {_fmt(obj)}"]


def _build_request(args, data) -> dict:
    if isinstance(data, dict) and isinstance(data.get("request"), dict):
        return data["request"]
    req = {"command": args.command, "input": data, "seed": args.seed}
    tols = {k: v for k, v in (("rank_rel", args.rank_tol), ("eig_match", args.eig_tol),
                               ("max_retries", args.max_retries)) if v is not None}
    if tols:
        req["tolerances"] = tols
    psi = args.psi if args.psi is not None else (data.get("psi") if isinstance(data, dict) else None)
    if psi is not None:
        req["psi"] = [complex_from_json(c) for c in psi] if isinstance(psi, list) else psi
    if args.command == "probe":
        req["probe"] = {"n": args.n, "p": args.p, "trials": args.trials}
    if args.d_samples is not None:
        req["d_samples"] = args.d_samples
    return to_jsonable(req)


def _load(path: Path):
    text = path.read_text()
    if not text.strip():
        raise InputError(f"{path.name} is empty")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path.name} is not valid JSON: {exc}") from None


def _process(args, path: Path | None) -> tuple[dict, int]:
    try:
        data = _load(path) if path is not None else {}
        request = _build_request(args, data)
    except (ValueError, TypeError) as exc:
        return {"request": {"command": args.command, "source": path.name if path else None},
                "status": "error", "error": {"type": type(exc).__name__, "message": str(exc)}}, EXIT_INPUT
    return run(request)


def _emit(args, report: dict, stem: str):
    text = dumps(report) if args.format == "json" else "\n".join(render_text(json.loads(dumps(report)))) + "\n"
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        suffix = "json" if args.format == "json" else "txt"
        (out / f"{stem}.{args.command}.report.{suffix}").write_text(text)
    else:
        sys.stdout.write(text)


def _parse_psi(text: str) -> list[complex]:
    try:
        return [complex(tok.strip().replace(" ", "")) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse coefficients {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="realization-lab",
                                 description="Minimality analysis of state-space realizations.")
    ap.add_argument("command", choices=COMMANDS)
    src = ap.add_mutually_exclusive_group()
    src.add_argument("--input", help="JSON file with the system (or a previous report to replay)")
    src.add_argument("--batch", help="directory of *.json inputs, one report per file")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--rank-tol", type=float, help="relative rank tolerance")
    ap.add_argument("--eig-tol", type=float, help="relative eigenvalue matching tolerance")
    ap.add_argument("--max-retries", type=int)
    ap.add_argument("--psi", type=_parse_psi, help="ascending coefficients c0,c1,... (complex() syntax)")
    ap.add_argument("--d-samples", type=int, help="random D samples for the feedback report")
    ap.add_argument("--n", type=int, default=4, help="probe: state dimension")
    ap.add_argument("--p", type=int, default=2, help="probe: inputs = outputs")
    ap.add_argument("--trials", type=int, default=100, help="probe: number of random systems")
    ap.add_argument("--format", choices=("json", "text"), default="json")
    ap.add_argument("--out", help="directory for report files (default: stdout)")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.seed < 0:
        print("seed must be non-negative", file=sys.stderr)
        return EXIT_INPUT
    if args.batch:
        root = Path(args.batch)
        if not root.is_dir():
            print(f"{root} is not a directory", file=sys.stderr)
            return EXIT_INPUT
        code = EXIT_OK
        for path in sorted(root.glob("*.json")):
            report, rc = _process(args, path)
            _emit(args, report, path.stem)
            code = max(code, rc)
        return code
    if args.input is None and args.command != "probe":
        print(f"{args.command} needs --input or --batch", file=sys.stderr)
        return EXIT_INPUT
    path = Path(args.input) if args.input else None
    if path is not None and not path.is_file():
        print(f"{path} not found", file=sys.stderr)
        return EXIT_INPUT
    report, rc = _process(args, path)
    _emit(args, report, path.stem if path else "probe")
    return rc


if __name__ == "__main__":
    sys.exit(main())
