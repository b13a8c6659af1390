"""Command-line front end.

Exit status: 0 on success, 1 on domain errors (error JSON on stderr), 2 on
usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bounds, experiments, modular, prover, serialization, solver
from .az_core import CheckStatus, telescoping_check
from .errors import HypertelError
from .term_model import shape_params


def _emit(obj, as_json: bool, text: str) -> None:
    if as_json:
        print(json.dumps(obj, indent=2, sort_keys=False))
    else:
        print(text)


def _add_format(p: argparse.ArgumentParser, default_json: bool = False) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--json", dest="json", action="store_true", default=default_json)
    g.add_argument("--text", dest="json", action="store_false")


def cmd_shape(args) -> int:
    sp = shape_params(serialization.load_term(args.term))
    obj = {"nu": sp.nu, "theta": sp.theta, "delta": sp.delta, "lambda": sp.lam, "mu": sp.mu, "omega": sp.omega}
    _emit({k: str(v) for k, v in obj.items()}, args.json, " ".join(f"{k}={v}" for k, v in obj.items()))
    return 0


def _relation_text(rel) -> str:
    lines = [f"L = {rel.operator_str()}", f"Y = {rel.Y}", f"C = {rel.certificate}",
             f"order r = {rel.r}, degree d = {rel.d}"]
    if rel.kind is solver.RelationKind.NONMINIMAL or rel.fallback:
        lines.append(f"ansatz d = {rel.ansatz_d}, s = {rel.s}, escalations = {rel.escalations}"
                     + (", fell back to the minimal solver" if rel.fallback else ""))
    return "\n".join(lines)


def cmd_telescope(args) -> int:
    term = serialization.load_term(args.term)
    rel = solver.solve_minimal(term) if args.which == "min" else solver.solve_nonminimal(term)
    _emit(serialization.relation_to_json(rel), args.json, _relation_text(rel))
    return 0


def cmd_verify(args) -> int:
    term = serialization.load_term(args.term)
    rel = serialization.load_relation(term, args.relation)
    ok = solver.verify_relation(term, rel)
    pts = [(n, k) for n in range(args.grid) for k in range(args.grid)]
    checks = telescoping_check(term, rel, pts, form=args.form)
    counts = {s.value: sum(c.status is s for c in checks) for s in CheckStatus}
    obj = {"verified": ok, "telescoping": counts}
    _emit(obj, args.json, f"identity {'holds' if ok else 'FAILS'}; pointwise "
          + ", ".join(f"{k}={v}" for k, v in counts.items()))
    return 0 if ok and counts["fail"] == 0 else 1


def cmd_bounds(args) -> int:
    term = serialization.load_term(args.term)
    rep = bounds.bound_report(term, args.r, args.variant)
    obj = rep.to_json()
    _emit(obj, args.json, "\n".join(f"{k} = {v}" for k, v in obj.items()))
    return 0


def cmd_modular(args) -> int:
    term = serialization.load_term(args.term)
    policy = modular.ModularPolicy(prime_bits=args.prime_bits, stability_rounds=args.stability)
    rel, count, rep = modular.modular_telescoper(term, policy)
    obj = {"relation": serialization.relation_to_json(rel), "report": rep.to_json()}
    print(json.dumps(obj, indent=2))
    return 0


def cmd_prove(args) -> int:
    term = serialization.load_term(args.term)
    window = prover.SupportWindow.parse(args.klo, args.khi)
    rep = prover.prove_identity(term, window, form=args.form)
    obj = rep.to_json()
    text = f"{rep.verdict.value.upper()}"
    if rep.n_fail is not None:
        text += f" (fails at n={rep.n_fail})"
    if rep.reason:
        text += f" ({rep.reason})"
    text += f"\nr={rep.r} d={rep.d} n0={rep.n0} checked n=0..{rep.N}"
    _emit(obj, args.json, text)
    return 0


def cmd_experiment(args) -> int:
    if args.family != "h-omega":
        raise HypertelError(f"unknown family {args.family!r}")
    recs = experiments.run_height_experiment(args.max, args.mode, timeout=args.timeout,
                                             workers=args.threads, cap=args.cap)
    column = "H_over_omega3" if args.mode == "minimal" else "H_over_omega5"
    fits = experiments.fit_all(recs, column)
    files = experiments.emit_report(recs, fits, args.out, plot=not args.no_plot, column=column)
    for r in recs:
        if r.status == "ok":
            print(f"Omega={r.omega} r={r.r} d={r.d} H={r.H:.6g} {column}={getattr(r, column):.6g} "
                  f"ln_bound={r.ln_bound:.6g} ms={r.runtime_ms}" + (" escalated" if r.escalated else ""))
        else:
            print(f"Omega={r.omega} {r.status}")
    for f in files:
        print(f"wrote {f}")
    return 0


def cmd_fit(args) -> int:
    rows = experiments.read_heights(args.inp)
    if rows and args.column not in rows[0]:
        raise HypertelError(f"column {args.column!r} not in {args.inp}")
    pts = [(row["omega"], row[args.column]) for row in rows]
    res = experiments.least_squares_fit(pts, args.model)
    print(json.dumps(res.to_json(), indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hypertel", description="Creative telescoping for proper hypergeometric terms.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("shape", help="shape parameters of a term")
    p.add_argument("--term", required=True)
    _add_format(p)
    p.set_defaults(fn=cmd_shape)

    p = sub.add_parser("telescope", help="compute a telescoper")
    p.add_argument("which", choices=["min", "nonmin"])
    p.add_argument("--term", required=True)
    _add_format(p)
    p.set_defaults(fn=cmd_telescope)

    p = sub.add_parser("verify", help="check a relation file against a term")
    p.add_argument("--term", required=True)
    p.add_argument("--relation", required=True)
    p.add_argument("--grid", type=int, default=6)
    p.add_argument("--form", choices=["factored", "gamma"], default="factored")
    _add_format(p)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("bounds", help="evaluate the closed-form bounds")
    p.add_argument("--term", required=True)
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--variant", choices=[bounds.THEOREM, bounds.DERIVATION], default=bounds.THEOREM)
    _add_format(p, default_json=True)
    p.set_defaults(fn=cmd_bounds)

    p = sub.add_parser("modular", help="telescoper via Chinese remaindering")
    p.add_argument("--term", required=True)
    p.add_argument("--prime-bits", type=int, default=31)
    p.add_argument("--stability", type=int, default=2)
    p.set_defaults(fn=cmd_modular)

    p = sub.add_parser("prove", help="decide sum_k h(n,k) = 1")
    p.add_argument("--term", required=True)
    p.add_argument("--klo", required=True)
    p.add_argument("--khi", required=True)
    p.add_argument("--form", choices=["factored", "gamma"], default="gamma")
    _add_format(p)
    p.set_defaults(fn=cmd_prove)

    p = sub.add_parser("experiment", help="height growth on the h_Omega family")
    p.add_argument("--family", default="h-omega")
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--mode", choices=list(experiments.MODES), default="minimal")
    p.add_argument("--out", required=True)
    p.add_argument("--timeout", type=float, default=experiments.DEFAULT_TIMEOUT)
    p.add_argument("--threads", type=int, default=None, help="worker processes (default: HYPERTEL_THREADS or 1)")
    p.add_argument("--cap", type=int, default=None, help="largest Omega actually solved")
    p.add_argument("--no-plot", action="store_true")
    p.set_defaults(fn=cmd_experiment)

    p = sub.add_parser("fit", help="least-squares fit of a heights.csv column")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--column", default="H_over_omega3")
    p.add_argument("--model", choices=[m.value for m in experiments.FitModel], required=True)
    p.set_defaults(fn=cmd_fit)
    return ap


def _validate(args, ap) -> None:
    if getattr(args, "prime_bits", 31) < 3 or getattr(args, "prime_bits", 31) > 62:
        ap.error("--prime-bits must lie in [3, 62]")
    if getattr(args, "stability", 1) < 0:
        ap.error("--stability must be nonnegative")
    if getattr(args, "grid", 1) < 1:
        ap.error("--grid must be positive")
    if getattr(args, "timeout", 1) is not None and getattr(args, "timeout", 1) <= 0:
        ap.error("--timeout must be positive")


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    _validate(args, ap)
    try:
        return args.fn(args)
    except (HypertelError, ValueError, ArithmeticError, OSError) as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(err), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
