"""Command line: ``ncdirac {wick,fock,verify,gap,kato,metric,report}``.

Exit codes: 0 when every emitted check passes, 1 when one fails, 2 on bad
input, 3 when the output path cannot be written.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from pathlib import Path

import numpy as np

from . import dirac, fourier, schur, suites
from .fock import FockBudgetError, build_fock, fermion_square_residual, q_relation_residual
from .linalg import default_tol
from .report import CheckReport, _jsonable, check
from .wick import EnumerationBudgetError, wick_trace

EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_WRITE = 3
DEFAULT_REPORT_SYSTEMS = ("heat:2", "heat:3", "poisson:4", "donut:8:1:1", "Zn:4")
CSV_COLUMNS = ("system", "q", "p", "check", "value", "residual", "pass")


class InputError(ValueError):
    pass


def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from exc


def _emit(obj) -> None:
    print(json.dumps(_jsonable(obj), indent=2))


def _status(reports: list[CheckReport]) -> int:
    return 0 if all(r.passed for r in reports) else EXIT_FAIL


def _load(spec: str):
    try:
        return suites.parse_system(spec)
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        raise InputError(str(exc)) from exc


def _word_vectors(args) -> list[np.ndarray]:
    if args.vectors is not None:
        text = args.vectors
        path = Path(text)
        if path.exists():
            text = path.read_text()
        try:
            vecs = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"vectors are not JSON: {exc}") from exc
        arr = [np.asarray(v, dtype=float).ravel() for v in vecs]
        if len({v.size for v in arr}) > 1:
            raise InputError("vectors have different dimensions")
        return arr
    if args.word is None:
        raise InputError("give --word or --vectors")
    letters = [w.strip() for w in args.word.split(",") if w.strip()]
    distinct = list(dict.fromkeys(letters))
    dim = max(args.dim or 0, len(distinct), 1)
    basis = np.eye(dim)
    # distinct letters are orthonormal basis vectors
    return [basis[distinct.index(w)] for w in letters]


def cmd_wick(args) -> int:
    vecs = _word_vectors(args)
    try:
        val = wick_trace(args.q, vecs)
    except EnumerationBudgetError as exc:
        raise InputError(str(exc)) from exc
    _emit({"trace": float(val), "q": args.q, "length": len(vecs)})
    return 0


def cmd_fock(args) -> int:
    try:
        space = build_fock(args.q, args.dim, args.cap)
    except FockBudgetError as exc:
        raise InputError(str(exc)) from exc
    reports = [check("q_relation", q_relation_residual(space), default_tol(), q=args.q, dim=args.dim)]
    if space.q == -1 and space.level_cap >= space.h_dim:
        rng = np.random.default_rng(args.seed)
        worst = 0.0
        for _ in range(20):
            e = rng.standard_normal(space.h_dim)
            worst = max(worst, fermion_square_residual(space, e / np.linalg.norm(e)))
        reports.append(check("fermion_square", worst, 1e-12, seed=args.seed, dim=args.dim))
    _emit(
        {
            "q": space.q,
            "h_dim": space.h_dim,
            "level_cap": space.level_cap,
            "level_dims": list(space.level_dims),
            "total_dim": space.total_dim,
            "exact_word_length": space.exact_word_length,
            "reports": [r.to_dict() for r in reports],
        }
    )
    return _status(reports)


def _config(args, **over) -> suites.SuiteConfig:
    kw = {"seed": args.seed}
    if getattr(args, "q", None) is not None:
        kw["q_list"] = tuple(args.q)
    if getattr(args, "samples", None) is not None:
        kw["samples"] = args.samples
        kw["metric_samples"] = max(args.samples, 1)
    kw.update(over)
    return suites.SuiteConfig(**kw)


def _run(system_spec: str, suite: str, cfg: suites.SuiteConfig) -> list[CheckReport]:
    sys_ = _load(system_spec)
    try:
        return suites.run_suites(sys_, suite, cfg)
    except (FockBudgetError, RuntimeError) as exc:
        raise InputError(f"{system_spec}: {exc}") from exc


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise PermissionError(str(exc)) from exc


def cmd_verify(args) -> int:
    reports = _run(args.system, args.suite, _config(args))
    payload = [r.to_dict() for r in reports]
    if args.out:
        _write(args.out, json.dumps(payload, indent=2))
    _emit(payload)
    return _status(reports)


def cmd_gap(args) -> int:
    sys_ = _load(args.system)
    if suites.is_group(sys_):
        g_alpha, g_psi, rep = fourier.gap_comparison(sys_)
        _emit({"system": sys_.name, "g_alpha": g_alpha, "g_psi": g_psi, "strict": bool(g_alpha < g_psi), "reports": [rep.to_dict()]})
        return _status([rep])
    reports = suites.gap_suite(sys_, suites.SuiteConfig(counting_k=args.k_max))
    _emit({"system": sys_.name, "g_alpha": schur.gap(sys_), "reports": [r.to_dict() for r in reports]})
    return _status(reports)


def cmd_kato(args) -> int:
    sys_ = _load(args.system)
    reports = []
    for q in args.q or (1.0,):
        gs = suites.gradient_for(sys_, suites.check_fock(sys_, q))
        reports.append(dirac.kato_ratio_report(gs, args.p, args.samples, args.seed, default_tol()))
    _emit([r.to_dict() for r in reports])
    return _status(reports)


def cmd_metric(args) -> int:
    sys_ = _load(args.system)
    cfg = suites.SuiteConfig(seed=args.seed, metric_samples=args.samples, metric_p=tuple(args.p))
    reports = suites.metric_suite(sys_, cfg)
    _emit([r.to_dict() for r in reports])
    return _status(reports)


def _csv_value(v):
    if v is None:
        return ""
    if isinstance(v, (int, float, np.floating, np.integer)):
        return _jsonable(v)
    return json.dumps(_jsonable(v), separators=(",", ":"))


def report_rows(system: str, reports: list[CheckReport]) -> list[dict]:
    rows = []
    for r in reports:
        rows.append(
            {
                "system": system,
                "q": _csv_value(r.params.get("q")),
                "p": _csv_value(r.params.get("p")),
                "check": r.name,
                "value": _csv_value(r.value),
                "residual": _csv_value(r.residual),
                "pass": bool(r.passed),
            }
        )
    return rows


def spectrum_dump(system: str, q: float) -> list[float]:
    sys_ = _load(system)
    gs = suites.gradient_for(sys_, suites.check_fock(sys_, q))
    return dirac.assemble_hodge_dirac(gs).spectrum().tolist()


def cmd_report(args) -> int:
    cfg = _config(args)
    all_reports: list[CheckReport] = []
    rows: list[dict] = []
    tables: dict = {"kato": {}, "gaps": {}, "spectra": {}}
    for spec in args.systems:
        reports = _run(spec, args.suite, cfg)
        all_reports.extend(reports)
        rows.extend(report_rows(spec, reports))
        for r in reports:
            if r.name == "kato_ratios":
                tables["kato"][f"{spec}|q={r.params.get('q')}"] = r.value
            elif r.name in ("gap_value", "gap_inequality"):
                tables["gaps"][spec] = r.value
        tables["spectra"][f"{spec}|q=-1"] = spectrum_dump(spec, -1.0)
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)
        text = buf.getvalue()
    else:
        text = json.dumps(_jsonable({"reports": [r.to_dict() for r in all_reports], "tables": tables}), indent=2)
    _write(args.out, text)
    _emit({"out": args.out, "format": args.format, "checks": len(rows), "failed": sum(not r["pass"] for r in rows)})
    return _status(all_reports)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ncdirac", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("wick", help="vacuum trace of a q-Gaussian word by pair partitions")
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--word", help="comma-separated letters, distinct letters are orthonormal")
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--vectors", help="JSON list of vectors, inline or a file path")
    p.set_defaults(func=cmd_wick)

    p = sub.add_parser("fock", help="truncated q-Fock space dimensions and relation checks")
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_fock)

    p = sub.add_parser("verify", help="run identity suites on a system")
    p.add_argument("--system", required=True)
    p.add_argument("--q", type=_floats, default=suites.Q_GRID)
    p.add_argument("--suite", choices=("all",) + suites.SUITES, default="all")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gap", help="spectral gap values")
    p.add_argument("--system", required=True)
    p.add_argument("--k-max", type=int, default=6)
    p.set_defaults(func=cmd_gap)

    p = sub.add_parser("kato", help="Kato and Khintchine ratio tables")
    p.add_argument("--system", required=True)
    p.add_argument("--q", type=_floats, default=None)
    p.add_argument("--p", type=_floats, default=(2.0, 4.0))
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_kato)

    p = sub.add_parser("metric", help="Gamma seminorm suite")
    p.add_argument("--system", required=True)
    p.add_argument("--p", type=_floats, default=(2.0, 4.0, float("inf")))
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_metric)

    p = sub.add_parser("report", help="aggregate suites into a JSON or CSV file")
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--systems", nargs="+", default=list(DEFAULT_REPORT_SYSTEMS))
    p.add_argument("--q", type=_floats, default=suites.Q_GRID)
    p.add_argument("--suite", choices=("all",) + suites.SUITES, default="all")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=None)
    p.set_defaults(func=cmd_report)
    return parser


def _glue_negative_values(argv: list[str]) -> list[str]:
    """Rewrite ``--q -1,0`` as ``--q=-1,0`` so negative lists are not read as flags."""
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if tok.startswith("--") and "=" not in tok and nxt is not None and re.match(r"^-\.?\d", nxt):
            out.append(f"{tok}={nxt}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_glue_negative_values(argv))
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PermissionError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_WRITE


if __name__ == "__main__":
    sys.exit(main())
