"""Command-line entry point: ``wernerppt {bounds,spectrum,threshold,decompose,sweep}``.

Exit status: 0 success, 1 usage error, 2 capacity error, 3 verification failure.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import bounds as bnd
from . import qubit_decomposition as qd
from .errors import CapacityError, CertificateError, DomainError
from .spectra import (
    SPECTRUM_ATOL,
    analytic_pt_spectrum,
    max_spectrum_deviation,
    ppt_threshold,
    pt_spectrum,
)
from .states import check_epsilon
from .tensor_core import Bipartition, SystemShape, check_capacity, default_cap

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CAPACITY = 2
EXIT_VERIFY = 3


class UsageError(Exception):
    pass


class VerificationFailure(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def fmt(x) -> str:
    return f"{float(x):.17g}"


def frac(x: Fraction | None) -> str | None:
    if x is None:
        return None
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_int_list(text: str) -> list[int]:
    """``"2,3,5"`` or ranges like ``"2-8"``, mixed freely."""
    values = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            if "-" in part:
                lo, hi = part.split("-", 1)
                values.extend(range(int(lo), int(hi) + 1))
            else:
                values.append(int(part))
        except ValueError:
            raise UsageError(f"cannot parse integer list {text!r}") from None
    if not values:
        raise UsageError(f"empty integer list {text!r}")
    return values


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"cannot parse number {text!r}") from None


def parse_config(path: str) -> dict[str, str]:
    """Read ``key = value`` lines; ``#`` starts a comment."""
    config = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        config[key.replace("-", "_")] = value
    return config


def _shape(args) -> SystemShape:
    return SystemShape(args.n, args.d)


def _emit(text: str, out: str | None) -> None:
    if out:
        try:
            with open(out, "w", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            raise UsageError(f"cannot write {out}: {exc}") from None
    else:
        sys.stdout.write(text)


def _json(payload) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _header(command: str, params: dict) -> str:
    items = " ".join(f"{k}={v}" for k, v in params.items())
    return f"# wernerppt {command} {items}\n"


def cmd_bounds(args) -> int:
    shape = _shape(args)
    report = bnd.compare_bounds(shape)
    values = report.as_dict()
    params = {"n": shape.n, "d": shape.d}
    if args.format == "json":
        payload = {"command": "bounds", "params": params}
        payload.update({k: frac(v) for k, v in values.items()})
        payload["decimal"] = {k: (None if v is None else float(v)) for k, v in values.items()}
        _emit(_json(payload), args.out)
    else:
        buf = io.StringIO()
        buf.write(_header("bounds", params))
        buf.write("bound,exact,decimal\n")
        for key, v in values.items():
            buf.write(f"{key},{frac(v) or ''},{'' if v is None else fmt(v)}\n")
        _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    shape = _shape(args)
    check_capacity(shape.dim, args.cap)
    eps = parse_fraction(args.epsilon)
    check_epsilon(eps)
    mask = Bipartition.from_labels(parse_int_list(args.mask), shape.d)
    report = pt_spectrum(shape, mask, eps, method=args.solver, cap=args.cap)
    params = {"n": shape.n, "d": shape.d, "epsilon": frac(eps), "mask": str(mask), "solver": args.solver}
    deviation = None
    if args.check:
        analytic = analytic_pt_spectrum(shape, mask, eps)
        deviation = max_spectrum_deviation(report, analytic)

    if args.format == "json":
        payload = {
            "command": "spectrum",
            "params": params,
            "eigenvalues": [float(x) for x in report.eigenvalues],
            "residual": report.residual,
        }
        if args.check:
            payload["analytic"] = [
                {"value": float(v), "multiplicity": m}
                for v, m in zip(analytic.eigenvalues, analytic.multiplicities)
            ]
            payload["max_deviation"] = deviation
        _emit(_json(payload), args.out)
    else:
        buf = io.StringIO()
        buf.write(_header("spectrum", params))
        buf.write("eigenvalue\n")
        for x in report.eigenvalues:
            buf.write(fmt(x) + "\n")
        if args.check:
            for v, m in zip(analytic.eigenvalues, analytic.multiplicities):
                buf.write(f"# analytic {fmt(v)} x{m}\n")
            buf.write(f"# max_deviation {fmt(deviation)}\n")
        _emit(buf.getvalue(), args.out)
    if deviation is not None and deviation > SPECTRUM_ATOL:
        raise VerificationFailure(f"numeric spectrum deviates from the analytic one by {deviation:.3e}")
    return EXIT_OK


def cmd_threshold(args) -> int:
    shape = _shape(args)
    check_capacity(shape.dim, args.cap)
    exact = bnd.ppt_upper_bound(shape)
    rows = []
    for mask in shape.bipartitions():
        rep = ppt_threshold(shape, mask, solver=args.solver, cap=args.cap)
        rows.append((mask, rep, abs(rep.epsilon_critical - float(exact))))
    worst = max(r[2] for r in rows)
    params = {"n": shape.n, "d": shape.d, "solver": args.solver}
    if args.format == "json":
        payload = {
            "command": "threshold",
            "params": params,
            "analytic": frac(exact),
            "analytic_decimal": float(exact),
            "bipartitions": [
                {"size": m.size, "mask": str(m), "epsilon_critical": r.epsilon_critical, "mu_min": r.mu_min}
                for m, r, _ in rows
            ],
            "max_deviation": worst,
        }
        _emit(_json(payload), args.out)
    else:
        buf = io.StringIO()
        buf.write(_header("threshold", params))
        buf.write(f"# analytic {frac(exact)} {fmt(exact)}\n")
        buf.write("size,mask,epsilon_critical,mu_min\n")
        for m, r, _ in rows:
            buf.write(f'{m.size},"{m}",{fmt(r.epsilon_critical)},{fmt(r.mu_min)}\n')
        buf.write(f"# max_deviation {fmt(worst)}\n")
        _emit(buf.getvalue(), args.out)
    if worst > 1e-9:
        raise VerificationFailure(f"numeric threshold deviates from {frac(exact)} by {worst:.3e}")
    return EXIT_OK


def cmd_decompose(args) -> int:
    d = args.d
    if d < 2:
        raise UsageError("d must be >= 2")
    if d > qd.ENUMERATION_MAX_D or (args.check and d > qd.MATRIX_MAX_D):
        limit = qd.MATRIX_MAX_D if args.check else qd.ENUMERATION_MAX_D
        raise CapacityError(f"d={d} exceeds the limit of {limit} for this mode")
    eps_c = qd.critical_epsilon(d)
    if args.check:
        cert = qd.verify_separability_certificate(d)
        payload = cert.to_json()
        count = len(cert.terms) - 2
    elif d <= qd.MATRIX_MAX_D:
        terms = qd.build_decomposition(d)
        payload = qd.SeparabilityCertificate(d, eps_c, terms, None).to_json()
        count = len(terms) - 2
    else:
        # enumeration only; factor matrices are referenced by label
        count = qd.count_terms(d)
        payload = {
            "d": d,
            "epsilon": frac(eps_c),
            "term_count": count + 2,
            "max_deviation": None,
            "projectors": {str(a): qd._matrix_rows(qd.projector(a)) for a in (3, -3) + qd.ALPHABET},
        }
        if not args.no_terms:
            pole, weight = frac(eps_c / 2), frac(eps_c / 2 ** (d - 1))
            payload["terms"] = [{"weight": pole, "label": [3] * d}, {"weight": pole, "label": [-3] * d}] + [
                {"weight": weight, "label": list(t)} for t in qd.enumerate_terms(d)
            ]
    payload = {"command": "decompose", "params": {"d": d, "check": bool(args.check)}, "enumeration_count": count, **payload}
    if args.no_terms:
        payload.pop("terms", None)
    _emit(_json(payload), args.out)
    summary = f"d={d} epsilon={frac(eps_c)} terms={count + 2} enumeration_count={count}"
    if args.check:
        summary += f" max_deviation={fmt(payload['max_deviation'])}"
    print(summary, file=sys.stdout if args.out else sys.stderr)
    return EXIT_OK


SWEEP_COLUMNS = ["n", "d", "bound_eq6", "bound_vt", "bound_sc", "bound_exact_qubit"]
SWEEP_EXACT_COLUMNS = ["bound_eq6_exact", "bound_vt_exact", "bound_sc_exact", "bound_exact_qubit_exact"]


def sweep_rows(n_values, d_values, epsilon_grid=None) -> list[dict]:
    """One row per ``(n, d)`` in grid order; spectra come from the closed form, so no cap applies."""
    rows = []
    for n in n_values:
        for d in d_values:
            shape = SystemShape(n, d)
            rep = bnd.compare_bounds(shape)
            row = {
                "n": n,
                "d": d,
                "bound_eq6": rep.this_paper_upper,
                "bound_vt": rep.vidal_tarrach_upper,
                "bound_sc": rep.schack_caves_lower,
                "bound_exact_qubit": rep.qubit_exact,
            }
            for eps in epsilon_grid or ():
                mask = Bipartition.first(d, 1)
                row[f"lambda_min@{frac(eps)}"] = analytic_pt_spectrum(shape, mask, eps).min
            rows.append(row)
    return rows


def cmd_sweep(args) -> int:
    config = parse_config(args.config) if args.config else {}
    n_text = args.n_values or config.get("n_values")
    d_text = args.d_values or config.get("d_values")
    if not n_text or not d_text:
        raise UsageError("sweep needs --n-values and --d-values (or a config file providing them)")
    n_values, d_values = parse_int_list(n_text), parse_int_list(d_text)
    eps_text = args.epsilon_grid or config.get("epsilon_grid")
    epsilon_grid = [parse_fraction(e) for e in eps_text.split(",") if e.strip()] if eps_text else []
    for eps in epsilon_grid:
        check_epsilon(eps)
    out = args.out or config.get("output_path")
    fmt_name = args.format or config.get("format", "csv")
    if fmt_name not in ("csv", "json"):
        raise UsageError(f"unknown format {fmt_name!r}")

    rows = sweep_rows(n_values, d_values, epsilon_grid)
    eps_columns = [f"lambda_min@{frac(e)}" for e in epsilon_grid]
    params = {
        "n_values": ",".join(map(str, n_values)),
        "d_values": ",".join(map(str, d_values)),
        "epsilon_grid": ",".join(frac(e) for e in epsilon_grid),
    }
    bound_keys = SWEEP_COLUMNS[2:]
    if fmt_name == "json":
        payload = {
            "command": "sweep",
            "params": params,
            "columns": SWEEP_COLUMNS + SWEEP_EXACT_COLUMNS + eps_columns,
            "rows": [
                {
                    "n": r["n"],
                    "d": r["d"],
                    **{k: (None if r[k] is None else float(r[k])) for k in bound_keys},
                    **{k + "_exact": frac(r[k]) for k in bound_keys},
                    **{k: r[k] for k in eps_columns},
                }
                for r in rows
            ],
        }
        text = _json(payload)
    else:
        buf = io.StringIO()
        buf.write(_header("sweep", params))
        buf.write(",".join(SWEEP_COLUMNS + SWEEP_EXACT_COLUMNS + eps_columns) + "\n")
        for r in rows:
            cells = [str(r["n"]), str(r["d"])]
            cells += ["" if r[k] is None else fmt(r[k]) for k in bound_keys]
            cells += [frac(r[k]) or "" for k in bound_keys]
            cells += [fmt(r[k]) for k in eps_columns]
            buf.write(",".join(cells) + "\n")
        text = buf.getvalue()
    _emit(text, out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wernerppt", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, default_format):
        p.add_argument("--format", choices=("csv", "json"), default=default_format)
        p.add_argument("--out", help="write here instead of stdout")
        p.add_argument("--cap", type=int, default=None, help="maximum dense dimension n**d")

    p = sub.add_parser("bounds", help="all closed-form bounds for one (n, d)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    common(p, "json")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("spectrum", help="eigenvalues of the partially transposed state")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--epsilon", required=True, help="mixing weight, decimal or p/q")
    p.add_argument("--mask", default="1", help="1-based subsystems to transpose, e.g. 1,2")
    p.add_argument("--check", action="store_true", help="compare against the closed-form spectrum")
    p.add_argument("--solver", choices=("lapack", "jacobi"), default="lapack")
    common(p, "csv")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("threshold", help="PPT threshold for every bipartition size")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--solver", choices=("lapack", "jacobi"), default="lapack")
    common(p, "json")
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("decompose", help="separable ensemble for d qubits at the threshold")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--check", action="store_true", help="verify against the state (d <= 7)")
    p.add_argument("--no-terms", action="store_true", help="omit the term listing")
    p.add_argument("--out", help="certificate path (default stdout)")
    p.set_defaults(func=cmd_decompose, cap=None)

    p = sub.add_parser("sweep", help="bound table over an (n, d) grid")
    p.add_argument("--n-values", help="e.g. 2,3 or 2-5")
    p.add_argument("--d-values", help="e.g. 2-8")
    p.add_argument("--epsilon-grid", help="comma-separated mixing weights")
    p.add_argument("--config", help="key=value file with the same fields")
    p.add_argument("--format", choices=("csv", "json"), default=None)
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=cmd_sweep, cap=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.cap is None:
            args.cap = default_cap()
        return args.func(args)
    except CapacityError as exc:
        print(f"wernerppt: capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (CertificateError, VerificationFailure) as exc:
        print(f"wernerppt: verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (UsageError, DomainError) as exc:
        print(f"wernerppt: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
