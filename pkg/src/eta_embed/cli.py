"""Command-line front end: ``eta-embed <command> [flags]``.

Exit codes: 0 success, 1 a verify/audit check failed, 2 usage error,
3 numeric or domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from .audit import SUITES, AuditConfig, run_suite
from .coefficients import coeff_sum_identities, coefficient_table
from .embedding import EmbeddingParams, embedding_weights
from .errors import EtaError, SingularityError, UsageError
from .eta_core import EvalConfig, lambda_factor, parallel_series
from .numkernel import AccumMode
from .zeros import (Rect, critical_line_grid, find_zeros, rounded_winding,
                    winding_number, zeros_to_csv, zeros_to_json)

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3
THREADS_ENV = "ETA_EMBED_THREADS"
COMMANDS = ("eval", "embed", "coeffs", "zeros-scan", "zeros-count", "verify", "audit")
DEFAULT_FORMAT = {"eval": "csv", "embed": "csv", "coeffs": "json", "zeros-scan": "csv",
                  "zeros-count": "json", "verify": "json", "audit": "json"}

_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_REAL_RE = re.compile(rf"[+-]?{_NUM}")


# -- complex literals ----------------------------------------------------------------

def _parse_real(text: str, whole: str) -> float:
    if not _REAL_RE.fullmatch(text):
        raise UsageError(f"bad complex literal {whole!r}")
    return float(text)


def parse_complex(text: str) -> complex:
    """Parse ``a+bi``, ``a-bi``, ``a`` or ``bi`` (decimal floats, no spaces)."""
    if not text or any(c.isspace() for c in text):
        raise UsageError(f"bad complex literal {text!r}")
    if text.endswith("i"):
        body = text[:-1]
        split = None
        for k in range(len(body) - 1, 0, -1):
            if body[k] in "+-" and body[k - 1] not in "eE":
                split = k
                break
        re_part, im_part = ("", body) if split is None else (body[:split], body[split:])
        if im_part in ("", "+", "-"):
            im_part += "1"
        re_val = _parse_real(re_part, text) if re_part else 0.0
        im_val = _parse_real(im_part, text)
    else:
        re_val, im_val = _parse_real(text, text), 0.0
    z = complex(re_val, im_val)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise UsageError(f"complex literal out of range: {text!r}")
    return z


def format_complex(z: complex) -> str:
    """Canonical ``a+bi`` form with shortest round-trip floats."""
    z = complex(z)
    im = repr(z.imag)
    if not im.startswith("-"):
        im = "+" + im
    return f"{z.real!r}{im}i"


def parse_complex_list(text: str) -> List[complex]:
    return [parse_complex(part) for part in text.split(",")]


# -- argument parsing --------------------------------------------------------------------

@dataclass
class CliConfig:
    command: str
    params: Dict = field(default_factory=dict)
    output_format: str = "json"
    output_path: Optional[str] = None
    threads: int = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _positive(name):
    def conv(text):
        try:
            v = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be a number, got {text!r}")
        if not (math.isfinite(v) and v > 0):
            raise argparse.ArgumentTypeError(f"{name} must be positive, got {text!r}")
        return v
    return conv


def _nonneg_int(name):
    def conv(text):
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be an integer, got {text!r}")
        if v < 0:
            raise argparse.ArgumentTypeError(f"{name} must be non-negative, got {text!r}")
        return v
    return conv


def _complex_list(text):
    try:
        return parse_complex_list(text)
    except UsageError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _rect(text):
    try:
        return Rect.parse(text)
    except UsageError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="eta-embed", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--format", choices=("json", "csv"))
        p.add_argument("--out", help="write output here instead of stdout")
        p.add_argument("--threads", type=_nonneg_int("--threads"),
                       help=f"worker threads (default ${THREADS_ENV} or 1)")

    def series(p):
        p.add_argument("--tol", type=_positive("--tol"), help="target absolute error")
        p.add_argument("--kmax", type=_nonneg_int("--kmax"), help="outer term cap")
        p.add_argument("--mode", choices=[m.value for m in AccumMode])

    def grid(p):
        p.add_argument("--s", type=_complex_list, help="comma-separated points, e.g. 0.5+14.1i,2")
        p.add_argument("--tmin", type=_positive("--tmin"))
        p.add_argument("--tmax", type=_positive("--tmax"))
        p.add_argument("--step", type=_positive("--step"))

    p = sub.add_parser("eval", help="eta, lambda and functional-equation residual")
    grid(p); series(p); common(p)
    p = sub.add_parser("embed", help="the embedding eta_{kappa,nu}")
    grid(p); series(p); common(p)
    p.add_argument("--kappa", type=_positive("--kappa"), required=True)
    p.add_argument("--nu", type=_positive("--nu"), required=True)
    p = sub.add_parser("coeffs", help="a_n, b_n and their sum identities")
    p.add_argument("--kappa", type=_positive("--kappa"), required=True)
    p.add_argument("--n", type=_nonneg_int("--n"), default=32)
    p.add_argument("--tol", type=_positive("--tol"), help="j-series relative cutoff")
    common(p)
    p = sub.add_parser("zeros-scan", help="scan and refine zeros on the critical line")
    p.add_argument("--tmin", type=_positive("--tmin"), required=True)
    p.add_argument("--tmax", type=_positive("--tmax"), required=True)
    p.add_argument("--step", type=_positive("--step"), default=0.05)
    series(p); common(p)
    p = sub.add_parser("zeros-count", help="argument-principle count in a rectangle")
    p.add_argument("--rect", type=_rect, required=True,
                   help="smin,smax,tmin,tmax (use --rect=... when smin is negative)")
    series(p); common(p)
    p = sub.add_parser("verify", help="pass/fail check suites")
    p.add_argument("--suite", choices=SUITES + ("all",), default="identities")
    common(p)
    p = sub.add_parser("audit", help="every check, including informational claims")
    common(p)
    return parser


def _default_threads() -> int:
    env = os.environ.get(THREADS_ENV)
    if env is None or env == "":
        return 1
    try:
        v = int(env)
    except ValueError:
        raise UsageError(f"{THREADS_ENV} must be a positive integer, got {env!r}") from None
    if v < 1:
        raise UsageError(f"{THREADS_ENV} must be a positive integer, got {env!r}")
    return v


def parse_args(argv: Optional[Sequence[str]] = None) -> CliConfig:
    ns = _build_parser().parse_args(list(sys.argv[1:] if argv is None else argv))
    params = {k: v for k, v in vars(ns).items()
              if k not in ("command", "format", "out", "threads") and v is not None}
    threads = ns.threads if ns.threads is not None else _default_threads()
    if threads < 1:
        raise UsageError("--threads must be at least 1")
    if ns.command in ("eval", "embed"):
        has_grid = any(k in params for k in ("tmin", "tmax", "step"))
        if "s" in params and has_grid:
            raise UsageError("give either --s or --tmin/--tmax/--step, not both")
        if "s" not in params:
            if not ("tmin" in params and "tmax" in params):
                raise UsageError("need --s, or --tmin and --tmax")
    for lo, hi in (("tmin", "tmax"),):
        if lo in params and hi in params and params[lo] >= params[hi]:
            raise UsageError(f"--{lo} must be below --{hi}")
    return CliConfig(command=ns.command, params=params,
                     output_format=ns.format or DEFAULT_FORMAT[ns.command],
                     output_path=ns.out, threads=threads)


# -- commands ------------------------------------------------------------------------------

def _eval_config(params) -> EvalConfig:
    kw = {}
    if "kmax" in params:
        kw["kmax"] = params["kmax"]
    if "tol" in params:
        kw["tol"] = params["tol"]
    if "mode" in params:
        kw["mode"] = params["mode"]
    return EvalConfig(**kw)


def _points(params) -> List[complex]:
    if "s" in params:
        return params["s"]
    ts = critical_line_grid(params["tmin"], params["tmax"], params.get("step", 0.1))
    return [complex(0.5, t) for t in ts]


def _g(x: Optional[float]) -> str:
    return "" if x is None else format(x, ".17g")


def _table(rows: List[Dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=2) + "\n"
    buf = io.StringIO()
    if rows:
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: (_g(v) if isinstance(v, float) or v is None else v)
                        for k, v in r.items()})
    return buf.getvalue()


def _cmd_eval(cfg: CliConfig):
    ec = _eval_config(cfg.params)
    pts = _points(cfg.params)
    res = parallel_series(pts + [1.0 - s for s in pts], ec, threads=cfg.threads)
    res.raise_if_unconverged()
    n = len(pts)
    rows = []
    for i, s in enumerate(pts):
        v = complex(res.values[i])
        try:
            lam = lambda_factor(s)
        except SingularityError:
            lam = None
        resid = None if lam is None else abs(v - lam * complex(res.values[n + i]))
        rows.append({"s": format_complex(s), "eta_re": v.real, "eta_im": v.imag,
                     "est_error": float(res.est_errors[i]), "terms_used": int(res.terms_used[i]),
                     "lambda_re": None if lam is None else lam.real,
                     "lambda_im": None if lam is None else lam.imag,
                     "functional_residual": resid})
    return _table(rows, cfg.output_format), EXIT_OK


def _cmd_embed(cfg: CliConfig):
    ec = _eval_config(cfg.params)
    p = EmbeddingParams(cfg.params["kappa"], cfg.params["nu"])
    pts = _points(cfg.params)
    res = parallel_series(pts, ec, weights=embedding_weights(p, ec.kmax), threads=cfg.threads)
    res.raise_if_unconverged("embedding")
    rows = [{"s": format_complex(s), "kappa": p.kappa, "nu": p.nu,
             "value_re": float(res.values[i].real), "value_im": float(res.values[i].imag),
             "est_error": float(res.est_errors[i]), "terms_used": int(res.terms_used[i])}
            for i, s in enumerate(pts)]
    return _table(rows, cfg.output_format), EXIT_OK


def _cmd_coeffs(cfg: CliConfig):
    kw = {"tol": cfg.params["tol"]} if "tol" in cfg.params else {}
    table = coefficient_table(cfg.params["kappa"], cfg.params["n"], **kw)
    sums = coeff_sum_identities(table.kappa, table=table)
    if cfg.output_format == "csv":
        rows = [{"n": n, "a": table.a[n], "b": table.b[n]} for n in range(table.N + 1)]
        return _table(rows, "csv"), EXIT_OK
    out = table.to_dict()
    out["jcap"] = table.jcap
    out["sums"] = {"a_sum_lhs": sums.a_sum_lhs, "a_sum_rhs": sums.a_sum_rhs,
                   "b_sum_lhs": sums.b_sum_lhs, "b_sum_rhs": sums.b_sum_rhs,
                   "a_residual": sums.a_residual, "b_residual": sums.b_residual}
    return json.dumps(out, indent=2) + "\n", EXIT_OK


def _cmd_zeros_scan(cfg: CliConfig):
    p = cfg.params
    zs = find_zeros(p["tmin"], p["tmax"], p["step"], _eval_config(p), threads=cfg.threads)
    text = zeros_to_csv(zs) if cfg.output_format == "csv" else zeros_to_json(zs) + "\n"
    return text, EXIT_OK


def _cmd_zeros_count(cfg: CliConfig):
    r = cfg.params["rect"]
    ec = _eval_config(cfg.params)
    w = winding_number(r, ec, threads=cfg.threads)
    count = rounded_winding(w)
    row = {"sigma_min": r.sigma_min, "sigma_max": r.sigma_max, "t_min": r.t_min,
           "t_max": r.t_max, "winding": w, "count": count}
    if cfg.output_format == "csv":
        return _table([row], "csv"), EXIT_OK
    return json.dumps(row, indent=2) + "\n", EXIT_OK


def _suite_output(result, fmt):
    if fmt == "csv":
        rows = [{"check_id": r.check_id, "kind": r.kind, "verdict": r.verdict,
                 "residual": r.residual, "tolerance": r.tolerance} for r in result.reports]
        text = _table(rows, "csv")
    else:
        text = result.to_json() + "\n"
    return text, (EXIT_OK if result.ok else EXIT_CHECK_FAILED)


def _cmd_verify(cfg: CliConfig):
    suite = cfg.params["suite"]
    suites = ("identities", "asymptotics", "zeros") if suite == "all" else (suite,)
    return _suite_output(run_suite(AuditConfig(), suites, cfg.threads), cfg.output_format)


def _cmd_audit(cfg: CliConfig):
    return _suite_output(run_suite(AuditConfig(), SUITES, cfg.threads), cfg.output_format)


HANDLERS = {"eval": _cmd_eval, "embed": _cmd_embed, "coeffs": _cmd_coeffs,
            "zeros-scan": _cmd_zeros_scan, "zeros-count": _cmd_zeros_count,
            "verify": _cmd_verify, "audit": _cmd_audit}


def dispatch(cfg: CliConfig, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        text, code = HANDLERS[cfg.command](cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    except EtaError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_NUMERIC
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        cfg = parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return dispatch(cfg)


if __name__ == "__main__":
    sys.exit(main())
