"""Numerical audits of the identities and asymptotics around eta_{kappa,nu}.

Every check produces an :class:`AuditReport` with the two sides that were
compared, the residual and a verdict. Checks come in three kinds:

* ``identity``: exact relations (pass/fail at a fixed tolerance);
* ``asymptotic``: limits and expansions probed at finite parameters
  (pass/fail against a stated rate or tolerance);
* ``informational``: contested steps whose residuals are recorded but never
  judged, so the suite cannot encode the answer to the question it measures.
"""

from __future__ import annotations

import hashlib
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import __version__
from .coefficients import (CoeffTable, a_sum_closed_form, b_sum_closed_form,
                           check_kappa_region, coefficient_table,
                           convolution_residual, expansion_eval_many,
                           inversion_eval_many, inversion_order)
from .embedding import EmbeddingParams, b_ratio, eta_embedding_many
from .errors import EtaError
from .eta_core import (DEFAULT_CONFIG, EvalConfig, eta, eta_many,
                       functional_residuals, lambda_factor)
from .numkernel import as_complex
from .zeros import (Rect, ZeroRecord, find_zeros, quartet_check,
                    refine_zero_bisect, winding_number)

IDENTITY = "identity"
ASYMPTOTIC = "asymptotic"
INFORMATIONAL = "informational"

NOISE_FLOOR = 1e-13  # residuals this small count as converged in a limit sequence
BUDGET_FACTOR = 100.0


@dataclass
class AuditReport:
    check_id: str
    anchor: str
    inputs: Dict
    lhs: complex
    rhs: complex
    residual: float
    tolerance: float
    verdict: str  # pass / fail / informational / skipped
    kind: str = IDENTITY
    detail: Dict = field(default_factory=dict)

    def to_dict(self) -> Dict:
        lhs, rhs = as_complex(self.lhs), as_complex(self.rhs)
        return {"check_id": self.check_id, "anchor": self.anchor,
                "kind": self.kind, "inputs": _jsonable(self.inputs),
                "lhs": {"re": lhs.real, "im": lhs.imag},
                "rhs": {"re": rhs.real, "im": rhs.imag},
                "residual": float(self.residual), "tolerance": float(self.tolerance),
                "verdict": self.verdict, "detail": _jsonable(self.detail)}


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def _fmt(x) -> str:
    x = as_complex(x)
    if x.imag == 0:
        return format(x.real, "g")
    return f"{x.real:g}{x.imag:+g}i"


def make_report(check_id, anchor, inputs, lhs, rhs, residual, tolerance,
                kind=IDENTITY, detail=None, passed=None) -> AuditReport:
    """Verdict: informational for that kind, otherwise residual <= tolerance
    (or the explicit ``passed`` flag when the rule is more than a threshold)."""
    residual = float(residual)
    if kind == INFORMATIONAL:
        verdict = INFORMATIONAL
    else:
        ok = math.isfinite(residual) and residual <= tolerance
        if passed is not None:
            ok = ok and passed
        verdict = "pass" if ok else "fail"
    return AuditReport(check_id, anchor, dict(inputs), as_complex(lhs), as_complex(rhs),
                       residual, float(tolerance), verdict, kind, dict(detail or {}))


def skipped_report(check_id, anchor, inputs, exc: Exception) -> AuditReport:
    return AuditReport(check_id, anchor, dict(inputs), 0j, 0j, math.nan, math.nan,
                       "skipped", IDENTITY,
                       {"error": type(exc).__name__, "message": str(exc)})


def decreasing(residuals: Sequence[float], floor: float = NOISE_FLOOR) -> bool:
    """Each residual smaller than the previous, or already at the rounding floor."""
    return all(b < a or b <= floor for a, b in zip(residuals, residuals[1:]))


# -- identities of eta itself ------------------------------------------------------

def functional_equation_audit(points, cfg: EvalConfig = DEFAULT_CONFIG,
                              tol: float = 1e-8) -> AuditReport:
    """Worst |eta(s) - lambda(s) eta(1-s)| over a grid."""
    pts = [as_complex(s) for s in points]
    res = functional_residuals(pts, cfg)
    i = int(np.argmax(res))
    s = pts[i]
    left, right = eta_many([s, 1.0 - s], cfg)
    lam = lambda_factor(s)
    return make_report(
        "functional_equation", "eta(s) = lambda(s) eta(1-s)",
        {"points": len(pts)}, left.value, lam * right.value, res[i], tol,
        detail={"worst_s": s, "error_budget": BUDGET_FACTOR * (left.est_error
                                                               + abs(lam) * right.est_error)})


# -- limits of the embedding ---------------------------------------------------------

def _limit_report(check_id, anchor, inputs, values, targets, params, tol) -> AuditReport:
    residuals = [abs(v - t) for v, t in zip(values, targets)]
    ok = decreasing(residuals)
    return make_report(check_id, anchor, inputs, values[-1], targets[-1], residuals[-1],
                       tol, kind=ASYMPTOTIC, passed=ok,
                       detail={"sequence": params, "residuals": residuals,
                               "decreasing": ok})


def limit_audit(s, nu: float, kappa_list: Sequence[float], which: str = "kappa_inf",
                cfg: EvalConfig = DEFAULT_CONFIG, tol: Optional[float] = None) -> AuditReport:
    """Probe a kappa limit of eta_{kappa,nu}(s) along ``kappa_list``.

    ``which`` is ``kappa_inf`` (target eta(s)) or ``kappa_zero`` (target
    eta(s) - 1). The list is walked in the direction of the limit.
    """
    s = as_complex(s)
    ks = sorted(float(k) for k in kappa_list)
    if which == "kappa_zero":
        ks = ks[::-1]
    e = eta(s, cfg).value
    vals = [eta_embedding_many([s], EmbeddingParams(k, nu), cfg)[0].value for k in ks]
    if which == "kappa_inf":
        target, anchor, default_tol = e, "eta_{kappa,nu}(s) -> eta(s) as kappa -> inf", 1e-5
    elif which == "kappa_zero":
        target, anchor, default_tol = e - 1.0, "eta_{kappa,nu}(s) -> eta(s) - 1 as kappa -> 0", 1e-10
    else:
        raise ValueError(f"unknown limit {which!r}")
    return _limit_report(f"limit_{which}[nu={nu:g},s={_fmt(s)}]", anchor,
                         {"s": s, "nu": nu, "kappa": ks}, vals, [target] * len(ks), ks,
                         default_tol if tol is None else tol)


def nu_limit_audit(s, kappa: float, nu_list: Sequence[float], which: str = "nu_inf",
                   cfg: EvalConfig = DEFAULT_CONFIG, tol: Optional[float] = None) -> AuditReport:
    """Probe a nu limit: ``nu_inf`` (eta + B(1)/B(0) - 1) or ``nu_zero`` ((B(1)/B(0)) eta)."""
    s = as_complex(s)
    ns = sorted(float(v) for v in nu_list)
    if which == "nu_zero":
        ns = ns[::-1]
    e = eta(s, cfg).value
    plateau = b_ratio(1.0, kappa)
    vals = [eta_embedding_many([s], EmbeddingParams(kappa, v), cfg)[0].value for v in ns]
    if which == "nu_inf":
        target = e + plateau - 1.0
        anchor, default_tol = "eta_{kappa,nu}(s) -> eta(s) + B(1)/B(0) - 1 as nu -> inf", 1e-10
    elif which == "nu_zero":
        target = plateau * e
        anchor, default_tol = "eta_{kappa,nu}(s) -> (B(1)/B(0)) eta(s) as nu -> 0", 1e-3
    else:
        raise ValueError(f"unknown limit {which!r}")
    return _limit_report(f"limit_{which}[kappa={kappa:g},s={_fmt(s)}]", anchor,
                         {"s": s, "kappa": kappa, "nu": ns}, vals, [target] * len(ns), ns,
                         default_tol if tol is None else tol)


def kappa_zero_edge_report(s, kappa_list, cfg: EvalConfig = DEFAULT_CONFIG) -> AuditReport:
    """Small-kappa behaviour at nu = 1, where 1/(m+1)^nu = 1/2 at m = 1.

    That summand sits on the kernel edge, where B_kappa(x)/B_kappa(0) tends
    to 1/2 rather than 0 or 1, so the limit is eta(s) - 1 + 2^{-s}/2. Both
    residuals are recorded.
    """
    s = as_complex(s)
    ks = sorted((float(k) for k in kappa_list), reverse=True)
    e = eta(s, cfg).value
    vals = [eta_embedding_many([s], EmbeddingParams(k, 1.0), cfg)[0].value for k in ks]
    edge_target = e - 1.0 + 0.5 * 2.0 ** (-s)
    return make_report(
        f"limit_kappa_zero_edge[nu=1,s={_fmt(s)}]",
        "eta_{kappa,1}(s) as kappa -> 0 versus eta(s) - 1",
        {"s": s, "nu": 1.0, "kappa": ks}, vals[-1], e - 1.0, abs(vals[-1] - (e - 1.0)), 0.0,
        kind=INFORMATIONAL,
        detail={"residuals_vs_eta_minus_one": [abs(v - (e - 1.0)) for v in vals],
                "edge_corrected_target": edge_target,
                "residuals_vs_edge_corrected": [abs(v - edge_target) for v in vals]})


# -- large-kappa expansion ---------------------------------------------------------------

def asymptotic_order(s, nu: float, kappa_list: Sequence[float],
                     cfg: EvalConfig = DEFAULT_CONFIG) -> List[AuditReport]:
    """eta_{kappa,nu}(s) = eta(s) - eta(s+2nu)/kappa^2 + O(kappa^-4).

    Three reports: log-log slope of the first difference (-2 +- 0.1), of the
    corrected remainder (-4 +- 0.3), and the leading coefficient at the
    largest kappa (within 1e-3).
    """
    s = as_complex(s)
    ks = sorted(float(k) for k in kappa_list)
    for k in ks:
        check_kappa_region(k)
    e, shifted = (v.value for v in eta_many([s, s + 2.0 * nu], cfg))
    diffs = [eta_embedding_many([s], EmbeddingParams(k, nu), cfg)[0].value - e for k in ks]
    first = [abs(d) for d in diffs]
    second = [abs(d + shifted / k ** 2) for d, k in zip(diffs, ks)]
    lk = np.log(ks)
    slope1 = float(np.polyfit(lk, np.log(first), 1)[0])
    slope2 = float(np.polyfit(lk, np.log(second), 1)[0])
    lead = ks[-1] ** 2 * diffs[-1]
    inputs = {"s": s, "nu": nu, "kappa": ks}
    tag = f"[nu={nu:g},s={_fmt(s)}]"
    return [
        make_report("asymptotic_first_order" + tag,
                    "|eta_{kappa,nu}(s) - eta(s)| ~ kappa^-2", inputs, slope1, -2.0,
                    abs(slope1 + 2.0), 0.1, kind=ASYMPTOTIC, detail={"abs_diff": first}),
        make_report("asymptotic_second_order" + tag,
                    "eta_{kappa,nu}(s) - eta(s) + eta(s+2nu)/kappa^2 ~ kappa^-4", inputs,
                    slope2, -4.0, abs(slope2 + 4.0), 0.3, kind=ASYMPTOTIC,
                    detail={"abs_remainder": second}),
        make_report("asymptotic_leading_coefficient" + tag,
                    "kappa^2 (eta_{kappa,nu}(s) - eta(s)) -> -eta(s+2nu)", inputs,
                    lead, -shifted, abs(lead + shifted), 1e-3, kind=ASYMPTOTIC,
                    detail={"kappa": ks[-1]}),
    ]


# -- coefficient identities ------------------------------------------------------------------

def coefficient_reports(kappa: float, N: int = 25) -> List[AuditReport]:
    """a_0 = 1, b * a = delta, and the two closed-form coefficient sums."""
    table = coefficient_table(kappa, N)
    inputs = {"kappa": kappa, "N": N}
    tag = f"[kappa={kappa:g}]"
    a_lhs, b_lhs = math.fsum(table.a[1:]), math.fsum(table.b[1:])
    a_rhs, b_rhs = a_sum_closed_form(kappa), b_sum_closed_form(kappa)
    return [
        make_report("coeff_a0" + tag, "a_0 = 1", inputs, table.a[0], 1.0,
                    abs(table.a[0] - 1.0), 1e-13),
        make_report("coeff_convolution" + tag, "sum_k b_k a_{n-k} = delta_{n0}", inputs,
                    0.0, 0.0, convolution_residual(table.a, table.b), 1e-12),
        make_report("coeff_sum_a" + tag, "sum_{n>=1} a_n = B(1)/B(0) - 1", inputs,
                    a_lhs, a_rhs, abs(a_lhs - a_rhs), 1e-9,
                    detail={"tail_bound": table.tail_bound}),
        make_report("coeff_sum_b" + tag, "sum_{n>=1} b_n = B(0)/B(1) - 1", inputs,
                    b_lhs, b_rhs, abs(b_lhs - b_rhs), 1e-9),
    ]


def expansion_reports(kappa: float, nu: float, points, table: Optional[CoeffTable] = None,
                      cfg: EvalConfig = DEFAULT_CONFIG) -> List[AuditReport]:
    """Worst-case shift expansion and inversion residuals over ``points``."""
    pts = [as_complex(s) for s in points]
    if table is None:
        table = coefficient_table(kappa)
    p = EmbeddingParams(kappa, nu)
    direct = eta_embedding_many(pts, p, cfg)
    expanded = expansion_eval_many(pts, table, nu, cfg)
    etas = eta_many(pts, cfg)
    inverted = inversion_eval_many(pts, table, nu, cfg)
    r_exp = [abs(x.value - d.value) for x, d in zip(expanded, direct)]
    r_inv = [abs(x.value - e.value) for x, e in zip(inverted, etas)]
    i, j = int(np.argmax(r_exp)), int(np.argmax(r_inv))
    inputs = {"kappa": kappa, "nu": nu, "points": len(pts)}
    tag = f"[kappa={kappa:g},nu={nu:g}]"
    return [
        make_report("expansion" + tag, "eta_{kappa,nu}(s) = sum_n a_n eta(s + 2 nu n)",
                    inputs, expanded[i].value, direct[i].value, r_exp[i], 1e-9,
                    detail={"worst_s": pts[i], "terms": expanded[i].terms_used,
                            "error_budget": BUDGET_FACTOR * (expanded[i].est_error
                                                             + direct[i].est_error)}),
        make_report("inversion" + tag, "eta(s) = sum_n b_n eta_{kappa,nu}(s + 2 nu n)",
                    inputs, inverted[j].value, etas[j].value, r_inv[j], 1e-8,
                    detail={"worst_s": pts[j], "terms": inverted[j].terms_used,
                            "error_budget": BUDGET_FACTOR * (inverted[j].est_error
                                                             + etas[j].est_error)}),
    ]


def embed_functional_residual(s, p: EmbeddingParams, table: Optional[CoeffTable] = None,
                              cfg: EvalConfig = DEFAULT_CONFIG, tol: float = 1e-7) -> AuditReport:
    """eta_kn(s) - lambda eta_kn(1-s) against
    sum_{n>=1} b_n [lambda eta_kn(1-s+2nu n) - eta_kn(s+2nu n)].

    The right side is truncated where the inversion would be; the dropped
    tail is sum_{n>N} b_n (lambda - 1) times the deep-shift plateau.
    """
    s = as_complex(s)
    if table is None:
        table = coefficient_table(p.kappa)
    lam = lambda_factor(s)
    n_used, remainder = inversion_order(table, cfg.tol)
    shifts = [s + 2.0 * p.nu * n for n in range(n_used + 1)]
    mirrored = [1.0 - s + 2.0 * p.nu * n for n in range(n_used + 1)]
    vals = [v.value for v in eta_embedding_many(shifts + mirrored, p, cfg)]
    left_side = vals[0] - lam * vals[n_used + 1]
    terms = [table.b[n] * (lam * vals[n_used + 1 + n] - vals[n]) for n in range(1, n_used + 1)]
    plateau = b_ratio(1.0, p.kappa)
    right_side = math.fsum(t.real for t in terms) + 1j * math.fsum(t.imag for t in terms)
    right_side += remainder * plateau * (lam - 1.0)
    return make_report(
        f"embed_functional[kappa={p.kappa:g},nu={p.nu:g},s={_fmt(s)}]",
        "eta_kn(s) - lambda(s) eta_kn(1-s) = sum_{n>=1} b_n [lambda(s) eta_kn(1-s+2nu n) - eta_kn(s+2nu n)]",
        {"s": s, "kappa": p.kappa, "nu": p.nu}, left_side, right_side,
        abs(left_side - right_side), tol, detail={"terms": n_used + 1})


# -- statements at zeros -------------------------------------------------------------------

def ratio_limit_audit(z, nu: float, kappa_list: Sequence[float],
                      cfg: EvalConfig = DEFAULT_CONFIG, tol: float = 1e-4) -> AuditReport:
    """eta_kn(s*)/eta_kn(1-s*) -> eta(s*+2nu)/eta(1-s*+2nu) as kappa grows."""
    s = z.s if isinstance(z, ZeroRecord) else as_complex(z)
    if nu <= 0.5:
        raise ValueError("nu must exceed 1/2 so both shifted points lie in Re s > 1")
    ks = sorted(float(k) for k in kappa_list)
    top, bottom = (v.value for v in eta_many([s + 2.0 * nu, 1.0 - s + 2.0 * nu], cfg))
    target = top / bottom
    ratios = []
    for k in ks:
        num, den = (v.value for v in eta_embedding_many([s, 1.0 - s], EmbeddingParams(k, nu), cfg))
        if abs(den) < 1e-13:
            raise EtaError(f"embedding at 1-s* is {abs(den):.2e}; ratio undefined")
        ratios.append(num / den)
    return _limit_report(
        f"ratio_limit[t={s.imag:.6f},nu={nu:g}]",
        "eta_kn(s*)/eta_kn(1-s*) -> eta(s*+2nu)/eta(1-s*+2nu) as kappa -> inf",
        {"s": s, "nu": nu, "kappa": ks}, ratios, [target] * len(ks), ks, tol)


def shift_ratio_audit(z, nu_grid: Sequence[float], cfg: EvalConfig = DEFAULT_CONFIG,
                      on_line_tol: float = 1e-10) -> List[AuditReport]:
    """Measure eta(s*+2nu)/eta(1-s*+2nu) against lambda(s*).

    The full complex residual is recorded for every nu (informational). For
    a point on the critical line, 1 - s* = conj(s*), so the ratio is a
    value over its conjugate and |lambda| = 1 there; that modulus statement
    is judged pass/fail.
    """
    s = z.s if isinstance(z, ZeroRecord) else as_complex(z)
    lam = lambda_factor(s)
    nus = [float(v) for v in nu_grid]
    reports = []
    ratios = []
    for nu in nus:
        top, bottom = (v.value for v in eta_many([s + 2.0 * nu, 1.0 - s + 2.0 * nu], cfg))
        ratio = top / bottom
        ratios.append(ratio)
        reports.append(make_report(
            f"shift_ratio_claim[t={s.imag:.6f},sigma={s.real:.6f},nu={nu:g}]",
            "eta(s*+2nu)/eta(1-s*+2nu) = lambda(s*)", {"s": s, "nu": nu},
            ratio, lam, abs(ratio - lam), 0.0, kind=INFORMATIONAL,
            detail={"ratio_modulus": abs(ratio), "lambda_modulus": abs(lam),
                    "arg_difference": float(np.angle(ratio / lam))}))
    on_line = abs(s.real - 0.5) < 1e-8
    if nus:
        dev = max([abs(abs(r) - 1.0) for r in ratios] + [abs(abs(lam) - 1.0)])
        reports.append(make_report(
            f"shift_ratio_modulus[t={s.imag:.6f},sigma={s.real:.6f}]",
            "|eta(s*+2nu)/eta(1-s*+2nu)| = 1 = |lambda(s*)| on the critical line",
            {"s": s, "nu": nus}, max(abs(r) for r in ratios), abs(lam), dev, on_line_tol,
            kind=IDENTITY if on_line else INFORMATIONAL,
            detail={"ratio_moduli": [abs(r) for r in ratios], "lambda_modulus": abs(lam),
                    "modulus_spread": max(abs(r) for r in ratios) - min(abs(r) for r in ratios)}))
    return reports


def large_shift_asymptote(t_star: float, eps: float, nu: float) -> float:
    """|1 + 2 eps ln2 / (2^{1/2 + 2nu - eps + i t*} - 1)|."""
    z = complex(0.5 + 2.0 * nu - eps, t_star)
    return abs(1.0 + 2.0 * eps * math.log(2.0) / (2.0 ** z - 1.0))


def rh_consistency_audit(t_star: float, eps_list: Sequence[float], nu_grid: Sequence[float],
                         cfg: EvalConfig = DEFAULT_CONFIG, asymptote_nu_min: float = 5.0,
                         asymptote_tol: float = 1e-6) -> List[AuditReport]:
    """Per (eps, nu): direct |eta(1/2+2nu+it*+eps)/eta(1/2+2nu-it*-eps)|, the
    large-nu closed-form approximation of it, and |lambda(1/2+it*+eps)|.

    The approximation is judged against the direct value for nu >= 5; the
    comparison of the direct value with |lambda| (does it vary with nu?) is
    informational.
    """
    reports = []
    for eps in eps_list:
        if abs(eps) > 0.2:
            raise ValueError("|eps| must not exceed 0.2")
        lam_mod = abs(lambda_factor(complex(0.5 + eps, t_star)))
        direct = []
        for nu in nu_grid:
            top, bottom = (v.value for v in eta_many(
                [complex(0.5 + 2.0 * nu + eps, t_star), complex(0.5 + 2.0 * nu - eps, -t_star)], cfg))
            lhs = abs(top / bottom)
            approx = large_shift_asymptote(t_star, eps, nu)
            direct.append(lhs)
            judged = nu >= asymptote_nu_min
            reports.append(make_report(
                f"rh_asymptote[eps={eps:g},nu={nu:g}]",
                "|eta(1/2+2nu+it*+eps)/eta(1/2+2nu-it*-eps)| ~ |1 + 2 eps ln2/(2^(1/2+2nu-eps+it*) - 1)|",
                {"t_star": t_star, "eps": eps, "nu": nu}, lhs, approx, abs(lhs - approx),
                asymptote_tol, kind=ASYMPTOTIC if judged else INFORMATIONAL,
                detail={"lambda_modulus": lam_mod}))
        if direct:
            spread = max(direct) - min(direct)
            reports.append(make_report(
                f"rh_shift_profile[eps={eps:g}]",
                "|eta(1/2+2nu+it*+eps)/eta(1/2+2nu-it*-eps)| versus |lambda(1/2+it*+eps)| across nu",
                {"t_star": t_star, "eps": eps, "nu": list(nu_grid)}, direct[-1], lam_mod,
                max(abs(d - lam_mod) for d in direct), 0.0, kind=INFORMATIONAL,
                detail={"direct_moduli": direct, "spread_over_nu": spread}))
    return reports


# -- zeros ---------------------------------------------------------------------------------

def zero_reports(zeros: Sequence[ZeroRecord], window: Tuple[float, float],
                 rects: Sequence[Rect], cfg: EvalConfig = DEFAULT_CONFIG) -> List[AuditReport]:
    reports = []
    t0, t1 = window
    strip = Rect(0.01, 0.99, t0, t1)
    w = winding_number(strip, cfg)
    reports.append(make_report(
        f"zero_count[t={t0:g}..{t1:g}]", "refined zeros = argument-principle count",
        {"t_min": t0, "t_max": t1, "rect": [strip.sigma_min, strip.sigma_max, t0, t1]},
        len(zeros), round(w), abs(len(zeros) - round(w)), 0.0,
        detail={"winding": w, "zeros_t": [z.t for z in zeros]}))
    for z in zeros:
        tag = f"[t={z.t:.6f}]"
        b = refine_zero_bisect(z.t, cfg)
        reports.append(make_report("zero_newton_vs_bisect" + tag,
                                   "Newton and line-trace bisection agree", {"t0": z.t},
                                   z.t, b.t, abs(z.t - b.t), 1e-6))
        reports.append(make_report("zero_on_line" + tag, "Re s* = 1/2 (observed)",
                                   {"t0": z.t}, z.sigma, 0.5, abs(z.sigma - 0.5), 1e-6))
        q = quartet_check(z, cfg)
        reports.append(make_report("zero_quartet" + tag,
                                   "eta vanishes at s*, 1-s*, conj s*, 1-conj s*",
                                   {"s": z.s}, max(q), 0.0, max(q), 1e-9,
                                   detail={"residuals": list(q)}))
    for r in rects:
        w = winding_number(r, cfg)
        reports.append(make_report(
            f"winding_integrality[{r.sigma_min:g},{r.sigma_max:g},{r.t_min:g},{r.t_max:g}]",
            "winding number of eta around a rectangle is an integer",
            {"rect": [r.sigma_min, r.sigma_max, r.t_min, r.t_max]}, w, round(w),
            abs(w - round(w)), 0.05, detail={"count": round(w)}))
    return reports


# -- suite -------------------------------------------------------------------------------------

def _strip_points():
    return [complex(sig, t) for sig in (0.25, 0.5, 0.75) for t in (0.5, 3.0, 7.0, 14.0)]


DEFAULT_EMBED_CONFIGS = (
    (2.0, 1.0, 0.3 + 5j), (5.0, 0.6, 0.5 + 14j), (1.5, 1.0, 0.5 + 3j), (2.0, 0.6, 0.7 + 10j),
    (5.0, 2.0, 0.2 + 1j), (10.0, 1.0, 0.5 + 21j), (10.0, 0.75, 0.4 + 7j), (3.0, 1.5, 0.6 + 2j),
    (1.5, 2.0, 0.1 + 12j), (20.0, 0.6, 0.5 + 25j),
)


@dataclass(frozen=True)
class AuditConfig:
    """Grids for every check; empty tuples switch a family off."""

    fe_sigma: Tuple[float, float, int] = (-3.0, 4.0, 20)
    fe_t: Tuple[float, float, int] = (-30.0, 30.0, 10)
    coeff_kappas: Tuple[float, ...] = (1.5, 2.0, 5.0, 10.0)
    coeff_N: int = 25
    expansion_kappas: Tuple[float, ...] = (1.5, 2.0, 5.0, 10.0)
    expansion_nus: Tuple[float, ...] = (0.6, 1.0, 2.0)
    strip_points: Tuple[complex, ...] = tuple(_strip_points())
    limit_s: Tuple[complex, ...] = (2.0 + 0j,)
    limit_kappa_inf: Tuple[float, ...] = (10.0, 100.0, 1000.0)
    limit_kappa_zero: Tuple[float, ...] = (0.1, 0.01, 0.001)
    limit_nu_inf: Tuple[float, ...] = (5.0, 10.0, 20.0)
    limit_nu_zero: Tuple[float, ...] = (0.1, 0.01, 0.001)
    asym_kappas: Tuple[float, ...] = (10.0, 20.0, 40.0)
    asym_cases: Tuple[Tuple[complex, float], ...] = ((0.5 + 3j, 1.0),)
    embed_configs: Tuple[Tuple[float, float, complex], ...] = DEFAULT_EMBED_CONFIGS
    zero_window: Optional[Tuple[float, float]] = (10.0, 30.0)
    zero_rects: Tuple[Tuple[float, float, float, float], ...] = (
        (0.01, 0.99, 1.0, 10.0), (-5.0, -3.0, -1.0, 1.0), (-0.5, 1.5, 10.0, 30.0))
    ratio_cases: Tuple[Tuple[int, float], ...] = ((0, 1.0), (1, 0.75), (0, 2.0))
    ratio_kappas: Tuple[float, ...] = (10.0, 20.0, 40.0)
    shift_nus: Tuple[float, ...] = (0.75, 1.0, 2.0)
    shift_probe: Tuple[complex, ...] = (0.4 + 14.13j,)
    rh_eps: Tuple[float, ...] = (0.0, 0.1)
    rh_nus: Tuple[float, ...] = (1.0, 2.0, 5.0, 10.0)
    kmax: int = DEFAULT_CONFIG.kmax
    tol: float = DEFAULT_CONFIG.tol

    @classmethod
    def empty(cls) -> "AuditConfig":
        return cls(fe_sigma=(0.0, 0.0, 0), fe_t=(0.0, 0.0, 0), coeff_kappas=(),
                   expansion_kappas=(), expansion_nus=(), strip_points=(), limit_s=(),
                   asym_kappas=(), asym_cases=(), embed_configs=(), zero_window=None,
                   zero_rects=(), ratio_cases=(), ratio_kappas=(), shift_nus=(),
                   shift_probe=(), rh_eps=(), rh_nus=())

    def eval_config(self) -> EvalConfig:
        return EvalConfig(kmax=self.kmax, tol=self.tol)

    def to_dict(self) -> Dict:
        return _jsonable(asdict(self))

    def digest(self) -> str:
        text = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()

    def fe_points(self) -> List[complex]:
        s0, s1, ns = self.fe_sigma
        t0, t1, nt = self.fe_t
        return [complex(sig, t) for sig in np.linspace(s0, s1, int(ns))
                for t in np.linspace(t0, t1, int(nt))]


SUITES = ("identities", "asymptotics", "zeros", "claims")


def _guard(check_id: str, anchor: str, inputs: Dict, fn: Callable[[], List[AuditReport]]):
    """Run ``fn``; a package error becomes a single skipped report."""
    def run():
        try:
            return fn()
        except EtaError as exc:
            return [skipped_report(check_id, anchor, inputs, exc)]
    return run


def _needs_zeros(config: AuditConfig, suites: Sequence[str]) -> bool:
    if not config.zero_window:
        return False
    return ("zeros" in suites
            or ("asymptotics" in suites and bool(config.ratio_kappas and config.ratio_cases))
            or ("claims" in suites and bool(config.shift_nus or (config.rh_eps and config.rh_nus))))


def _tasks(config: AuditConfig, suites: Sequence[str],
           zs: Sequence[ZeroRecord]) -> List[Callable[[], List[AuditReport]]]:
    cfg = config.eval_config()
    tasks = []

    if "identities" in suites:
        pts = config.fe_points()
        if pts:
            tasks.append(_guard("functional_equation", "eta(s) = lambda(s) eta(1-s)", {},
                                lambda: [functional_equation_audit(pts, cfg)]))
        for k in config.coeff_kappas:
            tasks.append(_guard(f"coefficients[kappa={k:g}]", "coefficient identities",
                                {"kappa": k}, lambda k=k: coefficient_reports(k, config.coeff_N)))
        if config.strip_points:
            for k in config.expansion_kappas:
                for nu in config.expansion_nus:
                    tasks.append(_guard(
                        f"expansion[kappa={k:g},nu={nu:g}]", "shift expansion and inversion",
                        {"kappa": k, "nu": nu},
                        lambda k=k, nu=nu: expansion_reports(k, nu, config.strip_points, cfg=cfg)))
        for k, nu, s in config.embed_configs:
            tasks.append(_guard(f"embed_functional[kappa={k:g},nu={nu:g},s={_fmt(s)}]",
                                "embedding functional relation", {"kappa": k, "nu": nu, "s": s},
                                lambda k=k, nu=nu, s=s: [embed_functional_residual(
                                    s, EmbeddingParams(k, nu), coefficient_table(k), cfg)]))
    if "asymptotics" in suites:
        for s in config.limit_s:
            def limits(s=s):
                # small-kappa limit at nu = 2: with nu = 1 the m = 1 summand
                # sits on the kernel edge (reported separately)
                return [limit_audit(s, 1.0, config.limit_kappa_inf, "kappa_inf", cfg),
                        limit_audit(s, 2.0, config.limit_kappa_zero, "kappa_zero", cfg),
                        nu_limit_audit(s, 1.0, config.limit_nu_inf, "nu_inf", cfg),
                        nu_limit_audit(s, 1.0, config.limit_nu_zero, "nu_zero", cfg),
                        kappa_zero_edge_report(s, config.limit_kappa_zero, cfg)]
            tasks.append(_guard(f"limits[s={_fmt(s)}]", "embedding limits", {"s": s}, limits))
        if config.asym_kappas:
            for s, nu in config.asym_cases:
                tasks.append(_guard(f"asymptotic_order[nu={nu:g},s={_fmt(s)}]",
                                    "large-kappa expansion", {"s": s, "nu": nu},
                                    lambda s=s, nu=nu: asymptotic_order(s, nu, config.asym_kappas, cfg)))
        if config.ratio_kappas:
            for idx, nu in config.ratio_cases:
                if idx < len(zs):
                    tasks.append(_guard(
                        f"ratio_limit[t={zs[idx].t:.6f},nu={nu:g}]", "ratio limit at a zero",
                        {"t": zs[idx].t, "nu": nu},
                        lambda z=zs[idx], nu=nu: [ratio_limit_audit(z, nu, config.ratio_kappas, cfg)]))

    if "zeros" in suites and config.zero_window:
        rects = [Rect(*r) for r in config.zero_rects]
        tasks.append(_guard("zeros", "zero checks", {},
                            lambda: zero_reports(zs, config.zero_window, rects, cfg)))

    if "claims" in suites:
        if config.shift_nus:
            for z in zs:
                tasks.append(lambda z=z: shift_ratio_audit(z, config.shift_nus, cfg))
            for probe in config.shift_probe:
                tasks.append(lambda probe=probe: shift_ratio_audit(probe, config.shift_nus, cfg))
        if config.rh_eps and config.rh_nus and zs:
            tasks.append(lambda: rh_consistency_audit(zs[0].t, config.rh_eps, config.rh_nus, cfg))
    return tasks


def summarize(reports: Sequence[AuditReport]) -> Dict:
    counts = {"pass": 0, "fail": 0, "informational": 0, "skipped": 0}
    for r in reports:
        counts[r.verdict] += 1
    counts["total"] = len(reports)
    counts["failed_checks"] = [r.check_id for r in reports if r.verdict == "fail"]
    counts["skipped_checks"] = [r.check_id for r in reports if r.verdict == "skipped"]
    return counts


@dataclass
class AuditResult:
    config: AuditConfig
    suites: Tuple[str, ...]
    reports: List[AuditReport]

    @property
    def summary(self) -> Dict:
        return summarize(self.reports)

    @property
    def ok(self) -> bool:
        return self.summary["fail"] == 0

    def to_dict(self) -> Dict:
        return {"version": __version__, "config_digest": self.config.digest(),
                "suites": list(self.suites), "summary": self.summary,
                "reports": [r.to_dict() for r in self.reports]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def run_suite(config: AuditConfig = AuditConfig(), suites: Sequence[str] = SUITES,
              threads: int = 1) -> AuditResult:
    """Run the selected check families; reports come back sorted by check_id.

    Zeros are found once up front and shared by the threaded tasks.
    """
    bad = [s for s in suites if s not in SUITES]
    if bad:
        raise ValueError(f"unknown suite(s) {bad}; choose from {SUITES}")
    zs = (find_zeros(*config.zero_window, cfg=config.eval_config(), threads=threads)
          if _needs_zeros(config, suites) else [])
    tasks = _tasks(config, tuple(suites), zs)
    if threads > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda f: f(), tasks))
    else:
        parts = [f() for f in tasks]
    reports = sorted((r for part in parts for r in part), key=lambda r: r.check_id)
    return AuditResult(config, tuple(suites), reports)
