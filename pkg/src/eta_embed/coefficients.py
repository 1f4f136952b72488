"""Shift-expansion coefficients linking eta and eta_{kappa,nu}.

For kappa > 3/pi

    eta_{kappa,nu}(s) = sum_n a_n(kappa) eta(s + 2 nu n)
    eta(s)            = sum_n b_n(kappa) eta_{kappa,nu}(s + 2 nu n)

where a_n comes from the Bernoulli (tanh Maclaurin) series and b is the
convolution inverse of a.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from typing import List, Optional, Tuple

from .embedding import (EXPANSION_THRESHOLD, EmbeddingParams, b_ratio,
                        b_ratio_minus_one, embedding_weights)
from .errors import AccuracyError, ConsistencyError, DomainError, UsageError
from .eta_core import DEFAULT_CONFIG, EtaValue, EvalConfig, parallel_series
from .numkernel import accumulate, as_complex, bernoulli_even

KAPPA_MARGIN = 0.01
MAX_N = 64
J_CAP = 200
DEFAULT_N = 32
TAIL_TERMS = 8


@dataclass(frozen=True)
class CoeffTable:
    kappa: float
    a: Tuple[float, ...]
    b: Optional[Tuple[float, ...]]
    N: int
    jcap: int
    tail_bound: float

    def truncated(self, n: int) -> "CoeffTable":
        """Copy keeping only indices 0..n."""
        if not 0 <= n <= self.N:
            raise UsageError(f"cannot truncate a table of order {self.N} to {n}")
        b = None if self.b is None else self.b[:n + 1]
        dropped = sum(abs(x) for x in self.a[n + 1:])
        return replace(self, a=self.a[:n + 1], b=b, N=n,
                       tail_bound=self.tail_bound + dropped)

    def to_dict(self) -> dict:
        return {"kappa": self.kappa, "N": self.N, "a": list(self.a),
                "b": None if self.b is None else list(self.b),
                "tail_bound": self.tail_bound}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "CoeffTable":
        d = json.loads(text)
        b = d.get("b")
        return cls(kappa=float(d["kappa"]), a=tuple(float(x) for x in d["a"]),
                   b=None if b is None else tuple(float(x) for x in b),
                   N=int(d["N"]), jcap=int(d.get("jcap", 0)),
                   tail_bound=float(d["tail_bound"]))


def check_kappa_region(kappa: float) -> float:
    kappa = float(kappa)
    if not math.isfinite(kappa) or kappa <= EXPANSION_THRESHOLD + KAPPA_MARGIN:
        raise DomainError(
            f"kappa={kappa!r} is outside the expansion region: the shift expansion "
            f"needs kappa > 3/pi = {EXPANSION_THRESHOLD:.6f} "
            f"(enforced with margin {KAPPA_MARGIN})")
    return kappa


def decay_rate(kappa: float) -> float:
    """Envelope decay rate of |a_n| per step, 1/|y0|^2 with y0 = -1/2 + i pi kappa/2.

    y0 is the singularity of B_kappa(y) nearest the origin; a_n are the
    Taylor coefficients of B_kappa(y)/B_kappa(0) in y^2.
    """
    return 4.0 / (1.0 + (math.pi * kappa) ** 2)


def _a_single(n: int, kappa: float, tol: float):
    bt = bernoulli_even(J_CAP)
    x = 1.0 / (2.0 * kappa)
    x2 = x * x
    scale = kappa ** (-2 * n) / math.tanh(x)  # (2x)^{2n} / tanh(x)
    binom = 2.0 * n + 1.0  # C(2j-1, 2n) at j = n+1
    xpow = x  # x^{2(j-n)-1}
    terms = []
    partial = 0.0
    for j in range(n + 1, J_CAP + 1):
        term = bt.tanh_coeff(j) * binom * xpow * scale
        terms.append(term)
        partial = math.fsum(terms)
        if term == 0.0 or (j >= n + 4 and abs(term) < tol * abs(partial)):
            return partial, j
        binom *= (2.0 * j + 1.0) * (2.0 * j) / ((2.0 * j + 1.0 - 2.0 * n) * (2.0 * j - 2.0 * n))
        xpow *= x2
    raise AccuracyError(f"a_{n}(kappa={kappa}) j-series not converged by j={J_CAP}",
                        value=partial)


def a_coeffs(kappa: float, N: int = DEFAULT_N, tol: float = 1e-17) -> CoeffTable:
    """a_0..a_N from the Bernoulli series; the b side is left empty.

    a_n = (1/tanh(1/2k)) sum_{j>n} 2^{2n} (2^{2j}-1) B_{2j} / (j (2j-2n-1)! (2n)! k^{2j-1})

    Each j-series stops once |term| < tol |partial| (and j >= n+4).
    """
    kappa = check_kappa_region(kappa)
    if isinstance(N, bool) or not isinstance(N, int) or not 0 <= N <= MAX_N:
        raise UsageError(f"N must be an integer in [0, {MAX_N}], got {N!r}")
    a = []
    jcap = 0
    for n in range(N + 1):
        val, jused = _a_single(n, kappa, tol)
        a.append(val)
        jcap = max(jcap, jused)
    # |a_n| oscillates under its envelope: sum a few dropped terms directly,
    # then bound the rest geometrically from the largest of them; the factor 2
    # covers the relative error of tiny computed a_n
    extra = [abs(_a_single(n, kappa, tol)[0]) for n in range(N + 1, N + 1 + TAIL_TERMS)]
    q = decay_rate(kappa)
    tail = 2.0 * (math.fsum(extra) + max(extra[-4:]) * q / (1.0 - q))
    return CoeffTable(kappa=kappa, a=tuple(a), b=None, N=N, jcap=jcap, tail_bound=tail)


def convolution_residual(a, b) -> float:
    """max_n |sum_{k<=n} b_k a_{n-k} - delta_{n0}|."""
    worst = 0.0
    for n in range(min(len(a), len(b))):
        acc = math.fsum([b[k] * a[n - k] for k in range(n + 1)] + [-1.0 if n == 0 else 0.0])
        worst = max(worst, abs(acc))
    return worst


def b_coeffs(table: CoeffTable) -> CoeffTable:
    """Fill b with the convolution inverse: b_0 = 1, b_k = -sum_{j=1}^{k} a_j b_{k-j}."""
    if not table.a:
        raise UsageError("table has no a coefficients")
    a = table.a
    b = [1.0]
    for k in range(1, table.N + 1):
        b.append(-math.fsum(a[j] * b[k - j] for j in range(1, k + 1)))
    res = convolution_residual(a, b)
    if res > 1e-10:
        raise ConsistencyError(f"convolution residual {res:.3e} exceeds 1e-10")
    return replace(table, b=tuple(b))


def coefficient_table(kappa: float, N: int = DEFAULT_N, tol: float = 1e-17) -> CoeffTable:
    """a and b sides together."""
    return b_coeffs(a_coeffs(kappa, N, tol))


# -- evaluators ------------------------------------------------------------------

def _check_nu(nu: float) -> float:
    nu = float(nu)
    if not (math.isfinite(nu) and nu > 0):
        raise UsageError(f"nu must be finite and positive, got {nu!r}")
    return nu


def _expansion_order(table: CoeffTable, tol: float) -> int:
    for n in range(1, table.N + 1):
        if 2.0 * abs(table.a[n]) < tol:
            return n
    return table.N


def expansion_eval_many(points, table: CoeffTable, nu: float,
                        cfg: EvalConfig = DEFAULT_CONFIG, threads: int = 1) -> List[EtaValue]:
    """sum_{n<=N} a_n eta(s + 2 nu n) at each point.

    N is the first index with 2|a_N| < tol (|eta| stays below 2 on the deep
    right shifts), or the table end. ``terms_used`` is N + 1.
    """
    pts = [as_complex(s) for s in points]
    nu = _check_nu(nu)
    a = table.a
    n_used = _expansion_order(table, cfg.tol)
    shifts = [s + 2.0 * nu * n for s in pts for n in range(n_used + 1)]
    res = parallel_series(shifts, cfg, threads=threads)
    res.raise_if_unconverged()
    tail = 2.0 * (sum(abs(x) for x in a[n_used + 1:]) + table.tail_bound)
    out = []
    for i in range(len(pts)):
        vals = res.values[i * (n_used + 1):(i + 1) * (n_used + 1)]
        errs = res.est_errors[i * (n_used + 1):(i + 1) * (n_used + 1)]
        value = accumulate([a[n] * complex(vals[n]) for n in range(n_used + 1)], cfg.mode)
        propagated = sum(abs(a[n]) * float(errs[n]) for n in range(n_used + 1))
        out.append(EtaValue(value, propagated + tail, n_used + 1))
    return out


def expansion_eval(s, table: CoeffTable, nu: float,
                   cfg: EvalConfig = DEFAULT_CONFIG) -> EtaValue:
    """eta_{kappa,nu}(s) rebuilt from shifted eta values."""
    return expansion_eval_many([s], table, nu, cfg)[0]


def b_sum_closed_form(kappa: float) -> float:
    """sum_{n>=1} b_n = B_k(0)/B_k(1) - 1."""
    return -b_ratio_minus_one(1.0, kappa) / b_ratio(1.0, kappa)


def a_sum_closed_form(kappa: float) -> float:
    """sum_{n>=1} a_n = B_k(1)/B_k(0) - 1."""
    return b_ratio_minus_one(1.0, kappa)


def inversion_remainder(table: CoeffTable, n: int) -> float:
    """sum_{k>n} b_k, from the closed-form total minus the partial sum."""
    return math.fsum([b_sum_closed_form(table.kappa)] + [-x for x in table.b[1:n + 1]])


def inversion_order(table: CoeffTable, tol: float):
    """(N, remainder): first N whose tail correction |remainder * plateau| < tol."""
    plateau = b_ratio(1.0, table.kappa)
    for n in range(0, table.N + 1):
        r = inversion_remainder(table, n)
        if abs(r * plateau) < tol:
            return n, r
    return table.N, inversion_remainder(table, table.N)


def inversion_eval_many(points, table: CoeffTable, nu: float,
                        cfg: EvalConfig = DEFAULT_CONFIG, threads: int = 1) -> List[EtaValue]:
    """sum_{n<=N} b_n eta_{kappa,nu}(s + 2 nu n) plus a tail correction.

    The remainder sum_{n>N} b_n is taken from the closed-form total; deep
    shifts of the embedding sit at the plateau B_k(1)/B_k(0), so the
    correction is remainder * plateau. N is the first index for which the
    correction drops below tol.
    """
    pts = [as_complex(s) for s in points]
    nu = _check_nu(nu)
    if table.b is None:
        table = b_coeffs(table)
    b = table.b
    plateau = b_ratio(1.0, table.kappa)
    n_used, remainder = inversion_order(table, cfg.tol)
    params = EmbeddingParams(table.kappa, nu)
    shifts = [s + 2.0 * nu * n for s in pts for n in range(n_used + 1)]
    res = parallel_series(shifts, cfg, weights=embedding_weights(params, cfg.kmax),
                          threads=threads)
    res.raise_if_unconverged("embedding")
    out = []
    for i in range(len(pts)):
        vals = res.values[i * (n_used + 1):(i + 1) * (n_used + 1)]
        errs = res.est_errors[i * (n_used + 1):(i + 1) * (n_used + 1)]
        terms = [b[n] * complex(vals[n]) for n in range(n_used + 1)]
        terms.append(remainder * plateau)
        value = accumulate(terms, cfg.mode)
        propagated = sum(abs(b[n]) * float(errs[n]) for n in range(n_used + 1))
        out.append(EtaValue(value, propagated + abs(remainder), n_used + 1))
    return out


def inversion_eval(s, table: CoeffTable, nu: float,
                   cfg: EvalConfig = DEFAULT_CONFIG) -> EtaValue:
    """eta(s) rebuilt from shifted embedding values."""
    return inversion_eval_many([s], table, nu, cfg)[0]


@dataclass(frozen=True)
class CoeffSums:
    kappa: float
    N: int
    a_sum_lhs: float
    a_sum_rhs: float
    b_sum_lhs: float
    b_sum_rhs: float
    a_residual: float
    b_residual: float
    a_tail_bound: float
    b_tail_bound: float


def coeff_sum_identities(kappa: float, N: int = 25,
                         table: Optional[CoeffTable] = None) -> CoeffSums:
    """Partial sums of a_n and b_n (n >= 1) against their closed forms."""
    if table is None:
        table = coefficient_table(kappa, N)
    elif table.b is None:
        table = b_coeffs(table)
    a_lhs = math.fsum(table.a[1:])
    b_lhs = math.fsum(table.b[1:])
    a_rhs = a_sum_closed_form(table.kappa)
    b_rhs = b_sum_closed_form(table.kappa)
    bl = [abs(x) for x in table.b[-2:]]
    q = bl[-1] / bl[0] if len(bl) == 2 and bl[0] > 0 else 0.0
    b_tail = bl[-1] * q / (1.0 - q) if q < 1 else math.inf
    return CoeffSums(kappa=table.kappa, N=table.N, a_sum_lhs=a_lhs, a_sum_rhs=a_rhs,
                     b_sum_lhs=b_lhs, b_sum_rhs=b_rhs,
                     a_residual=abs(a_lhs - a_rhs), b_residual=abs(b_lhs - b_rhs),
                     a_tail_bound=table.tail_bound, b_tail_bound=b_tail)
