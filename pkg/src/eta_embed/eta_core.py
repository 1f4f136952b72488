"""Dirichlet eta via the globally convergent Euler-transformed double series.

    eta(s) = sum_k f_k(s),   f_k(s) = 2^{-k-1} sum_{m<=k} C(k,m) (-1)^m (m+1)^{-s}

The k-sum is truncated adaptively. Every evaluator here, including the
embedding in :mod:`eta_embed.embedding`, goes through :func:`euler_series`,
which evaluates a batch of points at once.
"""

from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, List

import numpy as np

from .errors import AccuracyError, DomainError, SingularityError, UsageError
from .numkernel import (UNIT_ROUNDOFF, AccumMode, as_complex, log_cospi,
                        log_gamma, log_sinpi, sinpi, sum_axis0)

LN2 = math.log(2.0)
LNPI = math.log(math.pi)
TWO_PI = 2.0 * math.pi

SINGULAR_TOL = 1e-10


@dataclass(frozen=True)
class EvalConfig:
    """Truncation policy for the Euler double series.

    kmax caps the number of outer terms f_0..f_{kmax-1}; tol is the target
    absolute error (the stop rule wants three consecutive |f_k| < tol/4).
    """

    kmax: int = 160
    tol: float = 1e-14
    mode: AccumMode = AccumMode.COMPENSATED

    def __post_init__(self):
        if isinstance(self.kmax, bool) or not isinstance(self.kmax, int):
            raise UsageError(f"kmax must be an integer, got {self.kmax!r}")
        if not 8 <= self.kmax <= 512:
            raise UsageError(f"kmax must lie in [8, 512], got {self.kmax}")
        if not (math.isfinite(self.tol) and self.tol >= 1e-15):
            raise UsageError(f"tol must be >= 1e-15, got {self.tol!r}")
        object.__setattr__(self, "mode", AccumMode.parse(self.mode))


DEFAULT_CONFIG = EvalConfig()


@dataclass(frozen=True)
class EtaValue:
    value: complex
    est_error: float
    terms_used: int


@lru_cache(maxsize=8)
def euler_matrix(kmax: int) -> np.ndarray:
    """Lower-triangular W[k, m] = C(k, m) (-1)^m / 2^{k+1}, k, m < kmax.

    Binomials come from the float ratio update C(k,m+1) = C(k,m)(k-m)/(m+1);
    factorials would overflow long before k = 512.
    """
    w = np.zeros((kmax, kmax))
    for k in range(kmax):
        c = 2.0 ** (-k - 1)
        for m in range(k + 1):
            w[k, m] = -c if m % 2 else c
            c = c * (k - m) / (m + 1)
    w.setflags(write=False)
    return w


@lru_cache(maxsize=8)
def _euler_matrix_sq(kmax: int) -> np.ndarray:
    sq = euler_matrix(kmax) ** 2
    sq.setflags(write=False)
    return sq


@dataclass
class SeriesResult:
    values: np.ndarray
    est_errors: np.ndarray
    terms_used: np.ndarray
    converged: np.ndarray
    points: np.ndarray = field(repr=False)

    def as_eta_values(self) -> List[EtaValue]:
        return [EtaValue(complex(v), float(e), int(n))
                for v, e, n in zip(self.values, self.est_errors, self.terms_used)]

    def raise_if_unconverged(self, what="eta"):
        bad = np.flatnonzero(~self.converged)
        if bad.size:
            i = int(bad[0])
            raise AccuracyError(
                f"{what} series did not converge at s={complex(self.points[i])!r} "
                f"within kmax terms (est_error={self.est_errors[i]:.3e})",
                value=complex(self.values[i]), est_error=float(self.est_errors[i]))


def _first_run_of_three(small: np.ndarray) -> np.ndarray:
    # small: (K, S) boolean -> first k >= 2 with small[k-2:k+1] all true, else -1
    run = small[2:] & small[1:-1] & small[:-2]
    hit = run.any(axis=0)
    first = np.argmax(run, axis=0) + 2
    return np.where(hit, first, -1)


def euler_series(points, cfg: EvalConfig = DEFAULT_CONFIG, weights=None,
                 derivative: bool = False) -> SeriesResult:
    """Evaluate sum_k 2^{-k-1} sum_m C(k,m)(-1)^m w_m g_m(s) at many points.

    g_m(s) = (m+1)^{-s}, or -ln(m+1) (m+1)^{-s} when ``derivative`` is set.
    ``weights`` (length >= kmax) multiplies each m-summand; ``None`` gives eta.

    The stop threshold for |f_k| is max(tol/4, 4*noise_k), where noise_k is
    the root-sum-square rounding level of the inner sum; below that level f_k
    cannot be resolved, which matters for Re s < 0 where the inner terms
    grow like (m+1)^{-Re s}.
    """
    pts = np.atleast_1d(np.asarray(points, dtype=complex))
    if not np.all(np.isfinite(pts)):
        raise DomainError("non-finite evaluation point")
    kmax = cfg.kmax
    w = euler_matrix(kmax)
    lm = np.log(np.arange(1, kmax + 1, dtype=float))
    p = np.exp(-np.outer(lm, pts))  # (m, S)
    # relative error of a computed power grows with |s ln(m+1)| (phase)
    sens = np.abs(p) * (1.0 + np.outer(lm, np.abs(pts)))
    if derivative:
        p = p * (-lm)[:, None]
        sens = sens * lm[:, None]
    if weights is not None:
        wt = np.asarray(weights, dtype=float)[:kmax]
        p = p * wt[:, None]
        sens = sens * np.abs(wt)[:, None]

    if cfg.mode is AccumMode.PLAIN:
        f = w @ p
    else:
        hi = np.zeros_like(p)
        lo = np.zeros_like(p)
        dd = cfg.mode is AccumMode.DOUBLE_DOUBLE
        for m in range(kmax):
            x = w[m:, m, None] * p[m][None, :]
            h = hi[m:]
            s = h + x
            bp = s - h
            e = (h - (s - bp)) + (x - bp)
            if dd:
                e = e + lo[m:]
                hs = s + e
                lo[m:] = e - (hs - s)
                hi[m:] = hs
            else:
                hi[m:] = s
                lo[m:] += e
        f = hi + lo

    noise = UNIT_ROUNDOFF * np.sqrt(_euler_matrix_sq(kmax) @ (sens ** 2))
    absf = np.abs(f)
    small = absf < np.maximum(cfg.tol / 4.0, 4.0 * noise)
    stop = _first_run_of_three(small)
    converged = stop >= 0
    stop = np.where(converged, stop, kmax - 1)

    k = np.arange(kmax)[:, None]
    mask = k <= stop[None, :]
    values = sum_axis0(np.where(mask, f, 0.0), cfg.mode)

    cols = np.arange(pts.size)
    last3 = sum(absf[np.maximum(stop - i, 0), cols] for i in range(3))
    tail = absf[stop, cols]
    rounding = 4.0 * np.sqrt(np.sum(np.where(mask, noise ** 2, 0.0), axis=0))
    outer = UNIT_ROUNDOFF * np.sum(np.where(mask, absf, 0.0), axis=0)
    est = last3 + tail + rounding + outer
    return SeriesResult(values=values, est_errors=est, terms_used=stop + 1,
                        converged=converged, points=pts)


CHUNK = 64


def parallel_series(points, cfg: EvalConfig = DEFAULT_CONFIG, weights=None,
                    threads: int = 1, derivative: bool = False) -> SeriesResult:
    """:func:`euler_series` over fixed 64-point chunks, optionally threaded.

    The chunking never depends on ``threads``, so every point goes through
    identical array shapes and the result is bit-identical for any thread
    count.
    """
    pts = np.atleast_1d(np.asarray(points, dtype=complex))
    if isinstance(threads, bool) or not isinstance(threads, int) or threads < 1:
        raise UsageError(f"threads must be a positive integer, got {threads!r}")
    chunks = [pts[i:i + CHUNK] for i in range(0, pts.size, CHUNK)]
    if not chunks:
        empty = np.zeros(0)
        return SeriesResult(empty.astype(complex), empty, empty.astype(int),
                            empty.astype(bool), pts)

    def run(c):
        return euler_series(c, cfg, weights=weights, derivative=derivative)

    if threads == 1 or len(chunks) == 1:
        parts = [run(c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, chunks))
    return SeriesResult(values=np.concatenate([r.values for r in parts]),
                        est_errors=np.concatenate([r.est_errors for r in parts]),
                        terms_used=np.concatenate([r.terms_used for r in parts]),
                        converged=np.concatenate([r.converged for r in parts]),
                        points=pts)


def eta_many(points: Iterable, cfg: EvalConfig = DEFAULT_CONFIG) -> List[EtaValue]:
    """Batch version of :func:`eta`; raises on the first unconverged point."""
    res = euler_series([as_complex(s) for s in points], cfg)
    res.raise_if_unconverged()
    return res.as_eta_values()


def eta(s, cfg: EvalConfig = DEFAULT_CONFIG) -> EtaValue:
    """Dirichlet eta at one point.

    >>> round(eta(1).value.real, 12)
    0.693147180560
    """
    return eta_many([s], cfg)[0]


def eta_derivative(s, cfg: EvalConfig = DEFAULT_CONFIG) -> EtaValue:
    """eta'(s) by term-wise differentiation of the double series."""
    res = euler_series([as_complex(s)], cfg, derivative=True)
    res.raise_if_unconverged("eta'")
    return res.as_eta_values()[0]


# -- functional equation -------------------------------------------------------

def _log_one_minus_pow2(w: complex) -> complex:
    """log(1 - 2^w) with the phase of w ln 2 reduced mod 2 pi first."""
    z = w * LN2
    z = complex(z.real, math.remainder(z.imag, TWO_PI))
    if abs(z) < 1e-4:
        # 1 - e^z = -z (1 + z/2 + z^2/6 + z^3/24)
        v = -z * (1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0)))
    else:
        v = 1.0 - cmath.exp(z)
    if v == 0:
        return None
    return cmath.log(v)


def check_lambda_singular(s: complex) -> None:
    """Raise SingularityError if s is within 1e-10 of where lambda is undefined."""
    if abs(s - 1.0) <= SINGULAR_TOL:
        raise SingularityError(f"lambda(s) is singular at s=1 (got {s!r})")
    n = round(s.imag * LN2 / TWO_PI)
    if abs(s - complex(0.0, TWO_PI * n / LN2)) <= SINGULAR_TOL:
        raise SingularityError(f"1 - 2^s vanishes near s={s!r} (n={n})")
    r = round(s.real)
    if r >= 3 and r % 2 == 1 and abs(s - r) <= SINGULAR_TOL:
        raise SingularityError(f"Gamma(1-s) has an uncancelled pole at s={r}")


def lambda_factor(s) -> complex:
    """lambda(s) with eta(s) = lambda(s) eta(1-s).

    lambda(s) = (1-2^{1-s})/(1-2^s) 2^s pi^{s-1} sin(pi s/2) Gamma(1-s),
    assembled from logarithms of each factor and exponentiated once. For
    Re s > 1/2 the pair sin(pi s/2) Gamma(1-s) is replaced through the
    reflection formula by pi / (2 cos(pi s/2) Gamma(s)).
    """
    s = as_complex(s)
    check_lambda_singular(s)
    log_num = _log_one_minus_pow2(1.0 - s)
    if log_num is None:
        return 0j
    log_den = _log_one_minus_pow2(s)
    if s.real <= 0.5:
        if sinpi(s / 2.0) == 0:
            return 0j
        trig_gamma = log_sinpi(s / 2.0) + log_gamma(1.0 - s)
    else:
        trig_gamma = LNPI - LN2 - log_cospi(s / 2.0) - log_gamma(s)
    total = log_num - log_den + s * LN2 + (s - 1.0) * LNPI + trig_gamma
    return cmath.exp(total)


def functional_residual(s, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """|eta(s) - lambda(s) eta(1 - s)|."""
    s = as_complex(s)
    lam = lambda_factor(s)
    left, right = eta_many([s, 1.0 - s], cfg)
    return abs(left.value - lam * right.value)


def functional_residuals(points, cfg: EvalConfig = DEFAULT_CONFIG,
                         threads: int = 1) -> np.ndarray:
    """Batch :func:`functional_residual`; eta(s) and eta(1-s) in one pass."""
    pts = [as_complex(s) for s in points]
    lams = [lambda_factor(s) for s in pts]
    res = parallel_series(pts + [1.0 - s for s in pts], cfg, threads=threads)
    res.raise_if_unconverged()
    n = len(pts)
    return np.array([abs(res.values[i] - lams[i] * res.values[n + i]) for i in range(n)])


# -- independent oracle ----------------------------------------------------------

def eta_oracle(s, nterms: int = 64) -> complex:
    """Alternating Dirichlet series with iterated averaging of partial sums.

    Independent of the Euler double series: partial sums S_N of
    sum (-1)^{m-1} m^{-s} are formed directly up to N = n0 + nterms, with
    n0 = max(nterms, 2|Im s|) so the terms are no longer oscillating on the
    unit scale; the last nterms+1 partial sums are then averaged pairwise
    nterms times. Error below 1e-10 for Re s >= 0.5, |Im s| <= 50,
    nterms >= 64.
    """
    s = as_complex(s)
    if s.real <= 0.05:
        raise DomainError(f"eta_oracle needs Re s > 0.05, got {s!r}")
    if nterms < 1:
        raise UsageError("nterms must be positive")
    n0 = max(nterms, int(math.ceil(2.0 * abs(s.imag))))
    m = np.arange(1, n0 + nterms + 1, dtype=float)
    sign = np.where(m % 2 == 1, 1.0, -1.0)
    terms = sign * np.exp(-s * np.log(m))
    partial = np.cumsum(terms)[n0 - 1:]
    for _ in range(nterms):
        partial = 0.5 * (partial[:-1] + partial[1:])
    return complex(partial[0])
