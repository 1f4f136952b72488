"""Foundational numeric services.

Complex powers of real bases, complex log-gamma, exact even Bernoulli
numbers and accuracy-controlled summation. Everything here is pure; the
Bernoulli tables are immutable and cached.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from .errors import DomainError, PoleError, UsageError

ComplexValue = complex

UNIT_ROUNDOFF = 2.0 ** -53

POLE_TOL = 1e-12

EXACT_BERNOULLI_MAX = 60  # largest index 2j kept as an exact rational


class AccumMode(str, enum.Enum):
    PLAIN = "plain"
    COMPENSATED = "compensated"
    DOUBLE_DOUBLE = "double-double"

    @classmethod
    def parse(cls, value) -> "AccumMode":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower().replace("_", "-"))
        except ValueError:
            choices = ", ".join(m.value for m in cls)
            raise UsageError(f"unknown accumulation mode {value!r} (choose from {choices})")


def as_complex(s) -> complex:
    """Coerce ``s`` to ``complex`` and reject NaN/inf."""
    z = complex(s)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"non-finite argument {s!r}")
    return z


# -- powers ----------------------------------------------------------------

def complex_pow_real_base(base: float, s) -> complex:
    """Return ``base**s = exp(s * ln(base))`` for real ``base > 0``."""
    if not math.isfinite(base) or base <= 0.0:
        raise DomainError(f"base must be finite and positive, got {base!r}")
    s = as_complex(s)
    return cmath.exp(s * math.log(base))


# -- trigonometric helpers with exact argument reduction ---------------------

def sinpi(z) -> complex:
    """sin(pi*z), exact at integers of the real part."""
    z = complex(z)
    n = round(z.real)
    r = complex(z.real - n, z.imag)
    v = cmath.sin(math.pi * r)
    return -v if n % 2 else v


def cospi(z) -> complex:
    """cos(pi*z), exact at half-integers of the real part."""
    z = complex(z)
    return sinpi(complex(0.5 - z.real, -z.imag))


def _log_trig(w: complex, kind: str) -> complex:
    # log sin(w) / log cos(w) without overflow when |Im w| is large.
    if abs(w.imag) < 30.0:
        v = cmath.sin(w) if kind == "sin" else cmath.cos(w)
        if v == 0:
            raise PoleError(f"log of vanishing {kind} at {w!r}")
        return cmath.log(v)
    # the exponential with the growing modulus dominates
    if w.imag > 0:
        big = -1j * w  # e^{-iw} grows
        small = cmath.exp(2j * w)
    else:
        big = 1j * w
        small = cmath.exp(-2j * w)
    if kind == "sin":
        # sin w = (e^{iw} - e^{-iw}) / 2i
        pref = 0.5j if w.imag > 0 else -0.5j
        return big + cmath.log(pref) + cmath.log(1 - small)
    return big + math.log(0.5) + cmath.log(1 + small)


def log_sinpi(z) -> complex:
    z = complex(z)
    n = round(z.real)
    r = complex(z.real - n, z.imag)
    if r == 0:
        raise PoleError(f"sin(pi*z) vanishes at z={z!r}")
    out = _log_trig(math.pi * r, "sin")
    return out + 1j * math.pi if n % 2 else out


def log_cospi(z) -> complex:
    z = complex(z)
    return log_sinpi(complex(0.5 - z.real, -z.imag))


# -- log-gamma ---------------------------------------------------------------

_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _lanczos_log_gamma(s: complex) -> complex:
    # valid for Re s >= 1/2
    z = s - 1.0
    x = _LANCZOS_COEF[0]
    for i, c in enumerate(_LANCZOS_COEF[1:], start=1):
        x += c / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(x)


def log_gamma(s) -> complex:
    """Principal branch of log Gamma(s).

    Lanczos (g=7, 9 terms) for Re s >= 1/2. Further left the argument is
    shifted with the recurrence log Gamma(s) = log Gamma(s+n) - sum log(s+k);
    each log(s+k) is principal, so the result keeps the branch cut on the
    negative real axis.

    Raises
    ------
    PoleError
        If ``s`` is within ``1e-12`` of a non-positive integer.
    """
    s = as_complex(s)
    if s.real < 0.5:
        n = round(s.real)
        if n <= 0 and abs(s - n) < POLE_TOL:
            raise PoleError(f"log_gamma pole at s={s!r}")
        shift = int(math.ceil(0.5 - s.real))
        acc = 0j
        for k in range(shift):
            acc += cmath.log(s + k)
        return _lanczos_log_gamma(s + shift) - acc
    return _lanczos_log_gamma(s)


# -- Bernoulli numbers -------------------------------------------------------

@lru_cache(maxsize=None)
def _exact_bernoulli(nmax: int) -> Tuple[Fraction, ...]:
    # sum_{k=0}^{n} C(n+1, k) B_k = 0 for n >= 1, B_0 = 1
    b = [Fraction(1)]
    for n in range(1, nmax + 1):
        if n > 1 and n % 2:
            b.append(Fraction(0))
            continue
        acc = Fraction(0)
        c = 1  # C(n+1, 0)
        for k in range(n):
            acc += c * b[k]
            c = c * (n + 1 - k) // (k + 1)
        b.append(-acc / (n + 1))
    return tuple(b)


def zeta_even_direct(two_j: int) -> float:
    """zeta(2j) by direct summation, for 2j >= 12 (under 50 terms)."""
    if two_j < 2 or two_j % 2:
        raise UsageError("zeta_even_direct expects an even index >= 2")
    terms = []
    for n in range(1, 100_000):
        term = float(n) ** -two_j
        terms.append(term)
        if term < 1e-18:
            break
    return math.fsum(terms)


def bernoulli_zeta_route(two_j: int) -> float:
    """B_{2j} = (-1)^{j+1} 2 (2j)! zeta(2j) / (2 pi)^{2j}, computed in log space.

    Returns +-inf when the magnitude exceeds the float range.
    """
    j = two_j // 2
    log_mag = (math.log(2.0) + math.lgamma(two_j + 1.0)
               + math.log(zeta_even_direct(two_j)) - two_j * math.log(2.0 * math.pi))
    sign = 1.0 if j % 2 else -1.0
    if log_mag > 709.0:
        return sign * math.inf
    return sign * math.exp(log_mag)


@dataclass(frozen=True)
class BernoulliTable:
    """Even Bernoulli numbers B_0, B_2, ..., B_{2*jmax}.

    ``exact[j]`` is a ``Fraction`` for 2j <= 60 and ``None`` beyond;
    ``values[j]`` is the float projection (+-inf once |B_2j| leaves the
    double range, from 2j = 260 on).
    """

    jmax: int
    exact: Tuple[Optional[Fraction], ...]
    values: Tuple[float, ...]
    tanh_coeffs: Tuple[float, ...]

    def __getitem__(self, j: int) -> float:
        return self.values[j]

    def __len__(self) -> int:
        return self.jmax + 1

    def tanh_coeff(self, j: int) -> float:
        """2^{2j} (2^{2j} - 1) B_{2j} / (2j)!, the Maclaurin coefficient of
        x^{2j-1} in tanh(x). Finite for every j <= 200."""
        return self.tanh_coeffs[j]


@lru_cache(maxsize=None)
def bernoulli_even(jmax: int) -> BernoulliTable:
    """Table of even Bernoulli numbers up to B_{2*jmax}, 1 <= jmax <= 200."""
    if not isinstance(jmax, int) or not 1 <= jmax <= 200:
        raise UsageError(f"jmax must be an integer in [1, 200], got {jmax!r}")
    jexact = min(jmax, EXACT_BERNOULLI_MAX // 2)
    full = _exact_bernoulli(2 * jexact)
    exact = []
    values = []
    tanh_coeffs = []
    for j in range(jmax + 1):
        if j <= jexact:
            bj = full[2 * j]
            exact.append(bj)
            values.append(float(bj))
            if j == 0:
                tanh_coeffs.append(0.0)
            else:
                c = Fraction(4 ** j * (4 ** j - 1)) * bj / math.factorial(2 * j)
                tanh_coeffs.append(float(c))
        else:
            exact.append(None)
            values.append(bernoulli_zeta_route(2 * j))
            sign = 1.0 if j % 2 else -1.0
            # (-1)^{j+1} 2 zeta(2j) (1 - 4^{-j}) (2/pi)^{2j}
            mag = 2.0 * zeta_even_direct(2 * j) * (1.0 - 4.0 ** -j) * math.exp(
                2 * j * math.log(2.0 / math.pi))
            tanh_coeffs.append(sign * mag)
    return BernoulliTable(jmax=jmax, exact=tuple(exact), values=tuple(values),
                          tanh_coeffs=tuple(tanh_coeffs))


def bernoulli_recurrence_residual(nmax: int) -> Fraction:
    """Largest |sum_{k<=n} C(n+1,k) B_k| over 1 <= n <= nmax, in exact arithmetic."""
    b = _exact_bernoulli(nmax)
    worst = Fraction(0)
    for n in range(1, nmax + 1):
        acc = sum((math.comb(n + 1, k) * b[k] for k in range(n + 1)), Fraction(0))
        worst = max(worst, abs(acc))
    return worst


# -- summation ---------------------------------------------------------------

def _two_sum(a, b):
    s = a + b
    bp = s - a
    return s, (a - (s - bp)) + (b - bp)


def _sum_real(xs: Sequence[float], mode: AccumMode) -> float:
    if mode is AccumMode.PLAIN:
        total = 0.0
        for x in xs:
            total += x
        return total
    if mode is AccumMode.COMPENSATED:
        total = 0.0
        comp = 0.0
        for x in xs:
            total, err = _two_sum(total, x)
            comp += err
        return total + comp
    hi = 0.0
    lo = 0.0
    for x in xs:
        s, e = _two_sum(hi, x)
        e += lo
        hi = s + e
        lo = e - (hi - s)
    return hi + lo


def accumulate(terms: Iterable, mode=AccumMode.COMPENSATED) -> complex:
    """Sum complex ``terms`` in input order using ``mode``.

    ``compensated`` carries the TwoSum rounding errors in a second
    accumulator; ``double-double`` keeps a renormalised (hi, lo) pair.
    Real and imaginary parts are summed independently.
    """
    mode = AccumMode.parse(mode)
    zs = [complex(t) for t in terms]
    for z in zs:
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise DomainError("accumulate received a non-finite term")
    re = _sum_real([z.real for z in zs], mode)
    im = _sum_real([z.imag for z in zs], mode)
    return complex(re, im)


def _sum_axis0_real(a: np.ndarray, mode: AccumMode) -> np.ndarray:
    if mode is AccumMode.PLAIN:
        out = np.zeros(a.shape[1:])
        for row in a:
            out = out + row
        return out
    hi = np.zeros(a.shape[1:])
    lo = np.zeros(a.shape[1:])
    for row in a:
        s = hi + row
        bp = s - hi
        e = (hi - (s - bp)) + (row - bp)
        if mode is AccumMode.COMPENSATED:
            hi = s
            lo = lo + e
        else:
            e = e + lo
            hi = s + e
            lo = e - (hi - s)
    return hi + lo


def sum_axis0(a: np.ndarray, mode=AccumMode.COMPENSATED) -> np.ndarray:
    """Vectorised ``accumulate`` along axis 0 of a (possibly complex) array."""
    mode = AccumMode.parse(mode)
    a = np.asarray(a)
    if np.iscomplexobj(a):
        return _sum_axis0_real(a.real, mode) + 1j * _sum_axis0_real(a.imag, mode)
    return _sum_axis0_real(a, mode)
