"""Zeros of eta: critical-line scan, refinement, argument-principle counts."""

from __future__ import annotations

import cmath
import csv
import io
import json
import math
from dataclasses import asdict, dataclass
from typing import List, Sequence, Union

import numpy as np

from .errors import (ConvergenceError, DomainError, UsageError, WindingError,
                     ZeroOnBoundaryError)
from .eta_core import (DEFAULT_CONFIG, EvalConfig, eta, eta_derivative,
                       eta_many, lambda_factor, parallel_series)
from .numkernel import as_complex

T_CAP = 60.0
SCAN_THRESHOLD = 0.1
MAX_SCAN_STEP = 0.1
NEWTON_MAX_ITER = 50
NEWTON_TOL = 1e-10
ACCEPT_RESIDUAL = 1e-9
BOUNDARY_MIN_ABS = 1e-6
WINDING_SLACK = 0.05
CONTOUR_SPACING = 0.05
MIN_CONTOUR_STEP = 1e-9


@dataclass(frozen=True)
class ZeroRecord:
    sigma: float
    t: float
    residual: float
    method: str  # "newton" or "bisect"
    iterations: int

    @property
    def s(self) -> complex:
        return complex(self.sigma, self.t)


@dataclass(frozen=True)
class Rect:
    sigma_min: float
    sigma_max: float
    t_min: float
    t_max: float

    def __post_init__(self):
        vals = (self.sigma_min, self.sigma_max, self.t_min, self.t_max)
        if not all(math.isfinite(v) for v in vals):
            raise UsageError("rectangle bounds must be finite")
        if not (self.sigma_min < self.sigma_max and self.t_min < self.t_max):
            raise UsageError(f"empty rectangle {vals}")

    @classmethod
    def parse(cls, text: str) -> "Rect":
        """'smin,smax,tmin,tmax'."""
        parts = text.split(",")
        if len(parts) != 4:
            raise UsageError(f"rectangle needs 4 comma-separated numbers, got {text!r}")
        try:
            return cls(*(float(p) for p in parts))
        except ValueError as exc:
            raise UsageError(f"bad rectangle {text!r}: {exc}") from None


# -- scanning -------------------------------------------------------------------

def _check_scan_range(t_min, t_max, step):
    if not (0 < t_min < t_max <= T_CAP):
        raise UsageError(f"need 0 < t_min < t_max <= {T_CAP}, got [{t_min}, {t_max}]")
    if not (0 < step <= MAX_SCAN_STEP):
        raise UsageError(f"step must lie in (0, {MAX_SCAN_STEP}], got {step}")


def critical_line_grid(t_min: float, t_max: float, step: float) -> np.ndarray:
    count = int(math.floor((t_max - t_min) / step + 1e-9)) + 1
    return t_min + step * np.arange(count)


def scan_critical_line(t_min: float, t_max: float, step: float = 0.05,
                       cfg: EvalConfig = DEFAULT_CONFIG, threads: int = 1) -> List[float]:
    """Grid local minima of |eta(1/2 + it)| below 0.1, in ascending t.

    Minima closer than two grid steps are merged, keeping the smaller one.
    """
    _check_scan_range(t_min, t_max, step)
    ts = critical_line_grid(t_min, t_max, step)
    res = parallel_series(0.5 + 1j * ts, cfg, threads=threads)
    res.raise_if_unconverged()
    mag = np.abs(res.values)
    found = []
    for i in range(1, ts.size - 1):
        if mag[i] < SCAN_THRESHOLD and mag[i] < mag[i - 1] and mag[i] <= mag[i + 1]:
            if found and ts[i] - ts[found[-1]] < 2.0 * step:
                if mag[i] < mag[found[-1]]:
                    found[-1] = i
                continue
            found.append(i)
    return [float(ts[i]) for i in found]


# -- refinement -----------------------------------------------------------------

def refine_zero(t0: float, cfg: EvalConfig = DEFAULT_CONFIG, sigma0: float = 0.5) -> ZeroRecord:
    """Complex Newton s <- s - eta(s)/eta'(s) from sigma0 + i t0."""
    s = complex(sigma0, t0)
    trace = []
    for it in range(1, NEWTON_MAX_ITER + 1):
        f = eta(s, cfg).value
        trace.append((s, abs(f)))
        d = eta_derivative(s, cfg).value
        if abs(d) < 1e-300:
            raise ConvergenceError(f"eta' underflow at s={s!r}", trace)
        step = f / d
        s = s - step
        if abs(step) < 1e-13 * max(1.0, abs(s)):
            break
    else:
        raise ConvergenceError(f"Newton did not converge from t0={t0}", trace)
    residual = abs(eta(s, cfg).value)
    if residual >= NEWTON_TOL:
        raise ConvergenceError(f"Newton stalled at |eta|={residual:.3e}", trace)
    return ZeroRecord(sigma=s.real, t=s.imag, residual=residual, method="newton",
                      iterations=it)


def _sqrt_lambda(t: float, ref: complex = None) -> complex:
    r = cmath.sqrt(lambda_factor(complex(0.5, t)))
    if ref is not None and abs(r + ref) < abs(r - ref):
        r = -r
    return r


def line_trace(t: float, ref_root: complex, cfg: EvalConfig = DEFAULT_CONFIG):
    """Real value eta(1/2+it) / sqrt(lambda(1/2+it)), with the root branch
    chosen nearest ``ref_root``. Returns (value, root)."""
    root = _sqrt_lambda(t, ref_root)
    return (eta(complex(0.5, t), cfg).value * root.conjugate()).real, root


def refine_zero_bisect(t0: float, cfg: EvalConfig = DEFAULT_CONFIG,
                       half_width: float = 0.2, probe: float = 0.01) -> ZeroRecord:
    """Bisection on a sign change of the real line trace near t0.

    On sigma = 1/2, |lambda| = 1 and eta = lambda conj(eta), so eta/sqrt(lambda)
    is real; its sign changes mark zeros on the line. Branch continuity of
    the root is kept by always taking the root nearest the previous one.
    """
    root0 = _sqrt_lambda(t0)
    bracket = None
    # probe outward from t0 so the bracket nearest the guess wins
    for d in np.arange(probe, half_width + probe / 2, probe):
        for lo, hi in ((t0 - d, t0 - d + probe), (t0 + d - probe, t0 + d)):
            vl, rl = line_trace(lo, root0, cfg)
            vh, rh = line_trace(hi, rl, cfg)
            if vl == 0.0:
                return ZeroRecord(0.5, lo, abs(eta(complex(0.5, lo), cfg).value), "bisect", 0)
            if vl * vh < 0:
                bracket = (lo, hi, vl, rl)
                break
        if bracket:
            break
    if bracket is None:
        raise ConvergenceError(f"no sign change of the line trace within {half_width} of {t0}")
    lo, hi, vl, root = bracket
    it = 0
    while hi - lo > 1e-12 * max(1.0, abs(hi)) and it < 200:
        it += 1
        mid = 0.5 * (lo + hi)
        vm, rm = line_trace(mid, root, cfg)
        if vm == 0.0:
            lo = hi = mid
            break
        if (vm < 0) == (vl < 0):
            lo, vl, root = mid, vm, rm
        else:
            hi = mid
    t = 0.5 * (lo + hi)
    return ZeroRecord(sigma=0.5, t=t, residual=abs(eta(complex(0.5, t), cfg).value),
                      method="bisect", iterations=it)


def find_zeros(t_min: float, t_max: float, step: float = 0.05,
               cfg: EvalConfig = DEFAULT_CONFIG, threads: int = 1) -> List[ZeroRecord]:
    """Scan, refine each candidate by Newton, keep accepted records in [t_min, t_max]."""
    out = []
    for t0 in scan_critical_line(t_min, t_max, step, cfg, threads):
        z = refine_zero(t0, cfg)
        if z.residual < ACCEPT_RESIDUAL and t_min <= z.t <= t_max and 0 < z.sigma < 1:
            if not any(abs(z.t - o.t) < 1e-6 and abs(z.sigma - o.sigma) < 1e-6 for o in out):
                out.append(z)
    return sorted(out, key=lambda z: z.t)


# -- argument principle ---------------------------------------------------------

def _edge_points(a: complex, b: complex) -> np.ndarray:
    n = max(4, int(math.ceil(abs(b - a) / CONTOUR_SPACING)))
    return a + (b - a) * np.linspace(0.0, 1.0, n + 1)


def winding_number(rect: Rect, cfg: EvalConfig = DEFAULT_CONFIG, threads: int = 1) -> float:
    """Unrounded total change of arg eta around the rectangle, over 2 pi.

    Starts from a uniform sampling of the four edges and bisects any step
    whose phase jump is at least pi/2.
    """
    c = [complex(rect.sigma_min, rect.t_min), complex(rect.sigma_max, rect.t_min),
         complex(rect.sigma_max, rect.t_max), complex(rect.sigma_min, rect.t_max)]
    pts = np.concatenate([_edge_points(c[i], c[(i + 1) % 4])[:-1] for i in range(4)]
                         + [np.array([c[0]])])
    res = parallel_series(pts, cfg, threads=threads)
    res.raise_if_unconverged()
    vals = res.values
    while True:
        _check_boundary(pts, vals)
        dphi = np.angle(vals[1:] / vals[:-1])
        bad = np.flatnonzero(np.abs(dphi) >= math.pi / 2)
        if bad.size == 0:
            break
        if np.min(np.abs(pts[bad + 1] - pts[bad])) < MIN_CONTOUR_STEP:
            raise WindingError("contour refinement hit the minimum step; a zero is "
                               "probably on or very near the boundary")
        mids = 0.5 * (pts[bad] + pts[bad + 1])
        mres = parallel_series(mids, cfg, threads=threads)
        mres.raise_if_unconverged()
        pts = np.insert(pts, bad + 1, mids)
        vals = np.insert(vals, bad + 1, mres.values)
    return float(np.sum(dphi) / (2.0 * math.pi))


def _check_boundary(pts, vals):
    mags = np.abs(vals)
    i = int(np.argmin(mags))
    if mags[i] <= BOUNDARY_MIN_ABS:
        raise ZeroOnBoundaryError(
            f"|eta| = {mags[i]:.3e} at boundary point {complex(pts[i])!r}; "
            "move the rectangle edge away from the zero")


def rounded_winding(w: float) -> int:
    """Nearest integer, or WindingError if w is more than 0.05 away from it."""
    n = round(w)
    if abs(w - n) > WINDING_SLACK:
        raise WindingError(f"winding number {w:.4f} is not within {WINDING_SLACK} of an integer")
    return int(n)


def count_zeros_rect(rect: Rect, cfg: EvalConfig = DEFAULT_CONFIG, threads: int = 1) -> int:
    """Zeros of eta inside ``rect`` (eta is entire, so no pole term)."""
    return rounded_winding(winding_number(rect, cfg, threads))


# -- symmetry -----------------------------------------------------------------------

def quartet_check(z: Union[ZeroRecord, complex], cfg: EvalConfig = DEFAULT_CONFIG):
    """|eta| at s*, 1 - s*, conj(s*), 1 - conj(s*)."""
    s = z.s if isinstance(z, ZeroRecord) else as_complex(z)
    pts = [s, 1.0 - s, s.conjugate(), 1.0 - s.conjugate()]
    return tuple(abs(v.value) for v in eta_many(pts, cfg))


# -- export -----------------------------------------------------------------------

ZERO_FIELDS = ("sigma", "t", "residual", "method", "iterations")


def zeros_to_csv(zeros: Sequence[ZeroRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(ZERO_FIELDS)
    for z in zeros:
        w.writerow([format(z.sigma, ".17g"), format(z.t, ".17g"),
                    format(z.residual, ".17g"), z.method, z.iterations])
    return buf.getvalue()


def zeros_to_json(zeros: Sequence[ZeroRecord]) -> str:
    return json.dumps([asdict(z) for z in zeros], indent=2)


def zeros_from_json(text: str) -> List[ZeroRecord]:
    try:
        return [ZeroRecord(**d) for d in json.loads(text)]
    except (TypeError, KeyError) as exc:
        raise DomainError(f"malformed zero list: {exc}") from None
