"""The smooth box kernel B_kappa and the two-parameter embedding eta_{kappa,nu}.

eta_{kappa,nu} is the Euler double series of eta with each m-summand
weighted by B_kappa(1/(m+1)^nu) / B_kappa(0). All kernel values are taken
from the four-exponential form, scaled by the largest exponent so that
neither small nor large kappa overflows or cancels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List

import numpy as np

from .errors import UsageError
from .eta_core import DEFAULT_CONFIG, EtaValue, EvalConfig, euler_series
from .numkernel import as_complex

EXPANSION_THRESHOLD = 3.0 / math.pi


@dataclass(frozen=True)
class EmbeddingParams:
    """Scale ``kappa`` and horizontal shift ``nu``, both finite and positive."""

    kappa: float
    nu: float

    def __post_init__(self):
        for name in ("kappa", "nu"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise UsageError(f"{name} must be a real number, got {v!r}")
            if not (math.isfinite(v) and v > 0):
                raise UsageError(f"{name} must be finite and positive, got {v!r}")
            object.__setattr__(self, name, float(v))

    @property
    def in_expansion_region(self) -> bool:
        """True when kappa > 3/pi, where the shift expansion converges."""
        return self.kappa > EXPANSION_THRESHOLD


def _check_kappa(kappa: float) -> float:
    kappa = float(kappa)
    if not (math.isfinite(kappa) and kappa > 0):
        raise UsageError(f"kappa must be finite and positive, got {kappa!r}")
    return kappa


def _scaled_parts(x: float, kappa: float):
    a = 1.0 / kappa
    b = 2.0 * abs(x) / kappa
    top = max(a, b)
    ea = math.exp(a - top)
    den = ea + math.exp(b - top) + math.exp(-b - top) + math.exp(-a - top)
    return a, b, top, ea, den


def b_kernel(x: float, kappa: float) -> float:
    """B_kappa(x) = (tanh((x+1/2)/kappa) - tanh((x-1/2)/kappa)) / 2.

    Evaluated as (e^{a} - e^{-a}) / (e^{a} + e^{b} + e^{-b} + e^{-a}) with
    a = 1/kappa, b = 2x/kappa, numerator and denominator scaled by the
    largest exponential.
    """
    kappa = _check_kappa(kappa)
    a, b, top, ea, den = _scaled_parts(float(x), kappa)
    num = ea * -math.expm1(-2.0 * a)
    return num / den


def b_ratio(x: float, kappa: float) -> float:
    """B_kappa(x) / B_kappa(0), a value in [0, 1]."""
    kappa = _check_kappa(kappa)
    a, b, top, ea, den = _scaled_parts(float(x), kappa)
    num = ea + 2.0 * math.exp(-top) + math.exp(-a - top)
    return min(num / den, 1.0)


def b_ratio_minus_one(x: float, kappa: float) -> float:
    """B_kappa(x)/B_kappa(0) - 1 without cancellation for large kappa.

    The numerator of ratio - 1 is 2 - 2 cosh(b) = -4 sinh^2(b/2).
    """
    kappa = _check_kappa(kappa)
    a, b, top, ea, den = _scaled_parts(float(x), kappa)
    if b < 1.0:
        sh = math.sinh(0.5 * b)
        return -4.0 * sh * sh * math.exp(-top) / den
    return b_ratio(x, kappa) - 1.0


@lru_cache(maxsize=256)
def _ratio_weights(kappa: float, nu: float, count: int) -> np.ndarray:
    w = np.array([b_ratio((m + 1.0) ** -nu, kappa) for m in range(count)])
    w.setflags(write=False)
    return w


def embedding_weights(p: EmbeddingParams, count: int) -> np.ndarray:
    """B_kappa(1/(m+1)^nu) / B_kappa(0) for m = 0..count-1."""
    return _ratio_weights(p.kappa, p.nu, count)


def eta_embedding_many(points: Iterable, p: EmbeddingParams,
                       cfg: EvalConfig = DEFAULT_CONFIG) -> List[EtaValue]:
    res = euler_series([as_complex(s) for s in points], cfg,
                       weights=embedding_weights(p, cfg.kmax))
    res.raise_if_unconverged("embedding")
    return res.as_eta_values()


def eta_embedding(s, p: EmbeddingParams, cfg: EvalConfig = DEFAULT_CONFIG) -> EtaValue:
    """eta_{kappa,nu}(s), same truncation and error policy as ``eta``."""
    return eta_embedding_many([s], p, cfg)[0]
