"""Truncated Fourier series on the unit circle.

Coefficient functions (lambda, V) are declared as
``a0 + sum_k (a_k cos 2 pi k x + b_k sin 2 pi k x)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

MAX_MODES = 32


@dataclass(frozen=True)
class FourierSeries:
    a0: float = 0.0
    cos: Tuple[float, ...] = ()
    sin: Tuple[float, ...] = ()

    def __post_init__(self):
        if max(len(self.cos), len(self.sin)) > MAX_MODES:
            raise ValueError("Fourier truncation limited to %d modes" % MAX_MODES)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.full_like(x, self.a0, dtype=float)
        for k, a in enumerate(self.cos, start=1):
            out = out + a * np.cos(2.0 * np.pi * k * x)
        for k, b in enumerate(self.sin, start=1):
            out = out + b * np.sin(2.0 * np.pi * k * x)
        return out

    def derivative(self) -> "FourierSeries":
        m = max(len(self.cos), len(self.sin))
        cos = tuple(
            2.0 * np.pi * k * (self.sin[k - 1] if k <= len(self.sin) else 0.0)
            for k in range(1, m + 1)
        )
        sin = tuple(
            -2.0 * np.pi * k * (self.cos[k - 1] if k <= len(self.cos) else 0.0)
            for k in range(1, m + 1)
        )
        return FourierSeries(0.0, cos, sin)

    def max_abs(self, samples: int = 4096) -> float:
        x = np.linspace(0.0, 1.0, samples, endpoint=False)
        return float(np.max(np.abs(self(x))))

    @staticmethod
    def constant(c: float) -> "FourierSeries":
        return FourierSeries(float(c), (), ())
