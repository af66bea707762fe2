"""Adaptive composite Gauss-Legendre quadrature on a finite interval.

Panels are bisected breadth-first until the Richardson-style error estimate
|I(panel) - I(left half) - I(right half)| fits a per-panel budget
proportional to panel width, so that the summed error stays below
rel_tol * |integral|.  All pending panels are evaluated in one vectorized
call per sweep, which keeps the boundary-layer refinement near the spectrum
cutoff cheap.  The integrand must accept an ndarray of abscissae and return
an ndarray of values (real or complex).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_legendre

# Evaluation chunk cap: panels * nodes above this are processed in blocks.
_CHUNK = 1 << 21


class QuadratureError(RuntimeError):
    """Raised when the adaptive refinement cannot reach the tolerance."""


@dataclass(frozen=True)
class QuadratureSettings:
    """Adaptive quadrature knobs shared by the spectral integrals."""

    nodes_per_panel: int = 32
    max_panels: int = 4096
    rel_tol: float = 1e-8

    def __post_init__(self) -> None:
        if self.nodes_per_panel < 8:
            raise ValueError("nodes_per_panel must be >= 8")
        if self.max_panels < 1:
            raise ValueError("max_panels must be >= 1")
        if not self.rel_tol > 0.0:
            raise ValueError("rel_tol must be positive")


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    panels: int
    evaluations: int


@lru_cache(maxsize=8)
def _gl_nodes(n: int):
    x, w = roots_legendre(n)
    return 0.5 * (x + 1.0), 0.5 * w  # mapped to [0, 1]


def _panel_integrals(f, lo: np.ndarray, hi: np.ndarray, n: int) -> np.ndarray:
    """Gauss-Legendre estimates for a batch of panels [lo_i, hi_i]."""
    x01, w01 = _gl_nodes(n)
    width = hi - lo
    out = np.empty(lo.shape[0], dtype=complex)
    step = max(1, _CHUNK // n)
    for start in range(0, lo.shape[0], step):
        sl = slice(start, start + step)
        nodes = lo[sl, None] + width[sl, None] * x01[None, :]
        vals = np.asarray(f(nodes.ravel()), dtype=complex).reshape(nodes.shape)
        out[sl] = width[sl] * (vals @ w01)
    return out


def integrate_adaptive(
    f,
    lo: float,
    hi: float,
    settings: QuadratureSettings | None = None,
    initial_panels: int = 1,
) -> QuadratureResult:
    """Integrate a vectorized integrand over [lo, hi] to settings.rel_tol.

    initial_panels seeds a uniform subdivision before refinement (used by
    the wave-packet synthesis to resolve the e^{-i kappa^2 tau} chirp).
    Raises QuadratureError when max_panels is hit before convergence.
    """
    settings = settings or QuadratureSettings()
    if hi <= lo:
        raise ValueError("integration interval must have hi > lo")
    n = settings.nodes_per_panel
    n_init = max(1, int(initial_panels))
    if n_init > settings.max_panels:
        raise QuadratureError(
            f"initial panel count {n_init} exceeds max_panels={settings.max_panels}"
        )

    edges = np.linspace(lo, hi, n_init + 1)
    act_lo, act_hi = edges[:-1], edges[1:]
    act_parent = _panel_integrals(f, act_lo, act_hi, n)
    evaluations = n_init * n

    total_width = hi - lo
    done_sum = 0.0 + 0.0j
    done_panels = 0

    while act_lo.size:
        n_act = act_lo.size
        if done_panels + 2 * n_act > settings.max_panels:
            raise QuadratureError(
                f"needed more than max_panels={settings.max_panels} panels"
            )
        mid = 0.5 * (act_lo + act_hi)
        child = _panel_integrals(
            f, np.concatenate([act_lo, mid]), np.concatenate([mid, act_hi]), n
        )
        evaluations += 2 * n_act * n
        left, right = child[:n_act], child[n_act:]
        pair = left + right

        estimate = done_sum + pair.sum()
        scale = max(abs(estimate), np.finfo(float).tiny)
        # hybrid budget: width-proportional, floored by an equal share of the
        # global tolerance so endpoint cusps (error ~ width^1.5) still
        # terminate once their absolute contribution is negligible
        share = np.maximum((act_hi - act_lo) / total_width, 1.0 / (done_panels + 2 * n_act))
        budget = settings.rel_tol * scale * share
        ok = np.abs(act_parent - pair) <= budget

        done_sum += pair[ok].sum()
        done_panels += 2 * int(np.count_nonzero(ok))

        keep = ~ok
        act_parent = np.concatenate([left[keep], right[keep]])
        act_lo, act_hi = (
            np.concatenate([act_lo[keep], mid[keep]]),
            np.concatenate([mid[keep], act_hi[keep]]),
        )

    return QuadratureResult(value=complex(done_sum), panels=done_panels, evaluations=evaluations)
