"""Transmitted amplitude of the rectangular barrier.

For a barrier of height V0 on [0, L] the transmitted amplitude is

    T(k) = e^{-ikL} / [cosh(qL) - i (2k^2 - w^2)/(2kq) sinh(qL)],

with w = sqrt(2 m V0)/hbar and q = sqrt(w^2 - k^2).  The plane-wave factor
e^{-ikL} is kept separate (it belongs to the free propagation term); this
module returns the modulus |T| and the barrier phase

    phi = arctan[(2k^2 - w^2) tanh(qL) / (2kq)].

Everything is expressed in cutoff units: kappa = k/k_M, W = w/k_M,
u = qL = lam * sqrt(W^2 - kappa^2).  The k = w point (q -> 0) is a removable
singularity and is evaluated by series; large qL uses exp-scaled hyperbolics
so that lam up to several hundred stays finite in double precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .units import DimensionlessParams

# Branch thresholds for u = qL: 3-term Taylor below _U_SERIES, exp-scaled
# hyperbolics above _U_SCALED (cosh(2*30) is still comfortably finite).
_U_SERIES = 1e-4
_U_SCALED = 30.0


@dataclass(frozen=True)
class TransmissionValue:
    """|T| and barrier phase at one wavenumber ratio kappa = k/k_M."""

    modulus: float
    phase: float
    kappa: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.modulus <= 1.0):
            raise ValueError(f"modulus out of (0, 1]: {self.modulus}")
        if not math.isfinite(self.phase):
            raise ValueError("phase must be finite")


def _kernel(u: np.ndarray, b: np.ndarray, log_scale: float = 0.0):
    """Modulus (times e^{log_scale}) and phase from u = qL and b = (2k^2-w^2)L/(2k).

    The identities used are  c*sinh(u) = b*(sinh(u)/u)  and
    c*tanh(u) = b*(tanh(u)/u)  with c = (2k^2-w^2)/(2kq), which stay regular
    through u = 0.  Caller guarantees log_scale <= u wherever u > _U_SCALED.
    """
    u = np.asarray(u, dtype=float)
    b = np.asarray(b, dtype=float)
    small = u < _U_SERIES
    big = u > _U_SCALED
    mid = ~small & ~big

    modulus = np.empty_like(u)
    phase = np.empty_like(u)

    if np.any(small):
        us, bs = u[small], b[small]
        u2 = us * us
        sinhc = 1.0 + u2 / 6.0 + u2 * u2 / 120.0
        tanhc = 1.0 - u2 / 3.0 + 2.0 * u2 * u2 / 15.0
        modulus[small] = math.exp(log_scale) / np.sqrt(
            np.cosh(us) ** 2 + (bs * sinhc) ** 2
        )
        phase[small] = np.arctan(bs * tanhc)
    if np.any(mid):
        um, bm = u[mid], b[mid]
        modulus[mid] = math.exp(log_scale) / np.sqrt(
            np.cosh(um) ** 2 + (bm * np.sinh(um) / um) ** 2
        )
        phase[mid] = np.arctan(bm * np.tanh(um) / um)
    if np.any(big):
        ub, bb = u[big], b[big]
        eps = np.exp(-2.0 * ub)
        modulus[big] = 2.0 * np.exp(log_scale - ub) / np.sqrt(
            (1.0 + eps) ** 2 + (bb / ub) ** 2 * (1.0 - eps) ** 2
        )
        phase[big] = np.arctan(bb * np.tanh(ub) / ub)
    return modulus, phase


def _u_b(kappa: np.ndarray, params: DimensionlessParams):
    W, lam = params.W, params.lam
    g = np.sqrt(np.maximum(W * W - kappa * kappa, 0.0))
    u = lam * g
    b = (2.0 * kappa * kappa - W * W) * lam / (2.0 * kappa)
    return u, b


def modulus_phase(kappa, params: DimensionlessParams, log_scale: float = 0.0):
    """Vectorized |T(kappa)| * e^{log_scale} and phase phi(kappa).

    kappa must lie in (0, W]; values in (0, 1] are the physical spectrum
    range.  log_scale lets callers factor out the e^{-q_M L} suppression
    (use log_scale = a*lam) so that opaque configurations do not underflow;
    it must not exceed min(qL) over the evaluated points.
    """
    kappa = np.asarray(kappa, dtype=float)
    if np.any(kappa <= 0.0) or np.any(kappa > params.W):
        raise ValueError("kappa must lie in (0, W]")
    u, b = _u_b(kappa, params)
    return _kernel(u, b, log_scale)


def amplitude(kappa: float, params: DimensionlessParams) -> TransmissionValue:
    """Exact transmitted amplitude at a single kappa = k/k_M in (0, 1]."""
    if not 0.0 < kappa <= 1.0:
        raise ValueError(f"kappa must lie in (0, 1], got {kappa}")
    mod, ph = modulus_phase(np.atleast_1d(kappa), params)
    return TransmissionValue(modulus=float(mod[0]), phase=float(ph[0]), kappa=float(kappa))


def amplitude_opaque(kappa, params: DimensionlessParams):
    """Opaque-limit modulus 4 k q e^{-qL} / w^2, valid for qL >> 1.

    Returns 0 at kappa = W where the prefactor vanishes.
    """
    kappa = np.asarray(kappa, dtype=float)
    if np.any(kappa <= 0.0) or np.any(kappa > 1.0):
        raise ValueError("kappa must lie in (0, 1]")
    W, lam = params.W, params.lam
    g = np.sqrt(np.maximum(W * W - kappa * kappa, 0.0))
    out = 4.0 * kappa * g * np.exp(-lam * g) / (W * W)
    if out.ndim == 0:
        return float(out)
    return out


def stationary_time_full(kappa: float, params: DimensionlessParams) -> float:
    """Full stationary-phase time tau = E_M t / hbar at one kappa in (0, W).

    Solves the stationarity of phi + k(x-L) - Et/hbar at x = L:

        E t / hbar = k [w^4 sinh(2qL) + 2k^2 (w^2 - 2k^2) qL]
                     / (q [w^4 cosh(2qL) + 8 k^2 q^2 - w^4])

    (bracket grouping fixed so that the opaque limit reduces to
    E t/hbar -> k/q), then divides by kappa^2 to convert E t/hbar into
    E_M t/hbar.  Exp-scaled for qL > 30.
    """
    W, lam = params.W, params.lam
    if not 0.0 < kappa < W:
        raise ValueError(f"kappa must lie in (0, W), got {kappa}")
    k2 = kappa * kappa
    W4 = W ** 4
    g = math.sqrt(W * W - k2)
    u = lam * g
    lin = 2.0 * k2 * (W * W - 2.0 * k2)       # coefficient of the qL term
    cst = 8.0 * k2 * g * g - W4               # constant next to cosh
    if u <= _U_SCALED:
        num = kappa * (W4 * math.sinh(2.0 * u) + lin * u)
        den = g * (W4 * math.cosh(2.0 * u) + cst)
    else:
        s = math.exp(-2.0 * u)                # common factor e^{2u}/2 divided out
        num = kappa * (W4 * (1.0 - s * s) / 2.0 + lin * u * s)
        den = g * (W4 * (1.0 + s * s) / 2.0 + cst * s)
    return num / (den * k2)
