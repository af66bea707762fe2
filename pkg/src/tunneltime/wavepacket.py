"""Transmitted wave packet by spectral quadrature.

The packet past the barrier is the superposition of the transmitted
stationary states,

    Phi_T(xi, tau) = Int_0^1 dkappa g(kappa) |T(kappa)| e^{i phi(kappa)}
                     e^{i (kappa xi - kappa^2 tau)},

with xi = k_M (x - L) >= 0 and tau = E_M t / hbar.  The exact amplitude is
used throughout; the opaque-limit approximation lives in `phasetime` so the
numerical ground truth stays independent of the model being tested.  The
initial panel count grows linearly with |tau| to resolve the chirp
e^{-i kappa^2 tau} before adaptive refinement takes over.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import spectrum as _spectrum
from . import transmission
from .quadrature import QuadratureResult, QuadratureSettings, integrate_adaptive
from .spectrum import Spectrum
from .units import DimensionlessParams


@dataclass(frozen=True)
class WaveSample:
    """One space-time sample of the transmitted wave."""

    position: float      # k_M (x - L), >= 0
    time: float          # E_M t / hbar
    amplitude: complex

    @property
    def density(self) -> float:
        return abs(self.amplitude) ** 2


def _initial_panels(position: float, time: float) -> int:
    return math.ceil(4.0 * (1.0 + (abs(time) + abs(position)) / (2.0 * math.pi)))


def transmitted_integral(
    spec: Spectrum,
    params: DimensionlessParams,
    position: float,
    time: float,
    settings: QuadratureSettings | None = None,
    log_scale: float = 0.0,
) -> QuadratureResult:
    """Adaptive evaluation of the spectral integral, amplitude * e^{log_scale}.

    log_scale = a * lam factors out the opaque suppression for stable peak
    searches; the result's `panels` field exposes the refinement effort.
    """
    settings = settings or QuadratureSettings()

    def integrand(kappa: np.ndarray) -> np.ndarray:
        mod, phase = transmission.modulus_phase(kappa, params, log_scale=log_scale)
        osc = phase + kappa * position - kappa * kappa * time
        return _spectrum.evaluate(spec, kappa) * mod * np.exp(1j * osc)

    return integrate_adaptive(
        integrand, 0.0, 1.0, settings, initial_panels=_initial_panels(position, time)
    )


def synthesize(
    spec: Spectrum,
    params: DimensionlessParams,
    position: float,
    time: float,
    settings: QuadratureSettings | None = None,
) -> WaveSample:
    """Transmitted wave sample at dimensionless position >= 0 and time."""
    if position < 0.0:
        raise ValueError("position is measured from the barrier exit and must be >= 0")
    result = transmitted_integral(spec, params, position, time, settings)
    return WaveSample(position=position, time=time, amplitude=result.value)


def density_at_exit(
    spec: Spectrum,
    params: DimensionlessParams,
    time: float,
    settings: QuadratureSettings | None = None,
) -> float:
    """Electronic density |Phi_T|^2 at the barrier exit x = L."""
    return synthesize(spec, params, 0.0, time, settings).density
