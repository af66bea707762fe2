"""Peak-arrival detection at the barrier exit.

The numerical phase time is the time at which |Phi_T(L, t)|^2 is maximal:
a coarse scan over a bracketing window followed by derivative-free
golden-section refinement (the density is smooth, but differentiating the
quadrature would amplify its noise).  The search runs on the exp-rescaled
density (common factor e^{2 a lam} pulled out), which leaves the argmax
untouched and keeps opaque configurations representable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import phasetime, wavepacket
from .quadrature import QuadratureSettings
from .spectrum import Spectrum
from .units import DimensionlessParams

_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class PeakSearchConfig:
    """Search window and refinement knobs.

    tau_min/tau_max default to the automatic window
    [0.1 tau_new, 5 tau_new + 10] built from the moment phase time.
    """

    tau_min: float | None = None
    tau_max: float | None = None
    coarse_points: int = 256
    refine_tol: float = 1e-4

    def __post_init__(self) -> None:
        if self.coarse_points < 16:
            raise ValueError("coarse_points must be >= 16")
        if not self.refine_tol > 0.0:
            raise ValueError("refine_tol must be positive")
        if self.tau_min is not None and self.tau_max is not None:
            if not self.tau_min < self.tau_max:
                raise ValueError("tau_min must be < tau_max")


@dataclass(frozen=True)
class PeakResult:
    tau_peak: float
    density_peak: float
    window_hit: bool
    refine_iters: int
    panels_max: int


def default_window(tau_reference: float) -> tuple[float, float]:
    """Bracketing window around an expected peak time."""
    return 0.1 * tau_reference, 5.0 * tau_reference + 10.0


def _resolve_window(
    config: PeakSearchConfig, params: DimensionlessParams
) -> tuple[float, float]:
    if config.tau_min is not None and config.tau_max is not None:
        return config.tau_min, config.tau_max
    moments = phasetime.moments_closed_form(params)
    auto = default_window(phasetime.phase_time_moments(moments, params))
    return (
        auto[0] if config.tau_min is None else config.tau_min,
        auto[1] if config.tau_max is None else config.tau_max,
    )


def peak_arrival(
    spec: Spectrum,
    params: DimensionlessParams,
    config: PeakSearchConfig | None = None,
    settings: QuadratureSettings | None = None,
) -> PeakResult:
    """Locate the exit-density maximum inside the search window.

    window_hit is set (and refinement skipped) when the coarse argmax lies
    within one grid step of a window boundary; the caller must widen.
    """
    config = config or PeakSearchConfig()
    settings = settings or QuadratureSettings()
    tau_lo, tau_hi = _resolve_window(config, params)
    log_scale = params.a * params.lam
    panels_max = 0

    def scaled_density(tau: float) -> float:
        nonlocal panels_max
        res = wavepacket.transmitted_integral(
            spec, params, 0.0, tau, settings, log_scale=log_scale
        )
        panels_max = max(panels_max, res.panels)
        return abs(res.value) ** 2

    n = config.coarse_points
    step = (tau_hi - tau_lo) / (n - 1)
    taus = [tau_lo + i * step for i in range(n)]
    dens = [scaled_density(t) for t in taus]
    i_best = max(range(n), key=dens.__getitem__)

    def unscale(d: float) -> float:
        return d * math.exp(-2.0 * log_scale)

    if i_best <= 1 or i_best >= n - 2:
        return PeakResult(
            tau_peak=taus[i_best],
            density_peak=unscale(dens[i_best]),
            window_hit=True,
            refine_iters=0,
            panels_max=panels_max,
        )

    # Local three-point unimodality check before trusting the bracket.
    if not (dens[i_best - 1] < dens[i_best] > dens[i_best + 1]):
        return PeakResult(
            tau_peak=taus[i_best],
            density_peak=unscale(dens[i_best]),
            window_hit=False,
            refine_iters=0,
            panels_max=panels_max,
        )

    lo, hi = taus[i_best - 1], taus[i_best + 1]
    c = hi - _INV_GOLDEN * (hi - lo)
    d = lo + _INV_GOLDEN * (hi - lo)
    fc, fd = scaled_density(c), scaled_density(d)
    iters = 0
    while hi - lo > config.refine_tol:
        if fc > fd:
            hi, d, fd = d, c, fc
            c = hi - _INV_GOLDEN * (hi - lo)
            fc = scaled_density(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INV_GOLDEN * (hi - lo)
            fd = scaled_density(d)
        iters += 1
    tau_peak = 0.5 * (lo + hi)
    return PeakResult(
        tau_peak=tau_peak,
        density_peak=unscale(scaled_density(tau_peak)),
        window_hit=False,
        refine_iters=iters,
        panels_max=panels_max,
    )


def full_report(
    spec: Spectrum,
    params: DimensionlessParams,
    config: PeakSearchConfig | None = None,
    settings: QuadratureSettings | None = None,
) -> tuple[phasetime.PhaseTimeReport, PeakResult]:
    """Analytic and numerical phase times side by side for one configuration.

    tau_spm is None at a = 0, where the opaque stationary-phase formula
    diverges (the central defect the moment formula repairs).
    """
    moments = phasetime.moments_closed_form(params)
    tau_new = phasetime.phase_time_moments(moments, params)
    tau_spm = None if params.a == 0.0 else phasetime.phase_time_spm(params)
    peak = peak_arrival(spec, params, config, settings)
    v_num = phasetime.transit_velocity(peak.tau_peak, params)
    v_ana = phasetime.transit_velocity(tau_new, params)
    report = phasetime.PhaseTimeReport(
        tau_spm=tau_spm,
        tau_new=tau_new,
        tau_numeric=peak.tau_peak,
        v_transit=v_num,
        ratio_ana_num=100.0 * v_ana / v_num,
    )
    return report, peak
