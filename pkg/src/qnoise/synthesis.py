"""Linear synthesis of an arbitrary stationary pair from standard noise.

Any second-order stationary pair with target density kappa (amplitude
sigma = sqrt(kappa)) is a stationary filter of a standard pair built from
the target's own modular data:

    kappa_std     = 1 on n_minus,  lambda^(-1/2) on theta,  0 on n_plus
    kappa_rev_std = the flip of kappa_std

so the standard pair has unit cross density on the thermal support
(kappa_std * kappa_rev_std = 1 there) and kappa_std + kappa_rev_std = 1 on
the vacuum points.  The real symmetric transmission function

    f = sqrt(sigma * sigma_rev)   on theta
    f = max(sigma, sigma_rev)     off theta

then reproduces the target spectrum exactly: f^2 * kappa_std = kappa at
every retained point, and the time-domain filter is the quadrature
Fourier kernel of f.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fourier import check_duality, convolve, kernel_of, time_lags
from .spectra import SpectralDensityPair, _frozen, tabulated_density


@dataclass(frozen=True, eq=False)
class StandardPair:
    """The standard density pair of a target, with its amplitudes.

    ``amp`` is the standard noise amplitude (1 on n_minus of the target,
    lambda^(-1/4) on theta); ``amp_rev`` is its exact frequency flip.  The
    squared amplitudes are the densities of ``pair`` bit for bit.
    """

    pair: SpectralDensityPair
    amp: np.ndarray
    amp_rev: np.ndarray


def build_standard_pair(target: SpectralDensityPair) -> StandardPair:
    """Standard pair underlying ``target``; see the module docstring."""
    amp = np.where(target.n_minus, 1.0, 0.0)
    lam = target.lambda_theta[target.theta]
    amp[target.theta] = lam ** -0.25
    pair = tabulated_density(amp * amp, target.grid)
    return StandardPair(pair=pair, amp=_frozen(amp), amp_rev=_frozen(amp[::-1].copy()))


@dataclass(frozen=True, eq=False)
class TransmissionFilter:
    """Real symmetric transmission function of a target pair.

    ``time_kernel`` is the quadrature Fourier kernel of ``f`` (real up to
    rounding since f is real and flip-symmetric); ``target_sigma`` and its
    reverse are the amplitudes the filter must reproduce, and ``standard``
    is the constructed standard pair the filter acts on.
    """

    grid_points: np.ndarray
    step: float
    f: np.ndarray
    time_kernel: np.ndarray
    target_sigma: np.ndarray
    target_sigma_rev: np.ndarray
    standard: StandardPair


def transmission_function(target: SpectralDensityPair) -> TransmissionFilter:
    """Transmission function of ``target`` over its standard pair.

    On the thermal support f = sqrt(sigma * sigma_rev) = gamma^(1/2); off
    it exactly one of the amplitudes is nonzero and f is their pointwise
    maximum, which makes f^2 * kappa_std = kappa hold at every point.
    """
    sigma = np.sqrt(target.kappa)
    sigma_rev = np.sqrt(target.kappa_rev)
    f = np.where(
        target.theta,
        np.sqrt(sigma * sigma_rev),
        np.maximum(sigma, sigma_rev),
    )
    return TransmissionFilter(
        grid_points=target.grid.points,
        step=target.grid.step,
        f=_frozen(f),
        time_kernel=_frozen(kernel_of(f, target.grid.step)),
        target_sigma=_frozen(sigma),
        target_sigma_rev=_frozen(sigma_rev),
        standard=build_standard_pair(target),
    )


@dataclass(frozen=True, eq=False)
class SynthesisResult:
    """Filtered amplitudes and the spectra they reproduce."""

    out_amp: np.ndarray
    out_amp_rev: np.ndarray
    kappa_out: np.ndarray
    kappa_rev_out: np.ndarray


def synthesize(filt: TransmissionFilter, standard: StandardPair) -> SynthesisResult:
    """Apply the transmission function to standard amplitudes.

    Returns the filtered pair f * amp, f * amp_rev together with the
    reproduced densities (their squares); the reproduced densities match
    the target pair at every retained point.

    Raises:
        ValueError: if ``standard`` lives on a different grid than the
            filter.
    """
    if not np.array_equal(standard.pair.grid.points, filt.grid_points):
        raise ValueError("transmission filter and standard pair use different grids")
    out_amp = filt.f * standard.amp
    out_amp_rev = filt.f * standard.amp_rev
    return SynthesisResult(
        out_amp=_frozen(out_amp),
        out_amp_rev=_frozen(out_amp_rev),
        kappa_out=_frozen(out_amp * out_amp),
        kappa_rev_out=_frozen(out_amp_rev * out_amp_rev),
    )


@dataclass(frozen=True, eq=False)
class TimeDomainFilter:
    """Time realization of a transmission filter.

    ``phi`` is the filter kernel at centered lags; :meth:`apply` performs
    the eps-weighted circular convolution phi * chi, which maps the time
    kernel of the standard pair to the time kernel of the target.
    """

    eps: float
    lags: np.ndarray
    phi: np.ndarray

    @property
    def times(self) -> np.ndarray:
        return self.eps * self.lags

    def apply(self, chi: np.ndarray) -> np.ndarray:
        return convolve(self.phi, chi, self.eps)


def time_domain_filter(filt: TransmissionFilter, eps: float) -> TimeDomainFilter:
    """Time-domain form of the filter for the time step ``eps``."""
    n = filt.f.size
    check_duality(n, filt.step, eps)
    return TimeDomainFilter(eps=float(eps), lags=_frozen(time_lags(n)), phi=filt.time_kernel)
