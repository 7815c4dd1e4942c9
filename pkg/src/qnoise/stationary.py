"""Canonical Hilbert-space realization of a stationary noise/reverse pair.

The periodic (circulant) closure of the correlation matrix is used
throughout: every matrix built here is diagonal in the shared discrete
Fourier basis of :func:`qnoise.fourier.fourier_basis`, so the covariance
of the noise and the covariance of the time-reversed noise commute
exactly, and each derived object is one symbol-to-matrix assembly away:

    covariance K        <- symbol kappa(nu_k)
    reversed  K_rev     <- symbol kappa(-nu_k)       (= conj(K))
    root      X = K^1/2 <- symbol sqrt(kappa)
    cross     G         <- symbol gamma = sqrt(kappa * kappa(-.))
    modular   L         <- symbol kappa(-.)/kappa    (K invertible only)

With the duality n*step*eps = 1 the quadrature constant collapses to one:
K = eps * circulant(k_j) has eigenvalues exactly {kappa(nu_k)}, and the
normalized spectral amplitudes reproduce K, K_rev and G with unit weight.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotInvertibleError, NotPositiveDefiniteError
from .fourier import check_duality, fourier_basis, kernel_of, time_lags
from .spectra import SpectralDensityPair, _frozen

#: Relative eigenvalue floor below which the covariance counts as singular.
INVERTIBILITY_FLOOR = 1e-10

#: Relative bound on how far below zero an eigenvalue may dip before the
#: induced covariance is rejected instead of clamped.
PSD_TOL = 1e-10

#: Relative threshold below which eigenvalues snap to exact zero, keeping
#: vacuum supports crisp through the FFT round trip.
EIGENVALUE_SNAP = 1e-14


@dataclass(frozen=True, eq=False)
class CorrelationSequence:
    """Correlation samples k_j at centered lags j = -(n-1)/2 .. (n-1)/2.

    Attributes:
        eps: time step; t_j = eps * j.
        step: frequency spacing of the originating grid (1 / (n * eps)).
        values: k_j, Hermitian in the lag (k_{-j} = conj(k_j)).
        reversed: reversed-noise correlations, defined as k_{-j} exactly.
        cross: symmetric real cross-correlation r_j from the gamma density.
    """

    eps: float
    step: float
    values: np.ndarray
    reversed: np.ndarray
    cross: np.ndarray

    @property
    def n_points(self) -> int:
        return self.values.size

    @property
    def lags(self) -> np.ndarray:
        return time_lags(self.n_points)

    @property
    def times(self) -> np.ndarray:
        return self.eps * self.lags


def correlation_sequence(pair: SpectralDensityPair, eps: float) -> CorrelationSequence:
    """Quadrature correlation samples of a density pair.

    k_j = step * sum_k kappa(nu_k) exp(2 pi i nu_k eps j), and likewise for
    the cross density; the reversed sequence is the exact lag flip of the
    forward one.  Requires the grid/time duality n*step*eps = 1.
    """
    grid = pair.grid
    check_duality(grid.n_points, grid.step, eps)
    values = kernel_of(pair.kappa, grid.step)
    cross = kernel_of(pair.gamma, grid.step)
    return CorrelationSequence(
        eps=float(eps),
        step=grid.step,
        values=_frozen(values),
        reversed=_frozen(values[::-1].copy()),
        cross=_frozen(cross),
    )


@dataclass(frozen=True, eq=False)
class StationaryModel:
    """Finite canonical realization of a noise and its time reverse.

    All matrices are circulant and share the Fourier eigenbasis ``basis``;
    ``eigenvalues`` holds the common symbol, ordered like the grid points
    (entry k belongs to frequency nu_k = step*(k - (n-1)/2)).
    """

    eps: float
    step: float
    frequencies: np.ndarray
    eigenvalues: np.ndarray
    basis: np.ndarray
    K: np.ndarray
    K_rev: np.ndarray
    X: np.ndarray
    X_rev: np.ndarray
    G: np.ndarray
    L: np.ndarray | None

    @property
    def n_points(self) -> int:
        return self.eigenvalues.size

    def assemble(self, symbol: np.ndarray) -> np.ndarray:
        """Circulant matrix V† diag(symbol) V in the shared eigenbasis."""
        return self.basis.conj().T @ (np.asarray(symbol)[:, None] * self.basis)

    @property
    def invertible(self) -> bool:
        if self.eigenvalues.size == 0:
            return False
        scale = float(self.eigenvalues.max())
        return bool(scale > 0 and float(self.eigenvalues.min()) > INVERTIBILITY_FLOOR * scale)


def build_model(seq: CorrelationSequence) -> StationaryModel:
    """Assemble the covariance family induced by a correlation sequence.

    The circulant closure of K_{ij} = eps * k_{i-j} has eigenvalues given by
    the DFT of the sequence; they must be real (Hermitian sequence) and no
    more than ``PSD_TOL`` relative below zero, else the sequence does not
    come from a nonnegative spectrum.  Eigenvalues within ``EIGENVALUE_SNAP``
    of zero are snapped to exact zeros before the square roots are taken.

    Raises:
        NotPositiveDefiniteError: eigenvalue below -PSD_TOL * max.
        ValueError: sequence of even length or visibly non-Hermitian.
    """
    n = seq.n_points
    if n % 2 == 0:
        raise ValueError("correlation sequence length must be odd")
    raw = seq.eps * np.fft.fftshift(np.fft.fft(np.fft.ifftshift(seq.values)))
    scale = float(np.abs(raw).max(initial=0.0))
    if scale > 0 and np.abs(raw.imag).max() > 1e-9 * scale:
        raise ValueError("correlation sequence is not Hermitian: complex spectrum")
    eigs = raw.real.copy()
    if scale > 0:
        if eigs.min() < -PSD_TOL * scale:
            raise NotPositiveDefiniteError(
                f"covariance has eigenvalue {eigs.min():.3e} < -{PSD_TOL:g} * {scale:.3e}; "
                "the spectral input is invalid or aliased"
            )
        eigs[np.abs(eigs) < EIGENVALUE_SNAP * scale] = 0.0
    np.clip(eigs, 0.0, None, out=eigs)

    basis = fourier_basis(n)

    def assemble(symbol):
        return basis.conj().T @ (symbol[:, None] * basis)

    K = assemble(eigs)
    X = assemble(np.sqrt(eigs))
    eigs_rev = eigs[::-1].copy()
    G = assemble(np.sqrt(eigs * eigs_rev))

    L = None
    if scale > 0 and eigs.min() > INVERTIBILITY_FLOOR * scale:
        L = assemble(eigs_rev / eigs)

    half = (n - 1) // 2
    frequencies = seq.step * np.arange(-half, half + 1)
    return StationaryModel(
        eps=seq.eps,
        step=seq.step,
        frequencies=_frozen(frequencies),
        eigenvalues=_frozen(eigs),
        basis=_frozen(basis),
        K=_frozen(K),
        K_rev=_frozen(np.conj(K)),
        X=_frozen(X),
        X_rev=_frozen(np.conj(X)),
        G=_frozen(G),
        L=None if L is None else _frozen(L),
    )


def realization_columns(model: StationaryModel) -> tuple[np.ndarray, np.ndarray]:
    """Column realization of the pair: (X, conj(X)).

    Column j of the first array is the vector realizing the noise at lag j,
    column j of the second realizes its time reverse; conjugation is the
    time reversal.  The Gram identities X†X = K, conj(X)†conj(X) = K_rev
    and X†conj(X) = G hold to rounding.
    """
    return model.X, model.X_rev


@dataclass(frozen=True, eq=False)
class ModularFilter:
    """Modular matrix L = K_rev K^-1 with its stationary filter kernels.

    ``kernel_half``/``kernel_inv_half`` are the first-row kernels of
    L^(1/2) and L^(-1/2) at centered lags, i.e. the discrete input-output
    and reversed filters.  They satisfy the modular property
    kernel_half(-t) = conj(kernel_half(t)) = kernel_inv_half(t), and their
    plain circular convolution is the unit kernel delta_{j0}.
    """

    eps: float
    lags: np.ndarray
    L: np.ndarray
    L_half: np.ndarray
    kernel_half: np.ndarray
    kernel_inv_half: np.ndarray

    @property
    def times(self) -> np.ndarray:
        return self.eps * self.lags


def modular_matrix(model: StationaryModel) -> ModularFilter:
    """Modular matrix and filter kernels of an invertible model.

    Raises:
        NotInvertibleError: if the smallest covariance eigenvalue is below
            ``INVERTIBILITY_FLOOR`` relative to the largest (the spectrum
            has vacuum components).
    """
    eigs = model.eigenvalues
    scale = float(eigs.max(initial=0.0))
    if scale <= 0 or eigs.min() <= INVERTIBILITY_FLOOR * scale:
        raise NotInvertibleError(
            "covariance is singular (vacuum components present); "
            "the modular filter is undefined"
        )
    lam = eigs[::-1] / eigs
    L = model.assemble(lam)
    L_half = model.assemble(np.sqrt(lam))
    kernel_half = model.eps * kernel_of(np.sqrt(lam), model.step)
    kernel_inv_half = model.eps * kernel_of(np.sqrt(1.0 / lam), model.step)
    return ModularFilter(
        eps=model.eps,
        lags=time_lags(model.n_points),
        L=_frozen(L),
        L_half=_frozen(L_half),
        kernel_half=_frozen(kernel_half),
        kernel_inv_half=_frozen(kernel_inv_half),
    )


@dataclass(frozen=True, eq=False)
class SpectralAmplitudes:
    """Per-lag spectral amplitudes of the pair.

    ``noise[k, j]`` is the amplitude of the noise at lag j and frequency
    nu_k, sqrt(kappa(nu_k)) * u_j(nu_k) with the normalized plane wave
    u_j(nu) = sqrt(eps) * exp(-2 pi i nu eps j); ``reverse`` carries the
    time-reversed amplitudes, constructed as the exact star involution
    (conjugate + frequency flip) of ``noise``.
    """

    frequencies: np.ndarray
    lags: np.ndarray
    noise: np.ndarray
    reverse: np.ndarray


def spectral_amplitudes(model: StationaryModel) -> SpectralAmplitudes:
    """Spectral representation of the realization.

    Discrete inner products with weight ``step`` reproduce the model
    matrices: sum_k conj(noise[k,i]) noise[k,j] step = K_ij, the same with
    ``reverse`` gives K_rev, and the mixed product gives G.
    """
    lags = time_lags(model.n_points)
    waves = np.sqrt(model.eps) * np.exp(
        -2j * np.pi * model.eps * np.outer(model.frequencies, lags)
    )
    noise = np.sqrt(model.eigenvalues)[:, None] * waves
    reverse = np.conj(noise[::-1, :])
    return SpectralAmplitudes(
        frequencies=model.frequencies,
        lags=_frozen(lags),
        noise=_frozen(noise),
        reverse=_frozen(reverse),
    )


def coefficient_norm(model: StationaryModel, zeta: np.ndarray) -> float:
    """Norm squared zeta† (K + K_rev) zeta of a test coefficient vector.

    Nonnegative for every complex vector since both covariances are PSD.
    """
    zeta = np.asarray(zeta, dtype=complex)
    if zeta.shape != (model.n_points,):
        raise ValueError(f"expected {model.n_points} coefficients, got {zeta.shape}")
    value = zeta.conj() @ ((model.K + model.K_rev) @ zeta)
    return float(value.real)
