"""The Gaussian mode function phi = N exp(x^T A x).

Coordinates are ordered x = (qx_s, qy_s, qx_i, qy_i, Omega_s, Omega_i) with
transverse wavevectors in rad/um and detunings in rad/fs.

Under Gaussian pump and filter profiles, sinc(u) ~ exp(-gamma u^2) and a
linear phase mismatch, every factor of the mode function is Gaussian:

    -4 A = w_p^2 (u_x u_x^T + u_y u_y^T) + u_W u_W^T / sigma_p^2
           + w_s^2 (e1 e1^T + e2 e2^T) + w_i^2 (e3 e3^T + e4 e4^T)
           + e5 e5^T / sigma_s^2 + e6 e6^T / sigma_i^2
           + gamma L^2 b b^T

with u_x = e1 + e3, u_y = e2 + e4, u_W = e5 + e6 and
b = (rho_p - rho_s, 0, rho_p, 0, d_s, -d_i).

The remaining phase exp(i delta_k L / 2) is linear in x and factorizes into
single-photon phases; it drops out of |phi|^2, of every purity and of every
detection probability, so A is kept real.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .crystal import C_UM_PER_FS, CrystalParams, DispersionData
from .errors import InvalidConfig, MissingDispersion, NonPositiveInput

COORDS = ("q_s^x", "q_s^y", "q_i^x", "q_i^y", "Omega_s", "Omega_i")
QSX, QSY, QIX, QIY, WS, WI = range(6)

SIGNAL_COORDS = (QSX, QSY, WS)
IDLER_COORDS = (QIX, QIY, WI)
X_BLOCK = (QSX, QIX, WS, WI)
Y_BLOCK = (QSY, QIY)


class FilterMask(enum.Enum):
    """Which arms' filters enter the quadratic form."""

    BOTH = "both"
    SIGNAL_ONLY = "signal"
    IDLER_ONLY = "idler"
    NONE = "none"

    @property
    def signal(self):
        return self in (FilterMask.BOTH, FilterMask.SIGNAL_ONLY)

    @property
    def idler(self):
        return self in (FilterMask.BOTH, FilterMask.IDLER_ONLY)


@dataclass(frozen=True)
class PumpParams:
    wavelength: float = 0.405  # um
    waist: float = 10.0  # um
    bandwidth: float = 1.0  # nm, Gaussian sigma; inf drops the spectral pump envelope

    def __post_init__(self):
        if not self.wavelength > 0:
            raise InvalidConfig("pump wavelength must be positive")
        if not self.waist >= 0:
            raise InvalidConfig("pump waist must be non-negative")
        if not self.bandwidth > 0:
            raise InvalidConfig("pump bandwidth must be positive")


@dataclass(frozen=True)
class FilterSet:
    """Gaussian filters. ``math.inf`` bandwidth means no spectral filter, waist 0 no spatial filter."""

    sigma_s: float = 5.0  # nm
    sigma_i: float = 5.0  # nm
    w_s: float = 10.0  # um
    w_i: float = 10.0  # um

    def __post_init__(self):
        if not (self.sigma_s > 0 and self.sigma_i > 0):
            raise InvalidConfig("filter bandwidths must be positive (use inf for no filter)")
        if not (self.w_s >= 0 and self.w_i >= 0):
            raise InvalidConfig("collecting-mode waists must be non-negative")


@dataclass(frozen=True)
class SourceConfig:
    pump: PumpParams
    crystal: CrystalParams
    dispersion: DispersionData | None
    filters: FilterSet
    signal_wavelength: float | None = None  # um, defaults to 2 lambda_p
    idler_wavelength: float | None = None

    def __post_init__(self):
        lp = self.pump.wavelength
        if self.signal_wavelength is None:
            object.__setattr__(self, "signal_wavelength", 2.0 * lp)
        if self.idler_wavelength is None:
            object.__setattr__(self, "idler_wavelength", 2.0 * lp)
        gap = 1.0 / self.signal_wavelength + 1.0 / self.idler_wavelength - 1.0 / lp
        if abs(gap) > 1e-9:
            raise InvalidConfig(
                f"central wavelengths violate energy conservation by {gap:.3e} 1/um"
            )


@dataclass(frozen=True)
class QuadraticForm:
    """Real symmetric 6x6 matrix A of phi ~ exp(x^T A x) in the :data:`COORDS` ordering."""

    matrix: np.ndarray
    coords: tuple[str, ...] = COORDS

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.shape != (len(self.coords), len(self.coords)):
            raise ValueError(f"matrix shape {m.shape} does not match {len(self.coords)} coordinates")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


def bandwidth_to_angular(sigma_nm, center_um):
    """Convert a wavelength-domain Gaussian sigma (nm) to rad/fs at ``center_um``."""
    if not center_um > 0 or not sigma_nm > 0:
        raise NonPositiveInput(f"need positive bandwidth and wavelength, got {sigma_nm}, {center_um}")
    return 2.0 * math.pi * C_UM_PER_FS * (sigma_nm * 1e-3) / center_um**2


def _inverse_square(sigma_nm, center_um):
    if math.isinf(sigma_nm):
        return 0.0
    return 1.0 / bandwidth_to_angular(sigma_nm, center_um) ** 2


def assemble_quadratic_form(
    cfg: SourceConfig,
    mask: FilterMask = FilterMask.BOTH,
    *,
    spatial: FilterMask | None = None,
    spectral: FilterMask | None = None,
) -> QuadraticForm:
    """Build A for ``cfg`` with the filters selected by ``mask``.

    ``spatial`` and ``spectral`` override ``mask`` for the collecting modes and
    the spectral filters respectively.
    """
    if cfg.dispersion is None:
        raise MissingDispersion("source config carries no dispersion data")
    spatial = mask if spatial is None else spatial
    spectral = mask if spectral is None else spectral
    pump, flt, disp = cfg.pump, cfg.filters, cfg.dispersion
    L, gamma = cfg.crystal.length, cfg.crystal.sinc_gamma

    e = np.eye(6)
    ux, uy, uw = e[QSX] + e[QIX], e[QSY] + e[QIY], e[WS] + e[WI]
    b = np.array([disp.rho_p - disp.rho_s, 0.0, disp.rho_p, 0.0, disp.d_s, -disp.d_i])

    m = pump.waist**2 * (np.outer(ux, ux) + np.outer(uy, uy))
    m += _inverse_square(pump.bandwidth, pump.wavelength) * np.outer(uw, uw)
    if spatial.signal:
        m[QSX, QSX] += flt.w_s**2
        m[QSY, QSY] += flt.w_s**2
    if spatial.idler:
        m[QIX, QIX] += flt.w_i**2
        m[QIY, QIY] += flt.w_i**2
    if spectral.signal:
        m[WS, WS] += _inverse_square(flt.sigma_s, cfg.signal_wavelength)
    if spectral.idler:
        m[WI, WI] += _inverse_square(flt.sigma_i, cfg.idler_wavelength)
    m += gamma * L * L * np.outer(b, b)

    a = -0.25 * m
    a = 0.5 * (a + a.T)
    return QuadraticForm(a)


def mode_function_value(q: QuadraticForm, x):
    """|phi(x)|^2 / |N|^2 = exp(2 x^T A x); ``x`` may carry leading batch axes."""
    x = np.asarray(x, dtype=float)
    return np.exp(2.0 * np.einsum("...i,ij,...j->...", x, q.matrix, x))
