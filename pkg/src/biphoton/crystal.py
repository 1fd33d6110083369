"""Refractive indices, walk-off and group delays of a negative uniaxial crystal.

Units: wavelengths in micrometers, angles in radians, group delays in fs/um.
Principal indices follow n^2 = A + B / (lambda^2 - C) - D * lambda^2.

Derivatives with respect to angle and wavelength are closed-form; finite
differences appear only in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import bisect

from .errors import InvalidConfig, NoPhaseMatching, OutOfValidityWindow

C_UM_PER_FS = 0.299792458

Coefficients = tuple[float, float, float, float]


@dataclass(frozen=True)
class SellmeierSet:
    ordinary: Coefficients
    extraordinary: Coefficients
    window: tuple[float, float] = (0.22, 1.06)

    def check(self, wavelength):
        lo, hi = self.window
        lam = np.asarray(wavelength, dtype=float)
        if np.any(~np.isfinite(lam)) or np.any(lam < lo) or np.any(lam > hi):
            raise OutOfValidityWindow(
                f"wavelength {wavelength} um outside validity window [{lo}, {hi}] um"
            )


# Eimerl et al. (1987) fit for beta-barium borate, 0.22-1.06 um.
BBO = SellmeierSet(
    ordinary=(2.7405, 0.0184, 0.0179, 0.0155),
    extraordinary=(2.3730, 0.0128, 0.0156, 0.0044),
)


@dataclass(frozen=True)
class CrystalParams:
    """Crystal slab; ``theta`` is the angle between wavevector and optic axis."""

    length: float  # um
    theta: float  # rad
    sellmeier: SellmeierSet = field(default=BBO)
    sinc_gamma: float = 0.193

    def __post_init__(self):
        if not self.length > 0:
            raise InvalidConfig("crystal length must be positive")
        if not 0 < self.theta < np.pi / 2:
            raise InvalidConfig("theta must lie in (0, pi/2)")
        if not self.sinc_gamma > 0:
            raise InvalidConfig("sinc_gamma must be positive")


@dataclass(frozen=True)
class DispersionData:
    """Linear coefficients of the longitudinal phase mismatch.

    delta_k = (rho_p - rho_s) qx_s + rho_p qx_i + d_s Omega_s - d_i Omega_i
    """

    rho_p: float  # rad
    rho_s: float  # rad
    d_s: float  # fs/um, signal minus pump inverse group velocity
    d_i: float  # fs/um, idler minus pump inverse group velocity

    def __post_init__(self):
        vals = (self.rho_p, self.rho_s, self.d_s, self.d_i)
        if not all(np.isfinite(v) for v in vals):
            raise InvalidConfig("dispersion coefficients must be finite")
        if not (abs(self.rho_p) < np.pi / 2 and abs(self.rho_s) < np.pi / 2):
            raise InvalidConfig("walk-off angles must lie in (-pi/2, pi/2)")


def _principal(coeffs, lam):
    a, b, c, d = coeffs
    lam2 = lam * lam
    return np.sqrt(a + b / (lam2 - c) - d * lam2)


def _principal_dlam(coeffs, lam):
    a, b, c, d = coeffs
    lam2 = lam * lam
    n = np.sqrt(a + b / (lam2 - c) - d * lam2)
    return (-b * lam / (lam2 - c) ** 2 - d * lam) / n


def index_ordinary(s: SellmeierSet, wavelength):
    s.check(wavelength)
    return _principal(s.ordinary, wavelength)


def index_principal_extraordinary(s: SellmeierSet, wavelength):
    s.check(wavelength)
    return _principal(s.extraordinary, wavelength)


def index_extraordinary(s: SellmeierSet, wavelength, theta):
    """Index of the extraordinary wave travelling at ``theta`` from the optic axis."""
    s.check(wavelength)
    no = _principal(s.ordinary, wavelength)
    ne = _principal(s.extraordinary, wavelength)
    c, sn = np.cos(theta), np.sin(theta)
    return 1.0 / np.sqrt(c * c / (no * no) + sn * sn / (ne * ne))


def dindex_extraordinary_dtheta(s: SellmeierSet, wavelength, theta):
    n = index_extraordinary(s, wavelength, theta)
    no = _principal(s.ordinary, wavelength)
    ne = _principal(s.extraordinary, wavelength)
    return n**3 * np.sin(theta) * np.cos(theta) * (1.0 / no**2 - 1.0 / ne**2)


def walkoff_angle(s: SellmeierSet, wavelength, theta):
    """Walk-off -(1/n) dn/dtheta of the extraordinary wave; >= 0 for BBO."""
    n = index_extraordinary(s, wavelength, theta)
    return -dindex_extraordinary_dtheta(s, wavelength, theta) / n


def dindex_dwavelength(s: SellmeierSet, wavelength, theta=None):
    """dn/dlambda in 1/um. ``theta=None`` selects the ordinary wave."""
    s.check(wavelength)
    dno = _principal_dlam(s.ordinary, wavelength)
    if theta is None:
        return dno
    no = _principal(s.ordinary, wavelength)
    ne = _principal(s.extraordinary, wavelength)
    dne = _principal_dlam(s.extraordinary, wavelength)
    n = index_extraordinary(s, wavelength, theta)
    c2, s2 = np.cos(theta) ** 2, np.sin(theta) ** 2
    return n**3 * (c2 * dno / no**3 + s2 * dne / ne**3)


def group_delay_coefficient(s: SellmeierSet, wavelength, theta=None):
    """Inverse group velocity (n - lambda dn/dlambda) / c in fs/um.

    ``theta=None`` selects the ordinary wave, otherwise the extraordinary wave
    at that propagation angle.
    """
    if theta is None:
        n = index_ordinary(s, wavelength)
    else:
        n = index_extraordinary(s, wavelength, theta)
    return (n - wavelength * dindex_dwavelength(s, wavelength, theta)) / C_UM_PER_FS


def phase_mismatch(s: SellmeierSet, pump_wavelength, theta):
    """Collinear e -> e + o mismatch in 1/um (wavevectors divided by 2 pi).

    Pump and signal extraordinary, idler ordinary, both at twice the pump
    wavelength.
    """
    lp = pump_wavelength
    ls = 2.0 * lp
    return (
        index_extraordinary(s, lp, theta) / lp
        - index_extraordinary(s, ls, theta) / ls
        - index_ordinary(s, ls) / ls
    )


def phase_matching_angle(s: SellmeierSet, pump_wavelength, scan_points=257):
    """Angle in (0, pi/2) where the degenerate type-II mismatch vanishes.

    Brackets the root on a uniform scan and refines it by bisection. When the
    scan shows several sign changes the smallest angle is returned.
    """
    s.check(pump_wavelength)
    s.check(2.0 * pump_wavelength)
    eps = 1e-9
    grid = np.linspace(eps, np.pi / 2 - eps, scan_points)
    values = phase_mismatch(s, pump_wavelength, grid)
    changes = np.nonzero(np.sign(values[:-1]) * np.sign(values[1:]) <= 0)[0]
    if changes.size == 0:
        raise NoPhaseMatching(
            f"mismatch keeps one sign on (0, pi/2) at pump {pump_wavelength} um"
        )
    k = changes[0]
    f = lambda t: float(phase_mismatch(s, pump_wavelength, t))  # noqa: E731
    theta = bisect(f, grid[k], grid[k + 1], xtol=1e-16, rtol=4 * np.finfo(float).eps, maxiter=200)
    residual = abs(f(theta))
    if residual >= 1e-12:
        raise NoPhaseMatching(f"bisection stalled with residual {residual:.3e} 1/um")
    return theta


def dispersion_data(c: CrystalParams, pump_wavelength, signal_wavelength=None, idler_wavelength=None):
    """Walk-off angles and group-delay differences entering the phase mismatch."""
    s = c.sellmeier
    lp = pump_wavelength
    ls = 2.0 * lp if signal_wavelength is None else signal_wavelength
    li = 2.0 * lp if idler_wavelength is None else idler_wavelength
    kp = group_delay_coefficient(s, lp, c.theta)
    return DispersionData(
        rho_p=float(walkoff_angle(s, lp, c.theta)),
        rho_s=float(walkoff_angle(s, ls, c.theta)),
        d_s=float(group_delay_coefficient(s, ls, c.theta) - kp),
        d_i=float(group_delay_coefficient(s, li) - kp),
    )
