"""Heralded-photon observables: purities, heralding efficiencies, PEFs, joint-spectrum slices."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import InvalidGrid, UnnormalizableConfiguration
from .gaussian import detection_probability_ratio, purity, reduce_pure_state
from .model import (
    QIX,
    QIY,
    QSX,
    QSY,
    WI,
    WS,
    FilterMask,
    SourceConfig,
    assemble_quadratic_form,
    mode_function_value,
)


class Subsystem(enum.Enum):
    SPATIAL_SIGNAL = (QSX, QSY)
    SPATIAL_IDLER = (QIX, QIY)
    SPECTRAL_SIGNAL = (WS,)
    SPECTRAL_IDLER = (WI,)

    @property
    def coords(self):
        return self.value


class EtaDomain(enum.Enum):
    """Which of the heralded arm's filters are removed in the single-arm detection probability.

    ``SPATIAL`` removes only the heralded photon's collecting mode: the spectral
    filters of both arms are part of the source. ``SPECTRAL`` removes only its
    spectral filter. ``JOINT`` removes both.
    """

    JOINT = "joint"
    SPATIAL = "spatial"
    SPECTRAL = "spectral"


DEFAULT_DOMAIN = EtaDomain.SPATIAL

OBSERVABLES = (
    "p_qs",
    "p_qi",
    "p_omega_s",
    "p_omega_i",
    "eta_s",
    "eta_i",
    "pef_signal_heralded",
    "pef_idler_heralded",
)


@dataclass(frozen=True)
class ObservablesReport:
    p_qs: float
    p_qi: float
    p_omega_s: float
    p_omega_i: float
    eta_s: float
    eta_i: float
    pef_signal_heralded: float
    pef_idler_heralded: float
    config: SourceConfig
    eta_domain: EtaDomain = DEFAULT_DOMAIN

    def values(self):
        return {name: getattr(self, name) for name in OBSERVABLES}


def _arm(name):
    if name not in ("signal", "idler"):
        raise ValueError(f"arm must be 'signal' or 'idler', got {name!r}")
    return name


def subsystem_purity(cfg: SourceConfig, subsystem: Subsystem) -> float:
    """Purity of one photon's spatial or spectral state with all filters in place."""
    a = assemble_quadratic_form(cfg, FilterMask.BOTH)
    return purity(reduce_pure_state(a, subsystem.coords))


def heralding_form(cfg: SourceConfig, heralding: str, domain: EtaDomain = DEFAULT_DOMAIN):
    """Quadratic form of the single-arm detection probability for ``heralding``."""
    only = FilterMask.SIGNAL_ONLY if _arm(heralding) == "signal" else FilterMask.IDLER_ONLY
    domain = EtaDomain(domain)
    if domain is EtaDomain.JOINT:
        return assemble_quadratic_form(cfg, only)
    if domain is EtaDomain.SPATIAL:
        return assemble_quadratic_form(cfg, spatial=only, spectral=FilterMask.BOTH)
    return assemble_quadratic_form(cfg, spatial=FilterMask.BOTH, spectral=only)


def heralding_efficiency(cfg: SourceConfig, heralding: str, domain: EtaDomain = DEFAULT_DOMAIN) -> float:
    """Coincidence probability over the heralding arm's detection probability."""
    both = assemble_quadratic_form(cfg, FilterMask.BOTH)
    try:
        return detection_probability_ratio(both, heralding_form(cfg, heralding, domain))
    except UnnormalizableConfiguration as exc:
        raise type(exc)(
            f"{heralding}-heralded detection probability diverges", exc.directions
        ) from None


def pef(cfg: SourceConfig, heralded: str, domain: EtaDomain = DEFAULT_DOMAIN) -> float:
    """Spectral purity of the heralded photon times its partner's heralding efficiency."""
    if _arm(heralded) == "signal":
        return subsystem_purity(cfg, Subsystem.SPECTRAL_SIGNAL) * heralding_efficiency(cfg, "idler", domain)
    return subsystem_purity(cfg, Subsystem.SPECTRAL_IDLER) * heralding_efficiency(cfg, "signal", domain)


def report(cfg: SourceConfig, domain: EtaDomain = DEFAULT_DOMAIN) -> ObservablesReport:
    domain = EtaDomain(domain)
    both = assemble_quadratic_form(cfg, FilterMask.BOTH)
    pur = {s: purity(reduce_pure_state(both, s.coords)) for s in Subsystem}
    eta_s = detection_probability_ratio(both, heralding_form(cfg, "signal", domain))
    eta_i = detection_probability_ratio(both, heralding_form(cfg, "idler", domain))
    return ObservablesReport(
        p_qs=pur[Subsystem.SPATIAL_SIGNAL],
        p_qi=pur[Subsystem.SPATIAL_IDLER],
        p_omega_s=pur[Subsystem.SPECTRAL_SIGNAL],
        p_omega_i=pur[Subsystem.SPECTRAL_IDLER],
        eta_s=eta_s,
        eta_i=eta_i,
        pef_signal_heralded=pur[Subsystem.SPECTRAL_SIGNAL] * eta_i,
        pef_idler_heralded=pur[Subsystem.SPECTRAL_IDLER] * eta_s,
        config=cfg,
        eta_domain=domain,
    )


# joint-spectrum slices ------------------------------------------------------

SLICE_AXES = {
    "spectral": ((WS, WI), ("omega_s_rad_per_fs", "omega_i_rad_per_fs")),
    "spatial": ((QSX, QIX), ("qx_s_rad_per_um", "qx_i_rad_per_um")),
}


@dataclass(frozen=True)
class SliceGrid:
    """|phi|^2 on a 2D slice through the origin, normalized to unit maximum.

    ``values[j, k]`` is sampled at (``axis_s[j]``, ``axis_i[k]``).
    """

    domain: str
    mask: FilterMask
    axis_s: np.ndarray
    axis_i: np.ndarray
    values: np.ndarray

    @property
    def axis_names(self):
        return SLICE_AXES[self.domain][1]

    def mass(self):
        """Trapezoid integral of the normalized slice."""
        inner = np.trapezoid(self.values, self.axis_i, axis=1)
        return float(np.trapezoid(inner, self.axis_s))

    def principal_axis_deg(self):
        """Direction of the major axis of the slice's second moments, in [0, 180) degrees."""
        s, i = np.meshgrid(self.axis_s, self.axis_i, indexing="ij")
        w = self.values / self.values.sum()
        ms, mi = (w * s).sum(), (w * i).sum()
        cov = np.array(
            [
                [(w * (s - ms) ** 2).sum(), (w * (s - ms) * (i - mi)).sum()],
                [(w * (s - ms) * (i - mi)).sum(), (w * (i - mi) ** 2).sum()],
            ]
        )
        _, vecs = np.linalg.eigh(cov)
        major = vecs[:, -1]
        return float(np.degrees(np.arctan2(major[1], major[0])) % 180.0)


def axis_deviation_deg(angle, reference):
    """Smallest angle between two undirected lines given in degrees."""
    d = abs(angle - reference) % 180.0
    return min(d, 180.0 - d)


def default_slice_range(cfg: SourceConfig, domain: str, n_sigma: float = 4.0):
    """Half-width covering ``n_sigma`` marginal widths of the unfiltered slice."""
    coords = SLICE_AXES[domain][0]
    for mask in (FilterMask.NONE, FilterMask.BOTH):
        sub = -4.0 * assemble_quadratic_form(cfg, mask).matrix[np.ix_(coords, coords)]
        try:
            np.linalg.cholesky(sub)
        except np.linalg.LinAlgError:
            continue
        return float(n_sigma * np.sqrt(np.diag(np.linalg.inv(sub))).max())
    raise UnnormalizableConfiguration(f"{domain} slice is unconfined even with all filters")


def joint_spectrum_slice(
    cfg: SourceConfig,
    mask: FilterMask,
    domain: str = "spectral",
    half_range: float | None = None,
    points: int = 101,
) -> SliceGrid:
    """Sample |phi|^2 with every coordinate outside the slice set to zero."""
    if domain not in SLICE_AXES:
        raise InvalidGrid(f"unknown slice domain {domain!r}")
    if points < 2:
        raise InvalidGrid("slice needs at least 2 points per axis")
    if half_range is None:
        half_range = default_slice_range(cfg, domain)
    if not (np.isfinite(half_range) and half_range > 0):
        raise InvalidGrid(f"slice range must be finite and positive, got {half_range}")
    coords = SLICE_AXES[domain][0]
    q = assemble_quadratic_form(cfg, FilterMask(mask))
    axis = np.linspace(-half_range, half_range, points)
    s, i = np.meshgrid(axis, axis, indexing="ij")
    x = np.zeros(s.shape + (6,))
    x[..., coords[0]] = s
    x[..., coords[1]] = i
    values = mode_function_value(q, x)
    values = values / values.max()
    return SliceGrid(domain, FilterMask(mask), axis, axis.copy(), values)
