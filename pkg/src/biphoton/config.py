"""JSON configuration documents: validation, defaults and conversion to model objects.

Field names carry their units (``*_um``, ``*_nm``, ``*_mm``, ``*_rad``). A
missing field takes the default below; an empty document ``{}`` is the 1 mm
BBO source pumped at 405 nm with sigma_p = 1 nm and w_p = 10 um, with 5 nm
spectral filters and 10 um collecting modes.
"""

from __future__ import annotations

import copy
import functools
import itertools
import json
import math
from dataclasses import dataclass
from importlib import resources

import jsonschema
import numpy as np

from .crystal import BBO, CrystalParams, DispersionData, SellmeierSet, dispersion_data, phase_matching_angle
from .errors import SchemaError, UnitError
from .model import FilterSet, PumpParams, SourceConfig
from .observables import DEFAULT_DOMAIN, OBSERVABLES, EtaDomain

DEFAULT_DOCUMENT = {
    "pump": {"wavelength_um": 0.405, "waist_um": 10.0, "bandwidth_nm": 1.0},
    "crystal": {
        "length_mm": 1.0,
        "theta_rad": None,
        "sinc_gamma": 0.193,
        "sellmeier": {
            "ordinary": list(BBO.ordinary),
            "extraordinary": list(BBO.extraordinary),
            "window_um": list(BBO.window),
        },
    },
    "dispersion": None,
    "filters": {
        "signal": {"bandwidth_nm": 5.0, "mode_waist_um": 10.0},
        "idler": {"bandwidth_nm": 5.0, "mode_waist_um": 10.0},
    },
    "wavelengths": {"signal_um": None, "idler_um": None},
}


@functools.lru_cache(maxsize=None)
def load_schema():
    return json.loads(resources.files("biphoton").joinpath("data/schema.json").read_text())


def _validate(doc, definition):
    root = load_schema()
    schema = {"$defs": root["$defs"], "$ref": f"#/$defs/{definition}"}
    validator = jsonschema.Draft202012Validator(schema)
    error = jsonschema.exceptions.best_match(validator.iter_errors(doc))
    if error is not None:
        pointer = "".join(f"/{p}" for p in error.absolute_path)
        raise SchemaError(error.message, pointer)


# JSON pointers ---------------------------------------------------------------


def split_pointer(pointer):
    if not pointer.startswith("/"):
        raise SchemaError("JSON pointer must start with '/'", pointer)
    return [p.replace("~1", "/").replace("~0", "~") for p in pointer[1:].split("/")]


def get_pointer(doc, pointer):
    node = doc
    for part in split_pointer(pointer):
        if not isinstance(node, dict) or part not in node:
            raise SchemaError("path does not resolve", pointer)
        node = node[part]
    return node


def set_pointer(doc, pointer, value):
    parts = split_pointer(pointer)
    node = doc
    for part in parts[:-1]:
        node = node[part]
    node[parts[-1]] = value


# defaults and magnitude checks ------------------------------------------------


def _merge(defaults, doc):
    out = copy.deepcopy(defaults)
    for key, value in doc.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


def resolve_document(doc):
    """Schema-check ``doc`` and fill every missing field with its default."""
    _validate(doc, "config")
    full = _merge(DEFAULT_DOCUMENT, doc)
    if full.get("dispersion") == {}:
        full["dispersion"] = None
    check_units(full)
    return full


_POSITIVE = (
    "/pump/wavelength_um",
    "/pump/bandwidth_nm",
    "/crystal/length_mm",
    "/crystal/sinc_gamma",
    "/filters/signal/bandwidth_nm",
    "/filters/idler/bandwidth_nm",
    "/wavelengths/signal_um",
    "/wavelengths/idler_um",
)
_NON_NEGATIVE = (
    "/pump/waist_um",
    "/filters/signal/mode_waist_um",
    "/filters/idler/mode_waist_um",
)


def check_units(full):
    for pointer in _POSITIVE:
        v = get_pointer(full, pointer)
        if v is not None and not (math.isfinite(v) and v > 0):
            raise UnitError(f"must be positive, got {v}", pointer)
    for pointer in _NON_NEGATIVE:
        v = get_pointer(full, pointer)
        if not (math.isfinite(v) and v >= 0):
            raise UnitError(f"must be non-negative, got {v}", pointer)
    theta = full["crystal"]["theta_rad"]
    if theta is not None and not 0 < theta < math.pi / 2:
        raise UnitError(f"must lie in (0, pi/2), got {theta}", "/crystal/theta_rad")
    lo, hi = full["crystal"]["sellmeier"]["window_um"]
    if not 0 < lo < hi:
        raise UnitError("validity window must satisfy 0 < min < max", "/crystal/sellmeier/window_um")


@functools.lru_cache(maxsize=256)
def _matched_angle(sellmeier, pump_wavelength):
    return phase_matching_angle(sellmeier, pump_wavelength)


@functools.lru_cache(maxsize=4096)
def _dispersion(crystal, pump_wavelength, signal_wavelength, idler_wavelength):
    return dispersion_data(crystal, pump_wavelength, signal_wavelength, idler_wavelength)


def build_config(full) -> SourceConfig:
    """SourceConfig from a resolved document; solves the phase-matching angle when unset."""
    sm = full["crystal"]["sellmeier"]
    sellmeier = SellmeierSet(
        ordinary=tuple(float(v) for v in sm["ordinary"]),
        extraordinary=tuple(float(v) for v in sm["extraordinary"]),
        window=tuple(float(v) for v in sm.get("window_um", BBO.window)),
    )
    lp = float(full["pump"]["wavelength_um"])
    theta = full["crystal"]["theta_rad"]
    if theta is None:
        theta = _matched_angle(sellmeier, lp)
    crystal = CrystalParams(
        length=1000.0 * full["crystal"]["length_mm"],
        theta=float(theta),
        sellmeier=sellmeier,
        sinc_gamma=float(full["crystal"]["sinc_gamma"]),
    )
    ls = full["wavelengths"]["signal_um"]
    li = full["wavelengths"]["idler_um"]
    ls = 2.0 * lp if ls is None else float(ls)
    li = 2.0 * lp if li is None else float(li)
    d = full["dispersion"]
    if d is None:
        disp = _dispersion(crystal, lp, ls, li)
    else:
        disp = DispersionData(d["rho_p_rad"], d["rho_s_rad"], d["d_s_fs_per_um"], d["d_i_fs_per_um"])

    def bw(v):
        return math.inf if v is None else float(v)

    f = full["filters"]
    return SourceConfig(
        pump=PumpParams(lp, float(full["pump"]["waist_um"]), bw(full["pump"]["bandwidth_nm"])),
        crystal=crystal,
        dispersion=disp,
        filters=FilterSet(
            sigma_s=bw(f["signal"]["bandwidth_nm"]),
            sigma_i=bw(f["idler"]["bandwidth_nm"]),
            w_s=float(f["signal"]["mode_waist_um"]),
            w_i=float(f["idler"]["mode_waist_um"]),
        ),
        signal_wavelength=ls,
        idler_wavelength=li,
    )


def config_document(cfg: SourceConfig):
    """Fully resolved document for ``cfg``, including angle and dispersion."""

    def bw(v):
        return None if math.isinf(v) else v

    s = cfg.crystal.sellmeier
    d = cfg.dispersion
    return {
        "pump": {
            "wavelength_um": cfg.pump.wavelength,
            "waist_um": cfg.pump.waist,
            "bandwidth_nm": bw(cfg.pump.bandwidth),
        },
        "crystal": {
            "length_mm": cfg.crystal.length / 1000.0,
            "theta_rad": cfg.crystal.theta,
            "sinc_gamma": cfg.crystal.sinc_gamma,
            "sellmeier": {
                "ordinary": list(s.ordinary),
                "extraordinary": list(s.extraordinary),
                "window_um": list(s.window),
            },
        },
        "dispersion": None
        if d is None
        else {"rho_p_rad": d.rho_p, "rho_s_rad": d.rho_s, "d_s_fs_per_um": d.d_s, "d_i_fs_per_um": d.d_i},
        "filters": {
            "signal": {"bandwidth_nm": bw(cfg.filters.sigma_s), "mode_waist_um": cfg.filters.w_s},
            "idler": {"bandwidth_nm": bw(cfg.filters.sigma_i), "mode_waist_um": cfg.filters.w_i},
        },
        "wavelengths": {"signal_um": cfg.signal_wavelength, "idler_um": cfg.idler_wavelength},
    }


def make_config(
    *,
    pump_waist=10.0,
    pump_bandwidth=1.0,
    w_s=10.0,
    w_i=10.0,
    sigma_s=5.0,
    sigma_i=5.0,
    length_mm=1.0,
    pump_wavelength=0.405,
    theta=None,
    sinc_gamma=0.193,
    dispersion: DispersionData | None = None,
) -> SourceConfig:
    """Keyword shortcut for building a SourceConfig; bandwidths in nm, waists in um."""

    def bw(v):
        return None if v is None or math.isinf(v) else v

    doc = {
        "pump": {"wavelength_um": pump_wavelength, "waist_um": pump_waist, "bandwidth_nm": bw(pump_bandwidth)},
        "crystal": {"length_mm": length_mm, "theta_rad": theta, "sinc_gamma": sinc_gamma},
        "filters": {
            "signal": {"bandwidth_nm": bw(sigma_s), "mode_waist_um": w_s},
            "idler": {"bandwidth_nm": bw(sigma_i), "mode_waist_um": w_i},
        },
    }
    if dispersion is not None:
        doc["dispersion"] = {
            "rho_p_rad": dispersion.rho_p,
            "rho_s_rad": dispersion.rho_s,
            "d_s_fs_per_um": dispersion.d_s,
            "d_i_fs_per_um": dispersion.d_i,
        }
    return build_config(resolve_document(doc))


# sweeps -------------------------------------------------------------------------


@dataclass(frozen=True)
class SweepAxis:
    path: str
    start: float
    stop: float
    count: int
    scale: str = "linear"
    link: tuple[str, ...] = ()

    @property
    def paths(self):
        return (self.path,) + self.link

    def values(self):
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class SweepSpec:
    base_document: dict
    axes: tuple[SweepAxis, ...]
    observables: tuple[str, ...] = OBSERVABLES
    eta_domain: EtaDomain = DEFAULT_DOMAIN
    label: str = ""

    @property
    def base(self) -> SourceConfig:
        return build_config(self.base_document)

    @property
    def shape(self):
        return tuple(ax.count for ax in self.axes)

    @property
    def n_points(self):
        return int(np.prod(self.shape))

    def points(self):
        """Row-major iterator of (axis values, resolved document) pairs."""
        for combo in itertools.product(*[ax.values() for ax in self.axes]):
            doc = copy.deepcopy(self.base_document)
            for ax, v in zip(self.axes, combo):
                for p in ax.paths:
                    set_pointer(doc, p, float(v))
            yield tuple(float(v) for v in combo), doc


def sweep_from_document(doc) -> SweepSpec:
    _validate(doc, "sweep")
    base = resolve_document(doc.get("base", {}))
    axes = []
    seen = set()
    for k, ax in enumerate(doc["axes"]):
        a = SweepAxis(
            path=ax["path"],
            start=float(ax["start"]),
            stop=float(ax["stop"]),
            count=int(ax["count"]),
            scale=ax.get("scale", "linear"),
            link=tuple(ax.get("link", ())),
        )
        for p in a.paths:
            if p in seen:
                raise SchemaError(f"path {p} appears more than once", f"/axes/{k}")
            seen.add(p)
            v = get_pointer(base, p)
            if isinstance(v, dict | list | str | bool):
                raise SchemaError(f"path {p} is not a numeric field", f"/axes/{k}")
        if a.scale == "log" and not (a.start > 0 and a.stop > 0):
            raise UnitError("log axis needs positive endpoints", f"/axes/{k}")
        axes.append(a)
    return SweepSpec(
        base_document=base,
        axes=tuple(axes),
        observables=tuple(doc.get("observables", OBSERVABLES)),
        eta_domain=EtaDomain(doc.get("eta_domain", DEFAULT_DOMAIN.value)),
        label=doc.get("label", ""),
    )


def _load(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc.msg} at line {exc.lineno}") from None


def parse_config(text) -> SourceConfig | SweepSpec:
    """Parse a JSON document; documents with an ``axes`` key are sweep specs."""
    doc = _load(text)
    if not isinstance(doc, dict):
        raise SchemaError("top level must be an object")
    if "axes" in doc:
        return sweep_from_document(doc)
    return build_config(resolve_document(doc))


def parse_figure(text):
    """Validate a figure document and resolve every panel."""
    doc = _load(text)
    _validate(doc, "figure")
    panels = []
    for panel in doc["panels"]:
        if "sweep" in panel:
            panels.append((panel["label"], sweep_from_document(panel["sweep"])))
        elif "slice" in panel:
            s = panel["slice"]
            panels.append(
                (
                    panel["label"],
                    {
                        "config": build_config(resolve_document(s.get("base", {}))),
                        "domain": s.get("domain", "spectral"),
                        "masks": tuple(s.get("masks", ("none", "both", "signal", "idler"))),
                        "half_range": s.get("half_range"),
                        "points": int(s.get("points", 101)),
                    },
                )
            )
        else:
            raise SchemaError("panel needs a 'sweep' or 'slice' entry", f"/panels/{panel['label']}")
    return {"figure": doc["figure"], "title": doc.get("title", ""), "panels": panels}
