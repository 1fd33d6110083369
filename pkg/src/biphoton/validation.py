"""Closed forms against the brute-force oracles on a fixed set of seed configurations."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass

import numpy as np

from .config import make_config
from .crystal import (
    BBO,
    dindex_dwavelength,
    dindex_extraordinary_dtheta,
    index_extraordinary,
    index_ordinary,
    phase_matching_angle,
)
from .gaussian import gaussian_norm_integral, purity, reduce_pure_state
from .model import IDLER_COORDS, SIGNAL_COORDS, FilterMask, assemble_quadratic_form
from .observables import DEFAULT_DOMAIN, EtaDomain, Subsystem, heralding_form
from .oracle import QuadratureSpec, oracle_mass, oracle_purity

log = logging.getLogger(__name__)

MASS_RTOL = 1e-4
PURITY_TOL_1D = 1e-3
PURITY_TOL_2D = 2e-3
SCHMIDT_TOL = 1e-10
DERIVATIVE_RTOL = 1e-6

# (label, keyword arguments for make_config)
SEED_CONFIGS = (
    ("baseline", {}),
    ("narrow pump", {"pump_bandwidth": 0.1, "sigma_s": 0.1, "sigma_i": 0.1}),
    ("wide modes", {"w_s": 100.0, "w_i": 100.0, "sigma_s": 2.0, "sigma_i": 8.0}),
    ("wide pump", {"pump_waist": 200.0, "pump_bandwidth": 3.0, "w_s": 40.0, "w_i": 25.0}),
    ("long crystal", {"length_mm": 3.0, "w_s": 30.0, "w_i": 60.0, "sigma_s": 10.0, "sigma_i": 1.0}),
)


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    reference: float
    error: float
    tolerance: float

    @property
    def passed(self):
        return bool(np.isfinite(self.error) and self.error <= self.tolerance)

    def line(self):
        status = "ok  " if self.passed else "FAIL"
        return f"{status} {self.name}: {self.value:.12g} vs {self.reference:.12g} (err {self.error:.2e}, tol {self.tolerance:.0e})"


def _rel(a, b):
    return abs(a - b) / abs(b)


def mass_checks(label, forms, refine):
    out = []
    for name, a in forms.items():
        closed = gaussian_norm_integral(-2.0 * a.matrix)
        brute = oracle_mass(a, refine=refine)
        out.append(Check(f"{label} mass[{name}]", closed, brute, _rel(closed, brute), MASS_RTOL))
    return out


def purity_checks(label, a, deep):
    out = []
    spec = QuadratureSpec()
    for sub in Subsystem:
        closed = purity(reduce_pure_state(a, sub.coords))
        if len(sub.coords) == 1:
            brute = oracle_purity(a, sub.coords, spec, deep=deep)
            tol = PURITY_TOL_1D
        else:
            brute = oracle_purity(a, sub.coords, spec)
            tol = PURITY_TOL_2D
        out.append(Check(f"{label} purity[{sub.name.lower()}]", closed, brute, abs(closed - brute), tol))
    return out


def schmidt_check(label, a):
    ps = purity(reduce_pure_state(a, SIGNAL_COORDS))
    pi = purity(reduce_pure_state(a, IDLER_COORDS))
    return Check(f"{label} schmidt symmetry", ps, pi, abs(ps - pi), SCHMIDT_TOL)


def _central(f, x, h):
    return (f(x + h) - f(x - h)) / (2.0 * h)


def derivative_checks():
    s = BBO
    theta = phase_matching_angle(s, 0.405)
    out = []
    for lam in (0.405, 0.81):
        a = float(dindex_extraordinary_dtheta(s, lam, theta))
        fd = _central(lambda t: float(index_extraordinary(s, lam, t)), theta, 1e-5)
        out.append(Check(f"dn_e/dtheta @ {lam} um", a, fd, _rel(a, fd), DERIVATIVE_RTOL))
        a = float(dindex_dwavelength(s, lam, theta))
        fd = _central(lambda x: float(index_extraordinary(s, x, theta)), lam, 1e-5)
        out.append(Check(f"dn_e/dlambda @ {lam} um", a, fd, _rel(a, fd), DERIVATIVE_RTOL))
        a = float(dindex_dwavelength(s, lam))
        fd = _central(lambda x: float(index_ordinary(s, x)), lam, 1e-5)
        out.append(Check(f"dn_o/dlambda @ {lam} um", a, fd, _rel(a, fd), DERIVATIVE_RTOL))
    return out


def run_validation(deep=False):
    """Every check on the seed set.

    ``deep`` adds the heralding forms of every efficiency domain, refines each
    mass grid, and rebuilds 1D density matrices by direct quadrature.
    """
    checks = derivative_checks()
    for label, kwargs in SEED_CONFIGS:
        t0 = time.perf_counter()
        cfg = make_config(**kwargs)
        a = assemble_quadratic_form(cfg, FilterMask.BOTH)
        forms = {"both": a}
        for domain in EtaDomain if deep else (DEFAULT_DOMAIN,):
            for arm in ("signal", "idler"):
                forms[f"{arm} arm open, {domain.value}"] = heralding_form(cfg, arm, domain)
        checks += mass_checks(label, forms, refine=deep)
        checks += purity_checks(label, a, deep)
        checks.append(schmidt_check(label, a))
        log.info("%s checked in %.1f s", label, time.perf_counter() - t0)
    return checks
