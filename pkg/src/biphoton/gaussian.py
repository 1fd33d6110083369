"""Closed-form Gaussian integrals over quadratic forms.

Every determinant goes through a Cholesky factorization; a failed
factorization is reported as a domain error naming the unconfined direction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DiscardedBlockNotDefinite, NotPositiveDefinite, NotTraceClass
from .model import COORDS, QuadraticForm


@dataclass(frozen=True)
class GaussianKernel:
    """Reduced density operator rho(a, a') ~ exp(a^T P a + a'^T P a' + 2 a^T W a')."""

    subset: tuple[int, ...]
    P: np.ndarray
    W: np.ndarray

    @property
    def names(self):
        return tuple(COORDS[k] for k in self.subset)


def _as_matrix(a):
    return a.matrix if isinstance(a, QuadraticForm) else np.asarray(a, dtype=float)


def unconfined_directions(m, names, tol=0.3):
    """Coordinates dominating the eigenvector of the smallest eigenvalue of ``m``."""
    _, vecs = np.linalg.eigh(m)
    v = np.abs(vecs[:, 0])
    return [names[k] for k in np.nonzero(v >= tol * v.max())[0]]


def logdet_pd(m, names=None, error=NotPositiveDefinite, what="matrix"):
    """log det of a symmetric positive-definite matrix via Cholesky."""
    m = np.asarray(m, dtype=float)
    try:
        chol = np.linalg.cholesky(m)
    except np.linalg.LinAlgError:
        chol = None
    if chol is None or not np.all(np.isfinite(chol)):
        names = names or [f"x{k}" for k in range(m.shape[0])]
        raise error(f"{what} is not positive definite", unconfined_directions(m, names))
    return 2.0 * np.sum(np.log(np.diag(chol)))


def gaussian_norm_integral(m, names=None):
    """Integral of exp(-x^T M x) over R^n, i.e. pi^(n/2) / sqrt(det M)."""
    m = np.asarray(m, dtype=float)
    n = m.shape[0]
    return float(np.exp(0.5 * n * np.log(np.pi) - 0.5 * logdet_pd(m, names)))


def is_negative_semidefinite(a, rtol=1e-12):
    """Eigenvalue-based diagnostic, tolerant to round-off at ``rtol * ||A||``."""
    a = _as_matrix(a)
    vals = np.linalg.eigvalsh(a)
    return bool(vals.max() <= rtol * max(np.abs(vals).max(), np.finfo(float).tiny))


def reduce_pure_state(a, keep) -> GaussianKernel:
    """Partial trace of the pure state exp(x^T A x) over every coordinate not in ``keep``.

    Integrating phi(a, b) phi(a', b) over the discarded block b gives
    P = A_aa + Wc and W = Wc with Wc = -1/2 A_ab A_bb^-1 A_ab^T.
    """
    m = _as_matrix(a)
    n = m.shape[0]
    keep = tuple(int(k) for k in keep)
    if len(set(keep)) != len(keep) or not keep or any(k < 0 or k >= n for k in keep):
        raise ValueError(f"invalid coordinate subset {keep}")
    drop = tuple(k for k in range(n) if k not in keep)
    names = COORDS if n == len(COORDS) else [f"x{k}" for k in range(n)]

    a_aa = m[np.ix_(keep, keep)]
    if drop:
        a_ab = m[np.ix_(keep, drop)]
        a_bb = m[np.ix_(drop, drop)]
        logdet_pd(
            -a_bb,
            [names[k] for k in drop],
            DiscardedBlockNotDefinite,
            "discarded block",
        )
        wc = -0.5 * a_ab @ np.linalg.solve(a_bb, a_ab.T)
        wc = 0.5 * (wc + wc.T)
    else:
        wc = np.zeros_like(a_aa)
    p = a_aa + wc
    kernel = GaussianKernel(keep, p, wc)
    # trace class <=> Schur complement P + W of A_bb negative definite <=> A negative definite
    try:
        logdet_pd(-m, list(names), NotTraceClass, "pure state")
    except NotTraceClass as exc:
        raise NotTraceClass("reduced state is not trace class", exc.directions) from None
    return kernel


def purity(k: GaussianKernel) -> float:
    """Tr(rho^2) / Tr(rho)^2 = sqrt(det(P + W) / det(P - W)).

    Tr(rho) integrates exp(-a^T [-2(P+W)] a); Tr(rho^2) integrates the 2n-dim
    form [[-2P, -2W], [-2W, -2P]] whose determinant factorizes into
    det(-2(P+W)) det(-2(P-W)).
    """
    names = list(k.names)
    ld_plus = logdet_pd(-2.0 * (k.P + k.W), names, NotTraceClass, "kernel diagonal")
    ld_minus = logdet_pd(-2.0 * (k.P - k.W), names, NotTraceClass, "kernel")
    return float(np.exp(0.5 * (ld_plus - ld_minus)))


def detection_probability_ratio(a_num, a_den) -> float:
    """Ratio of the masses of exp(2 x^T A x) for two quadratic forms.

    Equals sqrt(det(-2 A_den) / det(-2 A_num)); lies in (0, 1] whenever
    A_num - A_den is negative semidefinite.
    """
    mn, md = _as_matrix(a_num), _as_matrix(a_den)
    names = list(COORDS) if mn.shape[0] == len(COORDS) else None
    ld_num = logdet_pd(-2.0 * mn, names, NotPositiveDefinite, "numerator form")
    ld_den = logdet_pd(-2.0 * md, names, NotPositiveDefinite, "denominator form")
    return float(np.exp(0.5 * (ld_den - ld_num)))
