"""Brute-force tensor-grid quadrature used to cross-check the closed forms.

Nothing here evaluates a determinant. Mass grids are spaced by the
conditional width 1/sqrt(diag(-2A)) of each coordinate and extend over its
marginal width; purities are assembled from grid-discretized density
matrices.

Reductions run in a fixed order (last axis first, then a final sum over the
leading axis), so results do not depend on the chunk size.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GridTooCoarse, NotPositiveDefinite
from .gaussian import reduce_pure_state, unconfined_directions
from .model import COORDS, X_BLOCK, Y_BLOCK, QuadraticForm


@dataclass(frozen=True)
class QuadratureSpec:
    half_width: float = 6.0  # in units of the per-coordinate scale
    points: int = 41
    rule: str = "trapezoid"

    def __post_init__(self):
        if self.points < 11 or self.points % 2 == 0:
            raise ValueError("points must be odd and >= 11")
        if self.half_width < 4:
            raise ValueError("half_width must be >= 4")
        if self.rule not in ("trapezoid", "midpoint"):
            raise ValueError(f"unknown rule {self.rule!r}")

    def refined(self):
        return QuadratureSpec(self.half_width, 2 * self.points - 1, self.rule)

    def nodes(self, scale, stretch=1.0):
        """Nodes and weights on [-h, h] with h = half_width * scale * stretch.

        ``stretch >= 1`` widens the range while keeping the node spacing of
        the unstretched grid.
        """
        h = self.half_width * scale * stretch
        n = 2 * int(np.ceil(0.5 * (self.points - 1) * stretch)) + 1
        if self.rule == "trapezoid":
            x = np.linspace(-h, h, n)
            w = np.full(n, 2 * h / (n - 1))
            w[0] *= 0.5
            w[-1] *= 0.5
        else:
            dx = 2 * h / n
            x = -h + dx * (np.arange(n) + 0.5)
            w = np.full(n, dx)
        return x, w


def _matrix(a):
    return a.matrix if isinstance(a, QuadraticForm) else np.asarray(a, dtype=float)


def _require_pd(m, names):
    try:
        np.linalg.cholesky(m)
    except np.linalg.LinAlgError:
        raise NotPositiveDefinite("oracle integrand is not confined", unconfined_directions(m, names)) from None


def _grid_integral(m, nodes, weights, chunk=8, lin=None):
    """Tensor-grid sum of prod(weights) * exp(-x^T m x + lin . x)."""
    d = len(nodes)
    lin = np.zeros(d) if lin is None else lin
    rest = []
    for k in range(1, d):
        shape = [1] * (d - 1)
        shape[k - 1] = nodes[k].size
        rest.append(nodes[k].reshape(shape))
    # exponent split as q_rest(x1..) + x0 * 2 c(x1..) + (m00 x0^2 - lin0 x0)
    q_rest = 0.0
    cross = 0.0
    for j in range(1, d):
        xj = rest[j - 1]
        q_rest = q_rest + m[j, j] * xj**2 - lin[j] * xj
        cross = cross + 2.0 * m[0, j] * xj
        for k in range(j + 1, d):
            q_rest = q_rest + 2.0 * m[j, k] * xj * rest[k - 1]
    q_rest = np.broadcast_to(q_rest, [n.size for n in nodes[1:]])
    n0 = nodes[0].size
    slab_values = np.empty(n0)
    # axis 0 is walked in chunks; each slab is reduced innermost axis first
    for start in range(0, n0, chunk):
        x0 = nodes[0][start : start + chunk].reshape([-1] + [1] * (d - 1))
        f = np.exp(-(q_rest + x0 * cross + (m[0, 0] * x0 - lin[0]) * x0))
        for k in range(d - 1, 0, -1):
            f = np.sum(f * weights[k].reshape([-1 if i == k else 1 for i in range(k + 1)]), axis=-1)
        slab_values[start : start + chunk] = f
    return float(np.sum(weights[0] * slab_values))


def _axis_nodes(m, spec):
    """Spacing set by the conditional width 1/sqrt(m_ii), range by the marginal width."""
    scale = 1.0 / np.sqrt(np.diag(m))
    stretch = np.maximum(1.0, np.sqrt(np.diag(np.linalg.inv(m)) * np.diag(m)))
    nw = [spec.nodes(s, r) for s, r in zip(scale, stretch)]
    return [x for x, _ in nw], [w for _, w in nw]


def _block_mass(m, spec, chunk):
    nodes, weights = _axis_nodes(m, spec)
    return _grid_integral(m, nodes, weights, chunk)


def grid_gaussian_integral(m, spec: QuadratureSpec = QuadratureSpec(points=21), refine=True, chunk=8):
    """Tensor-grid value of the integral of exp(-x^T M x) over R^n."""
    m = np.asarray(m, dtype=float)
    _require_pd(m, [f"x{k}" for k in range(m.shape[0])])
    value = _block_mass(m, spec, chunk)
    if refine:
        fine = _block_mass(m, spec.refined(), chunk)
        if abs(fine - value) > 1e-4 * abs(fine):
            raise GridTooCoarse(f"integral moved by {abs(fine / value - 1):.2e} on refinement")
    return value


def oracle_mass(a, spec: QuadratureSpec = QuadratureSpec(points=21), refine=True, chunk=8):
    """Integral of exp(2 x^T A x) over R^6 as (y-block mass) * (x/Omega-block mass).

    Strongly correlated blocks get proportionally more nodes along their
    long axes, so the cost grows with the correlation of the form.
    """
    m = -2.0 * _matrix(a)
    _require_pd(m, list(COORDS))
    cross = m[np.ix_(Y_BLOCK, X_BLOCK)]
    if np.any(cross != 0.0):
        raise ValueError("y-block couples to the x/Omega block; factorization does not apply")
    my = m[np.ix_(Y_BLOCK, Y_BLOCK)]
    mx = m[np.ix_(X_BLOCK, X_BLOCK)]
    value = _block_mass(my, spec, chunk) * _block_mass(mx, spec, chunk)
    if refine:
        fine = _block_mass(my, spec.refined(), chunk) * _block_mass(mx, spec.refined(), chunk)
        if abs(fine - value) > 1e-4 * abs(fine):
            raise GridTooCoarse(f"mass moved by {abs(fine / value - 1):.2e} on refinement")
    return value


def _coupled_component(m, keep):
    """Coordinates reachable from ``keep`` through nonzero entries of ``m``."""
    seen = set(keep)
    frontier = list(keep)
    while frontier:
        j = frontier.pop()
        for k in np.nonzero(m[j] != 0.0)[0]:
            if int(k) not in seen:
                seen.add(int(k))
                frontier.append(int(k))
    return sorted(seen)


def _discrete_purity(rho, w):
    """sum_gh w_g w_h rho_gh rho_hg / (sum_g w_g rho_gg)^2."""
    ww = np.outer(w, w)
    num = np.sum(ww * rho * rho.T)
    den = np.sum(w * np.diag(rho)) ** 2
    return float(num / den)


def _kernel_grid(a_full, keep, spec):
    """Kept-coordinate nodes scaled by the marginal widths of |phi|^2."""
    cov = np.linalg.inv(-4.0 * a_full)
    nw = [spec.nodes(np.sqrt(cov[k, k])) for k in keep]
    if len(keep) == 1:
        pts = nw[0][0][:, None]
        w = nw[0][1]
    else:
        g = np.meshgrid(*[x for x, _ in nw], indexing="ij")
        pts = np.stack([gi.ravel() for gi in g], axis=1)
        gw = np.meshgrid(*[w for _, w in nw], indexing="ij")
        w = np.prod(np.stack([gi.ravel() for gi in gw], axis=1), axis=1)
    return pts, w


def _purity_from_kernel(a_full, keep, spec):
    k = reduce_pure_state(a_full, keep)
    if len(keep) == 2 and k.P[0, 1] == 0.0 and k.W[0, 1] == 0.0:
        # uncoupled kept coordinates: the grid density matrix is a Kronecker
        # product, so its discrete purity is the product of the 1D ones
        return _purity_from_kernel(a_full, keep[:1], spec) * _purity_from_kernel(a_full, keep[1:], spec)
    pts, w = _kernel_grid(a_full, keep, spec)
    diag = np.einsum("gi,ij,gj->g", pts, k.P, pts)
    rho = np.exp(diag[:, None] + diag[None, :] + 2.0 * pts @ k.W @ pts.T)
    return _discrete_purity(rho, w)


def _purity_deep(a_full, keep, spec, kernel_points, chunk):
    """Density matrix by direct quadrature over the discarded coordinates.

    For a single kept coordinate a, phi(a, b) phi(a', b) integrates to
    exp(A_aa (a^2 + a'^2)) * I(a + a') with
    I(s) = int exp(2 s A_ab b + 2 b^T A_bb b) db; discarded coordinates that do
    not couple to a contribute a constant factor and are skipped.
    """
    (j,) = keep
    comp = _coupled_component(a_full, keep)
    drop = [k for k in comp if k != j]
    kspec = QuadratureSpec(spec.half_width, kernel_points, spec.rule)
    pts, w = _kernel_grid(a_full, keep, kspec)
    a = pts[:, 0]
    n = a.size
    idx = np.add.outer(np.arange(n), np.arange(n))
    # every distinct a_g + a_h on a uniform grid, indexed by g + h
    sums = np.concatenate([a + a[0], a[1:] + a[-1]])
    if not drop:
        integrals = np.ones_like(sums)
    else:
        a_bb = a_full[np.ix_(drop, drop)]
        a_ab = a_full[j, drop]
        m = -2.0 * a_bb
        _require_pd(m, [COORDS[k] for k in drop])
        bspec = QuadratureSpec(spec.half_width + 2.0, spec.points, spec.rule)
        nodes, weights = _axis_nodes(m, bspec)
        integrals = np.empty_like(sums)
        for t, s in enumerate(sums):
            integrals[t] = _grid_integral(m, nodes, weights, chunk, lin=2.0 * s * a_ab)
    a_aa = a_full[j, j]
    rho = np.exp(a_aa * (a[:, None] ** 2 + a[None, :] ** 2)) * integrals[idx]
    return _discrete_purity(rho, w)


def oracle_purity(
    a,
    keep,
    spec: QuadratureSpec = QuadratureSpec(),
    deep=False,
    refine=True,
    kernel_points=21,
    chunk=8,
):
    """Purity of the reduced state on ``keep`` from a grid-discretized density matrix.

    The default mode samples the kernel produced by :func:`reduce_pure_state`;
    ``deep=True`` (single kept coordinate only) builds every matrix element by
    direct quadrature over the discarded coordinates instead.
    """
    m = _matrix(a)
    keep = tuple(int(k) for k in keep)
    if not 1 <= len(keep) <= 2:
        raise ValueError("oracle purity supports one or two kept coordinates")
    _require_pd(-2.0 * m, list(COORDS))
    if deep:
        if len(keep) != 1:
            raise ValueError("deep mode supports a single kept coordinate")
        value = _purity_deep(m, keep, spec, kernel_points, chunk)
        if refine:
            fine = _purity_deep(m, keep, spec, 2 * kernel_points - 1, chunk)
    else:
        value = _purity_from_kernel(m, keep, spec)
        if refine:
            fine = _purity_from_kernel(m, keep, spec.refined())
    if refine and abs(fine - value) > 1e-4 * abs(fine):
        raise GridTooCoarse(f"purity moved by {abs(fine / value - 1):.2e} on refinement")
    return value
