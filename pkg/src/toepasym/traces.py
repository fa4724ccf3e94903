"""Spectrum estimation, quadrature contours, and the trace functionals.

The trace of f over the section satisfies

    tr f(T_n(a)) = (n+1) trace_mean(a, f) + trace_constant(a, f) + o(1)

where trace_mean is the circle average of tr f(a) and trace_constant is a
contour integral of f against the logarithmic derivative of the operator
determinant det T(a-lambda) T((a-lambda)^-1).  That determinant is
rewritten through the Hankel product identity as det(I - H(a) H(w~)) with
w = (a-lambda)^-1, and the lambda derivative is taken analytically, which
avoids branch tracking along the contour.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (ContourTooTight, EigFailure, FitDegenerate, GridTooCoarse,
                     NoConvergence, SingularSymbol, SpectrumTooClose)
from .fitting import DecayFit, fit_decay
from .symbol import LaurentMatrixSeries, default_grid_size, reverse, winding_number
from .toeplitz import hankel_section, toeplitz_section, trace_f_direct


@dataclass(frozen=True, eq=False)
class SpectrumEstimate:
    """Heuristic point cloud covering sp T(a) together with sp T(a~)."""

    points: np.ndarray
    centroid: complex
    max_radius: float
    bbox: tuple

    @classmethod
    def from_points(cls, points):
        pts = np.asarray(points, dtype=complex).ravel()
        if pts.size == 0:
            raise ValueError("empty spectrum estimate")
        if not np.all(np.isfinite(pts)):
            raise EigFailure("non-finite eigenvalue in the spectrum estimate")
        centroid = complex(pts.mean())
        return cls(points=pts, centroid=centroid,
                   max_radius=float(np.max(np.abs(pts - centroid))),
                   bbox=(float(pts.real.min()), float(pts.real.max()),
                         float(pts.imag.min()), float(pts.imag.max())))


@dataclass(frozen=True, eq=False)
class ContourSpec:
    """Closed quadrature contour with trapezoid nodes and weights.

    The weights absorb the curve parametrization: a contour integral of g
    is approximated by sum_j weights[j] g(nodes[j]), and the constant-term
    functional divides that sum by 2 pi i.
    """

    nodes: np.ndarray
    weights: np.ndarray
    clearance: float
    center: complex
    radius: float


def estimate_spectrum(a, m=64, interior_grid=25):
    """Eigenvalues of the m-th sections of both Toeplitz operators plus the
    pointwise eigenvalues of the symbol.

    For scalar symbols, points of a coarse rectangle grid over the cloud's
    bounding box with nonzero winding of a - lambda are added (interior of
    the symbol curve belongs to the spectrum).
    """
    if m < 64:
        raise ValueError("section size m must be >= 64")
    try:
        ev_plus = np.linalg.eigvals(toeplitz_section(a, m).data)
        ev_minus = np.linalg.eigvals(toeplitz_section(reverse(a), m).data)
        samples = a.sample().samples
        ev_symbol = (samples[:, 0, 0] if a.block_size == 1
                     else np.linalg.eigvals(samples).ravel())
    except np.linalg.LinAlgError as exc:
        raise EigFailure(str(exc)) from exc
    clouds = [ev_plus, ev_minus, ev_symbol]
    if a.block_size == 1:
        base = np.concatenate(clouds)
        re = np.linspace(base.real.min(), base.real.max(), interior_grid)
        im = np.linspace(base.imag.min(), base.imag.max(), interior_grid)
        marked = []
        for lam in (re[:, None] + 1j * im[None, :]).ravel():
            try:
                if winding_number(_shift(a, lam)) != 0:
                    marked.append(lam)
            except (SingularSymbol, GridTooCoarse):
                marked.append(lam)  # on or next to the symbol curve
        if marked:
            clouds.append(np.asarray(marked))
    return SpectrumEstimate.from_points(np.concatenate(clouds))


def _shift(a, lam):
    coeffs = dict(a.coeffs)
    coeffs[0] = a.block(0) - lam * np.eye(a.block_size)
    return LaurentMatrixSeries(a.block_size, coeffs, a.grid_size)


def _connected(points, threshold):
    """Single-linkage connectivity of the cloud at the given threshold."""
    from scipy.sparse.csgraph import connected_components
    from scipy.spatial import cKDTree

    xy = np.column_stack([points.real, points.imag])
    tree = cKDTree(xy)
    pairs = tree.query_pairs(threshold, output_type="ndarray")
    from scipy.sparse import coo_matrix
    n = len(points)
    if n == 1:
        return True
    data = np.ones(len(pairs), dtype=np.int8)
    graph = coo_matrix((data, (pairs[:, 0], pairs[:, 1])), shape=(n, n))
    ncomp, _ = connected_components(graph, directed=False)
    return ncomp == 1


def build_contour(spectrum, margin, nodes=256):
    """Circle around the spectrum estimate with trapezoid quadrature.

    Centered at the cloud centroid with radius max distance + margin.
    Disconnected clouds (components separated by more than 4 margin) are
    rejected rather than handled with several components, as is any
    construction whose verified clearance falls below margin / 2.
    """
    if margin <= 0:
        raise ValueError("margin must be positive")
    if nodes < 64 or nodes & (nodes - 1):
        raise ValueError("node count must be a power of two >= 64")
    pts = spectrum.points
    if len(pts) > 1 and not _connected(pts, 4.0 * margin):
        raise ContourTooTight(
            "spectrum estimate splits into components separated by more "
            "than four margins; single-circle contours are not supported")
    center = spectrum.centroid
    radius = spectrum.max_radius + margin
    phis = 2 * np.pi * np.arange(nodes) / nodes
    contour_nodes = center + radius * np.exp(1j * phis)
    weights = (2 * np.pi / nodes) * 1j * radius * np.exp(1j * phis)
    clearance = float(np.min(np.abs(np.abs(pts - center) - radius)))
    if clearance < margin / 2:
        raise ContourTooTight(
            f"clearance {clearance:.3e} below margin/2 = {margin / 2:.3e}")
    return ContourSpec(nodes=contour_nodes, weights=weights,
                       clearance=clearance, center=center, radius=radius)


# ---------------------------------------------------------------------------
# trace functionals

def trace_mean(a, f, grid_size=None):
    """Circle average of tr f(a), the linear-term coefficient.

    The trace of a matrix function is the sum of f over the (pointwise)
    eigenvalues counted with multiplicity, so no eigenvector conditioning
    enters.
    """
    m = max(a.grid_size, grid_size or 0)
    samples = a.sample(m).samples
    if a.block_size == 1:
        evals = samples[:, :, 0]
    else:
        try:
            evals = np.linalg.eigvals(samples)
        except np.linalg.LinAlgError as exc:
            raise EigFailure(str(exc)) from exc
    if hasattr(f, "check"):
        f.check(evals, where="pointwise symbol eigenvalues")
    return complex(np.mean(np.sum(f(evals), axis=1)))


def _negative_offset_table(values_hat, depth, m):
    """Blocks at offsets -1..-depth from FFT bins, index d -> offset -d."""
    idx = (-np.arange(1, depth + 1)) % m
    return values_hat[idx]


def _hankel_from_table(table, m_section, n):
    j = np.arange(m_section)
    idx = j[:, None] + j[None, :]  # table[d] holds offset -(d+1)
    blocks = table[idx]
    return blocks.transpose(0, 2, 1, 3).reshape(m_section * n, m_section * n)


def trace_constant(a, f, contour, hankel_m=None, tol=1e-9, max_section=2048):
    """Contour integral of f against d/dlambda log det T(a-l) T((a-l)^-1).

    At each node the determinant is represented through
    M(l) = I - H(a) H(((a-l)^-1)~)   (the Hankel of a - l equals the
    Hankel of a, constants carry no Hankel part), and the derivative is
    the exact resolvent form tr(M^-1 M') with
    M'(l) = -H(a) H(((a-l)^-2)~).  The Hankel section size is doubled
    until the quadrature value stabilizes to ``tol``.  H(a) has only W
    nonzero rows and columns when a has positive bandwidth W, which makes
    M block triangular: every section of size m >= W yields the trace of
    the W x W corner, so the corner is what gets evaluated.
    """
    n = a.block_size
    band = max((k for k in a.coeffs if k > 0), default=0)
    if band == 0:
        return 0.0 + 0.0j  # H(a) vanishes, M(l) is the identity
    m_section = hankel_m or max(64, band)
    if hasattr(f, "check"):
        f.check(contour.nodes, where="contour nodes")
    prev = None
    while m_section <= max_section:
        m_eff = min(m_section, band)
        # the grid keeps growing with the nominal section so the
        # stabilization check also validates the coefficient accuracy
        m_grid = max(a.grid_size, default_grid_size(2 * m_section))
        samples = a.sample(m_grid).samples
        ha = hankel_section(a, m_eff).data
        eye = np.eye(m_eff * n)
        total = 0.0 + 0.0j
        fvals = f(contour.nodes)
        for lam, weight, fv in zip(contour.nodes, contour.weights, fvals):
            shifted = samples - lam * np.eye(n)
            if n == 1:
                dist = np.min(np.abs(shifted[:, 0, 0]))
            else:
                dist = float(np.linalg.svd(shifted, compute_uv=False)[:, -1].min())
            if dist <= 1e-10:
                raise SpectrumTooClose(
                    f"symbol range within {dist:.3e} of node lambda={lam:.6g}")
            inv = 1.0 / shifted if n == 1 else np.linalg.inv(shifted)
            inv2 = inv * inv if n == 1 else inv @ inv
            hat1 = np.fft.fft(inv, axis=0) / m_grid
            hat2 = np.fft.fft(inv2, axis=0) / m_grid
            depth = 2 * m_eff
            t1 = _negative_offset_table(hat1, depth, m_grid)
            t2 = _negative_offset_table(hat2, depth, m_grid)
            h1 = _hankel_from_table(t1, m_eff, n)
            h2 = _hankel_from_table(t2, m_eff, n)
            mmat = eye - ha @ h1
            mprime = -(ha @ h2)
            try:
                solved = np.linalg.solve(mmat, mprime)
            except np.linalg.LinAlgError as exc:
                raise SpectrumTooClose(
                    f"determinant representation singular at lambda={lam:.6g}"
                ) from exc
            total += weight * fv * np.trace(solved)
        val = complex(total / (2j * np.pi))
        if prev is not None and abs(val - prev) < tol:
            return val
        prev = val
        m_section *= 2
    raise NoConvergence(
        f"constant-term quadrature did not stabilize below section {max_section}")


def trace_asymptotic(a, n, f, contour, hankel_m=None):
    """(n+1) trace_mean(a, f) + trace_constant(a, f, contour)."""
    gf = trace_mean(a, f)
    ef = trace_constant(a, f, contour, hankel_m=hankel_m)
    return (n + 1) * gf + ef


def trace_remainder_scan(a, f, n_grid, contour, hankel_m=None):
    """Decay fit of |tr f(T_n) - predicted| over the grid of n.

    When the symbol carries a smoothness tag gamma, the fit also reports
    whether the slope meets the predicted band slope <= -(2 gamma - 1) + 0.3.
    Residuals at the numerical floor for every grid point raise
    FitDegenerate with the flag "exact regime" (polynomial f on a
    band-limited symbol makes the prediction an identity at finite n).
    """
    ns = sorted(int(n) for n in n_grid)
    if len(ns) < 4 or ns[0] < 4 or ns[-1] < 8 * ns[0]:
        raise ValueError("n_grid needs >= 4 points >= 4 spanning a factor of 8")
    gf = trace_mean(a, f)
    ef = trace_constant(a, f, contour, hankel_m=hankel_m)
    mags = []
    for n in ns:
        direct = trace_f_direct(a, n, f)
        mags.append(abs(direct - ((n + 1) * gf + ef)))
    target = None
    if a.smoothness_tag is not None:
        target = -(2.0 * a.smoothness_tag - 1.0) + 0.3
    return fit_decay(ns, mags, target_slope=target)
