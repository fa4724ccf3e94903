"""Canonical Wiener-Hopf factorization of matrix symbols.

Right factorization a = u_minus u_plus and left factorization
a = v_plus v_minus, normalized by u_minus(inf) = I and f_minus(inf) = I
(the left factors are inverses of the factors of a^-1).  The block path
uses the finite section method: the first block column of T_m(a)^-1
carries the coefficients of u_plus^-1, and its failure mode
(ill-conditioning, large residuals) doubles as the detector for nonzero
partial indices.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (IllConditionedSection, NonCanonical, NonZeroWinding,
                     SpectrumTooClose)
from .symbol import (LaurentMatrixSeries, SymbolGrid, _branch_log, _margin,
                     add_constant, certified_inverse, coefficients_from_samples,
                     multiply)
from .toeplitz import toeplitz_section

DEFAULT_TOL = 1e-8


@dataclass(frozen=True)
class FactorDiagnostics:
    product_residual_right: float
    product_residual_left: float
    leakage: float
    inverse_margin: float


@dataclass(frozen=True, eq=False)
class WHFactors:
    """The four factor series with normalization and residual metadata.

    u_minus and v_minus are supported on offsets <= 0, u_plus and v_plus
    on offsets >= 0 (exactly, by construction; the mass removed from the
    wrong side is recorded as leakage).
    """

    u_minus: LaurentMatrixSeries
    u_plus: LaurentMatrixSeries
    v_plus: LaurentMatrixSeries
    v_minus: LaurentMatrixSeries
    residuals: FactorDiagnostics
    normalization: str = "u_minus(inf)=I, f_minus(inf)=I"


def _one_sided(series, side):
    """Zero the wrong-side offsets; return (cleaned, removed mass)."""
    kept, leak = {}, 0.0
    for k, blk in series.coeffs.items():
        wrong = k > 0 if side == "minus" else k < 0
        if wrong:
            leak += float(np.max(np.abs(blk)))
        else:
            kept[k] = blk
    return LaurentMatrixSeries(series.block_size, kept), leak


def _series_tail_trim(series, tol=1e-14):
    """Drop outermost coefficients whose cumulative mass stays below tol."""
    items = sorted(series.coeffs.items(), key=lambda kv: abs(kv[0]))
    mass = [float(np.max(np.abs(blk))) for _, blk in items]
    total = 0.0
    cut = len(items)
    for i in range(len(items) - 1, -1, -1):
        total += mass[i]
        if total > tol:
            break
        cut = i
    return LaurentMatrixSeries(series.block_size, dict(items[:cut]))


def _common_grid(parts, minimum=256):
    m = minimum
    for p in parts:
        m = max(m, p.grid_size)
    return m


def _product_residual(left, right, target):
    m = _common_grid((left, right, target))
    ls = left.sample(m).samples
    rs = right.sample(m).samples
    ts = target.sample(m).samples
    return float(np.max(np.abs(ls @ rs - ts)))


def _factors_margin(factors):
    m = _common_grid(factors)
    worst = np.inf
    for f in factors:
        margin, _ = _margin(f.sample(m).samples)
        worst = min(worst, margin)
    return worst


# ---------------------------------------------------------------------------
# scalar path

def scalar_wiener_hopf(a, cutoff=None, tol=DEFAULT_TOL):
    """Factorization of a nonvanishing scalar symbol by log splitting.

    The branch-continuous logarithm g = log a is split into g_minus
    (negative offsets) and g_plus (positive offsets plus the constant),
    and the factors are exp(g_minus), exp(g_plus).  Requires winding
    number zero.
    """
    if a.block_size != 1:
        raise ValueError("scalar path requires block size one")
    m = max(a.grid_size, 1024)
    while True:
        vals = a.sample(m).samples[:, 0, 0]
        logs, total, _ = _branch_log(vals)
        w = int(round(total / (2 * np.pi)))
        if w != 0:
            raise NonZeroWinding(f"winding number {w} != 0")
        ghat = np.fft.fft(logs) / m
        alias = float(np.abs(ghat[m // 4: 3 * m // 4]).sum())
        if alias < 1e-13 * max(1.0, float(np.abs(ghat).max())) or m >= (1 << 17):
            break
        m *= 2
    idx = np.arange(m)
    plus_mask = (idx <= m // 2)  # bins 0..m/2 hold offsets 0..m/2
    gp = np.fft.ifft(np.where(plus_mask, ghat, 0.0)) * m
    gm = np.fft.ifft(np.where(~plus_mask, ghat, 0.0)) * m
    up_samples = np.exp(gp)
    um_samples = np.exp(gm)
    if cutoff is None:
        cutoff = _adaptive_cutoff(np.fft.fft(up_samples) / m,
                                  np.fft.fft(um_samples) / m, m)
    grid_p = SymbolGrid(1, up_samples[:, None, None])
    grid_m = SymbolGrid(1, um_samples[:, None, None])
    up_raw, _ = coefficients_from_samples(grid_p, cutoff)
    um_raw, _ = coefficients_from_samples(grid_m, cutoff)
    u_plus, leak_p = _one_sided(up_raw, "plus")
    u_minus, leak_m = _one_sided(um_raw, "minus")
    leakage = max(leak_p, leak_m)
    residual = _product_residual(u_minus, u_plus, a)
    diag = FactorDiagnostics(product_residual_right=residual,
                             product_residual_left=residual,
                             leakage=leakage,
                             inverse_margin=_factors_margin((u_minus, u_plus)))
    # scalar factors commute, so the left factorization reuses them
    return WHFactors(u_minus=u_minus, u_plus=u_plus,
                     v_plus=u_plus, v_minus=u_minus, residuals=diag)


def _adaptive_cutoff(*hats_and_m):
    *hats, m = hats_and_m
    mass = np.zeros(m)
    for hat in hats:
        mass = np.maximum(mass, np.abs(hat))
    offsets = np.where(np.arange(m) < m - m // 2, np.arange(m),
                       np.arange(m) - m)
    order = np.argsort(np.abs(offsets))
    sorted_mass = mass[order]
    tail = np.concatenate((np.cumsum(sorted_mass[::-1])[::-1][1:], [0.0]))
    good = np.nonzero(tail <= 1e-13)[0]
    cutoff = int(np.abs(offsets[order][good[0]])) if len(good) else m // 2 - 1
    return min(max(cutoff, 8), m // 2 - 1)


# ---------------------------------------------------------------------------
# block path

def _first_column_solve(a, m):
    """Solve T_m(a) X = E_0; block rows of X are the u_plus^-1 coefficients."""
    n = a.block_size
    t = toeplitz_section(a, m).data
    anorm = float(np.linalg.norm(t, 1))
    try:
        lu, piv = scipy.linalg.lu_factor(t)
    except scipy.linalg.LinAlgError as exc:
        raise IllConditionedSection(str(exc)) from exc
    gecon = scipy.linalg.get_lapack_funcs("gecon", (t,))
    rcond, info = gecon(lu, anorm)
    if info != 0 or rcond < 1e-10:
        raise IllConditionedSection(
            f"section condition estimate {1.0 / max(rcond, 1e-300):.3e} exceeds 1e10")
    e0 = np.zeros(((m + 1) * n, n), dtype=complex)
    e0[:n, :n] = np.eye(n)
    x = scipy.linalg.lu_solve((lu, piv), e0)
    coeffs = {j: x[j * n:(j + 1) * n, :] for j in range(m + 1)}
    return _series_tail_trim(LaurentMatrixSeries(n, coeffs))


def _right_factorization(a, m):
    """Right factors of a with u_minus(inf) = I, plus the wrong-side leak."""
    uplus_inv = _first_column_solve(a, m)
    u_plus_raw = certified_inverse(uplus_inv, tol=1e-13)
    u_plus_raw = _series_tail_trim(u_plus_raw)
    u_plus, leak_p = _one_sided(u_plus_raw, "plus")
    u_minus_raw = multiply(a, uplus_inv)
    u_minus, leak_m = _one_sided(_series_tail_trim(u_minus_raw), "minus")
    return u_plus, u_minus, max(leak_p, leak_m)


def _block_wh_once(a, m):
    u_plus, u_minus, leak_right = _right_factorization(a, m)
    # left factorization through a^-1 = f_minus f_plus, v_pm = f_pm^-1
    ainv = certified_inverse(a, tol=1e-13)
    fplus_inv = _first_column_solve(ainv, m)  # this is v_plus directly
    v_plus, leak_vp = _one_sided(fplus_inv, "plus")
    f_minus_raw = multiply(ainv, fplus_inv)
    f_minus, leak_fm = _one_sided(_series_tail_trim(f_minus_raw), "minus")
    v_minus_raw = certified_inverse(f_minus, tol=1e-13)
    v_minus, leak_vm = _one_sided(_series_tail_trim(v_minus_raw), "minus")
    leakage = max(leak_right, leak_vp, leak_fm, leak_vm)
    diag = FactorDiagnostics(
        product_residual_right=_product_residual(u_minus, u_plus, a),
        product_residual_left=_product_residual(v_plus, v_minus, a),
        leakage=leakage,
        inverse_margin=_factors_margin((u_minus, u_plus, v_plus, v_minus)))
    return WHFactors(u_minus=u_minus, u_plus=u_plus,
                     v_plus=v_plus, v_minus=v_minus, residuals=diag)


def block_wiener_hopf(a, section=256, tol=DEFAULT_TOL):
    """Finite-section canonical factorization of a matrix symbol.

    Solves T_m(a) X = E_0 for the right factors and repeats the procedure
    on a^-1 for the left ones.  If the product residuals or the one-sided
    leakage exceed ``tol``, the section is doubled once; persistent
    failure raises NonCanonical (the symptom of nonzero partial indices).
    """
    last = None
    for m in (section, 2 * section):
        w = _block_wh_once(a, m)
        r = w.residuals
        if max(r.product_residual_right, r.product_residual_left,
               r.leakage) <= tol:
            return w
        last = w
    r = last.residuals
    raise NonCanonical(
        "residuals stay above tolerance after doubling the section: "
        f"right={r.product_residual_right:.3e} left={r.product_residual_left:.3e} "
        f"leakage={r.leakage:.3e}")


def canonical_wiener_hopf(a, section=256, tol=DEFAULT_TOL):
    """Dispatch to the scalar or block factorization path."""
    if a.block_size == 1:
        return scalar_wiener_hopf(a, tol=tol)
    return block_wiener_hopf(a, section=section, tol=tol)


# ---------------------------------------------------------------------------
# derived symbols and sweeps

def correction_symbols(w):
    """The pair b = v_minus u_plus^-1 and c = u_minus^-1 v_plus.

    These are the symbols whose Toeplitz and Hankel tails build the
    correction terms of the determinant expansion.
    """
    uplus_inv = certified_inverse(w.u_plus, tol=1e-13)
    uminus_inv = certified_inverse(w.u_minus, tol=1e-13)
    b = _series_tail_trim(multiply(w.v_minus, uplus_inv))
    c = _series_tail_trim(multiply(uminus_inv, w.v_plus))
    return b, c


@dataclass(frozen=True, eq=False)
class FactorizationSweep:
    """Factorizations of a - lambda along a contour, with diagnostics."""

    factors: tuple
    continuity_diagnostic: float
    max_product_residual: float


def factorization_sweep(a, contour, section=256, tol=DEFAULT_TOL):
    """Factor a - lambda at every contour node.

    The normalization pins the factors uniquely, so continuity along the
    contour is a meaningful diagnostic.  Because the plus factors absorb
    the full -lambda drift, the raw difference between nodes scales with
    the node spacing even for constant symbols; the diagnostic therefore
    gauges each factor by its offset-zero block before comparing, and
    reports the largest sup-norm difference of these gauged factors at
    adjacent nodes (including the wrap-around pair).
    """
    factors = []
    for lam in contour.nodes:
        shifted = add_constant(a, -lam)
        try:
            factors.append(block_wiener_hopf(shifted, section=section, tol=tol))
        except IllConditionedSection as exc:
            raise SpectrumTooClose(
                f"section nearly singular at lambda={lam:.6g}: {exc}") from exc
    grid = _common_grid([f for w in factors
                         for f in (w.u_minus, w.u_plus, w.v_plus, w.v_minus)])
    stacked = []
    for w in factors:
        gauged = []
        for f in (w.u_minus, w.u_plus, w.v_plus, w.v_minus):
            samples = f.sample(grid).samples
            gauged.append(np.linalg.inv(f.block(0)) @ samples)
        stacked.append(gauged)
    continuity = 0.0
    count = len(factors)
    for i in range(count):
        j = (i + 1) % count
        for part in range(4):
            diff = float(np.max(np.abs(stacked[i][part] - stacked[j][part])))
            continuity = max(continuity, diff)
    max_res = max(max(w.residuals.product_residual_right,
                      w.residuals.product_residual_left) for w in factors)
    return FactorizationSweep(tuple(factors), continuity, max_res)
