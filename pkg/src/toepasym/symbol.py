"""Matrix-valued functions on the unit circle stored as Laurent coefficients.

A symbol is a finitely supported map from integer offsets to N x N complex
blocks.  Coefficients are the source of truth; uniform sample grids are
derived caches used for transforms and quadrature.  All values are
immutable after construction and every operation is a pure function.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import (BlockSizeMismatch, CutoffTooLarge, GridTooCoarse,
                     SingularSymbol)

#: blocks whose largest entry is below this times the data scale are dropped
#: when extracting coefficients from samples (FFT round-off, not signal)
_NOISE_FACTOR = 64 * np.finfo(float).eps


def _pow2_at_least(x):
    return 1 << max(1, int(x) - 1).bit_length() if x > 1 else 2


def default_grid_size(max_offset):
    """Smallest power of two >= max(256, 8 * max_offset)."""
    return _pow2_at_least(max(256, 8 * max_offset))


def _coerce_block(value, n):
    arr = np.asarray(value, dtype=complex)
    if arr.shape == () and n == 1:
        arr = arr.reshape(1, 1)
    if arr.shape != (n, n):
        raise BlockSizeMismatch(f"expected {n}x{n} block, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("symbol blocks must be finite")
    return arr


def _normalize_coeffs(coeffs, n):
    out = {}
    for k, value in coeffs.items():
        arr = _coerce_block(value, n)
        if np.any(arr != 0):
            arr = arr.copy()
            arr.setflags(write=False)
            out[int(k)] = arr
    return out


@dataclass(frozen=True, eq=False)
class LaurentMatrixSeries:
    """Finitely supported Fourier coefficient sequence of an N x N symbol.

    Parameters
    ----------
    block_size : int
        Block dimension N.
    coeffs : dict
        Map offset -> N x N complex block.  All-zero blocks are dropped;
        absent offsets are the zero block.
    grid_size : int, optional
        Power-of-two sample count used for transforms.  Zero selects the
        default, the smallest power of two >= max(256, 8 K) where K is the
        largest stored |offset|.  Must exceed 2 K so that round-trips do
        not alias.
    smoothness_tag : float, optional
        Advisory Hoelder-Zygmund exponent of the symbol (metadata only).
    """

    block_size: int
    coeffs: dict
    grid_size: int = 0
    smoothness_tag: float | None = None

    def __post_init__(self):
        if self.block_size < 1:
            raise ValueError("block_size must be positive")
        object.__setattr__(self, "coeffs",
                           _normalize_coeffs(self.coeffs, self.block_size))
        k_max = self.max_offset
        if self.grid_size == 0:
            object.__setattr__(self, "grid_size", default_grid_size(k_max))
        else:
            m = self.grid_size
            if m < 2 or m & (m - 1):
                raise GridTooCoarse(f"grid size {m} is not a power of two")
            if m <= 2 * k_max:
                raise GridTooCoarse(
                    f"grid size {m} aliases offsets up to {k_max}")

    @property
    def max_offset(self):
        return max((abs(k) for k in self.coeffs), default=0)

    def support(self):
        return sorted(self.coeffs)

    def block(self, k):
        blk = self.coeffs.get(int(k))
        if blk is None:
            return np.zeros((self.block_size, self.block_size), dtype=complex)
        return blk

    def sample(self, grid_size=None):
        """Evaluate on the uniform grid t_j = exp(2 pi i j / M) via FFT."""
        m = self.grid_size if grid_size is None else int(grid_size)
        if m < 2 or m & (m - 1):
            raise GridTooCoarse(f"grid size {m} is not a power of two")
        if m <= 2 * self.max_offset:
            raise GridTooCoarse(f"grid size {m} aliases offsets up to {self.max_offset}")
        n = self.block_size
        carr = np.zeros((m, n, n), dtype=complex)
        for k, blk in self.coeffs.items():
            carr[k % m] += blk
        return SymbolGrid(n, m * np.fft.ifft(carr, axis=0))

    def eval(self, theta):
        return evaluate(self, theta)

    def with_tag(self, gamma):
        return LaurentMatrixSeries(self.block_size, dict(self.coeffs),
                                   self.grid_size, gamma)


@dataclass(frozen=True, eq=False)
class SymbolGrid:
    """Samples of a symbol on the uniform M-point grid (evaluation cache)."""

    block_size: int
    samples: np.ndarray  # (M, N, N) complex

    def __post_init__(self):
        arr = np.asarray(self.samples, dtype=complex)
        if arr.ndim == 1:
            arr = arr[:, None, None]
        if arr.ndim != 3 or arr.shape[1:] != (self.block_size, self.block_size):
            raise BlockSizeMismatch(
                f"samples have shape {arr.shape}, expected (M, N, N)")
        m = arr.shape[0]
        if m < 2 or m & (m - 1):
            raise GridTooCoarse(f"sample count {m} is not a power of two")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)

    @property
    def grid_size(self):
        return self.samples.shape[0]

    @property
    def thetas(self):
        m = self.grid_size
        return 2 * np.pi * np.arange(m) / m

    @classmethod
    def from_function(cls, fn, grid_size, block_size=1):
        thetas = 2 * np.pi * np.arange(grid_size) / grid_size
        vals = np.asarray([fn(t) for t in thetas], dtype=complex)
        if vals.ndim == 1:
            vals = vals[:, None, None]
        return cls(block_size, vals)


# ---------------------------------------------------------------------------
# constructors

def scalar_symbol(coeffs, grid_size=0, smoothness_tag=None):
    """Scalar (1 x 1) series from a map offset -> complex number."""
    blocks = {k: np.array([[v]], dtype=complex) for k, v in coeffs.items()}
    return LaurentMatrixSeries(1, blocks, grid_size, smoothness_tag)


def identity_symbol(block_size=1):
    return LaurentMatrixSeries(block_size, {0: np.eye(block_size)})


def constant_symbol(block):
    arr = np.atleast_2d(np.asarray(block, dtype=complex))
    return LaurentMatrixSeries(arr.shape[0], {0: arr})


def add_constant(a, value):
    """Return a + c I (c scalar) or a + C (C an N x N block)."""
    n = a.block_size
    arr = np.asarray(value, dtype=complex)
    if arr.shape == ():
        arr = arr * np.eye(n)
    coeffs = dict(a.coeffs)
    coeffs[0] = a.block(0) + arr
    return LaurentMatrixSeries(n, coeffs, a.grid_size, a.smoothness_tag)


def zygmund_symbol(gamma, levels, seed=None):
    """Scalar lacunary test symbol with prescribed smoothness exponent.

    Sum over j = 0..levels of 2^(-gamma j) cos(2^j theta + phi_j), shifted
    by 2 + sum_j 2^(-gamma j) so the symbol stays >= 2 on the circle and
    has winding number zero.  ``seed`` draws the phases phi_j from a fixed
    generator; None means all phases zero.
    """
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    if levels < 1:
        raise ValueError("levels must be >= 1")
    if seed is None:
        phases = np.zeros(levels + 1)
    else:
        phases = np.random.default_rng(seed).uniform(0.0, 2 * np.pi, levels + 1)
    amps = 2.0 ** (-gamma * np.arange(levels + 1))
    coeffs = {0: complex(2.0 + amps.sum())}
    for j in range(levels + 1):
        k = 1 << j
        w = amps[j] / 2.0
        coeffs[k] = coeffs.get(k, 0.0) + w * np.exp(1j * phases[j])
        coeffs[-k] = coeffs.get(-k, 0.0) + w * np.exp(-1j * phases[j])
    return scalar_symbol(coeffs, smoothness_tag=float(gamma))


# ---------------------------------------------------------------------------
# transforms and arithmetic

def coefficients_from_samples(grid, cutoff):
    """Extract coefficients for |k| <= cutoff from grid samples.

    Returns (series, tail_energy) where tail_energy is the l2 mass of the
    discarded FFT bins (offsets outside [-cutoff, cutoff]).  Requires
    M >= 2 cutoff + 2 so the kept bins are unambiguous.
    """
    m = grid.grid_size
    cutoff = int(cutoff)
    if 2 * cutoff + 2 > m:
        raise CutoffTooLarge(f"cutoff {cutoff} needs a grid larger than {m}")
    hat = np.fft.fft(grid.samples, axis=0) / m
    scale = float(np.max(np.abs(grid.samples))) if grid.samples.size else 0.0
    tol = _NOISE_FACTOR * scale
    coeffs = {}
    for k in range(-cutoff, cutoff + 1):
        blk = hat[k % m]
        if np.max(np.abs(blk)) > tol:
            coeffs[k] = blk
    kept = {k % m for k in range(-cutoff, cutoff + 1)}
    tail_mask = np.ones(m, dtype=bool)
    tail_mask[sorted(kept)] = False
    tail_energy = float(np.sqrt(np.sum(np.abs(hat[tail_mask]) ** 2)))
    series = LaurentMatrixSeries(grid.block_size, coeffs)
    return series, tail_energy


def evaluate(a, theta):
    """Finite Laurent sum at angle(s) theta, shape (..., N, N)."""
    th = np.asarray(theta, dtype=float)
    n = a.block_size
    out = np.zeros(th.shape + (n, n), dtype=complex)
    for k, blk in a.coeffs.items():
        out += np.exp(1j * k * th)[..., None, None] * blk
    return out


def reverse(a):
    """Index reversal t -> 1/t: output block at k equals input block at -k."""
    return LaurentMatrixSeries(a.block_size, {-k: blk for k, blk in a.coeffs.items()},
                               a.grid_size, a.smoothness_tag)


def multiply(a, b):
    """Exact block convolution; support widens additively."""
    if a.block_size != b.block_size:
        raise BlockSizeMismatch(
            f"block sizes differ: {a.block_size} vs {b.block_size}")
    out = {}
    for k1, b1 in a.coeffs.items():
        for k2, b2 in b.coeffs.items():
            k = k1 + k2
            prod = b1 @ b2
            if k in out:
                out[k] = out[k] + prod
            else:
                out[k] = prod
    return LaurentMatrixSeries(a.block_size, out)


def _margin(samples):
    """Smallest singular value over the grid, with its argmin node."""
    if samples.shape[1] == 1:
        sv = np.abs(samples[:, 0, 0])
    else:
        sv = np.linalg.svd(samples, compute_uv=False)[:, -1]
    j = int(np.argmin(sv))
    return float(sv[j]), j


def heuristic_inverse_cutoff(max_offset, margin):
    """Documented default cutoff K + ceil(40 / |log margin|), clamped."""
    denom = max(abs(math.log(margin)), 0.05)
    extra = int(math.ceil(40.0 / denom))
    return max_offset + min(max(extra, 16), 2048)


def pointwise_inverse(a, cutoff=None, grid_size=None):
    """Per-sample matrix inverse followed by re-extraction of coefficients.

    Returns (series, residual) with residual = sup_j ||a(t_j) inv(t_j) - I||
    in the maximum entry norm, measured after truncating the inverse to
    [-cutoff, cutoff].  The default cutoff follows the heuristic
    K + ceil(40 / |log margin|) where margin is the smallest singular value
    of a on the grid.  Raises SingularSymbol when margin <= 1e-10.
    """
    m0 = grid_size or max(a.grid_size, 256)
    samples = a.sample(m0).samples
    margin, worst = _margin(samples)
    if margin <= 1e-10:
        theta = 2 * np.pi * worst / m0
        raise SingularSymbol(
            f"smallest singular value {margin:.3e} at theta={theta:.6f}")
    if cutoff is None:
        cutoff = heuristic_inverse_cutoff(a.max_offset, margin)
    cutoff = int(cutoff)
    m = max(m0, default_grid_size(cutoff))
    if grid_size is not None:
        m = max(m, int(grid_size))
    if m != m0:
        samples = a.sample(m).samples
    if a.block_size == 1:
        inv = 1.0 / samples
    else:
        inv = np.linalg.inv(samples)
    series, _ = coefficients_from_samples(SymbolGrid(a.block_size, inv), cutoff)
    back = series.sample(m).samples
    eye = np.eye(a.block_size)
    residual = float(np.max(np.abs(samples @ back - eye)))
    return series, residual


def certified_inverse(a, tol=1e-13, max_grid=1 << 17):
    """Pointwise inverse with the cutoff and grid enlarged until the
    discarded coefficient mass is below ``tol``.

    Used internally where downstream determinants need certified tails.
    """
    m = max(a.grid_size, 512)
    while True:
        samples = a.sample(m).samples
        margin, worst = _margin(samples)
        if margin <= 1e-10:
            theta = 2 * np.pi * worst / m
            raise SingularSymbol(
                f"smallest singular value {margin:.3e} at theta={theta:.6f}")
        if a.block_size == 1:
            inv = 1.0 / samples
        else:
            inv = np.linalg.inv(samples)
        hat = np.fft.fft(inv, axis=0) / m
        mass = np.max(np.abs(hat), axis=(1, 2))
        # offsets in [-m/2, m/2); alias band is the outer half
        offsets = np.where(np.arange(m) < m - m // 2, np.arange(m),
                           np.arange(m) - m)
        order = np.argsort(np.abs(offsets))
        sorted_mass = mass[order]
        tail = np.concatenate((np.cumsum(sorted_mass[::-1])[::-1][1:], [0.0]))
        alias_mass = float(sorted_mass[np.abs(offsets[order]) > m // 4].sum())
        if alias_mass <= tol or m >= max_grid:
            good = np.nonzero(tail <= tol)[0]
            cutoff = int(np.abs(offsets[order][good[0]])) if len(good) else m // 2 - 1
            cutoff = min(max(cutoff, a.max_offset, 1), m // 2 - 1)
            series, _ = coefficients_from_samples(SymbolGrid(a.block_size, inv),
                                                  cutoff)
            return series
        m *= 2


# ---------------------------------------------------------------------------
# diagnostics

def krein_norm(a):
    """sum_k ||a_k||^2 (|k| + 1) with the maximum entry norm."""
    return float(sum(np.max(np.abs(blk)) ** 2 * (abs(k) + 1)
                     for k, blk in a.coeffs.items()))


def _branch_log(values, rel_floor=1e-12):
    """Branch-continuous log along a closed sampled curve.

    Returns (log samples, total phase increment, max phase step).  The
    phase is accumulated from consecutive ratios so each step stays in
    (-pi, pi]; the total is 2 pi times the winding number when steps are
    small.  Raises SingularSymbol when values approach zero.
    """
    absv = np.abs(values)
    scale = float(absv.max()) if absv.size else 0.0
    if scale == 0.0 or absv.min() <= rel_floor * scale:
        j = int(np.argmin(absv))
        raise SingularSymbol(
            f"determinant magnitude {absv[j]:.3e} at grid node {j}")
    steps = np.angle(np.roll(values, -1) / values)
    phase = np.angle(values[0]) + np.concatenate(([0.0], np.cumsum(steps[:-1])))
    return np.log(absv) + 1j * phase, float(steps.sum()), float(np.abs(steps).max())


def winding_number(a, grid_size=None):
    """Winding number of theta -> det a(e^{i theta}) around zero.

    Raises GridTooCoarse when any per-step phase jump reaches pi/2, which
    signals that the grid is too coarse to track the branch.
    """
    m = grid_size or a.grid_size
    samples = a.sample(m).samples
    det = samples[:, 0, 0] if a.block_size == 1 else np.linalg.det(samples)
    _, total, max_step = _branch_log(det)
    if max_step >= np.pi / 2:
        raise GridTooCoarse(
            f"phase step {max_step:.3f} >= pi/2 on a grid of {m} nodes")
    w = int(round(total / (2 * np.pi)))
    if abs(total - 2 * np.pi * w) > 0.5:
        raise GridTooCoarse(
            f"accumulated phase {total:.6f} is not close to a multiple of 2 pi")
    return w


# ---------------------------------------------------------------------------
# JSON persistence
#
# Schema: { "n": N, "coeffs": [ { "k": int, "re": [[...]], "im": [[...]] } ],
#           "gamma": optional number }.
# Floats are serialized with 17 significant digits so that write/read
# round-trips are bit exact.

def _fmt(x):
    if not math.isfinite(x):
        raise ValueError("cannot serialize non-finite value")
    return format(float(x), ".17g")


def _fmt_matrix(mat):
    rows = ("[" + ", ".join(_fmt(v) for v in row) + "]" for row in mat)
    return "[" + ", ".join(rows) + "]"


def symbol_to_json(a):
    entries = []
    for k in a.support():
        blk = a.coeffs[k]
        entries.append('{"k": %d, "re": %s, "im": %s}'
                       % (k, _fmt_matrix(blk.real), _fmt_matrix(blk.imag)))
    text = '{"n": %d, "coeffs": [%s]' % (a.block_size, ", ".join(entries))
    if a.smoothness_tag is not None:
        text += ', "gamma": %s' % _fmt(a.smoothness_tag)
    return text + "}\n"


def symbol_from_json(text):
    data = json.loads(text) if isinstance(text, str) else text
    n = int(data["n"])
    coeffs = {}
    for entry in data.get("coeffs", []):
        re = np.asarray(entry["re"], dtype=float)
        im = np.asarray(entry["im"], dtype=float)
        coeffs[int(entry["k"])] = re + 1j * im
    gamma = data.get("gamma")
    return LaurentMatrixSeries(n, coeffs,
                               smoothness_tag=None if gamma is None else float(gamma))


def save_symbol(a, path):
    with open(path, "w", encoding="ascii") as fh:
        fh.write(symbol_to_json(a))


def load_symbol(path):
    with open(path, "r", encoding="ascii") as fh:
        return symbol_from_json(fh.read())
