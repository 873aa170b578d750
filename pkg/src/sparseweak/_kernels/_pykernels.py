"""NumPy fallback for the hot kernels.

Same signatures as the compiled module; pure array code, no Python-level
per-cell loops except over the K+1 lattice levels.
"""

import numpy as np

BACKEND = "python"


def suffix_max_box(avgs, want_box=True):
    """Suffix maxima of per-level cube averages, plus per-cube box sums.

    avgs[j] is a float array of length fan**j holding one value per level-j
    cube (cells are level K = len(avgs)-1).  Returns (tmax, box) where
    tmax[x] = max_{0<=j<=K} avgs[j][cube containing x] per cell, and
    box[j][m] = sum over cells x below cube m at level j of
    max_{j<=i<=K} avgs[i][...](x).  box is None if want_box is false.
    """
    klev = len(avgs) - 1
    t = np.array(avgs[klev], dtype=np.float64, copy=True)
    box = [None] * (klev + 1) if want_box else None
    if want_box:
        box[klev] = t.copy()
    for j in range(klev - 1, -1, -1):
        t2 = t.reshape(len(avgs[j]), -1)
        np.maximum(t2, np.asarray(avgs[j])[:, None], out=t2)
        if want_box:
            box[j] = t2.sum(axis=1)
    return t, box


def range_add(n, starts, stops, coeffs):
    """Sum of coeff * 1_[start, stop) over ranges, as a length-n array."""
    diff = np.zeros(n + 1, dtype=np.float64)
    np.add.at(diff, np.asarray(starts, dtype=np.int64), coeffs)
    np.add.at(diff, np.asarray(stops, dtype=np.int64), -np.asarray(coeffs, dtype=np.float64))
    return np.cumsum(diff[:-1])


def frac_integral_1d(f, alpha, xs):
    """Kernel sums sum_j f[j] * int_{cell j} |x-y|^(alpha-1) dy at points xs.

    Cells are the n equal subintervals of [0,1); the inner integrals use the
    exact antiderivative sign(y-x)|y-x|^alpha / alpha, so the singularity at
    y = x is handled without quadrature error.  Memory is chunked to keep the
    (points x edges) work array small.
    """
    f = np.asarray(f, dtype=np.float64)
    xs = np.asarray(xs, dtype=np.float64)
    n = f.size
    edges = np.arange(n + 1, dtype=np.float64) / n
    out = np.empty(xs.size, dtype=np.float64)
    inv_a = 1.0 / alpha
    chunk = max(1, (1 << 22) // (n + 1))
    for i0 in range(0, xs.size, chunk):
        x = xs[i0 : i0 + chunk, None]
        d = edges[None, :] - x
        g = np.sign(d) * np.abs(d) ** alpha * inv_a
        out[i0 : i0 + chunk] = np.diff(g, axis=1) @ f
    return out
