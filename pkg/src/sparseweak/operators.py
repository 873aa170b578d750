"""Sparse operator, maximal operators, fractional integral, and the
level-set decomposition of a sparse family by fractional-average size.

Operators accept a SparseFamily or any iterable of DyadicCube: sparseness
matters for the decomposition estimates, not for evaluating the operator.
The optional sigma argument makes every integral a sigma-integral
(int_Q f dsigma via exact per-cell weight integrals), which is how f*sigma
inputs are evaluated without sampling sigma.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ._kernels import frac_integral_1d, range_add, suffix_max_box
from .dyadic import SparseFamily, maximal_proper_subcubes, _complement_ranges
from .errors import ConfigError
from .grids import GridFunction, pair_sums


def _cubes_of(family):
    if isinstance(family, SparseFamily):
        return family.cubes
    return tuple(family)


def _density_cells(f, sigma):
    """Per-cell integrals of f dsigma (Lebesgue when sigma is None)."""
    if sigma is None:
        return f.cell_integrals()
    return f.values * sigma.cell_integrals(f.depth)


def frac_average(f, cube, alpha, sigma=None):
    """Fractional average |Q|^(alpha/d - 1) int_Q f dsigma."""
    if cube.level > f.depth:
        raise ConfigError(
            f"cube level {cube.level} exceeds grid depth {f.depth}"
        )
    a, b = cube.cell_range(f.depth)
    total = float(_density_cells(f, sigma)[a:b].sum())
    return cube.measure ** (alpha / f.dim - 1.0) * total


def _cube_averages(cubes, f, alpha, sigma=None):
    """Fractional averages for many cubes via one prefix-sum pass."""
    cells = _density_cells(f, sigma)
    pref = np.concatenate(([0.0], np.cumsum(cells)))
    out = np.empty(len(cubes))
    d = f.dim
    for i, q in enumerate(cubes):
        a, b = q.cell_range(f.depth)
        out[i] = (pref[b] - pref[a]) * q.measure ** (alpha / d - 1.0)
    return out


def sparse_apply(family, f, prm, sigma=None):
    """The sparse operator (sum_Q <f>_{alpha,Q}^nu 1_Q)^(1/nu) on the grid."""
    cubes = _cubes_of(family)
    avgs = _cube_averages(cubes, f, prm.alpha, sigma)
    starts = np.empty(len(cubes), dtype=np.int64)
    stops = np.empty(len(cubes), dtype=np.int64)
    for i, q in enumerate(cubes):
        starts[i], stops[i] = q.cell_range(f.depth)
    acc = range_add(f.ncells, starts, stops, avgs ** prm.nu)
    return GridFunction(f.depth, acc ** (1.0 / prm.nu), dim=f.dim, _validate=False)


def frac_maximal(f, alpha, depth=None, sigma=None):
    """Dyadic fractional maximal function: per cell, the max of
    <f>_{alpha,Q} over dyadic Q containing the cell with level <= depth."""
    if depth is None:
        depth = f.depth
    if depth > f.depth:
        raise ConfigError(f"maximal depth {depth} exceeds grid depth {f.depth}")
    cells = _density_cells(f, sigma)
    sums = pair_sums(cells, 1 << f.dim)[: depth + 1]
    d = f.dim
    avgs = [sums[j] * 2.0 ** (j * (d - alpha)) for j in range(depth + 1)]
    tmax, _ = suffix_max_box(avgs, want_box=False)
    if depth < f.depth:
        tmax = np.repeat(tmax, 1 << ((f.depth - depth) * d))
    return GridFunction(f.depth, tmax, dim=f.dim, _validate=False)


def weighted_maximal(f, sigma, nu=1.0, depth=None):
    """M_{sigma,nu}(f) = (M_sigma(f^nu))^(1/nu) with dyadic sigma-averages.

    M_sigma(g)(x) is the max over dyadic Q containing x of
    int_Q g dsigma / sigma(Q); sigma is strictly positive by construction.
    """
    if depth is None:
        depth = f.depth
    if depth > f.depth:
        raise ConfigError(f"maximal depth {depth} exceeds grid depth {f.depth}")
    num_cells = (f.values ** nu) * sigma.cell_integrals(f.depth)
    nums = pair_sums(num_cells, 1 << f.dim)[: depth + 1]
    dens = sigma.level_integrals(depth)
    avgs = [nums[j] / dens[j] for j in range(depth + 1)]
    tmax, _ = suffix_max_box(avgs, want_box=False)
    if depth < f.depth:
        tmax = np.repeat(tmax, 1 << ((f.depth - depth) * f.dim))
    return GridFunction(f.depth, tmax ** (1.0 / nu), dim=f.dim, _validate=False)


def frac_integral_at(f, alpha, xs):
    """int f(y) |x-y|^(alpha-1) dy at the points xs (d=1, 0 < alpha < 1).

    Inner integrals of the kernel over cells are exact antiderivative
    differences, so the singularity costs no quadrature error.
    """
    if f.dim != 1:
        raise ConfigError("fractional integral is implemented for d=1")
    if not 0.0 < alpha < 1.0:
        raise ConfigError(f"fractional integral needs 0 < alpha < d = 1 (got {alpha})")
    return frac_integral_1d(f.values, alpha, np.asarray(xs, dtype=np.float64))


def frac_integral(f, alpha):
    """Fractional integral evaluated at cell midpoints, as a grid function."""
    vals = frac_integral_at(f, alpha, f.cell_midpoints())
    return GridFunction(f.depth, vals, dim=1, _validate=False)


def level_overlap_function(cubes, depth, dim=1):
    """Overlap count b = sum_Q 1_Q as a grid function at the given depth."""
    cubes = _cubes_of(cubes)
    n = 1 << (depth * dim)
    if not cubes:
        return GridFunction(depth, np.zeros(n), dim=dim, _validate=False)
    starts = np.empty(len(cubes), dtype=np.int64)
    stops = np.empty(len(cubes), dtype=np.int64)
    for i, q in enumerate(cubes):
        starts[i], stops[i] = q.cell_range(depth)
    acc = range_add(n, starts, stops, np.ones(len(cubes)))
    return GridFunction(depth, acc, dim=dim, _validate=False)


def overlap_tails(cubes, within, depth, dim=1):
    """Tail fractions t(lam) = |{x in within : b(x) > lam}| / |within|.

    Returns the array t for lam = 0 .. max(b); t[0] is the covered fraction.
    """
    b = level_overlap_function(cubes, depth, dim)
    a, z = within.cell_range(depth)
    counts = np.bincount(b.values[a:z].astype(np.int64))
    above = np.cumsum(counts[::-1])[::-1]
    # above[v] = #cells with b >= v; t(lam) = above[lam+1] / total
    total = z - a
    maxb = len(counts) - 1
    return np.array([above[lam + 1] / total if lam + 1 <= maxb else 0.0 for lam in range(maxb + 1)])


@dataclass
class LevelSetDecomposition:
    """Partition of a sparse family by the dyadic size of <f sigma>_{alpha,Q}.

    families[m] holds the cubes with 2^-m-1 < average <= 2^-m; s_prime the
    cubes with average > 1; cubes whose average is zero or below 2^-(m_max+1)
    are recorded in dropped.  e_sets follows the maximal-subcube rule within
    each families[m]: E_Q = Q minus the union of maximal proper subcubes of
    Q inside the same class, as cell ranges at the grid depth.
    """

    families: dict
    s_prime: list
    e_sets: dict
    averages: dict
    dropped: list
    m_max: int
    depth: int
    extra_sparsified: bool = field(default=False)

    def all_classified(self):
        out = list(self.s_prime)
        for cubes in self.families.values():
            out.extend(cubes)
        return out


def decompose_levels(family, f, sigma, prm, m_max=40):
    """Classify each cube of the family by its fractional-average size."""
    cubes = _cubes_of(family)
    avgs = _cube_averages(cubes, f, prm.alpha, sigma)
    families = {}
    s_prime, dropped = [], []
    averages = {}
    for q, t in zip(cubes, avgs):
        averages[q] = float(t)
        if t > 1.0:
            s_prime.append(q)
            continue
        if t <= 0.0 or t <= 2.0 ** (-(m_max + 1)):
            dropped.append(q)
            continue
        m = int(math.floor(-math.log2(t)))
        # settle floating fuzz so 2^-m-1 < t <= 2^-m holds exactly
        while t <= 2.0 ** (-m - 1):
            m += 1
        while m > 0 and t > 2.0 ** (-m):
            m -= 1
        if m > m_max:
            dropped.append(q)
            continue
        families.setdefault(m, []).append(q)
    e_sets = {}
    for m, qs in families.items():
        for q in qs:
            inner = sorted(
                c.cell_range(f.depth) for c in maximal_proper_subcubes(q, qs)
            )
            e_sets[q] = _complement_ranges(q.cell_range(f.depth), inner)
    extra = False
    if isinstance(family, SparseFamily):
        from .dyadic import check_extra_sparsification

        extra = check_extra_sparsification(family, prm.alpha)
    return LevelSetDecomposition(
        families=families,
        s_prime=s_prime,
        e_sets=e_sets,
        averages=averages,
        dropped=dropped,
        m_max=m_max,
        depth=f.depth,
        extra_sparsified=extra,
    )


def retention_report(decomp, f, sigma, prm):
    """Per-cube check that the E_Q part keeps half the fractional average:
    <f sigma 1_{E_Q}>_{alpha,Q} >= (1/2) <f sigma>_{alpha,Q}.

    Returns (ok, records) with one record per classified cube in an S_m.
    """
    cells = _density_cells(f, sigma)
    pref = np.concatenate(([0.0], np.cumsum(cells)))
    ok = True
    records = []
    for m, qs in sorted(decomp.families.items()):
        for q in qs:
            kept = sum(pref[b] - pref[a] for a, b in decomp.e_sets[q])
            scale = q.measure ** (prm.alpha / f.dim - 1.0)
            lhs = scale * kept
            full = decomp.averages[q]
            good = lhs >= 0.5 * full
            ok = ok and good
            records.append({"m": m, "cube": repr(q), "kept": lhs, "full": full, "ok": good})
    return ok, records


def operator_tail_indicator(decomp, f, sigma, prm, m0):
    """Cell mask of {sum_{m >= m0} (A^{S_m}(f sigma))^nu > 1} on the grid."""
    tail_cubes = [q for m, qs in decomp.families.items() if m >= m0 for q in qs]
    n = f.ncells
    if not tail_cubes:
        return np.zeros(n, dtype=bool)
    avgs = np.array([decomp.averages[q] for q in tail_cubes])
    starts = np.empty(len(tail_cubes), dtype=np.int64)
    stops = np.empty(len(tail_cubes), dtype=np.int64)
    for i, q in enumerate(tail_cubes):
        starts[i], stops[i] = q.cell_range(f.depth)
    acc = range_add(n, starts, stops, avgs ** prm.nu)
    return acc > 1.0
