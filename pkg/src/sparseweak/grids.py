"""Piecewise-constant functions on the uniform depth-K dyadic grid.

Values are stored per cell in Morton order (natural order in d=1), so any
dyadic cube of level <= K is one contiguous slice and every integral over a
dyadic cube is an exact cell sum.
"""

import numpy as np

from .dyadic import DyadicCube
from .errors import ConfigError


class GridFunction:
    """Nonnegative cell-constant function on [0,1)^d at depth K."""

    def __init__(self, depth, values, dim=1, _validate=True):
        self.depth = int(depth)
        self.dim = int(dim)
        values = np.ascontiguousarray(values, dtype=np.float64)
        n = 1 << (self.depth * self.dim)
        if values.size != n:
            raise ConfigError(
                f"grid at depth {self.depth} (d={self.dim}) needs {n} cells, got {values.size}"
            )
        if _validate and values.size and values.min() < 0.0:
            raise ConfigError("grid values must be nonnegative")
        values.flags.writeable = False
        self.values = values

    # -- constructors ------------------------------------------------------

    @classmethod
    def constant(cls, depth, value, dim=1):
        n = 1 << (depth * dim)
        return cls(depth, np.full(n, float(value)), dim=dim)

    @classmethod
    def indicator(cls, depth, cube):
        n = 1 << (depth * cube.dim)
        vals = np.zeros(n)
        a, b = cube.cell_range(depth)
        vals[a:b] = 1.0
        return cls(depth, vals, dim=cube.dim)

    # -- geometry ----------------------------------------------------------

    @property
    def ncells(self):
        return self.values.size

    @property
    def cell_measure(self):
        return 2.0 ** (-self.depth * self.dim)

    def cell_lefts(self):
        """Left endpoints of the cells (d=1 only)."""
        if self.dim != 1:
            raise ConfigError("cell_lefts is one-dimensional")
        return np.arange(self.ncells) * self.cell_measure

    def cell_midpoints(self):
        if self.dim != 1:
            raise ConfigError("cell_midpoints is one-dimensional")
        return (np.arange(self.ncells) + 0.5) * self.cell_measure

    # -- integrals ---------------------------------------------------------

    def cell_integrals(self):
        """Integral over each cell (value times cell measure)."""
        return self.values * self.cell_measure

    def integral(self, cube=None):
        """Exact integral over a dyadic cube (whole domain by default)."""
        if cube is None:
            return float(self.values.sum() * self.cell_measure)
        a, b = cube.cell_range(self.depth)
        return float(self.values[a:b].sum() * self.cell_measure)

    def restrict_ranges(self, ranges):
        """New grid function equal to self on the given cell ranges, 0 off."""
        vals = np.zeros_like(self.values)
        for a, b in ranges:
            vals[a:b] = self.values[a:b]
        return GridFunction(self.depth, vals, dim=self.dim, _validate=False)

    # -- arithmetic --------------------------------------------------------

    def __mul__(self, other):
        if isinstance(other, GridFunction):
            self._check_compatible(other)
            return GridFunction(self.depth, self.values * other.values, dim=self.dim, _validate=False)
        return GridFunction(self.depth, self.values * float(other), dim=self.dim, _validate=False)

    __rmul__ = __mul__

    def __add__(self, other):
        self._check_compatible(other)
        return GridFunction(self.depth, self.values + other.values, dim=self.dim, _validate=False)

    def power(self, s):
        return GridFunction(self.depth, self.values ** float(s), dim=self.dim, _validate=False)

    def _check_compatible(self, other):
        if self.depth != other.depth or self.dim != other.dim:
            raise ConfigError("grid depth/dimension mismatch")

    def __repr__(self):
        return f"GridFunction(depth={self.depth}, dim={self.dim}, ncells={self.ncells})"


def pair_sums(cells, fan):
    """Per-level box sums of a cell array: sums[j][m] over cube m at level j.

    cells has fan**K entries; returns a list indexed by level 0..K with
    sums[K] = cells.
    """
    out = [np.asarray(cells, dtype=np.float64)]
    while out[-1].size > 1:
        out.append(out[-1].reshape(-1, fan).sum(axis=1))
    out.reverse()
    return out


def level_cubes(level, dim=1):
    """All dyadic cubes at one level, in Morton (cell-block) order."""
    if dim == 1:
        return [DyadicCube(level, (j,)) for j in range(1 << level)]
    out = []
    for code in range(1 << (level * dim)):
        idx = [0] * dim
        for bit in range(level):
            for axis in range(dim):
                idx[axis] |= ((code >> (bit * dim + axis)) & 1) << bit
        out.append(DyadicCube(level, tuple(idx)))
    return out


def lattice_cubes(depth, dim=1):
    """Every dyadic cube of level 0..depth."""
    out = []
    for lv in range(depth + 1):
        out.extend(level_cubes(lv, dim))
    return out
