"""Weights on [0,1), their characteristics, and the reverse Holder check.

Two backends: grid-backed step weights (exact cell sums) and power weights
coeff * x^beta on (0,1) with closed-form integrals of every power,
(b^(s*beta+1) - a^(s*beta+1)) / (s*beta+1), defined only for s*beta > -1.
Power weights never sample cells, so the blow-up near the origin is exact.

All suprema are over dyadic cubes of level <= depth.  Characteristic values
are cached per weight instance keyed by (name, arguments, depth); inserts
are idempotent, so concurrent readers are safe.
"""

from dataclasses import dataclass

import numpy as np

from ._kernels import suffix_max_box
from .errors import ConfigError, IntegrabilityError
from .grids import GridFunction, pair_sums

__all__ = [
    "Weight",
    "integrate",
    "a_pq_alpha_char",
    "a_pq_char",
    "a_p_char",
    "a_one_char",
    "a_infty_char",
    "reverse_holder_check",
    "calibrate_reverse_holder",
    "ReverseHolderReport",
]


class Weight:
    """A positive weight with a grid or power backend."""

    def __init__(self, grid=None, beta=None, coeff=1.0):
        if (grid is None) == (beta is None):
            raise ConfigError("exactly one of grid / beta must be given")
        if grid is not None:
            if grid.values.size and grid.values.min() <= 0.0:
                raise ConfigError("grid weight values must be strictly positive")
            self.grid = grid
            self.beta = None
            self.coeff = None
            self.dim = grid.dim
            self._token = ("grid", id(grid.values))
        else:
            if coeff <= 0.0:
                raise ConfigError("power weight coefficient must be positive")
            self.grid = None
            self.beta = float(beta)
            self.coeff = float(coeff)
            self.dim = 1
            self._token = ("power", self.beta, self.coeff)
        self._cache = {}

    # -- constructors ------------------------------------------------------

    @classmethod
    def power(cls, beta, coeff=1.0):
        """w(x) = coeff * x^beta on (0,1), d=1."""
        return cls(beta=beta, coeff=coeff)

    @classmethod
    def from_grid(cls, grid):
        return cls(grid=grid)

    @classmethod
    def constant(cls, value=1.0, depth=0, dim=1):
        return cls(grid=GridFunction.constant(depth, value, dim=dim))

    @property
    def is_power(self):
        return self.grid is None

    def power_of(self, s):
        """The weight w^s as a new Weight."""
        if self.is_power:
            return Weight.power(self.beta * s, self.coeff ** s)
        return Weight(grid=self.grid.power(s))

    def scaled(self, t):
        """The weight t*w, t > 0."""
        if t <= 0:
            raise ConfigError("scale factor must be positive")
        if self.is_power:
            return Weight.power(self.beta, self.coeff * t)
        return Weight(grid=t * self.grid)

    # -- exact integrals ---------------------------------------------------

    def _power_antideriv(self, s, x):
        e = s * self.beta + 1.0
        if e <= 0.0:
            raise IntegrabilityError(
                f"x^({s * self.beta:g}) is not integrable at 0 (need s*beta > -1, got {s * self.beta:g})"
            )
        return (self.coeff ** s) * np.power(x, e) / e

    def integrate(self, s, cube):
        """Exact integral of w^s over a dyadic cube."""
        if self.is_power:
            if cube.dim != 1:
                raise ConfigError("power weights are one-dimensional")
            a = cube.index[0] * cube.side
            f = self._power_antideriv(s, np.array([a, a + cube.side]))
            return float(f[1] - f[0])
        a, b = cube.cell_range(self.grid.depth)
        return float((self.grid.values[a:b] ** s).sum() * self.grid.cell_measure)

    def level_integrals(self, depth, s=1.0):
        """List over levels 0..depth of arrays of integrals of w^s per cube.

        Grid backend: depth is clamped to the grid depth (deeper cubes are
        constant, so no supremum computed from these arrays changes).
        """
        key = ("ints", s, depth)
        if key in self._cache:
            return self._cache[key]
        if self.is_power:
            out = []
            for j in range(depth + 1):
                edges = np.arange((1 << j) + 1, dtype=np.float64) / (1 << j)
                out.append(np.diff(self._power_antideriv(s, edges)))
        else:
            eff = min(depth, self.grid.depth)
            cells = (self.grid.values ** s) * self.grid.cell_measure
            out = pair_sums(cells, 1 << self.dim)[: eff + 1]
        self._cache[key] = out
        return out

    def cell_integrals(self, depth, s=1.0):
        """Array of integrals of w^s over the depth-`depth` cells."""
        if self.is_power:
            edges = np.arange((1 << depth) + 1, dtype=np.float64) / (1 << depth)
            return np.diff(self._power_antideriv(s, edges))
        if depth != self.grid.depth:
            raise ConfigError(
                f"grid weight has depth {self.grid.depth}, cannot emit cells at {depth}"
            )
        return (self.grid.values ** s) * self.grid.cell_measure

    def level_infima(self, depth):
        """Essential infimum of w per cube, levels 0..depth."""
        if self.is_power:
            if self.beta > 0:
                # inf over [0, h) is 0: the A_1 characteristic degenerates
                raise IntegrabilityError(
                    f"essential infimum of x^{self.beta:g} vanishes at the origin"
                )
            out = []
            for j in range(depth + 1):
                rights = np.arange(1, (1 << j) + 1, dtype=np.float64) / (1 << j)
                out.append(self.coeff * rights ** self.beta)
            return out
        eff = min(depth, self.grid.depth)
        mins = [np.asarray(self.grid.values, dtype=np.float64)]
        fan = 1 << self.dim
        while mins[-1].size > 1:
            mins.append(mins[-1].reshape(-1, fan).min(axis=1))
        mins.reverse()
        return mins[: eff + 1]

    def _cached(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    def __repr__(self):
        if self.is_power:
            if self.coeff == 1.0:
                return f"Weight(x^{self.beta:g})"
            return f"Weight({self.coeff:g}*x^{self.beta:g})"
        return f"Weight(grid depth={self.grid.depth}, d={self.dim})"


def integrate(w, s, cube):
    """Exact integral of w^s over a dyadic cube (module-level form)."""
    return w.integrate(s, cube)


# -- characteristics -------------------------------------------------------


def _level_averages(w, depth, s=1.0):
    ints = w.level_integrals(depth, s)
    d = w.dim
    return [ints[j] * 2.0 ** (j * d) for j in range(len(ints))]


def a_pq_alpha_char(w, sigma, prm, depth):
    """Two-weight characteristic sup_Q |Q|^{q(alpha/d-1)} w(Q) sigma(Q)^{q/p'}."""
    if w.dim != prm.d or sigma.dim != prm.d:
        raise ConfigError("weight dimension does not match parameters")
    key = ("a_pq_alpha", sigma._token, prm.p, prm.q, prm.alpha, depth)

    def compute():
        wints = w.level_integrals(depth)
        sints = sigma.level_integrals(depth)
        e = prm.q * (prm.alpha / prm.d - 1.0)
        best = 0.0
        for j in range(min(len(wints), len(sints))):
            meas = 2.0 ** (-j * prm.d)
            vals = meas ** e * wints[j] * sints[j] ** (prm.q / prm.p_prime)
            best = max(best, float(vals.max()))
        return best

    return w._cached(key, compute)


def a_pq_char(w, p, q, depth):
    """One-weight characteristic sup_Q <w^q>_Q <w^{-p'}>_Q^{q/p'}."""
    p_prime = p / (p - 1.0)
    key = ("a_pq", p, q, depth)

    def compute():
        aq = _level_averages(w, depth, s=q)
        ap = _level_averages(w, depth, s=-p_prime)
        best = 0.0
        for x, y in zip(aq, ap):
            best = max(best, float((x * y ** (q / p_prime)).max()))
        return best

    return w._cached(key, compute)


def a_p_char(w, r, depth):
    """Muckenhoupt characteristic sup_Q <w>_Q <w^{-1/(r-1)}>_Q^{r-1}, r > 1."""
    if not r > 1.0:
        raise ConfigError(f"A_r requires r > 1 (got {r})")
    key = ("a_p", r, depth)

    def compute():
        a1 = _level_averages(w, depth)
        a2 = _level_averages(w, depth, s=-1.0 / (r - 1.0))
        best = 0.0
        for x, y in zip(a1, a2):
            best = max(best, float((x * y ** (r - 1.0)).max()))
        return best

    return w._cached(key, compute)


def a_one_char(w, depth):
    """A_1 characteristic sup_Q <w>_Q / essinf_Q w (dyadic, level <= depth)."""
    key = ("a_one", depth)

    def compute():
        avgs = _level_averages(w, depth)
        infs = w.level_infima(depth)
        best = 0.0
        for a, m in zip(avgs, infs):
            best = max(best, float((a / m).max()))
        return best

    return w._cached(key, compute)


def a_infty_char(w, depth):
    """Fujii-Wilson characteristic sup_Q (1/w(Q)) int_Q M(1_Q w).

    M is the dyadic maximal function localized to Q: for x in Q it is the
    sup of <w>_Q' over dyadic Q' with x in Q' and Q' inside Q, levels
    <= depth.  Ancestors of Q never beat the Q-average of 1_Q w, so the
    localized form equals the dyadic Fujii-Wilson value.
    """
    key = ("a_infty", depth)

    def compute():
        ints = w.level_integrals(depth)
        klev = len(ints) - 1
        d = w.dim
        avgs = [ints[j] * 2.0 ** (j * d) for j in range(klev + 1)]
        _, box = suffix_max_box(avgs, want_box=True)
        cell_meas = 2.0 ** (-klev * d)
        best = 0.0
        for j in range(klev + 1):
            best = max(best, float((box[j] * cell_meas / ints[j]).max()))
        return best

    return w._cached(key, compute)


# -- reverse Holder --------------------------------------------------------


@dataclass
class ReverseHolderReport:
    c: float
    r: float
    a_infty: float
    worst_ratio: float
    worst_level: int
    worst_index: int
    passed: bool

    def to_dict(self):
        return {
            "c": self.c,
            "r": self.r,
            "a_infty": self.a_infty,
            "worst_ratio": self.worst_ratio,
            "worst_level": self.worst_level,
            "worst_index": self.worst_index,
            "passed": self.passed,
        }


def reverse_holder_check(w, c, depth):
    """Check <w^r>_Q^(1/r) <= 2 <w>_Q on all dyadic Q of level <= depth.

    The exponent is r = 1 + 1/(c * [w]_Ainfty): a larger characteristic
    forces r closer to 1, which is the standard self-improvement direction.
    Returns the worst ratio <w^r>^(1/r) / <w> and its cube.
    """
    a = a_infty_char(w, depth)
    r = 1.0 + 1.0 / (c * a)
    avg1 = _level_averages(w, depth)
    avgr = _level_averages(w, depth, s=r)
    worst, wlev, widx = 0.0, -1, -1
    for j, (x, y) in enumerate(zip(avg1, avgr)):
        ratios = y ** (1.0 / r) / x
        m = int(np.argmax(ratios))
        if ratios[m] > worst:
            worst, wlev, widx = float(ratios[m]), j, m
    return ReverseHolderReport(
        c=c, r=r, a_infty=a, worst_ratio=worst, worst_level=wlev, worst_index=widx,
        passed=worst <= 2.0,
    )


def calibrate_reverse_holder(weights, depth, c_grid=None):
    """Smallest c in the grid passing the check on every corpus weight.

    Smaller c means a larger exponent r, i.e. a stronger inequality, so the
    calibrated default is the strongest constant the corpus supports.
    A candidate fails if any weight is non-integrable at power r.
    """
    if c_grid is None:
        c_grid = [k / 20.0 for k in range(1, 41)]
    for c in sorted(c_grid):
        ok = True
        for w in weights:
            try:
                if not reverse_holder_check(w, c, depth).passed:
                    ok = False
                    break
            except IntegrabilityError:
                ok = False
                break
        if ok:
            return c
    raise ConfigError("no c in the calibration grid passes the reverse Holder suite")
