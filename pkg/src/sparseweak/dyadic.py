"""Dyadic lattice geometry on [0,1)^d: cubes, sparse families, exponents.

Everything is immutable after construction.  Cell addressing uses the
Morton (bit-interleaved) order so that any dyadic cube of level k <= K maps
to one contiguous block of level-K cells; in d=1 this is the natural order.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ConfigError, SparsenessError

_EXACT_TOL = 1e-12


@dataclass(frozen=True, order=True)
class DyadicCube:
    """Half-open dyadic cube prod_i [j_i 2^-k, (j_i+1) 2^-k) in [0,1)^d."""

    level: int
    index: tuple

    def __post_init__(self):
        if self.level < 0:
            raise ConfigError(f"cube level must be >= 0 (got {self.level})")
        if not self.index:
            raise ConfigError("cube index must have at least one coordinate")
        top = 1 << self.level
        for j in self.index:
            if not 0 <= j < top:
                raise ConfigError(
                    f"cube index {self.index} out of range [0, 2^{self.level}) per axis"
                )

    @property
    def dim(self):
        return len(self.index)

    @property
    def measure(self):
        return 2.0 ** (-self.level * self.dim)

    @property
    def side(self):
        return 2.0 ** (-self.level)

    @property
    def origin(self):
        return tuple(j * self.side for j in self.index)

    def contains(self, other):
        """Whole-cube containment other subseteq self (levels + index prefix)."""
        if other.dim != self.dim or other.level < self.level:
            return False
        shift = other.level - self.level
        return all(oj >> shift == sj for oj, sj in zip(other.index, self.index))

    def children(self):
        """The 2^d level-(k+1) cubes partitioning this cube."""
        out = []
        for mask in range(1 << self.dim):
            idx = tuple(
                (j << 1) | ((mask >> axis) & 1) for axis, j in enumerate(self.index)
            )
            out.append(DyadicCube(self.level + 1, idx))
        return out

    def parent(self):
        if self.level == 0:
            return None
        return DyadicCube(self.level - 1, tuple(j >> 1 for j in self.index))

    def morton(self):
        """Bit-interleaved linear index among level-k cubes."""
        if self.dim == 1:
            return self.index[0]
        code = 0
        for bit in range(self.level):
            for axis in range(self.dim):
                code |= ((self.index[axis] >> bit) & 1) << (bit * self.dim + axis)
        return code

    def cell_range(self, depth):
        """Contiguous [start, stop) range of level-`depth` cells below this cube."""
        if depth < self.level:
            raise ConfigError(
                f"cube of level {self.level} has no cells at coarser depth {depth}"
            )
        blk = 1 << ((depth - self.level) * self.dim)
        start = self.morton() * blk
        return start, start + blk

    def __repr__(self):
        if self.dim == 1:
            a = self.index[0] * self.side
            return f"[{a:g}, {a + self.side:g})@{self.level}"
        return f"Cube(level={self.level}, index={self.index})"


def children(cube):
    """Module-level alias for DyadicCube.children."""
    return cube.children()


def unit_cube(dim=1):
    return DyadicCube(0, (0,) * dim)


def _check_common_dim(cubes):
    dims = {q.dim for q in cubes}
    if len(dims) != 1:
        raise ConfigError(f"cubes mix dimensions {sorted(dims)}")
    return dims.pop()


def _complement_ranges(outer, inner):
    """Gaps of [start, stop) `outer` after removing disjoint sorted `inner`."""
    gaps = []
    pos = outer[0]
    for a, b in inner:
        if a > pos:
            gaps.append((pos, a))
        pos = b
    if pos < outer[1]:
        gaps.append((pos, outer[1]))
    return tuple(gaps)


def maximal_proper_subcubes(cube, cubes):
    """Maximal elements of {Q' in cubes : Q' strictly inside cube}."""
    inside = [q for q in cubes if cube.contains(q) and q != cube]
    out = []
    for q in inside:
        if not any(r.contains(q) and r != q for r in inside):
            out.append(q)
    return out


class SparseFamily:
    """Finite set of dyadic cubes with sparseness parameter gamma.

    e_sets maps each cube Q to E_Q = Q minus the union of its maximal proper
    subcubes in the family, stored as disjoint cell ranges at depth `edepth`
    (the deepest level present).  Construct via verify_sparse so the
    invariants |E_Q| >= gamma |Q| and pairwise disjointness are checked.
    """

    def __init__(self, cubes, gamma, e_sets, edepth):
        self.cubes = tuple(sorted(set(cubes)))
        self.gamma = Fraction(gamma)
        self.e_sets = dict(e_sets)
        self.edepth = edepth
        self.dim = _check_common_dim(self.cubes)

    def __iter__(self):
        return iter(self.cubes)

    def __len__(self):
        return len(self.cubes)

    def __contains__(self, cube):
        return cube in self.e_sets

    def max_level(self):
        return max(q.level for q in self.cubes)

    def e_measure(self, cube):
        cells = sum(b - a for a, b in self.e_sets[cube])
        return cells * 2.0 ** (-self.edepth * self.dim)

    def __repr__(self):
        return f"SparseFamily({len(self.cubes)} cubes, gamma={self.gamma}, edepth={self.edepth})"


def verify_sparse(cubes, gamma):
    """Check gamma-sparseness and build the family with its E_Q sets.

    E_Q is Q minus the union of its maximal proper subcubes in the family.
    The measure test |E_Q| >= gamma |Q| is exact integer arithmetic in cell
    counts at the deepest level.  Raises SparsenessError naming the first
    violating cube (in sorted cube order).
    """
    cubes = sorted(set(cubes))
    if not cubes:
        raise ConfigError("empty cube family")
    dim = _check_common_dim(cubes)
    gamma = Fraction(gamma)
    if not 0 < gamma < 1:
        raise ConfigError(f"gamma must lie in (0,1) (got {gamma})")
    edepth = max(q.level for q in cubes)
    e_sets = {}
    for q in cubes:
        inner = sorted(c.cell_range(edepth) for c in maximal_proper_subcubes(q, cubes))
        gaps = _complement_ranges(q.cell_range(edepth), inner)
        e_cells = sum(b - a for a, b in gaps)
        q_cells = 1 << ((edepth - q.level) * dim)
        if e_cells * gamma.denominator < gamma.numerator * q_cells:
            raise SparsenessError(q, Fraction(e_cells, q_cells), gamma)
        e_sets[q] = gaps
    _assert_pairwise_disjoint(e_sets)
    return SparseFamily(cubes, gamma, e_sets, edepth)


def _assert_pairwise_disjoint(e_sets):
    allr = sorted(r for gaps in e_sets.values() for r in gaps)
    for (a1, b1), (a2, _) in zip(allr, allr[1:]):
        if a2 < b1:
            raise SparsenessError(None, None, None)  # unreachable by construction


def check_extra_sparsification(family, alpha):
    """True iff every Q has |union of proper subcubes| <= 4^-(1-alpha/d) |Q|."""
    dim = family.dim
    if not 0 <= alpha < dim:
        raise ConfigError(f"alpha must lie in [0, d) (got alpha={alpha}, d={dim})")
    bound = 4.0 ** (-(1.0 - alpha / dim))
    for q in family:
        covered = q.measure - family.e_measure(q)
        if covered > bound * q.measure:
            return False
    return True


@dataclass(frozen=True)
class ExponentParams:
    """The exponent tuple (d, p, q, alpha, nu) with conjugates.

    Requires 1 < p <= q < infinity, 0 <= alpha < d, nu > 0, d in {1, 2}.
    The Sobolev relation 1/q + alpha/d = 1/p is optional; see is_sobolev.
    """

    d: int
    p: float
    q: float
    alpha: float = 0.0
    nu: float = 1.0
    p_prime: float = field(init=False)
    q_prime: float = field(init=False)

    def __post_init__(self):
        if self.d not in (1, 2):
            raise ConfigError(f"dimension d must be 1 or 2 (got {self.d})")
        if not 1.0 < self.p <= self.q:
            raise ConfigError(f"need 1 < p <= q < inf (got p={self.p}, q={self.q})")
        if not 0.0 <= self.alpha < self.d:
            raise ConfigError(f"need 0 <= alpha < d (got alpha={self.alpha}, d={self.d})")
        if not self.nu > 0:
            raise ConfigError(f"need nu > 0 (got {self.nu})")
        object.__setattr__(self, "p_prime", self.p / (self.p - 1.0))
        object.__setattr__(self, "q_prime", self.q / (self.q - 1.0))
        assert abs(1.0 / self.p + 1.0 / self.p_prime - 1.0) <= _EXACT_TOL
        assert abs(1.0 / self.q + 1.0 / self.q_prime - 1.0) <= _EXACT_TOL

    def is_sobolev(self):
        """Whether 1/q + alpha/d = 1/p within 1e-12."""
        return abs(1.0 / self.q + self.alpha / self.d - 1.0 / self.p) <= _EXACT_TOL

    def require_sobolev(self):
        if not self.is_sobolev():
            raise ConfigError(
                f"requires 1/q + alpha/d = 1/p (got 1/q+alpha/d={1.0 / self.q + self.alpha / self.d}, 1/p={1.0 / self.p})"
            )

    @classmethod
    def sobolev(cls, q, alpha, nu=1.0, d=1):
        """Derive p from the relation 1/p = 1/q + alpha/d."""
        inv_p = 1.0 / q + alpha / d
        if not inv_p < 1.0:
            raise ConfigError(f"1/q + alpha/d = {inv_p} leaves no p > 1")
        return cls(d=d, p=1.0 / inv_p, q=q, alpha=alpha, nu=nu)


def chain_family(levels, dim=1, gamma=None, child_pick=0):
    """Single descent chain: one cube per level in `levels` (must start at 0).

    child_pick selects which child branch to follow at each step; the cubes
    at consecutive listed levels are nested.
    """
    levels = sorted(set(levels))
    if levels[0] != 0:
        raise ConfigError("chain must start at the root (level 0)")
    cube = unit_cube(dim)
    out = [cube]
    for lv in levels[1:]:
        while cube.level < lv:
            cube = cube.children()[child_pick % (1 << dim)]
        out.append(cube)
    if gamma is None:
        gamma = Fraction(1, 2)
    return verify_sparse(out, gamma)


def tower_family(depth, gamma=Fraction(1, 2)):
    """The canonical d=1 family {[0, 2^-k) : 0 <= k <= depth}.

    Its E-sets under the maximal-subcube rule are the right halves
    [2^-k-1, 2^-k), so it is gamma=1/2 sparse exactly.
    """
    cubes = [DyadicCube(k, (0,)) for k in range(depth + 1)]
    return verify_sparse(cubes, gamma)
