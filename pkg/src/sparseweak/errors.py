"""Exception types shared across the package.

The CLI maps these onto its exit codes, so keep the hierarchy flat and the
messages self-contained (each names the violated constraint).
"""


class SparseWeakError(Exception):
    """Base class for package errors."""


class ConfigError(SparseWeakError):
    """Invalid configuration or parameter combination (CLI exit 2)."""


class IntegrabilityError(SparseWeakError):
    """A requested power of a weight is not integrable (CLI exit 3)."""


class HypothesisError(SparseWeakError):
    """A theorem hypothesis such as p > nu is violated (CLI exit 4)."""


class DegenerateFitError(SparseWeakError):
    """Too few usable points for a log-log slope fit (CLI exit 5)."""


class SparsenessError(SparseWeakError):
    """A cube family fails the sparseness check; carries the witness cube."""

    def __init__(self, cube, ratio, gamma):
        self.cube = cube
        self.ratio = ratio
        self.gamma = gamma
        super().__init__(
            f"sparseness violated at {cube}: |E_Q|/|Q| = {ratio} < gamma = {gamma}"
        )
