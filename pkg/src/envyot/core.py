"""Domain types for the envy-constrained allocation problem.

An instance is: ``n`` recipients, a strictly positive target matching
distribution ``p`` summing to 1, a matrix of per-ordered-pair envy budgets
``lambda`` (``+inf`` marking an unconstrained pair), and an upper bound
``value_bound`` on every valuation coordinate.  A dual solution carries the
per-recipient potentials ``g`` and the nonnegative pairwise multipliers
``gamma`` that together define the allocation policy (see :mod:`envyot.cells`).

All types are immutable after construction and safe to share across threads.
Construction is permissive; :func:`validate_spec` performs the full invariant
check and is the gate every solver runs first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidSpec,
    NegativeEpsilon,
    NonpositiveBound,
    NonSimplexTarget,
)

#: Sentinel for an envy pair with no budget constraint.  Solvers pin the
#: corresponding multiplier to exactly zero instead of carrying a huge
#: finite budget.
UNCONSTRAINED = math.inf

#: Absolute tolerance on |sum(p) - 1| accepted by validation.
SIMPLEX_TOL = 1e-12


def _freeze(obj, name, value):
    arr = np.asarray(value, dtype=float)
    arr.setflags(write=False)
    object.__setattr__(obj, name, arr)


@dataclass(frozen=True)
class TargetDistribution:
    """Target matching distribution: fraction of items each recipient gets."""

    p: np.ndarray

    def __post_init__(self):
        _freeze(self, "p", self.p)

    @property
    def n(self) -> int:
        return self.p.shape[0]

    def __len__(self) -> int:
        return self.n


@dataclass(frozen=True)
class EnvyBudget:
    """Per-ordered-pair envy tolerances.

    ``lam[j, k]`` bounds recipient ``j``'s envy toward ``k`` (utility units);
    ``UNCONSTRAINED`` disables the pair.  The diagonal is ignored by every
    consumer.
    """

    lam: np.ndarray

    def __post_init__(self):
        _freeze(self, "lam", self.lam)

    @property
    def n(self) -> int:
        return self.lam.shape[0]

    def constrained_mask(self) -> np.ndarray:
        """Boolean (n, n) mask of finite off-diagonal budget pairs."""
        mask = np.isfinite(self.lam)
        np.fill_diagonal(mask, False)
        mask.setflags(write=False)
        return mask

    @classmethod
    def unconstrained(cls, n: int) -> "EnvyBudget":
        return cls(np.full((n, n), UNCONSTRAINED))


@dataclass(frozen=True)
class DualSolution:
    """Dual potentials ``g`` and envy multipliers ``gamma``.

    ``gamma`` is (n, n) with an unused diagonal; entries for budget pairs
    marked ``UNCONSTRAINED`` are pinned to zero by every solver.
    """

    g: np.ndarray
    gamma: np.ndarray

    def __post_init__(self):
        _freeze(self, "g", self.g)
        _freeze(self, "gamma", self.gamma)

    @property
    def n(self) -> int:
        return self.g.shape[0]

    @classmethod
    def zero(cls, n: int) -> "DualSolution":
        return cls(np.zeros(n), np.zeros((n, n)))


@dataclass(frozen=True)
class ProblemSpec:
    """Full problem instance: recipient count, target, budgets, value bound."""

    n: int
    target: TargetDistribution
    budget: EnvyBudget
    value_bound: float = 1.0


@dataclass(frozen=True)
class SolveReport:
    """Diagnostics attached to a stochastic solve.

    ``objective_trace`` holds ``(iteration, running objective estimate)``
    pairs; ``mass_residual`` is ``|cell mass - p_i|`` per recipient on the
    evaluation draw; ``envy_residual[j]`` is ``max_k (envy_jk - lam_jk)``
    over constrained pairs (``-inf`` when recipient ``j`` has none).
    """

    iterations: int
    step_size: float
    seed: int
    objective_trace: tuple = field(default_factory=tuple)
    mass_residual: np.ndarray | None = None
    envy_residual: np.ndarray | None = None
    welfare: float = math.nan


def validate_spec(spec: ProblemSpec) -> None:
    """Check every invariant of a ProblemSpec; raise a subclass of InvalidSpec.

    Passing means: n >= 2, value_bound > 0, target and budget are n-sized,
    the target is a strictly positive simplex point (abs tolerance
    ``SIMPLEX_TOL``), and all off-diagonal budgets are >= 0 or the
    unconstrained sentinel.
    """
    if spec.n < 2:
        raise InvalidSpec(f"need at least 2 recipients, got n={spec.n}")
    if not (spec.value_bound > 0) or not math.isfinite(spec.value_bound):
        raise NonpositiveBound(f"value_bound must be finite and > 0, got {spec.value_bound}")
    p = spec.target.p
    if p.ndim != 1 or p.shape[0] != spec.n:
        raise DimensionMismatch(f"target has shape {p.shape}, expected ({spec.n},)")
    lam = spec.budget.lam
    if lam.shape != (spec.n, spec.n):
        raise DimensionMismatch(f"budget has shape {lam.shape}, expected ({spec.n}, {spec.n})")
    if np.any(p <= 0.0) or not np.all(np.isfinite(p)):
        raise NonSimplexTarget(f"target entries must be strictly positive, got {p}")
    if abs(float(p.sum()) - 1.0) > SIMPLEX_TOL:
        raise NonSimplexTarget(f"target sums to {p.sum()!r}, not 1")
    off = lam[~np.eye(spec.n, dtype=bool)]
    if np.any(np.isnan(off)) or np.any(off < 0.0):
        raise InvalidSpec("envy budgets must be >= 0 or the unconstrained sentinel")


def uniform_budget(epsilon: float, target: TargetDistribution) -> EnvyBudget:
    """Budget scheme ``lam[j, k] = epsilon * p_j`` for all ``k != j``.

    With it, ``epsilon`` bounds each recipient's normalized envy
    ``Envy(j) / p_j``.  ``epsilon = UNCONSTRAINED`` disables every pair;
    ``epsilon = 0`` demands envy-freeness.
    """
    if math.isnan(epsilon) or epsilon < 0.0:
        raise NegativeEpsilon(f"epsilon must be >= 0 or unconstrained, got {epsilon}")
    n = target.n
    if math.isinf(epsilon):
        return EnvyBudget.unconstrained(n)
    lam = np.tile(epsilon * target.p[:, None], (1, n))
    np.fill_diagonal(lam, 0.0)
    return EnvyBudget(lam)
