"""The dual allocation policy and its objective/gradients.

A dual solution ``(g, gamma)`` induces an adjusted cost per recipient

    bar_j(x) = (1 + sum_k gamma[j,k]) * (-x_j)
               - sum_k gamma[k,j] * (-x_k) * p_k / p_j
               - g_j

and the policy assigns an item ``x`` to the recipient minimizing it (the
generalized Laguerre cell it falls in).  Ties break to the lowest index so
the policy is deterministic on finite data.  The dual objective over a
sample set S is

    E_S(g, gamma) = mean_t min_j bar_j(X^t) + g . p
                    - sum over constrained pairs of gamma[j,k] * lam[j,k]

which is concave in (g, gamma); its supergradient has the closed form
implemented by :func:`stochastic_gradient` (one sample) and
:func:`exact_gradient` (sample mean).  Multipliers of unconstrained budget
pairs are structurally pinned to zero, which recovers the plain
semi-discrete transport dual when every pair is unconstrained.

All functions are pure; ``exact_gradient`` is bit-for-bit the row mean of
``stochastic_gradient`` because both share one vectorized code path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DualSolution, ProblemSpec, TargetDistribution
from .errors import IndexOutOfRange
from .sources import SampleSet


@dataclass(frozen=True)
class GradientPair:
    """Supergradient components: dg (n,) and dgamma (n, n, diagonal unused)."""

    dg: np.ndarray
    dgamma: np.ndarray


def _values(S) -> np.ndarray:
    return S.values if isinstance(S, SampleSet) else np.asarray(S, dtype=float)


def adjusted_costs(X: np.ndarray, dual: DualSolution, target: TargetDistribution) -> np.ndarray:
    """Matrix of bar_j(x) for every row x of X; shape (m, n)."""
    p = target.p
    rowsum = dual.gamma.sum(axis=1)
    incoming = (X * p) @ dual.gamma
    return -X * (1.0 + rowsum) + incoming / p - dual.g


def adjusted_cost(x, j: int, dual: DualSolution, target: TargetDistribution) -> float:
    """bar_j(x) for a single item and recipient index j (0-based)."""
    x = np.asarray(x, dtype=float)
    if not 0 <= j < dual.n:
        raise IndexOutOfRange(f"recipient index {j} outside [0, {dual.n})")
    return float(adjusted_costs(x[None, :], dual, target)[0, j])


def assign_rows(S, dual: DualSolution, target: TargetDistribution) -> np.ndarray:
    """Assigned recipient per row (0-based); lowest index wins ties."""
    return np.argmin(adjusted_costs(_values(S), dual, target), axis=1)


def assign(x, dual: DualSolution, target: TargetDistribution) -> int:
    """Recipient for a single item: argmin_j bar_j(x), lowest-index ties."""
    x = np.asarray(x, dtype=float)
    return int(assign_rows(x[None, :], dual, target)[0])


def cell_mass(S, dual: DualSolution, target: TargetDistribution) -> np.ndarray:
    """Fraction of rows landing in each recipient's cell; sums to 1."""
    a = assign_rows(S, dual, target)
    return np.bincount(a, minlength=target.n) / len(a)


def empirical_objective(S, dual: DualSolution, spec: ProblemSpec) -> float:
    """Sample-average dual objective E_S(g, gamma).

    Multipliers on unconstrained pairs are assumed zero; the budget term sums
    over constrained pairs only.
    """
    X = _values(S)
    bar = adjusted_costs(X, dual, spec.target)
    mask = spec.budget.constrained_mask()
    penalty = float((dual.gamma[mask] * spec.budget.lam[mask]).sum())
    return float(bar.min(axis=1).mean() + dual.g @ spec.target.p - penalty)


def _row_gradients(X: np.ndarray, dual: DualSolution, spec: ProblemSpec):
    """Per-row supergradients; returns (dg (m,n), dgamma (m,n,n), a (m,), barmin (m,))."""
    p = spec.target.p
    m, n = X.shape
    bar = adjusted_costs(X, dual, spec.target)
    a = np.argmin(bar, axis=1)
    rows = np.arange(m)

    dg = np.tile(p, (m, 1))
    dg[rows, a] -= 1.0

    mask = spec.budget.constrained_mask()
    base = np.where(mask, -spec.budget.lam, 0.0)
    dgamma = np.tile(base, (m, 1, 1))
    # x in cell a: row a collects the matched cost, column a the cross term.
    dgamma[rows, a, :] += -X[rows, a][:, None]
    dgamma[rows, :, a] += X * p / p[a][:, None]
    dgamma *= mask
    return dg, dgamma, a, bar[rows, a]


def stochastic_gradient(x, dual: DualSolution, spec: ProblemSpec) -> GradientPair:
    """Unbiased single-sample supergradient of the dual objective at (g, gamma).

    dg_j     = -1[x in cell j] + p_j
    dgamma_jk = c_j 1[x in cell j] - c_j (p_j/p_k) 1[x in cell k] - lam_jk
    with c_j = -x_j, and zero on unconstrained pairs.
    """
    x = np.asarray(x, dtype=float)
    dg, dgamma, _, _ = _row_gradients(x[None, :], dual, spec)
    return GradientPair(dg[0], dgamma[0])


def exact_gradient(S, dual: DualSolution, spec: ProblemSpec) -> GradientPair:
    """Supergradient against the empirical measure of S: the row mean of
    the single-sample gradients."""
    X = _values(S)
    dg, dgamma, _, _ = _row_gradients(X, dual, spec)
    return GradientPair(dg.mean(axis=0), dgamma.mean(axis=0))
