"""Gaussian lasso by coordinate descent, as the forward-selection
comparator.

The path runs from the smallest penalty that zeroes every coefficient
down a geometric grid, with warm starts.  Columns are standardized to
unit (1/n) sample variance internally and coefficients are reported on
the original scale; the intercept is unpenalized.  ``undertuned_select``
implements the deliberate undertuning rule: walk the path from the top
and stop at the first solution whose active-set size reaches a target
count.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidConfigError, TargetUnreachableError

__all__ = ["LassoPath", "lasso_path", "undertuned_select"]

#: KKT feasibility slack guaranteed at every path point
KKT_TOL = 1e-7


@dataclass(frozen=True)
class LassoPath:
    """Solutions along a decreasing penalty grid.

    ``coefficients[k]`` is the original-scale coefficient vector at
    ``lambdas[k]``; zero-variance columns are dropped from the descent
    (ids in ``dropped``) and keep zero coefficients throughout.
    """

    lambdas: np.ndarray
    coefficients: np.ndarray
    intercepts: np.ndarray
    nonzero_counts: np.ndarray
    dropped: tuple[int, ...] = ()

    def nonzero_ids(self, index: int) -> tuple[int, ...]:
        """1-based variable ids active at path point ``index``."""
        return tuple(int(j) + 1 for j in np.flatnonzero(self.coefficients[index]))


def lasso_path(X, y, n_lambdas: int = 100, lambda_min_ratio: float = 0.01) -> LassoPath:
    """Coordinate-descent lasso path with covariance updates.

    Each solution satisfies the subgradient conditions to ``KKT_TOL``:
    |<x_j, r>| / n <= lambda for inactive coordinates and equality for
    active ones, with x_j standardized.
    """
    x = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 2 or x.shape[0] != y.shape[0]:
        raise InvalidConfigError("X and y must have matching rows")
    n, d = x.shape
    if n < 2:
        raise InvalidConfigError("need at least 2 rows")
    if n_lambdas < 1 or not 0 < lambda_min_ratio < 1:
        raise InvalidConfigError("bad path parameters")

    x_mean = x.mean(axis=0)
    sd = np.sqrt(((x - x_mean) ** 2).mean(axis=0))
    keep = sd > 1e-12 * max(1.0, float(np.abs(x).max()))
    dropped = tuple(int(j) + 1 for j in np.flatnonzero(~keep))
    if dropped:
        warnings.warn(
            f"dropping zero-variance columns {dropped} from the lasso path",
            stacklevel=2,
        )
    active_cols = np.flatnonzero(keep)
    xs = (x[:, active_cols] - x_mean[active_cols]) / sd[active_cols]
    yc = y - y.mean()
    m = active_cols.size

    c = xs.T @ yc / n
    gram = xs.T @ xs / n
    lambda_max = float(np.abs(c).max()) if m else 1.0
    if lambda_max <= 0:
        lambda_max = 1.0
    lambdas = lambda_max * lambda_min_ratio ** (np.arange(n_lambdas) / max(n_lambdas - 1, 1))

    beta = np.zeros(m)
    coefs_std = np.zeros((n_lambdas, m))
    for k, lam in enumerate(lambdas):
        if k == 0:
            # at lambda_max every penalized coefficient is exactly zero
            coefs_std[0] = 0.0
            continue
        # working-set strategy: solve on the current active set, then
        # admit coordinates whose (vectorized) gradient violates the
        # subgradient bound, until none remain
        work = np.flatnonzero(beta)
        for _ in range(1_000):
            if work.size:
                sub = _solve_working_set(gram[np.ix_(work, work)], c[work],
                                         lam, beta[work].copy())
                beta[work] = sub
            active = np.flatnonzero(beta)
            q = gram[:, active] @ beta[active] if active.size else np.zeros(m)
            grad = np.abs(c - q)
            if work.size:
                grad[work] = 0.0  # satisfied by the subproblem solve
            violators = np.flatnonzero(grad > lam * (1 + 1e-12) + 1e-12)
            if violators.size == 0:
                break
            work = np.union1d(active, violators)
        coefs_std[k] = beta

    coefficients = np.zeros((n_lambdas, d))
    coefficients[:, active_cols] = coefs_std / sd[active_cols]
    intercepts = y.mean() - coefficients @ x_mean
    nonzero = (coefs_std != 0.0).sum(axis=1)
    return LassoPath(
        lambdas=lambdas,
        coefficients=coefficients,
        intercepts=intercepts,
        nonzero_counts=nonzero.astype(int),
        dropped=dropped,
    )


def _solve_working_set(g: np.ndarray, c: np.ndarray, lam: float,
                       b: np.ndarray) -> np.ndarray:
    """Lasso subproblem on a working set: coordinate descent until the
    active signs stabilize, then an exact solve of the active-set KKT
    equations.  Falls back to tightly converged descent when the solve
    is sign-inconsistent (degenerate designs)."""
    w = b.size
    q = g @ b

    def cycles(n_cycles: int, tol: float) -> None:
        for _ in range(n_cycles):
            delta = 0.0
            for j in range(w):
                bj = b[j]
                z = bj + c[j] - q[j]
                new = np.sign(z) * max(abs(z) - lam, 0.0)
                if new != bj:
                    b[j] = new
                    np.add(q, (new - bj) * g[:, j], out=q)
                    delta = max(delta, abs(new - bj))
            if delta < tol * max(1.0, float(np.abs(b).max())):
                return

    for _ in range(40):
        cycles(10, 1e-8)
        active = np.flatnonzero(b)
        if active.size == 0:
            return b
        signs = np.sign(b[active])
        try:
            sol = np.linalg.solve(g[np.ix_(active, active)],
                                  c[active] - lam * signs)
        except np.linalg.LinAlgError:
            continue
        if not np.array_equal(np.sign(sol), signs):
            continue
        qa = g[:, active] @ sol
        inactive = np.setdiff1d(np.arange(w), active, assume_unique=False)
        if inactive.size and np.abs(c[inactive] - qa[inactive]).max() > lam + 1e-12:
            continue
        out = np.zeros(w)
        out[active] = sol
        return out
    cycles(10_000, 1e-11)
    return b


def path_to_csv_rows(path: LassoPath) -> list[list]:
    """Long-format CSV rows: one per (path point, active variable),
    with a bare row for all-zero path points."""
    rows = [["lambda_index", "lambda", "nonzero_count", "variable", "coefficient"]]
    for k, lam in enumerate(path.lambdas):
        active = np.flatnonzero(path.coefficients[k])
        if active.size == 0:
            rows.append([k, repr(float(lam)), 0, "", ""])
            continue
        for j in active:
            rows.append([k, repr(float(lam)), int(path.nonzero_counts[k]),
                         int(j) + 1, repr(float(path.coefficients[k, j]))])
    return rows


def undertuned_select(path: LassoPath, target: int) -> tuple[int, ...]:
    """Variable ids at the first (largest-penalty) path point whose
    active count equals ``target``, falling back to the first point
    with at least that many.  Counts along a path need not be
    monotone, so the scan is literal."""
    if target < 1:
        raise InvalidConfigError("target must be >= 1")
    counts = path.nonzero_counts
    exact = np.flatnonzero(counts == target)
    if exact.size:
        return path.nonzero_ids(int(exact[0]))
    at_least = np.flatnonzero(counts >= target)
    if at_least.size:
        return path.nonzero_ids(int(at_least[0]))
    raise TargetUnreachableError(
        f"path never reaches {target} active variables "
        f"(max {int(counts.max()) if counts.size else 0}); extend the path"
    )
