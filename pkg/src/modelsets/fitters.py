"""Regression fitting and nested-model testing.

Three response families are supported: the normal-theory linear model,
the linear logistic model, and proportional hazards fitted by partial
likelihood.  All fits report per-term two-sided significance so that
downstream screening can rank variables, and the objective value needed
by likelihood-ratio comparisons (residual sum of squares for the
Gaussian family, maximized log likelihood otherwise).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .distributions import (
    chi_squared_cdf,
    f_cdf,
    two_sided_normal_pvalue,
    two_sided_t_pvalue,
)
from .exceptions import (
    DimensionMismatchError,
    InsufficientResidualDfError,
    InvalidConfigError,
    MonotoneLikelihoodError,
    NoEventsError,
    NotNestedError,
    NoVariationError,
    RankDeficientError,
    SeparationError,
)

__all__ = [
    "Family",
    "GAUSSIAN",
    "BINOMIAL",
    "COX",
    "FitResult",
    "fit_least_squares",
    "fit_logistic",
    "fit_cox",
    "fit_family",
    "lrt_pvalue",
]

#: relative tolerance on the R diagonal below which a design is declared
#: rank deficient
RANK_TOL = 1e-10

#: gradient max-norm convergence tolerance for iterative fits
GRAD_TOL = 1e-8

#: iteration cap for Newton / IRLS
MAX_ITER = 50

#: coefficient magnitude beyond which the likelihood is treated as
#: unbounded (separation / monotone likelihood)
COEF_CAP = 30.0


@dataclass(frozen=True)
class Family:
    """Response family tag.

    ``gaussian`` and ``binomial`` fits include an intercept; the
    proportional-hazards family excludes it (absorbed into the baseline
    hazard).  ``tie_method`` selects the partial-likelihood tie
    correction and is meaningful only for ``cox_survival``.
    """

    kind: str
    tie_method: str = "efron"

    def __post_init__(self):
        if self.kind not in ("gaussian", "binomial", "cox_survival"):
            raise InvalidConfigError(f"unknown family kind {self.kind!r}")
        if self.tie_method not in ("efron", "breslow"):
            raise InvalidConfigError(f"unknown tie method {self.tie_method!r}")

    @property
    def has_intercept(self) -> bool:
        return self.kind in ("gaussian", "binomial")


GAUSSIAN = Family("gaussian")
BINOMIAL = Family("binomial")
COX = Family("cox_survival")


@dataclass(frozen=True)
class FitResult:
    """Fit summary shared by all families.

    ``objective`` is the residual sum of squares for the Gaussian family
    and the maximized (partial) log likelihood otherwise.  Statistics
    are t for Gaussian fits and Wald z for the likelihood families;
    p-values are two-sided.
    """

    coefficients: np.ndarray
    standard_errors: np.ndarray
    test_statistics: np.ndarray
    p_values: np.ndarray
    objective: float
    n_params: int
    converged: bool


def _as_design(design) -> np.ndarray:
    x = np.asarray(design, dtype=float)
    if x.ndim != 2:
        raise DimensionMismatchError("design must be a 2-d matrix")
    return x


def _check_shapes(x: np.ndarray, y: np.ndarray) -> None:
    if y.ndim != 1 or x.shape[0] != y.shape[0]:
        raise DimensionMismatchError(
            f"design has {x.shape[0]} rows but response has {y.shape[0]}"
        )
    if x.shape[0] <= x.shape[1]:
        raise DimensionMismatchError(
            f"need more rows than parameters, got n={x.shape[0]}, p={x.shape[1]}"
        )


def _check_information(info: np.ndarray, error_cls) -> None:
    """A near-singular information matrix at the stopping point is the
    signature of a likelihood flattening out towards infinite
    coefficients (separation / monotone partial likelihood)."""
    try:
        eigs = np.linalg.eigvalsh(info)
    except np.linalg.LinAlgError:
        raise error_cls("information matrix could not be decomposed") from None
    if not np.isfinite(eigs).all() or eigs[0] <= 1e-8 * max(1.0, eigs[-1]):
        raise error_cls("information matrix near-singular at the optimum")


def _qr_checked(x: np.ndarray):
    """Householder QR with a rank check on the R diagonal."""
    q, r = np.linalg.qr(x)
    diag = np.abs(np.diag(r))
    if diag.size == 0 or diag.min() <= RANK_TOL * max(diag.max(), np.finfo(float).tiny):
        raise RankDeficientError("design columns are collinear beyond tolerance")
    return q, r


def fit_least_squares(design, y) -> FitResult:
    """Ordinary least squares on a design that already carries its
    intercept column.

    Per-term t statistics use n - p residual degrees of freedom.  An
    exact interpolation (zero residual variance) reports p = 0 for
    nonzero coefficients and p = 1 otherwise.
    """
    x = _as_design(design)
    y = np.asarray(y, dtype=float)
    _check_shapes(x, y)
    n, p = x.shape

    q, r = _qr_checked(x)
    beta = np.linalg.solve(r, q.T @ y)
    resid = y - x @ beta
    rss = float(resid @ resid)

    df = n - p
    rinv = np.linalg.solve(r, np.eye(p))
    xtx_inv_diag = np.einsum("ij,ij->i", rinv, rinv)

    scale = max(1.0, float(y @ y))
    if rss <= 1e-12 * scale:
        # Exact fit: residual variance is zero and the t reference
        # distribution degenerates.
        big = np.abs(beta) > 1e-10 * max(1.0, np.abs(beta).max())
        se = np.zeros(p)
        t = np.where(big, np.inf * np.sign(beta), 0.0)
        pv = np.where(big, 0.0, 1.0)
        return FitResult(beta, se, t, pv, rss, p, True)

    sigma2 = rss / df
    se = np.sqrt(sigma2 * xtx_inv_diag)
    t = beta / se
    pv = np.array([two_sided_t_pvalue(ti, df) for ti in t])
    return FitResult(beta, se, t, pv, rss, p, True)


def _bernoulli_loglik(eta: np.ndarray, y: np.ndarray) -> float:
    # log(1 + e^eta) computed stably for large |eta|
    log1pexp = np.maximum(eta, 0.0) + np.log1p(np.exp(-np.abs(eta)))
    return float(y @ eta - log1pexp.sum())


def fit_logistic(design, y) -> FitResult:
    """Maximum-likelihood logistic regression by safeguarded Newton
    iteration (equivalently IRLS with step halving).

    Raises ``SeparationError`` when the likelihood is unbounded, which
    is detected by a coefficient escaping ``COEF_CAP`` or by the
    weighted normal equations becoming singular along the way.
    """
    x = _as_design(design)
    y = np.asarray(y, dtype=float)
    _check_shapes(x, y)
    classes = np.unique(y)
    if not set(classes.tolist()) <= {0.0, 1.0}:
        raise InvalidConfigError("binary response must be coded 0/1")
    if classes.size < 2:
        raise NoVariationError("response takes a single value")
    _qr_checked(x)

    n, p = x.shape
    beta = np.zeros(p)
    eta = x @ beta
    ll = _bernoulli_loglik(eta, y)
    converged = False
    for _ in range(MAX_ITER):
        prob = 1.0 / (1.0 + np.exp(-eta))
        grad = x.T @ (y - prob)
        if np.abs(grad).max() < GRAD_TOL:
            converged = True
            break
        w = prob * (1.0 - prob)
        info = (x * w[:, None]).T @ x
        try:
            step = np.linalg.solve(info, grad)
        except np.linalg.LinAlgError:
            raise SeparationError("weighted design became singular") from None
        # step halving on objective decrease
        for _ in range(30):
            cand = beta + step
            cand_eta = x @ cand
            cand_ll = _bernoulli_loglik(cand_eta, y)
            if cand_ll >= ll - 1e-12:
                break
            step = 0.5 * step
        else:
            break
        beta, eta, ll = cand, cand_eta, cand_ll
        if np.abs(beta).max() > COEF_CAP:
            raise SeparationError(
                "coefficient magnitude exceeded cap; likelihood looks unbounded"
            )

    prob = 1.0 / (1.0 + np.exp(-eta))
    w = prob * (1.0 - prob)
    info = (x * w[:, None]).T @ x
    _check_information(info, SeparationError)
    cov = np.linalg.inv(info)
    se = np.sqrt(np.diag(cov))
    z = beta / se
    pv = np.array([two_sided_normal_pvalue(zi) for zi in z])
    return FitResult(beta, se, z, pv, ll, p, converged)


class CoxWorkspace:
    """Pre-sorted survival data supporting repeated partial-likelihood
    fits on column subsets.

    Rows are sorted by decreasing time once; risk sets are then prefix
    sums.  ``block_end[i]`` is the last sorted position sharing row i's
    time, so tied censorings stay inside the risk set of a tied event.
    """

    def __init__(self, X, time, status, tie_method: str = "efron"):
        X = np.asarray(X, dtype=float)
        if X.ndim != 2:
            raise DimensionMismatchError("covariate matrix must be 2-d")
        time = np.asarray(time, dtype=float)
        status = np.asarray(status)
        if time.shape[0] != X.shape[0] or status.shape[0] != X.shape[0]:
            raise DimensionMismatchError("time/status length must match rows")
        if not set(np.unique(status).tolist()) <= {0, 1}:
            raise InvalidConfigError("status must be coded 0/1")
        if tie_method not in ("efron", "breslow"):
            raise InvalidConfigError(f"unknown tie method {tie_method!r}")
        order = np.argsort(-time, kind="stable")
        self.x = X[order]
        self.time = time[order]
        self.status = status[order].astype(int)
        self.tie_method = tie_method
        self.n = X.shape[0]
        if self.status.sum() == 0:
            raise NoEventsError("no events in the survival response")

        # last index of each equal-time block
        end = np.empty(self.n, dtype=int)
        i = 0
        while i < self.n:
            j = i
            while j + 1 < self.n and self.time[j + 1] == self.time[i]:
                j += 1
            end[i : j + 1] = j
            i = j + 1
        self.block_end = end
        self.event_rows = np.flatnonzero(self.status == 1)

        # tie groups: distinct event times with their death rows
        groups = []
        seen_end = -1
        for i in self.event_rows:
            if self.block_end[i] == seen_end:
                continue
            seen_end = self.block_end[i]
            block = np.arange(i, seen_end + 1)
            deaths = block[self.status[block] == 1]
            groups.append((seen_end, deaths))
        self.groups = groups
        self.has_ties = any(len(d) > 1 for _, d in groups)

    def check_rank(self, cols) -> None:
        """Centered-column rank check; constant columns carry no
        partial-likelihood information."""
        xc = self.x[:, cols]
        xc = xc - xc.mean(axis=0)
        sv = np.linalg.svd(xc, compute_uv=False)
        if sv.size == 0 or sv.min() <= RANK_TOL * max(sv.max(), np.finfo(float).tiny):
            raise RankDeficientError(
                "covariates are constant or collinear within the risk sets"
            )

    def _eval(self, cols, beta, want_info: bool):
        x = self.x[:, cols]
        eta = np.clip(x @ beta, -700.0, 700.0)
        w = np.exp(eta)
        cw = np.cumsum(w)
        cwx = np.cumsum(w[:, None] * x, axis=0)
        if want_info:
            cwxx = np.cumsum(w[:, None, None] * (x[:, :, None] * x[:, None, :]), axis=0)

        if not self.has_ties:
            e = self.event_rows
            ends = self.block_end[e]
            z = cw[ends]
            mb = cwx[ends] / z[:, None]
            ll = float(eta[e].sum() - np.log(z).sum())
            grad = x[e].sum(axis=0) - mb.sum(axis=0)
            if not want_info:
                return ll, grad, None
            info = (cwxx[ends] / z[:, None, None]).sum(axis=0) - np.einsum(
                "ij,ik->jk", mb, mb
            )
            return ll, grad, info

        p = x.shape[1]
        ll = 0.0
        grad = np.zeros(p)
        info = np.zeros((p, p)) if want_info else None
        for end, deaths in self.groups:
            d = len(deaths)
            s_risk = cw[end]
            m_risk = cwx[end]
            ll += float(eta[deaths].sum())
            grad += x[deaths].sum(axis=0)
            if self.tie_method == "breslow":
                fr = np.zeros(d)
            else:
                fr = np.arange(d) / d
            s_tie = w[deaths].sum()
            m_tie = (w[deaths, None] * x[deaths]).sum(axis=0)
            zl = s_risk - fr * s_tie
            ml = m_risk[None, :] - fr[:, None] * m_tie[None, :]
            ll -= float(np.log(zl).sum())
            u = ml / zl[:, None]
            grad -= u.sum(axis=0)
            if want_info:
                M_risk = cwxx[end]
                M_tie = np.einsum("i,ij,ik->jk", w[deaths], x[deaths], x[deaths])
                Ml = M_risk[None] - fr[:, None, None] * M_tie[None]
                info += (Ml / zl[:, None, None]).sum(axis=0)
                info -= np.einsum("ij,ik->jk", u, u)
        return ll, grad, info

    def loglik(self, cols, beta) -> float:
        ll, _, _ = self._eval(cols, np.asarray(beta, dtype=float), False)
        return ll

    def max_loglik(self, cols) -> tuple[float, bool]:
        """Maximized partial log likelihood on a column subset, without
        the inference extras; used by subset searches where only the
        objective feeds the likelihood-ratio test.  The caller is
        responsible for overall rank (subsets of a full-rank column set
        stay full rank)."""
        _, ll, _, converged = self._maximize(cols)
        return ll, converged

    def _maximize(self, cols):
        cols = list(cols)
        p = len(cols)
        if self.n <= p:
            raise DimensionMismatchError(
                f"need more rows than parameters, got n={self.n}, p={p}"
            )
        beta = np.zeros(p)
        ll, grad, info = self._eval(cols, beta, True)
        converged = False
        for _ in range(MAX_ITER):
            if np.abs(grad).max() < GRAD_TOL:
                converged = True
                break
            try:
                step = np.linalg.solve(info, grad)
            except np.linalg.LinAlgError:
                raise MonotoneLikelihoodError(
                    "information matrix singular during iteration"
                ) from None
            for _ in range(30):
                cand = beta + step
                cand_ll, cand_grad, cand_info = self._eval(cols, cand, True)
                if np.isfinite(cand_ll) and cand_ll >= ll - 1e-12:
                    break
                step = 0.5 * step
            else:
                break
            beta, ll, grad, info = cand, cand_ll, cand_grad, cand_info
            if np.abs(beta).max() > COEF_CAP:
                raise MonotoneLikelihoodError(
                    "coefficient magnitude exceeded cap; partial likelihood "
                    "looks monotone"
                )
        return beta, ll, info, converged

    def fit(self, cols) -> FitResult:
        cols = list(cols)
        self.check_rank(cols)
        beta, ll, info, converged = self._maximize(cols)
        _check_information(info, MonotoneLikelihoodError)
        cov = np.linalg.inv(info)
        se = np.sqrt(np.maximum(np.diag(cov), 0.0))
        with np.errstate(divide="ignore", invalid="ignore"):
            z = np.where(se > 0, beta / se, 0.0)
        pv = np.array([two_sided_normal_pvalue(zi) for zi in z])
        return FitResult(beta, se, z, pv, ll, len(cols), converged)


def fit_cox(X, time, status, tie_method: str = "efron") -> FitResult:
    """Proportional-hazards fit by maximizing the partial likelihood
    (Efron tie handling by default, Breslow selectable)."""
    ws = CoxWorkspace(X, time, status, tie_method)
    return ws.fit(range(ws.x.shape[1]))


def fit_family(x_terms, family: Family, *, y=None, time=None, status=None) -> FitResult:
    """Fit term columns under ``family``.

    For intercept families an all-ones column is prepended, so term
    statistics start at index 1; Cox fits use the columns as given.
    """
    x_terms = np.asarray(x_terms, dtype=float)
    if x_terms.ndim == 1:
        x_terms = x_terms[:, None]
    if family.kind == "gaussian":
        design = np.column_stack([np.ones(x_terms.shape[0]), x_terms])
        return fit_least_squares(design, y)
    if family.kind == "binomial":
        design = np.column_stack([np.ones(x_terms.shape[0]), x_terms])
        return fit_logistic(design, y)
    return fit_cox(x_terms, time, status, family.tie_method)


def lrt_pvalue(fit_sub: FitResult, fit_comp: FitResult, family: Family, n: int) -> float:
    """p-value of the likelihood-ratio comparison of a nested submodel
    against the comprehensive model.

    Gaussian fits use the exact F test; the likelihood families refer
    twice the log-likelihood difference to chi-squared.  Small negative
    statistics from numerical noise are clamped to zero.
    """
    dp = fit_comp.n_params - fit_sub.n_params
    if dp <= 0:
        raise NotNestedError("submodel must have strictly fewer parameters")
    if n <= fit_comp.n_params:
        raise InsufficientResidualDfError(
            f"n={n} leaves no residual degrees of freedom beyond "
            f"p={fit_comp.n_params}"
        )
    if family.kind == "gaussian":
        rss_sub, rss_comp = fit_sub.objective, fit_comp.objective
        num = max(rss_sub - rss_comp, 0.0)
        df2 = n - fit_comp.n_params
        if rss_comp <= 1e-12 * max(1.0, rss_sub):
            return 1.0 if num <= 1e-12 * max(1.0, rss_sub) else 0.0
        f_stat = (num / dp) / (rss_comp / df2)
        return 1.0 - f_cdf(f_stat, dp, df2)
    stat = max(2.0 * (fit_comp.objective - fit_sub.objective), 0.0)
    return 1.0 - chi_squared_cdf(stat, dp)
