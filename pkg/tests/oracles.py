"""Independent numerical oracles used by the test suite.

Everything here deliberately avoids the code paths under test: the
distribution functions are adaptive quadrature of hand-written
densities, and the regression oracles are naive textbook formulas or
generic optimizers.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import quad


# -- density functions (hand-written, lgamma-based) -------------------------

def normal_pdf(x: float) -> float:
    return math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)


def student_t_pdf(x: float, df: float) -> float:
    lognum = math.lgamma(0.5 * (df + 1.0)) - math.lgamma(0.5 * df)
    logden = 0.5 * math.log(df * math.pi)
    logker = -0.5 * (df + 1.0) * math.log1p(x * x / df)
    return math.exp(lognum - logden + logker)


def chi_squared_pdf(x: float, df: float) -> float:
    if x <= 0:
        return 0.0
    k = 0.5 * df
    return math.exp((k - 1.0) * math.log(x) - 0.5 * x - k * math.log(2.0) - math.lgamma(k))


def f_pdf(x: float, df1: float, df2: float) -> float:
    if x <= 0:
        return 0.0
    a, b = 0.5 * df1, 0.5 * df2
    logbeta = math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)
    return math.exp(
        a * math.log(df1 / df2) + (a - 1.0) * math.log(x)
        - (a + b) * math.log1p(df1 * x / df2) - logbeta
    )


# -- quadrature CDFs ---------------------------------------------------------

_QUAD_OPTS = dict(epsabs=1e-12, epsrel=1e-12, limit=400)


def quad_normal_cdf(x: float) -> float:
    val, _ = quad(normal_pdf, -np.inf, x, **_QUAD_OPTS)
    return val


def quad_student_t_cdf(x: float, df: float) -> float:
    # Integrate the symmetric tail for stability.
    if x >= 0:
        tail, _ = quad(student_t_pdf, x, np.inf, args=(df,), **_QUAD_OPTS)
        return 1.0 - tail
    tail, _ = quad(student_t_pdf, -np.inf, x, args=(df,), **_QUAD_OPTS)
    return tail


def quad_chi_squared_cdf(x: float, df: float) -> float:
    if x <= 0:
        return 0.0
    val, _ = quad(chi_squared_pdf, 0.0, x, args=(df,), **_QUAD_OPTS)
    return val


def quad_f_cdf(x: float, df1: float, df2: float) -> float:
    if x <= 0:
        return 0.0
    val, _ = quad(f_pdf, 0.0, x, args=(df1, df2), **_QUAD_OPTS)
    return val


# -- naive regression fitters ------------------------------------------------

def ols_normal_equations(design: np.ndarray, y: np.ndarray):
    """Closed-form normal-equations OLS: (beta, rss, se)."""
    xtx = design.T @ design
    xty = design.T @ y
    beta = np.linalg.solve(xtx, xty)
    resid = y - design @ beta
    rss = float(resid @ resid)
    n, p = design.shape
    sigma2 = rss / (n - p)
    se = np.sqrt(sigma2 * np.diag(np.linalg.inv(xtx)))
    return beta, rss, se


def cox_partial_loglik_breslow(beta: np.ndarray, x: np.ndarray,
                               time: np.ndarray, status: np.ndarray) -> float:
    """Per-observation loop partial log likelihood (Breslow ties)."""
    eta = x @ beta
    total = 0.0
    for i in range(len(time)):
        if status[i] != 1:
            continue
        at_risk = time >= time[i]
        total += eta[i] - math.log(np.exp(eta[at_risk]).sum())
    return total


def cox_partial_loglik_efron(beta: np.ndarray, x: np.ndarray,
                             time: np.ndarray, status: np.ndarray) -> float:
    """Per-event-time loop partial log likelihood (Efron ties)."""
    eta = x @ beta
    expeta = np.exp(eta)
    total = 0.0
    for t in np.unique(time[status == 1]):
        deaths = (time == t) & (status == 1)
        at_risk = time >= t
        d = int(deaths.sum())
        s_risk = expeta[at_risk].sum()
        s_tie = expeta[deaths].sum()
        total += eta[deaths].sum()
        for ell in range(d):
            total -= math.log(s_risk - (ell / d) * s_tie)
    return total


# -- brute-force subset selection (independent of the package path) ----------

def _close_terms(terms: frozenset) -> frozenset:
    extra = set()
    for t in terms:
        if t[0] == "int":
            extra.add(("main", t[1]))
            extra.add(("main", t[2]))
    return frozenset(terms | extra)


def bruteforce_selection(term_cols: np.ndarray, terms, response, family_kind: str,
                         signif: float, model_size: int,
                         tie_method: str = "efron") -> set:
    """Double-loop subset search with naive refits.

    Gaussian subsets use numpy lstsq; logistic and survival subsets are
    maximized with scipy.optimize over hand-coded likelihood loops.
    p-values come from scipy.stats.  Returns the closed, deduplicated
    set of kept models as frozensets of term tuples.
    """
    from itertools import combinations

    from scipy import optimize, stats as sps

    n, t_total = term_cols.shape
    terms = list(terms)

    if family_kind == "gaussian":
        y = response
        ones = np.ones((n, 1))

        def objective(cols):
            a = np.hstack([ones, term_cols[:, cols]])
            beta, *_ = np.linalg.lstsq(a, y, rcond=None)
            r = y - a @ beta
            return float(r @ r)

        def pvalue(obj_sub, obj_comp, k):
            p_sub, p_comp = k + 1, t_total + 1
            f = ((obj_sub - obj_comp) / (p_comp - p_sub)) / (obj_comp / (n - p_comp))
            return float(sps.f.sf(max(f, 0.0), p_comp - p_sub, n - p_comp))

    elif family_kind == "binomial":
        y = response

        def negll(beta, a):
            eta = a @ beta
            return -float(y @ eta - (np.maximum(eta, 0)
                                     + np.log1p(np.exp(-np.abs(eta)))).sum())

        def objective(cols):
            a = np.hstack([np.ones((n, 1)), term_cols[:, cols]])
            res = optimize.minimize(negll, np.zeros(a.shape[1]), args=(a,),
                                    method="BFGS",
                                    options={"gtol": 1e-10, "maxiter": 500})
            return -float(res.fun)

        def pvalue(obj_sub, obj_comp, k):
            stat = max(2.0 * (obj_comp - obj_sub), 0.0)
            return float(sps.chi2.sf(stat, t_total - k))

    else:
        time, status = response

        def objective(cols):
            x = term_cols[:, cols]
            loglik = (cox_partial_loglik_efron if tie_method == "efron"
                      else cox_partial_loglik_breslow)

            def neg(beta):
                return -loglik(beta, x, time, status)

            res = optimize.minimize(neg, np.zeros(len(cols)), method="BFGS",
                                    options={"gtol": 1e-10, "maxiter": 500})
            return -float(res.fun)

        def pvalue(obj_sub, obj_comp, k):
            stat = max(2.0 * (obj_comp - obj_sub), 0.0)
            return float(sps.chi2.sf(stat, t_total - k))

    obj_comp = objective(list(range(t_total)))
    kept = []
    for k in range(1, min(model_size, t_total) + 1):
        for combo in combinations(range(t_total), k):
            if k == t_total:
                kept.append(combo)
                continue
            p = pvalue(objective(list(combo)), obj_comp, k)
            if p >= signif:
                kept.append(combo)
    closed = []
    for combo in kept:
        spec = _close_terms(frozenset(terms[i] for i in combo))
        if spec not in closed:
            closed.append(spec)
    return set(closed)


def grid_maximize(fn, lo: float, hi: float, coarse: int = 4001, refine: int = 6):
    """Golden-free grid maximizer: coarse scan then repeated zooming."""
    xs = np.linspace(lo, hi, coarse)
    vals = np.array([fn(x) for x in xs])
    best = int(np.argmax(vals))
    lo_i, hi_i = max(best - 1, 0), min(best + 1, coarse - 1)
    lo, hi = xs[lo_i], xs[hi_i]
    for _ in range(refine):
        xs = np.linspace(lo, hi, 201)
        vals = np.array([fn(x) for x in xs])
        best = int(np.argmax(vals))
        lo, hi = xs[max(best - 1, 0)], xs[min(best + 1, 200)]
    return 0.5 * (lo + hi)
