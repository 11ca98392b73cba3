import numpy as np
import pytest

from modelsets.dgp import DgpConfig, dgp
from modelsets.exceptions import TargetUnreachableError
from modelsets.lasso import KKT_TOL, LassoPath, lasso_path, undertuned_select


def _soft(z, lam):
    return np.sign(z) * max(abs(z) - lam, 0.0)


def test_single_covariate_matches_soft_threshold():
    rng = np.random.default_rng(0)
    n = 50
    x = rng.normal(loc=2.0, scale=3.0, size=(n, 1))
    y = 1.5 * x[:, 0] + rng.normal(size=n)
    path = lasso_path(x, y, n_lambdas=20, lambda_min_ratio=0.05)

    sd = x[:, 0].std()
    xs = (x[:, 0] - x[:, 0].mean()) / sd
    yc = y - y.mean()
    z = float(xs @ yc) / n
    for k, lam in enumerate(path.lambdas):
        expected = _soft(z, lam) / sd
        assert path.coefficients[k, 0] == pytest.approx(expected, abs=1e-9)


def test_lambda_max_is_all_zero():
    rng = np.random.default_rng(1)
    x = rng.normal(size=(30, 5))
    y = rng.normal(size=30)
    path = lasso_path(x, y)
    assert path.nonzero_counts[0] == 0
    assert np.all(path.coefficients[0] == 0.0)
    assert np.all(np.diff(path.lambdas) < 0)


def test_orthonormal_design_closed_form():
    n = 64
    # orthogonal columns with exact unit 1/n variance and zero mean
    x1 = np.tile([1.0, -1.0], n // 2)
    x2 = np.repeat([1.0, -1.0], n // 2)
    x = np.column_stack([x1, x2])
    rng = np.random.default_rng(2)
    y = 2.0 * x1 - 0.7 * x2 + rng.normal(size=n)
    path = lasso_path(x, y, n_lambdas=40)
    yc = y - y.mean()
    z = x.T @ yc / n
    for k, lam in enumerate(path.lambdas):
        for j in range(2):
            assert path.coefficients[k, j] == pytest.approx(_soft(z[j], lam),
                                                            abs=1e-9)


def test_kkt_conditions_along_path():
    rng = np.random.default_rng(3)
    n, d = 40, 12
    x = rng.normal(size=(n, d)) @ (np.eye(d) + 0.3 * rng.normal(size=(d, d)))
    y = x[:, 0] - 2 * x[:, 5] + rng.normal(size=n)
    path = lasso_path(x, y, n_lambdas=30, lambda_min_ratio=0.05)

    xs = (x - x.mean(axis=0)) / x.std(axis=0)
    for k, lam in enumerate(path.lambdas):
        fitted = path.intercepts[k] + x @ path.coefficients[k]
        r = y - fitted
        grad = np.abs(xs.T @ r) / n
        active = path.coefficients[k] != 0
        assert np.all(grad <= lam + KKT_TOL)
        if active.any():
            assert np.all(np.abs(grad[active] - lam) <= KKT_TOL)


def test_intercept_recovers_mean_structure():
    rng = np.random.default_rng(4)
    x = rng.normal(loc=5.0, size=(60, 3))
    y = 7.0 + 0.0 * x[:, 0] + rng.normal(size=60)
    path = lasso_path(x, y)
    assert path.intercepts[0] == pytest.approx(y.mean())


def test_zero_variance_column_dropped_with_notice():
    rng = np.random.default_rng(5)
    x = rng.normal(size=(30, 4))
    x[:, 2] = 3.14
    y = x[:, 0] + rng.normal(size=30)
    with pytest.warns(UserWarning, match="zero-variance"):
        path = lasso_path(x, y)
    assert path.dropped == (3,)
    assert np.all(path.coefficients[:, 2] == 0.0)
    assert path.nonzero_counts[-1] >= 1


def _path_with_counts(counts, actives):
    k, d = len(counts), max(len(a) for a in actives) and 6
    coefs = np.zeros((k, 6))
    for i, ids in enumerate(actives):
        for v in ids:
            coefs[i, v - 1] = 1.0
    return LassoPath(
        lambdas=np.linspace(1.0, 0.1, k),
        coefficients=coefs,
        intercepts=np.zeros(k),
        nonzero_counts=np.asarray(counts),
    )


def test_undertuned_select_exact_match_rule():
    path = _path_with_counts(
        [0, 1, 3, 3, 5],
        [(), (1,), (1, 2, 3), (1, 2, 4), (1, 2, 3, 4, 5)],
    )
    assert undertuned_select(path, 3) == (1, 2, 3)


def test_undertuned_select_fallback_to_first_at_least():
    path = _path_with_counts([0, 2, 4], [(), (1, 2), (1, 2, 3, 4)])
    assert undertuned_select(path, 3) == (1, 2, 3, 4)


def test_undertuned_select_non_monotone_counts():
    path = _path_with_counts(
        [0, 4, 2, 3], [(), (1, 2, 3, 4), (1, 2), (1, 2, 5)]
    )
    # first exact hit for 3 is the last point, not the early 4
    assert undertuned_select(path, 3) == (1, 2, 5)
    # first >= 2 is the 4-variable point
    assert undertuned_select(path, 2) == (1, 2)


def test_undertuned_select_unreachable():
    path = _path_with_counts([0, 1, 2], [(), (1,), (1, 2)])
    with pytest.raises(TargetUnreachableError):
        undertuned_select(path, 5)


def test_paper_config_signals_selected():
    cfg = DgpConfig(d=1000, s=5, a=3, n=100, seed=2018, rho=0.9,
                    sig_strength=1.0, intercept=5.0)
    data = dgp(cfg)
    x, y = data.X[:70], data.y[:70]
    path = lasso_path(x, y)
    selected = set(undertuned_select(path, 13))
    assert set(data.true_idx) <= selected


def test_path_csv_rows_roundtrip_values():
    from modelsets.lasso import path_to_csv_rows

    rng = np.random.default_rng(9)
    x = rng.normal(size=(40, 6))
    y = x[:, 1] + rng.normal(size=40)
    path = lasso_path(x, y, n_lambdas=10, lambda_min_ratio=0.1)
    rows = path_to_csv_rows(path)
    assert rows[0] == ["lambda_index", "lambda", "nonzero_count", "variable",
                       "coefficient"]
    assert rows[1][2] == 0  # lambda_max row has no active variables
    # every non-empty row reproduces the stored coefficient exactly
    for row in rows[1:]:
        if row[3] == "":
            continue
        k, var = row[0], row[3]
        assert float(row[4]) == path.coefficients[k, var - 1]
