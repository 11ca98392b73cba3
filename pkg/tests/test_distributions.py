import numpy as np
import pytest

from modelsets.distributions import (
    chi_squared_cdf,
    f_cdf,
    normal_cdf,
    student_t_cdf,
    tail_probability,
)
from modelsets.exceptions import InvalidDfError

from oracles import (
    quad_chi_squared_cdf,
    quad_f_cdf,
    quad_normal_cdf,
    quad_student_t_cdf,
)


def test_normal_symmetry():
    assert normal_cdf(0.0) == pytest.approx(0.5, abs=1e-15)


def test_chi_squared_support_boundary():
    for df in (1, 3, 10):
        assert chi_squared_cdf(0.0, df) == 0.0
        assert chi_squared_cdf(-2.0, df) == 0.0


def test_student_t_quantile_frozen():
    # mpmath-frozen value for the 95th percentile neighbourhood of t(7)
    assert student_t_cdf(1.8946, 7) == pytest.approx(0.9500015727403808, abs=1e-12)
    # and against the adaptive-quadrature oracle
    assert student_t_cdf(1.8946, 7) == pytest.approx(quad_student_t_cdf(1.8946, 7), abs=1e-10)


# grids chosen to cover the ranges screening and testing actually hit
NORMAL_GRID = [-8.0, -3.5, -1.0, -0.1, 0.0, 0.3, 1.96, 4.0, 7.5]
T_CASES = [(df, x) for df in (1, 2, 7, 30, 200) for x in (-6.0, -1.5, 0.0, 0.5, 2.2, 5.0)]
CHI2_CASES = [(df, x) for df in (1, 2, 5, 20) for x in (0.01, 0.5, 3.841, 15.0, 60.0)]
F_CASES = [(d1, d2, x) for d1 in (1, 2, 5) for d2 in (3, 15, 60) for x in (0.1, 1.0, 1.5, 4.0, 12.0)]


def test_normal_grid_vs_quadrature():
    for x in NORMAL_GRID:
        assert normal_cdf(x) == pytest.approx(quad_normal_cdf(x), abs=1e-8)


def test_student_t_grid_vs_quadrature():
    for df, x in T_CASES:
        assert student_t_cdf(x, df) == pytest.approx(quad_student_t_cdf(x, df), abs=1e-8)


def test_chi_squared_grid_vs_quadrature():
    for df, x in CHI2_CASES:
        assert chi_squared_cdf(x, df) == pytest.approx(quad_chi_squared_cdf(x, df), abs=1e-8)


def test_f_grid_vs_quadrature():
    for d1, d2, x in F_CASES:
        assert f_cdf(x, d1, d2) == pytest.approx(quad_f_cdf(x, d1, d2), abs=1e-8)


def test_monotone_in_x():
    xs = np.linspace(-6, 6, 81)
    for fn in (
        lambda v: normal_cdf(v),
        lambda v: student_t_cdf(v, 5),
        lambda v: chi_squared_cdf(v, 3),
        lambda v: f_cdf(v, 4, 9),
    ):
        vals = [fn(v) for v in xs]
        assert all(b >= a for a, b in zip(vals, vals[1:]))
        assert all(0.0 <= v <= 1.0 for v in vals)


def test_dispatcher():
    assert tail_probability("normal", 0.0) == pytest.approx(0.5)
    assert tail_probability("student_t", 1.8946, df=7) == pytest.approx(0.95, abs=1e-5)
    assert tail_probability("chi_squared", 0.0, df=4) == 0.0
    assert tail_probability("f", 1.5, df1=2, df2=15) == pytest.approx(
        1 - 0.25476552262595202, abs=1e-12
    )


def test_invalid_df():
    with pytest.raises(InvalidDfError):
        student_t_cdf(1.0, 0)
    with pytest.raises(InvalidDfError):
        chi_squared_cdf(1.0, -3)
    with pytest.raises(InvalidDfError):
        f_cdf(1.0, 2, 0)
    with pytest.raises(InvalidDfError):
        tail_probability("student_t", 1.0)
    with pytest.raises(InvalidDfError):
        tail_probability("cauchy", 1.0)
