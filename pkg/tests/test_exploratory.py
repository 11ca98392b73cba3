import numpy as np
import pytest

from modelsets.datasets import Dataset
from modelsets.exceptions import DecisionSourceClosedError
from modelsets.exploratory import (
    AutoKeepAll,
    ScriptedDecisionSource,
    TerminalDecisionSource,
    exploratory_phase,
    interaction_plot_data,
    interaction_scan,
    squared_term_scan,
)
from modelsets.fitters import GAUSSIAN


def _ds(x, y):
    return Dataset(X=x, family=GAUSSIAN,
                   names=tuple(f"x{j}" for j in range(1, x.shape[1] + 1)), y=y)


def test_squared_scan_detects_planted_square():
    hits, false_hits = 0, 0
    for seed in range(100):
        rng = np.random.default_rng(seed)
        x = rng.normal(size=(80, 2))
        y = x[:, 0] ** 2 + 0.3 * rng.normal(size=80)
        cands, failures = squared_term_scan(_ds(x, y), [1, 2], signif=0.01)
        keys = {c.key for c in cands}
        hits += "sq:1" in keys
        false_hits += "sq:2" in keys
        assert not failures
    assert hits >= 95
    assert false_hits <= 20


def test_squared_scan_signif_one_emits_everything():
    rng = np.random.default_rng(1)
    x = rng.normal(size=(40, 3))
    y = rng.normal(size=40)
    cands, _ = squared_term_scan(_ds(x, y), [1, 2, 3], signif=1.0)
    assert {c.var_a for c in cands} == {1, 2, 3}
    ps = [c.p_value for c in cands]
    assert ps == sorted(ps)


def test_interaction_scan_detects_planted_product():
    hits = 0
    for seed in range(100):
        rng = np.random.default_rng(200 + seed)
        x = rng.normal(size=(80, 3))
        y = x[:, 0] * x[:, 1] + 0.3 * rng.normal(size=80)
        cands, _ = interaction_scan(_ds(x, y), [1, 2, 3], signif=0.01)
        hits += any(c.var_a == 1 and c.var_b == 2 for c in cands)
    assert hits >= 95


def test_interaction_scan_pair_count_and_zero_boundary():
    rng = np.random.default_rng(2)
    x = rng.normal(size=(60, 17))
    y = rng.normal(size=60)
    ds = _ds(x, y)
    cands, failures = interaction_scan(ds, range(1, 18), signif=1.0)
    assert len(cands) + len(failures) == 136  # C(17, 2)
    assert interaction_scan(ds, range(1, 18), signif=0.0)[0] == []


def test_scan_calibration_near_signif():
    # pure linear truth: the per-test false-candidate rate approaches
    # the scan level (binomial tolerance)
    signif, reps = 0.1, 150
    total_tests, total_cands = 0, 0
    for seed in range(reps):
        rng = np.random.default_rng(3000 + seed)
        x = rng.normal(size=(60, 4))
        y = 1.5 * x[:, 0] + rng.normal(size=60)
        ds = _ds(x, y)
        sq, sqf = squared_term_scan(ds, [1, 2, 3, 4], signif=signif)
        inter, inf_ = interaction_scan(ds, [1, 2, 3, 4], signif=signif)
        total_tests += 10 - len(sqf) - len(inf_)
        total_cands += len(sq) + len(inter)
    rate = total_cands / total_tests
    se = np.sqrt(signif * (1 - signif) / total_tests)
    assert abs(rate - signif) <= 3 * se + 0.02


def test_plot_data_constant_companion_all_low():
    x = np.column_stack([np.arange(6.0), np.full(6, 2.0)])
    y = np.arange(6.0)
    pd = interaction_plot_data(_ds(x, y), 1, 2)
    assert set(pd.group) == {"low"}


def test_plot_data_bijective_and_handsplit():
    x = np.column_stack([
        np.array([0.0, 1.0, 2.0, 3.0, 4.0, 5.0]),
        np.array([10.0, -1.0, 7.0, 3.0, 5.0, 2.0]),
    ])
    y = np.array([1.0, 2.0, 3.0, 4.0, 5.0, 6.0])
    pd = interaction_plot_data(_ds(x, y), 1, 2)
    assert len(pd.x) == len(pd.y) == 6
    assert pd.x == tuple(x[:, 0])
    assert pd.y == tuple(y)
    # median of (10,-1,7,3,5,2) is 4 -> low for {-1,3,2}, high {10,7,5}
    assert pd.group == ("high", "low", "high", "low", "high", "low")
    assert not any(pd.censored)


def test_plot_data_survival_flags():
    from modelsets.fitters import Family

    x = np.arange(8.0).reshape(4, 2)
    ds = Dataset(X=x, family=Family("cox_survival"), names=("a", "b"),
                 time=np.array([1.0, 2.0, 3.0, 4.0]),
                 status=np.array([1, 0, 1, 0]))
    pd = interaction_plot_data(ds, 1, 2)
    assert pd.censored == (False, True, False, True)
    assert pd.log_scale


class _ExplodingSource:
    def resolve(self, bundles):
        raise AssertionError("source must not be consulted")


def test_phase_zero_candidates_skips_source():
    rng = np.random.default_rng(4)
    x = rng.normal(size=(50, 3))
    y = rng.normal(size=50)
    ds = _ds(x, y)
    kept_sq, kept_in, cands = exploratory_phase(
        ds, [1, 2, 3], signif=1e-9, decision_source=_ExplodingSource()
    )
    assert kept_sq == [] and kept_in == [] and cands == []


def test_phase_silent_keeps_all():
    rng = np.random.default_rng(5)
    x = rng.normal(size=(80, 3))
    y = x[:, 0] ** 2 + x[:, 1] * x[:, 2] + 0.2 * rng.normal(size=80)
    ds = _ds(x, y)
    kept_sq, kept_in, cands = exploratory_phase(ds, [1, 2, 3], signif=0.01,
                                                decision_source=AutoKeepAll())
    assert len(kept_sq) + len(kept_in) == len(cands) > 0
    assert all(c.decision == "keep" for c in cands)


def test_phase_scripted_choices():
    rng = np.random.default_rng(6)
    x = rng.normal(size=(80, 3))
    y = x[:, 0] ** 2 + x[:, 1] * x[:, 2] + 0.2 * rng.normal(size=80)
    ds = _ds(x, y)
    _, _, cands = exploratory_phase(ds, [1, 2, 3], signif=0.01)
    answers = {c.key: c.kind == "squared" for c in cands}
    kept_sq, kept_in, resolved = exploratory_phase(
        ds, [1, 2, 3], signif=0.01,
        decision_source=ScriptedDecisionSource(answers),
    )
    assert kept_in == []
    assert {f"sq:{v}" for v in kept_sq} == {c.key for c in cands
                                            if c.kind == "squared"}


def test_phase_scripted_missing_answer_aborts_with_partial():
    rng = np.random.default_rng(6)
    x = rng.normal(size=(80, 3))
    y = x[:, 0] ** 2 + x[:, 1] * x[:, 2] + 0.2 * rng.normal(size=80)
    ds = _ds(x, y)
    with pytest.raises(DecisionSourceClosedError):
        exploratory_phase(ds, [1, 2, 3], signif=0.01,
                          decision_source=ScriptedDecisionSource({}))


def test_terminal_source_y_discards_n_keeps():
    rng = np.random.default_rng(6)
    x = rng.normal(size=(80, 3))
    y = x[:, 0] ** 2 + x[:, 1] * x[:, 2] + 0.2 * rng.normal(size=80)
    ds = _ds(x, y)
    _, _, cands = exploratory_phase(ds, [1, 2, 3], signif=0.01)
    answers = iter(["maybe", "y"] + ["n"] * (len(cands) - 1))
    printed = []
    source = TerminalDecisionSource(input_fn=lambda _: next(answers),
                                    print_fn=printed.append)
    kept_sq, kept_in, resolved = exploratory_phase(ds, [1, 2, 3], signif=0.01,
                                                   decision_source=source)
    assert resolved[0].decision == "discard"
    assert all(c.decision == "keep" for c in resolved[1:])
    assert any("Discard" not in line for line in printed)


def test_candidates_deterministic_given_inputs():
    rng = np.random.default_rng(7)
    x = rng.normal(size=(60, 4))
    y = x[:, 0] * x[:, 1] + rng.normal(size=60)
    ds = _ds(x, y)
    a = exploratory_phase(ds, [1, 2, 3, 4], signif=0.05)[2]
    b = exploratory_phase(ds, [1, 2, 3, 4], signif=0.05)[2]
    assert [c.key for c in a] == [c.key for c in b]


def test_linear_truth_scenario_suggests_no_terms():
    # the screening + scan pipeline on the linear-truth generator: with
    # the pinned seeds, neither squared nor interaction terms come up
    from modelsets.dgp import DgpConfig, dgp
    from modelsets.reduction import reduction_phase

    cfg = DgpConfig(d=1000, s=5, a=3, n=100, seed=2018, rho=0.9,
                    sig_strength=1.0, intercept=5.0)
    ds = Dataset.from_generated(dgp(cfg)).rows(slice(0, 70))
    trace = reduction_phase(ds, seed=1012)
    kept_sq, kept_in, cands = exploratory_phase(ds, trace.retained, signif=0.01)
    assert cands == []
    assert kept_sq == [] and kept_in == []
