"""Exploratory scan for squared and interaction terms.

Each retained variable's squared term, and each pair's product term,
is added one at a time to the regression on all retained main effects;
an extreme statistic on the added term flags it as a candidate.  The
final say belongs to a decision source: a terminal prompt, a scripted
answer file, the browser session, or silent auto-keep.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import combinations

import numpy as np

from .datasets import Dataset
from .exceptions import DecisionSourceClosedError, StatisticalError
from .fitters import Family, fit_family

__all__ = [
    "TermCandidate",
    "PlotData",
    "CandidateBundle",
    "squared_term_scan",
    "interaction_scan",
    "interaction_plot_data",
    "exploratory_phase",
    "AutoKeepAll",
    "ScriptedDecisionSource",
    "TerminalDecisionSource",
]


@dataclass(frozen=True)
class TermCandidate:
    """A squared or interaction term flagged by the scan.

    ``kind`` is "squared" (uses ``var_a`` only) or "interaction"
    (``var_a < var_b``).  ``decision`` is pending until a decision
    source keeps or discards the candidate.
    """

    kind: str
    var_a: int
    var_b: int | None
    p_value: float
    test_statistic: float
    decision: str = "pending"

    @property
    def key(self) -> str:
        if self.kind == "squared":
            return f"sq:{self.var_a}"
        return f"int:{self.var_a}:{self.var_b}"

    @property
    def label(self) -> str:
        if self.kind == "squared":
            return f"x{self.var_a}^2"
        return f"x{self.var_a}*x{self.var_b}"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "var_a": self.var_a,
            "var_b": self.var_b,
            "p_value": self.p_value,
            "test_statistic": self.test_statistic,
            "decision": self.decision,
        }


@dataclass(frozen=True)
class PlotData:
    """Scatter of the response against one variable, grouped by a
    companion's median split (ties go low).

    For survival responses the y values are observed times with
    per-point censoring flags, and ``log_scale`` hints that clients
    should plot time on a log axis.
    """

    x: tuple[float, ...]
    y: tuple[float, ...]
    group: tuple[str, ...]
    censored: tuple[bool, ...]
    x_label: str
    y_label: str
    group_label: str
    log_scale: bool = False

    def to_dict(self) -> dict:
        return {
            "points": [
                {"x": xi, "y": yi, "group": gi, "censored": ci}
                for xi, yi, gi, ci in zip(self.x, self.y, self.group, self.censored)
            ],
            "x_label": self.x_label,
            "y_label": self.y_label,
            "group_label": self.group_label,
            "log_scale": self.log_scale,
        }


@dataclass(frozen=True)
class CandidateBundle:
    """A candidate with the plot views a reviewer sees."""

    candidate: TermCandidate
    plots: tuple[PlotData, ...]


def _scan_one(dataset: Dataset, family: Family, base_cols: np.ndarray,
              extra: np.ndarray):
    """p-value and statistic of the appended term, or an error string."""
    x = np.column_stack([base_cols, extra])
    try:
        fit = fit_family(x, family, **dataset.response_kwargs())
    except StatisticalError as exc:
        return None, f"{type(exc).__name__}: {exc}"
    return (float(fit.p_values[-1]), float(fit.test_statistics[-1])), None


def squared_term_scan(dataset: Dataset, retained_ids, family: Family | None = None,
                      signif: float = 0.01):
    """Candidates among squared terms of the retained variables.

    Returns ``(candidates, failures)``: candidates sorted by ascending
    p-value, failures as (variable id, reason) pairs.
    """
    family = family or dataset.family
    retained_ids = sorted(int(v) for v in retained_ids)
    base = dataset.cols(retained_ids)
    out, failures = [], []
    for v in retained_ids:
        col = dataset.col(v)
        res, err = _scan_one(dataset, family, base, col * col)
        if err is not None:
            failures.append((v, err))
            continue
        p, stat = res
        if p < signif or signif >= 1.0:
            out.append(TermCandidate("squared", v, None, p, stat))
    out.sort(key=lambda c: (c.p_value, c.var_a))
    return out, failures


def interaction_scan(dataset: Dataset, retained_ids, family: Family | None = None,
                     signif: float = 0.01):
    """Candidates among the C(r, 2) pairwise product terms."""
    family = family or dataset.family
    retained_ids = sorted(int(v) for v in retained_ids)
    base = dataset.cols(retained_ids)
    out, failures = [], []
    for va, vb in combinations(retained_ids, 2):
        res, err = _scan_one(dataset, family, base,
                             dataset.col(va) * dataset.col(vb))
        if err is not None:
            failures.append(((va, vb), err))
            continue
        p, stat = res
        if p < signif or signif >= 1.0:
            out.append(TermCandidate("interaction", va, vb, p, stat))
    out.sort(key=lambda c: (c.p_value, c.var_a, c.var_b))
    return out, failures


def interaction_plot_data(dataset: Dataset, var_a: int, var_b: int) -> PlotData:
    """Response against ``var_a``, grouped by ``var_b``'s median split.

    Swapping the arguments gives the companion view.
    """
    xa = dataset.col(var_a)
    xb = dataset.col(var_b)
    median = float(np.median(xb))
    group = tuple("low" if v <= median else "high" for v in xb)
    if dataset.family.kind == "cox_survival":
        y = dataset.time
        censored = tuple(bool(s == 0) for s in dataset.status)
        log_scale = True
        y_label = "observed time"
    else:
        y = dataset.y
        censored = tuple(False for _ in range(dataset.n))
        log_scale = False
        y_label = "response"
    return PlotData(
        x=tuple(float(v) for v in xa),
        y=tuple(float(v) for v in y),
        group=group,
        censored=censored,
        x_label=dataset.names[var_a - 1],
        y_label=y_label,
        group_label=f"{dataset.names[var_b - 1]} vs median",
        log_scale=log_scale,
    )


def candidate_plots(dataset: Dataset, cand: TermCandidate) -> tuple[PlotData, ...]:
    """Plot views for a candidate: both orientations for interactions,
    the self-split for squared terms."""
    if cand.kind == "interaction":
        return (
            interaction_plot_data(dataset, cand.var_a, cand.var_b),
            interaction_plot_data(dataset, cand.var_b, cand.var_a),
        )
    return (interaction_plot_data(dataset, cand.var_a, cand.var_a),)


class AutoKeepAll:
    """Silent mode: every candidate is kept without prompting."""

    def resolve(self, bundles):
        return {b.candidate.key: True for b in bundles}


class ScriptedDecisionSource:
    """Replays recorded keep/discard answers.

    ``answers`` maps candidate keys (``sq:3814``, ``int:3824:6706``) or
    (kind, vars) dicts to booleans.  A presented candidate without an
    answer aborts the session with the decisions made so far.
    """

    def __init__(self, answers):
        self.answers = {}
        if isinstance(answers, dict):
            items = answers.items()
            for key, keep in items:
                self.answers[key] = bool(keep)
        else:
            for entry in answers:
                self.answers[_entry_key(entry)] = bool(entry["keep"])

    def resolve(self, bundles):
        decided = {}
        for b in bundles:
            key = b.candidate.key
            if key not in self.answers:
                raise DecisionSourceClosedError(
                    f"no scripted answer for candidate {key}",
                    partial_decisions=decided,
                )
            decided[key] = self.answers[key]
        return decided


def _entry_key(entry: dict) -> str:
    kind = entry["kind"]
    if kind == "squared":
        return f"sq:{entry['var']}"
    va, vb = sorted(entry["vars"])
    return f"int:{va}:{vb}"


class TerminalDecisionSource:
    """Prompts on the terminal, one candidate at a time.

    Answering Y to "Discard ...?" discards; N keeps.  EOF aborts the
    session and surfaces the partial decisions.
    """

    def __init__(self, input_fn=None, print_fn=print):
        self.input_fn = input_fn
        self.print_fn = print_fn

    def resolve(self, bundles):
        ask = self.input_fn if self.input_fn is not None else input
        decided = {}
        for b in bundles:
            c = b.candidate
            noun = "squared term" if c.kind == "squared" else "interaction term"
            self.print_fn(
                f"{c.label}: statistic {c.test_statistic:+.3f}, "
                f"p = {c.p_value:.3g}"
            )
            while True:
                try:
                    raw = ask(f"Discard {noun}? [Y/N] ")
                except EOFError:
                    raise DecisionSourceClosedError(
                        "decision session closed at the terminal",
                        partial_decisions=decided,
                    ) from None
                answer = raw.strip().lower()
                if answer in ("y", "yes"):
                    decided[c.key] = False
                    break
                if answer in ("n", "no"):
                    decided[c.key] = True
                    break
                self.print_fn("please answer Y or N")
        return decided


def exploratory_phase(dataset: Dataset, retained_ids, family: Family | None = None,
                      signif: float = 0.01, decision_source=None):
    """Scan for candidate terms and let the decision source keep or
    discard each one.

    Returns ``(kept_squared_ids, kept_interaction_pairs, candidates)``
    where ``candidates`` carries every scanned candidate with its final
    decision, in the presentation order (ascending p-value).  With no
    candidates the source is never consulted.
    """
    family = family or dataset.family
    sq, _sq_fail = squared_term_scan(dataset, retained_ids, family, signif)
    inter, _in_fail = interaction_scan(dataset, retained_ids, family, signif)
    candidates = sorted(sq + inter, key=lambda c: (c.p_value, c.kind, c.var_a,
                                                   c.var_b or 0))
    if not candidates:
        return [], [], []

    bundles = [CandidateBundle(c, candidate_plots(dataset, c)) for c in candidates]
    source = decision_source if decision_source is not None else AutoKeepAll()
    decisions = source.resolve(bundles)

    resolved = []
    for c in candidates:
        keep = decisions.get(c.key)
        if keep is None:
            raise DecisionSourceClosedError(
                f"candidate {c.key} left undecided", partial_decisions=decisions
            )
        resolved.append(replace(c, decision="keep" if keep else "discard"))

    kept_sq = [c.var_a for c in resolved if c.kind == "squared" and c.decision == "keep"]
    kept_in = [(c.var_a, c.var_b) for c in resolved
               if c.kind == "interaction" and c.decision == "keep"]
    return kept_sq, kept_in, resolved
