"""Comprehensive-model subset search and the confidence set of models.

Every nonempty subset of the comprehensive model's terms up to a size
cap is tested against the comprehensive model by likelihood ratio; all
subsets that are not rejected are reported, closed under main effects
for their interactions, and grouped by size.  Candidates are streamed
in deterministic (size, lexicographic) order rather than materialized.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .datasets import Dataset
from .exceptions import (
    InvalidConfigError,
    RankDeficientError,
    SampleTooSmallError,
    StatisticalError,
)
from .fitters import CoxWorkspace, Family, FitResult, fit_logistic, lrt_pvalue

__all__ = [
    "ModelSpec",
    "KeptModel",
    "ConfidenceSet",
    "SubstitutionTable",
    "enumerate_candidate_models",
    "model_selection_phase",
    "close_under_main_effects",
    "substitution_table",
    "variable_frequencies",
    "term_label",
    "term_design",
]


@dataclass(frozen=True)
class ModelSpec:
    """A candidate model: main effects, squared terms, interactions.

    Interactions are stored as ordered pairs (a < b).  Terms are
    addressed as tuples ("main", v), ("sq", v), ("int", a, b) in the
    canonical order mains, squares, interactions, each ascending.
    """

    mains: frozenset = frozenset()
    squares: frozenset = frozenset()
    interactions: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "mains", frozenset(int(v) for v in self.mains))
        object.__setattr__(self, "squares", frozenset(int(v) for v in self.squares))
        pairs = set()
        for a, b in self.interactions:
            if a == b:
                raise InvalidConfigError("interaction needs two distinct variables")
            pairs.add((min(int(a), int(b)), max(int(a), int(b))))
        object.__setattr__(self, "interactions", frozenset(pairs))

    @property
    def size(self) -> int:
        return len(self.mains) + len(self.squares) + len(self.interactions)

    def terms(self) -> tuple:
        return tuple(
            [("main", v) for v in sorted(self.mains)]
            + [("sq", v) for v in sorted(self.squares)]
            + [("int", a, b) for a, b in sorted(self.interactions)]
        )

    @classmethod
    def from_terms(cls, terms) -> "ModelSpec":
        mains, squares, inters = set(), set(), set()
        for t in terms:
            if t[0] == "main":
                mains.add(t[1])
            elif t[0] == "sq":
                squares.add(t[1])
            elif t[0] == "int":
                inters.add((t[1], t[2]))
            else:
                raise InvalidConfigError(f"unknown term {t!r}")
        return cls(frozenset(mains), frozenset(squares), frozenset(inters))

    def closed(self) -> "ModelSpec":
        """Main-effect closure: every interaction's variables appear as
        mains.  Squared terms are deliberately not closed."""
        if not self.interactions:
            return self
        extra = {v for pair in self.interactions for v in pair}
        return ModelSpec(self.mains | extra, self.squares, self.interactions)

    def to_dict(self) -> dict:
        return {
            "mains": sorted(self.mains),
            "squares": sorted(self.squares),
            "interactions": [list(p) for p in sorted(self.interactions)],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "ModelSpec":
        return cls(
            frozenset(doc.get("mains", ())),
            frozenset(doc.get("squares", ())),
            frozenset(tuple(p) for p in doc.get("interactions", ())),
        )


def term_label(term, names=None) -> str:
    def nm(v):
        return names[v - 1] if names else f"x{v}"

    if term[0] == "main":
        return nm(term[1])
    if term[0] == "sq":
        return f"{nm(term[1])}^2"
    return f"{nm(term[1])}*{nm(term[2])}"


def term_design(dataset: Dataset, terms) -> np.ndarray:
    """Design columns for a term list, in the given order."""
    cols = []
    for t in terms:
        if t[0] == "main":
            cols.append(dataset.col(t[1]))
        elif t[0] == "sq":
            c = dataset.col(t[1])
            cols.append(c * c)
        else:
            cols.append(dataset.col(t[1]) * dataset.col(t[2]))
    return np.column_stack(cols) if cols else np.empty((dataset.n, 0))


def enumerate_candidate_models(comprehensive: ModelSpec, model_size: int):
    """Every nonempty subset of the comprehensive terms of size at most
    ``model_size``, streamed in (size, lexicographic) order."""
    if model_size < 1:
        raise InvalidConfigError("model_size must be >= 1")
    terms = comprehensive.terms()
    for k in range(1, min(model_size, len(terms)) + 1):
        for combo in combinations(terms, k):
            yield ModelSpec.from_terms(combo)


@dataclass(frozen=True)
class KeptModel:
    spec: ModelSpec
    p_value: float


@dataclass(frozen=True)
class ConfidenceSet:
    """All models statistically indistinguishable from the
    comprehensive model at level ``signif`` on the test rows."""

    by_size: dict
    signif: float
    comprehensive: ModelSpec
    family: Family
    n_test: int
    n_tested: int = 0
    n_rejected: int = 0
    unfittable: tuple = ()

    def models(self):
        for size in sorted(self.by_size):
            for km in self.by_size[size]:
                yield km

    def specs(self):
        return [km.spec for km in self.models()]

    def __len__(self) -> int:
        return sum(len(v) for v in self.by_size.values())

    def contains(self, spec: ModelSpec) -> bool:
        return any(km.spec == spec for km in self.by_size.get(spec.size, ()))

    def to_dict(self) -> dict:
        return {
            "signif": self.signif,
            "n_test": self.n_test,
            "n_tested": self.n_tested,
            "n_rejected": self.n_rejected,
            "comprehensive": self.comprehensive.to_dict(),
            "by_size": {
                str(size): [
                    {"model": km.spec.to_dict(), "p_value": km.p_value}
                    for km in kms
                ]
                for size, kms in sorted(self.by_size.items())
            },
            "unfittable": [
                {"model": spec.to_dict(), "reason": reason}
                for spec, reason in self.unfittable
            ],
        }


class _SubsetEvaluator:
    """Family-specific objective evaluation for term-index subsets.

    The Gaussian path solves the normal equations on sub-Grams of the
    one-off Gram matrix; the Cox path reuses one sorted workspace.  The
    comprehensive fit is computed once and shared.
    """

    def __init__(self, dataset: Dataset, family: Family, z: np.ndarray):
        self.family = family
        self.n = dataset.n
        self.intercept = 1 if family.has_intercept else 0
        if family.kind == "gaussian":
            a = np.column_stack([np.ones(self.n), z])
            self.gram = a.T @ a
            self.xty = a.T @ dataset.y
            self.yty = float(dataset.y @ dataset.y)
        elif family.kind == "binomial":
            self.z = z
            self.y = dataset.y
        else:
            self.ws = CoxWorkspace(z, dataset.time, dataset.status, family.tie_method)

    def fit_subset(self, idx) -> FitResult:
        empty = np.empty(0)
        if self.family.kind == "gaussian":
            cols = [0] + [i + 1 for i in idx]
            g = self.gram[np.ix_(cols, cols)]
            c = self.xty[cols]
            try:
                factor = cho_factor(g)
            except np.linalg.LinAlgError:
                raise RankDeficientError("subset design is collinear") from None
            beta = cho_solve(factor, c)
            rss = max(self.yty - float(c @ beta), 0.0)
            return FitResult(empty, empty, empty, empty, rss, len(cols), True)
        if self.family.kind == "binomial":
            design = np.column_stack([np.ones(self.n), self.z[:, list(idx)]])
            fit = fit_logistic(design, self.y)
            return FitResult(empty, empty, empty, empty, fit.objective,
                             fit.n_params, fit.converged)
        ll, converged = self.ws.max_loglik(list(idx))
        return FitResult(empty, empty, empty, empty, ll, len(idx), converged)


def model_selection_phase(test_dataset: Dataset, comprehensive: ModelSpec,
                          family: Family | None = None, signif: float = 0.01,
                          model_size: int = 5) -> ConfidenceSet:
    """Test all low-dimensional subsets of the comprehensive model and
    collect the ones the likelihood-ratio test does not reject.

    Kept models are closed under main effects; a model altered by
    closure records the p-value of its closed form.  Candidates whose
    fit fails are reported as unfittable rather than aborting the
    search.
    """
    family = family or test_dataset.family
    if comprehensive.closed() != comprehensive:
        raise InvalidConfigError(
            "comprehensive model must contain the main effects of its "
            "interactions"
        )
    terms = comprehensive.terms()
    t_total = len(terms)
    if t_total == 0:
        raise InvalidConfigError("comprehensive model has no terms")
    n = test_dataset.n
    p_comp = t_total + (1 if family.has_intercept else 0)
    if n <= p_comp:
        raise SampleTooSmallError(
            f"test split has {n} rows but the comprehensive model needs "
            f"more than {p_comp}"
        )

    z = term_design(test_dataset, terms)
    evaluator = _SubsetEvaluator(test_dataset, family, z)
    comp_fit = evaluator.fit_subset(tuple(range(t_total)))

    kept: list[tuple[ModelSpec, float]] = []
    unfittable = []
    n_tested = 0
    n_rejected = 0
    max_k = min(model_size, t_total)
    for k in range(1, max_k + 1):
        for idx in combinations(range(t_total), k):
            if k == t_total:
                p = 1.0
            else:
                try:
                    sub_fit = evaluator.fit_subset(idx)
                except StatisticalError as exc:
                    spec = ModelSpec.from_terms([terms[i] for i in idx])
                    unfittable.append((spec, f"{type(exc).__name__}: {exc}"))
                    continue
                p = lrt_pvalue(sub_fit, comp_fit, family, n)
            n_tested += 1
            if p >= signif:
                kept.append((ModelSpec.from_terms([terms[i] for i in idx]), p))
            else:
                n_rejected += 1

    index_of = {t: i for i, t in enumerate(terms)}
    final: dict[ModelSpec, float] = {}
    for spec, p in kept:
        closed = spec.closed()
        if closed in final:
            continue
        if closed == spec:
            final[closed] = p
            continue
        # closure added mains: record the closed form's own p-value
        # (never smaller, since the closed model is nearer the
        # comprehensive one)
        idx = tuple(index_of[t] for t in closed.terms())
        if len(idx) == t_total:
            final[closed] = 1.0
        else:
            try:
                p_closed = lrt_pvalue(evaluator.fit_subset(idx), comp_fit, family, n)
            except StatisticalError:
                p_closed = float("nan")
            final[closed] = p_closed

    by_size: dict[int, list[KeptModel]] = {}
    for spec, p in final.items():
        by_size.setdefault(spec.size, []).append(KeptModel(spec, p))
    for size in by_size:
        by_size[size].sort(key=lambda km: km.spec.terms())
    return ConfidenceSet(
        by_size={size: tuple(v) for size, v in sorted(by_size.items())},
        signif=signif, comprehensive=comprehensive, family=family, n_test=n,
        n_tested=n_tested, n_rejected=n_rejected, unfittable=tuple(unfittable),
    )


def close_under_main_effects(models) -> list[ModelSpec]:
    """Add missing mains for every interaction; merge duplicates
    created by the closure (first occurrence kept)."""
    out: list[ModelSpec] = []
    seen = set()
    for spec in models:
        closed = spec.closed()
        if closed not in seen:
            seen.add(closed)
            out.append(closed)
    return out


@dataclass(frozen=True)
class SubstitutionTable:
    """Proportion of models lacking term B that contain term A.

    ``values[i, j]`` is the (A=terms[i], B=terms[j]) entry; the
    diagonal and empty-denominator entries are NaN.  Terms are ordered
    by their frequency of appearance, descending.
    """

    terms: tuple
    values: np.ndarray
    frequencies: tuple


def _model_terms(spec: ModelSpec) -> set:
    return set(spec.terms())


def variable_frequencies(cs: ConfidenceSet) -> dict:
    """Proportion of confidence-set models containing each
    comprehensive term."""
    specs = cs.specs()
    total = len(specs)
    freqs = {}
    for term in cs.comprehensive.terms():
        if total == 0:
            freqs[term] = 0.0
        else:
            freqs[term] = sum(term in _model_terms(s) for s in specs) / total
    return freqs


def substitution_table(cs: ConfidenceSet) -> SubstitutionTable:
    specs = cs.specs()
    if not specs:
        raise InvalidConfigError("confidence set is empty")
    freqs = variable_frequencies(cs)
    ordered = sorted(cs.comprehensive.terms(), key=lambda t: (-freqs[t], t))
    term_sets = [_model_terms(s) for s in specs]
    k = len(ordered)
    values = np.full((k, k), np.nan)
    for j, term_b in enumerate(ordered):
        without_b = [ts for ts in term_sets if term_b not in ts]
        if not without_b:
            continue  # empty denominator stays undefined
        for i, term_a in enumerate(ordered):
            if i == j:
                continue
            values[i, j] = sum(term_a in ts for ts in without_b) / len(without_b)
    return SubstitutionTable(
        terms=tuple(ordered), values=values,
        frequencies=tuple(freqs[t] for t in ordered),
    )
