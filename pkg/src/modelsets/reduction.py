"""Hypercube screening: the staged reduction of candidate variables.

Variable ids are arranged at random in a dim-dimensional hypercube and
the response is regressed on each axis-parallel line of variables, so
every variable is assessed in ``dim`` separate analyses alongside
changing companions.  A per-stage decision rule retains variables that
do well in enough of their analyses; survivors are re-arranged in a
hypercube of one dimension fewer until dimension 2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .datasets import Dataset
from .dgp import substream
from .exceptions import (
    EmptyRetentionError,
    InvalidConfigError,
    SampleTooSmallError,
    StatisticalError,
    TooFewIndicesError,
)
from .fitters import Family, fit_family

__all__ = [
    "DecisionRule",
    "HypercubeArrangement",
    "LineRecord",
    "StageRecord",
    "ReductionTrace",
    "initial_dimension",
    "arrange_hypercube",
    "traversal_lines",
    "run_stage",
    "reduction_phase",
    "rules_from_signif_vector",
    "default_rules",
]


@dataclass(frozen=True)
class DecisionRule:
    """Per-stage retention rule.

    ``top_k`` retains a variable's line analysis when it ranks among
    the k smallest p-values of the line; ``threshold`` when its p-value
    is below alpha.  A variable is retained when it succeeds in at
    least ``min_appearances`` of its analyses; None derives the default
    ceil(dim / 2), i.e. at least half.
    """

    kind: str
    k: int | None = None
    alpha: float | None = None
    min_appearances: int | None = None

    def __post_init__(self):
        if self.kind == "top_k":
            if self.k is None or self.k < 1:
                raise InvalidConfigError("top_k rule needs k >= 1")
        elif self.kind == "threshold":
            if self.alpha is None or not 0.0 < self.alpha <= 1.0:
                raise InvalidConfigError("threshold rule needs alpha in (0, 1]")
        else:
            raise InvalidConfigError(f"unknown rule kind {self.kind!r}")
        if self.min_appearances is not None and self.min_appearances < 1:
            raise InvalidConfigError("min_appearances must be >= 1")

    @classmethod
    def top_k(cls, k: int, min_appearances: int | None = None) -> "DecisionRule":
        return cls("top_k", k=k, min_appearances=min_appearances)

    @classmethod
    def threshold(cls, alpha: float, min_appearances: int | None = None) -> "DecisionRule":
        return cls("threshold", alpha=alpha, min_appearances=min_appearances)

    def resolved_min(self, dim: int) -> int:
        m = self.min_appearances if self.min_appearances is not None else (dim + 1) // 2
        if m > dim:
            raise InvalidConfigError(
                f"min_appearances={m} exceeds the stage dimension {dim}"
            )
        return m

    def to_dict(self) -> dict:
        doc = {"kind": self.kind, "min_appearances": self.min_appearances}
        if self.kind == "top_k":
            doc["k"] = self.k
        else:
            doc["alpha"] = self.alpha
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "DecisionRule":
        return cls(doc["kind"], k=doc.get("k"), alpha=doc.get("alpha"),
                   min_appearances=doc.get("min_appearances"))


def rules_from_signif_vector(values) -> list[DecisionRule]:
    """Decode the compact rule vector: entries >= 1 are top-k counts,
    entries in (0, 1) are significance thresholds."""
    rules = []
    for v in values:
        if v >= 1:
            rules.append(DecisionRule.top_k(int(v)))
        elif 0 < v < 1:
            rules.append(DecisionRule.threshold(float(v)))
        else:
            raise InvalidConfigError(f"rule entry {v} must be positive")
    return rules


def default_rules(start_dim: int) -> list[DecisionRule]:
    """Stage 1 keeps the two most significant per line; later stages
    use the 1% level, each in at least half the analyses."""
    return [DecisionRule.top_k(2)] + [
        DecisionRule.threshold(0.01) for _ in range(start_dim - 2)
    ]


def _int_side(m: int, dim: int) -> int:
    """Smallest side with side**dim >= m, computed in integers."""
    side = max(1, round(m ** (1.0 / dim)))
    while side ** dim < m:
        side += 1
    while side > 1 and (side - 1) ** dim >= m:
        side -= 1
    return side


def initial_dimension(d: int, max_side: int = 15) -> int:
    """Smallest hypercube dimension >= 2 whose side stays within
    ``max_side`` when holding ``d`` variables."""
    if d < 2:
        raise InvalidConfigError("need at least 2 variables")
    dim = 2
    while _int_side(d, dim) > max_side:
        dim += 1
    return dim


@dataclass(frozen=True)
class HypercubeArrangement:
    """Seeded placement of variable ids into hypercube cells.

    ``cells`` has shape (side,) * dim and holds 1-based variable ids;
    0 marks an empty cell.  Ids are placed by a seeded uniform
    permutation in row-major order, leaving the trailing cells empty.
    """

    dim: int
    side: int
    seed: int
    cells: np.ndarray

    @property
    def n_arranged(self) -> int:
        return int((self.cells > 0).sum())

    @property
    def n_empty(self) -> int:
        return self.cells.size - self.n_arranged


def arrange_hypercube(indices, dim: int, seed: int) -> HypercubeArrangement:
    ids = np.asarray(list(indices), dtype=int)
    if len(set(ids.tolist())) != ids.size:
        raise InvalidConfigError("variable ids must be distinct")
    if ids.size < 2:
        raise TooFewIndicesError("need at least 2 ids to arrange")
    if dim < 2:
        raise InvalidConfigError("hypercube dimension must be >= 2")
    side = _int_side(ids.size, dim)
    rng = substream(seed)
    perm = rng.permutation(ids)
    flat = np.zeros(side ** dim, dtype=int)
    flat[: ids.size] = perm
    return HypercubeArrangement(dim=dim, side=side, seed=seed,
                                cells=flat.reshape((side,) * dim))


def traversal_lines(arr: HypercubeArrangement, min_size: int = 2) -> list[list[int]]:
    """Axis-parallel fibers of the arrangement as lists of variable ids.

    Fibers with fewer than ``min_size`` occupied cells are omitted; the
    default 2 skips degenerate single-variable fibers.  Emitted in axis
    order, then row-major within each axis.
    """
    lines = []
    for axis in range(arr.dim):
        fibers = np.moveaxis(arr.cells, axis, -1).reshape(-1, arr.side)
        for fiber in fibers:
            ids = fiber[fiber > 0]
            if ids.size >= min_size:
                lines.append([int(v) for v in ids])
    return lines


@dataclass(frozen=True)
class LineRecord:
    """Outcome of one line analysis."""

    line_index: int
    var_ids: tuple[int, ...]
    p_values: tuple[float, ...] | None
    successes: tuple[int, ...]
    error: str | None = None


@dataclass(frozen=True)
class StageRecord:
    dim: int
    seed: int
    side: int
    candidates: tuple[int, ...]
    retained: tuple[int, ...]
    appearances: dict
    success_counts: dict
    lines: tuple[LineRecord, ...]


@dataclass(frozen=True)
class ReductionTrace:
    """Per-stage records of a full reduction run."""

    stages: tuple[StageRecord, ...]

    @property
    def retained(self) -> tuple[int, ...]:
        return self.stages[-1].retained if self.stages else ()


def line_winners(rule: DecisionRule, p_values, stats, ids) -> set[int]:
    """Ids of one line's variables that satisfy the rule.

    Ranking ties are broken by larger absolute statistic, then smaller
    variable id, so stages are deterministic.  A threshold of 1 never
    rejects, even at p exactly 1.
    """
    if rule.kind == "top_k":
        order = sorted(
            range(len(ids)),
            key=lambda i: (p_values[i], -abs(stats[i]), ids[i]),
        )
        return {ids[i] for i in order[: rule.k]}
    if rule.alpha >= 1.0:
        return set(ids)
    return {ids[i] for i in range(len(ids)) if p_values[i] < rule.alpha}


def run_stage(dataset: Dataset, candidate_ids, dim: int, rule: DecisionRule,
              family: Family | None = None, seed: int = 0) -> StageRecord:
    """Arrange the candidates, fit every line, and apply the rule.

    Line fits that fail statistically (collinearity, separation,
    monotone likelihood) count as no-success for their variables and
    are recorded rather than aborting the stage.
    """
    family = family or dataset.family
    candidate_ids = sorted(int(v) for v in candidate_ids)
    min_app = rule.resolved_min(dim)

    arr = arrange_hypercube(candidate_ids, dim, seed)
    lines = traversal_lines(arr, min_size=1)
    max_line = max(len(ln) for ln in lines)
    n_params = max_line + (1 if family.has_intercept else 0)
    if dataset.n < n_params + 1:
        raise SampleTooSmallError(
            f"{dataset.n} rows cannot support lines of {max_line} variables"
        )

    resp = dataset.response_kwargs()
    offset = 1 if family.has_intercept else 0
    appearances = {v: 0 for v in candidate_ids}
    success_counts = {v: 0 for v in candidate_ids}
    records = []
    for idx, line in enumerate(lines):
        for v in line:
            appearances[v] += 1
        try:
            fit = fit_family(dataset.cols(line), family, **resp)
        except StatisticalError as exc:
            records.append(LineRecord(idx, tuple(line), None, (),
                                      f"{type(exc).__name__}: {exc}"))
            continue
        pv = fit.p_values[offset:]
        stats = fit.test_statistics[offset:]
        winners = line_winners(rule, pv, stats, line)
        for v in winners:
            success_counts[v] += 1
        records.append(LineRecord(idx, tuple(line),
                                  tuple(float(p) for p in pv),
                                  tuple(sorted(winners))))

    retained = tuple(v for v in candidate_ids if success_counts[v] >= min_app)
    return StageRecord(
        dim=dim, seed=seed, side=arr.side, candidates=tuple(candidate_ids),
        retained=retained, appearances=appearances,
        success_counts=success_counts, lines=tuple(records),
    )


def reduction_phase(dataset: Dataset, family: Family | None = None,
                    rules=None, dim_override: int | None = None,
                    seed: int = 0) -> ReductionTrace:
    """Run the staged reduction from the starting dimension down to 2.

    Stage t re-arranges the surviving ids in a hypercube of dimension
    start - t + 1 using a seed derived from ``(seed, t)``, so the whole
    trace reproduces from one integer.  Retaining zero variables raises
    ``EmptyRetentionError`` with the partial trace attached.
    """
    family = family or dataset.family
    start = dim_override if dim_override is not None else initial_dimension(dataset.d)
    if start < 2:
        raise InvalidConfigError("starting dimension must be >= 2")
    if rules is None:
        rules = default_rules(start)
    rules = list(rules)
    if len(rules) != start - 1:
        raise InvalidConfigError(
            f"need {start - 1} rules for a dimension-{start} start, got {len(rules)}"
        )

    current = list(range(1, dataset.d + 1))
    stages = []
    for t, rule in enumerate(rules, start=1):
        dim = start - t + 1
        stage_seed = int(np.random.SeedSequence(seed, spawn_key=(t,)).generate_state(1)[0])
        record = run_stage(dataset, current, dim, rule, family, stage_seed)
        stages.append(record)
        current = list(record.retained)
        if not current:
            raise EmptyRetentionError(
                f"stage {t} (dim {dim}) retained zero variables",
                trace=ReductionTrace(stages=tuple(stages)),
            )
        if len(current) < 2:
            # a single survivor cannot be re-arranged; later stages are
            # vacuous, so the trace ends here
            break
    return ReductionTrace(stages=tuple(stages))
