"""Monte Carlo harness: replications of generate -> screen -> select.

A study runs a grid of data-generating cells for a fixed regime (full
sample, or a reduction/selection split) and reports, per cell, the
probability that the screening retains every signal variable, the
probability that the confidence set contains the true model, and the
expected number of extra models, each with per-replication dispersion.

Replication RNG substreams are derived from (study seed, cell index,
replication, purpose), so reports are identical however the work is
scheduled.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .datasets import Dataset
from .dgp import DgpConfig, dgp
from .exceptions import InvalidConfigError, ModelSetsError, TargetUnreachableError
from .lasso import lasso_path, undertuned_select
from .models import ModelSpec, model_selection_phase
from .reduction import DecisionRule, reduction_phase

__all__ = ["Cell", "StudyConfig", "ReplicationRecord", "CellReport",
           "StudyReport", "run_replication", "run_study"]


@dataclass(frozen=True)
class Cell:
    """One parameter combination of the simulation grid."""

    var_signal: float = 1.0
    var_corr_noise: float = 1.0
    rho: float = 0.9
    sig_strength: float = 1.0

    def apply(self, base: DgpConfig, seed: int) -> DgpConfig:
        return replace(base, var_signal=self.var_signal,
                       var_corr_noise=self.var_corr_noise, rho=self.rho,
                       sig_strength=self.sig_strength, seed=seed)


@dataclass(frozen=True)
class StudyConfig:
    """Study description.

    ``split`` is None for the full-sample regime or ``(n_reduce,
    n_select)`` summing to the sample size; the first block feeds the
    reduction, the remainder the subset tests.  The exploratory phase
    is skipped in simulations.  The lasso comparator is undertuned to
    the same retained count as the hypercube reduction within each
    replication, and is available for the gaussian response only.
    """

    base_dgp: DgpConfig
    cells: tuple = (Cell(),)
    replications: int = 100
    split: tuple | None = None
    rules: tuple | None = None
    signif_select: float = 0.01
    model_size: int = 5
    methods: tuple = ("cb",)
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "cells", tuple(self.cells))
        object.__setattr__(self, "methods", tuple(self.methods))
        if self.rules is not None:
            object.__setattr__(self, "rules", tuple(self.rules))
        if self.replications < 1:
            raise InvalidConfigError("replications must be >= 1")
        if not set(self.methods) <= {"cb", "lasso"}:
            raise InvalidConfigError(f"unknown methods {self.methods}")
        if not self.methods:
            raise InvalidConfigError("need at least one method")
        if self.split is not None:
            n_reduce, n_select = self.split
            if n_reduce + n_select != self.base_dgp.n:
                raise InvalidConfigError("split sizes must sum to n")
            if n_reduce < 2 or n_select < 2:
                raise InvalidConfigError("split blocks are too small")
            object.__setattr__(self, "split", (int(n_reduce), int(n_select)))
        if "lasso" in self.methods and self.base_dgp.response_kind != "gaussian":
            raise InvalidConfigError(
                "the lasso comparator supports the gaussian response only"
            )

    def to_dict(self) -> dict:
        return {
            "base_dgp": self.base_dgp.to_dict(),
            "cells": [asdict(c) for c in self.cells],
            "replications": self.replications,
            "split": list(self.split) if self.split else None,
            "rules": [r.to_dict() for r in self.rules] if self.rules else None,
            "signif_select": self.signif_select,
            "model_size": self.model_size,
            "methods": list(self.methods),
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "StudyConfig":
        return cls(
            base_dgp=DgpConfig.from_dict(doc["base_dgp"]),
            cells=tuple(Cell(**c) for c in doc.get("cells", [{}])),
            replications=doc.get("replications", 100),
            split=tuple(doc["split"]) if doc.get("split") else None,
            rules=tuple(DecisionRule.from_dict(r) for r in doc["rules"])
            if doc.get("rules") else None,
            signif_select=doc.get("signif_select", 0.01),
            model_size=doc.get("model_size", 5),
            methods=tuple(doc.get("methods", ("cb",))),
            seed=doc.get("seed", 0),
        )


@dataclass(frozen=True)
class ReplicationRecord:
    cell_index: int
    replication: int
    retained_count: int | None = None
    retain_all: bool | None = None
    covered: bool | None = None
    excess: int | None = None
    lasso_retain_all: bool | None = None
    cb_error: str | None = None
    lasso_error: str | None = None
    timings: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def _derived_seed(root: int, *key: int) -> int:
    return int(np.random.SeedSequence(root, spawn_key=tuple(key)).generate_state(1)[0])


def run_replication(config: StudyConfig, cell_index: int,
                    replication: int) -> ReplicationRecord:
    """One generate -> screen -> select pass for one cell.

    Failures are recorded on the replication, never raised, so a study
    always completes with reasons attached to its missing cells.
    """
    cell = config.cells[cell_index]
    dgp_seed = _derived_seed(config.seed, cell_index, replication, 0)
    reduce_seed = _derived_seed(config.seed, cell_index, replication, 1)
    data = dgp(cell.apply(config.base_dgp, dgp_seed))
    dataset = Dataset.from_generated(data)
    truth = set(data.true_idx)

    if config.split is not None:
        n_reduce = config.split[0]
        reduce_rows = dataset.rows(slice(0, n_reduce))
        select_rows = dataset.rows(slice(n_reduce, dataset.n))
    else:
        reduce_rows = select_rows = dataset

    record = ReplicationRecord(cell_index=cell_index, replication=replication)
    timings = {}

    t0 = time.perf_counter()
    try:
        trace = reduction_phase(reduce_rows, rules=config.rules, seed=reduce_seed)
        retained = trace.retained
    except ModelSetsError as exc:
        reason = f"reduction: {type(exc).__name__}: {exc}"
        return replace(record, cb_error=reason, lasso_error=reason,
                       timings={"reduce": time.perf_counter() - t0})
    timings["reduce"] = time.perf_counter() - t0
    retain_all = truth <= set(retained)
    record = replace(record, retained_count=len(retained), retain_all=retain_all)

    if "cb" in config.methods:
        t0 = time.perf_counter()
        try:
            comprehensive = ModelSpec(mains=frozenset(retained))
            cs = model_selection_phase(
                select_rows, comprehensive, signif=config.signif_select,
                model_size=config.model_size,
            )
            covered = cs.contains(ModelSpec(mains=frozenset(truth)))
            if covered:
                assert truth <= set(retained), "covered without retention"
            record = replace(record, covered=covered,
                             excess=len(cs) - (1 if covered else 0))
        except ModelSetsError as exc:
            record = replace(record,
                             cb_error=f"selection: {type(exc).__name__}: {exc}")
        timings["select"] = time.perf_counter() - t0

    if "lasso" in config.methods:
        t0 = time.perf_counter()
        try:
            target = max(len(retained), 1)
            path = lasso_path(reduce_rows.X, reduce_rows.y)
            try:
                selected = undertuned_select(path, target)
            except TargetUnreachableError:
                path = lasso_path(reduce_rows.X, reduce_rows.y,
                                  n_lambdas=200, lambda_min_ratio=0.001)
                selected = undertuned_select(path, target)
            record = replace(record, lasso_retain_all=truth <= set(selected))
        except ModelSetsError as exc:
            record = replace(record,
                             lasso_error=f"lasso: {type(exc).__name__}: {exc}")
        timings["lasso"] = time.perf_counter() - t0

    return replace(record, timings=timings)


_METRICS = (
    ("cb", "retain_all", "retain_all"),
    ("cb", "covered", "covered"),
    ("cb", "excess", "excess"),
    ("lasso", "retain_all", "lasso_retain_all"),
)


@dataclass(frozen=True)
class MetricSummary:
    mean: float
    sd: float
    se: float
    n: int
    degenerate_dispersion: bool = False

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class CellReport:
    cell: Cell
    summaries: dict
    records: tuple

    def to_dict(self) -> dict:
        return {
            "cell": asdict(self.cell),
            "summaries": {k: v.to_dict() for k, v in self.summaries.items()},
            "records": [r.to_dict() for r in self.records],
        }


@dataclass(frozen=True)
class StudyReport:
    config: StudyConfig
    cells: tuple

    def cell(self, index: int = 0) -> CellReport:
        return self.cells[index]

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "cells": [c.to_dict() for c in self.cells],
        }


def _summarize(values) -> MetricSummary:
    arr = np.asarray([float(v) for v in values], dtype=float)
    n = arr.size
    if n == 0:
        return MetricSummary(float("nan"), float("nan"), float("nan"), 0, True)
    mean = float(arr.mean())
    if n == 1:
        return MetricSummary(mean, 0.0, 0.0, 1, True)
    sd = float(arr.std(ddof=1))
    return MetricSummary(mean, sd, sd / np.sqrt(n), n)


def _run_one(args) -> ReplicationRecord:
    config, cell_index, replication = args
    return run_replication(config, cell_index, replication)


def run_study(config: StudyConfig, n_jobs: int = 1) -> StudyReport:
    """All cells x replications, aggregated per cell.

    ``n_jobs > 1`` distributes replications across processes; the
    derived substreams make the report independent of scheduling.
    """
    tasks = [(config, ci, r)
             for ci in range(len(config.cells))
             for r in range(config.replications)]
    if n_jobs > 1:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            results = list(pool.map(_run_one, tasks, chunksize=4))
    else:
        results = [_run_one(t) for t in tasks]

    by_cell = {}
    for rec in results:
        by_cell.setdefault(rec.cell_index, []).append(rec)

    cells = []
    for ci in range(len(config.cells)):
        recs = sorted(by_cell.get(ci, []), key=lambda r: r.replication)
        summaries = {}
        for method, metric, attr in _METRICS:
            if method not in config.methods:
                continue
            err_attr = "cb_error" if method == "cb" else "lasso_error"
            values = [getattr(r, attr) for r in recs
                      if getattr(r, attr) is not None and getattr(r, err_attr) is None]
            summaries[f"{method}_{metric}"] = _summarize(values)
        cells.append(CellReport(cell=config.cells[ci], summaries=summaries,
                                records=tuple(recs)))
    return StudyReport(config=config, cells=tuple(cells))


def report_to_csv_rows(report: StudyReport) -> list[list]:
    """Tidy rows: one per (cell, method, metric) with mean/sd/se/n."""
    regime = "split" if report.config.split else "full"
    rows = [["v_S0", "v_C0", "rho", "signal", "regime", "method", "metric",
             "mean", "sd", "se", "n"]]
    for cr in report.cells:
        for key, s in cr.summaries.items():
            method, metric = key.split("_", 1)
            rows.append([
                cr.cell.var_signal, cr.cell.var_corr_noise, cr.cell.rho,
                cr.cell.sig_strength, regime, method, metric,
                s.mean, s.sd, s.se, s.n,
            ])
    return rows
