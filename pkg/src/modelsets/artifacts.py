"""Run-artifact persistence.

Every CLI stage writes one JSON artifact carrying the schema version,
tool version, the exact config and seeds used, and the stage outputs,
so any artifact can be replayed to identical outputs.  Timestamps
honor ``SOURCE_DATE_EPOCH`` so that runs which must compare
byte-identical (scripted vs interactive decision paths) can pin them.
"""

from __future__ import annotations

import json
import os
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .exceptions import DataError, InvalidConfigError
from .models import ConfidenceSet, KeptModel, ModelSpec
from .reduction import LineRecord, ReductionTrace, StageRecord

SCHEMA_VERSION = 1

__all__ = ["SCHEMA_VERSION", "artifact_document", "write_artifact",
           "read_artifact", "trace_to_dict", "trace_from_dict",
           "confidence_set_from_dict"]


def _timestamp() -> str:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if epoch is not None:
        moment = datetime.fromtimestamp(int(epoch), tz=timezone.utc)
    else:
        moment = datetime.now(tz=timezone.utc)
    return moment.strftime("%Y-%m-%dT%H:%M:%SZ")


def artifact_document(kind: str, config: dict, outputs: dict,
                      seed: int | None = None) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": "modelsets",
        "tool_version": __version__,
        "kind": kind,
        "created_utc": _timestamp(),
        "seed": seed,
        "config": config,
        "outputs": outputs,
    }


def write_artifact(path, doc: dict) -> None:
    path = Path(path)
    text = json.dumps(doc, indent=2, sort_keys=True, allow_nan=True)
    path.write_text(text + "\n")


def read_artifact(path, expect_kind: str | None = None) -> dict:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot read artifact {path}: {exc}") from None
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise InvalidConfigError(
            f"artifact {path} has schema {doc.get('schema_version')}, "
            f"expected {SCHEMA_VERSION}"
        )
    if expect_kind is not None and doc.get("kind") != expect_kind:
        raise InvalidConfigError(
            f"artifact {path} is a {doc.get('kind')!r} artifact, "
            f"expected {expect_kind!r}"
        )
    return doc


def trace_to_dict(trace: ReductionTrace) -> dict:
    return {
        "stages": [
            {
                "dim": s.dim,
                "seed": s.seed,
                "side": s.side,
                "candidates": list(s.candidates),
                "retained": list(s.retained),
                "appearances": {str(k): v for k, v in s.appearances.items()},
                "success_counts": {str(k): v for k, v in s.success_counts.items()},
                "lines": [
                    {
                        "index": ln.line_index,
                        "ids": list(ln.var_ids),
                        "p_values": list(ln.p_values) if ln.p_values else None,
                        "successes": list(ln.successes),
                        "error": ln.error,
                    }
                    for ln in s.lines
                ],
            }
            for s in trace.stages
        ],
        "retained": list(trace.retained),
    }


def trace_from_dict(doc: dict) -> ReductionTrace:
    stages = []
    for s in doc["stages"]:
        stages.append(StageRecord(
            dim=s["dim"], seed=s["seed"], side=s["side"],
            candidates=tuple(s["candidates"]), retained=tuple(s["retained"]),
            appearances={int(k): v for k, v in s["appearances"].items()},
            success_counts={int(k): v for k, v in s["success_counts"].items()},
            lines=tuple(
                LineRecord(
                    line_index=ln["index"], var_ids=tuple(ln["ids"]),
                    p_values=tuple(ln["p_values"]) if ln["p_values"] else None,
                    successes=tuple(ln["successes"]), error=ln["error"],
                )
                for ln in s["lines"]
            ),
        ))
    return ReductionTrace(stages=tuple(stages))


def confidence_set_from_dict(doc: dict, family) -> ConfidenceSet:
    by_size = {}
    for size_str, entries in doc["by_size"].items():
        by_size[int(size_str)] = tuple(
            KeptModel(ModelSpec.from_dict(e["model"]), e["p_value"])
            for e in entries
        )
    return ConfidenceSet(
        by_size=by_size,
        signif=doc["signif"],
        comprehensive=ModelSpec.from_dict(doc["comprehensive"]),
        family=family,
        n_test=doc["n_test"],
        n_tested=doc.get("n_tested", 0),
        n_rejected=doc.get("n_rejected", 0),
        unfittable=tuple(
            (ModelSpec.from_dict(e["model"]), e["reason"])
            for e in doc.get("unfittable", ())
        ),
    )
