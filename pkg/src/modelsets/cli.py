"""Command line surface.

Each subcommand reads a JSON config (plus any prior artifacts), runs
one pipeline stage, and writes a run artifact.  Exit codes: 0 success,
2 configuration error, 3 data error, 4 statistical degeneracy,
1 anything else.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import secrets
import sys
from pathlib import Path

from .artifacts import (
    artifact_document,
    read_artifact,
    trace_to_dict,
    write_artifact,
)
from .datasets import Dataset, load_csv_dataset, save_csv_dataset
from .dgp import DgpConfig, dgp
from .exceptions import (
    ConfigError,
    DataError,
    InvalidConfigError,
    ModelSetsError,
    StatisticalError,
)
from .exploratory import (
    AutoKeepAll,
    ScriptedDecisionSource,
    TerminalDecisionSource,
    exploratory_phase,
)
from .harness import StudyConfig, report_to_csv_rows, run_study
from .models import (
    ModelSpec,
    model_selection_phase,
    substitution_table,
    term_label,
    variable_frequencies,
)
from .reduction import DecisionRule, reduction_phase, rules_from_signif_vector
from .session import SessionDecisionSource

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_STATISTICAL = 4


def _load_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise DataError(f"file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise InvalidConfigError(f"invalid JSON in {path}: {exc}") from None


def _resolve_seed(config: dict) -> int:
    """Use the configured seed; draw and record one only when absent."""
    seed = config.get("seed")
    if seed is None:
        seed = secrets.randbits(63)
    return int(seed)


def _dataset_from_config(data_path, config: dict) -> Dataset:
    response = config.get("response")
    if response is None:
        raise InvalidConfigError("config needs a 'response' spec")
    ds = load_csv_dataset(data_path, response,
                          tie_method=config.get("tie_method", "efron"))
    rows = config.get("rows")
    if rows is not None:
        start, stop = int(rows[0]), int(rows[1])
        if not 1 <= start <= stop <= ds.n:
            raise InvalidConfigError(f"rows [{start}, {stop}] outside 1..{ds.n}")
        ds = ds.rows(slice(start - 1, stop))
    return ds


def _parse_rules(raw):
    if raw is None:
        return None
    rules = []
    for entry in raw:
        if isinstance(entry, dict):
            rules.append(DecisionRule.from_dict(entry))
        else:
            rules.extend(rules_from_signif_vector([entry]))
    return rules


# -- subcommands -------------------------------------------------------------

def _cmd_dgp(args) -> int:
    config = _load_json(args.config)
    seed = _resolve_seed(config)
    config["seed"] = seed
    cfg = DgpConfig.from_dict(config)
    data = dgp(cfg)
    csv_path = args.csv or str(Path(args.out).with_suffix(".csv"))
    save_csv_dataset(Dataset.from_generated(data), csv_path)
    doc = artifact_document(
        "dgp", cfg.to_dict(),
        {"true_idx": list(data.true_idx), "csv_path": str(csv_path),
         "n": cfg.n, "d": cfg.d},
        seed=seed,
    )
    write_artifact(args.out, doc)
    print(f"wrote {args.out} and {csv_path} (true ids: {list(data.true_idx)})")
    return EXIT_OK


def _cmd_reduce(args) -> int:
    config = _load_json(args.config)
    seed = _resolve_seed(config)
    config["seed"] = seed
    ds = _dataset_from_config(args.data, config)
    trace = reduction_phase(
        ds,
        rules=_parse_rules(config.get("rules")),
        dim_override=config.get("dim_override"),
        seed=seed,
    )
    doc = artifact_document(
        "reduction", config,
        {"trace": trace_to_dict(trace), "retained": list(trace.retained)},
        seed=seed,
    )
    write_artifact(args.out, doc)
    print(f"retained {len(trace.retained)} variables: {list(trace.retained)}")
    return EXIT_OK


def _decision_source(args):
    if args.interactive:
        return SessionDecisionSource(token=args.token, port=args.port,
                                     ui_dir=args.ui_dir)
    if args.terminal:
        return TerminalDecisionSource()
    if args.script:
        doc = _load_json(args.script)
        return ScriptedDecisionSource(doc.get("decisions", []))
    return AutoKeepAll()


def _cmd_explore(args) -> int:
    config = _load_json(args.config)
    ds = _dataset_from_config(args.data, config)
    reduction = read_artifact(args.reduction, expect_kind="reduction")
    retained = reduction["outputs"]["retained"]
    signif = config.get("signif", 0.01)
    kept_sq, kept_in, candidates = exploratory_phase(
        ds, retained, signif=signif, decision_source=_decision_source(args)
    )
    doc = artifact_document(
        "exploration",
        {**config, "signif": signif, "retained": list(retained)},
        {
            "candidates": [c.to_dict() for c in candidates],
            "kept_squares": sorted(kept_sq),
            "kept_interactions": [list(p) for p in sorted(kept_in)],
        },
    )
    write_artifact(args.out, doc)
    print(f"kept {len(kept_sq)} squared and {len(kept_in)} interaction terms "
          f"out of {len(candidates)} candidates")
    return EXIT_OK


def _cmd_select(args) -> int:
    config = _load_json(args.config)
    ds = _dataset_from_config(args.data, config)
    reduction = read_artifact(args.reduction, expect_kind="reduction")
    retained = reduction["outputs"]["retained"]
    squares, interactions = [], []
    if args.exploration:
        exploration = read_artifact(args.exploration, expect_kind="exploration")
        squares = exploration["outputs"]["kept_squares"]
        interactions = [tuple(p) for p in exploration["outputs"]["kept_interactions"]]
    comprehensive = ModelSpec(
        mains=frozenset(retained),
        squares=frozenset(squares),
        interactions=frozenset(interactions),
    )
    cs = model_selection_phase(
        ds, comprehensive,
        signif=config.get("signif", 0.01),
        model_size=config.get("model_size", 5),
    )
    doc = artifact_document(
        "selection", config, {"confidence_set": cs.to_dict()},
    )
    write_artifact(args.out, doc)
    sizes = {size: len(v) for size, v in cs.by_size.items()}
    print(f"confidence set holds {len(cs)} models (by size: {sizes})")
    return EXIT_OK


def _cmd_simulate(args) -> int:
    config = StudyConfig.from_dict(_load_json(args.config))
    report = run_study(config, n_jobs=args.jobs)
    doc = artifact_document("study", config.to_dict(), report.to_dict(),
                            seed=config.seed)
    write_artifact(args.out, doc)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            csv.writer(fh).writerows(report_to_csv_rows(report))
    for ci, cell in enumerate(report.cells):
        pretty = {k: f"{v.mean:.3g} ({v.sd:.3g})"
                  for k, v in cell.summaries.items()}
        print(f"cell {ci}: {pretty}")
    return EXIT_OK


def _cmd_report(args) -> int:
    from .artifacts import confidence_set_from_dict
    from .fitters import GAUSSIAN

    doc = read_artifact(args.artifact, expect_kind="selection")
    cs = confidence_set_from_dict(doc["outputs"]["confidence_set"], GAUSSIAN)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    models_path = out_dir / "models.csv"
    with models_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["size", "p_value", "mains", "squares", "interactions"])
        for km in cs.models():
            spec = km.spec
            writer.writerow([
                spec.size, repr(km.p_value),
                " ".join(str(v) for v in sorted(spec.mains)),
                " ".join(str(v) for v in sorted(spec.squares)),
                " ".join(f"{a}:{b}" for a, b in sorted(spec.interactions)),
            ])

    freq_path = out_dir / "frequencies.csv"
    freqs = variable_frequencies(cs)
    with freq_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["term", "frequency"])
        for term, value in sorted(freqs.items(), key=lambda kv: -kv[1]):
            writer.writerow([term_label(term), repr(value)])

    sub_path = out_dir / "substitution.csv"
    table = substitution_table(cs)
    with sub_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        labels = [term_label(t) for t in table.terms]
        writer.writerow(["A\\B"] + labels)
        for i, row_label in enumerate(labels):
            row = [row_label]
            for j in range(len(labels)):
                v = table.values[i, j]
                row.append("" if math.isnan(v) else f"{v:.4f}")
            writer.writerow(row)

    print(f"wrote {models_path}, {freq_path}, {sub_path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modelsets",
        description="Confidence sets of low-dimensional regression models",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dgp", help="generate a synthetic dataset")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--csv")
    p.set_defaults(fn=_cmd_dgp)

    p = sub.add_parser("reduce", help="run the hypercube reduction")
    p.add_argument("--config", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_reduce)

    p = sub.add_parser("explore", help="scan squared / interaction terms")
    p.add_argument("--config", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--reduction", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--interactive", action="store_true",
                   help="serve the review session protocol and block "
                        "until the reviewer finalizes")
    p.add_argument("--terminal", action="store_true",
                   help="review candidates with Y/N prompts on the terminal")
    p.add_argument("--script", help="JSON file of recorded decisions")
    p.add_argument("--port", type=int, default=0)
    p.add_argument("--token", default=None)
    p.add_argument("--ui-dir", default=None,
                   help="static directory served at / (the browser UI build)")
    p.set_defaults(fn=_cmd_explore)

    p = sub.add_parser("select", help="test all low-dimensional submodels")
    p.add_argument("--config", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--reduction", required=True)
    p.add_argument("--exploration")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_select)

    p = sub.add_parser("simulate", help="run a Monte Carlo study")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--csv")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(fn=_cmd_simulate)

    p = sub.add_parser("report", help="render confidence-set tables")
    p.add_argument("--artifact", required=True)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(fn=_cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except StatisticalError as exc:
        print(f"statistical degeneracy: {exc}", file=sys.stderr)
        return EXIT_STATISTICAL
    except ModelSetsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNEXPECTED


if __name__ == "__main__":
    sys.exit(main())
