"""A desk-scale Monte Carlo study of screening and coverage.

Runs replications of generate -> screen -> select under the split
regime and reports, per parameter cell, the probability that all
signals survive the screening, the probability that the confidence set
contains the true model, and the mean number of extra models.  The
acceptance suite runs the full-size version of this study.
"""

from modelsets import Cell, DgpConfig, StudyConfig, run_study
from modelsets.harness import report_to_csv_rows
from modelsets.reduction import DecisionRule

config = StudyConfig(
    base_dgp=DgpConfig(d=300, s=5, a=3, n=100, seed=0, rho=0.9,
                       sig_strength=1.0, intercept=5.0),
    cells=(Cell(rho=0.9, sig_strength=1.0), Cell(rho=0.5, sig_strength=1.0)),
    replications=20,
    split=(70, 30),
    rules=(DecisionRule.top_k(2), DecisionRule.threshold(0.001)),
    signif_select=0.01,
    model_size=5,
    methods=("cb", "lasso"),
    seed=20240101,
)

report = run_study(config, n_jobs=2)
for i, cell_report in enumerate(report.cells):
    cell = cell_report.cell
    print(f"cell {i}: rho={cell.rho}, signal={cell.sig_strength}")
    for key, s in cell_report.summaries.items():
        print(f"  {key:>18}: {s.mean:.3f} (sd {s.sd:.3f}, n {s.n})")

rows = report_to_csv_rows(report)
print("\nCSV layout:", rows[0])
print("first row:  ", rows[1])
