"""Undertuned lasso as a forward-selection comparator.

The lasso path is walked from the heaviest penalty downward and read
off at the first point with at least as many active variables as the
hypercube screening retained.  Used this way it is a screening device,
not a predictor.
"""

from modelsets import Dataset, DgpConfig, dgp, lasso_path, reduction_phase, undertuned_select

config = DgpConfig(d=1000, s=5, a=3, n=100, seed=2018, rho=0.9,
                   sig_strength=1.0, intercept=5.0)
data = dgp(config)
dataset = Dataset.from_generated(data)
rows = dataset.rows(slice(0, 70))

trace = reduction_phase(rows, seed=1012)
retained = set(trace.retained)
print(f"hypercube screening retained {len(retained)}: {sorted(retained)}")

path = lasso_path(rows.X, rows.y)
print(f"lasso path: {len(path.lambdas)} penalties, "
      f"active counts 0..{path.nonzero_counts.max()}")

selected = set(undertuned_select(path, len(retained)))
print(f"undertuned lasso selected {len(selected)}: {sorted(selected)}")

truth = set(data.true_idx)
print(f"\nsignals:            {sorted(truth)}")
print(f"in both selections: {sorted(retained & selected)}")
print(f"signals caught by screening: {len(truth & retained)}/5, "
      f"by lasso: {len(truth & selected)}/5")
