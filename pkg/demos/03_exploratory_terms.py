"""Scan screened variables for squared and interaction terms.

The response here truly contains x1^2 and x2*x3 on top of linear
effects.  Each candidate term is added (one at a time) to a regression
on all screened main effects; extreme statistics flag candidates.  The
decision to keep a term is the analyst's: this script replays recorded
answers that keep only the planted terms.
"""

import numpy as np

from modelsets import (
    Dataset,
    GAUSSIAN,
    ModelSpec,
    ScriptedDecisionSource,
    exploratory_phase,
    interaction_plot_data,
    model_selection_phase,
)

rng = np.random.default_rng(7)
n = 150
x = rng.normal(size=(n, 8))
y = (2 * x[:, 0] + 2 * x[:, 1] + 2 * x[:, 2]
     + x[:, 0] ** 2 + 1.5 * x[:, 1] * x[:, 2]
     + 0.5 * rng.normal(size=n))
dataset = Dataset(X=x, family=GAUSSIAN,
                  names=tuple(f"x{j}" for j in range(1, 9)), y=y)
screened = [1, 2, 3, 4, 5]

# first, look at what the scan suggests (silent mode keeps everything)
kept_sq, kept_in, candidates = exploratory_phase(dataset, screened, signif=0.01)
print("scan suggested:")
for c in candidates:
    print(f"  {c.label:>8}  statistic {c.test_statistic:+.2f}  p {c.p_value:.2g}")

# the same decisions an analyst would make at the prompt, recorded
answers = {c.key: c.key in ("sq:1", "int:2:3") for c in candidates}
kept_sq, kept_in, candidates = exploratory_phase(
    dataset, screened, signif=0.01,
    decision_source=ScriptedDecisionSource(answers),
)
print(f"\nkept squared terms: {kept_sq}; kept interactions: {kept_in}")

# plot data for the kept interaction, as the browser client renders it
plot = interaction_plot_data(dataset, 2, 3)
low = sum(1 for g in plot.group if g == "low")
print(f"interaction plot: {len(plot.x)} points, {low} in the low-x3 group")

comprehensive = ModelSpec(
    mains=frozenset(screened),
    squares=frozenset(kept_sq),
    interactions=frozenset(kept_in),
)
print(f"comprehensive model now has {comprehensive.size} terms")

cs = model_selection_phase(dataset, comprehensive, signif=0.01, model_size=5)
best_size = min(cs.by_size)
print(f"smallest well-fitting models (size {best_size}):")
for km in cs.by_size[best_size][:5]:
    spec = km.spec
    print(f"  mains {sorted(spec.mains)}, squares {sorted(spec.squares)}, "
          f"interactions {sorted(spec.interactions)}  (p {km.p_value:.3f})")
