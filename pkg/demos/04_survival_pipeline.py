"""The same pipeline on censored survival times.

Survival times follow a Weibull proportional-hazards model; censoring
times are exponential.  Fits maximize the partial likelihood (Efron
tie handling), and subset tests refer twice the log-likelihood
difference to chi-squared.
"""

from modelsets import Dataset, DgpConfig, ModelSpec, dgp
from modelsets import model_selection_phase, reduction_phase
from modelsets.reduction import DecisionRule

config = DgpConfig(d=1000, s=5, a=3, n=150, seed=11, rho=0.9,
                   sig_strength=1.0, response_kind="survival",
                   tau=1.0, kappa=1.0, censor_rate=0.1)
data = dgp(config)
print(f"events: {int(data.status.sum())} of {config.n} "
      f"({100 * (1 - data.status.mean()):.0f}% censored)")

dataset = Dataset.from_generated(data)
screen_rows = dataset.rows(slice(0, 100))
test_rows = dataset.rows(slice(100, 150))

rules = [DecisionRule.top_k(2), DecisionRule.threshold(0.0025)]
trace = reduction_phase(screen_rows, rules=rules, seed=3)
print(f"retained {len(trace.retained)}: {list(trace.retained)}")
print(f"all signals retained: {set(data.true_idx) <= set(trace.retained)}")

comprehensive = ModelSpec(mains=frozenset(trace.retained))
cs = model_selection_phase(test_rows, comprehensive, signif=0.01, model_size=5)
print(f"confidence set: {len(cs)} models")
truth = ModelSpec(mains=frozenset(data.true_idx))
print(f"true model in the set: {cs.contains(truth)}")
