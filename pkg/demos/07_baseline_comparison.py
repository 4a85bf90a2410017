# %% [markdown]
# # Baseline comparison
#
# The full method against the same loop with a constant wide funnel and
# against plain backstepping. Only the full method is held to the funnel;
# the other two are measured against it after the fact.

# %%
from dataclasses import replace

from fxtheli import Baseline, compute_metrics, load_scenario
from fxtheli.sim import run_many

base = load_scenario("sim2")
scs = [replace(base, baseline=b, name=b.value) for b in (Baseline.NONE, Baseline.NO_PF, Baseline.CFB)]
results = run_many(scs)
for sc in scs:
    tr, err = results[sc.name]
    if err is not None:
        print(f"{sc.name:6s} stopped: {err}")
        continue
    m = compute_metrics(tr, sc)
    print(f"{sc.name:6s} outside funnel {m.envelope_violations:6d} samples, "
          f"overshoot {m.overshoot:.4f}, energy {m.control_energy:.3f}, peak {m.peak_input:.3f}")
