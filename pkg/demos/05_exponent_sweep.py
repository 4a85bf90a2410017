# %% [markdown]
# # Exponent sweep
#
# Same loop, four barrier exponents and the log barrier, on the wider
# `sim1` funnel. Every run should stay inside the funnel; control energy and
# peak input are the numbers to compare. Five ten-second runs take about a
# minute on one core; pass `jobs=` to `run_many` to spread them out.

# %%
from fxtheli.cli import parse_exponents, sweep_scenarios
from fxtheli.config import load_scenario
from fxtheli.sim import compute_metrics, run_many

base = load_scenario("sim1")
scs = sweep_scenarios(base, parse_exponents("1,1/3,1/5,1/7"))
results = run_many(scs, jobs=1)

print(f"{'scenario':36s} {'viol':>4s} {'energy':>12s} {'peak |u1|':>10s}")
for sc in scs:
    tr, err = results[sc.name]
    if err is not None:
        print(f"{sc.name:36s} failed: {err}")
        continue
    m = compute_metrics(tr, sc)
    print(f"{sc.name:36s} {m.envelope_violations:4d} {m.control_energy:12.3f} {m.peak_input:10.3f}")
