# %% [markdown]
# # Tracking run
#
# The shipped `sim2` scenario tracks a slow sinusoid in elevation with a
# sinusoidal disturbance, a 1.2 s deadline and a ±0.01 rad steady band.
# The run takes roughly ten seconds.

# %%
import numpy as np

from fxtheli import compute_metrics, load_scenario, run

sc = load_scenario("sim2")
tr = run(sc)
m = compute_metrics(tr, sc)
print(f"{len(tr)} samples, final e1 = {m.final_e1:+.2e} rad")
for k, v in m.as_dict().items():
    print(f"  {k:24s} {v:.6g}")

# %% [markdown]
# Error and funnel at a few instants.

# %%
for t in (0.0, 0.3, 0.6, 0.9, 1.2, 5.0, 10.0):
    i = int(round(t / sc.dt))
    print(f"t={tr.t[i]:5.2f}  K_l={tr.k_l[i]:+.4f}  e1={tr.e1[i]:+.4f}  K_u={tr.k_u[i]:+.4f}  u1={tr.u1[i]:+.3f}")

# %%
tr.to_csv("sim2_trajectory.csv")
print("wrote sim2_trajectory.csv")
