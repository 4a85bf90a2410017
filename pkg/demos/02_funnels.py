# %% [markdown]
# # Error funnels
#
# A funnel starts `Δ` below and `Δ̄` above the initial error and shrinks to
# `[−e∞, ē∞]` exactly at the deadline `Ts`. The four families differ only in
# the shape of the contraction.

# %%
import numpy as np

from fxtheli.envelope import Envelope, EnvelopeConfig, Family

e1_0 = -7 * np.pi / 90
t = np.linspace(0.0, 1.5, 16)
for fam in Family:
    env = Envelope(EnvelopeConfig(fam, Ts=1.2, delta=0.05, delta_bar=0.05, e_inf=0.01,
                                  e_inf_bar=0.01, e1_0=e1_0))
    lower = [env(x).k_l for x in t]
    print(f"{fam.value:5s}", " ".join(f"{k:+.3f}" for k in lower[::3]))

# %% [markdown]
# Width of each funnel over time, written out for plotting elsewhere.

# %%
t = np.linspace(0.0, 1.5, 301)
cols = [t]
for fam in Family:
    env = Envelope(EnvelopeConfig(fam, e1_0=e1_0))
    cols.append(np.array([env(x).k_u - env(x).k_l for x in t]))
np.savetxt("funnel_widths.csv", np.column_stack(cols), delimiter=",",
           header="t," + ",".join(f.value for f in Family), comments="")
print("wrote funnel_widths.csv")
