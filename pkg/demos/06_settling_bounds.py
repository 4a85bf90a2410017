# %% [markdown]
# # Settling-time bounds
#
# For `V̇ <= −μ1 V^p − μ2 V^q + μ3` the gamma-function bound is never worse
# than the classical one, and both hold for every initial value. The oracle
# integrates the worst case exactly, so it shows how tight each bound is.

# %%
import math

from fxtheli import fxtbounds as fb

bp = fb.BoundProblem(1.0, 1.0, 0.0, "1/2", "3/2", 0.5)
print(f"T1 = {fb.t1_bound(bp):.6f} (π√2 = {math.pi * math.sqrt(2):.6f}),  T2 = {fb.t2_classical(bp):.1f}")
for v0 in (1.0, 1e3, 1e6, 1e9):
    t, _ = fb.settle_oracle(bp, v0)
    print(f"  oracle from V0={v0:8.0e}: {t:.6f} s")

# %% [markdown]
# With a perturbation `μ3 > 0` the state only reaches a residual set, and the
# sharper bounds apply when the exponents fit their structure.

# %%
for args in [(1, 1, 0.5, "1/2", "3/2"), (2, 1, 0.1, "3/5", "9/5"), (1, 2, 0.2, "3/5", "5/3")]:
    bp = fb.BoundProblem(*args)
    row = {"residual": fb.residual_bound(bp), "oracle(1e9)": fb.settle_oracle(bp, 1e9)[0],
           "T1": fb.t1_bound(bp), "T2": fb.t2_classical(bp)}
    for name, fn in (("lemma2", fb.t_lemma2), ("lemma3", fb.t_lemma3), ("lemma4", fb.t_lemma4)):
        try:
            row[name] = fn(bp)
        except fb.PreconditionError:
            row[name] = float("nan")
    print(args, " ".join(f"{k}={v:.4f}" for k, v in row.items()))
