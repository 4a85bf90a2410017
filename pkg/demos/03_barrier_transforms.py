# %% [markdown]
# # Barrier transforms
#
# The transform maps an error inside the funnel to an unbounded variable `z1`
# that blows up at the walls. Smaller exponents `m = n` flatten the middle of
# the map, which is what keeps control effort low away from the boundary.

# %%
import numpy as np

from fxtheli.ubf import UbfConfig, transform_raw

k_l, k_u = -0.05, 0.05
e = np.linspace(-0.049, 0.049, 9)
for m in ("1", "1/3", "1/7"):
    cfg = UbfConfig(1.0, 1.0, m, m, "barrier")
    print(f"m=n={m:4s}", " ".join(f"{transform_raw(x, k_l, k_u, 0, 0, cfg)[0]:+9.2f}" for x in e))
cfg = UbfConfig(1.0, 1.0, variant="log")
print("log     ", " ".join(f"{transform_raw(x, k_l, k_u, 0, 0, cfg)[0]:+9.2f}" for x in e))

# %% [markdown]
# The unified variant with zero weights is the identity, so the same
# controller also covers the unconstrained case.

# %%
cfg = UbfConfig(0.0, 0.0, variant="unified")
print([transform_raw(x, k_l, k_u, 0, 0, cfg) for x in (-1.0, 0.3)])

# %% [markdown]
# Slope `η1` against a central difference.

# %%
cfg = UbfConfig(0.2, 0.2, "1/7", "1/7", "barrier")
for x in (-0.04, 0.0, 0.03):
    z, eta1, _ = transform_raw(x, k_l, k_u, 0, 0, cfg)
    h = 1e-7
    fd = (transform_raw(x + h, k_l, k_u, 0, 0, cfg)[0] - transform_raw(x - h, k_l, k_u, 0, 0, cfg)[0]) / (2 * h)
    print(f"e1={x:+.3f}  eta1={eta1:.6f}  fd={fd:.6f}")
