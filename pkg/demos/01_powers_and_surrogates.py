# %% [markdown]
# # Odd-ratio powers and smooth |x|
#
# Feedback terms like `sig(x)^p` keep the sign of `x`, so negative bases are
# fine as long as the exponent is a ratio of odd integers. The smooth
# surrogates stand in for `|w|` inside the control and adaptive laws; each one
# sits below `|w|` by a bounded amount.

# %%
import numpy as np

from fxtheli.powmath import (L8A_DEFICIT_CONSTANT, OddRational, gamma_fn, pow_oo, smooth_abs_l7,
                             smooth_abs_l8a, smooth_abs_l8b)

p = OddRational.parse("3/5")
for x in (-8.0, -2.0, 0.0, 2.0):
    print(f"sig({x:+.1f})^{p} = {pow_oo(x, p):+.6f}")

# %% [markdown]
# The gamma function is a Lanczos approximation; the reflection identity
# `Γ(l)Γ(1−l) = π/sin(πl)` is a convenient self-check.

# %%
for l in (0.1, 0.25, 0.5):
    lhs = gamma_fn(l) * gamma_fn(1 - l)
    print(f"l={l:4.2f}  Γ(l)Γ(1-l)={lhs:.12f}  π/sin(πl)={np.pi / np.sin(np.pi * l):.12f}")

# %% [markdown]
# Largest gap between `|v|` and each surrogate (δ = ε = 1), found on a grid.
# The arctan gap keeps growing with `v` and only approaches its limit.

# %%
v = np.logspace(-4, 3, 20001)
gaps = {
    "rational, two widths": v - np.array([smooth_abs_l7(x, 1.0, 1.0) for x in v]),
    "rational, one width": v - np.array([smooth_abs_l8a(x, 1.0) for x in v]),
    "arctan": v - np.array([smooth_abs_l8b(x, 1.0) for x in v]),
}
limits = (1 / np.sqrt(2), L8A_DEFICIT_CONSTANT, 2 / np.pi)
for (name, g), lim in zip(gaps.items(), limits):
    print(f"{name:22s} max gap {g.max():.6f} at v={v[g.argmax()]:.4g}  (limit {lim:.6f})")
