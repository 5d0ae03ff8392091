# %% [markdown]
# # Windows defined by what kills them
#
# Pick a vector E = (E_s, E_x, E_y, E_b, E_r) in the Lie algebra and ask
# for windows phi with d rho(E) phi = 0.  In the Schrödinger-type model that
# is the first-order ODE
#
#     (E_r u - i E_y) phi' + pi hbar (E_b u^2 + 2 i E_x u - 2 E_s) phi + (E_r / 2) phi = 0.
#
# Two families come out:
#
# * E_r = 0: a Gaussian envelope with a cubic phase (an Airy-beam shape);
# * E_r != 0: a power of (E_r u - i E_y) times a Gaussian with a linear chirp.
#
# The Gaussian is reached in both.

# %%
import math

import numpy as np

from metamorphism.fiducial import FiducialSpec, InvalidSpecError, annihilation_residual, from_spec, gaussian
from metamorphism.signals import Context, sample

ctx = Context(n=1024, half_width=12.0)
g = sample(gaussian(ctx), ctx.grid()).values

for spec in (FiducialSpec(0.0, -1.0, 1.0, 0.0, 0.0), FiducialSpec(1 / (4 * math.pi), 0.0, 0.0, 2.0, 1.0)):
    phi = from_spec(spec, ctx)
    print(spec, "-> distance from the Gaussian", np.max(np.abs(phi.values - g)))

# %% [markdown]
# Each constructed window is normalized and certified by applying the
# derived operator back to the samples.

# %%
for spec in (
    FiducialSpec(0.3, -2.0, 0.5, -0.7, 0.0),
    FiducialSpec(0.1, 0.2, 0.3, 2.0, 1.0),
    FiducialSpec(-0.4, 1.5, -0.8, -3.0, -2.0),
):
    phi = from_spec(spec, ctx)
    kappa = f", exponent {spec.exponent(ctx.hbar):+.4f}" if spec.E_r else ""
    print(f"{spec}{kappa}: norm {phi.norm():.12f}, residual {annihilation_residual(spec, phi, ctx):.1e}")

# %% [markdown]
# ## Limits
#
# Square integrability needs E_x / E_y < 0 in the cubic family and
# E_b / E_r > 0 in the power family.  Violations are reported, not
# silently patched.

# %%
for spec in (FiducialSpec(0.0, 1.0, 1.0, 0.0, 0.0), FiducialSpec(0.0, 0.0, 1.0, -1.0, 1.0)):
    try:
        from_spec(spec, ctx)
    except InvalidSpecError as exc:
        print(f"{spec}: {exc}")

# %% [markdown]
# In the power family the branch point of (E_r u - i E_y) sits at
# i E_y / E_r.  When it comes close to the real axis the window develops a
# sharp feature, and the finite grid stops resolving it.  The certificate
# degrades accordingly.

# %%
for ey in (1.0, 0.4, 0.2, 0.1, 0.05):
    spec = FiducialSpec(0.0, 0.1, ey, 2.0, 1.0)
    phi = from_spec(spec, ctx)
    print(f"E_y / E_r = {ey:<5}: residual {annihilation_residual(spec, phi, ctx):.1e}")
