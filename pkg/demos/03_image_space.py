# %% [markdown]
# # Telling transforms apart from arbitrary fields
#
# A function of (x, y, b, r) is the image of some signal under the Gaussian
# transform exactly when it is annihilated by two first-order
# Cauchy-Riemann type operators (c1, c2) and two second-order structural
# operators (s1, s2).  We measure all four on a five-slice stencil: spectral
# derivatives in x and y, central differences in b and r.

# %%
import numpy as np

from metamorphism.fiducial import FiducialSpec, from_spec, gaussian
from metamorphism.image_space import (
    characterize,
    parabolic_residual,
    residual_report,
    to_complex_chart,
    transform_stack,
)
from metamorphism.signals import Context, SampledSignal, hermite
from metamorphism.transform import covariant_fast, metamorphism

ctx = Context()
phi = gaussian(ctx)

stack = transform_stack(hermite(3), phi, b0=0.0, r0=1.0, h_b=1e-3, h_r=1e-3, ctx=ctx)
half = transform_stack(hermite(3), phi, b0=0.0, r0=1.0, h_b=5e-4, h_r=5e-4, ctx=ctx)
report = residual_report(stack, half)
for key in ("c1", "c2", "s1", "s2", "parabolic"):
    ratio = report.get("halving_ratio", {}).get(key)
    print(f"{key:10s} {report[key]:.2e}" + (f"   halving ratio {ratio:.2f}" if ratio else ""))

# %% [markdown]
# c1 uses only x and y, so it sits at round-off.  The others involve the b
# and r differences and shrink by 4 when the step is halved, which is the
# signature of second-order truncation rather than a real defect.
#
# ## A cubic-phase window
#
# Swap the Gaussian for a window with a cubic phase.  The structural
# conditions hold for any window, but the holomorphy conditions are specific
# to the Gaussian, so c1 should now be large.

# %%
cubic = from_spec(FiducialSpec(0.0, -1.0, 1.0, 1.0, 0.0), ctx)
control = residual_report(transform_stack(hermite(0), cubic, ctx=ctx))
print({k: f"{control[k]:.2e}" for k in ("c1", "s1", "s2")})

# %% [markdown]
# ## The complex chart
#
# With w = b + i r^2 and z = x + w y, the image times a known Gaussian
# multiplier satisfies a parabolic equation in (z, w).  A holomorphic-looking perturbation
# like z^2 breaks it.

# %%
chart = to_complex_chart(transform_stack(phi, phi, ctx=ctx))
print("parabolic residual, genuine image :", parabolic_residual(chart, ctx))
print("after adding z^2                  :", parabolic_residual(chart.perturbed(lambda z, w: z**2), ctx))

# %% [markdown]
# ## Characterize
#
# ``characterize`` runs the checks in order and, if they pass, reconstructs
# the signal and compares it back.  Multiplying a genuine image by x is
# enough to be rejected.

# %%
rng = np.random.default_rng(3)
grid = ctx.grid()
coeffs = rng.normal(size=4) + 1j * rng.normal(size=4)
mix = SampledSignal(grid, sum(c * hermite(n)(grid.points) for n, c in enumerate(coeffs)))

good = characterize(lambda b, r: covariant_fast(mix, phi, b, r, ctx), phi, ctx=ctx)
print("mixture accepted:", good.accepted, " reconstruction error", (good.signal - mix).norm())


def x_times(b, r):
    fld = metamorphism(phi, b, r, ctx).field
    return fld.with_values(fld.mesh()[0] * fld.values)


bad = characterize(x_times, phi, ctx=ctx)
print("x-multiple accepted:", bad.accepted, "|", bad.reason)
