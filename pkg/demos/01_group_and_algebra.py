# %% [markdown]
# # The shear-squeeze-rotation group in coordinates
#
# An element is a tuple (s, x, y, b, r) with r > 0.  The first three
# coordinates form a Heisenberg group, (b, r) an ax+b group acting on the
# (x, y) plane.  The 4x4 matrix realization turns the group law into
# matrix multiplication, which gives an easy oracle.

# %%
import numpy as np

from metamorphism import group as G
from metamorphism.representations import derived_rep_apply, schrodinger_apply
from metamorphism.signals import Context, hermite, inner_product

rng = np.random.default_rng(1)
g1 = G.GroupElement(*rng.uniform(-1, 1, 4), r=1.7)
g2 = G.GroupElement(*rng.uniform(-1, 1, 4), r=0.4)
print("g1 * g2         =", (g1 * g2).as_array())
print("via matrices    =", G.from_matrix(G.to_matrix(g1) @ G.to_matrix(g2)).as_array())
print("g1 * g1^-1      =", (g1 * G.inverse(g1)).as_array())

# %% [markdown]
# The left and right Haar densities differ by the modular function 1/r^2,
# so the group is not unimodular.

# %%
left, right, mod = G.measures(g1)
print(f"left {left:.4f}  right {right:.4f}  modular {mod:.4f}  1/r^2 {1 / g1.r**2:.4f}")

# %% [markdown]
# ## Lie algebra
#
# Five generators S, X, Y, B, R.  The brackets can be read off the
# generator matrices; the derived Schrödinger-type action reproduces them
# exactly on polynomial-times-Gaussian signals.

# %%
for a, b in [("X", "Y"), ("X", "R"), ("Y", "R"), ("Y", "B"), ("R", "B")]:
    ma, mb = G.generator_matrix(a), G.generator_matrix(b)
    c = G.bracket(G.AlgebraVector.basis(a), G.AlgebraVector.basis(b))
    same = np.allclose(ma @ mb - mb @ ma, G.algebra_matrix(c))
    print(f"[{a},{b}] = {c}   matrices agree: {same}")

ctx = Context()
f = hermite(2)
d = lambda name, h: derived_rep_apply(name, h, ctx)
comm = d("X", d("Y", f)) - d("Y", d("X", f))
print("[dX, dY] f - dS f has norm", (comm - d("S", f)).norm())

# %% [markdown]
# Two second-order combinations vanish identically in this representation.
# They are what later turns into the Cauchy-Riemann type conditions on the
# transformed side.

# %%
for n in range(4):
    f = hermite(n)
    q1 = d("X", d("X", f)) + 2 * d("S", d("B", f))
    q2 = d("X", d("Y", f)) + d("Y", d("X", f)) + 2 * d("S", d("R", f))
    print(f"hermite({n}):  |X^2 + 2SB| = {q1.norm():.1e}   |XY + YX + 2SR| = {q2.norm():.1e}")

# %% [markdown]
# The group action itself is unitary and stays inside the exact family.

# %%
g = G.GroupElement(0.3, -0.5, 0.8, 0.6, 1.4)
h = schrodinger_apply(g, hermite(3), ctx)
print("norm after action:", h.norm())
print("<rho(g) H3, rho(g) H1> =", inner_product(h, schrodinger_apply(g, hermite(1), ctx)))
