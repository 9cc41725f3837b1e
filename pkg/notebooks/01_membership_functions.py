"""
Membership functions
====================

A neo-fuzzy synapse fuzzifies one input with a bank of membership
functions laid out on [0, 1]. This script draws the triangular partition
and B-splines of increasing order on the same centers, and checks that each
family sums to one everywhere.
"""

# %%
import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from enfn.membership import MembershipGrid, make_uniform_centers

xs = np.linspace(0, 1, 501)

# %%
# Triangular functions on five uniform centers. Any input activates at most
# two neighbours.
tri = make_uniform_centers(5)
mu = tri.activations(xs)
print("triangular:", mu.shape, "max |sum - 1| =", np.abs(mu.sum(axis=1) - 1).max())

# %%
# B-splines of order q use the same centers as knots, with the end knots
# repeated so the partition of unity holds up to the boundary. Order 2 is the
# triangular family again; order q yields h + q - 2 functions.
fig, axes = plt.subplots(1, 4, figsize=(14, 3), sharey=True)
for ax, q in zip(axes, (1, 2, 3, 4)):
    grid = make_uniform_centers(5, kind="bspline", degree=q)
    b = grid.activations(xs)
    ax.plot(xs, b)
    ax.set_title(f"order q={q}: {grid.size} functions")
    print(f"q={q}: max |sum - 1| = {np.abs(b.sum(axis=1) - 1).max():.1e}")
fig.tight_layout()
fig.savefig("membership_functions.png", dpi=100)

# %%
# Centers do not have to be uniform.
skewed = MembershipGrid((0.0, 0.1, 0.25, 0.5, 1.0), kind="bspline", degree=3)
print("skewed grid, x=0.2:", np.round(skewed.activations(0.2), 4))
