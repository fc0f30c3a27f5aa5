"""
Critical number of signals
==========================

Worst-case critical M versus the pit reflectivity for an ideal memory.
"""

# %%
import numpy as np

from qreading import critical_curve, critical_m_worst_case

grid = np.linspace(0, 0.99, 60)
curves = {ns: critical_curve(ns, grid) for ns in (0.01, 0.1, 0.5)}

for ns, c in curves.items():
    m = c.m_real()
    print(f"N_S={ns:<5g} M at r0=0: {m[0]:8.2f}   at r0=0.99: {m[-1]:10.1f}")

# %%
# One TMSV pair per cell is already enough over most of the range at N_S = 1.
ones = sum(p.m_int == 1 for p in critical_curve(1.0, grid).points)
print(f"N_S=1: m_int = 1 on {ones} of {len(grid)} grid points")

# %%
# The worst bath temperature moves with the signal energy.
for ns in (0.01, 0.1, 0.5):
    cp = critical_m_worst_case(0.5, ns)
    print(f"N_S={ns:<5g} r0=0.5: M={cp.m_real:.3f} -> {cp.m_int} signals, worst N_B={cp.nb_worst:.4f}")

# %%
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

fig, ax = plt.subplots()
for ns, c in curves.items():
    ax.semilogy(c.r0(), c.m_real(), label=f"N_S = {ns:g}")
ax.set_xlabel("r0")
ax.set_ylabel("critical M")
ax.legend()
fig.savefig("critical_curves.png")
