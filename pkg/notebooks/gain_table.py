"""
Information gain of the EPR transmitter
=======================================

Recompute the gain for six memory configurations and watch how the
advantage grows with the number of signals.
"""

# %%
import numpy as np

from qreading import MemoryModel, SignalProfile, gain
from qreading.reading import REFERENCE_TABLE, check_table

for check, (m, ns, r0, r1, nb, printed) in zip(check_table(), REFERENCE_TABLE):
    print(f"M={m:<7d} N_S={ns:<5g} r0={r0:<6g} r1={r1:<5g} N_B={nb:<5g} "
          f"G={check.gain:.4g} (printed {printed:g}, {check.status})")

# %%
# The fifth row sits just above a rounding boundary: 0.2251 rounds to 0.23.
# Everything else agrees at two significant figures.

# %%
# Gain as a function of M for the first configuration. Once positive it
# stays positive.
mem = MemoryModel(0.5, 0.95, 0.01)
ms = np.unique(np.logspace(0, 3, 40).astype(int))
gs = np.array([gain(mem, SignalProfile(m, 3.5)).gain for m in ms])
print("first M with G > 0:", ms[np.argmax(gs > 0)])

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

fig, ax = plt.subplots()
ax.semilogx(ms, gs)
ax.axhline(0, color="k", lw=0.5)
ax.set_xlabel("M")
ax.set_ylabel("G (bits)")
fig.savefig("gain_vs_m.png")
