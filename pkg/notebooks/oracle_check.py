"""
Checking the closed forms against brute force
=============================================

Build the channel outputs on a truncated Fock space and compare fidelity,
Chernoff trace and Helstrom error with the Gaussian formulas.
"""

# %%
import math

from qreading import MemoryModel, SignalProfile, chernoff_qs, coherent_fidelity, quantum_bound
from qreading import fock
from qreading.certify import OracleSweep, run_oracle_sweep

mem, ns = MemoryModel(0.5, 0.8, 0.1), 1.0
epr = [fock.apply_loss(fock.tmsv_ket(ns, 40), r, mem.nb) for r in (mem.r0, mem.r1)]
coh = [fock.apply_loss(fock.coherent_ket(math.sqrt(ns), 40), r, mem.nb) for r in (mem.r0, mem.r1)]

print("fidelity  ", fock.uhlmann_fidelity(*coh), coherent_fidelity(mem, ns))
print("Q_0.5     ", fock.chernoff_trace(*epr, 0.5), chernoff_qs(mem, ns, 0.5))
print("Helstrom  ", fock.helstrom_error(*epr), "<=", quantum_bound(mem, SignalProfile(1, ns)).q_bound)

# %%
# A reduced sweep; the full one is the default ``OracleSweep()``.
report = run_oracle_sweep(OracleSweep(ns_values=(0.1, 0.5), nb_values=(0.0, 0.1)))
for name, q in report.quantities.items():
    print(f"{name:20s} max deviation {q.max_deviation:.2e}  (tol {q.tol:g})")
print("passed:", report.passed)
