"""
Asymptotic regimes of the critical number
=========================================

Compare the solver with the two closed-form approximations: near unit pit
reflectivity and at high signal energy.
"""

# %%
import numpy as np

from qreading import NoAdvantage, asymptote_high_energy, asymptote_r0_to_1, critical_m, critical_m_worst_case

for ns in (0.1, 0.5, 1.0):
    for eps in (1e-1, 1e-2, 1e-3):
        m = critical_m_worst_case(1 - eps, ns).m_real
        print(f"N_S={ns:<4g} eps={eps:<6g} solver={m:10.2f} approx={asymptote_r0_to_1(ns, eps):10.2f} "
              f"ratio={m / asymptote_r0_to_1(ns, eps):.3f}")

# %%
# The ratio settles to a constant as eps shrinks, so the approximation
# captures the 1/eps scaling but not the prefactor.

# %%
for ns in np.linspace(1.0, 2.4, 8):
    m = critical_m(0.0, ns, 0.0)
    approx = asymptote_high_energy(ns)
    print(f"N_S={ns:.2f} solver={m:9.3f} approx={approx:9.3f} rel diff={abs(m - approx) / m:.3f}")

# %%
# Above N_S of about 2.51 no number of signals gives an advantage at r0 = 0.
for ns in (2.50, 2.51, 2.52):
    try:
        print(ns, critical_m(0.0, ns, 0.0))
    except NoAdvantage:
        print(ns, "no advantage")
