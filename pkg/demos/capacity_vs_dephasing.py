"""Quantum capacity against dephasing strength for growing input alphabets.

Each column fixes the number of Fock levels used for encoding (N+1 levels,
menu 0..N).  At gamma=0 the channel is the identity and the optimizer must
recover log2(N+1) exactly; as gamma grows the off-diagonals die and every
curve collapses toward zero -- more levels only help while coherence
between them survives.
"""

import numpy as np

from kerrdeph import ChannelParams, optimize_capacity

LAM = 0.2
GAMMAS = [0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0]
NS = [1, 2, 3, 4]

print(f"quantum capacity Q (bits), lam={LAM}, omega=1\n")
header = "gamma".rjust(7) + "".join(f"   N={N}  " for N in NS)
print(header)
print("-" * len(header))
for gamma in GAMMAS:
    p = ChannelParams(gamma=gamma, lam=LAM, omega=1.0)
    cells = []
    for N in NS:
        res = optimize_capacity(p, N, starts=4)
        mark = " " if res.converged else "?"
        cells.append(f"{res.Q:7.4f}{mark}")
    print(f"{gamma:7.2f}" + "".join(cells))
print("\n? = KKT certificate above the 1e-9 target: at strong dephasing the")
print("    optimum parks ~1e-12 of mass on high levels, where the gradient")
print("    itself is only computable to ~1e-8; Q is still good to ~1e-8.")

print()
for N in NS:
    anchor = optimize_capacity(ChannelParams(gamma=0.0, lam=LAM, omega=1.0), N)
    print(f"  N={N}: Q(0) - log2(N+1) = {anchor.Q - np.log2(N + 1):+.2e},  "
          f"optimal p = {np.round(anchor.pvec, 4)}")
