"""Noncommutative birth-death chain: lower bound against an explicit witness.

The CB return time bound 1/(2 t_cb) is compared with the entropy-production
witness of the flat state I/n, which upper-bounds the MLSI constant. Both
decay roughly like 1/n; at small n the t_cb slope is still preasymptotic.
"""

import numpy as np

from qmsbounds import nc_birth_death, t_cb
from qmsbounds.zoo import bd_decomposition_bound, bd_gamma, bd_upper_witness

beta = 1.0
print(f"two-site off-diagonal rate {bd_gamma(2, beta)[0, 1]:.6f} = 4 cosh(beta/2) "
      f"= {4 * np.cosh(beta / 2):.6f}")

ns = list(range(4, 41, 4))
print("\n n    t_cb      1/(2 t_cb)   witness    n * witness")
tcbs = []
for n in ns:
    tc = t_cb(nc_birth_death(n, beta))
    tcbs.append(tc)
    w = bd_upper_witness(n, beta)
    print(f"{n:2d}  {tc:8.3f}   {1 / (2 * tc):.5f}     {w:.5f}    {n * w:.4f}")

for lo, hi in ((4, 20), (20, 40)):
    sel = [i for i, n in enumerate(ns) if lo <= n <= hi]
    s = np.polyfit(np.log([ns[i] for i in sel]), np.log([tcbs[i] for i in sel]), 1)[0]
    print(f"t_cb slope over n = {lo}..{hi}: {s:.3f}")

diag, exact, schur = bd_decomposition_bound(nc_birth_death(12, beta), 10.0)
print(f"\nn = 12, t = 10: classical part {diag:.3e}, off-diagonal norm {exact:.3e} "
      f"<= Schur test {schur:.3e}")
