"""Cycle graphs: t_cb grows like d^2 and 1/(2 t_cb) sits inside the known sandwich.

The classical fast path evaluates the CP sandwich through the heat kernel of
the diagonal chain, so the sweep over odd d up to 41 takes well under a second.
"""

import numpy as np

from qmsbounds import cyclic_laplacian, spectral_gap, t_cb
from qmsbounds.zoo import classical_mixing_time

dims = list(range(5, 42, 2))
rows = []
for d in dims:
    L = cyclic_laplacian(d)
    tc = t_cb(L)
    rows.append((d, spectral_gap(L), tc, classical_mixing_time(L)))

print(" d    gap        t_cb       mixing time   1/(2d^2) <= 1/(2 t_cb) <= gap")
for d, gap, tc, tmix in rows:
    ok = 1 / (2 * d * d) <= 1 / (2 * tc) <= gap
    print(f"{d:2d}  {gap:.6f}  {tc:10.4f}  {tmix:10.4f}     {ok}")

slope = np.polyfit(np.log(dims), np.log([r[2] for r in rows]), 1)[0]
print(f"\nlog-log slope of t_cb against d: {slope:.4f} (diffusive scaling gives 2)")
