"""Double-commutator generators from SU(2) representations.

L(x) = -sum [d(g), [d(g), x]] for g in a generating set. For spin 1/2 with
generators X, Y the spectrum is {0, 4, 4, 8}; adding Z gives {0, 8, 8, 8}.
"""

import numpy as np

from qmsbounds import mlsi_lower_bounds, su2_transference
from qmsbounds.zoo import su2_representation

for gens in (("X", "Y"), ("X", "Y", "Z")):
    L = su2_transference(0.5, gens)
    spec = np.sort(np.linalg.eigvals(L.generator).real)
    print(f"spin 1/2, generators {''.join(gens)}: spectrum {np.round(spec, 10)}")

for j in (0.5, 1.0, 1.5, 2.0, 2.5):
    D = su2_representation(j)
    err = np.abs(D["X"] @ D["Y"] - D["Y"] @ D["X"] - 2 * D["Z"]).max()
    rep = mlsi_lower_bounds(su2_transference(j), decay_states=0)
    print(f"j = {j}: bracket error {err:.1e}, gap {rep.lam:.4f}, t_cb {rep.t_cb:.4f}, "
          f"best lower bound {rep.best_lower:.4f}")
