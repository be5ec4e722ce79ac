"""Contraction coefficients of a semigroup snapshot Phi = T_{t_cb/8}.

A searched lower bound on the entropy contraction coefficient is placed
between lambda(Phi)^2, where lambda is the L2 contraction, and the k_cb upper
bound 1 - 1/(2 k_cb). The searched ratio peaks near equilibrium.
"""

from qmsbounds.verify import consistency_chain, standard_models

print(f"{'model':18s} lambda   lambda^2  estimate  1-1/(2k)  k_cb")
for L in standard_models():
    rec = consistency_chain(L)
    print(f"{rec.model:18s} {rec.l2:.4f}   {rec.l2 ** 2:.4f}    {rec.estimate:.4f}    "
          f"{rec.upper:.4f}    {rec.k_cb}")
