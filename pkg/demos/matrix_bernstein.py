"""Matrix Bernstein experiment with a Gaussian tail fit.

Sums of n bounded independent Hermitian summands: the normalized mean
deviation E||Z - EZ|| / sqrt((v + M^2) ln d) stays bounded as d grows. The
fitted tail constant is reported only; its true value is not known.
"""

from qmsbounds.concentration import bernstein_sweep, gaussian_tail_fit

for ensemble in ("diagonal", "dense"):
    records, slope = bernstein_sweep((2, 4, 8, 16, 32, 64), n=50, trials=200,
                                     ensemble=ensemble)
    print(f"\n{ensemble} summands: log-log slope of ratio against d = {slope:+.4f}")
    print("  d   E||Z-EZ||       v     ratio   tail constant")
    for r in records:
        c = gaussian_tail_fit(r.norms, r.v, r.bound)
        print(f" {r.d:2d}   {r.mean_norm:8.3f}  {r.v:7.2f}  {r.ratio:6.3f}   {c:.4f}")
