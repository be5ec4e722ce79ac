"""Two-atom model where the second-order Rothaus ratio tends to zero.

The BKM metric of 2h at f = diag(1 + eta, 1 - eta) matches
(2/eta) ln((1 + eta)/(1 - eta)) ||h||_2^2 and diverges as eta -> 1, while the
entropy term stays bounded, so no positive Rothaus-type constant exists.
"""

from qmsbounds import rothaus_counterexample

print(" eta      metric (numeric)   metric (closed)   ratio")
for eta in (0.3, 0.5, 0.9, 0.99, 0.999, 0.99999):
    rec = rothaus_counterexample(eta, 0.5)
    print(f"{eta:<8} {rec.metric_numeric:16.8f}  {rec.metric_closed:16.8f}   {rec.ratio:.5f}")
