"""How fast does the tree over r friend anchors grow with r?

The tree length should grow like sqrt(r) for every separation exponent s.
For s=0 that is visible already at r=16.  For s=3 the anchors have a long
tail (Pr(|X| > t) ~ t^-4); far anchors are isolated and add length that
dies out only like r^-1/4 relative to the sqrt(r) term, so the local slope
creeps down towards 1/2 very slowly.

Run: python3 demos/05_anchor_tree_growth.py   (about a minute)
"""
import numpy as np

from trafficlaw.scaling import anchor_emst_means

R = [16, 64, 256, 1024, 4096, 16384]
for s in (0.0, 3.0):
    means = anchor_emst_means(s, 4096 * 16, R, replicates=16, seed=0)
    local = np.diff(np.log(means)) / np.diff(np.log(R))
    print(f"s={s:g}")
    for r0, r1, slope in zip(R, R[1:], local):
        print(f"  r {r0:5d} -> {r1:5d}: local slope {slope:.3f}")
