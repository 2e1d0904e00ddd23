"""The EMST engine: exactness against an independent oracle and the sqrt(n) law.

Run: python3 demos/02_emst_and_steele.py
"""
import time

import numpy as np

from trafficlaw.emst import emst_kruskal, emst_prim, steele_ratio_check
from trafficlaw.torus import TorusDomain

# %% Dense Prim against sort-and-merge Kruskal on the same points.
rng = np.random.default_rng(0)
dom = TorusDomain(side=20.0)
pts = rng.random((400, 2)) * 20
emst_prim(pts[:3], dom)  # first call compiles the kernel
t = time.perf_counter()
a = emst_prim(pts, dom).total_length
t_prim = time.perf_counter() - t
t = time.perf_counter()
b = emst_kruskal(pts, dom).total_length
t_kruskal = time.perf_counter() - t
print(f"prim {a:.12f} ({t_prim * 1e3:.1f} ms)  kruskal {b:.12f} ({t_kruskal * 1e3:.1f} ms)")

# %% Uniform points on the unit torus: M_n / sqrt(n) settles to a constant.
for n, ratio in steele_ratio_check([256, 1024, 4096], seed=0, replicates=4):
    print(f"n={n:5d}  M_n/sqrt(n) = {ratio:.4f}")
