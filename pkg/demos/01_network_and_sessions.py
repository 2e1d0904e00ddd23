"""Build one network and look at its sessions.

Run: python3 demos/01_network_and_sessions.py
"""
import numpy as np

from trafficlaw.randmodels import ExponentParams
from trafficlaw.synthesis import generate_network, generate_sessions, mean_anchor_snap_distance

# %% A network is n uniform nodes on a torus of area n, so density is 1.
net = generate_network(2000, seed=1)
print(f"n={net.n}  side={net.domain.side:.3f}")

# %% Every node sources one session. Heavier influence tails (small i) give
# some nodes very many friends; large s keeps friends close to the source.
for params in (ExponentParams(i=0.5, s=0.5, d=0.5), ExponentParams(i=2.0, s=3.0, d=3.0)):
    sessions = generate_sessions(net, params, seed=1)
    q = np.array([s.q for s in sessions])
    r = np.array([s.r for s in sessions])
    print(f"\n{params}")
    print(f"  friends q: median {np.median(q):.0f}, max {q.max()}")
    print(f"  destinations r: total {r.sum()}, max {r.max()}")
    # anchors snap to their nearest node; at density 1 that costs about 1/2
    print(f"  mean anchor snap distance {mean_anchor_snap_distance(net, sessions):.3f}")
