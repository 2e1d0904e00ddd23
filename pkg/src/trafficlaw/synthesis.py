"""Network and session generation.

A network is exactly ``n`` uniform nodes on the torus of area ``n``.  Each
source ``k`` gets one session: a friend count ``q ~ Zipf(i)`` on
``{1..n-1}``, ``q`` anchor points drawn from the population-distance radial
law around the source, the nodes nearest to those anchors (friends), and a
destination count ``r ~ Zipf(d)`` on ``{1..q}``.  The destinations are the
first ``r`` friends.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .randmodels import (
    NETWORK_STREAM,
    SESSION_STREAM,
    ExponentParams,
    ZipfPmf,
    radial_sampler_build,
    stream,
    zipf_sample,
)
from .torus import GridIndex, TorusDomain, as_coords, nearest_nodes, torus_distances


@dataclass(frozen=True)
class Network:
    domain: TorusDomain
    nodes: np.ndarray = field(repr=False)
    index: GridIndex = field(repr=False)
    seed: int | None = None

    @classmethod
    def from_nodes(cls, nodes, domain: TorusDomain, seed=None) -> "Network":
        coords = domain.wrap(as_coords(nodes))
        coords.setflags(write=False)
        return cls(domain, coords, GridIndex.build(coords, domain), seed)

    @property
    def n(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True)
class Session:
    source: int
    q: int
    anchors: np.ndarray = field(repr=False)
    friends: np.ndarray = field(repr=False)
    r: int
    destinations: np.ndarray = field(repr=False)

    def session_points(self, net: Network) -> np.ndarray:
        """Source position followed by all ``q`` anchors."""
        return np.vstack((net.nodes[self.source], self.anchors))

    def destination_geometry(self, net: Network) -> np.ndarray:
        """Source position followed by the anchors of the ``r`` destinations."""
        return np.vstack((net.nodes[self.source], self.anchors[: self.r]))


def generate_network(n: int, seed: int = 0) -> Network:
    if n < 2:
        raise ValueError(f"degenerate network: n={n} (need n >= 2)")
    domain = TorusDomain.for_n(n)
    rng = stream(seed, NETWORK_STREAM)
    return Network.from_nodes(rng.random((n, 2)) * domain.side, domain, seed)


def session_counts(rng, q_pmf: ZipfPmf, r_pmf: ZipfPmf) -> tuple[int, int]:
    """Draw ``(q, r)``; ``r_pmf`` must cover ``{1..q_pmf.support_max}``."""
    q = zipf_sample(q_pmf, rng)
    r = zipf_sample(r_pmf.truncated(q), rng)
    return q, r


def draw_session_geometry(net: Network, source: int, params: ExponentParams, seed: int,
                          count: str = "q"):
    """Draw ``(q, r, anchors)`` for one source from its own stream.

    ``count="r"`` draws only the first ``r`` anchors.  The anchors are a
    prefix of the ``count="q"`` draw, so the destination geometry is the
    same either way.
    """
    n = net.n
    q_pmf = ZipfPmf.build(params.i, n - 1)
    r_pmf = ZipfPmf.build(params.d, n - 1)
    rng = stream(seed, SESSION_STREAM, source)
    q, r = session_counts(rng, q_pmf, r_pmf)
    m = q if count == "q" else r
    sampler = radial_sampler_build(net.nodes[source], params.s, net.domain)
    u = rng.random((m, 2))
    anchors = net.domain.wrap(net.nodes[source] + sampler.offsets(u))
    return q, r, anchors


def build_session(net: Network, source: int, q: int, anchors, r: int) -> Session:
    """Assemble a session from given anchors by snapping each to its nearest node."""
    anchors = net.domain.wrap(as_coords(anchors))
    if len(anchors) != q:
        raise ValueError(f"expected {q} anchors, got {len(anchors)}")
    if not 1 <= r <= q:
        raise ValueError(f"destination count {r} outside [1, {q}]")
    friends = nearest_nodes(anchors, net.index, net.nodes, net.domain)
    return Session(int(source), int(q), anchors, friends, int(r), friends[:r].copy())


def generate_session(net: Network, source: int, params: ExponentParams, seed: int = 0) -> Session:
    if not 0 <= source < net.n:
        raise ValueError(f"source {source} outside [0, {net.n})")
    params.require_uniform()
    q, r, anchors = draw_session_geometry(net, source, params, seed)
    return build_session(net, source, q, anchors, r)


def generate_sessions(net: Network, params: ExponentParams, seed: int = 0) -> list[Session]:
    return [generate_session(net, k, params, seed) for k in range(net.n)]


def mean_anchor_snap_distance(net: Network, sessions) -> float:
    """Mean torus distance between each anchor and the friend it snapped to."""
    sessions = list(sessions)
    if not sessions or sum(len(s.anchors) for s in sessions) == 0:
        raise ValueError("no sessions")
    anchors = np.vstack([s.anchors for s in sessions])
    friends = np.concatenate([s.friends for s in sessions])
    return float(np.mean(torus_distances(anchors, net.nodes[friends], net.domain)))
