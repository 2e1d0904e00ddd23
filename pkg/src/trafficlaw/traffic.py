"""Monte Carlo estimate of the EMST lower bound on aggregate traffic load."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numba
import numpy as np

from .emst import emst_lengths, emst_prim
from .randmodels import SESSION_STREAM, ExponentParams, LambdaClass, ZipfPmf, lambda_eval, stream
from .synthesis import Network, Session, draw_session_geometry, generate_network, session_counts


@dataclass(frozen=True)
class SimConfig:
    n: int
    params: ExponentParams = field(default_factory=ExponentParams)
    lam: LambdaClass = LambdaClass.CONST
    replicates: int = 1
    seed: int = 0
    q_const_threshold: int = 8

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"degenerate network: n={self.n} (need n >= 2)")
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")
        if self.q_const_threshold < 1:
            raise ValueError("q_const_threshold must be >= 1")


@dataclass(frozen=True)
class TrafficSample:
    n: int
    seed: int
    total_load: float
    emst_sum: float
    psi_const: float
    psi_large: float
    sum_r: int
    wall_time: float

    FIELDS = ("n", "seed", "total_load", "emst_sum", "psi_const", "psi_large", "sum_r", "wall_time")

    def as_row(self) -> tuple:
        return tuple(getattr(self, f) for f in self.FIELDS)


def session_load(session: Session, net: Network, lambda_value: float = 1.0) -> float:
    """``lambda * |EMST(source + destination anchors)|`` for one session."""
    return lambda_value * emst_prim(session.destination_geometry(net), net.domain).total_length


def simulate_replicate(n: int, params: ExponentParams, lam: LambdaClass, seed: int,
                       q_const_threshold: int = 8) -> TrafficSample:
    """One network with one session per node."""
    params.require_uniform()
    t0 = time.perf_counter()
    net = generate_network(n, seed)
    qs = np.empty(n, dtype=np.int64)
    rs = np.empty(n, dtype=np.int64)
    groups = []
    for k in range(n):
        q, r, anchors = draw_session_geometry(net, k, params, seed, count="r")
        qs[k] = q
        rs[k] = r
        groups.append(np.vstack((net.nodes[k], anchors)))
    lengths = emst_lengths(groups, net.domain)
    small = qs <= q_const_threshold
    psi_const = math.fsum(lengths[small])
    psi_large = math.fsum(lengths[~small])
    emst_sum = math.fsum(lengths)
    return TrafficSample(
        n=n, seed=seed,
        total_load=lambda_eval(lam, n) * emst_sum,
        emst_sum=emst_sum, psi_const=psi_const, psi_large=psi_large,
        sum_r=int(rs.sum()), wall_time=time.perf_counter() - t0,
    )


def destination_total(n: int, params: ExponentParams, seed: int) -> int:
    """``sum_r`` of :func:`simulate_replicate` without building any tree.

    Uses the same per-session streams, so the result is identical.
    """
    q_pmf = ZipfPmf.build(params.i, n - 1)
    r_pmf = ZipfPmf.build(params.d, n - 1)
    return sum(session_counts(stream(seed, SESSION_STREAM, k), q_pmf, r_pmf)[1] for k in range(n))


def simulate(cfg: SimConfig, threads: int | None = None) -> list[TrafficSample]:
    """Replicate ``j`` runs with seed ``cfg.seed + j``; output is thread-count independent."""
    if threads is not None:
        numba.set_num_threads(max(1, min(int(threads), numba.config.NUMBA_NUM_THREADS)))
    return [
        simulate_replicate(cfg.n, cfg.params, cfg.lam, cfg.seed + j, cfg.q_const_threshold)
        for j in range(cfg.replicates)
    ]


def simulate_grid(n_values, params: ExponentParams, lam: LambdaClass = LambdaClass.CONST,
                  replicates: int = 1, seed: int = 0, q_const_threshold: int = 8,
                  threads: int | None = None) -> list[TrafficSample]:
    out = []
    for n in n_values:
        cfg = SimConfig(int(n), params, lam, replicates, seed, q_const_threshold)
        out.extend(simulate(cfg, threads))
    return out


def summarize(samples, attr: str = "total_load") -> list[tuple[int, float, float]]:
    """``(n, mean, standard error)`` of one sample attribute, per n."""
    by_n: dict[int, list[float]] = {}
    for s in samples:
        by_n.setdefault(s.n, []).append(float(getattr(s, attr)))
    out = []
    for n in sorted(by_n):
        v = np.asarray(by_n[n])
        se = float(v.std(ddof=1) / math.sqrt(len(v))) if len(v) > 1 else float("nan")
        out.append((n, float(v.mean()), se))
    return out
