"""Exact Euclidean minimum spanning trees under the torus metric."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numba
import numpy as np

from .randmodels import stream
from .torus import TorusDomain, _torus_d2, as_coords

MAX_POINTS = 50_000


@dataclass(frozen=True)
class EmstResult:
    total_length: float
    edges: list[tuple[int, int]] | None = None


@numba.njit(cache=True)
def _prim(x, y, side, want_edges, parent_out):
    m = x.shape[0]
    in_tree = np.zeros(m, dtype=np.bool_)
    key = np.full(m, np.inf)
    parent = np.full(m, -1, dtype=np.int64)
    key[0] = 0.0
    total = 0.0
    comp = 0.0
    for _ in range(m):
        u = -1
        best = np.inf
        for v in range(m):
            if not in_tree[v] and key[v] < best:
                best = key[v]
                u = v
        if u < 0:
            break
        in_tree[u] = True
        if parent[u] >= 0:
            # Neumaier-compensated accumulation of edge lengths
            w = math.sqrt(best)
            t = total + w
            if abs(total) >= w:
                comp += (total - t) + w
            else:
                comp += (w - t) + total
            total = t
        ux = x[u]
        uy = y[u]
        for v in range(m):
            if in_tree[v]:
                continue
            d2 = _torus_d2(ux, uy, x[v], y[v], side)
            if d2 < key[v] or (d2 == key[v] and u < parent[v]):
                key[v] = d2
                parent[v] = u
    if want_edges:
        for v in range(m):
            parent_out[v] = parent[v]
    return total + comp


@numba.njit(cache=True, parallel=True)
def _prim_batch(x, y, offsets, side, out):
    dummy = np.empty(0, dtype=np.int64)
    for k in numba.prange(offsets.shape[0] - 1):
        a = offsets[k]
        b = offsets[k + 1]
        if b - a < 2:
            out[k] = 0.0
        else:
            out[k] = _prim(x[a:b], y[a:b], side, False, dummy)


def _check_size(m):
    if m == 0:
        raise ValueError("empty point set")
    if m > MAX_POINTS:
        raise ValueError(
            f"{m} points exceeds the dense EMST cap of {MAX_POINTS}; "
            "reduce n or raise trafficlaw.emst.MAX_POINTS knowingly (cost is O(m^2))"
        )


def emst_prim(points, domain: TorusDomain, return_edges: bool = False) -> EmstResult:
    """Dense O(m²) Prim over the complete graph with torus edge lengths."""
    coords = as_coords(points) if len(points) else np.empty((0, 2))
    m = len(coords)
    _check_size(m)
    parent = np.empty(m, dtype=np.int64)
    total = _prim(np.ascontiguousarray(coords[:, 0]), np.ascontiguousarray(coords[:, 1]),
                  float(domain.side), return_edges, parent)
    edges = None
    if return_edges:
        edges = sorted((min(int(p), v), max(int(p), v)) for v, p in enumerate(parent) if p >= 0)
    return EmstResult(float(total), edges)


def emst_lengths(groups, domain: TorusDomain) -> np.ndarray:
    """EMST length of each coordinate array in ``groups`` (one call, batched)."""
    sizes = np.array([len(g) for g in groups], dtype=np.int64)
    for m in sizes:
        _check_size(int(m))
    offsets = np.zeros(len(sizes) + 1, dtype=np.int64)
    np.cumsum(sizes, out=offsets[1:])
    coords = np.vstack(groups) if len(groups) else np.empty((0, 2))
    out = np.empty(len(sizes))
    _prim_batch(np.ascontiguousarray(coords[:, 0]), np.ascontiguousarray(coords[:, 1]),
                offsets, float(domain.side), out)
    return out


class UnionFind:
    def __init__(self, size):
        self.parent = list(range(size))
        self.rank = [0] * size

    def find(self, v):
        root = v
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[v] != root:
            self.parent[v], v = root, self.parent[v]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        return True


def emst_kruskal(points, domain: TorusDomain, return_edges: bool = False) -> EmstResult:
    """Reference EMST: sort all pairwise edges, merge with union-find."""
    coords = as_coords(points) if len(points) else np.empty((0, 2))
    m = len(coords)
    if m == 0:
        raise ValueError("empty point set")
    if m == 1:
        return EmstResult(0.0, [] if return_edges else None)
    i, j = np.triu_indices(m, k=1)
    delta = np.abs(coords[i] - coords[j])
    delta = np.minimum(delta, domain.side - delta)
    w = np.hypot(delta[:, 0], delta[:, 1])
    order = np.lexsort((j, i, w))
    uf = UnionFind(m)
    chosen = []
    lengths = []
    for e in order:
        if uf.union(int(i[e]), int(j[e])):
            chosen.append((int(i[e]), int(j[e])))
            lengths.append(w[e])
            if len(chosen) == m - 1:
                break
    return EmstResult(math.fsum(lengths), sorted(chosen) if return_edges else None)


def steele_ratio_check(n_values, seed: int = 0, replicates: int = 8) -> list[tuple[int, float]]:
    """Mean ``M_n / sqrt(n)`` for uniform points on the unit torus, per n."""
    n_values = [int(n) for n in n_values]
    if any(b <= a for a, b in zip(n_values, n_values[1:])):
        raise ValueError("n_values must be strictly increasing")
    if any(n < 64 for n in n_values):
        raise ValueError("each n must be >= 64")
    unit = TorusDomain(side=1.0)
    out = []
    for n in n_values:
        groups = [stream(seed, 2, n, rep).random((n, 2)) for rep in range(replicates)]
        lengths = emst_lengths(groups, unit)
        out.append((n, float(np.mean(lengths)) / math.sqrt(n)))
    return out
