"""Square torus of area n, its wraparound metric, and a grid index for
nearest-node lookups."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numba
import numpy as np


@dataclass(frozen=True)
class TorusDomain:
    """Square torus with side ``sqrt(n_hint)`` so that its area equals n."""

    side: float
    n_hint: int = 1

    def __post_init__(self):
        if not (self.side > 0 and math.isfinite(self.side)):
            raise ValueError(f"torus side must be positive and finite, got {self.side}")

    @classmethod
    def for_n(cls, n: int) -> "TorusDomain":
        if n < 1:
            raise ValueError(f"n must be positive, got {n}")
        return cls(side=math.sqrt(n), n_hint=int(n))

    @property
    def area(self) -> float:
        return self.side * self.side

    def wrap(self, coords):
        """Reduce coordinates into ``[0, side)``; accepts scalars or arrays."""
        c = np.mod(np.asarray(coords, dtype=float), self.side)
        # fmod of a tiny negative number rounds up to exactly `side`
        return np.where(c >= self.side, 0.0, c)

    def point(self, x: float, y: float) -> "Point":
        x, y = self.wrap([x, y])
        return Point(float(x), float(y))


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite coordinates ({self.x}, {self.y})")

    def __array__(self, dtype=None, copy=None):
        return np.array([self.x, self.y], dtype=dtype or float)


def as_coords(points) -> np.ndarray:
    """Coerce a Point, a list of Points or an (m, 2) array to float coordinates."""
    if isinstance(points, Point):
        return np.array([[points.x, points.y]])
    if len(points) and isinstance(points[0], Point):
        return np.array([[p.x, p.y] for p in points], dtype=float)
    arr = np.asarray(points, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(1, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"expected (m, 2) coordinates, got shape {arr.shape}")
    return arr


def torus_distance(a, b, domain: TorusDomain) -> float:
    a = as_coords(a)[0]
    b = as_coords(b)[0]
    return math.sqrt(_torus_d2(a[0], a[1], b[0], b[1], domain.side))


def torus_distances(a, b, domain: TorusDomain) -> np.ndarray:
    """Elementwise torus distances between two broadcastable coordinate arrays."""
    d = np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float))
    d = np.minimum(d, domain.side - d)
    return np.sqrt(np.sum(d * d, axis=-1))


@numba.njit(cache=True, inline="always")
def _torus_d2(ax, ay, bx, by, side):
    dx = abs(ax - bx)
    if side - dx < dx:
        dx = side - dx
    dy = abs(ay - by)
    if side - dy < dy:
        dy = side - dy
    return dx * dx + dy * dy


@dataclass(frozen=True)
class GridIndex:
    """Uniform bucket grid over the torus, stored in CSR form.

    Cell ``(cx, cy)`` holds ``items[start[c]:start[c + 1]]`` with
    ``c = cx * ncell + cy``; node indices within a cell are ascending.
    """

    cell_size: float
    ncell: int
    start: np.ndarray = field(repr=False)
    items: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, nodes, domain: TorusDomain, cell_size: float | None = None) -> "GridIndex":
        coords = as_coords(nodes) if len(nodes) else np.empty((0, 2))
        n = len(coords)
        if cell_size is None:
            ncell = max(1, math.ceil(math.sqrt(max(n, 1))))
        else:
            ncell = max(1, int(domain.side // cell_size))
        cell_size = domain.side / ncell
        flat = _cell_ids(coords, cell_size, ncell)
        order = np.argsort(flat, kind="stable")
        counts = np.bincount(flat, minlength=ncell * ncell)
        start = np.zeros(ncell * ncell + 1, dtype=np.int64)
        np.cumsum(counts, out=start[1:])
        return cls(cell_size=cell_size, ncell=ncell, start=start, items=order.astype(np.int64))

    def cell_of(self, point) -> tuple[int, int]:
        c = as_coords(point)[0]
        cx = min(int(c[0] // self.cell_size), self.ncell - 1) % self.ncell
        cy = min(int(c[1] // self.cell_size), self.ncell - 1) % self.ncell
        return cx, cy

    def cell(self, cx: int, cy: int) -> np.ndarray:
        c = (cx % self.ncell) * self.ncell + (cy % self.ncell)
        return self.items[self.start[c]:self.start[c + 1]]

    @property
    def cells(self) -> dict[tuple[int, int], list[int]]:
        out = {}
        for cx in range(self.ncell):
            for cy in range(self.ncell):
                members = self.cell(cx, cy)
                if len(members):
                    out[(cx, cy)] = members.tolist()
        return out


def _cell_ids(coords, cell_size, ncell):
    ij = np.floor(coords / cell_size).astype(np.int64)
    np.clip(ij, 0, ncell - 1, out=ij)
    return ij[:, 0] * ncell + ij[:, 1]


@numba.njit(cache=True)
def _nearest_kernel(qx, qy, nx, ny, start, items, cell_size, ncell, side, out):
    n = nx.shape[0]
    for t in range(qx.shape[0]):
        px = qx[t]
        py = qy[t]
        cx = min(int(px // cell_size), ncell - 1)
        cy = min(int(py // cell_size), ncell - 1)
        best = np.inf
        best_i = -1
        k = 0
        while True:
            if 2 * k + 1 > ncell:
                # rings would wrap onto themselves; finish with a full scan
                for i in range(n):
                    d2 = _torus_d2(px, py, nx[i], ny[i], side)
                    if d2 < best or (d2 == best and i < best_i):
                        best = d2
                        best_i = i
                break
            for ox in range(-k, k + 1):
                for oy in range(-k, k + 1):
                    if max(abs(ox), abs(oy)) != k:
                        continue
                    c = ((cx + ox) % ncell) * ncell + (cy + oy) % ncell
                    for j in range(start[c], start[c + 1]):
                        i = items[j]
                        d2 = _torus_d2(px, py, nx[i], ny[i], side)
                        if d2 < best or (d2 == best and i < best_i):
                            best = d2
                            best_i = i
            # unvisited cells lie at distance >= k * cell_size
            if best_i >= 0 and best < (k * cell_size) ** 2 * (1.0 - 1e-12):
                break
            k += 1
        out[t] = best_i


def nearest_nodes(points, index: GridIndex, nodes, domain: TorusDomain) -> np.ndarray:
    """Vectorized :func:`nearest_node` over an (m, 2) array of query points."""
    coords = as_coords(nodes) if len(nodes) else np.empty((0, 2))
    if len(coords) == 0:
        raise ValueError("empty network")
    q = domain.wrap(as_coords(points))
    out = np.empty(len(q), dtype=np.int64)
    _nearest_kernel(
        np.ascontiguousarray(q[:, 0]), np.ascontiguousarray(q[:, 1]),
        np.ascontiguousarray(coords[:, 0]), np.ascontiguousarray(coords[:, 1]),
        index.start, index.items, index.cell_size, index.ncell, domain.side, out,
    )
    return out


def nearest_node(p, index: GridIndex, nodes, domain: TorusDomain) -> int:
    """Index of the node closest to ``p``; ties go to the smallest index."""
    return int(nearest_nodes(p, index, nodes, domain)[0])


def nearest_node_bruteforce(p, nodes, domain: TorusDomain) -> int:
    coords = as_coords(nodes)
    if len(coords) == 0:
        raise ValueError("empty network")
    d = np.abs(coords - domain.wrap(as_coords(p)[0]))
    d = np.minimum(d, domain.side - d)
    return int(np.argmin(d[:, 0] * d[:, 0] + d[:, 1] * d[:, 1]))
