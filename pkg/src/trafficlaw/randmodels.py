"""Stochastic primitives: seeded streams, Zipf laws, the population-distance
radial sampler and data-arrival-rate classes.

Seeding
-------
Every consumer owns a PCG64 stream derived from ``SeedSequence(seed,
spawn_key=key)``.  The network of a replicate uses ``key=(0,)`` and the
session of source ``k`` uses ``key=(1, k)``, so session draws do not depend on
how sessions are scheduled across workers.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .torus import Point, TorusDomain, as_coords

NETWORK_STREAM = 0
SESSION_STREAM = 1


def stream(seed: int, *key: int) -> np.random.Generator:
    """Independent PCG64 generator for ``(seed, key)``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=tuple(key))))


@dataclass(frozen=True)
class ExponentParams:
    """Exponents of the four generating distributions.

    ``g`` geography clustering, ``i`` node influence, ``s`` relationship
    separation, ``d`` data destination.
    """

    i: float = 0.0
    s: float = 0.0
    d: float = 0.0
    g: float = 0.0

    def __post_init__(self):
        for name in ("g", "i", "s", "d"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise ValueError(f"exponent {name} must be finite and >= 0, got {v}")

    def require_uniform(self):
        if self.g != 0:
            raise ValueError("theory valid only for uniform geography")


class LambdaClass(enum.Enum):
    CONST = "const"
    SQRT_N = "sqrt"
    LINEAR_N = "linear"

    @property
    def n_exp(self) -> Fraction:
        return {"const": Fraction(0), "sqrt": Fraction(1, 2), "linear": Fraction(1)}[self.value]

    @classmethod
    def parse(cls, text: str) -> "LambdaClass":
        aliases = {"1": "const", "constant": "const", "sqrtn": "sqrt", "n": "linear", "linearn": "linear"}
        key = text.strip().lower().replace("_", "")
        try:
            return cls(aliases.get(key, key))
        except ValueError:
            raise ValueError(f"unknown lambda class {text!r}; use const, sqrt or linear") from None


def lambda_eval(cls: LambdaClass, n: int) -> float:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if cls is LambdaClass.CONST:
        return 1.0
    if cls is LambdaClass.SQRT_N:
        return math.sqrt(n)
    return float(n)


# --- Zipf ----------------------------------------------------------------

@dataclass(frozen=True)
class ZipfPmf:
    """Zipf law ``Pr(k) ∝ k**-exponent`` on ``{1, ..., support_max}``.

    ``weights[k-1]`` is the unnormalized cumulative weight of ``{1..k}``.
    A pmf of smaller support shares the same cumulative array (see
    :meth:`truncated`), which is how the conditional destination law
    ``Pr(r | q)`` is sampled.
    """

    exponent: float
    support_max: int
    weights: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, exponent: float, support_max: int) -> "ZipfPmf":
        if support_max < 1:
            raise ValueError(f"Zipf support must be >= 1, got {support_max}")
        if exponent < 0 or not math.isfinite(exponent):
            raise ValueError(f"Zipf exponent must be finite and >= 0, got {exponent}")
        return _zipf_cached(float(exponent), int(support_max))

    @property
    def total(self) -> float:
        return float(self.weights[self.support_max - 1])

    def truncated(self, support_max: int) -> "ZipfPmf":
        if not 1 <= support_max <= len(self.weights):
            raise ValueError("outside Zipf support")
        return ZipfPmf(self.exponent, int(support_max), self.weights)

    def probabilities(self) -> np.ndarray:
        k = np.arange(1, self.support_max + 1, dtype=float)
        return k ** -self.exponent / self.total


@lru_cache(maxsize=64)
def _zipf_cached(exponent, support_max):
    k = np.arange(1, support_max + 1, dtype=float)
    w = k ** -exponent
    cum = np.cumsum(w)
    # exact total for the normalizer; cumsum drift only affects sampling bins
    cum[-1] = math.fsum(w)
    cum.setflags(write=False)
    return ZipfPmf(exponent, support_max, cum)


def zipf_pmf(exponent: float, support_max: int, k: int) -> float:
    if not 1 <= k <= support_max:
        raise ValueError(f"{k} is outside Zipf support [1, {support_max}]")
    pmf = ZipfPmf.build(exponent, support_max)
    return k ** -exponent / pmf.total


def zipf_sample(pmf: ZipfPmf, rng: np.random.Generator, size=None):
    """Inverse-CDF draw(s) by binary search on the cumulative weights."""
    cum = pmf.weights[: pmf.support_max]
    u = rng.random(size) * pmf.total
    k = np.searchsorted(cum, u, side="right") + 1
    k = np.minimum(k, pmf.support_max)
    return int(k) if size is None else k


def zipf_tail_class(exponent: float):
    """n-dependence of the Zipf normalizer, as an asymptotic order.

    ``Pr(q) = Θ(q**-a)`` for a > 1, ``Θ(q**-1 / log n)`` at a = 1 and
    ``Θ(n**(a-1) q**-a)`` for 0 <= a < 1.
    """
    from .theory import AsymptoticOrder, exact

    if exponent < 0:
        raise ValueError(f"Zipf exponent must be >= 0, got {exponent}")
    a = exact(exponent)
    if a > 1:
        return AsymptoticOrder(0, 0)
    if a == 1:
        return AsymptoticOrder(0, -1)
    return AsymptoticOrder(a - 1, 0)


# --- population-distance radial law ---------------------------------------

_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)


def radial_weight(r, s: float, n: float):
    """Unnormalized radial density ``2πr (min(πr², n) + 1)**-s``."""
    r = np.asarray(r, dtype=float)
    return 2.0 * math.pi * r * (np.minimum(math.pi * r * r, n) + 1.0) ** -s


def _radial_grid(r_max, grid_points):
    # log spacing resolves the mass that piles up near 0 for large s
    n_log = grid_points // 2
    n_lin = grid_points - n_log
    lo = min(1e-4, r_max * 1e-6)
    knee = min(1.0, r_max / 4)
    log_part = np.geomspace(lo, knee, n_log, endpoint=False)
    lin_part = np.linspace(knee, r_max, n_lin)
    return np.concatenate(([0.0], log_part, lin_part))


@dataclass(frozen=True)
class RadialSampler:
    """Tabulated inverse-CDF sampler for the distance of a friend anchor.

    The radial law is translation invariant on the torus, so one table
    serves every source; ``source`` only shifts the sampled points.
    """

    source: Point
    s: float
    domain: TorusDomain
    r_max: float
    radii: np.ndarray = field(repr=False)
    cdf_table: np.ndarray = field(repr=False)
    normalizer: float = 1.0

    def cdf(self, r):
        return np.interp(r, self.radii, self.cdf_table)

    def quantile(self, u):
        return np.interp(u, self.cdf_table, self.radii)

    def at(self, source) -> "RadialSampler":
        c = as_coords(source)[0]
        return RadialSampler(self.domain.point(c[0], c[1]), self.s, self.domain, self.r_max,
                             self.radii, self.cdf_table, self.normalizer)

    def offsets(self, uniforms: np.ndarray) -> np.ndarray:
        """Map an (m, 2) array of U(0,1) pairs to displacement vectors."""
        r = self.quantile(uniforms[:, 0])
        theta = 2.0 * math.pi * uniforms[:, 1]
        return np.column_stack((r * np.cos(theta), r * np.sin(theta)))


@lru_cache(maxsize=32)
def _radial_table(s, side, n, grid_points):
    r_max = side / 2.0
    radii = _radial_grid(r_max, grid_points)
    a = radii[:-1]
    b = radii[1:]
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    nodes = mid[:, None] + half[:, None] * _GL_X[None, :]
    pieces = half * (radial_weight(nodes, s, n) @ _GL_W)
    cum = np.concatenate(([0.0], np.cumsum(pieces)))
    total = math.fsum(pieces)
    cdf = cum / total
    cdf[-1] = 1.0
    radii.setflags(write=False)
    cdf.setflags(write=False)
    return r_max, radii, cdf, total


def radial_sampler_build(source, s: float, domain: TorusDomain, grid_points: int = 4096) -> RadialSampler:
    if s < 0 or not math.isfinite(s):
        raise ValueError(f"separation exponent must be finite and >= 0, got {s}")
    if grid_points < 256:
        raise ValueError(f"grid_points must be >= 256, got {grid_points}")
    r_max, radii, cdf, total = _radial_table(float(s), domain.side, float(domain.area), int(grid_points))
    c = as_coords(source)[0]
    return RadialSampler(domain.point(c[0], c[1]), float(s), domain, r_max, radii, cdf, total)


def radial_sample(sampler: RadialSampler, rng: np.random.Generator, size=None):
    """Anchor position(s) around ``sampler.source``, wrapped onto the torus.

    With ``size=None`` a single :class:`Point` is returned, otherwise an
    ``(size, 2)`` coordinate array.
    """
    m = 1 if size is None else int(size)
    u = rng.random((m, 2))
    src = np.array([sampler.source.x, sampler.source.y])
    pts = sampler.domain.wrap(src + sampler.offsets(u))
    if size is None:
        return Point(float(pts[0, 0]), float(pts[0, 1]))
    return pts
