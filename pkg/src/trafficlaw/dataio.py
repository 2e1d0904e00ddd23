"""File formats: network JSON, sample CSV, fit input, geo check-ins, run manifests."""

from __future__ import annotations

import csv
import io
import json
import math
import platform
import warnings
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .synthesis import Network, Session
from .torus import TorusDomain
from .traffic import TrafficSample


class DataError(ValueError):
    """Malformed or unreadable input data."""


# --- network + sessions JSON ---------------------------------------------

def network_to_dict(net: Network, sessions=()) -> dict:
    return {
        "n": net.n,
        "side": net.domain.side,
        "seed": net.seed,
        "nodes": [[float(x), float(y)] for x, y in net.nodes],
        "sessions": [
            {
                "source": s.source,
                "q": s.q,
                "r": s.r,
                "anchors": [[float(x), float(y)] for x, y in s.anchors],
                "friends": [int(f) for f in s.friends],
                "destinations": [int(f) for f in s.destinations],
            }
            for s in sessions
        ],
    }


def dumps_network(net: Network, sessions=()) -> str:
    return json.dumps(network_to_dict(net, sessions), separators=(",", ":")) + "\n"


def loads_network(text: str) -> tuple[Network, list[Session]]:
    try:
        doc = json.loads(text)
        domain = TorusDomain(side=float(doc["side"]), n_hint=int(doc["n"]))
        nodes = np.array(doc["nodes"], dtype=float).reshape(-1, 2)
        if len(nodes) != doc["n"]:
            raise DataError(f"'n' is {doc['n']} but {len(nodes)} nodes are listed")
        net = Network.from_nodes(nodes, domain, doc.get("seed"))
        sessions = [
            Session(
                source=int(s["source"]), q=int(s["q"]),
                anchors=np.array(s["anchors"], dtype=float).reshape(-1, 2),
                friends=np.array(s["friends"], dtype=np.int64),
                r=int(s["r"]),
                destinations=np.array(s["destinations"], dtype=np.int64),
            )
            for s in doc.get("sessions", [])
        ]
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise DataError(f"malformed network document: {exc}") from exc
    return net, sessions


def write_network(path, net: Network, sessions=()) -> None:
    Path(path).write_text(dumps_network(net, sessions))


def read_network(path) -> tuple[Network, list[Session]]:
    return loads_network(Path(path).read_text())


# --- traffic samples CSV ---------------------------------------------------

def fmt_float(x: float) -> str:
    return f"{x:.17g}"


def samples_to_csv(samples) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TrafficSample.FIELDS)
    for s in samples:
        w.writerow([s.n, s.seed, fmt_float(s.total_load), fmt_float(s.emst_sum),
                    fmt_float(s.psi_const), fmt_float(s.psi_large), s.sum_r, fmt_float(s.wall_time)])
    return buf.getvalue()


def samples_from_csv(text: str) -> list[TrafficSample]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != TrafficSample.FIELDS:
        raise DataError("missing or unexpected traffic CSV header")
    out = []
    for lineno, row in enumerate(rows[1:], start=2):
        try:
            n, seed, tl, es, pc, pl, sr, wt = row
            out.append(TrafficSample(int(n), int(seed), float(tl), float(es), float(pc), float(pl),
                                     int(sr), float(wt)))
        except ValueError as exc:
            raise DataError(f"line {lineno}: {exc}") from exc
    return out


# --- (n, value) series -----------------------------------------------------

def read_series(text: str) -> list[tuple[float, float]]:
    """Parse ``n,value`` rows; a non-numeric first row is taken as a header."""
    out = []
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or all(not c.strip() for c in row) or row[0].lstrip().startswith("#"):
            continue
        if len(row) < 2:
            raise DataError(f"line {lineno}: expected 'n,value', got {','.join(row)!r}")
        try:
            n, v = float(row[0]), float(row[1])
        except ValueError:
            if lineno == 1:
                continue
            raise DataError(f"line {lineno}: expected numeric 'n,value', got {','.join(row)!r}") from None
        if not (math.isfinite(n) and math.isfinite(v)):
            raise DataError(f"line {lineno}: non-finite value")
        out.append((n, v))
    return out


# --- geography check --------------------------------------------------------

@dataclass(frozen=True)
class GeoSummary:
    grid: np.ndarray = field(repr=False)
    total_points: int
    coefficient_of_variation: float
    threshold: float = 0.5

    @property
    def uniform(self) -> bool:
        return self.coefficient_of_variation <= self.threshold

    @property
    def verdict(self) -> str:
        return "consistent with uniform (g=0)" if self.uniform else "non-uniform"

    def to_dict(self) -> dict:
        return {
            "grid": self.grid.tolist(),
            "total_points": self.total_points,
            "coefficient_of_variation": self.coefficient_of_variation,
            "threshold": self.threshold,
            "verdict": self.verdict,
        }


def read_coordinates(text: str) -> np.ndarray:
    """Read ``x,y`` or ``lat,lon`` columns.

    Latitude/longitude input (detected from the header) is mapped to a plane
    with an equirectangular projection about the mean latitude.  This is a
    heuristic that is only reasonable for regional extents.
    """
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
    if not rows:
        raise DataError("no coordinates")
    header = [c.strip().lower() for c in rows[0]]
    latlon = False
    body = rows
    start = 1
    if not _numeric(rows[0][:2]):
        body = rows[1:]
        start = 2
        if "lat" in header or "latitude" in header:
            latlon = True
            ilat = header.index("lat") if "lat" in header else header.index("latitude")
            lon_names = [h for h in ("lon", "lng", "long", "longitude") if h in header]
            if not lon_names:
                raise DataError("latitude column without a longitude column")
            ilon = header.index(lon_names[0])
    pts = []
    for lineno, row in enumerate(body, start=start):
        try:
            if latlon:
                pts.append((float(row[ilon]), float(row[ilat])))
            else:
                pts.append((float(row[0]), float(row[1])))
        except (ValueError, IndexError):
            raise DataError(f"line {lineno}: unparsable coordinates {','.join(row)!r}") from None
    arr = np.array(pts, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DataError("non-finite coordinates")
    if latlon:
        lat0 = math.radians(float(arr[:, 1].mean()))
        arr = np.column_stack((arr[:, 0] * math.cos(lat0), arr[:, 1]))
    return arr


def _numeric(cells) -> bool:
    try:
        [float(c) for c in cells]
        return len(cells) == 2
    except ValueError:
        return False


def geo_summary(coords, grid: int = 10, threshold: float = 0.5, bounds=None) -> GeoSummary:
    """Cell counts over a ``grid x grid`` partition of the bounding box, and their CV."""
    coords = np.asarray(coords, dtype=float).reshape(-1, 2)
    if grid < 1:
        raise ValueError("grid must be >= 1")
    if len(coords) == 0:
        raise DataError("no coordinates")
    if len(coords) < grid * grid:
        warnings.warn(f"{len(coords)} points for {grid * grid} cells; the CV will be noisy", stacklevel=2)
    if bounds is None:
        lo = coords.min(axis=0)
        hi = coords.max(axis=0)
    else:
        lo = np.array(bounds[:2], dtype=float)
        hi = np.array(bounds[2:], dtype=float)
    span = np.where(hi > lo, hi - lo, 1.0)
    ij = np.floor((coords - lo) / span * grid).astype(np.int64)
    np.clip(ij, 0, grid - 1, out=ij)
    counts = np.zeros((grid, grid), dtype=np.int64)
    np.add.at(counts, (ij[:, 0], ij[:, 1]), 1)
    mean = counts.mean()
    cv = float(counts.std() / mean)
    return GeoSummary(counts, int(len(coords)), cv, threshold)


# --- run manifests and config files ------------------------------------------

@dataclass
class RunManifest:
    command: str
    config: dict
    seed: int | None
    tool_version: str
    started: str
    ended: str = ""
    outputs: list[str] = field(default_factory=list)
    python: str = field(default_factory=platform.python_version)

    @staticmethod
    def now() -> str:
        return datetime.now(timezone.utc).isoformat(timespec="seconds")

    def write(self, path) -> None:
        Path(path).write_text(json.dumps(asdict(self), indent=2, sort_keys=True) + "\n")

    @classmethod
    def read(cls, path) -> "RunManifest":
        return cls(**json.loads(Path(path).read_text()))


def manifest_path(output) -> Path:
    p = Path(output)
    return p.with_name(p.name + ".manifest.json")


def parse_config(text: str) -> dict[str, str]:
    """Flat ``key = value`` lines; ``#`` starts a comment, keys use flag spelling."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DataError(f"config line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        out[key.lstrip("-").replace("_", "-")] = value
    return out
