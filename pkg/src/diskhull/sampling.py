"""Seeded path generation: Euler-discretised Brownian motion killed on the
unit circle, and nearest-neighbour lattice walks killed outside a radius.

Every path is a pure function of ``(master_seed, stream_id)`` and the
configuration, so a batch can be split across processes in any way.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numba
import numpy as np

from diskhull.geometry import PolygonalPath

DEFAULT_SEED = 20240917
GENERATOR_NAME = "numpy Philox4x64-10 keyed by (master_seed, stream_id); ziggurat standard_normal"
LATTICE_STEP_CAP = 10**9

_U64 = 1 << 64


class BoundaryMode(str, enum.Enum):
    FIRST_EXTERIOR = "first_exterior"
    CIRCLE_INTERPOLATED = "circle_interpolated"


@dataclass(frozen=True)
class SimulationConfig:
    dt: float = 1e-5
    master_seed: int = DEFAULT_SEED
    boundary_mode: BoundaryMode = BoundaryMode.FIRST_EXTERIOR
    max_steps: int | None = None

    def __post_init__(self):
        if not (0.0 < self.dt <= 1.0):
            raise ValueError(f"dt must lie in (0, 1], got {self.dt!r}")
        if not 0 <= self.master_seed < _U64:
            raise ValueError("master_seed must be a 64-bit unsigned integer")
        object.__setattr__(self, "boundary_mode", BoundaryMode(self.boundary_mode))
        if self.max_steps is None:
            object.__setattr__(self, "max_steps", int(math.ceil(100.0 / self.dt)))
        if self.max_steps * self.dt < 100.0 * (1 - 1e-12):
            raise ValueError("max_steps * dt must be at least 100")

    @property
    def chunk_steps(self) -> int:
        # about 1/5 of the mean exit time per chunk
        return int(min(65536, max(1024, round(0.1 / self.dt))))


@dataclass(frozen=True)
class PathSample:
    path: PolygonalPath
    exit_point: tuple[float, float]
    n_steps: int
    capped: bool


@dataclass(frozen=True)
class LatticePath:
    sites: np.ndarray
    kill_radius: int

    def __len__(self):
        return self.sites.shape[0]


def derive_stream(master_seed: int, stream_id: int) -> np.random.Generator:
    """Independent generator for one stream: Philox with the 128-bit key
    ``master_seed | stream_id << 64`` and counter starting at zero."""
    if not 0 <= master_seed < _U64 or not 0 <= stream_id < _U64:
        raise ValueError("seed and stream id must be 64-bit unsigned integers")
    return np.random.Generator(np.random.Philox(key=master_seed + _U64 * stream_id))


# --- Brownian paths -------------------------------------------------------------


@numba.njit(cache=True)
def _advance(z, scale, x, y, out):
    """Accumulate scaled increments from (x, y) into ``out`` until the first
    point with norm >= 1. Returns the number of points written."""
    n = z.shape[0]
    for i in range(n):
        x += scale * z[i, 0]
        y += scale * z[i, 1]
        out[i, 0] = x
        out[i, 1] = y
        if x * x + y * y >= 1.0:
            return i + 1
    return n


def circle_crossing(inside, outside) -> tuple[float, float]:
    """Point where the segment inside -> outside meets the unit circle."""
    px, py = inside
    dx, dy = outside[0] - px, outside[1] - py
    dd = dx * dx + dy * dy
    b = px * dx + py * dy
    c = px * px + py * py - 1.0
    # larger root of dd s^2 + 2 b s + c = 0 written without cancellation
    s = -c / (b + math.sqrt(b * b - dd * c))
    s = min(max(s, 0.0), 1.0)
    qx, qy = px + s * dx, py + s * dy
    norm = math.hypot(qx, qy)
    return qx / norm, qy / norm


class BrownianStream:
    """Iterates over the vertices of one killed path in chunks.

    The origin is not yielded. After exhaustion ``n_steps``, ``capped`` and
    ``exit_point`` describe the finished path.
    """

    def __init__(self, config: SimulationConfig, stream_id: int):
        self.config = config
        self.stream_id = stream_id
        self.n_steps = 0
        self.capped = False
        self.exit_point: tuple[float, float] | None = None

    def __iter__(self):
        cfg = self.config
        gen = derive_stream(cfg.master_seed, self.stream_id)
        scale = math.sqrt(cfg.dt)
        x = y = 0.0
        chunk = cfg.chunk_steps
        while True:
            remaining = cfg.max_steps - self.n_steps
            if remaining <= 0:
                self.capped = True
                self.exit_point = (x, y)
                return
            z = gen.standard_normal((min(chunk, remaining), 2))
            out = np.empty_like(z)
            k = _advance(z, scale, x, y, out)
            self.n_steps += k
            pts = out[:k]
            lx, ly = pts[-1]
            if lx * lx + ly * ly >= 1.0:
                if cfg.boundary_mode is BoundaryMode.CIRCLE_INTERPOLATED:
                    prev = pts[-2] if k >= 2 else (x, y)
                    pts[-1] = circle_crossing(prev, (lx, ly))
                self.exit_point = (float(pts[-1, 0]), float(pts[-1, 1]))
                yield pts
                return
            x, y = float(lx), float(ly)
            yield pts


def sample_bm_until_disk_exit(config: SimulationConfig, stream_id: int) -> PathSample:
    stream = BrownianStream(config, stream_id)
    chunks = [np.zeros((1, 2))]
    chunks.extend(stream)
    return PathSample(
        path=PolygonalPath(np.concatenate(chunks)),
        exit_point=stream.exit_point,
        n_steps=stream.n_steps,
        capped=stream.capped,
    )


# --- lattice walks ---------------------------------------------------------------

_WORDS_PER_CHUNK = 4096


@numba.njit(cache=True)
def _lattice_steps(words, x, y, r2, out, start):
    """Consume 2 bits per step (E, N, W, S) until a site with
    x^2 + y^2 > r2 is written. Stops early, on a word boundary, when ``out``
    cannot hold another 32 sites. Returns (next free index, x, y, exited,
    words consumed)."""
    j = start
    cap = out.shape[0]
    for i in range(words.shape[0]):
        if j + 32 > cap:
            return j, x, y, False, i
        w = words[i]
        for b in range(32):
            d = np.int64((w >> np.uint64(2 * b)) & np.uint64(3))
            # branch-free E, N, W, S
            x += (d == 0) - (d == 2)
            y += (d == 1) - (d == 3)
            out[j, 0] = x
            out[j, 1] = y
            j += 1
            if x * x + y * y > r2:
                return j, x, y, True, i + 1
    return j, x, y, False, words.shape[0]


def sample_lattice_walk(kill_radius: int, master_seed: int, stream_id: int) -> LatticePath:
    """Simple random walk on Z^2 from the origin, stopped at the first site
    with Euclidean norm strictly greater than ``kill_radius``."""
    if kill_radius < 1:
        raise ValueError("kill_radius must be >= 1")
    bits = derive_stream(master_seed, stream_id).bit_generator
    r2 = int(kill_radius) ** 2
    buf = np.zeros((max(1024, 2 * r2), 2), dtype=np.int64)
    n, x, y = 1, 0, 0
    pending = np.empty(0, dtype=np.uint64)
    while True:
        if pending.size == 0:
            pending = bits.random_raw(_WORDS_PER_CHUNK)
        n, x, y, exited, used = _lattice_steps(pending, x, y, r2, buf, n)
        if exited:
            return LatticePath(buf[:n].copy(), int(kill_radius))
        pending = pending[used:]
        if n + 32 > buf.shape[0]:
            if n > LATTICE_STEP_CAP:
                raise RuntimeError("lattice walk exceeded the hard step cap")
            buf = np.concatenate([buf, np.zeros_like(buf)])
