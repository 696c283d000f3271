"""Monte Carlo estimators for hull functionals of the killed Brownian path.

Each estimator runs one path per stream id, collects per-path values in
stream order and reduces them with ``math.fsum``; the reduction is exactly
rounded, so results do not depend on how streams were spread over workers.
"""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field
from functools import partial
from typing import Any, Iterable, Sequence

import numpy as np

from diskhull import analytic
from diskhull.geometry import _hull_array, _perimeter, _shoelace, as_points, radial_function
from diskhull.lattice import topological_area
from diskhull.parallel import map_streams
from diskhull.sampling import (
    GENERATOR_NAME,
    BrownianStream,
    SimulationConfig,
    sample_bm_until_disk_exit,
    sample_lattice_walk,
)

Z95 = 1.96


class EstimationError(RuntimeError):
    pass


class InclusionViolation(AssertionError):
    def __init__(self, violations, master_seed):
        ids = ", ".join(str(v.stream_id) for v in violations[:10])
        super().__init__(
            f"{len(violations)} path(s) with star area above convex area + slack "
            f"(master_seed={master_seed}, stream ids: {ids})"
        )
        self.violations = violations
        self.master_seed = master_seed


@dataclass(frozen=True)
class EstimatorResult:
    mean: float
    std_error: float
    n_samples: int
    ci95: tuple[float, float]
    n_capped_excluded: int = 0
    metadata: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["ci95"] = list(self.ci95)
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "EstimatorResult":
        return cls(
            mean=d["mean"],
            std_error=d["std_error"],
            n_samples=d["n_samples"],
            ci95=tuple(d["ci95"]),
            n_capped_excluded=d.get("n_capped_excluded", 0),
            metadata=dict(d.get("metadata", {})),
        )


def _mean_var(values: Sequence[float]) -> tuple[float, float]:
    n = len(values)
    mean = math.fsum(values) / n
    var = math.fsum((v - mean) ** 2 for v in values) / (n - 1)
    return mean, var


def summarize(values: Iterable[float], n_capped: int = 0, metadata: dict | None = None) -> EstimatorResult:
    """Mean, standard error and normal 95% interval of per-path values."""
    vals = [float(v) for v in values]
    if len(vals) < 2:
        raise EstimationError(f"need at least 2 usable samples, got {len(vals)}")
    mean, var = _mean_var(vals)
    se = math.sqrt(var / len(vals))
    return EstimatorResult(
        mean=mean,
        std_error=se,
        n_samples=len(vals),
        ci95=(mean - Z95 * se, mean + Z95 * se),
        n_capped_excluded=n_capped,
        metadata=dict(metadata or {}),
    )


def _metadata(config: SimulationConfig | None, estimator: str, started: float, **extra) -> dict:
    md: dict[str, Any] = {"estimator": estimator}
    if config is not None:
        md.update(
            dt=config.dt,
            seed=config.master_seed,
            boundary_mode=config.boundary_mode.value,
            max_steps=config.max_steps,
            generator=GENERATOR_NAME,
        )
    md.update(extra)
    md["ci"] = "normal approximation, 1.96 standard errors"
    md["wall_time"] = time.perf_counter() - started
    return md


# --- per-path records --------------------------------------------------------


@dataclass
class PerPathRecord:
    stream_id: int
    perimeter: float
    convex_area: float
    M_sample: float
    Y_at_argmax: float
    n_steps: int = 0
    capped: bool = False
    star_area: float | None = None
    max_radius: float | None = None


def convex_path_record(vertices, stream_id: int = -1) -> PerPathRecord:
    """Hull perimeter/area, max x and the y at its first occurrence for one
    fully stored path. Also the entry point for synthetic paths."""
    v = as_points(vertices)
    hull = _hull_array(v)
    i = int(np.argmax(v[:, 0]))
    return PerPathRecord(
        stream_id=stream_id,
        perimeter=float(_perimeter(hull)),
        convex_area=float(_shoelace(hull)),
        M_sample=float(v[i, 0]),
        Y_at_argmax=float(v[i, 1]),
        n_steps=v.shape[0] - 1,
    )


def _streamed_convex(config: SimulationConfig, stream_id: int) -> tuple:
    stream = BrownianStream(config, stream_id)
    hull = np.zeros((1, 2))
    m, y_at = 0.0, 0.0
    for pts in stream:
        i = int(np.argmax(pts[:, 0]))
        if pts[i, 0] > m:
            m, y_at = float(pts[i, 0]), float(pts[i, 1])
        hull = _hull_array(np.concatenate((hull, pts)))
    return (float(_perimeter(hull)), float(_shoelace(hull)), m, y_at, stream.n_steps, stream.capped)


def _convex_block(config: SimulationConfig, ids: range) -> list[tuple]:
    return [_streamed_convex(config, sid) for sid in ids]


@dataclass(frozen=True)
class ConvexBatch:
    """Per-path convex-hull statistics for stream ids 0..n-1."""

    config: SimulationConfig | None
    perimeter: np.ndarray
    area: np.ndarray
    M: np.ndarray
    Y: np.ndarray
    n_steps: np.ndarray
    capped: np.ndarray
    wall_time: float = 0.0

    @property
    def n_capped(self) -> int:
        return int(self.capped.sum())

    def usable(self, name: str) -> np.ndarray:
        return getattr(self, name)[~self.capped]

    @classmethod
    def from_paths(cls, paths: Sequence, config: SimulationConfig | None = None) -> "ConvexBatch":
        recs = [convex_path_record(p, i) for i, p in enumerate(paths)]
        return cls(
            config=config,
            perimeter=np.array([r.perimeter for r in recs]),
            area=np.array([r.convex_area for r in recs]),
            M=np.array([r.M_sample for r in recs]),
            Y=np.array([r.Y_at_argmax for r in recs]),
            n_steps=np.array([r.n_steps for r in recs]),
            capped=np.zeros(len(recs), dtype=bool),
        )


def simulate_convex_batch(config: SimulationConfig, n_paths: int, workers: int | None = None) -> ConvexBatch:
    """Streaming convex-hull pass: O(hull size) memory per path."""
    started = time.perf_counter()
    rows = map_streams(partial(_convex_block, config), n_paths, workers)
    cols = list(zip(*rows))
    return ConvexBatch(
        config=config,
        perimeter=np.array(cols[0], dtype=float),
        area=np.array(cols[1], dtype=float),
        M=np.array(cols[2], dtype=float),
        Y=np.array(cols[3], dtype=float),
        n_steps=np.array(cols[4], dtype=np.int64),
        capped=np.array(cols[5], dtype=bool),
        wall_time=time.perf_counter() - started,
    )


def _check_n(n: int, minimum: int, what: str):
    if n < minimum:
        raise ValueError(f"{what} must be >= {minimum}, got {n}")


def _batch_for(config, n_paths, workers, batch) -> ConvexBatch:
    if batch is None:
        _check_n(n_paths, 100, "n_paths")
        batch = simulate_convex_batch(config, n_paths, workers)
    if batch.n_capped == len(batch.capped):
        raise EstimationError("every simulated path hit the step cap")
    return batch


def estimate_perimeter(config: SimulationConfig, n_paths: int, workers: int | None = None, *,
                       batch: ConvexBatch | None = None) -> EstimatorResult:
    started = time.perf_counter()
    batch = _batch_for(config, n_paths, workers, batch)
    return summarize(batch.usable("perimeter"), batch.n_capped,
                     _metadata(batch.config, "perimeter", started - batch.wall_time))


def estimate_convex_area_direct(config: SimulationConfig, n_paths: int, workers: int | None = None, *,
                                batch: ConvexBatch | None = None) -> EstimatorResult:
    started = time.perf_counter()
    batch = _batch_for(config, n_paths, workers, batch)
    return summarize(batch.usable("area"), batch.n_capped,
                     _metadata(batch.config, "convex_area_direct", started - batch.wall_time))


def estimate_convex_area_blaschke(config: SimulationConfig, n_paths: int, workers: int | None = None, *,
                                  batch: ConvexBatch | None = None) -> EstimatorResult:
    """pi E[M^2] - pi E[Y_T^2] with a delta-method standard error."""
    started = time.perf_counter()
    batch = _batch_for(config, n_paths, workers, batch)
    m2 = [float(v) ** 2 for v in batch.usable("M")]
    y2 = [float(v) ** 2 for v in batch.usable("Y")]
    n = len(m2)
    if n < 2:
        raise EstimationError("need at least 2 usable samples")
    mean_m2, var_m2 = _mean_var(m2)
    mean_y2, var_y2 = _mean_var(y2)
    cov = math.fsum((a - mean_m2) * (b - mean_y2) for a, b in zip(m2, y2)) / (n - 1)
    mean = math.pi * (mean_m2 - mean_y2)
    se = math.pi * math.sqrt(max(var_m2 + var_y2 - 2.0 * cov, 0.0) / n)
    md = _metadata(batch.config, "convex_area_blaschke", started - batch.wall_time,
                   pi_mean_M2=math.pi * mean_m2, pi_mean_M2_se=math.pi * math.sqrt(var_m2 / n))
    return EstimatorResult(mean, se, n, (mean - Z95 * se, mean + Z95 * se), batch.n_capped, md)


@dataclass(frozen=True)
class EmpiricalLaw:
    samples: np.ndarray  # sorted, clipped to [0, 1]
    ks_distance: float
    table: np.ndarray  # columns: a, empirical P(M <= a), cdf_M(a)

    def survival_at(self, a: float) -> tuple[float, float]:
        """Empirical P(M >= a) and its binomial standard error."""
        n = self.samples.size
        p = float(np.count_nonzero(self.samples >= a)) / n
        return p, math.sqrt(p * (1.0 - p) / n)


def ks_distance(sorted_samples: np.ndarray) -> float:
    """sup |F_n - cdf_M| for sorted samples in [0, 1]."""
    n = sorted_samples.size
    f = np.asarray(analytic.cdf_M(sorted_samples))
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))


def empirical_law_of_M(config: SimulationConfig, n_paths: int, workers: int | None = None, *,
                       batch: ConvexBatch | None = None, grid: int = 101) -> EmpiricalLaw:
    if batch is None:
        _check_n(n_paths, 1000, "n_paths")
    batch = _batch_for(config, n_paths, workers, batch)
    samples = np.sort(np.clip(batch.usable("M"), 0.0, 1.0))
    a = np.linspace(0.0, 1.0, grid)
    emp = np.searchsorted(samples, a, side="right") / samples.size
    table = np.column_stack([a, emp, analytic.cdf_M(a)])
    return EmpiricalLaw(samples, ks_distance(samples), table)


# --- star hull ---------------------------------------------------------------


def star_path_record(vertices, m_directions: int) -> tuple[float, float]:
    """(Riemann-sum star area, max sampled radius) of a stored path."""
    r = radial_function(vertices, m_directions)
    return 0.5 * float(np.dot(r, r)) * (2.0 * math.pi / m_directions), float(r.max())


def _star_block(config: SimulationConfig, m: int, ids: range) -> list[tuple]:
    out = []
    for sid in ids:
        s = sample_bm_until_disk_exit(config, sid)
        area, rmax = star_path_record(s.path.vertices, m)
        out.append((area, rmax, s.n_steps, s.capped))
    return out


def estimate_star_area(config: SimulationConfig, n_paths: int, m_directions: int,
                       workers: int | None = None) -> EstimatorResult:
    """Polar Riemann sum over ``m_directions`` rays of the stored trace."""
    _check_n(m_directions, 8, "m_directions")
    _check_n(n_paths, 100, "n_paths")
    started = time.perf_counter()
    rows = map_streams(partial(_star_block, config, int(m_directions)), n_paths, workers)
    usable = [r[0] for r in rows if not r[3]]
    n_capped = len(rows) - len(usable)
    if not usable:
        raise EstimationError("every simulated path hit the step cap")
    return summarize(usable, n_capped, _metadata(config, "star_area", started, m_directions=int(m_directions)))


def _joint_block(config: SimulationConfig, m: int, ids: range) -> list[PerPathRecord]:
    out = []
    for sid in ids:
        s = sample_bm_until_disk_exit(config, sid)
        rec = convex_path_record(s.path.vertices, sid)
        rec.n_steps, rec.capped = s.n_steps, s.capped
        rec.star_area, rec.max_radius = star_path_record(s.path.vertices, m)
        out.append(rec)
    return out


def simulate_path_records(config: SimulationConfig, n_paths: int, m_directions: int,
                          workers: int | None = None) -> list[PerPathRecord]:
    """Convex and star statistics computed on the same stored trajectories."""
    _check_n(m_directions, 8, "m_directions")
    return map_streams(partial(_joint_block, config, int(m_directions)), n_paths, workers)


@dataclass(frozen=True)
class InclusionReport:
    n_checked: int
    violations: list[PerPathRecord]
    mean_star: float
    mean_convex: float

    @property
    def ok(self) -> bool:
        return not self.violations and self.mean_star <= self.mean_convex


def inclusion_check(records: Sequence[PerPathRecord], m_directions: int, master_seed: int | None = None,
                    raise_on_violation: bool = True) -> InclusionReport:
    """Star area <= convex area + (1/2)(2 pi / m) max r^2 on every path."""
    recs = [r for r in records if not r.capped]
    if any(r.star_area is None or r.max_radius is None for r in recs):
        raise ValueError("records need star_area and max_radius")
    h = 2.0 * math.pi / m_directions
    bad = [r for r in recs if r.star_area > r.convex_area + 0.5 * h * r.max_radius**2]
    report = InclusionReport(
        n_checked=len(recs),
        violations=bad,
        mean_star=math.fsum(r.star_area for r in recs) / len(recs),
        mean_convex=math.fsum(r.convex_area for r in recs) / len(recs),
    )
    if bad and raise_on_violation:
        raise InclusionViolation(bad, master_seed)
    return report


# --- topological hull ---------------------------------------------------------


def _topological_block(kill_radius: int, seed: int, ids: range) -> list[int]:
    return [topological_area(sample_lattice_walk(kill_radius, seed, sid)) for sid in ids]


def estimate_topological_area(kill_radius: int, n_walks: int, seed: int,
                              workers: int | None = None) -> EstimatorResult:
    """Enclosed lattice area of killed walks, scaled by kill_radius**-2."""
    _check_n(kill_radius, 10, "kill_radius")
    _check_n(n_walks, 100, "n_walks")
    started = time.perf_counter()
    areas = map_streams(partial(_topological_block, int(kill_radius), int(seed)), n_walks, workers)
    scale = 1.0 / float(kill_radius) ** 2
    md = _metadata(None, "topological_area", started, kill_radius=int(kill_radius), seed=int(seed),
                   generator=GENERATOR_NAME, convention="integer shoelace of the outer edge loop")
    return summarize([a * scale for a in areas], 0, md)
