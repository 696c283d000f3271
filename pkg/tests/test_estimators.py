from __future__ import annotations

import math
import statistics

import numpy as np
import pytest
from scipy.optimize import brentq

from diskhull import analytic
from diskhull import estimators as est
from diskhull.geometry import convex_hull, directional_max
from diskhull.sampling import SimulationConfig, sample_bm_until_disk_exit


def test_summarize_against_statistics_module():
    vals = [0.1, 0.4, 0.35, 0.9, 0.2, 0.55]
    r = est.summarize(vals, n_capped=2, metadata={"k": 1})
    assert r.mean == pytest.approx(statistics.fmean(vals), rel=1e-15)
    se = statistics.stdev(vals) / math.sqrt(len(vals))
    assert r.std_error == pytest.approx(se, rel=1e-14)
    assert r.ci95 == pytest.approx((r.mean - 1.96 * se, r.mean + 1.96 * se))
    assert r.n_samples == 6 and r.n_capped_excluded == 2
    assert est.EstimatorResult.from_dict(r.to_dict()) == r
    with pytest.raises(est.EstimationError):
        est.summarize([1.0])


def test_fsum_reduction_is_order_independent():
    rng = np.random.default_rng(0)
    vals = list(rng.standard_normal(1000) * 1e8 + 1.0)
    assert est.summarize(vals).mean == est.summarize(vals[::-1]).mean


def test_record_of_synthetic_square_path():
    path = [(0, 0), (0.5, 0.0), (0.5, 0.5), (-0.5, 0.5), (-0.5, -0.5), (0.5, -0.5), (0.2, 0.1)]
    rec = est.convex_path_record(path)
    assert rec.perimeter == pytest.approx(4.0)
    assert rec.convex_area == pytest.approx(1.0)
    assert rec.M_sample == directional_max(0.0, path)[0] == 0.5
    assert rec.Y_at_argmax == 0.0  # first of the tied maxima


def test_record_matches_sampled_path():
    cfg = SimulationConfig(dt=1e-4, master_seed=4)
    for sid in range(10):
        v = sample_bm_until_disk_exit(cfg, sid).path.vertices
        rec = est.convex_path_record(v, sid)
        val, idx = directional_max(0.0, v)
        assert rec.M_sample == val and rec.Y_at_argmax == v[idx, 1]
        h = convex_hull(v)
        assert rec.convex_area == h.area and rec.perimeter == h.perimeter


def test_streaming_pass_equals_stored_path():
    cfg = SimulationConfig(dt=2e-5, master_seed=8)  # several chunks per path
    for sid in range(5):
        per, area, m, y, n, capped = est._streamed_convex(cfg, sid)
        s = sample_bm_until_disk_exit(cfg, sid)
        rec = est.convex_path_record(s.path.vertices)
        assert s.n_steps > cfg.chunk_steps or sid > 0
        assert (per, area, m, y) == pytest.approx((rec.perimeter, rec.convex_area, rec.M_sample, rec.Y_at_argmax),
                                                  rel=1e-14, abs=1e-15)
        assert n == s.n_steps and not capped


def test_estimators_on_synthetic_batch():
    rng = np.random.default_rng(1)
    paths = [np.vstack([[0, 0], np.cumsum(rng.standard_normal((50, 2)) * 0.1, axis=0)]) for _ in range(200)]
    batch = est.ConvexBatch.from_paths(paths)
    recs = [est.convex_path_record(p) for p in paths]
    per = est.estimate_perimeter(None, 0, batch=batch)
    assert per.mean == pytest.approx(statistics.fmean(r.perimeter for r in recs), rel=1e-14)
    area = est.estimate_convex_area_direct(None, 0, batch=batch)
    assert area.mean == pytest.approx(statistics.fmean(r.convex_area for r in recs), rel=1e-14)
    bl = est.estimate_convex_area_blaschke(None, 0, batch=batch)
    d = np.array([math.pi * (r.M_sample**2 - r.Y_at_argmax**2) for r in recs])
    assert bl.mean == pytest.approx(d.mean(), rel=1e-12)
    # delta-method SE of a difference of means is the SE of the per-path differences
    assert bl.std_error == pytest.approx(d.std(ddof=1) / math.sqrt(d.size), rel=1e-9)


def test_worker_count_does_not_change_results():
    cfg = SimulationConfig(dt=1e-3, master_seed=77)
    a = est.simulate_convex_batch(cfg, 120, workers=1)
    b = est.simulate_convex_batch(cfg, 120, workers=3)
    for name in ("perimeter", "area", "M", "Y", "n_steps"):
        assert np.array_equal(getattr(a, name), getattr(b, name))
    s1 = est.estimate_star_area(cfg, 120, 90, workers=1)
    s2 = est.estimate_star_area(cfg, 120, 90, workers=2)
    assert s1.mean == s2.mean and s1.std_error == s2.std_error
    t1 = est.estimate_topological_area(12, 150, 3, workers=1)
    t2 = est.estimate_topological_area(12, 150, 3, workers=4)
    assert t1.mean == t2.mean


def test_metadata_is_complete():
    cfg = SimulationConfig(dt=1e-3, master_seed=5)
    r = est.estimate_perimeter(cfg, 100)
    for key in ("dt", "seed", "boundary_mode", "generator", "ci", "wall_time", "max_steps"):
        assert key in r.metadata
    assert r.metadata["seed"] == 5


def test_minimum_sizes_enforced():
    cfg = SimulationConfig(dt=1e-3)
    with pytest.raises(ValueError):
        est.estimate_perimeter(cfg, 10)
    with pytest.raises(ValueError):
        est.empirical_law_of_M(cfg, 500)
    with pytest.raises(ValueError):
        est.estimate_star_area(cfg, 200, 4)


def test_ks_distance_oracle():
    # exact quantiles give the minimal KS distance 1/(2n)
    n = 400
    u = (np.arange(n) + 0.5) / n
    q = np.array([brentq(lambda a: analytic.cdf_M(a) - p, 0.0, 1.0, xtol=1e-15) for p in u])
    assert est.ks_distance(q) == pytest.approx(0.5 / n, abs=1e-12)


def test_empirical_law_table_and_survival():
    cfg = SimulationConfig(dt=1e-3, master_seed=2)
    law = est.empirical_law_of_M(cfg, 1000)
    assert law.table.shape == (101, 3)
    assert np.all(np.diff(law.table[:, 1]) >= 0)
    p, se = law.survival_at(0.5)
    assert se == pytest.approx(math.sqrt(p * (1 - p) / 1000))
    assert 0 <= law.ks_distance <= 1


def test_inclusion_check_flags_bad_record():
    good = est.PerPathRecord(0, 1.0, 0.5, 0.3, 0.0, star_area=0.45, max_radius=0.5)
    bad = est.PerPathRecord(1, 1.0, 0.5, 0.3, 0.0, star_area=0.9, max_radius=0.5)
    assert est.inclusion_check([good], 360).ok
    with pytest.raises(est.InclusionViolation) as info:
        est.inclusion_check([good, bad], 360, master_seed=42)
    assert info.value.master_seed == 42 and [v.stream_id for v in info.value.violations] == [1]
    rep = est.inclusion_check([good, bad], 360, raise_on_violation=False)
    assert not rep.ok and rep.n_checked == 2


def test_inclusion_on_simulated_paths():
    cfg = SimulationConfig(dt=1e-4, master_seed=6)
    recs = est.simulate_path_records(cfg, 100, 360)
    rep = est.inclusion_check(recs, 360, cfg.master_seed)
    assert rep.ok and rep.mean_star < rep.mean_convex


def test_topological_scaling():
    r = est.estimate_topological_area(10, 200, 1)
    assert 0.0 < r.mean < math.pi
    assert r.metadata["kill_radius"] == 10


def test_halving_dt_moves_estimates_toward_targets():
    target_p = analytic.expected_perimeter()
    target_s = analytic.star_area_exact()
    err_p, err_s = [], []
    for dt in (4e-2, 2e-2):
        cfg = SimulationConfig(dt=dt, master_seed=31)
        err_p.append(abs(est.estimate_perimeter(cfg, 20_000).mean - target_p))
        err_s.append(abs(est.estimate_star_area(cfg, 5_000, 360).mean - target_s))
    assert err_p[1] < err_p[0]
    assert err_s[1] < err_s[0]


def test_synthetic_circle_convex_area():
    t = 2 * np.pi * np.arange(360) / 360
    circle = np.column_stack([np.cos(t), np.sin(t)])
    batch = est.ConvexBatch.from_paths([circle, circle])
    r = est.estimate_convex_area_direct(None, 0, batch=batch)
    assert abs(r.mean - math.pi) < 1e-3
    assert r.std_error == 0.0


def test_synthetic_segment_star_area():
    area, rmax = est.star_path_record([(0.0, 0.0), (1.0, 0.0)], 720)
    assert rmax == 1.0
    assert 0.0 < area <= 0.5 * (2 * math.pi / 720)
    assert est.star_path_record([(0.0, 0.0), (1.0, 0.0)], 7200)[0] < area


def test_empirical_mean_of_directional_maximum():
    cfg = SimulationConfig(dt=1e-4, master_seed=9)
    batch = est.simulate_convex_batch(cfg, 4000)
    m = batch.usable("M")
    se = m.std(ddof=1) / math.sqrt(m.size)
    assert abs(m.mean() - analytic.expected_M()) < 3 * se + 0.01
