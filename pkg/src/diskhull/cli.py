"""Command-line entry point.

    diskhull analytic
    diskhull simulate {perimeter,convex-area,star-area,topological-area,cdf}
    diskhull table1
    diskhull cdf-export

Every command writes a JSON result document (or CSV for ``cdf-export``) to
``--out`` or stdout, and exits with status 0 iff all its checks pass.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from typing import Any

import numpy as np

from diskhull import analytic, conformal
from diskhull import estimators as est
from diskhull.config import RunConfig, read_config_file, resolve
from diskhull.quadrature import ConvergenceError, QuadratureSpec
from diskhull.report import REFERENCES, ResultDocument, format_table, write_csv
from diskhull.sampling import GENERATOR_NAME, SimulationConfig

log = logging.getLogger("diskhull")

SIMULATE_TARGETS = ("perimeter", "convex-area", "star-area", "topological-area", "cdf")
_QUANTITY = {
    "perimeter": "convex",
    "convex-area": "convex",
    "cdf": "convex",
    "star-area": "star",
    "topological-area": "topological",
}

# published values, for side-by-side display with the analytic results
ANALYTIC_REFERENCES = {
    "expected_M": 0.511655,
    "expected_perimeter": 3.214826,
    "expected_M_squared": 0.362777,
    "area_lower_bound": 0.474925,
    "area_upper_bound": 1.139699,
    "star_area_exact": 0.474926,
}

STAR_EXPRESSION = "pi - 8/3"


def quadrature_spec(cfg: RunConfig) -> QuadratureSpec:
    return QuadratureSpec(abs_tol=cfg.abs_tol, rel_tol=cfg.rel_tol, max_subdivisions=cfg.max_subdivisions)


def simulation_config(cfg: RunConfig) -> SimulationConfig:
    return SimulationConfig(dt=cfg.dt, master_seed=cfg.seed, boundary_mode=cfg.boundary_mode)


def _parameters(cfg: RunConfig, **extra) -> dict[str, Any]:
    d = cfg.to_dict()
    d.pop("out", None)
    d["generator"] = GENERATOR_NAME
    d.update(extra)
    return d


# --- commands ---------------------------------------------------------------------


def cmd_analytic(cfg: RunConfig) -> ResultDocument:
    spec = quadrature_spec(cfg)
    c = analytic.analytic_constants(spec)
    grid = np.arange(1, 100) / 100.0
    poisson_points = [complex(x, y) for x in (-3.0, -0.5, 0.0, 0.7, 4.0) for y in (0.05, 0.5, 1.0, 3.0)]
    poisson_err = max(
        abs(conformal.poisson_kernel_positive_ray_quadrature(z) - conformal.half_plane_positive_ray_measure(z))
        for z in poisson_points
    )
    results = {
        "expected_M": c.expected_M,
        "expected_M_quadrature": analytic.expected_M(analytic.Method.QUADRATURE, spec),
        "expected_perimeter": c.expected_perimeter,
        "expected_M_squared": c.expected_M_squared,
        "expected_M_squared_via_survival": analytic.expected_M_squared_via_survival(spec),
        "area_lower_bound": c.area_lower_bound,
        "area_upper_bound": c.area_upper_bound,
        "star_area_exact": c.star_area_exact,
        "star_area_expression": STAR_EXPRESSION,
        "star_area_quadrature": analytic.star_area_quadrature(spec),
        "si_pi": analytic.sine_integral(math.pi, spec),
        "si_half_pi": analytic.sine_integral(math.pi / 2, spec),
        "conformal_max_discrepancy": conformal.survival_grid_discrepancy(grid),
        "poisson_kernel_max_discrepancy": poisson_err,
    }
    checks = {f"{k} within 1e-4 of reference": abs(results[k] - v) < 1e-4 for k, v in ANALYTIC_REFERENCES.items()}
    checks["quadrature and closed form of E[M] agree within 1e-10"] = (
        abs(results["expected_M"] - results["expected_M_quadrature"]) < 1e-10
    )
    checks["conformal discrepancy below 1e-12"] = results["conformal_max_discrepancy"] < 1e-12
    checks["Poisson kernel quadrature within 1e-6"] = poisson_err < 1e-6
    return ResultDocument("analytic", _parameters(cfg), results, ANALYTIC_REFERENCES, checks)


def _convex_results(cfg: RunConfig, which: str) -> tuple[dict, dict]:
    sim = simulation_config(cfg)
    batch = est.simulate_convex_batch(sim, cfg.n_paths, cfg.workers)
    c = analytic.analytic_constants(quadrature_spec(cfg))
    checks: dict[str, bool] = {}
    if which == "perimeter":
        r = est.estimate_perimeter(sim, cfg.n_paths, batch=batch)
        return {"perimeter": r.to_dict(), "analytic": c.expected_perimeter}, checks
    if which == "convex-area":
        direct = est.estimate_convex_area_direct(sim, cfg.n_paths, batch=batch)
        bl = est.estimate_convex_area_blaschke(sim, cfg.n_paths, batch=batch)
        lo, hi = c.area_lower_bound, c.area_upper_bound
        checks["direct estimate inside analytic bracket (3 SE)"] = (
            lo + 3 * direct.std_error < direct.mean < hi - 3 * direct.std_error
        )
        checks["Blaschke estimate inside analytic bracket (3 SE)"] = lo + 3 * bl.std_error < bl.mean < hi - 3 * bl.std_error
        results = {
            "convex_area_direct": direct.to_dict(),
            "convex_area_blaschke": bl.to_dict(),
            "lower_bound": lo,
            "upper_bound": hi,
        }
        return results, checks
    law = est.empirical_law_of_M(sim, cfg.n_paths, batch=batch)
    p, se = law.survival_at(0.5)
    if cfg.out:
        write_csv(
            _sibling_csv(cfg.out),
            ["a", "empirical_cdf", "cdf_M"],
            law.table,
            {"command": "simulate cdf", "seed": cfg.seed, "dt": cfg.dt, "n_paths": cfg.n_paths,
             "ks_distance": repr(law.ks_distance)},
        )
    results = {
        "ks_distance": law.ks_distance,
        "n_samples": int(law.samples.size),
        "n_capped_excluded": batch.n_capped,
        "survival_at_half": {"mean": p, "std_error": se},
        "table": {"a": law.table[:, 0], "empirical_cdf": law.table[:, 1], "cdf_M": law.table[:, 2]},
    }
    checks["KS distance below 0.02"] = law.ks_distance < 0.02
    return results, checks


def _sibling_csv(out: str) -> str:
    return out[:-5] + ".csv" if out.endswith(".json") else out + ".csv"


def cmd_simulate(cfg: RunConfig, which: str) -> ResultDocument:
    if which not in SIMULATE_TARGETS:
        raise ValueError(f"unknown simulation target {which!r}")
    checks: dict[str, bool] = {}
    if which in ("perimeter", "convex-area", "cdf"):
        results, checks = _convex_results(cfg, which)
        params = _parameters(cfg)
    elif which == "star-area":
        r = est.estimate_star_area(simulation_config(cfg), cfg.n_paths, cfg.m_directions, cfg.workers)
        results = {"star_area": r.to_dict(), "analytic": analytic.star_area_exact(),
                   "analytic_expression": STAR_EXPRESSION}
        params = _parameters(cfg)
    else:
        r = est.estimate_topological_area(cfg.kill_radius, cfg.n_paths, cfg.seed, cfg.workers)
        upper = analytic.star_area_exact()
        results = {"topological_area": r.to_dict(), "upper_bound": upper}
        checks["estimate inside (0, star-hull area) (3 SE)"] = 3 * r.std_error < r.mean < upper - 3 * r.std_error
        params = _parameters(cfg)
        for k in ("dt", "m_directions", "boundary_mode"):
            params.pop(k)
    results = {k: (v.tolist() if isinstance(v, np.ndarray) else v) for k, v in results.items()}
    if "table" in results:
        results["table"] = {k: np.asarray(v).tolist() for k, v in results["table"].items()}
    return ResultDocument(f"simulate {which}", params, results, REFERENCES[which], checks)


TABLE_HEADER = ("quantity", "lower bound", "true value", "MC estimate", "upper bound", "source")


def cmd_table1(cfgs: dict[str, RunConfig]) -> ResultDocument:
    """All three expected-area estimates beside their analytic bounds."""
    cc, sc, tc = cfgs["convex"], cfgs["star"], cfgs["topological"]
    consts = analytic.analytic_constants(quadrature_spec(cc))
    star_exact = consts.star_area_exact
    convex = est.estimate_convex_area_direct(
        simulation_config(cc), cc.n_paths, batch=est.simulate_convex_batch(simulation_config(cc), cc.n_paths, cc.workers)
    )
    star = est.estimate_star_area(simulation_config(sc), sc.n_paths, sc.m_directions, sc.workers)
    topo = est.estimate_topological_area(tc.kill_radius, tc.n_paths, tc.seed, tc.workers)

    def inside(r, lo, hi):
        return (lo is None or r.mean > lo + 3 * r.std_error) and (hi is None or r.mean < hi - 3 * r.std_error)

    rows = [
        {"quantity": "E[area] convex hull", "lower": consts.area_lower_bound, "true": "?",
         "mc": convex.to_dict(), "upper": consts.area_upper_bound,
         "source": "bounds: star-hull area and pi E[M^2]; MC: shoelace of sampled hull"},
        {"quantity": "E[area] star hull", "lower": "NA", "true": star_exact, "true_expression": STAR_EXPRESSION,
         "mc": star.to_dict(), "upper": "NA",
         "source": "exact: polar integral of the radial law; MC: polar Riemann sum"},
        {"quantity": "E[area] topological hull", "lower": 0.0, "true": "?",
         "mc": topo.to_dict(), "upper": star_exact,
         "source": "bound: inclusion in the star hull; MC: scaled lattice walk"},
    ]
    flags = {
        "convex inside bracket": inside(convex, consts.area_lower_bound, consts.area_upper_bound),
        "topological inside bracket": inside(topo, 0.0, star_exact),
        "ordering topological < star < convex": topo.mean < star.mean < convex.mean,
    }
    for row, key in zip(rows, ("convex inside bracket", None, "topological inside bracket")):
        row["bound_violation"] = False if key is None else not flags[key]
    params = {q: _parameters(c) for q, c in cfgs.items()}
    doc = ResultDocument("table1", params, {"rows": rows},
                         {"convex": 0.6612, "star": 0.4725, "topological": 0.2816}, flags)
    print(format_table(TABLE_HEADER, [
        (r["quantity"], r["lower"], r["true"], f"{r['mc']['mean']:.9g} +/- {r['mc']['std_error']:.2g}"
         + ("  [VIOLATION]" if r["bound_violation"] else ""), r["upper"], r["source"].split(";")[0])
        for r in doc.results["rows"]
    ]), file=sys.stderr)
    return doc


CDF_HEADER = ("a", "cdf_M", "survival_M", "survival_via_conformal", "radial_survival")


def cdf_rows(a_values) -> list[tuple[float, ...]]:
    rows = []
    for a in a_values:
        a = float(a)
        rows.append((a, float(analytic.cdf_M(a)), float(analytic.survival_M(a)),
                     conformal.survival_via_conformal(a), float(analytic.radial_survival(a))))
    return rows


def cmd_cdf_export(cfg: RunConfig, points: list[float] | None = None) -> tuple[str, bool]:
    """CSV of the exact curves; grid a_i = i / (grid + 1), i = 1..grid,
    unless explicit points are given. Returns (text, ok)."""
    if points is None:
        if cfg.grid < 2:
            raise ValueError("grid size must be >= 2")
        points = [i / (cfg.grid + 1) for i in range(1, cfg.grid + 1)]
    rows = cdf_rows(points)
    worst = max(abs(r[2] - r[3]) for r in rows)
    meta = {"command": "cdf-export", "schema_version": 1, "n_points": len(rows),
            "max |survival_M - survival_via_conformal|": repr(worst)}
    text = write_csv(cfg.out, CDF_HEADER, rows, meta)
    return text, worst < 1e-12


# --- argument parsing ---------------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("run parameters")
    g.add_argument("--dt", type=float)
    g.add_argument("--n-paths", type=int)
    g.add_argument("--m-directions", type=int)
    g.add_argument("--kill-radius", type=int)
    g.add_argument("--seed", type=int)
    g.add_argument("--boundary-mode", choices=["first_exterior", "circle_interpolated"])
    g.add_argument("--workers", type=int, help="worker processes (default: $DISKHULL_WORKERS or 1)")
    g.add_argument("--preset", choices=["desk", "paper"])
    g.add_argument("--abs-tol", type=float, help="quadrature absolute tolerance")
    g.add_argument("--rel-tol", type=float, help="quadrature relative tolerance")
    g.add_argument("--max-subdivisions", type=int)
    g.add_argument("--out", help="output path (default: stdout)")
    g.add_argument("--config", help="INI file with [defaults] and per-command sections")
    g.add_argument("-q", "--quiet", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="diskhull", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    _common(sub.add_parser("analytic", help="exact expectations, bounds and oracle discrepancies"))
    p = sub.add_parser("simulate", help="run one Monte Carlo estimator")
    p.add_argument("which", choices=SIMULATE_TARGETS)
    _common(p)
    _common(sub.add_parser("table1", help="expected-area table for the three hulls"))
    p = sub.add_parser("cdf-export", help="CSV of the exact laws of M and r(0)")
    p.add_argument("--grid", type=int, help="number of interior grid points (default 99)")
    p.add_argument("--points", type=float, nargs="+", help="explicit values of a instead of a grid")
    _common(p)
    return parser


_CONFIG_FIELDS = ("dt", "n_paths", "m_directions", "kill_radius", "seed", "boundary_mode", "workers",
                  "preset", "abs_tol", "rel_tol", "max_subdivisions", "out", "grid")


def _effective(args, command: str, quantity: str | None, section_key: str | None = None) -> RunConfig:
    cli = {k: getattr(args, k, None) for k in _CONFIG_FIELDS}
    file_values = read_config_file(args.config, command, section_key) if args.config else {}
    return resolve(quantity, file_values=file_values, cli_values=cli)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    cfg: RunConfig | None = None
    try:
        if args.command == "analytic":
            cfg = _effective(args, "analytic", None)
            doc = cmd_analytic(cfg)
        elif args.command == "simulate":
            cfg = _effective(args, "simulate", _QUANTITY[args.which], args.which)
            doc = cmd_simulate(cfg, args.which)
        elif args.command == "table1":
            cfgs = {q: _effective(args, "table1", q, q) for q in ("convex", "star", "topological")}
            cfg = cfgs["convex"]
            doc = cmd_table1(cfgs)
        else:
            cfg = _effective(args, "cdf-export", None)
            text, ok = cmd_cdf_export(cfg, args.points)
            if cfg.out is None:
                sys.stdout.write(text)
            return 0 if ok else 1
    except ConvergenceError as exc:
        print(f"error: quadrature failed: {exc}", file=sys.stderr)
        return 2
    except (est.EstimationError, ValueError, OSError, KeyError) as exc:
        echo = cfg.to_dict() if cfg is not None else {}
        print(f"error: {exc}\nparameters: {echo}", file=sys.stderr)
        return 2
    doc.write(cfg.out)
    for name, passed in doc.checks.items():
        if not passed:
            log.warning("check failed: %s", name)
    return 0 if doc.ok else 1


if __name__ == "__main__":
    sys.exit(main())
