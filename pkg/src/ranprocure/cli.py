"""Command-line entry point.

Exit codes: 0 success, 1 data or validation failure, 2 I/O or configuration failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import reports
from .config import ConfigError, load_config
from .game import Margins, compare_scenarios
from .ingest import IngestError, load_counties, validate_counties
from .optimize import ObjectiveSpec, margin_grid_search, per_scenario_search, sensitivity_sweep
from .regions import county_features, diagnostics, kmeans_fit, label_clusters, write_assignment_csv
from .scenarios import Scenario

log = logging.getLogger("ranprocure")

EXIT_OK, EXIT_DATA, EXIT_IO = 0, 1, 2


def _out_dir(args, cfg=None) -> Path:
    out = Path(args.out) if getattr(args, "out", None) else (cfg.output_dir if cfg is not None else Path("out"))
    out.mkdir(parents=True, exist_ok=True)
    return out


def _config(args):
    overrides = list(args.set or [])
    if getattr(args, "theta", None) is not None:
        overrides.append(f"game.theta={args.theta}")
    if getattr(args, "discount_rate", None) is not None:
        overrides.append(f"global.discount_rate={args.discount_rate}")
    if getattr(args, "seed", None) is not None:
        overrides.append(f"seed={args.seed}")
    return load_config(args.config, overrides)


def cmd_validate(args) -> int:
    path = Path(args.data)
    if not path.exists():
        raise FileNotFoundError(f"data file not found: {path}")
    errors = validate_counties(path)
    for e in errors:
        print(e)
    print(f"{len(errors)} errors")
    return EXIT_OK if not errors else EXIT_DATA


def cmd_cluster(args) -> int:
    path = Path(args.data)
    if not path.exists():
        raise FileNotFoundError(f"data file not found: {path}")
    ds = load_counties(path)
    x = county_features(ds)
    out = _out_dir(args)
    fit = kmeans_fit(x, args.k, seed=args.seed, max_iters=args.max_iters)
    names = label_clusters(fit.model)
    (out / "model.json").write_text(fit.model.to_json() + "\n", encoding="utf-8")
    write_assignment_csv(out / "assignment.csv", [c.fips_id for c in ds], [names[i] for i in fit.assignment])
    rows = [
        {"k": k, "wcss": w, "calinski_harabasz": ch}
        for k, w, ch in diagnostics(x, k_max=args.k_max, seed=args.seed)
    ]
    reports.write_csv(out / "diagnostics.csv", rows, ["k", "wcss", "calinski_harabasz"])
    print(f"k={args.k}: WCSS {fit.wcss:.6g} after {fit.n_iter} iterations; outputs in {out}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg = _config(args)
    scenarios = (Scenario.parse(args.scenario),) if args.scenario else cfg.scenarios
    margins = None
    if args.nis_margin is not None or args.oem_margin is not None:
        margins = Margins(args.nis_margin or 0.0, args.oem_margin or 0.0)
    runs = reports.simulate_portfolio(cfg.portfolio, scenarios, cfg.grid, cfg.params, margins)
    out = _out_dir(args, cfg)
    reports.write_csv(out / "payoffs.csv", [reports.run_record(r) for r in runs])
    reports.write_csv(out / "cashflows.csv", reports.cashflow_rows(runs, cfg.params))
    reports.write_json(out / "payoffs.json", reports.simulate_report(runs, cfg.audit()))
    print(f"{len(runs)} runs written to {out}")
    return EXIT_OK


def cmd_compare(args) -> int:
    cfg = _config(args)
    rows = compare_scenarios(cfg.portfolio, cfg.grid, cfg.params)
    out = _out_dir(args, cfg)
    reports.write_csv(out / "comparison.csv", [r.as_dict() for r in rows])
    reports.write_csv(out / "comparison_series.csv", reports.comparison_series(rows), ["x", "series", "y"])
    reports.write_json(out / "comparison.json", reports.comparison_report(rows, cfg.audit()))
    for r in rows:
        pct = "n/a" if r.pct_vs_traditional is None else f"{100 * r.pct_vs_traditional:+.2f}%"
        flag = "  [review]" if r.review_flag else ""
        print(f"{r.region:<12} DirectOEM vs Traditional {pct}{flag}")
    return EXIT_OK


def _spec(cfg) -> ObjectiveSpec:
    return ObjectiveSpec.default(cfg.portfolio, cfg.scenarios, grid=cfg.grid, aggregation=cfg.aggregation)


def _write_sweep(out: Path, cfg, spec, name: str, values) -> None:
    rows = sensitivity_sweep(spec, cfg.params, name, values)
    table = [r.as_dict() for r in rows]
    reports.write_csv(out / f"sweep_{name}.csv", table)
    series = [
        {"x": r.value, "series": key, "y": getattr(r.optimum, key)}
        for r in rows
        for key in ("nis_margin_frac", "oem_margin_frac", "objective_value")
    ]
    reports.write_csv(out / f"sweep_{name}_series.csv", series, ["x", "series", "y"])
    reports.write_json(out / f"sweep_{name}.json", reports.with_header({"parameter": name, "rows": table}, cfg.audit()))


def cmd_optimize(args) -> int:
    cfg = _config(args)
    spec = _spec(cfg)
    opt = margin_grid_search(spec, cfg.params)
    body = {"optimum": opt.as_dict(), "aggregation": cfg.aggregation.value}
    if cfg.per_scenario:
        body["per_scenario"] = {s.value: o.as_dict() for s, o in per_scenario_search(spec, cfg.params).items()}
    out = _out_dir(args, cfg)
    reports.write_json(out / "optimum.json", reports.with_header(body, cfg.audit()))
    reports.write_csv(out / "optimum.csv", [opt.as_dict()])
    for name, values in cfg.sweeps.items():
        _write_sweep(out, cfg, spec, name, values)
    print(
        f"optimum: NIS margin {100 * opt.nis_margin_frac:.2f}%, OEM margin {100 * opt.oem_margin_frac:.2f}%, "
        f"objective {opt.objective_value:,.0f} USD over {opt.evaluations} evaluations"
    )
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = _config(args)
    try:
        values = [float(v) for v in args.values.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"--values must be comma-separated numbers, got {args.values!r}") from None
    out = _out_dir(args, cfg)
    _write_sweep(out, cfg, _spec(cfg), args.param, values)
    print(f"sweep over {args.param} ({len(values)} values) written to {out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ranprocure", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a county CSV")
    p.add_argument("data")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("cluster", help="k-means region clustering with elbow/CH diagnostics")
    p.add_argument("data")
    p.add_argument("--k", type=int, default=8)
    p.add_argument("--k-max", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iters", type=int, default=300)
    p.add_argument("--out", default="out")
    p.set_defaults(func=cmd_cluster)

    def common(p):
        p.add_argument("--config", help="TOML run configuration")
        p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a config key (repeatable)")
        p.add_argument("--theta", type=float)
        p.add_argument("--discount-rate", type=float)
        p.add_argument("--seed", type=int)
        p.add_argument("--out")

    p = sub.add_parser("simulate", help="per-region payoffs for each scenario")
    common(p)
    p.add_argument("--scenario")
    p.add_argument("--nis-margin", type=float)
    p.add_argument("--oem-margin", type=float)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="DirectOEM vs MRAN MNO NPV comparison")
    common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("optimize", help="global margin search plus configured sweeps")
    common(p)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("sweep", help="re-optimize over values of one parameter")
    common(p)
    p.add_argument("--param", required=True)
    p.add_argument("--values", required=True, help="comma-separated values")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (IngestError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
