"""Command-line front end.

Subcommands: ``analyze`` (per-variant detail in catalog order), ``rank``
(worst-first table plus a summary line naming the worst-case variant),
``search`` (worst-case parameter combination over a bounded box),
``validate`` (catalog diagnostics) and ``scenarios`` (list built-ins).

Exit codes: 0 success, 1 validation/parse/computation errors, 2 usage
errors. All errors render as a single diagnostic line on stderr and no
partial report is ever written. Reports carry a header block recording the
scenario parameters, model choice and tool version; override flags are
echoed verbatim. Setting the environment variable WCVARIANT_NO_COLOR
disables ANSI styling (used only for the rank summary line on a terminal).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .analysis import (
    ParameterBox,
    SearchConfig,
    SearchResult,
    UseCase,
    UseCaseKind,
    assess_variant,
    rank_catalog,
    worst_case_search,
)
from .catalog import (
    CHARACTERISTIC_LABELS,
    Catalog,
    ReportHeader,
    Scenario,
    builtin_catalog,
    builtin_scenarios,
    format_characteristic,
    parse_catalog,
    parse_variant_object,
    scenario_to_object,
    serialize_report,
)
from .errors import EmptyCatalog, InvalidParameter, ParseError, VariantAnalysisError
from .forces import LateralModel
from .geometry import STRAIGHT, CurveFrame

_VERIFY_TOLERANCE = 1e-9


def _fmt_num(value: float) -> str:
    return f"{value:g}"


def _read_file(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _load_catalog(args: argparse.Namespace) -> Catalog:
    if args.catalog is None:
        return builtin_catalog()
    fmt = args.catalog_format
    if fmt is None:
        fmt = "csv" if args.catalog.lower().endswith(".csv") else "json"
    return parse_catalog(_read_file(args.catalog), fmt)


def _parse_override(parser: argparse.ArgumentParser, flag: str, raw: str, *, straight_ok: bool = False):
    if straight_ok and raw == "straight":
        return STRAIGHT
    try:
        return float(raw)
    except ValueError:
        parser.error(f"argument {flag}: invalid value {raw!r}")


def _effective_use_case(
    args: argparse.Namespace, parser: argparse.ArgumentParser
) -> tuple[UseCase, ReportHeader]:
    kind = UseCaseKind(args.use_case)
    loss_scenario, accel_scenario = builtin_scenarios()
    base = accel_scenario if kind is UseCaseKind.NO_LOSS_ACCEL else loss_scenario

    mu = base.mu if args.mu is None else _parse_override(parser, "--mu", args.mu)
    radius = base.frame.radius_m
    if args.radius_m is not None:
        radius = _parse_override(parser, "--radius-m", args.radius_m, straight_ok=True)
    speed_mps = base.frame.speed_mps
    if args.speed_kph is not None:
        speed_mps = _parse_override(parser, "--speed-kph", args.speed_kph) / 3.6

    try:
        scenario = Scenario(
            name=base.name,
            mu=mu,
            frame=CurveFrame(radius_m=radius, speed_mps=speed_mps),
            exposure_label=base.exposure_label,
        )
        use_case = UseCase(kind=kind, scenario=scenario)
    except InvalidParameter as exc:
        parser.error(str(exc))

    header = ReportHeader(
        tool=f"wcvariant {__version__}",
        use_case=kind.value,
        model=args.model,
        scenario_name=base.name,
        mu=args.mu if args.mu is not None else _fmt_num(scenario.mu),
        radius_m=args.radius_m
        if args.radius_m is not None
        else ("straight" if scenario.frame.is_straight else _fmt_num(scenario.frame.radius_m)),
        speed_kph=args.speed_kph
        if args.speed_kph is not None
        else _fmt_num(scenario.frame.speed_mps * 3.6),
        exposure=scenario.exposure_label,
    )
    return use_case, header


def _check_verify_flags(args: argparse.Namespace, parser: argparse.ArgumentParser) -> None:
    if not args.verify:
        return
    if args.model != LateralModel.SINGLE_TRACK.value:
        parser.error("--verify requires --model single-track")
    if args.use_case == UseCaseKind.NO_LOSS_ACCEL.value:
        parser.error("--verify applies to curved (loss-of-traction) use cases only")


def _run_verify(catalog: Catalog, use_case: UseCase) -> None:
    """Cross-check closed-form lateral forces against the balance solve."""
    from .forces import axle_torques, lateral_forces_single_track, longitudinal_forces
    from .geometry import steering_geometry
    from .oracle import oracle_solve_forces

    frame = use_case.scenario.frame
    worst = 0.0
    for variant in catalog.variants:
        geom = steering_geometry(frame, variant.l_fa_m, variant.l_ra_m)
        t_fa, t_ra = axle_torques(variant, variant.first_gear())
        f_par = longitudinal_forces(t_fa, t_ra, variant.r_dyn_m)
        closed = lateral_forces_single_track(variant, frame, geom, *f_par)
        solved = oracle_solve_forces(variant, frame, geom, *f_par)
        for a, b in zip(closed, solved):
            worst = max(worst, abs(a - b) / max(abs(a), abs(b), 1.0))
    if worst > _VERIFY_TOLERANCE:
        raise InvalidParameter(
            f"closed-form lateral forces deviate from the balance solve by {worst:.3e}"
        )
    print(
        f"verify: closed forms match the balance solve for {len(catalog.variants)} "
        f"variants (max relative deviation {worst:.3e})",
        file=sys.stderr,
    )


def _emit(data: bytes, output: str | None) -> None:
    if output is None:
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        Path(output).write_bytes(data)


def _style_enabled(args: argparse.Namespace) -> bool:
    return (
        args.output is None
        and args.format == "table"
        and sys.stdout.isatty()
        and not os.environ.get("WCVARIANT_NO_COLOR")
    )


def _maybe_figure(args: argparse.Namespace, assessments) -> None:
    if getattr(args, "figure", None):
        from .plots import render_ranking_figure

        render_ranking_figure(assessments, args.figure)


def _guarded_catalog(args: argparse.Namespace) -> Catalog:
    catalog = _load_catalog(args)
    if not catalog.variants:
        raise EmptyCatalog("catalog contains no variants")
    return catalog


def _cmd_analyze(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    _check_verify_flags(args, parser)
    use_case, header = _effective_use_case(args, parser)
    catalog = _guarded_catalog(args)
    model = LateralModel(args.model)
    assessments = [assess_variant(v, use_case, model) for v in catalog.variants]
    if args.verify:
        _run_verify(catalog, use_case)
    body = serialize_report(assessments, args.format, header)
    _maybe_figure(args, assessments)
    _emit(body, args.output)
    return 0


def _cmd_rank(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    _check_verify_flags(args, parser)
    use_case, header = _effective_use_case(args, parser)
    catalog = _guarded_catalog(args)
    model = LateralModel(args.model)
    assessments = rank_catalog(catalog, use_case, model)
    if args.verify:
        _run_verify(catalog, use_case)
    top = assessments[0]
    label = CHARACTERISTIC_LABELS[use_case.kind.value]
    summary = f"worst-case: {top.variant_name} ({label}={format_characteristic(top.characteristic_value)})"

    if args.format == "json":
        doc = json.loads(serialize_report(assessments, "json", header))
        doc["worst_case"] = {
            "variant": top.variant_name,
            "characteristic": label,
            "value": top.characteristic_value,
            "value_display": format_characteristic(top.characteristic_value),
        }
        body = (json.dumps(doc, indent=2) + "\n").encode("utf-8")
    else:
        body = serialize_report(assessments, args.format, header)
        if args.format == "csv":
            summary = "# " + summary
        elif _style_enabled(args):
            summary = f"\x1b[1m{summary}\x1b[0m"
        body += (summary + "\n").encode("utf-8")

    _maybe_figure(args, assessments)
    _emit(body, args.output)
    return 0


def _load_parameter_box(path: str) -> ParameterBox:
    try:
        doc = json.loads(_read_file(path).decode("utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}",
            line=exc.lineno,
            column=exc.colno,
        ) from exc
    if not isinstance(doc, dict):
        raise InvalidParameter("parameter box root must be an object")
    for key in doc:
        if key not in ("base", "intervals"):
            raise InvalidParameter(f"parameter box: unknown field '{key}'")
    if "base" not in doc or "intervals" not in doc:
        raise InvalidParameter("parameter box needs 'base' and 'intervals'")
    base = parse_variant_object(doc["base"], where="box base")
    intervals = doc["intervals"]
    if not isinstance(intervals, dict):
        raise InvalidParameter("parameter box: 'intervals' must be an object")
    return ParameterBox(base=base, intervals=intervals)


def _render_search_table(result: SearchResult, header: ReportHeader, label: str) -> bytes:
    lines = header.lines()
    lines.append(f"characteristic: {label}")
    lines.append(f"best-value: {format_characteristic(result.best_value)}")
    lines.append(f"evaluations: {result.evaluations}")
    lines.append(f"skipped: {result.skipped}")
    lines.append("best-parameters:")
    free = sorted({name for step in result.trace for name in step.parameters})
    for name in free:
        lines.append(f"  {name}: {_fmt_num(getattr(result.best_parameters, name))}")
    lines.append("trace:")
    for step in result.trace:
        params = " ".join(f"{k}={_fmt_num(v)}" for k, v in sorted(step.parameters.items()))
        lines.append(f"  eval {step.evaluation}: {format_characteristic(step.value)} ({params})")
    return ("\n".join(lines) + "\n").encode("utf-8")


def _render_search_json(result: SearchResult, header: ReportHeader, label: str) -> bytes:
    from .catalog import _variant_to_object

    doc = {
        "header": header.to_object(),
        "characteristic": label,
        "best_value": result.best_value,
        "best_value_display": format_characteristic(result.best_value),
        "evaluations": result.evaluations,
        "skipped": result.skipped,
        "best_parameters": _variant_to_object(result.best_parameters),
        "trace": [
            {"evaluation": s.evaluation, "value": s.value, "parameters": dict(sorted(s.parameters.items()))}
            for s in result.trace
        ],
    }
    return (json.dumps(doc, indent=2) + "\n").encode("utf-8")


def _cmd_search(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    use_case, header = _effective_use_case(args, parser)
    box = _load_parameter_box(args.box)
    config = SearchConfig(
        grid_points_per_dim=args.grid_points, refine_rounds=args.refine_rounds
    )
    result = worst_case_search(box, use_case, LateralModel(args.model), config)
    label = CHARACTERISTIC_LABELS[use_case.kind.value]
    if args.format == "json":
        body = _render_search_json(result, header, label)
    else:
        body = _render_search_table(result, header, label)
    _emit(body, args.output)
    return 0


def _cmd_validate(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    catalog = _load_catalog(args)
    lines = [f"ok: {len(catalog.variants)} variants (schema_version {catalog.schema_version})"]
    for variant in catalog.variants:
        if variant.has_dedicated_engines:
            drive = f"{variant.drive_layout}, dedicated engines"
        else:
            drive = f"{variant.drive_layout}, {len(variant.present_gears())} gears"
        lines.append(f"  {variant.name}: {drive}")
    _emit(("\n".join(lines) + "\n").encode("utf-8"), args.output)
    return 0


def _cmd_scenarios(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    scenarios = builtin_scenarios()
    if args.format == "json":
        body = (json.dumps([scenario_to_object(s) for s in scenarios], indent=2) + "\n").encode("utf-8")
    else:
        rows = [
            [
                s.name,
                _fmt_num(s.mu),
                "straight" if s.frame.is_straight else _fmt_num(s.frame.radius_m),
                _fmt_num(s.frame.speed_mps * 3.6),
                s.exposure_label,
            ]
            for s in scenarios
        ]
        columns = ["name", "mu", "radius_m", "speed_kph", "exposure"]
        widths = [max(len(c), *(len(r[i]) for r in rows)) for i, c in enumerate(columns)]
        lines = ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in [columns] + rows]
        body = ("\n".join(lines) + "\n").encode("utf-8")
    _emit(body, args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wcvariant",
        description="Drivetrain hazard-potential analysis and worst-case variant selection.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add_catalog_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--catalog", metavar="PATH", help="catalog file (default: bundled example catalog)")
        p.add_argument(
            "--catalog-format",
            choices=("json", "csv"),
            help="catalog format (default: inferred from the file extension)",
        )

    def add_output_flags(p: argparse.ArgumentParser, formats: tuple[str, ...]) -> None:
        p.add_argument("--format", choices=formats, default="table", help="report format")
        p.add_argument("--output", metavar="PATH", help="write the report to a file instead of stdout")

    def add_use_case_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument(
            "--use-case",
            required=True,
            choices=tuple(k.value for k in UseCaseKind),
            help="fault situation to assess",
        )
        p.add_argument(
            "--model",
            choices=tuple(m.value for m in LateralModel),
            default=LateralModel.DECOUPLED.value,
            help="lateral-force model (default: decoupled)",
        )
        p.add_argument("--mu", metavar="MU", help="override the scenario friction coefficient")
        p.add_argument("--radius-m", metavar="R", help="override the curve radius in meters, or 'straight'")
        p.add_argument("--speed-kph", metavar="V", help="override the scenario speed in km/h")

    for name, func, doc in (
        ("analyze", _cmd_analyze, "assess every catalog variant, in catalog order"),
        ("rank", _cmd_rank, "rank variants worst-first and name the worst case"),
    ):
        p = sub.add_parser(name, help=doc, description=doc)
        add_catalog_flags(p)
        add_use_case_flags(p)
        add_output_flags(p, ("table", "csv", "json"))
        p.add_argument("--figure", metavar="PATH", help="also render the ranking as a bar chart image")
        p.add_argument(
            "--verify",
            action="store_true",
            help="cross-check the single-track closed forms against the balance solve",
        )
        p.set_defaults(func=func)

    p = sub.add_parser(
        "search",
        help="search a parameter box for the worst-case combination",
        description=
        "Search a parameter box for the worst-case combination. The box file is JSON: "
        '{"base": <variant object>, "intervals": {"t_mot_nm": [lo, hi], ...}}.',
    )
    p.add_argument("--box", metavar="PATH", required=True, help="parameter box JSON file")
    add_use_case_flags(p)
    p.add_argument("--grid-points", type=int, default=5, metavar="N", help="grid points per free dimension")
    p.add_argument("--refine-rounds", type=int, default=2, metavar="N", help="grid refinement rounds")
    add_output_flags(p, ("table", "json"))
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("validate", help="validate a catalog and print diagnostics")
    add_catalog_flags(p)
    p.add_argument("--output", metavar="PATH", help="write the diagnostics to a file instead of stdout")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("scenarios", help="list the built-in scenarios")
    add_output_flags(p, ("table", "json"))
    p.set_defaults(func=_cmd_scenarios)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except VariantAnalysisError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    raise SystemExit(main())
