"""Catalog and scenario file formats, bundled fixtures, report serialization.

Formats (all UTF-8, ``.`` decimal separator):

* Catalog JSON::

      {"schema_version": 1,
       "variants": [{"name": str, "t_mot_nm": num, "r_dyn_m": num,
                     "gear_ratios": [num, ...], "i_diff_fa": num,
                     "i_diff_ra": num, "l_fa_m": num, "l_ra_m": num,
                     "m_veh_kg": num}, ...]}

  Dedicated-engine variants replace ``t_mot_nm``, ``gear_ratios`` and the
  differential ratios with ``"engines": {"fa": {"t_mot_nm": num, "i": num},
  "ra": {...}}`` (either axle may be omitted). Unknown fields are rejected;
  only ``schema_version`` 1 is accepted.

* Catalog CSV: header ``name,t_mot_nm,r_dyn_m,i_1,...,i_7,i_diff_fa,
  i_diff_ra,l_fa_m,l_ra_m,m_veh_kg``; one variant per row; single-engine
  layout only. A ``0`` gear slot marks an absent gear.

* Scenario JSON: ``{"name": str, "mu": num, "radius_m": num|"straight",
  "speed_kph": num, "exposure": str}``. Speeds are km/h in files and on the
  CLI and converted once, here, to m/s.

Parsing and serialization are reentrant and keep no global state.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from importlib import resources
from typing import TYPE_CHECKING, Any, Iterable, Mapping

from .characteristics import AccPotential, MuPotential
from .errors import DuplicateName, InvalidParameter, ParseError, ValidationError
from .forces import AxleEngine, VehicleVariant
from .geometry import STRAIGHT, CurveFrame

if TYPE_CHECKING:
    from .analysis import Assessment

SCHEMA_VERSION = 1

CATALOG_CSV_HEADER = (
    "name,t_mot_nm,r_dyn_m,i_1,i_2,i_3,i_4,i_5,i_6,i_7,"
    "i_diff_fa,i_diff_ra,l_fa_m,l_ra_m,m_veh_kg"
)

_COMMON_FIELDS = {"name", "r_dyn_m", "l_fa_m", "l_ra_m", "m_veh_kg"}
_SINGLE_ENGINE_FIELDS = {"t_mot_nm", "gear_ratios", "i_diff_fa", "i_diff_ra"}

#: Display label of the ranked characteristic, keyed by use-case kind value.
CHARACTERISTIC_LABELS = {
    "loss-front": "P_mu_FA",
    "loss-rear": "P_mu_RA",
    "no-loss": "P_acc",
}


@dataclass(frozen=True)
class Scenario:
    """Environmental frame of a use case: friction, path, speed, exposure tag.

    ``exposure_label`` is informational metadata only and never enters
    computation.
    """

    name: str
    mu: float
    frame: CurveFrame
    exposure_label: str = ""

    def __post_init__(self) -> None:
        if not isinstance(self.name, str) or not self.name:
            raise InvalidParameter("scenario name must be a non-empty string")
        if not (isinstance(self.mu, (int, float)) and math.isfinite(self.mu) and self.mu > 0):
            raise InvalidParameter(f"mu must be > 0, got {self.mu!r}")


@dataclass(frozen=True)
class Catalog:
    """Validated collection of variants with unique names."""

    schema_version: int
    variants: tuple[VehicleVariant, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "variants", tuple(self.variants))
        seen: set[str] = set()
        for variant in self.variants:
            if variant.name in seen:
                raise DuplicateName(f"duplicate variant name '{variant.name}'")
            seen.add(variant.name)


def builtin_scenarios() -> tuple[Scenario, Scenario]:
    """The two bundled scenarios.

    * ``low-friction-curve``: tight 90-degree inner-city turn on a slippery
      road (mu 0.4, radius 4 m, 12.12 km/h), exposure class E3. The speed
      ships as the conventional value correlated with that radius; radius
      and speed remain independent inputs and can be overridden.
    * ``normal-friction-straight``: straight-ahead driving at full grip
      (mu 1), exposure class E4.
    """
    return (
        Scenario(
            name="low-friction-curve",
            mu=0.4,
            frame=CurveFrame(radius_m=4.0, speed_mps=12.12 / 3.6),
            exposure_label="E3",
        ),
        Scenario(
            name="normal-friction-straight",
            mu=1.0,
            frame=CurveFrame(radius_m=STRAIGHT, speed_mps=0.0),
            exposure_label="E4",
        ),
    )


def builtin_catalog() -> Catalog:
    """The bundled 13-variant example catalog."""
    data = resources.files("wcvariant").joinpath("data/variants_tables_1_2.json").read_bytes()
    return parse_catalog(data, "json")


def _as_text(data: bytes | str) -> str:
    if isinstance(data, bytes):
        try:
            return data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not valid UTF-8: {exc}") from exc
    return data


def _require_number(obj: Mapping[str, Any], key: str, where: str) -> float:
    if key not in obj:
        raise ValidationError(f"{where}: missing field '{key}'")
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"{where}: field '{key}' must be a number, got {value!r}")
    return float(value)


def parse_variant_object(obj: Any, where: str = "variant") -> VehicleVariant:
    """Validate one variant mapping (catalog JSON schema) into a VehicleVariant."""
    if not isinstance(obj, dict):
        raise ValidationError(f"{where}: expected an object, got {type(obj).__name__}")
    allowed = _COMMON_FIELDS | _SINGLE_ENGINE_FIELDS | {"engines"}
    for key in obj:
        if key not in allowed:
            raise ValidationError(f"{where}: unknown field '{key}'")

    name = obj.get("name")
    if not isinstance(name, str) or not name:
        raise ValidationError(f"{where}: field 'name' must be a non-empty string")
    where = f"{where} ('{name}')"

    dedicated = "engines" in obj
    if dedicated and any(key in obj for key in _SINGLE_ENGINE_FIELDS):
        raise ValidationError(f"{where}: mixes dedicated-engine and single-engine fields")

    kwargs: dict[str, Any] = {
        "name": name,
        "r_dyn_m": _require_number(obj, "r_dyn_m", where),
        "l_fa_m": _require_number(obj, "l_fa_m", where),
        "l_ra_m": _require_number(obj, "l_ra_m", where),
        "m_veh_kg": _require_number(obj, "m_veh_kg", where),
    }
    if dedicated:
        engines = obj["engines"]
        if not isinstance(engines, dict) or not engines:
            raise ValidationError(f"{where}: field 'engines' must be a non-empty object")
        for axle_key in engines:
            if axle_key not in ("fa", "ra"):
                raise ValidationError(f"{where}: unknown engine axle '{axle_key}'")
        for axle_key, attr in (("fa", "engine_fa"), ("ra", "engine_ra")):
            if axle_key not in engines:
                continue
            spec = engines[axle_key]
            if not isinstance(spec, dict):
                raise ValidationError(f"{where}: engine '{axle_key}' must be an object")
            for key in spec:
                if key not in ("t_mot_nm", "i"):
                    raise ValidationError(f"{where}: engine '{axle_key}' has unknown field '{key}'")
            kwargs[attr] = AxleEngine(
                t_mot_nm=_require_number(spec, "t_mot_nm", f"{where} engine '{axle_key}'"),
                i=_require_number(spec, "i", f"{where} engine '{axle_key}'"),
            )
    else:
        kwargs["t_mot_nm"] = _require_number(obj, "t_mot_nm", where)
        gears = obj.get("gear_ratios")
        if not isinstance(gears, list) or not gears:
            raise ValidationError(f"{where}: field 'gear_ratios' must be a non-empty array")
        ratios = []
        for slot, ratio in enumerate(gears, start=1):
            if isinstance(ratio, bool) or not isinstance(ratio, (int, float)):
                raise ValidationError(f"{where}: gear_ratios[{slot}] must be a number, got {ratio!r}")
            ratios.append(float(ratio))
        kwargs["gear_ratios"] = tuple(ratios)
        kwargs["i_diff_fa"] = _require_number(obj, "i_diff_fa", where)
        kwargs["i_diff_ra"] = _require_number(obj, "i_diff_ra", where)

    try:
        return VehicleVariant(**kwargs)
    except InvalidParameter as exc:
        raise ValidationError(f"{where}: {exc}") from exc


def _parse_catalog_json(text: str) -> Catalog:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}",
            line=exc.lineno,
            column=exc.colno,
        ) from exc
    if not isinstance(doc, dict):
        raise ValidationError("catalog root must be an object")
    for key in doc:
        if key not in ("schema_version", "variants"):
            raise ValidationError(f"catalog: unknown field '{key}'")
    version = doc.get("schema_version")
    if not isinstance(version, int) or isinstance(version, bool):
        raise ValidationError("catalog: field 'schema_version' must be an integer")
    if version != SCHEMA_VERSION:
        raise ValidationError(f"catalog: unsupported schema_version {version}, expected {SCHEMA_VERSION}")
    raw_variants = doc.get("variants")
    if not isinstance(raw_variants, list):
        raise ValidationError("catalog: field 'variants' must be an array")
    variants = [
        parse_variant_object(raw, where=f"variants[{index}]")
        for index, raw in enumerate(raw_variants)
    ]
    return Catalog(schema_version=version, variants=tuple(variants))


def _parse_catalog_csv(text: str) -> Catalog:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("empty CSV input", line=1) from None
    if header != CATALOG_CSV_HEADER.split(","):
        raise ParseError(f"CSV header must be exactly '{CATALOG_CSV_HEADER}'", line=1)
    expected_cells = len(header)
    variants = []
    for row in reader:
        line = reader.line_num
        if not row:
            continue
        if len(row) != expected_cells:
            raise ParseError(f"expected {expected_cells} fields, got {len(row)}", line=line)
        name = row[0]
        if not name:
            raise ValidationError(f"line {line}: field 'name' must not be empty")
        numbers = []
        for cell, field_name in zip(row[1:], header[1:]):
            try:
                numbers.append(float(cell))
            except ValueError:
                raise ParseError(
                    f"field '{field_name}' is not a number: {cell!r}", line=line
                ) from None
        try:
            variants.append(
                VehicleVariant(
                    name=name,
                    t_mot_nm=numbers[0],
                    r_dyn_m=numbers[1],
                    gear_ratios=tuple(numbers[2:9]),
                    i_diff_fa=numbers[9],
                    i_diff_ra=numbers[10],
                    l_fa_m=numbers[11],
                    l_ra_m=numbers[12],
                    m_veh_kg=numbers[13],
                )
            )
        except InvalidParameter as exc:
            raise ValidationError(f"line {line} ('{name}'): {exc}") from exc
    return Catalog(schema_version=SCHEMA_VERSION, variants=tuple(variants))


def parse_catalog(data: bytes | str, fmt: str = "json") -> Catalog:
    """Parse and fully validate a catalog; fmt is ``json`` or ``csv``.

    Strict by design: unknown fields, unknown schema versions, duplicate
    names and invariant violations are all rejected with diagnostics naming
    the offending variant and field.
    """
    text = _as_text(data)
    if fmt == "json":
        return _parse_catalog_json(text)
    if fmt == "csv":
        return _parse_catalog_csv(text)
    raise InvalidParameter(f"unknown catalog format {fmt!r}, expected 'json' or 'csv'")


def _variant_to_object(variant: VehicleVariant) -> dict[str, Any]:
    obj: dict[str, Any] = {"name": variant.name}
    if variant.has_dedicated_engines:
        engines: dict[str, Any] = {}
        if variant.engine_fa is not None:
            engines["fa"] = {"t_mot_nm": variant.engine_fa.t_mot_nm, "i": variant.engine_fa.i}
        if variant.engine_ra is not None:
            engines["ra"] = {"t_mot_nm": variant.engine_ra.t_mot_nm, "i": variant.engine_ra.i}
        obj["engines"] = engines
    else:
        obj["t_mot_nm"] = variant.t_mot_nm
        obj["gear_ratios"] = list(variant.gear_ratios)
        obj["i_diff_fa"] = variant.i_diff_fa
        obj["i_diff_ra"] = variant.i_diff_ra
    obj["r_dyn_m"] = variant.r_dyn_m
    obj["l_fa_m"] = variant.l_fa_m
    obj["l_ra_m"] = variant.l_ra_m
    obj["m_veh_kg"] = variant.m_veh_kg
    return obj


def serialize_catalog(catalog: Catalog) -> bytes:
    """Catalog as JSON bytes; parse_catalog(serialize_catalog(c)) == c."""
    doc = {
        "schema_version": catalog.schema_version,
        "variants": [_variant_to_object(v) for v in catalog.variants],
    }
    return (json.dumps(doc, indent=2) + "\n").encode("utf-8")


def parse_scenario(data: bytes | str) -> Scenario:
    """Parse one scenario JSON object; speed is given in km/h."""
    text = _as_text(data)
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}",
            line=exc.lineno,
            column=exc.colno,
        ) from exc
    if not isinstance(obj, dict):
        raise ValidationError("scenario root must be an object")
    for key in obj:
        if key not in ("name", "mu", "radius_m", "speed_kph", "exposure"):
            raise ValidationError(f"scenario: unknown field '{key}'")
    name = obj.get("name")
    if not isinstance(name, str) or not name:
        raise ValidationError("scenario: field 'name' must be a non-empty string")
    radius = obj.get("radius_m")
    if radius == "straight":
        radius = STRAIGHT
    elif isinstance(radius, bool) or not isinstance(radius, (int, float)):
        raise ValidationError("scenario: field 'radius_m' must be a number or \"straight\"")
    speed_kph = _require_number(obj, "speed_kph", "scenario")
    exposure = obj.get("exposure", "")
    if not isinstance(exposure, str):
        raise ValidationError("scenario: field 'exposure' must be a string")
    try:
        return Scenario(
            name=name,
            mu=_require_number(obj, "mu", "scenario"),
            frame=CurveFrame(radius_m=radius, speed_mps=speed_kph / 3.6),
            exposure_label=exposure,
        )
    except InvalidParameter as exc:
        raise ValidationError(f"scenario '{name}': {exc}") from exc


def scenario_to_object(scenario: Scenario) -> dict[str, Any]:
    """Scenario as a JSON-ready mapping (speed back in km/h, 9-decimal rounded)."""
    radius: Any = "straight" if scenario.frame.is_straight else scenario.frame.radius_m
    return {
        "name": scenario.name,
        "mu": scenario.mu,
        "radius_m": radius,
        "speed_kph": round(scenario.frame.speed_mps * 3.6, 9),
        "exposure": scenario.exposure_label,
    }


def serialize_scenario(scenario: Scenario) -> bytes:
    return (json.dumps(scenario_to_object(scenario), indent=2) + "\n").encode("utf-8")


# --- report serialization ---------------------------------------------------


@dataclass(frozen=True)
class ReportHeader:
    """Provenance block at the top of a report.

    All fields are display strings; the CLI passes override flags through
    verbatim so the header records exactly what was requested.
    """

    tool: str
    use_case: str
    model: str
    scenario_name: str
    mu: str
    radius_m: str
    speed_kph: str
    exposure: str

    def lines(self) -> list[str]:
        return [
            f"# tool: {self.tool}",
            f"# use-case: {self.use_case}",
            f"# model: {self.model}",
            f"# scenario: {self.scenario_name} mu={self.mu} radius_m={self.radius_m} "
            f"speed_kph={self.speed_kph} exposure={self.exposure}",
        ]

    def to_object(self) -> dict[str, Any]:
        return {
            "tool": self.tool,
            "use_case": self.use_case,
            "model": self.model,
            "scenario": {
                "name": self.scenario_name,
                "mu": self.mu,
                "radius_m": self.radius_m,
                "speed_kph": self.speed_kph,
                "exposure": self.exposure,
            },
        }


def format_characteristic(value: float) -> str:
    """Fixed 3-decimal display rounding, ties away from zero."""
    return str(Decimal(value).quantize(Decimal("0.001"), rounding=ROUND_HALF_UP))


def gear_label(gear_index: int | None) -> str:
    """Human gear name: 1 -> 1st, 2 -> 2nd, ...; None (no gearbox) ->
    ``fixed``."""
    if gear_index is None:
        return "fixed"
    suffix = {1: "st", 2: "nd", 3: "rd"}.get(gear_index, "th")
    return f"{gear_index}{suffix}"


class _ReportKind(enum.Enum):
    LOSS = "loss"
    ACCEL = "accel"


def _report_kind(assessments: "Iterable[Assessment]") -> _ReportKind:
    kinds = {type(a.detail) for a in assessments}
    if kinds == {MuPotential}:
        return _ReportKind.LOSS
    if kinds == {AccPotential}:
        return _ReportKind.ACCEL
    raise InvalidParameter("report rows must all come from the same use case")


def _csv_quote(name: str) -> str:
    return '"' + name.replace('"', '""') + '"'


def _loss_cells(assessment: "Assessment") -> list[str]:
    detail: MuPotential = assessment.detail
    return [
        assessment.variant_name,
        format_characteristic(detail.p_mu_fa),
        format_characteristic(detail.p_mu_ra),
    ]


def _accel_cells(assessment: "Assessment") -> list[str]:
    detail: AccPotential = assessment.detail
    return [
        assessment.variant_name,
        gear_label(detail.gear_index),
        format_characteristic(detail.p_acc_total),
        format_characteristic(detail.p_acc_fa),
        format_characteristic(detail.p_acc_ra),
        format_characteristic(detail.p_mu_fa),
        format_characteristic(detail.p_mu_ra),
        "yes" if detail.feasible else "no",
    ]


_LOSS_COLUMNS = ["variant", "P_mu_FA", "P_mu_RA"]
_ACCEL_COLUMNS = ["variant", "gear", "P_acc", "P_acc_FA", "P_acc_RA", "P_mu_FA", "P_mu_RA", "feasible"]


def _render_table(columns: list[str], rows: list[list[str]], header: ReportHeader | None) -> str:
    widths = [len(c) for c in columns]
    for row in rows:
        for index, cell in enumerate(row):
            widths[index] = max(widths[index], len(cell))
    lines = [] if header is None else header.lines()

    def render_row(cells: list[str]) -> str:
        parts = [cells[0].ljust(widths[0])]
        parts += [cell.rjust(width) for cell, width in zip(cells[1:], widths[1:])]
        return "  ".join(parts).rstrip()

    lines.append(render_row(columns))
    lines.extend(render_row(row) for row in rows)
    return "\n".join(lines) + "\n"


def _render_csv(columns: list[str], rows: list[list[str]], header: ReportHeader | None) -> str:
    lines = [] if header is None else header.lines()
    lines.append(",".join(columns))
    # variant names are always quoted so commas in names cannot shift columns
    lines.extend(",".join([_csv_quote(row[0])] + row[1:]) for row in rows)
    return "\n".join(lines) + "\n"


def _assessment_to_object(assessment: "Assessment") -> dict[str, Any]:
    detail = assessment.detail
    obj: dict[str, Any] = {
        "variant": assessment.variant_name,
        "use_case": assessment.use_case_kind.value,
        "characteristic": CHARACTERISTIC_LABELS[assessment.use_case_kind.value],
        "value": assessment.characteristic_value,
        "value_display": format_characteristic(assessment.characteristic_value),
        "gear": assessment.gear_index,
        "gear_label": gear_label(assessment.gear_index),
        "feasible": assessment.feasible,
    }
    if isinstance(detail, MuPotential):
        obj["detail"] = {"p_mu_fa": detail.p_mu_fa, "p_mu_ra": detail.p_mu_ra}
    else:
        obj["detail"] = {
            "p_acc_fa": detail.p_acc_fa,
            "p_acc_ra": detail.p_acc_ra,
            "p_acc_total": detail.p_acc_total,
            "p_mu_fa": detail.p_mu_fa,
            "p_mu_ra": detail.p_mu_ra,
        }
    return obj


def serialize_report(
    assessments: "Iterable[Assessment]",
    fmt: str = "table",
    header: ReportHeader | None = None,
) -> bytes:
    """Render assessments as ``table``, ``csv`` or ``json`` bytes.

    Output is deterministic: rows keep the given order, characteristic
    values display with fixed 3-decimal rounding (ties away from zero), and
    the JSON form additionally embeds the full-precision values.
    """
    assessments = list(assessments)
    if not assessments:
        raise InvalidParameter("cannot serialize an empty report")
    if fmt == "json":
        doc: dict[str, Any] = {}
        if header is not None:
            doc["header"] = header.to_object()
        doc["assessments"] = [_assessment_to_object(a) for a in assessments]
        return (json.dumps(doc, indent=2) + "\n").encode("utf-8")

    kind = _report_kind(assessments)
    if kind is _ReportKind.LOSS:
        columns, rows = _LOSS_COLUMNS, [_loss_cells(a) for a in assessments]
    else:
        columns, rows = _ACCEL_COLUMNS, [_accel_cells(a) for a in assessments]
    if fmt == "table":
        return _render_table(columns, rows, header).encode("utf-8")
    if fmt == "csv":
        return _render_csv(columns, rows, header).encode("utf-8")
    raise InvalidParameter(f"unknown report format {fmt!r}, expected 'table', 'csv' or 'json'")
