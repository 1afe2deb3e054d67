"""Catalog assessment, ranking, and bounded worst-case parameter search.

The pipeline is: frame a use case (fault kind plus scenario), evaluate the
matching hazard characteristic for each variant, then either rank a fixed
catalog or search a parameter box for the worst combination.

Per-variant evaluations are independent; ``rank_catalog`` and
``worst_case_search`` accept a ``workers`` count and guarantee results
identical to sequential evaluation: work is distributed in a fixed order
and merged by position, never by completion time.
"""

from __future__ import annotations

import enum
import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Mapping

from .catalog import Catalog, Scenario
from .characteristics import (
    AccPotential,
    MuPotential,
    acceleration_assessment,
    loss_of_traction_assessment,
)
from .errors import DegenerateGeometry, EmptyCatalog, InvalidParameter, NoFeasiblePoint
from .forces import Axle, FrictionContext, LateralModel, VehicleVariant


class UseCaseKind(enum.Enum):
    """Fault situations assessed by the tool.

    LOSS_FRONT / LOSS_REAR: full-torque fault in a curve, hazard measured as
    friction-circle utilization of the named axle. NO_LOSS_ACCEL:
    full-torque fault driving straight, hazard measured as the total
    acceleration potential under per-axle traction constraints.
    """

    LOSS_FRONT = "loss-front"
    LOSS_REAR = "loss-rear"
    NO_LOSS_ACCEL = "no-loss"


@dataclass(frozen=True)
class UseCase:
    """A fault kind bound to a concrete scenario.

    Loss-of-traction kinds need a curved scenario; the acceleration kind
    needs a straight one. The mismatch is rejected at construction so no
    half-configured use case reaches an assessment.
    """

    kind: UseCaseKind
    scenario: Scenario

    def __post_init__(self) -> None:
        if self.kind is UseCaseKind.NO_LOSS_ACCEL:
            if not self.scenario.frame.is_straight:
                raise InvalidParameter("the no-loss use case requires a straight scenario")
        elif self.scenario.frame.is_straight:
            raise InvalidParameter("loss-of-traction use cases require a curved scenario")


@dataclass(frozen=True)
class Assessment:
    """Result of one variant under one use case.

    ``characteristic_value`` is the ranked quantity: the targeted axle's
    friction-circle utilization for loss cases, the total acceleration
    potential otherwise. ``detail`` carries the full per-axle record.
    """

    variant_name: str
    use_case_kind: UseCaseKind
    characteristic_value: float
    gear_index: int | None
    detail: MuPotential | AccPotential
    feasible: bool


def assess_variant(
    variant: VehicleVariant,
    use_case: UseCase,
    model: LateralModel = LateralModel.DECOUPLED,
) -> Assessment:
    """Evaluate one variant's hazard characteristic under a use case."""
    if use_case.kind is UseCaseKind.NO_LOSS_ACCEL:
        detail = acceleration_assessment(variant, FrictionContext(use_case.scenario.mu))
        return Assessment(
            variant_name=variant.name,
            use_case_kind=use_case.kind,
            characteristic_value=detail.p_acc_total,
            gear_index=detail.gear_index,
            detail=detail,
            feasible=detail.feasible,
        )
    axle = Axle.FRONT if use_case.kind is UseCaseKind.LOSS_FRONT else Axle.REAR
    potentials = loss_of_traction_assessment(variant, use_case.scenario, axle, model)
    return Assessment(
        variant_name=variant.name,
        use_case_kind=use_case.kind,
        characteristic_value=potentials.for_axle(axle),
        gear_index=variant.first_gear(),
        detail=potentials,
        feasible=True,
    )


def _map_ordered(
    func: Callable, items: list, workers: int
) -> list:
    """Apply func preserving input order, optionally on a thread pool."""
    if workers < 1:
        raise InvalidParameter(f"workers must be >= 1, got {workers!r}")
    if workers == 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


def rank_catalog(
    catalog: Catalog,
    use_case: UseCase,
    model: LateralModel = LateralModel.DECOUPLED,
    workers: int = 1,
) -> list[Assessment]:
    """Assess every catalog variant and order them worst-first.

    The order is a deterministic total order: descending characteristic
    value, ties broken by variant name ascending. The first element is the
    worst-case representative variant. Input order never influences the
    result.
    """
    if not catalog.variants:
        raise EmptyCatalog("catalog contains no variants")
    assessments = _map_ordered(
        lambda variant: assess_variant(variant, use_case, model), list(catalog.variants), workers
    )
    return sorted(assessments, key=lambda a: (-a.characteristic_value, a.variant_name))


#: VehicleVariant fields a ParameterBox may range over. Gear ratios stay
#: fixed per sample: gears are discrete catalog data, and the loss cases are
#: governed by the first gear anyway.
SEARCHABLE_FIELDS = (
    "t_mot_nm",
    "r_dyn_m",
    "i_diff_fa",
    "i_diff_ra",
    "l_fa_m",
    "l_ra_m",
    "m_veh_kg",
)
_DEDICATED_SEARCHABLE = ("r_dyn_m", "l_fa_m", "l_ra_m", "m_veh_kg")


@dataclass(frozen=True)
class ParameterBox:
    """Closed intervals over numeric variant fields around a base variant.

    An interval with lo == hi pins the field to that value. Every sampled
    combination must satisfy the variant invariants; combinations that do
    not are skipped (and counted) rather than failing the search.
    """

    base: VehicleVariant
    intervals: Mapping[str, tuple[float, float]]

    def __post_init__(self) -> None:
        allowed = _DEDICATED_SEARCHABLE if self.base.has_dedicated_engines else SEARCHABLE_FIELDS
        normalized: dict[str, tuple[float, float]] = {}
        for name, bounds in self.intervals.items():
            if name not in allowed:
                raise InvalidParameter(
                    f"field '{name}' is not searchable for this variant layout; "
                    f"allowed: {', '.join(allowed)}"
                )
            try:
                lo, hi = bounds
            except (TypeError, ValueError):
                raise InvalidParameter(f"interval for '{name}' must be a (lo, hi) pair") from None
            lo, hi = float(lo), float(hi)
            if not lo <= hi:
                raise InvalidParameter(f"interval for '{name}' must satisfy lo <= hi, got [{lo}, {hi}]")
            normalized[name] = (lo, hi)
        object.__setattr__(self, "intervals", normalized)


@dataclass(frozen=True)
class SearchConfig:
    grid_points_per_dim: int = 5
    refine_rounds: int = 2

    def __post_init__(self) -> None:
        if self.grid_points_per_dim < 2:
            raise InvalidParameter("grid_points_per_dim must be >= 2")
        if self.refine_rounds < 0:
            raise InvalidParameter("refine_rounds must be >= 0")


@dataclass(frozen=True)
class SearchStep:
    """One improvement of the incumbent during a search."""

    evaluation: int               # 1-based count of evaluated samples so far
    value: float
    parameters: Mapping[str, float]  # free-field values of the new incumbent


@dataclass(frozen=True)
class SearchResult:
    best_parameters: VehicleVariant
    best_value: float
    evaluations: int  # unique valid samples evaluated
    skipped: int      # samples rejected by variant invariants or geometry
    trace: tuple[SearchStep, ...] = field(default_factory=tuple)


def _grid_points(lo: float, hi: float, count: int) -> list[float]:
    # endpoints are returned exactly so corner results stay bit-identical
    if count == 1 or lo == hi:
        return [lo]
    step = (hi - lo) / (count - 1)
    return [lo] + [lo + i * step for i in range(1, count - 1)] + [hi]


def worst_case_search(
    box: ParameterBox,
    use_case: UseCase,
    model: LateralModel = LateralModel.DECOUPLED,
    config: SearchConfig | None = None,
    workers: int = 1,
) -> SearchResult:
    """Deterministic maximization of the hazard characteristic over a box.

    Strategy: evaluate every box corner, then a full-factorial grid
    (``grid_points_per_dim`` points per free dimension), then
    ``refine_rounds`` rounds of a grid over a window shrunk by factor 2
    around the incumbent (clipped to the box). The characteristics in scope
    are smooth and largely monotone in each parameter, so corners plus a
    refined grid find the maximum; determinism is worth more here than
    optimizer sophistication. Each distinct sample is evaluated once; ties
    keep the earliest sample in enumeration order.

    Raises NoFeasiblePoint when every sampled combination is invalid.
    """
    config = config or SearchConfig()
    free = sorted(name for name, (lo, hi) in box.intervals.items() if lo < hi)
    fixed = {name: lo for name, (lo, hi) in box.intervals.items() if lo == hi}

    best_value: float | None = None
    best_sample: dict[str, float] | None = None
    evaluations = 0
    skipped = 0
    seen: set[tuple[float, ...]] = set()
    trace: list[SearchStep] = []

    def build(sample: dict[str, float]) -> VehicleVariant | None:
        try:
            return replace(box.base, **{**fixed, **sample})
        except InvalidParameter:
            return None

    def evaluate(variant: VehicleVariant | None) -> float | None:
        if variant is None:
            return None
        try:
            return assess_variant(variant, use_case, model).characteristic_value
        except (InvalidParameter, DegenerateGeometry):
            return None

    def run_batch(samples: list[dict[str, float]]) -> None:
        nonlocal best_value, best_sample, evaluations, skipped
        fresh = []
        for sample in samples:
            key = tuple(sample[name] for name in free)
            if key not in seen:
                seen.add(key)
                fresh.append(sample)
        values = _map_ordered(evaluate, [build(s) for s in fresh], workers)
        for sample, value in zip(fresh, values):
            if value is None:
                skipped += 1
                continue
            evaluations += 1
            if best_value is None or value > best_value:
                best_value = value
                best_sample = sample
                trace.append(SearchStep(evaluations, value, dict(sample)))

    def factorial(bounds: dict[str, tuple[float, float]], points: int) -> list[dict[str, float]]:
        axes = [_grid_points(*bounds[name], points) for name in free]
        return [dict(zip(free, combo)) for combo in itertools.product(*axes)]

    full_bounds = {name: box.intervals[name] for name in free}
    run_batch(factorial(full_bounds, 2))  # corners
    run_batch(factorial(full_bounds, config.grid_points_per_dim))

    window = dict(full_bounds)
    for _ in range(config.refine_rounds):
        if best_sample is None or not free:
            break
        shrunk = {}
        for name in free:
            lo, hi = box.intervals[name]
            half_span = (window[name][1] - window[name][0]) / 4
            center = best_sample[name]
            shrunk[name] = (max(lo, center - half_span), min(hi, center + half_span))
        window = shrunk
        run_batch(factorial(window, config.grid_points_per_dim))

    if best_value is None or best_sample is None:
        raise NoFeasiblePoint("every sampled parameter combination was invalid")
    best_variant = build(best_sample)
    assert best_variant is not None
    return SearchResult(
        best_parameters=best_variant,
        best_value=best_value,
        evaluations=evaluations,
        skipped=skipped,
        trace=tuple(trace),
    )
