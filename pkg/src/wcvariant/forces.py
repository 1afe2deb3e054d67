"""Axle-level forces of the single-track drivetrain model.

The module computes, per axle: static normal loads, friction limits, the
longitudinal force delivered through the torque path, and the lateral force
while cornering. Two selectable lateral-force models exist:

* ``lateral_forces_decoupled`` (default for assessments) splits the
  centripetal force between the axles by their static load share and
  expresses the front share in the steered-wheel frame, where the front
  drive force also has a lateral projection.
* ``lateral_forces_single_track`` evaluates the closed-form solution of the
  coupled planar momentum and yaw-moment balance. It is cross-checked
  against an independent numeric solve of the same balance (oracle module).

The two models intentionally give different numbers; never mix values from
both within one assessment. Lateral forces keep their sign throughout; the
hazard characteristics square them, so sign conventions cannot corrupt
results, and reports show magnitudes only where explicitly rounded.

All functions are pure and safe to call concurrently.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import DegenerateGeometry, InvalidGear, InvalidParameter
from .geometry import CurveFrame, SteeringGeometry, _check_number

#: Gravitational acceleration used by every force balance. Fixed, not
#: configurable: the reference results are defined for exactly this value.
GRAVITY_MPS2 = 9.81

#: Relative threshold below which the single-track denominator counts as
#: singular; scaled by radius and wheelbase to stay dimension-consistent.
_SINGULAR_DENOMINATOR_REL = 1e-12


class Axle(enum.Enum):
    FRONT = "front"
    REAR = "rear"


class LateralModel(enum.Enum):
    DECOUPLED = "decoupled"
    SINGLE_TRACK = "single-track"


@dataclass(frozen=True)
class AxleEngine:
    """One dedicated engine driving a single axle through a fixed ratio."""

    t_mot_nm: float  # engine torque
    i: float         # fixed transmission ratio engine -> axle

    def __post_init__(self) -> None:
        t = _check_number(self.t_mot_nm, "t_mot_nm")
        ratio = _check_number(self.i, "i")
        if t < 0 or ratio < 0:
            raise InvalidParameter("dedicated-engine torque and ratio must be >= 0")


@dataclass(frozen=True)
class VehicleVariant:
    """Drivetrain and geometry parameters of one vehicle variant.

    Exactly one engine layout must be populated:

    * single engine: ``t_mot_nm`` plus ``gear_ratios`` and the per-axle
      differential ratios. A zero gear slot marks an absent gear; a zero
      differential ratio marks an undriven axle.
    * dedicated engines: ``engine_fa``/``engine_ra``, each with its own
      fixed ratio. No gearbox fields.

    The drive layout (FWD/RWD/AWD) is derived from which axles can receive
    torque rather than stored, so records cannot contradict themselves.
    """

    name: str
    r_dyn_m: float   # dynamic wheel radius
    l_fa_m: float    # center of gravity -> front axle
    l_ra_m: float    # center of gravity -> rear axle
    m_veh_kg: float  # curb mass
    t_mot_nm: float | None = None
    gear_ratios: tuple[float, ...] = ()
    i_diff_fa: float = 0.0
    i_diff_ra: float = 0.0
    engine_fa: AxleEngine | None = None
    engine_ra: AxleEngine | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.name, str) or not self.name:
            raise InvalidParameter("name must be a non-empty string")
        for attr in ("r_dyn_m", "l_fa_m", "l_ra_m", "m_veh_kg"):
            value = _check_number(getattr(self, attr), attr)
            if value <= 0:
                raise InvalidParameter(f"{attr} must be > 0, got {value!r}")
        object.__setattr__(self, "gear_ratios", tuple(self.gear_ratios))

        dedicated = self.engine_fa is not None or self.engine_ra is not None
        single = self.t_mot_nm is not None
        if dedicated == single:
            raise InvalidParameter(
                f"variant '{self.name}' must populate exactly one engine layout "
                "(single engine xor dedicated engines)"
            )
        if dedicated:
            if self.gear_ratios or self.i_diff_fa or self.i_diff_ra:
                raise InvalidParameter(
                    f"variant '{self.name}': dedicated-engine layout must not carry "
                    "gear_ratios or differential ratios"
                )
            driven = sum(
                e.t_mot_nm * e.i for e in (self.engine_fa, self.engine_ra) if e is not None
            )
            if driven <= 0:
                raise InvalidParameter(f"variant '{self.name}' has no driven axle")
            return

        t_mot = _check_number(self.t_mot_nm, "t_mot_nm")
        if t_mot < 0:
            raise InvalidParameter(f"t_mot_nm must be >= 0, got {t_mot!r}")
        if not self.gear_ratios:
            raise InvalidParameter(f"variant '{self.name}': gear_ratios must not be empty")
        nonzero = []
        for slot, ratio in enumerate(self.gear_ratios, start=1):
            value = _check_number(ratio, f"gear_ratios[{slot}]")
            if value < 0:
                raise InvalidParameter(f"gear_ratios[{slot}] must be >= 0, got {value!r}")
            if value:
                nonzero.append(value)
        if not nonzero:
            raise InvalidParameter(f"variant '{self.name}': gear_ratios needs at least one nonzero entry")
        if any(b >= a for a, b in zip(nonzero, nonzero[1:])):
            raise InvalidParameter(
                f"variant '{self.name}': gear_ratios must be strictly decreasing, got {self.gear_ratios}"
            )
        for attr in ("i_diff_fa", "i_diff_ra"):
            value = _check_number(getattr(self, attr), attr)
            if value < 0:
                raise InvalidParameter(f"{attr} must be >= 0, got {value!r}")
        if not self.i_diff_fa and not self.i_diff_ra:
            raise InvalidParameter(f"variant '{self.name}' has no driven axle")

    @property
    def wheelbase_m(self) -> float:
        return self.l_fa_m + self.l_ra_m

    @property
    def has_dedicated_engines(self) -> bool:
        return self.t_mot_nm is None

    @property
    def drive_layout(self) -> str:
        """``FWD``, ``RWD`` or ``AWD``, derived from which axles get torque."""
        if self.has_dedicated_engines:
            front = self.engine_fa is not None and self.engine_fa.t_mot_nm * self.engine_fa.i > 0
            rear = self.engine_ra is not None and self.engine_ra.t_mot_nm * self.engine_ra.i > 0
        else:
            front = self.i_diff_fa > 0
            rear = self.i_diff_ra > 0
        if front and rear:
            return "AWD"
        return "FWD" if front else "RWD"

    def present_gears(self) -> tuple[tuple[int, float], ...]:
        """(gear number, ratio) for every populated slot, gear numbers 1-based."""
        return tuple(
            (slot, ratio) for slot, ratio in enumerate(self.gear_ratios, start=1) if ratio
        )

    def first_gear(self) -> int | None:
        """Lowest populated gear number; None for dedicated-engine variants."""
        if self.has_dedicated_engines:
            return None
        return self.present_gears()[0][0]


@dataclass(frozen=True)
class FrictionContext:
    """Road-tire friction coefficient paired with the fixed gravity constant.

    Tire geometry influences on friction are deliberately collapsed: mu is
    used as the effective road-tire coefficient directly.
    """

    mu: float
    g_mps2: float = field(default=GRAVITY_MPS2, init=False)

    def __post_init__(self) -> None:
        mu = _check_number(self.mu, "mu")
        if mu <= 0:
            raise InvalidParameter(f"mu must be > 0, got {mu!r}")
        object.__setattr__(self, "mu", mu)


@dataclass(frozen=True)
class AxleForces:
    """Force state of one axle's tire contact patch."""

    f_par_n: float   # longitudinal (drive) force
    f_perp_n: float  # lateral force, signed
    f_n_n: float     # normal load
    f_mu_n: float    # friction limit mu * normal load

    def __post_init__(self) -> None:
        if self.f_n_n < 0 or self.f_mu_n < 0:
            raise InvalidParameter("normal load and friction limit must be >= 0")


def static_normal_loads(m_veh_kg: float, l_fa_m: float, l_ra_m: float) -> tuple[float, float]:
    """Static axle loads (front, rear) of a point mass between the axles.

    Each axle carries the share given by the opposite lever arm, so the sum
    equals the full weight and the moments about the center of gravity
    cancel: F_front * l_fa == F_rear * l_ra.
    """
    for name, value in (("m_veh_kg", m_veh_kg), ("l_fa_m", l_fa_m), ("l_ra_m", l_ra_m)):
        if _check_number(value, name) <= 0:
            raise InvalidParameter(f"{name} must be > 0, got {value!r}")
    weight = m_veh_kg * GRAVITY_MPS2
    wheelbase = l_fa_m + l_ra_m
    return weight * l_ra_m / wheelbase, weight * l_fa_m / wheelbase


def axle_torques(variant: VehicleVariant, gear_index: int | None = None) -> tuple[float, float]:
    """Wheel torque (front, rear) delivered by the engine layout.

    Single-engine variants multiply engine torque by the addressed gear
    ratio and each axle's differential ratio; an undriven axle gets 0.
    Dedicated-engine variants have one fixed ratio per axle and ignore
    ``gear_index``.
    """
    if variant.has_dedicated_engines:
        t_fa = variant.engine_fa.t_mot_nm * variant.engine_fa.i if variant.engine_fa else 0.0
        t_ra = variant.engine_ra.t_mot_nm * variant.engine_ra.i if variant.engine_ra else 0.0
        return t_fa, t_ra
    if gear_index is None:
        raise InvalidGear(f"variant '{variant.name}' needs a gear_index")
    if not isinstance(gear_index, int) or not 1 <= gear_index <= len(variant.gear_ratios):
        raise InvalidGear(
            f"gear {gear_index!r} out of range 1..{len(variant.gear_ratios)} "
            f"for variant '{variant.name}'"
        )
    ratio = variant.gear_ratios[gear_index - 1]
    if ratio == 0:
        raise InvalidGear(f"gear {gear_index} of variant '{variant.name}' is an absent slot")
    torque = variant.t_mot_nm * ratio
    return torque * variant.i_diff_fa, torque * variant.i_diff_ra


def longitudinal_forces(t_fa_nm: float, t_ra_nm: float, r_dyn_m: float) -> tuple[float, float]:
    """Longitudinal tire forces (front, rear) from the axle torques."""
    if _check_number(r_dyn_m, "r_dyn_m") <= 0:
        raise InvalidParameter(f"r_dyn_m must be > 0, got {r_dyn_m!r}")
    return t_fa_nm / r_dyn_m, t_ra_nm / r_dyn_m


def friction_limits(ctx: FrictionContext, f_n_fa_n: float, f_n_ra_n: float) -> tuple[float, float]:
    """Friction-circle radii (front, rear): mu times the normal loads."""
    if f_n_fa_n < 0 or f_n_ra_n < 0:
        raise InvalidParameter("normal loads must be >= 0")
    return ctx.mu * f_n_fa_n, ctx.mu * f_n_ra_n


def lateral_forces_decoupled(
    variant: VehicleVariant,
    frame: CurveFrame,
    geom: SteeringGeometry,
    f_par_fa_n: float,
) -> tuple[float, float]:
    """Lateral axle forces with the centripetal force split by static load share.

    The rear axle carries its share m*V^2/R * l_fa/l in the body frame. The
    front share is expressed in the steered-wheel frame, which also picks up
    the lateral projection of the front drive force:

        F_perp_front = (m*V^2/R * l_ra/l - F_par_front * sin(delta)) / cos(delta)

    Straight frames carry no centripetal force: both values are exactly 0.
    """
    if frame.is_straight:
        return 0.0, 0.0
    centripetal = variant.m_veh_kg * frame.speed_mps**2 / float(frame.radius_m)
    wheelbase = variant.wheelbase_m
    front = (centripetal * variant.l_ra_m / wheelbase - f_par_fa_n * geom.sin_delta) / geom.cos_delta
    rear = centripetal * variant.l_fa_m / wheelbase
    return front, rear


def lateral_forces_single_track(
    variant: VehicleVariant,
    frame: CurveFrame,
    geom: SteeringGeometry,
    f_par_fa_n: float,
    f_par_ra_n: float,
) -> tuple[float, float]:
    """Closed-form lateral forces of the coupled single-track force balance.

    Solves the planar momentum balance and the yaw-moment balance about the
    center of gravity for the two lateral forces, with the steered front
    force rotated into the body frame. Requires a curved frame. Both
    expressions share one denominator; when it falls below a scaled
    machine-epsilon guard the steering configuration is reported as
    degenerate rather than amplified into garbage.
    """
    if frame.is_straight:
        raise InvalidParameter("single-track lateral forces require a curved frame")
    radius = float(frame.radius_m)
    l_fa, l_ra = variant.l_fa_m, variant.l_ra_m
    sin_bd = math.sin(geom.beta_rad - geom.delta_rad)
    cos_bd = math.cos(geom.beta_rad - geom.delta_rad)
    denominator = radius * (l_fa * geom.cos_beta * geom.cos_delta + l_ra * cos_bd)
    if abs(denominator) < _SINGULAR_DENOMINATOR_REL * radius * variant.wheelbase_m:
        raise DegenerateGeometry("steering configuration makes the lateral force balance singular")
    v2m = frame.speed_mps**2 * variant.m_veh_kg
    front = (
        f_par_fa_n * radius * (l_fa * geom.sin_delta * geom.cos_beta - l_ra * sin_bd)
        - f_par_ra_n * radius * l_ra * geom.sin_beta
        - v2m * l_ra
    ) / denominator
    rear = (
        -l_fa
        * (
            f_par_fa_n * radius * geom.sin_beta
            + f_par_ra_n * radius * geom.sin_beta * geom.cos_delta
            + v2m * geom.cos_delta
        )
        / denominator
    )
    return front, rear
