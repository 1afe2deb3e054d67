"""Steering geometry of the kinematic single-track model.

Angles are radians, lengths meters, speeds m/s. Unit conversions (km/h,
degrees) happen at I/O boundaries, never here. Everything in this module is
a pure function over immutable values and safe to call concurrently.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DegenerateGeometry, InvalidParameter


class _Straight(enum.Enum):
    """Marker for straight-ahead driving, used instead of an infinite radius."""

    STRAIGHT = "straight"

    def __repr__(self) -> str:
        return self.name


#: Distinguished radius value for driving straight ahead. Kept out of the
#: float domain on purpose: the curved-path formulas are undefined without a
#: finite radius, and no infinity may flow through them.
STRAIGHT = _Straight.STRAIGHT


def _check_number(value: object, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise InvalidParameter(f"{name} must be a finite number, got {value!r}")
    return float(value)


@dataclass(frozen=True)
class CurveFrame:
    """Path a vehicle momentarily follows: a circle of fixed radius, or straight."""

    radius_m: float | _Straight  # curve radius, or STRAIGHT
    speed_mps: float             # momentary velocity

    def __post_init__(self) -> None:
        if self.radius_m is not STRAIGHT:
            radius = _check_number(self.radius_m, "radius_m")
            if radius <= 0:
                raise InvalidParameter(f"radius_m must be STRAIGHT or > 0, got {radius!r}")
            object.__setattr__(self, "radius_m", radius)
        speed = _check_number(self.speed_mps, "speed_mps")
        if speed < 0:
            raise InvalidParameter(f"speed_mps must be >= 0, got {speed!r}")
        object.__setattr__(self, "speed_mps", speed)

    @property
    def is_straight(self) -> bool:
        return self.radius_m is STRAIGHT


@dataclass(frozen=True)
class SteeringGeometry:
    """Derived steering state for one vehicle on one curve frame.

    The trigonometric values are cached because every force expression
    consumes them; callers must treat them as consistent with the angles.
    For a straight frame all angles and the yaw rate are exactly zero.
    """

    delta_rad: float        # Ackermann steering angle
    beta_rad: float         # side-slip angle between body axis and CG velocity
    yaw_rate_radps: float   # speed / radius for curved frames
    sin_delta: float
    cos_delta: float
    sin_beta: float
    cos_beta: float


_STRAIGHT_GEOMETRY = SteeringGeometry(0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0)


def steering_geometry(frame: CurveFrame, l_fa_m: float, l_ra_m: float) -> SteeringGeometry:
    """Ackermann angle, side-slip angle and yaw rate for a curve frame.

    ``l_fa_m`` and ``l_ra_m`` are the distances from the center of gravity to
    the front and rear axle. The rear axle tracks a circle of radius
    sqrt(R^2 - l_ra^2); the wheelbase and the rear arm seen from that circle
    give the two angles:

        tan(delta) = (l_fa + l_ra) / sqrt(R^2 - l_ra^2)
        tan(beta)  = l_ra / sqrt(R^2 - l_ra^2)

    A curved frame requires R > l_ra_m, otherwise the square root collapses
    and the turn has no valid geometry (DegenerateGeometry). The guard is an
    exact comparison, not a tolerance band; callers wanting safety margins
    must validate upstream.
    """
    l_fa = _check_number(l_fa_m, "l_fa_m")
    l_ra = _check_number(l_ra_m, "l_ra_m")
    if l_fa <= 0 or l_ra <= 0:
        raise InvalidParameter(f"axle distances must be > 0, got l_fa_m={l_fa_m!r}, l_ra_m={l_ra_m!r}")
    if frame.is_straight:
        return _STRAIGHT_GEOMETRY

    radius = float(frame.radius_m)
    if radius <= l_ra:
        raise DegenerateGeometry(
            f"curve radius {radius} m must exceed the rear-axle distance {l_ra} m"
        )
    rear_track_radius = math.sqrt(radius * radius - l_ra * l_ra)
    delta = math.atan((l_fa + l_ra) / rear_track_radius)
    beta = math.atan(l_ra / rear_track_radius)
    return SteeringGeometry(
        delta_rad=delta,
        beta_rad=beta,
        yaw_rate_radps=frame.speed_mps / radius,
        sin_delta=math.sin(delta),
        cos_delta=math.cos(delta),
        sin_beta=math.sin(beta),
        cos_beta=math.cos(beta),
    )
