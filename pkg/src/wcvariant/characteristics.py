"""Hazard-potential characteristics and the constrained gear selection.

Two characteristics quantify how much uncontrollable energy a full-torque
drivetrain fault can put into a vehicle:

* friction-circle utilization per axle, (F_perp^2 + F_par^2) / F_mu^2 —
  a value above 1 means the axle's tire forces exceed the friction limit
  and traction is lost;
* normalized acceleration potential, the per-axle ratio of drive force to
  friction limit summed over both axles, for straight-ahead driving where
  no lateral force competes for grip.

All functions are pure and safe to call concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

from .errors import InvalidParameter, ZeroFrictionLimit
from .forces import (
    Axle,
    AxleForces,
    FrictionContext,
    LateralModel,
    VehicleVariant,
    axle_torques,
    friction_limits,
    lateral_forces_decoupled,
    lateral_forces_single_track,
    longitudinal_forces,
    static_normal_loads,
)
from .geometry import steering_geometry

if TYPE_CHECKING:
    from .catalog import Scenario


@dataclass(frozen=True)
class MuPotential:
    """Friction-circle utilization of both axles in one scenario."""

    p_mu_fa: float
    p_mu_ra: float

    def for_axle(self, axle: Axle) -> float:
        return self.p_mu_fa if axle is Axle.FRONT else self.p_mu_ra


@dataclass(frozen=True)
class AccPotential:
    """Acceleration potential of one variant at its selected gear.

    ``feasible`` is True when both axles stay inside the friction circle
    (each component strictly below 1). ``gear_index`` is None for
    dedicated-engine variants, which have no gearbox to sweep.
    """

    p_acc_fa: float
    p_acc_ra: float
    p_acc_total: float
    gear_index: int | None
    feasible: bool

    @property
    def p_mu_fa(self) -> float:
        """Friction-circle utilization of the front axle (no lateral force)."""
        return self.p_acc_fa**2

    @property
    def p_mu_ra(self) -> float:
        """Friction-circle utilization of the rear axle (no lateral force)."""
        return self.p_acc_ra**2


def p_mu_axle(forces: AxleForces) -> float:
    """Friction-circle utilization of one axle; > 1 means traction loss."""
    if forces.f_mu_n == 0:
        raise ZeroFrictionLimit("friction limit is zero, utilization undefined")
    return (forces.f_perp_n**2 + forces.f_par_n**2) / forces.f_mu_n**2


def loss_of_traction_assessment(
    variant: VehicleVariant,
    scenario: "Scenario",
    axle: Axle,
    model: LateralModel = LateralModel.DECOUPLED,
) -> MuPotential:
    """Friction-circle utilization of both axles for a full-torque fault in a curve.

    ``axle`` names the axle whose traction loss frames the use case; both
    potentials are always evaluated because the friction circle applies to
    each axle, and the caller picks the targeted one. The fault applies the
    maximum engine torque, so the largest-ratio (first) gear governs; for
    dedicated-engine variants the fixed ratio pair is used instead.
    """
    if not isinstance(axle, Axle):
        raise InvalidParameter(f"axle must be Axle.FRONT or Axle.REAR, got {axle!r}")
    if scenario.frame.is_straight:
        raise InvalidParameter("loss-of-traction assessment requires a curved scenario")
    geom = steering_geometry(scenario.frame, variant.l_fa_m, variant.l_ra_m)
    t_fa, t_ra = axle_torques(variant, variant.first_gear())
    f_par_fa, f_par_ra = longitudinal_forces(t_fa, t_ra, variant.r_dyn_m)
    if model is LateralModel.DECOUPLED:
        f_perp_fa, f_perp_ra = lateral_forces_decoupled(variant, scenario.frame, geom, f_par_fa)
    else:
        f_perp_fa, f_perp_ra = lateral_forces_single_track(
            variant, scenario.frame, geom, f_par_fa, f_par_ra
        )
    f_n_fa, f_n_ra = static_normal_loads(variant.m_veh_kg, variant.l_fa_m, variant.l_ra_m)
    f_mu_fa, f_mu_ra = friction_limits(FrictionContext(scenario.mu), f_n_fa, f_n_ra)
    return MuPotential(
        p_mu_fa=p_mu_axle(AxleForces(f_par_fa, f_perp_fa, f_n_fa, f_mu_fa)),
        p_mu_ra=p_mu_axle(AxleForces(f_par_ra, f_perp_ra, f_n_ra, f_mu_ra)),
    )


def p_acc_components(
    variant: VehicleVariant, gear_index: int | None, ctx: FrictionContext
) -> tuple[float, float]:
    """Per-axle normalized acceleration potentials (front, rear) for one gear.

    Each component is T_axle * l / (r_dyn * mu * g * m * l_opposite), which
    is algebraically the axle's drive force divided by its friction limit.
    """
    t_fa, t_ra = axle_torques(variant, gear_index)
    wheelbase = variant.wheelbase_m
    denominator = variant.r_dyn_m * ctx.mu * ctx.g_mps2 * variant.m_veh_kg
    return (
        t_fa * wheelbase / (denominator * variant.l_ra_m),
        t_ra * wheelbase / (denominator * variant.l_fa_m),
    )


def acceleration_assessment(variant: VehicleVariant, ctx: FrictionContext) -> AccPotential:
    """Worst-hazard gear selection for a full-torque fault while driving straight.

    Sweeps every populated gear, keeps the gears where both axles stay
    inside the friction circle (each component < 1, strict), and selects
    the feasible gear with the largest total potential; as the potentials
    are linear in the gear ratio that is the largest feasible ratio. Ties
    from duplicated ratios pick the lower gear number, for determinism.

    When no gear is feasible the variant is reported with feasible=False
    and the values of its smallest-ratio gear, so extreme catalog entries
    still rank instead of erroring. Dedicated-engine variants have nothing
    to sweep; their fixed ratio pair is evaluated directly.
    """
    if variant.has_dedicated_engines:
        p_fa, p_ra = p_acc_components(variant, None, ctx)
        return AccPotential(p_fa, p_ra, p_fa + p_ra, None, p_fa < 1 and p_ra < 1)

    best: tuple[float, int, float, float] | None = None
    fallback: tuple[float, int, float, float] | None = None
    for gear, ratio in variant.present_gears():
        p_fa, p_ra = p_acc_components(variant, gear, ctx)
        if fallback is None or ratio < fallback[0]:
            fallback = (ratio, gear, p_fa, p_ra)
        if p_fa < 1 and p_ra < 1:
            total = p_fa + p_ra
            if best is None or total > best[0]:
                best = (total, gear, p_fa, p_ra)
    if best is None:
        _, gear, p_fa, p_ra = fallback
        return AccPotential(p_fa, p_ra, p_fa + p_ra, gear, False)
    total, gear, p_fa, p_ra = best
    return AccPotential(p_fa, p_ra, total, gear, True)
