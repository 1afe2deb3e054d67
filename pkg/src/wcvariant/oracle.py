"""Independent numeric check of the single-track lateral-force closed forms.

The planar balance of a cornering vehicle gives three equations: momentum
along and across the body axis and the yaw moment about the center of
gravity (the yaw-inertia term is closed to zero for the point-mass model).
The longitudinal component determines the yaw acceleration; eliminating it
leaves a 2x2 linear system in the two unknown lateral forces:

    [cb*cd + sb*sd   cb  ] [F_perp_FA]   [-m*V^2/R - sb*F_par_RA - (sb*cd - cb*sd)*F_par_FA]
    [l_fa*cd        -l_ra] [F_perp_RA] = [ l_fa*sd*F_par_FA                                ]

with sb/cb/sd/cd the sine/cosine of the side-slip and steering angles.
Solving this numerically (LU with partial pivoting) is a code path fully
separate from the closed-form expressions in the forces module, which makes
it the reference the closed forms are verified against.

Stationarity is baked in: constant radius, steering and side-slip angle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameter, SingularSystem
from .geometry import CurveFrame, SteeringGeometry
from .forces import VehicleVariant

#: |det| below this times the row-norm product counts as singular.
_SINGULAR_DET_REL = 1e-12

#: Acceptable balance-equation residual relative to the largest row term.
_RESIDUAL_REL = 1e-9


@dataclass(frozen=True, eq=False)
class ForceBalanceSystem:
    """Assembled 2x2 system for the unknowns (F_perp_FA, F_perp_RA)."""

    matrix: np.ndarray      # shape (2, 2)
    rhs: np.ndarray         # shape (2,)
    determinant: float


def assemble_balance_system(
    variant: VehicleVariant,
    frame: CurveFrame,
    geom: SteeringGeometry,
    f_par_fa_n: float,
    f_par_ra_n: float,
) -> ForceBalanceSystem:
    """Build the lateral/yaw balance system for one cornering state."""
    if frame.is_straight:
        raise InvalidParameter("the force balance system requires a curved frame")
    radius = float(frame.radius_m)
    sd, cd = geom.sin_delta, geom.cos_delta
    sb, cb = geom.sin_beta, geom.cos_beta
    matrix = np.array(
        [
            [cb * cd + sb * sd, cb],
            [variant.l_fa_m * cd, -variant.l_ra_m],
        ]
    )
    rhs = np.array(
        [
            -variant.m_veh_kg * frame.speed_mps**2 / radius
            - sb * f_par_ra_n
            - (sb * cd - cb * sd) * f_par_fa_n,
            variant.l_fa_m * sd * f_par_fa_n,
        ]
    )
    if not (np.isfinite(matrix).all() and np.isfinite(rhs).all()):
        raise InvalidParameter("assembled balance system has non-finite entries")
    determinant = float(matrix[0, 0] * matrix[1, 1] - matrix[0, 1] * matrix[1, 0])
    return ForceBalanceSystem(matrix=matrix, rhs=rhs, determinant=determinant)


def oracle_solve_forces(
    variant: VehicleVariant,
    frame: CurveFrame,
    geom: SteeringGeometry,
    f_par_fa_n: float,
    f_par_ra_n: float,
) -> tuple[float, float]:
    """Solve the balance system numerically for (F_perp_FA, F_perp_RA).

    Raises SingularSystem when the determinant vanishes at machine scale or
    when the solution fails the residual check against both assembled
    equations.
    """
    system = assemble_balance_system(variant, frame, geom, f_par_fa_n, f_par_ra_n)
    row_norms = np.linalg.norm(system.matrix, axis=1)
    if abs(system.determinant) < _SINGULAR_DET_REL * row_norms[0] * row_norms[1]:
        raise SingularSystem(
            f"balance system determinant {system.determinant:.3e} is below the scaled threshold"
        )
    solution = np.linalg.solve(system.matrix, system.rhs)
    residual = system.matrix @ solution - system.rhs
    # scale each row by its largest participating term so the check stays
    # meaningful for both tiny and huge force magnitudes
    term_scale = np.maximum(
        np.abs(system.matrix * solution).max(axis=1), np.abs(system.rhs)
    )
    term_scale = np.maximum(term_scale, 1.0)
    if (np.abs(residual) > _RESIDUAL_REL * term_scale).any():
        raise SingularSystem("balance residuals exceed the relative tolerance")
    return float(solution[0]), float(solution[1])
