"""Localized arithmetic, transition elements and the ideal side of the correspondence."""
from .fractional import (FractionalIdeal, GradedLadder, IdealAnalysis, build_ideal_Mx, build_ideal_My,
                         gr_y_ladder, isomorphic_ideals, left_idempotent, member, membership_residue, phi_apply, phi_inverse,
                         polynomial_generators, rho_projections, standard_basis, theta1, transition_lambda,
                         unit_ideal)
from .kappa import (KappaMu, check_cocycle, check_functional, concatenates_to_pbw, delta_x, delta_y, f1_x,
                    f1_y, f2, kappa, mu)
from .io import ideal_from_json, ideal_to_json
from .loc import LocX, LocY, mirror_algelem, mirror_ctx

LocElemX = LocX
LocElemY = LocY


def loc_right_mul(e, gen):
    """Right multiplication of a localized element by x, y or ('e', i)."""
    if gen == "x":
        return e.rmul_x()
    if gen == "y":
        return e.rmul_y()
    if isinstance(gen, tuple) and gen[0] == "e":
        return e.rmul_e(gen[1])
    raise ValueError(f"unknown generator {gen!r}")


__all__ = [
    "FractionalIdeal", "GradedLadder", "ideal_from_json", "ideal_to_json", "IdealAnalysis", "KappaMu", "LocElemX", "LocElemY", "LocX", "LocY",
    "build_ideal_Mx", "build_ideal_My", "check_cocycle", "check_functional", "concatenates_to_pbw",
    "delta_x", "delta_y", "f1_x", "f1_y", "f2", "gr_y_ladder", "isomorphic_ideals", "kappa",
    "left_idempotent", "loc_right_mul", "member", "membership_residue", "mirror_algelem", "mirror_ctx", "mu", "phi_apply",
    "phi_inverse", "polynomial_generators", "rho_projections", "standard_basis", "theta1",
    "transition_lambda", "unit_ideal",
]
