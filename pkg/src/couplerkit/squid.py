"""Flux-dependent Josephson energy of an asymmetric two-junction SQUID."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import FluxDomainError


@dataclass(frozen=True)
class SquidParams:
    """Junction energies of the SQUID loop, E/h in GHz, ej_large >= ej_small > 0."""

    ej_large: float
    ej_small: float

    def __post_init__(self):
        if not (self.ej_large >= self.ej_small > 0):
            raise ValueError(
                f"need ej_large >= ej_small > 0, got "
                f"({self.ej_large}, {self.ej_small})"
            )

    @classmethod
    def from_sum_asymmetry(cls, ej_sum: float, asymmetry: float) -> "SquidParams":
        """Construct from the total energy and d = (EJL - EJS)/(EJL + EJS) in [0, 1)."""
        if not (0 <= asymmetry < 1):
            raise ValueError(f"asymmetry must be in [0, 1), got {asymmetry}")
        if not ej_sum > 0:
            raise ValueError(f"ej_sum must be positive, got {ej_sum}")
        return cls(
            ej_large=ej_sum * (1 + asymmetry) / 2,
            ej_small=ej_sum * (1 - asymmetry) / 2,
        )

    @property
    def ej_sum(self) -> float:
        return self.ej_large + self.ej_small

    @property
    def asymmetry(self) -> float:
        return (self.ej_large - self.ej_small) / self.ej_sum


def phase_from_flux_ratio(flux_ratio: float) -> float:
    """Reduced phase phi_e (radians) from the external flux in units of Phi_0."""
    return 2.0 * math.pi * flux_ratio


def ej_of_flux(p: SquidParams, phi_e: float) -> float:
    """Effective Josephson energy at reduced external flux phi_e (radians).

    sqrt(EJS^2 + EJL^2 + 2 EJS EJL cos(phi_e)); 2pi-periodic and even,
    bounded by [EJL - EJS, EJL + EJS].
    """
    arg = (
        p.ej_small**2
        + p.ej_large**2
        + 2.0 * p.ej_small * p.ej_large * math.cos(phi_e)
    )
    return math.sqrt(max(arg, 0.0))


def phi0_of_flux(p: SquidParams, phi_e: float) -> float:
    """Junction-phase offset phi_0 at reduced flux phi_e (radians).

    Equals atan[(EJS - EJL)/(EJS + EJL) tan(phi_e/2)] on (-pi, pi) with
    phi_0(0) = 0; implemented with atan2 on the half-angle so the branch is
    continuous at phi_e = +-pi and beyond (the offset winds rather than
    jumping).  For a symmetric SQUID the offset is identically zero.
    """
    d = p.asymmetry
    if d == 0.0:
        return 0.0
    half = 0.5 * phi_e
    return -math.atan2(d * math.sin(half), math.cos(half))


def upsilon(p: SquidParams, phi_e: float) -> float:
    """Quarter-power coupling suppression factor [EJ(0)/EJ(phi_e)]^(1/4).

    Equals 1 at zero flux and grows as the SQUID energy is reduced; raises
    FluxDomainError where EJ vanishes (symmetric SQUID at phi_e = pi).
    """
    ej = ej_of_flux(p, phi_e)
    if ej <= 0.0:
        raise FluxDomainError(
            f"Josephson energy vanishes at phi_e = {phi_e:.6g} rad"
        )
    return (p.ej_sum / ej) ** 0.25


def flux_for_ej(p: SquidParams, ej: float) -> float:
    """Reduced flux phi_e in [0, pi] at which the SQUID energy equals ej.

    Inverse of ej_of_flux on its decreasing branch; raises FluxDomainError
    outside [EJL - EJS, EJL + EJS].
    """
    lo, hi = p.ej_large - p.ej_small, p.ej_sum
    if not (lo <= ej <= hi):
        raise FluxDomainError(
            f"target energy {ej:.6g} GHz outside the SQUID range "
            f"[{lo:.6g}, {hi:.6g}] GHz"
        )
    cos_phi = (ej**2 - p.ej_large**2 - p.ej_small**2) / (
        2.0 * p.ej_large * p.ej_small
    )
    return math.acos(min(1.0, max(-1.0, cos_phi)))
