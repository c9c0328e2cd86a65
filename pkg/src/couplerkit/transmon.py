"""Transmon spectra and coupling rates from charging/coupling energies.

All energies are E/h in GHz and all frequencies are ordinary frequencies
nu = omega/2pi in GHz, so formulas written in angular units carry over
unchanged (only ratios and linear combinations appear).
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, replace

from .capnet import ModeEnergies
from .errors import FluxDomainError
from .squid import SquidParams, ej_of_flux


class TransmonRole(enum.Enum):
    QUBIT_1 = "qubit1"
    QUBIT_2 = "qubit2"
    COUPLER = "coupler"


# below this EJ/EC the transmon expressions degrade; warn, don't refuse
TRANSMON_RATIO_WARNING = 20.0


@dataclass(frozen=True)
class TransmonParams:
    """Charging energy plus SQUID of one transmon-like mode."""

    e_c: float
    squid: SquidParams
    role: TransmonRole

    def __post_init__(self):
        if not self.e_c > 0:
            raise ValueError(f"e_c must be positive, got {self.e_c}")
        if self.squid.ej_sum / self.e_c < TRANSMON_RATIO_WARNING:
            warnings.warn(
                f"{self.role.value}: EJ/EC = {self.squid.ej_sum / self.e_c:.1f} "
                f"at zero flux is below the transmon regime threshold "
                f"{TRANSMON_RATIO_WARNING}",
                stacklevel=2,
            )


@dataclass(frozen=True)
class SystemModel:
    """Three transmon-like modes plus their pairwise coupling rates.

    Frequencies and anharmonicities in GHz (eta stored as positive
    magnitudes); coupling rates signed, in GHz.
    """

    omega1: float
    omega2: float
    omegac: float
    eta1: float
    eta2: float
    etac: float
    g1c: float
    g2c: float
    g12: float

    def __post_init__(self):
        for name in ("omega1", "omega2", "omegac", "eta1", "eta2", "etac"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")

    def swapped_qubits(self) -> "SystemModel":
        """The same system with the qubit labels exchanged."""
        return replace(
            self,
            omega1=self.omega2,
            omega2=self.omega1,
            eta1=self.eta2,
            eta2=self.eta1,
            g1c=self.g2c,
            g2c=self.g1c,
        )


def _require_positive_ej(e_j: float) -> None:
    if e_j <= 0:
        raise FluxDomainError(f"Josephson energy must be positive, got {e_j}")


def frequency_from_energies(e_c: float, e_j: float) -> float:
    """01 transition frequency: sqrt(8 EJ EC) - EC (1 + xi/4), xi = sqrt(2 EC/EJ)."""
    _require_positive_ej(e_j)
    xi = math.sqrt(2.0 * e_c / e_j)
    return math.sqrt(8.0 * e_j * e_c) - e_c * (1.0 + xi / 4.0)


def anharmonicity_from_energies(e_c: float, e_j: float) -> float:
    """Anharmonicity magnitude EC (1 + 9 xi/16)."""
    _require_positive_ej(e_j)
    xi = math.sqrt(2.0 * e_c / e_j)
    return e_c * (1.0 + 9.0 * xi / 16.0)


def zpf_from_energies(e_c: float, e_j: float) -> tuple[float, float]:
    """Zero-point fluctuations (n_zpf, phi_zpf); their product is exactly 1/2."""
    _require_positive_ej(e_j)
    r = (e_j / (8.0 * e_c)) ** 0.25
    return r / math.sqrt(2.0), 1.0 / (r * math.sqrt(2.0))


def transmon_frequency(p: TransmonParams, phi_e: float = 0.0) -> float:
    return frequency_from_energies(p.e_c, ej_of_flux(p.squid, phi_e))


def anharmonicity(p: TransmonParams, phi_e: float = 0.0) -> float:
    return anharmonicity_from_energies(p.e_c, ej_of_flux(p.squid, phi_e))


def zpf(p: TransmonParams, phi_e: float = 0.0) -> tuple[float, float]:
    return zpf_from_energies(p.e_c, ej_of_flux(p.squid, phi_e))


def ej_for_frequency(e_c: float, omega: float) -> float:
    """Josephson energy whose 01 frequency equals ``omega`` (Newton solve)."""
    if not omega > 0:
        raise ValueError(f"omega must be positive, got {omega}")
    e_j = (omega + e_c) ** 2 / (8.0 * e_c)
    for _ in range(100):
        f = frequency_from_energies(e_c, e_j) - omega
        # d/dEJ sqrt(8 EJ EC) dominates; xi-term derivative is negligible
        step = f / math.sqrt(2.0 * e_c / e_j)
        e_j -= step
        if abs(step) < 1e-14 * e_j:
            break
    return e_j


def coupling_rates(
    e: ModeEnergies,
    q1: TransmonParams,
    q2: TransmonParams,
    c: TransmonParams,
    phi_e1: float = 0.0,
    phi_e2: float = 0.0,
    phi_ec: float = 0.0,
    use_xi_correction: bool = True,
) -> tuple[float, float, float]:
    """Coupling rates (g1c, g2c, g12) in GHz from the coupling energies.

    g_jk = (E_jk / sqrt(2)) (EJj/ECj * EJk/ECk)^(1/4), optionally times the
    [1 - (xi_j + xi_k)/8] correction; signs are inherited from the energies.
    """
    ej1 = ej_of_flux(q1.squid, phi_e1)
    ej2 = ej_of_flux(q2.squid, phi_e2)
    ejc = ej_of_flux(c.squid, phi_ec)
    for ej in (ej1, ej2, ejc):
        _require_positive_ej(ej)
    r1, r2, rc = ej1 / q1.e_c, ej2 / q2.e_c, ejc / c.e_c

    def rate(e_jk: float, ra: float, rb: float, eca: float, eja: float,
             ecb: float, ejb: float) -> float:
        g = e_jk / math.sqrt(2.0) * (ra * rb) ** 0.25
        if use_xi_correction:
            xa = math.sqrt(2.0 * eca / eja)
            xb = math.sqrt(2.0 * ecb / ejb)
            g *= 1.0 - (xa + xb) / 8.0
        return g

    g1c = rate(e.e1c, r1, rc, q1.e_c, ej1, c.e_c, ejc)
    g2c = rate(e.e2c, r2, rc, q2.e_c, ej2, c.e_c, ejc)
    g12 = rate(e.e12, r1, r2, q1.e_c, ej1, q2.e_c, ej2)
    return g1c, g2c, g12


def system_model(
    e: ModeEnergies,
    q1: TransmonParams,
    q2: TransmonParams,
    c: TransmonParams,
    phi_e1: float = 0.0,
    phi_e2: float = 0.0,
    phi_ec: float = 0.0,
    use_xi_correction: bool = True,
) -> SystemModel:
    """Assemble the full three-mode model at the given flux biases."""
    ej1 = ej_of_flux(q1.squid, phi_e1)
    ej2 = ej_of_flux(q2.squid, phi_e2)
    ejc = ej_of_flux(c.squid, phi_ec)
    g1c, g2c, g12 = coupling_rates(
        e, q1, q2, c, phi_e1, phi_e2, phi_ec, use_xi_correction
    )
    return SystemModel(
        omega1=frequency_from_energies(q1.e_c, ej1),
        omega2=frequency_from_energies(q2.e_c, ej2),
        omegac=frequency_from_energies(c.e_c, ejc),
        eta1=anharmonicity_from_energies(q1.e_c, ej1),
        eta2=anharmonicity_from_energies(q2.e_c, ej2),
        etac=anharmonicity_from_energies(c.e_c, ejc),
        g1c=g1c,
        g2c=g2c,
        g12=g12,
    )
