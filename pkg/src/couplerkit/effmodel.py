"""Effective two-qubit model: net coupling, dressed frequencies, perturbative ZZ.

Detuning conventions: Delta_j = omega_c - omega_j and Sigma_j =
omega_c + omega_j for the coupler-mediated exchange; Delta_12 =
omega_1 - omega_2 for the ZZ expansion.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import NoRootError, ResonanceError
from .squid import SquidParams, upsilon
from .transmon import SystemModel

DEFAULT_RESONANCE_FLOOR = 1e-3   # GHz
ROOT_TOLERANCE = 1e-6            # GHz, 1 kHz
PRESCAN_POINTS = 200


@dataclass(frozen=True)
class EffectiveCoupling:
    """Net |01>-|10> coupling and its coupler-mediated part, GHz."""

    g: float
    g_eff: float
    delta1: float
    delta2: float
    sigma1: float
    sigma2: float


@dataclass(frozen=True)
class ZZBreakdown:
    """Perturbative ZZ: constant second-order term plus flux-dependent remainder."""

    zeta2: float
    zeta34: float
    delta12: float

    @property
    def zeta_total(self) -> float:
        return self.zeta2 + self.zeta34


@dataclass(frozen=True)
class DressedFrequencies:
    omega01_1: float
    omega01_2: float
    omega02_1: float
    omega02_2: float


def _check_floor(name: str, value: float, floor: float) -> None:
    if abs(value) < floor:
        raise ResonanceError(name, value, floor)


def g_net(m: SystemModel, resonance_floor: float = DEFAULT_RESONANCE_FLOOR) -> EffectiveCoupling:
    """Net qubit-qubit coupling g = g12 - g_eff.

    g_eff = (g1c g2c / 2) sum_j (1/Delta_j + 1/Sigma_j).  Raises
    ResonanceError when a qubit-coupler detuning is below ``resonance_floor``.
    """
    d1, d2 = m.omegac - m.omega1, m.omegac - m.omega2
    s1, s2 = m.omegac + m.omega1, m.omegac + m.omega2
    _check_floor("Delta_1", d1, resonance_floor)
    _check_floor("Delta_2", d2, resonance_floor)
    g_eff = 0.5 * m.g1c * m.g2c * (1.0 / d1 + 1.0 / s1 + 1.0 / d2 + 1.0 / s2)
    return EffectiveCoupling(
        g=m.g12 - g_eff, g_eff=g_eff, delta1=d1, delta2=d2, sigma1=s1, sigma2=s2
    )


def dressed_frequencies(
    m: SystemModel,
    resonance_floor: float = DEFAULT_RESONANCE_FLOOR,
    warn_ratio: float = 0.3,
    max_ratio: float = 0.5,
) -> DressedFrequencies:
    """Coupler-dressed 01 and 02 qubit frequencies to second order in g_jc.

    For each qubit (Duffing ladder, coupling g (a c+ + a+ c - a c - a+ c+)):

        w01 = w + g^2/(w - wc) - 2 g^2/(S - eta) + g^2/S
        w02 = 2w - 2 g^2/(D + eta) - 3 g^2/(S - 2 eta) + g^2/S

    with D = wc - w, S = wc + w.  Both reduce to the familiar -g^2/D - g^2/S
    shifts as eta -> 0 and match exact two-mode diagonalization to
    O(g^4/D^3).
    """
    out = {}
    for tag, w, eta, g in (
        ("1", m.omega1, m.eta1, m.g1c),
        ("2", m.omega2, m.eta2, m.g2c),
    ):
        d = m.omegac - w
        s = m.omegac + w
        _check_floor(f"Delta_{tag}", d, resonance_floor)
        _check_floor(f"Delta_{tag} + eta_{tag}", d + eta, resonance_floor)
        _check_floor(f"Sigma_{tag} - eta_{tag}", s - eta, resonance_floor)
        _check_floor(f"Sigma_{tag} - 2 eta_{tag}", s - 2 * eta, resonance_floor)
        ratio = abs(g / d)
        if ratio >= max_ratio:
            raise ResonanceError(f"|g_{tag}c/Delta_{tag}|", ratio, max_ratio)
        if ratio > warn_ratio:
            warnings.warn(
                f"|g_{tag}c/Delta_{tag}| = {ratio:.3f} exceeds the dispersive "
                f"guideline {warn_ratio}",
                stacklevel=2,
            )
        g2 = g * g
        out["01_" + tag] = w - g2 / d - 2.0 * g2 / (s - eta) + g2 / s
        out["02_" + tag] = (
            2.0 * w - 2.0 * g2 / (d + eta) - 3.0 * g2 / (s - 2.0 * eta) + g2 / s
        )
    return DressedFrequencies(
        omega01_1=out["01_1"],
        omega01_2=out["01_2"],
        omega02_1=out["02_1"],
        omega02_2=out["02_2"],
    )


def zz_perturbative(
    m: SystemModel,
    coupler_squid: SquidParams | None = None,
    phi_ec: float = 0.0,
    resonance_floor: float = DEFAULT_RESONANCE_FLOOR,
) -> ZZBreakdown:
    """Perturbative ZZ interaction zeta = zeta2 + zeta34.

    zeta2 = -2 g12^2 (eta1 + eta2) / [(D12 - eta1)(D12 + eta2)] is flux
    independent.  zeta34 carries the explicit 1/Upsilon^2 and 1/Upsilon^4
    coupling-suppression factors; when ``coupler_squid`` is given the model's
    g1c/g2c are interpreted as their zero-flux values and Upsilon is evaluated
    at ``phi_ec``, otherwise Upsilon = 1 (equivalently, pass couplings already
    scaled to the operating flux).
    """
    d12 = m.omega1 - m.omega2
    d1, d2 = m.omegac - m.omega1, m.omegac - m.omega2
    _check_floor("Delta_12", d12, resonance_floor)
    _check_floor("Delta_12 - eta_1", d12 - m.eta1, resonance_floor)
    _check_floor("Delta_12 + eta_2", d12 + m.eta2, resonance_floor)
    _check_floor("Delta_1", d1, resonance_floor)
    _check_floor("Delta_2", d2, resonance_floor)
    _check_floor("Delta_1 + Delta_2 + eta_c", d1 + d2 + m.etac, resonance_floor)

    zeta2 = -2.0 * m.g12**2 * (m.eta1 + m.eta2) / ((d12 - m.eta1) * (d12 + m.eta2))

    ups = 1.0 if coupler_squid is None else upsilon(coupler_squid, phi_ec)
    u2, u4 = ups**2, ups**4
    gg = m.g1c * m.g2c
    zeta34 = (
        -2.0 * m.g12 * gg / u2 * (
            (1.0 / d2) * (1.0 / d12 + 2.0 / (-d12 + m.eta1))
            + (1.0 / d1) * (2.0 / (d12 + m.eta2) - 1.0 / d12)
        )
        - 2.0 * gg**2 / ((d1 + d2 + m.etac) * u4) * (1.0 / d1 + 1.0 / d2) ** 2
        + gg**2 / (d1**2 * u4) * (2.0 / (d12 + m.eta2) - 1.0 / d12 + 1.0 / d2)
        + gg**2 / (d2**2 * u4) * (2.0 / (-d12 + m.eta1) + 1.0 / d12 + 1.0 / d1)
    )
    return ZZBreakdown(zeta2=zeta2, zeta34=zeta34, delta12=d12)


ModelBuilder = Callable[[float], SystemModel]


def _scan(
    f: Callable[[float], float], band: Sequence[float], points: int
) -> tuple[np.ndarray, np.ndarray]:
    lo, hi = band
    if not lo < hi:
        raise ValueError(f"band must satisfy lo < hi, got ({lo}, {hi})")
    xs = np.linspace(lo, hi, points)
    ys = np.empty_like(xs)
    for i, x in enumerate(xs):
        try:
            ys[i] = f(x)
        except ResonanceError:
            ys[i] = np.nan
    return xs, ys


def _refine_brackets(
    f: Callable[[float], float], xs: np.ndarray, ys: np.ndarray, tol: float
) -> list[float]:
    """Brent-refine every sign change; discard brackets that converge onto poles."""
    roots = []
    for i in range(len(xs) - 1):
        ya, yb = ys[i], ys[i + 1]
        if not (np.isfinite(ya) and np.isfinite(yb)):
            continue
        if ya == 0.0:
            # a grid point sitting exactly on zero counts once, unless the
            # curve is identically zero around it
            prev = ys[i - 1] if i > 0 else yb
            if (np.isfinite(prev) and prev != 0.0) or yb != 0.0:
                roots.append(float(xs[i]))
            continue
        if yb == 0.0 or np.sign(ya) == np.sign(yb):
            continue
        try:
            root = brentq(f, xs[i], xs[i + 1], xtol=tol)
            value = f(root)
        except ResonanceError:
            continue  # bracket straddles a resonance pole, not a root
        # a genuine root has |f| far below the bracket values; a pole blows up
        if abs(value) <= min(abs(ya), abs(yb)):
            roots.append(float(root))
    if (
        len(xs) > 1
        and np.isfinite(ys[-1])
        and ys[-1] == 0.0
        and np.isfinite(ys[-2])
        and ys[-2] != 0.0
    ):
        roots.append(float(xs[-1]))
    return roots


def find_zero_g(
    builder: ModelBuilder,
    band: Sequence[float],
    tol: float = ROOT_TOLERANCE,
    prescan_points: int = PRESCAN_POINTS,
    resonance_floor: float = DEFAULT_RESONANCE_FLOOR,
) -> float:
    """Coupler frequency in ``band`` (GHz) where the net coupling vanishes.

    Prescans the band, then refines with Brent's method to ``tol`` (1 kHz by
    default).  Raises NoRootError (with the endpoint couplings) when g does
    not change sign; warns when more than one sign change is seen.
    """

    def f(wc: float) -> float:
        return g_net(builder(wc), resonance_floor).g

    xs, ys = _scan(f, band, prescan_points)
    roots = _refine_brackets(f, xs, ys, tol)
    if not roots:
        finite = np.where(np.isfinite(ys))[0]
        f_lo = ys[finite[0]] if finite.size else float("nan")
        f_hi = ys[finite[-1]] if finite.size else float("nan")
        raise NoRootError((band[0], band[1]), f_lo, f_hi)
    if len(roots) > 1:
        warnings.warn(
            f"net coupling crosses zero {len(roots)} times in "
            f"[{band[0]:.6g}, {band[1]:.6g}] GHz; returning the lowest root",
            stacklevel=2,
        )
    return roots[0]


def find_zero_zz(
    builder: ModelBuilder,
    band: Sequence[float],
    backend: str = "perturbative",
    levels: tuple[int, int, int] = (5, 5, 5),
    tol: float = ROOT_TOLERANCE,
    prescan_points: int = PRESCAN_POINTS,
    resonance_floor: float = DEFAULT_RESONANCE_FLOOR,
) -> list[float]:
    """All coupler frequencies in ``band`` where the ZZ interaction vanishes.

    ``backend`` selects the perturbative expansion or exact diagonalization
    (``"numeric"``, truncated at ``levels`` per mode).  Returns an empty list
    when no roots are found.
    """
    if backend == "perturbative":

        def f(wc: float) -> float:
            return zz_perturbative(builder(wc), resonance_floor=resonance_floor).zeta_total

    elif backend == "numeric":
        from .numdiag import zz_numeric

        def f(wc: float) -> float:
            return zz_numeric(builder(wc), levels)

    else:
        raise ValueError(f"backend must be 'perturbative' or 'numeric', got {backend!r}")

    xs, ys = _scan(f, band, prescan_points)
    return _refine_brackets(f, xs, ys, tol)
