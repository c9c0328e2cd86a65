"""Exact numerics on the truncated three-mode bosonic Hamiltonian.

Each mode is a Duffing ladder E(n) = omega n - (eta/2) n (n - 1); couplings
keep all four quadrature products g (a b+ + a+ b - a b - a+ b+), i.e. the
counter-rotating terms are always included.  The product-basis index of
|k1, kc, k2> is (k1 * nc + kc) * n2 + k2.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import LabelingError
from .transmon import SystemModel

DEFAULT_LEVELS = (5, 5, 5)
# 3+ levels per mode for production use; 2 is allowed so degenerate-manifold
# checks against analytic two-level spectra stay possible
MIN_LEVELS, MAX_LEVELS = 2, 12
LABEL_OVERLAP_THRESHOLD = 0.5


@dataclass
class TruncatedHamiltonian:
    levels: tuple[int, int, int]
    matrix: np.ndarray

    def index(self, k1: int, kc: int, k2: int) -> int:
        n1, nc, n2 = self.levels
        return (k1 * nc + kc) * n2 + k2


@dataclass
class DressedSpectrum:
    """Eigenvalues (ascending, GHz) with per-state bare labels and overlaps."""

    levels: tuple[int, int, int]
    energies: np.ndarray
    labels: list[tuple[int, int, int]]
    overlaps: np.ndarray

    def energy_of(self, label: tuple[int, int, int]) -> tuple[float, float]:
        """(energy, overlap) of the eigenstate best matching a bare label."""
        best, best_ovl = None, -1.0
        for i, lab in enumerate(self.labels):
            if lab == label and self.overlaps[i] > best_ovl:
                best, best_ovl = i, self.overlaps[i]
        if best is None:
            raise LabelingError(f"no eigenstate is dominated by bare state {label}")
        return float(self.energies[best]), float(best_ovl)

    def is_ambiguous(self, label: tuple[int, int, int]) -> bool:
        try:
            _, ovl = self.energy_of(label)
        except LabelingError:
            return True
        return ovl <= LABEL_OVERLAP_THRESHOLD


@lru_cache(maxsize=32)
def _mode_operators(levels: tuple[int, int, int]):
    n1, nc, n2 = levels
    def a_op(n):
        return np.diag(np.sqrt(np.arange(1, n)), k=1)
    i1, ic, i2 = np.eye(n1), np.eye(nc), np.eye(n2)
    a1 = np.kron(np.kron(a_op(n1), ic), i2)
    ac = np.kron(np.kron(i1, a_op(nc)), i2)
    a2 = np.kron(np.kron(i1, ic), a_op(n2))
    return a1, ac, a2


def build_hamiltonian(
    m: SystemModel, levels: tuple[int, int, int] = DEFAULT_LEVELS
) -> TruncatedHamiltonian:
    """Assemble the truncated Hamiltonian (real symmetric, GHz)."""
    levels = tuple(int(n) for n in levels)
    if len(levels) != 3 or any(not MIN_LEVELS <= n <= MAX_LEVELS for n in levels):
        raise ValueError(
            f"levels must be three integers in [{MIN_LEVELS}, {MAX_LEVELS}], "
            f"got {levels}"
        )
    a1, ac, a2 = _mode_operators(levels)
    h = np.zeros_like(a1)
    for a, w, eta in (
        (a1, m.omega1, m.eta1),
        (ac, m.omegac, m.etac),
        (a2, m.omega2, m.eta2),
    ):
        number = a.T @ a
        h += w * number - 0.5 * eta * (a.T @ a.T @ a @ a)

    def coupling(aa, ab, g):
        return g * (aa @ ab.T + aa.T @ ab - aa @ ab - aa.T @ ab.T)

    h += coupling(a1, ac, m.g1c) + coupling(a2, ac, m.g2c) + coupling(a1, a2, m.g12)
    return TruncatedHamiltonian(levels=levels, matrix=0.5 * (h + h.T))


def dressed_spectrum(h: TruncatedHamiltonian) -> DressedSpectrum:
    """Diagonalize and label each eigenstate by its dominant bare state."""
    energies, vectors = np.linalg.eigh(h.matrix)
    n1, nc, n2 = h.levels
    amplitudes = np.abs(vectors) ** 2
    best = np.argmax(amplitudes, axis=0)
    labels = []
    overlaps = np.empty(len(energies))
    for i in range(len(energies)):
        flat = int(best[i])
        k1, rest = divmod(flat, nc * n2)
        kc, k2 = divmod(rest, n2)
        labels.append((k1, kc, k2))
        overlaps[i] = amplitudes[flat, i]
    return DressedSpectrum(
        levels=h.levels, energies=energies, labels=labels, overlaps=overlaps
    )


_ZZ_LABELS = ((0, 0, 0), (1, 0, 0), (0, 0, 1), (1, 0, 1))


def zz_numeric(m: SystemModel, levels: tuple[int, int, int] = DEFAULT_LEVELS) -> float:
    """ZZ strength w(101) - w(100) - w(001) + w(000) from diagonalization (GHz).

    Raises LabelingError when any of the four computational states cannot be
    identified with overlap above 0.5 (near an avoided crossing).
    """
    spec = dressed_spectrum(build_hamiltonian(m, levels))
    energies = {}
    for label in _ZZ_LABELS:
        energy, overlap = spec.energy_of(label)
        if overlap <= LABEL_OVERLAP_THRESHOLD:
            raise LabelingError(
                f"bare state {label} is ambiguous (overlap {overlap:.3f} <= "
                f"{LABEL_OVERLAP_THRESHOLD})"
            )
        energies[label] = energy
    return (
        energies[(1, 0, 1)]
        - energies[(1, 0, 0)]
        - energies[(0, 0, 1)]
        + energies[(0, 0, 0)]
    )


def g_numeric(m: SystemModel, levels: tuple[int, int, int] = DEFAULT_LEVELS) -> float:
    """Half the splitting of the two qubit-dominated single-excitation states.

    Requires the builder to have put the qubits on resonance; at resonance the
    qubit-like eigenstates are (anti)symmetric superpositions, so states are
    selected by total qubit single-excitation weight rather than a single bare
    label, and the coupler-like branch is excluded.
    """
    if abs(m.omega1 - m.omega2) > 1e-9:
        raise ValueError(
            f"g_numeric needs resonant qubits, got omega1 = {m.omega1}, "
            f"omega2 = {m.omega2}"
        )
    h = build_hamiltonian(m, levels)
    energies, vectors = np.linalg.eigh(h.matrix)
    amplitudes = np.abs(vectors) ** 2
    q_weight = amplitudes[h.index(1, 0, 0), :] + amplitudes[h.index(0, 0, 1), :]
    c_weight = amplitudes[h.index(0, 1, 0), :]
    # a three-way qubit-qubit-coupler hybrid carries at most ~0.55 total qubit
    # weight, so 2/3 cleanly separates qubit-dominated states from it
    candidates = [
        i
        for i in range(len(energies))
        if q_weight[i] > 2.0 / 3.0 and q_weight[i] > c_weight[i]
    ]
    if len(candidates) < 2:
        raise LabelingError(
            "cannot isolate two qubit-dominated single-excitation states "
            "(coupler too close in frequency)"
        )
    candidates.sort(key=lambda i: -q_weight[i])
    i, j = sorted(candidates[:2])
    return 0.5 * abs(energies[j] - energies[i])
