"""Maximally-discordant-separable-state candidates from MUBs and SIC-POVMs."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .states import DensityMatrix, bloch_ket, make_density, z_set


class UnsupportedDimensionError(ValueError):
    """The requested construction only exists for prime dimensions here."""


class NotASicError(ValueError):
    """A candidate projector family failed the SIC-POVM conditions."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % k for k in range(2, int(math.isqrt(n)) + 1))


@dataclass(frozen=True)
class MubFamily:
    """d+1 mutually unbiased bases; each basis stores its kets as columns."""

    dimension: int
    bases: tuple[np.ndarray, ...]

    def projectors(self) -> np.ndarray:
        """All (d+1)*d rank-1 projectors, shape (n, d, d)."""
        kets = np.concatenate([b.T for b in self.bases], axis=0)
        return np.einsum("ni,nj->nij", kets, kets.conj())


def check_mub(bases) -> tuple[float, float]:
    """Max deviations (within-basis orthonormality, cross-basis overlap from 1/d)."""
    d = bases[0].shape[0]
    within = max(
        float(np.max(np.abs(b.conj().T @ b - np.eye(d)))) for b in bases
    )
    cross = 0.0
    for i in range(len(bases)):
        for j in range(i + 1, len(bases)):
            ov = np.abs(bases[i].conj().T @ bases[j]) ** 2
            cross = max(cross, float(np.max(np.abs(ov - 1.0 / d))))
    return within, cross


def mub_family(d: int) -> MubFamily:
    """Complete set of d+1 MUBs for prime d.

    d=2 uses the three Pauli eigenbases; odd primes use the quadratic-phase
    construction.  Both are verified against the MUB conditions before return.
    """
    if not is_prime(d):
        raise UnsupportedDimensionError(f"MUB construction implemented for prime d only, got {d}")
    if d == 2:
        s = 1.0 / np.sqrt(2.0)
        bases = [
            np.eye(2, dtype=complex),
            np.array([[s, s], [s, -s]], dtype=complex),
            np.array([[s, s], [1j * s, -1j * s]], dtype=complex),
        ]
    else:
        omega = np.exp(2j * np.pi / d)
        k = np.arange(d)
        bases = [np.eye(d, dtype=complex)]
        for a in range(d):
            cols = [omega ** ((a * k * k + b * k) % d) / np.sqrt(d) for b in range(d)]
            bases.append(np.stack(cols, axis=1))
    within, cross = check_mub(bases)
    if within > 1e-10 or cross > 1e-10:
        raise RuntimeError(f"MUB construction failed validation: {within:.2e}, {cross:.2e}")
    return MubFamily(d, tuple(bases))


def rho_max_d(d: int) -> DensityMatrix:
    """Uniform mixture of P (x) P over all d(d+1) MUB projectors."""
    fam = mub_family(d)
    proj = fam.projectors()
    m = np.einsum("nij,nuv->iujv", proj, proj, optimize=True) / (d * (d + 1))
    return make_density(m.reshape(d * d, d * d), (d, d))


@dataclass(frozen=True)
class SicFamily:
    """d^2 rank-1 projectors with uniform pairwise overlap 1/(d+1)."""

    dimension: int
    projectors: np.ndarray  # (d^2, d, d)


def check_sic(dimension: int, projectors: np.ndarray) -> tuple[float, float]:
    """Max deviations (resolution of identity, pairwise overlap from 1/(d+1))."""
    d = dimension
    res = float(np.max(np.abs(projectors.sum(axis=0) / d - np.eye(d))))
    gram = np.einsum("mij,nji->mn", projectors, projectors).real
    off = gram - np.diag(np.diagonal(gram))
    target = (1.0 / (d + 1.0)) * (1.0 - np.eye(d * d))
    overlap = float(np.max(np.abs(off - target)))
    return res, overlap


def sic_tetrahedron() -> SicFamily:
    """The four tetrahedral qubit projectors (the Z-set states)."""
    kets = z_set().a_kets
    proj = np.einsum("ni,nj->nij", kets, kets.conj())
    return SicFamily(2, proj)


def _shift_clock(d: int) -> tuple[np.ndarray, np.ndarray]:
    shift = np.roll(np.eye(d, dtype=complex), 1, axis=0)
    clock = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    return shift, clock


def sic_from_fiducial(d: int, fiducial: np.ndarray, atol: float = 1e-8) -> SicFamily:
    """Weyl-Heisenberg orbit of a fiducial ket, validated as a SIC."""
    f = np.asarray(fiducial, dtype=complex)
    if f.shape != (d,) or abs(np.linalg.norm(f) - 1.0) > 1e-10:
        raise ValueError(f"fiducial must be a unit ket of length {d}")
    shift, clock = _shift_clock(d)
    kets = []
    for p in range(d):
        for q in range(d):
            kets.append(np.linalg.matrix_power(shift, p) @ np.linalg.matrix_power(clock, q) @ f)
    kets = np.array(kets)
    proj = np.einsum("ni,nj->nij", kets, kets.conj())
    res, overlap = check_sic(d, proj)
    if res > atol or overlap > atol:
        raise NotASicError(
            f"orbit is not a SIC-POVM: identity deviation {res:.3e}, "
            f"overlap deviation {overlap:.3e}"
        )
    return SicFamily(d, proj)


def qubit_sic_fiducial() -> np.ndarray:
    """Fiducial whose Weyl-Heisenberg orbit is the qubit tetrahedron SIC."""
    return bloch_ket(math.acos(1.0 / math.sqrt(3.0)), np.pi / 4.0)


def rho_tilde_max_d(d: int, sic: SicFamily) -> DensityMatrix:
    """Uniform mixture of Z (x) Z over the d^2 SIC projectors."""
    if sic.dimension != d:
        raise ValueError(f"SIC family dimension {sic.dimension} does not match d={d}")
    proj = sic.projectors
    m = np.einsum("nij,nuv->iujv", proj, proj, optimize=True) / (d * d)
    return make_density(m.reshape(d * d, d * d), (d, d))
