"""Local-operator correlation matrix and the rank criterion for genuine discord.

A bipartite state expands as sum_mn r_mn A_m (x) B_n over trace-orthonormal
Hermitian bases.  States whose correlation-matrix rank exceeds the smaller
subsystem dimension carry correlations that no classical state on the same
spaces can reproduce, so their discord cannot be created by local operations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import numerical_rank, svd_values
from .states import DensityMatrix

RANK_REL_TOL = 1e-8


@dataclass(frozen=True)
class HermitianBasis:
    """d^2 Hermitian operators with tr(A_m A_n) = delta_mn."""

    dimension: int
    operators: np.ndarray  # (d^2, d, d)


def hermitian_basis(d: int) -> HermitianBasis:
    """Normalized identity plus the generalized Gell-Mann family."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    ops = [np.eye(d, dtype=complex) / np.sqrt(d)]
    for k in range(1, d):
        for j in range(k):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = m[k, j] = 1.0 / np.sqrt(2.0)
            ops.append(m)
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = -1j / np.sqrt(2.0)
            m[k, j] = 1j / np.sqrt(2.0)
            ops.append(m)
    for k in range(1, d):
        m = np.zeros((d, d), dtype=complex)
        m[np.arange(k), np.arange(k)] = 1.0
        m[k, k] = -float(k)
        ops.append(m / np.sqrt(k * (k + 1)))
    return HermitianBasis(d, np.stack(ops, axis=0))


@dataclass(frozen=True)
class CorrelationMatrix:
    entries: np.ndarray  # real, (d_a^2, d_b^2)
    singular_values: np.ndarray
    rank: int
    f_ops: np.ndarray  # (rank, d_a, d_a): left singular basis operators
    g_ops: np.ndarray  # (rank, d_b, d_b): right singular basis operators


def correlation_matrix(rho: DensityMatrix) -> CorrelationMatrix:
    """Coefficients r_mn = tr[rho (A_m (x) B_n)] and their singular structure."""
    if len(rho.dims) != 2:
        raise ValueError(f"correlation matrix needs a bipartite state, got dims {rho.dims}")
    da, db = rho.dims
    ba = hermitian_basis(da).operators
    bb = hermitian_basis(db).operators
    t = rho.mat.reshape(da, db, da, db)
    r = np.einsum("iujv,mji,nvu->mn", t, ba, bb, optimize=True)
    if np.max(np.abs(r.imag)) > 1e-10:
        raise ValueError("correlation coefficients are not real; state is not Hermitian?")
    r = r.real
    u, s, vt = np.linalg.svd(r)
    rank = numerical_rank(s, RANK_REL_TOL)
    f_ops = np.einsum("ml,mij->lij", u[:, :rank], ba)
    g_ops = np.einsum("ln,nij->lij", vt[:rank, :], bb)
    return CorrelationMatrix(r, s, rank, f_ops, g_ops)


@dataclass(frozen=True)
class GenuinenessReport:
    genuine: bool
    rank: int
    d_min: int


def is_genuinely_quantum(rho: DensityMatrix) -> GenuinenessReport:
    """Rank criterion: correlations exceed what any classical state could carry.

    On equal-dimension parties every classical (CQ, QC or CC) state has
    correlation rank at most d_min, so rank > d_min certifies discord that
    cannot be generated locally.
    """
    cm = correlation_matrix(rho)
    d_min = min(rho.dims)
    return GenuinenessReport(cm.rank > d_min, cm.rank, d_min)
