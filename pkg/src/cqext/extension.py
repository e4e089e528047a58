"""Classical-quantum extension of separable states and ancilla-dimension bounds.

The extension attaches one ancilla level per term of a product decomposition:
given sum_k p_k |a_k><a_k| (x) |b_k><b_k|, the extended state

    sigma = sum_k p_k (|k><k| (x) |a_k><a_k|) (x) |b_k><b_k|

lives on (ancilla (x) a) (x) b, is classical-quantum with respect to that cut,
and traces back to the original state over the ancilla.  Tensor factors are
ordered (ancilla, a, b) throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import partial_trace
from .states import DensityMatrix, ProductEnsemble, ensemble_to_state, make_density
from .correlations import matrix_entropy


@dataclass(frozen=True)
class CqExtension:
    """A classical-quantum extension plus its bookkeeping."""

    state: DensityMatrix  # dims (K, d_a, d_b)
    dephasing_basis: np.ndarray  # (K*d_a, K*d_a, K*d_a): rank-1 projectors on the first cut
    source: ProductEnsemble
    ancilla_dim: int


@dataclass(frozen=True)
class AncillaInfo:
    """Mutual information of the ancilla with a, with b, and with ab (bits)."""

    with_a: float
    with_b: float
    with_ab: float


def _completed_basis(ket: np.ndarray) -> np.ndarray:
    """Orthonormal basis of C^d whose first column is the given unit ket."""
    d = len(ket)
    m = np.eye(d, dtype=complex)
    # Put the ket in the column most aligned with it to keep QR well conditioned.
    pivot = int(np.argmax(np.abs(ket)))
    m[:, [0, pivot]] = m[:, [pivot, 0]]
    m[:, 0] = ket
    q, r = np.linalg.qr(m)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def liluo_extend(e: ProductEnsemble) -> CqExtension:
    """Extend a product ensemble to a classical-quantum state, one level per term."""
    k_dim = e.length()
    da, db = e.dim_a, e.dim_b
    d_a_total = k_dim * da

    sigma = np.zeros((k_dim, da, db, k_dim, da, db), dtype=complex)
    projectors = np.zeros((d_a_total, k_dim * da, k_dim * da), dtype=complex)
    for k in range(k_dim):
        basis_k = _completed_basis(e.a_kets[k])
        pb = np.outer(e.b_kets[k], e.b_kets[k].conj())
        pa = np.outer(basis_k[:, 0], basis_k[:, 0].conj())
        sigma[k, :, :, k, :, :] += e.weights[k] * np.einsum("ij,uv->iujv", pa, pb)
        for u in range(da):
            proj_a = np.outer(basis_k[:, u], basis_k[:, u].conj())
            full = np.zeros((k_dim * da, k_dim * da), dtype=complex)
            full[k * da : (k + 1) * da, k * da : (k + 1) * da] = proj_a
            projectors[k * da + u] = full

    total = k_dim * da * db
    state = make_density(sigma.reshape(total, total), (k_dim, da, db))
    projectors.setflags(write=False)
    return CqExtension(state, projectors, e, k_dim)


def dephase(mat: np.ndarray, dims, basis: np.ndarray, cut: int) -> np.ndarray:
    """Apply sum_i (P_i (x) I) m (P_i (x) I) with P_i acting on the first `cut` factors."""
    dims = tuple(int(d) for d in dims)
    d_right = math.prod(dims[cut:])
    out = np.zeros_like(mat, dtype=complex)
    for p in basis:
        full = np.kron(p, np.eye(d_right))
        out += full @ mat @ full
    return out


def verify_cq(state: DensityMatrix, basis: np.ndarray, cut: int = 1) -> tuple[bool, float]:
    """Check invariance under dephasing in `basis` on the first `cut` factors.

    Returns (is_cq, residual) with residual the max-abs change under dephasing.
    """
    basis = np.asarray(basis, dtype=complex)
    d_left = math.prod(state.dims[:cut])
    if basis.ndim != 3 or basis.shape[1:] != (d_left, d_left):
        raise ValueError(f"basis shape {basis.shape} does not match left dimension {d_left}")
    total = basis.sum(axis=0)
    if np.max(np.abs(total - np.eye(d_left))) > 1e-8:
        raise ValueError("dephasing basis is not complete on the left factor")
    residual = float(np.max(np.abs(dephase(state.mat, state.dims, basis, cut) - state.mat)))
    return residual < 1e-10, residual


def ancilla_mutual_informations(state: DensityMatrix) -> AncillaInfo:
    """I(ancilla:a), I(ancilla:b), I(ancilla:ab) for a state with dims (K, d_a, d_b)."""
    if len(state.dims) != 3:
        raise ValueError(f"need dims (K, d_a, d_b), got {state.dims}")
    m, dims = state.mat, state.dims

    def mi(joint, joint_dims):
        s0 = matrix_entropy(partial_trace(joint, joint_dims, [0]))
        s1 = matrix_entropy(partial_trace(joint, joint_dims, [1]))
        return s0 + s1 - matrix_entropy(joint)

    rho_ka = partial_trace(m, dims, [0, 1])
    rho_kb = partial_trace(m, dims, [0, 2])
    return AncillaInfo(
        with_a=mi(rho_ka, (dims[0], dims[1])),
        with_b=mi(rho_kb, (dims[0], dims[2])),
        with_ab=mi(m, (dims[0], dims[1] * dims[2])),
    )


def ancilla_diagnostics(ext: CqExtension) -> AncillaInfo:
    """Ancilla correlations of an extension (see ancilla_mutual_informations)."""
    return ancilla_mutual_informations(ext.state)


def reduction(ext: CqExtension) -> DensityMatrix:
    """Trace the ancilla out of an extension."""
    m = partial_trace(ext.state.mat, ext.state.dims, [1, 2])
    return make_density(m, ext.state.dims[1:])


# --- dimension bounds ---------------------------------------------------------------

def bound_f(d_a: int, d_b: int, length: int) -> float:
    """Positive root of d_a^2 x^2 + d_a(d_b^2-1) x + length(3-2d_a-2d_b)."""
    if d_a < 1 or d_b < 1 or length < 1:
        raise ValueError("dimensions and length must be >= 1")
    c2 = float(d_a * d_a)
    c1 = float(d_a * (d_b * d_b - 1))
    c0 = float(length * (3 - 2 * d_a - 2 * d_b))
    disc = c1 * c1 - 4.0 * c2 * c0
    return (-c1 + math.sqrt(disc)) / (2.0 * c2)


def _ceil_nudged(x: float) -> int:
    # Guard against ceil(2.0000000001) = 3 artifacts from float noise.
    return max(1, math.ceil(x - 1e-9))


def bound_min(d_a: int, d_b: int, length: int) -> int:
    """Parameter-counting lower bound on the ancilla dimension."""
    return _ceil_nudged(bound_f(d_a, d_b, length))


@dataclass(frozen=True)
class BoundReport:
    d_a: int
    d_b: int
    length: int
    f_value: float
    min_ancilla: int
    luo_ancilla: int

    def as_dict(self) -> dict:
        return {
            "d_a": self.d_a,
            "d_b": self.d_b,
            "length": self.length,
            "f_value": self.f_value,
            "min_ancilla": self.min_ancilla,
            "luo_ancilla": self.luo_ancilla,
        }


def bound_report(d_a: int, d_b: int, length: int) -> BoundReport:
    f = bound_f(d_a, d_b, length)
    return BoundReport(d_a, d_b, length, f, _ceil_nudged(f), length)


def bound_range(d_a: int, d_b: int, rank: int) -> tuple[int, int]:
    """Bracket of the minimal ancilla dimension from length in [rank, rank^2]."""
    if rank < 1:
        raise ValueError("rank must be >= 1")
    return bound_min(d_a, d_b, rank), bound_min(d_a, d_b, rank * rank)


def separable_parameter_count(d_a: int, d_b: int, length: int) -> int:
    """Real parameters of a length-term product decomposition."""
    return length - 1 + length * (2 * d_a + 2 * d_b - 4)


def cc_parameter_count(d_big_a: int, d_big_b: int) -> int:
    """Real parameters of a classical-classical state on C^A (x) C^B."""
    return d_big_a * d_big_b - 1 + d_big_a * (d_big_a - 1) + d_big_b * (d_big_b - 1)


@dataclass(frozen=True)
class CcBoundReport:
    d_a: int
    d_b: int
    length: int
    pairs: tuple[tuple[int, int], ...]  # all minimal (d_ancilla_a, d_ancilla_b)
    min_product: int


def bound_cc(d_a: int, d_b: int, length: int, max_dim: int = 16) -> CcBoundReport:
    """Smallest ancilla pairs for a classical-classical extension.

    Scans ancilla dimensions up to max_dim and reports every pair that
    minimizes the total ancilla product while the CC state carries at least
    as many parameters as the separable decomposition.
    """
    need = separable_parameter_count(d_a, d_b, length)
    feasible = [
        (da_bar, db_bar)
        for da_bar in range(1, max_dim + 1)
        for db_bar in range(1, max_dim + 1)
        if cc_parameter_count(d_a * da_bar, d_b * db_bar) >= need
    ]
    if not feasible:
        raise ValueError(f"no feasible ancilla pair up to max_dim={max_dim}")
    best = min(p[0] * p[1] for p in feasible)
    pairs = tuple(sorted(p for p in feasible if p[0] * p[1] == best))
    return CcBoundReport(d_a, d_b, length, pairs, best)


@dataclass(frozen=True)
class Table1Row:
    d: int
    min_low: int
    min_high: int
    luo_low: int
    luo_high: int

    def as_dict(self) -> dict:
        return {
            "d": self.d,
            "min_low": self.min_low,
            "min_high": self.min_high,
            "luo_low": self.luo_low,
            "luo_high": self.luo_high,
        }


def table1() -> list[Table1Row]:
    """Ancilla-dimension table for full-rank d x d separable states, d = 1..4.

    For d = 2 the decomposition length is known to be exactly 4, collapsing
    the ranges to single values.
    """
    rows = []
    for d in (1, 2, 3, 4):
        if d == 1:
            rows.append(Table1Row(1, bound_min(1, 1, 1), bound_min(1, 1, 1), 1, 1))
        elif d == 2:
            rows.append(Table1Row(2, bound_min(2, 2, 4), bound_min(2, 2, 4), 4, 4))
        else:
            rank = d * d
            low, high = bound_range(d, d, rank)
            rows.append(Table1Row(d, low, high, rank, rank * rank))
    return rows
