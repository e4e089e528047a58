"""Entropic correlation measures: entropy, mutual information, discord.

Classical correlation follows the measured-conditional-entropy convention:
C = S(rho_b) - min over rank-1 projective measurements on the chosen side of
sum_i p_i S(rho_b | outcome i).  For qubit measured sides the minimum is found
by a deterministic Bloch-sphere grid search with local refinement; larger
measured sides fall back to simulated annealing over the measurement unitary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import partial_trace
from .states import DensityMatrix, bloch_ket

LOG2 = math.log(2.0)


@dataclass(frozen=True)
class MeasurementOptConfig:
    """Knobs of the projective-measurement minimizer."""

    coarse_grid: int = 48
    refine_iters: int = 25
    refine_shrink: float = 0.5
    restarts: int = 3
    seed: int = 0

    def __post_init__(self):
        if min(self.coarse_grid, self.refine_iters, self.restarts) < 1:
            raise ValueError("coarse_grid, refine_iters and restarts must all be >= 1")


DEFAULT_OPT = MeasurementOptConfig()

# Cheaper settings for high-volume scans (random-state scatter, anneal inner loop).
FAST_OPT = MeasurementOptConfig(coarse_grid=24, refine_iters=12, restarts=1)


@dataclass(frozen=True)
class MeasurementOptimum:
    """Achieved classical correlation and the measurement basis reaching it."""

    value: float
    basis: np.ndarray  # columns are the measurement kets
    conditional_entropy: float


@dataclass(frozen=True)
class CorrelationProfile:
    entropy_a: float
    entropy_b: float
    entropy_ab: float
    mutual_info: float
    classical_corr: float
    discord: float
    concurrence: float | None = None
    eof: float | None = None

    def as_dict(self) -> dict:
        out = {
            "entropy_a": self.entropy_a,
            "entropy_b": self.entropy_b,
            "entropy_ab": self.entropy_ab,
            "mutual_info": self.mutual_info,
            "classical_corr": self.classical_corr,
            "discord": self.discord,
        }
        if self.concurrence is not None:
            out["concurrence"] = self.concurrence
            out["eof"] = self.eof
        return out


def _xlog2x(w: np.ndarray) -> np.ndarray:
    # x*log2(x) with 0*log(0) = 0; the floor keeps log2 finite and the product
    # exactly zero at x = 0.
    w = np.maximum(w, 0.0)
    return w * np.log2(np.maximum(w, 1e-300))


def matrix_entropy(m: np.ndarray) -> float:
    """Von Neumann entropy (bits) of a PSD matrix; tiny negatives clamp to 0."""
    w = np.linalg.eigvalsh(m)
    return float(-_xlog2x(w).sum())


def entropy(rho: DensityMatrix) -> float:
    """Von Neumann entropy in bits."""
    return matrix_entropy(rho.mat)


def mutual_information(rho: DensityMatrix) -> float:
    """S(a) + S(b) - S(ab) for a bipartite state."""
    if len(rho.dims) != 2:
        raise ValueError(f"mutual information needs exactly 2 subsystems, got dims {rho.dims}")
    return _mutual_information_matrix(rho.mat, rho.dims)


def _mutual_information_matrix(m: np.ndarray, dims) -> float:
    sa = matrix_entropy(partial_trace(m, dims, [0]))
    sb = matrix_entropy(partial_trace(m, dims, [1]))
    return sa + sb - matrix_entropy(m)


# --- measured conditional entropy ------------------------------------------------

def _measured_axes(m: np.ndarray, dims, side: str) -> tuple[np.ndarray, int, int]:
    """Reshape to (d_meas, d_rest, d_meas, d_rest) with the measured side first."""
    da, db = dims
    t = m.reshape(da, db, da, db)
    if side == "a":
        return t, da, db
    if side == "b":
        return t.transpose(1, 0, 3, 2), db, da
    raise ValueError(f"side must be 'a' or 'b', got {side!r}")


def _outcome_states(rho_t: np.ndarray, kets: np.ndarray) -> np.ndarray:
    """Unnormalized post-measurement states of the unmeasured side, batched."""
    n, d = kets.shape
    db = rho_t.shape[1]
    coeff = (kets.conj()[:, :, None] * kets[:, None, :]).reshape(n, d * d)
    flat = np.ascontiguousarray(rho_t.transpose(0, 2, 1, 3)).reshape(d * d, db * db)
    return (coeff @ flat).reshape(n, db, db)


def _entropy_terms_flat2(bflat: np.ndarray) -> np.ndarray:
    """_entropy_terms for flattened 2x2 blocks (n, 4), closed-form eigenvalues."""
    tr = bflat[:, 0].real + bflat[:, 3].real
    det = (bflat[:, 0] * bflat[:, 3] - bflat[:, 1] * bflat[:, 2]).real
    gap = np.sqrt(np.maximum(tr * tr * 0.25 - det, 0.0))
    return _xlog2x(tr) - _xlog2x(tr * 0.5 - gap) - _xlog2x(tr * 0.5 + gap)


def _entropy_terms(blocks: np.ndarray) -> np.ndarray:
    """p*log2(p) - sum_j w_j*log2(w_j) per unnormalized block, batched.

    Summing these over a complete set of outcomes gives sum_i p_i S(rho_i).
    """
    if blocks.shape[-1] == 2:
        return _entropy_terms_flat2(blocks.reshape(-1, 4)).reshape(blocks.shape[:-2])
    w = np.linalg.eigvalsh(blocks)
    p = np.maximum(w, 0.0).sum(axis=-1)
    return _xlog2x(p) - _xlog2x(w).sum(axis=-1)


def _pair_conditional_entropies(rho_t: np.ndarray, kets: np.ndarray) -> np.ndarray:
    """Conditional entropies for qubit measurements {|v><v|, |v_perp><v_perp|}."""
    b0 = _outcome_states(rho_t, kets)
    rho_rest = np.trace(rho_t, axis1=0, axis2=2)
    b1 = rho_rest[None, :, :] - b0
    return _entropy_terms(b0) + _entropy_terms(b1)


def measured_conditional_entropy(rho: DensityMatrix, kets: np.ndarray, side: str = "a") -> float:
    """sum_i p_i S(rho_rest | i) for a given complete orthonormal basis.

    `kets` holds the basis vectors as rows (d vectors of length d).
    """
    if len(rho.dims) != 2:
        raise ValueError("measured conditional entropy needs a bipartite state")
    rho_t, d_meas, _ = _measured_axes(rho.mat, rho.dims, side)
    kets = np.asarray(kets, dtype=complex)
    if kets.shape != (d_meas, d_meas):
        raise ValueError(f"need {d_meas} basis kets of length {d_meas}, got shape {kets.shape}")
    gram = kets.conj() @ kets.T
    if np.max(np.abs(gram - np.eye(d_meas))) > 1e-8:
        raise ValueError("measurement kets are not a complete orthonormal basis")
    blocks = _outcome_states(rho_t, kets)
    return float(_entropy_terms(blocks).sum())


# --- minimization over projective measurements ------------------------------------

_GRID_CACHE: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}

_REFINE_OFFSETS = np.array([(dt, dp) for dt in (-1, 0, 1) for dp in (-1, 0, 1)], dtype=float)


def _coarse_grid(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Cached (angles, projector coefficients, Bloch axes) for an n x n grid."""
    hit = _GRID_CACHE.get(n)
    if hit is not None:
        return hit
    thetas = np.linspace(0.0, np.pi, n)
    phis = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    angles = np.stack([tt.ravel(), pp.ravel()], axis=1)
    kets = bloch_kets(angles[:, 0], angles[:, 1])
    coeff = (kets.conj()[:, :, None] * kets[:, None, :]).reshape(len(kets), 4)
    axes = _bloch_axes(angles[:, 0], angles[:, 1])
    for arr in (angles, coeff, axes):
        arr.setflags(write=False)
    _GRID_CACHE[n] = (angles, coeff, axes)
    return angles, coeff, axes


def _qubit_min_conditional_entropy(rho_t: np.ndarray, cfg: MeasurementOptConfig):
    db = rho_t.shape[1]
    flat = np.ascontiguousarray(rho_t.transpose(0, 2, 1, 3)).reshape(4, db * db)
    rest = (flat[0] + flat[3])[None, :]  # unmeasured-side marginal, flattened

    if db == 2:

        def cond_for_coeff(coeff: np.ndarray) -> np.ndarray:
            b0 = coeff @ flat
            return _entropy_terms_flat2(b0) + _entropy_terms_flat2(rest - b0)

    else:

        def cond_for_coeff(coeff: np.ndarray) -> np.ndarray:
            b0 = coeff @ flat
            blocks = np.concatenate([b0, rest - b0]).reshape(-1, db, db)
            return _entropy_terms(blocks).reshape(2, -1).sum(axis=0)

    def cond_for_angles(ang: np.ndarray) -> np.ndarray:
        kets = bloch_kets(ang[:, 0], ang[:, 1])
        coeff = (kets.conj()[:, :, None] * kets[:, None, :]).reshape(len(kets), 4)
        return cond_for_coeff(coeff)

    angles, coeff, axes = _coarse_grid(cfg.coarse_grid)
    vals = cond_for_coeff(coeff)

    # (theta, phi) and its antipode describe the same measurement, so restart
    # candidates are deduplicated on |axis . axis'| before refinement.
    n = cfg.coarse_grid
    order = np.argsort(vals)
    sep = math.cos(2.0 * np.pi / n)
    picked: list[int] = []
    for idx in order:
        if len(picked) == cfg.restarts:
            break
        if any(abs(float(axes[idx] @ axes[j])) > sep for j in picked):
            continue
        picked.append(int(idx))

    best_val = float(vals[order[0]])
    best_angle = angles[order[0]].copy()
    cur = angles[picked].copy()
    cur_vals = vals[picked].copy()
    span = np.array([np.pi / max(n - 1, 1) / 2.0, np.pi / n])
    rows = np.arange(len(cur))
    for _ in range(cfg.refine_iters):
        cand = cur[:, None, :] + _REFINE_OFFSETS[None, :, :] * span
        v = cond_for_angles(cand.reshape(-1, 2)).reshape(len(cur), -1)
        arg = np.argmin(v, axis=1)
        improve = v[rows, arg] < cur_vals
        cur[improve] = cand[rows, arg][improve]
        cur_vals = np.minimum(cur_vals, v[rows, arg])
        span *= cfg.refine_shrink
    k = int(np.argmin(cur_vals))
    if cur_vals[k] < best_val:
        best_val = float(cur_vals[k])
        best_angle = cur[k]
    v = bloch_ket(best_angle[0], best_angle[1])
    v_perp = np.array([-np.conj(v[1]), np.conj(v[0])])
    return best_val, np.stack([v, v_perp], axis=1)


def bloch_kets(thetas: np.ndarray, phis: np.ndarray) -> np.ndarray:
    """Batched bloch_ket; returns shape (n, 2)."""
    return np.stack(
        [np.cos(thetas / 2.0) + 0j, np.exp(1j * phis) * np.sin(thetas / 2.0)], axis=-1
    )


def _bloch_axes(thetas: np.ndarray, phis: np.ndarray) -> np.ndarray:
    st = np.sin(thetas)
    return np.stack([st * np.cos(phis), st * np.sin(phis), np.cos(thetas)], axis=-1)


def _qudit_min_conditional_entropy(rho_t: np.ndarray, d_meas: int, cfg: MeasurementOptConfig):
    # Diagnostics-only path; reuses the annealer from the search module.
    from .search import metropolis_unitary_search

    def cost(u):
        blocks = np.einsum("in,ikjl,jn->nkl", u.conj(), rho_t, u, optimize=True)
        return float(_entropy_terms(blocks).sum())

    best_u, best_val, _ = metropolis_unitary_search(
        cost,
        d_meas,
        temperatures=np.geomspace(1e-1, 1e-4, 6),
        steps_per_temp=400,
        step_eps=0.3,
        eps_decay=0.7,
        rng=np.random.default_rng(cfg.seed),
        sense=-1,
    )
    return best_val, best_u


def classical_correlation(
    rho: DensityMatrix, side: str = "a", cfg: MeasurementOptConfig | None = None
) -> MeasurementOptimum:
    """Maximal classical correlation extractable by measuring one side."""
    if len(rho.dims) != 2:
        raise ValueError("classical correlation needs a bipartite state")
    cfg = cfg or DEFAULT_OPT
    rho_t, d_meas, _ = _measured_axes(rho.mat, rho.dims, side)
    if d_meas == 2:
        cond, basis = _qubit_min_conditional_entropy(rho_t, cfg)
    else:
        cond, basis = _qudit_min_conditional_entropy(rho_t, d_meas, cfg)
    s_rest = matrix_entropy(np.trace(rho_t, axis1=0, axis2=2))
    return MeasurementOptimum(s_rest - cond, basis, cond)


def discord(rho: DensityMatrix, side: str = "a", cfg: MeasurementOptConfig | None = None) -> float:
    """Quantum discord: mutual information minus classical correlation."""
    return mutual_information(rho) - classical_correlation(rho, side, cfg).value


def discord_matrix(m: np.ndarray, dims, side: str = "a", cfg: MeasurementOptConfig | None = None) -> float:
    """Discord of a raw matrix, skipping DensityMatrix validation (hot loops).

    Uses discord = S(rho_meas) - S(rho_joint) + min conditional entropy; the
    unmeasured marginal's entropy cancels between I and C.
    """
    cfg = cfg or DEFAULT_OPT
    rho_t, d_meas, _ = _measured_axes(m, dims, side)
    if d_meas != 2:
        raise ValueError("discord_matrix fast path supports qubit measured sides only")
    cond, _ = _qubit_min_conditional_entropy(rho_t, cfg)
    rho_meas = np.trace(rho_t, axis1=1, axis2=3)
    s_meas = float(-_xlog2x(np.linalg.eigvalsh(rho_meas)).sum())
    return s_meas - matrix_entropy(m) + cond


# --- analytic discord of the alpha family ---------------------------------------

def discord_alpha_analytic(alpha: float) -> float:
    """Closed-form discord of the alpha family, in bits.

    The final two entropy-like terms both enter with a minus sign; the
    numerical optimizer confirms this reading (see tests).
    """
    a = float(alpha)
    if not 0.0 <= a <= 1.0:
        raise ValueError(f"alpha {a} outside [0, 1]")
    abar = max(abs(a), abs(2.0 * a - 1.0))

    def wlog(w, x):
        return w * math.log2(x) if x > 0.0 else 0.0

    return (
        wlog(1.0 - a, 1.0 - a)
        + wlog(a, a)
        + (1.0 + a)
        - wlog((1.0 - abar) / 2.0, 1.0 - abar)
        - wlog((1.0 + abar) / 2.0, 1.0 + abar)
    )


# --- two-qubit entanglement measures ----------------------------------------------

_SY_SY = np.kron(np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]]))


def concurrence(rho: DensityMatrix) -> float:
    """Wootters concurrence of a two-qubit state."""
    if rho.dims != (2, 2):
        raise ValueError(f"concurrence needs dims (2, 2), got {rho.dims}")
    m = rho.mat
    flipped = _SY_SY @ m.conj() @ _SY_SY
    w = np.linalg.eigvals(m @ flipped)
    lam = np.sqrt(np.clip(np.sort(w.real)[::-1], 0.0, None))
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def binary_entropy(x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return float(-x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x))


def eof(rho: DensityMatrix) -> float:
    """Entanglement of formation from the concurrence, in bits."""
    c = concurrence(rho)
    return binary_entropy((1.0 + math.sqrt(max(0.0, 1.0 - c * c))) / 2.0)


# --- one-call summary ---------------------------------------------------------------

def profile(
    rho: DensityMatrix, side: str = "a", cfg: MeasurementOptConfig | None = None
) -> CorrelationProfile:
    """All correlation quantities of one bipartite state."""
    if len(rho.dims) != 2:
        raise ValueError("profile needs a bipartite state")
    sa = matrix_entropy(partial_trace(rho.mat, rho.dims, [0]))
    sb = matrix_entropy(partial_trace(rho.mat, rho.dims, [1]))
    sab = matrix_entropy(rho.mat)
    mi = sa + sb - sab
    cc = classical_correlation(rho, side, cfg).value
    conc = eof_val = None
    if rho.dims == (2, 2):
        conc = concurrence(rho)
        eof_val = eof(rho)
    return CorrelationProfile(sa, sb, sab, mi, cc, mi - cc, conc, eof_val)
