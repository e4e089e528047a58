"""Simulated-annealing search for maximally discordant separable reductions.

The ansatz: a classical-quantum state on (ancilla (x) a) (x) b built from a
single unitary U_A.  Its columns define the orthonormal rank-1 projectors
P_k; the b-side states are the a-marginals of those projectors and all
weights equal 1/d_A.  Tracing out the ancilla leaves a separable two-qubit
state whose discord is the annealing objective.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from typing import Callable, NamedTuple

import numpy as np

from .linalg import as_rng, matrix_from_json, partial_trace, random_unitary, unitary_step
from .states import make_density
from .correlations import (
    DEFAULT_OPT,
    FAST_OPT,
    MeasurementOptConfig,
    discord_matrix,
)


@dataclass(frozen=True)
class AnnealConfig:
    d_ancilla: int
    d_a: int = 2
    d_b: int = 2
    temperatures: tuple[float, ...] = tuple(np.geomspace(1e-1, 1e-4, 8))
    steps_per_temp: int = 2500
    step_eps: float = 0.15
    eps_decay: float = 0.7
    chains: int = 4
    seed: int = 0

    def __post_init__(self):
        temps = tuple(float(t) for t in self.temperatures)
        if not temps or any(t <= 0 for t in temps) or list(temps) != sorted(temps, reverse=True):
            raise ValueError("temperatures must be positive and descending")
        if self.steps_per_temp < 1 or self.chains < 1:
            raise ValueError("steps_per_temp and chains must be >= 1")
        object.__setattr__(self, "temperatures", temps)

    @property
    def d_big_a(self) -> int:
        return self.d_ancilla * self.d_a

    def as_dict(self) -> dict:
        return {
            "d_ancilla": self.d_ancilla,
            "d_a": self.d_a,
            "d_b": self.d_b,
            "temperatures": list(self.temperatures),
            "steps_per_temp": self.steps_per_temp,
            "step_eps": self.step_eps,
            "eps_decay": self.eps_decay,
            "chains": self.chains,
            "seed": self.seed,
        }


class TraceRecord(NamedTuple):
    chain: int
    step: int
    temperature: float
    current: float
    best: float


@dataclass(frozen=True)
class AnnealResult:
    best_u: np.ndarray
    best_discord: float
    trace: tuple[TraceRecord, ...]
    config: AnnealConfig


def _check_unitary(u: np.ndarray, d: int) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.shape != (d, d):
        raise ValueError(f"unitary shape {u.shape} does not match dimension {d}")
    dev = float(np.max(np.abs(u.conj().T @ u - np.eye(d))))
    if dev > 1e-10:
        raise ValueError(f"matrix deviates from unitarity by {dev:.3e}")
    return u


def reduction_matrix(u_a: np.ndarray, d_ancilla: int, d_a: int) -> np.ndarray:
    """Ancilla-traced reduction of the ansatz state, as a raw (d_a^2, d_a^2) matrix."""
    d_big = d_ancilla * d_a
    cols = u_a.T.reshape(d_big, d_ancilla, d_a)
    rho_k = np.matmul(cols.transpose(0, 2, 1), cols.conj())  # tr over the ancilla factor
    flat = rho_k.reshape(d_big, d_a * d_a)
    pairs = (flat.T @ flat) / d_big  # [(i,j),(u,v)] = sum_k rho_k[i,j] rho_k[u,v] / d_A
    red = pairs.reshape(d_a, d_a, d_a, d_a).transpose(0, 2, 1, 3)
    return red.reshape(d_a * d_a, d_a * d_a)


def assemble(u_a: np.ndarray, d_ancilla: int, d_a: int = 2, d_b: int = 2):
    """Build the classical-quantum ansatz state and its reduction.

    Returns (sigma, rho) where sigma has dims (d_ancilla, d_a, d_b) and rho
    is the separable reduction with dims (d_a, d_b).
    """
    if d_b != d_a:
        raise ValueError("the symmetric ansatz requires d_b == d_a")
    d_big = d_ancilla * d_a
    u_a = _check_unitary(u_a, d_big)
    cols = u_a.T.reshape(d_big, d_ancilla, d_a)
    rho_k = np.einsum("kmi,kmj->kij", cols, cols.conj(), optimize=True)
    proj = np.einsum("kp,kq->kpq", u_a.T.reshape(d_big, d_big), u_a.T.reshape(d_big, d_big).conj())
    sigma = np.einsum("kpq,kuv->puqv", proj, rho_k, optimize=True).reshape(
        d_big * d_b, d_big * d_b
    ) / d_big
    sigma_dm = make_density(sigma, (d_ancilla, d_a, d_b))
    red = partial_trace(sigma_dm.mat, sigma_dm.dims, [1, 2])
    return sigma_dm, make_density(red, (d_a, d_b))


def objective(
    u_a: np.ndarray,
    d_ancilla: int,
    d_a: int = 2,
    d_b: int = 2,
    opt_cfg: MeasurementOptConfig | None = None,
) -> float:
    """Discord of the ansatz reduction, measured on side a."""
    if d_b != d_a:
        raise ValueError("the symmetric ansatz requires d_b == d_a")
    u_a = _check_unitary(u_a, d_ancilla * d_a)
    red = reduction_matrix(u_a, d_ancilla, d_a)
    return discord_matrix(red, (d_a, d_b), "a", opt_cfg or DEFAULT_OPT)


def metropolis_unitary_search(
    cost: Callable[[np.ndarray], float],
    d: int,
    temperatures,
    steps_per_temp: int,
    step_eps: float,
    eps_decay: float,
    rng: np.random.Generator,
    sense: int = 1,
    record: Callable[[int, float, float, float], None] | None = None,
    check_every: int = 0,
    check: Callable[[np.ndarray], None] | None = None,
) -> tuple[np.ndarray, float, int]:
    """Generic Metropolis walk over the unitary group.

    sense=+1 maximizes `cost`, sense=-1 minimizes it.  `record`, if given, is
    called per step with (global_step, temperature, current, best).  Returns
    (best_u, best_value, steps_taken).
    """
    u = random_unitary(d, rng)
    cur = sense * cost(u)
    best_u, best = u, cur
    step = 0
    for stage, temp in enumerate(temperatures):
        eps = step_eps * (eps_decay**stage)
        for _ in range(steps_per_temp):
            u_new = unitary_step(u, rng, eps)
            val = sense * cost(u_new)
            delta = val - cur
            if delta >= 0 or rng.random() < np.exp(delta / temp):
                u, cur = u_new, val
                if cur > best:
                    best_u, best = u, cur
            step += 1
            if record is not None:
                record(step, temp, sense * cur, sense * best)
            if check is not None and check_every and step % check_every == 0:
                check(u)
    return best_u, sense * best, step


def _cq_spot_check(u: np.ndarray, d_ancilla: int, d_a: int, d_b: int) -> None:
    from .extension import verify_cq

    sigma, _ = assemble(u, d_ancilla, d_a, d_b)
    d_big = d_ancilla * d_a
    cols = u.T.reshape(d_big, d_big)
    proj = np.einsum("kp,kq->kpq", cols, cols.conj())
    ok, residual = verify_cq(sigma, proj, cut=2)
    if not ok:
        raise RuntimeError(f"ansatz state lost the CQ property (residual {residual:.3e})")


def anneal(cfg: AnnealConfig, opt_cfg: MeasurementOptConfig | None = None) -> AnnealResult:
    """Anneal the ansatz unitary to maximize reduction discord.

    Chains run independently from seeds cfg.seed + chain index; each chain's
    best candidate is re-scored with the high-accuracy optimizer and the
    overall winner (ties to the lower chain index) is returned.
    """
    inner = opt_cfg or FAST_OPT
    d_big = cfg.d_big_a
    trace: list[TraceRecord] = []
    candidates: list[tuple[float, int, np.ndarray]] = []

    def cost(u: np.ndarray) -> float:
        red = reduction_matrix(u, cfg.d_ancilla, cfg.d_a)
        return discord_matrix(red, (cfg.d_a, cfg.d_b), "a", inner)

    for chain in range(cfg.chains):
        rng = as_rng(cfg.seed + chain)
        rec = lambda s, t, c, b: trace.append(TraceRecord(chain, s, t, c, b))  # noqa: E731
        best_u, _, _ = metropolis_unitary_search(
            cost,
            d_big,
            cfg.temperatures,
            cfg.steps_per_temp,
            cfg.step_eps,
            cfg.eps_decay,
            rng,
            sense=1,
            record=rec,
            check_every=100,
            check=lambda u: _cq_spot_check(u, cfg.d_ancilla, cfg.d_a, cfg.d_b),
        )
        final = objective(best_u, cfg.d_ancilla, cfg.d_a, cfg.d_b, DEFAULT_OPT)
        candidates.append((final, chain, best_u))

    best_val, _, best_u = max(candidates, key=lambda t: (t[0], -t[1]))
    return AnnealResult(best_u, best_val, tuple(trace), cfg)


# --- shipped optimal unitary (d_A = 6) --------------------------------------------

def load_optimal_unitary() -> np.ndarray:
    """The published 6x6 optimum, re-unitarized by phase-fixed QR.

    The raw matrix is printed to 4 decimals, so it is only approximately
    unitary; QR restores exact unitarity while staying within ~1e-4 of the
    printed entries.  The printed columns group the extended space as
    a (x) ancilla; they are reordered here to this package's
    (ancilla, a) convention.
    """
    text = resources.files("cqext").joinpath("data/ua_opt_d6.json").read_text()
    raw = matrix_from_json(json.loads(text))
    q, r = np.linalg.qr(raw)
    u = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
    cols = u.T.reshape(6, 2, 3).transpose(0, 2, 1).reshape(6, 6)
    return np.ascontiguousarray(cols.T)
