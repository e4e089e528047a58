"""Density matrices, the named two-qubit state families, and product ensembles."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .linalg import as_rng, matrix_from_json, matrix_to_json, partial_trace, partial_transpose, svd_values, numerical_rank

VALIDATION_ATOL = 1e-10


class StateValidationError(ValueError):
    """A matrix failed density-matrix validation."""


class HermiticityError(StateValidationError):
    pass


class TraceError(StateValidationError):
    pass


class PositivityError(StateValidationError):
    pass


@dataclass(frozen=True)
class DensityMatrix:
    """Validated quantum state: Hermitian, unit trace, positive semidefinite.

    `dims` lists the subsystem dimensions, leftmost tensor factor first.
    Instances are treated as immutable; build them through `make_density`.
    """

    mat: np.ndarray
    dims: tuple[int, ...]

    @property
    def dim(self) -> int:
        return math.prod(self.dims)

    def marginal(self, keep) -> "DensityMatrix":
        """Reduced state on the kept subsystems (order preserved)."""
        keep = sorted(set(keep))
        sub = partial_trace(self.mat, self.dims, keep)
        return make_density(sub, tuple(self.dims[k] for k in keep))

    def regroup(self, groups) -> "DensityMatrix":
        """Merge adjacent subsystems, e.g. ((0, 1), (2,)) on a 3-party state."""
        flat = [i for g in groups for i in g]
        if flat != list(range(len(self.dims))):
            raise ValueError(f"groups {groups} must partition range({len(self.dims)}) in order")
        new_dims = tuple(math.prod(self.dims[i] for i in g) for g in groups)
        return DensityMatrix(self.mat, new_dims)


def make_density(mat: np.ndarray, dims=None, atol: float = VALIDATION_ATOL) -> DensityMatrix:
    """Validate a matrix as a quantum state and wrap it.

    Raises HermiticityError, TraceError or PositivityError for the
    corresponding violation, ValueError if dims do not match the shape.
    """
    mat = np.asarray(mat, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"state matrix must be square, got shape {mat.shape}")
    d = mat.shape[0]
    dims = (d,) if dims is None else tuple(int(x) for x in dims)
    if math.prod(dims) != d:
        raise ValueError(f"dims {dims} do not multiply to matrix dimension {d}")
    if not np.all(np.isfinite(mat.real)) or not np.all(np.isfinite(mat.imag)):
        raise StateValidationError("state entries must be finite")
    dev = float(np.max(np.abs(mat - mat.conj().T)))
    if dev > atol:
        raise HermiticityError(f"deviation from Hermiticity {dev:.3e} exceeds {atol:.1e}")
    tr = complex(np.trace(mat))
    if abs(tr - 1.0) > atol:
        raise TraceError(f"trace {tr:.12g} differs from 1 by more than {atol:.1e}")
    w = np.linalg.eigvalsh(mat)
    if float(w[0]) < -atol:
        raise PositivityError(f"smallest eigenvalue {w[0]:.3e} below -{atol:.1e}")
    out = mat.copy()
    out.setflags(write=False)
    return DensityMatrix(out, dims)


# --- pure states --------------------------------------------------------------

def bloch_ket(theta: float, phi: float) -> np.ndarray:
    """cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>."""
    return np.array([np.cos(theta / 2.0), np.exp(1j * phi) * np.sin(theta / 2.0)])


def ket_projector(ket: np.ndarray) -> np.ndarray:
    ket = np.asarray(ket, dtype=complex)
    return np.outer(ket, ket.conj())


# --- named two-qubit families --------------------------------------------------

_SWAP_B = np.array([[0.0, 1.0], [1.0, 0.0]])

THETA_TETRA = math.acos(-1.0 / 3.0)


def _alpha_matrix(a: float) -> np.ndarray:
    return 0.5 * np.array(
        [
            [a, 0, 0, a],
            [0, 1 - a, 0, 0],
            [0, 0, 1 - a, 0],
            [a, 0, 0, a],
        ],
        dtype=complex,
    )


def _beta_matrix(b: float) -> np.ndarray:
    return 0.5 * np.array(
        [
            [b, 0, 0, b],
            [0, 1 - b, 1 - b, 0],
            [0, 1 - b, 1 - b, 0],
            [b, 0, 0, b],
        ],
        dtype=complex,
    )


def _werner_matrix(xi: float) -> np.ndarray:
    psi = np.array([0.0, 1.0, -1.0, 0.0]) / np.sqrt(2.0)
    return (1.0 - xi) * np.eye(4) / 4.0 + xi * np.outer(psi, psi)


def family_state(name: str, param: float | None = None) -> DensityMatrix:
    """Build one of the named two-qubit states.

    Parameterized families: 'alpha' and 'beta' (param in [0, 1]) and
    'werner' (param in [-1/3, 1]).  Fixed states: 'max_l4', 'max_l3',
    'max_l2' (maximum-discord separable states of length 4, 3, 2) and
    'tilde_max' (the swapped-b variant of 'max_l4').
    """
    fixed = {"max_l4", "max_l3", "max_l2", "tilde_max"}
    if name in fixed:
        if param is not None:
            raise ValueError(f"family {name!r} takes no parameter")
        if name == "max_l4":
            m = _alpha_matrix(1.0 / 3.0)
        elif name == "max_l3":
            m = _alpha_matrix(0.5)
        elif name == "max_l2":
            plus = np.array([1.0, 1.0]) / np.sqrt(2.0)
            m = 0.5 * (
                np.kron(ket_projector([1.0, 0.0]), ket_projector([1.0, 0.0]))
                + np.kron(ket_projector(plus), ket_projector([0.0, 1.0]))
            )
        else:  # tilde_max
            u = np.kron(np.eye(2), _SWAP_B)
            m = u @ _alpha_matrix(1.0 / 3.0) @ u.conj().T
        return make_density(m, (2, 2))

    if param is None:
        raise ValueError(f"family {name!r} requires a parameter")
    p = float(param)
    if name == "alpha":
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"alpha parameter {p} outside [0, 1]")
        m = _alpha_matrix(p)
    elif name == "beta":
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"beta parameter {p} outside [0, 1]")
        m = _beta_matrix(p)
    elif name == "werner":
        if not -1.0 / 3.0 <= p <= 1.0:
            raise ValueError(f"werner parameter {p} outside [-1/3, 1]")
        m = _werner_matrix(p)
    else:
        raise ValueError(f"unknown state family {name!r}")
    return make_density(m, (2, 2))


FAMILY_NAMES = ("alpha", "beta", "werner", "max_l4", "max_l3", "max_l2", "tilde_max")


# --- product ensembles ----------------------------------------------------------

@dataclass(frozen=True)
class ProductEnsemble:
    """Weighted list of pure product states p_k |a_k><a_k| (x) |b_k><b_k|."""

    weights: np.ndarray
    a_kets: np.ndarray  # shape (n, d_a)
    b_kets: np.ndarray  # shape (n, d_b)

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        a = np.asarray(self.a_kets, dtype=complex)
        b = np.asarray(self.b_kets, dtype=complex)
        if w.ndim != 1 or a.ndim != 2 or b.ndim != 2 or not (len(w) == len(a) == len(b)):
            raise ValueError("ensemble needs matching 1-d weights and 2-d ket arrays")
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("weights must be nonnegative and sum to 1 within 1e-12")
        for kets in (a, b):
            norms = np.linalg.norm(kets, axis=1)
            if np.max(np.abs(norms - 1.0)) > 1e-12:
                raise ValueError("all kets must be unit norm within 1e-12")
        for field, val in (("weights", w), ("a_kets", a), ("b_kets", b)):
            val.setflags(write=False)
            object.__setattr__(self, field, val)

    def length(self) -> int:
        return len(self.weights)

    @property
    def dim_a(self) -> int:
        return self.a_kets.shape[1]

    @property
    def dim_b(self) -> int:
        return self.b_kets.shape[1]


def ensemble_to_state(e: ProductEnsemble) -> DensityMatrix:
    """Assemble sum_k p_k |a_k><a_k| (x) |b_k><b_k|."""
    m = np.einsum(
        "k,ki,kj,ku,kv->iujv",
        e.weights,
        e.a_kets,
        e.a_kets.conj(),
        e.b_kets,
        e.b_kets.conj(),
        optimize=True,
    )
    d = e.dim_a * e.dim_b
    return make_density(m.reshape(d, d), (e.dim_a, e.dim_b))


def w_set() -> ProductEnsemble:
    """Three symmetric product states at mutual Bloch angle 2*pi/3, weights 1/3."""
    kets = np.array(
        [bloch_ket(0.0, 0.0), bloch_ket(2 * np.pi / 3, 0.0), bloch_ket(2 * np.pi / 3, np.pi)]
    )
    w = np.full(3, 1.0 / 3.0)
    return ProductEnsemble(w, kets, kets)


def z_set() -> ProductEnsemble:
    """Four tetrahedral product states (pairwise overlap 1/3), weights 1/4."""
    kets = np.array(
        [
            bloch_ket(0.0, 0.0),
            bloch_ket(THETA_TETRA, 0.0),
            bloch_ket(THETA_TETRA, 2 * np.pi / 3),
            bloch_ket(THETA_TETRA, 4 * np.pi / 3),
        ]
    )
    w = np.full(4, 0.25)
    return ProductEnsemble(w, kets, kets)


# --- random states ----------------------------------------------------------------

def haar_state(d: int, rank: int, seed: int | np.random.Generator) -> DensityMatrix:
    """Fixed-rank state from the induced Ginibre measure: G G^dag / tr(G G^dag)."""
    if not 1 <= rank <= d:
        raise ValueError(f"rank {rank} outside [1, {d}]")
    rng = as_rng(seed)
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    m = g @ g.conj().T
    m /= np.trace(m).real
    return make_density(m, (d,))


def haar_two_qubit(rank: int, seed: int | np.random.Generator) -> DensityMatrix:
    """Random two-qubit state of the given rank, dims (2, 2)."""
    rho = haar_state(4, rank, seed)
    return DensityMatrix(rho.mat, (2, 2))


def length_two_qubits(rho: DensityMatrix, rel_tol: float = 1e-8) -> int:
    """Decomposition length max{rk(rho), rk(rho^Tb)} for separable 2-qubit states."""
    if rho.dims != (2, 2):
        raise ValueError(f"length formula needs dims (2, 2), got {rho.dims}")
    r1 = numerical_rank(svd_values(rho.mat), rel_tol)
    r2 = numerical_rank(svd_values(partial_transpose(rho.mat, rho.dims, "b")), rel_tol)
    return max(r1, r2)


# --- JSON envelopes ----------------------------------------------------------------

def state_to_json(rho: DensityMatrix) -> dict:
    obj = matrix_to_json(rho.mat)
    obj["dims"] = list(rho.dims)
    return obj


def state_from_json(obj: dict) -> DensityMatrix:
    m = matrix_from_json(obj)
    dims = obj.get("dims")
    if dims is None:
        raise ValueError("state envelope is missing 'dims'")
    return make_density(m, tuple(int(d) for d in dims))


def ket_to_json(ket: np.ndarray) -> dict:
    ket = np.asarray(ket, dtype=complex)
    return {"re": ket.real.tolist(), "im": ket.imag.tolist()}


def ket_from_json(obj: dict) -> np.ndarray:
    try:
        ket = np.asarray(obj["re"], dtype=float) + 1j * np.asarray(obj["im"], dtype=float)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed ket envelope: {exc}") from exc
    if ket.ndim != 1 or not np.all(np.isfinite(obj["re"])) or not np.all(np.isfinite(obj["im"])):
        raise ValueError("ket envelope must hold finite 1-d re/im arrays")
    return ket


def ensemble_to_json(e: ProductEnsemble) -> dict:
    return {
        "weights": e.weights.tolist(),
        "a_kets": [ket_to_json(k) for k in e.a_kets],
        "b_kets": [ket_to_json(k) for k in e.b_kets],
    }


def ensemble_from_json(obj: dict) -> ProductEnsemble:
    try:
        weights = np.asarray(obj["weights"], dtype=float)
        a = np.array([ket_from_json(k) for k in obj["a_kets"]])
        b = np.array([ket_from_json(k) for k in obj["b_kets"]])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed ensemble envelope: {exc}") from exc
    return ProductEnsemble(weights, a, b)


def save_state(path, rho: DensityMatrix) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(state_to_json(rho), fh)


def load_state(path) -> DensityMatrix:
    with open(path, "r", encoding="utf-8") as fh:
        return state_from_json(json.load(fh))


def save_ensemble(path, e: ProductEnsemble) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(ensemble_to_json(e), fh)


def load_ensemble(path) -> ProductEnsemble:
    with open(path, "r", encoding="utf-8") as fh:
        return ensemble_from_json(json.load(fh))
