"""Dense complex linear algebra for small Hilbert spaces (dim <~ 100).

Conventions used throughout the package:

* subsystem index 0 is the leftmost tensor factor,
* Kronecker products are row-major, so ``kron(A, B)`` has entry
  ``(i*p + k, j*q + l) = A[i, j] * B[k, l]`` for B of shape (p, q).
"""

from __future__ import annotations

import json
import math
from typing import Iterable, NamedTuple

import numpy as np

ATOL = 1e-10


class NotHermitianError(ValueError):
    """Raised when an operation requires a Hermitian matrix and gets none."""


class EigResult(NamedTuple):
    eigenvalues: np.ndarray  # real, ascending
    eigenvectors: np.ndarray  # unit-norm columns


def as_rng(seed: int | np.random.Generator) -> np.random.Generator:
    """Normalize an integer seed or an existing Generator to a Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with subsystem 0 on the left."""
    return np.kron(np.asarray(a), np.asarray(b))


def _check_square(m: np.ndarray, dims: Iterable[int]) -> tuple[np.ndarray, list[int]]:
    m = np.asarray(m)
    dims = [int(d) for d in dims]
    total = math.prod(dims)
    if m.ndim != 2 or m.shape != (total, total):
        raise ValueError(f"matrix shape {m.shape} does not match dims {dims}")
    return m, dims


def partial_trace(m: np.ndarray, dims: Iterable[int], keep: Iterable[int]) -> np.ndarray:
    """Trace out all subsystems not in `keep`; kept factors stay in order."""
    m, dims = _check_square(m, dims)
    n = len(dims)
    keep = sorted(set(int(k) for k in keep))
    if not keep or any(k < 0 or k >= n for k in keep):
        raise ValueError(f"keep={keep} is not a nonempty subset of range({n})")
    t = m.reshape(dims + dims)
    nd = n
    for i in [j for j in range(n) if j not in keep][::-1]:
        t = np.trace(t, axis1=i, axis2=i + nd)
        nd -= 1
    d_keep = math.prod(dims[k] for k in keep)
    return t.reshape(d_keep, d_keep)


def partial_transpose(m: np.ndarray, dims: Iterable[int], side: str = "b") -> np.ndarray:
    """Transpose one factor of a bipartite operator; `side` is 'a' or 'b'."""
    m, dims = _check_square(m, dims)
    if len(dims) != 2:
        raise ValueError(f"partial_transpose needs bipartite dims, got {dims}")
    da, db = dims
    t = m.reshape(da, db, da, db)
    if side == "a":
        t = t.transpose(2, 1, 0, 3)
    elif side == "b":
        t = t.transpose(0, 3, 2, 1)
    else:
        raise ValueError(f"side must be 'a' or 'b', got {side!r}")
    return t.reshape(da * db, da * db)


def permute_subsystems(m: np.ndarray, dims: Iterable[int], perm: Iterable[int]) -> np.ndarray:
    """Reorder tensor factors of an operator; perm[i] = old index of new factor i."""
    m, dims = _check_square(m, dims)
    perm = [int(p) for p in perm]
    n = len(dims)
    if sorted(perm) != list(range(n)):
        raise ValueError(f"perm={perm} is not a permutation of range({n})")
    t = m.reshape(dims + dims).transpose(perm + [p + n for p in perm])
    total = math.prod(dims)
    return t.reshape(total, total)


def hermitian_eig(h: np.ndarray, atol: float = ATOL) -> EigResult:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending."""
    h = np.asarray(h)
    dev = float(np.max(np.abs(h - h.conj().T))) if h.size else 0.0
    if dev > atol:
        raise NotHermitianError(f"matrix deviates from Hermiticity by {dev:.3e}")
    w, v = np.linalg.eigh(h)
    return EigResult(w, v)


def svd_values(m: np.ndarray) -> np.ndarray:
    """Singular values of m, descending and nonnegative."""
    return np.linalg.svd(np.asarray(m), compute_uv=False)


def numerical_rank(values: np.ndarray, rel_tol: float = 1e-8) -> int:
    """Count values above rel_tol * max(values); 0 for empty or all-zero input."""
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        return 0
    mx = float(v.max())
    if mx <= 0.0:
        return 0
    return int(np.count_nonzero(v > rel_tol * mx))


def random_unitary(d: int, seed: int | np.random.Generator) -> np.ndarray:
    """Haar-random unitary: complex Ginibre matrix, QR, phase-fixed R diagonal."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    rng = as_rng(seed)
    g = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2.0)
    q, r = np.linalg.qr(g)
    diag = np.diagonal(r)
    return q * (diag / np.abs(diag))


def random_hermitian_direction(d: int, seed: int | np.random.Generator) -> np.ndarray:
    """Random Hermitian matrix normalized to unit Frobenius norm."""
    rng = as_rng(seed)
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    h = (g + g.conj().T) / 2.0
    return h / np.linalg.norm(h)


def expm_hermitian(h: np.ndarray, scale: complex = 1.0) -> np.ndarray:
    """exp(scale * h) for Hermitian h via eigendecomposition."""
    w, v = np.linalg.eigh(np.asarray(h))
    return (v * np.exp(scale * w)) @ v.conj().T


def unitary_step(u: np.ndarray, seed: int | np.random.Generator, eps: float) -> np.ndarray:
    """Left-multiply u by exp(i*eps*H) with H a unit-norm random Hermitian."""
    u = np.asarray(u)
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    if eps == 0.0:
        return u
    h = random_hermitian_direction(u.shape[0], seed)
    return expm_hermitian(h, 1j * eps) @ u


# --- JSON envelope -----------------------------------------------------------
#
# Matrices travel as {"rows": n, "cols": m, "re": [[...]], "im": [[...]]}.


def matrix_to_json(m: np.ndarray) -> dict:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2:
        raise ValueError("only 2-d matrices serialize to the JSON envelope")
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "re": m.real.tolist(),
        "im": m.imag.tolist(),
    }


def matrix_from_json(obj: dict) -> np.ndarray:
    try:
        rows, cols = int(obj["rows"]), int(obj["cols"])
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj["im"], dtype=float)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed matrix envelope: {exc}") from exc
    if re.shape != (rows, cols) or im.shape != (rows, cols):
        raise ValueError(
            f"matrix envelope shape mismatch: header {(rows, cols)}, "
            f"re {re.shape}, im {im.shape}"
        )
    m = re + 1j * im
    if not np.all(np.isfinite(re)) or not np.all(np.isfinite(im)):
        raise ValueError("matrix entries must be finite")
    return m


def save_matrix(path, m: np.ndarray) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(matrix_to_json(m), fh)


def load_matrix(path) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as fh:
        return matrix_from_json(json.load(fh))
