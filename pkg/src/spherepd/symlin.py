"""Dense symmetric linear algebra.

Eigenvalues are computed with a self-contained cyclic Jacobi rotation
scheme (no external eigensolver); everything else in the library reduces
its positive-semidefiniteness questions to this module.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "SymmetricMatrix",
    "PsdReport",
    "eigenvalues",
    "eigensystem",
    "is_psd",
    "hadamard",
    "gram",
    "psd_rank",
    "realize",
]

DEFAULT_TOL = 1e-8

# Off-diagonal Frobenius norm target, relative to the spectral scale.
_JACOBI_OFF_TOL = 1e-13
_MAX_SWEEPS = 100


class SymmetricMatrix:
    """A dense real symmetric matrix.

    Symmetry is structural: only the upper triangle of the input is kept
    and mirrored, so ``entries(i, j) == entries(j, i)`` always holds.
    """

    def __init__(self, array: np.ndarray, check: bool = True):
        a = np.asarray(array, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {a.shape}")
        if a.shape[0] < 1:
            raise ValueError("dimension must be >= 1")
        if check:
            scale = max(np.max(np.abs(a)), 1.0)
            if np.max(np.abs(a - a.T)) > 1e-10 * scale:
                raise ValueError("input matrix is not symmetric")
        upper = np.triu(a)
        self._array = upper + np.triu(a, 1).T
        self._array.flags.writeable = False

    @classmethod
    def from_upper(cls, dim: int, upper: np.ndarray) -> "SymmetricMatrix":
        """Build from the row-major upper triangle (length dim*(dim+1)/2)."""
        upper = np.asarray(upper, dtype=float)
        if upper.size != dim * (dim + 1) // 2:
            raise ValueError("upper triangle has wrong length")
        a = np.zeros((dim, dim))
        a[np.triu_indices(dim)] = upper
        return cls(a + np.triu(a, 1).T, check=False)

    @property
    def dim(self) -> int:
        return self._array.shape[0]

    @property
    def array(self) -> np.ndarray:
        """Read-only view of the full matrix."""
        return self._array

    @property
    def upper(self) -> np.ndarray:
        """Row-major upper triangle, the canonical storage."""
        return self._array[np.triu_indices(self.dim)]

    def __repr__(self) -> str:
        return f"SymmetricMatrix(dim={self.dim})"


@dataclass(frozen=True)
class PsdReport:
    """Outcome of a positive-semidefiniteness test."""

    min_eigenvalue: float
    matrix_scale: float
    is_psd: bool
    tolerance_used: float


def _as_array(a) -> np.ndarray:
    if isinstance(a, SymmetricMatrix):
        return np.array(a.array)
    arr = np.array(a, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError("expected a square matrix")
    return 0.5 * (arr + arr.T)


def _jacobi_core(a: np.ndarray, v: np.ndarray) -> None:
    """Cyclic Jacobi sweeps on a (in place); rotations accumulate in v."""
    n = a.shape[0]
    for _sweep in range(_MAX_SWEEPS):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off += 2.0 * a[p, q] * a[p, q]
        off = np.sqrt(off)
        scale = off
        for i in range(n):
            if abs(a[i, i]) > scale:
                scale = abs(a[i, i])
        if off <= _JACOBI_OFF_TOL * scale or off == 0.0:
            return
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = 0.5 * (a[q, q] - a[p, p]) / apq
                if theta >= 0.0:
                    t = 1.0 / (theta + np.sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                for i in range(n):
                    aip = a[i, p]
                    aiq = a[i, q]
                    a[i, p] = c * aip - s * aiq
                    a[i, q] = s * aip + c * aiq
                for i in range(n):
                    api = a[p, i]
                    aqi = a[q, i]
                    a[p, i] = c * api - s * aqi
                    a[q, i] = s * api + c * aqi
                for i in range(n):
                    vip = v[i, p]
                    viq = v[i, q]
                    v[i, p] = c * vip - s * viq
                    v[i, q] = s * vip + c * viq


try:  # JIT the sweep loop; the pure-Python path stays as fallback
    from numba import njit

    _jacobi_core = njit(cache=True)(_jacobi_core)
except ImportError:  # pragma: no cover
    pass


def eigensystem(a) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and matching orthonormal eigenvectors.

    Returns (w, V) with V[:, i] the unit eigenvector for w[i].  Vector
    signs are fixed so the largest-magnitude component is positive,
    which keeps downstream factorizations deterministic.
    """
    arr = _as_array(a)
    n = arr.shape[0]
    v = np.eye(n)
    _jacobi_core(arr, v)
    w = np.diag(arr).copy()
    order = np.argsort(w, kind="stable")
    w = w[order]
    v = v[:, order]
    for i in range(n):
        j = np.argmax(np.abs(v[:, i]))
        if v[j, i] < 0:
            v[:, i] = -v[:, i]
    return w, v


def eigenvalues(a) -> np.ndarray:
    """All eigenvalues of a symmetric matrix, ascending."""
    return eigensystem(a)[0]


def is_psd(a, tol: float = DEFAULT_TOL) -> PsdReport:
    """Relative-tolerance PSD test: min eigenvalue >= -tol * max(scale, 1)."""
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    w = eigenvalues(a)
    scale = float(np.max(np.abs(w)))
    lo = float(w[0])
    return PsdReport(
        min_eigenvalue=lo,
        matrix_scale=scale,
        is_psd=lo >= -tol * max(scale, 1.0),
        tolerance_used=tol,
    )


def hadamard(a, b) -> SymmetricMatrix:
    """Entrywise (Schur) product; preserves positive semidefiniteness."""
    aa = _as_array(a)
    bb = _as_array(b)
    if aa.shape != bb.shape:
        raise ValueError(f"dimension mismatch: {aa.shape[0]} vs {bb.shape[0]}")
    return SymmetricMatrix(aa * bb, check=False)


def gram(points) -> SymmetricMatrix:
    """Gram matrix of a point set (rows of a 2-D array, or .coords)."""
    coords = getattr(points, "coords", points)
    coords = np.asarray(coords, dtype=float)
    if coords.ndim != 2 or coords.shape[0] == 0:
        raise ValueError("expected a nonempty r x n array of points")
    return SymmetricMatrix(coords @ coords.T, check=False)


def psd_rank(a, tol: float = DEFAULT_TOL) -> int:
    """Number of eigenvalues above tol * max(scale, 1); input must be PSD."""
    report = is_psd(a, tol)
    if not report.is_psd:
        raise ValueError(
            f"matrix is not PSD (min eigenvalue {report.min_eigenvalue:.3e})"
        )
    w = eigenvalues(a)
    return int(np.sum(w > tol * max(report.matrix_scale, 1.0)))


def realize(a, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Points whose Gram matrix is the given PSD matrix.

    Factorizes A = Q L Q^T and returns the rows of Q L^{1/2} restricted
    to the eigenvalues above the rank threshold, ordered by descending
    eigenvalue.  The embedding dimension equals psd_rank(A, tol).
    """
    report = is_psd(a, tol)
    if not report.is_psd:
        raise ValueError(
            f"matrix is not PSD (min eigenvalue {report.min_eigenvalue:.3e})"
        )
    w, v = eigensystem(a)
    keep = w > tol * max(report.matrix_scale, 1.0)
    w = w[keep][::-1]
    v = v[:, keep][:, ::-1]
    return v * np.sqrt(w)
