"""Pure-Python versions of the compiled kernels in ``_kernels.pyx``.

Same signatures, same arithmetic order, so results agree to rounding.
"""

from __future__ import annotations

import math

import numpy as np


def jacobi_hermitian(a, tol: float, max_sweeps: int):
    """Cyclic complex Jacobi. Returns (diagonal, vectors, sweeps, converged)."""
    A = [[complex(x) for x in row] for row in np.asarray(a, dtype=np.complex128)]
    n = len(A)
    V = [[1.0 + 0j if i == j else 0j for j in range(n)] for i in range(n)]
    scale = math.sqrt(sum(abs(x) ** 2 for row in A for x in row))
    scale = max(scale, 1.0)

    off = 0.0
    sweep = 0
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for p in range(n):
            for q in range(n):
                if p != q:
                    z = A[p][q]
                    off += z.real * z.real + z.imag * z.imag
        if math.sqrt(off) <= tol * scale or sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p][q]
                g = math.sqrt(apq.real * apq.real + apq.imag * apq.imag)
                if g == 0.0:
                    continue
                app = A[p][p].real
                aqq = A[q][q].real
                theta = (aqq - app) / (2.0 * g)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                elif theta >= 0.0:
                    t = 1.0 / (theta + math.sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                ph = apq / g
                sph = s * ph
                sphc = s * ph.conjugate()
                for k in range(n):
                    x, y = A[k][p], A[k][q]
                    A[k][p] = c * x - sphc * y
                    A[k][q] = sph * x + c * y
                Ap, Aq = A[p], A[q]
                for k in range(n):
                    x, y = Ap[k], Aq[k]
                    Ap[k] = c * x - sph * y
                    Aq[k] = sphc * x + c * y
                A[p][q] = 0j
                A[q][p] = 0j
                A[p][p] = complex(app - t * g)
                A[q][q] = complex(aqq + t * g)
                for k in range(n):
                    x, y = V[k][p], V[k][q]
                    V[k][p] = c * x - sphc * y
                    V[k][q] = sph * x + c * y

    diag = np.array([A[k][k].real for k in range(n)])
    return diag, np.array(V, dtype=np.complex128), sweep, math.sqrt(off) <= tol * scale


def permuted_pairs(n_copies: int, uniforms: np.ndarray, n_pairs: int) -> np.ndarray:
    """Fisher-Yates shuffle per row of ``uniforms``; emit consecutive pairs.

    Vectorized across rows; the swap sequence per row is the same as the
    compiled loop.
    """
    runs = uniforms.shape[0]
    perm = np.tile(np.arange(n_copies, dtype=np.int64), (runs, 1))
    rows = np.arange(runs)
    for i in range(n_copies - 1, 0, -1):
        j = np.minimum((uniforms[:, i - 1] * (i + 1)).astype(np.int64), i)
        a = perm[rows, i].copy()
        perm[rows, i] = perm[rows, j]
        perm[rows, j] = a
    return np.ascontiguousarray(perm[:, : 2 * n_pairs].reshape(runs, n_pairs, 2))


def inverse_cdf(cdf: np.ndarray, uniforms: np.ndarray) -> np.ndarray:
    """Index of the first cdf entry strictly above each uniform."""
    idx = np.searchsorted(cdf, uniforms, side="right")
    return np.minimum(idx, len(cdf) - 1).astype(np.int64)
