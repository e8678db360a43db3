"""Row reduction and matrix products over GF(q) on integer code arrays.

Two interchangeable backends:

* ``numba``: scalar loops compiled with ``@njit``;
* ``numpy``: vectorised row operations, no compilation.

The numba backend is used when numba imports and ``DUALARC_DISABLE_NUMBA`` is
unset (or ``0``).  :func:`use_backend` switches temporarily, which is what the
benchmark and the backend-parity tests do.
"""

from __future__ import annotations

import contextlib
import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]):
            return args[0]
        return lambda f: f


def _env_disabled() -> bool:
    return os.environ.get("DUALARC_DISABLE_NUMBA", "0").strip().lower() not in ("", "0", "false", "no")


BACKEND = "numba" if HAVE_NUMBA and not _env_disabled() else "numpy"


def set_backend(name: str) -> None:
    global BACKEND
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    BACKEND = name


@contextlib.contextmanager
def use_backend(name: str):
    old = BACKEND
    set_backend(name)
    try:
        yield
    finally:
        set_backend(old)


# -- numba scalar field ops ---------------------------------------------------


@njit(cache=True, inline="always")
def _fadd(a, b, mode, p, e, addt):
    if mode == 0:
        return (a + b) % p
    if mode == 1:
        return addt[a, b]
    if p == 2:
        return a ^ b
    r = 0
    place = 1
    for _ in range(e):
        r += (((a // place) % p + (b // place) % p) % p) * place
        place *= p
    return r


@njit(cache=True, inline="always")
def _fneg(a, mode, p, e):
    if p == 2:
        return a
    if mode == 0:
        return (p - a) % p
    r = 0
    place = 1
    for _ in range(e):
        r += ((p - (a // place) % p) % p) * place
        place *= p
    return r


@njit(cache=True, inline="always")
def _fmul(a, b, mode, p, mult, expt, logt):
    if a == 0 or b == 0:
        return 0
    if mode == 0:
        return (a * b) % p
    if mode == 1:
        return mult[a, b]
    return expt[logt[a] + logt[b]]


@njit(cache=True)
def _rref_nb(R, mode, p, e, addt, mult, expt, logt, invt, reduce_up):
    rows, cols = R.shape
    pivots = np.empty(min(rows, cols), dtype=np.int64)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        sel = -1
        for i in range(r, rows):
            if R[i, c] != 0:
                sel = i
                break
        if sel < 0:
            continue
        if sel != r:
            for j in range(cols):
                t = R[r, j]
                R[r, j] = R[sel, j]
                R[sel, j] = t
        piv = R[r, c]
        if piv != 1:
            ip = invt[piv]
            for j in range(c, cols):
                R[r, j] = _fmul(R[r, j], ip, mode, p, mult, expt, logt)
        start = 0 if reduce_up else r + 1
        for i in range(start, rows):
            if i == r:
                continue
            f = R[i, c]
            if f == 0:
                continue
            nf = _fneg(f, mode, p, e)
            for j in range(c, cols):
                x = R[r, j]
                if x != 0:
                    R[i, j] = _fadd(R[i, j], _fmul(nf, x, mode, p, mult, expt, logt), mode, p, e, addt)
        pivots[r] = c
        r += 1
    return r, pivots[:r]


@njit(cache=True)
def _matmul_nb(A, B, mode, p, e, addt, mult, expt, logt):
    n, m = A.shape
    k = B.shape[1]
    C = np.zeros((n, k), dtype=np.int64)
    for i in range(n):
        for t in range(m):
            a = A[i, t]
            if a == 0:
                continue
            for j in range(k):
                b = B[t, j]
                if b != 0:
                    C[i, j] = _fadd(C[i, j], _fmul(a, b, mode, p, mult, expt, logt), mode, p, e, addt)
    return C


# -- numpy backend -------------------------------------------------------------


def _rref_np(R, F, reduce_up):
    rows, cols = R.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        sel = r + nz[0]
        if sel != r:
            R[[r, sel]] = R[[sel, r]]
        piv = R[r, c]
        if piv != 1:
            R[r] = F.mul_arr(R[r], F.inv_table[piv])
        colv = R[:, c].copy()
        colv[r] = 0
        if not reduce_up:
            colv[:r] = 0
        mask = colv != 0
        if mask.any():
            R[mask] = F.sub_arr(R[mask], F.mul_arr(colv[mask][:, None], R[r][None, :]))
        pivots.append(c)
        r += 1
    return r, np.array(pivots, dtype=np.int64)


def _matmul_np(A, B, F):
    if F.e == 1 and F.p <= 1 << 20:
        # (p-1)^2 * inner <= 2^40 * inner: safe in int64 for any sane inner size
        return (A @ B) % F.p
    n, m = A.shape
    C = np.zeros((n, B.shape[1]), dtype=np.int64)
    for t in range(m):
        C = F.add_arr(C, F.mul_arr(A[:, t][:, None], B[t][None, :]))
    return C


# -- dispatch --------------------------------------------------------------------


def rref(M, F, copy: bool = True):
    """Reduced row-echelon form of ``M`` over ``F``.

    Returns ``(R, pivots)`` with ``R`` holding only the nonzero rows.
    """
    R = np.array(M, dtype=np.int64, copy=True) if copy else M
    if R.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    if R.shape[0] == 0 or R.shape[1] == 0:
        return R[:0], np.zeros(0, dtype=np.int64)
    if BACKEND == "numba":
        r, piv = _rref_nb(R, *F.kernel_args, True)
    else:
        r, piv = _rref_np(R, F, True)
    return R[:r], piv


def rank(M, F) -> int:
    R = np.array(M, dtype=np.int64, copy=True)
    if R.size == 0:
        return 0
    if BACKEND == "numba":
        r, _ = _rref_nb(R, *F.kernel_args, False)
    else:
        r, _ = _rref_np(R, F, False)
    return int(r)


def matmul(A, B, F):
    A = np.ascontiguousarray(A, dtype=np.int64)
    B = np.ascontiguousarray(B, dtype=np.int64)
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"shape mismatch {A.shape} @ {B.shape}")
    if A.size == 0 or B.size == 0:
        return np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    if BACKEND == "numba":
        mode, p, e, addt, mult, expt, logt, _ = F.kernel_args
        return _matmul_nb(A, B, mode, p, e, addt, mult, expt, logt)
    return _matmul_np(A, B, F)
