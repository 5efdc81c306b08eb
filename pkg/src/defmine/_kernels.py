"""Hot numeric kernels: numba-jitted loops with pure-numpy fallbacks.

Three inner loops dominate production runs: pattern-window matching over
tagged definitions, inversion counting inside Kendall's tau, and batched
bilinear form evaluation.  Each has a numba ``@njit`` implementation and a
pure-numpy one; the env switch ``DEFMINE_DISABLE_NUMBA=1`` (or numba being
unimportable) selects the numpy path.  Both paths are exact and
interchangeable; ``benchmarks/bench_kernels.py`` compares them.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    NUMBA_AVAILABLE = False

    def njit(*args, **kwargs):  # type: ignore[misc]
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


DISABLE_ENV = "DEFMINE_DISABLE_NUMBA"


def numba_enabled() -> bool:
    """Whether the jitted path is active (checked per call, so tests can flip it)."""
    return NUMBA_AVAILABLE and os.environ.get(DISABLE_ENV, "") not in ("1", "true", "yes")


# ---------------------------------------------------------------------------
# Pattern-window matching


@njit(cache=True)
def _match_positions_numba(seq, pat):  # pragma: no cover - measured via dispatch
    n = seq.shape[0]
    m = pat.shape[0]
    out = np.empty(n, dtype=np.int64)
    count = 0
    for start in range(n - m + 1):
        ok = True
        for j in range(m):
            if seq[start + j] != pat[j]:
                ok = False
                break
        if ok:
            out[count] = start
            count += 1
    return out[:count]


def _match_positions_numpy(seq: np.ndarray, pat: np.ndarray) -> np.ndarray:
    n, m = seq.shape[0], pat.shape[0]
    if m > n:
        return np.empty(0, dtype=np.int64)
    windows = np.lib.stride_tricks.sliding_window_view(seq, m)
    return np.nonzero((windows == pat).all(axis=1))[0].astype(np.int64)


def match_positions(seq: np.ndarray, pat: np.ndarray) -> np.ndarray:
    """Start indices of every window of ``seq`` equal to ``pat`` (overlaps kept)."""
    seq = np.ascontiguousarray(seq, dtype=np.int16)
    pat = np.ascontiguousarray(pat, dtype=np.int16)
    if pat.shape[0] == 0:
        raise ValueError("empty pattern")
    if pat.shape[0] > seq.shape[0]:
        return np.empty(0, dtype=np.int64)
    if numba_enabled():
        return _match_positions_numba(seq, pat)
    return _match_positions_numpy(seq, pat)


# ---------------------------------------------------------------------------
# Inversion counting (Kendall's tau)


@njit(cache=True)
def _count_inversions_numba(values):  # pragma: no cover - measured via dispatch
    n = values.shape[0]
    work = values.copy()
    buf = np.empty(n, dtype=work.dtype)
    inversions = 0
    width = 1
    while width < n:
        for lo in range(0, n - width, 2 * width):
            mid = lo + width
            hi = min(lo + 2 * width, n)
            i, j, k = lo, mid, lo
            while i < mid and j < hi:
                if work[i] <= work[j]:
                    buf[k] = work[i]
                    i += 1
                else:
                    buf[k] = work[j]
                    inversions += mid - i
                    j += 1
                k += 1
            while i < mid:
                buf[k] = work[i]
                i += 1
                k += 1
            while j < hi:
                buf[k] = work[j]
                j += 1
                k += 1
            for idx in range(lo, hi):
                work[idx] = buf[idx]
        width *= 2
    return inversions


def _count_inversions_numpy(values: np.ndarray) -> int:
    work = values.copy()
    n = work.shape[0]
    inversions = 0
    width = 1
    while width < n:
        for lo in range(0, n - width, 2 * width):
            mid = lo + width
            hi = min(lo + 2 * width, n)
            left = work[lo:mid]
            right = work[mid:hi]
            # pairs (l, r) with l > r, i.e. strict inversions across the halves
            inversions += int(
                (left.shape[0] - np.searchsorted(left, right, side="right")).sum()
            )
            work[lo:hi] = np.sort(work[lo:hi], kind="mergesort")
        width *= 2
    return inversions


def count_inversions(values: np.ndarray) -> int:
    """Number of pairs i < j with values[i] > values[j] (strict)."""
    values = np.ascontiguousarray(values, dtype=np.float64)
    if values.shape[0] < 2:
        return 0
    if numba_enabled():
        return int(_count_inversions_numba(values))
    return _count_inversions_numpy(values)


# ---------------------------------------------------------------------------
# Batched bilinear forms


@njit(cache=True)
def _bilinear_forms_numba(u1, mat, u2):  # pragma: no cover - measured via dispatch
    n, r = u1.shape
    out = np.empty(n, dtype=np.float64)
    for i in range(n):
        acc = 0.0
        for a in range(r):
            row = 0.0
            for b in range(r):
                row += mat[a, b] * u2[i, b]
            acc += u1[i, a] * row
        out[i] = acc
    return out


def _bilinear_forms_numpy(u1: np.ndarray, mat: np.ndarray, u2: np.ndarray) -> np.ndarray:
    return np.einsum("ia,ab,ib->i", u1, mat, u2)


def bilinear_forms(u1: np.ndarray, mat: np.ndarray, u2: np.ndarray) -> np.ndarray:
    """Row-wise u1[i]^T mat u2[i] for stacked encodings."""
    u1 = np.ascontiguousarray(u1, dtype=np.float64)
    u2 = np.ascontiguousarray(u2, dtype=np.float64)
    mat = np.ascontiguousarray(mat, dtype=np.float64)
    if u1.shape != u2.shape or u1.ndim != 2:
        raise ValueError("u1 and u2 must be matching (n, r) arrays")
    if mat.shape != (u1.shape[1], u1.shape[1]):
        raise ValueError("relation matrix shape mismatch")
    if numba_enabled():
        return _bilinear_forms_numba(u1, mat, u2)
    return _bilinear_forms_numpy(u1, mat, u2)
