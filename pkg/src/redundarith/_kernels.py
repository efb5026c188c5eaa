"""Hot numeric kernels with two interchangeable backends.

Every kernel exists twice: a compiled scalar-loop version (numba) and a
vectorized pure-numpy version.  The active backend is chosen at import
time from the REDUNDARITH_BACKEND environment variable ("numba" or
"numpy"); `use_backend` switches at runtime, which the equivalence tests
and the benchmark rely on.

Digit matrices are int64 arrays of shape (rows, width) with column j
holding the digits of weight radix**j.  Column sums stay far below 2**63
for every supported shape (rows <= 127, radix <= 10), so plain int64
arithmetic is exact everywhere in here.
"""

from __future__ import annotations

import os
import warnings

import numpy as np

BACKEND_ENV = "REDUNDARITH_BACKEND"


def _row_count_after(m: int, q: int) -> int:
    # smallest t with q**t >= 1 + m*(q-1); exact integer loop
    bound = 1 + m * (q - 1)
    t = 0
    p = 1
    while p < bound:
        p *= q
        t += 1
    return max(t, 1)


# ---------------------------------------------------------------------------
# pure-numpy bodies


def _np_reduce_once(digits: np.ndarray, q: int) -> np.ndarray:
    m, n = digits.shape
    m2 = _row_count_after(m, q)
    col = digits.sum(axis=0, dtype=np.int64)
    out = np.zeros((m2, n + m2 - 1), dtype=np.int64)
    rem = col
    for h in range(m2):
        out[h, h : h + n] = rem % q
        rem = rem // q
    return out


def _np_reduce_to_two(digits: np.ndarray, q: int) -> tuple[np.ndarray, int]:
    stages = 0
    while digits.shape[0] > 2:
        digits = _np_reduce_once(digits, q)
        stages += 1
    return digits, stages


def _np_popcount_batch(bits: np.ndarray) -> np.ndarray:
    b, m = bits.shape
    p2 = 1
    while p2 < m:
        p2 *= 2
    counts = np.zeros((b, p2), dtype=np.int64)
    counts[:, :m] = bits
    level = 0
    while counts.shape[1] > 1:
        counts = counts[:, 0::2] + counts[:, 1::2]
        level += 1
        assert counts.max(initial=0) <= (1 << level)
    return counts[:, 0]


def _np_acc_stream1(
    ops: np.ndarray, s: np.ndarray, c: np.ndarray, xor_variant: bool
) -> int:
    w, n = ops.shape
    overflow = 0
    for i in range(w):
        if xor_variant:
            overflow += int(s[n] ^ c[n])
        else:
            overflow += int(s[n] + c[n])
        s[n] = 0
        c[n] = 0
        t = ops[i] + s[:n] + c[:n]
        s[:n] = t & 1
        carry = t >> 1
        c[1:n] = carry[: n - 1]
        c[0] = 0
        overflow += int(carry[n - 1])
    return overflow


def _np_acc_stream2(
    ops_a: np.ndarray,
    ops_b: np.ndarray,
    s: np.ndarray,
    c: np.ndarray,
    xor_variant: bool,
) -> int:
    w, n = ops_a.shape
    overflow = 0
    g = np.zeros(n + 1, dtype=np.int64)
    for i in range(w):
        if xor_variant:
            overflow += int(s[n] ^ c[n])
        else:
            overflow += int(s[n] + c[n])
        s[n] = 0
        c[n] = 0
        alpha = ops_a[i] + ops_b[i] + c[:n]
        p = alpha & 1
        g[1:] = alpha >> 1
        g[0] = 0
        beta = p + g[:n] + s[:n]
        s[:n] = beta & 1
        s[n] = g[n]
        c[1:] = beta >> 1
        c[0] = 0
    return overflow


def _np_pp_unsigned(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    na = a.shape[0]
    nb = b.shape[0]
    out = np.zeros((nb, na + nb - 1), dtype=np.int64)
    for j in range(nb):
        out[j, j : j + na] = b[j] * a
    return out


_NUMPY_IMPL = {
    "reduce_once": _np_reduce_once,
    "reduce_to_two": _np_reduce_to_two,
    "popcount_batch": _np_popcount_batch,
    "acc_stream1": _np_acc_stream1,
    "acc_stream2": _np_acc_stream2,
    "pp_unsigned": _np_pp_unsigned,
}


# ---------------------------------------------------------------------------
# numba bodies (scalar loops; compiled lazily, cached on disk)

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    njit = None
    HAS_NUMBA = False


if HAS_NUMBA:

    @njit(cache=True)
    def _nb_row_count_after(m, q):
        bound = 1 + m * (q - 1)
        t = 0
        p = 1
        while p < bound:
            p *= q
            t += 1
        if t < 1:
            t = 1
        return t

    @njit(cache=True)
    def _nb_reduce_once(digits, q):
        m, n = digits.shape
        m2 = _nb_row_count_after(m, q)
        out = np.zeros((m2, n + m2 - 1), dtype=np.int64)
        for j in range(n):
            sj = np.int64(0)
            for i in range(m):
                sj += digits[i, j]
            for h in range(m2):
                out[h, j + h] = sj % q
                sj //= q
        return out

    @njit(cache=True)
    def _nb_reduce_to_two(digits, q):
        stages = 0
        while digits.shape[0] > 2:
            digits = _nb_reduce_once(digits, q)
            stages += 1
        return digits, stages

    @njit(cache=True)
    def _nb_popcount_batch(bits):
        b, m = bits.shape
        p2 = 1
        while p2 < m:
            p2 *= 2
        counts = np.zeros((b, p2), dtype=np.int64)
        counts[:, :m] = bits
        width = p2
        level = 0
        while width > 1:
            half = width // 2
            level += 1
            bound = 1 << level
            for r in range(b):
                for k in range(half):
                    v = counts[r, 2 * k] + counts[r, 2 * k + 1]
                    assert v <= bound
                    counts[r, k] = v
            width = half
        return counts[:, 0].copy()

    @njit(cache=True)
    def _nb_acc_stream1(ops, s, c, xor_variant):
        w, n = ops.shape
        overflow = np.int64(0)
        for i in range(w):
            if xor_variant:
                overflow += s[n] ^ c[n]
            else:
                overflow += s[n] + c[n]
            s[n] = 0
            c[n] = 0
            prev_carry = np.int64(0)
            for j in range(n):
                t = ops[i, j] + s[j] + c[j]
                s[j] = t & 1
                c[j] = prev_carry
                prev_carry = t >> 1
            overflow += prev_carry
            c[0] = 0
        return overflow

    @njit(cache=True)
    def _nb_acc_stream2(ops_a, ops_b, s, c, xor_variant):
        w, n = ops_a.shape
        overflow = np.int64(0)
        for i in range(w):
            if xor_variant:
                overflow += s[n] ^ c[n]
            else:
                overflow += s[n] + c[n]
            s[n] = 0
            c[n] = 0
            g_prev = np.int64(0)  # stage-A carry entering column j
            h_prev = np.int64(0)  # stage-B carry entering column j
            for j in range(n):
                alpha = ops_a[i, j] + ops_b[i, j] + c[j]
                p = alpha & 1
                g_next = alpha >> 1
                beta = p + g_prev + s[j]
                s[j] = beta & 1
                c[j] = h_prev
                h_prev = beta >> 1
                g_prev = g_next
            s[n] = g_prev
            c[n] = h_prev
            c[0] = 0
        return overflow

    @njit(cache=True)
    def _nb_pp_unsigned(a, b):
        na = a.shape[0]
        nb = b.shape[0]
        out = np.zeros((nb, na + nb - 1), dtype=np.int64)
        for j in range(nb):
            if b[j] != 0:
                for i in range(na):
                    out[j, j + i] = b[j] * a[i]
        return out

    _NUMBA_IMPL = {
        "reduce_once": _nb_reduce_once,
        "reduce_to_two": _nb_reduce_to_two,
        "popcount_batch": _nb_popcount_batch,
        "acc_stream1": _nb_acc_stream1,
        "acc_stream2": _nb_acc_stream2,
        "pp_unsigned": _nb_pp_unsigned,
    }
else:
    _NUMBA_IMPL = {}


# ---------------------------------------------------------------------------
# dispatch

_active_name = ""
_active: dict = {}


def use_backend(name: str) -> None:
    """Select the kernel backend ("numba" or "numpy") at runtime."""
    global _active_name, _active
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r} (expected 'numba' or 'numpy')")
    if name == "numba" and not HAS_NUMBA:
        warnings.warn("numba unavailable, falling back to numpy kernels")
        name = "numpy"
    _active = _NUMBA_IMPL if name == "numba" else _NUMPY_IMPL
    _active_name = name


def active_backend() -> str:
    return _active_name


use_backend(os.environ.get(BACKEND_ENV, "numba" if HAS_NUMBA else "numpy"))


def reduce_once_digits(digits: np.ndarray, q: int) -> np.ndarray:
    return _active["reduce_once"](digits, q)


def reduce_to_two_digits(digits: np.ndarray, q: int) -> tuple[np.ndarray, int]:
    return _active["reduce_to_two"](digits, q)


def popcount_batch(bits: np.ndarray) -> np.ndarray:
    return _active["popcount_batch"](bits)


def acc_stream1(ops, s, c, xor_variant: bool) -> int:
    return int(_active["acc_stream1"](ops, s, c, xor_variant))


def acc_stream2(ops_a, ops_b, s, c, xor_variant: bool) -> int:
    return int(_active["acc_stream2"](ops_a, ops_b, s, c, xor_variant))


def pp_unsigned_digits(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return _active["pp_unsigned"](a, b)
