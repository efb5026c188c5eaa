"""High-radix division by a table of divisor multiples (a digital scale).

A scale for divisor z holds the multiples d*z for every digit d of the
working radix q**k.  One iteration compares the shifted residual against
the scale, takes the largest entry not exceeding it (the shortage rule),
emits that d as the next quotient digit and keeps the difference as the
new residual.  With k=1, q=2 this is plain restoring division.

The first iteration gets an extended scale of q**(k+1) entries because a
normalized quotient can reach q - epsilon, so its leading digit carries
the integer position too.

Comparisons are modeled the way the hardware does them: the sign bit of
entry - r is extracted through complement-code addition for every entry
at once, giving a thermometer vector whose last set bit is the digit.  A
binary search over the sorted entries gives the same answer faster; both
paths are exposed and must agree.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction

MAX_SCALE_ENTRIES = 1 << 20


@dataclass(frozen=True)
class ScaleTable:
    """Multiples d*z for d = 0 .. size-1."""

    z: int
    k: int
    radix: int
    entries: tuple

    @property
    def size(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class DivisionState:
    iteration: int
    digit: int
    residual: int
    thermometer: tuple | None = None


def build_scale(z: int, k: int, radix: int = 2, extended: bool = False) -> ScaleTable:
    """Scale of q**k (or q**(k+1) when extended) multiples of z."""
    if z <= 0:
        raise ValueError("divisor must be positive")
    if k < 1:
        raise ValueError("k must be >= 1")
    if radix < 2:
        raise ValueError("radix must be >= 2")
    size = radix ** (k + 1) if extended else radix**k
    if size > MAX_SCALE_ENTRIES:
        raise ValueError(f"scale would need {size} entries (limit {MAX_SCALE_ENTRIES})")
    return ScaleTable(z=z, k=k, radix=radix, entries=tuple(d * z for d in range(size)))


def _sign_via_complement(entry: int, r: int, width: int) -> int:
    """1 when entry <= r, computed as the sign bit of r - entry.

    r - entry is formed by adding the two's complement of entry over a
    fixed `width`-bit grid; the top bit read back is the sign.
    """
    mask = (1 << width) - 1
    total = (r + ((~entry + 1) & mask)) & mask
    sign = (total >> (width - 1)) & 1
    return 1 - sign  # sign clear means entry <= r


def _comparison_width(scale: ScaleTable) -> int:
    bound = scale.size * scale.z  # residuals and entries both lie below this
    width = 1
    while (1 << width) < bound:
        width += 1
    return width + 1  # one sign position above the magnitude


def select_digit(
    r: int, scale: ScaleTable, method: str = "bisect"
) -> tuple[int, int]:
    """Largest digit h with h*z <= r, and the shortage r - h*z.

    method="eager" evaluates every scale entry through the complement
    comparator and decodes the thermometer vector; method="bisect" is
    the software fast path.  Both agree by construction.
    """
    if r < 0:
        raise ValueError("residual must be non-negative")
    if r >= scale.size * scale.z:
        raise ValueError("residual out of scale range")
    if method == "bisect":
        h = bisect_right(scale.entries, r) - 1
    elif method == "eager":
        flags = thermometer_flags(r, scale)
        for prev, cur in zip(flags, flags[1:]):
            assert prev >= cur, "comparator vector must be monotone"
        h = sum(flags) - 1
    else:
        raise ValueError("method must be 'bisect' or 'eager'")
    return h, r - scale.entries[h]


def thermometer_flags(r: int, scale: ScaleTable) -> tuple:
    """Per-entry comparator outputs (1 while entry <= r), MSB of a
    complement-code addition each."""
    width = _comparison_width(scale)
    return tuple(
        _sign_via_complement(entry, r, width) for entry in scale.entries
    )


def divide(
    x: int,
    z: int,
    k: int,
    iters: int,
    radix: int = 2,
    method: str = "bisect",
    trace: list | None = None,
) -> tuple[list[int], int]:
    """Iterative scale division of x by z, k digits of radix `radix` per
    iteration after the first (which also covers the integer position).

    Returns (digits, residual) satisfying exactly
        x * radix**(k*iters) == z * Q + residual,
    with Q = sum of digits[j] * radix**(k*(iters-1-j)).
    """
    if iters < 1:
        raise ValueError("iters must be >= 1")
    if z <= 0:
        raise ValueError("divisor must be positive")
    if not 0 <= x < radix * z:
        raise ValueError("dividend out of range (need 0 <= x < radix*z)")
    step = radix**k
    first = build_scale(z, k, radix, extended=True)
    rest = build_scale(z, k, radix)
    digits = []
    residual = x
    for it in range(1, iters + 1):
        scale = first if it == 1 else rest
        shifted = residual * step
        h, residual = select_digit(shifted, scale, method)
        digits.append(h)
        if trace is not None:
            trace.append(
                DivisionState(
                    iteration=it,
                    digit=h,
                    residual=residual,
                    thermometer=thermometer_flags(shifted, scale)
                    if method == "eager"
                    else None,
                )
            )
    return digits, residual


def quotient_value(digits: list, k: int, radix: int = 2) -> Fraction:
    """Value of a digit string as a truncated quotient: digit j weighs
    radix**(-k*(j+1))."""
    total = Fraction(0)
    for j, d in enumerate(digits):
        total += d * Fraction(radix) ** (-k * (j + 1))
    return total
