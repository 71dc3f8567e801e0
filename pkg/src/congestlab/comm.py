"""Two-party functions (set disjointness, equality) and bit-string helpers.

A bit string is a tuple of 0/1 ints. Strings indexed by pairs ``(i, j)`` use
row-major order, ``index = k*i + j``; every gadget builder relies on this.
"""

from __future__ import annotations

import random
from typing import Iterable, Sequence

Bits = tuple[int, ...]


class InputError(ValueError):
    """Rejected two-party input."""


def bits(s: Iterable[int] | str) -> Bits:
    """Normalise ``"0101"`` or an iterable of 0/1 into a bit tuple."""
    if isinstance(s, str):
        s = s.replace(" ", "").replace("_", "")
        if set(s) - {"0", "1"}:
            raise InputError(f"not a bit string: {s!r}")
        return tuple(int(ch) for ch in s)
    out = tuple(int(b) for b in s)
    if any(b not in (0, 1) for b in out):
        raise InputError("bits must be 0 or 1")
    return out


def bitstr(x: Sequence[int]) -> str:
    return "".join(str(b) for b in x)


def _same_length(x: Sequence[int], y: Sequence[int]) -> None:
    if len(x) != len(y):
        raise InputError(f"length mismatch: {len(x)} vs {len(y)}")


def disj(x: Sequence[int], y: Sequence[int]) -> bool:
    """False iff some index has ``x[l] == y[l] == 1``."""
    _same_length(x, y)
    return not any(a and b for a, b in zip(x, y))


def eq(x: Sequence[int], y: Sequence[int]) -> bool:
    _same_length(x, y)
    return tuple(x) == tuple(y)


def is_all_ones(x: Sequence[int]) -> bool:
    return len(x) > 0 and all(x)


def validate_disj_input(x: Sequence[int], y: Sequence[int] | None = None) -> bool:
    """True iff neither string is all-ones (such inputs can disconnect gadgets)."""
    return not is_all_ones(x) and (y is None or not is_all_ones(y))


def pair_bit(x: Sequence[int], k: int, i: int, j: int) -> int:
    return x[k * i + j]


def from_pairs(k: int, ones: Iterable[tuple[int, int]]) -> Bits:
    """Length-k² string with 1 exactly at the given ``(i, j)`` pairs."""
    out = [0] * (k * k)
    for i, j in ones:
        out[k * i + j] = 1
    return tuple(out)


def to_int(x: Sequence[int]) -> int:
    """Integer value with bit ``l`` weighted by ``2**l``."""
    v = 0
    for l, b in enumerate(x):
        if b:
            v |= 1 << l
    return v


def from_int(v: int, length: int) -> Bits:
    if v < 0 or v >> length:
        raise InputError(f"{v} does not fit in {length} bits")
    return tuple((v >> l) & 1 for l in range(length))


def to_hex(x: Sequence[int]) -> str:
    """``"<len>:<hex>"``; the hex digits encode :func:`to_int`."""
    width = max(1, (len(x) + 3) // 4)
    return f"{len(x)}:{to_int(x):0{width}x}"


def from_hex(s: str) -> Bits:
    try:
        length, digits = s.split(":", 1)
        return from_int(int(digits, 16), int(length))
    except ValueError as exc:
        raise InputError(f"bad hex bit string {s!r}: {exc}") from None


def parse_bits(text: str, length: int | None = None, rng: random.Random | None = None) -> Bits:
    """Accept literal bits (``0101``), ``LEN:HEX``, or ``seed:N`` (needs ``length``)."""
    if text.startswith("seed:"):
        if length is None:
            raise InputError("random bit strings need a length")
        r = random.Random(int(text[5:]))
        return tuple(r.randrange(2) for _ in range(length))
    if ":" in text:
        out = from_hex(text)
    else:
        out = bits(text)
    if length is not None and len(out) != length:
        raise InputError(f"expected {length} bits, got {len(out)}")
    return out


def random_bits(length: int, rng: random.Random) -> Bits:
    return tuple(rng.randrange(2) for _ in range(length))


def sample_pair(length: int, rng: random.Random, disjoint: bool | None = None) -> tuple[Bits, Bits]:
    """Random admissible (no all-ones) DISJ input pair.

    ``disjoint=None`` flips a fair coin between a disjoint and an intersecting
    pair, so small-K sweeps exercise both sides of the lemmas evenly.
    """
    if length < 1:
        raise InputError("length must be >= 1")
    if disjoint is None:
        disjoint = length < 2 or rng.random() < 0.5
    if not disjoint and length < 2:
        raise InputError("an intersecting pair of length 1 is all-ones")
    while True:
        if disjoint:
            x, y = [], []
            for _ in range(length):
                a, b = rng.choice(((0, 0), (1, 0), (0, 1)))
                x.append(a)
                y.append(b)
            x, y = tuple(x), tuple(y)
        else:
            x, y = list(random_bits(length, rng)), list(random_bits(length, rng))
            l = rng.randrange(length)
            x[l] = y[l] = 1
            x, y = tuple(x), tuple(y)
        if validate_disj_input(x, y):
            return x, y
