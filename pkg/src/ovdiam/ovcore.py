"""Bit-vector primitives and the set-intersection / orthogonal-vectors core.

Two instance kinds live here. An intersection instance is a pair of
equal-length bit vectors x, y; the question is whether some coordinate k
has x[k] = y[k] = 1. An orthogonal-vectors (OV) instance is a pair of
equal-size collections of d-dimensional bit vectors; the question is
whether some left/right pair has componentwise product zero.

`encode_disjointness` turns the former into the latter so that the two
answers coincide: each side is computable from its own vector alone, the
output dimension is exactly 2*ceil(log2 n) + 3, and any orthogonal pair in
the output is forced onto matching indices i = j with x[i] = y[i] = 1.

All types are immutable after construction and all operations are pure,
so everything here is safe to share across threads. Reported witness
indices are 1-based, matching the labeling used by the gadget builder.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional


class DimensionMismatch(ValueError):
    """Two vectors of different lengths were combined."""


class ParseError(ValueError):
    """Malformed instance text; carries the offending 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def ceil_log2(n: int) -> int:
    """Smallest w with 2**w >= n, i.e. ceil(log2 n); 0 for n = 1."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return (n - 1).bit_length()


def encoder_dimension(n: int) -> int:
    """Output dimension of `encode_disjointness` for instances of size n."""
    return 2 * ceil_log2(n) + 3


@dataclass(frozen=True)
class BitVector:
    """Fixed-length sequence of 0/1 ints.

    `packed` is the same content as a single int (first bit most
    significant), kept so orthogonality tests reduce to one `&`.
    """

    bits: tuple[int, ...]
    packed: int = field(init=False, repr=False, compare=False, default=0)

    def __post_init__(self):
        bits = tuple(self.bits)
        if any(b not in (0, 1) for b in bits):
            raise ValueError(f"bits must be 0 or 1, got {bits!r}")
        mask = 0
        for b in bits:
            mask = (mask << 1) | b
        object.__setattr__(self, "bits", bits)
        object.__setattr__(self, "packed", mask)

    @classmethod
    def from_string(cls, text: str) -> "BitVector":
        if any(c not in "01" for c in text):
            raise ValueError(f"expected only 0/1 characters, got {text!r}")
        return cls(tuple(int(c) for c in text))

    def to_string(self) -> str:
        return "".join("1" if b else "0" for b in self.bits)

    def flipped(self) -> "BitVector":
        return BitVector(tuple(1 - b for b in self.bits))

    def popcount(self) -> int:
        return self.packed.bit_count()

    def __len__(self) -> int:
        return len(self.bits)

    def __getitem__(self, k: int) -> int:
        return self.bits[k]

    def __iter__(self):
        return iter(self.bits)


def flip(v: BitVector) -> BitVector:
    """Complement every bit; an involution."""
    return v.flipped()


def are_orthogonal(a: BitVector, b: BitVector) -> bool:
    """True iff a[k] * b[k] = 0 in every dimension k."""
    if len(a) != len(b):
        raise DimensionMismatch(f"vector lengths differ: {len(a)} vs {len(b)}")
    return (a.packed & b.packed) == 0


@dataclass(frozen=True)
class DisjointnessInstance:
    """Two equal-length bit vectors holding one set each."""

    x: BitVector
    y: BitVector

    def __post_init__(self):
        if len(self.x) != len(self.y):
            raise DimensionMismatch(
                f"x and y lengths differ: {len(self.x)} vs {len(self.y)}"
            )
        if len(self.x) < 1:
            raise ValueError("instance size must be >= 1")

    @property
    def n(self) -> int:
        return len(self.x)


@dataclass(frozen=True)
class OVInstance:
    """Equal-size left/right collections of d-dimensional bit vectors."""

    left: tuple[BitVector, ...]
    right: tuple[BitVector, ...]
    dimension: int = field(init=False, compare=False, default=0)

    def __post_init__(self):
        left = tuple(self.left)
        right = tuple(self.right)
        if len(left) != len(right) or not left:
            raise ValueError(
                f"left and right must be equal-size and non-empty, "
                f"got {len(left)} and {len(right)}"
            )
        d = len(left[0])
        if d < 1:
            raise ValueError("dimension must be >= 1")
        for v in left + right:
            if len(v) != d:
                raise DimensionMismatch(
                    f"all vectors must have dimension {d}, got {len(v)}"
                )
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        object.__setattr__(self, "dimension", d)

    @property
    def n(self) -> int:
        return len(self.left)

    def ones_left(self) -> int:
        return sum(v.popcount() for v in self.left)

    def ones_right(self) -> int:
        return sum(v.popcount() for v in self.right)


def is_intersecting(inst: DisjointnessInstance) -> Optional[int]:
    """Smallest 1-based k with x[k] = y[k] = 1, or None if the sets are disjoint."""
    common = inst.x.packed & inst.y.packed
    if common == 0:
        return None
    # the highest set bit of `common` is the leftmost shared coordinate
    return len(inst.x) - common.bit_length() + 1


def has_orthogonal_pair(inst: OVInstance) -> Optional[tuple[int, int]]:
    """Lexicographically smallest 1-based (i, j) with left[i] orthogonal to
    right[j], or None.

    Plain quadratic scan over all pairs; this is the reference oracle that
    everything downstream is checked against, so it stays brute force.
    """
    right_masks = [v.packed for v in inst.right]
    for i, lv in enumerate(inst.left):
        lm = lv.packed
        for j, rm in enumerate(right_masks):
            if lm & rm == 0:
                return (i + 1, j + 1)
    return None


def index_code(i: int, n: int) -> BitVector:
    """Binary code of index i among 1..n, in exactly ceil(log2 n) bits.

    Encodes i - 1 most-significant-bit first so every index fits; for n = 1
    the code is empty.
    """
    if not 1 <= i <= n:
        raise ValueError(f"index {i} out of range 1..{n}")
    width = ceil_log2(n)
    value = i - 1
    return BitVector(tuple((value >> (width - 1 - b)) & 1 for b in range(width)))


def encode_disjointness(inst: DisjointnessInstance) -> OVInstance:
    """Rewrite an intersection instance as an OV instance with the same answer.

    Left vector i is x[i], ~x[i], ~x[i] followed by the index code of i and
    its complement; right vector j mirrors this with ~y[j], y[j], ~y[j] and
    the two code blocks swapped. Either side only reads its own input
    vector, so the two halves can be produced independently.
    """
    n = inst.n
    left = []
    right = []
    for i0 in range(n):
        code = index_code(i0 + 1, n)
        anti = code.flipped()
        xb = inst.x[i0]
        yb = inst.y[i0]
        left.append(BitVector((xb, 1 - xb, 1 - xb) + code.bits + anti.bits))
        right.append(BitVector((1 - yb, yb, 1 - yb) + anti.bits + code.bits))
    return OVInstance(tuple(left), tuple(right))


# -- random instance generation ------------------------------------------------

def random_disjointness(
    n: int, seed: int, force: str | None = None
) -> DisjointnessInstance:
    """Random instance with every bit an independent fair coin (MT19937
    seeded with `seed`, via random.Random).

    `force` post-processes the draw: "intersecting" plants a shared 1 at a
    seed-determined coordinate if none exists; "disjoint" clears y at every
    shared coordinate.
    """
    rng = random.Random(seed)
    x = [rng.getrandbits(1) for _ in range(n)]
    y = [rng.getrandbits(1) for _ in range(n)]
    if force == "intersecting":
        if not any(a and b for a, b in zip(x, y)):
            k = rng.randrange(n)
            x[k] = y[k] = 1
    elif force == "disjoint":
        y = [0 if a else b for a, b in zip(x, y)]
    elif force is not None:
        raise ValueError(f"force must be 'intersecting' or 'disjoint', got {force!r}")
    return DisjointnessInstance(BitVector(tuple(x)), BitVector(tuple(y)))


def random_ov(n: int, d: int, seed: int) -> OVInstance:
    """Random OV instance, every bit an independent fair coin (MT19937)."""
    rng = random.Random(seed)
    left = tuple(
        BitVector(tuple(rng.getrandbits(1) for _ in range(d))) for _ in range(n)
    )
    right = tuple(
        BitVector(tuple(rng.getrandbits(1) for _ in range(d))) for _ in range(n)
    )
    return OVInstance(left, right)


# -- instance text format ------------------------------------------------------
#
# OV instance:            first line "n d", then the n left rows and the
#                         n right rows, one vector per line, no separators.
# Intersection instance:  first line "n", then the x row and the y row.

def format_ov_text(inst: OVInstance) -> str:
    rows = [f"{inst.n} {inst.dimension}"]
    rows += [v.to_string() for v in inst.left]
    rows += [v.to_string() for v in inst.right]
    return "\n".join(rows) + "\n"


def format_disjointness_text(inst: DisjointnessInstance) -> str:
    return f"{inst.n}\n{inst.x.to_string()}\n{inst.y.to_string()}\n"


def _parse_row(line: str, width: int, lineno: int) -> BitVector:
    if len(line) != width:
        raise ParseError(f"expected {width} characters, got {len(line)}", lineno)
    if any(c not in "01" for c in line):
        raise ParseError(f"expected only 0/1 characters, got {line!r}", lineno)
    return BitVector.from_string(line)


def parse_ov_text(text: str) -> OVInstance:
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise ParseError("empty input, expected header 'n d'", 1)
    header = lines[0].split()
    if len(header) != 2:
        raise ParseError(f"expected header 'n d', got {lines[0]!r}", 1)
    try:
        n, d = int(header[0]), int(header[1])
    except ValueError:
        raise ParseError(f"expected integers in header, got {lines[0]!r}", 1) from None
    if n < 1 or d < 1:
        raise ParseError(f"n and d must be >= 1, got n={n} d={d}", 1)
    body = [ln.strip() for ln in lines[1:] if ln.strip()]
    if len(body) != 2 * n:
        raise ParseError(
            f"expected {2 * n} vector rows, got {len(body)}", len(lines)
        )
    rows = [_parse_row(ln, d, k + 2) for k, ln in enumerate(body)]
    return OVInstance(tuple(rows[:n]), tuple(rows[n:]))


def parse_disjointness_text(text: str) -> DisjointnessInstance:
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise ParseError("empty input, expected header 'n'", 1)
    header = lines[0].split()
    if len(header) != 1:
        raise ParseError(f"expected header 'n', got {lines[0]!r}", 1)
    try:
        n = int(header[0])
    except ValueError:
        raise ParseError(f"expected an integer header, got {lines[0]!r}", 1) from None
    if n < 1:
        raise ParseError(f"n must be >= 1, got {n}", 1)
    body = [ln.strip() for ln in lines[1:] if ln.strip()]
    if len(body) != 2:
        raise ParseError(f"expected 2 vector rows, got {len(body)}", len(lines))
    x = _parse_row(body[0], n, 2)
    y = _parse_row(body[1], n, 3)
    return DisjointnessInstance(x, y)
