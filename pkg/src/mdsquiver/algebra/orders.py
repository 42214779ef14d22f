"""Monomial orders and their packed-integer encodings.

An exponent vector is packed into a single Python integer ``K`` such that
``K1 > K2`` exactly when the first monomial is larger in the order, and such
that ``K`` is linear in the exponents: multiplying monomials adds their keys.
The Gröbner engine works exclusively on these keys.

Every order is built from blocks of variables compared one after another;
inside a block monomials are compared by weighted degree and then reverse
lexicographically. ``degrevlex`` is a single block, ``lex`` is one block per
variable, and ``block-elimination`` puts the eliminated variables in a front
block.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

# Bits per exponent field; the top bit of every field is a guard bit used by
# the divisibility test, so exponents must stay below 2**(FIELD - 1).
FIELD = 16
MAX_EXPONENT = (1 << (FIELD - 1)) - 1
# Bits reserved for a block's weighted degree.
DEGREE_BITS = 40


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order on a ring with a fixed variable sequence.

    ``kind`` is one of ``"degrevlex"``, ``"lex"`` or ``"elim"``. For ``elim``
    the variable indices in ``front`` form the eliminated block. ``weights``
    (positive integers, one per variable) turn degrevlex comparisons into
    weighted-degree comparisons; ``None`` means all ones.
    """

    kind: str = "degrevlex"
    front: tuple = ()
    weights: tuple | None = None

    def __post_init__(self):
        if self.kind not in ("degrevlex", "lex", "elim"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.weights is not None and any(w <= 0 for w in self.weights):
            raise ValueError("order weights must be positive")
        object.__setattr__(self, "front", tuple(sorted(set(self.front))))

    @classmethod
    def degrevlex(cls, weights=None):
        return cls("degrevlex", (), tuple(weights) if weights is not None else None)

    @classmethod
    def lex(cls):
        return cls("lex")

    @classmethod
    def elimination(cls, front, weights=None):
        return cls("elim", tuple(front), tuple(weights) if weights is not None else None)

    @classmethod
    def parse(cls, name: str):
        if name in ("degrevlex", "grevlex"):
            return cls.degrevlex()
        if name == "lex":
            return cls.lex()
        raise ValueError(f"unknown monomial order name {name!r}")

    def blocks(self, n: int) -> list[list[int]]:
        """Variable blocks, most significant first."""
        if self.kind == "degrevlex":
            return [list(range(n))]
        if self.kind == "lex":
            return [[i] for i in range(n)]
        front = [i for i in self.front if i < n]
        rest = [i for i in range(n) if i not in set(front)]
        return [b for b in (front, rest) if b]

    def encoding(self, n: int) -> "Encoding":
        return _encoding(self, n)

    def describe(self) -> str:
        if self.kind == "elim":
            return f"elim{list(self.front)}"
        return self.kind


@lru_cache(maxsize=256)
def _encoding(order: MonomialOrder, n: int) -> "Encoding":
    return Encoding(order, n)


class Encoding:
    """Packing of exponent vectors of length ``n`` for one monomial order."""

    def __init__(self, order: MonomialOrder, n: int):
        self.order = order
        self.n = n
        weights = order.weights if order.weights is not None else (1,) * n
        if len(weights) != n:
            raise ValueError(f"order has {len(weights)} weights for {n} variables")
        self.weights = tuple(weights)
        blocks = order.blocks(n)
        # (variables, packed size S, block width, offset), least significant last
        self.blocks = []
        offset = 0
        layout = []
        for block in reversed(blocks):
            size = FIELD * len(block)
            width = size + DEGREE_BITS + 1
            layout.append((block, size, width, offset))
            offset += width
        self.blocks = list(reversed(layout))
        self.bits = offset
        coeffs = [0] * n
        pack_pos = [0] * n
        pos = 0
        for block, size, width, off in reversed(self.blocks):
            for j, v in enumerate(block):
                coeffs[v] = ((self.weights[v] << size) - (1 << (FIELD * j))) << off
                pack_pos[v] = pos + FIELD * j
            pos += size
        self.coeffs = coeffs
        self.pack_shift = pack_pos
        guard = 0
        for v in range(n):
            guard |= 1 << (pack_pos[v] + FIELD - 1)
        self.guard = guard
        self.one = 0

    def encode(self, exps) -> int:
        k = 0
        for e, c in zip(exps, self.coeffs):
            if e:
                if e > MAX_EXPONENT or e < 0:
                    raise OverflowError(f"exponent {e} outside the supported range")
                k += e * c
        return k

    def _parts(self, key: int):
        """Yield (block, size, degree, packed) from the least significant block."""
        out = []
        for block, size, width, off in reversed(self.blocks):
            low = ((key + (1 << size)) & ((1 << width) - 1)) - (1 << size)
            key = (key - low) >> width
            deg = (low + (1 << size) - 1) >> size
            packed = (deg << size) - low
            out.append((block, size, deg, packed))
        return out

    def decode(self, key: int) -> tuple:
        exps = [0] * self.n
        mask = (1 << FIELD) - 1
        for block, size, deg, packed in self._parts(key):
            for j, v in enumerate(block):
                exps[v] = (packed >> (FIELD * j)) & mask
        return tuple(exps)

    def pack(self, key: int) -> int:
        """Guard-bit friendly packing of the exponents of ``key``."""
        out = 0
        pos = 0
        for block, size, deg, packed in self._parts(key):
            out |= packed << pos
            pos += size
        return out

    def wdeg(self, key: int) -> int:
        return sum(deg for _, _, deg, _ in self._parts(key))

    def divides(self, pa: int, pb: int) -> bool:
        """Whether the monomial packed as ``pa`` divides the one packed as ``pb``."""
        g = self.guard
        return ((pb | g) - pa) & g == g

    def lcm(self, ka: int, kb: int) -> int:
        a = self.decode(ka)
        b = self.decode(kb)
        return self.encode([x if x > y else y for x, y in zip(a, b)])
