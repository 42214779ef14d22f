"""Exact multivariate polynomials over the rationals."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from .orders import MonomialOrder

DEFAULT_ORDER = MonomialOrder.degrevlex()


class Ring:
    """A polynomial ring Q[v_1, ..., v_n] with a fixed variable sequence."""

    __slots__ = ("names", "index")

    def __init__(self, names: Iterable[str]):
        self.names = tuple(names)
        self.index = {name: i for i, name in enumerate(self.names)}
        if len(self.index) != len(self.names):
            raise ValueError("duplicate variable names")

    @property
    def nvars(self) -> int:
        return len(self.names)

    def __eq__(self, other):
        return isinstance(other, Ring) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"Ring({', '.join(self.names)})"

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return self.const(1)

    def const(self, c) -> "Poly":
        c = Fraction(c)
        return Poly(self, {(0,) * self.nvars: c} if c else {})

    def var(self, name) -> "Poly":
        i = self.index[name] if isinstance(name, str) else int(name)
        e = [0] * self.nvars
        e[i] = 1
        return Poly(self, {tuple(e): Fraction(1)})

    def gens(self) -> list["Poly"]:
        return [self.var(i) for i in range(self.nvars)]

    def monomial(self, exps, coeff=1) -> "Poly":
        exps = tuple(int(e) for e in exps)
        if len(exps) != self.nvars or min(exps, default=0) < 0:
            raise ValueError(f"bad exponent vector {exps} for {self}")
        c = Fraction(coeff)
        return Poly(self, {exps: c} if c else {})

    def parse(self, text: str) -> "Poly":
        from .parser import parse_polynomial

        return parse_polynomial(text, self)

    def extend(self, names: Iterable[str], front=False) -> "Ring":
        names = tuple(names)
        return Ring(names + self.names if front else self.names + names)

    def subring(self, names: Iterable[str]) -> "Ring":
        keep = set(names)
        return Ring(n for n in self.names if n in keep)


class Poly:
    """Immutable polynomial: a map from exponent tuples to nonzero Fractions."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: dict):
        self.ring = ring
        self.terms = {m: c for m, c in terms.items() if c}
        self._hash = None

    # construction helpers -------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                return self.ring.zero()
            return Poly(self.ring, {m: v * c for m, v in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                v = out.get(m, 0) + c1 * c2
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return Poly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    # inspection -------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def support(self) -> set:
        """Indices of the variables occurring in the polynomial."""
        out = set()
        for m in self.terms:
            out.update(i for i, e in enumerate(m) if e)
        return out

    def variables(self) -> list[str]:
        return [self.ring.names[i] for i in sorted(self.support())]

    def sorted_terms(self, order: MonomialOrder = DEFAULT_ORDER):
        enc = order.encoding(self.ring.nvars)
        return sorted(self.terms.items(), key=lambda t: enc.encode(t[0]), reverse=True)

    def leading_monomial(self, order: MonomialOrder = DEFAULT_ORDER) -> tuple:
        return self.sorted_terms(order)[0][0]

    def leading_coefficient(self, order: MonomialOrder = DEFAULT_ORDER) -> Fraction:
        return self.sorted_terms(order)[0][1]

    def monic(self, order: MonomialOrder = DEFAULT_ORDER) -> "Poly":
        if not self.terms:
            return self
        return self * (1 / self.leading_coefficient(order))

    def is_homogeneous(self, weights) -> bool:
        degs = {sum(w * e for w, e in zip(weights, m)) for m in self.terms}
        return len(degs) <= 1

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    # transformations ------------------------------------------------------------
    def to_ring(self, ring: Ring) -> "Poly":
        """Re-express in ``ring``; every occurring variable must exist there."""
        if ring == self.ring:
            return self
        idx = []
        for i, name in enumerate(self.ring.names):
            idx.append(ring.index.get(name))
        out = {}
        for m, c in self.terms.items():
            e = [0] * ring.nvars
            for i, x in enumerate(m):
                if x:
                    j = idx[i]
                    if j is None:
                        raise ValueError(f"variable {self.ring.names[i]} not in {ring}")
                    e[j] = x
            out[tuple(e)] = c
        return Poly(ring, out)

    def subs(self, values: dict) -> "Poly":
        """Substitute polynomials (same ring) for variables given by name or index."""
        table = {}
        for k, v in values.items():
            i = self.ring.index[k] if isinstance(k, str) else k
            table[i] = v if isinstance(v, Poly) else self.ring.const(v)
        result = self.ring.zero()
        cache: dict = {}
        for m, c in self.terms.items():
            kept = list(m)
            term = self.ring.one()
            for i, v in table.items():
                if m[i]:
                    kept[i] = 0
                    key = (i, m[i])
                    if key not in cache:
                        cache[key] = v ** m[i]
                    term = term * cache[key]
            result = result + term * Poly(self.ring, {tuple(kept): c})
        return result

    def evaluate(self, point) -> Fraction:
        total = Fraction(0)
        for m, c in self.terms.items():
            v = c
            for x, e in zip(point, m):
                if e:
                    v *= Fraction(x) ** e
            total += v
        return total

    # output ---------------------------------------------------------------------
    def to_string(self, order: MonomialOrder = DEFAULT_ORDER) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms(order):
            factors = []
            for name, e in zip(self.ring.names, m):
                if e == 1:
                    factors.append(name)
                elif e:
                    factors.append(f"{name}^{e}")
            mag = abs(c)
            sign = "-" if c < 0 else "+"
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = f"{mag}*" + "*".join(factors)
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"Poly({self.to_string()!r})"


def monomial_string(ring: Ring, exps) -> str:
    return ring.monomial(exps).to_string()
