"""Buchberger's algorithm on packed monomial keys.

Polynomials are handled internally as lists of ``(key, coeff)`` pairs sorted
by decreasing key, with ``gmpy2.mpq`` coefficients. Pairs are pruned with the
Gebauer-Moeller installation of the product and chain criteria and selected
by (sugar, lcm); on homogeneous input this is the normal strategy processed
degree by degree.
"""

from __future__ import annotations

import heapq
import logging
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction

from gmpy2 import mpq

from .orders import FIELD, Encoding, MonomialOrder
from .polynomial import DEFAULT_ORDER, Poly, Ring

log = logging.getLogger(__name__)


class BudgetExceeded(RuntimeError):
    """Raised when a computation runs past its resource budget."""

    def __init__(self, stage: str, reason: str, degree: int | None = None, basis_size: int | None = None):
        self.stage = stage
        self.reason = reason
        self.degree = degree
        self.basis_size = basis_size
        msg = f"budget exceeded during {stage}: {reason}"
        if degree is not None:
            msg += f" (reached degree {degree}, {basis_size} basis elements)"
        super().__init__(msg)


@dataclass
class Budget:
    """Wall-clock and size limits shared by all computations of one run.

    The clock starts when the budget is created. ``stage`` names the step that
    is currently running so that failures can be attributed.
    """

    seconds: float | None = None
    max_basis: int | None = None
    max_degree: int | None = None
    stage: str = "groebner"
    started: float = field(default_factory=time.monotonic)

    def elapsed(self) -> float:
        return time.monotonic() - self.started

    def remaining(self) -> float | None:
        if self.seconds is None:
            return None
        return self.seconds - self.elapsed()

    def check(self, degree=None, basis_size=None):
        if self.seconds is not None and self.elapsed() > self.seconds:
            raise BudgetExceeded(self.stage, f"wall clock over {self.seconds}s", degree, basis_size)
        if self.max_basis is not None and basis_size is not None and basis_size > self.max_basis:
            raise BudgetExceeded(self.stage, f"basis larger than {self.max_basis}", degree, basis_size)
        if self.max_degree is not None and degree is not None and degree > self.max_degree:
            raise BudgetExceeded(self.stage, f"degree above {self.max_degree}", degree, basis_size)

    @contextmanager
    def during(self, stage: str):
        previous = self.stage
        self.stage = stage
        try:
            yield self
        finally:
            self.stage = previous


UNLIMITED = Budget()


# conversion -----------------------------------------------------------------


def to_internal(f: Poly, enc: Encoding) -> list:
    terms = [(enc.encode(m), mpq(c.numerator, c.denominator)) for m, c in f.terms.items()]
    terms.sort(reverse=True)
    return terms


def to_poly(terms, ring: Ring, enc: Encoding) -> Poly:
    return Poly(ring, {enc.decode(k): Fraction(int(c.numerator), int(c.denominator)) for k, c in terms})


def _monic(terms: list) -> list:
    lc = terms[0][1]
    if lc == 1:
        return terms
    inv = 1 / lc
    return [(k, c * inv) for k, c in terms]


# reducer store ------------------------------------------------------------------


class Reducers:
    """Monic polynomials indexed by their leading monomials."""

    def __init__(self, enc: Encoding):
        self.enc = enc
        self.packed = []
        self.keys = []
        self.exps = []
        self.tails = []
        self.polys = []
        self._cache: dict = {}

    def __len__(self):
        return len(self.polys)

    def add(self, terms: list) -> int:
        k = terms[0][0]
        self.keys.append(k)
        self.packed.append(self.enc.pack(k))
        self.exps.append(self.enc.decode(k))
        self.tails.append(terms[1:])
        self.polys.append(terms)
        return len(self.polys) - 1

    def find(self, key: int) -> int:
        """Index of a reducer whose leading monomial divides ``key``, else -1."""
        hit = self._cache.get(key)
        start = 0
        if hit is not None:
            idx, upto = hit
            if idx >= 0:
                return idx
            start = upto
        n = len(self.packed)
        if start < n:
            g = self.enc.guard
            pbg = self.enc.pack(key) | g
            packed = self.packed
            for i in range(start, n):
                if (pbg - packed[i]) & g == g:
                    self._cache[key] = (i, n)
                    return i
            if len(self._cache) > 400_000:
                self._cache.clear()
            self._cache[key] = (-1, n)
        return -1

    def reduce(self, terms, budget: Budget | None = None, head_only=False) -> list:
        """Full (or top-only) reduction; returns the remainder sorted descending."""
        acc = {}
        heap = []
        for k, c in terms:
            v = acc.get(k)
            if v is None:
                acc[k] = c
                heap.append(-k)
            else:
                acc[k] = v + c
        heapq.heapify(heap)
        out = []
        tails = self.tails
        find = self.find
        push = heapq.heappush
        pop = heapq.heappop
        steps = 0
        while heap:
            k = -pop(heap)
            c = acc.pop(k)
            if not c:
                continue
            if head_only and out:
                out.append((k, c))
                continue
            i = find(k)
            if i < 0:
                out.append((k, c))
                continue
            steps += 1
            if budget is not None and not steps & 1023:
                budget.check()
            shift = k - self.keys[i]
            for kg, cg in tails[i]:
                k2 = kg + shift
                v = acc.get(k2)
                if v is None:
                    acc[k2] = -c * cg
                    push(heap, -k2)
                else:
                    acc[k2] = v - c * cg
        return out


# Buchberger ----------------------------------------------------------------------


def _lcm_exps(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


def buchberger(polys: list, enc: Encoding, budget: Budget | None = None) -> list:
    """Reduced Gröbner basis (internal form) of the ideal spanned by ``polys``.

    Pair bookkeeping works on packed exponent vectors: with a guard bit on top
    of every field, ``((a | g) - b) & g`` marks the fields where ``a >= b``,
    which gives divisibility, lcm and coprimality in a few integer operations.
    """
    budget = budget or UNLIMITED
    R = Reducers(enc)
    g = enc.guard
    low = g >> (FIELD - 1)  # lowest bit of every field
    fmask = (1 << FIELD) - 1
    shifts = enc.pack_shift
    weights = enc.weights
    sugar: list = []
    P: list = []   # packed leading monomials
    NZ: list = []  # guard bits of the nonzero fields
    active: list = []  # indices currently in the basis
    pairs: list = []   # heap of (sugar, lcm key, seq)
    live: dict = {}    # seq -> (i, j, packed lcm)
    seq = 0

    def plcm(a, b):
        m = ((((a | g) - b) & g) >> (FIELD - 1)) * fmask
        return (a & m) | (b & ~m)

    def unpack(p):
        return tuple((p >> s) & fmask for s in shifts)

    def install(terms, s):
        nonlocal seq, active
        h = R.add(terms)
        sugar.append(s)
        ph = R.packed[h]
        P.append(ph)
        nzh = ((ph | g) - low) & g
        NZ.append(nzh)
        # chain criterion on old pairs
        dead = []
        for sq, (i, j, lp) in live.items():
            if (((lp | g) - ph) & g) == g and plcm(P[i], ph) != lp and plcm(P[j], ph) != lp:
                dead.append(sq)
        for sq in dead:
            del live[sq]
        # new pairs with the Gebauer-Moeller filter: drop a pair when a proper
        # divisor of its lcm occurs among the new lcms, keep one pair per lcm and
        # none at all when one of them is coprime (product criterion)
        groups: dict = {}
        for i in active:
            lp = plcm(P[i], ph)
            groups.setdefault(lp, []).append(i)
        minimal = []
        for lp in sorted(groups):
            lpg = lp | g
            if any(((lpg - m) & g) == g for m in minimal):
                continue
            minimal.append(lp)
            members = groups[lp]
            if any(not (NZ[i] & nzh) for i in members):
                continue
            i = members[0]
            le = unpack(lp)
            lk = enc.encode(le)
            wl = sum(w * x for w, x in zip(weights, le))
            s_pair = max(sugar[i] + wl - enc.wdeg(R.keys[i]), s + wl - enc.wdeg(R.keys[h]))
            seq += 1
            live[seq] = (i, h, lp)
            heapq.heappush(pairs, (s_pair, lk, seq))
        active = [i for i in active if not (((P[i] | g) - ph) & g) == g] + [h]

    for f in polys:
        if f:
            f = _monic(f)
            install(f, max(enc.wdeg(k) for k, _ in f))
    # inputs are installed unreduced; redundant ones simply never win pairs
    current_degree = None
    while pairs:
        s_pair, lk, sq = heapq.heappop(pairs)
        rec = live.pop(sq, None)
        if rec is None:
            continue
        if current_degree != s_pair:
            current_degree = s_pair
            log.debug("degree %s: %d basis elements, %d pairs", s_pair, len(active), len(live))
        budget.check(degree=s_pair, basis_size=len(active))
        i, j, _ = rec
        si = lk - R.keys[i]
        sj = lk - R.keys[j]
        spoly = [(k + si, c) for k, c in R.tails[i]]
        spoly += [(k + sj, -c) for k, c in R.tails[j]]
        rem = R.reduce(spoly, budget)
        if rem:
            install(_monic(rem), s_pair)
    return _reduce_basis([R.polys[i] for i in active], enc, budget)


def _reduce_basis(basis: list, enc: Encoding, budget: Budget | None = None) -> list:
    g = enc.guard
    basis = sorted(basis, key=lambda t: t[0][0])
    minimal = []
    packed = []
    for f in basis:
        pfg = enc.pack(f[0][0]) | g
        if any(((pfg - ph) & g) == g for ph in packed):
            continue
        minimal.append(f)
        packed.append(pfg ^ g)
    R = Reducers(enc)
    for f in minimal:
        R.add(f)
    out = []
    for f in minimal:
        tail = R.reduce(f[1:], budget)
        out.append([f[0]] + tail)
    out.sort(key=lambda t: t[0][0], reverse=True)
    return out


# public helpers ------------------------------------------------------------------


def groebner_basis(gens, order: MonomialOrder = DEFAULT_ORDER, budget: Budget | None = None) -> list[Poly]:
    """Reduced Gröbner basis of the ideal generated by ``gens``."""
    gens = [g for g in gens if g]
    if not gens:
        return []
    ring = gens[0].ring
    enc = order.encoding(ring.nvars)
    internal = [to_internal(g, enc) for g in gens]
    basis = buchberger(internal, enc, budget)
    return [to_poly(b, ring, enc) for b in basis]


def normal_form(f: Poly, basis, order: MonomialOrder = DEFAULT_ORDER) -> Poly:
    """Remainder of ``f`` on full division by ``basis`` (a Gröbner basis)."""
    if not f:
        return f
    enc = order.encoding(f.ring.nvars)
    R = Reducers(enc)
    for b in basis:
        if b:
            R.add(_monic(to_internal(b, enc)))
    return to_poly(R.reduce(to_internal(f, enc)), f.ring, enc)


def s_polynomial(f: Poly, g: Poly, order: MonomialOrder = DEFAULT_ORDER) -> Poly:
    enc = order.encoding(f.ring.nvars)
    a = _monic(to_internal(f, enc))
    b = _monic(to_internal(g, enc))
    lk = enc.encode(_lcm_exps(enc.decode(a[0][0]), enc.decode(b[0][0])))
    fa = to_poly([(k + lk - a[0][0], c) for k, c in a], f.ring, enc)
    fb = to_poly([(k + lk - b[0][0], c) for k, c in b], f.ring, enc)
    return fa - fb
