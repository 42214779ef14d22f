"""Ideals with cached reduced Gröbner bases and the standard ideal operations."""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Iterable, Sequence

from .groebner import Budget, groebner_basis, normal_form
from .orders import MonomialOrder
from .polynomial import DEFAULT_ORDER, Poly, Ring

log = logging.getLogger(__name__)


class Ideal:
    """An ideal given by generators; reduced bases are cached per order."""

    def __init__(self, ring: Ring, gens: Iterable[Poly] = ()):
        self.ring = ring
        self.gens = tuple(g for g in gens if g)
        for g in self.gens:
            if g.ring != ring:
                raise ValueError("generator from another ring")
        self._gb: dict = {}

    @classmethod
    def parse(cls, ring: Ring, texts: Iterable[str]) -> "Ideal":
        return cls(ring, [ring.parse(t) for t in texts])

    def __repr__(self):
        return f"Ideal({', '.join(map(str, self.gens)) or '0'})"

    def __len__(self):
        return len(self.gens)

    def groebner(self, order: MonomialOrder = DEFAULT_ORDER, budget: Budget | None = None) -> list[Poly]:
        gb = self._gb.get(order)
        if gb is None:
            gb = groebner_basis(list(self.gens), order, budget)
            self._gb[order] = gb
        return gb

    def set_groebner(self, order: MonomialOrder, basis: list[Poly]):
        """Install a basis already known to be the reduced Gröbner basis."""
        self._gb[order] = list(basis)

    def reduce(self, f: Poly, order: MonomialOrder = DEFAULT_ORDER, budget=None) -> Poly:
        return normal_form(f, self.groebner(order, budget), order)

    def contains(self, f: Poly, order: MonomialOrder = DEFAULT_ORDER, budget=None) -> bool:
        return not self.reduce(f, order, budget)

    def contains_ideal(self, other: "Ideal", order: MonomialOrder = DEFAULT_ORDER, budget=None) -> bool:
        gb = self.groebner(order, budget)
        return all(not normal_form(g, gb, order) for g in other.gens)

    def is_zero(self) -> bool:
        return not self.gens

    def is_unit(self, budget=None) -> bool:
        gb = self.groebner(DEFAULT_ORDER, budget)
        return any(g.is_constant() for g in gb)

    def is_monomial(self) -> bool:
        return all(g.is_monomial() for g in self.gens)

    def is_homogeneous(self, weights: Sequence[int] | None = None) -> bool:
        w = weights if weights is not None else (1,) * self.ring.nvars
        return all(g.is_homogeneous(w) for g in self.gens)

    def to_ring(self, ring: Ring) -> "Ideal":
        return Ideal(ring, [g.to_ring(ring) for g in self.gens])

    def generator_strings(self) -> list[str]:
        return sorted(str(g) for g in self.gens)

    def basis_strings(self, order: MonomialOrder = DEFAULT_ORDER, budget=None) -> list[str]:
        return [g.to_string(order) for g in self.groebner(order, budget)]

    def __add__(self, other: "Ideal") -> "Ideal":
        return Ideal(self.ring, self.gens + other.gens)


def ideal_equal(I: Ideal, J: Ideal, order: MonomialOrder = DEFAULT_ORDER, budget=None) -> bool:
    """True iff the reduced Gröbner bases of ``I`` and ``J`` coincide."""
    if I.ring != J.ring:
        raise ValueError("ideals live in different rings")
    return I.groebner(order, budget) == J.groebner(order, budget)


# elimination ------------------------------------------------------------------


def _var_indices(ring: Ring, names) -> list[int]:
    out = []
    for v in names:
        i = ring.index[v] if isinstance(v, str) else int(v)
        out.append(i)
    return sorted(set(out))


def eliminate(I: Ideal, drop_vars, budget: Budget | None = None, weights: Sequence[int] | None = None) -> Ideal:
    """``I`` intersected with the subring on the variables not in ``drop_vars``.

    Uses a two-block order (dropped block first). ``weights`` are optional
    positive weights making the generators homogeneous; they only affect
    speed, never the result.
    """
    drop = _var_indices(I.ring, drop_vars)
    keep_names = [n for i, n in enumerate(I.ring.names) if i not in set(drop)]
    sub = Ring(keep_names)
    if not drop:
        return Ideal(sub, [g.to_ring(sub) for g in I.gens])
    order = MonomialOrder.elimination(drop, weights)
    gb = I.groebner(order, budget)
    dropset = set(drop)
    kept = [g for g in gb if not (g.support() & dropset)]
    out = Ideal(sub, [g.to_ring(sub) for g in kept])
    # the filtered basis is the reduced basis of the elimination ideal for the
    # inner block order
    inner = DEFAULT_ORDER
    if weights is not None:
        inner = MonomialOrder.degrevlex([w for i, w in enumerate(weights) if i not in dropset])
    out.set_groebner(inner, list(out.gens))
    return out


# intersection -------------------------------------------------------------------


def _fresh(ring: Ring, stem="t") -> str:
    name = stem
    k = 0
    while name in ring.index:
        k += 1
        name = f"{stem}{k}"
    return name


def _monomial_intersection(I: Ideal, J: Ideal) -> Ideal:
    gens = {}
    for f in I.gens:
        (a,) = f.terms
        for g in J.gens:
            (b,) = g.terms
            m = tuple(max(x, y) for x, y in zip(a, b))
            gens[m] = I.ring.monomial(m)
    return Ideal(I.ring, minimal_monomials(gens.values()))


def minimal_monomials(polys) -> list[Poly]:
    """Drop monomials divisible by another one (and duplicates)."""
    exps = sorted({next(iter(p.terms)) for p in polys}, key=lambda e: (sum(e), e))
    kept = []
    for e in exps:
        if not any(all(x <= y for x, y in zip(k, e)) for k in kept):
            kept.append(e)
    ring = next(iter(polys)).ring if kept else None
    return [ring.monomial(e) for e in kept]


def intersect(I: Ideal, J: Ideal, budget: Budget | None = None, method: str = "auto",
              weights: Sequence[int] | None = None) -> Ideal:
    """``I ∩ J`` via ``t I + (1 - t) J`` with ``t`` eliminated.

    For two monomial ideals ``method="auto"`` uses pairwise lcms instead.
    ``weights`` (positive, one per variable) only steer the Gröbner computation.
    """
    if I.ring != J.ring:
        raise ValueError("ideals live in different rings")
    if I.is_zero() or J.is_zero():
        return Ideal(I.ring)
    if method == "auto" and I.is_monomial() and J.is_monomial():
        return _monomial_intersection(I, J)
    t = _fresh(I.ring)
    R = I.ring.extend([t], front=True)
    tv = R.var(t)
    gens = [tv * f.to_ring(R) for f in I.gens] + [(1 - tv) * g.to_ring(R) for g in J.gens]
    w = None if weights is None else [1] + list(weights)
    return eliminate(Ideal(R, gens), [t], budget, w)


def intersect_all(ideals: list[Ideal], budget: Budget | None = None,
                  weights: Sequence[int] | None = None) -> Ideal:
    """Intersection of several ideals; ideals containing another one are skipped."""
    ideals = list(ideals)
    if len(ideals) == 1:
        return ideals[0]
    order = DEFAULT_ORDER if weights is None else MonomialOrder.degrevlex(weights)
    # keep only ideals that do not contain another member
    minimal = []
    for k, A in enumerate(ideals):
        redundant = False
        for j, B in enumerate(ideals):
            if j == k:
                continue
            if A.contains_ideal(B, order, budget):
                # A ⊇ B: A is redundant unless they are equal and A comes first
                if not B.contains_ideal(A, order, budget) or j < k:
                    redundant = True
                    break
        if not redundant:
            minimal.append(A)
    out = minimal[0]
    for B in minimal[1:]:
        out = intersect(out, B, budget, weights=weights)
    return out


# colon and saturation ---------------------------------------------------------------


def quotient(I: Ideal, f: Poly, budget: Budget | None = None) -> Ideal:
    """The colon ideal ``(I : f)``."""
    if not f:
        return Ideal(I.ring, [I.ring.one()])
    inter = intersect(I, Ideal(I.ring, [f]), budget, method="elimination")
    out = []
    for g in inter.gens:
        q, r = divide_exact(g, f)
        if r:
            raise ArithmeticError("intersection element not divisible by f")
        out.append(q)
    return Ideal(I.ring, out)


def divide_exact(g: Poly, f: Poly) -> tuple[Poly, Poly]:
    """Division of ``g`` by the single polynomial ``f`` (quotient, remainder)."""
    from .groebner import Reducers, _monic, to_internal, to_poly

    order = DEFAULT_ORDER
    enc = order.encoding(g.ring.nvars)
    fi = to_internal(f, enc)
    lc = fi[0][1]
    fm = _monic(fi)
    R = Reducers(enc)
    R.add(fm)
    # long division keeping track of the quotient
    rem = to_internal(g, enc)
    quo = {}
    work = dict(rem)
    out_rem = []
    while work:
        k = max(work)
        c = work.pop(k)
        if R.find(k) < 0:
            out_rem.append((k, c))
            continue
        shift = k - fm[0][0]
        quo[shift] = quo.get(shift, 0) + c / lc
        for kg, cg in fm[1:]:
            k2 = kg + shift
            v = work.get(k2, 0) - c * cg
            if v:
                work[k2] = v
            else:
                work.pop(k2, None)
    return to_poly(sorted(quo.items(), reverse=True), g.ring, enc), to_poly(out_rem, g.ring, enc)


def _rabinowitsch(I: Ideal, f: Poly, budget) -> Ideal:
    t = _fresh(I.ring)
    R = I.ring.extend([t], front=True)
    tv = R.var(t)
    gens = [g.to_ring(R) for g in I.gens] + [1 - tv * f.to_ring(R)]
    return eliminate(Ideal(R, gens), [t], budget)


def _bayer_variable(I: Ideal, var: int, weights, budget) -> Ideal:
    """``(I : x^∞)`` for a variable ``x`` and ``I`` homogeneous w.r.t. ``weights``.

    With a weighted degree reverse lexicographic order in which ``x`` is the
    smallest variable, dividing every basis element by its largest power of
    ``x`` yields generators of the saturation.
    """
    ring = I.ring
    names = [n for i, n in enumerate(ring.names) if i != var] + [ring.names[var]]
    R2 = Ring(names)
    w2 = [weights[ring.index[n]] for n in names]
    order = MonomialOrder.degrevlex(w2)
    J = I.to_ring(R2)
    gb = J.groebner(order, budget)
    last = len(names) - 1
    out = []
    for g in gb:
        k = min(m[last] for m in g.terms)
        if k:
            g = Poly(R2, {m[:last] + (m[last] - k,): c for m, c in g.terms.items()})
        out.append(g.to_ring(ring))
    return Ideal(ring, out)


def saturate(I: Ideal, f: Poly, budget: Budget | None = None, weights: Sequence[int] | None = None,
             method: str = "auto") -> Ideal:
    """``(I : f^∞)``.

    ``method="rabinowitsch"`` adjoins ``t`` with ``1 - t f`` and eliminates it.
    ``"auto"`` uses the same route except when ``f`` is a monomial and the
    generators are homogeneous for positive ``weights`` (all ones if omitted):
    then it saturates variable by variable from a single Gröbner basis each.
    """
    if not f:
        raise ValueError("cannot saturate by the zero polynomial")
    if f.is_constant() or I.is_zero():
        return I
    if method == "auto" and f.is_monomial():
        w = weights if weights is not None else (1,) * I.ring.nvars
        if I.is_homogeneous(w):
            (m,) = f.terms
            out = I
            for v, e in enumerate(m):
                if e:
                    out = _bayer_variable(out, v, w, budget)
            return out
    return _rabinowitsch(I, f, budget)


def saturate_ideal(I: Ideal, J: Ideal, budget: Budget | None = None, weights: Sequence[int] | None = None,
                   method: str = "auto") -> Ideal:
    """``(I : J^∞)``.

    ``method="generators"`` intersects ``(I : g^∞)`` over the generators of
    ``J``. For a monomial ``J``, ``"auto"`` instead walks the minimal primes
    ``P`` of ``rad J`` (each generated by variables): ``(I : J^∞)`` is the
    iterated saturation by the ``P``'s, and ``(I : P^∞)`` is the intersection
    of the variable saturations ``(I : x^∞)`` for ``x`` in ``P``.
    """
    if J.is_zero():
        return I
    if method == "auto" and J.is_monomial():
        return saturate_by_primes(I, monomial_minimal_primes(J), budget, weights)
    parts = [saturate(I, g, budget, weights, method="auto" if method == "auto" else "rabinowitsch")
             for g in J.gens]
    return intersect_all(parts, budget) if method == "auto" else _fold_intersect(parts, budget)


def saturate_by_primes(I: Ideal, primes, budget: Budget | None = None,
                       weights: Sequence[int] | None = None) -> Ideal:
    """``(I : J^∞)`` for ``J`` the intersection of the variable primes in ``primes``.

    Each prime is a collection of variable indices (or names).
    """
    out = I
    for P in primes:
        idx = _var_indices(I.ring, P)
        parts = [saturate(out, I.ring.var(v), budget, weights) for v in idx]
        out = intersect_all(parts, budget, weights)
        log.debug("saturated by prime %s", [I.ring.names[v] for v in idx])
    return out


def _fold_intersect(parts, budget):
    out = parts[0]
    for B in parts[1:]:
        out = intersect(out, B, budget, method="elimination")
    return out


def monomial_minimal_primes(J: Ideal) -> list[tuple[int, ...]]:
    """Minimal primes of a monomial ideal as sorted tuples of variable indices.

    These are the minimal transversals (hitting sets) of the generator
    supports. The search splits on the most frequent variable ``x``: primes
    containing ``x`` only need to hit the supports without ``x``, and primes
    avoiding ``x`` must hit every support with ``x`` deleted. Families are
    memoized, which keeps products of primes in disjoint variables cheap.
    """
    supports = []
    for g in J.gens:
        (m,) = g.terms
        s = frozenset(i for i, e in enumerate(m) if e)
        if not s:
            return []  # unit ideal has no primes
        supports.append(s)
    memo: dict = {}

    def solve(family: frozenset) -> list:
        if not family:
            return [frozenset()]
        hit = memo.get(family)
        if hit is not None:
            return hit
        forced = frozenset().union(*(f for f in family if len(f) == 1))
        if forced:
            rest = frozenset(f for f in family if not f & forced)
            out = [forced | T for T in solve(rest)]
        else:
            counts: dict = {}
            for f in family:
                for v in f:
                    counts[v] = counts.get(v, 0) + 1
            x = max(sorted(counts), key=counts.get)
            with_x = [T | {x} for T in solve(frozenset(f for f in family if x not in f))]
            without = solve(frozenset(_minimal_sets([f - {x} for f in family])))
            out = _minimal_sets(with_x + without)
        memo[family] = out
        return out

    family = solve(frozenset(_minimal_sets(supports)))
    return sorted(tuple(sorted(p)) for p in family)


def _minimal_sets(sets):
    sets = sorted(set(sets), key=len)
    out = []
    for s in sets:
        if not any(t <= s for t in out):
            out.append(s)
    return out


def radical_member(f: Poly, I: Ideal, budget: Budget | None = None) -> bool:
    """True iff ``f`` lies in the radical of ``I`` (1 ∈ I + (1 - t f))."""
    if not f:
        return True
    t = _fresh(I.ring)
    R = I.ring.extend([t], front=True)
    gens = [g.to_ring(R) for g in I.gens] + [1 - R.var(t) * f.to_ring(R)]
    return Ideal(R, gens).is_unit(budget)


def colon_iteration(I: Ideal, J: Ideal, budget: Budget | None = None, max_rounds: int = 64) -> Ideal:
    """``(I : J^∞)`` by repeated colon ``(I : g)`` per generator until stable.

    Only used as an independent check of :func:`saturate_ideal`.
    """
    parts = []
    for g in J.gens:
        cur = I
        for _ in range(max_rounds):
            nxt = quotient(cur, g, budget)
            if cur.contains_ideal(nxt, budget=budget):
                break
            cur = nxt
        else:
            raise RuntimeError("colon iteration did not stabilise")
        parts.append(cur)
    return _fold_intersect(parts, budget) if parts else I


def principal(ring: Ring, f) -> Ideal:
    return Ideal(ring, [f if isinstance(f, Poly) else ring.const(Fraction(f))])
