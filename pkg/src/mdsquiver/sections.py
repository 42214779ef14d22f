"""Torus-invariant sections, graded pieces of the Cox ring, and linear-series checks."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import floor

from .algebra.groebner import Reducers, _monic, to_internal
from .algebra.ideal import Ideal, radical_member
from .algebra.linalg import EchelonBasis
from .algebra.lp import solve_lp
from .algebra.polynomial import DEFAULT_ORDER, Poly
from .presentation import (Collection, CoxPresentation, PresentationError, class_of_monomial,
                           irrelevant_ideal)


def label_key(m):
    """Sort key putting monomials in descending lex order (x1 most significant)."""
    return tuple(-e for e in m)


def sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def add(a, b):
    return tuple(x + y for x, y in zip(a, b))


@dataclass(frozen=True)
class SectionSet:
    cls: tuple
    monomials: tuple

    def __len__(self):
        return len(self.monomials)

    def __iter__(self):
        return iter(self.monomials)

    def strings(self, p: CoxPresentation) -> list[str]:
        return [str(p.ring.monomial(m)) for m in self.monomials]


# fibres of the degree map ---------------------------------------------------------


def variable_bounds(p: CoxPresentation, c) -> list[int] | None:
    """Exact upper bounds ``max u_k`` over ``{u >= 0 : deg u = c}``; None if empty."""
    A = [list(r) for r in p.grading]
    bounds = []
    for k in range(p.d):
        obj = [0] * p.d
        obj[k] = 1
        res = solve_lp(A, list(c), obj, maximize=True)
        if res.status == "infeasible":
            return None
        if res.status == "unbounded":  # excluded by pointedness
            raise PresentationError("unbounded fibre; grading is not pointed")
        bounds.append(floor(res.value))
    return bounds


def global_sections(p: CoxPresentation, c) -> SectionSet:
    return _global_sections(p, tuple(c))


@lru_cache(maxsize=4096)
def _global_sections(p: CoxPresentation, c: tuple) -> SectionSet:
    if len(c) != p.rho:
        raise ValueError(f"class {c} has length {len(c)}, expected {p.rho}")
    if not any(c):
        return SectionSet(c, ((0,) * p.d,))
    bounds = variable_bounds(p, c)
    if bounds is None:
        return SectionSet(c, ())
    free, dep, adj, det = _pivot_split(p)
    cols = p.columns
    wts = _variable_weights(p)
    rho = p.rho
    mons = []
    u = [0] * p.d

    # depth-first over the free variables; the pivot exponents are then
    # determined by the class and must come out as nonnegative integers
    def rec(idx: int, rem: list, remdeg: int):
        if idx == len(free):
            for r in range(rho):
                num = 0
                row = adj[r]
                for s in range(rho):
                    num += row[s] * rem[s]
                if num % det:
                    return
                val = num // det
                if val < 0 or val > bounds[dep[r]]:
                    return
                u[dep[r]] = val
            mons.append(tuple(u))
            return
        k = free[idx]
        col = cols[k]
        w = wts[k]
        top = min(bounds[k], remdeg // w)
        cur = list(rem)
        for e in range(top + 1):
            u[k] = e
            rec(idx + 1, cur, remdeg - e * w)
            for s in range(rho):
                cur[s] -= col[s]
        u[k] = 0

    total = sum(a * b for a, b in zip(p.positive_weights, c))
    rec(0, list(c), total)
    mons.sort(key=label_key)
    return SectionSet(c, tuple(mons))


@lru_cache(maxsize=64)
def _variable_weights(p: CoxPresentation) -> tuple:
    w = p.positive_weights
    return tuple(sum(a * b for a, b in zip(w, col)) for col in p.columns)


@lru_cache(maxsize=64)
def _pivot_split(p: CoxPresentation):
    """Split variables into free ones and rho pivots with invertible columns.

    Returns ``(free, pivots, adj, det)`` where ``adj`` is the integer adjugate
    of the pivot column matrix, so pivot exponents are ``adj . rem / det``.
    """
    from .algebra.linalg import rank as _rank

    pivots: list = []
    for k in reversed(range(p.d)):
        trial = pivots + [k]
        if _rank([list(p.columns[j]) for j in trial]) == len(trial):
            pivots = trial
        if len(pivots) == p.rho:
            break
    pivots.sort()
    free = [k for k in range(p.d) if k not in pivots]
    M = [[Fraction(p.columns[j][r]) for j in pivots] for r in range(p.rho)]
    det, inv = _det_inverse(M)
    adj = [[int(v * det) for v in row] for row in inv]
    det = int(det)
    if det < 0:
        det = -det
        adj = [[-v for v in row] for row in adj]
    return free, pivots, adj, det


def _det_inverse(M):
    n = len(M)
    A = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    det = Fraction(1)
    for col in range(n):
        piv = next(r for r in range(col, n) if A[r][col])
        if piv != col:
            A[col], A[piv] = A[piv], A[col]
            det = -det
        det *= A[col][col]
        inv = 1 / A[col][col]
        A[col] = [v * inv for v in A[col]]
        for r in range(n):
            if r != col and A[r][col]:
                f = A[r][col]
                A[r] = [a - f * b for a, b in zip(A[r], A[col])]
    return det, [row[n:] for row in A]


# irreducible sections ------------------------------------------------------------------


@dataclass(frozen=True)
class Factorization:
    section: tuple
    through: int
    first: tuple   # section of c_k - c_i
    second: tuple  # section of c_j - c_k


def irreducible_sections(p: CoxPresentation, coll: Collection, i: int, j: int, witnesses=False):
    """Sections of ``c_j - c_i`` not factoring through any other class of the collection.

    With ``witnesses=True`` also returns a factorization for each excluded section.
    """
    if i == j:
        raise ValueError("irreducible sections need i != j")
    cand = global_sections(p, sub(coll[j], coll[i]))
    found: dict = {}
    if len(cand):
        targets = set(cand.monomials)
        for k in range(len(coll)):
            if k in (i, j):
                continue
            first = global_sections(p, sub(coll[k], coll[i]))
            if not len(first):
                continue
            second = global_sections(p, sub(coll[j], coll[k]))
            for v in first:
                for w in second:
                    m = add(v, w)
                    if m in targets and m not in found:
                        found[m] = Factorization(m, k, v, w)
            if len(found) == len(targets):
                break
    irr = SectionSet(cand.cls, tuple(m for m in cand.monomials if m not in found))
    if witnesses:
        return irr, found
    return irr


# graded pieces ------------------------------------------------------------------------------


class NormalForms:
    """Cached normal forms of monomials modulo the degrevlex basis of I_X."""

    def __init__(self, p: CoxPresentation, budget=None):
        self.p = p
        self.order = DEFAULT_ORDER
        self.enc = self.order.encoding(p.d)
        self.basis = p.ix_basis(budget)
        self.reducers = Reducers(self.enc)
        for g in self.basis:
            self.reducers.add(_monic(to_internal(g, self.enc)))
        self._cache: dict = {}

    def is_standard(self, m) -> bool:
        return self.reducers.find(self.enc.encode(m)) < 0

    def of_monomial(self, m) -> dict:
        """Normal form as a sparse vector ``{exponent tuple: mpq}``."""
        m = tuple(m)
        hit = self._cache.get(m)
        if hit is None:
            k = self.enc.encode(m)
            if self.reducers.find(k) < 0:
                hit = {m: 1}
            else:
                from gmpy2 import mpq

                rem = self.reducers.reduce([(k, mpq(1))])
                hit = {self.enc.decode(kk): c for kk, c in rem}
            self._cache[m] = hit
        return hit

    def of_poly(self, f: Poly) -> dict:
        out: dict = {}
        for m, c in f.terms.items():
            for mm, v in self.of_monomial(m).items():
                nv = out.get(mm, 0) + v * c.numerator / c.denominator
                if nv:
                    out[mm] = nv
                else:
                    out.pop(mm, None)
        return out


_NF_CACHE: dict = {}


def normal_forms(p: CoxPresentation, budget=None) -> NormalForms:
    nf = _NF_CACHE.get(id(p))
    if nf is None or nf.p is not p:
        nf = NormalForms(p, budget)
        _NF_CACHE[id(p)] = nf
    return nf


@dataclass(frozen=True)
class GradedPiece:
    cls: tuple
    basis: tuple  # standard monomials (exponent tuples)

    @property
    def dim(self) -> int:
        return len(self.basis)


def graded_piece(p: CoxPresentation, c) -> GradedPiece:
    """Basis of the class-``c`` piece of k[x]/I_X by standard monomials."""
    return GradedPiece(tuple(c), standard_monomials(p, c))


def standard_monomials(p: CoxPresentation, c) -> tuple:
    """Monomials of class ``c`` outside the leading ideal of I_X, in descending lex order.

    Same search as :func:`global_sections`, but a branch is cut as soon as the
    partial monomial is divisible by a leading monomial: every divisor of a
    standard monomial is standard.
    """
    return _standard_monomials(p, tuple(c))


@lru_cache(maxsize=1024)
def _standard_monomials(p: CoxPresentation, c: tuple) -> tuple:
    if len(c) != p.rho:
        raise ValueError(f"class {c} has length {len(c)}, expected {p.rho}")
    if not any(c):
        return ((0,) * p.d,)
    bounds = variable_bounds(p, c)
    if bounds is None:
        return ()
    nf = normal_forms(p)
    standard = nf.is_standard
    free, dep, adj, det = _pivot_split(p)
    cols = p.columns
    wts = _variable_weights(p)
    rho = p.rho
    mons = []
    u = [0] * p.d

    def rec(idx: int, rem: list, remdeg: int):
        if idx == len(free):
            for r in range(rho):
                num = 0
                row = adj[r]
                for s in range(rho):
                    num += row[s] * rem[s]
                if num % det:
                    break
                val = num // det
                if val < 0 or val > bounds[dep[r]]:
                    break
                u[dep[r]] = val
            else:
                m = tuple(u)
                if standard(m):
                    mons.append(m)
            for r in dep:
                u[r] = 0
            return
        k = free[idx]
        col = cols[k]
        w = wts[k]
        top = min(bounds[k], remdeg // w)
        cur = list(rem)
        for e in range(top + 1):
            u[k] = e
            if e and not standard(tuple(u)):
                break
            rec(idx + 1, cur, remdeg - e * w)
            for s in range(rho):
                cur[s] -= col[s]
        u[k] = 0

    total = sum(a * b for a, b in zip(p.positive_weights, c))
    rec(0, list(c), total)
    mons.sort(key=label_key)
    return tuple(mons)


def graded_piece_dim_by_relations(p: CoxPresentation, c) -> int:
    """Independent count: sections minus the rank of the relation multiples in class ``c``."""
    secs = global_sections(p, c)
    index = {m: n for n, m in enumerate(secs)}
    E = EchelonBasis()
    for g in p.ix_gens:
        (m0,) = list(g.terms)[:1]
        gc = class_of_monomial(p, m0)
        for u in global_sections(p, sub(tuple(c), gc)):
            row = {}
            for m, coef in g.terms.items():
                row[index[add(m, u)]] = coef
            E.add(row)
    return len(secs) - len(E)


def mult_map_surjective(p: CoxPresentation, classes) -> bool:
    """Whether products of sections of the given classes span the sum class."""
    classes = [tuple(c) for c in classes]
    if not classes:
        return True
    nf = normal_forms(p)
    target = classes[0]
    for c in classes[1:]:
        target = add(target, c)
    if graded_piece(p, target).dim == 0:
        return True
    # span of partial products, kept as echelon rows over standard monomials;
    # once a partial product is onto its graded piece the rows are replaced by
    # the standard monomials themselves
    partial = classes[0]
    current = [{m: 1} for m in graded_piece(p, partial).basis]
    for c in classes[1:]:
        piece = graded_piece(p, c).basis
        partial = add(partial, c)
        full = graded_piece(p, partial)
        E = EchelonBasis()
        col = {m: n for n, m in enumerate(full.basis)}
        for vec in current:
            for u in piece:
                prod: dict = {}
                for m, v in vec.items():
                    for mm, w in nf.of_monomial(add(m, u)).items():
                        nv = prod.get(mm, 0) + v * w
                        if nv:
                            prod[mm] = nv
                        else:
                            prod.pop(mm, None)
                E.add({col[mm]: v for mm, v in prod.items()})
                if len(E) == full.dim:
                    break
            if len(E) == full.dim:
                break
        if len(E) == full.dim:
            current = [{m: 1} for m in full.basis]
        else:
            current = [{full.basis[k]: v for k, v in row.items()} for row in E.sorted_rows()]
    return len(current) == graded_piece(p, target).dim


def sections_basepoint_free(p: CoxPresentation, sections) -> bool:
    """Whether the given section monomials have no common zero on the stable locus."""
    B = irrelevant_ideal(p)
    J = Ideal(p.ring, list(p.ix_gens) + [p.ring.monomial(m) for m in sections])
    return all(radical_member(b, J) for b in B.gens)


def basepoint_free(p: CoxPresentation, c) -> bool:
    if p.chamber is None:
        raise PresentationError("basepoint-free check needs a chamber")
    secs = global_sections(p, c)
    if not len(secs):
        return False
    if covers_irrelevant(p, secs.monomials):
        return True
    return sections_basepoint_free(p, secs.monomials)


def covers_irrelevant(p: CoxPresentation, sections) -> bool:
    """Sufficient test: each irrelevant generator is divisible by the support of some section."""
    B = irrelevant_ideal(p)
    supports = [frozenset(i for i, e in enumerate(m) if e) for m in sections]
    for b in B.gens:
        (m,) = b.terms
        sb = frozenset(i for i, e in enumerate(m) if e)
        if not any(s <= sb for s in supports):
            return False
    return True


def validate_collection(p: CoxPresentation, coll: Collection):
    """Every class after the first must have a section."""
    if len(coll[0]) != p.rho:
        raise PresentationError(f"collection classes have length {len(coll[0])}, expected {p.rho}")
    for i, c in enumerate(coll.classes[1:], start=1):
        if not len(global_sections(p, c)):
            raise PresentationError(f"collection class {i} = {c} has no sections")
