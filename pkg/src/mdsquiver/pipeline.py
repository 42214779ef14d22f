"""Relation and image ideals of a quiver of sections and the reconstruction check.

Arrow variables ``y_a`` map to ``x^{div a}`` twisted by the weight ``e_{h(a)} - e_{t(a)}``.
The four ideals computed here are

* ``iqtilde``: toric ideal of arrows -> (weight, label),
* ``iltilde``: binomials of path pairs with equal label,
* ``il``: linear path relations modulo I_X (strict or weighted),
* ``iq``: kernel of arrows -> (k[x]/I_X)[weights],

and the check compares ``(il : B_Q^∞)`` with ``iq``.
"""

from __future__ import annotations

import itertools
import logging
import time
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .algebra.groebner import Budget, BudgetExceeded, normal_form
from .algebra.ideal import Ideal, eliminate, saturate, saturate_by_primes
from .algebra.linalg import integer_kernel, kernel_sparse, unit_pivot_form
from .algebra.orders import MonomialOrder
from .algebra.polynomial import Poly, Ring
from .presentation import Collection, CoxPresentation, PresentationError, class_weight, variable_weights
from .quiver import (
    Quiver,
    bq_components,
    bq_generator_count,
    build_quiver,
    count_paths,
    enumerate_paths,
    to_json,
)
from .sections import (
    add,
    basepoint_free,
    global_sections,
    mult_map_surjective,
    normal_forms,
)

log = logging.getLogger(__name__)

VERDICTS = ("isomorphism", "surjective-only", "inconclusive", "failed-budget")


# helpers ---------------------------------------------------------------------------------


def _frac(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


def primitive(f: Poly) -> Poly:
    """Scale to coprime integer coefficients with a positive leading coefficient."""
    if not f:
        return f
    den = 1
    for c in f.terms.values():
        den = den * c.denominator // gcd(den, c.denominator)
    nums = [int(c * den) for c in f.terms.values()]
    g = 0
    for v in nums:
        g = gcd(g, v)
    scale = Fraction(den, g)
    if f.leading_coefficient() < 0:
        scale = -scale
    return f * f.ring.const(scale)


def _dedupe(polys) -> list[Poly]:
    seen = {}
    for f in polys:
        if f:
            g = primitive(f)
            seen.setdefault(str(g), g)
    return [seen[k] for k in sorted(seen)]


def arrow_weights(q: Quiver) -> tuple:
    """Positive degree of each arrow variable: the weight of its label."""
    v = variable_weights(q.presentation)
    return tuple(sum(a * b for a, b in zip(v, arr.label)) for arr in q.arrows)


def arrow_order(q: Quiver) -> MonomialOrder:
    return MonomialOrder.degrevlex(arrow_weights(q))


def label_image(q: Quiver, f: Poly) -> Poly:
    """Image of an arrow polynomial under y_a -> x^{div a} (weights forgotten)."""
    R = q.presentation.ring
    out = {}
    for m, c in f.terms.items():
        lab = q.label_of(m)
        out[lab] = out.get(lab, 0) + c
    return Poly(R, {k: v for k, v in out.items() if v})


def is_weight_homogeneous(q: Quiver, f: Poly) -> bool:
    return len({q.weight_of(m) for m in f.terms}) <= 1


def equivariant(q: Quiver, m) -> bool:
    """Class of the label of y^m equals the class attached to the weight of y^m."""
    from .presentation import class_of_monomial

    return class_of_monomial(q.presentation, q.label_of(m)) == q.class_of_weight(q.weight_of(m))


def _kernel_polys(q: Quiver, monomials, nf) -> list[Poly]:
    """Kernel of span{y^m} -> k[x]/I_X, y^m -> NF(x^{label m}), as arrow polynomials.

    Monomials sharing a label have the same image, so each label class
    contributes the differences with its first member and only one
    representative per label enters the linear algebra.
    """
    monomials = list(monomials)
    if len(monomials) < 2:
        return []
    R = q.ring
    classes: dict = {}
    for m in monomials:
        classes.setdefault(q.label_of(m), []).append(m)
    out = []
    for ms in classes.values():
        out.extend(Poly(R, {m: Fraction(1), ms[0]: Fraction(-1)}) for m in ms[1:])
    labels = list(classes)
    if len(labels) < 2:
        return out
    rows: dict = {}
    for col, lab in enumerate(labels):
        for xm, v in nf.of_monomial(lab).items():
            rows.setdefault(xm, {})[col] = v
    for v in kernel_sparse(list(rows.values()), len(labels)):
        out.append(Poly(R, {classes[labels[k]][0]: _frac(c) for k, c in v.items()}))
    return out


# I_Q~ ------------------------------------------------------------------------------------


def toric_matrix(q: Quiver) -> list[list[int]]:
    """Rows: incidence (one per vertex) then label exponents (one per variable)."""
    rows = [[0] * len(q.arrows) for _ in range(q.num_vertices + q.presentation.d)]
    for a in q.arrows:
        rows[a.head][a.index] += 1
        rows[a.tail][a.index] -= 1
        for i, e in enumerate(a.label):
            rows[q.num_vertices + i][a.index] += e
    return rows


def _binomial(R: Ring, v) -> Poly:
    plus = tuple(max(x, 0) for x in v)
    minus = tuple(max(-x, 0) for x in v)
    return R.monomial(plus) - R.monomial(minus)


def iqtilde_ideal(q: Quiver, budget: Budget | None = None, method: str = "pivots") -> Ideal:
    """Toric ideal of arrows -> (weight, label): lattice basis binomials, saturated.

    ``method="all"`` saturates by the product of all arrow variables. The
    default first brings the lattice basis to :func:`unit_pivot_form`; after
    inverting the non-pivot variables each pivot binomial reads
    ``y_p = (Laurent monomial)``, so the quotient is a Laurent polynomial ring,
    a domain of the right dimension, and saturating by the non-pivot variables
    alone already gives the toric ideal.
    """
    R = q.ring
    if not q.arrows:
        return Ideal(R)
    basis = integer_kernel(toric_matrix(q))
    if not basis:
        return Ideal(R)
    if method == "all":
        sat_vars = list(range(R.nvars))
    elif method == "pivots":
        basis, pivots = unit_pivot_form(basis)
        sat_vars = [v for v in range(R.nvars) if v not in pivots[:len(basis)]]
    else:
        raise ValueError(f"unknown method {method!r}")
    I = Ideal(R, [_binomial(R, v) for v in basis])
    e = [0] * R.nvars
    for v in sat_vars:
        e[v] = 1
    return saturate(I, R.monomial(e), budget, weights=toric_weights(q))


def toric_weights(q: Quiver) -> tuple:
    """Label weight plus ``|eps_a|`` (see :func:`weight_exponents`); always positive.

    Both summands factor through the toric map, so toric ideals are homogeneous.
    """
    return tuple(w + sum(e) for w, e in zip(arrow_weights(q), weight_exponents(q)))


# I_L~ and I_L --------------------------------------------------------------------------------


def iltilde_ideal(q: Quiver) -> Ideal:
    R = q.ring
    gens = []
    for i in range(q.num_vertices):
        for j in range(q.num_vertices):
            if i == j:
                continue
            groups: dict = {}
            for p in enumerate_paths(q, i, j):
                groups.setdefault(q.path_label(p), []).append(q.path_monomial(p))
            for mons in groups.values():
                mons.sort()
                for a, b in zip(mons, mons[1:]):
                    gens.append(R.monomial(a) - R.monomial(b))
    return Ideal(R, _dedupe(gens))


@dataclass(frozen=True)
class Strategy:
    kind: str = "strict"  # "strict" | "weighted"
    degree: int = 3

    @classmethod
    def parse(cls, text: str) -> "Strategy":
        if text == "strict":
            return cls("strict")
        if text == "weighted":
            return cls("weighted", 3)
        if text.startswith("weighted:"):
            try:
                D = int(text.split(":", 1)[1])
            except ValueError:
                raise ValueError(f"bad strategy {text!r}") from None
            if D < 1:
                raise ValueError("weighted degree must be positive")
            return cls("weighted", D)
        raise ValueError(f"unknown strategy {text!r} (expected strict or weighted:D)")

    def __str__(self):
        return "strict" if self.kind == "strict" else f"weighted:{self.degree}"


def strict_kernel(q: Quiver, i: int, j: int) -> list[Poly]:
    paths = enumerate_paths(q, i, j)
    return _kernel_polys(q, [q.path_monomial(p) for p in paths], normal_forms(q.presentation))


def monomials_of_weight(q: Quiver, chi) -> list[tuple]:
    """All arrow monomials whose weight is ``chi``.

    Vertices are visited sink first; once the out-arrows of a vertex are fixed
    the total exponent on its in-arrows is forced, and it is split among them.
    """
    n = len(q.arrows)
    order = list(reversed(q.topological_order))
    ins = {v: [a.index for a in q.in_arrows(v)] for v in range(q.num_vertices)}
    outs = {v: [a.index for a in q.out_arrows(v)] for v in range(q.num_vertices)}
    out = []
    m = [0] * n

    def rec(k):
        if k == len(order):
            out.append(tuple(m))
            return
        v = order[k]
        need = chi[v] + sum(m[a] for a in outs[v])
        if need < 0:
            return
        arrows = ins[v]
        if not arrows:
            if need == 0:
                rec(k + 1)
            return
        for combo in itertools.combinations_with_replacement(arrows, need):
            for a in combo:
                m[a] += 1
            rec(k + 1)
            for a in combo:
                m[a] -= 1

    rec(0)
    return sorted(out)


def realized_weights(q: Quiver, D: int) -> list[tuple]:
    seen = set()
    for k in range(1, D + 1):
        for combo in itertools.combinations_with_replacement(range(len(q.arrows)), k):
            w = [0] * q.num_vertices
            for a in combo:
                arr = q.arrows[a]
                w[arr.head] += 1
                w[arr.tail] -= 1
            seen.add(tuple(w))
    return sorted(seen)


def il_ideal(q: Quiver, strategy: Strategy | str = "strict", budget: Budget | None = None) -> Ideal:
    if isinstance(strategy, str):
        strategy = Strategy.parse(strategy)
    nf = normal_forms(q.presentation, budget)
    gens = []
    for i in range(q.num_vertices):
        for j in range(q.num_vertices):
            if i != j:
                gens.extend(strict_kernel(q, i, j))
    if strategy.kind == "weighted":
        for chi in realized_weights(q, strategy.degree):
            if budget is not None:
                budget.check()
            gens.extend(_kernel_polys(q, monomials_of_weight(q, chi), nf))
    return Ideal(q.ring, _dedupe(gens))


# linear substitution -----------------------------------------------------------------------


@dataclass
class LinearSubstitution:
    """Linear relations among parallel arrows, used to drop variables.

    Each relation expresses a pivot arrow variable through other arrows with
    the same tail and head; ``reduced`` is the ring on the remaining arrows.
    """

    ring: Ring
    relations: list
    images: dict  # pivot index -> Poly in ``ring`` free of pivots
    reduced: Ring

    @property
    def active(self) -> bool:
        return bool(self.images)

    @property
    def kept(self) -> list[int]:
        return [i for i in range(self.ring.nvars) if i not in self.images]

    def apply(self, f: Poly) -> Poly:
        if self.images:
            f = f.subs(self.images)
        return f.to_ring(self.reduced)

    def apply_ideal(self, I: Ideal) -> Ideal:
        return Ideal(self.reduced, [self.apply(g) for g in I.gens])

    def lift(self, I: Ideal) -> Ideal:
        gens = [g.to_ring(self.ring) for g in I.gens] + list(self.relations)
        return Ideal(self.ring, gens)

    def reduced_weights(self, weights) -> tuple:
        return tuple(weights[i] for i in self.kept)

    def reduced_primes(self, primes) -> list[tuple]:
        """Images of variable primes: a pivot's image only involves parallel arrows."""
        out = []
        for P in primes:
            kept = tuple(self.reduced.index[self.ring.names[i]] for i in P if i not in self.images)
            if not kept:
                raise ValueError("substitution removed every variable of a prime")
            out.append(kept)
        return out


def linear_substitution(q: Quiver, enabled: bool = True) -> LinearSubstitution:
    R = q.ring
    relations = []
    images = {}
    if enabled:
        nf = normal_forms(q.presentation)
        for i in range(q.num_vertices):
            for j in range(q.num_vertices):
                arrows = q.arrows_between(i, j)
                if len(arrows) < 2:
                    continue
                mons = [R.var(a.index) for a in arrows]
                for rel in _kernel_polys(q, [next(iter(m.terms)) for m in mons], nf):
                    # kernel vectors are in reduced echelon form: the pivot is the
                    # earliest arrow and no other relation mentions it
                    piv = min(rel.support())
                    c = rel.terms[tuple(1 if k == piv else 0 for k in range(R.nvars))]
                    images[piv] = R.var(piv) - rel * R.const(1 / c)
                    relations.append(primitive(rel))
    reduced = Ring([n for k, n in enumerate(R.names) if k not in images])
    return LinearSubstitution(R, relations, images, reduced)


# I_Q -----------------------------------------------------------------------------------------


def descendant_sets(q: Quiver) -> list[set]:
    """``D[j]`` = vertices reachable from ``j`` (including ``j``)."""
    D = [set() for _ in range(q.num_vertices)]
    for v in reversed(q.topological_order):
        D[v].add(v)
        for a in q.out_arrows(v):
            D[v] |= D[a.head]
    return D


def weight_exponents(q: Quiver) -> list[tuple]:
    """Nonnegative encoding of arrow weights: entry ``j-1`` is ``[h in D_j] - [t in D_j]``.

    The linear map chi -> (sum_{v in D_j} chi_v)_{j >= 1} is unitriangular in a
    topological order, hence injective on sum-zero weights; arrows only leave
    a descendant set by entering it, so the entries are 0 or 1.
    """
    D = descendant_sets(q)
    out = []
    for a in q.arrows:
        out.append(tuple(int(a.head in D[j]) - int(a.tail in D[j]) for j in range(1, q.num_vertices)))
    return out


def _label_class_matches(q: Quiver, a) -> bool:
    from .presentation import class_of_monomial

    c = q.collection
    return class_of_monomial(q.presentation, a.label) == tuple(x - y for x, y in zip(c[a.head], c[a.tail]))


def compact_weight_exponents(q: Quiver) -> list[tuple]:
    """Shorter nonnegative weight encoding for kernels that also see label classes.

    The class of a weight is visible in the x-degree of its label, so only
    weights of class zero need separating. With an integer basis kappa of
    those, chi -> (kappa_i . chi)_i is injective on their span (Gram
    argument). Adding t times the positive class functional to every arrow
    keeps monomials of equal class apart and makes all entries nonnegative.
    Two monomials then get the same pair (class, encoding) only when their
    weights agree.
    """
    p, coll = q.presentation, q.collection
    V = q.num_vertices
    rows = [[1] * V] + [[coll[v][i] for v in range(V)] for i in range(p.rho)]
    kappa = integer_kernel(rows)
    if not kappa:
        return [() for _ in q.arrows]
    raw, lam = [], []
    for a in q.arrows:
        raw.append([k[a.head] - k[a.tail] for k in kappa])
        lam.append(class_weight(p, [x - y for x, y in zip(coll[a.head], coll[a.tail])]))
    t = max([0] + [-(x // l) for r, l in zip(raw, lam) for x in r])
    return [tuple(x + t * l for x in r) for r, l in zip(raw, lam)]


def _fresh_names(taken, stem, count):
    names = []
    k = 1
    while len(names) < count:
        name = f"{stem}{k}"
        if name not in taken:
            names.append(name)
        k += 1
    return names


def in_iq(q: Quiver, f: Poly) -> bool:
    """Membership in I_Q by substitution: weight-homogeneous with label image in I_X."""
    if not is_weight_homogeneous(q, f):
        return False
    return not normal_forms(q.presentation).of_poly(label_image(q, f))


def iq_reduced(q: Quiver, subst: LinearSubstitution, budget: Budget | None = None,
               encoding: str = "compact") -> Ideal:
    """Kernel of the arrow map restricted to the arrows kept by ``subst``.

    Weights are encoded by monomials in fresh variables z, either all r
    coordinates (``encoding="full"``, :func:`weight_exponents`) or only the
    part the label classes miss (``"compact"``, :func:`compact_weight_exponents`).
    Both give the same kernel; it is an elimination ideal.
    """
    p = q.presentation
    kept = subst.kept
    if not kept:
        return Ideal(subst.reduced)
    if encoding == "compact" and not all(_label_class_matches(q, a) for a in q.arrows):
        encoding = "full"  # the compact encoding leans on label classes
    if encoding == "compact":
        eps = compact_weight_exponents(q)
    elif encoding == "full":
        eps = weight_exponents(q)
    else:
        raise ValueError(f"unknown encoding {encoding!r}")
    r = len(eps[0]) if eps else 0
    znames = _fresh_names(set(p.var_names) | set(q.ring.names), "z", r)
    ynames = [q.ring.names[k] for k in kept]
    big = Ring(list(p.var_names) + znames + ynames)
    d = p.d
    vw = variable_weights(p)
    weights = list(vw) + [1] * r
    gens = [g.to_ring(big) for g in p.ix_gens]
    for pos, k in enumerate(kept):
        a = q.arrows[k]
        e = [0] * big.nvars
        for i, x in enumerate(a.label):
            e[i] = x
        for j, x in enumerate(eps[k]):
            e[d + j] = x
        e[d + r + pos] = 0
        y = [0] * big.nvars
        y[d + r + pos] = 1
        gens.append(big.monomial(y) - big.monomial(e))
        weights.append(sum(vw[i] * x for i, x in enumerate(a.label)) + sum(eps[k]))
    I = Ideal(big, gens)
    if min(weights) <= 0:
        weights = None  # a constant label; the weights only speed things up
    out = eliminate(I, list(range(d + r)), budget, weights)
    return out.to_ring(subst.reduced) if out.ring != subst.reduced else out


def iq_ideal(q: Quiver, budget: Budget | None = None, method: str = "auto") -> Ideal:
    """I_Q in the full arrow ring.

    ``method="inverse"`` eliminates x and paired weight variables t_k, s_k
    (with t_k s_k = 1 and t_0 = s_0 = 1) directly. ``"auto"`` removes the
    linear relations among parallel arrows first and encodes weights by
    monomials in fresh variables (see :func:`iq_reduced`).
    """
    if method == "inverse":
        return iq_inverse(q, budget)
    if method not in ("auto", "direct"):
        raise ValueError(f"unknown method {method!r}")
    subst = linear_substitution(q, enabled=method == "auto")
    return subst.lift(iq_reduced(q, subst, budget))


def iq_inverse(q: Quiver, budget: Budget | None = None) -> Ideal:
    p = q.presentation
    if not q.arrows:
        return Ideal(q.ring)
    taken = set(p.var_names) | set(q.ring.names)
    tn = _fresh_names(taken, "t", q.r)
    sn = _fresh_names(taken | set(tn), "s", q.r)
    big = Ring(list(p.var_names) + tn + sn + list(q.ring.names))
    d, r = p.d, q.r
    gens = [g.to_ring(big) for g in p.ix_gens]
    for k in range(r):
        gens.append(big.var(d + k) * big.var(d + r + k) - 1)
    for a in q.arrows:
        e = [0] * big.nvars
        for i, x in enumerate(a.label):
            e[i] = x
        if a.head:
            e[d + a.head - 1] += 1
        if a.tail:
            e[d + r + a.tail - 1] += 1
        gens.append(big.var(d + 2 * r + a.index) - big.monomial(e))
    out = eliminate(Ideal(big, gens), list(range(d + 2 * r)), budget)
    return out.to_ring(q.ring)


# comparison helpers ----------------------------------------------------------------------------


def _some_basis(I: Ideal, fallback: MonomialOrder, budget):
    """A cached Gröbner basis of ``I`` if any, else one for ``fallback``."""
    for order, gb in I._gb.items():
        return order, gb
    return fallback, I.groebner(fallback, budget)


def contained(I: Ideal, J: Ideal, fallback: MonomialOrder, budget=None) -> bool:
    """Whether every generator of ``I`` lies in ``J``."""
    order, gb = _some_basis(J, fallback, budget)
    return all(not normal_form(g, gb, order) for g in I.gens)


def equal(I: Ideal, J: Ideal, fallback: MonomialOrder, budget=None) -> bool:
    return contained(I, J, fallback, budget) and contained(J, I, fallback, budget)


def membership(I: Ideal, texts, order: MonomialOrder, budget=None) -> list[dict]:
    """Per-polynomial membership diagnostics for polynomials given as text."""
    out = []
    for text in texts:
        rec = {"generator": text}
        try:
            f = I.ring.parse(text)
        except Exception as exc:  # syntax errors and unknown variables
            rec.update(parsed=False, member=False, error=str(exc))
            out.append(rec)
            continue
        rec["parsed"] = True
        rec["member"] = I.contains(f, order, budget)
        out.append(rec)
    return out


# delta and collections ---------------------------------------------------------------------------


def delta(p: CoxPresentation) -> int:
    if not p.ix_gens:
        warnings.warn("I_X is zero; delta is taken to be 1", UserWarning, stacklevel=2)
        return 1
    d0 = max(g.total_degree() for g in p.ix_gens)
    return (d0 + 1) // 2


def build_collection(p: CoxPresentation, base, betas) -> Collection:
    """``(0, c_1, ..., c_k, delta E, 2 delta E)`` with ``E = sum beta_i c_i``.

    An appended class that is already in the list is not repeated (for a single
    base class with multiplicity one and delta = 1, ``delta E`` is that class).
    """
    base = [tuple(int(x) for x in c) for c in base]
    betas = [int(b) for b in betas]
    if len(base) != len(betas):
        raise PresentationError(f"{len(base)} base classes but {len(betas)} multiplicities")
    if any(b <= 0 for b in betas):
        raise PresentationError(f"multiplicities must be positive, got {betas}")
    for c in base:
        if len(c) != p.rho:
            raise PresentationError(f"class {c} has length {len(c)}, expected {p.rho}")
        if not len(global_sections(p, c)):
            raise PresentationError(f"base class {c} is not effective")
    if len(set(base)) != len(base):
        raise PresentationError("base classes are not distinct")
    E = (0,) * p.rho
    for b, c in zip(betas, base):
        E = add(E, tuple(b * x for x in c))
    dl = delta(p)
    first = tuple(dl * x for x in E)
    second = tuple(2 * dl * x for x in E)
    if first == second:
        raise PresentationError(f"appended classes collide: delta E = 2 delta E = {first}")
    classes = [(0,) * p.rho] + base
    for extra in (first, second):
        if extra in classes:
            log.info("appended class %s is already in the collection", extra)
        else:
            classes.append(extra)
    return Collection(tuple(classes))


# verification ----------------------------------------------------------------------------------


@dataclass
class VerifyOptions:
    strategy: Strategy = field(default_factory=Strategy)
    order: str | None = None  # None: weighted degrevlex by arrow weights
    budget_secs: float | None = None
    check_bpf: bool = False
    assert_very_ample: bool = False
    substitution: bool = True
    bq_generator_cap: int = 5000


@dataclass
class VerificationReport:
    quiver: dict
    flags: dict
    ideals: dict
    substitution: dict
    checks: dict
    saturation: dict
    verdict: str
    strategy: str
    order: str
    failed_stage: str | None = None
    warnings: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)

    def to_dict(self, timings: bool = False) -> dict:
        out = {
            "quiver": self.quiver,
            "flags": self.flags,
            "ideals": self.ideals,
            "substitution": self.substitution,
            "checks": self.checks,
            "saturation": self.saturation,
            "verdict": self.verdict,
            "strategy": self.strategy,
            "order": self.order,
            "failed_stage": self.failed_stage,
            "warnings": list(self.warnings),
        }
        if timings:
            out["timings"] = {k: round(v, 3) for k, v in self.timings.items()}
        return out


class _Stages:
    def __init__(self, budget: Budget):
        self.budget = budget
        self.timings: dict = {}

    def run(self, name, fn, *args, **kw):
        t0 = time.monotonic()
        with self.budget.during(name):
            try:
                return fn(*args, **kw)
            finally:
                self.timings[name] = time.monotonic() - t0
                log.info("stage %s: %.2fs", name, self.timings[name])


def _ideal_record(I: Ideal, order: MonomialOrder, budget, basis=True) -> dict:
    rec = {"generators": sorted(str(primitive(g)) for g in I.gens)}
    if basis:
        rec["basis"] = I.basis_strings(order, budget)
    return rec


def report_order(q: Quiver, name: str | None) -> MonomialOrder:
    if name in (None, "auto", "wdegrevlex"):
        return arrow_order(q)
    return MonomialOrder.parse(name)


def verify(p: CoxPresentation, coll: Collection, options: VerifyOptions | None = None) -> VerificationReport:
    opts = options or VerifyOptions()
    budget = Budget(seconds=opts.budget_secs)
    st = _Stages(budget)
    warn: list = []
    rep = VerificationReport(
        quiver={}, flags={}, ideals={}, substitution={}, checks={}, saturation={},
        verdict="inconclusive", strategy=str(opts.strategy), order="", warnings=warn,
    )
    rep.timings = st.timings
    try:
        _verify(p, coll, opts, st, rep)
    except BudgetExceeded as exc:
        rep.verdict = "failed-budget"
        rep.failed_stage = exc.stage
        warn.append(str(exc))
    return rep


def _verify(p, coll, opts, st, rep):
    budget = st.budget
    warn = rep.warnings
    q = st.run("quiver", build_quiver, p, coll)
    order = report_order(q, opts.order)
    rep.order = order.describe() if opts.order not in (None, "auto", "wdegrevlex") else "wdegrevlex"
    rep.quiver = to_json(q)
    rep.quiver["path_counts"] = {
        f"{i}->{j}": count_paths(q, i, j)
        for i in range(q.num_vertices) for j in range(q.num_vertices) if i != j and count_paths(q, i, j)
    }

    # flags
    classes = []
    for i, c in enumerate(coll.classes):
        rec = {"index": i, "class": list(c), "effective": bool(len(global_sections(p, c))),
               "distinct": coll.classes.count(c) == 1, "basepoint_free": None}
        if i in coll.non_cartier:
            rec["asserted_non_cartier"] = True
        classes.append(rec)
    if coll.non_cartier:
        warn.append(f"classes {list(coll.non_cartier)} are declared non-Cartier; sections are multiplied "
                    "by adding exponents, which is not checked against the reflexive product")
    if opts.check_bpf:
        if p.chamber is None:
            warn.append("basepoint-free check skipped: no chamber in the input")
        else:
            def bpf():
                for rec in classes:
                    rec["basepoint_free"] = basepoint_free(p, tuple(rec["class"]))
            st.run("basepoint_free", bpf)
    surj = st.run("mult_map", mult_map_surjective, p, coll.classes[1:])
    rep.flags = {"classes": classes, "mult_map_surjective": surj}

    w = arrow_weights(q)
    comps = bq_components(q)
    nbq = bq_generator_count(q)
    bq_rec = {"components": [[q.arrows[k].name for k in comp] for comp in comps], "generator_count": nbq}
    if nbq <= opts.bq_generator_cap:
        from .quiver import bq_ideal

        B = bq_ideal(q)
        bq_rec["generators"] = B.generator_strings()
    else:
        warn.append(f"B_Q has {nbq} minimal generators; only its components are listed")
    rep.ideals["bq"] = bq_rec

    iqt = st.run("iqtilde", iqtilde_ideal, q, budget)
    ilt = st.run("iltilde", iltilde_ideal, q)
    il = st.run("il", il_ideal, q, opts.strategy, budget)

    subst = st.run("substitution", linear_substitution, q, opts.substitution)
    rep.substitution = {
        "active": subst.active,
        "eliminated": [q.ring.names[k] for k in sorted(subst.images)],
        "relations": sorted(str(f) for f in subst.relations),
        "variables_before": q.ring.nvars,
        "variables_after": subst.reduced.nvars,
    }
    wr = subst.reduced_weights(w)
    rorder = MonomialOrder.degrevlex(wr) if wr else MonomialOrder.degrevlex()
    primes = subst.reduced_primes(comps)

    iq_r = st.run("iq_elimination", iq_reduced, q, subst, budget)
    il_r = subst.apply_ideal(il)

    rel_in_il = all(il.contains(f, arrow_order(q), budget) for f in subst.relations) if subst.active else True
    sat_r = st.run("saturation", saturate_by_primes, il_r, primes, budget, wr)
    eq = st.run("saturation_equality", equal, sat_r, iq_r, rorder, budget)
    iq_sat_r = st.run("iq_saturated", saturate_by_primes, iq_r, primes, budget, wr)
    iq_saturated = st.run("iq_saturated_equality", equal, iq_sat_r, iq_r, rorder, budget)

    iq = subst.lift(iq_r)

    def chain():
        def inside_iq(I):
            return contained(subst.apply_ideal(I), iq_r, rorder, budget)

        return {
            "iltilde_in_iqtilde": contained(ilt, iqt, arrow_order(q), budget),
            "iltilde_in_il": contained(ilt, il, arrow_order(q), budget),
            "il_in_iq": inside_iq(il),
            "iqtilde_in_iq": inside_iq(iqt),
        }

    containment = st.run("containment", chain)

    def generator_checks():
        nf = normal_forms(p)
        homog = all(is_weight_homogeneous(q, g) for I in (il, ilt) for g in I.gens)
        image = all(not nf.of_poly(label_image(q, g)) for I in (il, ilt) for g in I.gens)
        return homog, image

    homog, image = st.run("generator_checks", generator_checks)
    dims = st.run("dimension_check", dimension_check, q)
    rep.checks = {
        "containment": containment,
        "substitution_relations_in_il": rel_in_il,
        "iq_saturated": iq_saturated,
        "generators_weight_homogeneous": homog,
        "generators_map_into_ix": image,
        "path_dimension": dims,
    }
    for name, ok in containment.items():
        if not ok:
            warn.append(f"containment check failed: {name}")
    if not iq_saturated:
        warn.append("I_Q is not saturated with respect to B_Q")

    def records():
        return {
            "iqtilde": _ideal_record(iqt, order, budget),
            "iltilde": _ideal_record(ilt, order, budget),
            "il": _ideal_record(il, order, budget),
            "iq": _ideal_record(iq, order, budget),
        }

    rep.ideals.update(st.run("report_bases", records))
    sat_full = subst.lift(sat_r)
    rep.saturation = {"equal_to_iq": eq, "generators": sorted(str(primitive(g)) for g in sat_full.gens)}

    if eq:
        if opts.assert_very_ample:
            rep.verdict = "isomorphism"
            rep.flags["very_ample_evidence"] = "asserted, multiplication map surjective" if surj else "asserted"
        else:
            rep.verdict = "surjective-only"
            rep.flags["very_ample_evidence"] = None
    else:
        rep.verdict = "inconclusive"
    return rep


def dimension_check(q: Quiver) -> list[dict]:
    """For each vertex: paths from 0, strict kernel dimension and graded-piece dimension."""
    from .sections import graded_piece

    out = []
    for i in range(q.num_vertices):
        paths = enumerate_paths(q, 0, i)
        ker = len(strict_kernel(q, 0, i)) if i else 0
        dim = graded_piece(q.presentation, q.collection[i]).dim
        out.append({"vertex": i, "paths": len(paths), "kernel": ker, "graded_piece": dim,
                    "ok": len(paths) - ker == dim})
    return out


def exit_code(report: VerificationReport) -> int:
    return {"isomorphism": 0, "surjective-only": 0, "inconclusive": 4, "failed-budget": 5}[report.verdict]
