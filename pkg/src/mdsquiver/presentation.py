"""Cox-ring presentations: parsing, validation and grading data."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Sequence

from .algebra.ideal import Ideal
from .algebra.lp import feasible, solve_lp
from .algebra.parser import PolynomialSyntaxError
from .algebra.polynomial import Poly, Ring

DivisorClass = tuple  # tuple of ints, length rho


class PresentationError(ValueError):
    """Invalid input document or presentation data."""


class NonPointedGrading(PresentationError):
    def __init__(self, witness):
        self.witness = tuple(witness)
        super().__init__(f"grading is not pointed: u = {self.witness} is a nonzero exponent vector of degree 0")


class InhomogeneousGenerator(PresentationError):
    def __init__(self, generator: str, first, second):
        self.generator = generator
        self.classes = (tuple(first), tuple(second))
        super().__init__(
            f"generator {generator!r} is not homogeneous: monomials of classes {tuple(first)} and {tuple(second)}"
        )


class TorsionClassGroup(PresentationError):
    pass


@dataclass(frozen=True)
class Collection:
    """Ordered divisor classes ``(c_0 = 0, c_1, ..., c_r)``.

    ``non_cartier`` lists indices of classes the user declares not Cartier;
    they are only reported, since sections are always multiplied by adding
    exponent vectors.
    """

    classes: tuple
    non_cartier: tuple = ()

    def __post_init__(self):
        classes = tuple(tuple(int(x) for x in c) for c in self.classes)
        object.__setattr__(self, "classes", classes)
        nc = tuple(sorted(set(int(i) for i in self.non_cartier)))
        object.__setattr__(self, "non_cartier", nc)
        if any(not 0 < i < len(classes) for i in nc):
            raise PresentationError(f"non_cartier indices must lie in 1..{len(classes) - 1}, got {list(nc)}")
        if not classes:
            raise PresentationError("collection is empty")
        if any(classes[0]):
            raise PresentationError(f"first class of the collection must be zero, got {classes[0]}")
        if len({len(c) for c in classes}) != 1:
            raise PresentationError("collection classes have different lengths")
        seen = {}
        for i, c in enumerate(classes):
            if c in seen:
                raise PresentationError(f"collection classes {seen[c]} and {i} coincide: {c}")
            seen[c] = i

    def __len__(self):
        return len(self.classes)

    def __getitem__(self, i):
        return self.classes[i]

    @property
    def r(self) -> int:
        return len(self.classes) - 1


@dataclass(frozen=True)
class CoxPresentation:
    var_names: tuple
    grading: tuple  # rho rows of d ints
    ix_gens: tuple  # Poly
    chamber: tuple | None = None
    ring: Ring = field(compare=False, default=None)

    @property
    def d(self) -> int:
        return len(self.var_names)

    @property
    def rho(self) -> int:
        return len(self.grading)

    @cached_property
    def columns(self) -> list[tuple]:
        return [tuple(row[i] for row in self.grading) for i in range(self.d)]

    @cached_property
    def ix(self) -> Ideal:
        return Ideal(self.ring, self.ix_gens)

    def ix_basis(self, budget=None) -> list[Poly]:
        """Reduced degrevlex basis of I_X."""
        return self.ix.groebner(budget=budget)

    @cached_property
    def positive_weights(self) -> tuple:
        return positive_grading(self)

    def zero_class(self) -> DivisorClass:
        return (0,) * self.rho


def class_of_monomial(p: CoxPresentation, m: Sequence[int]) -> DivisorClass:
    if len(m) != p.d:
        raise ValueError(f"exponent vector of length {len(m)}, expected {p.d}")
    return tuple(sum(a * e for a, e in zip(row, m)) for row in p.grading)


def cone_member(p: CoxPresentation, target: Sequence[int], support) -> bool:
    """Whether ``target`` lies in the rational cone spanned by the columns in ``support``."""
    idx = _support_indices(p, support)
    target = tuple(target)
    if not any(target):
        return True
    if not idx:
        return False
    A = [[p.grading[r][i] for i in idx] for r in range(p.rho)]
    return feasible(A, list(target)).status == "optimal"


def _support_indices(p, support) -> list[int]:
    out = []
    for s in support:
        out.append(p.ring.index[s] if isinstance(s, str) else int(s))
    return sorted(set(out))


def pointedness_witness(grading) -> tuple | None:
    """A nonzero ``u >= 0`` of degree zero, or None when the grading is pointed."""
    d = len(grading[0])
    res = solve_lp([list(r) for r in grading], [0] * len(grading), [1] * d, maximize=True)
    if res.status == "optimal":
        return None
    ray = res.ray
    den = 1
    for v in ray:
        den = den * v.denominator // gcd(den, v.denominator)
    u = [int(v * den) for v in ray]
    g = 0
    for v in u:
        g = gcd(g, v)
    return tuple(v // g for v in u)


def positive_grading(p: CoxPresentation) -> tuple:
    """Integer ``w`` with ``w . class(x_i) >= 1`` for every variable.

    Composing the grading with ``w`` gives a positive Z-grading for which every
    homogeneous ideal of the presentation is weighted-homogeneous.
    """
    rho, d = p.rho, p.d
    # variables: w+ (rho), w- (rho), slack (d);  A^T (w+ - w-) - s = 1
    A = []
    for i in range(d):
        col = p.columns[i]
        row = list(col) + [-v for v in col] + [0] * d
        row[2 * rho + i] = -1
        A.append(row)
    res = feasible(A, [1] * d)
    if res.status != "optimal":
        raise NonPointedGrading(pointedness_witness(p.grading) or (0,) * d)
    w = [res.x[k] - res.x[rho + k] for k in range(rho)]
    den = 1
    for v in w:
        den = den * v.denominator // gcd(den, v.denominator)
    return tuple(int(v * den) for v in w)


def variable_weights(p: CoxPresentation) -> tuple:
    w = p.positive_weights
    return tuple(sum(a * b for a, b in zip(w, col)) for col in p.columns)


def class_weight(p: CoxPresentation, c: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(p.positive_weights, c))


def lattice_generated_is_full(columns, rho: int) -> bool:
    """Whether the integer vectors ``columns`` generate all of Z^rho."""
    vecs = [list(c) for c in columns if any(c)]
    basis = []
    for k in range(rho):
        # gcd-reduce coordinate k among the vectors
        active = [v for v in vecs if v[k]]
        rest = [v for v in vecs if not v[k]]
        while len(active) > 1:
            active.sort(key=lambda v: abs(v[k]))
            piv = active[0]
            nxt = [piv]
            for v in active[1:]:
                q = v[k] // piv[k]
                w = [a - q * b for a, b in zip(v, piv)]
                if w[k]:
                    nxt.append(w)
                elif any(w):
                    rest.append(w)
            active = nxt
        if not active:
            return False
        piv = active[0]
        if abs(piv[k]) != 1:
            return False
        basis.append(piv)
        vecs = rest
    return True


def irrelevant_ideal(p: CoxPresentation) -> Ideal:
    """Squarefree monomial ideal of the minimal supports whose cone contains the chamber."""
    if p.chamber is None:
        raise PresentationError("irrelevant ideal needs a chamber")
    supports = minimal_supports(p, p.chamber)
    if not supports:
        raise PresentationError(f"chamber {p.chamber} is not in the effective cone")
    gens = []
    for S in supports:
        e = [0] * p.d
        for i in S:
            e[i] = 1
        gens.append(p.ring.monomial(e))
    return Ideal(p.ring, gens)


def minimal_supports(p: CoxPresentation, target) -> list[tuple]:
    """Inclusion-minimal variable sets whose cone contains ``target``.

    A minimal support consists of linearly independent columns, so only sets of
    size at most rho are examined.
    """
    found: list = []
    for k in range(0, p.rho + 1):
        for S in itertools.combinations(range(p.d), k):
            sset = set(S)
            if any(set(f) <= sset for f in found):
                continue
            if cone_member(p, target, S):
                found.append(S)
    return found


# parsing ---------------------------------------------------------------------------


def _int_matrix(obj, what):
    if not isinstance(obj, list) or not obj:
        raise PresentationError(f"{what} must be a nonempty list of rows")
    rows = []
    width = None
    for r, row in enumerate(obj):
        if not isinstance(row, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in row):
            raise PresentationError(f"{what} row {r} must be a list of integers")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise PresentationError(f"{what} row {r} has {len(row)} entries, expected {width}")
        rows.append(tuple(row))
    return tuple(rows)


def build_presentation(var_names, grading, ideal_texts, chamber=None) -> CoxPresentation:
    if not isinstance(var_names, list) or not var_names or not all(isinstance(v, str) for v in var_names):
        raise PresentationError("'variables' must be a nonempty list of names")
    for v in var_names:
        if not v.isidentifier():
            raise PresentationError(f"variable name {v!r} is not an identifier")
    try:
        ring = Ring(var_names)
    except ValueError as exc:
        raise PresentationError(str(exc)) from None
    grading = _int_matrix(grading, "grading")
    if len(grading[0]) != ring.nvars:
        raise PresentationError(f"grading has {len(grading[0])} columns for {ring.nvars} variables")
    if not isinstance(ideal_texts, list) or not all(isinstance(t, str) for t in ideal_texts):
        raise PresentationError("'ideal' must be a list of polynomial strings")
    gens = []
    for text in ideal_texts:
        try:
            gens.append(ring.parse(text))
        except PolynomialSyntaxError as exc:
            raise PresentationError(f"syntax error: {exc}") from None
    if chamber is not None:
        if not isinstance(chamber, list) or not all(isinstance(v, int) for v in chamber):
            raise PresentationError("'chamber' must be a list of integers")
        if len(chamber) != len(grading):
            raise PresentationError(f"chamber has length {len(chamber)}, expected {len(grading)}")
        chamber = tuple(chamber)
    p = CoxPresentation(tuple(var_names), grading, tuple(g for g in gens if g), chamber, ring)
    validate(p)
    return p


def validate(p: CoxPresentation):
    if not lattice_generated_is_full(p.columns, p.rho):
        raise TorsionClassGroup(
            "grading columns do not generate Z^rho (class group with torsion or not of rank rho)"
        )
    witness = pointedness_witness(p.grading)
    if witness is not None:
        raise NonPointedGrading(witness)
    for g in p.ix_gens:
        classes = {}
        for m in g.terms:
            classes.setdefault(class_of_monomial(p, m), m)
        if len(classes) > 1:
            a, b = list(classes)[:2]
            raise InhomogeneousGenerator(str(g), a, b)


@dataclass(frozen=True)
class InputDocument:
    presentation: CoxPresentation
    collection: Collection | None


def parse_document(text: str) -> InputDocument:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PresentationError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise PresentationError("input document must be a JSON object")
    missing = [k for k in ("variables", "grading", "ideal") if k not in doc]
    if missing:
        raise PresentationError(f"missing keys: {', '.join(missing)}")
    unknown = set(doc) - {"variables", "grading", "ideal", "chamber", "collection", "non_cartier"}
    if unknown:
        raise PresentationError(f"unknown keys: {', '.join(sorted(unknown))}")
    p = build_presentation(doc["variables"], doc["grading"], doc["ideal"], doc.get("chamber"))
    coll = None
    if doc.get("collection") is not None:
        rows = _int_matrix(doc["collection"], "collection")
        if len(rows[0]) != p.rho:
            raise PresentationError(f"collection classes have length {len(rows[0])}, expected {p.rho}")
        nc = doc.get("non_cartier") or []
        if not isinstance(nc, list) or not all(isinstance(i, int) and not isinstance(i, bool) for i in nc):
            raise PresentationError("non_cartier must be a list of class indices")
        coll = Collection(rows, tuple(nc))
    elif doc.get("non_cartier"):
        raise PresentationError("non_cartier given without a collection")
    return InputDocument(p, coll)


def parse_presentation(text: str) -> CoxPresentation:
    return parse_document(text).presentation


def load_document(path) -> InputDocument:
    with open(path, encoding="utf-8") as fh:
        return parse_document(fh.read())


def to_document(p: CoxPresentation, coll: Collection | None = None) -> dict:
    doc = {
        "variables": list(p.var_names),
        "grading": [list(r) for r in p.grading],
        "ideal": [str(g) for g in p.ix_gens],
    }
    if p.chamber is not None:
        doc["chamber"] = list(p.chamber)
    if coll is not None:
        doc["collection"] = [list(c) for c in coll.classes]
        if coll.non_cartier:
            doc["non_cartier"] = list(coll.non_cartier)
    return doc


def serialize(p: CoxPresentation, coll: Collection | None = None) -> str:
    return json.dumps(to_document(p, coll), sort_keys=True, indent=2) + "\n"


