"""The quiver of sections of a collection, its paths and weight data."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property

from .algebra.ideal import Ideal, minimal_monomials
from .algebra.polynomial import Poly, Ring
from .presentation import Collection, CoxPresentation, class_of_monomial
from .sections import add, irreducible_sections, label_key, sub, validate_collection


class QuiverInvariantError(RuntimeError):
    def __init__(self, invariant: str, detail: str):
        self.invariant = invariant
        super().__init__(f"quiver invariant violated ({invariant}): {detail}")


@dataclass(frozen=True)
class Arrow:
    index: int  # 0-based; the arrow variable is y{index + 1}
    tail: int
    head: int
    label: tuple

    @property
    def name(self) -> str:
        return f"y{self.index + 1}"


@dataclass(frozen=True)
class Quiver:
    presentation: CoxPresentation
    collection: Collection
    arrows: tuple

    @property
    def num_vertices(self) -> int:
        return len(self.collection)

    @property
    def r(self) -> int:
        return self.num_vertices - 1

    @cached_property
    def ring(self) -> Ring:
        return Ring(a.name for a in self.arrows)

    def arrows_between(self, i: int, j: int) -> list[Arrow]:
        return [a for a in self.arrows if a.tail == i and a.head == j]

    def out_arrows(self, i: int) -> list[Arrow]:
        return [a for a in self.arrows if a.tail == i]

    def in_arrows(self, j: int) -> list[Arrow]:
        return [a for a in self.arrows if a.head == j]

    def label_string(self, a: Arrow) -> str:
        return str(self.presentation.ring.monomial(a.label))

    @cached_property
    def topological_order(self) -> list[int]:
        return topological_sort(self.num_vertices, [(a.tail, a.head) for a in self.arrows])

    def path_label(self, path) -> tuple:
        out = (0,) * self.presentation.d
        for k in path:
            out = add(out, self.arrows[k].label)
        return out

    def path_monomial(self, path) -> tuple:
        e = [0] * len(self.arrows)
        for k in path:
            e[k] += 1
        return tuple(e)

    def weight_of(self, m) -> tuple:
        """Weight in Z^{Q_0} of the arrow monomial with exponent vector ``m``."""
        w = [0] * self.num_vertices
        for a, e in zip(self.arrows, m):
            if e:
                w[a.head] += e
                w[a.tail] -= e
        return tuple(w)

    def label_of(self, m) -> tuple:
        """Label exponent vector of the arrow monomial ``m``."""
        out = [0] * self.presentation.d
        for a, e in zip(self.arrows, m):
            if e:
                for i, x in enumerate(a.label):
                    out[i] += e * x
        return tuple(out)

    def class_of_weight(self, w) -> tuple:
        """Image of a weight under theta -> sum theta_i c_i."""
        out = [0] * self.presentation.rho
        for i, t in enumerate(w):
            if t:
                for k, v in enumerate(self.collection[i]):
                    out[k] += t * v
        return tuple(out)


def topological_sort(n: int, edges) -> list[int]:
    indeg = [0] * n
    succ = [[] for _ in range(n)]
    for t, h in edges:
        indeg[h] += 1
        succ[t].append(h)
    ready = [v for v in range(n) if indeg[v] == 0]
    order = []
    while ready:
        ready.sort()
        v = ready.pop(0)
        order.append(v)
        for h in succ[v]:
            indeg[h] -= 1
            if indeg[h] == 0:
                ready.append(h)
    if len(order) != n:
        raise QuiverInvariantError("acyclic", "the arrows contain an oriented cycle")
    return order


def canonical_key(a: Arrow):
    return (a.tail, a.head, label_key(a.label))


def build_quiver(p: CoxPresentation, coll: Collection, check=True) -> Quiver:
    validate_collection(p, coll)
    raw = []
    n = len(coll)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            for m in irreducible_sections(p, coll, i, j):
                raw.append((i, j, m))
    raw.sort(key=lambda t: (t[0], t[1], label_key(t[2])))
    arrows = tuple(Arrow(k, t, h, m) for k, (t, h, m) in enumerate(raw))
    q = Quiver(p, coll, arrows)
    if check:
        check_invariants(q)
    return q


def check_invariants(q: Quiver):
    n = q.num_vertices
    q.topological_order  # raises on cycles
    heads = {a.head for a in q.arrows}
    sources = [v for v in range(n) if v not in heads]
    if sources != [0]:
        raise QuiverInvariantError("unique source", f"sources are {sources}, expected [0]")
    # connectivity from 0 follows from acyclicity plus a unique source, but is checked directly
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for a in q.out_arrows(v):
            if a.head not in seen:
                seen.add(a.head)
                stack.append(a.head)
    if len(seen) != n:
        raise QuiverInvariantError("connected", f"vertices {sorted(set(range(n)) - seen)} unreachable from 0")
    for a in q.arrows:
        want = sub(q.collection[a.head], q.collection[a.tail])
        got = class_of_monomial(q.presentation, a.label)
        if got != want:
            raise QuiverInvariantError("label class", f"arrow {a.name} has label class {got}, expected {want}")
    keys = [canonical_key(a) for a in q.arrows]
    if keys != sorted(keys) or len(set(keys)) != len(keys):
        raise QuiverInvariantError("canonical order", "arrows are not in canonical order")


# paths --------------------------------------------------------------------------------


def enumerate_paths(q: Quiver, i: int, j: int) -> list[tuple]:
    """All paths from ``i`` to ``j`` as tuples of arrow indices; ``()`` is the trivial path."""
    if i == j:
        return [()]
    out = []
    stack = [(i, ())]
    while stack:
        v, path = stack.pop()
        for a in reversed(q.out_arrows(v)):
            p2 = path + (a.index,)
            if a.head == j:
                out.append(p2)
            else:
                stack.append((a.head, p2))
    out.sort()
    return out


def count_paths(q: Quiver, i: int, j: int) -> int:
    counts = {v: 0 for v in range(q.num_vertices)}
    counts[i] = 1
    for v in q.topological_order:
        for a in q.out_arrows(v):
            counts[a.head] += counts[v]
    return counts[j]


# weights and B_Q --------------------------------------------------------------------------


def weight_data(q: Quiver):
    """Incidence matrix (rows = vertices, columns = arrows) and the special weight."""
    inc = [[0] * len(q.arrows) for _ in range(q.num_vertices)]
    for a in q.arrows:
        inc[a.head][a.index] += 1
        inc[a.tail][a.index] -= 1
    theta = tuple([-q.r] + [1] * q.r)
    return inc, theta


def bq_components(q: Quiver) -> list[tuple[int, ...]]:
    """Arrow index sets ``{a : h(a) = i}`` for ``i != 0``; B_Q is the intersection of their ideals."""
    return [tuple(a.index for a in q.in_arrows(i)) for i in range(1, q.num_vertices)]


def bq_generator_count(q: Quiver) -> int:
    out = 1
    for comp in bq_components(q):
        out *= len(comp)
    return out if q.num_vertices > 1 else 0


def bq_ideal(q: Quiver) -> Ideal:
    """The intersection of the vertex ideals, as a monomial ideal."""
    from .algebra.ideal import intersect

    R = q.ring
    comps = bq_components(q)
    if not comps:
        return Ideal(R)
    out = Ideal(R, [R.var(k) for k in comps[0]])
    for comp in comps[1:]:
        out = intersect(out, Ideal(R, [R.var(k) for k in comp]))
    return out


def spanning_tree_ideal(q: Quiver) -> Ideal:
    """Ideal of products over spanning trees rooted at 0 (exhaustive; small quivers only)."""
    R = q.ring
    n = q.num_vertices
    gens = []
    for subset in itertools.combinations(q.arrows, n - 1):
        if _is_rooted_tree(n, subset):
            e = [0] * len(q.arrows)
            for a in subset:
                e[a.index] = 1
            gens.append(R.monomial(e))
    if not gens:
        return Ideal(R)
    return Ideal(R, minimal_monomials(gens))


def _is_rooted_tree(n: int, arrows) -> bool:
    parent = {}
    for a in arrows:
        if a.head in parent or a.head == 0:
            return False
        parent[a.head] = a.tail
    for v in range(1, n):
        seen = set()
        while v != 0:
            if v in seen or v not in parent:
                return False
            seen.add(v)
            v = parent[v]
    return True


# output ----------------------------------------------------------------------------------------


def to_dot(q: Quiver) -> str:
    lines = ["digraph Q {"]
    for v in range(q.num_vertices):
        lines.append(f"  {v};")
    for a in q.arrows:
        lines.append(f'  {a.tail} -> {a.head} [label="{q.label_string(a)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_json(q: Quiver) -> dict:
    return {
        "vertices": q.num_vertices,
        "classes": [list(c) for c in q.collection.classes],
        "arrows": [
            {"index": a.index + 1, "tail": a.tail, "head": a.head, "label": q.label_string(a)}
            for a in q.arrows
        ],
    }


def from_json(p: CoxPresentation, doc: dict) -> Quiver:
    coll = Collection(tuple(tuple(c) for c in doc["classes"]))
    arrows = []
    for rec in doc["arrows"]:
        lab = p.ring.parse(rec["label"])
        if not lab.is_monomial():
            raise ValueError(f"arrow label {rec['label']!r} is not a monomial")
        (m,) = lab.terms
        arrows.append(Arrow(rec["index"] - 1, rec["tail"], rec["head"], m))
    q = Quiver(p, coll, tuple(arrows))
    check_invariants(q)
    return q


def dumps(q: Quiver) -> str:
    return json.dumps(to_json(q), indent=2, sort_keys=True) + "\n"


# comparison with externally numbered arrow lists --------------------------------------------------


def label_mismatches(q: Quiver, listed) -> list[dict]:
    """Positional comparison with a list of ``(tail, head, label string)`` records."""
    out = []
    for k, (t, h, lab) in enumerate(listed):
        a = q.arrows[k] if k < len(q.arrows) else None
        computed = None if a is None else (a.tail, a.head, q.label_string(a))
        if computed != (t, h, lab):
            out.append({"arrow": f"y{k + 1}", "listed": [t, h, lab], "computed": list(computed) if computed else None})
    if len(q.arrows) > len(listed):
        for a in q.arrows[len(listed):]:
            out.append({"arrow": a.name, "listed": None, "computed": [a.tail, a.head, q.label_string(a)]})
    return out


def match_numbering(q: Quiver, listed) -> list[int]:
    """For each listed ``(tail, head, label)`` record, the index of the matching arrow."""
    lookup = {(a.tail, a.head, q.label_string(a)): a.index for a in q.arrows}
    perm = []
    for t, h, lab in listed:
        lab = str(q.presentation.ring.parse(lab))
        key = (t, h, lab)
        if key not in lookup:
            raise KeyError(f"no arrow {t}->{h} labelled {lab}")
        perm.append(lookup[key])
    if sorted(perm) != list(range(len(q.arrows))):
        raise ValueError("listed arrows do not match the quiver one-to-one")
    return perm


def renumber(q: Quiver, texts, perm) -> list[Poly]:
    """Parse polynomials written in a foreign arrow numbering into ``q.ring``.

    Variable ``y{k+1}`` of the foreign numbering denotes arrow ``perm[k]``.
    """
    foreign = Ring(f"y{k + 1}" for k in range(len(perm)))
    target = q.ring
    images = [target.var(perm[k]) for k in range(len(perm))]
    out = []
    for text in texts:
        f = foreign.parse(text)
        g = target.zero()
        for m, c in f.terms.items():
            term = target.const(c)
            for k, e in enumerate(m):
                if e:
                    term = term * images[k] ** e
            g = g + term
        out.append(g)
    return out
