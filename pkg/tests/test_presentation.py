import json

import pytest

from mdsquiver.presentation import (
    Collection,
    InhomogeneousGenerator,
    NonPointedGrading,
    PresentationError,
    TorsionClassGroup,
    build_presentation,
    class_of_monomial,
    cone_member,
    irrelevant_ideal,
    minimal_supports,
    parse_document,
    serialize,
)


def test_fixtures_validate(gr24, x4, x5):
    assert gr24.presentation.d == 6 and gr24.presentation.rho == 1
    assert x4.presentation.d == 10 and x4.presentation.rho == 5
    assert x5.presentation.d == 16 and x5.presentation.rho == 6
    assert len(x4.presentation.ix_gens) == 5


def test_class_of_monomial(gr24, x4):
    assert class_of_monomial(x4.presentation, x4.presentation.ring.parse("x1*x2*x5").terms.popitem()[0]) \
        == (1, 0, 0, 0, 0)
    assert class_of_monomial(x4.presentation, (0,) * 10) == (0,) * 5
    m = gr24.presentation.ring.parse("x1*x6").terms.popitem()[0]
    assert class_of_monomial(gr24.presentation, m) == (2,)


def test_non_pointed_witness():
    with pytest.raises(NonPointedGrading) as exc:
        build_presentation(["a", "b"], [[1, -1]], [])
    assert exc.value.witness == (1, 1)


def test_inhomogeneous_generator_is_named():
    with pytest.raises(InhomogeneousGenerator) as exc:
        build_presentation(["a", "b"], [[1, 2]], ["a^2 - a"])
    assert exc.value.generator == "a^2 - a"
    assert set(exc.value.classes) == {(2,), (1,)}


def test_torsion_rejected():
    with pytest.raises(TorsionClassGroup):
        build_presentation(["a", "b"], [[2, 2]], [])


@pytest.mark.parametrize("doc,needle", [
    ("{", "invalid JSON"),
    ('{"variables": ["a"], "grading": [[1]]}', "missing keys"),
    ('{"variables": ["a"], "grading": [[1, 2]], "ideal": []}', "columns"),
    ('{"variables": ["a", "b"], "grading": [[1, 1], [1]], "ideal": []}', "row 1"),
    ('{"variables": ["a"], "grading": [[1]], "ideal": ["a +"]}', "syntax error"),
    ('{"variables": ["a"], "grading": [[1]], "ideal": [], "collection": [[1]]}', "must be zero"),
    ('{"variables": ["a"], "grading": [[1]], "ideal": [], "extra": 1}', "unknown keys"),
])
def test_document_errors(doc, needle):
    with pytest.raises(PresentationError) as exc:
        parse_document(doc)
    assert needle in str(exc.value)


def test_collection_validation():
    with pytest.raises(PresentationError):
        Collection(((0,), (1,), (1,)))
    assert Collection(((0,), (1,), (2,))).r == 2


def test_cone_member(x4, p2):
    assert cone_member(p2, (0,), [])
    assert cone_member(p2, (1,), ["x0"])
    assert cone_member(x4.presentation, x4.presentation.chamber, range(10))
    assert not cone_member(p2, (-1,), range(3))


def test_irrelevant_ideals(p2, gr24):
    assert irrelevant_ideal(p2).generator_strings() == ["x0", "x1", "x2"]
    assert irrelevant_ideal(gr24.presentation).generator_strings() == [f"x{i}" for i in range(1, 7)]


def test_x4_irrelevant_ideal_is_squarefree_and_support_monotone(x4):
    p = x4.presentation
    B = irrelevant_ideal(p)
    assert all(max(m) == 1 for g in B.gens for m in g.terms)
    supports = [frozenset(i for i, e in enumerate(next(iter(g.terms))) if e) for g in B.gens]
    assert sorted(map(sorted, supports)) == sorted(map(list, minimal_supports(p, p.chamber)))
    import itertools
    for k in range(11):
        for S in itertools.combinations(range(10), k):
            works = cone_member(p, p.chamber, S)
            assert works == any(s <= set(S) for s in supports)


def test_serialize_roundtrip(x4):
    text = serialize(x4.presentation, x4.collection)
    again = parse_document(text)
    assert serialize(again.presentation, again.collection) == text
    assert json.loads(text)["ideal"] == [str(g) for g in x4.presentation.ix_gens]


def test_non_cartier_declaration(p2):
    doc = parse_document(serialize(p2, Collection(((0,), (1,), (2,)), (2,))))
    assert doc.collection.non_cartier == (2,)
    assert "non_cartier" in serialize(doc.presentation, doc.collection)
    with pytest.raises(PresentationError):
        Collection(((0,), (1,)), (0,))
    text = serialize(p2).replace("{", '{"non_cartier": [1], ', 1)
    with pytest.raises(PresentationError):
        parse_document(text)
