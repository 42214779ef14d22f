import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mdsquiver.presentation import Collection, build_presentation, class_of_monomial
from mdsquiver.sections import (
    basepoint_free,
    global_sections,
    graded_piece,
    graded_piece_dim_by_relations,
    irreducible_sections,
    mult_map_surjective,
    sections_basepoint_free,
    standard_monomials,
    variable_bounds,
)


def mono(p, text):
    (m,) = p.ring.parse(text).terms
    return m


def brute_force_fibre(p, c):
    """Box enumeration inside the LP bounds, filtered by class."""
    import itertools

    bounds = variable_bounds(p, c)
    if bounds is None:
        return []
    return sorted(u for u in itertools.product(*(range(b + 1) for b in bounds))
                  if class_of_monomial(p, u) == tuple(c))


def test_gr24_sections(gr24):
    p = gr24.presentation
    assert global_sections(p, (1,)).strings(p) == [f"x{i}" for i in range(1, 7)]
    assert len(global_sections(p, (2,))) == 21
    assert graded_piece(p, (2,)).dim == 20
    assert global_sections(p, (0,)).strings(p) == ["1"]
    assert len(global_sections(p, (-1,))) == 0


def test_x4_hyperplane_class(x4):
    p = x4.presentation
    H = (1, 0, 0, 0, 0)
    secs = global_sections(p, H).strings(p)
    assert secs == ["x1*x2*x5", "x1*x3*x6", "x1*x4*x7", "x2*x3*x8", "x2*x4*x9", "x3*x4*x10"]
    assert graded_piece(p, H).dim == 3
    assert graded_piece(p, (2, 0, 0, 0, 0)).dim == 6


@pytest.mark.parametrize("name", ["gr24", "x4", "x5"])
def test_fibres_match_box_enumeration(name, request):
    doc = request.getfixturevalue(name)
    p = doc.presentation
    classes = doc.collection.classes[1:2] if name == "x5" else doc.collection.classes[1:]
    for c in classes:
        assert sorted(global_sections(p, c).monomials) == brute_force_fibre(p, c)


@pytest.mark.parametrize("name", ["gr24", "x4"])
def test_graded_piece_against_relations(name, request):
    doc = request.getfixturevalue(name)
    p = doc.presentation
    cs = doc.collection.classes
    for c in cs + tuple(tuple(a - b for a, b in zip(x, y)) for x in cs for y in cs):
        assert graded_piece(p, c).dim == graded_piece_dim_by_relations(p, c)


@pytest.mark.parametrize("name", ["gr24", "x4", "x5"])
def test_standard_monomials_are_a_filter_of_sections(name, request):
    from mdsquiver.sections import normal_forms

    doc = request.getfixturevalue(name)
    p = doc.presentation
    nf = normal_forms(p)
    for c in doc.collection.classes:
        want = tuple(m for m in global_sections(p, c) if nf.is_standard(m))
        assert standard_monomials(p, c) == want


def test_irreducible_sections_with_witnesses(gr24, x4, x5):
    p = gr24.presentation
    irr, wit = irreducible_sections(p, gr24.collection, 0, 2, witnesses=True)
    assert len(irr) == 0 and len(wit) == 21
    for m, f in wit.items():
        assert f.through == 1
        assert tuple(a + b for a, b in zip(f.first, f.second)) == m

    p = x4.presentation
    assert irreducible_sections(p, x4.collection, 1, 2).strings(p) == ["x2*x5", "x3*x6", "x4*x7"]

    p = x5.presentation
    irr = irreducible_sections(p, x5.collection, 0, 2)
    assert mono(p, "x2*x3*x4*x5*x16") in irr.monomials


def test_irreducible_sections_need_distinct_vertices(gr24):
    with pytest.raises(ValueError):
        irreducible_sections(gr24.presentation, gr24.collection, 1, 1)


def test_mult_map(gr24, p2):
    assert mult_map_surjective(gr24.presentation, [(1,), (1,)])
    assert mult_map_surjective(gr24.presentation, [(1,)])
    assert mult_map_surjective(gr24.presentation, [])
    assert mult_map_surjective(p2, [(-1,)])  # empty target piece
    assert not mult_map_surjective(p2, [(1,), (-1,)])  # no sections of (-1) to reach (0)


def test_mult_map_detects_failure():
    # k[a, b] with deg a = 1, deg b = 2: the product of degree-1 sections misses b
    p = build_presentation(["a", "b"], [[1, 2]], [])
    assert not mult_map_surjective(p, [(1,), (1,)])
    assert mult_map_surjective(p, [(1,), (2,)])


def test_basepoint_free(x4, p2):
    p = x4.presentation
    assert basepoint_free(p, (0, 0, 0, 0, 0))
    assert basepoint_free(p, (2, -1, 0, 0, 0))
    assert basepoint_free(p2, (1,))
    assert not sections_basepoint_free(p2, [mono(p2, "x0")])
    assert sections_basepoint_free(p2, [mono(p2, "x0"), mono(p2, "x1"), mono(p2, "x2")])


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=3, max_size=3), st.integers(1, 2))
def test_p2_fibre_size(c0, extra):
    p = build_presentation(["x0", "x1", "x2"], [[1, 1, 1]], [], [1])
    n = sum(c0) + extra
    assert len(global_sections(p, (n,))) == (n + 1) * (n + 2) // 2


@settings(max_examples=25, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2)), min_size=2, max_size=3, unique=True))
def test_hirzebruch_fibres(classes):
    p = build_presentation(["a", "b", "c", "d"], [[1, 0, 1, 1], [0, 1, 0, 1]], [])
    for c in classes:
        assert sorted(global_sections(p, c).monomials) == brute_force_fibre(p, c)


def test_validate_collection_rejects_non_effective(p2):
    from mdsquiver.presentation import PresentationError
    from mdsquiver.sections import validate_collection

    with pytest.raises(PresentationError):
        validate_collection(p2, Collection(((0,), (-1,))))
