from fractions import Fraction

import pytest

from ..expansion import (
    AxisFactor,
    ReducedTerm,
    ReductionException,
    SimplexFactor,
    Term,
    composition_count,
    compositions,
    generate_terms,
    leading_coefficient,
    reduce_term,
    reduce_terms,
    reweighting_coefficients,
    symmetry_reduce,
)
from ..gamma import closed_form_leading
from ..zring import ZetaExpr

worked_term_id = "J=1,2|lp=1|mu=0,-1|fs=0"


def _exact_sum(pieces):
    total = ZetaExpr()
    for piece in pieces:
        total = total + piece.exact_value()
    return total


@pytest.mark.parametrize("parts", range(0, 5))
@pytest.mark.parametrize("total", range(-5, 4))
def test_composition_count(parts, total):
    found = list(compositions(total, parts))
    assert composition_count(parts, total) == len(found)
    assert len(set(found)) == len(found)
    assert all(sum(c) == total and min(c, default=0) >= -1 for c in found)


def test_reweighting_coefficients():
    assert reweighting_coefficients(3) == [1, 1, Fraction(1, 2), Fraction(1, 6)]


@pytest.mark.parametrize("n, count", [(1, 5), (2, 25)])
def test_generate_terms_count(n, count):
    assert len(generate_terms(n)) == count


def test_generate_terms_range():
    with pytest.raises(ReductionException):
        generate_terms(6)
    with pytest.raises(ReductionException):
        Term((1, 2), 1, (0, 0), 0, Fraction(1))


def test_symmetry_reduce_keeps_weight():
    raw = generate_terms(2)
    reduced = symmetry_reduce(raw)
    assert len(reduced) == 7
    assert sum(t.multiplicity for t in reduced) == sum(t.multiplicity for t in raw)
    assert sum(t.class_size for t in reduced) == len(raw)
    worked = [t for t in reduced if t.id == worked_term_id]
    assert len(worked) == 1
    assert worked[0].multiplicity == 6
    assert worked[0].class_size == 6


p2_classes = {
    "J=1,2|lp=0|mu=1,-1|fs=0": (Fraction(6), 6),
    "J=1,2|lp=0|mu=0,0|fs=0": (Fraction(3), 3),
    "J=1,2|lp=1|mu=0,-1|fs=0": (Fraction(6), 6),
    "J=1,2|lp=2|mu=-1,-1|fs=0": (Fraction(3, 2), 3),
    "J=2|lp=0|mu=0|fs=1": (Fraction(6), 3),
    "J=2|lp=1|mu=-1|fs=1": (Fraction(6), 3),
    "J=-|lp=0|mu=-|fs=2": (Fraction(3), 1),
}

p1_classes = {
    "J=1|lp=0|mu=0|fs=0": (Fraction(2), 2),
    "J=1|lp=1|mu=-1|fs=0": (Fraction(2), 2),
    "J=-|lp=0|mu=-|fs=1": (Fraction(2), 1),
}


@pytest.mark.parametrize("n, expected", [(1, p1_classes), (2, p2_classes)])
def test_symmetry_classes(n, expected):
    reduced = symmetry_reduce(generate_terms(n))
    assert {t.id: (t.multiplicity, t.class_size) for t in reduced} == expected


def test_point_term_with_unit_norm_is_kept():
    # ||Z_0||^2 = 1 at [1:0:0], so every power of its log vanishes
    term = Term((1, 2), 2, (-1, -1), 0, Fraction(3, 2))
    pieces = reduce_term(term)
    assert len(pieces) == 1
    piece = pieces[0]
    assert piece.dim == 0
    assert piece.ambient == (1, 2)
    assert piece.face == SimplexFactor(1, 2)
    assert piece.constant_prefactor == ZetaExpr.pi(2) * Fraction(3, 2)
    assert piece.exact_value().is_zero()


def test_point_terms_reach_the_breakdown():
    pieces = reduce_terms(symmetry_reduce(generate_terms(2)))
    sources = {p.source for p in pieces}
    assert "J=1,2|lp=2|mu=-1,-1|fs=0" in sources
    assert len(sources) == 7


def test_worked_term():
    term = Term((1, 2), 1, (0, -1), 0, Fraction(1))
    pieces = reduce_term(term)
    assert all(p.dim == 1 for p in pieces)
    assert all(p.ambient == (2,) for p in pieces)
    assert _exact_sum(pieces) == ZetaExpr.pi(2) - ZetaExpr.pi(2) * ZetaExpr.zeta(2)


def test_p1_terms():
    # the log term vanishes on the point divisor, the rest cancel
    values = {t.id: _exact_sum(reduce_term(t)) for t in symmetry_reduce(generate_terms(1))}
    assert values["J=1|lp=0|mu=0|fs=0"] == ZetaExpr.pi(1) * -2
    assert values["J=1|lp=1|mu=-1|fs=0"].is_zero()
    assert values["J=-|lp=0|mu=-|fs=1"] == ZetaExpr.pi(1) * 2


@pytest.mark.parametrize("n", [1, 2, 3])
def test_reduced_pieces_fill_their_stratum(n):
    for piece in reduce_terms(symmetry_reduce(generate_terms(n))):
        assert piece.form_degree == 2 * (n - len(piece.ambient))
        assert piece.dim <= n


@pytest.mark.parametrize("n", range(1, 6))
def test_leading_coefficient(n):
    value = leading_coefficient(n)
    assert value == ZetaExpr.pi(n) * (n + 1)
    assert value == ZetaExpr.pi(n) * closed_form_leading(n)


def test_reduced_term_degree_check():
    with pytest.raises(ReductionException):
        ReducedTerm(2, (), (AxisFactor(0, 0, 1, 0),), SimplexFactor(1), ZetaExpr.pi(2))


def test_order_minus_one_terms():
    terms = generate_terms(2, order=-1)
    assert all(sum(t.composition) == -1 - t.log_power for t in terms)
