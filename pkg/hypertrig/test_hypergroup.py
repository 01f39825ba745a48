from fractions import Fraction
from pathlib import Path
from typing import Any, List

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypertrig.errors import DomainMismatch, MissingIdentityRow, UntabulatedPair
from hypertrig.hypergroup import (
    FiniteMeasure,
    Hypergroup,
    ParametricFamily,
    ValueTable,
    check_axioms,
    constant,
    convolve,
    convolve_measures,
    cyclic_group,
    translate,
)
from hypertrig.scalars import ONE, ArithmeticMode, gaussian, rational
from hypertrig.schemas import TableFile, parse_document


def load_table_fixture(fixture_name: str) -> Path:
    return Path(__file__).parent / "test" / "fixtures" / "tables" / fixture_name


def read_table(fixture_name: str) -> TableFile:
    document = parse_document(TableFile, load_table_fixture(fixture_name).read_text())
    assert isinstance(document, TableFile)
    return document


def test_chebyshev_axioms_exact(chebyshev_table: Hypergroup) -> None:
    report = check_axioms(chebyshev_table, 12)
    assert report.passed
    assert report.mode is ArithmeticMode.EXACT
    assert report.tolerance == 0.0
    # (x*y)*z is tabulated exactly when x + y + z <= nmax
    assert report.associativity_triples == sum(
        1
        for x in range(13)
        for y in range(13)
        for z in range(13)
        if x + y + z <= 30
    )
    assert report.associativity.witnesses == []


def test_chebyshev_convolution(small_chebyshev_table: Hypergroup) -> None:
    # T_2 T_3 = (T_1 + T_5) / 2
    assert convolve(small_chebyshev_table, 2, 3) == FiniteMeasure(
        support=((1, rational(1, 2)), (5, rational(1, 2)))
    )
    assert convolve(small_chebyshev_table, 3, 3) == FiniteMeasure(
        support=((0, rational(1, 2)), (6, rational(1, 2)))
    )
    assert convolve(small_chebyshev_table, 4, 0) == FiniteMeasure.point_mass(4)


def test_commutativity(small_chebyshev_table: Hypergroup) -> None:
    for x, y in small_chebyshev_table.pairs():
        assert convolve(small_chebyshev_table, x, y) == convolve(small_chebyshev_table, y, x)


def test_untabulated_pair(small_chebyshev_table: Hypergroup) -> None:
    assert not small_chebyshev_table.is_tabulated(7, 6)
    with pytest.raises(UntabulatedPair):
        convolve(small_chebyshev_table, 7, 6)


def test_normalization_of_translates(small_chebyshev_table: Hypergroup) -> None:
    one = constant(ONE)
    for x, y in small_chebyshev_table.pairs():
        assert translate(small_chebyshev_table, one, x, y) == ONE


def test_point_masses_convolve_like_rows(small_chebyshev_table: Hypergroup) -> None:
    H = small_chebyshev_table
    for x, y in H.pairs():
        assert convolve_measures(
            H, FiniteMeasure.point_mass(x), FiniteMeasure.point_mass(y)
        ) == convolve(H, x, y)


def _gaussian(q: Fraction) -> Any:
    return gaussian(rational(q.numerator, q.denominator))


small_rationals = st.fractions(max_denominator=20).filter(lambda q: abs(q) < 100)


@settings(max_examples=30, deadline=None)
@given(
    st.lists(small_rationals, min_size=13, max_size=13),
    st.lists(small_rationals, min_size=13, max_size=13),
    small_rationals,
    small_rationals,
)
def test_translate_is_linear(
    small_chebyshev_table: Hypergroup,
    f_values: List[Fraction],
    g_values: List[Fraction],
    alpha: Fraction,
    beta: Fraction,
) -> None:
    H = small_chebyshev_table
    f = ValueTable.from_values(_gaussian(v) for v in f_values)
    g = ValueTable.from_values(_gaussian(v) for v in g_values)
    a_, b_ = _gaussian(alpha), _gaussian(beta)
    combined = ValueTable.from_values(a_ * a + b_ * b for a, b in zip(f.table, g.table))
    for x, y in H.pairs():
        assert translate(H, combined, x, y) == a_ * translate(H, f, x, y) + b_ * translate(
            H, g, x, y
        )


def test_float_table_axioms(small_chebyshev_table: Hypergroup) -> None:
    rows = {
        pair: FiniteMeasure(support=tuple((e, float(w)) for e, w in measure.support))
        for pair, measure in small_chebyshev_table.rows.items()
    }
    H = Hypergroup(nmax=12, identity=0, rows=rows)
    assert H.mode is ArithmeticMode.FLOAT
    report = check_axioms(H, 6)
    assert report.passed
    assert report.tolerance > 0


def test_negative_weight_is_reported() -> None:
    H = read_table("negative-weight.json").to_hypergroup()
    report = check_axioms(H, 2)
    assert not report.passed
    assert not report.nonnegativity.passed
    assert report.nonnegativity.witnesses[0].elements == [1, 1, 0]
    assert report.nonnegativity.witnesses[0].value == "-1/10"
    assert report.normalization.passed


def test_short_row_is_reported() -> None:
    H = read_table("short-row.json").to_hypergroup()
    report = check_axioms(H, 2)
    assert not report.normalization.passed
    assert report.normalization.witnesses[0].elements == [1, 1]
    assert report.normalization.witnesses[0].value == "9/10"
    assert report.nonnegativity.passed


def test_missing_identity_row_is_rejected() -> None:
    with pytest.raises(MissingIdentityRow) as excinfo:
        read_table("missing-identity.json").to_hypergroup()
    assert excinfo.value.element == 1


def test_depth_beyond_table() -> None:
    H = cyclic_group(3)
    with pytest.raises(DomainMismatch):
        check_axioms(H, 3)


@pytest.mark.parametrize("order", [1, 2, 4, 5])
def test_cyclic_group_axioms(order: int) -> None:
    H = cyclic_group(order)
    report = check_axioms(H, order - 1)
    assert report.passed
    assert report.associativity_triples == order ** 3


def test_finite_measure_canonical_form() -> None:
    measure = FiniteMeasure.from_weights(
        [(2, rational(1, 4)), (0, rational(1, 2)), (2, rational(1, 4)), (1, rational(0))]
    )
    assert measure.support == ((0, rational(1, 2)), (2, rational(1, 2)))
    assert measure.total() == 1
    assert measure.weight(1) == 0


def test_value_table_too_short() -> None:
    with pytest.raises(DomainMismatch):
        ValueTable.from_values([ONE, ONE]).values(2)


def test_parametric_family_is_pure() -> None:
    f = constant(ONE)
    assert f.values(5) == f.values(5)
    assert f.values(3) == f.values(8)[:4]


def test_parametric_family_cache_only_grows() -> None:
    calls: List[int] = []

    def sequence(nmax: int) -> List[Any]:
        calls.append(nmax)
        return [gaussian(n) for n in range(nmax + 1)]

    f = ParametricFamily(family="index", params={}, sequence=sequence, label="index")
    assert len(f.values(10)) == 11
    # a shorter request is served from the longer cached prefix
    assert f.values(3) == [gaussian(n) for n in range(4)]
    assert calls == [10]
    assert len(f.values(20)) == 21
    assert f.values(10) == [gaussian(n) for n in range(11)]
    assert calls == [10, 20]


def test_parametric_family_short_sequence_is_rejected() -> None:
    f = ParametricFamily(
        family="short", params={}, sequence=lambda nmax: [ONE], label="short"
    )
    with pytest.raises(DomainMismatch):
        f.values(4)


def test_mixed_weights_promote_measure_to_float() -> None:
    measure = FiniteMeasure.from_weights([(0, rational(1, 2)), (1, 0.5)])
    assert measure.mode is ArithmeticMode.FLOAT
    assert measure.support == ((0, 0.5), (1, 0.5))
    value, scale = measure.integrate([ONE, gaussian(3)])
    assert value == 2.0
    assert scale == 2.0
