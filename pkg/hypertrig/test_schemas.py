import json
from pathlib import Path
from typing import Any, Dict

import pydantic
import pytest

from hypertrig.errors import DomainMismatch
from hypertrig.hypergroup import Hypergroup, ParametricFamily, ValueTable, cyclic_group
from hypertrig.scalars import gaussian, rational
from hypertrig.schemas import (
    FunctionSpec,
    RecurrenceKind,
    RecurrenceSpec,
    TableFile,
    dumps,
    parse_document,
)


def load_recurrence_fixture(fixture_name: str) -> Path:
    return Path(__file__).parent / "test" / "fixtures" / "recurrence" / fixture_name


def test_table_file_preserves_the_table(small_chebyshev_table: Hypergroup) -> None:
    document = TableFile.from_hypergroup(small_chebyshev_table)
    assert document.recurrence is not None
    assert document.recurrence.kind is RecurrenceKind.chebyshev
    reloaded = parse_document(TableFile, dumps(document))
    assert isinstance(reloaded, TableFile)
    H = reloaded.to_hypergroup()
    assert H == small_chebyshev_table
    assert H.recurrence is not None and H.recurrence.name == "chebyshev"


def test_dumps_sorts_keys() -> None:
    assert dumps({"b": 1, "a": [1]}) == '{\n  "a": [\n    1\n  ],\n  "b": 1\n}\n'


def test_table_file_without_recurrence() -> None:
    document = TableFile.from_hypergroup(cyclic_group(3))
    assert document.recurrence is None
    assert document.provenance == "cyclic group Z_3"
    assert document.to_hypergroup() == cyclic_group(3)


@pytest.mark.parametrize(
    "spec",
    [
        {"name": "p", "x0": "1", "kind": "explicit"},
        {"name": "p", "x0": "1", "kind": "explicit", "coeffs": [[0.5, "0", "0"]]},
        {"name": "p", "x0": "1", "kind": "cartier"},
        {"name": "p", "x0": "1", "kind": "cartier", "params": {"q": 0}},
        {"name": "p", "x0": "one", "kind": "chebyshev"},
        {"name": "p", "kind": "chebyshev"},
        {"name": "p", "x0": "1", "kind": "legendre"},
    ],
)
def test_invalid_recurrence_specs(spec: Dict[str, Any]) -> None:
    assert isinstance(parse_document(RecurrenceSpec, json.dumps(spec)), pydantic.ValidationError)


def test_recurrence_spec_fixtures() -> None:
    spec = parse_document(RecurrenceSpec, load_recurrence_fixture("cartier-2.json").read_text())
    assert isinstance(spec, RecurrenceSpec)
    R = spec.to_recurrence()
    assert R.params == {"q": 2}
    assert R.coefficients(3) == (rational(2, 3), rational(0), rational(1, 3))

    spec = parse_document(RecurrenceSpec, load_recurrence_fixture("explicit-chebyshev.json").read_text())
    assert isinstance(spec, RecurrenceSpec)
    assert RecurrenceSpec.from_recurrence(spec.to_recurrence()).coeffs == [
        ("1/1", "0/1", "0/1")
    ] + [("1/2", "0/1", "1/2")] * 6


def test_preset_normalization_mismatch() -> None:
    spec = RecurrenceSpec(name="chebyshev", x0="0", kind=RecurrenceKind.chebyshev)
    with pytest.raises(DomainMismatch):
        spec.to_recurrence()


def test_function_specs(small_chebyshev_table: Hypergroup) -> None:
    H = small_chebyshev_table
    table = FunctionSpec.parse_obj({"kind": "table", "values": ["1", ["0", "1/2"], 3]})
    f = table.to_function(H)
    assert isinstance(f, ValueTable)
    assert f.table == (
        gaussian(1),
        gaussian(0, rational(1, 2)),
        gaussian(3),
    )
    assert table.to_function(H, force_float=True).table[1] == 0.5j  # type: ignore[attr-defined]

    family = FunctionSpec.parse_obj({"kind": "family", "family": "exponential", "lambda": ["1/2", "0"]})
    g = family.to_function(H)
    assert isinstance(g, ParametricFamily)
    assert g(2) == gaussian(rational(-1, 2))

    with pytest.raises(DomainMismatch):
        FunctionSpec.parse_obj({"kind": "family", "family": "sine"}).to_function(H)
    with pytest.raises(DomainMismatch):
        family.to_function(cyclic_group(2))


@pytest.mark.parametrize(
    "spec",
    [
        {"kind": "table"},
        {"kind": "family"},
        {"kind": "table", "values": [[1, 2, 3]]},
        {"kind": "family", "family": "sine", "lambda": {"re": 1}},
        {"kind": "pointwise", "values": []},
    ],
)
def test_invalid_function_specs(spec: Dict[str, Any]) -> None:
    assert isinstance(parse_document(FunctionSpec, json.dumps(spec)), pydantic.ValidationError)
