"""
JSON documents read and written by the command line: hypergroup table files,
recurrence specs, function specs, and the reports printed by each command.
"""
from __future__ import annotations

import json
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple, Type, TypeVar, Union

import pydantic
from pydantic import BaseModel, Field, StrictFloat, StrictInt, StrictStr, validator

from hypertrig import polynomial
from hypertrig.errors import DomainMismatch, NotAHypergroup
from hypertrig.hypergroup import (
    FiniteMeasure,
    HFunction,
    Hypergroup,
    ValueTable,
    constant,
)
from hypertrig.polynomial import CounterexampleReport, Recurrence
from hypertrig.scalars import (
    Scalar,
    real_from_json,
    real_to_json,
    scalar_from_json,
    scalar_to_json,
    to_float,
)
from hypertrig.solutions import ClassificationResult, ResidualScan

JsonReal = Union[StrictInt, StrictFloat, StrictStr]

Model = TypeVar("Model", bound=BaseModel)


def dumps(document: Any) -> str:
    """sorted keys and repr floats, so equal inputs give byte-identical output"""
    if isinstance(document, BaseModel):
        document = json.loads(document.json(by_alias=True, exclude_none=True))
    return json.dumps(document, sort_keys=True, indent=2) + "\n"


def parse_document(
    cls: Type[Model], content: str
) -> Union[Model, json.JSONDecodeError, pydantic.ValidationError]:
    try:
        return cls.parse_obj(json.loads(content))
    except (json.JSONDecodeError, pydantic.ValidationError) as e:
        return e


def _check_real(value: JsonReal) -> JsonReal:
    real_from_json(value)
    return value


def _check_scalar(value: Any) -> Any:
    scalar_from_json(value)
    return value


def _check_optional_scalar(value: Any) -> Any:
    return value if value is None else _check_scalar(value)


class RecurrenceKind(str, Enum):
    chebyshev = "chebyshev"
    cartier = "cartier"
    explicit = "explicit"


class RecurrenceSpec(BaseModel):
    name: str
    x0: JsonReal
    kind: RecurrenceKind = RecurrenceKind.explicit
    params: Dict[str, Any] = {}
    coeffs: Optional[List[Tuple[JsonReal, JsonReal, JsonReal]]] = None

    _x0_is_real = validator("x0", allow_reuse=True)(_check_real)

    @validator("coeffs", always=True)
    def coeffs_for_explicit(
        cls, v: Optional[List[Tuple[JsonReal, JsonReal, JsonReal]]], values: Dict[str, Any]
    ) -> Optional[List[Tuple[JsonReal, JsonReal, JsonReal]]]:
        if values.get("kind") is RecurrenceKind.explicit and not v:
            raise ValueError("explicit recurrences must list coeffs")
        for triple in v or []:
            for entry in triple:
                if isinstance(real_from_json(entry), float):
                    raise ValueError("recurrence coefficients must be rational")
        return v

    @validator("params", always=True)
    def preset_params(cls, v: Dict[str, Any], values: Dict[str, Any]) -> Dict[str, Any]:
        if values.get("kind") is RecurrenceKind.cartier:
            q = v.get("q")
            if not isinstance(q, int) or isinstance(q, bool) or q < 1:
                raise ValueError("cartier recurrences need an integer params.q >= 1")
        return v

    def to_recurrence(self) -> Recurrence:
        x0 = real_from_json(self.x0)
        if isinstance(x0, float):
            raise DomainMismatch("x0 must be rational")
        if self.kind is RecurrenceKind.explicit:
            assert self.coeffs is not None
            return polynomial.explicit(
                self.name,
                x0,
                [tuple(real_from_json(e) for e in triple) for triple in self.coeffs],  # type: ignore[misc]
            )
        preset = polynomial.PRESETS[self.kind.value]
        if self.kind is RecurrenceKind.cartier:
            recurrence = preset(int(self.params["q"]))
        else:
            recurrence = preset()
        if recurrence.x0 != x0:
            raise DomainMismatch(
                f"{self.kind.value} preset is normalized at x0 = {recurrence.x0}, spec says {x0}"
            )
        return recurrence

    @classmethod
    def from_recurrence(cls, R: Recurrence) -> RecurrenceSpec:
        coeffs = None
        if R.kind == "explicit":
            coeffs = [
                tuple(real_to_json(e) for e in triple) for triple in R.params["coeffs"]
            ]
        return cls(
            name=R.name,
            x0=real_to_json(R.x0),
            kind=RecurrenceKind(R.kind),
            params={k: v for k, v in R.params.items() if k != "coeffs"},
            coeffs=coeffs,
        )


class TableRow(BaseModel):
    x: int
    y: int
    measure: List[Tuple[int, JsonReal]]

    @validator("measure", each_item=True)
    def rational_or_float(cls, v: Tuple[int, JsonReal]) -> Tuple[int, JsonReal]:
        _check_real(v[1])
        return v


class TableFile(BaseModel):
    nmax: int
    identity: int = 0
    rows: List[TableRow]
    provenance: Optional[str] = None
    recurrence: Optional[RecurrenceSpec] = None

    def to_hypergroup(self) -> Hypergroup:
        rows = [
            (
                row.x,
                row.y,
                FiniteMeasure.from_weights(
                    [(element, real_from_json(weight)) for element, weight in row.measure]
                ),
            )
            for row in self.rows
        ]
        return Hypergroup.from_measure_rows(
            nmax=self.nmax,
            identity=self.identity,
            rows=rows,
            provenance=self.provenance or "",
            recurrence=self.recurrence.to_recurrence() if self.recurrence else None,
        )

    @classmethod
    def from_hypergroup(cls, H: Hypergroup) -> TableFile:
        rows = [
            TableRow(
                x=x,
                y=y,
                measure=[(element, real_to_json(weight)) for element, weight in H.row(x, y).support],
            )
            for x, y in H.pairs()
        ]
        return cls(
            nmax=H.nmax,
            identity=H.identity,
            rows=rows,
            provenance=H.provenance or None,
            recurrence=RecurrenceSpec.from_recurrence(H.recurrence) if H.recurrence else None,
        )


class FunctionKind(str, Enum):
    table = "table"
    family = "family"


class FamilyName(str, Enum):
    exponential = "exponential"
    sine = "sine"
    additive = "additive"
    constant = "constant"


class FunctionSpec(BaseModel):
    kind: FunctionKind
    values: Optional[List[Any]] = None
    family: Optional[FamilyName] = None
    lambda_: Optional[Any] = Field(None, alias="lambda")
    const: Optional[Any] = None
    label: Optional[str] = None

    class Config:
        allow_population_by_field_name = True

    _scalars = validator("lambda_", "const", allow_reuse=True)(_check_optional_scalar)

    @validator("values", each_item=True)
    def scalar_values(cls, v: Any) -> Any:
        return _check_scalar(v)

    @validator("family", always=True)
    def family_fields(cls, v: Optional[FamilyName], values: Dict[str, Any]) -> Optional[FamilyName]:
        kind = values.get("kind")
        if kind is FunctionKind.table and values.get("values") is None:
            raise ValueError("table functions need values")
        if kind is FunctionKind.family and v is None:
            raise ValueError("family functions need a family name")
        return v

    def _parameter(self, name: str, raw: Any, force_float: bool) -> Scalar:
        if raw is None:
            raise DomainMismatch(f"{self.family} family needs {name}")
        value = scalar_from_json(raw)
        return to_float(value) if force_float else value

    def to_function(self, H: Hypergroup, force_float: bool = False) -> HFunction:
        if self.kind is FunctionKind.table:
            assert self.values is not None
            values = [scalar_from_json(v) for v in self.values]
            if force_float:
                values = [to_float(v) for v in values]
            return ValueTable.from_values(values, label=self.label or "table")
        if self.family is FamilyName.constant:
            return constant(self._parameter("const", self.const, force_float))
        if H.recurrence is None:
            raise DomainMismatch(
                f"the {self.family} family needs a polynomial hypergroup table with a recurrence"
            )
        if self.family is FamilyName.exponential:
            return polynomial.exponential_fn(H.recurrence, self._parameter("lambda", self.lambda_, force_float))
        if self.family is FamilyName.sine:
            return polynomial.sine_fn(H.recurrence, self._parameter("lambda", self.lambda_, force_float))
        const = self.const if self.const is not None else "1"
        return polynomial.additive_fn(H.recurrence, self._parameter("const", const, force_float))

    @classmethod
    def from_values(cls, values: List[Scalar], label: Optional[str] = None) -> FunctionSpec:
        return cls(kind=FunctionKind.table, values=[scalar_to_json(v) for v in values], label=label)


def _optional_scalar(value: Optional[Scalar]) -> Optional[List[Any]]:
    return None if value is None else scalar_to_json(value)


class ClassificationDocument(BaseModel):
    case: str
    params: Dict[str, Any]
    residual_input: JsonReal
    residual_reconstruction: Optional[float]
    notes: List[str]

    @classmethod
    def from_result(cls, result: ClassificationResult) -> ClassificationDocument:
        params: Dict[str, Any] = {
            "c": _optional_scalar(result.c),
            "lambda": _optional_scalar(result.lam),
            "d": _optional_scalar(result.d),
            "sign": result.sign,
            "M_lambda": _optional_scalar(result.M_lambda),
            "N_lambda": _optional_scalar(result.N_lambda),
        }
        if result.M is not None:
            params["M"] = json.loads(dumps(FunctionSpec.from_values(list(result.M.table))))
        if result.N is not None:
            params["N"] = json.loads(dumps(FunctionSpec.from_values(list(result.N.table))))
        return cls(
            case=result.case.value,
            params={k: v for k, v in params.items() if v is not None},
            residual_input=real_to_json(result.residual_input),
            residual_reconstruction=result.residual_reconstruction,
            notes=result.notes,
        )


class VerifyDocument(BaseModel):
    """
    `max_residual` is exact |LHS - RHS| in exact mode and the
    scale-normalized residual in float mode; the tolerance bound applies to
    it. `max_residual_absolute` is the unnormalized |LHS - RHS|.
    """

    equation: str
    max_residual: JsonReal
    max_residual_absolute: JsonReal
    passed: bool = Field(..., alias="pass")
    worst_pair: Optional[Tuple[int, int]]
    mode: str
    pairs: int

    class Config:
        allow_population_by_field_name = True

    @classmethod
    def from_scan(cls, equation: str, scan: ResidualScan, passed: Optional[bool] = None) -> VerifyDocument:
        return cls(
            equation=equation,
            max_residual=real_to_json(scan.value),
            max_residual_absolute=real_to_json(scan.absolute),
            passed=scan.passed if passed is None else passed,
            worst_pair=scan.worst_pair,
            mode=scan.mode.value,
            pairs=scan.pairs,
        )


class CounterexampleDocument(BaseModel):
    recurrence: str
    lambda_: List[JsonReal] = Field(..., alias="lambda")
    nmax: int
    fit: str
    const: List[JsonReal]
    deviations: List[Tuple[int, JsonReal]]
    max_deviation: JsonReal
    argmax: int
    mode: str
    demonstrated: bool

    class Config:
        allow_population_by_field_name = True

    @classmethod
    def from_report(cls, report: CounterexampleReport, demonstrated: bool) -> CounterexampleDocument:
        return cls(
            recurrence=report.recurrence,
            lambda_=scalar_to_json(report.lam),
            nmax=report.nmax,
            fit=report.fit,
            const=scalar_to_json(report.const),
            deviations=[(n, real_to_json(value)) for n, value in report.deviations],
            max_deviation=real_to_json(report.max_deviation),
            argmax=report.argmax,
            mode=report.mode.value,
            demonstrated=demonstrated,
        )


class NotAHypergroupDocument(BaseModel):
    error: str = "NotAHypergroup"
    n: int
    m: int
    k: int
    value: JsonReal

    @classmethod
    def from_error(cls, error: NotAHypergroup) -> NotAHypergroupDocument:
        return cls(n=error.n, m=error.m, k=error.k, value=real_to_json(error.value))


class EvalDocument(BaseModel):
    recurrence: str
    family: str
    lambda_: List[JsonReal] = Field(..., alias="lambda")
    n: int
    value: List[JsonReal]

    class Config:
        allow_population_by_field_name = True
