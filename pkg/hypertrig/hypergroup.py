"""
Discrete commutative hypergroups stored as truncated convolution tables.

The ground set is {0, ..., nmax}. Each tabulated pair (x, y) maps to the
finitely supported probability measure realizing x*y; f(x*y) means the
integral of f against that measure.
"""
from __future__ import annotations

import itertools
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import (
    TYPE_CHECKING,
    Any,
    Callable,
    Dict,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import structlog
from pydantic import BaseModel, Field
from sympy.polys.domains import QQ

from hypertrig.config import DEFAULT_TOLERANCES, Tolerances
from hypertrig.errors import DomainMismatch, MissingIdentityRow, UntabulatedPair
from hypertrig.scalars import (
    ArithmeticMode,
    Real,
    Scalar,
    coerce,
    is_exact,
    lift,
    mode_of,
    to_float,
)

if TYPE_CHECKING:
    from hypertrig.polynomial import Recurrence

logger = structlog.get_logger()

Element = int
Pair = Tuple[Element, Element]


def _normalize_weights(
    items: Iterable[Tuple[Element, Any]]
) -> List[Tuple[Element, Real]]:
    # one float weight puts the whole measure in float mode
    listed = list(items)
    if any(not is_exact(w) for _, w in listed):
        return [(e, float(w)) for e, w in listed]
    return [(e, QQ.convert(w)) for e, w in listed]


@dataclass(frozen=True)
class FiniteMeasure:
    """
    Canonical form: support strictly increasing, no zero weights. Structural
    equality is therefore semantic equality.
    """

    support: Tuple[Tuple[Element, Real], ...]

    @classmethod
    def from_weights(
        cls, weights: Union[Mapping[Element, Real], Iterable[Tuple[Element, Real]]]
    ) -> FiniteMeasure:
        items = weights.items() if isinstance(weights, Mapping) else weights
        merged: Dict[Element, Real] = {}
        for element, weight in _normalize_weights(items):
            if element < 0:
                raise DomainMismatch(f"negative element {element}")
            merged[element] = merged.get(element, 0) + weight
        return cls(
            support=tuple(
                (element, merged[element])
                for element in sorted(merged)
                if merged[element]
            )
        )

    @classmethod
    def point_mass(
        cls, element: Element, mode: ArithmeticMode = ArithmeticMode.EXACT
    ) -> FiniteMeasure:
        one = QQ.one if mode is ArithmeticMode.EXACT else 1.0
        return cls(support=((element, one),))

    @property
    def elements(self) -> List[Element]:
        return [element for element, _ in self.support]

    def weight(self, element: Element) -> Real:
        for e, w in self.support:
            if e == element:
                return w
        return self._zero()

    def total(self) -> Real:
        return sum((w for _, w in self.support), self._zero())

    def _zero(self) -> Real:
        return QQ.zero if self.mode is ArithmeticMode.EXACT else 0.0

    @property
    def mode(self) -> ArithmeticMode:
        return mode_of(w for _, w in self.support)

    def integrate(self, values: Sequence[Scalar]) -> Tuple[Scalar, float]:
        """
        Returns the integral of `values` against the measure and the scale
        sum w*|value| used for tolerant comparisons (zero for exact values).
        """
        terms = [(weight, values[element]) for element, weight in self.support]
        mode = mode_of(itertools.chain.from_iterable(terms))
        total: Any = lift(0, mode)
        scale = 0.0
        for weight, value in terms:
            if mode is ArithmeticMode.EXACT:
                total = total + lift(weight, mode) * value
            else:
                value = to_float(value)
                total = total + float(weight) * value
                scale += abs(float(weight)) * abs(value)
        if mode is ArithmeticMode.FLOAT:
            total = complex(total)
        return total, scale


@dataclass(frozen=True)
class Hypergroup:
    """
    Truncated convolution table. `rows` is keyed by the pair as stored; a pair
    stored only once serves both orders.
    """

    nmax: int
    identity: Element
    rows: Mapping[Pair, FiniteMeasure]
    provenance: str = ""
    recurrence: Optional["Recurrence"] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.nmax < 0:
            raise DomainMismatch(f"nmax must be nonnegative, got {self.nmax}")
        if not 0 <= self.identity <= self.nmax:
            raise DomainMismatch(f"identity {self.identity} outside 0..{self.nmax}")
        for (x, y), measure in self.rows.items():
            for element in (x, y, *measure.elements):
                if not 0 <= element <= self.nmax:
                    raise DomainMismatch(
                        f"row ({x}, {y}) mentions element {element} outside 0..{self.nmax}"
                    )
        for x in range(self.nmax + 1):
            if not self.is_tabulated(x, self.identity):
                raise MissingIdentityRow(element=x)

    @classmethod
    def from_measure_rows(
        cls,
        nmax: int,
        identity: Element,
        rows: Iterable[Tuple[Element, Element, FiniteMeasure]],
        provenance: str = "",
        recurrence: Optional["Recurrence"] = None,
    ) -> Hypergroup:
        return cls(
            nmax=nmax,
            identity=identity,
            rows={(x, y): measure for x, y, measure in rows},
            provenance=provenance,
            recurrence=recurrence,
        )

    def is_tabulated(self, x: Element, y: Element) -> bool:
        return (x, y) in self.rows or (y, x) in self.rows

    def row(self, x: Element, y: Element) -> FiniteMeasure:
        measure = self.rows.get((x, y))
        if measure is None:
            measure = self.rows.get((y, x))
        if measure is None:
            raise UntabulatedPair(x=x, y=y)
        return measure

    def pairs(self) -> Iterator[Pair]:
        """every tabulated unordered pair once, as (min, max), ascending"""
        seen = sorted({(min(x, y), max(x, y)) for x, y in self.rows})
        return iter(seen)

    @property
    def elements(self) -> range:
        return range(self.nmax + 1)

    @property
    def mode(self) -> ArithmeticMode:
        return mode_of(
            w for measure in self.rows.values() for _, w in measure.support
        )


def cyclic_group(order: int) -> Hypergroup:
    """the group Z_order, every convolution a point mass"""
    if order < 1:
        raise DomainMismatch(f"group order must be positive, got {order}")
    rows = {
        (x, y): FiniteMeasure.point_mass((x + y) % order)
        for x in range(order)
        for y in range(x, order)
    }
    return Hypergroup(
        nmax=order - 1, identity=0, rows=rows, provenance=f"cyclic group Z_{order}"
    )


class HFunction(ABC):
    """A complex-valued function on the ground set {0, ..., nmax}."""

    label: str

    @abstractmethod
    def values(self, nmax: int) -> List[Scalar]:
        """the values at 0..nmax"""

    def __call__(self, n: Element) -> Scalar:
        return self.values(n)[n]


@dataclass(frozen=True)
class ValueTable(HFunction):
    table: Tuple[Scalar, ...]
    label: str = "table"

    def values(self, nmax: int) -> List[Scalar]:
        if len(self.table) <= nmax:
            raise DomainMismatch(
                f"{self.label}: {len(self.table)} values do not cover 0..{nmax}"
            )
        return list(self.table[: nmax + 1])

    @classmethod
    def from_values(cls, values: Iterable[Scalar], label: str = "table") -> ValueTable:
        return cls(table=tuple(values), label=label)


@dataclass(frozen=True, eq=False)
class ParametricFamily(HFunction):
    """
    A named family evaluated through `sequence(nmax)`, which returns the
    values at 0..nmax. Computed prefixes are memoized, so repeated evaluation
    returns identical objects.
    """

    family: str
    params: Mapping[str, Any]
    sequence: Callable[[int], List[Scalar]]
    label: str = ""
    _cache: List[Scalar] = field(default_factory=list, repr=False)

    def values(self, nmax: int) -> List[Scalar]:
        if len(self._cache) > nmax:
            return list(self._cache[: nmax + 1])
        computed = self.sequence(nmax)
        if len(computed) <= nmax:
            raise DomainMismatch(
                f"{self.label}: {len(computed)} values do not cover 0..{nmax}"
            )
        # the cache only ever grows
        if len(computed) > len(self._cache):
            self._cache[:] = computed
        return list(computed[: nmax + 1])


def constant(value: Scalar, label: str = "") -> ParametricFamily:
    return ParametricFamily(
        family="constant",
        params={"const": value},
        sequence=lambda nmax: [value] * (nmax + 1),
        label=label or f"constant {value}",
    )


def tabulate(H: Hypergroup, f: HFunction, mode: Optional[ArithmeticMode] = None) -> List[Scalar]:
    """values of f on the domain of H, coerced to `mode` (default: the mode of H and f)"""
    values = f.values(H.nmax)
    if mode is None:
        mode = (
            ArithmeticMode.EXACT
            if H.mode is ArithmeticMode.EXACT and mode_of(values) is ArithmeticMode.EXACT
            else ArithmeticMode.FLOAT
        )
    return coerce(values, mode, label=getattr(f, "label", ""))


def convolve(H: Hypergroup, x: Element, y: Element) -> FiniteMeasure:
    return H.row(x, y)


def translate_values(
    H: Hypergroup, values: Sequence[Scalar], x: Element, y: Element
) -> Tuple[Scalar, float]:
    """f(x*y) for pre-tabulated values, with the comparison scale"""
    return convolve(H, x, y).integrate(values)


def translate(H: Hypergroup, f: HFunction, x: Element, y: Element) -> Scalar:
    value, _ = translate_values(H, tabulate(H, f), x, y)
    return value


def _can_convolve(H: Hypergroup, mu: FiniteMeasure, nu: FiniteMeasure) -> bool:
    return all(H.is_tabulated(u, v) for u in mu.elements for v in nu.elements)


def convolve_measures(
    H: Hypergroup, mu: FiniteMeasure, nu: FiniteMeasure
) -> FiniteMeasure:
    terms: List[Tuple[Element, Real]] = []
    for u, mu_weight in mu.support:
        for v, nu_weight in nu.support:
            for z, weight in convolve(H, u, v).support:
                factors = (mu_weight, nu_weight, weight)
                if all(is_exact(f) for f in factors):
                    terms.append((z, mu_weight * nu_weight * weight))
                else:
                    terms.append((z, math.prod(float(f) for f in factors)))
    return FiniteMeasure.from_weights(terms)


class AxiomWitness(BaseModel):
    elements: List[int]
    value: str


class AxiomCheck(BaseModel):
    passed: bool = Field(True, alias="pass")
    failures: int = 0
    witnesses: List[AxiomWitness] = []

    class Config:
        allow_population_by_field_name = True

    def fail(self, elements: Sequence[int], value: Any, limit: int) -> None:
        self.passed = False
        self.failures += 1
        if len(self.witnesses) < limit:
            self.witnesses.append(AxiomWitness(elements=list(elements), value=str(value)))


class AxiomReport(BaseModel):
    depth: int
    mode: ArithmeticMode
    tolerance: float
    nonnegativity: AxiomCheck = AxiomCheck()
    normalization: AxiomCheck = AxiomCheck()
    identity: AxiomCheck = AxiomCheck()
    commutativity: AxiomCheck = AxiomCheck()
    associativity: AxiomCheck = AxiomCheck()
    associativity_triples: int = 0

    @property
    def passed(self) -> bool:
        return all(
            check.passed
            for check in (
                self.nonnegativity,
                self.normalization,
                self.identity,
                self.commutativity,
                self.associativity,
            )
        )


def _measures_agree(
    a: FiniteMeasure, b: FiniteMeasure, mode: ArithmeticMode, tol: float
) -> bool:
    if mode is ArithmeticMode.EXACT:
        return a == b
    elements = set(a.elements) | set(b.elements)
    return all(abs(float(a.weight(e)) - float(b.weight(e))) <= tol for e in elements)


def check_axioms(
    H: Hypergroup,
    depth: int,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
    witness_limit: int = 20,
) -> AxiomReport:
    if depth > H.nmax:
        raise DomainMismatch(f"depth {depth} exceeds nmax {H.nmax}")
    mode = H.mode
    # exact weights never meet a float
    tol: Real = 0 if mode is ArithmeticMode.EXACT else tolerances.rtol
    report = AxiomReport(depth=depth, mode=mode, tolerance=tol)
    log = logger.bind(depth=depth, nmax=H.nmax, mode=mode.value, provenance=H.provenance)

    rows = sorted(
        (key, measure)
        for key, measure in H.rows.items()
        if key[0] <= depth and key[1] <= depth
    )
    for (x, y), measure in rows:
        for element, weight in measure.support:
            if weight < -tol:
                report.nonnegativity.fail((x, y, element), weight, witness_limit)
        total = measure.total()
        if abs(total - 1) > tol:
            report.normalization.fail((x, y), total, witness_limit)
        if y != x and (y, x) in H.rows and not _measures_agree(
            measure, H.rows[(y, x)], mode, tol
        ):
            report.commutativity.fail((x, y), H.rows[(y, x)].support, witness_limit)

    identity_mass = {x: FiniteMeasure.point_mass(x, mode) for x in range(depth + 1)}
    for x in range(depth + 1):
        measure = H.row(x, H.identity)
        if not _measures_agree(measure, identity_mass[x], mode, tol):
            report.identity.fail((x,), measure.support, witness_limit)

    for x, y, z in itertools.product(range(depth + 1), repeat=3):
        if not (H.is_tabulated(x, y) and H.is_tabulated(y, z)):
            continue
        xy, yz = H.row(x, y), H.row(y, z)
        if not (
            _can_convolve(H, xy, identity_mass[z])
            and _can_convolve(H, identity_mass[x], yz)
        ):
            continue
        report.associativity_triples += 1
        left = convolve_measures(H, xy, identity_mass[z])
        right = convolve_measures(H, identity_mass[x], yz)
        if not _measures_agree(left, right, mode, tol):
            report.associativity.fail((x, y, z), (left.support, right.support), witness_limit)

    log.info(
        "checked hypergroup axioms",
        passed=report.passed,
        triples=report.associativity_triples,
    )
    return report
