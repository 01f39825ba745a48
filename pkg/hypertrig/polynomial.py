"""
Polynomial hypergroups generated by three-term recurrences

    x * P_n = a_n * P_{n+1} + b_n * P_n + c_n * P_{n-1},   P_0 = 1,

normalized so that P_n(x0) = 1. The convolution of n and m is the measure
whose weights are the linearization coefficients of P_n * P_m.

Additive functions are evaluated as n -> const * P_n'(x0). The usual
statement "n -> c P_n'(0)" assumes a normalization at 0; with P_n(x0) = 1,
additivity under the table forces the derivative to be taken at x0.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import structlog
from sympy.polys.domains import QQ

from hypertrig.config import DEFAULT_TOLERANCES, Tolerances
from hypertrig.errors import (
    DegenerateFit,
    InternalInconsistency,
    InvalidRecurrence,
    NotAHypergroup,
    PreconditionFailed,
    RecurrenceTooShort,
)
from hypertrig.hypergroup import FiniteMeasure, Hypergroup, ParametricFamily
from hypertrig.scalars import (
    ArithmeticMode,
    Real,
    Scalar,
    abs2,
    conjugate,
    is_rational,
    is_zero,
    lift,
    mode_of,
    modulus,
    parse_rational,
    relative_deviation,
    to_float,
    to_mode,
)

logger = structlog.get_logger()

# recurrence coefficients live in the rational field
K = QQ

Rational = Any
CoefficientTriple = Tuple[Rational, Rational, Rational]


def _coefficient(value: Any, n: int) -> Rational:
    if is_rational(value):
        return K.convert(value)
    if isinstance(value, Fraction):
        return K(value.numerator, value.denominator)
    if isinstance(value, str):
        try:
            return parse_rational(value)
        except ValueError:
            pass
    raise InvalidRecurrence(n=n, detail=f"coefficient {value!r} is not rational")


@dataclass(frozen=True, eq=False)
class Recurrence:
    name: str
    x0: Rational
    generator: Callable[[int], CoefficientTriple]
    kind: str = "explicit"
    params: Mapping[str, Any] = field(default_factory=dict)
    _checked: Dict[int, CoefficientTriple] = field(default_factory=dict, repr=False)

    def coefficients(self, n: int) -> CoefficientTriple:
        """(a_n, b_n, c_n), checked against the recurrence invariants"""
        cached = self._checked.get(n)
        if cached is not None:
            return cached
        a, b, c = (_coefficient(v, n) for v in self.generator(n))
        if a == 0:
            raise InvalidRecurrence(n=n, detail="a_n must be nonzero")
        if n == 0 and c != 0:
            raise InvalidRecurrence(n=n, detail="c_0 must be zero")
        if a + b + c != self.x0:
            raise InvalidRecurrence(
                n=n, detail=f"a_n + b_n + c_n = {a + b + c}, expected x0 = {self.x0}"
            )
        self._checked[n] = (a, b, c)
        return a, b, c


def chebyshev() -> Recurrence:
    def generator(n: int) -> CoefficientTriple:
        if n == 0:
            return K.one, K.zero, K.zero
        return K(1, 2), K.zero, K(1, 2)

    return Recurrence(name="chebyshev", x0=K.one, generator=generator, kind="chebyshev")


def cartier(q: int) -> Recurrence:
    """the radial hypergroup of the homogeneous tree of degree q + 1"""
    if not isinstance(q, int) or q < 1:
        raise InvalidRecurrence(n=0, detail=f"cartier parameter q must be an integer >= 1, got {q!r}")

    def generator(n: int) -> CoefficientTriple:
        if n == 0:
            return K.one, K.zero, K.zero
        return K(q, q + 1), K.zero, K(1, q + 1)

    return Recurrence(
        name=f"cartier q={q}",
        x0=K.one,
        generator=generator,
        kind="cartier",
        params={"q": q},
    )


def explicit(name: str, x0: Rational, coeffs: Sequence[CoefficientTriple]) -> Recurrence:
    listed = tuple(
        tuple(_coefficient(v, n) for v in triple) for n, triple in enumerate(coeffs)
    )

    def generator(n: int) -> CoefficientTriple:
        if n >= len(listed):
            raise RecurrenceTooShort(n=n, available=len(listed))
        a, b, c = listed[n]
        return a, b, c

    return Recurrence(
        name=name,
        x0=_coefficient(x0, 0),
        generator=generator,
        kind="explicit",
        params={"coeffs": listed},
    )


PRESETS: Mapping[str, Callable[..., Recurrence]] = {
    "chebyshev": chebyshev,
    "cartier": cartier,
}


Product = Dict[int, Rational]


@dataclass(frozen=True)
class LinearizationTable:
    """
    c(n, m, k) with P_n * P_m = sum_k c(n, m, k) P_k for n + m <= nmax.
    Products are stored once per unordered pair, keyed (min, max).
    """

    recurrence: Recurrence
    nmax: int
    products: Mapping[Tuple[int, int], Mapping[int, Rational]]

    def row(self, n: int, m: int) -> Mapping[int, Rational]:
        return self.products[(min(n, m), max(n, m))]

    def coefficient(self, n: int, m: int, k: int) -> Rational:
        return self.row(n, m).get(k, K.zero)


def _times_x(R: Recurrence, product: Mapping[int, Rational]) -> Product:
    """x * sum_k s_k P_k, re-expanded in the P basis"""
    result: Product = {}
    for k, s in product.items():
        a, b, c = R.coefficients(k)
        result[k + 1] = result.get(k + 1, K.zero) + s * a
        result[k] = result.get(k, K.zero) + s * b
        if k >= 1:
            result[k - 1] = result.get(k - 1, K.zero) + s * c
    return result


def _check_product(n: int, m: int, product: Mapping[int, Rational]) -> None:
    for k in sorted(product):
        value = product[k]
        if value < 0:
            raise NotAHypergroup(n=n, m=m, k=k, value=value)
        if not abs(n - m) <= k <= n + m:
            raise InternalInconsistency(
                f"c({n},{m},{k}) = {value} lies outside |n-m| <= k <= n+m"
            )
    total = sum(product.values(), K.zero)
    if total != K.one:
        raise InternalInconsistency(f"coefficients of P_{n} * P_{m} sum to {total}")


def linearization_table(R: Recurrence, nmax: int) -> LinearizationTable:
    """
    Exact dynamic programming over the first index:

        P_{n+1} P_m = (x (P_n P_m) - b_n P_n P_m - c_n P_{n-1} P_m) / a_n

    computed for m <= n with n + m <= nmax, using c(n, m, k) = c(m, n, k).
    """
    if nmax < 0:
        raise PreconditionFailed(check=f"nmax must be nonnegative, got {nmax}")
    log = logger.bind(recurrence=R.name, nmax=nmax)
    products: Dict[Tuple[int, int], Dict[int, Rational]] = {}

    def lookup(j: int, m: int) -> Mapping[int, Rational]:
        return products[(min(j, m), max(j, m))]

    for n in range(nmax + 1):
        products[(0, n)] = {n: K.one}
    for m in range(1, nmax // 2 + 1):
        for n in range(m, nmax - m + 1):
            a, b, c = R.coefficients(n - 1)
            previous = lookup(n - 1, m)
            step = _times_x(R, previous)
            for k, s in previous.items():
                step[k] = step[k] - b * s
            if n >= 2 and c:
                for k, s in lookup(n - 2, m).items():
                    step[k] = step.get(k, K.zero) - c * s
            product = {k: s / a for k, s in sorted(step.items()) if s}
            _check_product(m, n, product)
            products[(m, n)] = product
        log.debug("linearization row done", m=m)
    log.info("built linearization table", pairs=len(products))
    return LinearizationTable(recurrence=R, nmax=nmax, products=products)


def to_hypergroup(T: LinearizationTable) -> Hypergroup:
    rows = {
        pair: FiniteMeasure.from_weights(product) for pair, product in T.products.items()
    }
    return Hypergroup(
        nmax=T.nmax,
        identity=0,
        rows=rows,
        provenance=f"polynomial hypergroup {T.recurrence.name}",
        recurrence=T.recurrence,
    )


def polynomial_hypergroup(R: Recurrence, nmax: int) -> Hypergroup:
    return to_hypergroup(linearization_table(R, nmax))


def _as_point(z: Any) -> Scalar:
    return to_mode(z, mode_of([z]))


def _lifted(R: Recurrence, k: int, mode: ArithmeticMode) -> Tuple[Scalar, Scalar, Scalar]:
    a, b, c = R.coefficients(k)
    return lift(a, mode), lift(b, mode), lift(c, mode)


def poly_values(R: Recurrence, nmax: int, z: Any) -> List[Scalar]:
    """[P_0(z), ..., P_nmax(z)] by the forward recurrence"""
    z = _as_point(z)
    mode = mode_of([z])
    values: List[Any] = [to_mode(1, mode)]
    previous: Any = to_mode(0, mode)
    for k in range(nmax):
        a, b, c = _lifted(R, k, mode)
        values.append(((z - b) * values[k] - c * previous) / a)
        previous = values[k]
    return values


def poly_derivative_values(R: Recurrence, nmax: int, z: Any) -> List[Scalar]:
    """[P_0'(z), ..., P_nmax'(z)] by propagating (P_k, P_k') together"""
    z = _as_point(z)
    mode = mode_of([z])
    zero = to_mode(0, mode)
    p_prev: Any = zero
    p_cur: Any = to_mode(1, mode)
    d_prev: Any = zero
    derivatives: List[Any] = [zero]
    for k in range(nmax):
        a, b, c = _lifted(R, k, mode)
        p_next = ((z - b) * p_cur - c * p_prev) / a
        d_next = (p_cur + (z - b) * derivatives[k] - c * d_prev) / a
        derivatives.append(d_next)
        p_prev, p_cur = p_cur, p_next
        d_prev = derivatives[k]
    return derivatives


def eval_poly(R: Recurrence, n: int, z: Any) -> Scalar:
    return poly_values(R, n, z)[n]


def eval_poly_derivative(R: Recurrence, n: int, z: Any) -> Scalar:
    return poly_derivative_values(R, n, z)[n]


def exponential_fn(R: Recurrence, lam: Any) -> ParametricFamily:
    lam = _as_point(lam)
    return ParametricFamily(
        family="exponential",
        params={"lambda": lam, "recurrence": R.name},
        sequence=lambda nmax: poly_values(R, nmax, lam),
        label=f"exponential {R.name} lambda={lam}",
    )


def additive_fn(R: Recurrence, const: Any) -> ParametricFamily:
    const = _as_point(const)
    x0 = to_mode(R.x0, mode_of([const]))
    return ParametricFamily(
        family="additive",
        params={"const": const, "recurrence": R.name},
        sequence=lambda nmax: [
            const * d for d in poly_derivative_values(R, nmax, x0)
        ],
        label=f"additive {R.name} const={const}",
    )


def sine_fn(R: Recurrence, lam: Any) -> ParametricFamily:
    lam = _as_point(lam)
    return ParametricFamily(
        family="sine",
        params={"lambda": lam, "recurrence": R.name},
        sequence=lambda nmax: poly_derivative_values(R, nmax, lam),
        label=f"sine {R.name} lambda={lam}",
    )


def fit_exponential_parameter(
    R: Recurrence,
    values: Sequence[Scalar],
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> Optional[complex]:
    """
    lambda with values[n] = P_n(lambda) on the whole sequence, read off at
    n = 1 through P_1(z) = (z - b_0) / a_0; None when the fit does not hold.
    """
    if len(values) < 2:
        return None
    a0, b0, _ = R.coefficients(0)
    lam = to_float(values[1]) * float(a0) + float(b0)
    fitted = poly_values(R, len(values) - 1, lam)
    worst = max(relative_deviation(v, w) for v, w in zip(values, fitted))
    if worst > tolerances.reconstruction:
        return None
    return lam


@dataclass(frozen=True)
class CounterexampleReport:
    recurrence: str
    lam: Scalar
    nmax: int
    fit: str
    const: Scalar
    deviations: List[Tuple[int, Real]]
    max_deviation: Real
    argmax: int
    mode: ArithmeticMode
    # largest |P_n'(lambda)| over n >= 2, the float comparison scale
    scale: float = 0.0

    def demonstrated(self, tolerances: Tolerances = DEFAULT_TOLERANCES) -> bool:
        """the sine function is shown not to be of the product form"""
        if self.mode is ArithmeticMode.EXACT:
            return self.max_deviation > 0
        threshold = 10 * (tolerances.atol + tolerances.rtol * self.scale)
        return float(self.max_deviation) > threshold


def counterexample_report(R: Recurrence, lam: Any, nmax: int) -> CounterexampleReport:
    """
    Fits n -> const * P_n'(x0) * P_n(lambda) to the sine function
    n -> P_n'(lambda) and reports how far the fit is off. A positive maximum
    deviation shows the sine function is not of that product form.
    """
    lam = _as_point(lam)
    mode = mode_of([lam])
    if lam == to_mode(R.x0, mode):
        raise PreconditionFailed(check="lambda must differ from x0")
    if nmax < 3:
        raise PreconditionFailed(check=f"nmax must be at least 3, got {nmax}")
    log = logger.bind(recurrence=R.name, lam=str(lam), nmax=nmax)

    sine = poly_derivative_values(R, nmax, lam)
    exponential = poly_values(R, nmax, lam)
    additive = poly_derivative_values(R, nmax, to_mode(R.x0, mode))
    basis = [additive[n] * exponential[n] for n in range(nmax + 1)]

    fit = "n=1"
    if not is_zero(basis[1]):
        const: Any = sine[1] / basis[1]
    else:
        log.warning("degenerate fit at n=1, falling back to least squares")
        fit = "least_squares"
        denominator: Any = sum(abs2(basis[n]) for n in range(1, 4))
        if not denominator:
            raise DegenerateFit("P_n'(x0) P_n(lambda) vanishes for 1 <= n <= 3")
        numerator: Any = sum(
            (conjugate(basis[n]) * sine[n] for n in range(1, 4)), to_mode(0, mode)
        )
        const = numerator / lift(denominator, mode)

    residuals = [sine[n] - const * basis[n] for n in range(nmax + 1)]
    deviations = [(n, modulus(residuals[n])) for n in range(1, nmax + 1)]
    # rank by the exact squared modulus, moduli of exact values may be irrational
    argmax = max(range(2, nmax + 1), key=lambda n: abs2(residuals[n]))
    max_deviation = modulus(residuals[argmax])
    log.info("counterexample deviation", max_deviation=str(max_deviation), argmax=argmax)
    return CounterexampleReport(
        recurrence=R.name,
        lam=lam,
        nmax=nmax,
        fit=fit,
        const=const,
        deviations=deviations,
        max_deviation=max_deviation,
        argmax=argmax,
        mode=mode,
        scale=max(abs(to_float(sine[n])) for n in range(2, nmax + 1)),
    )
