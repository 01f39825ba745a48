"""
Solutions of the sine-cosine equation

    f(x*y) = f(x) g(y) + f(y) g(x)

and of the cosine-sine equation

    g(x*y) = g(x) g(y) - f(x) f(y)

on a discrete commutative hypergroup: residual scans, builders for every
solution family, and classifiers that run the constructive proofs (Cauchy
difference decompositions) on a given pair.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, List, Mapping, Optional, Sequence, Tuple

import structlog

from hypertrig.config import DEFAULT_TOLERANCES, Tolerances
from hypertrig.errors import (
    DegenerateEqual,
    DegenerateLambda,
    InternalInconsistency,
    LambdaInconsistent,
    NotASolutionForThisC,
    PreconditionFailed,
)
from hypertrig.hypergroup import (
    Element,
    HFunction,
    Hypergroup,
    Pair,
    ValueTable,
    convolve,
    translate_values,
)
from hypertrig.polynomial import fit_exponential_parameter
from hypertrig.scalars import (
    I,
    ArithmeticMode,
    Real,
    Scalar,
    abs2,
    coerce,
    gaussian,
    is_exact,
    is_zero,
    lift,
    mode_of,
    modulus,
    rational,
    principal_sqrt,
    relative_deviation,
    sqrt,
    to_float,
    to_mode,
    within_tolerance,
)

logger = structlog.get_logger()


class Equation(str, Enum):
    SINE_COSINE = "sine_cosine"
    COSINE_SINE = "cosine_sine"


class CaseTag(str, Enum):
    # g exponential, f an M-sine function
    T1_I = "T1_I"
    # f = M/(2c), g = M/2
    T1_II = "T1_II"
    # f = (M - N)/(2c), g = (M + N)/2
    T1_III = "T1_III"
    # f = cM/(1 - c^2), g = M/(1 - c^2)
    T2_I = "T2_I"
    # f = M/(2c), g = M/2 with c^2 = -1; never produced by the classifier
    T2_II = "T2_II"
    # f an M-sine function, g = M +- f
    T2_III = "T2_III"
    # the lambda, d family built from two exponentials
    T2_IV = "T2_IV"
    NOT_A_SOLUTION = "NOT_A_SOLUTION"


@dataclass(frozen=True)
class SolutionPair:
    f: HFunction
    g: HFunction
    hypergroup: Hypergroup
    equation: Equation
    case: CaseTag
    params: Mapping[str, Any] = field(default_factory=dict)
    notes: Tuple[str, ...] = ()


@dataclass(frozen=True)
class ResidualScan:
    """
    `value` is the largest residual over the tabulated pairs. In exact mode it
    is the exact modulus |LHS - RHS|. In float mode it is scale-normalized,
    |LHS - RHS| / max(1, scale) with scale the largest magnitude entering the
    pair, so a passing scan has value <= atol + rtol. `absolute` is the
    largest unnormalized |LHS - RHS|.
    """

    value: Real
    worst_pair: Optional[Pair]
    passed: bool
    mode: ArithmeticMode
    pairs: int
    absolute: Real = 0


@dataclass
class ClassificationResult:
    case: CaseTag
    residual_input: Real
    residual_reconstruction: Optional[float] = None
    c: Optional[Scalar] = None
    lam: Optional[Scalar] = None
    d: Optional[Scalar] = None
    sign: Optional[int] = None
    M: Optional[ValueTable] = None
    N: Optional[ValueTable] = None
    M_lambda: Optional[complex] = None
    N_lambda: Optional[complex] = None
    notes: List[str] = field(default_factory=list)


Values = List[Scalar]


def _common_mode(H: Hypergroup, value_lists: Sequence[Sequence[Any]], params: Sequence[Any] = ()) -> ArithmeticMode:
    if H.mode is not ArithmeticMode.EXACT:
        return ArithmeticMode.FLOAT
    for values in value_lists:
        if mode_of(values) is not ArithmeticMode.EXACT:
            return ArithmeticMode.FLOAT
    return mode_of(params)


def _tabulate(H: Hypergroup, *functions: HFunction, params: Sequence[Any] = ()) -> Tuple[ArithmeticMode, List[Values], List[Scalar]]:
    raw = [f.values(H.nmax) for f in functions]
    mode = _common_mode(H, raw, params)
    return (
        mode,
        [coerce(values, mode, label=f.label) for values, f in zip(raw, functions)],
        [to_mode(p, mode) for p in params],
    )


def _is_zero_function(values: Sequence[Scalar], tolerances: Tolerances) -> bool:
    if all(is_exact(v) for v in values):
        return all(not v for v in values)
    return max(abs(to_float(v)) for v in values) <= tolerances.atol


def _scan(
    H: Hypergroup,
    lhs_values: Sequence[Scalar],
    rhs_terms: Callable[[Element, Element], Sequence[Scalar]],
    tolerances: Tolerances,
) -> ResidualScan:
    mode = mode_of(lhs_values)
    worst_key: Any = -1
    worst_diff: Optional[Scalar] = None
    worst_pair: Optional[Pair] = None
    worst_absolute = 0.0
    passed = True
    count = 0
    for x, y in H.pairs():
        count += 1
        lhs, scale = translate_values(H, lhs_values, x, y)
        terms = rhs_terms(x, y)
        diff = lhs
        for term in terms:
            diff = diff - term
        if mode is ArithmeticMode.FLOAT:
            scale = max([scale] + [abs(to_float(t)) for t in terms])
        if not within_tolerance(diff, scale, atol=tolerances.atol, rtol=tolerances.rtol):
            passed = False
        if mode is ArithmeticMode.EXACT:
            key: Any = abs2(diff)
        else:
            diff = to_float(diff)
            worst_absolute = max(worst_absolute, abs(diff))
            key = abs(diff) / max(1.0, scale)
        if key > worst_key:
            worst_key, worst_diff, worst_pair = key, diff, (x, y)
    if mode is ArithmeticMode.EXACT:
        value: Real = rational(0) if worst_diff is None else modulus(worst_diff)
        absolute: Real = value
    else:
        value = max(worst_key, 0.0)
        absolute = worst_absolute
    return ResidualScan(
        value=value,
        worst_pair=worst_pair,
        passed=passed,
        mode=mode,
        pairs=count,
        absolute=absolute,
    )


def _sine_scan(H: Hypergroup, f: Values, g: Values, tolerances: Tolerances) -> ResidualScan:
    return _scan(H, f, lambda x, y: (f[x] * g[y], f[y] * g[x]), tolerances)


def _cosine_scan(H: Hypergroup, f: Values, g: Values, tolerances: Tolerances) -> ResidualScan:
    return _scan(H, g, lambda x, y: (g[x] * g[y], -(f[x] * f[y])), tolerances)


def _exponential_scan(H: Hypergroup, g: Values, tolerances: Tolerances) -> ResidualScan:
    return _scan(H, g, lambda x, y: (g[x] * g[y],), tolerances)


def _m_sine_scan(H: Hypergroup, f: Values, m: Values, tolerances: Tolerances) -> ResidualScan:
    return _scan(H, f, lambda x, y: (f[x] * m[y], f[y] * m[x]), tolerances)


def scan_sine(H: Hypergroup, f: HFunction, g: HFunction, tolerances: Tolerances = DEFAULT_TOLERANCES) -> ResidualScan:
    _, (f_values, g_values), _ = _tabulate(H, f, g)
    return _sine_scan(H, f_values, g_values, tolerances)


def scan_cosine(H: Hypergroup, f: HFunction, g: HFunction, tolerances: Tolerances = DEFAULT_TOLERANCES) -> ResidualScan:
    _, (f_values, g_values), _ = _tabulate(H, f, g)
    return _cosine_scan(H, f_values, g_values, tolerances)


def scan_exponential(H: Hypergroup, g: HFunction, tolerances: Tolerances = DEFAULT_TOLERANCES) -> ResidualScan:
    _, (g_values,), _ = _tabulate(H, g)
    return _exponential_scan(H, g_values, tolerances)


def scan_m_sine(H: Hypergroup, f: HFunction, m: HFunction, tolerances: Tolerances = DEFAULT_TOLERANCES) -> ResidualScan:
    _, (f_values, m_values), _ = _tabulate(H, f, m)
    return _m_sine_scan(H, f_values, m_values, tolerances)


def scan_additive(H: Hypergroup, f: HFunction, tolerances: Tolerances = DEFAULT_TOLERANCES) -> ResidualScan:
    _, (f_values,), _ = _tabulate(H, f)
    return _scan(H, f_values, lambda x, y: (f_values[x], f_values[y]), tolerances)


def residual_sine(H: Hypergroup, f: HFunction, g: HFunction) -> Real:
    return scan_sine(H, f, g).value


def residual_cosine(H: Hypergroup, f: HFunction, g: HFunction) -> Real:
    return scan_cosine(H, f, g).value


def _exponential_check(H: Hypergroup, g: Values, tolerances: Tolerances) -> Tuple[bool, Real]:
    scan = _exponential_scan(H, g, tolerances)
    return scan.passed and not _is_zero_function(g, tolerances), scan.value


def _m_sine_check(H: Hypergroup, f: Values, m: Values, tolerances: Tolerances) -> Tuple[bool, Real]:
    scan = _m_sine_scan(H, f, m, tolerances)
    at_identity = f[H.identity]
    if is_exact(at_identity):
        vanishes = not at_identity
    else:
        scale = max(abs(to_float(v)) for v in f)
        vanishes = abs(to_float(at_identity)) <= tolerances.atol + tolerances.rtol * scale
    return scan.passed and vanishes, scan.value


def is_exponential(H: Hypergroup, g: HFunction, tolerances: Tolerances = DEFAULT_TOLERANCES) -> Tuple[bool, Real]:
    _, (g_values,), _ = _tabulate(H, g)
    return _exponential_check(H, g_values, tolerances)


def is_m_sine(H: Hypergroup, f: HFunction, m: HFunction, tolerances: Tolerances = DEFAULT_TOLERANCES) -> Tuple[bool, Real]:
    """f(x*y) = f(x) m(y) + f(y) m(x) on every tabulated pair, and f(o) = 0"""
    _, (f_values, m_values), _ = _tabulate(H, f, m)
    return _m_sine_check(H, f_values, m_values, tolerances)


def is_additive(H: Hypergroup, f: HFunction, tolerances: Tolerances = DEFAULT_TOLERANCES) -> Tuple[bool, Real]:
    scan = scan_additive(H, f, tolerances)
    return scan.passed, scan.value


def _require_exponential(H: Hypergroup, name: str, values: Values, tolerances: Tolerances) -> None:
    ok, residual = _exponential_check(H, values, tolerances)
    if not ok:
        raise PreconditionFailed(check=f"{name} is not an exponential", residual=residual)


def _require_nonzero(name: str, values: Values, tolerances: Tolerances) -> None:
    if _is_zero_function(values, tolerances):
        raise PreconditionFailed(check=f"{name} is identically zero")


def _require_distinct(M: Values, N: Values, tolerances: Tolerances) -> None:
    for m, n in zip(M, N):
        diff = m - n
        if is_exact(diff):
            if diff:
                return
        elif abs(diff) > tolerances.atol + tolerances.rtol * max(abs(m), abs(n)):
            return
    raise DegenerateEqual(check="M and N agree on the whole domain")


def _require_nonzero_scalar(name: str, value: Scalar, tolerances: Tolerances) -> None:
    if is_exact(value):
        if not value:
            raise PreconditionFailed(check=f"{name} must be nonzero")
    elif abs(value) <= tolerances.atol:
        raise PreconditionFailed(check=f"{name} must be nonzero")


def _table(values: Sequence[Scalar], label: str) -> ValueTable:
    return ValueTable.from_values(values, label=label)


def build_t1_i(H: Hypergroup, M: HFunction, f: HFunction, tolerances: Tolerances = DEFAULT_TOLERANCES) -> SolutionPair:
    _, (m_values, f_values), _ = _tabulate(H, M, f)
    _require_nonzero("f", f_values, tolerances)
    _require_exponential(H, "M", m_values, tolerances)
    ok, residual = _m_sine_check(H, f_values, m_values, tolerances)
    if not ok:
        raise PreconditionFailed(check="f is not an M-sine function", residual=residual)
    return SolutionPair(f=f, g=M, hypergroup=H, equation=Equation.SINE_COSINE, case=CaseTag.T1_I)


def build_t1_ii(H: Hypergroup, M: HFunction, c: Any, tolerances: Tolerances = DEFAULT_TOLERANCES) -> SolutionPair:
    _, (m_values,), (c,) = _tabulate(H, M, params=(c,))
    _require_nonzero_scalar("c", c, tolerances)
    _require_exponential(H, "M", m_values, tolerances)
    f_values = [m / (2 * c) for m in m_values]
    g_values = [m / 2 for m in m_values]
    return SolutionPair(
        f=_table(f_values, "T1_II f"),
        g=_table(g_values, "T1_II g"),
        hypergroup=H,
        equation=Equation.SINE_COSINE,
        case=CaseTag.T1_II,
        params={"c": c},
    )


def build_t1_iii(H: Hypergroup, M: HFunction, N: HFunction, c: Any, tolerances: Tolerances = DEFAULT_TOLERANCES) -> SolutionPair:
    _, (m_values, n_values), (c,) = _tabulate(H, M, N, params=(c,))
    _require_nonzero_scalar("c", c, tolerances)
    _require_exponential(H, "M", m_values, tolerances)
    _require_exponential(H, "N", n_values, tolerances)
    _require_distinct(m_values, n_values, tolerances)
    f_values = [(m - n) / (2 * c) for m, n in zip(m_values, n_values)]
    g_values = [(m + n) / 2 for m, n in zip(m_values, n_values)]
    return SolutionPair(
        f=_table(f_values, "T1_III f"),
        g=_table(g_values, "T1_III g"),
        hypergroup=H,
        equation=Equation.SINE_COSINE,
        case=CaseTag.T1_III,
        params={"c": c},
        notes=("(M, N, c) and (N, M, -c) give the same pair",),
    )


def build_t2_i(H: Hypergroup, M: HFunction, c: Any, tolerances: Tolerances = DEFAULT_TOLERANCES) -> SolutionPair:
    _, (m_values,), (c,) = _tabulate(H, M, params=(c,))
    _require_nonzero_scalar("c", c, tolerances)
    _require_nonzero_scalar("1 - c^2", 1 - c * c, tolerances)
    _require_exponential(H, "M", m_values, tolerances)
    denominator = 1 - c * c
    return SolutionPair(
        f=_table([c * m / denominator for m in m_values], "T2_I f"),
        g=_table([m / denominator for m in m_values], "T2_I g"),
        hypergroup=H,
        equation=Equation.COSINE_SINE,
        case=CaseTag.T2_I,
        params={"c": c},
    )


def t2_ii_coefficient(c: Scalar) -> Scalar:
    """the factor of M(x)M(y) left over when f = M/(2c), g = M/2 is substituted"""
    quarter = gaussian(rational(1, 4)) if is_exact(c) else 0.25
    return quarter - 1 / (4 * c * c) - 2 * quarter


def build_t2_ii(H: Hypergroup, M: HFunction, c: Any, tolerances: Tolerances = DEFAULT_TOLERANCES) -> SolutionPair:
    """
    Only c = +-i solves the cosine-sine equation with this shape, and then the
    pair coincides with the first cosine family at c' = 1/c.
    """
    _, (m_values,), (c,) = _tabulate(H, M, params=(c,))
    _require_nonzero_scalar("c", c, tolerances)
    coefficient = t2_ii_coefficient(c)
    if is_exact(coefficient):
        admissible = not coefficient
    else:
        admissible = abs(coefficient) <= tolerances.atol + tolerances.rtol
    if not admissible:
        raise NotASolutionForThisC(check="c^2 = -1", residual=modulus(coefficient), c=c, coefficient=coefficient)
    _require_exponential(H, "M", m_values, tolerances)
    return SolutionPair(
        f=_table([m / (2 * c) for m in m_values], "T2_II f"),
        g=_table([m / 2 for m in m_values], "T2_II g"),
        hypergroup=H,
        equation=Equation.COSINE_SINE,
        case=CaseTag.T2_II,
        params={"c": c, "equivalent_t2_i_c": 1 / c},
        notes=("equals the T2_I pair with c' = 1/c",),
    )


def build_t2_iii(H: Hypergroup, M: HFunction, f: HFunction, sign: int, tolerances: Tolerances = DEFAULT_TOLERANCES) -> SolutionPair:
    if sign not in (1, -1):
        raise PreconditionFailed(check=f"sign must be +1 or -1, got {sign!r}")
    _, (m_values, f_values), _ = _tabulate(H, M, f)
    _require_nonzero("f", f_values, tolerances)
    _require_exponential(H, "M", m_values, tolerances)
    ok, residual = _m_sine_check(H, f_values, m_values, tolerances)
    if not ok:
        raise PreconditionFailed(check="f is not an M-sine function", residual=residual)
    return SolutionPair(
        f=_table(f_values, "T2_III f"),
        g=_table([m + sign * v for m, v in zip(m_values, f_values)], "T2_III g"),
        hypergroup=H,
        equation=Equation.COSINE_SINE,
        case=CaseTag.T2_III,
        params={"sign": sign},
    )


@dataclass(frozen=True)
class CaseIvIdentities:
    lam: Scalar
    d: Scalar
    # 1 - d^2 - lambda^2, the coefficient of the cross terms
    cross_term: Scalar
    # ((di - lambda)^2 - 1)/(-4d^2) - (di - lambda)/(2di), the MM coefficient
    mm_coefficient: Scalar

    def hold(self, atol: float = 1e-12) -> bool:
        for residual in (self.cross_term, self.mm_coefficient):
            if is_exact(residual):
                if residual:
                    return False
            elif abs(residual) > atol * max(1.0, abs(to_float(self.lam))) ** 2:
                return False
        return True


def case_iv_identities(lam: Any) -> CaseIvIdentities:
    lam = to_mode(lam, mode_of([lam]))
    one_minus = 1 - lam * lam
    if is_zero(one_minus):
        raise DegenerateLambda(check="lambda^2 = 1")
    d = sqrt(one_minus)
    if not is_exact(d):
        lam = to_float(lam)
    di = d * (I if is_exact(d) else 1j)
    cross_term = 1 - d * d - lam * lam
    mm_coefficient = ((di - lam) * (di - lam) - 1) / (-4 * d * d) - (di - lam) / (2 * di)
    return CaseIvIdentities(lam=lam, d=d, cross_term=cross_term, mm_coefficient=mm_coefficient)


def build_t2_iv(H: Hypergroup, M: HFunction, N: HFunction, lam: Any, sign: int, tolerances: Tolerances = DEFAULT_TOLERANCES) -> SolutionPair:
    if sign not in (1, -1):
        raise PreconditionFailed(check=f"sign must be +1 or -1, got {sign!r}")
    identities = case_iv_identities(lam)
    if not identities.hold():
        raise InternalInconsistency(f"case iv coefficient identities fail for lambda={lam}: {identities}")
    _, (m_values, n_values), (lam, d) = _tabulate(H, M, N, params=(identities.lam, identities.d))
    _require_exponential(H, "M", m_values, tolerances)
    _require_exponential(H, "N", n_values, tolerances)
    _require_distinct(m_values, n_values, tolerances)
    di = d * (I if is_exact(d) else 1j)
    m_coefficient = sign * (sign * di - lam) / (2 * di)
    n_coefficient = sign * (sign * di + lam) / (2 * di)
    return SolutionPair(
        f=_table([sign * (m - n) / (2 * di) for m, n in zip(m_values, n_values)], "T2_IV f"),
        g=_table([m_coefficient * m + n_coefficient * n for m, n in zip(m_values, n_values)], "T2_IV g"),
        hypergroup=H,
        equation=Equation.COSINE_SINE,
        case=CaseTag.T2_IV,
        params={"lambda": lam, "d": d, "sign": sign},
        notes=("(M, N, sign) and (N, M, -sign) give the same pair",),
    )


def cauchy_difference(H: Hypergroup, f: Values, x: Element, y: Element) -> Scalar:
    """F(x, y) = f(x*y) - f(x) - f(y)"""
    translated, _ = translate_values(H, f, x, y)
    return translated - f[x] - f[y]


def _cocycle_triples(H: Hypergroup, depth: int) -> List[Tuple[Element, Element, Element]]:
    triples = []
    for x, y, z in itertools.product(range(depth + 1), repeat=3):
        if not (H.is_tabulated(x, y) and H.is_tabulated(y, z)):
            continue
        if all(H.is_tabulated(u, z) for u in convolve(H, x, y).elements) and all(
            H.is_tabulated(x, v) for v in convolve(H, y, z).elements
        ):
            triples.append((x, y, z))
    return triples


def _integrate_first(H: Hypergroup, x: Element, y: Element, kernel: Callable[[Element], Scalar]) -> Scalar:
    """the integral of u -> kernel(u) against the measure of x*y"""
    total: Any = 0
    for u, weight in convolve(H, x, y).support:
        value = kernel(u)
        total = total + lift(weight, mode_of([value])) * value
    return total


def _max_modulus(values: Sequence[Scalar]) -> Real:
    if not values:
        return rational(0)
    # abs2 stays exact where the modulus may not
    return modulus(max(values, key=abs2))


def cauchy_cocycle_residual(H: Hypergroup, f: HFunction, depth: Optional[int] = None) -> Real:
    """
    max |F(x,y) + F(x*y,z) - F(x,y*z) - F(y,z)|; zero for every f because the
    convolution is associative.
    """
    _, (values,), _ = _tabulate(H, f)
    depth = H.nmax if depth is None else depth
    residuals = []
    for x, y, z in _cocycle_triples(H, depth):
        left = cauchy_difference(H, values, x, y) + _integrate_first(
            H, x, y, lambda u: cauchy_difference(H, values, u, z)
        )
        right = _integrate_first(
            H, y, z, lambda v: cauchy_difference(H, values, x, v)
        ) + cauchy_difference(H, values, y, z)
        residuals.append(left - right)
    return _max_modulus(residuals)


def modified_cauchy_difference(H: Hypergroup, g: Values, x: Element, y: Element) -> Scalar:
    """G(x, y) = g(x*y) - g(x) g(y)"""
    translated, _ = translate_values(H, g, x, y)
    return translated - g[x] * g[y]


def modified_cauchy_cocycle_residual(H: Hypergroup, g: HFunction, depth: Optional[int] = None) -> Real:
    """max |g(z)G(x,y) + G(x*y,z) - G(x,y*z) - g(x)G(y,z)|"""
    _, (values,), _ = _tabulate(H, g)
    depth = H.nmax if depth is None else depth
    residuals = []
    for x, y, z in _cocycle_triples(H, depth):
        left = values[z] * modified_cauchy_difference(H, values, x, y) + _integrate_first(
            H, x, y, lambda u: modified_cauchy_difference(H, values, u, z)
        )
        right = _integrate_first(
            H, y, z, lambda v: modified_cauchy_difference(H, values, x, v)
        ) + values[x] * modified_cauchy_difference(H, values, y, z)
        residuals.append(left - right)
    return _max_modulus(residuals)


@dataclass(frozen=True)
class Decomposition:
    M: ValueTable
    N: ValueTable
    residual_M: Real
    residual_N: Real
    exponential_M: bool
    exponential_N: bool


def decompose_exponentials(H: Hypergroup, g: HFunction, h: HFunction, tolerances: Tolerances = DEFAULT_TOLERANCES) -> Decomposition:
    """
    M = g + ih and N = g - ih. When (h, g) solves both equations at once,
    M and N are exponentials.
    """
    mode, (g_values, h_values), _ = _tabulate(H, g, h)
    i = I if mode is ArithmeticMode.EXACT else 1j
    m_values = [gv + i * hv for gv, hv in zip(g_values, h_values)]
    n_values = [gv - i * hv for gv, hv in zip(g_values, h_values)]
    ok_m, residual_m = _exponential_check(H, m_values, tolerances)
    ok_n, residual_n = _exponential_check(H, n_values, tolerances)
    return Decomposition(
        M=_table(m_values, "M = g + ih"),
        N=_table(n_values, "N = g - ih"),
        residual_M=residual_m,
        residual_N=residual_n,
        exponential_M=ok_m,
        exponential_N=ok_n,
    )


# number of elements or pairs each recovered parameter is estimated at
RECOVERY_SAMPLES = 5


def _consistent(name: str, estimates: Sequence[complex], tolerances: Tolerances) -> complex:
    reference = estimates[0]
    spread = max(abs(e - reference) for e in estimates) / max(1.0, abs(reference))
    if spread > tolerances.recovery:
        raise LambdaInconsistent(estimates=list(estimates), spread=spread)
    average = sum(estimates) / len(estimates)
    # rounding noise in the imaginary part would flip the square root branch
    if abs(average.imag) <= tolerances.atol * max(1.0, abs(average)):
        average = complex(average.real, 0.0)
    logger.debug("recovered parameter", name=name, value=average, spread=spread, samples=len(estimates))
    return average


def _largest_elements(values: Sequence[complex]) -> List[Element]:
    peak = max(abs(v) for v in values)
    ranked = sorted(range(len(values)), key=lambda n: (-abs(values[n]), n))
    return [n for n in ranked[:RECOVERY_SAMPLES] if abs(values[n]) >= peak * 1e-3]


def _largest_pairs(H: Hypergroup, values: Sequence[complex]) -> List[Pair]:
    ranked = sorted(H.pairs(), key=lambda p: (-abs(values[p[0]] * values[p[1]]), p))
    if not ranked:
        return []
    peak = abs(values[ranked[0][0]] * values[ranked[0][1]])
    return [
        (x, y) for x, y in ranked[:RECOVERY_SAMPLES] if abs(values[x] * values[y]) >= peak * 1e-3
    ]


def _reconstruction(f: Sequence[Scalar], g: Sequence[Scalar], pair: SolutionPair, nmax: int) -> float:
    rebuilt_f = pair.f.values(nmax)
    rebuilt_g = pair.g.values(nmax)
    return max(
        relative_deviation(a, b)
        for a, b in itertools.chain(zip(f, rebuilt_f), zip(g, rebuilt_g))
    )


def _float_table(values: Sequence[complex], label: str) -> ValueTable:
    return ValueTable.from_values([to_float(v) for v in values], label=label)


def _fit_lambda(H: Hypergroup, values: Sequence[complex], tolerances: Tolerances) -> Optional[complex]:
    if H.recurrence is None or H.nmax < 1:
        return None
    return fit_exponential_parameter(H.recurrence, values, tolerances)


def _finish(
    H: Hypergroup,
    result: ClassificationResult,
    f: Sequence[complex],
    g: Sequence[complex],
    rebuilt: SolutionPair,
    tolerances: Tolerances,
) -> ClassificationResult:
    result.residual_reconstruction = _reconstruction(f, g, rebuilt, H.nmax)
    if result.residual_reconstruction > tolerances.reconstruction:
        raise InternalInconsistency(
            f"{result.case.value}: rebuilt pair deviates by {result.residual_reconstruction!r}"
        )
    if result.M is not None:
        result.M_lambda = _fit_lambda(H, result.M.table, tolerances)  # type: ignore[arg-type]
    if result.N is not None:
        result.N_lambda = _fit_lambda(H, result.N.table, tolerances)  # type: ignore[arg-type]
    return result


def _recovered_tolerances(tolerances: Tolerances) -> Tolerances:
    return tolerances.with_rtol(tolerances.reconstruction)


def _check_recovered(H: Hypergroup, name: str, values: Sequence[complex], tolerances: Tolerances) -> None:
    ok, residual = _exponential_check(H, list(values), _recovered_tolerances(tolerances))
    if not ok:
        raise InternalInconsistency(f"recovered {name} is not an exponential (residual {residual!r})")


@dataclass(frozen=True)
class _Gate:
    rejected: Optional[ClassificationResult]
    residual: Real
    f: List[complex]
    g: List[complex]


def _gate(
    H: Hypergroup, f: HFunction, g: HFunction, equation: Equation, tolerances: Tolerances
) -> _Gate:
    """residual check in the input's own mode; recovery then runs on floats"""
    _, (f_values, g_values), _ = _tabulate(H, f, g)
    scan = (_sine_scan if equation is Equation.SINE_COSINE else _cosine_scan)(
        H, f_values, g_values, tolerances
    )
    rejected = None
    if not scan.passed:
        rejected = ClassificationResult(
            case=CaseTag.NOT_A_SOLUTION,
            residual_input=scan.value,
            notes=[f"largest residual at pair {scan.worst_pair}"],
        )
    else:
        for name, values in (("f", f_values), ("g", g_values)):
            if _is_zero_function(values, tolerances):
                rejected = ClassificationResult(
                    case=CaseTag.NOT_A_SOLUTION,
                    residual_input=scan.value,
                    notes=[f"{name} is identically zero"],
                )
                break
    if rejected is not None:
        logger.info("not a solution", equation=equation.value, residual=str(scan.value))
    return _Gate(
        rejected=rejected,
        residual=scan.value,
        f=[to_float(v) for v in f_values],
        g=[to_float(v) for v in g_values],
    )


def classify_sine(H: Hypergroup, f: HFunction, g: HFunction, tolerances: Tolerances = DEFAULT_TOLERANCES) -> ClassificationResult:
    gate = _gate(H, f, g, Equation.SINE_COSINE, tolerances)
    if gate.rejected is not None:
        return gate.rejected
    residual_input, F, G = gate.residual, gate.f, gate.g
    o = H.identity
    log = logger.bind(equation="sine", provenance=H.provenance)
    relaxed = _recovered_tolerances(tolerances)

    if abs(G[o] - 1) > tolerances.recovery:
        # y = o gives f(x)(1 - g(o)) = f(o) g(x), so f = g/c
        c = _consistent("c", [G[x] / F[x] for x in _largest_elements(F)], tolerances)
        M = [2 * v for v in G]
        _check_recovered(H, "M", M, tolerances)
        log.info("classified", branch="g(o) != 1", case="T1_II", c=c)
        result = ClassificationResult(
            case=CaseTag.T1_II,
            residual_input=residual_input,
            c=c,
            M=_float_table(M, "M"),
        )
        rebuilt = build_t1_ii(H, result.M, c, relaxed)  # type: ignore[arg-type]
        return _finish(H, result, F, G, rebuilt, tolerances)

    g_exponential, _ = _exponential_check(H, G, tolerances)
    if g_exponential:
        log.info("classified", branch="g exponential", case="T1_I")
        result = ClassificationResult(
            case=CaseTag.T1_I,
            residual_input=residual_input,
            M=_float_table(G, "M = g"),
            notes=["f is an M-sine function for the exponential M = g"],
        )
        rebuilt = build_t1_i(H, result.M, _float_table(F, "f"), relaxed)  # type: ignore[arg-type]
        return _finish(H, result, F, G, rebuilt, tolerances)

    # g(x*y) - g(x)g(y) = lambda f(x) f(y), phi = lambda f
    estimates = []
    for x, y in _largest_pairs(H, F):
        translated, _ = translate_values(H, G, x, y)
        estimates.append((translated - G[x] * G[y]) / (F[x] * F[y]))
    lam = _consistent("lambda", estimates, tolerances)
    d = principal_sqrt(-lam)
    h = [d * v for v in F]
    M = [gv + 1j * hv for gv, hv in zip(G, h)]
    N = [gv - 1j * hv for gv, hv in zip(G, h)]
    c = d * 1j
    _check_recovered(H, "M", M, tolerances)
    _check_recovered(H, "N", N, tolerances)
    log.info("classified", branch="cauchy difference", case="T1_III", lam=lam, c=c)
    result = ClassificationResult(
        case=CaseTag.T1_III,
        residual_input=residual_input,
        c=c,
        lam=lam,
        d=d,
        M=_float_table(M, "M = g + ih"),
        N=_float_table(N, "N = g - ih"),
        notes=["(M, N, c) and (N, M, -c) describe the same pair"],
    )
    rebuilt = build_t1_iii(H, result.M, result.N, c, relaxed)  # type: ignore[arg-type]
    return _finish(H, result, F, G, rebuilt, tolerances)


def _from_sine_classification(
    H: Hypergroup,
    sine: ClassificationResult,
    residual_input: Real,
    F: Sequence[complex],
    G: Sequence[complex],
    tolerances: Tolerances,
) -> ClassificationResult:
    """lambda = 0: (f, g) solves the sine-cosine equation and c must be +-i"""
    relaxed = _recovered_tolerances(tolerances)
    c = sine.c
    if sine.case is CaseTag.T1_III and c is not None:
        sign = 1 if abs(c - 1j) <= tolerances.recovery else -1 if abs(c + 1j) <= tolerances.recovery else 0
        if sign == 0:
            raise InternalInconsistency(f"lambda = 0 but the sine classification gave c = {c!r}")
        result = ClassificationResult(
            case=CaseTag.T2_IV,
            residual_input=residual_input,
            lam=0j,
            d=1 + 0j,
            sign=sign,
            M=sine.M,
            N=sine.N,
            notes=[
                "lambda = 0: the pair also solves the sine-cosine equation with c = +-i",
                "(M, N, sign) and (N, M, -sign) describe the same pair",
            ],
        )
        rebuilt = build_t2_iv(H, sine.M, sine.N, 0j, sign, relaxed)  # type: ignore[arg-type]
        return _finish(H, result, F, G, rebuilt, tolerances)
    if sine.case is CaseTag.T1_II and c is not None and sine.M is not None:
        result = ClassificationResult(
            case=CaseTag.T2_I,
            residual_input=residual_input,
            c=1 / c,
            M=sine.M,
            notes=["lambda = 0: sine-cosine case ii with c = +-i"],
        )
        rebuilt = build_t2_i(H, sine.M, 1 / c, relaxed)
        return _finish(H, result, F, G, rebuilt, tolerances)
    raise InternalInconsistency(f"lambda = 0 but the sine classification gave {sine.case.value}")


def classify_cosine(H: Hypergroup, f: HFunction, g: HFunction, tolerances: Tolerances = DEFAULT_TOLERANCES) -> ClassificationResult:
    """
    Runs the constructive proof for the cosine-sine equation on (f, g).

    Cases produced: T2_I when g(o) != 1, T2_III when lambda^2 = 1, T2_IV
    otherwise (through the sine classification when lambda = 0). The branch
    "M and N proportional, hence T2_I" never occurs: exponentials satisfy
    M(o) = N(o) = 1, so proportional exponentials are equal, and equal M and N
    force f = 0, which the gate already rejected. Reaching it raises
    InternalInconsistency. T2_II is never produced; it coincides with T2_I at
    c' = 1/c.
    """
    gate = _gate(H, f, g, Equation.COSINE_SINE, tolerances)
    if gate.rejected is not None:
        return gate.rejected
    residual_input, F, G = gate.residual, gate.f, gate.g
    o = H.identity
    log = logger.bind(equation="cosine", provenance=H.provenance)
    relaxed = _recovered_tolerances(tolerances)

    if abs(G[o] - 1) > tolerances.recovery:
        # y = o gives g(x)(1 - g(o)) = -f(x) f(o), so f = c g
        c = _consistent("c", [F[x] / G[x] for x in _largest_elements(F)], tolerances)
        if min(abs(c - 1), abs(c + 1)) <= tolerances.recovery:
            raise InternalInconsistency(f"g(o) != 1 with c = {c!r}; c = +-1 forces f = g = 0")
        M = [(1 - c * c) * v for v in G]
        _check_recovered(H, "M", M, tolerances)
        log.info("classified", branch="g(o) != 1", case="T2_I", c=c)
        result = ClassificationResult(
            case=CaseTag.T2_I,
            residual_input=residual_input,
            c=c,
            M=_float_table(M, "M"),
        )
        rebuilt = build_t2_i(H, result.M, c, relaxed)  # type: ignore[arg-type]
        return _finish(H, result, F, G, rebuilt, tolerances)

    # f(x*y) = f(x) phi(y) + f(y) g(x) with phi = g + 2 lambda f
    estimates = []
    for x, y in _largest_pairs(H, F):
        translated, _ = translate_values(H, F, x, y)
        phi_y = (translated - F[y] * G[x]) / F[x]
        estimates.append((phi_y - G[y]) / (2 * F[y]))
    lam = _consistent("lambda", estimates, tolerances)

    if abs(lam) <= tolerances.recovery:
        log.info("classified", branch="lambda = 0")
        sine = classify_sine(H, f, g, tolerances)
        return _from_sine_classification(H, sine, residual_input, F, G, tolerances)

    if abs(lam * lam - 1) <= tolerances.recovery:
        rounded = 1 if lam.real > 0 else -1
        h = [gv + rounded * fv for gv, fv in zip(G, F)]
        _check_recovered(H, "h = g + lambda f", h, tolerances)
        sign = -rounded
        log.info("classified", branch="lambda^2 = 1", case="T2_III", lam=lam, sign=sign)
        result = ClassificationResult(
            case=CaseTag.T2_III,
            residual_input=residual_input,
            lam=complex(rounded),
            sign=sign,
            M=_float_table(h, "M = g + lambda f"),
            notes=["g = M + sign * f with sign = -lambda"],
        )
        rebuilt = build_t2_iii(H, result.M, _float_table(F, "f"), sign, relaxed)  # type: ignore[arg-type]
        return _finish(H, result, F, G, rebuilt, tolerances)

    d = principal_sqrt(1 - lam * lam)
    h = [gv + lam * fv for gv, fv in zip(G, F)]
    M = [hv + 1j * d * fv for hv, fv in zip(h, F)]
    N = [hv - 1j * d * fv for hv, fv in zip(h, F)]
    if all(relative_deviation(m, n) <= tolerances.reconstruction for m, n in zip(M, N)):
        # M(o) = N(o) = 1, so proportional exponentials coincide and f vanishes
        raise InternalInconsistency("recovered exponentials coincide although f is nonzero")
    _check_recovered(H, "M", M, tolerances)
    _check_recovered(H, "N", N, tolerances)
    log.info("classified", branch="lambda^2 != 1", case="T2_IV", lam=lam, d=d)
    result = ClassificationResult(
        case=CaseTag.T2_IV,
        residual_input=residual_input,
        lam=lam,
        d=d,
        sign=1,
        M=_float_table(M, "M = h + idf"),
        N=_float_table(N, "N = h - idf"),
        notes=["(M, N, sign) and (N, M, -sign) describe the same pair"],
    )
    rebuilt = build_t2_iv(H, result.M, result.N, lam, 1, relaxed)  # type: ignore[arg-type]
    return _finish(H, result, F, G, rebuilt, tolerances)
