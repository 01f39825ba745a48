"""
Scalars used throughout hypertrig.

Two arithmetic modes exist. In exact mode every value is an element of
sympy's Gaussian rationals `QQ_I` and every real weight or coefficient an
element of `QQ`; in float mode values are Python `complex` and weights
`float`. A pipeline is homogeneous: exact values enter float mode only
through `coerce`, which logs the promotion, and a float offered to exact mode
raises `MixedArithmetic`.

`QQ_I` elements only compare equal to other `QQ_I` elements (`QQ_I(1) == 1`
is False), so zero tests go through truthiness and constants are lifted with
`gaussian` before comparing.
"""
from __future__ import annotations

import cmath
import math
from enum import Enum
from typing import Any, Iterable, List, Optional, Sequence, Union

import structlog
import sympy
from sympy.polys.domains import QQ, QQ_I
from sympy.polys.domains.gaussiandomains import GaussianRational
from sympy.polys.polyerrors import CoercionFailed

from hypertrig.errors import MixedArithmetic

logger = structlog.get_logger()

# QQ.dtype is gmpy2.mpq or sympy's PythonMPQ depending on the ground types
QQType = QQ.tp

Real = Any
Scalar = Any


class ArithmeticMode(Enum):
    EXACT = "exact"
    FLOAT = "float"


def is_rational(value: Any) -> bool:
    return isinstance(value, (QQType, int)) and not isinstance(value, bool)


def is_exact(value: Any) -> bool:
    return isinstance(value, GaussianRational) or is_rational(value)


def rational(numerator: Any, denominator: int = 1) -> Any:
    """an element of QQ"""
    if isinstance(numerator, bool) or not is_rational(numerator):
        raise MixedArithmetic(left="QQ", right=numerator)
    return QQ.convert(numerator) / QQ(denominator)


def gaussian(re: Any, im: Any = 0) -> GaussianRational:
    """re + im*i in QQ_I; both parts must be rational"""
    for part in (re, im):
        if not is_rational(part):
            raise MixedArithmetic(left="QQ_I", right=part)
    return QQ_I(re, im)


ZERO = QQ_I.zero
ONE = QQ_I.one
I = QQ_I(0, 1)  # noqa: E741


def mode_of(values: Iterable[Any]) -> ArithmeticMode:
    """exact iff every value is exact"""
    for value in values:
        if not is_exact(value):
            return ArithmeticMode.FLOAT
    return ArithmeticMode.EXACT


def to_exact(value: Any) -> GaussianRational:
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, str):
        return gaussian(parse_rational(value))
    return gaussian(value)


def to_float(value: Any) -> complex:
    if isinstance(value, GaussianRational):
        return complex(float(value.x), float(value.y))
    if is_rational(value):
        return complex(float(value))
    return complex(value)


def to_mode(value: Any, mode: ArithmeticMode) -> Scalar:
    if mode is ArithmeticMode.EXACT:
        return to_exact(value)
    return to_float(value)


def lift(weight: Real, mode: ArithmeticMode) -> Scalar:
    """a real weight or coefficient, ready to multiply values of `mode`"""
    if mode is ArithmeticMode.EXACT:
        return gaussian(weight)
    return float(weight)


def coerce(
    values: Sequence[Any], mode: ArithmeticMode, *, label: str = ""
) -> List[Scalar]:
    if mode is ArithmeticMode.FLOAT and any(is_exact(v) for v in values):
        logger.debug("promoting to float mode", label=label, count=len(values))
    return [to_mode(v, mode) for v in values]


def real_part(value: Scalar) -> Real:
    return value.x if isinstance(value, GaussianRational) else value.real


def imag_part(value: Scalar) -> Real:
    return value.y if isinstance(value, GaussianRational) else value.imag


def conjugate(value: Scalar) -> Scalar:
    if isinstance(value, GaussianRational):
        return QQ_I(value.x, -value.y)
    return value.conjugate()


def abs2(value: Scalar) -> Real:
    """|value|^2, exact for exact values"""
    if isinstance(value, GaussianRational):
        return value.x * value.x + value.y * value.y
    if is_rational(value):
        return QQ.convert(value) * QQ.convert(value)
    return value.real * value.real + value.imag * value.imag


def modulus(value: Scalar) -> Real:
    """|value|; an element of QQ when the modulus of an exact value is rational"""
    if is_exact(value):
        squared = abs2(value)
        root = QQ.exsqrt(squared)
        if root is not None:
            return root
        return math.sqrt(float(squared))
    return abs(value)


def exact_sqrt(value: GaussianRational) -> Optional[GaussianRational]:
    """
    Principal square root of a Gaussian rational, or None when the root is not
    itself a Gaussian rational.
    """
    r = QQ.exsqrt(abs2(value))
    if r is None:
        return None
    p = QQ.exsqrt((r + value.x) / 2)
    q = QQ.exsqrt((r - value.x) / 2)
    if p is None or q is None:
        return None
    if value.y < 0:
        q = -q
    root = QQ_I(p, q)
    if not p and q < 0:
        root = -root
    return root


def principal_sqrt(value: complex) -> complex:
    """nonnegative real part; on the imaginary axis, nonnegative imaginary part"""
    # normalise -0.0 so cmath does not pick the lower branch
    root = cmath.sqrt(complex(value.real + 0.0, value.imag + 0.0))
    if root.real < 0 or (root.real == 0 and root.imag < 0):
        root = -root
    return root


def sqrt(value: Scalar) -> Scalar:
    if is_exact(value):
        root = exact_sqrt(to_exact(value))
        if root is not None:
            return root
        logger.debug("square root leaves exact mode", value=str(value))
        return principal_sqrt(to_float(value))
    return principal_sqrt(value)


def is_zero(value: Scalar, *, atol: float = 0.0) -> bool:
    if is_exact(value):
        return not value
    return abs(value) <= atol


def within_tolerance(
    diff: Scalar, scale: Real, *, atol: float, rtol: float
) -> bool:
    """
    Exact values pass only when the difference is exactly zero. Float values
    pass when |diff| <= atol + rtol * scale.
    """
    if is_exact(diff):
        return not diff
    return abs(diff) <= atol + rtol * float(scale)


def close(a: Scalar, b: Scalar, *, atol: float, rtol: float) -> bool:
    if is_exact(a) and is_exact(b):
        return to_exact(a) == to_exact(b)
    a_f, b_f = to_float(a), to_float(b)
    return within_tolerance(
        a_f - b_f, max(abs(a_f), abs(b_f)), atol=atol, rtol=rtol
    )


def relative_deviation(a: Scalar, b: Scalar) -> float:
    a_f, b_f = to_float(a), to_float(b)
    return abs(a_f - b_f) / max(1.0, abs(a_f), abs(b_f))


def parse_rational(text: Union[str, int, Any]) -> Any:
    """parse "p/q", "p" or a decimal literal into an element of QQ"""
    if isinstance(text, bool):
        raise ValueError(f"not a rational: {text!r}")
    if is_rational(text):
        return QQ.convert(text)
    if not isinstance(text, str) or not text.strip():
        raise ValueError(f"not a rational: {text!r}")
    try:
        return QQ.from_sympy(sympy.Rational(text.strip()))
    except (TypeError, ValueError, ZeroDivisionError, CoercionFailed) as e:
        raise ValueError(f"not a rational: {text!r}") from e


def _split_complex(text: str) -> Optional[int]:
    # last sign that is neither leading nor part of an exponent
    for index in range(len(text) - 1, 0, -1):
        if text[index] in "+-" and text[index - 1] not in "eE":
            return index
    return None


def parse_complex_literal(text: str, *, force_float: bool = False) -> Scalar:
    """
    Parse `re` or `re+imi` (also `re-imi`, `imi`). Components may be
    integers, decimals or `p/q`; the result is exact unless `force_float`.
    """
    literal = text.strip().replace(" ", "")
    if not literal:
        raise ValueError("empty complex literal")
    if literal.endswith("i"):
        body = literal[:-1]
        split = _split_complex(body)
        if split is None:
            re_text, im_text = "0", body
        else:
            re_text, im_text = body[:split], body[split:]
        if im_text in ("", "+", "-"):
            im_text = im_text + "1"
    else:
        re_text, im_text = literal, "0"
    value = QQ_I(parse_rational(re_text), parse_rational(im_text))
    if force_float:
        return to_float(value)
    return value


JsonReal = Union[str, int, float]


def real_to_json(value: Real) -> JsonReal:
    if is_rational(value):
        value = QQ.convert(value)
        return f"{value.numerator}/{value.denominator}"
    return float(value)


def scalar_to_json(value: Scalar) -> List[JsonReal]:
    if is_exact(value):
        exact = to_exact(value)
        return [real_to_json(exact.x), real_to_json(exact.y)]
    value = complex(value)
    return [float(value.real), float(value.imag)]


def real_from_json(value: JsonReal) -> Real:
    if isinstance(value, bool):
        raise ValueError(f"not a number: {value!r}")
    if isinstance(value, float):
        return value
    return parse_rational(value)


def scalar_from_json(value: Any) -> Scalar:
    """`[re, im]` or a bare real; JSON floats select float mode"""
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError(f"complex scalar must be [re, im], got {value!r}")
        re_part, im_part = (real_from_json(v) for v in value)
    else:
        re_part, im_part = real_from_json(value), QQ.zero
    if isinstance(re_part, float) or isinstance(im_part, float):
        return complex(float(re_part), float(im_part))
    return QQ_I(re_part, im_part)
