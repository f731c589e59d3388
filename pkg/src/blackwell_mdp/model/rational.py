"""Parsing and formatting of exact rational scalars."""

import decimal
from fractions import Fraction
from numbers import Integral
from typing import Any

from ..errors import FloatInputRejected, InstanceFormatError


def parse_rational(value: Any, rationalize: bool = False, max_denominator: int = 10**6) -> Fraction:
    """
    Parse a rational from an int or a string ("num/den", "n", "0.25").

    Strings are read exactly. Binary floats are rejected unless rationalize
    is set, in which case they are replaced by the best continued-fraction
    approximation whose denominator does not exceed max_denominator.
    """
    if isinstance(value, bool):
        raise InstanceFormatError(f"Boolean is not a rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Integral):
        return Fraction(int(value))
    if isinstance(value, float):
        if not rationalize:
            raise FloatInputRejected(
                f"Float {value!r} rejected; write it as \"num/den\" or enable rationalize_floats"
            )
        return Fraction(value).limit_denominator(max_denominator)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise InstanceFormatError(f"Cannot parse rational {value!r}: {e}")
    raise InstanceFormatError(f"Unsupported rational value: {value!r}")


def format_rational(q: Fraction) -> str:
    """Render q as "num/den" (denominator always present)."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def to_decimal(q: Fraction, digits: int = 30) -> str:
    """Render q rounded to the given number of significant digits."""
    q = Fraction(q)
    with decimal.localcontext() as ctx:
        ctx.prec = digits
        value = decimal.Decimal(q.numerator) / decimal.Decimal(q.denominator)
    return str(value)
