"""Dense univariate polynomials in the discount factor with exact coefficients.

Coefficients are stored lowest degree first with trailing zeros trimmed, so
the zero polynomial is the empty tuple and has degree -1.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Tuple, Union

Scalar = Union[int, Fraction]


def _trim(coeffs: Iterable) -> tuple:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class RationalPoly:
    coeffs: Tuple[Fraction, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(Fraction(c) for c in self.coeffs))

    @classmethod
    def constant(cls, c: Scalar) -> "RationalPoly":
        return cls((Fraction(c),))

    @classmethod
    def gamma(cls) -> "RationalPoly":
        return cls((Fraction(0), Fraction(1)))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __neg__(self) -> "RationalPoly":
        return RationalPoly(tuple(-c for c in self.coeffs))

    def __add__(self, other: "RationalPoly") -> "RationalPoly":
        other = _lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return RationalPoly(tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __sub__(self, other: "RationalPoly") -> "RationalPoly":
        return self + (-_lift(other))

    def __rsub__(self, other) -> "RationalPoly":
        return _lift(other) - self

    def __mul__(self, other) -> "RationalPoly":
        other = _lift(other)
        if not self.coeffs or not other.coeffs:
            return RationalPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x == 0:
                continue
            for j, y in enumerate(other.coeffs):
                out[i + j] += x * y
        return RationalPoly(tuple(out))

    __rmul__ = __mul__

    def scale(self, c: Scalar) -> "RationalPoly":
        return RationalPoly(tuple(x * c for x in self.coeffs))

    def __call__(self, x: Scalar) -> Fraction:
        return self.evaluate(x)

    def evaluate(self, x: Scalar) -> Fraction:
        """Horner evaluation at an exact point."""
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def divmod(self, divisor: "RationalPoly") -> Tuple["RationalPoly", "RationalPoly"]:
        if not divisor:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(divisor.coeffs)
        if dq < 0:
            return RationalPoly(), self
        quot = [Fraction(0)] * (dq + 1)
        lead = divisor.leading
        for k in range(dq, -1, -1):
            q = rem[k + divisor.degree] / lead
            quot[k] = q
            if q:
                for j, c in enumerate(divisor.coeffs):
                    rem[k + j] -= q * c
        return RationalPoly(tuple(quot)), RationalPoly(tuple(rem[:divisor.degree]))

    def exquo(self, divisor: "RationalPoly") -> "RationalPoly":
        """Exact quotient; raises ArithmeticError when the division leaves a remainder."""
        q, r = self.divmod(divisor)
        if r:
            raise ArithmeticError("inexact polynomial division")
        return q

    def derivative(self) -> "RationalPoly":
        return RationalPoly(tuple(k * c for k, c in enumerate(self.coeffs) if k > 0))

    def abs_coefficient_sum(self) -> Fraction:
        return sum((abs(c) for c in self.coeffs), Fraction(0))

    def denominator_lcm(self) -> int:
        return math.lcm(*(c.denominator for c in self.coeffs)) if self.coeffs else 1

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            terms.append(f"{c}" if k == 0 else f"{c}*g^{k}" if k > 1 else f"{c}*g")
        return " + ".join(terms)


@dataclass(frozen=True)
class IntegerPoly:
    """Polynomial with arbitrary-precision integer coefficients."""
    coeffs: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(int(c) for c in self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def abs_coefficient_sum(self) -> int:
        return sum(abs(c) for c in self.coeffs)

    def evaluate(self, x: Scalar) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def to_rational(self) -> RationalPoly:
        return RationalPoly(tuple(Fraction(c) for c in self.coeffs))

    def __str__(self) -> str:
        return str(self.to_rational())


def _lift(value) -> RationalPoly:
    if isinstance(value, RationalPoly):
        return value
    if isinstance(value, IntegerPoly):
        return value.to_rational()
    return RationalPoly.constant(value)
