"""Fraction-free elimination over exact rings."""

import math
from fractions import Fraction
from typing import Callable, List, Sequence, TypeVar

T = TypeVar("T")


def bareiss_determinant(matrix: Sequence[Sequence[T]], exquo: Callable[[T, T], T], zero: T, one: T) -> T:
    """
    Determinant by Bareiss' fraction-free elimination.

    Works over any integral domain given its exact division; every
    intermediate entry is itself a minor of the input, so no fractions
    appear when the entries are integers or polynomials.
    """
    n = len(matrix)
    if n == 0:
        return one
    M: List[List[T]] = [list(row) for row in matrix]
    sign = 1
    prev = one
    for k in range(n - 1):
        if not M[k][k]:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return zero
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = exquo(M[k][k] * M[i][j] - M[i][k] * M[k][j], prev)
        prev = M[k][k]
    det = M[n - 1][n - 1]
    return -det if sign < 0 else det


def integer_determinant(matrix: Sequence[Sequence[int]]) -> int:
    return bareiss_determinant(matrix, lambda a, b: a // b, 0, 1)


def solve_fraction_free(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> List[Fraction]:
    """
    Solve A x = b exactly for nonsingular A.

    Rows are scaled to integers, reduced to upper-triangular form by
    Bareiss elimination, and back-substituted once at the end.
    """
    n = len(A)
    rows: List[List[int]] = []
    for i in range(n):
        entries = [Fraction(x) for x in A[i]] + [Fraction(b[i])]
        scale = math.lcm(*(e.denominator for e in entries))
        rows.append([int(e * scale) for e in entries])

    prev = 1
    for k in range(n):
        if rows[k][k] == 0:
            for i in range(k + 1, n):
                if rows[i][k] != 0:
                    rows[k], rows[i] = rows[i], rows[k]
                    break
            else:
                raise ZeroDivisionError("singular system")
        pivot = rows[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n + 1):
                rows[i][j] = (pivot * rows[i][j] - rows[i][k] * rows[k][j]) // prev
            rows[i][k] = 0
        prev = pivot

    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        acc = Fraction(rows[i][n])
        for j in range(i + 1, n):
            acc -= rows[i][j] * x[j]
        x[i] = acc / rows[i][i]
    return x
