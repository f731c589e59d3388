"""Exact value functions as ratios of polynomials in the discount factor.

For a policy with kernel P and reward vector r, the value at state s is
n(gamma, s) / d(gamma) where d = det(I - gamma P) and n is the same
determinant with column s replaced by r (Cramer's rule).
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from ..errors import GammaOutOfRange, NonIntegralCoefficient
from ..model.mdp import MdpInstance, Policy, induced_reward_vector, induced_transition_matrix
from .linalg import bareiss_determinant, solve_fraction_free
from .polynomials import IntegerPoly, RationalPoly

logger = logging.getLogger(__name__)

Kernel = Sequence[Sequence[Fraction]]

_ZERO = RationalPoly()
_ONE = RationalPoly.constant(1)


@dataclass(frozen=True)
class ValueFunctionRational:
    numerator: RationalPoly
    denominator: RationalPoly
    state: int
    policy: Policy

    def __call__(self, gamma: Fraction) -> Fraction:
        return self.numerator(gamma) / self.denominator(gamma)


def check_gamma(gamma) -> Fraction:
    gamma = Fraction(gamma)
    if not 0 <= gamma < 1:
        raise GammaOutOfRange(f"Discount factor {gamma} is outside [0, 1)")
    return gamma


def _poly_det(matrix: List[List[RationalPoly]]) -> RationalPoly:
    return bareiss_determinant(matrix, lambda a, b: a.exquo(b), _ZERO, _ONE)


def _resolvent_matrix(P: Kernel) -> List[List[RationalPoly]]:
    n = len(P)
    return [
        [RationalPoly((Fraction(1 if i == j else 0), -Fraction(P[i][j]))) for j in range(n)]
        for i in range(n)
    ]


def kernel_denominator(P: Kernel) -> RationalPoly:
    """det(I - gamma P) for an arbitrary stochastic matrix."""
    return _poly_det(_resolvent_matrix(P))


def kernel_numerator(P: Kernel, r: Sequence[Fraction], s: int) -> RationalPoly:
    matrix = _resolvent_matrix(P)
    for i in range(len(P)):
        matrix[i][s] = RationalPoly.constant(r[i])
    return _poly_det(matrix)


def kernel_value_polys(P: Kernel, r: Sequence[Fraction]) -> Tuple[RationalPoly, Tuple[RationalPoly, ...]]:
    """Denominator and per-state numerators for one kernel."""
    d = kernel_denominator(P)
    return d, tuple(kernel_numerator(P, r, s) for s in range(len(P)))


def kernel_values(P: Kernel, r: Sequence[Fraction], gamma: Fraction) -> List[Fraction]:
    """Solve (I - gamma P) v = r exactly."""
    n = len(P)
    A = [[Fraction(1 if i == j else 0) - gamma * P[i][j] for j in range(n)] for i in range(n)]
    return solve_fraction_free(A, r)


def denominator_poly(mdp: MdpInstance, policy: Policy) -> RationalPoly:
    return kernel_denominator(induced_transition_matrix(mdp, policy))


def denominator_poly_from_minors(mdp: MdpInstance, policy: Policy) -> RationalPoly:
    """
    Same polynomial as denominator_poly, built from principal minors:
    the coefficient of gamma^k is (-1)^k times the sum of all k x k
    principal minors of P.
    """
    P = induced_transition_matrix(mdp, policy)
    n = mdp.n_states
    coeffs = [Fraction(1)]
    for k in range(1, n + 1):
        total = Fraction(0)
        for idx in itertools.combinations(range(n), k):
            sub = [[P[i][j] for j in idx] for i in idx]
            total += bareiss_determinant(sub, lambda a, b: a / b, Fraction(0), Fraction(1))
        coeffs.append((-1) ** k * total)
    return RationalPoly(tuple(coeffs))


def numerator_poly(mdp: MdpInstance, policy: Policy, s: int) -> RationalPoly:
    return kernel_numerator(
        induced_transition_matrix(mdp, policy), induced_reward_vector(mdp, policy), s
    )


def value_function(mdp: MdpInstance, policy: Policy, s: int) -> ValueFunctionRational:
    return ValueFunctionRational(
        numerator=numerator_poly(mdp, policy, s),
        denominator=denominator_poly(mdp, policy),
        state=s,
        policy=policy,
    )


def value_at(mdp: MdpInstance, policy: Policy, s: int, gamma) -> Fraction:
    gamma = check_gamma(gamma)
    return value_function(mdp, policy, s)(gamma)


def solve_bellman(mdp: MdpInstance, policy: Policy, gamma) -> List[Fraction]:
    """Exact policy evaluation by a direct linear solve."""
    gamma = check_gamma(gamma)
    return kernel_values(
        induced_transition_matrix(mdp, policy), induced_reward_vector(mdp, policy), gamma
    )


def difference_from_parts(n1: RationalPoly, d1: RationalPoly, n2: RationalPoly, d2: RationalPoly) -> RationalPoly:
    return n1 * d2 - n2 * d1


def difference_poly(mdp: MdpInstance, pi: Policy, pi2: Policy, s: int) -> RationalPoly:
    """p = n(s, pi) d(pi2) - n(s, pi2) d(pi); vanishes where both values tie."""
    if pi == pi2:
        return RationalPoly()
    return difference_from_parts(
        numerator_poly(mdp, pi, s), denominator_poly(mdp, pi),
        numerator_poly(mdp, pi2, s), denominator_poly(mdp, pi2),
    )


def scale_to_integer(p: RationalPoly, n_states: int, m: int) -> IntegerPoly:
    scale = m ** (2 * n_states)
    scaled = p.scale(scale)
    for k, c in enumerate(scaled.coeffs):
        if c.denominator != 1:
            raise NonIntegralCoefficient(
                f"m^(2|S|) * p has non-integer coefficient {c} at degree {k} (m={m}, |S|={n_states})"
            )
    return IntegerPoly(tuple(c.numerator for c in scaled.coeffs))


def scaled_integer_poly(mdp: MdpInstance, p: RationalPoly, m: int = None) -> IntegerPoly:
    """m^(2|S|) * p, which has integer coefficients for every difference polynomial."""
    return scale_to_integer(p, mdp.n_states, mdp.m if m is None else m)


def coefficient_bound(n_states: int, m: int, r_inf: int) -> int:
    """Upper bound on the absolute coefficient sum of m^(2|S|) * p."""
    return 2 * n_states * r_inf * m ** (2 * n_states) * 4 ** n_states
