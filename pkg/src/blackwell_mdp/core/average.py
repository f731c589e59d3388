"""Average-reward evaluation through the Cesaro limit of a Markov chain.

The limit matrix is assembled from the chain structure: stationary
distributions of the closed communicating classes and absorption
probabilities of the transient states. No discounting is involved.
"""

import logging
from fractions import Fraction
from typing import Dict, FrozenSet, List, Sequence, Set, Tuple

from ..model.mdp import (
    DEFAULT_POLICY_GUARD,
    MdpInstance,
    Policy,
    enumerate_policies,
    induced_reward_vector,
    induced_transition_matrix,
)
from .linalg import solve_fraction_free

logger = logging.getLogger(__name__)

Kernel = Sequence[Sequence[Fraction]]


def _reachable(P: Kernel) -> List[Set[int]]:
    n = len(P)
    result = []
    for start in range(n):
        seen = {start}
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if P[i][j] and j not in seen:
                    seen.add(j)
                    stack.append(j)
        result.append(seen)
    return result


def recurrent_classes(P: Kernel) -> List[Tuple[int, ...]]:
    """Closed communicating classes, each sorted, ordered by smallest state."""
    reach = _reachable(P)
    classes = []
    assigned: Set[int] = set()
    for i in range(len(P)):
        if i in assigned:
            continue
        # i is recurrent iff every state it reaches can reach it back.
        if all(i in reach[j] for j in reach[i]):
            members = tuple(sorted(reach[i]))
            classes.append(members)
            assigned.update(members)
    return classes


def stationary_distribution(P: Kernel, members: Sequence[int]) -> Dict[int, Fraction]:
    """Solve mu (P_CC - I) = 0 with sum(mu) = 1 on a closed class."""
    k = len(members)
    A = [[P[members[j]][members[i]] - (1 if i == j else 0) for j in range(k)] for i in range(k)]
    A[-1] = [Fraction(1)] * k
    b = [Fraction(0)] * (k - 1) + [Fraction(1)]
    mu = solve_fraction_free(A, b)
    return dict(zip(members, mu))


def cesaro_limit_matrix(P: Kernel) -> List[List[Fraction]]:
    """P* = lim (1/T) sum_{t<T} P^t, computed exactly."""
    n = len(P)
    classes = recurrent_classes(P)
    recurrent = {s for c in classes for s in c}
    transient = [s for s in range(n) if s not in recurrent]
    limit = [[Fraction(0)] * n for _ in range(n)]

    for members in classes:
        mu = stationary_distribution(P, members)
        for i in members:
            for j in members:
                limit[i][j] = mu[j]
        if not transient:
            continue
        # Absorption probabilities into this class from transient states.
        A = [
            [(1 if i == j else 0) - P[transient[i]][transient[j]] for j in range(len(transient))]
            for i in range(len(transient))
        ]
        b = [sum((P[t][j] for j in members), Fraction(0)) for t in transient]
        h = solve_fraction_free(A, b)
        for idx, t in enumerate(transient):
            for j in members:
                limit[t][j] = h[idx] * mu[j]
    return limit


def average_reward(mdp: MdpInstance, policy: Policy) -> Tuple[Fraction, ...]:
    """Gain vector g = P* r of a policy."""
    limit = cesaro_limit_matrix(induced_transition_matrix(mdp, policy))
    r = induced_reward_vector(mdp, policy)
    return tuple(sum((p * x for p, x in zip(row, r)), Fraction(0)) for row in limit)


def average_optimal_policies(
    mdp: MdpInstance, guard: int = DEFAULT_POLICY_GUARD
) -> Tuple[Tuple[Fraction, ...], FrozenSet[Policy], Dict[Policy, Tuple[Fraction, ...]]]:
    """
    Optimal gain vector, the canonical policies attaining it, and every
    canonical policy's gain.
    """
    gains = {pi: average_reward(mdp, pi) for pi in enumerate_policies(mdp, guard=guard, canonical=True)}
    best = tuple(max(g[s] for g in gains.values()) for s in range(mdp.n_states))
    optimal = frozenset(pi for pi, g in gains.items() if g == best)
    logger.info(f"{len(optimal)} of {len(gains)} policies are average-optimal")
    return best, optimal, gains
