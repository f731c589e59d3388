"""Discounted solvers: exact policy iteration, optimal-set extraction and a
floating-point value iteration baseline."""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import FrozenSet, List, Sequence, Tuple, Union

import numpy as np

from ..errors import GammaOutOfRange, NonConvergence, PolicySpaceTooLarge
from ..model.mdp import (
    DEFAULT_POLICY_GUARD,
    MdpInstance,
    Policy,
    effective_action_map,
    enumerate_policies,
)
from .exact_linear import check_gamma, solve_bellman

logger = logging.getLogger(__name__)

Number = Union[Fraction, float]


@dataclass
class SolveResult:
    policy: Policy
    values: Tuple[Number, ...]
    gamma: Number
    iterations: int
    residual: Number = 0
    value_history: List[Tuple[Number, ...]] = field(default_factory=list)


def action_values(mdp: MdpInstance, values: Sequence[Fraction], gamma: Fraction) -> List[List[Fraction]]:
    """q[s][a] = r_sa + gamma * P_sa . v"""
    q = []
    for s in range(mdp.n_states):
        row = []
        for a in range(mdp.n_actions):
            dist = mdp.transitions[s][a]
            row.append(mdp.rewards[s][a] + gamma * sum(p * v for p, v in zip(dist, values) if p))
        q.append(row)
    return q


def greedy_sets(q: Sequence[Sequence[Fraction]]) -> List[List[int]]:
    result = []
    for row in q:
        best = max(row)
        result.append([a for a, x in enumerate(row) if x == best])
    return result


def exact_policy_iteration(mdp: MdpInstance, gamma, tie_break: str = "lexicographic") -> SolveResult:
    """
    Policy iteration in exact arithmetic, starting from the all-zeros policy.

    A state keeps its current action while that action is still greedy;
    otherwise it switches to the lowest-indexed greedy action. The loop stops
    when every state's current action is greedy.
    """
    if tie_break != "lexicographic":
        raise ValueError(f"Unsupported tie_break: {tie_break}")
    gamma = check_gamma(gamma)
    policy = Policy((0,) * mdp.n_states)
    history: List[Tuple[Fraction, ...]] = []
    for iteration in itertools.count(1):
        values = solve_bellman(mdp, policy, gamma)
        history.append(tuple(values))
        greedy = greedy_sets(action_values(mdp, values, gamma))
        improved = tuple(
            policy[s] if policy[s] in greedy[s] else greedy[s][0] for s in range(mdp.n_states)
        )
        logger.debug(f"PI iteration {iteration}: {policy} -> {Policy(improved)}")
        if improved == policy.actions:
            return SolveResult(
                policy=policy,
                values=tuple(values),
                gamma=gamma,
                iterations=iteration,
                residual=Fraction(0),
                value_history=history,
            )
        policy = Policy(improved)


def optimal_policy_set(
    mdp: MdpInstance,
    gamma,
    method: str = "greedy",
    guard: int = DEFAULT_POLICY_GUARD,
) -> FrozenSet[Policy]:
    """
    The set of gamma-discounted optimal policies, one canonical
    representative per class of indistinguishable policies.

    "greedy" reads the set off the optimal values: a policy is optimal iff
    it is greedy at every state. "enumerate" evaluates every policy.
    """
    gamma = check_gamma(gamma)
    reps = effective_action_map(mdp)
    if method == "greedy":
        solved = exact_policy_iteration(mdp, gamma)
        greedy = greedy_sets(action_values(mdp, solved.values, gamma))
        choices = [sorted({reps[s][a] for a in greedy[s]}) for s in range(mdp.n_states)]
        size = 1
        for c in choices:
            size *= len(c)
        if size > guard:
            raise PolicySpaceTooLarge(f"Optimal set has {size} policies, guard is {guard}")
        return frozenset(Policy(actions) for actions in itertools.product(*choices))
    if method == "enumerate":
        evaluated = [
            (pi, tuple(solve_bellman(mdp, pi, gamma)))
            for pi in enumerate_policies(mdp, guard=guard, canonical=True)
        ]
        best = tuple(max(v[s] for _, v in evaluated) for s in range(mdp.n_states))
        return frozenset(pi for pi, v in evaluated if v == best)
    raise ValueError(f"Unknown method: {method}")


def float_value_iteration(
    mdp: MdpInstance,
    gamma: float,
    tol: float = 1e-12,
    max_iterations: int = 100_000,
) -> SolveResult:
    """
    Value iteration in double precision.

    Stops once gamma * ||v_k - v_{k-1}|| <= tol, which bounds the Bellman
    residual of the returned values by tol.
    """
    gamma = float(gamma)
    if not 0.0 <= gamma < 1.0:
        raise GammaOutOfRange(f"Discount factor {gamma} is outside [0, 1)")
    if tol <= 0:
        raise ValueError("tol must be positive")
    R = np.array([[float(x) for x in row] for row in mdp.rewards])
    P = np.array([[[float(p) for p in dist] for dist in rows] for rows in mdp.transitions])
    v = np.zeros(mdp.n_states)
    for iteration in range(1, max_iterations + 1):
        q = R + gamma * np.einsum("sat,t->sa", P, v)
        v_new = q.max(axis=1)
        delta = float(np.max(np.abs(v_new - v)))
        v = v_new
        if gamma * delta <= tol:
            policy = Policy(tuple(int(a) for a in np.argmax(q, axis=1)))
            return SolveResult(
                policy=policy,
                values=tuple(float(x) for x in v),
                gamma=gamma,
                iterations=iteration,
                residual=gamma * delta,
            )
    raise NonConvergence(f"Value iteration did not reach tol={tol} in {max_iterations} iterations")
