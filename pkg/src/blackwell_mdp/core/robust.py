"""sa-rectangular robust MDPs with l1 and l-infinity balls.

Each (state, action) pair owns an uncertainty row: the distributions within
a norm ball of radius alpha around the nominal row. The adversary picks the
worst row independently per pair, so worst-case values come from an inner
minimization of p . v over each ball.
"""

import enum
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple, Union

from ..errors import (
    AnalysisInconsistency,
    DenominatorMismatch,
    GammaOutOfRange,
    InstanceFormatError,
    InvalidUncertaintySet,
    NonConvergence,
    VertexSpaceTooLarge,
)
from ..model.mdp import (
    DEFAULT_POLICY_GUARD,
    MdpInstance,
    Policy,
    canonicalize,
    enumerate_policies,
    induced_reward_vector,
)
from ..model.rational import parse_rational
from .blackwell import (
    DEFAULT_CERTIFICATE_BITS,
    BlackwellAnalysis,
    EtaBound,
    analyze_arms,
    eta_bound_for,
    make_arm,
)
from .exact_linear import check_gamma, kernel_values
from .solvers import greedy_sets

logger = logging.getLogger(__name__)

DEFAULT_VERTEX_GUARD = 10**4

Number = Union[Fraction, float]


class Norm(str, enum.Enum):
    L1 = "l1"
    LINF = "linf"

    @classmethod
    def parse(cls, text: str) -> "Norm":
        aliases = {"l1": cls.L1, "ell_1": cls.L1, "linf": cls.LINF, "ell_inf": cls.LINF, "l_inf": cls.LINF}
        try:
            return aliases[str(text).lower()]
        except KeyError:
            raise InstanceFormatError(f"Unknown uncertainty norm: {text!r} (expected 'l1' or 'linf')")


@dataclass(frozen=True)
class BallRow:
    """{p in simplex : ||p - nominal|| <= radius}"""
    nominal: Tuple[Fraction, ...]
    radius: Fraction
    norm: Norm

    def contains(self, p: Sequence[Fraction]) -> bool:
        if any(x < 0 for x in p) or sum(p) != 1:
            return False
        gaps = [abs(x - y) for x, y in zip(p, self.nominal)]
        distance = sum(gaps) if self.norm == Norm.L1 else max(gaps)
        return distance <= self.radius


@dataclass(frozen=True)
class UncertaintySet:
    norm: Norm
    nominal: Tuple[Tuple[Tuple[Fraction, ...], ...], ...]
    radii: Tuple[Tuple[Fraction, ...], ...]

    def row(self, s: int, a: int) -> BallRow:
        return BallRow(self.nominal[s][a], self.radii[s][a], self.norm)

    @property
    def denominator_factor(self) -> int:
        """Extreme rows have denominators dividing factor * m."""
        return 2 if self.norm == Norm.L1 else 1


@dataclass
class RobustSolveResult:
    policy: Policy
    worst_case_values: Tuple[Number, ...]
    worst_case_kernel: Tuple[Tuple[Number, ...], ...]
    gamma: Number
    iterations: int = 0
    residual: Number = 0


def validate_uncertainty(mdp: MdpInstance, raw: Mapping[str, Any], rationalize: bool = False) -> UncertaintySet:
    """Check radii against the instance: nonnegative and multiples of 1/m."""
    if not isinstance(raw, Mapping) or "norm" not in raw or "radii" not in raw:
        raise InstanceFormatError("uncertainty must be an object with 'norm' and 'radii'")
    norm = Norm.parse(raw["norm"])
    rows = raw["radii"]
    if not isinstance(rows, list) or len(rows) != mdp.n_states:
        raise InstanceFormatError(f"uncertainty.radii must have {mdp.n_states} rows")
    radii = []
    for s, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != mdp.n_actions:
            raise InstanceFormatError(f"uncertainty.radii[{s}] must have {mdp.n_actions} entries")
        parsed = tuple(parse_rational(x, rationalize=rationalize) for x in row)
        for a, alpha in enumerate(parsed):
            if alpha < 0:
                raise InvalidUncertaintySet(f"Radius at ({s}, {a}) is negative: {alpha}")
            if (alpha * mdp.m).denominator != 1:
                raise DenominatorMismatch(f"Radius {alpha} at ({s}, {a}) is not a multiple of 1/{mdp.m}")
        radii.append(parsed)
    return UncertaintySet(norm=norm, nominal=mdp.transitions, radii=tuple(radii))


def zero_uncertainty(mdp: MdpInstance, norm: Norm = Norm.LINF) -> UncertaintySet:
    radii = tuple(tuple(Fraction(0) for _ in range(mdp.n_actions)) for _ in range(mdp.n_states))
    return UncertaintySet(norm=norm, nominal=mdp.transitions, radii=radii)


def _dot(p: Sequence[Number], v: Sequence[Number]) -> Number:
    return sum((x * y for x, y in zip(p, v) if x), Fraction(0))


# --- inner problems ---------------------------------------------------------------

def inner_min_ell_inf(row: BallRow, v: Sequence[Number]) -> Tuple[Tuple[Fraction, ...], Number]:
    """
    Sorted greedy minimizer of p . v over the l-infinity ball.

    States are sorted by value (ties by index). Mass is raised to its upper
    bound on the cheapest states and kept at its lower bound on the others;
    the pivot is the first position where the upper bounds so far and the
    lower bounds after it reach total mass 1.
    """
    n = len(row.nominal)
    alpha = row.radius
    lower = [max(Fraction(0), x - alpha) for x in row.nominal]
    upper = [min(Fraction(1), x + alpha) for x in row.nominal]
    order = sorted(range(n), key=lambda i: (v[i], i))

    tail = sum(lower, Fraction(0))
    head = Fraction(0)
    p = [Fraction(0)] * n
    for k, i in enumerate(order):
        tail -= lower[i]
        if head + upper[i] + tail >= 1:
            for j in order[:k]:
                p[j] = upper[j]
            for j in order[k + 1:]:
                p[j] = lower[j]
            p[i] = 1 - head - tail
            break
        head += upper[i]
    return tuple(p), _dot(p, v)


def _ell1_candidate(row: BallRow, j1: int, j2: int, zeroed: Sequence[int]) -> Optional[Tuple[Fraction, ...]]:
    """
    Distribution moving mass into j1 from j2 and from the zeroed states,
    with every other state at its nominal mass and the l1 budget spent.
    """
    n = len(row.nominal)
    nominal = row.nominal
    zeroed = set(zeroed)
    rest = [i for i in range(n) if i not in zeroed and i not in (j1, j2)]
    mass_rest = sum((nominal[i] for i in rest), Fraction(0))
    dev_zeroed = sum((nominal[i] for i in zeroed), Fraction(0))
    capacity = 1 - mass_rest
    p1 = (row.radius - dev_zeroed + nominal[j1] - nominal[j2] + capacity) / 2
    p2 = capacity - p1
    if p1 < nominal[j1] or p2 < 0 or p2 > nominal[j2]:
        return None
    p = list(nominal)
    for i in zeroed:
        p[i] = Fraction(0)
    p[j1], p[j2] = p1, p2
    return tuple(p) if row.contains(p) else None


def _ell1_vertices_and_nominal(row: BallRow) -> List[Tuple[Fraction, ...]]:
    n = len(row.nominal)
    result = [tuple(row.nominal)]
    for j in range(n):
        e = tuple(Fraction(1 if i == j else 0) for i in range(n))
        if row.contains(e):
            result.append(e)
    return result


def inner_min_ell_1(row: BallRow, v: Sequence[Number]) -> Tuple[Tuple[Fraction, ...], Number]:
    """
    Minimizer of p . v over the l1 ball, by enumeration of basic structures.

    Candidates move mass into one state j1 from one state j2 and from a set
    of fully emptied states, all other states staying nominal. Emptied sets
    are taken among the highest-valued states. Ties in value go to the
    lexicographically largest distribution.
    """
    n = len(row.nominal)
    candidates = _ell1_vertices_and_nominal(row)
    for j1, j2 in itertools.permutations(range(n), 2):
        others = sorted((i for i in range(n) if i not in (j1, j2)), key=lambda i: (-v[i], i))
        for k in range(len(others) + 1):
            p = _ell1_candidate(row, j1, j2, others[:k])
            if p is not None:
                candidates.append(p)
    best = min(candidates, key=lambda p: (_dot(p, v), tuple(-x for x in p)))
    return best, _dot(best, v)


def inner_min(row: BallRow, v: Sequence[Number]) -> Tuple[Tuple[Fraction, ...], Number]:
    if row.radius == 0:
        return tuple(row.nominal), _dot(row.nominal, v)
    if row.norm == Norm.LINF:
        return inner_min_ell_inf(row, v)
    return inner_min_ell_1(row, v)


def _rank(vectors: Sequence[Sequence[Fraction]]) -> int:
    rows = [list(map(Fraction, r)) for r in vectors]
    rank = 0
    cols = len(rows[0]) if rows else 0
    for c in range(cols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][c] != 0:
                f = rows[i][c] / rows[rank][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def _is_ell1_vertex(row: BallRow, p: Sequence[Fraction]) -> bool:
    n = len(p)

    def unit(i: int) -> List[Fraction]:
        return [Fraction(1 if j == i else 0) for j in range(n)]

    active = [[Fraction(1)] * n]
    active += [unit(i) for i in range(n) if p[i] == 0]
    deviation = [x - y for x, y in zip(p, row.nominal)]
    if sum(abs(d) for d in deviation) == row.radius:
        active.append([Fraction((d > 0) - (d < 0)) for d in deviation])
        active += [unit(i) for i in range(n) if deviation[i] == 0]
    return _rank(active) == n


def extreme_points(row: BallRow) -> List[Tuple[Fraction, ...]]:
    """Vertices of the uncertainty row, sorted lexicographically."""
    n = len(row.nominal)
    if row.radius == 0:
        return [tuple(row.nominal)]
    points = set()
    if row.norm == Norm.LINF:
        lower = [max(Fraction(0), x - row.radius) for x in row.nominal]
        upper = [min(Fraction(1), x + row.radius) for x in row.nominal]
        for free in range(n):
            others = [i for i in range(n) if i != free]
            for bits in itertools.product((0, 1), repeat=len(others)):
                p = [Fraction(0)] * n
                for i, b in zip(others, bits):
                    p[i] = upper[i] if b else lower[i]
                p[free] = 1 - sum(p[i] for i in others)
                if lower[free] <= p[free] <= upper[free]:
                    points.add(tuple(p))
    else:
        candidates = _ell1_vertices_and_nominal(row)
        for j1, j2 in itertools.permutations(range(n), 2):
            others = [i for i in range(n) if i not in (j1, j2)]
            for k in range(len(others) + 1):
                for zeroed in itertools.combinations(others, k):
                    p = _ell1_candidate(row, j1, j2, zeroed)
                    if p is not None:
                        candidates.append(p)
        points = {p for p in candidates if _is_ell1_vertex(row, p)}
    return sorted(points)


# --- robust evaluation and iteration ----------------------------------------------

def robust_policy_evaluation(
    mdp: MdpInstance, uncertainty: UncertaintySet, policy: Policy, gamma
) -> Tuple[Tuple[Fraction, ...], Tuple[Tuple[Fraction, ...], ...]]:
    """
    Worst-case values of a policy and a worst-case kernel.

    Alternates an exact linear solve with the inner minimization; a row is
    replaced only when its minimizer strictly lowers the value, so the loop
    ends once the kernel is stable. The returned kernel holds the minimizers
    at the final values.
    """
    gamma = check_gamma(gamma)
    rewards = induced_reward_vector(mdp, policy)
    rows = [tuple(uncertainty.nominal[s][policy[s]]) for s in range(mdp.n_states)]
    while True:
        values = kernel_values(rows, rewards, gamma)
        changed = False
        for s in range(mdp.n_states):
            p, inner = inner_min(uncertainty.row(s, policy[s]), values)
            if inner < _dot(rows[s], values):
                rows[s] = p
                changed = True
        if not changed:
            break
    kernel = tuple(inner_min(uncertainty.row(s, policy[s]), values)[0] for s in range(mdp.n_states))
    return tuple(values), kernel


def _robust_q(mdp: MdpInstance, uncertainty: UncertaintySet, values: Sequence[Number], gamma: Number) -> List[List[Number]]:
    return [
        [
            mdp.rewards[s][a] + gamma * inner_min(uncertainty.row(s, a), values)[1]
            for a in range(mdp.n_actions)
        ]
        for s in range(mdp.n_states)
    ]


def robust_value_iteration(
    mdp: MdpInstance,
    uncertainty: UncertaintySet,
    gamma,
    exact: bool = True,
    tol: float = 1e-12,
    max_iterations: int = 100_000,
) -> RobustSolveResult:
    """
    Robust gamma-discounted optimal policy and its worst-case values.

    The exact path runs robust policy iteration with the same tie rule as
    the nominal solver; the float path runs robust value iteration.
    """
    if exact:
        gamma = check_gamma(gamma)
        policy = Policy((0,) * mdp.n_states)
        for iteration in itertools.count(1):
            values, kernel = robust_policy_evaluation(mdp, uncertainty, policy, gamma)
            greedy = greedy_sets(_robust_q(mdp, uncertainty, values, gamma))
            improved = tuple(
                policy[s] if policy[s] in greedy[s] else greedy[s][0] for s in range(mdp.n_states)
            )
            if improved == policy.actions:
                return RobustSolveResult(
                    policy=policy,
                    worst_case_values=values,
                    worst_case_kernel=kernel,
                    gamma=gamma,
                    iterations=iteration,
                )
            policy = Policy(improved)

    gamma = float(gamma)
    if not 0.0 <= gamma < 1.0:
        raise GammaOutOfRange(f"Discount factor {gamma} is outside [0, 1)")
    values = [0.0] * mdp.n_states
    for iteration in range(1, max_iterations + 1):
        q = _robust_q(mdp, uncertainty, values, gamma)
        new_values = [float(max(row)) for row in q]
        delta = max(abs(x - y) for x, y in zip(new_values, values))
        values = new_values
        if gamma * delta <= tol:
            policy = Policy(tuple(row.index(max(row)) for row in q))
            kernel = tuple(
                tuple(float(x) for x in inner_min(uncertainty.row(s, policy[s]), values)[0])
                for s in range(mdp.n_states)
            )
            return RobustSolveResult(
                policy=policy,
                worst_case_values=tuple(values),
                worst_case_kernel=kernel,
                gamma=gamma,
                iterations=iteration,
                residual=gamma * delta,
            )
    raise NonConvergence(f"Robust value iteration did not reach tol={tol} in {max_iterations} iterations")


def robust_optimal_policy_set(
    mdp: MdpInstance, uncertainty: UncertaintySet, gamma, guard: int = DEFAULT_POLICY_GUARD
) -> FrozenSet[Policy]:
    gamma = check_gamma(gamma)
    values = {
        pi: robust_policy_evaluation(mdp, uncertainty, pi, gamma)[0]
        for pi in enumerate_policies(mdp, guard=guard, canonical=True, extra=uncertainty.radii)
    }
    best = tuple(max(v[s] for v in values.values()) for s in range(mdp.n_states))
    return frozenset(pi for pi, v in values.items() if v == best)


# --- robust Blackwell bound and analysis ------------------------------------------

def robust_eta_bound(mdp: MdpInstance, uncertainty: UncertaintySet) -> EtaBound:
    """eta(M) with m replaced by 2m for l1 balls."""
    return eta_bound_for(mdp.n_states, uncertainty.denominator_factor * mdp.m, mdp.r_inf)


def extreme_vertex_table(
    mdp: MdpInstance,
    uncertainty: UncertaintySet,
    policies: Sequence[Policy],
    vertex_guard: int = DEFAULT_VERTEX_GUARD,
) -> Tuple[Dict[Tuple[int, int], List[Tuple[Fraction, ...]]], int]:
    """
    Extreme rows for every (state, action) the policies use, and the total
    number of (policy, extreme kernel) pairs.
    """
    vertices: Dict[Tuple[int, int], List[Tuple[Fraction, ...]]] = {}
    total = 0
    for pi in policies:
        count = 1
        for s in range(mdp.n_states):
            key = (s, pi[s])
            if key not in vertices:
                vertices[key] = extreme_points(uncertainty.row(*key))
            count *= len(vertices[key])
        total += count
        if total > vertex_guard:
            raise VertexSpaceTooLarge(f"More than {vertex_guard} (policy, extreme kernel) pairs")
    return vertices, total


def robust_blackwell_analysis(
    mdp: MdpInstance,
    uncertainty: UncertaintySet,
    guard: int = DEFAULT_POLICY_GUARD,
    vertex_guard: int = DEFAULT_VERTEX_GUARD,
    parallel: bool = False,
    max_workers: int = 4,
    certificate_bits: int = DEFAULT_CERTIFICATE_BITS,
) -> BlackwellAnalysis:
    """
    Breakpoint analysis where each policy's arms are all kernels built from
    extreme rows of its uncertainty rows.
    """
    policies = list(enumerate_policies(mdp, guard=guard, canonical=True, extra=uncertainty.radii))
    vertices, total = extreme_vertex_table(mdp, uncertainty, policies, vertex_guard)
    logger.info(f"Robust analysis over {len(policies)} policies and {total} extreme kernels")

    arms_by_policy = {}
    for pi in policies:
        rewards = induced_reward_vector(mdp, pi)
        row_choices = [vertices[(s, pi[s])] for s in range(mdp.n_states)]
        arms_by_policy[pi] = [make_arm(pi, kernel, rewards) for kernel in itertools.product(*row_choices)]

    def check_sample(gamma: Fraction, optimal: FrozenSet[Policy], best: Tuple[Fraction, ...]) -> None:
        solved = robust_value_iteration(mdp, uncertainty, gamma)
        chosen = canonicalize(mdp, solved.policy, extra=uncertainty.radii)
        if chosen not in optimal or tuple(solved.worst_case_values) != best:
            raise AnalysisInconsistency(
                f"Robust policy iteration at gamma={gamma} disagrees with extreme-kernel enumeration"
            )

    return analyze_arms(
        arms_by_policy,
        mdp.n_states,
        uncertainty.denominator_factor * mdp.m,
        parallel=parallel,
        max_workers=max_workers,
        certificate_bits=certificate_bits,
        sample_check=check_sample,
    )


def robust_blackwell_optimal_policy(
    mdp: MdpInstance,
    uncertainty: UncertaintySet,
    method: str = "reduction",
    gamma: Optional[Fraction] = None,
    guard: int = DEFAULT_POLICY_GUARD,
    vertex_guard: int = DEFAULT_VERTEX_GUARD,
) -> Policy:
    """Robust counterpart of blackwell_optimal_policy."""
    if method == "exact":
        analysis = robust_blackwell_analysis(mdp, uncertainty, guard=guard, vertex_guard=vertex_guard)
        return min(analysis.blackwell_set)
    if method != "reduction":
        raise ValueError(f"Unknown method: {method}")
    threshold = robust_eta_bound(mdp, uncertainty).gamma_threshold
    if gamma is None:
        gamma = threshold
    elif not threshold <= Fraction(gamma) < 1:
        raise GammaOutOfRange(f"Reduction needs gamma in [1 - eta(M), 1); got {gamma}")
    solved = robust_value_iteration(mdp, uncertainty, Fraction(gamma))
    return canonicalize(mdp, solved.policy, extra=uncertainty.radii)
