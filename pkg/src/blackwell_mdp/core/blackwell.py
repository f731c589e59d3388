"""Blackwell discount factor analysis.

Every policy is represented by one or more arms, an arm being a fixed
transition kernel with its reward vector and exact value polynomials. A
nominal policy has a single arm; a robust policy has one arm per extreme
kernel and its worst-case value is the pointwise minimum over its arms.

The discounted optimal set can only change at a root of some difference
polynomial between two arms. The analysis isolates all such roots in
[0, 1), reads the optimal set off each open interval between consecutive
roots and at each root, and walks back from 1 to find the Blackwell
discount factor.
"""

import logging
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, FrozenSet, List, Optional, Sequence, Tuple

from ..errors import AnalysisInconsistency, GammaOutOfRange
from ..model.mdp import (
    DEFAULT_POLICY_GUARD,
    MdpInstance,
    Policy,
    canonicalize,
    enumerate_policies,
    induced_reward_vector,
    induced_transition_matrix,
)
from .exact_linear import (
    coefficient_bound,
    difference_from_parts,
    difference_poly,
    kernel_value_polys,
    scale_to_integer,
    scaled_integer_poly,
)
from .polynomials import IntegerPoly, RationalPoly
from .roots import (
    IsolatedRoot,
    isolate_roots_in_unit_interval,
    largest_root_below_one,
    primitive_part,
    rump_eta,
    separate_roots,
    sign_at,
    simplest_rational_between,
)
from .solvers import exact_policy_iteration

logger = logging.getLogger(__name__)

DEFAULT_CERTIFICATE_BITS = 64

ZERO = IsolatedRoot.from_rational(0)
ONE = IsolatedRoot.from_rational(1)


@dataclass(frozen=True)
class EtaBound:
    N: int
    L: int
    eta: Fraction
    gamma_threshold: Fraction
    m: int


@dataclass(frozen=True)
class Arm:
    policy: Policy
    kernel: Tuple[Tuple[Fraction, ...], ...]
    denominator: RationalPoly
    numerators: Tuple[RationalPoly, ...]

    def value(self, s: int, gamma: Fraction) -> Fraction:
        return self.numerators[s](gamma) / self.denominator(gamma)


def make_arm(policy: Policy, kernel, rewards) -> Arm:
    d, ns = kernel_value_polys(kernel, rewards)
    return Arm(policy=policy, kernel=tuple(tuple(row) for row in kernel), denominator=d, numerators=ns)


@dataclass(frozen=True)
class IntervalSummary:
    lower: IsolatedRoot
    upper: IsolatedRoot
    sample: Fraction
    optimal_set: FrozenSet[Policy]


@dataclass
class BlackwellAnalysis:
    gamma_bar: IsolatedRoot
    breakpoints: List[IsolatedRoot]
    intervals: List[IntervalSummary]
    breakpoint_sets: List[Tuple[IsolatedRoot, FrozenSet[Policy]]]
    gamma_bw: IsolatedRoot
    blackwell_set: FrozenSet[Policy]
    thresholds: Dict[Policy, IsolatedRoot] = field(default_factory=dict)
    polynomial_count: int = 0

    @property
    def optimal_sets_per_interval(self) -> List[FrozenSet[Policy]]:
        return [iv.optimal_set for iv in self.intervals]


# --- eta bound ----------------------------------------------------------------

def eta_bound_for(n_states: int, m: int, r_inf: int) -> EtaBound:
    N = 2 * n_states - 1
    # L = 0 only for reward-free instances, where every policy ties.
    L = max(coefficient_bound(n_states, m, r_inf), 1)
    bound = rump_eta(N, L)
    return EtaBound(N=N, L=L, eta=bound.eta, gamma_threshold=1 - bound.eta, m=m)


def eta_bound(mdp: MdpInstance) -> EtaBound:
    """Closed-form eta(M); every instance has gamma_bw < 1 - eta(M)."""
    return eta_bound_for(mdp.n_states, mdp.m, mdp.r_inf)


# --- single pairs ---------------------------------------------------------------

def gamma_pair(mdp: MdpInstance, pi: Policy, pi2: Policy, s: int) -> IsolatedRoot:
    """Largest gamma in [0, 1) where pi and pi2 tie at s, or 0 if there is none."""
    p = difference_poly(mdp, pi, pi2, s)
    if not p:
        return ZERO
    root = largest_root_below_one(scaled_integer_poly(mdp, p))
    return root if root is not None else ZERO


# --- generic arm analysis -------------------------------------------------------

def _difference_polys(arms: Sequence[Arm], n_states: int, m: int) -> Tuple[List[IntegerPoly], int]:
    distinct = {}
    total = 0
    for i in range(len(arms)):
        for j in range(i + 1, len(arms)):
            a, b = arms[i], arms[j]
            for s in range(n_states):
                p = difference_from_parts(a.numerators[s], a.denominator, b.numerators[s], b.denominator)
                if not p:
                    continue
                total += 1
                scaled = scale_to_integer(p, n_states, m)
                distinct.setdefault(primitive_part(scaled), None)
    return list(distinct), total


def _isolate_all(polys: Sequence[IntegerPoly], parallel: bool, max_workers: int) -> List[IsolatedRoot]:
    roots: List[IsolatedRoot] = []
    if parallel and len(polys) > 1:
        logger.info(f"Isolating roots of {len(polys)} polynomials with {max_workers} workers")
        with ProcessPoolExecutor(max_workers=max_workers) as executor:
            futures = {executor.submit(isolate_roots_in_unit_interval, p): p for p in polys}
            for future in as_completed(futures):
                try:
                    roots.extend(future.result())
                except Exception as e:
                    logger.error(f"Root isolation failed for {futures[future]}: {e}", exc_info=True)
                    raise
    else:
        for p in polys:
            roots.extend(isolate_roots_in_unit_interval(p))
    return separate_roots(roots)


def _policy_values(arms: Sequence[Arm], n_states: int, gamma: Fraction) -> Tuple[Fraction, ...]:
    return tuple(min(arm.value(s, gamma) for arm in arms) for s in range(n_states))


def optimal_set_at(arms_by_policy: Dict[Policy, List[Arm]], n_states: int, gamma: Fraction) -> Tuple[FrozenSet[Policy], Tuple[Fraction, ...]]:
    """Optimal policies at a rational gamma, with the optimal value vector."""
    values = {pi: _policy_values(arms, n_states, gamma) for pi, arms in arms_by_policy.items()}
    best = tuple(max(v[s] for v in values.values()) for s in range(n_states))
    return frozenset(pi for pi, v in values.items() if v == best), best


def _compare_at(a: Arm, b: Arm, s: int, root: IsolatedRoot) -> int:
    """Sign of v_a(s) - v_b(s) at an algebraic root (denominators are positive)."""
    p = difference_from_parts(a.numerators[s], a.denominator, b.numerators[s], b.denominator)
    return sign_at(p, root) if p else 0


def _optimal_set_at_root(
    arms_by_policy: Dict[Policy, List[Arm]],
    n_states: int,
    root: IsolatedRoot,
    reference: Policy,
) -> FrozenSet[Policy]:
    """
    Optimal policies at an irrational root. `reference` is optimal on an
    adjacent interval and therefore, by continuity, at the root as well.
    """
    ref_arms = arms_by_policy[reference]
    worst = []
    for s in range(n_states):
        arm = ref_arms[0]
        for other in ref_arms[1:]:
            if _compare_at(other, arm, s, root) < 0:
                arm = other
        worst.append(arm)
    result = []
    for pi, arms in arms_by_policy.items():
        if all(_compare_at(arm, worst[s], s, root) >= 0 for s in range(n_states) for arm in arms):
            result.append(pi)
    return frozenset(result)


def _interval_samples(lower: IsolatedRoot, upper: IsolatedRoot) -> Tuple[Fraction, Fraction]:
    left, right = lower.hi, upper.lo
    midpoint = (left + right) / 2
    simple = simplest_rational_between(left, right)
    if simple == midpoint:
        simple = (3 * left + right) / 4
    return midpoint, simple


def analyze_arms(
    arms_by_policy: Dict[Policy, List[Arm]],
    n_states: int,
    m: int,
    parallel: bool = False,
    max_workers: int = 4,
    certificate_bits: int = DEFAULT_CERTIFICATE_BITS,
    sample_check: Optional[Callable[[Fraction, FrozenSet[Policy], Tuple[Fraction, ...]], None]] = None,
) -> BlackwellAnalysis:
    """Breakpoint analysis over arbitrary arms sharing the denominator m."""
    arms = [arm for group in arms_by_policy.values() for arm in group]
    polys, total = _difference_polys(arms, n_states, m)
    logger.info(f"Collected {total} difference polynomials ({len(polys)} distinct up to scaling)")

    breakpoints = _isolate_all(polys, parallel, max_workers)
    logger.info(f"Found {len(breakpoints)} breakpoints in [0, 1)")
    zero_is_breakpoint = bool(breakpoints) and breakpoints[0].is_exact and breakpoints[0].lo == 0
    edges = separate_roots([ZERO] + breakpoints + [ONE])

    intervals: List[IntervalSummary] = []
    for lower, upper in zip(edges, edges[1:]):
        first, second = _interval_samples(lower, upper)
        opt, best = optimal_set_at(arms_by_policy, n_states, first)
        opt_check, _ = optimal_set_at(arms_by_policy, n_states, second)
        if opt != opt_check:
            raise AnalysisInconsistency(
                f"Optimal set changes inside ({lower}, {upper}): samples {first} and {second} disagree"
            )
        if sample_check is not None:
            sample_check(first, opt, best)
        intervals.append(IntervalSummary(lower=lower, upper=upper, sample=first, optimal_set=opt))

    breakpoint_sets: List[Tuple[IsolatedRoot, FrozenSet[Policy]]] = []
    at_edge: Dict[int, FrozenSet[Policy]] = {}
    for k, edge in enumerate(edges[:-1]):
        if k == 0 and not zero_is_breakpoint:
            continue
        if edge.is_exact:
            opt, _ = optimal_set_at(arms_by_policy, n_states, edge.lo)
        else:
            reference = min(intervals[k].optimal_set)
            opt = _optimal_set_at_root(arms_by_policy, n_states, edge, reference)
        at_edge[k] = opt
        breakpoint_sets.append((edge, opt))

    blackwell_set = intervals[-1].optimal_set
    if not blackwell_set:
        raise AnalysisInconsistency("Empty Blackwell-optimal set")

    def walk(keep: Callable[[FrozenSet[Policy]], bool]) -> IsolatedRoot:
        i = len(intervals) - 1
        while i > 0 and keep(intervals[i - 1].optimal_set) and keep(at_edge[i]):
            i -= 1
        return edges[i]

    width = Fraction(1, 2 ** certificate_bits)
    gamma_bw = walk(lambda opt: opt == blackwell_set).refine(width)
    thresholds = {pi: walk(lambda opt, pi=pi: pi in opt).refine(width) for pi in sorted(blackwell_set)}
    gamma_bar = (breakpoints[-1] if breakpoints else ZERO).refine(width)

    return BlackwellAnalysis(
        gamma_bar=gamma_bar,
        breakpoints=breakpoints,
        intervals=intervals,
        breakpoint_sets=breakpoint_sets,
        gamma_bw=gamma_bw,
        blackwell_set=blackwell_set,
        thresholds=thresholds,
        polynomial_count=total,
    )


# --- nominal entry points -------------------------------------------------------

def nominal_arms(mdp: MdpInstance, guard: int = DEFAULT_POLICY_GUARD) -> Dict[Policy, List[Arm]]:
    return {
        pi: [make_arm(pi, induced_transition_matrix(mdp, pi), induced_reward_vector(mdp, pi))]
        for pi in enumerate_policies(mdp, guard=guard, canonical=True)
    }


def exact_blackwell_analysis(
    mdp: MdpInstance,
    guard: int = DEFAULT_POLICY_GUARD,
    parallel: bool = False,
    max_workers: int = 4,
    certificate_bits: int = DEFAULT_CERTIFICATE_BITS,
) -> BlackwellAnalysis:
    """Brute-force breakpoint analysis over all (canonical) policies."""
    logger.info(f"Running exact Blackwell analysis (|S|={mdp.n_states}, |A|={mdp.n_actions})")
    return analyze_arms(
        nominal_arms(mdp, guard),
        mdp.n_states,
        mdp.m,
        parallel=parallel,
        max_workers=max_workers,
        certificate_bits=certificate_bits,
    )


def gamma_bar(mdp: MdpInstance, guard: int = DEFAULT_POLICY_GUARD, parallel: bool = False, max_workers: int = 4) -> IsolatedRoot:
    """Largest tie point in [0, 1) over all policy pairs and states."""
    arms = [group[0] for group in nominal_arms(mdp, guard).values()]
    polys, _ = _difference_polys(arms, mdp.n_states, mdp.m)
    roots = _isolate_all(polys, parallel, max_workers)
    return roots[-1] if roots else ZERO


def policy_threshold(analysis: BlackwellAnalysis, policy: Policy) -> IsolatedRoot:
    """Smallest gamma from which a Blackwell-optimal policy stays optimal."""
    return analysis.thresholds[policy]


def blackwell_optimal_policy(
    mdp: MdpInstance,
    method: str = "reduction",
    gamma: Optional[Fraction] = None,
    guard: int = DEFAULT_POLICY_GUARD,
) -> Policy:
    """
    A Blackwell-optimal policy.

    "reduction" solves the discounted MDP exactly at gamma = 1 - eta(M), or
    at a caller-supplied gamma no smaller than that threshold; "exact" picks
    the lexicographically smallest member of the brute-force Blackwell set.
    """
    if method == "exact":
        return min(exact_blackwell_analysis(mdp, guard=guard).blackwell_set)
    if method != "reduction":
        raise ValueError(f"Unknown method: {method}")
    return canonicalize(mdp, exact_policy_iteration(mdp, reduction_gamma(mdp, gamma)).policy)


def reduction_gamma(mdp: MdpInstance, gamma: Optional[Fraction] = None) -> Fraction:
    threshold = eta_bound(mdp).gamma_threshold
    if gamma is None:
        return threshold
    gamma = Fraction(gamma)
    if not threshold <= gamma < 1:
        raise GammaOutOfRange(f"Reduction needs gamma in [1 - eta(M), 1); got {gamma}")
    return gamma
