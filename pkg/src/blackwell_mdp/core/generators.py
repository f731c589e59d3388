"""Instance generators: the worked counterexamples and random corpora."""

import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from ..errors import NonMonotoneBreakpoints, NonOddN
from ..model.mdp import MdpInstance, validate_instance
from ..model.rational import parse_rational
from .polynomials import RationalPoly
from .robust import Norm, UncertaintySet

logger = logging.getLogger(__name__)

# Value of the long chain at gamma = 0 in the interval construction.
INTERVAL_ANCHOR = Fraction(9, 10)


@dataclass(frozen=True)
class IntervalSpec:
    """Breakpoints 0 = g_0 < g_1 < ... < g_N = 1 with N odd."""
    breakpoints: Tuple[Fraction, ...]

    def __post_init__(self):
        points = tuple(parse_rational(x) for x in self.breakpoints)
        object.__setattr__(self, "breakpoints", points)
        if len(points) < 2 or points[0] != 0 or points[-1] != 1:
            raise NonMonotoneBreakpoints(f"Breakpoints must start at 0 and end at 1: {points}")
        if any(a >= b for a, b in zip(points, points[1:])):
            raise NonMonotoneBreakpoints(f"Breakpoints must be strictly increasing: {points}")
        if self.N % 2 == 0:
            raise NonOddN(f"Number of intervals N={self.N} must be odd")

    @property
    def N(self) -> int:
        return len(self.breakpoints) - 1

    @classmethod
    def parse(cls, text: str) -> "IntervalSpec":
        return cls(tuple(part.strip() for part in text.split(",") if part.strip()))


def _pad(actions: List[Tuple[Fraction, List[Fraction]]], n_actions: int) -> List[Tuple[Fraction, List[Fraction]]]:
    """Fill a short action menu with copies of its first action."""
    return actions + [actions[0]] * (n_actions - len(actions))


def _chain_instance(menus: Sequence[List[Tuple[Fraction, List[Fraction]]]], labels: Sequence[str]) -> MdpInstance:
    n_actions = max(len(menu) for menu in menus)
    rewards, transitions = [], []
    for menu in menus:
        padded = _pad(menu, n_actions)
        rewards.append([r for r, _ in padded])
        transitions.append([row for _, row in padded])
    return validate_instance({"rewards": rewards, "transitions": transitions, "action_labels": list(labels)})


def _goto(n_states: int, target: int) -> List[Fraction]:
    return [Fraction(1 if s == target else 0) for s in range(n_states)]


def example_one() -> MdpInstance:
    """
    Eight deterministic states. From state 0, a1 pays 1 and ends in the
    absorbing state 7; a2 runs through states 1-3 paying 6 then -8; a3 runs
    through states 4-6 paying 8/3 then -16/9.
    """
    n = 8
    chain = {1: (6, 2), 2: (-8, 3), 3: (0, 7), 4: (Fraction(8, 3), 5), 5: (Fraction(-16, 9), 6), 6: (0, 7), 7: (0, 7)}
    menus = [[(Fraction(1), _goto(n, 7)), (Fraction(0), _goto(n, 1)), (Fraction(0), _goto(n, 4))]]
    for s in range(1, n):
        reward, nxt = chain[s]
        menus.append([(Fraction(reward), _goto(n, nxt))])
    return _chain_instance(menus, ("a1", "a2", "a3"))


def lagrange_polynomial(xs: Sequence[Fraction], ys: Sequence[Fraction]) -> RationalPoly:
    """Interpolating polynomial in product form over exact rationals."""
    result = RationalPoly()
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        term = RationalPoly.constant(yi)
        for j, xj in enumerate(xs):
            if j != i:
                term = term * RationalPoly((-Fraction(xj), Fraction(1))).scale(Fraction(1) / (xi - xj))
        result = result + term
    return result


def interval_rewards(spec: IntervalSpec) -> Tuple[Fraction, ...]:
    """
    Rewards r_0..r_{N-1} along the long chain, so that its value
    sum r_t gamma^t equals the anchor at 0 and 1 at each interior breakpoint.
    """
    nodes = spec.breakpoints[:-1]
    targets = [INTERVAL_ANCHOR] + [Fraction(1)] * (len(nodes) - 1)
    coeffs = lagrange_polynomial(nodes, targets).coeffs
    return tuple(coeffs) + (Fraction(0),) * (spec.N - len(coeffs))


def interval_instance(spec: IntervalSpec) -> MdpInstance:
    """
    N + 1 states. From state 0, a1 pays 1 and jumps to the absorbing state N;
    a2 pays r_0 and walks through 1..N-1 collecting r_t before reaching N.
    The two actions alternate optimality across the breakpoint intervals.
    """
    N = spec.N
    n = N + 1
    rewards = interval_rewards(spec)
    logger.debug(f"Interval rewards for N={N}: {[str(r) for r in rewards]}")
    menus = [[(Fraction(1), _goto(n, N)), (rewards[0], _goto(n, 1))]]
    for t in range(1, N):
        menus.append([(rewards[t], _goto(n, t + 1))])
    menus.append([(Fraction(0), _goto(n, N))])
    return _chain_instance(menus, ("a1", "a2"))


def example_two() -> MdpInstance:
    return interval_instance(IntervalSpec(("0", "1/5", "2/5", "3/5", "4/5", "1")))


def _composition(rng: random.Random, total: int, parts: int) -> List[int]:
    """Uniformly random composition of total into parts nonnegative integers."""
    cuts = sorted(rng.sample(range(total + parts - 1), parts - 1))
    bounds = [-1] + cuts + [total + parts - 1]
    return [bounds[i + 1] - bounds[i] - 1 for i in range(parts)]


def random_instance(n_states: int, n_actions: int, m: int, r_max: int, seed: int) -> MdpInstance:
    """Random instance with every probability in (1/m) Z and rewards q/m, |q| <= r_max."""
    if m < 1:
        raise ValueError("m must be at least 1")
    rng = random.Random(seed)
    rewards, transitions = [], []
    for _ in range(n_states):
        rewards.append([Fraction(rng.randint(-r_max, r_max), m) for _ in range(n_actions)])
        transitions.append(
            [[Fraction(k, m) for k in _composition(rng, m, n_states)] for _ in range(n_actions)]
        )
    return validate_instance({"rewards": rewards, "transitions": transitions, "m": m})


def random_uncertainty(mdp: MdpInstance, norm: Norm, beta_max: int, seed: int) -> UncertaintySet:
    """Radii beta/m with beta drawn uniformly from 0..beta_max."""
    rng = random.Random(seed)
    radii = tuple(
        tuple(Fraction(rng.randint(0, beta_max), mdp.m) for _ in range(mdp.n_actions))
        for _ in range(mdp.n_states)
    )
    return UncertaintySet(norm=Norm(norm), nominal=mdp.transitions, radii=radii)
