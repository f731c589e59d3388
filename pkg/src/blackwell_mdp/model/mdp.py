"""MDP instances, deterministic stationary policies and validation."""

import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterator, List, Mapping, Optional, Sequence, Tuple

from ..errors import (
    DenominatorMismatch,
    InstanceFormatError,
    NegativeProbability,
    NonStochasticRow,
    PolicySpaceTooLarge,
)
from .rational import parse_rational

logger = logging.getLogger(__name__)

DEFAULT_POLICY_GUARD = 10**6

Matrix = Tuple[Tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class MdpInstance:
    """
    A finite MDP whose rewards and transition probabilities share the common
    denominator m. Every state offers the same n_actions actions.
    """
    n_states: int
    n_actions: int
    rewards: Matrix
    transitions: Tuple[Matrix, ...]
    m: int
    r_inf: int
    action_labels: Tuple[str, ...] = field(default=(), compare=False)

    def action_label(self, a: int) -> str:
        if self.action_labels:
            return self.action_labels[a]
        return f"a{a + 1}"

    def row(self, s: int, a: int) -> Tuple[Fraction, ...]:
        return self.transitions[s][a]


@dataclass(frozen=True, order=True)
class Policy:
    """Deterministic stationary policy: one action index per state."""
    actions: Tuple[int, ...]

    def __len__(self) -> int:
        return len(self.actions)

    def __getitem__(self, s: int) -> int:
        return self.actions[s]

    def __str__(self) -> str:
        return "pi:" + ".".join(str(a) for a in self.actions)


def _as_list(value: Any, what: str) -> list:
    if not isinstance(value, (list, tuple)):
        raise InstanceFormatError(f"{what} must be a list, got {type(value).__name__}")
    return list(value)


def validate_instance(
    raw: Mapping[str, Any],
    rationalize: bool = False,
    max_denominator: int = 10**6,
    extra_denominators: Sequence[int] = (),
) -> MdpInstance:
    """
    Validate parsed instance data and return an immutable MdpInstance.

    When "m" is absent it becomes the LCM of every reward and transition
    denominator (and of extra_denominators). r_inf is the exact maximum of
    |m * r_sa|.
    """
    if not isinstance(raw, Mapping):
        raise InstanceFormatError("Instance must be a JSON object")
    for key in ("rewards", "transitions"):
        if key not in raw:
            raise InstanceFormatError(f"Instance is missing required field '{key}'")

    reward_rows = _as_list(raw["rewards"], "rewards")
    transition_rows = _as_list(raw["transitions"], "transitions")
    n_states = len(reward_rows)
    if n_states < 1:
        raise InstanceFormatError("Instance must have at least one state")
    if len(transition_rows) != n_states:
        raise InstanceFormatError(
            f"transitions has {len(transition_rows)} states but rewards has {n_states}"
        )
    n_actions = len(_as_list(reward_rows[0], "rewards[0]"))
    if n_actions < 1:
        raise InstanceFormatError("Instance must have at least one action")
    if raw.get("n_states", n_states) != n_states:
        raise InstanceFormatError(f"n_states={raw['n_states']} does not match data ({n_states})")
    if raw.get("n_actions", n_actions) != n_actions:
        raise InstanceFormatError(f"n_actions={raw['n_actions']} does not match data ({n_actions})")

    def parse(v: Any) -> Fraction:
        return parse_rational(v, rationalize=rationalize, max_denominator=max_denominator)

    rewards: List[Tuple[Fraction, ...]] = []
    transitions: List[Tuple[Tuple[Fraction, ...], ...]] = []
    for s in range(n_states):
        r_row = _as_list(reward_rows[s], f"rewards[{s}]")
        t_rows = _as_list(transition_rows[s], f"transitions[{s}]")
        if len(r_row) != n_actions or len(t_rows) != n_actions:
            raise InstanceFormatError(
                f"State {s} must offer exactly {n_actions} actions (pad short menus)"
            )
        rewards.append(tuple(parse(v) for v in r_row))
        state_rows = []
        for a in range(n_actions):
            dist = _as_list(t_rows[a], f"transitions[{s}][{a}]")
            if len(dist) != n_states:
                raise InstanceFormatError(
                    f"transitions[{s}][{a}] has {len(dist)} entries, expected {n_states}"
                )
            probs = tuple(parse(v) for v in dist)
            for s2, p in enumerate(probs):
                if p < 0:
                    raise NegativeProbability(f"transitions[{s}][{a}][{s2}] = {p} is negative")
            total = sum(probs, Fraction(0))
            if total != 1:
                raise NonStochasticRow(f"transitions[{s}][{a}] sums to {total}, not 1")
            state_rows.append(probs)
        transitions.append(tuple(state_rows))

    denominators = [q.denominator for row in rewards for q in row]
    denominators += [p.denominator for rows in transitions for dist in rows for p in dist]
    denominators += [int(d) for d in extra_denominators]

    if raw.get("m") is not None:
        m = raw["m"]
        if isinstance(m, bool) or not isinstance(m, int) or m < 1:
            raise InstanceFormatError(f"m must be a positive integer, got {m!r}")
        bad = sorted({d for d in denominators if m % d != 0})
        if bad:
            raise DenominatorMismatch(f"m={m} is not divisible by denominators {bad}")
    else:
        m = math.lcm(*denominators)

    r_inf = max(abs(q * m) for row in rewards for q in row)
    labels = raw.get("action_labels") or ()
    if labels and len(labels) != n_actions:
        raise InstanceFormatError(f"action_labels has {len(labels)} entries, expected {n_actions}")

    instance = MdpInstance(
        n_states=n_states,
        n_actions=n_actions,
        rewards=tuple(rewards),
        transitions=tuple(transitions),
        m=m,
        r_inf=int(r_inf),
        action_labels=tuple(str(x) for x in labels),
    )
    logger.debug(f"Validated instance: |S|={n_states}, |A|={n_actions}, m={m}, r_inf={instance.r_inf}")
    return instance


def induced_reward_vector(mdp: MdpInstance, policy: Policy) -> Tuple[Fraction, ...]:
    return tuple(mdp.rewards[s][policy[s]] for s in range(mdp.n_states))


def induced_transition_matrix(mdp: MdpInstance, policy: Policy) -> Matrix:
    return tuple(mdp.transitions[s][policy[s]] for s in range(mdp.n_states))


def effective_action_map(mdp: MdpInstance, extra: Optional[Sequence[Sequence[Any]]] = None) -> Tuple[Tuple[int, ...], ...]:
    """
    For every state, map each action to the lowest-indexed action with the
    same reward and transition row (and the same extra key, e.g. a radius).
    """
    result = []
    for s in range(mdp.n_states):
        seen = {}
        reps = []
        for a in range(mdp.n_actions):
            key = (mdp.rewards[s][a], mdp.transitions[s][a], extra[s][a] if extra is not None else None)
            reps.append(seen.setdefault(key, a))
        result.append(tuple(reps))
    return tuple(result)


def canonicalize(mdp: MdpInstance, policy: Policy, extra: Optional[Sequence[Sequence[Any]]] = None) -> Policy:
    reps = effective_action_map(mdp, extra)
    return Policy(tuple(reps[s][a] for s, a in enumerate(policy.actions)))


def policy_space_size(mdp: MdpInstance, canonical: bool = False, extra=None) -> int:
    if not canonical:
        return mdp.n_actions ** mdp.n_states
    reps = effective_action_map(mdp, extra)
    return math.prod(len(set(row)) for row in reps)


def enumerate_policies(
    mdp: MdpInstance,
    guard: int = DEFAULT_POLICY_GUARD,
    canonical: bool = False,
    extra: Optional[Sequence[Sequence[Any]]] = None,
) -> Iterator[Policy]:
    """
    Yield deterministic stationary policies in lexicographic order.

    With canonical=True only one representative per class of
    indistinguishable policies is produced.
    """
    size = policy_space_size(mdp, canonical, extra)
    if size > guard:
        raise PolicySpaceTooLarge(f"Policy space has {size} policies, guard is {guard}")
    if canonical:
        reps = effective_action_map(mdp, extra)
        choices = [sorted(set(row)) for row in reps]
    else:
        choices = [range(mdp.n_actions)] * mdp.n_states
    for actions in itertools.product(*choices):
        yield Policy(tuple(actions))


def choice_states(mdp: MdpInstance, extra=None) -> List[int]:
    """States where more than one effective action exists."""
    return [s for s, row in enumerate(effective_action_map(mdp, extra)) if len(set(row)) > 1]


def policy_label(mdp: MdpInstance, policy: Policy, extra=None) -> str:
    """Human readable label listing the chosen action at each choice state."""
    states = choice_states(mdp, extra)
    if not states:
        return mdp.action_label(policy[0])
    return ".".join(mdp.action_label(policy[s]) for s in states)
