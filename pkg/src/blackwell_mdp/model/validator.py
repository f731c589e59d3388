import logging
from fractions import Fraction
from typing import Any, Dict, Optional

from ..core.exact_linear import coefficient_bound
from ..core.robust import UncertaintySet, extreme_vertex_table
from ..errors import DenominatorMismatch, NegativeProbability, NonStochasticRow, PolicySpaceTooLarge
from .mdp import MdpInstance, enumerate_policies, policy_space_size

logger = logging.getLogger(__name__)


class InstanceValidator:
    """
    Performs pre-analysis checks on a loaded instance and collects a summary
    of the quantities the analysis commands will work with.
    """
    def __init__(self, mdp: MdpInstance, uncertainty: Optional[UncertaintySet] = None, config=None):
        self.mdp = mdp
        self.uncertainty = uncertainty
        self.policy_guard = config.analysis.policy_guard if config else 10**6
        self.vertex_guard = config.analysis.vertex_guard if config else 10**4
        self.summary: Dict[str, Any] = {}

    def run_all_validations(self) -> Dict[str, Any]:
        """Runs all validation checks and raises an error if any fail."""
        logger.info("Running all validations...")
        self.validate_rows()
        self.validate_common_denominator()
        self.validate_policy_space()
        if self.uncertainty is not None:
            self.validate_uncertainty_set()
        logger.info("All validations passed.")
        return self.summary

    def validate_rows(self):
        """Every transition row is a probability distribution."""
        for s, rows in enumerate(self.mdp.transitions):
            for a, dist in enumerate(rows):
                if any(p < 0 for p in dist):
                    raise NegativeProbability(f"Row ({s}, {a}) has a negative entry")
                if sum(dist, Fraction(0)) != 1:
                    raise NonStochasticRow(f"Row ({s}, {a}) does not sum to 1")

    def validate_common_denominator(self):
        """Rewards and probabilities are all multiples of 1/m."""
        m = self.mdp.m
        values = [q for row in self.mdp.rewards for q in row]
        values += [p for rows in self.mdp.transitions for dist in rows for p in dist]
        bad = sorted({q for q in values if (q * m).denominator != 1})
        if bad:
            raise DenominatorMismatch(f"Values {[str(q) for q in bad]} are not multiples of 1/{m}")
        self.summary.update(
            m=m,
            r_inf=self.mdp.r_inf,
            coefficient_bound=coefficient_bound(self.mdp.n_states, m, self.mdp.r_inf),
        )
        logger.info(f"Common denominator m={m}, r_inf={self.mdp.r_inf}")

    def validate_policy_space(self):
        full = policy_space_size(self.mdp)
        canonical = policy_space_size(self.mdp, canonical=True)
        if canonical > self.policy_guard:
            raise PolicySpaceTooLarge(
                f"{canonical} effective policies exceed the policy guard {self.policy_guard}"
            )
        self.summary.update(n_states=self.mdp.n_states, n_actions=self.mdp.n_actions,
                            policies=full, effective_policies=canonical)
        logger.info(f"Policy space: {full} policies, {canonical} effective")

    def validate_uncertainty_set(self):
        """Extreme kernels of all effective policies fit under the vertex guard."""
        policies = list(enumerate_policies(
            self.mdp, guard=self.policy_guard, canonical=True, extra=self.uncertainty.radii
        ))
        _, total = extreme_vertex_table(self.mdp, self.uncertainty, policies, self.vertex_guard)
        self.summary.update(norm=self.uncertainty.norm.value, extreme_arms=total)
        logger.info(f"Uncertainty set ({self.uncertainty.norm.value}): {total} extreme arms")
