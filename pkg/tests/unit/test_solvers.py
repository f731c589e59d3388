"""Tests for the discounted solvers"""

from fractions import Fraction

import pytest


@pytest.mark.unit
class TestExactPolicyIteration:
    """Test suite for exact_policy_iteration"""

    def test_example_one_at_nine_tenths(self, example_one):
        """Verify a1 is optimal at 9/10 with value 1 at state 0"""
        from blackwell_mdp.core.solvers import exact_policy_iteration
        result = exact_policy_iteration(example_one, Fraction(9, 10))
        assert result.policy[0] == 0
        assert result.values[0] == 1
        assert result.values[1] == Fraction(-6, 5)
        assert result.residual == 0

    def test_switches_when_strictly_better(self, example_one):
        """Verify a2 replaces a1 at 3/8 and the history records both evaluations"""
        from blackwell_mdp.core.solvers import exact_policy_iteration
        result = exact_policy_iteration(example_one, Fraction(3, 8))
        assert result.policy[0] == 1
        assert result.values[0] == Fraction(9, 8)
        assert result.iterations == 2
        assert len(result.value_history) == 2

    @pytest.mark.parametrize("seed", range(25))
    def test_values_never_decrease(self, seed):
        """Verify every improvement step raises values componentwise"""
        from blackwell_mdp.core.exact_linear import value_at
        from blackwell_mdp.core.generators import random_instance
        from blackwell_mdp.core.solvers import exact_policy_iteration
        mdp = random_instance(2 + seed % 3, 2 + seed % 2, m=1 + seed % 4, r_max=4, seed=seed)
        for gamma in (Fraction(1, 3), Fraction(7, 8), Fraction(99, 100)):
            result = exact_policy_iteration(mdp, gamma)
            history = result.value_history
            assert history[-1] == result.values
            for before, after in zip(history, history[1:]):
                assert all(b <= a for b, a in zip(before, after)), f"values dropped at gamma={gamma}"
            assert result.values == tuple(value_at(mdp, result.policy, s, gamma) for s in range(mdp.n_states))

    def test_keeps_current_action_on_ties(self, example_one):
        """Verify a tie at 1/4 keeps the initial action"""
        from blackwell_mdp.core.solvers import exact_policy_iteration
        result = exact_policy_iteration(example_one, Fraction(1, 4))
        assert result.policy[0] == 0
        assert result.iterations == 1

    def test_gamma_zero_is_greedy(self, two_state):
        """Verify gamma = 0 picks the immediate-reward maximizer"""
        from blackwell_mdp.core.solvers import exact_policy_iteration
        result = exact_policy_iteration(two_state, 0)
        assert result.policy.actions == (0, 0)
        assert result.values == (Fraction(1, 2), Fraction(1))

    def test_rejects_gamma_one(self, two_state):
        """Verify gamma = 1 is outside the discounted domain"""
        from blackwell_mdp.core.solvers import exact_policy_iteration
        from blackwell_mdp.errors import GammaOutOfRange
        with pytest.raises(GammaOutOfRange):
            exact_policy_iteration(two_state, 1)


@pytest.mark.unit
class TestOptimalPolicySet:
    """Test suite for optimal_policy_set"""

    @pytest.mark.parametrize("gamma,expected", [
        (Fraction(1, 10), {0}),
        (Fraction(1, 4), {0, 1}),
        (Fraction(3, 8), {1}),
        (Fraction(3, 4), {0, 2}),
        (Fraction(9, 10), {0}),
    ])
    def test_example_one_sets(self, example_one, gamma, expected):
        """Verify greedy and enumerated optimal sets agree with the parabolas"""
        from blackwell_mdp.core.solvers import optimal_policy_set
        greedy = optimal_policy_set(example_one, gamma)
        enumerated = optimal_policy_set(example_one, gamma, method="enumerate")
        assert greedy == enumerated
        assert {pi[0] for pi in greedy} == expected

    def test_unknown_method(self, two_state):
        """Verify unknown methods are rejected"""
        from blackwell_mdp.core.solvers import optimal_policy_set
        with pytest.raises(ValueError):
            optimal_policy_set(two_state, Fraction(1, 2), method="simplex")


@pytest.mark.unit
class TestFloatValueIteration:
    """Test suite for float_value_iteration"""

    def test_matches_exact_values(self, two_state):
        """Verify the float values are within tolerance of the exact ones"""
        from blackwell_mdp.core.solvers import exact_policy_iteration, float_value_iteration
        gamma = Fraction(9, 10)
        exact = exact_policy_iteration(two_state, gamma)
        approx = float_value_iteration(two_state, 0.9, tol=1e-10)
        assert approx.policy == exact.policy
        for x, y in zip(approx.values, exact.values):
            assert abs(x - float(y)) < 1e-8
        assert approx.residual <= 1e-10

    def test_non_convergence(self, two_state):
        """Verify the iteration cap raises NonConvergence"""
        from blackwell_mdp.core.solvers import float_value_iteration
        from blackwell_mdp.errors import NonConvergence
        with pytest.raises(NonConvergence):
            float_value_iteration(two_state, 0.999, tol=1e-12, max_iterations=5)

    def test_rejects_gamma_out_of_range(self, two_state):
        """Verify the float path checks the discount factor too"""
        from blackwell_mdp.core.solvers import float_value_iteration
        from blackwell_mdp.errors import GammaOutOfRange
        with pytest.raises(GammaOutOfRange):
            float_value_iteration(two_state, 1.25)
