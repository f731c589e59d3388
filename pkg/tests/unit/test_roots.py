"""Tests for root isolation and separation bounds"""

from fractions import Fraction

import pytest


def _ipoly(*coeffs):
    from blackwell_mdp.core.polynomials import IntegerPoly
    return IntegerPoly(coeffs)


@pytest.mark.unit
class TestSquarefreeAndFactors:
    """Test suite for squarefree parts and factorization"""

    def test_squarefree_part(self):
        """Verify repeated factors are removed and the result is primitive"""
        from blackwell_mdp.core.roots import squarefree_part
        # -2 (1 - 4g)^2 (1 - g)
        p = _ipoly(-2, 18, -48, 32)
        assert squarefree_part(p).coeffs == (1, -5, 4), "Expected (1 - g)(1 - 4g) up to sign"

    def test_zero_polynomial(self):
        """Verify the zero polynomial is rejected"""
        from blackwell_mdp.core.roots import isolate_roots_in_unit_interval, squarefree_part
        from blackwell_mdp.errors import ZeroPolynomial
        with pytest.raises(ZeroPolynomial):
            squarefree_part(_ipoly())
        with pytest.raises(ZeroPolynomial):
            isolate_roots_in_unit_interval(_ipoly())

    def test_irreducible_factors(self):
        """Verify factorization reports exponents"""
        from blackwell_mdp.core.roots import irreducible_factors
        factors = dict(irreducible_factors(_ipoly(9, -24, 16)))
        assert factors == {_ipoly(-3, 4): 2}


@pytest.mark.unit
class TestIsolation:
    """Test suite for isolate_roots_in_unit_interval"""

    def test_rational_roots_are_exact(self):
        """Verify 1 - 6g + 8g^2 has exact roots 1/4 and 1/2"""
        from blackwell_mdp.core.roots import isolate_roots_in_unit_interval
        roots = isolate_roots_in_unit_interval(_ipoly(1, -6, 8))
        assert [r.value for r in roots] == [Fraction(1, 4), Fraction(1, 2)]
        assert all(r.is_exact for r in roots)

    def test_root_at_one_is_excluded(self):
        """Verify the root at 1 is not reported but the root at 0 is"""
        from blackwell_mdp.core.roots import isolate_roots_in_unit_interval
        # g (1 - g)^2
        roots = isolate_roots_in_unit_interval(_ipoly(0, 1, -2, 1))
        assert [r.value for r in roots] == [Fraction(0)]
        assert roots[0].multiplicity == 1

    def test_irrational_roots_are_isolated(self):
        """Verify 2g^2 - 1 has a single isolated root near 0.7071 in [0, 1)"""
        from blackwell_mdp.core.roots import isolate_roots_in_unit_interval
        roots = isolate_roots_in_unit_interval(_ipoly(-1, 0, 2))
        assert len(roots) == 1
        root = roots[0]
        assert not root.is_exact
        assert root.lo < Fraction(7071, 10000) < root.hi
        narrow = root.refine(Fraction(1, 2 ** 64))
        assert narrow.width < Fraction(1, 2 ** 64)
        assert narrow.lo ** 2 * 2 < 1 < narrow.hi ** 2 * 2

    def test_roots_sorted_and_disjoint(self):
        """Verify mixed rational and irrational roots come out ordered and separated"""
        from blackwell_mdp.core.roots import isolate_roots_in_unit_interval
        # (2g - 1)(2g^2 - 1)(5g - 4)
        from blackwell_mdp.core.polynomials import RationalPoly
        p = RationalPoly((-1, 2)) * RationalPoly((-1, 0, 2)) * RationalPoly((-4, 5))
        roots = isolate_roots_in_unit_interval(_ipoly(*[int(c) for c in p.coeffs]))
        assert len(roots) == 3
        assert roots[0].value == Fraction(1, 2)
        assert roots[2].value == Fraction(4, 5)
        for a, b in zip(roots, roots[1:]):
            assert a.hi < b.lo, f"Certificates overlap: {a} and {b}"

    def test_no_roots(self):
        """Verify a polynomial without roots in [0, 1) gives an empty list"""
        from blackwell_mdp.core.roots import isolate_roots_in_unit_interval, largest_root_below_one
        assert isolate_roots_in_unit_interval(_ipoly(1, 0, 1)) == []
        assert largest_root_below_one(_ipoly(-2, 1)) is None

    def test_largest_root_below_one(self):
        """Verify the largest root is returned"""
        from blackwell_mdp.core.roots import largest_root_below_one
        assert largest_root_below_one(_ipoly(1, -6, 8)).value == Fraction(1, 2)


@pytest.mark.unit
class TestSturmAndSigns:
    """Test suite for Sturm counting and signs at roots"""

    def test_sturm_root_count(self):
        """Verify Sturm counts on half-open intervals"""
        from blackwell_mdp.core.roots import sturm_root_count
        p = _ipoly(1, -6, 8)
        assert sturm_root_count(p, 0, 1) == 2
        assert sturm_root_count(p, 0, Fraction(1, 4)) == 1
        assert sturm_root_count(p, Fraction(1, 4), Fraction(1, 3)) == 0

    def test_sign_at_algebraic_root(self):
        """Verify exact signs at sqrt(1/2), including exact vanishing"""
        from blackwell_mdp.core.polynomials import RationalPoly
        from blackwell_mdp.core.roots import isolate_roots_in_unit_interval, sign_at
        root = isolate_roots_in_unit_interval(_ipoly(-1, 0, 2))[0]
        assert sign_at(RationalPoly((-1, 0, 2)) * RationalPoly((3, 1)), root) == 0
        assert sign_at(RationalPoly((Fraction(-7, 10), 1)), root) == 1
        assert sign_at(RationalPoly((Fraction(-3, 4), 1)), root) == -1

    def test_roots_farther_than(self):
        """Verify certified separation checks"""
        from blackwell_mdp.core.roots import IsolatedRoot, isolate_roots_in_unit_interval, roots_farther_than
        sqrt_half = isolate_roots_in_unit_interval(_ipoly(-1, 0, 2))[0]
        half = IsolatedRoot.from_rational(Fraction(1, 2))
        assert roots_farther_than(half, sqrt_half, Fraction(1, 10))
        assert not roots_farther_than(half, sqrt_half, Fraction(1, 4))


@pytest.mark.unit
class TestSeparationBound:
    """Test suite for the separation bound"""

    def test_trivial_instance_bound(self):
        """Verify eta = 1/18 for N = 1 and L = 8"""
        from blackwell_mdp.core.roots import rump_eta
        assert rump_eta(1, 8).eta == Fraction(1, 18)

    def test_even_degree(self):
        """Verify the even-degree power is exact"""
        from blackwell_mdp.core.roots import rump_eta
        # N = 2: 2 * 2^3 * 2^2
        assert rump_eta(2, 1).eta == Fraction(1, 2 * 8 * 4)

    def test_odd_degree_rounds_up(self):
        """Verify N^(N/2 + 2) is rounded up for odd N"""
        import math
        from blackwell_mdp.core.roots import rump_eta
        power = math.isqrt(3 ** 7) + 1
        assert rump_eta(3, 1).eta == Fraction(1, 2 * power * 2 ** 3)
        assert power == 47

    def test_rejects_degenerate_arguments(self):
        """Verify N and L must be positive"""
        from blackwell_mdp.core.roots import rump_eta
        with pytest.raises(ValueError):
            rump_eta(0, 5)


@pytest.mark.unit
class TestSimplestRational:
    """Test suite for simplest_rational_between"""

    @pytest.mark.parametrize("lo,hi,expected", [
        (Fraction(0), Fraction(1), Fraction(1, 2)),
        (Fraction(1, 4), Fraction(1, 2), Fraction(1, 3)),
        (Fraction(1, 2), Fraction(15, 28), Fraction(8, 15)),
        (Fraction(3, 4), Fraction(1), Fraction(4, 5)),
    ])
    def test_simplest_rational(self, lo, hi, expected):
        """Verify the smallest-denominator rational strictly inside the interval"""
        from blackwell_mdp.core.roots import simplest_rational_between
        q = simplest_rational_between(lo, hi)
        assert lo < q < hi
        assert q == expected

    def test_empty_interval(self):
        """Verify an empty interval is rejected"""
        from blackwell_mdp.core.roots import simplest_rational_between
        with pytest.raises(ValueError):
            simplest_rational_between(Fraction(1, 2), Fraction(1, 2))
