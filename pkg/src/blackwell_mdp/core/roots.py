"""Exact real-root isolation on [0, 1) and root separation bounds.

Integer polynomials are split into irreducible factors with sympy. Linear
factors give exact rational roots; every other factor has only irrational
roots, which are isolated with a Sturm chain and refined by bisection on
sign changes. Roots of distinct irreducible factors never coincide, so the
union of all factor roots needs ordering but no deduplication.
"""

import functools
import logging
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import sympy

from ..errors import ZeroPolynomial
from .polynomials import IntegerPoly, RationalPoly

logger = logging.getLogger(__name__)

_X = sympy.Symbol("x")

# Bisection cap when certifying that two roots are farther apart than a bound.
MAX_REFINEMENT_STEPS = 4096

AnyPoly = Union[IntegerPoly, RationalPoly]


def _sign(q) -> int:
    return (q > 0) - (q < 0)


@dataclass(frozen=True)
class IsolatedRoot:
    """
    One real root of `poly`, the unique root inside the open interval
    (lo, hi), or exactly lo when lo == hi. `poly` is irreducible over Q.
    """
    lo: Fraction
    hi: Fraction
    poly: IntegerPoly
    multiplicity: Optional[int] = None

    @classmethod
    def from_rational(cls, q, multiplicity: Optional[int] = None) -> "IsolatedRoot":
        q = Fraction(q)
        return cls(q, q, IntegerPoly((-q.numerator, q.denominator)), multiplicity)

    @property
    def multiplicity_known(self) -> bool:
        return self.multiplicity is not None

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def value(self) -> Optional[Fraction]:
        """The root itself when it is rational."""
        return self.lo if self.is_exact else None

    def approx(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def bisect(self) -> "IsolatedRoot":
        if self.is_exact:
            return self
        mid = (self.lo + self.hi) / 2
        at_mid = _sign(self.poly.evaluate(mid))
        if at_mid == 0:
            return replace(self, lo=mid, hi=mid)
        if at_mid == _sign(self.poly.evaluate(self.lo)):
            return replace(self, lo=mid)
        return replace(self, hi=mid)

    def refine(self, width) -> "IsolatedRoot":
        """Bisect until the interval is narrower than `width`."""
        root = self
        while root.width >= width:
            root = root.bisect()
        return root

    def __str__(self) -> str:
        if self.is_exact:
            return str(self.lo)
        return f"({self.lo}, {self.hi})"


@dataclass(frozen=True)
class SeparationBound:
    N: int
    L: int
    eta: Fraction


# --- sympy bridge -----------------------------------------------------------

def _to_sympy(p: IntegerPoly) -> sympy.Poly:
    return sympy.Poly(list(reversed(p.coeffs)), _X, domain="ZZ")


def _from_sympy(f: sympy.Poly) -> IntegerPoly:
    return IntegerPoly(tuple(int(c) for c in reversed(f.all_coeffs())))


def primitive_part(p: IntegerPoly) -> IntegerPoly:
    """Primitive part with positive leading coefficient."""
    content = math.gcd(*p.coeffs)
    if p.coeffs[-1] < 0:
        content = -content
    return IntegerPoly(tuple(c // content for c in p.coeffs))


def as_integer_poly(p: AnyPoly) -> IntegerPoly:
    """Clear denominators of a rational polynomial (roots unchanged)."""
    if isinstance(p, IntegerPoly):
        return p
    scale = p.denominator_lcm()
    return IntegerPoly(tuple(int(c * scale) for c in p.coeffs))


def squarefree_part(p: IntegerPoly) -> IntegerPoly:
    """p / gcd(p, p'), primitive, with positive leading coefficient."""
    if not p:
        raise ZeroPolynomial("squarefree part of the zero polynomial")
    if p.degree == 0:
        return IntegerPoly((1,))
    return primitive_part(_from_sympy(sympy.sqf_part(_to_sympy(p))))


@functools.lru_cache(maxsize=65536)
def _factor(coeffs: Tuple[int, ...]) -> Tuple[Tuple[IntegerPoly, int], ...]:
    _, factors = sympy.factor_list(_to_sympy(IntegerPoly(coeffs)))
    return tuple((primitive_part(_from_sympy(f)), int(e)) for f, e in factors)


def irreducible_factors(p: IntegerPoly) -> List[Tuple[IntegerPoly, int]]:
    """Nonconstant irreducible factors over Z with their exponents."""
    if not p:
        raise ZeroPolynomial("factorization of the zero polynomial")
    return [(f, e) for f, e in _factor(p.coeffs) if f.degree >= 1]


# --- Sturm chains -----------------------------------------------------------

def sturm_chain(p: AnyPoly) -> List[RationalPoly]:
    """p, p', then negated remainders until the chain terminates."""
    f = as_integer_poly(p).to_rational()
    chain = [f, f.derivative()]
    while chain[-1]:
        _, rem = chain[-2].divmod(chain[-1])
        if not rem:
            break
        chain.append(-rem)
    return [q for q in chain if q]


def _variations(chain: Sequence[RationalPoly], x: Fraction) -> int:
    signs = [s for s in (_sign(q.evaluate(x)) for q in chain) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_root_count(p: AnyPoly, a, b, chain: Optional[Sequence[RationalPoly]] = None) -> int:
    """Number of distinct real roots of p in (a, b]."""
    if not p:
        raise ZeroPolynomial("root count of the zero polynomial")
    chain = chain if chain is not None else sturm_chain(p)
    return _variations(chain, Fraction(a)) - _variations(chain, Fraction(b))


@functools.lru_cache(maxsize=65536)
def _isolate_irreducible(coeffs: Tuple[int, ...]) -> Tuple[IsolatedRoot, ...]:
    """Roots in (0, 1) of an irreducible polynomial of degree >= 2."""
    f = IntegerPoly(coeffs)
    chain = sturm_chain(f)
    found: List[IsolatedRoot] = []
    pending = [(Fraction(0), Fraction(1))]
    while pending:
        lo, hi = pending.pop()
        count = sturm_root_count(f, lo, hi, chain)
        if count == 0:
            continue
        if count == 1:
            found.append(IsolatedRoot(lo, hi, f))
            continue
        mid = (lo + hi) / 2
        pending.extend([(lo, mid), (mid, hi)])
    return tuple(sorted(found, key=lambda r: r.lo))


def isolate_roots_in_unit_interval(p: IntegerPoly) -> List[IsolatedRoot]:
    """
    Disjoint isolating certificates for every distinct real root of p in
    [0, 1), sorted ascending. Rational roots come back as point intervals;
    the root at 1 is excluded.
    """
    roots: List[IsolatedRoot] = []
    for f, e in irreducible_factors(p):
        if f.degree == 1:
            q = Fraction(-f.coeffs[0], f.coeffs[1])
            if 0 <= q < 1:
                roots.append(IsolatedRoot(q, q, f, e))
        else:
            roots.extend(replace(r, multiplicity=e) for r in _isolate_irreducible(f.coeffs))
    return separate_roots(roots)


def largest_root_below_one(p: IntegerPoly) -> Optional[IsolatedRoot]:
    roots = isolate_roots_in_unit_interval(p)
    return roots[-1] if roots else None


def _separated(a: IsolatedRoot, b: IsolatedRoot) -> bool:
    return a.hi < b.lo


def separate_roots(roots: Sequence[IsolatedRoot]) -> List[IsolatedRoot]:
    """
    Sort certificates of pairwise distinct roots, refining until the closed
    intervals are strictly disjoint. Duplicate certificates are dropped.
    """
    items = list(dict.fromkeys(roots))
    while True:
        items.sort(key=lambda r: (r.lo, r.hi))
        changed = False
        kept = [items[0]] if items else []
        for b in items[1:]:
            a = kept[-1]
            if a.is_exact and b.is_exact and a.lo == b.lo:
                continue
            if a.poly == b.poly and b.lo < a.hi:
                # Windows of one factor are nested bisections: overlap means same root.
                continue
            kept.append(b)
        items = kept
        for i in range(len(items) - 1):
            a, b = items[i], items[i + 1]
            if not _separated(a, b):
                items[i], items[i + 1] = a.bisect(), b.bisect()
                changed = True
        if not changed:
            return items


def _gcd(a: RationalPoly, b: RationalPoly) -> RationalPoly:
    while b:
        _, r = a.divmod(b)
        a, b = b, r
    return a


def sign_at(p: AnyPoly, root: IsolatedRoot) -> int:
    """Exact sign of p at an algebraic root."""
    f = p.to_rational() if isinstance(p, IntegerPoly) else p
    if root.is_exact:
        return _sign(f.evaluate(root.lo))
    _, g = f.divmod(root.poly.to_rational())
    if not g:
        return 0
    # g is nonzero modulo the minimal polynomial, hence nonzero at the root.
    g_sqf = g if g.degree <= 0 else g.divmod(_gcd(g, g.derivative()))[0]
    chain = sturm_chain(g_sqf) if g_sqf.degree > 0 else None
    while chain is not None and (
        g.evaluate(root.lo) == 0 or sturm_root_count(g_sqf, root.lo, root.hi, chain) != 0
    ):
        root = root.bisect()
    return _sign(g.evaluate(root.lo))


def roots_farther_than(a: IsolatedRoot, b: IsolatedRoot, eta: Fraction, max_steps: int = MAX_REFINEMENT_STEPS) -> bool:
    """
    Certify |b - a| > eta for roots a < b by refinement. Returns False if the
    distance is certainly at most eta or the step cap is reached.
    """
    for _ in range(max_steps):
        if b.lo - a.hi > eta:
            return True
        if b.hi - a.lo <= eta:
            return False
        if a.is_exact and b.is_exact:
            return False
        a, b = a.bisect(), b.bisect()
    logger.warning(f"Separation check between {a} and {b} hit the refinement cap")
    return False


def rump_eta(N: int, L: int) -> SeparationBound:
    """
    Lower bound 1 / (2 N^(N/2+2) (L+1)^N) on the distance between distinct
    roots of an integer polynomial of degree N with absolute coefficient
    sum at most L. For odd N the power is rounded up to an integer.
    """
    if N < 1 or L < 1:
        raise ValueError(f"rump_eta requires N >= 1 and L >= 1 (got N={N}, L={L})")
    if N % 2 == 0:
        power = N ** ((N + 4) // 2)
    else:
        square = N ** (N + 4)
        power = math.isqrt(square)
        if power * power != square:
            power += 1
    return SeparationBound(N=N, L=L, eta=Fraction(1, 2 * power * (L + 1) ** N))


def simplest_rational_between(lo, hi) -> Fraction:
    """A rational with small denominator strictly inside (lo, hi), 0 <= lo < hi."""
    lo, hi = Fraction(lo), Fraction(hi)
    if not lo < hi:
        raise ValueError(f"empty interval ({lo}, {hi})")
    fl = math.floor(lo)
    if fl + 1 < hi:
        return Fraction(fl + 1)
    if lo == fl:
        return fl + Fraction(1, math.floor(1 / (hi - fl)) + 1)
    return fl + 1 / simplest_rational_between(1 / (hi - fl), 1 / (lo - fl))
