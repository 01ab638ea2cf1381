"""Exhaustive solvers for small dimension-decomposition systems.

Two Diophantine shapes come up when splitting a global dimension into
simple-object contributions:

* quadratic-field squares: write a target (a + b*sqrt(n))/2 as a sum of
  r squares ((alpha + beta*sqrt(n))/2)^2 with positive integer alpha,
  beta, optionally forcing each summand to be the square of an
  algebraic integer;
* plain integer squares: write total - 1 as a sum of positive integers
  each dividing a fixed bound.

Both searches are exhaustive over explicit integer boxes and return
canonically sorted multisets, so results are reproducible and easy to
diff against an independent brute-force pass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exactcore import QuadraticFieldElement, squarefree_part


class InfeasibleTargetError(ValueError):
    """Target cannot be a sum of half-coordinate squares (parity fails)."""


def algebraic_integer_check(alpha: int, beta: int, n: int) -> bool:
    """True iff (alpha + beta*sqrt(n))/2 is an algebraic integer."""
    if n < 1 or squarefree_part(n) != n:
        raise ValueError(f"n must be a squarefree positive integer, got {n}")
    return (alpha * alpha - n * beta * beta) % 4 == 0


@dataclass(frozen=True)
class QuadraticTarget:
    """A sum-of-squares instance in the real quadratic field of n.

    rank_terms is the exact number of summands; set
    require_algebraic_integer to False to drop the per-term parity
    congruence (kept on for every bundled case).
    """

    n: int
    target: QuadraticFieldElement
    rank_terms: int
    require_algebraic_integer: bool = True

    def __post_init__(self) -> None:
        if self.n < 2 or squarefree_part(self.n) != self.n:
            raise ValueError(f"n must be squarefree and >= 2, got {self.n}")
        if not (self.target.is_rational or self.target.n == self.n):
            raise ValueError("target lives in a different quadratic field")
        if self.rank_terms < 1:
            raise ValueError("rank_terms must be >= 1")


@dataclass(frozen=True)
class Decomposition:
    """Multiset of (alpha, beta) pairs, stored sorted by (beta, alpha)."""

    terms: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        ordered = tuple(sorted(self.terms, key=lambda t: (t[1], t[0])))
        object.__setattr__(self, "terms", ordered)

    def value(self, n: int) -> QuadraticFieldElement:
        """Re-expand the decomposition: sum of ((alpha + beta*sqrt(n))/2)^2."""
        a_sum = Fraction(0)
        b_sum = Fraction(0)
        for alpha, beta in self.terms:
            a_sum += Fraction(alpha * alpha + n * beta * beta, 2)
            b_sum += alpha * beta
        return QuadraticFieldElement(a_sum, b_sum, n)


def fp_square_constraints(instance: QuadraticTarget) -> tuple[int, int]:
    """Integer constraint pair (A, B) with sum(alpha^2 + n*beta^2) = A
    and sum(alpha*beta) = B for any decomposition of the target.

    A is four times the rational part, B twice the sqrt coefficient;
    a non-integral value means no decomposition can exist.
    """
    t = instance.target
    a4 = 2 * t.a
    b2 = t.b
    if a4.denominator != 1 or b2.denominator != 1:
        raise InfeasibleTargetError(f"4*target = {a4}+{2 * b2}*sqrt({instance.n}) is not integral")
    return int(a4), int(b2)


def enumerate_decompositions(instance: QuadraticTarget) -> list[Decomposition]:
    """All multisets of rank_terms positive pairs reproducing the target.

    Exhaustive: alpha is bounded by sqrt of the remaining quadratic
    budget and beta by sqrt of budget/n, so the search box is finite and
    every solution is visited exactly once in (beta, alpha) order.
    """
    a_total, b_total = fp_square_constraints(instance)
    n = instance.n
    # a sum of nonzero real squares is totally positive, so a target with
    # a negative conjugate admits no decomposition at all
    if not instance.target.is_totally_positive():
        return []
    need_integral = instance.require_algebraic_integer
    out: list[Decomposition] = []
    chosen: list[tuple[int, int]] = []

    def admissible(alpha: int, beta: int) -> bool:
        return not need_integral or algebraic_integer_check(alpha, beta, n)

    def extend(a_rem: int, b_rem: int, k: int, floor: tuple[int, int]) -> None:
        if k == 0:
            if a_rem == 0 and b_rem == 0:
                out.append(Decomposition(tuple(chosen)))
            return
        if a_rem < k * (1 + n) or b_rem < k:
            return
        beta_max = math.isqrt(a_rem // n)
        for beta in range(floor[0], beta_max + 1):
            alpha_lo = floor[1] if beta == floor[0] else 1
            alpha_max = math.isqrt(a_rem - n * beta * beta)
            for alpha in range(alpha_lo, alpha_max + 1):
                if alpha * beta > b_rem or not admissible(alpha, beta):
                    continue
                chosen.append((alpha, beta))
                extend(a_rem - alpha * alpha - n * beta * beta,
                       b_rem - alpha * beta, k - 1, (beta, alpha))
                chosen.pop()

    extend(a_total, b_total, instance.rank_terms, (1, 1))
    for dec in out:
        assert dec.value(n) == instance.target
    return sorted(out, key=lambda d: d.terms)


def enumerate_integer_square_decompositions(
    total: int, term_count: int, divisor_bound: int
) -> list[tuple[int, ...]]:
    """Multisets of term_count positive integers summing to total - 1,
    each dividing divisor_bound.  The unit contributes the subtracted 1.
    """
    if not total >= term_count >= 1:
        raise ValueError(f"need total >= term_count >= 1, got {total}, {term_count}")
    if divisor_bound < 1:
        raise ValueError("divisor_bound must be positive")
    allowed = [d for d in range(1, divisor_bound + 1) if divisor_bound % d == 0]
    goal = total - 1
    out: list[tuple[int, ...]] = []

    def extend(rem: int, k: int, start: int, acc: list[int]) -> None:
        if k == 0:
            if rem == 0:
                out.append(tuple(acc))
            return
        for d in allowed:
            if d < start or d * k > rem:
                continue
            if rem - d > divisor_bound * (k - 1):
                continue
            acc.append(d)
            extend(rem - d, k - 1, d, acc)
            acc.pop()

    extend(goal, term_count, 1, [])
    return sorted(out)
