"""Candidate enumeration for formal-codegree conjugate families.

A classification branch fixes some rational codegrees and leaves one
Galois orbit of unknown ones.  The class equation forces the two
trailing elementary symmetric functions of that orbit, so candidates
form a one-parameter family of monic integer polynomials.  This module
derives the forced data, scans the free coefficient, and runs each
candidate through an ordered filter pipeline, emitting a Certificate
that records every verdict and the first failure.

Three scan shapes cover the branches that occur:

* codegree scan (ClassEquationInstance): orbit of degree 1..3 with the
  product and next symmetric function forced;
* quadratic sum scan (QuadraticScanInstance): orbits x^2 - b x + a with
  a dividing a fixed number and b ranged by explicit inequalities, plus
  field and squared-dimension conditions;
* dimension pair scan (DimensionPairInstance): x^2 - t x + m with fixed
  trace t and scanned constant m.

All arithmetic is exact; no filter ever sees a floating-point number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from typing import Optional, Union

from .algint import (
    in_cyclic_cubic_field,
    is_d_number,
    is_totally_real,
    passes_cyclotomic_test,
    quadratic_subfield_in_cyclotomic,
)
from .exactcore import (
    IntPolynomial,
    Interval,
    QuadraticFieldElement,
    UnsupportedDegreeError,
    factor_over_rationals,
    fraction_sqrt,
    isolate_real_roots,
    poly_discriminant,
    rational_roots,
    refine_interval,
    squarefree_part,
    sturm_real_root_count,
)


class InfeasibleInstanceError(ValueError):
    """The fixed codegrees already exhaust the class equation."""


class ScanSoundnessError(RuntimeError):
    """A boundary candidate just past the default scan range did not
    fail the real-roots filters, so the default range cannot be trusted."""


class UnsupportedSquareClassError(ValueError):
    """The squared-dimension value falls outside the decidable cases."""


FILTER_D_NUMBER = "d-number"
FILTER_TOTALLY_REAL = "totally-real"
FILTER_POSITIVE_BOUNDED = "totally-positive-bounded"
FILTER_TOTALLY_POSITIVE = "totally-positive"
FILTER_CYCLOTOMIC = "cyclotomic"
FILTER_MEMBERSHIP = "membership"
FILTER_SUBFIELD = "subfield-exclusion"
FILTER_REQUIRED_FIELD = "required-field"
FILTER_DIM_SQUARE = "dim-square"


@dataclass(frozen=True)
class FilterResult:
    name: str
    passed: bool
    witness: Optional[dict] = None


@dataclass(frozen=True)
class Certificate:
    """Audit record for one candidate polynomial.

    filter_results lists every filter that ran, in pipeline order,
    ending at the first failure; survived means none failed.
    """

    candidate: IntPolynomial
    filter_results: tuple[FilterResult, ...]
    survived: bool

    def __post_init__(self) -> None:
        if self.survived != all(r.passed for r in self.filter_results):
            raise ValueError("survived flag contradicts filter results")

    @property
    def failed_filter(self) -> Optional[str]:
        for r in self.filter_results:
            if not r.passed:
                return r.name
        return None


@dataclass(frozen=True)
class ClassEquationInstance:
    """One classification branch: fixed rational codegrees plus a single
    orbit of orbit_degree unknown ones.

    product_feasibility chooses how hard admissible_products prunes:
    "coarse" keeps every product above the bound product, "real-roots"
    additionally demands a real positive root family can exist.
    """

    global_dim: int
    fixed_codegrees: tuple[Fraction, ...]
    orbit_degree: int
    product_divides: Optional[int] = None
    root_lower_bounds: tuple[Fraction, ...] = ()
    product_feasibility: str = "coarse"
    membership_conductor: Optional[int] = None
    excluded_quadratic_subfields: tuple[tuple[int, int], ...] = ()
    scan_range: Optional[tuple[int, int]] = None

    def __post_init__(self) -> None:
        if self.global_dim < 1:
            raise ValueError("global_dim must be positive")
        if self.orbit_degree < 1:
            raise ValueError("orbit_degree must be positive")
        object.__setattr__(self, "fixed_codegrees",
                           tuple(Fraction(f) for f in self.fixed_codegrees))
        if any(f <= 0 for f in self.fixed_codegrees):
            raise ValueError("fixed codegrees must be positive")
        if self.product_divides is None:
            object.__setattr__(self, "product_divides",
                               self.global_dim ** self.orbit_degree)
        if self.product_divides < 1:
            raise ValueError("product_divides must be positive")
        object.__setattr__(self, "root_lower_bounds",
                           tuple(Fraction(b) for b in self.root_lower_bounds))
        if self.product_feasibility not in ("coarse", "real-roots"):
            raise ValueError(f"unknown feasibility mode {self.product_feasibility!r}")
        if self.scan_range is not None and self.scan_range[0] > self.scan_range[1]:
            raise ValueError("empty scan_range")


def residual_target(instance: ClassEquationInstance) -> Fraction:
    """Share of the class equation left for the unknown orbit:
    1 minus the reciprocals of the fixed codegrees."""
    r = Fraction(1) - sum((Fraction(1) / f for f in instance.fixed_codegrees), Fraction(0))
    if r <= 0:
        raise InfeasibleInstanceError(f"fixed codegrees leave residual {r} <= 0")
    return r


def _divisors(m: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= m:
        if m % d == 0:
            small.append(d)
            if d != m // d:
                large.append(m // d)
        d += 1
    return small + large[::-1]


def _integer_cube_ceiling(m: int) -> int:
    c = round(m ** (1 / 3))
    while c ** 3 > m:
        c -= 1
    while c ** 3 < m:
        c += 1
    return c


def _real_triple_feasible(product: int, ratio: Fraction, smallest_bound: Fraction) -> bool:
    """Whether real f1 <= f2 <= f3 with f1 > smallest_bound can have
    product P and second symmetric function ratio*P.

    Fixing the smallest root t forces the other two to have sum
    P(ratio*t - 1)/t^2 and product P/t; they are real exactly when
    H(t) = P(num*t - den)^2 - 4 den^2 t^3 >= 0, and the smallest root
    never exceeds the cube root of P.
    """
    num, den = ratio.numerator, ratio.denominator
    h = (IntPolynomial((-den, num)) * IntPolynomial((-den, num))) * product \
        + IntPolynomial((0, 0, 0, -4 * den * den))
    upper = Fraction(_integer_cube_ceiling(product))
    if h.evaluate(smallest_bound) > 0 or h.evaluate(upper) >= 0:
        return True
    window = Interval(smallest_bound, upper, lo_open=True, hi_open=False)
    return sturm_real_root_count(h.squarefree_part(), window) >= 1


def admissible_products(instance: ClassEquationInstance) -> list[int]:
    """Divisors of product_divides that can be the product of the orbit.

    Kept products P have r*P a positive integer and exceed the product
    of the root lower bounds; in "real-roots" mode a quadratic orbit
    must also have positive discriminant and a cubic orbit must pass
    the real-family window test.
    """
    r = residual_target(instance)
    bound_product = Fraction(1)
    for b in instance.root_lower_bounds:
        bound_product *= b
    out = []
    for p in _divisors(instance.product_divides):
        e = r * p
        if e.denominator != 1:
            continue
        if not p > bound_product:
            continue
        if instance.product_feasibility == "real-roots":
            if instance.orbit_degree == 2 and not e * e - 4 * p > 0:
                continue
            if instance.orbit_degree == 3:
                bounds = sorted(instance.root_lower_bounds)
                smallest = bounds[0] if bounds else Fraction(0)
                if not _real_triple_feasible(p, r, smallest):
                    continue
        out.append(p)
    return out


@dataclass(frozen=True)
class CoefficientAssignment:
    """Forced trailing coefficients of the orbit polynomial."""

    product: int
    forced_next: int
    orbit_degree: int

    def assemble(self, leading_sum: Optional[int] = None) -> IntPolynomial:
        """Monic polynomial with the forced data; a cubic needs the free
        coefficient leading_sum (= sum of roots)."""
        n = self.orbit_degree
        if n == 1:
            return IntPolynomial((-self.product, 1))
        if n == 2:
            if leading_sum is not None and leading_sum != self.forced_next:
                raise ValueError("quadratic orbit has no free coefficient")
            return IntPolynomial((self.product, -self.forced_next, 1))
        if leading_sum is None:
            raise ValueError("cubic orbit needs the free coefficient")
        return IntPolynomial((-self.product, self.forced_next, -leading_sum, 1))


def forced_coefficients(instance: ClassEquationInstance, product: int) -> CoefficientAssignment:
    """e_n = product and e_(n-1) = residual*product; the rest is free."""
    r = residual_target(instance)
    e = r * product
    if e.denominator != 1:
        raise ValueError(f"product {product} rejected: residual*product = {e} is not an integer")
    return CoefficientAssignment(product, int(e), instance.orbit_degree)


# ---------------------------------------------------------------------------
# exact root handles

@dataclass(frozen=True)
class _CubicRoot:
    factor: IntPolynomial
    interval: Interval


_RootHandle = Union[Fraction, QuadraticFieldElement, _CubicRoot]


def _shrink(handle: _CubicRoot) -> _CubicRoot:
    iv = handle.interval
    refined = refine_interval(handle.factor, iv, iv.width() / 4)
    return _CubicRoot(handle.factor, refined)


def _handle_vs_scalar(handle: _CubicRoot, x) -> int:
    # x rational or quadratic; the cubic root is irrational of degree 3,
    # so equality is impossible and refinement terminates
    h = handle
    while True:
        if x <= h.interval.lo:
            return 1
        if x >= h.interval.hi:
            return -1
        h = _shrink(h)


def _handle_cmp(a: _RootHandle, b: _RootHandle) -> int:
    if isinstance(a, _CubicRoot) and isinstance(b, _CubicRoot):
        if a.factor == b.factor and a.interval == b.interval:
            return 0
        x, y = a, b
        while True:
            if x.interval.hi <= y.interval.lo:
                return -1
            if y.interval.hi <= x.interval.lo:
                return 1
            x, y = _shrink(x), _shrink(y)
    if isinstance(a, _CubicRoot):
        return _handle_vs_scalar(a, b)
    if isinstance(b, _CubicRoot):
        return -_handle_vs_scalar(b, a)
    if a == b:
        return 0
    return -1 if a < b else 1


def _handle_gt_bound(handle: _RootHandle, bound: Fraction) -> bool:
    if isinstance(handle, _CubicRoot):
        return _handle_vs_scalar(handle, bound) > 0
    return handle > bound


def _handle_str(handle: _RootHandle) -> str:
    if isinstance(handle, _CubicRoot):
        h = handle
        while h.interval.width() > Fraction(1, 1024):
            h = _shrink(h)
        return f"({h.interval.lo}, {h.interval.hi})"
    return str(handle)


def _real_root_handles(p: IntPolynomial) -> Optional[list[_RootHandle]]:
    """All roots of p as exact handles, ascending with multiplicity, or
    None when some root is not real."""
    handles: list[_RootHandle] = []
    for f in factor_over_rationals(p):
        if f.degree == 1:
            handles.append(Fraction(-f.coeffs[0], f.coeffs[1]))
        elif f.degree == 2:
            c, b, a = f.coeffs
            disc = b * b - 4 * a * c
            if disc < 0:
                return None
            n = squarefree_part(disc)
            s = math.isqrt(disc // n)
            handles.append(QuadraticFieldElement(Fraction(-b, a), Fraction(-s, a), n))
            handles.append(QuadraticFieldElement(Fraction(-b, a), Fraction(s, a), n))
        elif f.degree == 3:
            isolated = isolate_real_roots(f)
            if len(isolated) < 3:
                return None
            handles.extend(_CubicRoot(f, iv) for iv in isolated)
        else:
            raise UnsupportedDegreeError(f"cannot take exact roots of degree {f.degree}")
    return sorted(handles, key=cmp_to_key(_handle_cmp))


# ---------------------------------------------------------------------------
# the codegree filter pipeline

def _filter_d_number(p: IntPolynomial) -> FilterResult:
    verdict = is_d_number(p)
    witness = None if verdict.passes else {"failing_index": verdict.failing_index}
    return FilterResult(FILTER_D_NUMBER, verdict.passes, witness)


def _filter_totally_real(p: IntPolynomial) -> FilterResult:
    sf = p.squarefree_part()
    count = sturm_real_root_count(sf)
    ok = count == sf.degree
    witness = None if ok else {"real_root_count": count, "distinct_root_count": sf.degree}
    return FilterResult(FILTER_TOTALLY_REAL, ok, witness)


def _filter_positive_bounded(p: IntPolynomial, bounds: tuple[Fraction, ...]) -> FilterResult:
    handles = _real_root_handles(p)
    if handles is None:
        return FilterResult(FILTER_POSITIVE_BOUNDED, False, {"reason": "non-real roots"})
    padded = sorted(bounds)[: len(handles)]
    padded += [Fraction(0)] * (len(handles) - len(padded))
    for handle, bound in zip(handles, padded):
        if not _handle_gt_bound(handle, bound):
            return FilterResult(
                FILTER_POSITIVE_BOUNDED, False,
                {"root": _handle_str(handle), "bound": str(bound)},
            )
    return FilterResult(FILTER_POSITIVE_BOUNDED, True)


def _filter_cyclotomic(p: IntPolynomial) -> FilterResult:
    ok = passes_cyclotomic_test(p)
    witness = None if ok else {"discriminant": str(poly_discriminant(p))}
    return FilterResult(FILTER_CYCLOTOMIC, ok, witness)


def _filter_membership(p: IntPolynomial, conductor: int) -> FilterResult:
    for f in factor_over_rationals(p):
        if f.degree == 1:
            continue
        if f.degree == 2:
            c, b, a = f.coeffs
            disc = b * b - 4 * a * c
            return FilterResult(
                FILTER_MEMBERSHIP, False,
                {"quadratic_factor": list(f.coeffs),
                 "field_squarefree_part": squarefree_part(disc),
                 "conductor": conductor},
            )
        if not in_cyclic_cubic_field(f, conductor):
            return FilterResult(FILTER_MEMBERSHIP, False, {"conductor": conductor})
    return FilterResult(FILTER_MEMBERSHIP, True)


def _filter_subfield_exclusion(
    p: IntPolynomial, excluded: tuple[tuple[int, int], ...]
) -> FilterResult:
    rationals = [str(r) for r in rational_roots(p)]
    for f in factor_over_rationals(p):
        if f.degree != 2:
            continue
        c, b, a = f.coeffs
        d = squarefree_part(b * b - 4 * a * c)
        for d_excluded, modulus in excluded:
            if d == d_excluded and not quadratic_subfield_in_cyclotomic(d, modulus):
                return FilterResult(
                    FILTER_SUBFIELD, False,
                    {"rational_roots": rationals,
                     "quadratic_factor": list(f.coeffs),
                     "field_squarefree_part": d,
                     "excluded_pair": [d_excluded, modulus]},
                )
    return FilterResult(FILTER_SUBFIELD, True)


def run_filter_pipeline(
    p: IntPolynomial,
    instance: ClassEquationInstance,
    disabled_filters: frozenset[str] = frozenset(),
) -> Certificate:
    """Run the canonical pipeline on one monic candidate.

    Order: d-number, totally-real, per-root lower bounds, cyclotomic,
    then the optional membership and subfield-exclusion filters.
    Evaluation stops at the first failure.  disabled_filters skips
    filters by name; it exists for load-bearing tests, not case files.
    """
    if not p.is_monic:
        raise ValueError("pipeline candidates must be monic")
    steps = [(FILTER_D_NUMBER, lambda: _filter_d_number(p)),
             (FILTER_TOTALLY_REAL, lambda: _filter_totally_real(p)),
             (FILTER_POSITIVE_BOUNDED,
              lambda: _filter_positive_bounded(p, instance.root_lower_bounds)),
             (FILTER_CYCLOTOMIC, lambda: _filter_cyclotomic(p))]
    if instance.membership_conductor is not None:
        conductor = instance.membership_conductor
        steps.append((FILTER_MEMBERSHIP, lambda: _filter_membership(p, conductor)))
    if instance.excluded_quadratic_subfields:
        steps.append((FILTER_SUBFIELD,
                      lambda: _filter_subfield_exclusion(p, instance.excluded_quadratic_subfields)))
    results = []
    for name, runner in steps:
        if name in disabled_filters:
            continue
        result = runner()
        results.append(result)
        if not result.passed:
            break
    return Certificate(p, tuple(results), all(r.passed for r in results))


def _survivors_first(certs: list[Certificate]) -> list[Certificate]:
    return [c for c in certs if c.survived] + [c for c in certs if not c.survived]


def _assert_survivor_sign_pattern(cert: Certificate) -> None:
    # totally positive degree-n polynomials alternate coefficient signs
    p = cert.candidate
    n = p.degree
    for i in range(n + 1):
        c = p.coeffs[n - i]
        assert c == 0 or (c > 0) == (i % 2 == 0), f"sign pattern broken in {p}"


def enumerate_candidates(
    instance: ClassEquationInstance,
    disabled_filters: frozenset[str] = frozenset(),
) -> list[Certificate]:
    """Certificates for every candidate of the instance, survivors first.

    For a cubic orbit the free coefficient runs over scan_range (default
    [1, forced e2]) restricted to values whose assembled polynomial is a
    d-number; when the default range is used, the polynomial just past
    its top must fail the real-roots filters, which certifies that no
    totally positive candidate was cut off.
    """
    n = instance.orbit_degree
    if n > 3:
        raise UnsupportedDegreeError(f"orbit degree {n} not supported")
    certs: list[Certificate] = []
    for product in admissible_products(instance):
        assignment = forced_coefficients(instance, product)
        if n in (1, 2):
            certs.append(run_filter_pipeline(assignment.assemble(), instance, disabled_filters))
            continue
        if instance.scan_range is not None:
            lo, hi = instance.scan_range
        else:
            lo, hi = 1, assignment.forced_next
            boundary = assignment.assemble(hi + 1)
            real = _filter_totally_real(boundary).passed
            bounded = _filter_positive_bounded(boundary, instance.root_lower_bounds).passed
            if real and bounded:
                raise ScanSoundnessError(
                    f"boundary candidate {boundary} passes the real-roots filters")
        for e1 in range(lo, hi + 1):
            p = assignment.assemble(e1)
            if FILTER_D_NUMBER not in disabled_filters and not is_d_number(p).passes:
                continue
            certs.append(run_filter_pipeline(p, instance, disabled_filters))
    for cert in certs:
        if cert.survived:
            _assert_survivor_sign_pattern(cert)
    return _survivors_first(certs)


# ---------------------------------------------------------------------------
# quadratic sum scan

@dataclass(frozen=True)
class QuadraticScanInstance:
    """Scan x^2 - b x + a over a | product_divides, b > trace_exceeds,
    b <= trace_ratio_max * a, with the orbit field pinned to
    Q(sqrt(required_field)) and the squared-dimension condition chosen
    by dim_square_mode ("field" or "cyclotomic")."""

    global_dim: int
    product_divides: int
    trace_exceeds: int
    trace_ratio_max: Fraction
    required_field: int
    dim_square_mode: str = "field"
    cyclotomic_modulus: Optional[int] = None

    def __post_init__(self) -> None:
        if self.global_dim < 1 or self.product_divides < 1:
            raise ValueError("dimensions must be positive")
        object.__setattr__(self, "trace_ratio_max", Fraction(self.trace_ratio_max))
        if self.required_field < 2 or squarefree_part(self.required_field) != self.required_field:
            raise ValueError("required_field must be squarefree and >= 2")
        if self.dim_square_mode not in ("field", "cyclotomic"):
            raise ValueError(f"unknown dim_square_mode {self.dim_square_mode!r}")
        if self.dim_square_mode == "cyclotomic" and self.cyclotomic_modulus is None:
            raise ValueError("cyclotomic mode needs cyclotomic_modulus")


def _filter_totally_positive(p: IntPolynomial) -> FilterResult:
    c, b, _ = p.coeffs
    disc = b * b - 4 * c
    ok = disc >= 0 and -b > 0 and c > 0
    witness = None if ok else {"discriminant": str(disc)}
    return FilterResult(FILTER_TOTALLY_POSITIVE, ok, witness)


def _filter_required_field(p: IntPolynomial, n: int) -> FilterResult:
    c, b, _ = p.coeffs
    disc = b * b - 4 * c
    if disc > 0 and squarefree_part(disc) == n:
        return FilterResult(FILTER_REQUIRED_FIELD, True)
    return FilterResult(
        FILTER_REQUIRED_FIELD, False,
        {"discriminant": str(disc),
         "squarefree_part": squarefree_part(disc) if disc > 0 else None},
    )


def _rational_squarefree_part(q: Fraction) -> int:
    return squarefree_part(q.numerator * q.denominator)


def _filter_dim_square(p: IntPolynomial, instance: QuadraticScanInstance) -> FilterResult:
    n = instance.required_field
    c, b, _ = p.coeffs
    disc = b * b - 4 * c
    s = math.isqrt(disc // n)
    largest_root = QuadraticFieldElement(Fraction(-b), Fraction(s), n)
    q = QuadraticFieldElement.from_rational(Fraction(instance.global_dim), n) / largest_root
    if q.sqrt() is not None:
        if instance.dim_square_mode == "field":
            return FilterResult(FILTER_DIM_SQUARE, True)
        if quadratic_subfield_in_cyclotomic(n, instance.cyclotomic_modulus):
            return FilterResult(FILTER_DIM_SQUARE, True)
        return FilterResult(
            FILTER_DIM_SQUARE, False,
            {"dim_square": str(q), "field": n, "modulus": instance.cyclotomic_modulus},
        )
    if instance.dim_square_mode == "field":
        return FilterResult(FILTER_DIM_SQUARE, False, {"dim_square": str(q)})
    norm_root = fraction_sqrt(q.norm())
    if norm_root is None:
        raise UnsupportedSquareClassError(
            f"norm of {q} is not a rational square; its square root generates "
            "a quartic field outside the decidable biquadratic case")
    modulus = instance.cyclotomic_modulus
    trace = q.trace()
    checks = [n]
    for t in (trace + 2 * norm_root, trace - 2 * norm_root):
        d = _rational_squarefree_part(t)
        if d != 1:
            checks.append(d)
    for d in checks:
        if not quadratic_subfield_in_cyclotomic(d, modulus):
            return FilterResult(
                FILTER_DIM_SQUARE, False,
                {"dim_square": str(q), "norm_sqrt": str(norm_root),
                 "subfield": d, "modulus": modulus},
            )
    return FilterResult(FILTER_DIM_SQUARE, True)


def enumerate_quadratic_scan(instance: QuadraticScanInstance) -> list[Certificate]:
    """Certificates for the quadratic sum scan, survivors first.

    Candidates are generated already satisfying the d-number
    divisibility (a | b^2), which the certificate records, then pass
    through totally-positive, required-field, and dim-square filters.
    """
    certs = []
    for a in _divisors(instance.product_divides):
        b_top = math.floor(instance.trace_ratio_max * a)
        for b in range(instance.trace_exceeds + 1, b_top + 1):
            if (b * b) % a:
                continue
            p = IntPolynomial((a, -b, 1))
            results = []
            for runner in (
                lambda: _filter_d_number(p),
                lambda: _filter_totally_positive(p),
                lambda: _filter_required_field(p, instance.required_field),
                lambda: _filter_dim_square(p, instance),
            ):
                result = runner()
                results.append(result)
                if not result.passed:
                    break
            certs.append(Certificate(p, tuple(results), all(r.passed for r in results)))
    return _survivors_first(certs)


# ---------------------------------------------------------------------------
# dimension pair scan

@dataclass(frozen=True)
class DimensionPairInstance:
    """Scan x^2 - trace x + m for m over an inclusive range; candidates
    must be d-numbers with all roots real."""

    trace: int
    constant_range: tuple[int, int]

    def __post_init__(self) -> None:
        if self.trace < 1:
            raise ValueError("trace must be positive")
        lo, hi = self.constant_range
        if lo > hi or lo < 1:
            raise ValueError("constant_range must be a nonempty positive range")


def enumerate_dimension_pairs(instance: DimensionPairInstance) -> list[Certificate]:
    """Certificates x^2 - trace x + m for every m in range, survivors
    first; the pipeline is d-number then totally-real."""
    certs = []
    lo, hi = instance.constant_range
    for m in range(lo, hi + 1):
        p = IntPolynomial((m, -instance.trace, 1))
        results = [_filter_d_number(p)]
        if results[-1].passed:
            results.append(_filter_totally_real(p))
        certs.append(Certificate(p, tuple(results), all(r.passed for r in results)))
    return _survivors_first(certs)
