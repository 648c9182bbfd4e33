"""The unit group of the order: filtration, commutators, norms, splitting.

A unit is strict when it is congruent to 1 mod S; the S-adic valuation of
x - 1 defines the filtration, and the leading S-digit of x - 1 is the image
of x in the associated graded group (an F_q line at each level k/n).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from morava.order import OrderElem, SValuation, from_int, from_witt, order_one, s_gen
from morava.padic import PadicInt, nth_root_one_unit, unit_inverse
from morava.witt import FqElem, PrecisionError, WittRing, teichmuller


class StabElem:
    """A unit of the order; group operations only."""

    __slots__ = ("elem",)

    def __init__(self, elem: OrderElem):
        if not elem.is_unit:
            raise ValueError("not a unit, so not in the stabilizer group")
        self.elem = elem

    @property
    def ring(self) -> WittRing:
        return self.elem.ring

    @property
    def is_strict(self) -> bool:
        """True when x = 1 mod S, i.e. the filtration level is positive."""
        return self.elem.parts[0].residue() == self.ring.fq.one

    def __mul__(self, other: "StabElem") -> "StabElem":
        return StabElem(self.elem * other.elem)

    def inverse(self) -> "StabElem":
        return StabElem(self.elem.inverse())

    def __pow__(self, e: int) -> "StabElem":
        if e < 0:
            return self.inverse() ** (-e)
        return StabElem(self.elem ** e)

    def __eq__(self, other):
        return isinstance(other, StabElem) and self.elem == other.elem

    def __hash__(self):
        return hash(self.elem)

    def __repr__(self):
        return repr(self.elem)


@dataclass(frozen=True)
class GrElem:
    """A graded piece: level k/n together with the leading S-digit of x - 1."""

    k: int
    digit: FqElem

    @property
    def level(self) -> Fraction:
        return Fraction(self.k, self.digit.field.n)

    def __repr__(self):
        return f"gr[{self.level}]({self.digit!r})"


def identity(ring: WittRing) -> StabElem:
    return StabElem(order_one(ring))


def commutator(x: StabElem, y: StabElem) -> StabElem:
    """x y x^-1 y^-1, computed as (xy)(yx)^-1 with a single inversion."""
    xy = x.elem * y.elem
    yx = y.elem * x.elem
    return StabElem(xy * yx.inverse())


def filtration_level(x: StabElem) -> SValuation:
    return (x.elem - order_one(x.ring)).s_valuation()


def gr_project(x: StabElem) -> GrElem:
    diff = x.elem - order_one(x.ring)
    v = diff.s_valuation()
    if v.at_precision_cap:
        raise ValueError("element is trivial at this precision; no graded image")
    return GrElem(v.numerator, diff.s_digits(v.numerator + 1)[v.numerator])


def default_order_bound(ring: WittRing) -> int:
    """Torsion bound: prime-to-p part divides q - 1, p-part dies past precision."""
    p, M, n = ring.params.p, ring.params.M, ring.n
    ppow = 1
    while ppow < n * M:
        ppow *= p
    return min(lcm(ring.q - 1, ppow), 1000)


def element_order(x: StabElem, bound: int | None = None) -> int | None:
    """Smallest m <= bound with x^m = 1 at precision, else None."""
    if bound is None:
        bound = default_order_bound(x.ring)
    one = identity(x.ring)
    cur = x
    for m in range(1, bound + 1):
        if cur == one:
            return m
        cur = cur * x
    return None


def torus_embed(ring: WittRing, x: FqElem) -> StabElem:
    """Teichmuller lift of a nonzero residue, embedded along the maximal torus."""
    if x.is_zero:
        raise ValueError("zero has no Teichmuller unit")
    return StabElem(from_witt(ring, teichmuller(ring, x)))


def order3_element(ring: WittRing) -> StabElem:
    """The unit -(1 + wS)/2 of the (3, 2) order, which has exact order 3."""
    p, n = ring.params.p, ring.n
    if (p, n) != (3, 2):
        raise ValueError("defined for p = 3, n = 2 only")
    c = (-unit_inverse(PadicInt(ring.params, 2))).value
    a = (order_one(ring) + from_witt(ring, ring.omega) * s_gen(ring)).scale(c)
    return StabElem(a)


def reduced_norm(x: OrderElem) -> PadicInt:
    """Determinant of right multiplication by x on the S-power basis.

    The result is Galois-invariant, so it lies in Z_p; a non-scalar
    determinant means the construction lost exactness and raises.
    """
    ring = x.ring
    n = ring.n
    p = ring.params.p
    a = x.parts
    m = [[None] * n for _ in range(n)]
    for i in range(n):
        for k in range(n):
            if k >= i:
                m[k][i] = a[k - i].frobenius(i)
            else:
                m[k][i] = a[n + k - i].frobenius(i).scale(p)
    det = _det(m, ring)
    if any(det.coords[1:]):
        raise PrecisionError("reduced norm not Galois-invariant at precision")
    return PadicInt(ring.params, det.coords[0])


def _det(m, ring: WittRing):
    n = len(m)
    if n == 1:
        return m[0][0]
    total = ring.zero()
    # Laplace expansion along the first row; n stays small here
    for j in range(n):
        if m[0][j].is_zero:
            continue
        minor = [[m[r][c] for c in range(n) if c != j] for r in range(1, n)]
        term = m[0][j] * _det(minor, ring)
        total = total + term if j % 2 == 0 else total - term
    return total


def s1_split(x: StabElem) -> tuple:
    """Factor x = x1 * z with z a central scalar and N(x1) = 1 exactly.

    Needs p not dividing n (take the central n-th root of the norm).
    Returns (x1, z) with z a PadicInt.
    """
    ring = x.ring
    p, n = ring.params.p, ring.n
    if n % p == 0:
        raise ValueError("splitting undefined when p divides n")
    norm = reduced_norm(x.elem)
    z = nth_root_one_unit(norm, n)
    x1 = StabElem(x.elem.scale(unit_inverse(z).value))
    if reduced_norm(x1.elem).value != 1:
        raise PrecisionError("norm-one factor failed to normalize")
    return x1, z


def in_K(x: StabElem) -> bool:
    """Membership in the kernel subgroup K of the (3, 2) norm-one group.

    A norm-one unit lies in K when the level-1/2 digit of x - 1 is in the
    prime field F_3 inside F_9.
    """
    ring = x.ring
    if (ring.params.p, ring.n) != (3, 2):
        raise ValueError("defined for p = 3, n = 2 only")
    if reduced_norm(x.elem).value != 1:
        raise ValueError("not in the norm-one subgroup")
    diff = x.elem - order_one(ring)
    if diff.is_zero:
        return True
    d1 = diff.s_digits(2)[1]
    return d1.coeffs[1] == 0
