"""The noncommutative order W<S>/(S^n = p, S a = sigma(a) S) over a Witt ring.

Elements are written sum_{i<n} a_i S^i with a_i in W(F_q) mod p^M.  The two
relations make S-adic valuation v(S) = 1/n the basic filtration tool: every
element has v = min_i (i + n nu_p(a_i)) / n, and its S-adic Teichmuller digit
expansion interleaves the p-adic Teichmuller digits of the coefficients.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

from morava.witt import PrecisionError, WittElem, WittRing, make_ring, teichmuller


@total_ordering
@dataclass(frozen=True)
class SValuation:
    """v(x) = numerator / denominator with denominator = n.

    at_precision_cap marks an element indistinguishable from 0 mod p^M,
    where only the bound v >= n M / n = M is known.
    """

    numerator: int
    denominator: int
    at_precision_cap: bool = False

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def __eq__(self, other):
        if isinstance(other, SValuation):
            return (self.value, self.at_precision_cap) == (other.value, other.at_precision_cap)
        return self.value == other and not self.at_precision_cap

    def __lt__(self, other):
        if isinstance(other, SValuation):
            return self.value < other.value
        return self.value < other

    def __hash__(self):
        return hash((self.value, self.at_precision_cap))

    def __str__(self):
        v = self.value
        text = str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
        return f">= {text}" if self.at_precision_cap else text


class OrderElem:
    """sum a_i S^i, 0 <= i < n, with Witt coefficients a_i."""

    __slots__ = ("ring", "parts")

    def __init__(self, ring: WittRing, parts: tuple):
        self.ring = ring
        self.parts = parts

    def _check(self, other):
        if self.ring is not other.ring:
            raise ValueError("incompatible rings")

    def __add__(self, other):
        self._check(other)
        return OrderElem(self.ring, tuple(a + b for a, b in zip(self.parts, other.parts)))

    def __sub__(self, other):
        self._check(other)
        return OrderElem(self.ring, tuple(a - b for a, b in zip(self.parts, other.parts)))

    def __neg__(self):
        return OrderElem(self.ring, tuple(-a for a in self.parts))

    def __mul__(self, other):
        self._check(other)
        ring = self.ring
        n = ring.n
        p = ring.params.p
        acc = [ring.zero() for _ in range(n)]
        for i, ai in enumerate(self.parts):
            if ai.is_zero:
                continue
            for j, bj in enumerate(other.parts):
                if bj.is_zero:
                    continue
                term = ai * bj.frobenius(i)
                k = i + j
                if k >= n:
                    k -= n
                    term = term.scale(p)
                acc[k] = acc[k] + term
        return OrderElem(ring, tuple(acc))

    def scale(self, c: int) -> "OrderElem":
        return OrderElem(self.ring, tuple(a.scale(c) for a in self.parts))

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = order_one(self.ring)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            base = base * base
        return result

    def __eq__(self, other):
        return (
            isinstance(other, OrderElem)
            and self.ring is other.ring
            and self.parts == other.parts
        )

    def __hash__(self):
        return hash((id(self.ring), tuple(a.coords for a in self.parts)))

    @property
    def is_zero(self) -> bool:
        return all(a.is_zero for a in self.parts)

    @property
    def is_unit(self) -> bool:
        return self.parts[0].is_unit

    def galois_sigma(self, k: int = 1) -> "OrderElem":
        """Coefficientwise Frobenius; this is conjugation by S."""
        return OrderElem(self.ring, tuple(a.frobenius(k) for a in self.parts))

    def s_valuation(self) -> SValuation:
        n = self.ring.n
        M = self.ring.params.M
        best = None
        for i, ai in enumerate(self.parts):
            if ai.is_zero:
                continue
            v = i + n * ai.valuation()
            if best is None or v < best:
                best = v
        if best is None:
            return SValuation(n * M, n, at_precision_cap=True)
        return SValuation(best, n)

    def s_digits(self, count: int) -> list:
        """First `count` S-adic Teichmuller digits, elements of F_q."""
        n = self.ring.n
        if count > n * self.ring.params.M:
            raise ValueError("digit count exceeds precision")
        per = [(count - i + n - 1) // n for i in range(n)]
        cols = [
            self.parts[i].teich_digits(per[i]) if per[i] > 0 else [] for i in range(n)
        ]
        return [cols[k % n][k // n] for k in range(count)]

    def inverse(self) -> "OrderElem":
        """Two-sided inverse of a unit, by Newton iteration y <- y(2 - xy)."""
        if not self.is_unit:
            raise ValueError("not a unit in the order")
        ring = self.ring
        y = from_witt(ring, self.parts[0].inverse())
        one = order_one(ring)
        steps = (ring.n * ring.params.M).bit_length() + 2
        for _ in range(steps):
            err = one - self * y
            if err.is_zero:
                break
            y = y + y * err
        if self * y != one or y * self != one:
            raise PrecisionError("unit inversion failed to converge")
        return y

    def to_json(self) -> dict:
        return {
            "p": self.ring.params.p,
            "n": self.ring.n,
            "M": self.ring.params.M,
            "coeffs": [list(a.coords) for a in self.parts],
        }

    def __repr__(self):
        terms = []
        for i, a in enumerate(self.parts):
            if a.is_zero:
                continue
            body = repr(a)
            if i == 0:
                terms.append(body)
                continue
            sp = "S" if i == 1 else f"S^{i}"
            if body == "1":
                terms.append(sp)
            else:
                wrapped = f"({body})" if " + " in body else body
                terms.append(f"{wrapped}*{sp}")
        return " + ".join(terms) if terms else "0"


# constructors ---------------------------------------------------------------


def order_zero(ring: WittRing) -> OrderElem:
    return OrderElem(ring, tuple(ring.zero() for _ in range(ring.n)))


def order_one(ring: WittRing) -> OrderElem:
    return from_witt(ring, ring.one())


def from_witt(ring: WittRing, w: WittElem) -> OrderElem:
    parts = [w] + [ring.zero()] * (ring.n - 1)
    return OrderElem(ring, tuple(parts))


def from_int(ring: WittRing, c: int) -> OrderElem:
    return from_witt(ring, ring.from_int(c))


def s_gen(ring: WittRing) -> OrderElem:
    """The uniformizer S; equal to p when n = 1."""
    if ring.n == 1:
        return from_int(ring, ring.params.p)
    parts = [ring.zero() for _ in range(ring.n)]
    parts[1] = ring.one()
    return OrderElem(ring, tuple(parts))


def from_coeff_rows(ring: WittRing, rows) -> OrderElem:
    rows = list(rows)
    if len(rows) != ring.n:
        raise ValueError(f"need {ring.n} coefficient rows")
    return OrderElem(ring, tuple(ring.from_coords(r) for r in rows))


def from_digits(ring: WittRing, digits) -> OrderElem:
    """Assemble sum teich(d_k) S^k from S-adic digits (F_q elements)."""
    n = ring.n
    parts = [ring.zero() for _ in range(n)]
    for k, d in enumerate(digits):
        i, j = k % n, k // n
        if j >= ring.params.M:
            raise ValueError("digit count exceeds precision")
        lift = teichmuller(ring, d)
        parts[i] = parts[i] + lift.scale(ring.params.p ** j)
    return OrderElem(ring, tuple(parts))


def from_json(data) -> OrderElem:
    if isinstance(data, str):
        data = json.loads(data)
    ring = make_ring(int(data["p"]), int(data["n"]), int(data["M"]))
    return from_coeff_rows(ring, data["coeffs"])
