"""The graded Lie structure on the unit filtration and its abelianization.

Each graded piece of the strict unit filtration is a copy of F_q indexed by
a level k/n.  Commutators induce a bracket, the p-th power map induces an
operator P between levels, and both are verified here by brute force against
the group operations.  The abelianization report assembles H_1 from the
level quotients Q_k = F_q / D_k (D_k the span of incoming brackets) chained
together by the induced P operators.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from morava.order import from_witt, order_one, s_gen
from morava.padic import INF, CyclicDecomp
from morava.stabilizer import (
    GrElem,
    StabElem,
    commutator,
    filtration_level,
    gr_project,
)
from morava.witt import Fq, FqElem, fq_field, make_ring, teichmuller

__all__ = [
    "GrElem",
    "GrSubspace",
    "gr_project",
    "gr_bracket",
    "gr_power",
    "check_bracket_vs_group",
    "check_power_vs_group",
    "commutator_span",
    "trace_kernel",
    "full_space",
    "predicted_span",
    "abelianization_report",
    "AbelianizationReport",
    "CheckReport",
]

_BRUTE_FORCE_LIMIT = 1 << 16


# ---------------------------------------------------------------------------
# F_p-subspaces of F_q


class GrSubspace:
    """An F_p-subspace of F_q kept in reduced row echelon form."""

    def __init__(self, field: Fq):
        self.field = field
        self._rows = []  # coefficient tuples over F_p, RREF, pivots ascending

    @property
    def dim(self) -> int:
        return len(self._rows)

    def copy(self) -> "GrSubspace":
        out = GrSubspace(self.field)
        out._rows = list(self._rows)
        return out

    def _reduce(self, vec: list) -> list:
        p = self.field.p
        for row in self._rows:
            piv = next(i for i, c in enumerate(row) if c)
            if vec[piv]:
                mult = vec[piv]
                vec = [(v - mult * r) % p for v, r in zip(vec, row)]
        return vec

    def contains(self, x: FqElem) -> bool:
        return not any(self._reduce(list(x.coeffs)))

    def insert(self, x: FqElem) -> bool:
        """Add x to the space; True when the dimension grew."""
        p = self.field.p
        vec = self._reduce(list(x.coeffs))
        if not any(vec):
            return False
        piv = next(i for i, c in enumerate(vec) if c)
        inv = pow(vec[piv], -1, p)
        vec = [v * inv % p for v in vec]
        # clear the new pivot from existing rows, keep RREF canonical
        self._rows = [
            [(r[i] - r[piv] * vec[i]) % p for i in range(len(r))] if r[piv] else r
            for r in self._rows
        ]
        self._rows.append(vec)
        self._rows.sort(key=lambda r: next(i for i, c in enumerate(r) if c))
        return True

    def basis(self) -> list:
        return [self.field.element(r) for r in self._rows]

    def elements(self):
        """All p^dim members, as field elements."""
        p = self.field.p
        out = [self.field.zero]
        for b in self.basis():
            multiples = []
            m = self.field.zero
            for _ in range(p):
                multiples.append(m)
                m = m + b
            out = [x + mult for x in out for mult in multiples]
        return out

    def __eq__(self, other):
        return (
            isinstance(other, GrSubspace)
            and self.field is other.field
            and self._rows == other._rows
        )

    def __repr__(self):
        return f"<subspace of {self.field!r}, dim {self.dim}>"


def trace_kernel(field: Fq) -> GrSubspace:
    out = GrSubspace(field)
    for x in field.elements():
        if field.trace_idx(x.idx) == 0:
            if out.insert(x) and out.dim == field.n - 1:
                break
    return out


def full_space(field: Fq) -> GrSubspace:
    out = GrSubspace(field)
    for i in range(field.n):
        out.insert(field.element([1 if j == i else 0 for j in range(field.n)]))
    return out


# ---------------------------------------------------------------------------
# the bracket and the power operator on graded pieces


def gr_bracket(x: GrElem, y: GrElem) -> GrElem:
    """[x, y] at level (k+l)/n: a b^(p^k) - b a^(p^l) on digits."""
    a, b = x.digit, y.digit
    if a.field is not b.field:
        raise ValueError("digits from different fields")
    digit = a * b.frobenius(x.k) - b * a.frobenius(y.k)
    return GrElem(x.k + y.k, digit)


def gr_power(x: GrElem) -> GrElem:
    """Image of the p-th power map on the level k/n piece.

    Below the boundary k(p-1) = n the digit is the twisted norm
    a^(1 + p^k + ... + p^((p-1)k)) at level pk/n; on the boundary the two
    contributions collide and add; above it only the additive part
    survives and the digit passes to level (k+n)/n unchanged.
    """
    a = x.digit
    p, n = a.field.p, a.field.n
    boundary = x.k * (p - 1)
    if boundary > n:
        return GrElem(x.k + n, a)
    norm = a
    for j in range(1, p):
        norm = norm * a.frobenius(j * x.k)
    if boundary < n:
        return GrElem(p * x.k, norm)
    return GrElem(p * x.k, a + norm)


def _one_plus_digit(ring, digit: FqElem, k: int) -> StabElem:
    """The unit 1 + teich(digit) S^k."""
    return StabElem(order_one(ring) + from_witt(ring, teichmuller(ring, digit)) * s_gen(ring) ** k)


@dataclass(frozen=True)
class CheckReport:
    """Brute-force comparison of a graded formula against the group."""

    p: int
    n: int
    k: int
    l: int | None
    trials: int
    mismatches: int
    degenerate: int

    @property
    def ok(self) -> bool:
        return self.mismatches == 0


def check_bracket_vs_group(p, n, k, l, trials=50, M=16, seed=0) -> CheckReport:
    """Compare gr_bracket against group commutators of 1 + teich(a) S^k."""
    if k + l >= n * M:
        raise ValueError("levels exceed precision; raise M")
    ring = make_ring(p, n, M)
    rng = random.Random(seed)
    mismatches = degenerate = 0
    for _ in range(trials):
        a = ring.fq.from_idx(rng.randrange(1, ring.q))
        b = ring.fq.from_idx(rng.randrange(1, ring.q))
        c = commutator(_one_plus_digit(ring, a, k), _one_plus_digit(ring, b, l))
        expected = gr_bracket(GrElem(k, a), GrElem(l, b))
        level = filtration_level(c)
        if expected.digit.is_zero:
            degenerate += 1
            if not (level.at_precision_cap or level.value > Fraction(k + l, n)):
                mismatches += 1
        elif level.at_precision_cap or level.value != Fraction(k + l, n):
            mismatches += 1
        elif gr_project(c).digit != expected.digit:
            mismatches += 1
    return CheckReport(p, n, k, l, trials, mismatches, degenerate)


def check_power_vs_group(p, n, k, trials=50, M=16, seed=0) -> CheckReport:
    """Compare gr_power against p-th powers of 1 + teich(a) S^k."""
    if min(p * k, k + n) >= n * M:
        raise ValueError("levels exceed precision; raise M")
    ring = make_ring(p, n, M)
    rng = random.Random(seed)
    mismatches = degenerate = 0
    for _ in range(trials):
        a = ring.fq.from_idx(rng.randrange(1, ring.q))
        xp = _one_plus_digit(ring, a, k) ** p
        expected = gr_power(GrElem(k, a))
        level = filtration_level(xp)
        if expected.digit.is_zero:
            degenerate += 1
            if not (level.at_precision_cap or level.value > Fraction(expected.k, n)):
                mismatches += 1
        elif level.at_precision_cap or level.value != Fraction(expected.k, n):
            mismatches += 1
        elif gr_project(xp).digit != expected.digit:
            mismatches += 1
    return CheckReport(p, n, k, None, trials, mismatches, degenerate)


# ---------------------------------------------------------------------------
# spans of brackets


def commutator_span(p, n, k, l, poly=None) -> GrSubspace:
    """F_p-span of all bracket digits between levels k/n and l/n."""
    field = fq_field(p, n, poly)
    q = field.q
    if q > _BRUTE_FORCE_LIMIT:
        raise ValueError("brute force out of range for this field size")
    span = GrSubspace(field)
    mul, frob = field.mul_idx, field.frob_idx
    for ai in range(1, q):
        fa = frob(ai, l)
        for bi in range(1, q):
            d = field.add_idx(mul(ai, frob(bi, k)), field.neg_idx(mul(bi, fa)))
            if d and span.insert(field.from_idx(d)) and span.dim == n:
                return span
    return span


def predicted_span(p, n, k, l):
    """What the bracket span should be: ('full'|'ker_tr'|'sub_ker_tr', space).

    Exact answers hold when one level is 1; for general levels summing to
    an integer the span is only bounded above by the trace kernel.
    """
    field = fq_field(p, n)
    if (k + l) % n != 0:
        return ("full", full_space(field)) if min(k, l) == 1 else ("no_claim", None)
    if min(k, l) == 1:
        return ("ker_tr", trace_kernel(field))
    return ("sub_ker_tr", trace_kernel(field))


# ---------------------------------------------------------------------------
# abelianization


@dataclass
class AbelianizationReport:
    """H_1 of the strict unit group, assembled from graded data up to level L.

    decomp is the integral answer; any free summand is certified only up to
    the truncation level and carries the precision caveat.  mod_p_decomp is
    H_1 tensored with Z/p.  generators maps each cyclic factor to a level
    and a leading digit witnessing it.
    """

    p: int
    n: int
    L: int
    decomp: CyclicDecomp
    mod_p_decomp: CyclicDecomp
    quotient_dims: dict
    chains: list
    generators: list

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "L": self.L,
            "integral": self.decomp.to_json(),
            "mod_p": self.mod_p_decomp.to_json(),
            "quotient_dims": {str(k): d for k, d in self.quotient_dims.items()},
            "chains": [
                {
                    "levels": [f"{k}/{self.n}" for k in ch["nodes"]],
                    "ends": ch["ends"],
                    "factor": ch["factor"],
                    "multiplicity": ch["dim"],
                }
                for ch in self.chains
            ],
            "generators": [
                {"level": f"{k}/{self.n}", "digit": repr(d), "order": o}
                for (k, d, o) in self.generators
            ],
        }


def _phi(p: int, n: int, k: int) -> int:
    return min(p * k, k + n)


def _power_digit(field: Fq, k: int, a: FqElem) -> FqElem:
    """Digit of the induced P on level k, extended by P(0) = 0."""
    if a.is_zero:
        return field.zero
    return gr_power(GrElem(k, a)).digit


def abelianization_report(p: int, n: int, L: int, poly=None) -> AbelianizationReport:
    """Assemble H_1 of the strict units from levels 1..L.

    Builds D_k as the span of all bracket digits landing at level k, forms
    the quotients Q_k, verifies by enumeration that the power operator
    descends to well-defined additive maps on the nonzero quotients, and
    classifies each induced map as zero or an isomorphism.  Chains of isos
    then collapse: a chain that ends in a zero map contributes cyclic
    factors of order p^length, a chain that runs past L contributes free
    summands certified only at this precision.
    """
    field = fq_field(p, n, poly)
    q = field.q
    if q > _BRUTE_FORCE_LIMIT:
        raise ValueError("brute force out of range for this field size")
    if L < 1:
        raise ValueError("need L >= 1")

    span_cache = {}

    def span(k1, k2):
        key = (min(k1, k2), max(k1, k2))
        if key not in span_cache:
            span_cache[key] = commutator_span(p, n, key[0], key[1], poly)
        return span_cache[key]

    D = {}
    for k in range(1, L + 1):
        acc = GrSubspace(field)
        for k1 in range(1, k // 2 + 1):
            for b in span(k1, k - k1).basis():
                acc.insert(b)
        D[k] = acc
    qdim = {k: n - D[k].dim for k in range(1, L + 1)}
    nonzero = [k for k in range(1, L + 1) if qdim[k] > 0]

    all_elems = list(field.elements())
    edges = {}
    for k in nonzero:
        t = _phi(p, n, k)
        if t > L:
            edges[k] = ("truncated", t)
            continue
        if qdim.get(t, 0) == 0:
            edges[k] = ("zero", t)
            continue
        # the induced map must be well-defined and additive on the quotient
        for a in all_elems:
            pa = _power_digit(field, k, a)
            for d in D[k].elements():
                if not D[t].contains(_power_digit(field, k, a + d) - pa):
                    raise ValueError(f"power operator not well-defined at level {k}/{n}")
        for a in all_elems:
            pa = _power_digit(field, k, a)
            for b in all_elems:
                gap = _power_digit(field, k, a + b) - pa - _power_digit(field, k, b)
                if not D[t].contains(gap):
                    raise ValueError(f"power operator not additive at level {k}/{n}")
        if all(D[t].contains(_power_digit(field, k, a)) for a in all_elems):
            edges[k] = ("zero", t)
        elif qdim[k] == qdim[t] and all(
            D[t].contains(_power_digit(field, k, a)) == D[k].contains(a) for a in all_elems
        ):
            edges[k] = ("iso", t)
        else:
            raise ValueError(f"induced power map at level {k}/{n} is neither zero nor iso")

    iso_targets = {t for (kind, t) in edges.values() if kind == "iso"}
    chains = []
    orders = []
    caveat = False
    generators = []
    for k in nonzero:
        if k in iso_targets:
            continue
        nodes = [k]
        while edges[nodes[-1]][0] == "iso":
            nodes.append(edges[nodes[-1]][1])
        kind = edges[nodes[-1]][0]
        d = qdim[k]
        if kind == "truncated":
            factor = INF
            caveat = True
            label = "Z_p"
        else:
            factor = p ** len(nodes)
            label = f"Z/{factor}"
        chains.append({"nodes": nodes, "ends": kind, "factor": label, "dim": d})
        orders.extend([factor] * d)
        # complement basis of D_k gives coset representatives generating the chain
        probe = D[k].copy()
        for i in range(n):
            e = field.element([1 if j == i else 0 for j in range(n)])
            if probe.insert(e):
                generators.append((k, e, label))

    decomp = CyclicDecomp(p, orders, precision_caveat=caveat)

    # mod p: additionally kill the image of every incoming induced map
    mod_rank = 0
    for k in nonzero:
        sub = D[k].copy()
        for j in nonzero:
            if edges[j][1] == k and edges[j][0] != "truncated":
                for a in all_elems:
                    sub.insert(_power_digit(field, j, a))
        mod_rank += n - sub.dim
    mod_p_decomp = CyclicDecomp(p, [p] * mod_rank)

    return AbelianizationReport(p, n, L, decomp, mod_p_decomp, qdim, chains, generators)
