"""Continuous cohomology of small profinite groups on finite-rank Z_p-modules.

Everything is computed at precision p^M through Smith normal forms.  A
kernel at precision means a diagonal entry indistinguishable from zero mod
p^M; such summands are reported as free with the precision caveat rather
than as spurious large torsion.
"""

from __future__ import annotations

from dataclasses import dataclass

from morava.padic import (
    INF,
    CyclicDecomp,
    PadicParams,
    invert_matrix,
    mat_mul,
    mat_vec,
    nu_p,
    smith_normal_form,
)
from morava.witt import PrecisionError


@dataclass(frozen=True)
class ZpModuleWithOperator:
    """Z_p^rank mod p^M together with one endomorphism."""

    params: PadicParams
    matrix: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(c) % self.params.modulus for c in r) for r in self.matrix)
        if any(len(r) != len(rows) for r in rows):
            raise ValueError("operator matrix must be square")
        object.__setattr__(self, "matrix", rows)

    @property
    def rank(self) -> int:
        return len(self.matrix)

    def power(self, e: int) -> list:
        out = _identity(self.rank)
        base = [list(r) for r in self.matrix]
        mod = self.params.modulus
        while e:
            if e & 1:
                out = mat_mul(out, base, mod)
            e >>= 1
            base = mat_mul(base, base, mod)
        return out


@dataclass(frozen=True)
class CohomologyGroup:
    """One cohomology group: degree, decomposition, and where it came from."""

    s: int
    decomp: CyclicDecomp
    provenance: str = ""
    generator_labels: tuple = ()

    @property
    def is_zero(self) -> bool:
        return self.decomp.is_zero

    def __str__(self):
        return f"H^{self.s} = {self.decomp}"


def _identity(k):
    return [[1 if i == j else 0 for j in range(k)] for i in range(k)]


def _sub(A, B, mod):
    return [[(a - b) % mod for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def _kernel_indices(snf) -> list:
    cols = snf.shape[1]
    return [j for j in range(cols) if j >= len(snf.diag) or snf.diag[j] == 0]


def _subquotient_orders(kernel_of, image_of, params: PadicParams) -> list:
    """Orders of ker(A)/im(B) in Z_p^r at precision.

    B's columns must land in ker(A).  Their coordinates on the kernel basis
    (columns of V at zero diagonal positions) present the quotient; the
    coordinates at nonzero positions are truncation noise of size at least
    p^(M - e) and are dropped.
    """
    mod = params.modulus
    snf = smith_normal_form(kernel_of, params)
    idx = _kernel_indices(snf)
    if not idx:
        return []
    V = [list(r) for r in snf.V]
    V_inv = invert_matrix(V, params)
    relations = []
    for j in range(len(image_of[0])):
        b = [image_of[i][j] % mod for i in range(len(image_of))]
        if any(v % mod for v in mat_vec([list(r) for r in kernel_of], b, mod)):
            raise PrecisionError("image generator does not land in the kernel")
        c = mat_vec(V_inv, b, mod)
        relations.append([c[i] for i in idx])
    if not relations:
        return [INF] * len(idx)
    R = [[rel[i] for rel in relations] for i in range(len(idx))]
    return list(smith_normal_form(R, params).cokernel_orders())


def iwasawa_cohomology(module: ZpModuleWithOperator) -> tuple:
    """H^0 and H^1 of a pro-cyclic p-adic group acting through one operator g.

    H^0 = ker(g - 1) and H^1 = coker(g - 1); higher degrees vanish.
    """
    params = module.params
    mod = params.modulus
    A = _sub([list(r) for r in module.matrix], _identity(module.rank), mod)
    snf = smith_normal_form(A, params)
    k = len(_kernel_indices(snf))
    h0 = CyclicDecomp(params.p, [INF] * k, precision_caveat=k > 0)
    h1_orders = list(snf.cokernel_orders())
    h1 = CyclicDecomp(params.p, h1_orders, precision_caveat=INF in h1_orders)
    return (
        CohomologyGroup(0, h0, "kernel of g - 1 at precision"),
        CohomologyGroup(1, h1, "cokernel of g - 1"),
    )


def cyclic_cohomology(module: ZpModuleWithOperator, m: int, s: int) -> CohomologyGroup:
    """H^s of Z/m acting through g with g^m = 1.

    Standard periodic resolution: H^0 = ker(g-1), odd H^s = ker(N)/im(g-1),
    even H^s = ker(g-1)/im(N), with N = 1 + g + ... + g^(m-1).
    """
    params = module.params
    mod = params.modulus
    if module.power(m) != _identity(module.rank):
        raise ValueError(f"not a valid action: operator order does not divide {m}")
    if s < 0:
        raise ValueError("negative degree")
    g = [list(r) for r in module.matrix]
    gm1 = _sub(g, _identity(module.rank), mod)
    N = _identity(module.rank)
    cur = _identity(module.rank)
    for _ in range(m - 1):
        cur = mat_mul(cur, g, mod)
        N = [[(a + b) % mod for a, b in zip(ra, rb)] for ra, rb in zip(N, cur)]
    if s == 0:
        snf = smith_normal_form(gm1, params)
        k = len(_kernel_indices(snf))
        return CohomologyGroup(
            0,
            CyclicDecomp(params.p, [INF] * k, precision_caveat=k > 0),
            "kernel of g - 1 at precision",
        )
    if s % 2:
        orders = _subquotient_orders(N, gm1, params)
        prov = "ker(norm) / im(g - 1)"
    else:
        orders = _subquotient_orders(gm1, N, params)
        prov = "ker(g - 1) / im(norm)"
    return CohomologyGroup(
        s, CyclicDecomp(params.p, orders, precision_caveat=INF in orders), prov
    )


# ---------------------------------------------------------------------------
# the height-one arithmetic: cohomology of the units acting on E_t


def _c2_order(s: int, t: int) -> object:
    """H^s(C_2, Z_2(t/2)) as an order: INF, 2, or 1 (zero).

    Trivial action for t = 0 mod 4: Z_2, 0, Z/2, 0, Z/2, ...
    Sign action for t = 2 mod 4: 0, Z/2, 0, Z/2, ...
    """
    if t % 2:
        return 1
    if (t // 2) % 2 == 0:
        if s == 0:
            return INF
        return 2 if s % 2 == 0 else 1
    return 2 if s % 2 == 1 else 1


def _g1_cohomology_2(s: int, t: int) -> CohomologyGroup:
    """Assemble H^s(G_1, E_t) at p = 2 from the C_2 layer and psi = 3.

    The quotient by the center C_2 is pro-cyclic on psi, giving for each s
    a short exact sequence coker(psi - 1 on H^(s-1)(C_2)) -> H^s(G_1) ->
    ker(psi - 1 on H^s(C_2)).  psi acts by 3^(t/2) on H^0(C_2) and trivially
    on the torsion layers, and in this range only one side is ever nonzero.
    """
    zero = CyclicDecomp(2, [])
    if t % 2:
        return CohomologyGroup(s, zero, "odd internal degree")

    def psi_ker(order) -> object:
        if order == 1:
            return 1
        if order == INF:
            return INF if t == 0 else 1
        return order  # finite layers carry the trivial psi action

    def psi_coker(order) -> object:
        if order == 1:
            return 1
        if order == INF:
            return INF if t == 0 else 2 ** (nu_p(3 ** abs(t // 2) - 1, 2))
        return order

    ker_part = psi_ker(_c2_order(s, t))
    coker_part = psi_coker(_c2_order(s - 1, t)) if s >= 1 else 1
    if ker_part != 1 and coker_part != 1:
        raise PrecisionError("both sides of the exact sequence are nonzero")
    order = ker_part if ker_part != 1 else coker_part
    if order == 1:
        return CohomologyGroup(s, zero, "zero on both sides")
    if ker_part != 1:
        prov = f"ker(psi - 1) on H^{s}(C_2)"
    else:
        prov = f"coker(psi - 1) on H^{s - 1}(C_2)"
    decomp = CyclicDecomp(2, [order], precision_caveat=order == INF)
    return CohomologyGroup(s, decomp, prov)


def g1_cohomology_E1(p: int, s: int, t: int) -> CohomologyGroup:
    """H^s of the height-one stabilizer acting on the weight-t/2 line.

    For odd p the group splits as mu_(p-1) x Z_p; the torsion part kills
    everything unless 2(p-1) divides t, and then the generator acts by
    lambda = (p+1)^(t/2), so H^1 = Z_p/(lambda - 1) with valuation computed
    on exact integers.  For p = 2 see the C_2 assembly.
    """
    if s < 0:
        raise ValueError("negative degree")
    if p == 2:
        return _g1_cohomology_2(s, t)
    zero = CyclicDecomp(p, [])
    if t % (2 * (p - 1)) != 0:
        return CohomologyGroup(s, zero, "torsion character is nontrivial")
    if s == 0:
        if t == 0:
            return CohomologyGroup(
                0, CyclicDecomp(p, [INF], precision_caveat=True), "invariants of the trivial action"
            )
        return CohomologyGroup(0, zero, "ker(lambda - 1) with lambda != 1")
    if s == 1:
        if t == 0:
            return CohomologyGroup(
                1, CyclicDecomp(p, [INF], precision_caveat=True), "coker of the zero map"
            )
        val = nu_p((p + 1) ** abs(t // 2) - 1, p)
        return CohomologyGroup(1, CyclicDecomp(p, [p ** val]), "coker(lambda - 1)")
    return CohomologyGroup(s, zero, "p-cohomological dimension one")
