"""Group cohomology at precision: Smith-form kernels, subquotients, assembly."""

import pytest

from morava.homalg import (
    CohomologyGroup,
    ZpModuleWithOperator,
    cyclic_cohomology,
    g1_cohomology_E1,
    iwasawa_cohomology,
)
from morava.padic import INF, PadicParams


def _op(p, M, rows):
    return ZpModuleWithOperator(PadicParams(p, M), tuple(tuple(r) for r in rows))


def test_operator_validation():
    with pytest.raises(ValueError, match="square"):
        _op(3, 8, [[1, 2]])
    m = _op(3, 8, [[1, 3], [0, 1]])
    assert m.rank == 2
    assert m.power(3) == [[1, 9], [0, 1]]


def test_iwasawa_trivial_and_frozen():
    h0, h1 = iwasawa_cohomology(_op(2, 10, [[1]]))
    assert h0.decomp.orders == (INF,) and h0.decomp.precision_caveat
    assert h1.decomp.orders == (INF,)
    # multiplication by 3^4 on Z_2: coker has order 2^v(80) = 16
    h0, h1 = iwasawa_cohomology(_op(2, 10, [[81]]))
    assert h0.decomp.is_zero
    assert h1.decomp.orders == (16,)
    h0, h1 = iwasawa_cohomology(_op(3, 8, [[4]]))
    assert h1.decomp.orders == (3,)


def test_iwasawa_rank_two():
    # (x, y) -> (x + 3y, y): kernel is one line, cokernel Z_3 + Z/3
    h0, h1 = iwasawa_cohomology(_op(3, 8, [[1, 3], [0, 1]]))
    assert h0.decomp.orders == (INF,)
    assert h1.decomp.orders == (INF, 3)
    assert h1.decomp.precision_caveat


def test_cyclic_rejects_wrong_order():
    with pytest.raises(ValueError, match="not a valid action"):
        cyclic_cohomology(_op(3, 8, [[4]]), 2, 1)


def test_cyclic_c2_closed_forms():
    pp = PadicParams(2, 10)
    trivial = ZpModuleWithOperator(pp, ((1,),))
    sign = ZpModuleWithOperator(pp, ((pp.modulus - 1,),))
    for s in range(6):
        triv = cyclic_cohomology(trivial, 2, s).decomp
        sgn = cyclic_cohomology(sign, 2, s).decomp
        if s == 0:
            assert triv.orders == (INF,) and sgn.is_zero
        elif s % 2 == 0:
            assert triv.orders == (2,) and sgn.is_zero
        else:
            assert triv.is_zero and sgn.orders == (2,)


def test_cyclic_free_module_is_acyclic():
    # the swap action on Z_2^2 is the regular representation of C_2
    swap = _op(2, 10, [[0, 1], [1, 0]])
    h0 = cyclic_cohomology(swap, 2, 0)
    assert h0.decomp.orders == (INF,)
    for s in (1, 2, 3, 4):
        assert cyclic_cohomology(swap, 2, s).is_zero, s


def test_cyclic_c4_rotation():
    # order-4 rotation on Z_2^2: H^0 = 0, odd degrees Z/2, even positive 0
    mod = 2 ** 10
    rot = _op(2, 10, [[0, mod - 1], [1, 0]])
    assert cyclic_cohomology(rot, 4, 0).is_zero
    assert cyclic_cohomology(rot, 4, 1).decomp.orders == (2,)
    assert cyclic_cohomology(rot, 4, 2).is_zero
    assert cyclic_cohomology(rot, 4, 3).decomp.orders == (2,)


def test_cyclic_mixed_rank_two():
    # C_2 acting by diag(-1, 1) on Z_3^2; -1 and 2 are units mod 3, so all
    # the subquotients collapse and only the invariant line survives
    mod = 3 ** 8
    op = _op(3, 8, [[mod - 1, 0], [0, 1]])
    assert cyclic_cohomology(op, 2, 0).decomp.orders == (INF,)
    assert cyclic_cohomology(op, 2, 1).is_zero
    assert cyclic_cohomology(op, 2, 2).is_zero


def test_g1_odd_p_frozen():
    assert g1_cohomology_E1(3, 1, 12).decomp.orders == (9,)
    assert g1_cohomology_E1(3, 1, 4).decomp.orders == (3,)
    assert g1_cohomology_E1(3, 1, 36).decomp.orders == (27,)
    assert g1_cohomology_E1(5, 1, 8).decomp.orders == (5,)
    assert g1_cohomology_E1(5, 1, 40).decomp.orders == (25,)
    assert g1_cohomology_E1(7, 1, 12).decomp.orders == (7,)
    for (s, t) in [(0, 0), (1, 0)]:
        g = g1_cohomology_E1(3, s, t)
        assert g.decomp.orders == (INF,) and g.decomp.precision_caveat
    assert g1_cohomology_E1(3, 0, 12).is_zero
    assert g1_cohomology_E1(3, 2, 12).is_zero
    assert g1_cohomology_E1(3, 1, 6).is_zero  # 6 is not 0 mod 2(p-1) = 4
    assert g1_cohomology_E1(3, 1, 7).is_zero
    assert g1_cohomology_E1(3, 1, -12).decomp == g1_cohomology_E1(3, 1, 12).decomp


def test_g1_p2_frozen():
    assert g1_cohomology_E1(2, 0, 0).decomp.orders == (INF,)
    assert g1_cohomology_E1(2, 1, 0).decomp.orders == (INF,)
    assert g1_cohomology_E1(2, 1, 4).decomp.orders == (8,)
    assert g1_cohomology_E1(2, 1, 8).decomp.orders == (16,)
    assert g1_cohomology_E1(2, 1, 16).decomp.orders == (32,)
    assert g1_cohomology_E1(2, 1, 2).decomp.orders == (2,)
    assert g1_cohomology_E1(2, 1, 6).decomp.orders == (2,)
    assert g1_cohomology_E1(2, 1, -4).decomp.orders == (8,)
    assert g1_cohomology_E1(2, 0, 4).is_zero
    assert g1_cohomology_E1(2, 0, 2).is_zero
    assert g1_cohomology_E1(2, 1, 3).is_zero
    for s in range(2, 7):
        for t in range(-12, 13, 2):
            assert g1_cohomology_E1(2, s, t).decomp.orders == (2,), (s, t)
        assert g1_cohomology_E1(2, s, 5).is_zero


def test_g1_p2_les_provenance():
    # exactly one side of the sequence contributes, by parity
    for s in range(2, 8):
        for t in range(-8, 9, 2):
            g = g1_cohomology_E1(2, s, t)
            ker_side = (s % 2 == 0) == (t % 4 == 0)
            if ker_side:
                assert g.provenance == f"ker(psi - 1) on H^{s}(C_2)", (s, t)
            else:
                assert g.provenance == f"coker(psi - 1) on H^{s - 1}(C_2)", (s, t)


def test_cohomology_group_str():
    g = g1_cohomology_E1(3, 1, 12)
    assert str(g) == "H^1 = Z/9"
    assert isinstance(g, CohomologyGroup)
