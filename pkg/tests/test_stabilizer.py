"""Unit group structure: filtration, torsion, commutators, norms, splitting."""

import random
from fractions import Fraction

import pytest

from morava.order import (
    SValuation,
    from_coeff_rows,
    from_int,
    from_witt,
    order_one,
    s_gen,
)
from morava.stabilizer import (
    StabElem,
    commutator,
    element_order,
    filtration_level,
    gr_project,
    identity,
    in_K,
    order3_element,
    reduced_norm,
    s1_split,
    torus_embed,
)
from morava.witt import make_ring


def _random_unit(ring, rng):
    mod = ring.params.modulus
    while True:
        x = from_coeff_rows(
            ring, [[rng.randrange(mod) for _ in range(ring.n)] for _ in range(ring.n)]
        )
        if x.is_unit:
            return StabElem(x)


def test_non_unit_rejected():
    ring = make_ring(3, 2, 8)
    with pytest.raises(ValueError, match="not a unit"):
        StabElem(s_gen(ring))


def test_order3_element():
    ring = make_ring(3, 2, 16)
    a = order3_element(ring)
    one = identity(ring)
    assert a != one and a * a != one and a * a * a == one
    assert element_order(a) == 3
    assert a.is_strict
    assert filtration_level(a) == SValuation(1, 2)
    g = gr_project(a)
    assert g.level == Fraction(1, 2) and g.digit == ring.fq.gen
    with pytest.raises(ValueError, match="p = 3, n = 2"):
        order3_element(make_ring(5, 2, 8))


def test_torsion_orders():
    ring = make_ring(2, 2, 12)
    minus_one = StabElem(from_int(ring, -1))
    assert element_order(minus_one) == 2
    # Teichmuller units have the order of their residue
    ring32 = make_ring(3, 2, 12)
    t = torus_embed(ring32, ring32.fq.gen)
    assert element_order(t) == 8
    assert element_order(identity(ring32)) == 1


def test_no_small_torsion_at_5_2():
    ring = make_ring(5, 2, 8)
    x = StabElem(order_one(ring) + from_witt(ring, ring.omega) * s_gen(ring))
    assert element_order(x, 24) is None


def test_commutator_identities():
    ring = make_ring(3, 2, 8)
    rng = random.Random(53)
    one = identity(ring)
    for _ in range(6):
        x, y = _random_unit(ring, rng), _random_unit(ring, rng)
        assert commutator(x, x) == one
        assert commutator(x, one) == one
        lhs = commutator(x, y)
        assert lhs * y * x == x * y
        # inverse law [x, y]^-1 = [y, x]
        assert lhs.inverse() == commutator(y, x)


def test_frozen_commutator_chain():
    # a the order 3 unit, b = [a, teich], c = [a, b]
    ring = make_ring(3, 2, 16)
    a = order3_element(ring)
    b = commutator(a, torus_embed(ring, ring.fq.gen))
    assert filtration_level(b) == SValuation(1, 2)
    assert gr_project(b).digit == ring.fq.one
    assert in_K(b)
    c = commutator(a, b)
    assert filtration_level(c) == SValuation(2, 2)
    assert gr_project(c).digit == ring.fq.element([2, 2])


def test_gr_project_trivial():
    ring = make_ring(3, 2, 8)
    with pytest.raises(ValueError, match="trivial"):
        gr_project(identity(ring))


def test_reduced_norm_frozen():
    ring = make_ring(3, 2, 16)
    p16 = 3 ** 16
    assert reduced_norm(s_gen(ring)).value == p16 - 3
    assert reduced_norm(from_int(ring, 3)).value == 9
    assert reduced_norm(order3_element(ring).elem).value == 1
    # odd n picks up no sign
    r23 = make_ring(2, 3, 8)
    assert reduced_norm(s_gen(r23)).value == 2
    assert reduced_norm(from_int(r23, 2)).value == 8


def test_reduced_norm_multiplicative():
    rng = random.Random(59)
    for (p, n) in [(3, 2), (2, 3), (5, 2)]:
        ring = make_ring(p, n, 8)
        for _ in range(8):
            x, y = _random_unit(ring, rng), _random_unit(ring, rng)
            nx, ny = reduced_norm(x.elem), reduced_norm(y.elem)
            assert reduced_norm((x * y).elem).value == (nx * ny).value
            assert reduced_norm(x.elem.galois_sigma()).value == nx.value


def test_reduced_norm_two_by_two_formula():
    # n = 2: N(a + bS) = a sigma(a) - p sigma(b) b
    rng = random.Random(61)
    ring = make_ring(3, 2, 10)
    mod = ring.params.modulus
    for _ in range(10):
        a = ring.from_coords([rng.randrange(mod), rng.randrange(mod)])
        b = ring.from_coords([rng.randrange(mod), rng.randrange(mod)])
        x = from_witt(ring, a) + from_witt(ring, b) * s_gen(ring)
        direct = a * a.frobenius() - (b.frobenius() * b).scale(3)
        assert not any(direct.coords[1:])
        assert reduced_norm(x).value == direct.coords[0]


def test_s1_split():
    rng = random.Random(67)
    for (p, n) in [(3, 2), (5, 2), (2, 3)]:
        ring = make_ring(p, n, 10)
        for _ in range(6):
            x = _random_unit(ring, rng)
            if p != 2 and not x.is_strict:
                continue
            x1, z = s1_split(x)
            assert reduced_norm(x1.elem).value == 1
            assert x1.elem.scale(z.value) == x.elem
            # z^n recovers the norm
            assert (z ** n).value == reduced_norm(x.elem).value


def test_s1_split_errors():
    with pytest.raises(ValueError, match="divides"):
        s1_split(identity(make_ring(3, 3, 8)))
    with pytest.raises(ValueError, match="divides"):
        s1_split(identity(make_ring(2, 2, 8)))
    # at odd p a unit whose norm is not a one-unit has no scalar root
    ring = make_ring(3, 2, 8)
    t = torus_embed(ring, ring.fq.gen)
    with pytest.raises(ValueError, match="1 mod p"):
        s1_split(t)


def test_in_K():
    ring = make_ring(3, 2, 16)
    a = order3_element(ring)
    b = commutator(a, torus_embed(ring, ring.fq.gen))
    assert in_K(b)
    assert in_K(identity(ring))
    # a has norm one but digit w at level 1/2, so it is not in K
    assert reduced_norm(a.elem).value == 1
    assert not in_K(a)
    with pytest.raises(ValueError, match="norm-one"):
        in_K(torus_embed(ring, ring.fq.gen))
    with pytest.raises(ValueError, match="p = 3, n = 2"):
        in_K(identity(make_ring(5, 2, 8)))


def test_strictness():
    ring = make_ring(2, 3, 8)
    s = s_gen(ring)
    assert StabElem(order_one(ring) + s).is_strict
    t = torus_embed(ring, ring.fq.gen)
    assert not t.is_strict
    # commutators of strict units are strict
    rng = random.Random(71)
    x, y = _random_unit(ring, rng), _random_unit(ring, rng)
    assert commutator(x, y).is_strict
