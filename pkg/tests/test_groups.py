import random

import pytest
from hypothesis import given, settings, strategies as st

from zmsq import (
    FormatError,
    GroupSpec,
    abelian_group_specs,
    classify,
    parse_group,
    primary_split,
)
from zmsq.groups import MAX_ORDER, Isomorphism, iso_between


def all_groups(max_order):
    for order in range(2, max_order + 1):
        yield from abelian_group_specs(order)


# ---------------------------------------------------------------------------
# parsing


@pytest.mark.parametrize(
    "text,moduli",
    [
        ("Z2xZ8", (2, 8)),
        ("z9", (9,)),
        ("Z2+Z2+Z4", (2, 2, 4)),
        (" z3 X z27 ", (3, 27)),
        ('{"moduli": [2, 8]}', (2, 8)),
        ("[5, 5]", (5, 5)),
    ],
)
def test_parse_group(text, moduli):
    assert parse_group(text).moduli == moduli


@pytest.mark.parametrize("bad", ["Z1", "Z0", "", "Q8", "Z2xZ1", "[1, 4]", "Z2 Z3"])
def test_parse_group_rejects(bad):
    with pytest.raises(FormatError):
        parse_group(bad)


def test_order_ceiling():
    with pytest.raises(FormatError):
        parse_group(f"Z{MAX_ORDER + 1}")
    with pytest.raises(FormatError):
        GroupSpec((2**20, 2**20))


# ---------------------------------------------------------------------------
# arithmetic


def test_add_examples():
    g = GroupSpec((2, 8))
    assert g.add((1, 6), (1, 4)) == (0, 2)
    z9 = GroupSpec((9,))
    assert z9.add((7,), (5,)) == (3,)
    assert g.add((1, 5), g.zero()) == (1, 5)


def test_scale_examples():
    z9 = GroupSpec((9,))
    assert z9.scale(3, (2,)) == (6,)  # 3*2 = -3 (mod 9), so +2 cancels a constant of 3
    g = GroupSpec((2, 8))
    assert g.scale(0, (1, 5)) == (0, 0)
    assert g.scale(-1, (1, 3)) == (1, 5)
    assert g.add(g.scale(-1, (1, 3)), (1, 3)) == g.zero()


def test_dimension_mismatch():
    g = GroupSpec((2, 8))
    with pytest.raises(FormatError):
        g.add((1,), (0, 0))


@settings(max_examples=80, deadline=None)
@given(
    st.sampled_from([(9,), (2, 8), (4, 4), (3, 3, 5), (2, 2, 2, 2)]),
    st.data(),
)
def test_group_axioms(moduli, data):
    g = GroupSpec(moduli)
    pick = lambda: tuple(data.draw(st.integers(0, m - 1)) for m in moduli)
    a, b, c = pick(), pick(), pick()
    assert g.add(a, b) == g.add(b, a)
    assert g.add(a, g.add(b, c)) == g.add(g.add(a, b), c)
    assert g.add(a, g.neg(a)) == g.zero()
    assert g.scale(-2, a) == g.neg(g.scale(2, a))


def test_enumeration_is_lexicographic_and_complete():
    g = GroupSpec((2, 3))
    elems = list(g.elements())
    assert elems == [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2)]
    assert [g.element_at(g.index(e)) for e in elems] == elems


# ---------------------------------------------------------------------------
# classification


def test_classify_examples():
    p = classify(GroupSpec((2, 8)))
    assert (p.involution_count, p.in_g, p.total_sum) == (3, True, (0, 0))
    p = classify(GroupSpec((16,)))
    assert (p.involution_count, p.in_g, p.total_sum) == (1, False, (8,))
    p = classify(GroupSpec((9,)))
    assert (p.involution_count, p.in_g, p.total_sum, p.side) == (0, True, (0,), 3)
    assert classify(GroupSpec((2, 8))).side == 4
    assert classify(GroupSpec((2, 4))).side is None


def test_classify_brute_force_small_orders():
    """Exhaustive cross-check of total_sum and involution count, |G| <= 1024."""
    zero_count = 0
    for spec in all_groups(1024):
        prof = classify(spec)
        total = spec.sum(spec.elements())
        invs = sum(
            1 for e in spec.elements() if e != spec.zero() and spec.scale(2, e) == spec.zero()
        )
        assert total == prof.total_sum, spec.name()
        assert invs == prof.involution_count, spec.name()
        assert prof.in_g == (total == spec.zero())
        assert len(set(spec.elements())) == spec.order
        zero_count += prof.in_g
    assert zero_count > 0


# ---------------------------------------------------------------------------
# primary decomposition


def test_primary_split_examples():
    prim, iso = primary_split(GroupSpec((36,)))
    assert prim.moduli == (4, 9)
    assert iso.forward((7,)) == (7 % 4, 7 % 9)
    assert iso.inverse().forward((3, 7)) == (7,)

    prim, _ = primary_split(GroupSpec((6, 6)))
    assert prim.moduli == (2, 2, 3, 3)

    prim, iso = primary_split(GroupSpec((8,)))
    assert prim.moduli == (8,)
    assert iso.forward((5,)) == (5,)


def test_primary_split_additive_everywhere():
    rng = random.Random(481)
    for spec in all_groups(1024):
        prim, iso = primary_split(spec)
        assert prim.order == spec.order
        inv = iso.inverse()
        for _ in range(3):
            a = tuple(rng.randrange(m) for m in spec.moduli)
            b = tuple(rng.randrange(m) for m in spec.moduli)
            fa, fb = iso.forward(a), iso.forward(b)
            assert iso.forward(spec.add(a, b)) == prim.add(fa, fb)
            assert inv.forward(fa) == a


def test_iso_self_check_exhaustive():
    for moduli in [(36,), (6, 6), (12, 30)]:
        _, iso = primary_split(GroupSpec(moduli))
        iso.self_check()
    iso_between(GroupSpec((2, 8)), GroupSpec((8, 2))).self_check()


def test_permutation_iso():
    g = GroupSpec((3, 4))
    iso = Isomorphism.permutation(g, (1, 0))
    assert iso.target.moduli == (4, 3)
    assert iso.forward((2, 3)) == (3, 2)
    iso.self_check()


def test_isomorphy_predicate():
    assert GroupSpec((36,)).is_isomorphic(GroupSpec((4, 9)))
    assert not GroupSpec((36,)).is_isomorphic(GroupSpec((2, 18)))
    assert GroupSpec((6, 6)).is_isomorphic(GroupSpec((2, 2, 3, 3)))


# ---------------------------------------------------------------------------
# class enumeration


def test_abelian_class_counts():
    assert len(abelian_group_specs(16)) == 5
    assert len(abelian_group_specs(64)) == 11
    assert len(abelian_group_specs(36)) == 4
    total = sum(len(abelian_group_specs(n * n)) for n in range(3, 11))
    assert total == 35
