import pytest

from zmsq import FormatError, ImpossibleError, integer_ms, verify_int, zero_based


def test_sides_3_to_50():
    for n in range(3, 51):
        sq = integer_ms(n)
        assert verify_int(sq) == n * (n * n + 1) // 2
        zb = zero_based(sq)
        assert verify_int(zb, base=0) == n * (n * n - 1) // 2


def test_known_constants():
    assert verify_int(integer_ms(3)) == 15
    assert verify_int(integer_ms(4)) == 34
    assert verify_int(integer_ms(6)) == 111
    assert verify_int(zero_based(integer_ms(3)), base=0) == 12
    assert verify_int(zero_based(integer_ms(4)), base=0) == 30
    assert verify_int(zero_based(integer_ms(5)), base=0) == 60


def test_zero_based_shifts_sums_by_n():
    for n in (3, 4, 6, 9):
        assert verify_int(integer_ms(n)) - verify_int(zero_based(integer_ms(n)), base=0) == n


def test_deterministic():
    assert integer_ms(10).cells == integer_ms(10).cells
    # the odd construction is the classical one: fixed top-middle start
    assert integer_ms(3).cells == ((8, 1, 6), (3, 5, 7), (4, 9, 2))


def test_small_sides_rejected():
    with pytest.raises(ImpossibleError):
        integer_ms(2)
    with pytest.raises(ImpossibleError):
        integer_ms(1)
    assert integer_ms(1, allow_trivial=True).cells == ((1,),)


def test_verify_int_catches_bad_squares():
    from zmsq.classic import IntSquare

    with pytest.raises(FormatError):
        verify_int(IntSquare(2, ((1, 2), (3, 4))))
    with pytest.raises(FormatError):
        verify_int(IntSquare(2, ((1, 2), (3, 5))))
