"""Degree arithmetic, diagonals, generator degrees, windows."""

import pytest
from hypothesis import given, strategies as st

from realspectra.grading import (
    DELTA, RHO, SIGMA, ZERO, Degree, Window, generator_degree,
    total_vbar_degree,
)

small_ints = st.integers(min_value=-50, max_value=50)
degrees = st.builds(Degree, small_ints, small_ints)


def test_basic_constants():
    assert RHO == Degree(1, 1)
    assert SIGMA == Degree(0, 1)
    assert DELTA == Degree(1, -1)
    assert RHO + RHO == Degree(2, 2)
    assert DELTA + SIGMA == Degree(1, 0)


def test_tmf13_duality_shift_assembles():
    # 4*rho + 2 + 2*delta = 8 + 2*sigma, the height-2 duality suspension
    assert 4 * RHO + Degree(2, 0) + 2 * DELTA == Degree(8, 2)


@given(degrees, degrees)
def test_addition_matches_components(x, y):
    assert (x + y).triv == x.triv + y.triv
    assert (x + y).sgn == x.sgn + y.sgn
    assert x + y == y + x
    assert (x - y) + y == x
    assert x + (-x) == ZERO


@given(degrees)
def test_diagonal_roundtrip(x):
    d, k = x.diagonal()
    assert d == x.triv - x.sgn and k == x.sgn
    assert Degree.from_diagonal(d, k) == x
    assert Degree(d, 0) + k * RHO == x


def test_diagonal_examples():
    assert Degree(0, -1).diagonal() == (1, -1)    # |a| = 1 - rho
    assert Degree(2, -2).diagonal() == (4, -2)    # 2u lives on the 4-diagonal
    assert Degree(0, 0).diagonal() == (0, 0)


def test_diagonal_roundtrip_exhaustive_window():
    for alpha in Window.square(12):
        assert Degree.from_diagonal(*alpha.diagonal()) == alpha


def test_generator_degrees():
    assert generator_degree("a") == Degree(0, -1)
    assert generator_degree("u") == 2 * DELTA == Degree(2, -2)
    assert generator_degree("U", n=1) == 4 * DELTA
    assert generator_degree("U", n=2) == 8 * DELTA
    # vbar_1 twisted by -1: -8 + 5*rho = (-3, 5)
    assert generator_degree("vbar", index=1, twist=-1) == Degree(-3, 5)
    assert generator_degree("vbar", index=2) == 3 * RHO == Degree(3, 3)
    assert generator_degree("u", power=0) == ZERO


def test_untwisted_vbar_degree_is_on_the_zero_diagonal():
    for m in range(0, 9):
        assert generator_degree("vbar", index=m) == (2 ** m - 1) * RHO


def test_twisted_vbar_is_u_power_times_vbar():
    for m in range(0, 5):
        for j in range(-4, 5):
            expected = (generator_degree("u", power=2 ** m * j)
                        + generator_degree("vbar", index=m))
            assert generator_degree("vbar", index=m, twist=j) == expected


def test_unknown_generator_rejected():
    with pytest.raises(ValueError):
        generator_degree("w")
    with pytest.raises(ValueError):
        generator_degree("U")  # needs n
    with pytest.raises(ValueError):
        generator_degree("vbar")  # needs index


def test_total_vbar_degree_two_forms():
    # D_n * rho with D_n = 2^(n+1) - n - 2; both closed forms of the duality
    # shift must agree as degrees.
    for n in range(0, 9):
        dn_rho = total_vbar_degree(n)
        dn = 2 ** (n + 1) - n - 2
        assert dn_rho == dn * RHO
        lhs = dn_rho + Degree(n, 0) + 2 * DELTA
        rhs = Degree(dn + n + 2, dn - 2)
        assert lhs == rhs


def test_degree_json_roundtrip():
    for alpha in Window.square(5):
        assert Degree.from_json(alpha.to_json()) == alpha
    assert Degree(3, -2).to_json() == [3, -2]
    with pytest.raises(ValueError):
        Degree.from_json([1, 2, 3])


def test_window_parse_and_str():
    w = Window.parse("-2:3,0:1")
    assert w == Window(-2, 3, 0, 1)
    assert Window.parse(str(w)) == w
    with pytest.raises(ValueError):
        Window.parse("junk")
    with pytest.raises(ValueError):
        Window(1, 0, 0, 0)


def test_window_membership_and_iteration():
    w = Window(-1, 1, 2, 3)
    degs = list(w)
    assert len(degs) == len(w) == 6
    assert all(d in w for d in degs)
    assert Degree(0, 0) not in w
    assert len(set(degs)) == 6


def test_window_reflection_and_symmetrize():
    w = Window(-2, 5, -3, 1)
    r = w.reflected()
    assert r == Window(-5, 2, -1, 3)
    sym = w.symmetrized()
    assert sym == Window(-2, 2, -1, 1)
    for d in sym:
        assert -d in sym
    with pytest.raises(ValueError):
        Window(3, 5, 0, 1).symmetrized()


def test_window_intersect_and_shift():
    a, b = Window(0, 4, 0, 4), Window(2, 6, -1, 2)
    assert a.intersect(b) == Window(2, 4, 0, 2)
    assert a.intersect(Window(9, 10, 0, 1)) is None
    assert a.shifted(Degree(1, -1)) == Window(1, 5, -1, 3)
