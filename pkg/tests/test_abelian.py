"""Smith normal form, presented groups, subquotients, induced maps."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from realspectra.abelian import (
    PresGroup, cokernel_of_map, group_from_summary, hstack, homology_at,
    identity, image_basis, induced_map, kernel_basis, kernel_of_map,
    map_is_surjective, mat_mul, smith_normal_form, solve_matrix, to_matrix,
    zeros,
)


def test_smith_known_matrix():
    # invariant factors from minor gcds: d1 = gcd of entries = 2,
    # d1*d2 = gcd of 2x2 minors = 4, d1*d2*d3 = |det| = 624
    a = [[2, 4, 4], [-6, 6, 12], [10, 4, 16]]
    f = smith_normal_form(a)
    assert f.diagonal() == [2, 2, 156]
    am = to_matrix(a)
    assert (mat_mul(mat_mul(f.S, am), f.T) == f.D).all()
    assert (mat_mul(f.S, f.S_inv) == identity(3)).all()
    assert (mat_mul(f.T, f.T_inv) == identity(3)).all()


def test_smith_zero_and_empty():
    assert smith_normal_form(zeros(3, 2)).diagonal() == []
    assert smith_normal_form(zeros(0, 4)).rank == 0
    assert smith_normal_form(zeros(4, 0)).rank == 0


def test_divisibility_chain_needs_work():
    # diag(2, 3) is not in normal form; invariant factors are 1, 6
    f = smith_normal_form([[2, 0], [0, 3]])
    assert f.diagonal() == [1, 6]


def test_kernel_is_saturated():
    k = kernel_basis([[2, 4]])
    assert k.shape == (2, 1)
    x, y = int(k[0, 0]), int(k[1, 0])
    assert 2 * x + 4 * y == 0
    # primitive vector (2, -1), not (4, -2)
    assert abs(x) == 2 and abs(y) == 1


def test_image_basis_spans_image():
    a = to_matrix([[2, 4], [0, 0]])
    im = image_basis(a)
    assert im.shape == (2, 1)
    assert abs(int(im[0, 0])) == 2 and int(im[1, 0]) == 0


def test_solve():
    x = solve_matrix([[2, 0], [0, 3]], [[4], [9]])
    assert [int(v) for v in x[:, 0]] == [2, 3]
    assert solve_matrix([[2]], [[3]]) is None
    assert solve_matrix([[1, 1]], [[5]]) is not None
    assert solve_matrix([[2], [3]], [[2], [2]]) is None


def test_presgroup_summaries():
    assert PresGroup(2, [[2, 0], [0, 0]]).summarize() == (1, 1)
    assert PresGroup(1).summarize() == (1, 0)
    assert PresGroup(1, [[6]]).summarize() == (0, 1)   # Z/6 is Z/2 2-locally
    assert PresGroup(1, [[3]]).summarize() == (0, 0)   # odd torsion is invisible
    assert PresGroup(1, [[3]]).is_trivial()
    with pytest.raises(ArithmeticError):
        PresGroup(1, [[4]]).summarize()
    assert group_from_summary(2, 3).summarize() == (2, 3)


def test_homology_of_two_step_complex():
    # Z --2--> Z --0--> Z has middle homology Z/2
    none = zeros(1, 0)
    h = homology_at([[2]], [[0]], none, none, none)
    assert h.group.summarize() == (0, 1)

    # Z --1--> Z --0--> Z is exact in the middle
    h = homology_at([[1]], [[0]], none, none, none)
    assert h.group.is_trivial()


def test_homology_with_torsion_groups():
    # F2 --1--> F2 --0--> 0 : middle homology vanishes
    two = to_matrix([[2]])
    h = homology_at([[1]], zeros(0, 1), two, two, zeros(0, 0))
    assert h.group.is_trivial()
    # 0 --> F2 --0--> 0 : middle homology is the F2
    h = homology_at(zeros(1, 0), zeros(0, 1), zeros(0, 0), two, zeros(0, 0))
    assert h.group.summarize() == (0, 1)


def test_complex_condition_is_enforced():
    none = zeros(1, 0)
    with pytest.raises(ValueError):
        homology_at([[1]], [[1]], none, none, none)  # g o f = 1 != 0


def test_kernel_and_cokernel_of_map():
    # multiplication by 2 on Z/4 reported as a plain presented group
    k = kernel_of_map([[2]], [[4]], [[4]])
    # kernel is 2Z/4Z, one generator of order 2
    assert k.group.invariant_factors == [2]
    c = cokernel_of_map([[2]], [[4]])
    assert c.invariant_factors == [2]

    # kernel of Z^2 --(x+y)--> Z
    k = kernel_of_map([[1, 1]], zeros(2, 0), zeros(1, 0))
    assert k.group.summarize() == (1, 0)
    assert k.cycles.shape == (2, 1)


def test_induced_map_and_surjectivity():
    none = zeros(1, 0)
    # H(Z --2--> Z --> 0) = Z/2 at the middle; identity chain map induces iso
    h1 = homology_at([[2]], zeros(0, 1), none, none, zeros(0, 0))
    h2 = homology_at([[2]], zeros(0, 1), none, none, zeros(0, 0))
    m = induced_map(h1, h2, identity(1))
    assert map_is_surjective(m, h2.group)
    # doubling chain map induces the zero (hence non-surjective) map
    m0 = induced_map(h1, h2, [[2]])
    assert not map_is_surjective(m0, h2.group)


def test_map_respecting_relations_is_required():
    with pytest.raises(ValueError):
        # Z/2 -> Z along the identity is not well defined
        kernel_of_map([[1]], [[2]], zeros(1, 0))


small = st.integers(min_value=-9, max_value=9)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_smith_properties_random(m, n, data):
    a = to_matrix([[data.draw(small) for _ in range(n)] for _ in range(m)])
    f = smith_normal_form(a)
    assert (mat_mul(mat_mul(f.S, a), f.T) == f.D).all()
    assert (mat_mul(f.S, f.S_inv) == identity(m)).all()
    assert (mat_mul(f.S_inv, f.S) == identity(m)).all()
    assert (mat_mul(f.T, f.T_inv) == identity(n)).all()
    d = f.diagonal()
    assert all(x > 0 for x in d)
    for i in range(len(d) - 1):
        assert d[i + 1] % d[i] == 0
    k = kernel_basis(a)
    assert k.shape == (n, n - f.rank)
    prod = mat_mul(a, k)
    assert (prod == zeros(*prod.shape)).all()


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.data())
def test_solve_finds_exact_solutions(m, n, data):
    a = to_matrix([[data.draw(small) for _ in range(n)] for _ in range(m)])
    x = to_matrix([[data.draw(small)] for _ in range(n)])
    b = mat_mul(a, x)
    sol = solve_matrix(a, b)
    assert sol is not None
    assert (mat_mul(a, sol) == b).all()


def test_hstack_vstack_edge_cases():
    a = zeros(2, 0)
    b = to_matrix([[1, 2], [3, 4]])
    assert (hstack(a, b) == b).all()
    assert hstack(a, a).shape[1] == 0
    with pytest.raises(ValueError):
        hstack(b, zeros(3, 1))
