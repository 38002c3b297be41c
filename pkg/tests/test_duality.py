"""Degreewise Anderson duals, Gorenstein verification, quotient duality."""

import doctest
import json

import pytest
from hypothesis import given, settings, strategies as st

from realspectra import duality
from realspectra.coefficients import (Monomial, QuotientIdeal, group_in_degree,
                                      nilpotence_check, weight_tuples)
from realspectra.duality import (
    Differential, DualityRecord, Extension, InconsistentSSData, SSData,
    anderson_dual_groups, default_ssdata, gamma_block, gamma_groups,
    gorenstein_shift, kappa_groups, load_ssdata, maps_from_quotient,
    part_groups, shift_for, spectrum_groups, verify_gorenstein,
    verify_quotient_duality)
from realspectra.grading import RHO, Degree, Window

ONE = Degree(1, 0)


def test_doctests():
    result = doctest.testmod(duality)
    assert result.failed == 0 and result.attempted > 0


# ---------------------------------------------------------------------------
# spectral sequence data records

def test_differential_validates_diagonal():
    Differential("bb", Degree(0, -7), Degree(-1, -7))
    with pytest.raises(ValueError):
        Differential("bb", Degree(0, -7), Degree(-1, -8))
    with pytest.raises(ValueError):
        Differential("xx", Degree(0, -7), Degree(-1, -7))
    with pytest.raises(ValueError):
        Differential("bb", Degree(0, -7), Degree(-1, -7), rank=0)


def test_extension_covers_rho_multiples():
    ext = Extension("bb", Degree(-4, -6))
    assert ext.covers(Degree(-4, -6))
    assert ext.covers(Degree(-7, -9))
    assert not ext.covers(Degree(-3, -5))
    assert not ext.covers(Degree(-4, -7))


def test_ssdata_json_round_trip():
    ss = default_ssdata(2)
    again = SSData.from_dict(json.loads(json.dumps(ss.to_dict())))
    assert again == ss
    assert len(ss.items()) == 6


def test_packaged_ssdata_contents():
    ss1 = default_ssdata(1)
    assert ss1.differentials == ()
    assert ss1.extensions == (Extension("bb", Degree(0, -3)),)
    ss2 = default_ssdata(2)
    assert len(ss2.differentials) == 3
    assert all(d.source.triv == 0 and d.target.triv == -1
               for d in ss2.differentials)
    assert {d.source.sgn for d in ss2.differentials} == {-7, -8, -9}
    assert set(ss2.extensions) == {Extension("bb", Degree(-4, -6)),
                                   Extension("bb", Degree(0, -10)),
                                   Extension("nb", Degree(-4, -6))}


def test_load_ssdata_from_text():
    ss = load_ssdata(json.dumps({
        "n": 1, "differentials": [],
        "extensions": [{"block": "bb", "degree": [0, -3]}]}))
    assert ss == default_ssdata(1)


# ---------------------------------------------------------------------------
# the two assembled blocks of Gamma for the height-1 ring, degree by degree

def _gbb_expected(a: Degree) -> tuple[int, int]:
    # dual tower from (-2,-1), two a-shifted F_2 rows under it, the dual
    # tower from (0,-3) with its torsion partner merged away at the top,
    # and the surviving a-power classes above it
    t, d = a.triv, a.sgn - a.triv
    free = (t <= -2 and d == 1) + (t <= 0 and d == -3)
    f2 = (t <= -2 and d == 0) + (t <= -2 and d == -1) + \
        (t == 0 and a.sgn <= -4)
    return (int(free), int(f2))


def _gnb_expected(a: Degree) -> tuple[int, int]:
    t, d = a.triv, a.sgn - a.triv
    free = (t <= -2 and d == 1) + (t <= 0 and d == -3)
    f2 = ((t, a.sgn) == (-1, 0)) + (t <= -1 and d == 0) + \
        (t <= -1 and d == -1) + (t == -1 and a.sgn >= 1)
    return (int(free), int(f2))


def test_gamma_blocks_match_height1_tables():
    ss = default_ssdata(1)
    for a in Window.square(12):
        assert gamma_block(1, "bb", a, ss) == _gbb_expected(a), a
        assert gamma_block(1, "nb", a, ss) == _gnb_expected(a), a


def test_height1_extension_is_forced():
    # without the merge record the top of the (0,-3) tower carries Z + F_2
    assert gamma_block(1, "bb", Degree(0, -3), SSData(1)) == (1, 1)
    assert gamma_block(1, "bb", Degree(0, -3), default_ssdata(1)) == (1, 0)
    # one rho deeper there is no torsion partner, so nothing to merge
    assert gamma_block(1, "bb", Degree(-1, -4), SSData(1)) == (1, 0)


def test_gamma_groups_minus_3_sigma_is_z():
    # the non-split additive extension: Z, not Z + F_2
    assert gamma_groups(1, None, Degree(0, -3)) == (1, 0)
    assert gamma_groups(1, SSData(1), Degree(0, -3)) == (1, 1)


def test_gamma_groups_sums_translates():
    ss = default_ssdata(1)
    for a in [Degree(4, -7), Degree(-4, 1), Degree(-3, 2)]:
        total = gamma_groups(1, ss, a)
        parts = [gamma_groups(1, ss, a, parts=("bb",)),
                 gamma_groups(1, ss, a, parts=("nb",))]
        assert total == (parts[0][0] + parts[1][0], parts[0][1] + parts[1][1])


def test_inconsistent_differential_raises():
    bogus = SSData(1, differentials=(
        Differential("bb", Degree(0, -3), Degree(-1, -3)),))
    with pytest.raises(InconsistentSSData):
        gamma_block(1, "bb", Degree(-1, -3), bogus)


# ---------------------------------------------------------------------------
# Anderson duals

def test_anderson_dual_reads_mirror_degrees():
    table = {Degree(2, 1): (2, 1), Degree(1, 1): (0, 3)}
    groups = lambda a: table.get(a, (0, 0))
    assert anderson_dual_groups(groups, Degree(-2, -1)) == (2, 3)
    assert anderson_dual_groups(groups, Degree(-3, -1)) == (0, 1)
    assert anderson_dual_groups(groups, Degree(5, 5)) == (0, 0)


def test_double_dual_is_identity_on_ranks():
    groups = spectrum_groups(1)
    double = lambda a: anderson_dual_groups(
        lambda b: anderson_dual_groups(groups, b), a)
    for a in Window.square(6):
        assert double(a) == groups(a), a


def test_base_case_self_duality():
    # height 0 is ordinary integral cohomology: dual = itself twisted by 2 delta
    groups = spectrum_groups(0)
    twist = 2 * (ONE - Degree(0, 1))
    for a in Window.square(6):
        assert anderson_dual_groups(groups, a + twist) == groups(a), a


# ---------------------------------------------------------------------------
# Gorenstein verification

def test_gorenstein_shift_values():
    assert gorenstein_shift(0) == Degree(2, -2)
    assert gorenstein_shift(1) == Degree(4, -1)
    assert gorenstein_shift(2) == Degree(8, 2)


def test_verify_gorenstein_height0_clean():
    rep = verify_gorenstein(0, Window.square(8))
    assert not rep.mismatches
    assert rep.clean


def test_verify_gorenstein_height1_clean():
    rep = verify_gorenstein(1, Window.square(10))
    assert not rep.mismatches


def test_verify_gorenstein_height1_extension_mutation():
    rep = verify_gorenstein(1, Window.square(12), ss=SSData(1))
    assert {r.degree for r in rep.mismatches} == {
        Degree(0, -3), Degree(4, -7), Degree(8, -11)}
    r = next(r for r in rep.mismatches if r.degree == Degree(0, -3))
    assert r.gamma == (1, 1) and r.dual == (1, 0)


def test_verify_gorenstein_height1_rejects_any_differential():
    bogus = SSData(1, differentials=(
        Differential("bb", Degree(0, -3), Degree(-1, -3)),),
        extensions=default_ssdata(1).extensions)
    rep = verify_gorenstein(1, Window.square(8), ss=bogus)
    assert rep.mismatches
    assert any("d_2" in r.note for r in rep.mismatches)


def test_verify_gorenstein_height2_clean():
    rep = verify_gorenstein(2, Window.square(14))
    assert not rep.mismatches
    assert "d_2 source placed at -7s" in rep.summary


def test_verify_gorenstein_height2_leave_one_out():
    ss = default_ssdata(2)
    for item in ss.items():
        rep = verify_gorenstein(2, Window.square(24), ss=ss.without(item))
        assert rep.mismatches, item


def test_misplaced_differential_source_is_inconsistent():
    # reading the d_2 sources one trivial degree down leaves no H^0 class
    ss = default_ssdata(2)
    shifted = SSData(2, differentials=tuple(
        Differential(d.block, d.source - ONE, d.target - ONE)
        for d in ss.differentials), extensions=ss.extensions)
    with pytest.raises(InconsistentSSData):
        gamma_block(2, "bb", Degree(-1, -7) - ONE, shifted)


def test_duality_record_json_shape():
    rec = DualityRecord(Degree(0, -3), (1, 0), (1, 0), True)
    assert rec.to_json() == {"degree": [0, -3], "gamma": [1, 0],
                             "dual": [1, 0], "ok": True}
    rep = verify_gorenstein(1, Window(-2, 2, -2, 2))
    blob = rep.to_json()
    assert json.loads(blob)["summary"].startswith("n=1")
    # serialization is bit-stable
    assert blob == verify_gorenstein(1, Window(-2, 2, -2, 2)).to_json()


# ---------------------------------------------------------------------------
# block pairing across the duality

def test_blocks_pair_under_duality():
    for n in (1, 2):
        shift = gorenstein_shift(n)
        ss = default_ssdata(n)
        for a in Window.square(7):
            dual_nb = anderson_dual_groups(
                lambda d: part_groups(n, d, "nb"), a + shift)
            dual_bb = anderson_dual_groups(
                lambda d: part_groups(n, d, "bb"), a + shift)
            assert gamma_groups(n, ss, a, parts=("bb",)) == dual_nb, (n, a)
            assert gamma_groups(n, ss, a, parts=("nb",)) == dual_bb, (n, a)


# ---------------------------------------------------------------------------
# shifts for the catalogue

def test_shift_for_truncations():
    assert shift_for("BPRn", n=0).shift == Degree(2, -2)
    assert shift_for("BPRn", n=1).shift == Degree(4, -1)
    assert shift_for("BPRn", n=2).shift == Degree(8, 2)
    assert shift_for("BPRn", n=2).ideal == ("vbar1", "vbar2")


def test_shift_for_catalogue():
    assert shift_for("kR").shift == Degree(4, -1)
    assert shift_for("kRn", n=2).shift == Degree(5, 1)
    assert shift_for("KRn", n=1).shift == Degree(2, -2)
    assert shift_for("KRn", n=5).shift == Degree(2, -2)
    assert shift_for("ERn", n=1).shift == Degree(4, 0)
    assert shift_for("ERn", n=2).shift == Degree(69, 0)
    assert shift_for("TMF13").shift == Degree(7, 2)
    assert shift_for("Tmf13").shift == Degree(7, 2)
    assert shift_for("Tmf13").ideal == ()
    with pytest.raises(ValueError):
        shift_for("unknown")


def test_shift_for_quotients_extend_truncations():
    # killing nothing beyond the tail reproduces the truncation shifts
    assert shift_for("quotient", m=(0,)).shift == shift_for("kR").shift
    assert shift_for("quotient", m=(0, 0)).shift == \
        shift_for("BPRn", n=2).shift
    assert shift_for("quotient", m=(2,)).shift == Degree(1, -3)
    assert shift_for("quotient", m=(0, 2)).shift == Degree(1, -4)


# ---------------------------------------------------------------------------
# quotient duality through the Koszul colimit

def test_kappa_groups_count_dual_monomials():
    # on the k rho line the colimit is the weight -k piece of the dual
    # polynomial ring, and the k rho - 1 line vanishes
    for k in range(-6, 3):
        expected = len(weight_tuples(-k, lambda i: True)) if k <= 0 else 0
        assert kappa_groups((), k * RHO) == (expected, 0), k
        assert kappa_groups((), k * RHO - ONE) == (0, 0), k


def test_kappa_groups_boxed_quotient():
    # with vbar_1 square-killed the dual counts drop accordingly
    assert kappa_groups((2,), Degree(0, 0)) == (1, 0)
    assert kappa_groups(QuotientIdeal.truncation(1), -3 * RHO) == (1, 0)
    assert kappa_groups(QuotientIdeal.truncation(1), -2 * RHO) == (1, 0)


def test_verify_quotient_duality_lines():
    lines = [k * RHO for k in range(-5, 6)] + \
        [k * RHO - ONE for k in range(-5, 6)]
    for m in ((), QuotientIdeal.truncation(1), (2,)):
        rep = verify_quotient_duality(m, lines)
        assert not rep.mismatches, (m, rep.summary)
        assert not rep.skipped


def test_quotient_route_agrees_with_gorenstein_route():
    # two independent pipelines for the height-1 ring must both be clean
    rep_q = verify_quotient_duality(
        QuotientIdeal.truncation(1),
        [k * RHO for k in range(-4, 5)] + [k * RHO - ONE for k in range(-4, 5)])
    rep_g = verify_gorenstein(1, Window.square(8))
    assert not rep_q.mismatches and not rep_g.mismatches


def test_nilpotence_of_a_on_vbar_content():
    assert nilpotence_check(1, 1, Window.square(6))


# ---------------------------------------------------------------------------
# mapping groups out of height-1 quotients

def test_maps_from_quotient_is_constant_z():
    for n_exp in (1, 2, 3):
        g = maps_from_quotient(n_exp)
        assert (g.free, g.f2) == (1, 0)
        assert g.restriction_index == 1, n_exp


def test_maps_from_quotient_wrong_shift_control():
    g = maps_from_quotient(1, dual_shift=Degree(0, 0))
    assert g.restriction_index == 2


# ---------------------------------------------------------------------------
# properties

@given(st.integers(-10, 10), st.integers(-10, 10), st.integers(0, 6))
@settings(max_examples=60, deadline=None)
def test_extension_cover_translation(t, s, w):
    ext = Extension("bb", Degree(t, s))
    assert ext.covers(Degree(t, s) - w * RHO)
    assert not ext.covers(Degree(t, s) + RHO)
    assert not ext.covers(Degree(t + 1, s))


@given(st.integers(-8, 8), st.integers(-8, 8))
@settings(max_examples=40, deadline=None)
def test_dual_window_symmetry(t, s):
    # duality pairs a with -a - shift; verifying at a and reading the
    # record back gives the same verdict as the defining comparison
    a = Degree(t, s)
    groups = spectrum_groups(1)
    dual = anderson_dual_groups(groups, a + gorenstein_shift(1))
    assert dual == gamma_groups(1, None, a)
