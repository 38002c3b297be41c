"""Degreewise local cohomology for the diagonal catalogue modules.

Along each diagonal the positive and negative cones of the truncated
rings split into modules over P = Z_(2)[vbar_1, ..., vbar_n] drawn from
a short catalogue: P itself, the mod-2 quotients
Pbar_s = F_2[vbar_(s+1), ..., vbar_n], ideals inside both, their graded
duals, and rank-one F_2 towers along the sigma axis.  This module owns
that catalogue: exact degreewise ranks and generator bases,
multiplication matrices for the vbar_i, closed-form local cohomology at
the augmentation ideal J = (vbar_1, ..., vbar_n), and an independent
unstable-Koszul oracle that recomputes each H^s_J degreewise and
certifies its own stabilization.

Grading conventions.  Catalogue modules are concentrated on
shift + Z*rho, except the towers, which run along shift + Z*sigma.  A
shift beta means M(beta)_alpha = M_(alpha - beta), so the top class 1*
of dual_p(shift=-4*RHO) sits in degree -4*rho.  The weight of
vbar_1 * ... * vbar_n is D_n = 2^(n+1) - n - 2; the top local cohomology
of P is H^n = P*(-D_n * rho), placing 1* in degree -D_n * rho.

Two closed-form conventions are contested between equally plausible
readings (the shift of a principal ideal (vbar_(s+1))Pbar_s and the sign
of the duals' rho-shifts in the two-group ideal case); the shipped
formulas are the ones the Koszul oracle confirms, and
convention_report() reproduces that comparison on explicit witnesses.
"""

from __future__ import annotations

import dataclasses
import itertools
from functools import lru_cache

import numpy as np

from .abelian import (Subquotient, hstack, induced_map, map_is_surjective,
                      mat_mul, homology_at, to_matrix, zeros)
from .coefficients import StabilizationFailure, weight_tuples
from .grading import Degree, RHO, total_vbar_degree

ZERO = Degree(0, 0)

KINDS = ("P", "DualP", "Pbar", "DualPbar", "IdealZ", "IdealF2",
         "TowerF2", "DualTowerF2")


def _span(lo: int, hi: int) -> str:
    return f"v{lo}" if lo == hi else f"v{lo}..v{hi}"


@dataclasses.dataclass(frozen=True)
class StandardModule:
    """One catalogue module over P = Z_(2)[vbar_1, ..., vbar_n].

    kind "P" is P itself and "Pbar" is F_2[vbar_(s+1), ..., vbar_n], the
    quotient of P by (2, vbar_1, ..., vbar_s).  "IdealZ" is the ideal
    (2, vbar_1, ..., vbar_t) of P, with t = 0 meaning (2)P.  "IdealF2"
    is the ideal (vbar_(s+1), ..., vbar_t) of Pbar_s.  "DualP" and
    "DualPbar" are the graded duals, supported on non-positive multiples
    of rho.  "TowerF2" and "DualTowerF2" are rank-one F_2 towers running
    down (a-power style) and up the sigma axis; the vbar_i act as zero
    on both.  The ambient n is not stored; every query takes it.
    """

    kind: str
    s: int = 0
    t: int = 0
    shift: Degree = ZERO

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown module kind {self.kind!r}")
        if self.kind in ("Pbar", "DualPbar") and self.s < 0:
            raise ValueError("Pbar index must be >= 0")
        if self.kind == "IdealZ" and self.t < 0:
            raise ValueError("IdealZ needs t >= 0")
        if self.kind == "IdealF2" and not 0 <= self.s < self.t:
            raise ValueError("IdealF2 needs 0 <= s < t")

    def shifted(self, by: Degree) -> "StandardModule":
        return dataclasses.replace(self, shift=self.shift + by)

    def describe(self) -> str:
        name = {
            "P": "P",
            "DualP": "P*",
            "Pbar": f"Pbar{self.s}",
            "DualPbar": f"Pbar{self.s}^",
            "IdealZ": "(2)P" if self.t == 0
                      else f"(2,{_span(1, self.t)})P",
            "IdealF2": f"({_span(self.s + 1, self.t)})Pbar{self.s}",
            "TowerF2": "F2[a]",
            "DualTowerF2": "F2[a]^",
        }[self.kind]
        if self.shift != ZERO:
            name += f"({self.shift})"
        return name


def p_module(shift: Degree = ZERO) -> StandardModule:
    return StandardModule("P", shift=shift)


def dual_p(shift: Degree = ZERO) -> StandardModule:
    return StandardModule("DualP", shift=shift)


def pbar(s: int, shift: Degree = ZERO) -> StandardModule:
    return StandardModule("Pbar", s=s, shift=shift)


def dual_pbar(s: int, shift: Degree = ZERO) -> StandardModule:
    return StandardModule("DualPbar", s=s, shift=shift)


def ideal_z(t: int, shift: Degree = ZERO) -> StandardModule:
    return StandardModule("IdealZ", t=t, shift=shift)


def ideal_f2(s: int, t: int, shift: Degree = ZERO) -> StandardModule:
    return StandardModule("IdealF2", s=s, t=t, shift=shift)


def tower_f2(shift: Degree = ZERO) -> StandardModule:
    return StandardModule("TowerF2", shift=shift)


def dual_tower_f2(shift: Degree = ZERO) -> StandardModule:
    return StandardModule("DualTowerF2", shift=shift)


@lru_cache(maxsize=None)
def weight_count(lo: int, n: int, w: int) -> int:
    """Number of monomials in vbar_lo, ..., vbar_n of weight w.

    >>> weight_count(1, 2, 4)   # v1^4 and v1 v2
    2
    >>> weight_count(2, 2, 4)
    0
    """
    if w == 0:
        return 1
    if w < 0 or lo > n:
        return 0
    step = 2 ** lo - 1
    return sum(weight_count(lo + 1, n, w - m * step)
               for m in range(w // step + 1))


def _min_index(c: tuple[int, ...]) -> int | None:
    for i, e in enumerate(c, start=1):
        if e:
            return i
    return None


def _diag_weight(mod: StandardModule, alpha: Degree) -> int | None:
    """The rho-coordinate of alpha relative to the shift, if on the line."""
    beta = alpha - mod.shift
    if beta.triv != beta.sgn:
        return None
    return beta.triv


def module_gens(mod: StandardModule, n: int,
                alpha: Degree) -> list[tuple[tuple[int, ...], int]]:
    """Generators (exponent tuple, embedding coefficient) at one degree.

    The embedding coefficient is 2 exactly for the IdealZ generators that
    enter the ideal only as doubles (pure vbar_(>t) monomials); it is 1
    everywhere else.  F_2-ness is carried by module_rels, not here.
    """
    kind = mod.kind
    if kind in ("TowerF2", "DualTowerF2"):
        beta = alpha - mod.shift
        down = kind == "TowerF2"
        on = beta.triv == 0 and (beta.sgn <= 0 if down else beta.sgn >= 0)
        return [((), 1)] if on else []
    k = _diag_weight(mod, alpha)
    if k is None:
        return []
    if kind in ("DualP", "DualPbar"):
        k = -k
        lo = 1 if kind == "DualP" else mod.s + 1
        if k < 0:
            return []
        return [(c, 1) for c in weight_tuples(k, lambda i: lo <= i <= n)]
    if k < 0:
        return []
    if kind == "P":
        return [(c, 1) for c in weight_tuples(k, lambda i: 1 <= i <= n)]
    if kind == "Pbar":
        return [(c, 1) for c in
                weight_tuples(k, lambda i: mod.s + 1 <= i <= n)]
    if kind == "IdealZ":
        out = []
        for c in weight_tuples(k, lambda i: 1 <= i <= n):
            m = _min_index(c)
            out.append((c, 1 if m is not None and m <= mod.t else 2))
        return out
    # IdealF2: at least one factor from the generating list
    return [(c, 1) for c in
            weight_tuples(k, lambda i: mod.s + 1 <= i <= n)
            if (_min_index(c) or n + 1) <= mod.t]


def module_rels(mod: StandardModule, gens: int) -> np.ndarray:
    """Relation matrix for the presented group at one degree."""
    if mod.kind in ("P", "DualP", "IdealZ"):
        return zeros(gens, 0)
    rels = zeros(gens, gens)
    for i in range(gens):
        rels[i, i] = 2
    return rels


def module_ranks(mod: StandardModule, n: int,
                 alpha: Degree) -> tuple[int, int]:
    """(free rank, F_2 rank) of the module at one degree.

    >>> module_ranks(dual_p(shift=-4 * RHO), 2, -4 * RHO)
    (1, 0)
    >>> module_ranks(ideal_z(1), 2, ZERO)
    (1, 0)
    >>> module_ranks(ideal_f2(0, 1), 2, 2 * RHO)   # v1^2 alone has weight 2
    (0, 1)
    """
    gens = module_gens(mod, n, alpha)
    if mod.kind in ("P", "DualP", "IdealZ"):
        return (len(gens), 0)
    return (0, len(gens))


def _bump(c: tuple[int, ...], i: int, by: int) -> tuple[int, ...]:
    ext = list(c) + [0] * max(0, i - len(c))
    ext[i - 1] += by
    while ext and ext[-1] == 0:
        ext.pop()
    return tuple(ext)


def vbar_matrix(mod: StandardModule, n: int, i: int, e: int,
                alpha: Degree) -> np.ndarray:
    """Multiplication by vbar_i^e from degree alpha to alpha + e|vbar_i|.

    Rows index the target generators, columns the source generators; the
    IdealZ case can pick up a coefficient 2 when a doubled pure monomial
    lands on a plain ideal generator.
    """
    src = module_gens(mod, n, alpha)
    tgt = module_gens(mod, n, alpha + RHO * (e * (2 ** i - 1)))
    mat = zeros(len(tgt), len(src))
    kind = mod.kind
    if kind in ("TowerF2", "DualTowerF2"):
        return mat
    if kind in ("Pbar", "DualPbar", "IdealF2") and i <= mod.s:
        return mat
    where = {c: r for r, (c, _) in enumerate(tgt)}
    for col, (c, lam) in enumerate(src):
        if kind in ("DualP", "DualPbar"):
            if len(c) >= i and c[i - 1] >= e:
                mat[where[_bump(c, i, -e)], col] = 1
            continue
        image = _bump(c, i, e)
        if image not in where:
            continue
        row = where[image]
        if kind == "IdealZ":
            lam_tgt = tgt[row][1]
            mat[row, col] = lam // lam_tgt
        else:
            mat[row, col] = 1
    return mat


def mono_matrix(mod: StandardModule, n: int, exps: tuple[int, ...],
                alpha: Degree) -> np.ndarray:
    """Multiplication by the monomial with vbar-exponents exps."""
    gens = module_gens(mod, n, alpha)
    mat = None
    here = alpha
    for i, e in enumerate(exps, start=1):
        if not e:
            continue
        step = vbar_matrix(mod, n, i, e, here)
        mat = step if mat is None else mat_mul(step, mat)
        here = here + RHO * (e * (2 ** i - 1))
    if mat is None:
        mat = zeros(len(gens), len(gens))
        for r in range(len(gens)):
            mat[r, r] = 1
    return mat


# --- the unstable Koszul complex -------------------------------------------

def _subsets(n: int, size: int) -> list[tuple[int, ...]]:
    return list(itertools.combinations(range(1, n + 1), size))


def _subset_weight(subset: tuple[int, ...]) -> int:
    return sum(2 ** i - 1 for i in subset)


def _koszul_layer(mod: StandardModule, n: int, e: int, j: int,
                  alpha: Degree):
    """Summands of C^j at display degree alpha for the stage-e complex.

    C^j = direct sum over |S| = j of M in degree alpha + e * |vbar_S|,
    so that every multiplication in the differential preserves alpha.
    """
    layers = []
    for subset in _subsets(n, j):
        at = alpha + RHO * (e * _subset_weight(subset))
        layers.append((subset, at, module_gens(mod, n, at)))
    return layers


def _layer_rels(mod: StandardModule, layer) -> np.ndarray:
    sizes = [len(gens) for _, _, gens in layer]
    total = sum(sizes)
    blocks = [module_rels(mod, size) for size in sizes]
    rels = zeros(total, sum(b.shape[1] for b in blocks))
    r0 = c0 = 0
    for b in blocks:
        rels[r0:r0 + b.shape[0], c0:c0 + b.shape[1]] = b
        r0 += b.shape[0]
        c0 += b.shape[1]
    return rels


def _koszul_differential(mod: StandardModule, n: int, e: int, j: int,
                         alpha: Degree) -> np.ndarray:
    """Matrix of C^j -> C^(j+1) at display degree alpha."""
    src = _koszul_layer(mod, n, e, j, alpha)
    tgt = _koszul_layer(mod, n, e, j + 1, alpha)
    row_of = {}
    r0 = 0
    for subset, _, gens in tgt:
        row_of[subset] = r0
        r0 += len(gens)
    mat = zeros(r0, sum(len(g) for _, _, g in src))
    c0 = 0
    for subset, at, gens in src:
        for i in range(1, n + 1):
            if i in subset:
                continue
            bigger = tuple(sorted(subset + (i,)))
            sign = -1 if sum(1 for x in subset if x < i) % 2 else 1
            block = vbar_matrix(mod, n, i, e, at)
            r = row_of[bigger]
            mat[r:r + block.shape[0], c0:c0 + block.shape[1]] += sign * block
        c0 += len(gens)
    return mat


def _koszul_homology(mod: StandardModule, n: int, e: int, s: int,
                     alpha: Degree) -> Subquotient:
    layer_b = _koszul_layer(mod, n, e, s, alpha)
    dim_b = sum(len(g) for _, _, g in layer_b)
    if s > 0:
        f = _koszul_differential(mod, n, e, s - 1, alpha)
        rels_a = _layer_rels(mod, _koszul_layer(mod, n, e, s - 1, alpha))
    else:
        f = zeros(dim_b, 0)
        rels_a = zeros(0, 0)
    if s < n:
        g = _koszul_differential(mod, n, e, s, alpha)
        rels_c = _layer_rels(mod, _koszul_layer(mod, n, e, s + 1, alpha))
    else:
        g = zeros(0, dim_b)
        rels_c = zeros(0, 0)
    return homology_at(f, g, rels_a, _layer_rels(mod, layer_b), rels_c)


def koszul_cohomology(mod: StandardModule, n: int, e: int, s: int,
                      alpha: Degree) -> tuple[int, int]:
    """H^s of the stage-e Koszul complex on (vbar_1^e, ..., vbar_n^e).

    This is one stage of the colimit defining H^s_J; lc_oracle drives e
    upward until the stages stabilize.

    >>> koszul_cohomology(p_module(), 1, 6, 1, -2 * RHO)
    (1, 0)
    >>> koszul_cohomology(pbar(0), 1, 5, 0, ZERO)
    (0, 0)
    """
    if s < 0 or s > n:
        return (0, 0)
    return _koszul_homology(mod, n, e, s, alpha).group.summarize()


def _transition_matrix(mod: StandardModule, n: int, e: int, s: int,
                       alpha: Degree) -> np.ndarray:
    """Chain map C^s(stage e) -> C^s(stage e+1): multiply by vbar_S."""
    src = _koszul_layer(mod, n, e, s, alpha)
    tgt = _koszul_layer(mod, n, e + 1, s, alpha)
    dim_t = sum(len(g) for _, _, g in tgt)
    dim_s = sum(len(g) for _, _, g in src)
    mat = zeros(dim_t, dim_s)
    r0 = c0 = 0
    for (subset, at, gens), (_, _, tgens) in zip(src, tgt):
        exps = [0] * (max(subset) if subset else 0)
        for i in subset:
            exps[i - 1] = 1
        block = mono_matrix(mod, n, tuple(exps), at)
        mat[r0:r0 + block.shape[0], c0:c0 + block.shape[1]] = block
        r0 += len(tgens)
        c0 += len(gens)
    return mat


def lc_oracle(mod: StandardModule, n: int, s: int, alpha: Degree,
              e_start: int | None = None, confirm: int = 1,
              max_e: int = 60) -> tuple[int, int]:
    """H^s_J(M) at alpha as a certified stabilized Koszul colimit.

    The certificate demands `confirm` consecutive stages with equal
    invariants whose transition maps are isomorphisms (surjectivity plus
    equal invariants suffices for finitely generated groups); raises
    StabilizationFailure if max_e stages never settle.

    >>> lc_oracle(p_module(), 1, 1, -2 * RHO)
    (1, 0)
    >>> lc_oracle(dual_p(), 2, 0, -3 * RHO)
    (2, 0)
    """
    if s < 0 or s > n:
        return (0, 0)
    if n == 0:
        gens = module_gens(mod, 0, alpha)
        return (len(gens), 0) if mod.kind in ("P", "DualP", "IdealZ") \
            else (0, len(gens))
    k = _diag_weight(mod, alpha)
    if e_start is None:
        e_start = max(2, abs(k) + 2 if k is not None else 2)
    prev = None
    good = 0
    for e in range(e_start, max_e + 1):
        here = _koszul_homology(mod, n, e, s, alpha)
        if prev is not None:
            same = prev.group.summarize() == here.group.summarize()
            if same:
                step = _transition_matrix(mod, n, e - 1, s, alpha)
                induced = induced_map(prev, here, step)
                if map_is_surjective(induced, here.group):
                    good += 1
                    if good >= confirm:
                        return here.group.summarize()
                else:
                    good = 0
            else:
                good = 0
        prev = here
    raise StabilizationFailure(
        f"Koszul colimit for {mod.describe()} H^{s} at {alpha} "
        f"did not settle by stage {max_e}")


# --- closed forms -----------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class LCSummand:
    """One summand of the local cohomology of a catalogue module."""

    s: int
    module: StandardModule


def lc_closed_form(mod: StandardModule, n: int) -> list[LCSummand]:
    """H^*_J(M) as a list of catalogue summands with absolute shifts.

    J-power-torsion modules (duals, towers, Pbar_n) are their own H^0.
    The polynomial-type modules concentrate in the top degree n - s, with
    a second group in degree n - t + 1 for the two-step ideals.  The
    contested conventions here are the oracle-confirmed ones; see
    convention_report().

    >>> [(m.s, m.module.describe()) for m in lc_closed_form(p_module(), 2)]
    [(2, 'P*(-4-4s)')]
    >>> [(m.s, m.module.describe()) for m in lc_closed_form(ideal_z(2), 2)]
    [(2, 'P*(-4-4s)'), (1, 'Pbar2^')]
    """
    sh = mod.shift
    dn = total_vbar_degree(n)
    if n == 0:
        return [LCSummand(0, mod)]
    kind = mod.kind
    if kind in ("DualP", "DualPbar", "TowerF2", "DualTowerF2"):
        return [LCSummand(0, mod)]
    if kind == "P":
        return [LCSummand(n, dual_p(sh - dn))]
    if kind == "Pbar":
        if mod.s >= n:
            return [LCSummand(0, mod)]
        ds = total_vbar_degree(mod.s)
        return [LCSummand(n - mod.s, dual_pbar(mod.s, sh + ds - dn))]
    if kind == "IdealZ":
        out = [LCSummand(n, dual_p(sh - dn))]
        t = min(mod.t, n)
        if t >= 1:
            dt = total_vbar_degree(t)
            out.append(LCSummand(n - t + 1, dual_pbar(t, sh + dt - dn)))
        return out
    # IdealF2(s, t): principal ideals are free of rank one over Pbar_s,
    # shifted by the weight 2^(s+1) - 1 of their generator.
    s, t = mod.s, min(mod.t, n)
    if s >= n:
        raise ValueError(f"{mod.describe()} is zero for n = {n}")
    ds = total_vbar_degree(s)
    extra = RHO * (2 ** (s + 1) - 1) if t == s + 1 else ZERO
    out = [LCSummand(n - s, dual_pbar(s, sh + ds - dn + extra))]
    if t >= s + 2:
        dt = total_vbar_degree(t)
        out.append(LCSummand(n - t + 1, dual_pbar(t, sh + dt - dn)))
    return out


def lc_ranks(mod: StandardModule, n: int, s: int,
             alpha: Degree) -> tuple[int, int]:
    """(free, F_2) ranks of H^s_J(M) at alpha from the closed form.

    >>> lc_ranks(p_module(), 2, 2, -4 * RHO)
    (1, 0)
    >>> lc_ranks(pbar(1), 2, 1, -3 * RHO)
    (0, 1)
    """
    free = f2 = 0
    for summand in lc_closed_form(mod, n):
        if summand.s == s:
            a, b = module_ranks(summand.module, n, alpha)
            free += a
            f2 += b
    return (free, f2)


def check_closed_form(mod: StandardModule, n: int, k_lo: int, k_hi: int,
                      confirm: int = 1) -> None:
    """Compare closed form against the Koszul oracle on a window.

    Scans the rho-line through the module's natural support in the given
    k-range for every cohomological degree 0..n and raises AssertionError
    on the first mismatch.
    """
    for s in range(n + 1):
        for k in range(k_lo, k_hi + 1):
            alpha = mod.shift + RHO * k
            want = lc_ranks(mod, n, s, alpha)
            got = lc_oracle(mod, n, s, alpha, confirm=confirm)
            if want != got:
                raise AssertionError(
                    f"{mod.describe()}, H^{s} at {alpha}: closed form "
                    f"{want}, oracle {got}")


def convention_report(confirm: int = 1) -> list[str]:
    """Settle the contested closed-form conventions against the oracle.

    Each witness pits the shipped formula against the rejected variant at
    a degree where they differ, runs the Koszul oracle, and reports which
    one survives.  Returns human-readable lines; raises AssertionError if
    the oracle ever sides with a rejected variant.
    """
    lines = []
    # principal ideal (vbar_2)Pbar_1 in P = Z[v1, v2]: shift by the full
    # generator weight 3*rho, not by 2*rho
    mod = ideal_f2(1, 2)
    got = lc_oracle(mod, 2, 1, ZERO, confirm=confirm)
    ship = lc_ranks(mod, 2, 1, ZERO)
    variant = module_ranks(dual_pbar(1, RHO * (1 - 4 + 2)), 2, ZERO)
    if got != ship or got == variant:
        raise AssertionError(
            f"principal-ideal witness inconclusive: oracle {got}, "
            f"shipped {ship}, variant {variant}")
    lines.append(
        "principal ideal (v2)Pbar1, n=2, H^1 at 0: oracle "
        f"{got} confirms generator-weight shift 3*rho; the flat s+1 "
        f"shift predicts {variant}")
    # two-step ideal (v1, v2)Pbar0: the dual summands shift by
    # (D_s - D_n)*rho downward, not upward
    mod = ideal_f2(0, 2)
    at = -4 * RHO
    got = lc_oracle(mod, 2, 2, at, confirm=confirm)
    ship = lc_ranks(mod, 2, 2, at)
    variant = module_ranks(dual_pbar(0, 4 * RHO), 2, at)
    if got != ship or got == variant:
        raise AssertionError(
            f"two-step ideal witness inconclusive: oracle {got}, "
            f"shipped {ship}, variant {variant}")
    lines.append(
        "two-step ideal (v1,v2)Pbar0, n=2, H^2 at -4rho: oracle "
        f"{got} confirms the downward shift (D_0 - D_2)*rho; the "
        f"mirrored sign predicts {variant}")
    # the second group of the same ideal, and of (2, v1, v2)P, already
    # carries the downward sign in all readings; confirm it anyway
    for mod, s in ((ideal_f2(0, 2), 1), (ideal_z(2), 1)):
        got = lc_oracle(mod, 2, s, ZERO, confirm=confirm)
        ship = lc_ranks(mod, 2, s, ZERO)
        if got != ship:
            raise AssertionError(
                f"{mod.describe()} H^{s} at 0: oracle {got}, shipped {ship}")
        lines.append(
            f"{mod.describe()}, n=2, H^{s} at 0: oracle {got} matches "
            "the shipped (D_t - D_n)*rho shift")
    return lines
