"""Basic and negative blocks of the truncated coefficient rings.

The Borel completion of the n-truncated ring has coefficients
BB[U^(+-1)] with U = u^(2^n), where the basic block BB collects the
final-page classes whose u-exponent lies in [0, 2^n): the submodule of
the positive cone generated over Z_(2)[a, vbar_1..vbar_n]/2a by the unit
and the twisted classes vbar_k(m) = u^(2^k m) vbar_k, 0 <= k < n,
0 < m < 2^(n-k).  The ring itself is BB[U] plus U^(-1) NB[U^(-1)]: the
negative block NB is the kernel BB' of the map BB -> F_2[a] that kills
all vbar_k and vbar_k(m) (drop the pure a-powers, keep the unit only as
its double), direct sum a rank-one dual tower in degrees -1 + k sigma,
k >= 1, one column to the left of the origin.

Along each diagonal d = (trivial) - (sign) and in each column u^l the
blocks split into catalogue modules over P = Z_(2)[vbar_1..vbar_n]:
diagonal_decompose classifies the cells from their generator lattices
and annihilator exponents and validates the match degreewise, so the
same code covers truncations no chart has been drawn for.  gamma_a
recomputes NB honestly as the (a)-local cohomology of BB, and
lc_of_block applies the closed-form local cohomology at
J = (vbar_1..vbar_n) cellwise to produce the dual tables.
"""

from __future__ import annotations

import dataclasses
from functools import lru_cache

import numpy as np

from .abelian import cokernel_of_map, kernel_of_map, map_is_surjective, zeros
from .coefficients import (BasisEntry, Monomial, StabilizationFailure,
                           weight_tuples)
from .grading import DELTA, Degree, RHO, SIGMA, Window
from .hfpss import InternalInconsistency, closed_form_state, _DEAD
from .localcoh import (LCSummand, StandardModule, ideal_f2, ideal_z,
                       lc_closed_form, module_gens, p_module, pbar)

ZERO = Degree(0, 0)


class UnclassifiedModule(RuntimeError):
    """A diagonal cell fits no module of the standard catalogue."""


@dataclasses.dataclass(frozen=True)
class TowerClass:
    """One F_2 class of the negative block's dual tower, at (-1, level)."""

    level: int
    torsion = True
    lattice = 1

    def degree(self) -> Degree:
        return Degree(-1, self.level)

    def describe(self) -> str:
        return f"t{self.level}"


@lru_cache(maxsize=None)
def _bb_cached(n: int, alpha: Degree) -> tuple[BasisEntry, ...]:
    t, s = alpha.triv, alpha.sgn
    d = t - s
    out = []
    for l in range(2 ** n):
        w = t - 2 * l
        k = d - 4 * l
        if w < 0 or k < 0:
            continue
        for c in weight_tuples(w, lambda i: 1 <= i <= n):
            x = Monomial(k, l, c)
            state = closed_form_state(n, x)
            if state == _DEAD:
                continue
            if k == 0:
                out.append(BasisEntry(x, state, False))
            else:
                out.append(BasisEntry(x, 1, True))
    return tuple(sorted(out, key=lambda e: (e.mono.l, e.mono.k, e.mono.c)))


def bb_basis(n: int, alpha: Degree) -> list[BasisEntry]:
    """Monomial basis of the basic block in one degree.

    Free classes carry lattice index 1 or 2 (the doubled vbar_0 twists);
    torsion classes are F_2 on the printed monomial.

    >>> [e.describe() for e in bb_basis(1, Degree(2, -2))]
    ['2*u']
    >>> [e.describe() for e in bb_basis(2, Degree(3, 3))]
    ['v2', 'v1^3']
    >>> [e.describe() for e in bb_basis(1, Degree(0, -5))]
    ['a^5']
    """
    return list(_bb_cached(n, alpha))


def bb_groups(n: int, alpha: Degree) -> tuple[int, int]:
    """(free rank, F_2 rank) of the basic block at alpha."""
    entries = _bb_cached(n, alpha)
    free = sum(1 for e in entries if not e.torsion)
    return (free, len(entries) - free)


def _is_pure_tower(entry: BasisEntry) -> bool:
    return entry.mono.c == () and entry.mono.l == 0 and entry.lattice == 1


def bbprime_basis(n: int, alpha: Degree) -> list[BasisEntry]:
    """The kernel block BB': pure a-powers dropped, the unit doubled."""
    out = []
    for entry in _bb_cached(n, alpha):
        if _is_pure_tower(entry):
            if entry.mono.k == 0:
                out.append(BasisEntry(entry.mono, 2, False))
            continue
        out.append(entry)
    return out


def nb_basis(n: int, alpha: Degree) -> list[BasisEntry | TowerClass]:
    """Basis of the negative block: BB' plus the dual tower at -1 + k sigma.

    >>> [e.describe() for e in nb_basis(1, Degree(0, 0))]
    ['2*1']
    >>> [e.describe() for e in nb_basis(1, Degree(-1, 3))]
    ['t3']
    >>> nb_basis(1, Degree(0, -1))
    []
    """
    out: list[BasisEntry | TowerClass] = bbprime_basis(n, alpha)
    if alpha.triv == -1 and alpha.sgn >= 1:
        out.append(TowerClass(alpha.sgn))
    return out


def nb_groups(n: int, alpha: Degree) -> tuple[int, int]:
    entries = nb_basis(n, alpha)
    free = sum(1 for e in entries if not e.torsion)
    return (free, len(entries) - free)


# --- assembling the whole coefficient ring ----------------------------------

def _unit_degree(n: int) -> Degree:
    return DELTA * 2 ** (n + 1)


def _bbprime_diag_max(n: int) -> int:
    # free cells reach d = 4(2^n - 1), torsion cells d = K + 4l with
    # K <= 2^(n+1) - 2; both bounded by this
    return 3 * 2 ** (n + 1) - 6


@dataclasses.dataclass(frozen=True)
class AssembledClass:
    """A block basis class translated by a power of U = u^(2^n)."""

    u_power: int
    entry: BasisEntry | TowerClass

    def describe(self) -> str:
        body = self.entry.describe()
        if self.u_power:
            return f"U^{self.u_power} {body}"
        return body


def assemble(n: int, alpha: Degree) -> list[AssembledClass]:
    """Basis of the n-truncated ring at alpha: BB[U] + U^(-1) NB[U^(-1)].

    >>> [c.describe() for c in assemble(1, Degree(2, -2))]
    ['2*u']
    >>> [c.describe() for c in assemble(1, Degree(-4, 4))]
    ['U^-1 2*1']
    >>> [c.describe() for c in assemble(1, Degree(-5, 5))]
    ['U^-1 t1']
    """
    step = _unit_degree(n)
    period = 2 ** (n + 1)
    t, s = alpha.triv, alpha.sgn
    d = t - s
    out = []
    if t >= 0:
        for k in range(t // period + 1):
            for entry in bb_basis(n, alpha - step * k):
                out.append(AssembledClass(k, entry))
    js = set(range(1, (_bbprime_diag_max(n) - d) // (2 * period) + 1))
    if (-1 - t) % period == 0:
        j = (-1 - t) // period
        if j >= 1 and s - j * period >= 1:
            js.add(j)
    for j in sorted(js):
        for entry in nb_basis(n, alpha + step * j):
            out.append(AssembledClass(-j, entry))
    return out


def assemble_groups(n: int, alpha: Degree) -> tuple[int, int]:
    """(free rank, F_2 rank) of the assembled coefficient ring.

    >>> assemble_groups(1, Degree(-4, -3))   # the Borel tower is pruned
    (0, 0)
    >>> assemble_groups(2, Degree(3, 3))
    (2, 0)
    """
    classes = assemble(n, alpha)
    free = sum(1 for c in classes if not c.entry.torsion)
    return (free, len(classes) - free)


def borel_classes(n: int, alpha: Degree) -> list[AssembledClass]:
    """Basis of BB[U^(+-1)] at alpha (the Borel-complete coefficients)."""
    step = _unit_degree(n)
    period = 2 ** (n + 1)
    t = alpha.triv
    d = t - alpha.sgn
    k_hi = t // period  # need t - k*period >= 0
    k_lo = min(k_hi, -((_bbprime_diag_max(n) - d) // (2 * period)))
    out = []
    for k in range(k_lo, k_hi + 1):
        for entry in bb_basis(n, alpha - step * k):
            out.append(AssembledClass(k, entry))
    return out


def completion_comparison(n: int, alpha: Degree) -> tuple[int, int]:
    """(cokernel F_2 rank at alpha, kernel F_2 rank at alpha).

    The comparison map sends every assembled BB[U]- and BB'-class to its
    Borel monomial (the doubled unit lands with index 2) and the dual
    tower to zero, so the kernel is the tower and the cokernel counts the
    missed pure a-power translates plus one F_2 per doubled unit.  The
    long exact sequence of the completion puts these against the
    geometric cofibre: cofibre(alpha) = coker(alpha) + ker(alpha - 1).
    """
    ours = assemble(n, alpha)
    kernel = sum(1 for c in ours if isinstance(c.entry, TowerClass))
    doubles = sum(1 for c in ours
                  if isinstance(c.entry, BasisEntry)
                  and not c.entry.torsion and c.u_power < 0
                  and c.entry.mono.c == () and c.entry.mono.l == 0)
    mapped = {(c.u_power, c.entry.mono)
              for c in ours if isinstance(c.entry, BasisEntry)}
    missed = 0
    for b in borel_classes(n, alpha):
        key = (b.u_power, b.entry.mono)
        if key not in mapped:
            if not b.entry.torsion:
                raise InternalInconsistency(
                    f"free Borel class {b.describe()} not hit at {alpha}")
            missed += 1
    return (missed + doubles, kernel)


# --- diagonal decomposition --------------------------------------------------

@dataclasses.dataclass(frozen=True)
class DiagonalCell:
    """One column's catalogue module on a fixed diagonal."""

    d: int
    column: int
    module: StandardModule


def ref_degree(column: int, d: int) -> Degree:
    """Where column u^column meets diagonal d (the shift reference)."""
    return Degree(2 * column, 2 * column - d)


def _torsion_floor(k: int) -> int:
    # the number of vbar indices annihilated at a-exponent k: a^k kills
    # vbar_i once k >= 2^(i+1) - 1
    return (k + 1).bit_length() - 2


def _cell_candidate(n: int, d: int, l: int,
                    kind: str) -> StandardModule | None:
    k = d - 4 * l
    if k < 0 or not 0 <= l < 2 ** n:
        return None
    shift = ref_degree(l, d)
    v2 = (l & -l).bit_length() - 1 if l else None
    if k == 0:
        if kind == "nb" and l == 0:
            return ideal_z(n, shift)
        if v2 is None or v2 >= n:
            return p_module(shift)
        return ideal_z(v2, shift)
    s = _torsion_floor(k)
    if l == 0:
        if kind == "nb":
            return ideal_f2(s, n, shift) if s < n else None
        return pbar(min(s, n), shift)
    if s >= n or v2 <= s:
        return None
    return ideal_f2(s, v2, shift)


_F2_KINDS = ("Pbar", "DualPbar", "IdealF2", "TowerF2", "DualTowerF2")


def _validate_cell(n: int, d: int, l: int, kind: str,
                   module: StandardModule | None, probe: int) -> None:
    basis = nb_basis if kind == "nb" else bb_basis
    mod_torsion = module is not None and module.kind in _F2_KINDS
    for w in range(probe + 1):
        at = ref_degree(l, d) + RHO * w
        seen = sorted((e.mono.c, e.lattice, e.torsion) for e in basis(n, at)
                      if isinstance(e, BasisEntry) and e.mono.l == l
                      and e.mono.k == d - 4 * l)
        want = [] if module is None else \
            sorted((c, lam, mod_torsion)
                   for c, lam in module_gens(module, n, at))
        if seen != want:
            raise UnclassifiedModule(
                f"diagonal {d} column u^{l} ({kind}): generators {seen} "
                f"at weight {w} do not match "
                f"{module.describe() if module else 'the empty cell'}")


def diagonal_decompose(n: int, d: int, kind: str = "bb",
                       probe: int | None = None) -> list[DiagonalCell]:
    """Split one diagonal of a block into catalogue modules per column.

    Classification reads the a-exponent (annihilator pattern) and the
    2-valuation of the column (lattice pattern) off the cell, then checks
    the predicted generators degreewise against the block basis; a
    mismatch raises UnclassifiedModule.

    >>> [(c.column, c.module.describe()) for c in diagonal_decompose(2, 0)]
    [(0, 'P')]
    >>> [(c.column, c.module.describe()) for c in diagonal_decompose(2, 12)]
    [(0, 'Pbar2(-12s)'), (3, '(2)P(6-6s)')]
    >>> [(c.column, c.module.describe()) for c in diagonal_decompose(1, 3)]
    [(0, 'Pbar1(-3s)')]
    """
    if kind not in ("bb", "nb"):
        raise ValueError(f"unknown block kind {kind!r}")
    if probe is None:
        probe = 2 ** (n + 1) + 4
    cells = []
    for l in range(2 ** n):
        if d - 4 * l < 0:
            continue
        module = _cell_candidate(n, d, l, kind)
        _validate_cell(n, d, l, kind, module, probe)
        if module is not None:
            cells.append(DiagonalCell(d, l, module))
    if kind == "nb" and d <= -2:
        shift = Degree(-1, -1 - d)
        if not any(isinstance(e, TowerClass) for e in nb_basis(n, shift)):
            raise UnclassifiedModule(
                f"negative block misses its tower class on diagonal {d}")
        cells.append(DiagonalCell(d, -1, pbar(n, shift)))
    return cells


def lc_of_block(n: int, kind: str = "bb", *, d_lo: int,
                d_hi: int) -> dict[int, list[tuple[int, int, StandardModule]]]:
    """Local cohomology table of a block at J = (vbar_1..vbar_n).

    Keys are display diagonals; values list (s, column, module) where the
    module's shift is the absolute position of its contribution: an H^s
    summand of the cell on diagonal d lands on diagonal d - s, one
    trivial suspension down per cohomological degree.
    """
    table: dict[int, list[tuple[int, int, StandardModule]]] = {}
    lo_src = d_lo if kind == "nb" else max(d_lo, 0)
    for d in range(lo_src, d_hi + n + 1):
        for cell in diagonal_decompose(n, d, kind):
            for summand in lc_closed_form(cell.module, n):
                shown = d - summand.s
                if not d_lo <= shown <= d_hi:
                    continue
                module = summand.module.shifted(Degree(-summand.s, 0))
                table.setdefault(shown, []).append(
                    (summand.s, cell.column, module))
    for row in table.values():
        row.sort(key=lambda item: (item[1], item[0]))
    return table


# --- a-local cohomology of BB ------------------------------------------------

def _bb_rels(entries) -> np.ndarray:
    torsion = [i for i, e in enumerate(entries) if e.torsion]
    rels = zeros(len(entries), len(torsion))
    for j, i in enumerate(torsion):
        rels[i, j] = 2
    return rels


def bb_mult_matrix(n: int, x: Monomial, alpha: Degree) -> np.ndarray:
    """Matrix of multiplication by x from BB at alpha to BB at alpha + |x|.

    x must keep the column (u-exponent zero): the block is a module over
    Z_(2)[a, vbar_1..vbar_n]/2a only.  Raises InternalInconsistency if a
    product escapes the basis span, so the action-closure invariant is
    checked on every call.
    """
    if x.l:
        raise ValueError("block action is u-free")
    src = _bb_cached(n, alpha)
    tgt = _bb_cached(n, alpha + x.degree())
    where = {e.mono: (r, e) for r, e in enumerate(tgt)}
    mat = zeros(len(tgt), len(src))
    for col, e in enumerate(src):
        y = x.times(e.mono)
        if closed_form_state(n, y) == _DEAD:
            continue
        if y not in where:
            raise InternalInconsistency(
                f"product {y} of {x} and {e.describe()} escapes the block")
        row, te = where[y]
        if te.torsion:
            mat[row, col] = e.lattice % 2
        else:
            mat[row, col] = e.lattice // te.lattice
    return mat


def _stable_kernel(n: int, alpha: Degree) -> tuple[int, int]:
    # by e = 2^(n+1) every class has settled: vbar-content classes are
    # past their annihilator exponent, doubled frees died at e = 1, and
    # pure a-powers plus the unit never die, so ker(a^e) is constant
    src = _bb_cached(n, alpha)
    rels_src = _bb_rels(src)
    prev = None
    for e in range(2 ** (n + 1), 2 ** (n + 1) + 2):
        mat = bb_mult_matrix(n, Monomial(e, 0, ()), alpha)
        tgt = _bb_cached(n, alpha - SIGMA * e)
        ker = kernel_of_map(mat, rels_src, _bb_rels(tgt)).group.summarize()
        if prev is not None and ker != prev:
            raise StabilizationFailure(
                f"a-power kernel at {alpha} moved past its floor")
        prev = ker
    return prev


def _cokernel_floor(n: int, alpha: Degree) -> int:
    # past this stage the target degree alpha - e sigma holds pure
    # a-powers only: every vbar-content class has hit its annihilator
    # exponent and every weight-zero free class has scrolled by, so the
    # colimit transitions are structurally constant
    return 2 ** (n + 1) + 4 * (2 ** n - 1) + max(0, alpha.sgn - alpha.triv) + 2


def _stable_cokernel(n: int, alpha: Degree) -> tuple[int, int]:
    floor = _cokernel_floor(n, alpha)
    prev = None
    for e in range(floor, floor + 3):
        mat = bb_mult_matrix(n, Monomial(e, 0, ()), alpha)
        coker = cokernel_of_map(mat, _bb_rels(_bb_cached(n, alpha - SIGMA * e)))
        if prev is not None:
            step = bb_mult_matrix(n, Monomial(1, 0, ()), alpha - SIGMA * (e - 1))
            if (prev.summarize() != coker.summarize()
                    or not map_is_surjective(step, coker)):
                raise StabilizationFailure(
                    f"a-power cokernel at {alpha} moved past its floor")
        prev = coker
    return prev.summarize()


def gamma_a(n: int, window: Window) -> tuple[dict, dict]:
    """(H^0, H^1) of the a-multiplication colimit on BB, degreewise.

    H^0 is the kernel of a^e for e past the annihilator exponents (the
    a-power torsion).  H^1 is the cokernel colimit along the tower one
    sigma down at a time, read past the structural floor where only pure
    a-powers remain, with two transition isomorphisms confirmed.  Both
    floors are forced by the annihilator bounds, not guessed from
    repeated values, since a class can enter a kernel or cokernel stage
    late even after several equal stages.  Certifies against the
    negative block: NB = H^0 + H^1 shifted one trivial suspension down,
    degree by degree; InternalInconsistency otherwise.  Returns dicts
    over the window (H^1 also covers the right-shifted column the
    certificate needs).
    """
    h0: dict[Degree, tuple[int, int]] = {}
    h1: dict[Degree, tuple[int, int]] = {}
    one = Degree(1, 0)
    for alpha in window:
        h0[alpha] = _stable_kernel(n, alpha)
        for at in (alpha, alpha + one):
            if at not in h1:
                h1[at] = _stable_cokernel(n, at)
    for alpha in window:
        a0, b0 = h0[alpha]
        a1, b1 = h1[alpha + one]
        if nb_groups(n, alpha) != (a0 + a1, b0 + b1):
            raise InternalInconsistency(
                f"negative block at {alpha} is {nb_groups(n, alpha)}, "
                f"local cohomology gives {(a0 + a1, b0 + b1)}")
    return h0, h1
