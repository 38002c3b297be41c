"""The RO(C2)-graded coefficient ring of the Real Brown-Peterson spectrum.

The ring is presented as the subalgebra of

    Z_(2)[a, vbar_1, vbar_2, ..., u^{+-1}] / (2a,  vbar_i a^(2^(i+1)-1))

generated by a and the twisted classes vbar_m(j) = u^(2^m j) vbar_m, with
vbar_0 = 2 (so vbar_0(j) = 2u^j).  Degrees: |a| = -sigma, |u| = 2 - 2 sigma,
|vbar_i| = (2^i - 1) rho.

A monomial a^k u^l vbar^c with 2-adic coefficient valuation v lies in the
subalgebra iff l = 0 or 2^m divides l, where m is the least index with
positive content (v supplies vbar_0-content).  This divisibility shortcut is
not part of the presentation; it is validated against products of generators
by the test suite.

Quotients by powers of the vbar_i are computed through the cofibre sequence

  0 -> pi(M)/x -> pi(M/x) -> ker(x) -> 0      (kernel taken one degree lower)

iterated one generator at a time.  Groups are kept as lists of tagged
monomial symbols whenever every step stays exact and monomial; otherwise the
answer degrades to layer summaries with extension_known = False.
"""

from __future__ import annotations

import dataclasses
import functools
from typing import Callable, Sequence

import numpy as np

from .grading import Degree, Window, generator_degree


class StabilizationFailure(RuntimeError):
    """Enlarging enumeration caps kept changing a degree's answer."""


class UnknownExtension(RuntimeError):
    """A requested value depends on an unresolved group extension."""


# ---------------------------------------------------------------------------
# monomials

def _strip(c: Sequence[int]) -> tuple[int, ...]:
    c = tuple(int(x) for x in c)
    while c and c[-1] == 0:
        c = c[:-1]
    return c


@dataclasses.dataclass(frozen=True, order=True)
class Monomial:
    """Ambient monomial a^k u^l vbar_1^c1 vbar_2^c2 ...

    c omits vbar_0; trailing zeros are stripped so equality is structural.

    >>> Monomial(1, 0, (2,)).degree()
    Degree(triv=2, sgn=1)
    >>> Monomial(3, 0, (1,)).is_zero()   # vbar_1 a^3 = 0
    True
    """

    k: int
    l: int
    c: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "c", _strip(self.c))
        if self.k < 0:
            raise ValueError("negative a-exponent")
        if any(x < 0 for x in self.c):
            raise ValueError("negative vbar-exponent")

    def degree(self) -> Degree:
        w = self.weight()
        return Degree(2 * self.l + w, -self.k - 2 * self.l + w)

    def weight(self) -> int:
        """Sum c_i (2^i - 1), the rho-weight of the vbar part."""
        return sum(ci * (2 ** i - 1) for i, ci in enumerate(self.c, start=1))

    def is_zero(self) -> bool:
        """Whether a relation vbar_i a^(2^(i+1)-1) = 0 applies."""
        return any(ci > 0 and self.k >= 2 ** (i + 1) - 1
                   for i, ci in enumerate(self.c, start=1))

    def min_content(self, coeff_2val: int = 0) -> int | None:
        """Least index with positive content; coefficient 2s count as index 0."""
        if coeff_2val >= 1:
            return 0
        for i, ci in enumerate(self.c, start=1):
            if ci > 0:
                return i
        return None

    def times(self, other: "Monomial") -> "Monomial":
        n = max(len(self.c), len(other.c))
        c = tuple((self.c[i] if i < len(self.c) else 0)
                  + (other.c[i] if i < len(other.c) else 0) for i in range(n))
        return Monomial(self.k + other.k, self.l + other.l, c)

    def __str__(self) -> str:
        parts = []
        if self.k:
            parts.append(f"a^{self.k}" if self.k != 1 else "a")
        if self.l:
            parts.append(f"u^{self.l}" if self.l != 1 else "u")
        for i, ci in enumerate(self.c, start=1):
            if ci:
                parts.append(f"v{i}^{ci}" if ci != 1 else f"v{i}")
        return " ".join(parts) if parts else "1"


def vbar_monomial(i: int, power: int = 1) -> Monomial:
    if i < 1:
        raise ValueError("vbar_monomial wants index >= 1 (vbar_0 is the number 2)")
    c = [0] * i
    c[i - 1] = power
    return Monomial(0, 0, c)


def is_in_subalgebra(m: Monomial, coeff_2val: int = 0) -> bool:
    """Membership in the coefficient subalgebra.

    >>> is_in_subalgebra(Monomial(0, 1))        # u alone
    False
    >>> is_in_subalgebra(Monomial(0, 1), 1)     # 2u = vbar_0(1)
    True
    >>> is_in_subalgebra(Monomial(0, 2, (1,)))  # u^2 vbar_1 = vbar_1(1)
    True
    """
    if m.l == 0:
        return True
    mc = m.min_content(coeff_2val)
    return mc is not None and m.l % (2 ** mc) == 0


# ---------------------------------------------------------------------------
# elements and multiplication

class CoeffElement:
    """A 2-locally integral combination of subalgebra monomials.

    Stored as monomial -> integer coefficient; coefficients on a-divisible
    monomials are reduced mod 2, and every stored monomial is nonzero and a
    subalgebra member (with its coefficient's 2-valuation as vbar_0 content).
    """

    def __init__(self, terms: dict[Monomial, int] | None = None):
        self.terms: dict[Monomial, int] = {}
        for mono, coeff in (terms or {}).items():
            self._accumulate(mono, coeff)

    def _accumulate(self, mono: Monomial, coeff: int) -> None:
        if coeff == 0 or mono.is_zero():
            return
        if mono.k > 0:
            coeff %= 2
            if coeff == 0:
                return
        val = 0
        cc = coeff
        while cc % 2 == 0:
            cc //= 2
            val += 1
        if not is_in_subalgebra(mono, val):
            raise ValueError(f"{coeff}*{mono} is not in the coefficient ring")
        self.terms[mono] = self.terms.get(mono, 0) + coeff
        if self.terms[mono] == 0 or (mono.k > 0 and self.terms[mono] % 2 == 0):
            del self.terms[mono]

    def __add__(self, other: "CoeffElement") -> "CoeffElement":
        out = CoeffElement(dict(self.terms))
        for mono, coeff in other.terms.items():
            out._accumulate(mono, coeff)
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, CoeffElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> Degree | None:
        degs = {m.degree() for m in self.terms}
        if len(degs) != 1:
            return None
        return degs.pop()

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for mono in sorted(self.terms):
            coeff = self.terms[mono]
            head = "" if coeff == 1 else f"{coeff}*"
            bits.append(f"{head}{mono}")
        return " + ".join(bits)


def element(mono: Monomial, coeff: int = 1) -> CoeffElement:
    return CoeffElement({mono: coeff})


def twisted_vbar(m: int, twist: int = 0) -> CoeffElement:
    """The generator vbar_m(twist); vbar_0(j) is the element 2u^j.

    >>> str(twisted_vbar(1, 1))
    'u^2 v1'
    >>> str(twisted_vbar(0, 3))
    '2*u^3'
    """
    if m == 0:
        return element(Monomial(0, twist), 2)
    return element(Monomial(0, 2 ** m * twist, vbar_monomial(m).c))


def multiply(x: CoeffElement, y: CoeffElement) -> CoeffElement:
    """Product in the coefficient ring; the result re-checks membership.

    >>> str(multiply(twisted_vbar(1, 1), twisted_vbar(0, 3)))
    '2*u^5 v1'
    >>> multiply(element(Monomial(1, 0)), twisted_vbar(0, 1)).is_zero()
    True
    """
    out = CoeffElement()
    for mx, cx in x.terms.items():
        for my, cy in y.terms.items():
            out._accumulate(mx.times(my), cx * cy)
    return out


# ---------------------------------------------------------------------------
# degreewise bases of the coefficient ring

@dataclasses.dataclass(frozen=True)
class Caps:
    """Enumeration bounds: a-exponents up to a_cap, grown `rounds` times."""

    a_cap: int = 40
    rounds: int = 4


DEFAULT_CAPS = Caps()


@dataclasses.dataclass(frozen=True, order=True)
class BasisEntry:
    """One basis class: the image of lattice * mono (free) or mono (F2).

    betas records, oldest first, quotient steps whose boundary map produced
    the class; it is empty for classes of the ground ring.
    """

    mono: Monomial
    lattice: int
    torsion: bool
    betas: tuple[int, ...] = ()

    def describe(self) -> str:
        head = "" if self.lattice == 1 else f"{self.lattice}*"
        body = f"{head}{self.mono}"
        for step in reversed(self.betas):
            body = f"b{step}({body})"
        return body


def weight_tuples(w: int, allowed: Callable[[int], bool]) -> list[tuple[int, ...]]:
    """Exponent tuples c (index 1 based) with sum c_i (2^i - 1) = w.

    >>> sorted(weight_tuples(3, lambda i: True))
    [(0, 1), (3,)]
    >>> weight_tuples(0, lambda i: True)
    [()]
    """
    if w < 0:
        return []
    top = 0
    while 2 ** (top + 2) - 1 <= w:
        top += 1
    top += 1  # now 2^(top+1)-1 > w >= 2^top - 1 territory

    out: list[tuple[int, ...]] = []

    def rec(i: int, rest: int, suffix: list[int]):
        if i == 0:
            if rest == 0:
                out.append(_strip(list(reversed(suffix))))
            return
        part = 2 ** i - 1
        max_ci = rest // part if allowed(i) else 0
        for ci in range(max_ci, -1, -1):
            rec(i - 1, rest - ci * part, suffix + [ci])

    rec(top, w, [])
    return out


def _enumerate_with_cap(alpha: Degree, a_cap: int) -> list[BasisEntry]:
    t, s = alpha.triv, alpha.sgn
    d = t - s
    out: list[BasisEntry] = []
    k = d % 4
    while k <= a_cap:
        if (t + s + k) % 2 == 0:
            w = (t + s + k) // 2
            l = (d - k) // 4
            if w >= 0:
                if k == 0:
                    for c in weight_tuples(w, lambda i: True):
                        mono = Monomial(0, l, c)
                        lat = 1 if is_in_subalgebra(mono) else 2
                        out.append(BasisEntry(mono, lat, torsion=False))
                else:
                    for c in weight_tuples(w, lambda i, kk=k: kk < 2 ** (i + 1) - 1):
                        mono = Monomial(k, l, c)
                        if not mono.is_zero() and is_in_subalgebra(mono):
                            out.append(BasisEntry(mono, 1, torsion=True))
        k += 4
    return sorted(out)


def _a_exponent_bound(alpha: Degree) -> int:
    """Past this a-exponent the degree provably holds no more classes.

    For k > triv + sgn + 2 a nonzero member class has at most one vbar
    factor.  With none at all it is a pure a-power (u-exponent 0 forces
    triv = 0, k = -sgn); with one factor vbar_i the weight 2^i - 1 and the
    divisibility 2^i | l pin i to the 2-valuation of triv + 1.
    """
    t, s = alpha.triv, alpha.sgn
    bound = max(t + s + 2, 0)
    if t == 0:
        bound = max(bound, -s)
    if t % 2 == 1:  # sparse regime candidates need t odd
        i = 1
        tt = t + 1
        while tt % 2 == 0 and tt != 0:
            tt //= 2
            i += 1
        i -= 1  # v2(t + 1)
        if t + 1 != 0 and i >= 1:
            bound = max(bound, 2 ** (i + 1) - 2 - (t + s))
    return bound


def basis_in_degree(alpha: Degree, caps: Caps = DEFAULT_CAPS) -> list[BasisEntry]:
    """Certified basis of the coefficient ring in one degree.

    Enumerates under a growing a-exponent cap until two successive caps agree
    (the second already past the provable bound), else raises
    StabilizationFailure.

    >>> [e.describe() for e in basis_in_degree(Degree(0, 0))]
    ['1']
    >>> [e.describe() for e in basis_in_degree(Degree(0, -1))]
    ['a']
    >>> [e.describe() for e in basis_in_degree(Degree(2, -2))]
    ['2*u']
    """
    return list(_basis_cached(alpha, caps))


@functools.lru_cache(maxsize=None)
def _basis_cached(alpha: Degree, caps: Caps) -> tuple[BasisEntry, ...]:
    cap = max(caps.a_cap, _a_exponent_bound(alpha) + 4)
    prev = _enumerate_with_cap(alpha, cap)
    for _ in range(caps.rounds):
        cap += 8
        cur = _enumerate_with_cap(alpha, cap)
        if cur == prev:
            return tuple(cur)
        prev = cur
    raise StabilizationFailure(f"basis at {alpha} did not stabilize by cap {cap}")


# ---------------------------------------------------------------------------
# quotient towers

@dataclasses.dataclass(frozen=True)
class QuotientIdeal:
    """Which vbar powers to kill: exponents[i] is the power on vbar_(i+1);
    0 keeps the generator.  tail = 1 kills every generator beyond the listed
    ones (truncations and integral cohomology), tail = 0 keeps them.
    """

    exponents: tuple[int, ...] = ()
    tail: int = 0

    def __post_init__(self):
        if self.tail not in (0, 1):
            raise ValueError("tail must be 0 or 1")
        if any(e < 0 for e in self.exponents):
            raise ValueError("negative exponent")

    @staticmethod
    def of(seq, tail: int = 0) -> "QuotientIdeal":
        if isinstance(seq, QuotientIdeal):
            return seq
        return QuotientIdeal(tuple(int(x) for x in seq), tail)

    @staticmethod
    def truncation(n: int) -> "QuotientIdeal":
        """Kill vbar_i for all i > n."""
        return QuotientIdeal((0,) * n, tail=1)

    def steps_up_to(self, i_stop: int) -> tuple[tuple[int, int], ...]:
        """(index, exponent) pairs in ascending index order through i_stop."""
        steps = [(i + 1, e) for i, e in enumerate(self.exponents) if e > 0]
        if self.tail:
            steps += [(i, 1) for i in range(len(self.exponents) + 1, i_stop + 1)]
        return tuple(steps)


@dataclasses.dataclass
class TowerGroup:
    """Groups of one degree of an iterated quotient.

    When exact, entries is an honest basis.  mult_trusted marks whether
    multiplication by further monomials on these entries is filtration safe
    (no boundary classes anywhere in the dependency cone).
    """

    entries: list[BasisEntry]
    exact: bool
    mult_trusted: bool
    sub_summary: tuple[int, int]
    quot_summary: tuple[int, int]

    def summarize(self) -> tuple[int, int]:
        if not self.exact:
            raise UnknownExtension(
                "group known only as layers "
                f"{self.sub_summary} / {self.quot_summary}")
        free = sum(1 for e in self.entries if not e.torsion)
        tors = sum(1 for e in self.entries if e.torsion)
        return (free, tors)


def _summary_of(entries: list[BasisEntry]) -> tuple[int, int]:
    return (sum(1 for e in entries if not e.torsion),
            sum(1 for e in entries if e.torsion))


class _Tower:
    """Degreewise groups of B modulo an ordered list of vbar-power steps."""

    def __init__(self, steps: tuple[tuple[int, int], ...], caps: Caps):
        self.steps = steps
        self.caps = caps
        self._memo: dict[tuple[int, Degree], TowerGroup] = {}

    def group(self, stage: int, alpha: Degree) -> TowerGroup:
        key = (stage, alpha)
        if key not in self._memo:
            self._memo[key] = self._compute(stage, alpha)
        return self._memo[key]

    def _compute(self, stage: int, alpha: Degree) -> TowerGroup:
        if stage == 0:
            entries = basis_in_degree(alpha, self.caps)
            return TowerGroup(entries, True, True, _summary_of(entries), (0, 0))
        index, exp = self.steps[stage - 1]
        shift = generator_degree("vbar", index=index, power=exp)
        below = stage - 1

        tgt = self.group(below, alpha)
        src = self.group(below, alpha - shift)
        ker_tgt = self.group(below, alpha - Degree(1, 0))
        ker_src = self.group(below, alpha - Degree(1, 0) - shift)

        trusted = all(g.exact and g.mult_trusted
                      for g in (tgt, src, ker_tgt, ker_src))
        if not trusted:
            return TowerGroup([], False, False, (-1, -1), (-1, -1))

        mult = vbar_monomial(index, exp)
        sub_entries = self._coker_entries(src, tgt, mult, stage)
        ker_entries = self._ker_entries(ker_src, ker_tgt, mult, stage)
        quot_entries = [dataclasses.replace(e, betas=e.betas + (stage,))
                        for e in ker_entries]

        sub_sum, quot_sum = _summary_of(sub_entries), _summary_of(quot_entries)
        if quot_sum == (0, 0):
            return TowerGroup(sub_entries, True, True, sub_sum, quot_sum)
        if sub_sum[0] == 0 and quot_sum[0] == 0:
            # both layers are F2 vector spaces; group is their sum, but
            # further multiplication could jump filtration
            return TowerGroup(sub_entries + quot_entries, True, False,
                              sub_sum, quot_sum)
        return TowerGroup(sub_entries + quot_entries, False, False,
                          sub_sum, quot_sum)

    def _image_class(self, entry: BasisEntry, mult: Monomial,
                     tgt: TowerGroup) -> tuple[int, BasisEntry | None]:
        """(coefficient, target entry) of mult * entry, or (0, None)."""
        prod = entry.mono.times(mult)
        if prod.is_zero():
            return (0, None)
        for cand in tgt.entries:
            if cand.betas == entry.betas and cand.mono == prod:
                if entry.torsion:
                    return (1, cand) if cand.torsion else (0, None)
                # free source: class lattice*mono lands on lattice'*mono'
                coeff = entry.lattice
                if cand.torsion:
                    return (coeff % 2, cand if coeff % 2 else None)
                q, r = divmod(coeff, cand.lattice)
                if r != 0:
                    raise AssertionError(
                        f"lattice mismatch {entry.describe()} -> {cand.describe()}")
                return (q, cand)
        return (0, None)

    def _coker_entries(self, src: TowerGroup, tgt: TowerGroup,
                       mult: Monomial, stage: int) -> list[BasisEntry]:
        erased: set[BasisEntry] = set()
        torsionized: set[BasisEntry] = set()
        for e in src.entries:
            coeff, cand = self._image_class(e, mult, tgt)
            if cand is None or coeff == 0:
                continue
            if cand.torsion:
                erased.add(cand)
            elif coeff % 2 == 1:
                erased.add(cand)
            else:
                if coeff != 2:
                    raise AssertionError("unexpected image multiplier")
                torsionized.add(cand)
        out = []
        for e in tgt.entries:
            if e in erased:
                continue
            if e in torsionized:
                out.append(dataclasses.replace(e, torsion=True))
            else:
                out.append(e)
        return out

    def _ker_entries(self, src: TowerGroup, tgt: TowerGroup,
                     mult: Monomial, stage: int) -> list[BasisEntry]:
        out = []
        for e in src.entries:
            coeff, cand = self._image_class(e, mult, tgt)
            if cand is None or coeff == 0:
                if not e.torsion:
                    raise AssertionError(
                        f"free class {e.describe()} unexpectedly in a kernel")
                out.append(e)
        return out


def _weight_budget(alpha: Degree, caps: Caps) -> int:
    return max((alpha.triv + alpha.sgn + max(caps.a_cap,
               _a_exponent_bound(alpha) + 12)) // 2, 0)


def _tail_stop(ideal: QuotientIdeal, alpha: Degree, caps: Caps) -> int:
    if not ideal.tail:
        return len(ideal.exponents)
    w = _weight_budget(alpha, caps)
    a_bound = max(caps.a_cap, _a_exponent_bound(alpha) + 12)
    i = len(ideal.exponents) + 1
    while 2 ** i - 1 <= w or 2 ** (i + 1) - 1 <= a_bound:
        i += 1
    return max(i, len(ideal.exponents))


@functools.lru_cache(maxsize=None)
def _tower_for(steps: tuple[tuple[int, int], ...], caps: Caps) -> _Tower:
    return _Tower(steps, caps)


def tower_group(ideal, alpha: Degree, caps: Caps = DEFAULT_CAPS) -> TowerGroup:
    """Groups of B modulo the given vbar powers, with a tail certificate.

    For tail = 1 ideals the kill list is truncated at an index past every
    weight and a-exponent the window can reach; one further index is run as
    a stabilization check.
    """
    ideal = QuotientIdeal.of(ideal)
    stop = _tail_stop(ideal, alpha, caps)
    steps = ideal.steps_up_to(stop)
    g = _tower_for(steps, caps).group(len(steps), alpha)
    if ideal.tail:
        steps2 = ideal.steps_up_to(stop + 1)
        g2 = _tower_for(steps2, caps).group(len(steps2), alpha)
        if (g.exact, g.entries if g.exact else g.sub_summary) != \
           (g2.exact, g2.entries if g2.exact else g2.sub_summary):
            raise StabilizationFailure(
                f"tail truncation unstable at {alpha}: index {stop} vs {stop+1}")
    return g


def group_in_degree(alpha: Degree, ideal=QuotientIdeal(),
                    caps: Caps = DEFAULT_CAPS) -> tuple[int, int]:
    """(free rank, F2 rank) of the coefficient ring or a quotient.

    >>> group_in_degree(Degree(0, 0))
    (1, 0)
    >>> group_in_degree(Degree(0, -1))
    (0, 1)
    >>> group_in_degree(Degree(-3, 1))   # rho - 4 is below the 2/u pattern
    (0, 0)
    >>> group_in_degree(Degree(-2, 2))   # 2 rho - 4 carries 2/u, lattice 2
    (1, 0)
    """
    return tower_group(ideal, alpha, caps).summarize()


def quotient_groups(ideal, alpha: Degree,
                    caps: Caps = DEFAULT_CAPS) -> tuple[tuple[int, int],
                                                        tuple[int, int], bool]:
    """(sub, quot, extension_known) for the last cofibre step at alpha.

    sub is the cokernel layer, quot the kernel layer one degree down; when
    extension_known the group is sub + quot exactly (and quot vanishing means
    the cokernel layer is the whole group).
    """
    ideal = QuotientIdeal.of(ideal)
    g = tower_group(ideal, alpha, caps)
    if g.sub_summary == (-1, -1):
        raise UnknownExtension(f"tower multiplication untrusted below {alpha}")
    return (g.sub_summary, g.quot_summary, g.exact)


# ---------------------------------------------------------------------------
# multiplication matrices

def mult_map(x: Monomial, ideal, alpha: Degree,
             caps: Caps = DEFAULT_CAPS):
    """Matrix of multiplication by x from degree alpha to alpha + |x|.

    Columns index the source basis, rows the target basis; entries are the
    integer multipliers of the monomial-to-monomial action.  Raises
    UnknownExtension when either group lacks a trusted basis.
    """
    ideal = QuotientIdeal.of(ideal)
    src = tower_group(ideal, alpha, caps)
    tgt = tower_group(ideal, alpha + x.degree(), caps)
    if not (src.exact and tgt.exact and src.mult_trusted and tgt.mult_trusted):
        raise UnknownExtension(f"no trusted bases for multiplication at {alpha}")
    stop = _tail_stop(ideal, alpha, caps)
    tower = _tower_for(ideal.steps_up_to(stop), caps)
    out = np.empty((len(tgt.entries), len(src.entries)), dtype=object)
    out[...] = 0
    for j, e in enumerate(src.entries):
        coeff, cand = tower._image_class(e, x, tgt)
        if cand is not None and coeff:
            out[tgt.entries.index(cand), j] = coeff
    return out


# ---------------------------------------------------------------------------
# underlying (non-equivariant) homotopy and restriction

def underlying_groups(ideal, t: int) -> tuple[int, int]:
    """Degree-t part of Z_(2)[v_1, v_2, ...]/(v^l), |v_i| = 2(2^i - 1).

    >>> underlying_groups(QuotientIdeal(), 6)
    (2, 0)
    >>> underlying_groups(QuotientIdeal(), 5)
    (0, 0)
    """
    ideal = QuotientIdeal.of(ideal)
    if t % 2 != 0 or t < 0:
        return (0, 0)
    w = t // 2

    def allowed(i: int) -> bool:
        if i <= len(ideal.exponents):
            return True
        return not ideal.tail

    count = 0
    for c in weight_tuples(w, allowed):
        ok = True
        for i, ci in enumerate(c, start=1):
            e = ideal.exponents[i - 1] if i <= len(ideal.exponents) else \
                (1 if ideal.tail else 0)
            if e and ci >= e:
                ok = False
                break
        if ok:
            count += 1
    return (count, 0)


def restriction_rank(ideal, alpha: Degree,
                     caps: Caps = DEFAULT_CAPS) -> int | None:
    """Per-summand index of the restriction image in the underlying group.

    Restriction sends a to 0, u to a unit, vbar_i to v_i; a lattice-2 free
    generator therefore lands on twice a monomial.  When all free summands
    at alpha share one lattice index that index is returned (1 for constant
    behaviour, 2 for the dual pattern); mixed degrees return None, no free
    part returns 1.  Rank agreement with the underlying group is asserted.
    """
    g = tower_group(ideal, alpha, caps)
    free = [e for e in g.entries if not e.torsion]
    under_free, _ = underlying_groups(ideal, alpha.triv + alpha.sgn)
    if len(free) != under_free:
        raise AssertionError(
            f"free rank {len(free)} at {alpha} vs underlying rank {under_free}")
    lattices = {e.lattice for e in free}
    if not lattices:
        return 1
    if len(lattices) > 1:
        return None
    return lattices.pop()


# ---------------------------------------------------------------------------
# nilpotence of vbar_i on B/vbar_i^k

def nilpotence_check(i: int, k: int, window: Window,
                     exponent: int | None = None,
                     caps: Caps = DEFAULT_CAPS) -> bool:
    """Whether vbar_i^exponent provably acts as zero on pi(B/vbar_i^k).

    exponent defaults to 3k.  For exponent >= 2k the action is zero by the
    two layer factorization (the first k factors land the class in the
    cokernel layer, the next k kill it); the induced layer maps are computed
    and asserted zero as a sanity check.  For smaller exponents: a nonzero
    induced layer map decides False; all-zero layer maps decide True only
    when no degree leaves room for a filtration jump, else False (a jump
    cannot be excluded from layer data).  Raises UnknownExtension when a
    tested degree's group is not even known as a sum of layers.
    """
    if exponent is None:
        exponent = 3 * k
    ideal = QuotientIdeal.of([0] * (i - 1) + [k])
    mult = vbar_monomial(i, exponent)
    shift = mult.degree()

    jump_room = False
    for alpha in window:
        src = tower_group(ideal, alpha, caps)
        tgt = tower_group(ideal, alpha + shift, caps)
        for g in (src, tgt):
            if g.sub_summary == (-1, -1):
                raise UnknownExtension(f"layers unknown at {alpha}")
        if not src.entries or not tgt.entries:
            continue
        # induced maps on both layers, computed symbolically
        stop = _tail_stop(ideal, alpha, caps)
        tower = _tower_for(ideal.steps_up_to(stop), caps)
        for e in src.entries:
            coeff, cand = tower._image_class(e, mult, tgt)
            if cand is not None and coeff:
                if exponent >= 2 * k:
                    raise AssertionError(
                        "layer map should vanish for exponent >= 2k")
                return False
        # layers all zero here; can a jump happen?
        src_quot = [e for e in src.entries if e.betas]
        tgt_sub = [e for e in tgt.entries if not e.betas]
        if src_quot and tgt_sub:
            jump_room = True
    if exponent >= 2 * k:
        return True
    return not jump_room
