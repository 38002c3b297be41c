"""Arithmetic of RO(C2) degrees, diagonals, and rectangular degree windows.

The grading group RO(C2) is free abelian of rank 2 on the trivial
representation 1 and the sign representation sigma.  A degree
alpha = t + s*sigma is stored as the integer pair (t, s).  Three derived
quantities occur constantly:

    rho   = 1 + sigma        (the regular representation)
    delta = 1 - sigma
    alpha = d + k*rho        (the diagonal decomposition: d = t - s, k = s)

Everything in this module is a pure value type; operations never mutate.
"""

from __future__ import annotations

import dataclasses
from typing import Iterator, Sequence


@dataclasses.dataclass(frozen=True, order=True)
class Degree:
    """An element t + s*sigma of RO(C2).

    >>> Degree(1, 1) + Degree(0, 1)
    Degree(triv=1, sgn=2)
    >>> -Degree(2, -2)
    Degree(triv=-2, sgn=2)
    >>> 3 * Degree(1, 1)
    Degree(triv=3, sgn=3)
    """

    triv: int
    sgn: int

    def __add__(self, other: "Degree") -> "Degree":
        return Degree(self.triv + other.triv, self.sgn + other.sgn)

    def __sub__(self, other: "Degree") -> "Degree":
        return Degree(self.triv - other.triv, self.sgn - other.sgn)

    def __neg__(self) -> "Degree":
        return Degree(-self.triv, -self.sgn)

    def __mul__(self, k: int) -> "Degree":
        return Degree(self.triv * k, self.sgn * k)

    __rmul__ = __mul__

    def diagonal(self) -> tuple[int, int]:
        """Decompose as alpha = d + k*rho.

        Returns:
            (d, k) with d = triv - sgn and k = sgn.

        >>> Degree(0, -1).diagonal()   # |a| = 1 - rho
        (1, -1)
        >>> Degree(2, -2).diagonal()   # |u| sits on the 4-diagonal
        (4, -2)
        """
        return (self.triv - self.sgn, self.sgn)

    @staticmethod
    def from_diagonal(d: int, k: int) -> "Degree":
        """Inverse of diagonal(): d + k*rho as a Degree.

        >>> Degree.from_diagonal(*Degree(7, -3).diagonal())
        Degree(triv=7, sgn=-3)
        """
        return Degree(d + k, k)

    def to_json(self) -> list[int]:
        """Serialize as the two-element array [triv, sgn]."""
        return [self.triv, self.sgn]

    @staticmethod
    def from_json(pair: Sequence[int]) -> "Degree":
        if len(pair) != 2:
            raise ValueError(f"degree must be a [triv, sgn] pair, got {pair!r}")
        return Degree(int(pair[0]), int(pair[1]))

    def __str__(self) -> str:
        """Human form like '3+2s', '-s', '0' (s denotes sigma).

        >>> str(Degree(4, -1)), str(Degree(0, 1)), str(Degree(0, 0))
        ('4-s', 's', '0')
        """
        t, s = self.triv, self.sgn
        if s == 0:
            return str(t)
        if s == 1:
            sig = "s"
        elif s == -1:
            sig = "-s"
        else:
            sig = f"{s:+d}s".lstrip("+") if t == 0 else f"{s:+d}s"
        if t == 0:
            return sig
        return f"{t}{sig}" if sig.startswith(("+", "-")) else f"{t}+{sig}"


ZERO = Degree(0, 0)
SIGMA = Degree(0, 1)
RHO = Degree(1, 1)
DELTA = Degree(1, -1)


def generator_degree(name: str, index: int | None = None, twist: int = 0,
                     n: int | None = None, power: int = 1) -> Degree:
    """Degree of a named multiplicative generator.

    Args:
        name: one of 'a', 'u', 'U', 'vbar'.
        index: for 'vbar', the generator index m >= 0 (vbar_0 means 2).
        twist: for 'vbar', the u-twist: vbar_m(twist) = u^(2^m * twist) * vbar_m.
        n: for 'U', the truncation height; U = u^(2^n) has degree 2^(n+1)*delta.
        power: exponent applied to the generator.

    Returns:
        The RO(C2) degree, using |a| = -sigma, |u| = 2*delta,
        |vbar_m(j)| = 2^(m+2)*j + (2^m - 1 - 2^(m+1)*j)*rho.

    Raises:
        ValueError: unknown generator name or missing parameter.

    >>> generator_degree('a')
    Degree(triv=0, sgn=-1)
    >>> generator_degree('vbar', index=2)          # vbar_2 in degree 3*rho
    Degree(triv=3, sgn=3)
    >>> generator_degree('vbar', index=1, twist=-1)  # -8 + 5*rho
    Degree(triv=-3, sgn=5)
    >>> generator_degree('u', power=0)
    Degree(triv=0, sgn=0)
    """
    if name == "a":
        base = -SIGMA
    elif name == "u":
        base = 2 * DELTA
    elif name == "U":
        if n is None:
            raise ValueError("generator U needs the truncation height n")
        base = (2 ** (n + 1)) * DELTA
    elif name == "vbar":
        if index is None:
            raise ValueError("generator vbar needs an index")
        m, j = index, twist
        base = Degree(2 ** (m + 2) * j, 0) + (2 ** m - 1 - 2 ** (m + 1) * j) * RHO
    else:
        raise ValueError(f"unknown generator {name!r}")
    return power * base


def total_vbar_degree(n: int) -> Degree:
    """Sum |vbar_1| + ... + |vbar_n| = (2^(n+1) - n - 2) * rho.

    The rho-coefficient here is the Gorenstein shift slope for the height-n
    truncation; both closed forms are exercised by the tests.

    >>> total_vbar_degree(2)
    Degree(triv=4, sgn=4)
    """
    total = ZERO
    for i in range(1, n + 1):
        total = total + generator_degree("vbar", index=i)
    return total


@dataclasses.dataclass(frozen=True)
class Window:
    """A nonempty axis-aligned box of degrees in (triv, sgn) coordinates."""

    triv_min: int
    triv_max: int
    sgn_min: int
    sgn_max: int

    def __post_init__(self) -> None:
        if self.triv_min > self.triv_max or self.sgn_min > self.sgn_max:
            raise ValueError(f"empty window {self}")

    @staticmethod
    def square(r: int) -> "Window":
        """The box [-r, r] x [-r, r]."""
        return Window(-r, r, -r, r)

    @staticmethod
    def parse(text: str) -> "Window":
        """Parse 'a:b,c:d' as triv in [a, b], sgn in [c, d].

        >>> Window.parse('-2:3,0:1')
        Window(triv_min=-2, triv_max=3, sgn_min=0, sgn_max=1)
        """
        try:
            triv_part, sgn_part = text.split(",")
            t0, t1 = (int(x) for x in triv_part.split(":"))
            s0, s1 = (int(x) for x in sgn_part.split(":"))
        except ValueError as exc:
            raise ValueError(f"window must look like 'a:b,c:d', got {text!r}") from exc
        return Window(t0, t1, s0, s1)

    def __str__(self) -> str:
        return f"{self.triv_min}:{self.triv_max},{self.sgn_min}:{self.sgn_max}"

    def __contains__(self, degree: Degree) -> bool:
        return (self.triv_min <= degree.triv <= self.triv_max
                and self.sgn_min <= degree.sgn <= self.sgn_max)

    def __iter__(self) -> Iterator[Degree]:
        for t in range(self.triv_min, self.triv_max + 1):
            for s in range(self.sgn_min, self.sgn_max + 1):
                yield Degree(t, s)

    def __len__(self) -> int:
        return ((self.triv_max - self.triv_min + 1)
                * (self.sgn_max - self.sgn_min + 1))

    def reflected(self) -> "Window":
        """The image under alpha -> -alpha."""
        return Window(-self.triv_max, -self.triv_min,
                      -self.sgn_max, -self.sgn_min)

    def intersect(self, other: "Window") -> "Window | None":
        """Intersection box, or None if empty."""
        t0 = max(self.triv_min, other.triv_min)
        t1 = min(self.triv_max, other.triv_max)
        s0 = max(self.sgn_min, other.sgn_min)
        s1 = min(self.sgn_max, other.sgn_max)
        if t0 > t1 or s0 > s1:
            return None
        return Window(t0, t1, s0, s1)

    def symmetrized(self) -> "Window":
        """Largest sub-box closed under alpha -> -alpha.

        Duality checkers compare degree alpha against -alpha (and -alpha - 1),
        so they restrict to a symmetric box first.

        Raises:
            ValueError: if the window does not meet its own reflection.
        """
        box = self.intersect(self.reflected())
        if box is None:
            raise ValueError(f"window {self} does not meet its reflection")
        return box

    def shifted(self, by: Degree) -> "Window":
        return Window(self.triv_min + by.triv, self.triv_max + by.triv,
                      self.sgn_min + by.sgn, self.sgn_max + by.sgn)
