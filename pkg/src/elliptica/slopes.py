"""Exact (rank, degree) arithmetic for locally free sheaves on an elliptic curve.

Semistability is assumed, never checked: every function here works on
numerical classes only.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import classify_variety, fold, fraction_data
from .errors import DegreeZero, InvalidParams, NotApplicable


@dataclass(frozen=True)
class SheafClass:
    rank: int
    deg: int

    def __post_init__(self):
        if self.rank < 1:
            raise InvalidParams(f"rank must be positive, got {self.rank}")

    @property
    def slope(self):
        return Fraction(self.deg, self.rank)

    def __str__(self):
        return f"(rank {self.rank}, deg {self.deg})"


def tensor(c1, c2):
    return SheafClass(c1.rank * c2.rank, c1.deg * c2.rank + c2.deg * c1.rank)


def _slope(x):
    return x.slope if isinstance(x, SheafClass) else Fraction(x)


def surjectivity_criterion(c1, c2):
    """Whether ``1/mu1 + 1/mu2 < 1``, which makes ``H0(U) x H0(V) -> H0(U x V)`` onto.

    The inequality is strict, so the boundary case returns ``False`` even
    though sum ``<= 1`` is only known to be necessary.  Accepts classes or slopes.
    """
    m1, m2 = _slope(c1), _slope(c2)
    if m1 <= 0 or m2 <= 0:
        raise InvalidParams(f"slopes must be positive, got {m1} and {m2}")
    return 1 / m1 + 1 / m2 < 1


def pushforward_class(n, k):
    """Class ``(k', n)`` of the pushforward of ``L_{n/k}`` to ``E`` (needs ``X = E^g``)."""
    kind = classify_variety(n, k)
    if kind.kind != "power":
        raise NotApplicable(f"{n}/{k} has characteristic variety {kind.label()}, not E^g")
    fd = fraction_data(n, k)
    c = SheafClass(fd.kprime, n)
    assert c.slope == fold(list(reversed(fd.cf)))
    assert c.slope > 2
    return c


def evaluation_kernel_class(c):
    """Kernel of ``H0(U) x O -> U`` for ``U`` of class ``c``: ``(deg - rank, -deg)``."""
    if c.deg <= 0 or c.deg <= c.rank:
        raise InvalidParams(f"need deg > rank and deg > 0, got {c}")
    return SheafClass(c.deg - c.rank, -c.deg)


def h0_h1(c):
    if c.deg == 0:
        raise DegreeZero("h0/h1 at slope 0 depend on more than the numerical class")
    if c.deg > 0:
        return (c.deg, 0)
    return (0, -c.deg)


def _check_plst(p, q, s, t):
    if s < 1 or t < 2 or p < 2 or q < 4:
        raise InvalidParams(f"need p >= 2, q >= 4, s >= 1, t >= 2; got {(p, q, s, t)}")


def ker_alpha_slope(muE, p, q, s, t):
    """``(s mu + t)/(1 - s mu - t) + p mu + q``."""
    _check_plst(p, q, s, t)
    mu = Fraction(muE)
    x = s * mu + t
    if x <= 1:
        raise InvalidParams(f"need s*muE + t > 1, got {x}")
    val = x / (1 - x) + p * mu + q
    if p * mu + q > 4 and x > 3:
        assert val > 2
    return val


def ker_beta_slope(muE, p, q, s, t):
    """``(p + s) mu + q + t``; never below :func:`ker_alpha_slope`."""
    mu = Fraction(muE)
    val = (p + s) * mu + q + t
    assert val >= ker_alpha_slope(mu, p, q, s, t)
    return val


def exact_sequence_bounds(cA, cB):
    """Middle term of ``0 -> A -> V -> B -> 0`` and the slope interval containing it."""
    cV = SheafClass(cA.rank + cB.rank, cA.deg + cB.deg)
    lo, hi = sorted((cA.slope, cB.slope))
    assert lo <= cV.slope <= hi
    return cV, lo, hi
