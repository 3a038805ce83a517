"""Negative continued fractions and the combinatorial data attached to ``n/k``.

Everything here is exact integer or rational arithmetic, except the group
actions on ``E^g``, which act on :class:`~elliptica.theta.TorusPoint` tuples.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Tuple

from .errors import IndexOutOfRange, InvalidParams, NotApplicable
from .theta import TorusPoint


def _check(n, k):
    if not (isinstance(n, int) and isinstance(k, int)):
        raise InvalidParams(f"n and k must be integers, got {n!r}, {k!r}")
    if not n > k >= 1:
        raise InvalidParams(f"need n > k >= 1, got n={n}, k={k}")
    if gcd(n, k) != 1:
        raise InvalidParams(f"n={n} and k={k} are not coprime")


def negcf(n, k):
    """Expansion ``n/k = n_1 - 1/(n_2 - 1/(... - 1/n_g))`` with every ``n_i >= 2``.

    >>> negcf(5, 2)
    [3, 2]
    >>> negcf(4, 3)
    [2, 2, 2]
    """
    _check(n, k)
    out = []
    p, q = n, k
    while q:
        c = -(-p // q)  # ceiling
        out.append(c)
        p, q = q, c * q - p
    return out


def fold(seq):
    """Exact value of the negative continued fraction ``[n_1, ..., n_g]``."""
    if not seq:
        raise InvalidParams("cannot fold an empty continued fraction")
    val = Fraction(seq[-1])
    for c in reversed(seq[:-1]):
        val = c - 1 / val
    return val


def tridiag_det(seq):
    """Determinant of the tridiagonal matrix with ``seq`` on the diagonal and -1 beside it.

    ``d() = 1`` by convention.
    """
    prev, cur = 0, 1
    for c in seq:
        prev, cur = cur, c * cur - prev
    return cur


@dataclass(frozen=True)
class FractionData:
    n: int
    k: int
    cf: Tuple[int, ...]
    kseq: Tuple[int, ...]
    lseq: Tuple[int, ...]
    kprime: int
    sigma_coeffs: Tuple[int, ...]

    @property
    def g(self):
        return len(self.cf)


def fraction_data(n, k):
    """All of ``cf``, ``k_i``, ``l_i``, ``k'`` and the translation coefficients for ``n/k``.

    ``k_i = d(n_{i+1}, ..., n_g)`` and ``l_i = d(n_{i-1}, ..., n_1)`` are computed
    from determinants and independently from the three-term recurrence; the two
    must agree.
    """
    cf = negcf(n, k)
    g = len(cf)
    kdet = [tridiag_det(cf[i:]) for i in range(g)] + [1, 0]
    ldet = [0, 1] + [tridiag_det(cf[i - 2::-1]) for i in range(2, g + 2)]

    krec = [0] * (g + 2)
    krec[g], krec[g + 1] = 1, 0
    for i in range(g, 0, -1):
        krec[i - 1] = cf[i - 1] * krec[i] - krec[i + 1]
    lrec = [0, 1] + [0] * g
    for i in range(1, g + 1):
        lrec[i + 1] = cf[i - 1] * lrec[i] - lrec[i - 1]

    if kdet != krec or ldet != lrec:
        raise AssertionError(f"determinant and recurrence disagree for {n}/{k}")
    if kdet[0] != n or kdet[1] != k or ldet[g + 1] != n:
        raise AssertionError(f"d(n_1..n_g) != n for {n}/{k}")
    kprime = ldet[g]
    if (k * kprime) % n != 1 % n or not n > kprime >= 1:
        raise AssertionError(f"l_g={kprime} is not the inverse of k mod n")
    coeffs = tuple(kdet[i] + ldet[i] - n for i in range(1, g + 1))
    return FractionData(n, k, tuple(cf), tuple(kdet), tuple(ldet), kprime, coeffs)


@dataclass(frozen=True)
class VarietyKind:
    """Isomorphism type of the characteristic variety.

    ``kind`` is one of ``"power"`` (E^g), ``"symmetric"`` (S^g E),
    ``"projective"`` (P^{n-1}) or ``"general"`` (E^g modulo the reflection group).
    """

    kind: str
    g: int
    m: Optional[int] = None
    side: Optional[str] = None
    dim: Optional[int] = None

    def label(self):
        if self.kind == "power":
            return "E" if self.g == 1 else f"E^{self.g}"
        if self.kind == "symmetric":
            return f"S^{self.g}(E)"
        if self.kind == "projective":
            return f"P^{self.dim}"
        return f"E^{self.g}/Sigma"


def classify_variety(n, k):
    cf = negcf(n, k)
    g = len(cf)
    if all(c >= 3 for c in cf):
        return VarietyKind("power", g)
    if all(c == 2 for c in cf):
        return VarietyKind("projective", g, dim=n - 1)
    if g >= 2 and cf[0] >= 3 and all(c == 2 for c in cf[1:]):
        m = cf[0]
        assert n == (m - 1) * g + 1 and k == g
        return VarietyKind("symmetric", g, m=m, side="first")
    if g >= 2 and cf[-1] >= 3 and all(c == 2 for c in cf[:-1]):
        m = cf[-1]
        assert n == (m - 1) * g + 1 and k == (m - 1) * (g - 1) + 1
        return VarietyKind("symmetric", g, m=m, side="last")
    return VarietyKind("general", g)


def sigma_group_generators(n, k):
    """1-based indices ``i`` with ``n_i = 2``; the reflections ``s_i`` generate the group."""
    return [i + 1 for i, c in enumerate(negcf(n, k)) if c == 2]


@dataclass(frozen=True)
class StandardDivisorType:
    entries: Tuple[int, ...]
    point_degrees: Tuple[int, ...]


def standard_divisor(n, k):
    cf = negcf(n, k)
    g = len(cf)
    degs = tuple(c - 2 + (i == 0) + (i == g - 1) for i, c in enumerate(cf))
    return StandardDivisorType(tuple(cf), degs)


def apply_s(i, z):
    """Reflection ``s_i`` on a point of ``E^g``: ``z_i -> z_{i-1} - z_i + z_{i+1}``."""
    z = tuple(z)
    g = len(z)
    if not 1 <= i <= g:
        raise IndexOutOfRange(f"s_{i} undefined for g={g}")
    zero = TorusPoint()
    left = z[i - 2] if i >= 2 else zero
    right = z[i] if i < g else zero
    return z[: i - 1] + (left - z[i - 1] + right,) + z[i:]


def apply_sigma(fd, tau, z):
    """Translate coordinate ``i`` by ``c_i * tau``."""
    z = tuple(z)
    if len(z) != fd.g:
        raise InvalidParams(f"point has {len(z)} coordinates, expected {fd.g}")
    return tuple(zi + c * tau for zi, c in zip(z, fd.sigma_coeffs))


def rho_map(kind, z):
    """Quotient map ``E^g -> S^g E``; returns the multiset as a sorted tuple."""
    if kind.kind != "symmetric":
        raise NotApplicable(f"rho is only defined for symmetric powers, not {kind.label()}")
    z = tuple(z)
    g = len(z)
    if g != kind.g:
        raise InvalidParams(f"point has {g} coordinates, expected {kind.g}")
    if kind.side == "first":
        pts = [z[i + 1] - z[i] for i in range(g - 1)] + [-z[g - 1]]
    else:
        pts = [-z[0]] + [z[i] - z[i + 1] for i in range(g - 1)]
    return tuple(sorted(pts, key=lambda p: (p.u, p.v)))


def multiset_equal(a, b, tol=1e-12):
    """Greedy matching of two multisets of torus points under wraparound distance."""
    if len(a) != len(b):
        return False
    pool = sorted(b, key=lambda p: (p.u, p.v))
    for p in sorted(a, key=lambda p: (p.u, p.v)):
        best = min(range(len(pool)), key=lambda j: p.distance(pool[j]), default=None)
        if best is None or p.distance(pool[best]) > tol:
            return False
        pool.pop(best)
    return True


def fibonacci(i):
    """``f_0 = f_1 = 1``."""
    a, b = 1, 1
    for _ in range(i):
        a, b = b, a + b
    return a
