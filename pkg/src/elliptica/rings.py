"""Hilbert functions of Q_{n,k} and of the twisted homogeneous coordinate rings.

Dimensions of ``B`` are computed from Neron-Severi classes only; translation
automorphisms fix those classes, so nothing here depends on ``tau``.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial, prod

from .arith import classify_variety
from .errors import InvalidParams, NotApplicable


@dataclass(frozen=True)
class NSClass:
    """The class ``a*D + b*F`` on the ``g``-th symmetric power of ``E``."""

    a: int
    b: int
    g: int = 1

    def __mul__(self, m):
        return NSClass(m * self.a, m * self.b, self.g)

    __rmul__ = __mul__

    def __add__(self, other):
        if self.g != other.g:
            raise InvalidParams("classes live on different symmetric powers")
        return NSClass(self.a + other.a, self.b + other.b, self.g)


def hilbert_Q(n, j):
    """``dim Q_j``: same as a polynomial ring in ``n`` variables."""
    if j < 0:
        raise InvalidParams(f"degree must be >= 0, got {j}")
    return comb(n - 1 + j, j)


def caci_h0(g, a, b):
    """``h^0`` of a line bundle of class ``aD + bF`` on ``S^g E``.

    Equal to ``(a + g b)/g! * prod_{i=1}^{g-1} (a + i)`` for ``a >= 0`` and ``a + g b > 0``.
    """
    if g < 1 or a < 0 or a + g * b <= 0:
        raise InvalidParams(f"need g >= 1, a >= 0 and a + g*b > 0 (g={g}, a={a}, b={b})")
    num = (a + g * b) * prod(a + i for i in range(1, g))
    q, r = divmod(num, factorial(g))
    if r:
        raise AssertionError(f"h0 formula is not integral for g={g}, a={a}, b={b}")
    return q


def ns_selfintersection(c, g=None):
    """``(aD + bF)^g = a^g + g a^{g-1} b`` using ``F.F = 0``, ``F.D^{g-1} = 1``, ``D^g = 1``."""
    g = c.g if g is None else g
    if g < 1:
        raise InvalidParams("g must be >= 1")
    return c.a**g + g * c.a ** (g - 1) * c.b


def ns_class_of_Lprime(n, k):
    """Class ``D + (m-1)F`` of the very ample sheaf on ``S^g E``."""
    kind = classify_variety(n, k)
    if kind.kind != "symmetric":
        raise NotApplicable(f"{n}/{k} has characteristic variety {kind.label()}, not a symmetric power")
    return NSClass(1, kind.m - 1, kind.g)


def gushel_flags(c):
    """``(globally_generated, ample, very_ample)`` from the sufficient conditions on ``(a, b)``."""
    return {
        "globally_generated": c.a >= 0 and c.b >= 2,
        "ample": c.a >= 1 and c.b >= 1,
        "very_ample": c.a >= 1 and c.b >= 3,
    }


def hilbert_B(n, k, j):
    """Degree-``j`` dimension of ``B(X, sigma, L)`` for ``X = E^g`` or ``S^g E``.

    On ``E^g`` this is ``j^g n`` by Riemann-Roch; on ``S^g E`` it is the
    ``h^0`` of ``j [L']``.  The ``[2,...,2,m]`` pairs share the Hilbert
    function of the matching ``[m,2,...,2]`` pair.
    """
    if j < 0:
        raise InvalidParams(f"degree must be >= 0, got {j}")
    kind = classify_variety(n, k)
    if kind.kind not in ("power", "symmetric"):
        raise NotApplicable(f"no Hilbert formula for characteristic variety {kind.label()}")
    if j == 0:
        return 1
    if kind.kind == "power":
        return j**kind.g * n
    c = NSClass(1, kind.m - 1, kind.g) * j
    return caci_h0(kind.g, c.a, c.b)


def kernel_profile(n, k, maxdeg):
    """``dim ker(Q_j -> B_j)`` for ``j = 1..maxdeg``.

    The polynomial-ring case (all ``n_i = 2``) has zero kernel.
    """
    kind = classify_variety(n, k)
    if kind.kind == "projective":
        return [0] * maxdeg
    if kind.kind not in ("power", "symmetric"):
        raise NotApplicable(f"no Hilbert formula for characteristic variety {kind.label()}")
    out = []
    for j in range(1, maxdeg + 1):
        d = hilbert_Q(n, j) - hilbert_B(n, k, j)
        if d < 0:
            raise AssertionError(f"negative kernel dimension {d} in degree {j} for {n}/{k}")
        out.append(d)
    return out
