r"""Order-n theta functions on the complex torus :math:`E = \mathbb{C}/(\mathbb{Z}+\mathbb{Z}\eta)`.

The basis used throughout is

.. math::

    \theta_\alpha(z) = \sum_{x \in \alpha + a + n\mathbb{Z}}
        \exp\!\Big(\frac{\pi i x^2 \eta}{n} + 2\pi i x (z + b)\Big),
    \qquad \alpha \in \mathbb{Z}_n,

with a characteristic ``(a, b)``.  For every characteristic it satisfies

* ``theta_a(z + 1)     = exp(2 pi i a) theta_a(z)``
* ``theta_a(z + eta)   = exp(-pi i n eta - 2 pi i n (z + b)) theta_a(z)``
* ``theta_a(z + 1/n)   = exp(2 pi i (alpha + a) / n) theta_a(z)``
* ``theta_a(z + eta/n) = exp(-pi i eta / n - 2 pi i (z + b)) theta_{a+1}(z)``

The characteristic ``(n/2, 1/(2n))`` returned by :func:`canonical_characteristics`
is the one for which the quadratic relations vanish on the graph of the
translation automorphism and the R-matrix solves the Yang-Baxter equation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import InvalidParams, NonConvergent

MAX_TERMS = 10**6


@dataclass(frozen=True)
class TorusParams:
    """Lattice parameter ``eta`` and precision controls for theta evaluation."""

    eta: complex = 1j
    trunc_tol: float = 1e-14
    denom_guard: float = 1e-10

    def __post_init__(self):
        object.__setattr__(self, "eta", complex(self.eta))
        if not self.eta.imag > 0:
            raise InvalidParams(f"Im(eta) must be positive, got {self.eta}")
        if not (self.trunc_tol > 0 and self.denom_guard > 0):
            raise InvalidParams("trunc_tol and denom_guard must be positive")


def canonical_characteristics(n):
    """Characteristic ``(n/2, 1/(2n))`` under which the relation identities hold."""
    if n < 1:
        raise InvalidParams(f"n must be >= 1, got {n}")
    return (Fraction(n, 2), Fraction(1, 2 * n))


@dataclass(frozen=True)
class ThetaBasis:
    """The basis ``theta_0, ..., theta_{n-1}`` of order-n theta functions.

    ``chars`` defaults to :func:`canonical_characteristics` for ``n``.
    """

    n: int
    chars: tuple = None
    params: TorusParams = field(default_factory=TorusParams)

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise InvalidParams(f"n must be a positive integer, got {self.n}")
        object.__setattr__(self, "n", int(self.n))
        chars = canonical_characteristics(self.n) if self.chars is None else self.chars
        a, b = chars
        object.__setattr__(self, "chars", (float(a), float(b)))

    def with_chars(self, chars):
        return ThetaBasis(self.n, chars, self.params)

    @property
    def eta(self):
        return self.params.eta

    def halfwidth(self, max_abs_imag):
        """Bound ``M`` such that terms with ``|x| > M`` sum to less than ``trunc_tol``.

        Term magnitudes are bounded by ``exp(-pi s t**2 / n + 2 pi t |y|)`` with
        ``s = Im(eta)`` and ``y = Im(z)``; consecutive lattice points are at
        least one apart, so the tail is dominated by a geometric series once
        past the peak.
        """
        n = self.n
        s = self.eta.imag
        y = abs(max_abs_imag)

        def logf(t):
            return -math.pi * s * t * t / n + 2 * math.pi * t * y

        target = math.log(self.params.trunc_tol / 2)
        # root of pi s t^2/n - 2 pi y t + target = 0
        A = math.pi * s / n
        B = 2 * math.pi * y
        M = (B + math.sqrt(B * B - 4 * A * target)) / (2 * A)
        M = max(M, n * y / s)
        M = math.ceil(M)
        while True:
            if 2 * M / n + 1 > MAX_TERMS:
                raise NonConvergent(
                    f"theta series needs {2 * M // n + 1} terms (cap {MAX_TERMS}); Im(eta) too small"
                )
            q = math.exp(logf(M + 1) - logf(M))
            if q < 1 and logf(M) + math.log(2 / (1 - q)) < math.log(self.params.trunc_tol):
                return M
            M += 1


def theta_values(basis, z, halfwidth=None):
    """All ``n`` basis functions at ``z``.

    Parameters
    ----------
    basis : ThetaBasis
    z : complex or array_like of complex
    halfwidth : float, optional
        Sum over ``|x| <= halfwidth``.  Chosen from the tail bound when omitted.

    Returns
    -------
    ndarray
        Shape ``np.shape(z) + (n,)``; entry ``[..., alpha]`` is ``theta_alpha(z)``.
    """
    z = np.asarray(z, dtype=complex)
    n = basis.n
    a, b = basis.chars
    eta = basis.eta
    if halfwidth is None:
        halfwidth = basis.halfwidth(float(np.max(np.abs(z.imag))) if z.size else 0.0)
    K = int(math.ceil((halfwidth + abs(a)) / n)) + 1
    m = np.arange(-K * n, (K + 1) * n)  # starts at a multiple of n, so m % n == column
    x = m + a
    keep = np.abs(x) <= halfwidth
    phase = 1j * np.pi * x * x * eta / n
    terms = np.exp(phase + 2j * np.pi * x * (z[..., None] + b))
    terms = np.where(keep, terms, 0)
    return terms.reshape(z.shape + (2 * K + 1, n)).sum(axis=-2)


def theta(basis, alpha, z):
    """Single basis function ``theta_alpha(z)``; ``alpha`` is reduced mod ``n``."""
    return complex(theta_values(basis, z)[alpha % basis.n])


def quasiperiodicity_residuals(basis, alpha, z):
    """Residuals of the translation laws under ``z -> z+1`` and ``z -> z+eta``.

    Each residual is ``|lhs - rhs| / max(1, |lhs|, |rhs|)``: the ``z+eta`` side
    grows like ``exp(pi n Im(z) ...)``, so an absolute measure is not meaningful
    in double precision.
    """
    n = basis.n
    a, b = basis.chars
    eta = basis.eta
    alpha %= n
    t0, t1, te = (theta_values(basis, w)[alpha] for w in (z, z + 1, z + eta))
    r1 = _rel(t1, np.exp(2j * np.pi * a) * t0)
    r2 = _rel(te, np.exp(-1j * np.pi * n * eta - 2j * np.pi * n * (z + b)) * t0)
    return r1, r2


def heisenberg_residuals(basis, alpha, z):
    """Residuals of the covariance laws under ``z -> z+1/n`` and ``z -> z+eta/n``.

    The second law maps ``theta_alpha`` to ``theta_{alpha+1}``.  Residuals are
    relative, as in :func:`quasiperiodicity_residuals`.
    """
    n = basis.n
    a, b = basis.chars
    eta = basis.eta
    alpha %= n
    t0 = theta_values(basis, z)
    t1 = theta_values(basis, z + 1 / n)[alpha]
    te = theta_values(basis, z + eta / n)[alpha]
    h1 = _rel(t1, np.exp(2j * np.pi * (alpha + a) / n) * t0[alpha])
    h2 = _rel(te, np.exp(-1j * np.pi * eta / n - 2j * np.pi * (z + b)) * t0[(alpha + 1) % n])
    return h1, h2


def parity_residual(basis, alpha, z):
    """Residual of ``theta_alpha(-z) = theta_{-alpha-2a}(z - 2b)``.

    Reflecting the summation variable turns the coset ``alpha + a + nZ`` into
    ``-alpha - a + nZ``, which is again of the form ``beta + a + nZ`` when ``2a``
    is an integer.
    """
    n = basis.n
    a, b = basis.chars
    if 2 * a != round(2 * a):
        raise InvalidParams(f"parity law needs 2a integral, got a={a}")
    beta = (-alpha - round(2 * a)) % n
    lhs = theta_values(basis, -z)[alpha % n]
    rhs = theta_values(basis, z - 2 * b)[beta]
    return _rel(lhs, rhs)


def _rel(lhs, rhs):
    return float(abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs)))


def _unit(x):
    x = float(x) % 1.0
    return 0.0 if x == 1.0 else x


@dataclass(frozen=True)
class TorusPoint:
    """The point ``u + v*eta`` of ``E``, coordinates kept in ``[0, 1)``."""

    u: float = 0.0
    v: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "u", _unit(self.u))
        object.__setattr__(self, "v", _unit(self.v))

    @classmethod
    def from_complex(cls, z, eta):
        z = complex(z)
        eta = complex(eta)
        v = z.imag / eta.imag
        return cls(z.real - v * eta.real, v)

    def __add__(self, other):
        return TorusPoint(self.u + other.u, self.v + other.v)

    def __sub__(self, other):
        return TorusPoint(self.u - other.u, self.v - other.v)

    def __neg__(self):
        return TorusPoint(-self.u, -self.v)

    def __mul__(self, c):
        return TorusPoint(c * self.u, c * self.v)

    __rmul__ = __mul__

    def distance(self, other):
        """Wraparound-aware sup distance in torus coordinates."""
        du = abs(self.u - other.u) % 1.0
        dv = abs(self.v - other.v) % 1.0
        return max(min(du, 1 - du), min(dv, 1 - dv))


def torus_to_complex(p, params):
    """Complex representative ``u + v*eta`` of a torus point."""
    eta = params.eta if isinstance(params, TorusParams) else complex(params)
    return p.u + p.v * eta
