"""Quadratic relations of ``Q_{n,k}(E, tau)`` and the Belavin R-matrix.

Monomials ``x_a x_b`` (equivalently ``e_a (x) e_b``) are indexed by ``a*n + b``.
Row ``(i, j)`` of a relation matrix, at index ``i*n + j``, holds

    sum_r  theta_{j-i+r(k-1)}(0) / (theta_{j-i-r}(-tau) theta_{kr}(tau)) * x_{j-r} x_{i+r}.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.linalg import subspace_angles

from .arith import _check
from .errors import CalibrationFailed, DenominatorNearZero, InvalidParams, NotApplicable, RankAmbiguous
from .theta import ThetaBasis, TorusPoint, torus_to_complex, theta_values

MIN_GAP = 10.0


def _guarded(basis, z, where):
    """Theta vector at ``z``, refusing entries that are tiny relative to the vector."""
    vals = theta_values(basis, z)
    scale = np.max(np.abs(vals))
    for idx, v in enumerate(vals):
        if abs(v) < basis.params.denom_guard * scale:
            raise DenominatorNearZero(idx, abs(v), where)
    return vals


def _coefficient_matrix(n, k, num, den_left, den_right):
    """``M[out, in]`` for ``e_i (x) e_j -> sum_r c_r e_{j-r} (x) e_{i+r}``."""
    op = np.zeros((n * n, n * n), dtype=complex)
    for i in range(n):
        for j in range(n):
            for r in range(n):
                c = num[(j - i + r * (k - 1)) % n] / (den_left[(j - i - r) % n] * den_right[(k * r) % n])
                op[((j - r) % n) * n + (i + r) % n, i * n + j] = c
    return op


@dataclass(frozen=True)
class RelationSystem:
    n: int
    k: int
    tau: complex
    basis: ThetaBasis
    coeffs: np.ndarray = field(repr=False)
    singular_values: np.ndarray = field(repr=False)

    def to_json(self):
        a, b = self.basis.chars
        return {
            "n": self.n,
            "k": self.k,
            "eta": [self.basis.eta.real, self.basis.eta.imag],
            "tau": [self.tau.real, self.tau.imag],
            "chars": [a, b],
            "rows": [[[c.real, c.imag] for c in row] for row in self.coeffs],
            "singular_values": [float(s) for s in self.singular_values],
        }


def _check_basis(n, basis):
    if basis.n != n:
        raise InvalidParams(f"basis has order {basis.n}, expected {n}")


def build_relations(n, k, basis, tau):
    """The ``n**2 x n**2`` coefficient matrix of the defining relations.

    Raises
    ------
    DenominatorNearZero
        If ``tau`` is too close to a zero of some ``theta_alpha(+-tau)``,
        i.e. close to the excluded set ``(1/n) Lambda``.
    """
    _check(n, k)
    _check_basis(n, basis)
    tau = complex(tau)
    num = theta_values(basis, 0.0)
    dl = _guarded(basis, -tau, "-tau")
    dr = _guarded(basis, tau, "tau")
    coeffs = _coefficient_matrix(n, k, num, dl, dr).T.copy()
    coeffs.setflags(write=False)
    sv = np.linalg.svd(coeffs, compute_uv=False)
    return RelationSystem(n, k, tau, basis, coeffs, sv)


class RankReport(NamedTuple):
    rank: int
    gap: float


def relation_rank(sys, rel_tol=1e-8):
    """Numerical rank of the relation span with its spectral gap.

    The gap is ``sigma_rank / sigma_{rank+1}`` (infinite when nothing follows).
    A gap below 10 means the rank cannot be certified.
    """
    s = sys.singular_values
    if s[0] == 0:
        raise RankAmbiguous(0, 0.0)
    rank = int(np.sum(s > rel_tol * s[0]))
    if rank == len(s) or s[rank] == 0:
        gap = math.inf
    else:
        gap = float(s[rank - 1] / s[rank])
    if gap < MIN_GAP:
        raise RankAmbiguous(rank, gap)
    return RankReport(rank, gap)


def relation_span_basis(sys, rank=None):
    """Orthonormal rows spanning the relation space (top right-singular vectors)."""
    if rank is None:
        rank = relation_rank(sys).rank
    _, _, vh = np.linalg.svd(sys.coeffs)
    return vh[:rank]


def span_residual(sys, vectors, rank=None):
    """Largest least-squares residual of ``vectors`` against the relation span."""
    span = relation_span_basis(sys, rank)
    worst = 0.0
    for v in np.atleast_2d(np.asarray(vectors, dtype=complex)):
        proj = (v @ span.conj().T) @ span
        worst = max(worst, float(np.linalg.norm(v - proj) / np.linalg.norm(v)))
    return worst


@dataclass(frozen=True)
class RMatrix:
    n: int
    k: int
    z: complex
    basis: ThetaBasis
    op: np.ndarray = field(repr=False)


def build_rmatrix(n, k, basis, tau, z):
    """``R(z)`` on ``V (x) V``; ``op[out, in]`` with the monomial index order."""
    _check(n, k)
    _check_basis(n, basis)
    tau = complex(tau)
    z = complex(z)
    num = theta_values(basis, tau - z)
    dl = _guarded(basis, -z, "-z")
    dr = _guarded(basis, tau, "tau")
    op = _coefficient_matrix(n, k, num, dl, dr)
    op.setflags(write=False)
    return RMatrix(n, k, z, basis, op)


def r_image_angle(sys, rmat):
    """Largest principal angle between the relation span and the image of ``R(tau)``."""
    rank = relation_rank(sys).rank
    a = relation_span_basis(sys, rank).T
    # coeffs == op.T, so the relation rows are the columns of op
    u, _, _ = np.linalg.svd(rmat.op)
    b = u[:, :rank]
    return float(np.max(subspace_angles(a, b)))


def ybe_residual(n, basis, tau, u, v, k=1):
    """Relative Frobenius residual of ``R(u)_12 R(u+v)_23 R(v)_12 = R(v)_23 R(u+v)_12 R(u)_23``."""
    ru, rv, ruv = (build_rmatrix(n, k, basis, tau, w).op for w in (u, v, u + v))
    eye = np.eye(n)
    lhs = np.kron(ru, eye) @ np.kron(eye, ruv) @ np.kron(rv, eye)
    rhs = np.kron(eye, rv) @ np.kron(ruv, eye) @ np.kron(eye, ru)
    return float(np.linalg.norm(lhs - rhs) / np.linalg.norm(lhs))


def sample_points(basis, samples, seed):
    """``samples`` uniform points ``u + v*eta`` of the fundamental domain."""
    rng = np.random.default_rng(seed)
    uv = rng.random((samples, 2))
    return uv[:, 0] + uv[:, 1] * basis.eta


def _live_rows(coeffs, rel=1e-10):
    """Rows that are not identically zero up to rounding (e.g. ``(i, i)`` for ``k = 1``)."""
    norms = np.max(np.abs(coeffs), axis=1)
    return coeffs[norms > rel * np.max(norms)]


def cancellation_ratio(coeffs, mono):
    """``max |sum_m c_m v_m| / sum_m |c_m v_m|`` over rows of ``coeffs`` and rows of ``mono``.

    Each relation value is measured against the size of its own terms, so the
    ratio sits near machine epsilon exactly when the terms cancel, and near 1
    when they do not.  Theta values of very different magnitude at different
    sample points do not distort it.
    """
    c = _live_rows(coeffs)
    mono = np.atleast_2d(mono)
    vals = np.abs(mono @ c.T)
    mass = np.abs(mono) @ np.abs(c.T)
    if np.any(mass == 0):
        raise DenominatorNearZero(-1, 0.0, "relation terms")
    return float(np.max(vals / mass))


def graph_vanishing_residual(n, basis, tau, samples=50, seed=0, shift=None):
    """How far the relations are from vanishing on ``{(z, z + shift)}``.

    ``shift`` defaults to ``(2 - n) tau``, the translation automorphism for ``k = 1``.
    The result is the :func:`cancellation_ratio` of every relation at every sample.
    """
    if n < 2:
        return 0.0
    sys = build_relations(n, 1, basis, tau)
    if shift is None:
        shift = (2 - n) * complex(tau)
    zs = sample_points(basis, samples, seed)
    t0 = theta_values(basis, zs)
    t1 = theta_values(basis, zs + shift)
    # value of every monomial x_a x_b at (z, z+shift): t0[a] * t1[b]
    mono = (t0[:, :, None] * t1[:, None, :]).reshape(samples, n * n)
    return cancellation_ratio(sys.coeffs, mono)


def relation_rows_on_graph(sys, p, q):
    """Relation values at the pair of points ``(p, q)`` given by their theta vectors."""
    return sys.coeffs @ np.kron(p, q)


def candidate_characteristics(n):
    """Grid searched by calibration: ``a`` in ``(1/2)Z``, ``b`` in ``(1/2n)Z``, one period each."""
    return [(p / 2, q / (2 * n)) for p in range(2 * n) for q in range(2 * n)]


class Calibration(NamedTuple):
    chars: tuple
    residual: float
    table: dict


def calibrate_characteristics(n, params, tau, samples=8, seed=0, accept=1e-10):
    """Search the characteristic grid for one making the graph residual vanish.

    Among candidates with residual below ``accept`` the lexicographically
    smallest ``(a, b)`` is returned, so the answer does not depend on rounding
    noise; otherwise the minimizer is returned if it is below ``1e-6``.

    Raises
    ------
    CalibrationFailed
        When no candidate reaches ``1e-6``.
    """
    if n < 2:
        return Calibration((0.0, 0.0), 0.0, {})
    table = {}
    for chars in candidate_characteristics(n):
        basis = ThetaBasis(n, chars, params)
        try:
            table[chars] = graph_vanishing_residual(n, basis, tau, samples, seed)
        except DenominatorNearZero:
            table[chars] = math.inf
    good = sorted(c for c, r in table.items() if r < accept)
    if good:
        return Calibration(good[0], table[good[0]], table)
    best = min(table, key=table.get)
    if table[best] < 1e-6:
        return Calibration(best, table[best], table)
    raise CalibrationFailed(best, table[best])


def point_module_orbit(n, basis, tau, p, N, k=1):
    """Points ``sigma^{-j} p`` for ``j = 0..N`` with their evaluation vectors.

    For ``k = 1`` the automorphism is ``z -> z + (2-n) tau``.  Evaluation uses the
    representative of each point in the fundamental domain, so vectors are
    defined up to the usual quasi-periodic scalar.
    """
    if k != 1:
        raise NotApplicable("point-module evaluation is only modelled for k = 1")
    eta = basis.eta
    step = TorusPoint.from_complex((2 - n) * complex(tau), eta)
    out = []
    cur = p
    for _ in range(N + 1):
        out.append((cur, theta_values(basis, torus_to_complex(cur, eta))))
        cur = cur - step
    return out


def annihilator(vec):
    """Orthonormal basis of the degree-one forms ``b`` with ``sum_a b_a vec_a = 0``."""
    vec = np.asarray(vec, dtype=complex)
    # the top right-singular vector is parallel to vec itself, the rest are
    # orthogonal to it in the hermitian sense, so conjugating them kills vec
    _, _, vh = np.linalg.svd(vec[None, :])
    return vh[1:].conj()
