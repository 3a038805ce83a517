"""Acceptance criteria; each test records a PASS/FAIL line in the terminal summary."""
import time
from fractions import Fraction
from math import comb, gcd

import numpy as np

from conftest import generic_taus
from elliptica.arith import (
    apply_s,
    apply_sigma,
    classify_variety,
    fibonacci,
    fold,
    fraction_data,
    multiset_equal,
    negcf,
    rho_map,
    sigma_group_generators,
    tridiag_det,
)
from elliptica.relations import (
    build_relations,
    calibrate_characteristics,
    graph_vanishing_residual,
    relation_rank,
    ybe_residual,
)
from elliptica.rings import hilbert_B, kernel_profile
from elliptica.slopes import (
    SheafClass,
    evaluation_kernel_class,
    exact_sequence_bounds,
    ker_alpha_slope,
    ker_beta_slope,
    pushforward_class,
    tensor,
)
from elliptica.theta import (
    ThetaBasis,
    TorusParams,
    TorusPoint,
    heisenberg_residuals,
    parity_residual,
    quasiperiodicity_residuals,
    theta_values,
)

PAIRS = [(3, 1), (4, 1), (5, 1), (5, 2), (7, 3), (8, 3), (4, 3), (5, 4)]
TAU = 0.1234 + 0.0567j


def calibrated_basis(n):
    cal = calibrate_characteristics(n, TorusParams(), TAU)
    return ThetaBasis(n, cal.chars)


def test_ac1_relation_span_dimension(record_criterion):
    start = time.perf_counter()
    worst_gap = np.inf
    failures = []
    for n, k in PAIRS:
        basis = ThetaBasis(n)
        for tau in generic_taus(n, 20, seed=100 + n * 10 + k):
            rep = relation_rank(build_relations(n, k, basis, tau))
            worst_gap = min(worst_gap, rep.gap)
            if rep.rank != comb(n, 2) or rep.gap <= 1e3:
                failures.append((n, k, tau, rep))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 10
    record_criterion("AC1 relation-span dimension", ok, f"min gap {worst_gap:.2e}, {elapsed:.2f}s")
    assert not failures, failures[:3]
    assert elapsed < 10


def test_ac2_degree_two_hilbert(record_criterion):
    ok = True
    for n, k in PAIRS:
        rank = relation_rank(build_relations(n, k, ThetaBasis(n), TAU)).rank
        ok &= n * n - rank == comb(n + 1, 2)
        if (n, k) == (5, 2):
            ok &= n * n - rank == hilbert_B(5, 2, 2) == 15
    record_criterion("AC2 degree-two Hilbert consistency", ok)
    assert ok


def test_ac3_kernel_cubics(record_criterion):
    ok = kernel_profile(5, 2, 3) == [0, 0, 5]
    for k in range(1, 7):
        ok &= kernel_profile(2 * k + 1, k, 3)[2] == k * (k + 1) * (2 * k + 1) // 6
    record_criterion("AC3 kernel cubics", ok)
    assert ok


def test_ac4_yang_baxter(record_criterion):
    bases = {n: calibrated_basis(n) for n in range(2, 7)}
    start = time.perf_counter()
    worst = 0.0
    for n, basis in bases.items():
        rng = np.random.default_rng(400 + n)
        for _ in range(10):
            u, v = (complex(*(0.4 * rng.random(2))) for _ in range(2))
            worst = max(worst, ybe_residual(n, basis, TAU, u, v))
    elapsed = time.perf_counter() - start
    ok = worst < 1e-9 and elapsed < 5
    record_criterion("AC4 Yang-Baxter", ok, f"max residual {worst:.2e}, {elapsed:.2f}s")
    assert worst < 1e-9
    assert elapsed < 5


def test_ac5_graph_vanishing(record_criterion):
    worst = 0.0
    controls = {}
    for n in (3, 4, 5, 6):
        basis = calibrated_basis(n)
        worst = max(worst, graph_vanishing_residual(n, basis, TAU, samples=50, seed=0))
        controls[n] = graph_vanishing_residual(n, basis, TAU, samples=50, seed=0, shift=(3 - n) * TAU)
    ok = worst < 1e-8 and min(controls.values()) > 1e-2
    shown = ", ".join(f"n={n}: {c:.2f}" for n, c in controls.items())
    record_criterion("AC5 graph vanishing", ok, f"max residual {worst:.2e}; controls {shown}")
    assert worst < 1e-8
    assert min(controls.values()) > 1e-2


def test_ac6_continued_fractions(record_criterion):
    start = time.perf_counter()
    ok = True
    for n in range(2, 51):
        for k in range(1, n):
            if gcd(n, k) != 1:
                continue
            fd = fraction_data(n, k)
            cf = list(fd.cf)
            ok &= fold(cf) == Fraction(n, k) and tridiag_det(cf) == n
            ok &= fd.kseq[1] == k and fd.lseq[fd.g] == fd.kprime
            ok &= (k * fd.kprime) % n == 1 % n and tridiag_det(cf[:-1]) == fd.kprime
        ok &= negcf(n * n, n - 1) == [n + 2] + [2] * (n - 2)
    for g in range(1, 6):
        ok &= negcf(fibonacci(2 * g + 1), fibonacci(2 * g - 1)) == [3] * g
    elapsed = time.perf_counter() - start
    ok &= elapsed < 1
    record_criterion("AC6 continued fractions", ok, f"{elapsed:.2f}s")
    assert ok


def test_ac7_quotient_compatibility(record_criterion):
    rng = np.random.default_rng(7)
    tau = TorusPoint.from_complex(TAU, 1j)
    ok = True
    for n, k in [(7, 3), (5, 2)]:
        kind = classify_variety(n, k)
        fd = fraction_data(n, k)
        shift = (kind.m - 2) * tau
        for _ in range(100):
            z = tuple(TorusPoint(*rng.random(2)) for _ in range(fd.g))
            base = rho_map(kind, z)
            for i in sigma_group_generators(n, k):
                ok &= multiset_equal(rho_map(kind, apply_s(i, z)), base, tol=1e-12)
            moved = rho_map(kind, apply_sigma(fd, tau, z))
            ok &= multiset_equal(moved, tuple(p + shift for p in base), tol=1e-12)
    record_criterion("AC7 quotient compatibility", ok)
    assert ok


def test_ac8_slopes(record_criterion):
    start = time.perf_counter()
    ok = True
    for n in range(3, 51):
        for k in range(1, n):
            if gcd(n, k) != 1 or classify_variety(n, k).kind != "power":
                continue
            fd = fraction_data(n, k)
            c = pushforward_class(n, k)
            ok &= c.slope == Fraction(n, fd.kprime) > 2
            ok &= c.slope == fold(list(reversed(fd.cf)))
    rng = np.random.default_rng(8)
    for _ in range(1000):
        r1, r2 = (int(x) for x in rng.integers(1, 30, 2))
        d1, d2 = (int(x) for x in rng.integers(-100, 100, 2))
        cA, cB = SheafClass(r1, d1), SheafClass(r2, d2)
        cV, lo, hi = exact_sequence_bounds(cA, cB)
        ok &= lo <= cV.slope <= hi
        ok &= tensor(cA, cB).slope == cA.slope + cB.slope
        if d1 > r1:
            mu = cA.slope
            ok &= evaluation_kernel_class(cA).slope == -mu / (mu - 1)
    for g in range(2, 7):
        mu = Fraction(1, g)
        for p in range(2, 7):
            for q in range(4, 11):
                for s in range(1, 5):
                    for t in range(2, 9):
                        ok &= ker_beta_slope(mu, p, q, s, t) >= ker_alpha_slope(mu, p, q, s, t)
    elapsed = time.perf_counter() - start
    ok &= elapsed < 1
    record_criterion("AC8 slope suite", ok, f"{elapsed:.2f}s")
    assert ok


def test_ac9_theta_self_consistency(record_criterion):
    worst = 0.0
    for n in range(1, 9):
        basis = ThetaBasis(n)
        plain = ThetaBasis(n, (0.0, 0.0))
        rng = np.random.default_rng(900 + n)
        pts = rng.random(100) + rng.random(100) * basis.eta
        for z in pts:
            for alpha in range(n):
                worst = max(worst, *quasiperiodicity_residuals(basis, alpha, z))
                worst = max(worst, *heisenberg_residuals(basis, alpha, z))
                worst = max(worst, parity_residual(basis, alpha, z))
                # with zero characteristic the law reads theta_alpha(-z) = theta_{-alpha}(z)
                lhs = theta_values(plain, -z)[alpha]
                rhs = theta_values(plain, z)[-alpha % n]
                worst = max(worst, float(abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs))))
            m = basis.halfwidth(abs(z.imag))
            a, b = theta_values(basis, z, m), theta_values(basis, z, 2 * m)
            worst = max(worst, float(np.max(np.abs(a - b)) / max(1.0, np.max(np.abs(b)))))
    ok = worst < 1e-10
    record_criterion("AC9 theta self-consistency", ok, f"max relative residual {worst:.2e}")
    assert ok
