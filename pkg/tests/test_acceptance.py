"""Acceptance criteria, each run at its stated tolerance.

Every test records one PASS/FAIL line, printed immediately (visible with
``-s``) and again in the terminal summary.
"""
import math
import time

import numpy as np
import pytest

from rmx.qproducts import kappa
from rmx.suite import convergence_table, run_suite
from rmx.trig import DegenerateParams, r_dy, r_q, reference_n2, sine_product
from rmx.twist import TwistData, check_m_identities, twist_f, twisted_conjugate
from rmx.znmatrix import build_g, permutation_op, sbar_explicit, sbar_sum

from conftest import ACCEPTANCE_LINES, max_abs


def record(number, title, passed, detail):
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {title} ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert passed, line


def suite_summary(name, n, seed):
    reports = run_suite(name, n, seed=seed)
    return len(reports), max(r.residual for r in reports), all(r.passed for r in reports)


def test_criterion_01_formula_equivalence():
    rng = np.random.default_rng(101)
    t0 = time.perf_counter()
    worst = 0.0
    for n, draws in ((2, 50), (3, 20)):
        for _ in range(draws):
            z = complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.2, 0.2))
            w = complex(rng.uniform(-0.3, 0.3), rng.uniform(0.2, 0.6))
            tau = complex(rng.uniform(-0.5, 0.5), rng.uniform(1.0, 3.0))
            worst = max(worst, max_abs(sbar_sum(z, w, tau, n) - sbar_explicit(z, w, tau, n)))
    elapsed = time.perf_counter() - t0
    record(1, "sum and explicit forms agree", worst < 1e-10 and elapsed < 10,
           f"max residual {worst:.2e} < 1e-10, {elapsed:.2f}s < 10s")


def test_criterion_02_yang_baxter():
    t0 = time.perf_counter()
    ok, worst, count = True, 0.0, 0
    for n in (2, 3):
        c, res, passed = suite_summary("ybe", n, seed=2)
        ok, worst, count = ok and passed, max(worst, res), count + c
    elapsed = time.perf_counter() - t0
    record(2, "Yang-Baxter for sbar, s_full, r_dy, r_q", ok and count == 25 and worst < 1e-9 and elapsed < 30,
           f"{count} draws, max residual {worst:.2e} < 1e-9, {elapsed:.2f}s < 30s")


def test_criterion_03_unitarity_and_crossing():
    cu, ru, pu = suite_summary("unitarity", 2, seed=3)
    cc, rc, pc = suite_summary("crossing", 2, seed=3)
    record(3, "unitarity and crossing-unitarity of s_full",
           pu and pc and cu == cc == 10 and ru < 1e-8 and rc < 1e-7,
           f"unitarity {ru:.2e} < 1e-8, crossing {rc:.2e} < 1e-7, 10 draws each")


def test_criterion_04_goldens():
    worst = 0.0
    for beta in np.linspace(-0.8, 0.8, 20):
        p = DegenerateParams(2, float(beta), 1.5, 1.0)
        worst = max(worst, max_abs(r_dy(p) - reference_n2("eight_vertex", p)),
                    max_abs(r_q(p) - reference_n2("six_vertex", p)))
    record(4, "n=2 golden matrices", worst < 1e-12, f"max entry error {worst:.2e} < 1e-12 over 20 betas")


# measured final bare distance, frozen as a regression bound
SCALING_BARE_FINAL = 0.038675364737957


def test_criterion_05_scaling_limit():
    p = DegenerateParams(2, 0.3, 1.5, 1.0, include_kappa=True)
    target = r_dy(p) / kappa(0.3, 1.5, 1.0, 2)
    errors = []
    for k in range(4):
        w = 0.5j * 2.0 ** -k
        errors.append(max_abs(sbar_sum(1j * p.beta * w / p.hbar, w, p.xi * w, 2) - target))
    decreasing = all(b < a for a, b in zip(errors, errors[1:]))
    assert errors[-1] <= SCALING_BARE_FINAL * (1 + 1e-9)
    record(5, "scaling-limit convergence", decreasing and errors[-1] < 1e-4,
           "distances " + ", ".join(f"{e:.3e}" for e in errors) + "; final must be < 1e-4")


def test_criterion_05_companion_scalar_free():
    # the bare distance above shrinks only linearly; dividing out the scalar
    # phase of the modular relation leaves exponential convergence
    rows = convergence_table("scaling", DegenerateParams(2, 0.3, 1.5, 1.0, False), 4)
    errs = [r["scalar_free_error"] for r in rows]
    ok = all(b < a for a, b in zip(errs, errs[1:])) and errs[-1] < 1e-8
    record("5b", "scaling limit after removing the scalar phase", ok,
           "distances " + ", ".join(f"{e:.1e}" for e in errs))


def test_criterion_06_ordinary_limit():
    rows = convergence_table("ordinary", DegenerateParams(2, 0.3, 1.5, 1.0, False), 3)
    errs = [r["error"] for r in rows]
    record(6, "ordinary-limit convergence", all(b < a for a, b in zip(errs, errs[1:])) and errs[-1] < 1e-6,
           "distances " + ", ".join(f"{e:.1e}" for e in errs) + "; final < 1e-6")


def test_criterion_07_mt2():
    res = [suite_summary("mt2", n, seed=7) for n in (2, 3)]
    worst = max(r[1] for r in res)
    record(7, "modular relation MT2", all(r[2] and r[0] == 30 for r in res) and worst < 1e-9,
           f"60 draws, max residual {worst:.2e} < 1e-9")


def test_criterion_08_twist():
    t0 = time.perf_counter()
    res = [suite_summary("twist", n, seed=8) for n in (2, 3, 4, 5)]
    elapsed = time.perf_counter() - t0
    worst = max(r[1] for r in res)
    ok = all(r[2] and r[0] == 30 for r in res) and worst < 1e-10 and elapsed < 20
    record(8, "twist relates the two trigonometric limits", ok,
           f"120 draws, max residual {worst:.2e} < 1e-10, {elapsed:.2f}s < 20s")


def test_criterion_09_m_identities():
    worst = max(check_m_identities(n) for n in range(2, 7))
    record(9, "M matrix identities", worst < 1e-13, f"max residual {worst:.2e} < 1e-13 for n=2..6")


def test_criterion_10_scalar_checks():
    rng = np.random.default_rng(110)
    exact = kappa(0.0, 1.7, 0.9, 3) == 1 and all(kappa(b, 1.0, 1.3, 2) == 1 for b in (-0.7, 0.2, 0.65))
    kk = 0.0
    for _ in range(20):
        beta, xi, hbar, n = rng.uniform(-0.8, 0.8), rng.uniform(1.2, 3), rng.uniform(0.5, 2), int(rng.integers(2, 6))
        kk = max(kk, abs(kappa(beta, xi, hbar, n) * kappa(-beta, xi, hbar, n) - 1))
    sp = 0.0
    count = 0
    while count < 100:
        n, x = int(rng.integers(2, 9)), rng.uniform(0.05, 3.1)
        if abs(math.sin(x)) < 1e-2:
            continue
        sp = max(sp, abs(sine_product(x, n) - math.sin(n * x) / (n * math.sin(x))))
        count += 1
    record(10, "kappa and sine-product identities", exact and kk < 1e-9 and sp < 1e-12,
           f"exact values {exact}, kappa product {kk:.2e} < 1e-9, sine identity {sp:.2e} < 1e-12")


def test_criterion_11_n2_symmetry():
    rng = np.random.default_rng(111)
    P = permutation_op(2)
    Z = np.kron(build_g(2), build_g(2))
    V = np.array([[1, 1], [-1, 1]]) / np.sqrt(2)
    F = np.kron(V, V) @ P
    v_twist = TwistData(2, V, F, P @ F @ P)
    sym = equiv = 0.0
    for _ in range(10):
        R = r_q(DegenerateParams(2, rng.uniform(-0.8, 0.8), rng.uniform(1.2, 3), rng.uniform(0.5, 2)))
        sym = max(sym, max_abs(P @ R @ P - R), max_abs(Z @ R @ Z - R))
        equiv = max(equiv, max_abs(twisted_conjugate(R, v_twist) - twisted_conjugate(R, twist_f(2))))
    record(11, "n=2 symmetries and equivalent twist", sym < 1e-12 and equiv < 1e-12,
           f"symmetry {sym:.2e} < 1e-12, twist equivalence {equiv:.2e}")
