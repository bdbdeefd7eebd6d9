"""Acceptance suite. Each test prints one ``[PASS]``/``[FAIL]`` line."""

import math
import time
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from sawbound import bounds
from sawbound.bounds import PhiModel, big_psi, hw_explicit_log_bound, phi_empirical
from sawbound.census import Census, enumerate_census, oracle_census
from sawbound.genfun import exp_bridge_coeffs, mu_bracket
from sawbound.verify import (FAILS, HOLDS, VerifyConfig, check_counting_laws, check_dch_form,
                             check_hw_explicit, check_lemma_xizc, check_madras_slade, run_all)

# bracket regression constants from the first oracle-verified d=2 run
MU_LOW_16 = 2.3889631758103027
MU_HIGH_16 = 2.833296156505468
MU_LOW_8 = 2.2387400564437177
MU_HIGH_8 = 2.9614439726366473


@pytest.fixture
def verdict(request, capsys):
    def emit(ok, detail=""):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {request.node.name}: {detail}")
        assert ok, detail
    return emit


def _all_hold(vs):
    return all(v.status == HOLDS for v in vs)


def test_criterion_01_oracle_equivalence(verdict):
    t0 = time.perf_counter()
    same2 = enumerate_census(2, 8) == oracle_census(2, 8)
    same3 = enumerate_census(3, 6) == oracle_census(3, 6)
    dt = time.perf_counter() - t0
    verdict(same2 and same3 and dt < 30, f"d=2 N=8 {same2}, d=3 N=6 {same3}, {dt:.1f}s (limit 30s)")


def test_criterion_02_counting_laws(verdict):
    t0 = time.perf_counter()
    census = enumerate_census(2, 16, workers=4)
    dt = time.perf_counter() - t0
    vs = check_counting_laws(census)
    verdict(_all_hold(vs) and dt < 60,
            f"{[v.status for v in vs]}, build {dt:.1f}s on 4 workers (limit 60s)")


def test_criterion_03_mu_bracket(verdict, census16):
    b8, b16 = mu_bracket(census16.truncated(8)), mu_bracket(census16)
    ok = (b8.mu_low <= b8.mu_high and b16.mu_low <= b16.mu_high and b8.contains(b16)
          and b16.mu_low > 2 and b16.mu_high < 3
          and (b16.mu_low, b16.mu_high) == (MU_LOW_16, MU_HIGH_16)
          and (b8.mu_low, b8.mu_high) == (MU_LOW_8, MU_HIGH_8))
    verdict(ok, f"N=8 [{b8.mu_low:.6f}, {b8.mu_high:.6f}] ⊇ N=16 [{b16.mu_low:.6f}, {b16.mu_high:.6f}]")


def test_criterion_04_a_at_critical(verdict, census16):
    v = check_lemma_xizc(census16, mu_bracket(census16))
    verdict(v.status == HOLDS and census16.N == 16, f"{v.status} for 1 <= n <= 16, exact")


def test_criterion_05_madras_slade(verdict, census16):
    vs = check_madras_slade(census16, mu_bracket(census16))
    coeff = [v for v in vs if v.subject == "madras_slade.coefficient"]
    evals = [v for v in vs if v.subject == "madras_slade.evaluation"]
    e = exp_bridge_coeffs(census16)
    anchor = census16.c[1] == 4 and e[2] == 8
    ok = _all_hold(vs) and len(coeff) == 16 and len(evals) == 7 and anchor
    verdict(ok, f"{len(coeff)} coefficients (n <= 15) and {len(evals)} grid points hold; c_1=4 <= e_2={e[2]}")


def test_criterion_06_explicit_hw(verdict, census16):
    vs = check_hw_explicit(census16, mu_bracket(census16))
    ns = [v.parameters["n"] for v in vs]
    verdict(_all_hold(vs) and ns == list(range(3, 17)), f"{len(vs)} lengths 3..16 hold")


def test_criterion_07_classical_constant(verdict):
    bounds._psi_cached.cache_clear()
    t0 = time.perf_counter()
    n = 10 ** 6
    ratio = big_psi(PhiModel.zero(), n)[0] / math.sqrt(n)
    hw = hw_explicit_log_bound(n) / math.sqrt(n)
    dt = time.perf_counter() - t0
    ok = 2.80 <= ratio <= 2.86 and abs(hw / math.sqrt(8) - 1) <= 0.01 and dt < 5
    verdict(ok, f"Psi/sqrt(n)={ratio:.5f} in [2.80, 2.86], hw/sqrt(n)={hw:.5f} "
                f"vs sqrt(8)={math.sqrt(8):.5f}, {dt:.2f}s (limit 5s)")


def _slope(phi):
    ns = np.array([10 ** k for k in range(3, 8)], dtype=float)
    vals = np.array([big_psi(phi, int(n))[0] for n in ns])
    return float(np.polyfit(np.log(ns), np.log(vals), 1)[0])


def test_criterion_08_corollary_scaling(verdict):
    bounds._psi_cached.cache_clear()
    t0 = time.perf_counter()
    s2 = _slope(PhiModel.power_law(1, 2))
    s3 = _slope(PhiModel.power_law(1, 3))
    dt = time.perf_counter() - t0
    ok = 0.30 <= s2 <= 0.37 and 0.36 <= s3 <= 0.44 and dt < 60
    verdict(ok, f"nu=2 slope {s2:.4f} in [0.30, 0.37], nu=3 slope {s3:.4f} in [0.36, 0.44], "
                f"{dt:.1f}s (limit 60s)")


def _reference_phi_at_one(census, n_min):
    # only the straight-up walk reaches m = n, so the ratio-1 rate is log(b_n / A(n, n)) / n
    with mpmath.workdps(60):
        return min(mpmath.log(mpmath.mpf(census.b[n]) / census.reach(n, n)) / n
                   for n in range(n_min, census.N + 1))


def test_criterion_09_empirical_certificate(verdict, census16):
    phi = phi_empirical(census16)
    cert = check_dch_form(census16, phi)
    vals = [p for _, p in phi.breakpoints]
    monotone = vals == sorted(vals)
    # certified rates for longer walks hold as well
    extra = all(check_dch_form(census16, phi_empirical(census16, k), n_min=k).status == HOLDS
                for k in (2, 4, 8))
    matches = True
    for N in range(1, 9):
        oracle = oracle_census(2, N)
        for n_min in range(1, N + 1):
            got = phi_empirical(census16.truncated(N), n_min)(1)
            ref = _reference_phi_at_one(oracle, n_min)
            if ref == 0:
                matches &= got == 0
            else:
                # values are rounded down by a relative 1e-12 so they certify under any padding
                matches &= ref * (1 - 2e-12) <= got <= ref
    verdict(cert.status == HOLDS and monotone and extra and matches,
            f"rate form {cert.status}, nondecreasing {monotone}, n_min=2/4/8 hold {extra}, "
            f"phi(1) agrees with oracle recount {matches}")


def _perturbed(census, field, n, h, delta):
    c, b = list(census.c), list(census.b)
    bh = [list(r) for r in census.bridge_by_height]
    if field == "c":
        c[n] += delta
    elif field == "b":
        b[n] += delta
    else:
        bh[n][h] += delta
    return Census(census.d, census.N, tuple(c), tuple(b), tuple(map(tuple, bh)))


def test_criterion_10_harness_integrity(verdict, census16, census12):
    intact = run_all(census16)
    cases = [(f, n, None) for f in ("c", "b") for n in range(4, 13)]
    cases += [("bh", n, h) for n in range(4, 13) for h in range(1, n + 1)]
    missed = []
    for field, n, h in cases:
        for delta in (1, -1):
            if run_all(_perturbed(census12, field, n, h, delta)).counts[FAILS] == 0:
                missed.append((field, n, h, delta))
    top = run_all(_perturbed(census16, "c", 16, None, 1)).counts[FAILS]
    ok = intact.counts[FAILS] == 0 and not missed and top > 0
    verdict(ok, f"intact fails={intact.counts[FAILS]}; {2 * len(cases)} single-count "
                f"perturbations at N=12, undetected={missed}; c_16+1 at N=16 fails={top}")


def test_criterion_11_precision_robustness(verdict, census16):
    flips = []
    checks = ("lemma_xizc", "madras_slade", "hw_explicit", "dch_form")
    for phi, n_min in ((phi_empirical(census16), 1), (phi_empirical(census16, 4), 4),
                       (PhiModel.power_law(1, 2), 1)):
        runs = {}
        for pad in (2, 4, 8):
            cfg = VerifyConfig(pad_ulps=pad, recount=False, phi_n_min=n_min)
            runs[pad] = [v for v in run_all(census16, phi, cfg).verdicts if v.check in checks]
        for pad in (4, 8):
            for a, b in zip(runs[pad // 2], runs[pad]):
                assert a.subject == b.subject
                if {a.status, b.status} == {HOLDS, FAILS}:
                    flips.append((a.subject, a.parameters, pad))
    verdict(not flips, f"padding 2 -> 4 -> 8 ulps, holds<->fails flips: {flips}")
