"""Acceptance checks for the package, one test per criterion.

Each test prints a single PASS/FAIL line (visible with pytest -s; pytest -v
shows the same verdict per test name) and carries its tolerance inline.
Everything is seeded, so reruns are deterministic.
"""

import itertools
import warnings
from types import SimpleNamespace

import numpy as np
from numpy.polynomial import polynomial as npoly

from ctgrad import (
    AlgorithmSpec,
    ExperimentConfig,
    IntervalPolynomial,
    Polynomial,
    QuadraticObjective,
    SimConfig,
    TerminationReason,
    char_poly,
    circle_criterion,
    estimate_rate,
    fast_kth,
    find_roots,
    from_roots,
    gradient_flow,
    heavy_ball,
    is_hurwitz,
    kharitonov_polys,
    nyquist_stable,
    rk4_stability_check,
    run_sweep,
    simulate,
    worst_rate,
)
from ctgrad.cli import main as cli_main
from ctgrad.errors import MarginalStabilityError
from ctgrad.integrator import _run_batch


def _finish(label, failures, note=""):
    status = "FAIL" if failures else "PASS"
    tail = f" [{note}]" if note else ""
    print(f"{label}: {status}{tail}")
    assert not failures, f"{label}: " + "; ".join(failures[:10])


def test_criterion_1_sweep_rate_scaling():
    # default sweep: kappa in {4,16,64,256}, 10 functions x 10 starts each,
    # dt 0.01, tol 1e-8, start std 4.5, fit window t > 10
    cfg = ExperimentConfig()
    _, summaries = run_sweep(cfg)
    failures = []
    hb = {s.kappa: s for s in summaries if s.algorithm == "heavy_ball"}
    f3 = {s.kappa: s for s in summaries if s.algorithm == "fast_kth:3"}
    for kappa in cfg.kappas:
        ref = kappa ** -0.5
        rel = abs(hb[kappa].mean_rho - ref) / ref
        if rel > 0.15:
            failures.append(f"heavy_ball kappa={kappa}: mean rho off by {rel:.3f}")
        if f3[kappa].mean_rho < 0.8 * kappa ** (-1.0 / 3.0):
            failures.append(
                f"fast_kth:3 kappa={kappa}: mean rho below 0.8*kappa^(-1/3)")
    ks = np.array(sorted(f3))
    slope = npoly.polyfit(np.log(ks), np.log([f3[k].mean_rho for k in ks]), 1)[1]
    if not -0.40 <= slope <= -0.26:
        failures.append(f"fast_kth:3 log-log slope {slope:.4f} outside [-0.40, -0.26]")
    _finish("criterion 1 (sweep rates scale with condition number)", failures,
            f"slope {slope:.4f}")


def test_criterion_2_quadratic_spectral_oracle():
    # 200 random (algorithm, curvature) pairs on quadratics: the fitted
    # decay exponent matches -max Re of the characteristic roots within 2%.
    # The start is the dominant mode split over two spatial coordinates
    # (real and imaginary parts), so |z(t)| decays at exactly that exponent.
    rng = np.random.default_rng(202)
    makers = [lambda kap: gradient_flow(), heavy_ball,
              lambda kap: fast_kth(2, kap), lambda kap: fast_kth(3, kap)]
    draws = []
    for make in makers:
        for _ in range(50):
            kappa = float(np.exp(rng.uniform(np.log(1.5), np.log(64.0))))
            spec = make(kappa)
            lam = float(rng.uniform(1.0 / kappa, 1.0))
            roots = find_roots(char_poly(spec, lam)).roots
            s = max(roots, key=lambda z: z.real)
            rho = -s.real
            assert rho > 0.0
            w = s ** np.arange(spec.k)
            z0 = np.empty(2 * spec.k)
            z0[0::2] = w.real
            z0[1::2] = w.imag
            draws.append((spec, lam, rho, z0 / np.linalg.norm(z0)))

    failures = []
    worst = 0.0
    for k in sorted({d[0].k for d in draws}):
        grp = [d for d in draws if d[0].k == k]
        G = np.array([d[0].g for d in grp])
        H = np.array([d[0].h for d in grp])
        LAM = np.array([d[1] for d in grp])
        Z0 = np.array([d[3] for d in grp])
        res = _run_batch(grp[0][0], G, H,
                         lambda P, idx, LAM=LAM: LAM[idx][:, None] * P,
                         Z0, 2, SimConfig())
        for (spec, lam, rho, _), r in zip(grp, res):
            if r["reason"] is not TerminationReason.TOLERANCE:
                failures.append(f"{spec.label} lam={lam:.4f}: {r['reason'].value}")
                continue
            est = estimate_rate(SimpleNamespace(times=r["times"], norms=r["norms"]))
            rel = abs(est.rho_sim - rho) / rho
            worst = max(worst, rel)
            if rel > 0.02:
                failures.append(f"{spec.label} lam={lam:.4f}: rate err {rel:.3e}")
    _finish("criterion 2 (fitted rate matches dominant root within 2%)",
            failures, f"worst rel err {worst:.2e} over 200 draws")


def test_criterion_3_root_product_law():
    # 1000 random stable coefficient sets, k <= 5: the product of root
    # magnitudes equals the curvature, and equals 1 at curvature 1
    rng = np.random.default_rng(303)
    failures = []
    worst = 0.0
    accepted = 0
    attempts = 0
    while accepted < 1000:
        attempts += 1
        assert attempts < 300000, "stable-sample rejection rate too high"
        k = int(rng.integers(1, 6))
        spec = AlgorithmSpec(k, tuple(rng.uniform(-5, 5, k - 1)),
                             tuple(rng.uniform(-5, 5, k - 1)))
        lam = 1.0 - float(rng.random())  # in (0, 1]
        p = char_poly(spec, lam)
        if find_roots(p).max_real >= 0.0:
            continue
        accepted += 1
        prod = float(np.prod(np.abs(find_roots(p).roots)))
        rel = abs(prod - lam) / lam
        worst = max(worst, rel)
        if rel > 1e-8:
            failures.append(f"{spec.label} k={k} lam={lam:.6f}: product err {rel:.2e}")
        prod1 = float(np.prod(np.abs(find_roots(char_poly(spec, 1.0)).roots)))
        if abs(prod1 - 1.0) > 1e-8:
            failures.append(f"k={k}: product at curvature 1 is {prod1!r}")
    _finish("criterion 3 (root magnitudes multiply to the curvature)",
            failures, f"worst rel err {worst:.2e} over 1000 specs")


def test_criterion_4_fast_family_factorization():
    # the fast family's roots are -kappa^(-1/k) (k-1 times) plus one root
    # shifted further left by (lam - 1/kappa) * kappa^((k-1)/k); the worst
    # rate over the curvature range is kappa^(-1/k)
    failures = []
    for k in (2, 3, 4):
        for kappa in (2.0, 8.0, 64.0):
            spec = fast_kth(k, kappa)
            a = kappa ** (-1.0 / k)
            rate = worst_rate(spec, kappa)
            if abs(rate - a) / a > 1e-6:
                failures.append(f"k={k} kappa={kappa}: worst rate {rate!r}")
            for lam in (1.0 / kappa, 0.5, 1.0):
                got = sorted(find_roots(char_poly(spec, lam)).roots,
                             key=lambda z: z.real)
                want = sorted([-a] * (k - 1)
                              + [-a - (lam - 1.0 / kappa) * kappa ** ((k - 1.0) / k)])
                err = max(abs(gz - wz) for gz, wz in zip(got, want))
                if err > 1e-6 * kappa:
                    failures.append(
                        f"k={k} kappa={kappa} lam={lam}: root err {err:.2e}")
    _finish("criterion 4 (fast family root placement and worst rate)", failures)


def test_criterion_5_nyquist_root_equivalence():
    # 1000 random instances with a stable open loop: the winding-number
    # certificate agrees with the closed-loop root check every time; the
    # shifted contour at 0.999 * kappa^(-1/k) certifies the fast family
    rng = np.random.default_rng(505)
    failures = []
    checked = 0
    n_unstable = 0
    skipped = 0
    attempts = 0
    while checked < 1000:
        attempts += 1
        assert attempts < 100000, "instance rejection rate too high"
        k = int(rng.integers(2, 4))
        poles = []
        while len(poles) < k:
            if k - len(poles) >= 2 and rng.random() < 0.5:
                re = -float(rng.uniform(0.05, 2.0))
                im = float(rng.uniform(0.05, 2.0))
                poles += [complex(re, im), complex(re, -im)]
            else:
                poles.append(complex(-float(rng.uniform(0.05, 2.0)), 0.0))
        den = from_roots(poles)
        const = float(den.coeffs[0])
        if not 0.0 < const <= 1.0:
            continue
        kappa = 1.0 / const
        h = rng.uniform(-2.0, 2.0, k - 1)
        g = np.asarray(den.coeffs[1:k]) - h / kappa
        spec = AlgorithmSpec(k, tuple(float(v) for v in g),
                             tuple(float(v) for v in h))
        lam = float(rng.uniform(1.0 / kappa, 1.0))
        if find_roots(char_poly(spec, 1.0 / kappa)).max_real > -1e-3:
            continue
        closed = find_roots(char_poly(spec, lam)).max_real
        if abs(closed) < 1e-6:
            continue
        try:
            got = nyquist_stable(spec, kappa, lam)
        except MarginalStabilityError:
            skipped += 1
            assert skipped < 20, "too many marginal instances skipped"
            continue
        checked += 1
        n_unstable += closed >= 0.0
        if got is not (closed < 0.0):
            failures.append(
                f"k={k} kappa={kappa:.4f} lam={lam:.4f}: winding says {got}")
    if n_unstable < 5:
        failures.append(f"only {n_unstable} unstable instances drawn")

    for k in (2, 3):
        for kappa in (2.0, 4.0, 16.0, 256.0):
            spec = fast_kth(k, kappa)
            shift = 0.999 * kappa ** (-1.0 / k)
            for lam in np.linspace(1.0 / kappa, 1.0, 5):
                if not nyquist_stable(spec, kappa, float(lam), shift=shift):
                    failures.append(
                        f"shifted contour fails: k={k} kappa={kappa} lam={lam:.4f}")
    _finish("criterion 5 (winding certificate matches root locations)",
            failures, f"{n_unstable} unstable among 1000, {skipped} skipped")


def test_criterion_6_circle_criterion_cases():
    # kappa = 4: sector floors 0.55 / 0.25 / 0.01 land above / on / below
    # the central curvature 1/kappa, and all three certify stability
    failures = []
    spec = fast_kth(3, 4.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        for alpha_s, want_case in ((0.55, "above"), (0.25, "equal"), (0.01, "below")):
            ok, case = circle_criterion(spec, 4.0, alpha_s)
            if (ok, case) != (True, want_case):
                failures.append(f"alpha_s={alpha_s}: got ok={ok}, case={case}")
    _finish("criterion 6 (disk test certifies all three sector cases)", failures)


def test_criterion_7_interval_family_vertex_check():
    # 100 random interval coefficient families of degree <= 6: the
    # four-vertex Hurwitz check agrees with a 1000-point scan of the box
    # (all corners plus random interior points, judged by companion-matrix
    # eigenvalues, independent of the package's root finder)
    rng = np.random.default_rng(707)
    failures = []
    n_stable = 0
    for fam in range(100):
        d = int(rng.integers(1, 7))
        mid = rng.uniform(0.1, 4.0, d + 1)
        half = rng.uniform(0.0, 0.4, d + 1) * mid
        lo, up = mid - half, mid + half
        ip = IntervalPolynomial(tuple(lo), tuple(up))
        vertex_verdict = all(is_hurwitz(p) for p in kharitonov_polys(ip))

        corners = np.array(list(itertools.product(*zip(lo, up))))
        extra = rng.uniform(lo, up, (1000 - len(corners), d + 1))
        samples = np.vstack([corners, extra])
        monic = samples / samples[:, -1:]
        C = np.zeros((len(samples), d, d))
        C[:, np.arange(d - 1), np.arange(d - 1) + 1] = 1.0
        C[:, -1, :] = -monic[:, :d]
        scan_verdict = bool(np.linalg.eigvals(C).real.max() < 0.0)

        n_stable += scan_verdict
        if vertex_verdict != scan_verdict:
            failures.append(
                f"family {fam} (degree {d}): vertices say {vertex_verdict}, "
                f"scan says {scan_verdict}")
    if not 10 <= n_stable <= 90:
        failures.append(f"degenerate draw: {n_stable}/100 stable families")
    _finish("criterion 7 (four-vertex check matches dense box scan)",
            failures, f"{n_stable}/100 families stable")


def test_criterion_8_step_size_stability_guard():
    # dt = 0.01 is flagged and the run diverges at kappa = 1e6; the same
    # step passes and the run converges at kappa = 8
    failures = []
    ok_bad, _ = rk4_stability_check(fast_kth(3, 1e6), 1e6, 0.01)
    if ok_bad:
        failures.append("kappa=1e6 at dt=0.01 not flagged")
    traj = simulate(fast_kth(3, 1e6), QuadraticObjective(1.0), [1.0, 0.0, 0.0])
    if traj.terminated_by is not TerminationReason.DIVERGENCE:
        failures.append(f"kappa=1e6 run ended with {traj.terminated_by.value}")

    ok_good, _ = rk4_stability_check(fast_kth(3, 8.0), 8.0, 0.01)
    if not ok_good:
        failures.append("kappa=8 at dt=0.01 wrongly flagged")
    traj = simulate(fast_kth(3, 8.0), QuadraticObjective(1.0), [1.0, 0.0, 0.0])
    if traj.terminated_by is not TerminationReason.TOLERANCE:
        failures.append(f"kappa=8 run ended with {traj.terminated_by.value}")
    _finish("criterion 8 (step-size check predicts divergence)", failures)


def test_criterion_9_sweep_determinism(tmp_path):
    # two sweep invocations with the same config and seed produce
    # byte-identical CSV files
    args = ["sweep", "--kappas", "4,16", "--algorithms", "heavy_ball,fast_kth:3",
            "--n-functions", "2", "--n-initial-conditions", "2", "--seed", "42"]
    failures = []
    for sub in ("first", "second"):
        rc = cli_main(args + ["--output-dir", str(tmp_path / sub)])
        if rc != 0:
            failures.append(f"{sub} invocation exited {rc}")
    if not failures:
        for name in ("runs.csv", "summaries.csv", "theory.csv"):
            a = (tmp_path / "first" / name).read_bytes()
            b = (tmp_path / "second" / name).read_bytes()
            if a != b:
                failures.append(f"{name} differs between invocations")
    _finish("criterion 9 (sweeps are byte-identical across reruns)", failures)
