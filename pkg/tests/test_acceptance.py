"""Acceptance suite: property-based checks plus scaled-down statistics.

Each criterion prints one PASS line with its measured quantities (run with
`pytest tests/test_acceptance.py -v -s`).  Tolerances are fixed here, not
calibrated after the fact: LP value agreement 1e-6 (1e-7 where stated),
integrality 1e-6, certificate equality exact.
"""

import itertools
import math
import time

import numpy as np
import pytest

from mpdec.channels import Biawgn, Bsc, llr, transmit, trial_rng
from mpdec.decoders import (DecodeStatus, adaptive_lp_decode,
                            branch_and_bound_decode, constant_depth_decode,
                            cutting_plane_decode, fractional_distance,
                            lp_decode, variable_depth_decode)
from mpdec.formulations import (build_formulation, build_fs_lp,
                                fs_inequalities,
                                has_lonely_fractional_neighbor,
                                matrix_adaptation_cut_search,
                                most_violated_fs_cut, rpc_from_rows)
from mpdec.gf2 import (BinaryMatrix, LinearCode, girth,
                       min_distance_bruteforce, ml_bruteforce,
                       random_regular_ldpc, spc_product_code)
from mpdec.simplex import add_rows_resolve, solve
from mpdec.trellis import (TurboSpec, accumulator_fsm, build_trellis,
                           four_state_fsm, trellis_flow_lp,
                           turbo_lagrangian_decode, turbo_lp_decode,
                           turbo_ml_bruteforce, viterbi)

from conftest import H84_ARRAY, HAMMING_ARRAY, random_forest_code


def _code84():
    return LinearCode(BinaryMatrix.from_array(H84_ARRAY))


def _hamming():
    return LinearCode(BinaryMatrix.from_array(HAMMING_ARRAY))


def _supports(code):
    return [code.H.row_support(i) for i in range(code.m) if code.H.row_support(i)]


# ---------------------------------------------------------------------------
# criterion 1: the five fundamental-polytope formulations are equivalent
# ---------------------------------------------------------------------------


def _random_small_code(rng):
    n = int(rng.integers(8, 25))
    m = max(2, n - int(rng.integers(4, 13)))
    while True:
        rows = []
        for _ in range(m):
            w = int(rng.integers(2, 5))
            sup = rng.choice(n, size=w, replace=False)
            rows.append(sum(1 << int(j) for j in sup))
        code = LinearCode(BinaryMatrix(n, tuple(rows)))
        if code.k <= 12:
            return code


def test_criterion_01_formulation_equivalence():
    rng = np.random.default_rng(101)
    t0 = time.time()
    worst = 0.0
    kinds = ("fs", "config", "count", "cascade", "edge")
    for _ in range(200):
        code = _random_small_code(rng)
        for _ in range(5):
            lam = rng.standard_normal(code.n)
            values = [solve(build_formulation(code, kind, lam).lp).value
                      for kind in kinds]
            spread = max(values) - min(values)
            worst = max(worst, spread)
            assert spread < 1e-6
    elapsed = time.time() - t0
    assert elapsed < 120.0
    print(f"\nPASS criterion 1: 200 codes x 5 objectives, 5 formulations, "
          f"worst value spread {worst:.2e}, {elapsed:.0f}s")


# ---------------------------------------------------------------------------
# criteria 2 and 7 share the decode-trial sweep
# ---------------------------------------------------------------------------


@pytest.fixture(scope="module")
def decode_trials():
    """10^4 decode trials on codes with k <= 14, all decoder families.

    Returns ML-certificate mismatches plus every fractional failure point
    (with any redundant-check supports added by cutting planes) for the
    lonely-fractional-neighbor check.
    """
    codes = [
        ("hamming", _hamming()),
        ("c84", _code84()),
        ("p33", spc_product_code((3, 3))),
        ("r16", random_regular_ldpc(16, 3, 4, seed=3)),
        ("r20", random_regular_ldpc(20, 3, 4, seed=5)),
    ]
    for _, code in codes:
        assert code.k <= 14
    rng = np.random.default_rng(202)
    mismatches = []
    certified = 0
    fractional = []
    sigmas = (0.7, 0.9, 1.1, 1.3)
    total = 10_000

    def lam_for(code, t):
        if t % 2 == 0:
            sigma = sigmas[t % 4]
            ch = Biawgn(sigma)
            y = transmit(np.zeros(code.n, dtype=np.uint8), ch, rng)
            return llr(y, ch)
        return rng.standard_normal(code.n)

    for t in range(total):
        name, code = codes[t % len(codes)]
        lam = lam_for(code, t)
        extra_supports = []

        def recorder(h, x, seed):
            cuts = matrix_adaptation_cut_search(h, x)
            extra_supports.extend(c.support for c in cuts)
            return cuts

        if t < 4500:
            res = lp_decode(code, lam)
        elif t < 6500:
            res = adaptive_lp_decode(code, lam, drop_inactive=(t % 2 == 0))
        elif t < 8000:
            base = "fs" if t % 2 else "parity_relax"
            res = cutting_plane_decode(code, lam, searchers=(recorder,), base=base)
        elif t < 8800 and name != "r20":
            res = branch_and_bound_decode(code, lam)
        elif t < 9400:
            res = variable_depth_decode(code, lam, depth=6)
        else:
            res = constant_depth_decode(code, lam, depth=6, subset_size=2)
        if res.status is DecodeStatus.ML_CERTIFIED:
            certified += 1
            cw, val = ml_bruteforce(code, lam)
            if not np.array_equal(res.codeword(), cw) or abs(res.value - val) > 1e-6:
                mismatches.append((name, t))
        elif res.status is DecodeStatus.FRACTIONAL_FAILURE:
            fractional.append((code, res.point,
                               _supports(code) + extra_supports))
        else:
            assert res.status is not DecodeStatus.SOLVER_ERROR, (name, t)
    return dict(total=total, certified=certified, mismatches=mismatches,
                fractional=fractional)


def test_criterion_02_ml_certificates(decode_trials):
    d = decode_trials
    assert d["total"] == 10_000
    assert not d["mismatches"], d["mismatches"][:5]
    print(f"\nPASS criterion 2: {d['total']} trials, {d['certified']} ML "
          f"certificates, 0 oracle mismatches")


# ---------------------------------------------------------------------------
# criterion 3: forests decode integrally
# ---------------------------------------------------------------------------


@pytest.fixture(scope="module")
def forest_trials():
    rng = np.random.default_rng(303)
    integral = 0
    points = []
    for _ in range(1000):
        code = random_forest_code(rng, 8, 18)
        lam = rng.standard_normal(code.n)
        res = lp_decode(code, lam)
        if res.status is DecodeStatus.ML_CERTIFIED:
            integral += 1
        elif res.status is DecodeStatus.FRACTIONAL_FAILURE:
            points.append((code, res.point, _supports(code)))
    return dict(integral=integral, points=points)


def test_criterion_03_tree_exactness(forest_trials):
    assert forest_trials["integral"] == 1000
    print("\nPASS criterion 3: 1000 forest codes, LP decoding integral on all")


# ---------------------------------------------------------------------------
# criterion 4: adaptive separation convergence bounds
# ---------------------------------------------------------------------------


@pytest.fixture(scope="module")
def adaptive_trials():
    """Adaptive LP decoding over (3,6)-regular codes at sigma = 1.0.

    Every trial checks the iteration and constraint bounds and that the
    final point satisfies every forbidden-set inequality (which pins its
    value to the full LP optimum); a subsample is cross-solved against the
    full forbidden-set LP directly.
    """
    plan = ((30, 5000), (60, 3000), (120, 2000))
    direct_samples = {30: 60, 60: 20, 120: 3}
    sigma = 1.0
    out = []
    fractional = []
    for n, trials in plan:
        code = random_regular_ldpc(n, 3, 6, seed=500 + n)
        m = code.m
        supports = _supports(code)
        ch = Biawgn(sigma)
        zero = np.zeros(n, dtype=np.uint8)
        rows_final = []
        direct_checked = 0
        for t in range(trials):
            lam = llr(transmit(zero, ch, trial_rng(400 + n, 0, t)), ch)
            res = adaptive_lp_decode(code, lam)
            assert res.status is not DecodeStatus.SOLVER_ERROR
            assert res.stats.iterations <= n
            assert res.stats.cuts_added + 2 * n <= n * (m + 2)
            x = res.point if res.point is not None else res.codeword()
            point = np.asarray(x, dtype=float)
            for sup in supports:
                assert most_violated_fs_cut(sup, point) is None
            rows_final.append(res.stats.final_rows)
            if t < direct_samples[n]:
                ref = solve(build_fs_lp(code, lam).lp)
                assert abs(ref.value - res.value) < 1e-6
                direct_checked += 1
            if res.status is DecodeStatus.FRACTIONAL_FAILURE:
                fractional.append((code, res.point, supports))
        out.append(dict(n=n, trials=trials, mean_rows=float(np.mean(rows_final)),
                        direct_checked=direct_checked))
    return dict(sizes=out, fractional=fractional)


def test_criterion_04_adaptive_lp_bounds(adaptive_trials):
    msgs = []
    for item in adaptive_trials["sizes"]:
        n, mean_rows = item["n"], item["mean_rows"]
        assert 0.3 * n <= mean_rows <= 1.2 * n, (n, mean_rows)
        msgs.append(f"n={n}: mean final rows {mean_rows:.1f} ({mean_rows/n:.2f}n, "
                    f"{item['direct_checked']} direct LP cross-checks)")
    print("\nPASS criterion 4: 10^4 adaptive trials, iteration and constraint "
          "bounds held on all; " + "; ".join(msgs))


# ---------------------------------------------------------------------------
# criterion 5: fractional distance equals minimum distance for SPC products
# ---------------------------------------------------------------------------


def test_criterion_05_spc_product_fractional_distance():
    t0 = time.time()
    results = []
    for dims in ((3, 3), (3, 4)):
        code = spc_product_code(dims)
        d = min_distance_bruteforce(code)
        frac = fractional_distance(code)
        assert d == 4
        assert frac == pytest.approx(float(d), abs=1e-6)
        results.append(f"{dims}: d={d}, d_frac={frac:.9f}")
    elapsed = time.time() - t0
    assert elapsed < 300.0
    print(f"\nPASS criterion 5: {'; '.join(results)} ({elapsed:.1f}s)")


# ---------------------------------------------------------------------------
# criterion 6: guaranteed BSC correction radius
# ---------------------------------------------------------------------------


def test_criterion_06_bsc_correction_guarantee():
    msgs = []
    for name, code in (("(8,4)", _code84()), ("(3,3) product", spc_product_code((3, 3)))):
        frac = fractional_distance(code)
        d_frac = round(frac)
        assert abs(frac - d_frac) < 1e-6
        t = math.ceil(d_frac / 2) - 1
        patterns = 0
        for w in range(t + 1):
            for sup in itertools.combinations(range(code.n), w):
                e = np.zeros(code.n)
                e[list(sup)] = 1.0
                res = lp_decode(code, 1.0 - 2.0 * e)
                patterns += 1
                assert res.status is DecodeStatus.ML_CERTIFIED
                assert not res.codeword().any(), (name, sup)
        msgs.append(f"{name}: d_frac={d_frac}, radius {t}, "
                    f"{patterns} patterns corrected")
    print("\nPASS criterion 6: " + "; ".join(msgs))


# ---------------------------------------------------------------------------
# criterion 7: no check sees exactly one fractional variable
# ---------------------------------------------------------------------------


def test_criterion_07_no_lonely_fractional_neighbor(decode_trials, forest_trials,
                                                    adaptive_trials):
    checked = 0
    points = (decode_trials["fractional"] + forest_trials["points"]
              + adaptive_trials["fractional"])
    assert points, "expected at least some fractional vertices"
    for code, x, supports in points:
        x = np.asarray(x, dtype=float)
        # the property applies to supports whose whole forbidden-set family
        # holds at x (always true for original rows at a terminal point)
        applicable = [s for s in supports if most_violated_fs_cut(s, x) is None]
        assert not has_lonely_fractional_neighbor(applicable, x)
        checked += 1
    print(f"\nPASS criterion 7: {checked} fractional vertices, "
          f"0 lonely-fractional-neighbor violations")


# ---------------------------------------------------------------------------
# criterion 8: short redundant checks never cut below the girth bound
# ---------------------------------------------------------------------------


def test_criterion_08_girth6_rpc_invariance():
    code = random_regular_ldpc(28, 2, 4, seed=12)
    assert girth(code.tanner) == 6
    rng = np.random.default_rng(808)
    pairs = []
    for pair in itertools.combinations(range(code.m), 2):
        try:
            pairs.append(rpc_from_rows(code.H, pair))
        except ValueError:
            continue
    assert pairs
    violations = 0
    t0 = time.time()
    for obj in range(100):
        lam = rng.standard_normal(code.n)
        sol = solve(build_fs_lp(code, lam).lp)
        x = sol.x[:code.n]
        for sup in pairs:
            if most_violated_fs_cut(sup, x, tol=1e-7) is not None:
                violations += 1
        if obj < 3:
            # direct check: appending full families of ten random pairs
            # must leave the optimum unchanged
            idx = rng.choice(len(pairs), size=min(10, len(pairs)), replace=False)
            rows = [ineq.as_lp_row() for i in idx
                    for ineq in fs_inequalities(pairs[int(i)])]
            again = add_rows_resolve(sol, rows)
            assert again.optimal
            assert abs(again.value - sol.value) <= 1e-7
    assert violations == 0
    print(f"\nPASS criterion 8: girth-6 code, {len(pairs)} two-row redundant "
          f"checks, 100 objectives, 0 violated cuts ({time.time()-t0:.0f}s)")


# ---------------------------------------------------------------------------
# criterion 9: paired-seed improvement ordering on a (3,4) length-32 code
# ---------------------------------------------------------------------------


def test_criterion_09_improvement_ordering():
    code = random_regular_ldpc(32, 3, 4, seed=7)
    zero_errors = {"lp": set(), "ctp": set(), "bb": set()}
    g, m = 4, 2
    t0 = time.time()

    def correct(res):
        return res.success and not res.codeword().any()

    frames = {}
    for pidx, p in ((0, 0.08), (1, 0.10)):
        ch = Bsc(p)
        lp_errors = 0
        t = 0
        while lp_errors < 100 and t < 3000:
            lam = llr(transmit(np.zeros(32, dtype=np.uint8), ch, trial_rng(9, pidx, t)), ch)
            r_lp = lp_decode(code, lam)
            r_ctp = cutting_plane_decode(code, lam, base="fs")
            r_bb = branch_and_bound_decode(code, lam)
            r_vd = variable_depth_decode(code, lam, depth=g)
            r_cd = constant_depth_decode(code, lam, depth=g, subset_size=m)
            assert r_vd.stats.lp_solves <= 2 ** (g + 1) - 1
            assert r_cd.stats.lp_solves <= math.comb(g, m) * 2 ** m + 1
            for key, res in (("lp", r_lp), ("ctp", r_ctp), ("bb", r_bb)):
                if not correct(res):
                    zero_errors[key].add((pidx, t))
            if not correct(r_lp):
                lp_errors += 1
            t += 1
        frames[p] = t
        assert lp_errors >= 100, f"needed more frames at p={p}"
    assert zero_errors["ctp"] <= zero_errors["lp"]
    assert zero_errors["bb"] <= zero_errors["ctp"]
    elapsed = time.time() - t0
    assert elapsed < 900.0
    print(f"\nPASS criterion 9: frames {frames}, error counts "
          f"lp={len(zero_errors['lp'])} ctp={len(zero_errors['ctp'])} "
          f"bb={len(zero_errors['bb'])}, nested as required; depth-limited "
          f"searches respected their LP-count formulas ({elapsed:.0f}s)")


# ---------------------------------------------------------------------------
# criterion 10: trellis integrality and Lagrangian duality
# ---------------------------------------------------------------------------


def test_criterion_10_trellis_integrality_duality():
    rng = np.random.default_rng(1010)
    trellis = build_trellis(four_state_fsm(), 8)
    worst = 0.0
    for _ in range(1000):
        costs = rng.standard_normal(trellis.num_edges)
        sol = solve(trellis_flow_lp(trellis, costs))
        _, vcost = viterbi(trellis, costs)
        err = abs(sol.value - vcost)
        worst = max(worst, err)
        assert err < 1e-7
    lagr_checked = ml_checked = certified = 0
    for k, reps in ((6, 40), (8, 30), (10, 20), (12, 10)):
        for _ in range(reps):
            spec = TurboSpec(accumulator_fsm(),
                             tuple(int(v) for v in rng.permutation(k)), k)
            lam = rng.standard_normal(3 * k)
            res = turbo_lp_decode(spec, lam)
            lb, _ = turbo_lagrangian_decode(spec, lam, max_iterations=25)
            assert lb <= res.value + 1e-6
            lagr_checked += 1
            xml, vml = turbo_ml_bruteforce(spec, lam)
            assert res.value <= vml + 1e-7
            ml_checked += 1
            if res.status is DecodeStatus.ML_CERTIFIED:
                certified += 1
                assert np.array_equal(res.point, xml)
                assert res.value == pytest.approx(vml, abs=1e-7)
    print(f"\nPASS criterion 10: 1000 single-trellis LP==Viterbi trials "
          f"(worst gap {worst:.2e}); {lagr_checked} dual bounds held; "
          f"{certified}/{ml_checked} turbo certificates all equal "
          f"exhaustive ML")
