"""Acceptance criteria 1-8, one PASS/FAIL line per criterion."""

from __future__ import annotations

import itertools
import json
import math
import time
from fractions import Fraction
from math import gcd

import numpy as np
import pytest

from zigzag_ldpc import cli, iterate
from zigzag_ldpc.cayley import CayleySpec, build_zigzag_cayley
from zigzag_ldpc.decode_sim import SimConfig, bcjr_extrinsic, build_trellis, simulate, uncoded_ber
from zigzag_ldpc.errors import DivergentError
from zigzag_ldpc.gldpc import LIBRARY_NAMES, design_rate, subcode_library, true_rate
from zigzag_ldpc.graph_core import diameter, girth, random_biregular, random_regular
from zigzag_ldpc.products import (
    PRODUCTS,
    replacement_bound,
    replacement_bound_valid,
    verify_product,
    zigzag_bound,
)

PAIRS_PER_KIND = 50
MAX_COMPONENT = 60


def verdict(report, number: int, title: str, ok: bool, detail: str) -> None:
    report(f"[criterion {number}] {'PASS' if ok else 'FAIL'} {title}: {detail}")


# ---------------------------------------------------------------------------
# component sweeps


def regular_pair(seed: int):
    rng = np.random.default_rng([11, seed])
    d1 = int(rng.choice([4, 5, 6, 7, 8]))
    sizes = [n for n in range(d1 + 2, MAX_COMPONENT + 1) if n * d1 % 2 == 0]
    n1 = int(rng.choice(sizes))
    d2 = int(rng.choice([d for d in range(2, d1) if d1 * d % 2 == 0]))
    # every third G1 is a multigraph; G2 is always simple
    g1 = random_regular(n1, d1, seed=seed, simple=bool(seed % 3))
    g2 = random_regular(d1, d2, seed=seed)
    return g1, g2


BIPARTITE_SHAPES = [(2, 3), (3, 3), (3, 4), (2, 4), (4, 6), (3, 6), (4, 4), (2, 6)]


def bipartite_pair(seed: int):
    rng = np.random.default_rng([13, seed])
    c1, d1 = BIPARTITE_SHAPES[int(rng.integers(len(BIPARTITE_SHAPES)))]
    g = gcd(c1, d1)
    unit_n, unit_m = d1 // g, c1 // g
    ks = [k for k in range(1, 61) if unit_n * k <= MAX_COMPONENT and unit_m * k <= MAX_COMPONENT
          and unit_n * k >= c1 and unit_m * k >= d1]
    k = int(rng.choice(ks))
    n, m = unit_n * k, unit_m * k
    # G2 sits on (d1, c1) vertices with degrees (c2, d2) and d1*c2 = c1*d2
    options = [(c2, d1 * c2 // c1) for c2 in range(1, c1 + 1) if d1 * c2 % c1 == 0 and d1 * c2 // c1 <= d1]
    c2, d2 = options[int(rng.integers(len(options)))]
    g1 = random_biregular(n, m, c1, d1, seed=seed, simple=bool(seed % 3))
    g2 = random_biregular(d1, c1, c2, d2, seed=seed)
    return g1, g2


def sweep(kind: str):
    make = regular_pair if kind in ("zigzag", "replacement") else bipartite_pair
    return [make(seed) for seed in range(PAIRS_PER_KIND)]


def expected_shape(kind, g1, g2):
    if kind == "zigzag":
        return (g1.num_vertices * g1.degree, g2.degree**2)
    if kind == "replacement":
        return (g1.num_vertices * g1.degree, g2.degree + 1)
    n, m = g1.num_left, g1.num_right
    c1, d1 = g1.left_degree, g1.right_degree
    c2, d2 = g2.left_degree, g2.right_degree
    if kind == "zigzag_bipartite":
        return (n * d1, m * c1, c2 * c2, d2 * d2)
    return (n * d1, m * d1, c2 * c2 * d2, c2 * d2 * d2)


def actual_shape(kind, g):
    if kind in ("zigzag", "replacement"):
        return (g.num_vertices, g.degree)
    return (g.num_left, g.num_right, g.left_degree, g.right_degree)


@pytest.fixture(scope="module")
def sweeps():
    return {kind: sweep(kind) for kind in PRODUCTS}


# ---------------------------------------------------------------------------


def test_criterion_1_product_contracts(report, sweeps) -> None:
    start = time.perf_counter()
    bad = []
    total = 0
    for kind, pairs in sweeps.items():
        for i, (g1, g2) in enumerate(pairs):
            total += 1
            if actual_shape(kind, PRODUCTS[kind](g1, g2)) != expected_shape(kind, g1, g2):
                bad.append((kind, i))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 60
    verdict(report, 1, "product contracts", ok, f"{total - len(bad)}/{total} exact, {elapsed:.1f}s (limit 60s)")
    assert not bad
    assert elapsed < 60


def test_criterion_2_eigenvalue_bounds(report, sweeps) -> None:
    start = time.perf_counter()
    slack = 1e-6
    zz_bad, rep_bad, rep_valid_bad = [], [], []
    worst = 0.0
    counts = {}
    for kind, pairs in sweeps.items():
        counts[kind] = len(pairs)
        for i, (g1, g2) in enumerate(pairs):
            product = PRODUCTS[kind](g1, g2)
            lam1 = min(1.0, iterate.measure(g1, limit=10**9))
            lam2 = min(1.0, iterate.measure(g2, limit=10**9))
            measured = iterate.measure(product, limit=10**9)
            if kind == "replacement":
                bound = replacement_bound(lam1, lam2, g2.degree)
                if measured > bound + slack:
                    rep_bad.append(i)
                    worst = max(worst, measured - bound)
                if measured > replacement_bound_valid(lam1, lam2, g2.degree) + slack:
                    rep_valid_bad.append(i)
            elif measured > zigzag_bound(lam1, lam2) + slack:
                zz_bad.append((kind, i))
    elapsed = time.perf_counter() - start
    ok = not zz_bad and not rep_bad and elapsed < 300
    detail = (
        f"zig-zag variants {3 * PAIRS_PER_KIND - len(zz_bad)}/{3 * PAIRS_PER_KIND} within lambda1+lambda2+lambda2^2; "
        f"replacement {PAIRS_PER_KIND - len(rep_bad)}/{PAIRS_PER_KIND} within the cube-root bound "
        f"(worst excess {worst:.4f}); weights-swapped bound (1-p+p*f)^(1/3) holds "
        f"{PAIRS_PER_KIND - len(rep_valid_bad)}/{PAIRS_PER_KIND}; {elapsed:.1f}s (limit 300s)"
    )
    verdict(report, 2, "eigenvalue bounds", ok, detail)
    assert not zz_bad
    assert not rep_valid_bad
    assert elapsed < 300
    assert not rep_bad, f"replacement cube-root bound exceeded on {len(rep_bad)} of {PAIRS_PER_KIND} pairs"


def connected_regular(n, d, seed):
    for t in itertools.count():
        g = random_regular(n, d, seed=seed * 1000 + t)
        if diameter(g) < math.inf:
            return g


def test_criterion_3_girth_and_diameter(report, sweeps) -> None:
    zz_checked, zz_bad = 0, []
    for kind in ("zigzag", "zigzag_bipartite"):
        for i, (g1, g2) in enumerate(sweeps[kind]):
            cert = verify_product(PRODUCTS[kind](g1, g2), g1, g2, kind, with_diameter=False)
            if cert.girth_lemma_applies:
                zz_checked += 1
                if cert.girth != 4:
                    zz_bad.append((kind, i, cert.girth))
    rng = np.random.default_rng(17)
    lower_bad, girth_upper_bad, diam_upper_viol, diam_product_viol = [], [], [], []
    for i in range(20):
        d1 = int(rng.choice([3, 4, 5, 6]))
        n1 = int(rng.choice([n for n in range(d1 + 3, 31) if n * d1 % 2 == 0]))
        g1 = connected_regular(n1, d1, i)
        d2 = int(rng.choice([d for d in range(2, d1) if d1 * d % 2 == 0]))
        g2 = connected_regular(d1, d2, 100 + i)
        cert = verify_product(PRODUCTS["replacement"](g1, g2), g1, g2, "replacement")
        glo, ghi = cert.girth_bounds
        if not (glo <= cert.girth and cert.diameter_lower_ok):
            lower_bad.append(i)
        if cert.girth > ghi:
            girth_upper_bad.append(i)
        if not cert.diameter_upper_ok:
            diam_upper_viol.append((i, cert.diameter, cert.diameter_bounds[1]))
        if not cert.diameter_upper_product_ok:
            diam_product_viol.append(i)
    ok = zz_checked > 0 and not zz_bad and not lower_bad and not girth_upper_bad
    detail = (
        f"zig-zag girth 4 on {zz_checked - len(zz_bad)}/{zz_checked} instances meeting the lemma conditions; "
        f"replacement lower bounds {20 - len(lower_bad)}/20, girth upper bound {20 - len(girth_upper_bad)}/20; "
        f"diameter t <= t1+t2 violated on {len(diam_upper_viol)}/20 (reported), t <= t1*t2 violated on {len(diam_product_viol)}/20"
    )
    verdict(report, 3, "girth/diameter lemmas", ok, detail)
    assert zz_checked > 0 and not zz_bad
    assert not lower_bad
    assert not girth_upper_bad


def test_criterion_4_parameter_reproduction(report) -> None:
    checks = {}
    c = cli.example_code("4.1", 0)
    g = c.graph
    checks["4.1 p=5 vertices 160"] = g.num_vertices == 160
    checks["4.1 p=5 degree <= 20"] = g.degree <= 20
    checks["4.1 p=5 block length 1600"] = c.n_bits == 1600
    checks["4.1 p=5 rate >= 1/2"] = true_rate(c) >= Fraction(1, 2) and design_rate(c) >= Fraction(1, 2)
    c = cli.example_code("4.1-large", 0)
    checks["4.1 p=11 vertices 22528"] = c.graph.num_vertices == 22528
    checks["4.1 p=11 block length 225280"] = c.n_bits == 225280
    c = cli.example_code("4.1-rep", 0)
    checks["4.1 replacement degree 15"] = c.graph.degree == 15
    checks["4.1 replacement block length 168960"] = c.n_bits == 168960
    checks["4.1 replacement rate >= 7/15"] = design_rate(c) >= Fraction(7, 15)
    cg = build_zigzag_cayley(CayleySpec("mobius", 3, 5))
    checks["4.2 p=3 double cover on 768 vertices"] = cg.graph.num_left + cg.graph.num_right == 768
    c = cli.example_code("4.3", 0)
    g = c.graph
    checks["4.3 (9,25)-regular on (200,72)"] = (g.num_left, g.num_right, g.left_degree, g.right_degree) == (200, 72, 9, 25)
    checks["4.3 1800 bits"] = c.n_bits == 1800
    checks["4.3 design rate 38/75"] = design_rate(c) == Fraction(38, 75)
    failed = [k for k, v in checks.items() if not v]
    verdict(report, 4, "worked-example parameters", not failed,
            f"{len(checks) - len(failed)}/{len(checks)} exact" + (f"; failed: {failed}" if failed else ""))
    assert not failed


def map_extrinsic(code, llr):
    words = code.codewords().astype(float)
    out = np.empty(code.n)
    for i in range(code.n):
        others = np.delete(np.arange(code.n), i)
        metric = -(words[:, others] @ llr[others])
        out[i] = np.logaddexp.reduce(metric[words[:, i] == 0]) - np.logaddexp.reduce(metric[words[:, i] == 1])
    return out


def test_criterion_5_decoder_correctness(report) -> None:
    rng = np.random.default_rng(5)
    worst = 0.0
    for name in ("[3,2,2]", "[7,4,3]", "[15,11,3]", "[9,8,2]"):
        code = subcode_library(name)
        trellis = build_trellis(code)
        llrs = rng.normal(0.0, 3.0, size=(100, code.n))
        got = bcjr_extrinsic(trellis, llrs)
        for row, g in zip(llrs, got):
            worst = max(worst, float(np.max(np.abs(g - map_extrinsic(code, row)))))
    small = [subcode_library(n) for n in LIBRARY_NAMES if subcode_library(n).n <= 16]
    paths_ok = all(build_trellis(c).path_count() == 2**c.k for c in small)
    ok = worst <= 1e-6 and paths_ok
    verdict(report, 5, "decoder oracle equivalence", ok,
            f"max |BCJR - MAP| = {worst:.2e} (limit 1e-6); trellis path count 2^k on {len(small)} codes: {paths_ok}")
    assert worst <= 1e-6
    assert paths_ok


SIM_BUDGET_S = 30 * 60


@pytest.mark.slow
def test_criterion_6_simulation_sanity(report) -> None:
    code = cli.example_code("4.3", 0)
    cfg = SimConfig([1.0, 2.0, 3.0, 4.0], max_frames=10_000_000, max_errors=100, seed=0, batch=2000)
    start = time.perf_counter()
    points = simulate(code, cfg, workers=1, time_budget=SIM_BUDGET_S)
    elapsed = time.perf_counter() - start
    complete = len(points) == 4
    errors_ok = complete and all(p.frame_errors >= 100 for p in points)
    bers = [p.ber for p in points]
    decreasing = complete and all(a > b for a, b in zip(bers, bers[1:]))
    below_uncoded = complete and bers[-1] < uncoded_ber(4.0)
    in_time = elapsed < SIM_BUDGET_S
    ok = errors_ok and decreasing and below_uncoded and in_time
    summary = "; ".join(f"{p.snr_db:g} dB: {p.frames} frames, {p.frame_errors} frame errors, BER {p.ber:.3e}" for p in points)
    verdict(report, 6, "simulation sanity (single worker)", ok,
            f"{summary}; strictly decreasing {decreasing}; 4 dB below uncoded {uncoded_ber(4.0):.3e}: {below_uncoded}; "
            f"{elapsed:.0f}s (limit {SIM_BUDGET_S}s)")
    assert complete, f"only {len(points)} of 4 points finished within {SIM_BUDGET_S}s"
    assert decreasing and below_uncoded
    assert errors_ok, "fewer than 100 frame errors at some point"
    assert in_time


def test_criterion_7_iteration_constants(report) -> None:
    start = time.perf_counter()
    zzm = iterate.recurrence_fixed_point("zigzag_modified", {"lam": 0.296})
    rep = iterate.recurrence_fixed_point("replacement", {"lam": 0.2, "lam1": 0.2, "d": 6})
    grid = [round(0.05 * i, 2) for i in range(1, 7)]
    divergent = 0
    total = 0
    for lam1, lam2, d in itertools.product(grid, grid, range(6, 21)):
        total += 1
        try:
            iterate.recurrence_fixed_point("replacement_squared", {"lam": lam2, "lam1": lam1, "d": d})
        except DivergentError:
            divergent += 1
    elapsed = time.perf_counter() - start
    ok = abs(zzm - 0.5499) <= 1e-3 and abs(rep - 0.8574) <= 1e-3 and divergent == total and elapsed < 60
    verdict(report, 7, "iteration constants", ok,
            f"modified {zzm:.6f} (0.5499), replacement {rep:.6f} (0.8574), squared variant divergent "
            f"{divergent}/{total}, {elapsed:.1f}s (limit 60s)")
    assert abs(zzm - 0.5499) <= 1e-3
    assert abs(rep - 0.8574) <= 1e-3
    assert divergent == total
    assert elapsed < 60


def test_criterion_8_determinism(report, tmp_path, capsys) -> None:
    d = tmp_path
    runs = [
        ["graph", "--kind", "random-regular", "--n", "30", "--d", "4", "--seed", "3", "--out", f"{d}/g1.edges"],
        ["graph", "--kind", "random-regular", "--n", "4", "--d", "3", "--seed", "1", "--out", f"{d}/g2.edges"],
        ["product", "--kind", "zigzag", "--g1", f"{d}/g1.edges", "--g2", f"{d}/g2.edges",
         "--out", f"{d}/z.edges", "--cert", f"{d}/z.cert.json"],
        ["spectral", "--graph", f"{d}/z.edges", "--kappa", "0.9", "--out", f"{d}/z.spec.json"],
        ["cayley", "--family", "shift", "--p", "5", "--k", "5", "--out", f"{d}/cay.edges", "--info", f"{d}/cay.json"],
        ["code", "--example", "4.3", "--out", f"{d}/c.alist"],
        ["sim", "--code", f"{d}/c.alist", "--snr", "1:0.5:2", "--max-frames", "60", "--max-errors", "10",
         "--workers", "1", "--out", f"{d}/ber.csv"],
        ["iterate", "--family", "zz", "--levels", "3", "--out", f"{d}/trace.json"],
    ]
    manifests = []
    for argv in runs:
        assert cli.main(argv) == 0, argv
        out = argv[argv.index("--out") + 1]
        manifests.append(cli.manifest_path(out))
    results = {}
    for m in manifests:
        results[m.name] = cli.main(["repro", str(m)])
    capsys.readouterr()
    artifacts = sum(len(json.loads(m.read_text())["artifacts"]) for m in manifests)
    bad = [k for k, v in results.items() if v != 0]
    verdict(report, 8, "manifest determinism", not bad,
            f"{len(manifests) - len(bad)}/{len(manifests)} manifests reran byte-identical ({artifacts} artifacts)")
    assert not bad
