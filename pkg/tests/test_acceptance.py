"""Acceptance checks, one printed PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines; they are
also written to the terminal when output is captured.  Tolerances are fixed
here and nowhere else.
"""

import json
import os
import subprocess
import sys
import time


from evengc import surgery
from evengc.complex import GraphVector, delta_matrix
from evengc.graphs import NAMED_GRAPHS, canonical_form, enumerate_basis, enumerate_simple_graphs
from evengc.homology import ak_space, dim_cohomology, euler_characteristic_check, excess_range, reduce_to_ak
from evengc.links import (
    antipodal_symmetry_check,
    borromean_triple_sign,
    gauss_linking,
    make_borromean,
    make_hopf,
    make_split,
)

from . import oracles

AK_TABLE = [0, 1, 0, 0, 1]  # k = 1..5
DIMS_TIME_LIMIT = 60.0
MC_TIME_LIMIT = 30.0
MC_SAMPLES = 1_000_000
MC_SEED = 42
MC_ABS_TOL = 0.05
MC_SIGMA = 3.0
STRETCH = os.environ.get("EVENGC_STRETCH") == "1"


def report(capsys, n, ok, detail):
    with capsys.disabled():
        print(f"\n[acceptance] criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def test_criterion_1_dimension_table(capsys):
    t0 = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "evengc", "dims", "--k", "1..5", "--json"],
        capture_output=True, text=True, timeout=10 * DIMS_TIME_LIMIT,
    )
    elapsed = time.perf_counter() - t0
    dims = [r["dim_Ak"] for r in json.loads(proc.stdout)] if proc.returncode == 0 else None
    ok = dims == AK_TABLE and elapsed < DIMS_TIME_LIMIT
    report(capsys, 1, ok, f"dim A_k (k=1..5) = {dims}, expected {AK_TABLE}, {elapsed:.1f}s < {DIMS_TIME_LIMIT:.0f}s")


def test_criterion_1_stretch(capsys):
    # non-blocking: printed, never asserted
    parts = []
    t0 = time.perf_counter()
    parts.append(f"k=6 -> {ak_space(6, cap_vertices=12).dim} ({time.perf_counter() - t0:.1f}s)")
    if STRETCH:
        t0 = time.perf_counter()
        parts.append(f"k=7 -> {ak_space(7, cap_vertices=14).dim} ({time.perf_counter() - t0:.1f}s)")
    else:
        parts.append("k=7 skipped (set EVENGC_STRETCH=1)")
    with capsys.disabled():
        print("\n[acceptance] criterion 1 stretch (non-blocking): " + ", ".join(parts) + "; expected 0, 0")


def test_criterion_2_a2_generator(capsys):
    space = ak_space(2)
    classes = space.basis_classes()
    k4, _ = canonical_form(NAMED_GRAPHS["K4"])
    brute = oracles.brute_automorphisms(4, NAMED_GRAPHS["K4"].edges)
    odd = [p for p in brute if oracles.edge_parity(p, NAMED_GRAPHS["K4"].edges) < 0]
    ok = classes == [k4] and k4.aut_order == len(brute) == 24 and not k4.orientation_reversing and not odd
    report(capsys, 2, ok, f"A_2 basis = {[str(c) for c in classes]}, |Aut K4| = {k4.aut_order} (brute force {len(brute)}), "
           f"odd automorphisms: {len(odd)}")


def test_criterion_3_delta_squared(capsys):
    checked, bad = 0, []
    for k in range(1, 5):
        for ell in excess_range(k):
            a = delta_matrix(k, ell).matrix
            b = delta_matrix(k, ell + 1).matrix
            checked += 1
            if not (b @ a).is_zero():
                bad.append((k, ell))
    report(capsys, 3, not bad, f"delta^2 = 0 exactly on {checked} bigrades with k <= 4, failures {bad}")


def test_criterion_4_duality_and_euler(capsys):
    h0 = [dim_cohomology(k, 0) for k in range(1, 6)]
    ak = [ak_space(k).dim for k in range(1, 6)]
    euler = [euler_characteristic_check(k) for k in range(1, 5)]
    ok = h0 == ak and all(euler)
    report(capsys, 4, ok, f"dim H^0 = {h0}, dim A_k = {ak} (k=1..5); Euler identity k=1..4: {euler}")


def test_criterion_5_surgery_pairing(capsys):
    k4, _ = canonical_form(NAMED_GRAPHS["K4"])
    prism, _ = canonical_form(NAMED_GRAPHS["prism"])
    k33, _ = canonical_form(NAMED_GRAPHS["K33"])

    data = surgery.surgery_data(surgery.orient_arrows(k4), d=4)
    contrib = surgery.sigma_contributions(data, k4)
    value = surgery.evaluate_I(data, k4)
    equal = len(contrib) == 24 and len(set(contrib.values())) == 1
    z2 = surgery.z_k(data, ak_space(2))

    z3 = surgery.z_k(surgery.surgery_data(surgery.orient_arrows(prism)), ak_space(3))

    # k = 2: z_2 / [K4] over every valid arrow orientation
    base2 = reduce_to_ak(GraphVector(2, 0, {k4: 1}), ak_space(2))[0]
    rel2 = {surgery.z_k(surgery.surgery_data(ag), ak_space(2))[0] / base2 for ag in surgery.all_arrow_orientations(k4)}
    # k = 3: both classes vanish in A_3, so compare the sign of the identity summand
    rel3 = set()
    for g in (prism, k33):
        ident = tuple(range(1, g.v + 1))
        rel3 |= {surgery.sigma_contributions(surgery.surgery_data(ag), g)[ident] for ag in surgery.all_arrow_orientations(g)}

    ok = abs(value) == 24 and equal and z2 in ([1], [-1]) and z3 == [] and len(rel2) == 1 and len(rel3) == 1
    report(capsys, 5, ok,
           f"I(W4, W4) = {value} with {len(contrib)} equal summands; z_2 = {[str(c) for c in z2]}; "
           f"z_3(prism) = {z3 or 0}; relative sign k=2 {[str(x) for x in rel2]}, k=3 {sorted(rel3)}")


def test_criterion_6_gauss_linking(capsys):
    hopf = make_hopf(1, 2, 4)
    t0 = time.perf_counter()
    res = gauss_linking(hopf[0], hopf[1], samples=MC_SAMPLES, seed=MC_SEED)
    elapsed = time.perf_counter() - t0
    ok_hopf = abs(res.estimate - 1) <= max(MC_ABS_TOL, MC_SIGMA * res.stderr) and elapsed < MC_TIME_LIMIT

    split = make_split(1, 2, 4)
    rs = gauss_linking(split[0], split[1], samples=MC_SAMPLES, seed=MC_SEED)
    ok_split = abs(rs.estimate) <= MC_ABS_TOL

    bor = make_borromean(2, 2, 1, 4)
    dims = (2, 2, 1)
    pairs, ok_bor = [], True
    for i, j in ((0, 1), (0, 2), (1, 2)):
        if dims[i] + dims[j] != 3:
            # a 2-sphere and a 2-sphere in R^4 have no linking integral
            pairs.append(f"({i + 1},{j + 1}) n/a")
            continue
        rb = gauss_linking(bor[i], bor[j], samples=MC_SAMPLES, seed=MC_SEED)
        ok_bor &= abs(rb.estimate) <= MC_ABS_TOL
        pairs.append(f"({i + 1},{j + 1}) {rb.estimate:+.4f}")

    report(capsys, 6, ok_hopf and ok_split and ok_bor,
           f"hopf(1,2,4) = {res.estimate:.5f} +/- {res.stderr:.5f} in {elapsed:.1f}s; split = {rs.estimate:+.4f}; "
           f"borromean(2,2,1,4) pairs {', '.join(pairs)}")


def test_criterion_7_exact_signs(capsys):
    anti = {d: antipodal_symmetry_check(d) for d in (2, 3, 4, 5)}
    triple = {args: borromean_triple_sign(*args) for args in ((1, 1, 1, 3), (2, 2, 1, 4))}
    ok = all(anti.values()) and set(triple.values()) == {1}
    report(capsys, 7, ok, f"antipodal symmetry {anti}; triple signs {triple}")


def test_criterion_8_property_substitutes(capsys):
    import math

    # orbit counting: labelled presentations = (2k)! (3k)! / |Aut|
    orbit = all(
        oracles.labelled_presentations(c.v, c.edges) == math.factorial(2 * k) * math.factorial(3 * k) // c.aut_order
        for k in (2, 3)
        for c in enumerate_simple_graphs(2 * k, 3 * k)
    )
    # pairing magnitude = |Aut| on k = 5 basis classes
    mags = []
    for cg in enumerate_basis(5, 0):
        val = surgery.evaluate_I(surgery.surgery_data(surgery.orient_arrows(cg)), cg)
        mags.append(abs(val) == cg.aut_order)
    # seed determinism across thread counts
    hopf = make_hopf(1, 2, 4)
    runs = {gauss_linking(hopf[0], hopf[1], samples=200_000, seed=7, threads=t).estimate for t in (1, 4)}
    ok = orbit and all(mags) and len(runs) == 1
    report(capsys, 8, ok, f"out-of-scope items replaced by properties: orbit counting {orbit}, "
           f"|I| = |Aut| on {len(mags)} classes {all(mags)}, MC thread-invariant {len(runs) == 1}")
