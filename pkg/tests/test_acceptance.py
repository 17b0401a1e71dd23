"""Acceptance criteria, one test each; every test prints a PASS/FAIL line.

The full identity campaign (criterion 3) takes a few minutes.
"""

import json
import random
import re
import subprocess
import sys
import time
from collections import Counter

import pytest

from drazinkit import GF, QQ, Matrix, MatrixRing, campaign, diag, drazin, is_drazin_pair
from drazinkit.engine import integer_drazin
from drazinkit.errors import NotDrazinInvertible
from drazinkit.generators import GenSpec, trial_rng

SEP = "=" * 8


def report(capsys, number, ok, summary):
    with capsys.disabled():
        print(f"\n{SEP} ACCEPTANCE {number} {'PASS' if ok else 'FAIL'}: {summary}")
    return ok


def rows(m):
    return [[str(x) for x in r] for r in m.to_rows()]


def test_1_matrix_counterexample(capsys):
    t0 = time.perf_counter()
    case = campaign.counterexample()["cases"][0]
    elapsed = time.perf_counter() - t0
    f = GF(7)
    el = case["elements"]
    checks = {
        "product": el["(p+q)(p-q)^pi"] == rows(diag([2, 0], f)),
        "not nilpotent": all(case["powers_of_product"][str(m)] != rows(diag([0, 0], f)) for m in (1, 2)),
        "not nilpotent (engine)": not case["verdicts"]["product_nilpotent"],
        "sum inverse": el["(p+q)^D"] == rows(diag([4, 1], f)),
        "difference inverse": el["(p-q)^D"] == rows(diag([0, 1], f)),
        "sixth power": case["sixth_power_of_product"] == rows(diag([1, 0], f)),
        "under 1s": elapsed < 1,
    }
    bad = [k for k, v in checks.items() if not v]
    assert report(capsys, 1, not bad, f"M2(Z7) counterexample in {elapsed:.3f}s {bad or ''}"), bad


def test_2_integer_counterexample(capsys):
    t0 = time.perf_counter()
    zero = integer_drazin(0)
    try:
        integer_drazin(2)
        two_rejected = False
    except NotDrazinInvertible:
        two_rejected = True
    case = campaign.counterexample()["cases"][1]
    elapsed = time.perf_counter() - t0
    ok = (
        zero.d == 0
        and two_rejected
        and case["elements"]["(p+q)^D"] == "NotDrazinInvertible"
        and case["elements"]["(p-q)^D"] == "0"
        and elapsed < 1
    )
    assert report(capsys, 2, ok, f"0^D = {zero.d}, 2 rejected = {two_rejected}, {elapsed:.3f}s")


@pytest.mark.slow
def test_3_identity_campaign(capsys):
    result = campaign.verify_all()
    cells = len(result["reports"])
    failing = Counter()
    for r in result["reports"]:
        for f in r["failures"]:
            failing[f["equation"]] += 1
    trials = sum(r["trials"] for r in result["reports"])
    summary = (
        f"{cells} cells, {trials} trials, {result['failures']} failures "
        f"{dict(failing) or ''} in {result['elapsed_ms'] / 1000:.0f}s"
    )
    assert report(capsys, 3, result["pass"], summary), dict(failing)


def test_4_oracle_equivalence(capsys):
    t0 = time.perf_counter()
    counts, ok = [], True
    for p in (2, 3):
        rep = campaign.oracle(GF(p), 2)
        counts.append(f"GF({p}): {rep['elements']} elements, {rep['mismatches']} mismatches")
        ok &= rep["elements"] == p**4 and rep["mismatches"] == 0 and rep["uniqueness_count"] == 1
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 10
    assert report(capsys, 4, ok, "; ".join(counts) + f"; {elapsed:.2f}s")


def _idempotents_gf2():
    ring = MatrixRing(GF(2), 2)
    return [e for e in ring.elements() if e * e == e]


def test_5_idempotent_pair_sweep(capsys):
    rep = campaign.oracle(GF(2), 2)
    n_idem = len(_idempotents_gf2())  # independent enumeration
    part = rep["sum_condition_partition"]
    failing = {k: len(v["failures"]) for k, v in rep["theorems"].items() if v["failures"]}
    ok = (
        rep["idempotents"] == n_idem
        and rep["pairs"] == n_idem**2
        and part["disagreements"] == 0
        and part["condition_holds"] + part["condition_fails"] == rep["pairs"]
        and not failing
    )
    summary = (
        f"{rep['pairs']} pairs ({n_idem} idempotents), partition {part['condition_holds']}/"
        f"{part['condition_fails']} with {part['disagreements']} disagreements, failing {failing or 'none'}"
    )
    assert report(capsys, 5, ok, summary), failing


def _both_sides(theorem, pair):
    p, q = pair.p, pair.q
    pq, qp = p * q, q * p
    if theorem == "T3.7":
        return [(drazin(pq).d == qp, pq == qp)]
    return [
        (drazin(p - q).d == p - q, pq == qp),
        (drazin(p + q).d == p + q, pq.is_zero() and qp.is_zero()),
    ]


@pytest.mark.slow
def test_6_biconditional_coverage(capsys):
    positive = {"T3.7": {"commuting"}, "T3.9": {"annihilating-projectors", "commuting-projectors"}}
    lines, ok = [], True
    for theorem in ("T3.7", "T3.9"):
        kinds = campaign.CHECKS[theorem].kinds
        tally = Counter()
        exceptions = []
        for dim in campaign.DEFAULT_DIMS:
            ctx = MatrixRing(QQ, dim)
            spec = GenSpec(QQ, dim, seed=campaign.DEFAULT_SEED)
            for i in range(campaign.DEFAULT_TRIALS):
                kind = kinds[i % len(kinds)]
                pair = campaign._pair(kind, ctx, spec, trial_rng(campaign.DEFAULT_SEED, i))
                tally["positive" if kind in positive[theorem] else "unrestricted"] += 1
                for lhs, rhs in _both_sides(theorem, pair):
                    tally["both true" if lhs and rhs else "both false" if not (lhs or rhs) else "mixed"] += 1
                    if lhs != rhs:
                        exceptions.append((dim, i, lhs, rhs))
        ok &= tally["positive"] >= 200 and tally["unrestricted"] >= 200 and not exceptions
        ok &= tally["both true"] > 0 and tally["both false"] > 0
        lines.append(f"{theorem}: {dict(tally)}, {len(exceptions)} exceptions")
    assert report(capsys, 6, ok, "; ".join(lines)), lines


def test_7_axiom_self_validation(capsys):
    rng = random.Random(20240607)
    f = GF(7)
    ctx = MatrixRing(f, 5)
    bad = 0
    for _ in range(1000):
        a = Matrix(5, 5, [rng.randrange(7) for _ in range(25)], f)
        r = drazin(a)
        sq = drazin(a * a).d
        if not (is_drazin_pair(a, r.d, ctx) and sq == r.d * r.d and r.pi * r.pi == r.pi):
            bad += 1
    assert report(capsys, 7, bad == 0, f"1000 GF(7) 5x5 matrices, {bad} violations"), bad


def _cli(*argv):
    return subprocess.run(
        [sys.executable, "-m", "drazinkit.cli", *argv], capture_output=True, text=True
    )


def test_8_determinism(capsys):
    invocations = [
        ("verify", "--theorem", "T3.5", "--domain", "GF:7", "--dim", "4", "--trials", "100", "--seed", "1"),
        ("verify", "--theorem", "T3.7", "--domain", "GF:2", "--dim", "3", "--trials", "100"),
        ("verify", "--all", "--domain", "Q", "--dim", "2", "--trials", "20", "--seed", "9"),
    ]
    elapsed = re.compile(r'"elapsed_ms": [0-9.e+-]+')
    same = 0
    for argv in invocations:
        a, b = _cli(*argv), _cli(*argv)
        json.loads(a.stdout)
        if a.returncode == b.returncode and elapsed.sub("", a.stdout) == elapsed.sub("", b.stdout):
            same += 1
    ok = same == len(invocations)
    assert report(capsys, 8, ok, f"{same}/{len(invocations)} invocations byte-identical modulo elapsed")
