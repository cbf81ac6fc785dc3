"""End-to-end acceptance checks, one test per criterion.

Each test runs the relevant checks through the same runner as the command
line, prints a single pass/fail line with the elapsed time and then asserts
exact residuals, sample sizes and the runtime budget.
"""

import time

import pytest

from bvglue.cli import SuiteConfig, run

pytestmark = pytest.mark.acceptance


def _report(capsys, number, title, suite, names=None, limit=None, expect=None):
    start = time.perf_counter()
    rep = run(SuiteConfig(suite), only=names)
    elapsed = time.perf_counter() - start
    counts = {}
    for r in rep.records:
        base = r.name.split("[")[0]
        counts[base] = counts.get(base, 0) + r.instances
    problems = [f"{r.name}: {r.residual[:120]}" for r in rep.records if not r.passed]
    for name, n in (expect or {}).items():
        if counts.get(name, 0) < n:
            problems.append(f"{name}: {counts.get(name, 0)} instances, need {n}")
    if limit is not None and elapsed > limit:
        problems.append(f"took {elapsed:.1f} s, budget {limit} s")
    with capsys.disabled():
        status = "PASS" if not problems else "FAIL"
        print(f"\ncriterion {number} ({title}): {status} in {elapsed:.1f} s, "
              f"{len(rep.records)} records")
    assert not problems, "\n".join(problems)
    return rep


def test_superlinear_algebra(capsys):
    _report(capsys, 1, "Berezinian identities", "superlinalg",
            ["ber-mult", "ber-quadric-square", "ber-half-mult"], limit=30,
            expect={"ber-mult": 200, "ber-quadric-square": 100, "ber-half-mult": 100})


BV_CHECKS = ["delta-square", "antibracket-formula", "antibracket-antisymmetry", "antibracket-jacobi",
             "hamlift-commutator", "hamlift-leibniz", "hamlift-bracket", "hamlift-delta", "flow-law"]


def test_bv_calculus(capsys):
    _report(capsys, 2, "BV calculus", "bv", BV_CHECKS, limit=60,
            expect={name: 100 for name in BV_CHECKS})


def test_qme_tower(capsys):
    _report(capsys, 3, "master equation tower", "bv", ["qme-tower"], expect={"qme-tower": 50})


def test_simplex_calculus(capsys):
    rep = _report(capsys, 4, "simplex calculus", "simplex", ["stokes", "dirichlet"],
                  expect={"stokes": 300, "dirichlet": 1})
    assert sorted(r.name for r in rep.records if r.name.startswith("stokes")) == \
        ["stokes[k=1]", "stokes[k=2]", "stokes[k=3]"]


def test_descent(capsys):
    _report(capsys, 5, "descent", "descent",
            ["lemma-eta-k0", "lemma-eta-k1", "lemma-eta-k2", "ms-theorem", "trace-coboundary",
             "pou-independence"], limit=300,
            expect={"ms-theorem": 25, "trace-coboundary": 8, "pou-independence": 2,
                    "lemma-eta-k0": 1, "lemma-eta-k1": 1, "lemma-eta-k2": 1})


def test_equivariance(capsys):
    rep = _report(capsys, 6, "equivariance", "descent",
                  ["mc-equation", "conjugation-identity", "equivariant-closedness"],
                  expect={"conjugation-identity": 50, "mc-equation": 1})
    names = {r.name for r in rep.records}
    assert {"equivariant-closedness[abelian]", "equivariant-closedness[affine]"} <= names


def test_clifford(capsys):
    rep = _report(capsys, 7, "Clifford and light-cone", "clifford", limit=120,
                  expect={"lemma-lightcone": 1, "g-group-law": 1, "g-conjugation": 1,
                          "p-plus-flow": 1, "lightcone-endpoints": 1})
    assert sum(r.name.startswith("clifford-relation[") for r in rep.records) == 100


def test_superparticle(capsys):
    rep = _report(capsys, 8, "superparticle", "superparticle",
                  ["lemma-fixed", "tau-independence", "eta-plus-minus", "cover-positivity",
                   "cover-property", "partition-sum"],
                  expect={"cover-positivity": 1000, "partition-sum": 100})
    names = {r.name for r in rep.records}
    assert {"lemma-fixed[L(m+)]", "lemma-fixed[L(m-)]", "lemma-fixed[L(tau)]"} <= names


def test_zeta(capsys):
    _report(capsys, 9, "Bernoulli and zeta values", "zeta",
            ["bernoulli-b2", "bernoulli-reflection", "zeta(-1,1)=-1/12", "L(-1)=0"])


def test_determinism(capsys):
    texts, times = [], []
    for _ in range(2):
        start = time.perf_counter()
        rep = run(SuiteConfig("all"))
        times.append(time.perf_counter() - start)
        texts.append(rep.render())
    ok = texts[0] == texts[1] and rep.passed and max(times) <= 900
    with capsys.disabled():
        print(f"\ncriterion 10 (determinism): {'PASS' if ok else 'FAIL'} in "
              f"{times[0]:.1f} s and {times[1]:.1f} s, {rep.summary()['checks']} records")
    assert texts[0] == texts[1]
    assert rep.passed
    assert max(times) <= 900
