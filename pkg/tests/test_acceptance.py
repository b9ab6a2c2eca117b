"""Acceptance suite: one PASS/FAIL line per criterion.

Tolerances are pinned here: exact rational equality everywhere except the
network star, where the caption value is only given to within 1.
"""

import csv
import dataclasses
import io
import random
import subprocess
import sys
import time
from fractions import Fraction

from galilean import expr as ex
from galilean import corpus as cp
from galilean.intelligibility import (
    ComparisonVerdict, fuse_constants, score, significantly_different,
)
from galilean.netintel import NetworkSpec, nn_asymptotic_score, nn_empirical_constants, nn_score
from galilean.ontology import (
    AnnotationSet, Concept, ConceptKind, StatementRegion, classify_statement, prepare,
)

import props
from fusion_oracle import oracle_group_count
from randexpr import CONSTANTS, VARIABLES, annotations, node_count, random_expression

RUNTIME_LIMIT_S = 5.0
STAR_TOLERANCE = 1
RANDOM_CASES = 10_000
SEED = 7

# Published values for the analytic rows, keyed by corpus entry.
ANALYTIC = {
    "newton_first_law": Fraction(1),
    "newton_second_law": Fraction(1),
    "newton_third_law": Fraction(1),
    "navier_stokes_compressible": Fraction(1),
    "newton_gravitation": Fraction(3, 4),
    "schrodinger": Fraction(2, 3),
    "navier_stokes_incompressible": Fraction(1, 2),
    "zipf": Fraction(1, 2),
    "moore": Fraction(1, 2),
    "reynolds_stress": Fraction(1, 2),
    "mass_energy": Fraction(1, 2),
    "zipf_mandelbrot": Fraction(0),
    "nlte_rate": Fraction(0),
    "k_epsilon": Fraction(-1, 3),
}
EXPECTED_SCATTER_POINTS = 12


def verdict(criterion, ok, detail):
    print(f"\ncriterion {criterion}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def _report():
    start = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "galilean", "corpus", "report"],
                          capture_output=True, text=True, check=False)
    elapsed = time.perf_counter() - start
    rows = {r["name"]: r for r in csv.DictReader(io.StringIO(proc.stdout))}
    return proc, elapsed, rows


def _frac(row):
    return Fraction(int(row["I_num"]), int(row["I_den"]))


def test_criterion_1_table_reproduction():
    proc, elapsed, rows = _report()
    wrong = {n: rows.get(n, {}).get("I_num") for n, want in ANALYTIC.items()
             if n not in rows or _frac(rows[n]) != want}
    ok = proc.returncode == 0 and not wrong and elapsed < RUNTIME_LIMIT_S
    verdict(1, ok, f"{len(ANALYTIC) - len(wrong)}/{len(ANALYTIC)} analytic rows exact, "
                   f"exit {proc.returncode}, {elapsed:.2f}s (limit {RUNTIME_LIMIT_S}s)")


def test_criterion_2_discrepancies_flagged():
    proc, _, rows = _report()
    sa = rows["spalart_allmaras"]
    checks = [
        proc.returncode == 0,
        (int(sa["N_E"]), int(sa["N_O"]), _frac(sa)) == (8, 4, Fraction(-1)),
        sa["match"] == "paper-discrepancy" and "-2" in sa["warnings"],
        rows["navier_stokes_compressible"]["match"] == "paper-discrepancy",
        int(rows["navier_stokes_compressible"]["N_O"]) == 6,
        rows["alphafold2"]["match"] == "paper-discrepancy",
        all(r["match"] in ("true", "paper-discrepancy") for r in rows.values()),
    ]
    verdict(2, all(checks), f"checks passed {sum(checks)}/{len(checks)}; "
                            f"turbulence row I={_frac(sa)} flagged={sa['match']}")


def test_criterion_3_network_estimator():
    af1 = NetworkSpec("af1", 660, 2)
    af2 = NetworkSpec("af2", 2000, 2)
    floor_ok = all(nn_empirical_constants(NetworkSpec("n", n_h, 2)) >= 4
                   for n_h in range(1, 10**6 + 1))
    star = nn_score(af2)
    checks = [
        nn_empirical_constants(af1) == 1322,
        abs(star - (-2000)) <= STAR_TOLERANCE,
        # the criterion also quotes -2001; both lie within the pinned tolerance
        abs(star - (-2001)) <= STAR_TOLERANCE,
        nn_asymptotic_score(af2).applicable and nn_asymptotic_score(af2).value == -2000,
        floor_ok,
    ]
    verdict(3, all(checks), f"N_E(660)={nn_empirical_constants(af1)}, I(2000, 2)={star}, "
                            f"floor N_E>=4 over N_h in [1, 10^6]: {floor_ok}")


def test_criterion_4_figure_dataset(tmp_path):
    out = tmp_path / "figure4.csv"
    proc = subprocess.run([sys.executable, "-m", "galilean", "corpus", "figure4",
                           "--out", str(out), "--n-o", "2,3,5,10,100", "--n-h-max", "2500"],
                          capture_output=True, text=True, check=False)
    rows = list(csv.DictReader(out.open(encoding="utf-8"))) if out.exists() else []
    curves = {}
    for r in rows:
        if r["series"] == "curve":
            curves.setdefault(int(r["N_O"]), []).append((int(r["N_h"]), Fraction(r["I_decimal"])))
    monotone = bool(curves) and all(
        all(a[1] > b[1] for a, b in zip(pts, pts[1:])) and
        all(a[0] < b[0] for a, b in zip(pts, pts[1:]))
        for pts in curves.values())
    # exact monotonicity, independent of the rounded CSV column
    exact_monotone = all(
        nn_score(NetworkSpec("c", n_h + 1, n_o)) < nn_score(NetworkSpec("c", n_h, n_o))
        for n_o in curves for n_h in range(1, 2500))
    scatter = [r for r in rows if r["series"] == "statement" and r["label"] in ANALYTIC
               and Fraction(-1, 3) <= Fraction(r["I_decimal"]) <= 1]
    stars = [r for r in rows if r["series"] == "star"]
    star_ok = len(stars) == 1 and abs(Fraction(stars[0]["I_decimal"]) + 2000) <= STAR_TOLERANCE
    ok = (proc.returncode == 0 and monotone and exact_monotone and star_ok
          and len(scatter) == EXPECTED_SCATTER_POINTS)
    verdict(4, ok, f"curves monotone={monotone and exact_monotone} ({len(curves)} N_O values), "
                   f"star={star_ok}, scatter points in [-1/3, 1]: {len(scatter)} "
                   f"(criterion asks for {EXPECTED_SCATTER_POINTS}; "
                   f"the analytic rows number {len(ANALYTIC)})")


def test_criterion_5_fusion_oracle():
    ann = annotations()
    rng = random.Random(SEED)
    agree = total = 0
    for _ in range(1000):
        e = random_expression(rng, 7)
        assert node_count(e) <= 7
        stmt = ex.Statement(ex.Symbol("x"), e)
        total += 1
        agree += len(fuse_constants(prepare(stmt, ann))) == oracle_group_count(stmt, set(CONSTANTS))
    verdict(5, agree == total, f"{agree}/{total} random expressions agree with the oracle")


def _random_statements(rng, n, need_variable=False):
    out = []
    while len(out) < n:
        stmt = ex.Statement(random_expression(rng, 3), random_expression(rng, 9))
        if need_variable and not ex.free_symbols(stmt) & set(VARIABLES):
            continue
        out.append(stmt)
    return out


def _entry_result(name):
    entry = cp.load_entry(cp.bundled_corpus_dir() / name)
    if entry.network is not None:
        return entry.network
    return score(entry.statement, entry.annotations, name)


def test_criterion_6_property_suites():
    rng = random.Random(SEED)
    ann = annotations()
    results = {}

    def run(label, fn, cases):
        try:
            for case in cases:
                fn(*case)
            results[label] = True
        except AssertionError:
            results[label] = False

    grid = [(e, o) for e in range(100) for o in range(1, 101)]
    run("I<=1 and I=1 iff N_E=0", props.check_upper_bound, grid)
    run("monotone in N_E and N_O", props.check_monotone, grid)
    grounded = _random_statements(rng, RANDOM_CASES, need_variable=True)
    run("fusion idempotence", props.check_idempotent,
        [(s, ann) for s in _random_statements(rng, RANDOM_CASES)])
    run("rename invariance", props.check_rename, [(s, ann) for s in grounded])
    run("duplicate occurrence invariance", props.check_duplicate, [(s, ann) for s in grounded])
    run("parser round trip", props.check_round_trip,
        [(random_expression(rng, 15),) for _ in range(RANDOM_CASES)])

    def classify_case(stmt):
        flags = [rng.random() < 0.5 for _ in ann.concepts]
        concepts = tuple(dataclasses.replace(c, measurable=f)
                         if c.kind is not ConceptKind.MATHEMATICAL_CONSTANT else c
                         for c, f in zip(ann.concepts, flags))
        props.check_classify(stmt, dataclasses.replace(ann, concepts=concepts))
    run("classify total, empirical needs 2 measurable", classify_case,
        [(s,) for s in _random_statements(rng, RANDOM_CASES)])
    pairs = [((ea, oa), (eb, ob)) for ea in range(10) for oa in range(1, 11)
             for eb in range(10) for ob in range(1, 11)]
    run("comparison antisymmetric and reflexive", props.check_comparison, pairs)

    worked = [
        significantly_different(_entry_result("mass_energy"), _entry_result("alphafold2"))
        is ComparisonVerdict.FIRST_MORE_TRANSPARENT,
        significantly_different(_entry_result("newton_second_law"),
                                _entry_result("newton_gravitation"))
        is ComparisonVerdict.NOT_SIGNIFICANT,
    ]
    results["worked verdicts"] = all(worked)
    failed = [k for k, v in results.items() if not v]
    verdict(6, not failed, f"{len(results) - len(failed)}/{len(results)} suites hold"
                           + (f"; failing: {', '.join(failed)}" if failed else ""))


def test_criterion_7_classification_spot_checks():
    V, E, M = (ConceptKind.VARIABLE, ConceptKind.EMPIRICAL_CONSTANT,
               ConceptKind.MATHEMATICAL_CONSTANT)
    pure = AnnotationSet((Concept("real_number", M, False),),
                         {"x": "real_number", "y": "real_number"})
    drake_concepts = [("civilisations", V), ("star_formation", V), ("planet_fraction", V),
                      ("habitable", V), ("life_fraction", V), ("intelligence_fraction", V),
                      ("signal_fraction", V), ("lifetime", E)]
    drake = AnnotationSet(
        tuple(Concept(c, k, False) for c, k in drake_concepts),
        dict(zip(("N", "R", "f_p", "n_e", "f_l", "f_i", "f_c", "L"),
                 (c for c, _ in drake_concepts))))
    newton = cp.load_entry(cp.bundled_corpus_dir() / "newton_second_law")

    got = [
        classify_statement(prepare(ex.parse_statement("x = y^2"), pure)),
        classify_statement(prepare(ex.parse_statement("N = R*f_p*n_e*f_l*f_i*f_c*L"), drake)),
        classify_statement(prepare(newton.statement, newton.annotations)),
    ]
    want = [StatementRegion.PURE_MATHEMATICAL, StatementRegion.ONTOLOGICAL_NON_EMPIRICAL,
            StatementRegion.EMPIRICAL_MATHEMATICAL]
    verdict(7, got == want, ", ".join(r.value for r in got))
