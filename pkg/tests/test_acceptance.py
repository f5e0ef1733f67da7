"""Acceptance criteria, one test each, at their stated tolerances.

Each test records a one-line PASS/FAIL summary, printed at the end of the
pytest run (and immediately with ``-s``).
"""
import json
import shutil
import subprocess
import sys
import time

from conftest import ACCEPTANCE
from projcalc.verify import run_suite

SEED = 2024


def record(number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {title} ({detail})"
    ACCEPTANCE.append((number, line))
    print(line)
    return ok


def checks(suite, trials, ids, dim_max=12):
    report = run_suite(suite, SEED, trials, dim_max, only=set(ids))
    out = {c["id"]: c for c in report["checks"]}
    missing = set(ids) - set(out)
    assert not missing, missing
    return out, report["wall_time"]


def within(entry, bound, trials=None):
    r = entry["residual"]
    ok = r is not None and r <= bound and entry["errors"] == 0
    if trials is not None:
        ok = ok and entry["trials"] + entry["skipped"] >= trials and entry["trials"] > 0
    return ok


def worst(res, ids):
    vals = [res[i]["residual"] for i in ids]
    return "inf" if None in vals else f"max residual {max(vals):.2e}"


def test_criterion_01_intertwining():
    res, wall = checks("support", 300, ["support.intertwining"])
    ok = within(res["support.intertwining"], 1e-7, 300) and wall < 10
    assert record(1, "intertwining identity, 300 trials",
                  ok, f"{worst(res, ['support.intertwining'])}, {wall:.1f} s")


def test_criterion_02_quasi_inverse():
    ids = ["support.quasi-inverse-laws", "support.quasi-inverse-norm"]
    res, _ = checks("support", 300, ids)
    ok = all(within(res[i], 1e-7, 300) for i in ids)
    assert record(2, "quasi-inverse laws and norm identity, 300 trials",
                  ok, worst(res, ids))


def test_criterion_03_two_projections():
    ids = ["geometry.support-distance", "geometry.inverse-norm",
           "geometry.join-identity", "geometry.product-support-continuity",
           "geometry.join-continuity", "geometry.corner-bound",
           "geometry.split-bound", "geometry.two-part-bound"]
    res, _ = checks("geometry", 300, ids)
    ok = all(within(res[i], 1e-7, 300) for i in ids)
    assert record(3, "two-projection identities and bounds, 300 trials each",
                  ok, worst(res, ids))


def test_criterion_04_projection_calculus():
    ids = ["calculus.compression", "calculus.projection-distance",
           "calculus.unitary-distance"]
    res, _ = checks("calculus", 500, ids)
    ok = all(within(res[i], 1e-7, 500) for i in ids)
    assert record(4, "projection calculus compression and distances, 500 trials",
                  ok, worst(res, ids))


def test_criterion_05_homotopy():
    ids = ["homotopy.endpoints", "homotopy.projections",
           "homotopy.mesh-refinement"]
    res, _ = checks("homotopy", 50, ids)
    ok = all(within(res[i], 1e-7, 50) for i in ids)
    assert record(5, "homotopy endpoints, projections and refinement, 50 fixtures",
                  ok, worst(res, ids))


def test_criterion_06_norm_lift():
    ids = ["lifting.norm-exact", "lifting.norm-quotient"]
    res, _ = checks("lifting", 200, ids + ["lifting.norm-two-block"])
    ok = all(within(res[i], 1e-7, 200) for i in ids)
    ok = ok and within(res["lifting.norm-two-block"], 1e-7)
    assert record(6, "norm-exact lift, 200 fixtures plus two-block example",
                  ok, worst(res, ids + ["lifting.norm-two-block"]))


def test_criterion_07_spectrum_lift():
    ids = ["lifting.spectrum-exact", "lifting.spectrum-shipped"]
    res, _ = checks("lifting", 200, ids + ["lifting.spectrum-shipped-stalls"])
    ok = within(res["lifting.spectrum-exact"], 1e-4, 200)
    ok = ok and within(res["lifting.spectrum-shipped"], 1e-4)
    stalls = res["lifting.spectrum-shipped-stalls"]["residual"]
    ok = ok and stalls == 0
    assert record(7, "spectrum-exact lift, 200 fixtures, no stalls on shipped set",
                  ok, f"{worst(res, ids)}, stalls {stalls}")


def test_criterion_08_isometry_lift():
    res, _ = checks("lifting", 100, ["lifting.isometry-square-norm",
                                     "lifting.isometry-spectrum"])
    ok = within(res["lifting.isometry-square-norm"], 1e-7, 100)
    ok = ok and within(res["lifting.isometry-spectrum"], 1e-4, 100)
    assert record(8, "partial isometry lifts, 100 fixtures each", ok,
                  f"square norm {res['lifting.isometry-square-norm']['residual']:.2e}, "
                  f"spectrum {res['lifting.isometry-spectrum']['residual']:.2e}")


def test_criterion_09_excision():
    res, _ = checks("states", 200, ["states.excision", "states.excision-fixes-state",
                                    "states.excision-rank",
                                    "states.approximate-excision"])
    ok = within(res["states.excision"], 1e-6, 200)
    ok = ok and within(res["states.excision-fixes-state"], 1e-7, 200)
    ok = ok and res["states.excision-rank"]["residual"] == 0
    # residual is the worst ratio to the 7 eps bound over eps in {0.1, 0.01}
    ratio = res["states.approximate-excision"]["residual"]
    ok = ok and within(res["states.approximate-excision"], 1.0)
    assert record(9, "excision on 200 fixtures and 7 eps cut baseline", ok,
                  worst(res, ["states.excision", "states.excision-fixes-state"])
                  + f", cut ratio to 7 eps {ratio:.3f}")


def test_criterion_10_transitivity():
    ids = ["states.matrix-unit-laws", "states.multi-block-cross"]
    res, _ = checks("states", 100, ids + ["states.hand-units"])
    ok = all(within(res[i], 1e-7) for i in ids)
    ok = ok and within(res["states.hand-units"], 1e-9)
    assert record(10, "matrix-unit laws, hand system, multi-block products", ok,
                  worst(res, ids + ["states.hand-units"]))


def _verify_cmd():
    exe = shutil.which("projcalc")
    base = [exe] if exe else [sys.executable, "-m", "projcalc.cli"]
    return base + ["verify", "--suite", "all", "--seed", "42", "--trials", "500",
                   "--dim-max", "12"]


def test_criterion_11_full_run():
    texts, times, codes = [], [], []
    for _ in range(2):
        start = time.perf_counter()
        proc = subprocess.run(_verify_cmd(), capture_output=True, text=True,
                              check=False)
        times.append(time.perf_counter() - start)
        codes.append(proc.returncode)
        report = json.loads(proc.stdout)
        report.pop("wall_time")
        texts.append(json.dumps(report, sort_keys=True))
    stable = texts[0] == texts[1]
    ok = codes == [0, 0] and stable and max(times) < 300
    summary = json.loads(texts[0])["summary"]
    assert record(11, "full verify run, seed 42, 500 trials", ok,
                  f"exit {codes[0]}, {summary['passed']}/{summary['total']} checks, "
                  f"{max(times):.1f} s, byte-stable {stable}")
