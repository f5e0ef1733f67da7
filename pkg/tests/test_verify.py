import json

import numpy as np
import pytest

from projcalc.errors import UnknownSuite
from projcalc.io import dumps
from projcalc.numeric import Tolerances
from projcalc.verify import (GROUPS, SUITES, check_ids, run_suite,
                             shipped_spectrum_fixtures)


def test_ids_unique():
    ids = check_ids("all")
    assert len(ids) == len(set(ids))
    assert {g.suite for g in GROUPS} == set(SUITES)


def test_group_names_unique():
    names = [g.name for g in GROUPS]
    assert len(names) == len(set(names))


@pytest.mark.parametrize("suite", SUITES)
def test_each_suite_passes_small(suite):
    report = run_suite(suite, seed=7, trials=8, dim_max=8)
    failed = [c for c in report["checks"] if not c["pass"]]
    assert not failed, failed
    assert report["summary"]["total"] == len(check_ids(suite))


def test_report_shape():
    report = run_suite("support", seed=1, trials=10, dim_max=12)
    assert len(report["checks"]) >= 5
    ids = [c["id"] for c in report["checks"]]
    assert ids == sorted(ids)
    s = report["summary"]
    assert s["passed"] + s["failed"] == s["total"] == len(ids)
    for c in report["checks"]:
        assert c["pass"] == (c["residual"] is not None and c["residual"] <= c["bound"])


def test_deterministic():
    a = run_suite("geometry", seed=3, trials=6, dim_max=8)
    b = run_suite("geometry", seed=3, trials=6, dim_max=8)
    a.pop("wall_time"), b.pop("wall_time")
    assert dumps(a) == dumps(b)
    c = run_suite("geometry", seed=4, trials=6, dim_max=8)
    c.pop("wall_time")
    assert dumps(c) != dumps(a)


def test_tight_tolerance_fails():
    tol = Tolerances(eq=1e-30, cluster=1e-7, wellsup=1e-9, zero=1e-13)
    report = run_suite("support", seed=0, trials=3, dim_max=6, tol=tol)
    assert report["summary"]["failed"] > 0


def test_unknown_suite():
    with pytest.raises(UnknownSuite):
        run_suite("bogus")


@pytest.mark.parametrize("kwargs", [{"dim_max": 3}, {"trials": 0}])
def test_bad_arguments(kwargs):
    with pytest.raises(ValueError):
        run_suite("support", **kwargs)


def test_shipped_fixtures_load():
    fixtures = shipped_spectrum_fixtures()
    assert len(fixtures) == 20
    for pi, R, Q in fixtures:
        assert R.shape == Q.shape == (pi.source.total_dim,) * 2
        assert np.allclose(R @ R, R, atol=1e-12)


def test_report_serialises():
    report = run_suite("homotopy", seed=0, trials=2, dim_max=6)
    assert json.loads(dumps(report))["suite"] == "homotopy"
