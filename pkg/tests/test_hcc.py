import json

import pytest

from bieberbach import catalog
from bieberbach import linalg as la
from bieberbach.errors import NotInjective
from bieberbach.hcc import (binom_bound_check, full_report, report_to_dict, report_to_text,
                            splitting_subgroup, sum_bound_check)
from bieberbach.topology import _presentation

from conftest import make


def test_binom_bounds():
    assert all(p for *_, p in binom_bound_check(2, (1, 2, 1)))
    res = binom_bound_check(2, (1, 1, 1))
    assert [p for *_, p in res] == [True, False, True]
    assert res[1] == (1, 2, 1, False)
    assert all(p for *_, p in binom_bound_check(1, (1, 1, 1, 1)))


def test_sum_bounds():
    assert sum_bound_check(0, (1, 0, 0, 1)) == (1, 2, True)
    assert sum_bound_check(3, (1, 3, 3, 1)) == (8, 8, True)
    assert sum_bound_check(2, (1, 1, 0)) == (4, 2, False)


def test_splitting_torus():
    s = splitting_subgroup(make(2), None, la.lattice(2, la.identity(2)))
    assert s.index == 1 and s.verified_direct_product


def test_splitting_klein(klein):
    s = splitting_subgroup(klein, None, la.lattice(2, [(1, 0)]))
    assert s.index == 4 and s.verified_direct_product
    # an index-4 subgroup of the Klein bottle group that is a product is Z^2
    assert (s.abelian_free_rank, s.abelian_torsion) == (2, ())
    pres = _presentation(klein)
    for w in s.generators:
        pres.evaluate(w)  # every Schreier generator is a word in π


def test_splitting_keep_torsion(klein):
    s = splitting_subgroup(klein, None, la.lattice(2, [(1, 0)]), keep_torsion=True)
    assert s.index == 2 and s.verified_direct_product


def test_splitting_not_injective(klein):
    with pytest.raises(NotInjective):
        splitting_subgroup(klein, None, la.lattice(2, [(0, 1)]))


def test_splitting_with_torsion_component():
    # in B4 the torus lattice maps to an element with nonzero torsion part
    g = catalog.get("B4").group
    s = splitting_subgroup(g, None, la.lattice(3, [(1, 0, 0)]))
    assert s.verified_direct_product


def test_report_klein(klein):
    rep = full_report(klein)
    assert rep.passed
    d = report_to_dict(rep)
    assert d["h1"] == {"free_rank": 1, "torsion": [2]}
    assert d["betti"] == [1, 1, 0]
    assert d["k"] == 1 and d["center_rank"] == 1
    assert d["hcc"]["homologically_injective"] == "pass"
    assert d["splitting_subgroup"]["index"] == 4
    assert "result: PASS" in report_to_text(rep)


def test_report_hw(hw):
    rep = full_report(hw)
    assert rep.passed
    d = report_to_dict(rep)
    assert d["k"] == 0 and d["betti"] == [1, 0, 0, 1]
    assert d["certificate"] is None and d["splitting_subgroup"] is None
    assert d["hcc"]["homologically_injective"] == "not-applicable"
    assert d["hcc"]["sum_bound"] == {"bound": 1, "betti_sum": 2, "pass": True}


def test_report_torus4():
    rep = full_report(make(4, name="torus4"))
    assert rep.passed
    assert all(c == b for _, c, b, _ in rep.hcc.per_degree)
    assert rep.hcc.sum_bound == (16, 16, True)


def test_report_invalid_group():
    rep = full_report(make(2, [((-1, 0), (0, -1))], [(0, 0)]))
    assert not rep.passed
    d = report_to_dict(rep)
    assert d["h1"] is None
    bad = [c for c in d["validation"] if c["passed"] is False]
    assert bad[0]["name"] == "torsion_free" and "witness" in bad[0]
    json.dumps(d)


@pytest.mark.parametrize("name", catalog.list())
def test_catalog_reports_pass(name):
    rep = full_report(catalog.get(name).group)
    assert rep.passed, rep.failures
