import json
from fractions import Fraction

import pytest

from twistsig.errors import TwistSigError
from twistsig.manifolds import catalog_manifold, product_manifold
from twistsig.verify import (
    CheckReport, check_divisibility_suite, check_lemma_2_1, check_lemma_2_2,
    check_lemma_2_3, check_theorem_0_1, check_witten_fit, default_specs, invariant_suite,
    level2_fit_checks, sig_t_expansion_checks, worked_examples, render_report, run_all, run_suite,
    string_sweep_specs, summarize,
)

M3 = product_manifold([catalog_manifold("M08")] * 3)
X = product_manifold([catalog_manifold(n) for n in ("B8", "HP2", "HP2")])


def test_statuses():
    assert CheckReport("a", "x", Fraction(1), Fraction(1)).status == "PASS"
    assert CheckReport("a", "x", Fraction(1), Fraction(2)).status == "FAIL"
    assert CheckReport("a", "x", Fraction(2), Fraction(0), 3, control=True).status == "XFAIL"
    xpass = CheckReport("a", "x", Fraction(3), Fraction(0), 3, control=True)
    assert xpass.status == "XPASS" and not xpass.ok
    # non-integers are never congruent
    assert not CheckReport("a", "x", Fraction(1, 2), Fraction(1, 2), 3).passed


def test_mod3_congruence_on_examples():
    r = check_theorem_0_1(M3)
    assert r.passed and not r.control
    c = check_theorem_0_1(X)
    assert c.status == "XFAIL" and (c.left, c.right) == (14336, 0)
    with pytest.raises(TwistSigError):
        check_theorem_0_1(catalog_manifold("B8"))


def test_divisibility():
    ids = {r.check_id: r for r in check_divisibility_suite(M3)}
    assert set(ids) == {"sig_l2t_mod3", "index_t_24", "sig_l2t_mod9"}
    assert all(r.status == "PASS" for r in ids.values())
    assert [r.status for r in check_divisibility_suite(X)] == ["XFAIL"]
    assert check_divisibility_suite(catalog_manifold("HP2"))[0].check_id == "sig_t_2048"


def test_identities():
    assert check_lemma_2_1(M3).passed
    r = check_lemma_2_1(X)
    assert r.status == "XFAIL" and r.left - r.right == 1
    assert check_lemma_2_2(M3).passed
    with pytest.raises(TwistSigError):
        check_lemma_2_2(X)
    assert all(r.passed for r in level2_fit_checks(M3))
    for m in (M3, X):
        assert check_lemma_2_3(m).passed
        assert all(r.passed for r in sig_t_expansion_checks(m))
    assert check_lemma_2_3(X).left == 2048
    assert check_witten_fit(X).status == "XFAIL"


def test_examples_and_invariants_pass():
    assert all(r.ok for r in worked_examples())
    assert all(r.ok for r in invariant_suite())


def test_run_all():
    reports = run_all(default_specs())
    assert reports and all(r.ok for r in reports)
    assert run_all(default_specs()) == reports  # reproducible
    only = run_all([])
    assert [r.check_id for r in only] == [r.check_id for r in invariant_suite()]


def test_order_independence_of_verdicts():
    a = [(r.check_id, r.inputs, r.status) for r in run_all([M3], 3)]
    b = [(r.check_id, r.inputs, r.status) for r in run_all([M3], 5)]
    assert a == b


def test_errors_are_aggregated():
    bad = catalog_manifold("HP2")
    reports = run_suite("thm01", [bad, M3])
    assert [r.check_id for r in reports] == ["thm01"]
    with pytest.raises(ValueError):
        run_suite("nope")


def test_sweep_specs():
    specs = string_sweep_specs()
    assert len(specs) == 35 and all(s.string for s in specs)
    assert [s.name for s in string_sweep_specs(seed=3)] == [s.name for s in string_sweep_specs(seed=3)]


def test_rendering():
    assert render_report([]) == "# 0 checks: 0 pass, 0 xfail, 0 fail, 0 xpass"
    line = render_report([check_theorem_0_1(X)]).splitlines()[1]
    assert line.startswith("XFAIL thm01: 2 ≠ 0 (mod 3) [non-string control]")
    one = render_report([check_lemma_2_3(X)]).splitlines()
    assert len(one) == 2 and one[1].startswith("PASS lemma23: 2048 = 2048")
    doc = json.loads(render_report([check_theorem_0_1(M3), check_lemma_2_1(M3)], "json"))
    assert doc[0]["modulus"] == 3 and doc[0]["passed"] is True
    assert set(doc[1]) >= {"check_id", "passed", "left", "right"}
    assert summarize([check_theorem_0_1(X)])["XFAIL"] == 1
