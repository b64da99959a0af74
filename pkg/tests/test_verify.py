import dataclasses
import json

import pytest

from motzkin.bijections import (
    BijectionId, bump_root, exchange_labels, transfer_tokens,
)
from motzkin.enumeration import ClassSpec
from motzkin.paths import Pattern, statistics
from motzkin.trees import ROOT, flip, left_leaf_correspondence, path_to_tree, right_leaf_correspondence, tree_to_path
from motzkin.verify import (
    DEFAULT_CAPS, SUITE_ALL, CheckId, Toolkit, equidistribution, run_all, run_check,
)


# --------------- deliberately broken implementations ---------------

def b2_without_first_leaf_token(p):
    t = flip(path_to_tree(p))
    if not t.is_leaf:
        t = exchange_labels(t, [(a, b) for a, b in left_leaf_correspondence(t).items() if b != ROOT])
    return tree_to_path(t)


def b2_bumping_root_then_swapping_first_leaf(p):
    t = bump_root(flip(path_to_tree(p)), 1)
    if not t.is_leaf:
        t = exchange_labels(t, left_leaf_correspondence(t).items())
    return tree_to_path(t)


def b4_with_right_leaf_correspondence(p):
    t = bump_root(flip(path_to_tree(p)), 1)
    if not t.is_leaf:
        t = transfer_tokens(t, ((node, leaf) for leaf, node in right_leaf_correspondence(t).items()))
    return tree_to_path(t)


def stats_ignoring_peaks(p):
    # peaks no longer count as plateaus of length 0
    return dataclasses.replace(statistics(p), peaks=0)


# --------------- reports ---------------

def test_bij1_case_count():
    report = run_check(CheckId.BIJ1, 8)
    assert report.cases == 539
    assert report.passed
    assert report.failures == []


def test_roundtrip_at_zero():
    report = run_check("roundtrip", 0)
    assert report.cases == 1
    assert report.passed
    assert report.n_range == (0, 0)


@pytest.mark.parametrize("check", list(CheckId))
def test_checks_pass_on_small_lengths(check):
    report = run_check(check, 5)
    if check is CheckId.INVOL_LITERAL:
        assert not report.passed
    else:
        assert report.passed, report.failures[:3]
        assert report.cases > 0


def test_literal_involution_rule_is_caught():
    report = run_check(CheckId.INVOL_LITERAL, 6)
    assert not report.passed
    hit = [f for f in report.failures if f.input == "UFUDFD"]
    assert hit and hit[0].expected == "UFFUDD" and hit[0].actual == "UFUDD"


def test_failures_are_truncated_in_input_order():
    report = run_check(CheckId.INVOL_LITERAL, 8, max_failures=3)
    assert len(report.failures) == 3
    assert report.failure_count > 3
    assert report.failures[0].input == "UFUDD"


def test_report_json_schema_and_determinism():
    first = run_check(CheckId.BIJ2, 5)
    second = run_check(CheckId.BIJ2, 5)
    assert first.to_json(include_timing=False) == second.to_json(include_timing=False)
    data = json.loads(first.to_json())
    assert set(data) == {"check", "max_n", "cases", "failures", "elapsed_ms"}
    assert data["check"] == "bij2"
    assert data["max_n"] == 5


# --------------- harness sensitivity ---------------

def test_detects_missing_token_in_b2():
    tk = Toolkit.default().with_explicit(BijectionId.B2, b2_without_first_leaf_token)
    report = run_check(CheckId.BIJ2, 5, tk)
    assert not report.passed
    assert any("wrong length" in f.detail for f in report.failures)


def test_detects_token_on_root_in_b2():
    tk = Toolkit.default().with_explicit(BijectionId.B2, b2_bumping_root_then_swapping_first_leaf)
    report = run_check(CheckId.BIJ2, 3, tk)
    assert not report.passed
    mismatch = [f for f in report.failures if f.input == "UDF" and "differ" in f.detail]
    assert mismatch and (mismatch[0].expected, mismatch[0].actual) == ("UFFD", "FUFD")


def test_bij2_and_involution_pass_up_to_nine():
    assert run_check(CheckId.BIJ2, 9).passed
    assert run_check(CheckId.INVOL, 9, order_max_n=6).passed


def test_detects_wrong_correspondence_in_b4():
    tk = Toolkit.default().with_explicit(BijectionId.B4, b4_with_right_leaf_correspondence)
    assert not run_check(CheckId.BIJ4, 5, tk).passed


def test_detects_off_by_one_plateau_length():
    tk = dataclasses.replace(Toolkit.default(), statistics=stats_ignoring_peaks)
    report = run_check(CheckId.BIJ5, 6, tk)
    assert not report.passed
    assert any(f.input == "UDFUFD" for f in report.failures)


def test_detects_identity_in_place_of_flip():
    tk = Toolkit.default()
    broken = tk.with_explicit(BijectionId.B1, lambda p: tk.tree_to_path(tk.path_to_tree(p)))
    report = run_check(CheckId.BIJ1, 4, broken)
    assert any("not swapped" in f.detail for f in report.failures)
    report = run_check(CheckId.CORRESPONDENCE, 4, dataclasses.replace(tk, flip=lambda t: t))
    assert not report.passed


def test_exceptions_become_failures():
    def explode(p):
        raise RuntimeError("boom")

    report = run_check(CheckId.BIJ3, 2, Toolkit.default().with_explicit(BijectionId.B3, explode))
    assert not report.passed
    assert "RuntimeError: boom" in report.failures[0].detail


# --------------- equidistribution ---------------

def test_doublefalls_equidistributed_with_valleys():
    eq = equidistribution(
        lambda p: statistics(p).doublefalls, ClassSpec(4, {Pattern.UU}),
        lambda q: statistics(q).valleys, ClassSpec(5, {Pattern.UD}),
    )
    assert eq.equal
    assert sum(eq.hist_a.values()) == 8


def test_plateau_shift_equidistributed():
    eq = equidistribution(
        lambda p: statistics(p).mpl_counting_peaks + 1, ClassSpec(4, {Pattern.DU}),
        lambda q: statistics(q).mpl_counting_peaks, ClassSpec(5, {Pattern.UD}),
    )
    assert eq.equal


def test_equidistribution_on_empty_class():
    eq = equidistribution(
        lambda p: statistics(p).doublerises, ClassSpec(0),
        lambda p: statistics(p).valleys, ClassSpec(0),
    )
    assert eq.equal
    assert dict(eq.hist_a) == {0: 1}


def test_unequal_distributions_reported():
    eq = equidistribution(
        lambda p: statistics(p).peaks, ClassSpec(4),
        lambda p: statistics(p).valleys, ClassSpec(4),
    )
    assert not eq.equal


# --------------- suites ---------------

def test_run_all_at_zero():
    reports = run_all(0)
    assert [r.check for r in reports] == list(SUITE_ALL)
    assert all(r.passed for r in reports)


def test_run_all_respects_caps():
    reports = run_all(6, {"dyck-facts": 4, "bij1": 2})
    by_check = {r.check: r for r in reports}
    assert by_check[CheckId.DYCK_FACTS].max_n == 4
    assert by_check[CheckId.BIJ1].max_n == 2
    assert by_check[CheckId.BIJ2].max_n == 6
    assert all(r.passed for r in reports)


def test_parallel_run_matches_sequential():
    sequential = run_all(5, suite=["bij1", "invol", "counts"])
    parallel = run_all(5, suite=["bij1", "invol", "counts"], workers=2)
    assert [r.to_dict(include_timing=False) for r in parallel] == [r.to_dict(include_timing=False) for r in sequential]


def test_default_caps_cover_every_check():
    assert set(DEFAULT_CAPS) == set(CheckId)
    assert CheckId.INVOL_LITERAL not in SUITE_ALL
