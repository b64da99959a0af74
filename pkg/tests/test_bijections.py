import pytest
from hypothesis import given
from hypothesis import strategies as st

from motzkin.bijections import (
    EXPLICIT, RECURSIVE, BijectionId, DomainViolation, InvolutionForm, Mode, ModeMismatch, apply, b1, b2,
    b2_inverse, b3, b3_inverse, b4, b4_inverse, b5, b5_inverse, critical_upsteps, drop_final_flat, invert,
    involution, involution_segment, literal_segment_rule,
)
from motzkin.enumeration import ClassSpec, all_avoiding, all_paths
from motzkin.paths import Pattern, avoids, parse_path, statistics

P = parse_path

UU_FREE = [p for n in range(10) for p in all_avoiding(ClassSpec(n, {Pattern.UU}))]
DU_FREE = [p for n in range(10) for p in all_avoiding(ClassSpec(n, {Pattern.DU}))]
UD_FREE = [p for n in range(1, 10) for p in all_avoiding(ClassSpec(n, {Pattern.UD}))]
ALL = [p for n in range(9) for p in all_paths(n)]

MODES = [Mode.RECURSIVE, Mode.EXPLICIT, Mode.CHECKED]


@pytest.mark.parametrize("mode", MODES)
@pytest.mark.parametrize("fn, word, image", [
    (b1, "UFDUFFUDD", "UUDFFUDDF"),
    (b1, "", ""),
    (b1, "UD", "UD"),
    (b2, "UFDUFFUDD", "UUFDUFFDDF"),
    (b2, "", "F"),
    (b2, "UFUDD", "UFDUFD"),
    (b2, "UDF", "UFFD"),
    (b2, "FUD", "FUFD"),
    (b2, "FFUFDF", "FFUFFDF"),
    (b3, "UFDUFFUDD", "UFDUFUFDDF"),
    (b3, "", "F"),
    (b3, "UD", "UFD"),
    (b4, "UFDUFFUDD", "UUFDFUFDDF"),
    (b4, "", "F"),
    (b4, "UD", "UFD"),
    (b5, "UFDFUUFFDDFFUD", "UFFDUUFFFDDFUFD"),
    (b5, "", "F"),
    (b5, "UD", "UFD"),
])
def test_bijection_examples(fn, word, image, mode):
    assert fn(P(word), mode).word == image


@pytest.mark.parametrize("fn, image, word", [
    (b2_inverse, "UUFDUFFDDF", "UFDUFFUDD"),
    (b2_inverse, "F", ""),
    (b2_inverse, "UFDUFD", "UFUDD"),
    (b2_inverse, "UFFD", "UDF"),
    (b2_inverse, "FUFD", "FUD"),
    (b3_inverse, "UFDUFUFDDF", "UFDUFFUDD"),
    (b3_inverse, "F", ""),
    (b3_inverse, "UFD", "UD"),
    (b4_inverse, "UUFDFUFDDF", "UFDUFFUDD"),
    (b5_inverse, "UFFDUUFFFDDFUFD", "UFDFUUFFDDFFUD"),
])
def test_inverse_examples(fn, image, word):
    assert fn(P(image)).word == word


@pytest.mark.parametrize("form", [InvolutionForm.SEGMENT, InvolutionForm.COMPOSITION])
@pytest.mark.parametrize("word, image", [
    ("UFUDFD", "UFFUDD"),
    ("UFUDD", "UFUDD"),
    ("FFF", "FFF"),
])
def test_involution_examples(word, image, form):
    assert involution(P(word), form).word == image


def test_literal_rule_loses_a_step():
    out = involution_segment(P("UFUDFD"), literal_segment_rule)
    assert out.word == "UFUDD"


@pytest.mark.parametrize("fn, word", [
    (b2, "UUDD"),
    (b3, "FUUDD"),
    (b4, "UUDD"),
    (b5, "UDUD"),
])
def test_domain_violations(fn, word):
    with pytest.raises(DomainViolation):
        fn(P(word))


def test_inverse_rejects_non_images():
    with pytest.raises(DomainViolation):
        b2_inverse(P("UD"))
    with pytest.raises(DomainViolation):
        b5_inverse(P(""))
    with pytest.raises(DomainViolation):
        involution(P("UUDD"))


def test_apply_and_invert_dispatch():
    assert apply("5", P("UD")).word == "UFD"
    assert invert(BijectionId.B3, P("UFD")).word == "UD"
    assert invert("1", P("UUDFFUDDF"), "explicit").word == "UFDUFFUDD"
    assert apply("invol", P("UFUDFD"), Mode.RECURSIVE).word == "UFFUDD"
    assert invert("invol", P("UFFUDD")).word == "UFUDFD"


def test_checked_mode_reports_both_candidates(monkeypatch):
    from motzkin import bijections
    monkeypatch.setitem(bijections.RECURSIVE, BijectionId.B1, lambda p: p)
    with pytest.raises(ModeMismatch) as exc:
        apply(BijectionId.B1, P("UFDUFFUDD"), Mode.CHECKED)
    assert exc.value.candidates == {"recursive": "UFDUFFUDD", "explicit": "UUDFFUDDF"}
    assert apply(BijectionId.B1, P("UFDUFFUDD"), Mode.EXPLICIT).word == "UUDFFUDDF"


def test_drop_final_flat():
    assert drop_final_flat(b3(P(""))).word == ""
    q = b3(P("FUFD"))
    assert q.word.endswith("F")
    assert avoids(drop_final_flat(q), [Pattern.UD])
    with pytest.raises(DomainViolation):
        drop_final_flat(P("UFD"))


def test_critical_upsteps():
    assert critical_upsteps(P("UFUFDDUD")) == [0, 2]
    assert critical_upsteps(P("UUDD")) == []


@given(st.sampled_from(ALL))
def test_b1_is_an_involution(p):
    q = b1(p)
    assert len(q) == len(p)
    assert b1(q) == p
    s, t = statistics(p), statistics(q)
    assert (s.doublerises, s.valleys) == (t.valleys, t.doublerises)


@given(st.sampled_from(UU_FREE))
def test_uu_free_maps_roundtrip(p):
    for fn, inverse in ((b2, b2_inverse), (b3, b3_inverse), (b4, b4_inverse)):
        q = fn(p)
        assert len(q) == len(p) + 1
        assert avoids(q, [Pattern.UD])
        assert inverse(q) == p


@given(st.sampled_from(DU_FREE))
def test_b5_roundtrip_and_plateau_shift(p):
    q = b5(p)
    assert b5_inverse(q) == p
    assert statistics(q).mpl_counting_peaks == statistics(p).mpl_counting_peaks + 1


@given(st.sampled_from(UD_FREE))
def test_inverses_land_in_domain(q):
    for fn, inverse in ((b2, b2_inverse), (b3, b3_inverse), (b4, b4_inverse)):
        p = inverse(q)
        assert avoids(p, [Pattern.UU])
        assert fn(p) == q
    assert b5(b5_inverse(q)) == q


@given(st.sampled_from(UU_FREE))
def test_involution_properties(p):
    q = involution(p)
    assert involution(q) == p
    assert q == involution(p, InvolutionForm.COMPOSITION)
    s, t = statistics(p), statistics(q)
    assert (s.ufu, s.doublefalls) == (t.doublefalls, t.ufu)


@given(st.sampled_from(UU_FREE), st.randoms(use_true_random=False))
def test_involution_segment_order_does_not_matter(p, rng):
    order = critical_upsteps(p)
    rng.shuffle(order)
    assert involution_segment(p, order=order) == involution_segment(p)


def test_involution_segment_rejects_bad_order():
    with pytest.raises(ValueError):
        involution_segment(P("UFUDFD"), order=[1])


@given(st.sampled_from(UU_FREE))
def test_recursive_and_explicit_forms_agree(p):
    for bij in (BijectionId.B2, BijectionId.B3, BijectionId.B4):
        assert RECURSIVE[bij](p) == EXPLICIT[bij](p), bij


@pytest.mark.parametrize("word", ["UDF", "UDFF", "FUDUFD", "UFDUDF", "FUFUDFDF"])
def test_b2_forms_agree_off_the_worked_example(word):
    p = P(word)
    assert RECURSIVE[BijectionId.B2](p) == EXPLICIT[BijectionId.B2](p)
    assert b2_inverse(b2(p, Mode.EXPLICIT)) == p


def test_long_inputs_in_every_mode():
    m = 1200
    comb = P("UD" * m)
    for mode in MODES:
        assert b1(comb, mode).word == "U" * m + "D" * m
        assert b1(b1(comb, mode), mode) == comb
    nested = P("UF" * m + "D" * m)
    image = b2(nested)
    assert image.word == "UFD" * (m - 1) + "UFDF"
    assert b2_inverse(image) == nested
