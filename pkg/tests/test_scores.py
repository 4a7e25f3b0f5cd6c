"""Bell-functional tests: variant scores, beta, information causality, reports."""

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bellbound import (
    ALL_VARIANTS,
    DiscreteJoint,
    EvaluationError,
    VariantSpec,
    beta_score,
    chsh_setting_conditionals,
    chsh_variant_score,
    classify_score,
    exact_joint,
    full_report,
    ic_alpha,
    make_biased_strategy,
    make_one_bit_pr,
    relabel,
    transmitted_deltas,
)

FLIP = {0: 1, 1: 0}
V000 = VariantSpec(0, 0, 0)
V101 = VariantSpec(1, 0, 1)


def pr_box_joint() -> DiscreteJoint:
    """Uniform settings; A xor B = a*b exactly, outcomes otherwise fair."""
    pmf = {}
    for a, b in itertools.product((0, 1), repeat=2):
        for A in (0, 1):
            B = A ^ (a & b)
            pmf[(a, b, A, B)] = Fraction(1, 8)
    return DiscreteJoint((("a", 2), ("b", 2), ("A", 2), ("B", 2)), pmf)


def uniform_joint() -> DiscreteJoint:
    pmf = {
        key: Fraction(1, 16)
        for key in itertools.product((0, 1), repeat=4)
    }
    return DiscreteJoint((("a", 2), ("b", 2), ("A", 2), ("B", 2)), pmf)


def deterministic_joint(fA, fB) -> DiscreteJoint:
    pmf = {
        (a, b, fA[a], fB[b]): Fraction(1, 4)
        for a, b in itertools.product((0, 1), repeat=2)
    }
    return DiscreteJoint((("a", 2), ("b", 2), ("A", 2), ("B", 2)), pmf)


ALL_BIT_MAPS = tuple({0: x, 1: y} for x in (0, 1) for y in (0, 1))


def test_variant_spec():
    assert len(set(ALL_VARIANTS)) == 8
    assert VariantSpec.from_label("101") == V101
    assert V101.label == "101"
    with pytest.raises(ValueError):
        VariantSpec(0, 2, 0)
    with pytest.raises(ValueError):
        VariantSpec.from_label("01")


def test_chsh_variant_score_pr_box():
    assert chsh_variant_score(pr_box_joint(), V000) == 1.0


def test_chsh_variant_score_uniform():
    j = uniform_joint()
    for v in ALL_VARIANTS:
        assert chsh_variant_score(j, v) == 0.5


def test_chsh_variant_score_local_deterministic_max():
    # independent oracle for the classical bound: all 16 deterministic pairs
    best = max(
        chsh_variant_score(deterministic_joint(fA, fB), V000)
        for fA in ALL_BIT_MAPS
        for fB in ALL_BIT_MAPS
    )
    assert best == 0.75


def test_chsh_variant_score_missing_pair():
    pmf = {(0, b, 0, 0): Fraction(1, 2) for b in (0, 1)}  # a = 1 never occurs
    j = DiscreteJoint((("a", 2), ("b", 2), ("A", 2), ("B", 2)), pmf)
    with pytest.raises(EvaluationError, match="a=1"):
        chsh_variant_score(j, V000)


def test_beta_score_pr_and_uniform():
    assert beta_score(pr_box_joint()) == (1.0, 1.0, 1.0)
    assert beta_score(uniform_joint()) == (0.5, 0.5, 0.5)


def test_beta_score_biased_strategy():
    # hand evaluation: constant A=1 on a=0 matches B with prob 0.8;
    # decoding B xor b on a=1 always matches
    j = exact_joint(make_biased_strategy(0.8, "one"))
    frag = beta_score(j)
    assert frag.p_match_a0 == 0.8
    assert frag.p_match_a1 == 1.0
    assert frag.beta_score == 0.9


def test_ic_alpha():
    assert ic_alpha(0.5, 0.5) == 0.0
    assert ic_alpha(1.0, 1.0) == 2.0
    assert ic_alpha(0.5, 1.0) == 1.0
    with pytest.raises(ValueError):
        ic_alpha(-0.1, 0.5)


@given(
    st.floats(min_value=0.0, max_value=1.0, allow_nan=False),
    st.floats(min_value=0.0, max_value=1.0, allow_nan=False),
)
def test_ic_alpha_swap_symmetry(p0, p1):
    assert ic_alpha(p0, p1) == ic_alpha(p1, p0)
    assert 0.0 <= ic_alpha(p0, p1) <= 2.0


def test_transmitted_deltas_cases():
    # constant message: both deltas vanish
    pmf = {}
    for a, b in itertools.product((0, 1), repeat=2):
        for B in (0, 1):
            pmf[(a, b, 0, B, 0, 0)] = Fraction(1, 8)
    j = DiscreteJoint(
        (("a", 2), ("b", 2), ("A", 2), ("B", 2), ("lam", 1), ("chi", 2)), pmf
    )
    assert transmitted_deltas(j) == (0.0, 0.0)

    # chi = b with lam independent: delta_b = 1
    pmf = {}
    for a, b in itertools.product((0, 1), repeat=2):
        for B in (0, 1):
            pmf[(a, b, 0, B, 0, b)] = Fraction(1, 8)
    j = DiscreteJoint(
        (("a", 2), ("b", 2), ("A", 2), ("B", 2), ("lam", 1), ("chi", 2)), pmf
    )
    d_b, d_B = transmitted_deltas(j)
    assert d_b == 1.0
    assert d_B == 0.0

    # one-bit PR protocol: message carries the setting, lam already carries B
    d_b, d_B = transmitted_deltas(exact_joint(make_one_bit_pr()))
    assert d_b == 1.0
    assert d_B == 0.0


def test_full_report_local_deterministic():
    from bellbound import make_local_deterministic

    score, info = full_report(exact_joint(make_local_deterministic({0: 0, 1: 0}, {0: 0, 1: 0})))
    assert score.beta_score == 0.75
    assert score.violations == ()
    assert classify_score(score.variant_scores[V000]) == "boundary"
    assert info.i_b == 0.0
    assert info.delta_b == 0.0


def test_full_report_one_bit_pr():
    score, info = full_report(exact_joint(make_one_bit_pr()))
    assert score.ic_violated
    assert score.ic_alpha == 2.0
    assert score.beta_score == 1.0
    assert info.i_b == 1.0
    assert info.i_B == 1.0
    assert info.i_Bxorb == 1.0
    assert info.j_B == 1.0
    assert info.j_b == 1.0


def test_full_report_independent_uniform():
    pmf = {
        (a, b, A, B, 0, 0): Fraction(1, 16)
        for a, b, A, B in itertools.product((0, 1), repeat=4)
    }
    j = DiscreteJoint(
        (("a", 2), ("b", 2), ("A", 2), ("B", 2), ("lam", 1), ("chi", 1)), pmf
    )
    score, info = full_report(j)
    assert all(s == 0.5 for s in score.variant_scores.values())
    assert score.ic_alpha == 0.0
    assert not score.ic_violated
    for field in ("i_B", "i_b", "i_Bxorb", "delta_b", "delta_B"):
        assert getattr(info, field) == 0.0
    assert info.h_B == 1.0 and info.h_Bxorb == 1.0


def test_full_report_rejects_nonuniform_settings():
    pmf = {
        (a, b, 0, 0, 0, 0): (Fraction(3, 8) if a == 0 else Fraction(1, 8))
        for a, b in itertools.product((0, 1), repeat=2)
    }
    j = DiscreteJoint(
        (("a", 2), ("b", 2), ("A", 2), ("B", 2), ("lam", 1), ("chi", 1)), pmf
    )
    with pytest.raises(EvaluationError, match="not uniform"):
        full_report(j)


def test_full_report_score_invariants():
    score, _ = full_report(exact_joint(make_biased_strategy(0.8, "one")))
    assert abs(score.beta_score - (score.p_match_a0 + score.p_match_a1) / 2) <= 1e-12
    assert abs(score.ic_alpha - ic_alpha(score.p_match_a0, score.p_match_a1)) <= 1e-12
    assert abs(score.variant_scores[V000] - score.beta_score) <= 1e-12
    assert score.violations == (V000,)


def test_setting_conditionals_pr():
    conds = chsh_setting_conditionals(pr_box_joint(), V000)
    assert conds == {(0, 0): 1.0, (0, 1): 1.0, (1, 0): 1.0, (1, 1): 1.0}


# ---------------------------------------------------------------------------
# structural properties
# ---------------------------------------------------------------------------


@st.composite
def outcome_joints(draw):
    """Random joint over (a, b, A, B) with exactly uniform settings."""
    pmf = {}
    for a, b in itertools.product((0, 1), repeat=2):
        weights = draw(
            st.lists(st.integers(0, 100), min_size=4, max_size=4).filter(
                lambda w: sum(w) > 0
            )
        )
        total = 4 * sum(weights)
        for (A, B), w in zip(itertools.product((0, 1), repeat=2), weights):
            if w:
                pmf[(a, b, A, B)] = Fraction(w, total)
    return DiscreteJoint((("a", 2), ("b", 2), ("A", 2), ("B", 2)), pmf)


@given(outcome_joints())
@settings(max_examples=80, deadline=None)
def test_variant_relabel_symmetry(j):
    flipped = relabel(j, {"A": FLIP, "b": FLIP})
    assert chsh_variant_score(j, V000) == chsh_variant_score(flipped, V101)


@given(outcome_joints())
@settings(max_examples=80, deadline=None)
def test_scores_in_range_and_complementary(j):
    for v in ALL_VARIANTS:
        s = chsh_variant_score(j, v)
        assert 0.0 <= s <= 1.0
        comp = VariantSpec(v.alpha, v.beta, v.gamma ^ 1)
        assert abs(s + chsh_variant_score(j, comp) - 1.0) <= 1e-12


def test_all_local_deterministic_bounded():
    for fA in ALL_BIT_MAPS:
        for fB in ALL_BIT_MAPS:
            j = deterministic_joint(fA, fB)
            for v in ALL_VARIANTS:
                assert chsh_variant_score(j, v) <= 0.75 + 1e-12
