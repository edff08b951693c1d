"""Combination rules: involution and associativity residuals, and the
additive regraduation of associative rules.

The closed-form oracle for x + y + xy: with w(x) = ln(1 + x) the rule
becomes addition, so the normalized regraduation must agree with
ln(1 + x) / ln(1 + x1) at every grid point (x1 the anchor)."""

import math

import numpy as np
import pytest

from qlprob.funceq import (
    CoxFunction,
    DomainEscape,
    NotRegraduable,
    TooManySkips,
    additive_conjugate,
    builtin,
    check_associativity,
    check_involution,
    from_samples_binary,
    from_samples_unary,
    invert_increasing,
    regraduate,
    verify_rescale_freedom,
)


def test_builtin_registry():
    assert builtin("sum")(0.25, 0.5) == 0.75
    assert builtin("one-minus")(0.25) == 0.75
    with pytest.raises(ValueError):
        builtin("nosuch")


def test_involution_one_minus():
    report = check_involution(builtin("one-minus"))
    assert report.passed
    assert report.max_residual == 0.0
    assert not report.identity


def test_involution_identity_flagged():
    report = check_involution(builtin("identity"))
    assert report.passed
    assert report.identity


def test_involution_square_fails():
    report = check_involution(builtin("square"))
    assert not report.passed
    assert report.worst_x == pytest.approx(0.625, abs=1e-12)


def test_involution_requires_unary():
    with pytest.raises(TypeError):
        check_involution(builtin("sum"))


def test_involution_domain_escape():
    doubler = CoxFunction(arity=1, lo=0.0, hi=1.0, fn=lambda x: 2 * x,
                          total=True, label="double")
    with pytest.raises(DomainEscape):
        check_involution(doubler)


def test_associativity_of_closed_forms():
    for name in ("sum", "sumprod", "max"):
        report = check_associativity(builtin(name))
        assert report.passed
        assert report.max_residual == 0.0
        assert report.skipped == 0


def test_associativity_failure_located():
    broken = CoxFunction(arity=2, lo=0.0, hi=1.0, fn=lambda x, y: x + y * y,
                         total=True, label="skew")
    report = check_associativity(broken)
    assert not report.passed
    assert report.worst_triple == (0.0, 1.0, 1.0)
    assert report.max_residual == pytest.approx(2.0)


def test_too_many_skips_raised():
    shifted = CoxFunction(arity=2, lo=0.0, hi=1.0,
                          fn=lambda x, y: x + y + 0.5,
                          total=False, label="shifted")
    with pytest.raises(TooManySkips) as err:
        check_associativity(shifted)
    assert err.value.skipped > err.value.evaluated


def test_regraduate_sum_is_linear():
    result = regraduate(builtin("sum"))
    assert result.max_residual == 0.0
    assert result.anchor == pytest.approx(1 / 32)
    values = np.array(result.values)
    grid = np.array(result.grid)
    assert np.allclose(values, 32 * grid, atol=1e-9)


def test_regraduate_sumprod_matches_log_oracle():
    result = regraduate(builtin("sumprod"))
    assert result.max_residual < 1e-8
    scale = math.log1p(result.anchor)
    worst = max(
        abs(w - math.log1p(x) / scale)
        for x, w in zip(result.grid, result.values)
    )
    assert worst < 1e-6


def test_regraduate_rejects_max():
    with pytest.raises(NotRegraduable) as err:
        regraduate(builtin("max"))
    assert err.value.reason == "non-monotone"


def test_regraduate_needs_additive_zero():
    shifted = CoxFunction(arity=2, lo=0.0, hi=1.0,
                          fn=lambda x, y: (x + y + 1) / 3,
                          total=True, label="affine")
    with pytest.raises(NotRegraduable) as err:
        regraduate(shifted)
    assert err.value.reason == "no-additive-zero"


def test_regraduation_survives_grid_refinement():
    coarse = regraduate(builtin("sumprod"), grid_size=33)
    fine = regraduate(builtin("sumprod"), grid_size=65)
    assert fine.max_residual < 1e-8
    # anchors differ, so the two measures agree up to one positive factor
    scale = fine.w(coarse.anchor)
    for x, w in zip(coarse.grid, coarse.values):
        assert w * scale == pytest.approx(fine.w(x), abs=1e-8 * max(1.0, scale))


def test_rescale_freedom():
    result = regraduate(builtin("sumprod"))
    report = verify_rescale_freedom(result, builtin("sumprod"), [0.5, 2.0, 10.0])
    assert report.passed
    assert set(report.residuals) == {0.5, 2.0, 10.0}
    with pytest.raises(ValueError):
        verify_rescale_freedom(result, builtin("sumprod"), [0.0])


def test_additive_conjugate_is_associative():
    result = regraduate(builtin("sumprod"))
    conjugate = additive_conjugate(result)
    report = check_associativity(conjugate)
    assert report.passed
    assert report.skipped == 0
    assert report.max_residual < 1e-10


def test_invert_increasing():
    root = invert_increasing(lambda x: x * x, 0.0, 2.0, 2.0)
    assert root == pytest.approx(math.sqrt(2), abs=1e-12)


def test_samples_reproduce_unary_rule():
    xs = np.linspace(0, 1, 65)
    g = from_samples_unary([(x, 1 - x) for x in xs])
    report = check_involution(g)
    assert report.passed and report.max_residual == 0.0


def test_samples_reproduce_binary_rule():
    xs = np.linspace(0, 1, 65)
    f = from_samples_binary([(x, y, x + y + x * y) for x in xs for y in xs])
    result = regraduate(f)
    assert result.max_residual < 1e-8


def test_sampled_rule_guards_its_domain():
    g = from_samples_unary([(x, 1 - x) for x in np.linspace(0, 0.5, 9)])
    with pytest.raises(DomainEscape):
        g(0.9)


def test_binary_samples_need_full_grid():
    with pytest.raises(ValueError):
        from_samples_binary([(0, 0, 0), (1, 1, 1)])
