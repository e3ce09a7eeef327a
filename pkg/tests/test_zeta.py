import math
from fractions import Fraction

import pytest

from sgact.core import CircleLinear, CircleNonlinear, SemigroupSpec, SpecError, TorusLinear
from sgact.periodic import periodic_entropy, periodic_series
from sgact.zeta import (
    radius_vs_entropy,
    skew_identity_check,
    truncation_bound,
    zeta_eval,
    zeta_rational,
    zeta_series,
)

S23 = SemigroupSpec.circle(2, 3)


def test_coefficients():
    zs = zeta_series(periodic_series(S23, 12))
    assert zs.coeffs[0] == Fraction(3, 2)
    assert zs.coeffs[1] == Fraction(21, 8)


def test_radius_estimates():
    zs = zeta_series(periodic_series(S23, 12))
    assert abs(zs.radius_estimate - 0.4) < 5e-3
    errs = [abs(zeta_series(periodic_series(S23, n)).radius_estimate - 0.4) for n in (6, 10, 14)]
    assert errs[0] > errs[1] > errs[2]
    z2 = zeta_series(periodic_series(SemigroupSpec.circle(2), 16))
    assert z2.radius_estimate == pytest.approx(0.5, abs=1e-3)


def test_rational_forms():
    assert str(zeta_rational(S23)) == "(1-z)/(1-5/2 z)"
    assert str(zeta_rational(SemigroupSpec.circle(2))) == "(1-z)/(1-2 z)"
    assert str(zeta_rational(SemigroupSpec.circle(3, 3))) == "(1-z)/(1-3 z)"
    rf = zeta_rational(S23)
    assert rf.poles == [Fraction(2, 5)] and rf.zeros == [1]


def test_rational_log_coefficients_match_series():
    for degrees in [(2, 3), (2,), (3, 3), (2, 3, 4)]:
        s = periodic_series(SemigroupSpec.circle(*degrees), 15)
        zs = zeta_series(s)
        assert zs.rational_form.log_coefficients(15) == zs.coeffs


def test_rational_form_nonlinear_circle():
    spec = SemigroupSpec((CircleLinear(2), CircleNonlinear(3, 0.5)))
    assert zeta_rational(spec) == zeta_rational(S23)


def test_rational_form_torus_unavailable():
    with pytest.raises(SpecError):
        zeta_rational(SemigroupSpec((TorusLinear(((3, 1), (1, 2))),)))


def test_eval_examples():
    zs = zeta_series(periodic_series(S23, 12))
    assert zeta_eval(zs, 0) == 1
    assert zeta_eval(zs, 0, "series") == 1
    assert zeta_eval(zs, 0.2).real == pytest.approx(1.6, abs=1e-15)
    assert abs(zeta_eval(zs, 0.2, "series") - 1.6) < 5e-4


def test_eval_errors():
    zs = zeta_series(periodic_series(S23, 12))
    with pytest.raises(SpecError, match="outside"):
        zeta_eval(zs, 0.39, "series")
    with pytest.raises(SpecError, match="pole"):
        zeta_eval(zs, 0.4)


@pytest.mark.parametrize("z", [0.05, 0.1, 0.2, 0.3, 0.25j, -0.3, 0.2 + 0.2j])
def test_truncation_bound_holds(z):
    for n_max in (8, 12, 20):
        zs = zeta_series(periodic_series(S23, n_max))
        err = abs(zeta_eval(zs, z, "series") - zeta_eval(zs, z, "rational"))
        assert err <= truncation_bound(zs, z) * (1 + 1e-9) + 1e-14


def test_pole_count_in_half_disk():
    for degrees in [(2, 3), (3, 3), (2, 3, 4), (5,)]:
        rf = zeta_rational(SemigroupSpec.circle(*degrees))
        D, p = sum(degrees), len(degrees)
        if Fraction(D, p) > 2:
            assert [q for q in rf.poles if abs(q) <= Fraction(1, 2)] == [Fraction(p, D)]
        assert rf.zeros == [1]


def test_radius_vs_entropy():
    for degrees, pole in [((2, 3), 0.4), ((2,), 0.5), ((2, 3, 4), 1 / 3)]:
        s = periodic_series(SemigroupSpec.circle(*degrees), 12)
        rep = radius_vs_entropy(zeta_series(s), periodic_entropy(s))
        assert rep.ok
        assert rep.radius_exact == pytest.approx(pole, abs=1e-15)


def test_radius_vs_entropy_series_mode():
    spec = SemigroupSpec((TorusLinear(((2, 0), (0, 2))), TorusLinear(((3, 0), (0, 3)))))
    s = periodic_series(spec, 12)
    zs = zeta_series(s)
    assert zs.rational_form is None
    rep = radius_vs_entropy(zs, periodic_entropy(s))
    assert rep.ok and rep.tolerance == pytest.approx(0.005)


def test_skew_identity():
    for degrees in [(2, 3), (2,), (2, 3, 4), (4, 4)]:
        assert skew_identity_check(periodic_series(SemigroupSpec.circle(*degrees), 12))
    spec = SemigroupSpec((TorusLinear(((3, 1), (1, 2))), TorusLinear(((2, 1), (0, 3)))))
    assert skew_identity_check(periodic_series(spec, 6))
