import math

import pytest

from lapbound import schatten as S
from lapbound.kernel import derived_params
from lapbound.schatten import SchattenError
from lapbound.weights import Weight

inf = math.inf


def test_sigma_profile(W1, P22):
    prof = S.sigma_profile(P22, W1, -4, 2)
    for k in range(-4, 1):
        assert prof.sigma[k] == pytest.approx(math.sqrt(7 / 48) * 2.0**k, rel=1e-12)
    assert prof.sigma[1] == 0.0
    one = S.sigma_profile(P22, Weight.monomial(), -3, 3)
    assert all(v == pytest.approx(0.5) for v in one.sigma.values())
    bar = S.sigma_profile(derived_params(1, 2, 1), W1, -2, 1, barred=True)
    assert bar.sigma[0] == pytest.approx(math.sqrt(0.5))


def test_lambda_and_J(W1, P22):
    assert S.Lambda_s(S.sigma_profile(P22, W1, s=1.0), 1.0) == pytest.approx(2 * math.sqrt(7 / 48), rel=1e-10)
    assert S.J_s(P22, W1, 1.0) == pytest.approx(math.sqrt(3), rel=1e-10)
    assert S.J_s(P22, W1, 2.0) == pytest.approx(math.sqrt(0.5), rel=1e-10)
    assert S.J_bar_s(derived_params(1, 2, 1), W1, 4.0) == pytest.approx(1.0, rel=1e-10)
    zero = Weight(())
    assert S.J_s(P22, zero, 1.0) == 0.0
    assert S.Lambda_s(S.sigma_profile(P22, zero, -2, 2), 1.0) == 0.0


def test_equivalence_check(W1, P22):
    rep = S.lambda_J_equivalence_check(P22, W1, 1.0)
    assert rep["left_const"] == pytest.approx(1 / (2 * (1 - 2**-0.5)), rel=1e-12)
    assert rep["left_holds"] and rep["right_holds"]
    assert rep["Lambda"] <= 1.70711 * 1.73205
    vac = S.lambda_J_equivalence_check(P22, Weight.monomial(), 1.0)
    assert vac["vacuous"] and vac["left_holds"]
    assert S.lambda_J_equivalence_check(P22, Weight(()), 1.0)["holds"]
    assert S.lambda_J_equivalence_check(derived_params(1, 2, 1), W1, 4.0)["holds"]


def test_homogeneity(W1, P22):
    c = 3.0
    assert S.J_s(P22, W1.scaled(c), 2.0) == pytest.approx(c * S.J_s(P22, W1, 2.0), rel=1e-12)
    a = S.asymptotic_constant(P22, W1)["value"]
    assert S.asymptotic_constant(P22, W1.scaled(c))["value"] == pytest.approx(c * a, rel=1e-12)


def test_upper_report(W1, P22):
    rep = S.schatten_upper_report(P22, W1, 2.0)
    assert rep["u_exponent"] == pytest.approx(-0.5)
    assert rep["quantity"] == "J_2"
    assert rep["value"] == pytest.approx(math.sqrt(0.5), rel=1e-10)
    assert rep["J2_over_X2"] == pytest.approx(rep["J2_over_X2_expected"], rel=1e-10)
    rep = S.schatten_upper_report(derived_params(2, 1, 1), Weight.monomial(1, 2, 0, 1), 3.0)
    assert rep["quantity"] == "J_2"
    rep = S.schatten_upper_report(derived_params(2, 0.5, 1), Weight.monomial(1, 0, 1, 2), 3.0)
    assert rep["u_exponent"] == pytest.approx(0.5 - 2.0)
    with pytest.raises(SchattenError):
        S.schatten_upper_report(P22, W1, 1.0)


def test_asymptotic_constant(W1, P22):
    assert S.asymptotic_constant(P22, W1)["value"] == pytest.approx(1.0)
    assert S.asymptotic_constant(derived_params(1, 2, 1), W1)["value"] == pytest.approx(1.0)
    assert S.asymptotic_constant(P22, Weight(()))["value"] == 0.0
    with pytest.raises(SchattenError):
        S.asymptotic_constant(derived_params(3, 2, 1), W1)


def test_hardy():
    assert S.alpha_pq(1, 3) == 1.0
    assert S.alpha_pq(2, 2) == pytest.approx(0.5)
    assert S.hardy_const_norm(1, 1, (0, 1), 2, 2) == pytest.approx(0.5)
    assert S.hardy_const_norm(2, 3, (1, 3), 2, 2) == pytest.approx(0.5 * 6 * 2)
    assert S.hardy_norm_oracle(2, 2, 512)["value"] == pytest.approx(2 / math.pi, rel=1e-4)
    with pytest.raises(SchattenError):
        S.alpha_pq(3, 2)
    one = Weight.monomial()
    assert S.hardy_apply((0, 1), one, one, lambda y: y, 0.5) == pytest.approx(0.125)
    assert S.hardy_apply((0, 1), one, one, lambda y: y, 2.0) == 0.0


@pytest.mark.parametrize("lemma", ["max", "split"])
def test_trivial_lemma_samples(lemma, W1, P22):
    rep = S.dyadic_lemma_check(lemma, P22, W1, S.SampleSpec(count=50, seed=2))
    assert rep["holds"] and rep["max_ratio"] <= 1.0


def test_lemma_wrong_regime(W1, P22):
    with pytest.raises(SchattenError):
        S.dyadic_lemma_check("split-delta", P22, W1)


def test_split_delta_stated_factor_grows_with_pieces(W1):
    """With q < 1 the statement's factor is not uniform in the number of pieces."""
    for lemma, pq in (("split-delta", (2, 0.5)), ("split-delta-bar", (1, 0.5))):
        rep = S.dyadic_lemma_check(lemma, derived_params(*pq, 1), W1, S.SampleSpec(count=400, seed=1))
        by = [rep["stated_ratio_by_pieces"][str(l)] for l in range(1, 5)]
        assert all(a < b for a, b in zip(by, by[1:]))
        assert by[-1] > 1.0
        assert rep["holds"]
