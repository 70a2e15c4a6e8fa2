import itertools

import numpy as np
import pytest

from twistcodes.codes import CodeClass, classify, dual, exhaustive_distance, from_generators, is_self_orthogonal
from twistcodes.gf import make_field
from twistcodes.gtrs import (
    EvalConfig,
    grs_code,
    gtrs_code,
    gtrs_generator,
    lemma31_case,
    power_sum,
    regime,
    rs_code,
    seeded_etas,
    t_k_set,
    verify_lemma31,
    verify_lemma32,
    verify_lemma34,
    verify_powersum,
)
from twistcodes.poly import ParameterError, Poly, Regime, TwistParams, evaluation_matrix

F13 = make_field(13)
F16 = make_field(2, 4)


def test_eval_config_validation():
    with pytest.raises(ParameterError, match="distinct"):
        EvalConfig(F13, [1, 1], [1, 1])
    with pytest.raises(ParameterError, match="nonzero"):
        EvalConfig(F13, [1, 2], [1, 0])
    with pytest.raises(ParameterError, match="multipliers"):
        EvalConfig(F13, [1, 2], [1])
    cfg = EvalConfig.standard(F13)
    assert cfg.n == 13 and cfg.scaled(2).multipliers.tolist() == [2] * 13


def test_standard_trs_is_evaluation_of_the_twisted_space():
    P = TwistParams(4, 2, 1, 3)
    C = gtrs_code(EvalConfig.standard(F13), P)
    polys = [Poly.monomial(F13, s) for s in (0, 2, 3)] + [Poly.from_terms(F13, {1: 1, 5: 3})]
    assert C == from_generators(F13, evaluation_matrix(polys, F13.elements))


def test_rows_for_k3_t1_h0():
    rng = np.random.default_rng(1)
    pts = rng.choice(16, size=9, replace=False)
    v = rng.integers(1, 16, size=9)
    eta = 7
    G = gtrs_generator(EvalConfig(F16, pts, v), TwistParams(3, 1, 0, eta))
    expected = [
        F16.mul(v, pts),
        F16.mul(v, F16.pow(pts, 2)),
        F16.mul(v, F16.add(1, F16.mul(eta, F16.pow(pts, 3)))),
    ]
    assert sorted(map(tuple, G.tolist())) == sorted(map(tuple, np.array(expected).tolist()))


def test_dimension_is_k_for_random_configs():
    rng = np.random.default_rng(16)
    for _ in range(100):
        k = int(rng.integers(3, 8))
        t = int(rng.integers(1, k))
        h = int(rng.integers(0, k - t))
        n = int(rng.integers(k + t, 17))
        cfg = EvalConfig(F16, rng.choice(16, size=n, replace=False), rng.integers(1, 16, size=n))
        assert gtrs_code(cfg, TwistParams(k, t, h, int(rng.integers(1, 16)))).k == k


def test_gtrs_errors():
    with pytest.raises(ParameterError, match="k\\+t"):
        gtrs_code(EvalConfig.unit(F13, range(5)), TwistParams(4, 2, 0, 1))


def test_untwisted_generator_reproduces_grs():
    rng = np.random.default_rng(2)
    for _ in range(20):
        k = int(rng.integers(3, 6))
        t = int(rng.integers(1, k))
        h = int(rng.integers(0, k - t))
        cfg = EvalConfig(F13, rng.choice(13, size=10, replace=False), rng.integers(1, 13, size=10))
        G = gtrs_generator(cfg, TwistParams(k, t, h, 1))
        polys = [Poly.monomial(F13, s) for s in range(k) if s != h] + [Poly.monomial(F13, h)]
        untwisted = F13.mul(evaluation_matrix(polys, cfg.points), cfg.multipliers[None, :])
        assert from_generators(F13, untwisted) == grs_code(cfg, k)
        assert G.shape == untwisted.shape


def test_repetition_code():
    C = grs_code(EvalConfig.unit(F13, range(6)), 1)
    assert C.gen.tolist() == [[1] * 6]


def test_rs_duality():
    for k in range(1, 13):
        assert dual(rs_code(F13, k)) == rs_code(F13, 13 - k)


def test_grs_k_too_large():
    with pytest.raises(ParameterError):
        grs_code(EvalConfig.unit(F13, range(4)), 5)


def test_t_k_examples():
    F7 = make_field(7)
    assert t_k_set(F7, [1, 2], 1) == {6, 3}
    assert t_k_set(F7, [1, 1, 1, 1], 2) == {1}
    assert t_k_set(F7, [1, 1, 1, 1], 3) == {6}
    with pytest.raises(ParameterError, match="nonzero"):
        t_k_set(F7, [0, 1, 2], 1)
    with pytest.raises(ParameterError):
        t_k_set(F7, [1, 2], 2)


def _t_k_brute(F, pts, k):
    sign = int(F.neg(1)) if k % 2 else 1
    out = set()
    for I in itertools.combinations(pts, k):
        prod = 1
        for a in I:
            prod = int(F.mul(prod, F.inv(a)))
        out.add(int(F.mul(sign, prod)))
    return out


@pytest.mark.parametrize("k", [3, 4])
def test_t_k_predicts_mds_versus_nmds(k):
    # (h, t) = (0, 1) at q = 13 with the 8 points 1..8
    pts = list(range(1, 9))
    T = t_k_set(F13, pts, k)
    assert T == _t_k_brute(F13, pts, k)
    cfg = EvalConfig.unit(F13, pts)
    for eta in range(1, 13):
        c = classify(gtrs_code(cfg, TwistParams(k, 1, 0, eta)), "exhaustive")
        if eta in T:
            assert c.tag is CodeClass.NMDS and c.d == 8 - k and c.dual_d == k
        else:
            assert c.tag is CodeClass.MDS


def test_t_k_splits_eta_on_sparser_points():
    # fewer points leave some eta outside T_k, so both classes occur
    pts = [1, 2, 3, 5, 8]
    T = t_k_set(F13, pts, 3)
    assert 0 < len(T) < 12
    cfg = EvalConfig.unit(F13, pts)
    for eta in range(1, 13):
        d = exhaustive_distance(gtrs_code(cfg, TwistParams(3, 1, 0, eta))).d
        assert (d == 3) == (eta not in T)


@pytest.mark.parametrize(
    "q, k, t, tag",
    [(16, 7, 2, Regime.R2), (13, 3, 2, Regime.R3), (13, 6, 3, Regime.R1)],
)
def test_regime_tags(q, k, t, tag):
    from twistcodes.gf import field_from_order

    rt = regime(field_from_order(q), k, t)
    assert rt.tag is tag and rt.to_json()["tag"] == tag.value
    assert "k" in rt.inequality


def test_regime_outside_range():
    with pytest.raises(ParameterError):
        regime(F13, 7, 2)


def test_square_span_case_one_at_q9():
    from twistcodes.gf import field_from_order

    F9 = field_from_order(9)
    rep = verify_lemma31(EvalConfig.standard(F9), TwistParams(3, 2, 0, 2))
    assert rep.verdict and rep.case.startswith("1")


def test_square_span_with_arbitrary_points():
    rng = np.random.default_rng(7)
    for _ in range(10):
        pts = rng.choice(16, size=int(rng.integers(10, 17)), replace=False)
        rep = verify_lemma31(EvalConfig.unit(F16, pts), TwistParams(4, 2, 1, int(rng.integers(1, 16))))
        assert rep.verdict, rep.to_json()


def test_square_span_case_labels():
    assert lemma31_case(TwistParams(5, 4, 0, 1)).startswith("1")
    assert lemma31_case(TwistParams(5, 2, 0, 1)).startswith("2")
    assert lemma31_case(TwistParams(5, 2, 1, 1)).startswith("3")
    assert lemma31_case(TwistParams(6, 2, 2, 1)).startswith("4")
    assert lemma31_case(TwistParams(5, 1, 3, 1)).startswith("5")
    assert lemma31_case(TwistParams(3, 1, 1, 1)).startswith("3/5")


def test_square_dimension_example():
    rep = verify_lemma32(F16, TwistParams(7, 2, 0, 5))
    assert rep.verdict and rep.dims == {"computed": 15, "formula": 15}


def test_r1_square_dual_is_zero():
    rep = verify_lemma34(F13, TwistParams(6, 3, 0, 2))
    assert rep.verdict and rep.dims["dual_computed"] == 0


def test_k3_t1_h1_square_is_one_short():
    # <1, x^2, x + eta x^3>^2 has dimension 6, below 2k+t = 7
    rep = verify_lemma32(F13, TwistParams(3, 1, 1, 2))
    assert rep.dims == {"computed": 6, "formula": 7}
    assert not rep.verdict
    assert rep.certificate["only_right"]
    assert verify_lemma34(F13, TwistParams(3, 1, 1, 2)).verdict


def test_power_sums():
    F8 = make_field(2, 3)
    assert verify_powersum(F8, 3).verdict
    assert power_sum(F8, 0) == 0
    assert power_sum(F13, 12) == 12  # a pair with s1 + s2 = q-1 sums to -1
    for q, F in ((8, F8), (13, F13)):
        for l in range(1, q - 1):
            assert verify_powersum(F, l).verdict
    with pytest.raises(ParameterError):
        verify_powersum(F13, 12)


def test_seeded_etas_are_deterministic_and_nonzero():
    a = seeded_etas(F13, 3, 9)
    assert a == seeded_etas(F13, 3, 9) and 0 not in a and len(set(a)) == 3
    assert len(seeded_etas(F13, 50, 1)) == 12


def test_scaling_preserves_self_orthogonality():
    from twistcodes.constructions import construct_tc1

    cfg, C = construct_tc1(F13, 5, 3, 0, 2, 0)
    assert is_self_orthogonal(C)
    for c in range(1, 13):
        assert is_self_orthogonal(gtrs_code(cfg.scaled(c), TwistParams(5, 3, 0, 2)))
    # breaking a single multiplier breaks it
    v = cfg.multipliers.copy()
    v[0] = 2
    assert not is_self_orthogonal(gtrs_code(EvalConfig(F13, cfg.points, v), TwistParams(5, 3, 0, 2)))


def test_twist_one_codes_above_half_length_are_not_mds():
    # odd q, 3 <= k <= (q-1)/2 - 2, n > (q+1)/2, (t, h) = (1, 0): never MDS
    from twistcodes.codes import minor_scan

    rng = np.random.default_rng(22)
    for _ in range(40):
        k = int(rng.integers(3, 5))
        n = int(rng.integers(8, 14))
        cfg = EvalConfig(F13, rng.choice(13, size=n, replace=False), rng.integers(1, 13, size=n))
        rep = minor_scan(gtrs_code(cfg, TwistParams(k, 1, 0, int(rng.integers(1, 13)))))
        assert not rep.is_mds
