import json
import math
from dataclasses import replace
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from capacity_lab import (
    BMCertificate,
    Ellipsoid,
    EllipsoidPair,
    Ordering,
    PiRational,
    Polydisk,
    ReproductionError,
    Verdict,
    bm_check,
    even_family,
    expected_family_coeff,
    mean_width_estimate,
    odd_family,
    ostrover_criterion,
    reproduce_theorem,
    verify_certificate,
)
from conftest import pairs_st

F = Fraction


class TestFamilies:
    def test_even_instances(self):
        assert even_family(2).radii == (F(3, 2), 1, 1, F(3, 2))
        assert even_family(4).first == Ellipsoid(F(5, 4), 1)
        assert even_family(100).first == Ellipsoid(F(101, 100), 1)

    def test_odd_instances(self):
        assert odd_family(3).radii == (1, 1, F(2, 3), 1)
        assert odd_family(5).second == Ellipsoid(F(4, 5), 1)
        assert odd_family(199).second == Ellipsoid(F(198, 199), 1)

    def test_parity_enforced(self):
        with pytest.raises(ValueError):
            even_family(3)
        with pytest.raises(ValueError):
            even_family(0)
        with pytest.raises(ValueError):
            odd_family(4)
        with pytest.raises(ValueError):
            odd_family(1)

    def test_families_not_proportional(self):
        assert not even_family(2).proportional
        assert not odd_family(3).proportional


class TestBmCheck:
    def test_even_k2(self):
        cert = bm_check(2, even_family(2))
        assert cert.verdict is Verdict.VIOLATES
        assert cert.c_sum.coeff == F(13, 2)
        assert cert.c_1.coeff == 2 and cert.c_2.coeff == 2
        assert cert.margin() < 0

    def test_odd_k3(self):
        cert = bm_check(3, odd_family(3))
        assert cert.verdict is Verdict.VIOLATES
        assert cert.c_sum.coeff == F(50, 9)
        assert {cert.c_1.coeff, cert.c_2.coeff} == {2, 1}

    def test_proportional_equality(self):
        pair = EllipsoidPair.normalized(Ellipsoid(1, 1), Ellipsoid(1, 1))
        cert = bm_check(1, pair)
        assert cert.verdict is Verdict.EQUALITY
        assert cert.comparison is Ordering.EQUAL
        assert cert.c_sum.coeff == 4

    @given(pairs_st, st.integers(1, 15))
    @settings(max_examples=60, deadline=None)
    def test_verdict_matches_comparison(self, pair, k):
        cert = bm_check(k, pair)
        assert (cert.verdict is Verdict.VIOLATES) == (cert.comparison is Ordering.LESS)
        assert (cert.verdict is Verdict.EQUALITY) == (cert.comparison is Ordering.EQUAL)
        # float margin must agree in sign whenever it is resolvable
        if abs(cert.margin()) > 1e-9:
            assert (cert.margin() < 0) == (cert.comparison is Ordering.LESS)

    @given(pairs_st)
    @settings(max_examples=150, deadline=None)
    def test_k1_never_violates(self, pair):
        assert bm_check(1, pair).verdict is not Verdict.VIOLATES


class TestReproduce:
    def test_closed_forms(self):
        assert expected_family_coeff(2) == F(13, 2)
        assert expected_family_coeff(3) == F(50, 9)
        assert expected_family_coeff(4) == F(41, 4)

    def test_small_run(self):
        rows = reproduce_theorem(12)
        assert [r.k for r in rows] == list(range(2, 13))
        for row in rows:
            assert row.certificate.verdict is Verdict.VIOLATES
            assert row.certificate.c_sum == row.expected_c_sum
            assert row.family == ("even" if row.k % 2 == 0 else "odd")

    def test_jobs_do_not_change_output(self):
        assert reproduce_theorem(10, jobs=1) == reproduce_theorem(10, jobs=4)

    def test_k_max_validated(self):
        with pytest.raises(ValueError):
            reproduce_theorem(1)


class TestCertificates:
    def test_round_trip_exact(self):
        cert = bm_check(2, even_family(2))
        again = BMCertificate.from_dict(json.loads(json.dumps(cert.to_dict())))
        assert again == cert
        assert verify_certificate(again)

    def test_schema_fields(self):
        d = bm_check(3, odd_family(3)).to_dict()
        assert set(d) == {"k", "domain1", "domain2", "c_sum", "c1", "c2", "verdict", "comparison"}
        assert d["c_sum"] == {"num": 50, "den": 9}
        assert d["verdict"] == "Violates"

    def test_tampered_value_fails(self):
        cert = bm_check(2, even_family(2))
        forged = replace(cert, c_sum=PiRational(F(99)))
        assert not verify_certificate(forged)

    def test_tampered_verdict_fails(self):
        cert = bm_check(2, even_family(2))
        forged = replace(cert, verdict=Verdict.SATISFIES)
        assert not verify_certificate(forged)


def _quadrature_mean_width(domain, n=200_000) -> float:
    # psi in [0, pi/2] carries density sin(2 psi) on the unit 3-sphere
    psi = (np.arange(n) + 0.5) * (math.pi / 2) / n
    if isinstance(domain, Polydisk):
        vals = float(domain.a) * np.cos(psi) + float(domain.b) * np.sin(psi)
    else:
        vals = np.sqrt(float(domain.a) ** 2 * np.cos(psi) ** 2 + float(domain.b) ** 2 * np.sin(psi) ** 2)
    return float(np.sum(vals * np.sin(2 * psi)) * (math.pi / 2) / n)


class TestMeanWidth:
    def test_unit_polydisk_value(self):
        est = mean_width_estimate(Polydisk(1, 1), 200_000, seed=42)
        assert abs(est.mean - 4 / 3) <= 4 * est.stderr
        assert est.stderr < 5e-3

    def test_quadrature_oracle_unit_polydisk(self):
        assert _quadrature_mean_width(Polydisk(1, 1)) == pytest.approx(4 / 3, abs=1e-9)

    def test_quadrature_vs_monte_carlo(self):
        for dom in [Polydisk(F(3, 2), F(1, 2)), Ellipsoid(2, F(1, 3))]:
            est = mean_width_estimate(dom, 400_000, seed=11)
            assert abs(est.mean - _quadrature_mean_width(dom)) <= 5 * est.stderr

    def test_ball_is_exact(self):
        est = mean_width_estimate(Ellipsoid(1, 1), 1000, seed=0)
        assert est.mean == 1.0
        assert est.stderr == 0.0

    def test_scaled_ball(self):
        est = mean_width_estimate(Ellipsoid(2, 2), 1000, seed=0)
        assert est.mean == 2.0
        assert est.stderr == 0.0

    def test_seed_reproducible(self):
        a = mean_width_estimate(Polydisk(1, 1), 50_000, seed=7)
        b = mean_width_estimate(Polydisk(1, 1), 50_000, seed=7)
        assert a == b

    def test_disjoint_seeds_consistent(self):
        a = mean_width_estimate(Polydisk(1, 1), 1_000_000, seed=1)
        b = mean_width_estimate(Polydisk(1, 1), 1_000_000, seed=2)
        combined = math.hypot(a.stderr, b.stderr)
        assert abs(a.mean - b.mean) <= 6 * combined

    def test_sample_floor(self):
        with pytest.raises(ValueError):
            mean_width_estimate(Polydisk(1, 1), 99, seed=0)

    def test_unsupported_domain(self):
        from capacity_lab import EllipsoidSum

        with pytest.raises(ValueError):
            mean_width_estimate(EllipsoidSum(odd_family(3)), 1000, seed=0)


class TestOstroverCriterion:
    def test_truth_table_1_to_20(self):
        expected_true = set(range(2, 21, 2)) | {9, 11, 13, 15, 17, 19}
        for k in range(1, 21):
            assert ostrover_criterion(k).violating == (k in expected_true)

    def test_examples(self):
        assert ostrover_criterion(2).violating
        assert not ostrover_criterion(7).violating
        assert ostrover_criterion(9).violating

    def test_report_values(self):
        rep = ostrover_criterion(7)
        assert rep.lhs == F(7, 4)
        assert rep.rhs == F(16, 9)
        assert rep.c_polydisk.coeff == 7
        assert rep.c_ball.coeff == 4

    def test_k_validated(self):
        with pytest.raises(ValueError):
            ostrover_criterion(0)

    def test_criterion_implies_family_violation(self):
        for k in range(2, 40):
            rep = ostrover_criterion(k)
            if rep.violating:
                pair = even_family(k) if k % 2 == 0 else odd_family(k)
                assert bm_check(k, pair).verdict is Verdict.VIOLATES
