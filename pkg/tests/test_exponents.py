import math

import numpy as np
import pytest

from plaplab import (
    ParameterError,
    classify_regime,
    consistency_q0_mcs,
    critical_dimension,
    exponent_report,
    m_cs,
    q_exponent,
)


@pytest.mark.parametrize("p,expected", [(3.0, 9.0), (2.0, 10.0), (5.0, 10.0)])
def test_critical_dimension_reference_values(p, expected):
    assert critical_dimension(p) == expected


def test_critical_dimension_rejects_p_at_most_one():
    with pytest.raises(ParameterError):
        critical_dimension(1.0)
    with pytest.raises(ParameterError):
        critical_dimension(0.5)


def test_q_exponent_infinite_below_critical():
    assert q_exponent(9.0, 2.0, 0) == math.inf
    assert q_exponent(9.0, 2.0, 1) == math.inf
    # at the threshold the defining reciprocal vanishes
    assert q_exponent(10.0, 2.0, 0) == math.inf


def test_q_exponent_reference_value():
    # independent route for p = 2: q0 = 2n / (n - 4 - 2 sqrt(n-1))
    ref = 2.0 * 11.0 / (11.0 - 4.0 - 2.0 * math.sqrt(10.0))
    assert abs(q_exponent(11.0, 2.0, 0) - ref) < 1e-9 * ref


def test_q_exponent_p2_closed_form_sweep():
    for n in range(11, 31):
        ref = 2.0 * n / (n - 4.0 - 2.0 * math.sqrt(n - 1.0))
        assert abs(q_exponent(float(n), 2.0, 0) - ref) < 1e-12 * ref


def test_q_exponent_reciprocal_gap():
    rng = np.random.default_rng(7)
    for _ in range(200):
        p = rng.uniform(1.1, 6.0)
        n = critical_dimension(p) * rng.uniform(1.001, 3.0)
        q0 = q_exponent(n, p, 0)
        q1 = q_exponent(n, p, 1)
        assert abs((1.0 / q1 - 1.0 / q0) - 1.0 / n) < 1e-13


def test_q_exponent_exceeds_p_when_finite():
    rng = np.random.default_rng(11)
    for _ in range(200):
        p = rng.uniform(1.1, 8.0)
        n = critical_dimension(p) * rng.uniform(1.0001, 4.0)
        for k in (0, 1):
            q = q_exponent(n, p, k)
            assert q > p


def test_q_exponent_rejects_bad_k():
    with pytest.raises(ParameterError):
        q_exponent(12.0, 2.0, 2)


def test_m_cs_values():
    assert m_cs(9.0, 2.0) == math.inf
    assert m_cs(10.0, 2.0) == math.inf
    s10 = math.sqrt(10.0)
    ref11 = (11.0 - 2.0 * s10) / (11.0 - 4.0 - 2.0 * s10)
    assert abs(m_cs(11.0, 2.0) - ref11) < 1e-12
    s14 = math.sqrt(14.0)
    ref15 = (15.0 - 2.0 * s14) / (11.0 - 2.0 * s14)
    assert abs(m_cs(15.0, 2.0) - ref15) < 1e-12


def test_m_cs_exceeds_p_minus_one():
    rng = np.random.default_rng(23)
    for _ in range(200):
        p = rng.uniform(1.1, 8.0)
        n = critical_dimension(p) * rng.uniform(1.001, 4.0)
        assert m_cs(n, p) > p - 1.0


@pytest.mark.parametrize("n,p", [(11.0, 2.0), (20.0, 3.0), (15.0, 2.0), (26.0, 1.7)])
def test_consistency_identity(n, p):
    assert consistency_q0_mcs(n, p) < 1e-9


def test_consistency_rejects_boundary_dimension():
    with pytest.raises(ParameterError):
        consistency_q0_mcs(10.0, 2.0)
    with pytest.raises(ParameterError):
        consistency_q0_mcs(8.0, 2.0)


@pytest.mark.parametrize(
    "n,p,regime",
    [(5.0, 2.0, "A"), (10.0, 2.0, "B"), (12.0, 2.0, "C"), (9.0, 3.0, "B"), (8.0, 3.0, "A")],
)
def test_classify_regime(n, p, regime):
    assert classify_regime(n, p)[0] == regime


def test_regime_c_summary_reports_exponents():
    _, summary = classify_regime(12.0, 2.0)
    # independent value: 2*12/(8 - 2 sqrt 11) = 17.5599...
    assert "17.56" in summary or "17.5599" in summary


def test_equivalence_of_threshold_forms():
    # sign((n-p)/2 - 1 - sqrt((n-1)/(p-1))) agrees with sign(n - critical)
    rng = np.random.default_rng(1234)
    for _ in range(1000):
        p = rng.uniform(1.1, 10.0)
        n = rng.uniform(1.0, 50.0)
        lhs = (n - p) / 2.0 - 1.0 - math.sqrt((n - 1.0) / (p - 1.0))
        rhs = n - critical_dimension(p)
        if abs(lhs) < 1e-9 or abs(rhs) < 1e-9:
            continue
        assert (lhs > 0) == (rhs > 0)


def test_report_serializes_infinities_as_tags():
    rep = exponent_report(5.0, 2.0)
    d = rep.as_dict()
    assert d["q0"] == "inf" and d["q1"] == "inf" and d["m_cs"] == "inf"
    assert d["regime"] == "A"
    rep = exponent_report(12.0, 2.0)
    d = rep.as_dict()
    assert isinstance(d["q0"], float) and d["q0"] > 0
    assert not d["non_integer_dimension"]
    assert exponent_report(12.5, 2.0).non_integer_dimension
