"""Singular variance-weighted quantile integrals and divergence detection."""

import math

import numpy as np
import pytest

from w2gauss import (DivergenceError, DomainError, LOG2_PLUS_GAMMA0,
                     QuadratureError, bickel_integral, copula_diagonal_tail,
                     d1n, limit_second_moment, second_moment_windows,
                     truncated_second_moment, variance_weight)

LOGLOG = lambda n: math.log(math.log(n))


# --------------------------------------------------------------------------
# variance weight
# --------------------------------------------------------------------------

def test_variance_weight_center():
    # u(1-u)/h(u)^2 at u = 1/2 is (1/4) * 2 pi = pi/2
    assert variance_weight(0.5) == pytest.approx(math.pi / 2.0, rel=1e-12)


def test_variance_weight_symmetric_and_growing():
    u = np.linspace(0.01, 0.99, 99)
    w = np.asarray(variance_weight(u))
    assert np.allclose(w, w[::-1], rtol=1e-10)
    # grows toward the endpoints (the integrand is singular there)
    mid = 49
    assert np.all(np.diff(w[mid:]) > 0.0)
    assert variance_weight(1.0 - 1e-10) > 1e7


def test_variance_weight_domain():
    for bad in (0.0, 1.0, -0.2, 1.3):
        with pytest.raises(DomainError):
            variance_weight(bad)


# --------------------------------------------------------------------------
# Bickel integral
# --------------------------------------------------------------------------

def test_bickel_frozen_values():
    cases = [
        (1e4, 3.270009615989541, 1.0496828096216948),
        (1e6, 3.7366216219461577, 1.1108297074701468),
        (1e8, 4.057407858059921, 1.1439338711321296),
        (1e32, 5.5299460970647285, 1.230177749017046),
    ]
    for n, value, centered in cases:
        r = bickel_integral(n)
        assert r.value == pytest.approx(value, rel=1e-10)
        assert r.centered_or_ratio == pytest.approx(centered, rel=1e-9)
        assert r.centered_or_ratio == pytest.approx(r.value - LOGLOG(n),
                                                    rel=1e-12)
        assert r.abs_error_estimate < 1e-9
        assert r.evaluations > 0


def test_bickel_centered_approaches_log2_plus_gamma0():
    assert LOG2_PLUS_GAMMA0 == pytest.approx(math.log(2.0) + 0.5772156649,
                                             abs=1e-9)
    centered = [bickel_integral(n).centered_or_ratio
                for n in (1e4, 1e8, 1e16, 1e32, 1e64)]
    assert all(a < b for a, b in zip(centered, centered[1:]))
    assert all(c < LOG2_PLUS_GAMMA0 for c in centered)
    # the gap shrinks like log log n / log n
    assert LOG2_PLUS_GAMMA0 - centered[-1] < 0.03


def test_bickel_symmetry_flag_agrees():
    for n in (1e4, 1e8):
        a = bickel_integral(n, use_symmetry=True).value
        b = bickel_integral(n, use_symmetry=False).value
        assert abs(a - b) <= 1e-10 * abs(a)


def test_bickel_halving_self_validation():
    # the 1/n window shift changes the value by ~(log 2)/stuff, not wildly:
    # doubling n moves the value by less than loglog spacing
    v1 = bickel_integral(1e6).value
    v2 = bickel_integral(2e6).value
    assert 0.0 < v2 - v1 < 0.1


def test_bickel_domain():
    for bad in (1.0, 2.0, math.e, 0.5, -3.0):
        with pytest.raises(DomainError):
            bickel_integral(bad)


# --------------------------------------------------------------------------
# D_{1,n}
# --------------------------------------------------------------------------

def test_d1n_frozen_ratios():
    cases = [
        (1e4, 0.5554572002925253),
        (1e8, 0.6232739301531636),
        (1e16, 0.6340213457429569),
        (1e32, 0.6281070613973577),
    ]
    for n, ratio in cases:
        r = d1n(n)
        assert r.centered_or_ratio == pytest.approx(ratio, rel=1e-9)
        assert r.centered_or_ratio == pytest.approx(r.value / LOGLOG(n),
                                                    rel=1e-12)


def test_d1n_ratio_stays_bounded():
    ratios = [d1n(n).centered_or_ratio for n in (1e4, 1e8, 1e16, 1e32, 1e64)]
    assert all(0.3 < r < 1.0 for r in ratios)


def test_d1n_window_parameters():
    r = d1n(1e8, C=2.0, theta=1.5)
    assert r.value > 0.0
    with pytest.raises(DomainError):
        d1n(1e8, C=0.0)
    with pytest.raises(DomainError):
        d1n(1e8, theta=2.5)
    with pytest.raises(DomainError):
        d1n(2.0)


# --------------------------------------------------------------------------
# truncated second moment of the limit field
# --------------------------------------------------------------------------

def test_truncated_frozen_table_rho_06():
    cases = [
        (1e-3, 4.101396325671484),
        (1e-4, 4.741129996076247),
        (1.25e-5, 5.196643728355025),
        (1e-6, 5.647350232066718),
        (1e-250, 13.405392491928062),
    ]
    for delta, value in cases:
        m = truncated_second_moment(0.6, delta)
        assert m.value == pytest.approx(value, rel=1e-9)
        assert m.centered_or_ratio == delta


def test_truncated_rho0_equals_twice_bickel():
    # at rho = 0 the gap is u(1-u) and M(0, 1/n) = 2 * Bickel(n) identically
    for n in (1e4, 1e6):
        m = truncated_second_moment(0.0, 1.0 / n)
        b = bickel_integral(n)
        assert m.value == pytest.approx(2.0 * b.value, rel=1e-9)


def test_truncated_monotone_in_delta_and_rho():
    vals = [truncated_second_moment(0.6, d).value
            for d in (1e-3, 1e-5, 1e-8, 1e-12)]
    assert all(a < b for a, b in zip(vals, vals[1:]))
    # positive correlation shrinks the gap u - C_rho(u,u), so M decreases
    by_rho = [truncated_second_moment(r, 1e-6).value
              for r in (0.0, 0.3, 0.6, 0.9)]
    assert all(a > b for a, b in zip(by_rho, by_rho[1:]))


def test_truncated_domain():
    with pytest.raises(DomainError):
        truncated_second_moment(1.0, 1e-4)
    with pytest.raises(DomainError):
        truncated_second_moment(0.5, 0.0)
    with pytest.raises(DomainError):
        truncated_second_moment(0.5, 0.6)


def test_window_ladder_structure():
    w = second_moment_windows(0.6)
    assert len(w["values"]) == len(w["deltas"]) == len(w["slopes"])
    assert all(a < b for a, b in zip(w["values"], w["values"][1:]))
    # slope per unit log log(1/delta) settles near 2, approaching from above
    tail = w["slopes"][1:]
    gaps = [abs(s - 2.0) for s in tail]
    assert all(a > b for a, b in zip(gaps, gaps[1:]))
    assert abs(w["slopes"][-1] - 2.0) < 0.05


def test_limit_second_moment_diverges_for_all_rho():
    for rho in (0.6, -0.5, 0.3, 0.95):
        with pytest.raises(DivergenceError) as exc:
            limit_second_moment(rho)
        d = exc.value.diagnostics
        assert abs(d["slope"] - 2.0) < 0.1
        assert len(d["values"]) == len(d["deltas"])


def test_limit_second_moment_rho0_distinct_note():
    with pytest.raises(DivergenceError) as exc:
        limit_second_moment(0.0)
    assert "classical" in exc.value.diagnostics["note"]


@pytest.mark.xfail(
    strict=True,
    reason="the truncated moment grows like 2 log log(1/delta) with "
           "measured slope 2.016 all the way down to delta = 1e-250, for "
           "every |rho| < 1 (the diagonal copula gap behaves like 1-u "
           "by tail independence), so no finite limit exists to return")
def test_limit_second_moment_finite_value():
    m = limit_second_moment(0.6)
    assert math.isfinite(m.value)


# --------------------------------------------------------------------------
# diagonal copula tail diagnostics
# --------------------------------------------------------------------------

def test_diagonal_tail_independence():
    # gap(u)/(1-u) -> 1 for every |rho| < 1: the diagonal gap is never
    # smaller than order 1-u
    for rho in (0.6, 0.3, -0.5):
        t = copula_diagonal_tail(rho, 1.0 - 1e-12)
        assert abs(t.gap_over_tail - 1.0) < 0.01


def test_diagonal_tail_ratio_grows_with_depth():
    r1 = copula_diagonal_tail(0.6, 1.0 - 1e-6).ratio
    r2 = copula_diagonal_tail(0.6, 1.0 - 1e-12).ratio
    assert r2 > r1 > 1.0


@pytest.mark.xfail(
    strict=True,
    reason="tail independence forces gap ~ 1-u, while the claimed "
           "envelopes decay faster; measured integrand/envelope ratio is "
           "14.8 at rho=0.6 and ~1e21 at rho=-0.5 for u = 1-1e-12")
def test_diagonal_tail_envelopes_hold():
    assert copula_diagonal_tail(0.6, 1.0 - 1e-12).ratio <= 1.0
    assert copula_diagonal_tail(-0.5, 1.0 - 1e-12).ratio <= 1.0


def test_diagonal_tail_domain():
    with pytest.raises(DomainError):
        copula_diagonal_tail(1.0, 0.999)
    with pytest.raises(DomainError):
        copula_diagonal_tail(0.5, 1.0)


def test_quadrature_error_is_raisable():
    # certification failures surface as QuadratureError, a DomainError kin
    assert issubclass(QuadratureError, Exception)
