"""Growth-rate regression and the entropy estimators."""
import math

import numpy as np
import pytest

from translocal.entropy import (DEFAULT_SCHEDULE, Schedule, growth_rate,
                                lyapunov_exponent, restricted_entropy,
                                toral_translocal, translocal_entropy,
                                yz_entropy_function)
from translocal.maps import get_system, toral_eigen_data
from translocal.spaces import Ball, circle, interval

LOG3 = math.log(3.0)


def test_growth_rate_recovers_exact_slope():
    data = [(n, 0.7 * n + 2.0) for n in range(4, 15)]
    est = growth_rate(data, "limsup")
    assert est.value == pytest.approx(0.7, abs=1e-9)
    assert growth_rate(data, "liminf").value == pytest.approx(0.7, abs=1e-9)


def test_growth_rate_limsup_above_liminf_on_oscillation():
    rng = np.random.default_rng(3)
    data = [(n, 0.5 * n + 0.3 * rng.standard_normal()) for n in range(4, 20)]
    up = growth_rate(data, "limsup").value
    lo = growth_rate(data, "liminf").value
    assert up >= lo


def test_growth_rate_clamps_negative_slopes():
    data = [(n, -0.2 * n) for n in range(4, 12)]
    assert growth_rate(data, "limsup", clamp=True).value == 0.0


def test_schedule_validation():
    with pytest.raises(ValueError):
        Schedule((5, 4, 3), (0.05,), 1000)
    with pytest.raises(ValueError):
        Schedule((4, 5, 6), (0.01, 0.05), 1000)


def test_restricted_entropy_tripling_whole_circle():
    sys = get_system("tripling")
    est = restricted_entropy(sys, Ball(circle(0.0), 0.5))
    assert est.value == pytest.approx(LOG3, rel=0.02)


def test_translocal_tripling_linear_in_omega():
    sys = get_system("tripling")
    for omega in (0.3, 0.6):
        up, lo = translocal_entropy(sys, circle(0.37), omega)
        expect = LOG3 - omega
        assert up.value == pytest.approx(expect, rel=0.05)
        assert lo.value == pytest.approx(expect, rel=0.05)


def test_translocal_sandwich_and_omega_monotonicity():
    sys = get_system("g3branch")
    values = []
    for omega in (0.2, 0.5, 0.8):
        up, lo = translocal_entropy(sys, circle(2.0 / 3.0), omega)
        assert lo.value <= up.value + 1e-9
        values.append(up.value)
    assert values[0] >= values[1] - 0.02
    assert values[1] >= values[2] - 0.02


def test_yz_function_bounded_by_topological_entropy():
    sys = get_system("tripling")
    est = yz_entropy_function(sys, circle(0.2))
    assert est.value <= LOG3 * 1.05
    assert est.value == pytest.approx(LOG3, rel=0.05)


def test_lyapunov_tripling_constant():
    sys = get_system("tripling")
    up, lo = lyapunov_exponent(sys, circle(0.123), 60)
    assert up == pytest.approx(LOG3, abs=1e-9)
    assert lo == pytest.approx(LOG3, abs=1e-9)


def test_toral_translocal_closed_form():
    eigs = toral_eigen_data(get_system("cat"))
    top = math.log(eigs[0][0])
    assert toral_translocal(eigs, 0.0) == pytest.approx(top)
    assert toral_translocal(eigs, 0.3) == pytest.approx(top - 0.3)
    assert toral_translocal(eigs, 2.0) == 0.0


def test_translocal_rejects_negative_omega():
    sys = get_system("tripling")
    with pytest.raises(ValueError):
        translocal_entropy(sys, circle(0.1), -0.2)
