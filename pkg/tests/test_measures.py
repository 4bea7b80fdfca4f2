"""Reference measures, ball masses, and local decay rates."""
import math

import numpy as np
import pytest

from translocal.entropy import Schedule
from translocal.maps import ZERO_POTENTIAL, get_potential, get_system
from translocal.measures import (ball_measure, bowen_ball_measure, brin_katok,
                                 certified_invariant, get_measure,
                                 local_pressure, qmc_ball_measure,
                                 translocal_local_pressure)
from translocal.spaces import Ball, circle, torus, word

LOG3 = math.log(3.0)


def test_lebesgue_circle_ball_mass():
    mu = get_measure("lebesgue-circle")
    assert ball_measure(mu, Ball(circle(0.3), 0.1)) == pytest.approx(0.2)
    assert ball_measure(mu, Ball(circle(0.3), 0.7)) == 1.0


def test_lebesgue_torus_ball_mass():
    mu = get_measure("lebesgue-torus")
    assert ball_measure(mu, Ball(torus(0.5, 0.5), 0.1)) == pytest.approx(0.04)


def test_bernoulli_cylinder_mass():
    mu = get_measure("bernoulli:0.5,0.5")
    w = word([1, 0, 1, 1, 0, 0, 1, 0])
    # radius e^-3 pins ceil(3) symbols
    mass = ball_measure(mu, Ball(w, math.exp(-3.0)))
    assert mass == pytest.approx(0.5 ** 3)


def test_dirac_ball_membership():
    mu = get_measure("dirac:circle:0.25")
    assert ball_measure(mu, Ball(circle(0.3), 0.1)) == 1.0
    assert ball_measure(mu, Ball(circle(0.6), 0.1)) == 0.0


def test_qmc_agrees_with_closed_form():
    mu = get_measure("lebesgue-circle")
    frac, stderr = qmc_ball_measure(mu, Ball(circle(0.4), 0.1))
    assert frac == pytest.approx(0.2, abs=max(4 * stderr, 0.004))


def test_invariance_certificates():
    leb = get_measure("lebesgue-circle")
    assert certified_invariant(get_system("tripling"), leb)
    assert certified_invariant(get_system("g3branch"), leb)
    assert not certified_invariant(get_system("sqrtmap"), leb)
    assert certified_invariant(get_system("fullshift:2"),
                               get_measure("bernoulli:0.5,0.5"))
    assert certified_invariant(get_system("tripling"),
                               get_measure("dirac:circle:0"))
    assert not certified_invariant(get_system("tripling"),
                                   get_measure("dirac:circle:0.3"))


def test_lebesgue_invariance_of_whitelisted_maps():
    # pushforward check: mass of f^{-1}[a, b] equals b - a
    rng = np.random.default_rng(19)
    xs = rng.random(200_000).reshape(-1, 1)
    for sys_id in ("tripling", "g3branch", "identity"):
        sys = get_system(sys_id)
        ys = sys.step_many(xs)[:, 0]
        for a, b in ((0.1, 0.35), (0.6, 0.9)):
            frac = float(((ys >= a) & (ys < b)).mean())
            assert frac == pytest.approx(b - a, abs=0.01)


def test_bowen_ball_measure_tripling_exact():
    sys = get_system("tripling")
    mu = get_measure("lebesgue-circle")
    n, eps = 8, 0.01
    mass = bowen_ball_measure(sys, mu, circle(0.3), n, eps)
    assert mass == pytest.approx(2 * eps * 3.0 ** -(n - 1), rel=1e-5)


def test_bowen_ball_measure_bernoulli_cylinder():
    sys = get_system("fullshift:2")
    mu = get_measure("bernoulli:0.5,0.5")
    w = word([0] * 40)
    n, eps = 6, 0.5
    # pinned depth is (n - 1) + ceil(ln(1/eps)) symbols
    depth = (n - 1) + math.ceil(math.log(1 / eps))
    assert bowen_ball_measure(sys, mu, w, n, eps) == pytest.approx(
        0.5 ** depth)


def test_brin_katok_tripling():
    sys = get_system("tripling")
    mu = get_measure("lebesgue-circle")
    up, lo = brin_katok(sys, mu, circle(0.3))
    assert up.value == pytest.approx(LOG3, rel=0.02)
    assert lo.value == pytest.approx(LOG3, rel=0.02)


def test_local_pressure_adds_constant_potential():
    sys = get_system("tripling")
    mu = get_measure("lebesgue-circle")
    pot = get_potential("constant:0.4")
    up0, _ = local_pressure(sys, mu, ZERO_POTENTIAL, circle(0.3))
    up, _ = local_pressure(sys, mu, pot, circle(0.3))
    assert up.value - up0.value == pytest.approx(0.4, abs=0.02)


def test_translocal_local_pressure_matches_arc_length():
    sys = get_system("tripling")
    mu = get_measure("lebesgue-circle")
    up, lo = translocal_local_pressure(sys, mu, ZERO_POTENTIAL,
                                       circle(0.3), 0.7)
    assert up.value == pytest.approx(0.7, abs=0.02)
    assert lo.value == pytest.approx(0.7, abs=0.02)


def test_uncertified_pair_rejected():
    sys = get_system("sqrtmap")
    mu = get_measure("lebesgue-circle")
    with pytest.raises(ValueError):
        brin_katok(sys, mu, circle(0.3))
