"""Dressed exponents, amplitudes and memory factors against first principles.

The closed forms are checked against the defining quadratic, against limits
with known answers, and against a direct numerical integration of the
amplitude equations (the package's own oracle route).
"""

import cmath
import math

import numpy as np
import pytest

from dresslines import (
    DriveField,
    LevelScheme,
    RegimeError,
    amplitude_m,
    amplitude_n,
    doublet_resolved,
    dressed_exponents,
    memory_factors,
)
from dresslines.oracle import OdeSettings, drive_trajectory

rng = np.random.default_rng(20260821)


def random_case():
    gm, gn, gl = rng.uniform(0.2, 5.0, 3)
    Om = rng.uniform(-20.0, 20.0)
    G = rng.uniform(0.0, 20.0)
    return LevelScheme(gamma_m=gm, gamma_n=gn, gamma_l=gl), DriveField(G=G, Omega=Om)


def test_exponents_satisfy_quadratic():
    # alpha^2 - (Gamma + i*Omega)*alpha + gamma_m*(gamma_n + i*Omega) + G^2 = 0
    for _ in range(300):
        scheme, drive = random_case()
        pair = dressed_exponents(scheme, drive)
        for alpha in (pair.alpha1, pair.alpha2):
            res = (alpha * alpha
                   - (scheme.gamma_sum + 1j * drive.Omega) * alpha
                   + scheme.gamma_m * (scheme.gamma_n + 1j * drive.Omega)
                   + drive.G**2)
            scale = max(abs(alpha) ** 2, 1.0)
            assert abs(res) < 1e-12 * scale


def test_sum_and_product_of_roots():
    for _ in range(300):
        scheme, drive = random_case()
        pair = dressed_exponents(scheme, drive)
        s = pair.alpha1 + pair.alpha2
        p = pair.alpha1 * pair.alpha2
        s_ref = scheme.gamma_sum + 1j * drive.Omega
        p_ref = scheme.gamma_m * (scheme.gamma_n + 1j * drive.Omega) + drive.G**2
        assert abs(s - s_ref) < 1e-12 * max(abs(s_ref), 1.0)
        assert abs(p - p_ref) < 1e-11 * max(abs(p_ref), 1.0)


def test_labeling_order():
    # Component 1 carries the larger frequency shift.
    for _ in range(200):
        scheme, drive = random_case()
        pair = dressed_exponents(scheme, drive)
        assert pair.alpha1.imag >= pair.alpha2.imag - 1e-12 * (1 + abs(pair.alpha1))


def test_weak_drive_limit():
    scheme = LevelScheme(gamma_m=1.0, gamma_n=2.0, gamma_l=0.5)
    pair = dressed_exponents(scheme, DriveField(G=1e-8, Omega=7.0))
    assert pair.alpha1 == pytest.approx(2.0 + 7.0j, abs=1e-8)
    assert pair.alpha2 == pytest.approx(1.0 + 0.0j, abs=1e-8)
    # G = 0 exactly: the uncoupled decay rates
    pair0 = dressed_exponents(scheme, DriveField(G=0.0, Omega=7.0))
    assert pair0.alpha1 == pytest.approx(2.0 + 7.0j, abs=1e-14)
    assert pair0.alpha2 == pytest.approx(1.0 + 0.0j, abs=1e-14)


def test_strong_drive_limit():
    # G dominating everything: alpha -> (Gamma + i*Omega)/2 +- i*G
    scheme = LevelScheme(gamma_m=1.0, gamma_n=2.0, gamma_l=0.5)
    G = 1e5
    pair = dressed_exponents(scheme, DriveField(G=G, Omega=3.0))
    half = 0.5 * (3.0 + 3.0j)
    assert pair.alpha1 == pytest.approx(half + 1j * G, rel=1e-6)
    assert pair.alpha2 == pytest.approx(half - 1j * G, rel=1e-6)


def test_equal_damping_real_parts():
    # gamma_m = gamma_n: both decay rates stick at the common gamma while
    # the shifts split by sqrt(Omega^2 + 4G^2).
    scheme = LevelScheme(gamma_m=1.3, gamma_n=1.3, gamma_l=0.5)
    for Om, G in ((0.0, 4.0), (5.0, 2.0), (-8.0, 3.0)):
        pair = dressed_exponents(scheme, DriveField(G=G, Omega=Om))
        assert pair.alpha1.real == pytest.approx(1.3, rel=1e-12)
        assert pair.alpha2.real == pytest.approx(1.3, rel=1e-12)
        split = math.hypot(Om, 2.0 * G)
        assert pair.alpha1.imag - pair.alpha2.imag == pytest.approx(split, rel=1e-12)
        assert pair.alpha1.imag + pair.alpha2.imag == pytest.approx(Om, abs=1e-12 * (1 + abs(Om)))


def test_amplitude_weights_sum_to_one():
    for _ in range(200):
        scheme, drive = random_case()
        pair = dressed_exponents(scheme, drive)
        if pair.is_degenerate:
            continue
        assert abs(pair.A1 + pair.A2 - 1.0) < 1e-12


def test_amplitudes_match_time_domain():
    # Closed-form a_m, a_n against direct integration of the coupled pair.
    for _ in range(8):
        scheme, drive = random_case()
        pair = dressed_exponents(scheme, drive)
        rate = min(pair.alpha1.real, pair.alpha2.real)
        ts = np.linspace(0.0, 3.0 / rate, 40)[1:]
        am_ref, an_ref = drive_trajectory(scheme, drive, ts,
                                          settings=OdeSettings(rtol=1e-12, atol=1e-14))
        am = amplitude_m(pair, drive.G, ts)
        an = amplitude_n(pair, ts)
        assert np.max(np.abs(am - am_ref)) < 1e-9
        assert np.max(np.abs(an - an_ref)) < 1e-9


def test_amplitude_initial_conditions():
    scheme = LevelScheme(gamma_m=0.7, gamma_n=1.9, gamma_l=1.0)
    drive = DriveField(G=4.0, Omega=-3.0)
    pair = dressed_exponents(scheme, drive)
    assert amplitude_m(pair, drive.G, 0.0) == pytest.approx(0.0, abs=1e-14)
    assert amplitude_n(pair, 0.0) == pytest.approx(1.0, abs=1e-14)
    # d a_m/dt at 0 is +i*G * a_n(0)
    dt = 1e-7
    deriv = (amplitude_m(pair, drive.G, dt) - amplitude_m(pair, drive.G, 0.0)) / dt
    assert deriv == pytest.approx(1j * drive.G, rel=1e-5)


def test_degenerate_branch():
    # Exponents collapse exactly at Omega = 0, gamma_n - gamma_m = 2G.
    G = 1.3
    scheme = LevelScheme(gamma_m=1.0, gamma_n=1.0 + 2.0 * G, gamma_l=0.8)
    drive = DriveField(G=G, Omega=0.0)
    pair = dressed_exponents(scheme, drive)
    assert pair.is_degenerate
    assert math.isnan(pair.A1.real)
    ts = np.linspace(0.0, 2.0, 25)[1:]
    am_ref, an_ref = drive_trajectory(scheme, drive, ts,
                                      settings=OdeSettings(rtol=1e-12, atol=1e-14))
    assert np.max(np.abs(amplitude_m(pair, G, ts) - am_ref)) < 1e-9
    assert np.max(np.abs(amplitude_n(pair, ts) - an_ref)) < 1e-9


def test_memory_factors_basics():
    M1, M2 = memory_factors(DriveField(G=1.0, Omega=2.0))
    # Omega = 2G: frozen reference (1 + 1/sqrt(2))/2 from the pre-build oracle
    assert M1 == pytest.approx(0.8535533905932737622, rel=1e-15)
    assert M1 + M2 == pytest.approx(1.0, abs=1e-15)
    # strong drive: both components share the shift equally
    M1, M2 = memory_factors(DriveField(G=100.0, Omega=1e-3))
    assert M1 == pytest.approx(0.5, abs=1e-5)
    # no drive, positive detuning: full memory on component 1
    assert memory_factors(DriveField(G=0.0, Omega=5.0)) == (1.0, 0.0)
    with pytest.raises(RegimeError):
        memory_factors(DriveField(G=0.0, Omega=0.0))


def test_memory_factor_is_shift_derivative():
    # At equal damping, M_1 equals d(Im alpha_1)/d(Omega) exactly.
    scheme = LevelScheme(gamma_m=1.1, gamma_n=1.1, gamma_l=1.0)
    for Om, G in ((3.0, 2.0), (-6.0, 1.5), (0.5, 8.0)):
        h = 1e-6 * max(1.0, abs(Om))
        up = dressed_exponents(scheme, DriveField(G=G, Omega=Om + h))
        dn = dressed_exponents(scheme, DriveField(G=G, Omega=Om - h))
        fd = (up.alpha1.imag - dn.alpha1.imag) / (2.0 * h)
        M1, _ = memory_factors(DriveField(G=G, Omega=Om))
        assert fd == pytest.approx(M1, rel=1e-6)


def test_memory_nan_on_pair_at_undefined_point():
    scheme = LevelScheme(gamma_m=1.0, gamma_n=3.0, gamma_l=1.0)
    pair = dressed_exponents(scheme, DriveField(G=0.0, Omega=0.0))
    assert math.isnan(pair.M1) and math.isnan(pair.M2)


def test_doublet_resolved():
    scheme = LevelScheme(gamma_m=1.0, gamma_n=1.0, gamma_l=0.5)
    wide = dressed_exponents(scheme, DriveField(G=50.0, Omega=0.0))
    narrow = dressed_exponents(scheme, DriveField(G=1.0, Omega=0.0))
    assert doublet_resolved(wide, scheme.gamma_l)
    assert not doublet_resolved(narrow, scheme.gamma_l)


def test_pair_carries_damping_summary():
    scheme = LevelScheme(gamma_m=0.4, gamma_n=2.6, gamma_l=1.0)
    pair = dressed_exponents(scheme, DriveField(G=2.0, Omega=1.0))
    assert pair.Gamma == pytest.approx(3.0)
    assert pair.gamma_diff == pytest.approx(2.2)
