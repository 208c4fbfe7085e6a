import math

import numpy as np
import pytest

from cle_lab import params as P


def test_bessel_dimension_values():
    assert P.bessel_dimension(4, -1) == 1.5
    assert P.bessel_dimension(6, 0) == pytest.approx(5 / 3, abs=1e-15)
    for kappa in (0.5, 2, 3, 4, 6, 8):
        assert P.bessel_dimension(kappa, -2) == 1.0
    with pytest.raises(ValueError):
        P.bessel_dimension(0, 0)
    with pytest.raises(ValueError):
        P.bessel_dimension(-1, 0)


def test_companion_rho_fixed_points_and_involution():
    assert P.companion_rho(3, -1.5) == -1.5
    assert P.companion_rho(6, 0) == 0.0
    assert P.companion_rho(4, -1) == -1.0
    # exact involution on a dyadic grid (no representation error in kappa-6-rho)
    for kappa in np.arange(0.25, 8.01, 0.25):
        for rho in np.arange(-4, 4.01, 0.125):
            assert P.companion_rho(kappa, P.companion_rho(kappa, rho)) == rho
    rng = np.random.default_rng(0)
    for _ in range(200):
        kappa = rng.uniform(0.1, 8)
        rho = rng.uniform(-4, 4)
        assert P.companion_rho(kappa, P.companion_rho(kappa, rho)) == pytest.approx(
            rho, abs=1e-12
        )


def test_bcle_admissible():
    a = P.bcle_admissible(3, -1.5)
    assert a.admissible and a.boundary_case is None
    a = P.bcle_admissible(6, 0)
    assert a.admissible and a.boundary_case is None
    assert not P.bcle_admissible(3, 0).admissible
    # degenerate endpoints accepted, tagged
    assert P.bcle_admissible(3, -2).boundary_case == "single-true-loop"
    assert P.bcle_admissible(3, -1).boundary_case == "single-false-loop"
    assert P.bcle_admissible(6, -1).boundary_case == "single-true-loop"
    assert P.bcle_admissible(6, 1).boundary_case == "single-false-loop"
    for bad in (2.0, 8.0, 1.0, 9.0):
        with pytest.raises(ValueError):
            P.bcle_admissible(bad, 0.0)


def test_admissible_interval_symmetry():
    rng = np.random.default_rng(1)
    for _ in range(300):
        kappa = rng.uniform(2.01, 7.99)
        rho = rng.uniform(-4, 4)
        a = P.bcle_admissible(kappa, rho).admissible
        b = P.bcle_admissible(kappa, P.companion_rho(kappa, rho)).admissible
        assert a == b


def test_nested_rhos_kp():
    rho_l, rho_r = P.nested_rhos_kp(6, -5 / 3)
    assert rho_r == pytest.approx(-0.5, abs=1e-15)
    assert rho_l == pytest.approx(-0.5, abs=1e-15)
    for kp in (4.5, 5.0, 6.0, 7.5):
        rho_l, rho_r = P.nested_rhos_kp(kp, -2.0)
        assert rho_r == 0.0
        assert rho_l == pytest.approx(kp / 2 - 4)
    # inadmissible input: strict raises, non-strict computes + flags cross-check
    with pytest.raises(ValueError):
        P.nested_rhos_kp(16 / 3, -5 / 2)
    rho_l, rho_r = P.nested_rhos_kp(16 / 3, -5 / 2, strict=False)
    assert rho_r == pytest.approx(2 / 3, abs=1e-12)
    assert rho_l == pytest.approx(-2.0, abs=1e-12)
    # out-of-range input produces out-of-range companions: flags catch it
    assert not P.bcle_admissible(16 / 3, rho_l).admissible
    a = P.bcle_admissible(16 / 3, rho_r)
    assert (not a.admissible) or a.boundary_case == "single-false-loop"


def test_nested_rhos_kp_sum_rule_and_admissibility():
    rng = np.random.default_rng(2)
    for _ in range(300):
        kp = rng.uniform(4.01, 7.99)
        kappa = 16 / kp
        rho = rng.uniform(-2, kappa - 4)
        rho_l, rho_r = P.nested_rhos_kp(kp, rho)
        assert rho_l + rho_r == pytest.approx(kp / 2 - 4, abs=1e-12)
        assert P.bcle_admissible(kp, rho_l).admissible
        assert P.bcle_admissible(kp, rho_r).admissible


def test_nested_rhos_k():
    # nonempty rho' interval [kappa'-6, 0] needs kappa > 8/3
    for kappa in (2.8, 3.0, 3.5):
        rho_l, rho_r = P.nested_rhos_k(kappa, 0.0)
        assert rho_l == pytest.approx(kappa - 4)
        assert rho_r == pytest.approx(-kappa / 2)
        # rho' = kappa'-6 mirrors the rho'=0 case under L <-> R
        kp = 16 / kappa
        rho_l2, rho_r2 = P.nested_rhos_k(kappa, kp - 6.0)
        assert rho_l2 == pytest.approx(rho_r, abs=1e-12)
        assert rho_r2 == pytest.approx(rho_l, abs=1e-12)
    rho_l, rho_r = P.nested_rhos_k(3, -1 / 3)
    assert rho_l == pytest.approx(-5 / 4, abs=1e-12)
    assert rho_r == pytest.approx(-5 / 4, abs=1e-12)
    with pytest.raises(ValueError):
        P.nested_rhos_k(3, 0.5)


def test_beta_rho_endpoints_and_midpoint():
    for kp in (4.5, 16 / 3, 6.0, 7.0):
        kappa = 16 / kp
        assert P.beta_to_rho(1, kp) == -2.0
        assert P.beta_to_rho(-1, kp) == pytest.approx(kappa - 4)
        assert P.beta_to_rho(0, kp) == pytest.approx((kappa - 6) / 2, abs=1e-10)
        # substituting rho=(kappa-6)/2 into the closed form must give beta=0
        assert P.rho_to_beta((kappa - 6) / 2, kp) == pytest.approx(0.0, abs=1e-12)


def test_beta_rho_symmetry_and_roundtrip():
    rng = np.random.default_rng(3)
    for kp in (4.7, 16 / 3, 6.0):
        kappa = 16 / kp
        for _ in range(50):
            beta = rng.uniform(-1, 1)
            r1 = P.beta_to_rho(beta, kp)
            r2 = P.beta_to_rho(-beta, kp)
            assert r1 + r2 == pytest.approx(kappa - 6, abs=1e-10)
            assert P.rho_to_beta(r1, kp) == pytest.approx(beta, abs=1e-9)


def test_beta_to_rho_monotone_grid():
    for kp in (4.5, 6.0, 7.5):
        betas = np.linspace(-1, 1, 1000)
        rhos = np.array([P.beta_to_rho(b, kp) for b in betas])
        assert np.all(np.diff(rhos) < 0)  # strictly decreasing in beta


def test_cluster_color_prob():
    assert P.cluster_color_prob(16 / 3) == pytest.approx(0.5, abs=1e-12)
    assert P.cluster_color_prob(24 / 5) == pytest.approx(1 / 3, abs=1e-12)
    assert P.cluster_color_prob(4 + 1e-9) == pytest.approx(0.25, abs=1e-6)
    for bad in (4.0, 6.0, 7.0):
        with pytest.raises(ValueError):
            P.cluster_color_prob(bad)


def test_fk_q():
    assert P.fk_q(6) == pytest.approx(1.0, abs=1e-12)
    assert P.fk_q(16 / 3) == pytest.approx(2.0, abs=1e-12)
    assert P.fk_q(24 / 5) == pytest.approx(3.0, abs=1e-12)
    assert P.fk_q(4) == pytest.approx(4.0, abs=1e-12)
    assert P.fk_q(8) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(ValueError):
        P.fk_q(3.9)


def test_p_times_q_is_one():
    for kp in (16 / 3, 24 / 5):
        assert P.cluster_color_prob(kp) * P.fk_q(kp) == pytest.approx(1.0, abs=1e-12)


def test_dimensions():
    trace, carpet = P.dimensions(4)
    assert trace == 1.5
    assert carpet == 15 / 8  # exact in binary floats
    trace, carpet = P.dimensions(6)
    assert trace == pytest.approx(1.75)
    assert carpet == pytest.approx(91 / 48, abs=1e-15)
    trace, carpet = P.dimensions(8 / 3)
    assert trace == pytest.approx(4 / 3, abs=1e-15)
    assert carpet == pytest.approx(2.0, abs=1e-12)
    trace, carpet = P.dimensions(2)
    assert carpet is None


def test_gff_constants():
    c = P.gff_constants(4)
    assert c.lam == pytest.approx(math.pi / 2, abs=1e-15)
    assert c.lam_prime == pytest.approx(math.pi / 2, abs=1e-15)
    assert c.chi == pytest.approx(0.0, abs=1e-15)
    c = P.gff_constants(2)
    assert c.chi == pytest.approx(math.sqrt(2) / 2, abs=1e-14)
    rng = np.random.default_rng(4)
    for _ in range(100):
        kappa = rng.uniform(0.05, 4)
        c = P.gff_constants(kappa)
        assert 2 * (c.lam - c.lam_prime) == pytest.approx(math.pi * c.chi, abs=1e-12)


def test_bubble_exponent():
    b, ok = P.bubble_exponent(6)
    assert b == pytest.approx(1 / 3, abs=1e-15) and ok
    b, ok = P.bubble_exponent(8)
    assert b == 0.0 and not ok
    b, ok = P.bubble_exponent(4)
    assert b == 1.0 and not ok


def test_process_params():
    p = P.ProcessParams(kappa=3, rho=-3, beta=0.5)
    assert p.delta == pytest.approx(1 / 3, abs=1e-15)
    assert p.regime == "generalized-trunk"
    assert P.ProcessParams(6, 0).regime == "classical"
    assert P.ProcessParams(4, -2).regime == "boundary-case"
    assert P.ProcessParams(3, -2.2).regime == "light-cone"
    assert P.ProcessParams(6, -3).regime == "generalized-trunk"
    with pytest.raises(ValueError):
        P.ProcessParams(9, 0)
    with pytest.raises(ValueError):
        P.ProcessParams(3, -4)  # below -2-kappa/2
    with pytest.raises(ValueError):
        P.ProcessParams(4, -1, mu=0.3)  # mu without rho=-2
    d = p.as_dict()
    assert d["dual_kappa"] == pytest.approx(16 / 3)
    assert d["companion_rho"] == 0.0


def test_provenance_flags():
    assert P.PROVENANCE["beta_to_rho"] == "conjectured"
    assert P.PROVENANCE["cluster_color_prob"] == "conjectured"
    assert P.PROVENANCE["fk_q"] == "conjectured"
    assert P.PROVENANCE["bessel_dimension"] == "closed-form"
