import numpy as np
import pytest

from cle_lab import stats as S


def test_box_counting_straight_segment():
    t = np.linspace(0, 1, 20_000)
    pts = t + 1j * t
    rep = S.box_counting_dimension(pts, oracle=1.0, tolerance=0.05)
    assert abs(rep.estimate - 1.0) < 0.05
    assert rep.verdict == "pass"


def test_box_counting_filled_square():
    rng = np.random.default_rng(0)
    pts = rng.random(200_000) + 1j * rng.random(200_000)
    rep = S.box_counting_dimension(pts, oracle=2.0, tolerance=0.05)
    assert abs(rep.estimate - 2.0) < 0.05


def test_box_counting_bootstrap_ci():
    t = np.linspace(0, 1, 5_000)
    rep = S.box_counting_dimension(t + 0j, n_boot=200, oracle=1.0, tolerance=0.05)
    assert rep.ci_lo <= rep.estimate <= rep.ci_hi
    assert rep.verdict == "pass"


def test_box_counting_input_validation():
    with pytest.raises(ValueError):
        S.box_counting_dimension(np.zeros(10, dtype=complex))
    with pytest.raises(ValueError):
        S.box_counting_dimension(np.linspace(0, 1, 2000) + 0j, scales=[0.5, 0.25])


def test_schramm_oracle_symmetry_and_kappa4():
    for kappa in (2.0, 8 / 3, 4.0, 6.0):
        assert S.schramm_oracle(kappa, np.pi / 2) == pytest.approx(0.5, abs=1e-12)
        th = 0.7
        assert S.schramm_oracle(kappa, th) + S.schramm_oracle(kappa, np.pi - th) == pytest.approx(
            1.0, abs=1e-10
        )
    # kappa = 4 closed form: P = 1 - theta/pi
    for th in (0.3, 1.0, 2.0, 2.8):
        assert S.schramm_oracle(4.0, th) == pytest.approx(1 - th / np.pi, abs=1e-10)


def test_passes_left_windings():
    # vertical segment through i: z to its right is "left-passed"
    pts = 1j * np.linspace(0, 2, 100)
    assert S.passes_left(pts, 1.0 + 0.5j)
    assert not S.passes_left(pts, -1.0 + 0.5j)


def test_left_passage_mirrored_complement():
    rng = np.random.default_rng(1)
    # synthetic "traces": vertical segments at random real offsets
    traces = [x + 1j * np.linspace(0, 5, 50) for x in rng.normal(0, 1, 400)]
    z = 0.3 + 0.4j
    hits = sum(S.passes_left(t, z) for t in traces)
    mirr = sum(S.passes_left(-np.conj(t), -np.conj(z)) for t in traces)
    assert hits + mirr == 400


def test_cardy_oracle_values():
    assert S.cardy_oracle(1.0) == pytest.approx(0.5, abs=1e-12)
    # complementary rectangles: P(r) + P(1/r) = 1
    for r in (1.5, 2.0, 3.0):
        assert S.cardy_oracle(r) + S.cardy_oracle(1 / r) == pytest.approx(1.0, abs=1e-9)
    # strictly decreasing in the aspect ratio
    vals = [S.cardy_oracle(r) for r in (0.5, 1.0, 1.5, 2.0, 3.0)]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    # cross-validated against direct percolation MC (0.167 +- 0.015 at n=150):
    assert S.cardy_oracle(2.0) == pytest.approx(0.1756, abs=1e-3)


def test_crossing_report_degenerate():
    rep = S.crossing_report(100, 100, 0.0)
    assert rep.oracle == 1.0 and rep.verdict == "pass"


def test_two_sample_identical_and_separated():
    x = np.linspace(0, 1, 500)
    rep = S.two_sample(x, x)
    assert rep.estimate == pytest.approx(1.0)
    assert rep.verdict == "pass"
    rng = np.random.default_rng(2)
    a = rng.normal(0, 1, 1000)
    b = rng.normal(1, 1, 1000)
    rep = S.two_sample(a, b)
    assert rep.estimate < 1e-6
    assert rep.verdict == "fail"
    rep = S.two_sample(a[:10], b[:10])
    assert rep.verdict == "inconclusive"


def test_report_serializable():
    rep = S.binomial_report("x", 50, 100, 0.5, "enumeration")
    d = rep.to_json()
    assert '"verdict"' in d and '"oracle_provenance"' in d
