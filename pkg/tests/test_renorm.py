import numpy as np
import pytest

from grayorder import (
    Distribution,
    FeatureKind,
    RenormMethod,
    admissible,
    apply_method,
    axis_scale,
    mean_level,
    opposed_shift,
    renorm_mass,
    shift_to_mean,
    total_mass,
)
from grayorder.errors import KindMismatch, UnsupportedKind, ZeroMean


def _dist(weights: dict, kind=FeatureKind.GRAY) -> Distribution:
    masses = np.zeros(kind.bin_count)
    for level, mass in weights.items():
        masses[level] = mass
    return Distribution(kind, masses)


def _random_unit(rng, kind=FeatureKind.GRAY) -> Distribution:
    masses = rng.random(kind.bin_count)
    return Distribution(kind, masses / masses.sum())


# ---------------------------------------------------------------- mass scale

def test_mass_scale_unit_factor_is_identity():
    ref = _dist({10: 0.5, 20: 0.5})
    other = _dist({40: 0.25, 50: 0.75})
    out = renorm_mass(ref, other)
    assert np.array_equal(out.adjusted.masses, other.masses)
    assert out.clipped_mass == 0.0


def test_mass_scale_factor_half():
    ref = _dist({0: 2.0})
    other = _dist({1: 3.0, 2: 1.0})
    out = renorm_mass(ref, other)
    assert np.allclose(out.adjusted.masses, other.masses * 0.5)
    assert abs(total_mass(out.adjusted) - 2.0) <= 1e-12


def test_mass_scale_reports_mean_gap():
    out = renorm_mass(_dist({100: 1.0}), _dist({120: 1.0}))
    assert out.residual_mean_gap == pytest.approx(20.0, abs=1e-12)


def test_kind_mismatch():
    gray = _dist({0: 1.0})
    diff = _dist({0: 1.0}, FeatureKind.DIFF)
    for func in (renorm_mass, shift_to_mean, opposed_shift, axis_scale):
        with pytest.raises(KindMismatch):
            func(gray, diff)


# ---------------------------------------------------------------- axis shift

def test_shift_identical_is_noop():
    d = _dist({10: 0.5, 20: 0.5})
    out = shift_to_mean(d, d)
    assert np.array_equal(out.adjusted.masses, d.masses)
    assert out.residual_mean_gap <= 1e-9


def test_shift_point_masses():
    out = shift_to_mean(_dist({100: 1.0}), _dist({80: 1.0}))
    assert out.adjusted.masses[100] == 1.0
    assert out.clipped_mass == 0.0
    assert out.residual_mean_gap <= 1e-9


def test_shift_fractional_two_point_split():
    # delta = +0.5 splits every bin's mass evenly between neighbors
    ref = _dist({15: 0.5, 16: 0.5})  # mean 15.5
    other = _dist({10: 0.5, 20: 0.5})  # mean 15.0
    out = shift_to_mean(ref, other)
    expect = {10: 0.25, 11: 0.25, 20: 0.25, 21: 0.25}
    for level in range(256):
        assert out.adjusted.masses[level] == pytest.approx(expect.get(level, 0.0), abs=1e-15)
    assert mean_level(out.adjusted) == pytest.approx(15.5, abs=1e-9)


def test_shift_integer_delta_is_permutation():
    ref = _dist({30: 0.5, 40: 0.5})  # mean 35
    other = _dist({10: 0.25, 20: 0.5, 30: 0.25})  # mean 20, delta = +15
    out = shift_to_mean(ref, other)
    assert np.array_equal(np.sort(out.adjusted.masses), np.sort(other.masses))
    assert out.adjusted.masses[25] == 0.25 and out.adjusted.masses[35] == 0.5


def test_shift_clipping_accumulates_at_edge():
    ref = _dist({255: 1.0})
    other = _dist({250: 0.5, 255: 0.5})  # mean 252.5, delta = +2.5
    out = shift_to_mean(ref, other)
    assert out.clipped_mass > 0.0
    assert abs(total_mass(out.adjusted) - 1.0) <= 1e-12  # clipped mass kept at edge
    assert out.residual_mean_gap > 0.0


def test_shift_rejects_ratio():
    d = _dist({100: 1.0}, FeatureKind.RATIO)
    with pytest.raises(UnsupportedKind):
        shift_to_mean(d, d)


def test_shift_works_on_diff_axis():
    ref = _dist({300: 1.0}, FeatureKind.DIFF)
    other = _dist({200: 1.0}, FeatureKind.DIFF)
    out = shift_to_mean(ref, other)
    assert out.adjusted.masses[300] == 1.0


# ------------------------------------------------------------- opposed shift

def test_opposed_equal_means_unchanged():
    a = _dist({10: 0.5, 20: 0.5})
    b = _dist({5: 0.5, 25: 0.5})
    out = opposed_shift(a, b)
    assert np.array_equal(out.reference.masses, a.masses)
    assert np.array_equal(out.adjusted.masses, b.masses)


def test_opposed_point_masses_meet_in_middle():
    out = opposed_shift(_dist({100: 1.0}), _dist({80: 1.0}))
    assert out.reference.masses[90] == 1.0
    assert out.adjusted.masses[90] == 1.0
    assert out.residual_mean_gap <= 1e-9


def test_opposed_half_integer_delta():
    out = opposed_shift(_dist({100: 1.0}), _dist({81: 1.0}))
    assert mean_level(out.reference) == pytest.approx(90.5, abs=1e-9)
    assert mean_level(out.adjusted) == pytest.approx(90.5, abs=1e-9)
    assert out.residual_mean_gap <= 1e-9


def test_opposed_swap_symmetry():
    rng = np.random.default_rng(5)
    a, b = _random_unit(rng), _random_unit(rng)
    fwd = opposed_shift(a, b)
    rev = opposed_shift(b, a)
    assert np.allclose(fwd.reference.masses, rev.adjusted.masses, atol=1e-15)
    assert np.allclose(fwd.adjusted.masses, rev.reference.masses, atol=1e-15)


# ---------------------------------------------------------------- axis scale

def test_scale_equal_means_identity():
    d = _dist({40: 0.5, 60: 0.5})
    out = axis_scale(d, d)
    assert np.allclose(out.adjusted.masses, d.masses, atol=1e-12)


def test_scale_point_mass_doubles():
    out = axis_scale(_dist({100: 1.0}), _dist({50: 1.0}))
    assert out.adjusted.masses[100] == 1.0


def test_scale_pair_lands_on_integer_levels():
    ref = _dist({75: 1.0})
    other = _dist({40: 0.5, 60: 0.5})  # mean 50, factor 1.5
    out = axis_scale(ref, other)
    assert out.adjusted.masses[60] == pytest.approx(0.5, abs=1e-15)
    assert out.adjusted.masses[90] == pytest.approx(0.5, abs=1e-15)
    assert mean_level(out.adjusted) == pytest.approx(75.0, abs=1e-6)


def test_scale_zero_mean_rejected():
    with pytest.raises(ZeroMean):
        axis_scale(_dist({100: 1.0}), _dist({0: 1.0}))


def test_scale_both_zero_mean_is_noop():
    zero = _dist({0: 1.0})
    out = axis_scale(zero, zero)
    assert out.adjusted.masses[0] == 1.0
    assert out.residual_mean_gap == 0.0


def test_scale_rejected_kinds():
    diff = _dist({100: 1.0}, FeatureKind.DIFF)
    ratio = _dist({100: 1.0}, FeatureKind.RATIO)
    with pytest.raises(UnsupportedKind):
        axis_scale(diff, diff)
    with pytest.raises(UnsupportedKind):
        axis_scale(ratio, ratio)


def test_scale_clipping_conserves_mass():
    ref = _dist({225: 1.0})
    other = _dist({100: 0.5, 200: 0.5})  # mean 150, factor 1.5 -> 150 and 300
    out = axis_scale(ref, other)
    assert out.clipped_mass == pytest.approx(0.5, abs=1e-12)
    assert abs(total_mass(out.adjusted) - 1.0) <= 1e-12
    assert out.adjusted.masses[255] == pytest.approx(0.5, abs=1e-12)


# ---------------------------------------------------------- generic contracts

def test_admissibility_table():
    assert admissible(FeatureKind.GRAY, RenormMethod.AXIS_SCALE)
    assert admissible(FeatureKind.ABSDIFF, RenormMethod.OPPOSED_SHIFT)
    assert not admissible(FeatureKind.RATIO, RenormMethod.SHIFT_OTHER)
    assert not admissible(FeatureKind.RATIO, RenormMethod.OPPOSED_SHIFT)
    assert not admissible(FeatureKind.RATIO, RenormMethod.AXIS_SCALE)
    assert not admissible(FeatureKind.DIFF, RenormMethod.AXIS_SCALE)
    for kind in FeatureKind:
        assert admissible(kind, RenormMethod.MASS_SCALE)


def test_mass_conserved_under_every_method():
    rng = np.random.default_rng(6)
    for _ in range(20):
        a, b = _random_unit(rng), _random_unit(rng)
        for method in RenormMethod:
            if not admissible(FeatureKind.GRAY, method):
                continue
            out = apply_method(method, a, b)
            assert abs(total_mass(out.adjusted) - 1.0) <= 1e-12
            assert abs(total_mass(out.reference) - 1.0) <= 1e-12


def test_shift_methods_close_mean_gap():
    rng = np.random.default_rng(7)
    for _ in range(20):
        a, b = _random_unit(rng), _random_unit(rng)
        for func in (shift_to_mean, opposed_shift):
            out = func(a, b)
            if out.clipped_mass == 0.0:
                assert out.residual_mean_gap <= 1e-9
