import numpy as np
import pytest

from app.energy import (
    ShellProfile,
    energy_profile,
    energy_profiles,
    near_origin_fraction,
    outermost_fraction,
    peak_shell,
)
from app.errors import KrylabError, LatticeError
from app.krylov import FullGramSchmidt, ThreeTermRecurrence, orthogonal_vector
from app.lattice import PotentialField


def test_m1_profile_without_disorder(clean_field):
    profile = energy_profile(clean_field, 1)
    assert profile.shells == ((0, 0.0), (1, pytest.approx(4.0)))
    assert profile.total == pytest.approx(4.0)
    assert np.allclose(profile.cumulative_fractions(), [0.0, 1.0])
    assert not profile.normalized


def test_m0_is_the_origin(disordered_field):
    profile = energy_profile(disordered_field, 0)
    assert profile.shells == ((0, 1.0),)
    assert near_origin_fraction(profile, 0) == 1.0


@pytest.mark.parametrize("c, seed", [(0.0, 1), (0.4, 2), (1.5, 3), (3.0, 4)])
def test_shell_energies_partition_squared_norm(c, seed):
    field = PotentialField(c=c, seed=seed)
    profile = energy_profile(field, 20)
    m20 = orthogonal_vector(field, 20)
    assert sum(profile.energies) == pytest.approx(m20.squared_norm, rel=1e-10)
    assert profile.total == pytest.approx(m20.squared_norm, rel=1e-10)


def test_profiles_from_one_pass_match_single_runs(disordered_field):
    profiles = energy_profiles(disordered_field, [5, 12, 18])
    single = energy_profile(disordered_field, 12)
    assert sorted(profiles) == [5, 12, 18]
    assert np.allclose(profiles[12].energies, single.energies, rtol=1e-12)


def test_outermost_shell_carries_energy_without_disorder(clean_field):
    mode = ThreeTermRecurrence(reorthogonalize_every=5, window=16)
    profiles = energy_profiles(clean_field, range(1, 61), mode)
    for k, profile in profiles.items():
        assert profile.energies[-1] > 0, k
        assert 0.0 < outermost_fraction(profile) <= 1.0


@pytest.mark.parametrize("c", [0.0, 0.5, 1.5])
def test_fractions_close_at_one_for_every_depth(c):
    profiles = energy_profiles(PotentialField(c=c, seed=1), range(1, 40), FullGramSchmidt())
    for k, profile in profiles.items():
        assert profile.cumulative_fractions()[-1] == 1.0, k
        assert outermost_fraction(profile) <= 1.0, k
        assert profile.total == pytest.approx(sum(profile.energies), rel=1e-14)


def test_near_origin_fraction_is_monotone_in_cut(disordered_field):
    profile = energy_profile(disordered_field, 15)
    fractions = [near_origin_fraction(profile, s) for s in range(16)]
    assert np.all(np.diff(fractions) >= -1e-15)
    assert fractions[-1] == 1.0
    assert all(0.0 <= f <= 1.0 for f in fractions)


def test_near_origin_fraction_rejects_out_of_range_cut(disordered_field):
    profile = energy_profile(disordered_field, 4)
    with pytest.raises(LatticeError):
        near_origin_fraction(profile, 5)
    with pytest.raises(LatticeError):
        near_origin_fraction(profile, -1)


def test_zero_profile_has_no_fractions():
    empty = ShellProfile(c=0.0, k=1, shells=((0, 0.0), (1, 0.0)), total=0.0, log_norm_sq=float("-inf"))
    with pytest.raises(KrylabError):
        near_origin_fraction(empty, 0)
    with pytest.raises(KrylabError):
        outermost_fraction(empty)


def test_peak_shell(clean_field):
    assert peak_shell(energy_profile(clean_field, 1)) == 1
    profile = ShellProfile(c=0.0, k=3, shells=((0, 0.1), (1, 2.0), (2, 0.5), (3, 1.0)), total=3.6, log_norm_sq=0.0)
    assert peak_shell(profile) == 1


def test_overflowing_profile_is_normalized():
    field = PotentialField(c=10.0, seed=7)
    profile = energy_profile(field, 300, ThreeTermRecurrence())
    assert profile.normalized
    assert profile.total == pytest.approx(1.0)
    assert profile.log_norm_sq > np.log(np.finfo(float).max)
    assert profile.cumulative_fractions()[-1] == pytest.approx(1.0)


@pytest.mark.slow
def test_weak_disorder_spreads_energy_outward():
    mode = ThreeTermRecurrence(reorthogonalize_every=5, window=64)
    weak = energy_profile(PotentialField(c=0.1, seed=5), 200, mode)
    strong = energy_profile(PotentialField(c=3.0, seed=5), 200, mode)
    assert near_origin_fraction(weak, 50) < near_origin_fraction(strong, 50)
    assert peak_shell(weak) > 100
