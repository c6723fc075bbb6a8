"""
Tests for Kraus/Stinespring conversions, presets and parametrized isometries.
"""
import numpy as np
import pytest

from qhelper.core.channels import (
    ChannelParams, KrausChannel, StinespringIsometry, amplitude_damping, apply_channel,
    apply_isometry, default_env_dim, dephasing, depolarizing, discard, generator_from_theta,
    identity, kraus_to_stinespring, params_to_isometry, preset_from_string, random_isometry,
    random_params, stinespring_to_kraus, trace_and_replace,
)
from qhelper.core.errors import ChannelError, LayoutError
from qhelper.core.qcore import (
    PureState, SystemLayout, bell_state, diagonal_state, entropy, maximally_mixed, mutual_info,
    partial_trace, purify, random_density, random_pure, trace_distance,
)


def test_kraus_completeness_enforced():
    with pytest.raises(ChannelError):
        KrausChannel(2, 2, (0.5 * np.eye(2),))


def test_isometry_condition_enforced():
    with pytest.raises(ChannelError):
        StinespringIsometry(2, 2, 1, np.array([[1, 0], [1, 0]]))


@pytest.mark.parametrize("channel", [
    identity(2), discard(2), depolarizing(0.3), dephasing(0.6), amplitude_damping(0.2),
    depolarizing(0.5, 3), trace_and_replace(np.diag([0.2, 0.8])),
])
def test_stinespring_matches_kraus(channel):
    iso = kraus_to_stinespring(channel)
    rho = random_density(SystemLayout.of(B=channel.dim_in), seed=4)
    via_iso = partial_trace(apply_isometry(rho, iso, "B", ("C", "E")), "C")
    via_kraus = apply_channel(rho, channel, "B", "C")
    assert trace_distance(via_iso, via_kraus) < 1e-10
    back = stinespring_to_kraus(iso)
    assert np.allclose(back(rho.matrix), channel(rho.matrix))


def test_depolarizing_full_gives_maximally_mixed():
    out = apply_channel(diagonal_state([1.0, 0.0], "B"), depolarizing(1.0), "B")
    assert trace_distance(out, maximally_mixed(2, "B")) < 1e-12


def test_dephasing_kills_coherences():
    plus = PureState(SystemLayout.of(B=2), np.array([1.0, 1.0]) / np.sqrt(2))
    out = apply_channel(plus, dephasing(1.0), "B")
    assert abs(out.matrix[0, 1]) < 1e-12


def test_amplitude_damping_full_decay():
    out = apply_channel(diagonal_state([0.0, 1.0], "B"), amplitude_damping(1.0), "B")
    assert out.matrix[0, 0].real == pytest.approx(1.0)


def test_discard_has_trivial_output():
    iso = kraus_to_stinespring(discard(2))
    assert iso.dims == (2, 1, 2)


def test_probability_range_checked():
    with pytest.raises(ChannelError):
        depolarizing(1.5)


def test_generator_is_anti_hermitian():
    theta = np.random.default_rng(1).normal(size=16)
    g = generator_from_theta(theta, 4)
    assert np.allclose(g, -g.conj().T)


def test_params_give_isometries():
    rng = np.random.default_rng(2)
    for _ in range(10):
        params = random_params(2, 2, 4, rng)
        iso = params_to_isometry(params)
        assert np.allclose(iso.V.conj().T @ iso.V, np.eye(2), atol=1e-10)


def test_params_shape_checked():
    with pytest.raises(ChannelError):
        ChannelParams(2, 2, 2, np.zeros(5))
    with pytest.raises(ChannelError):
        ChannelParams(5, 2, 2, np.zeros(16))


def test_zero_theta_is_first_columns_of_identity():
    iso = params_to_isometry(ChannelParams(2, 2, 4, np.zeros(64)))
    assert np.allclose(iso.V, np.eye(8)[:, :2])


def test_random_isometry_seeded():
    a = random_isometry(2, 2, 4, seed=3)
    b = random_isometry(2, 2, 4, seed=3)
    assert np.array_equal(a.V, b.V)


def test_random_isometry_seeds_differ():
    assert not np.allclose(random_isometry(2, 2, 4, seed=7).V, random_isometry(2, 2, 4, seed=8).V)


@pytest.mark.parametrize("dims", [(2, 2, 1), (2, 2, 2), (2, 3, 4), (3, 2, 2)])
def test_random_isometries_are_isometries(dims):
    for seed in range(25):
        v = random_isometry(*dims, seed=seed).V
        assert np.max(np.abs(v.conj().T @ v - np.eye(dims[0]))) <= 1e-9


def test_default_env_dim():
    assert default_env_dim(2, 3) == 6


def test_apply_isometry_preserves_purity_and_marginals():
    psi = purify(bell_state())
    iso = random_isometry(2, 2, 4, seed=8)
    phi = apply_isometry(psi, iso, "B", ("C", "E"))
    assert isinstance(phi, PureState)
    assert phi.labels == ("A", "C", "E", "R")
    assert entropy(phi, "A") == pytest.approx(1.0, abs=1e-10)


def test_helper_output_obeys_data_processing():
    for i in range(30):
        psi = random_pure(SystemLayout.of(A=2, B=2, R=2), seed=[11, i])
        phi = apply_isometry(psi, random_isometry(2, 2, 3, seed=[12, i]), "B", ("C", "E"))
        assert mutual_info(phi, ("R", "A"), "C") <= mutual_info(psi, ("R", "A"), "B") + 1e-8


def test_apply_isometry_label_collision():
    psi = purify(bell_state())
    with pytest.raises(LayoutError):
        apply_isometry(psi, kraus_to_stinespring(identity(2)), "B", ("A", "E"))


def test_apply_isometry_dimension_mismatch():
    psi = purify(bell_state())
    with pytest.raises(ChannelError):
        apply_isometry(psi, random_isometry(3, 2, 2, seed=0), "B")


@pytest.mark.parametrize("spec, dim_out", [
    ("identity", 2), ("discard", 1), ("depolarizing:0.25", 2),
    ("dephasing:0.5", 2), ("amplitude_damping:0.1", 2), ("replace:0.5,0.25,0.25", 3),
])
def test_preset_from_string(spec, dim_out):
    assert preset_from_string(spec).dim_out == dim_out


@pytest.mark.parametrize("spec", ["bogus", "depolarizing:x", "replace:0.5,0.6"])
def test_preset_from_string_rejects(spec):
    with pytest.raises(ChannelError):
        preset_from_string(spec)
