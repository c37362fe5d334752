import numpy as np
import pytest
from numpy.testing import assert_allclose

from echo_imager.base.exceptions import (
    DimensionMismatchError, PerturbativeRegimeError, PerturbativeRegimeWarning, PhysicalityError,
)
from echo_imager.gaussian.channels import (
    GaussianChannel, agn_channel, amplifier_channel, apply_channel, exact_interaction,
    identity_channel, loss_channel, perturbative_interaction,
)
from echo_imager.gaussian.echo import (
    closed_form_perturbation, echo_residual, echo_sequence, single_photon_decompose,
)
from echo_imager.gaussian.ladder import coherence_to_quadrature, normal_correlators
from echo_imager.gaussian.states import CovarianceState, coherent_state, thermal_state, vacuum_state
from echo_imager.gaussian.symplectic import (
    is_symplectic, squeezer_blocks, symplectic_form, two_mode_squeezer,
)


class TestSymplectic:

    def test_zero_squeezing_is_identity(self):
        assert_allclose(two_mode_squeezer(0.).entries, np.eye(4))

    def test_blocks_at_unit_squeezing(self):
        S = two_mode_squeezer(1.).entries
        assert_allclose(S[:2, :2], np.cosh(1.) * np.eye(2))
        assert_allclose(S[:2, 2:], np.sinh(1.) * np.diag([1., -1.]))
        assert S[0, 0] == pytest.approx(1.5431, abs=1e-4)

    def test_random_squeezers_are_symplectic(self, rng):
        for _ in range(20):
            pairs = rng.integers(1, 4)
            S = two_mode_squeezer(rng.uniform(-2, 2, pairs), rng.uniform(0, 2 * np.pi, pairs))
            assert S.is_valid()
            assert is_symplectic((S @ S.inverse()).entries)
            assert_allclose((S @ S.inverse()).entries, np.eye(4 * pairs), atol=1e-10)

    def test_block_identities(self, rng):
        alpha, beta = squeezer_blocks(rng.uniform(0, 2, 3), rng.uniform(0, 2 * np.pi, 3))
        assert_allclose(alpha.T @ alpha - beta.T @ beta, np.eye(6), atol=1e-10)
        assert_allclose(alpha.T @ beta - beta.T @ alpha, 0., atol=1e-10)

    def test_phase_count_must_match_pairs(self):
        with pytest.raises(DimensionMismatchError):
            two_mode_squeezer([0.1, 0.2], [0., 0.1, 0.2])

    def test_symplectic_form_shape(self):
        omega = symplectic_form(2)
        assert omega.shape == (4, 4)
        assert_allclose(omega @ omega, -np.eye(4))


class TestStatesAndChannels:

    def test_identity_channel_keeps_vacuum(self):
        out = apply_channel(identity_channel(2), vacuum_state(2))
        assert_allclose(out.cov, np.eye(4))
        assert_allclose(out.mean, 0.)

    def test_loss_fixes_vacuum(self):
        out = apply_channel(loss_channel(0.7, modes=1), vacuum_state(1))
        assert_allclose(out.cov, np.eye(2))

    def test_amplifier_displaced_thermal_output(self):
        state = coherent_state(1.5 - 0.5j)
        out = apply_channel(amplifier_channel(1.2), state)
        assert_allclose(out.mean, np.sqrt(1.2) * state.mean)
        assert_allclose(out.cov, (2 * 1.2 - 1) * np.eye(2))

    def test_mean_photons(self):
        assert coherent_state(2.).mean_photons()[0] == pytest.approx(4.)
        assert thermal_state(0.3).mean_photons()[0] == pytest.approx(0.3)
        assert apply_channel(agn_channel(0.02), vacuum_state(1)).mean_photons()[0] == pytest.approx(0.02)

    def test_physicality(self):
        assert thermal_state([0.1, 2.]).is_physical()
        assert not CovarianceState(np.zeros(2), 0.5 * np.eye(2)).is_physical()

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            apply_channel(identity_channel(2), vacuum_state(1))
        with pytest.raises(DimensionMismatchError):
            CovarianceState(np.zeros(3), np.eye(4))

    def test_unphysical_parameters(self):
        with pytest.raises(PhysicalityError):
            loss_channel(1.5)
        with pytest.raises(PhysicalityError):
            amplifier_channel(0.9)

    def test_exact_channels_are_cp(self, random_rates):
        assert loss_channel(0.3).is_completely_positive()
        assert amplifier_channel(3.).is_completely_positive()
        eta = random_rates(2, 0.05)
        assert exact_interaction(eta, eta).is_completely_positive()
        assert not GaussianChannel(np.sqrt(2) * np.eye(2), np.zeros((2, 2))).is_completely_positive()


class TestPerturbativeInteraction:

    def test_zero_rates_give_identity(self):
        channel = perturbative_interaction(np.zeros((2, 2)), np.zeros((2, 2)))
        assert_allclose(channel.X, np.eye(2))
        assert_allclose(channel.Y, 0.)
        assert not channel.exact

    def test_pure_absorption_substitution(self):
        channel = perturbative_interaction(0.01 * np.eye(2))
        assert_allclose(channel.X, 0.995 * np.eye(2))
        assert_allclose(channel.Y, 0.01 * np.eye(2))

    def test_rejects_non_psd_rates(self):
        with pytest.raises(PhysicalityError):
            perturbative_interaction(np.diag([0.01, -0.01]))

    def test_warns_outside_perturbative_regime(self):
        with pytest.warns(PerturbativeRegimeWarning):
            perturbative_interaction(0.5 * np.eye(2))


class TestEcho:

    def test_no_squeezing_reduces_to_bare_channel(self):
        eta = 1e-3 * np.eye(2)
        output, _ = echo_sequence(0., perturbative_interaction(np.zeros((2, 2)), eta))
        expected = np.eye(4)
        expected[2:, 2:] += 2 * eta
        assert_allclose(output.cov, expected, atol=10 * 1e-6)

    def test_pure_absorption_excites_idlers_only(self, random_rates):
        eta = random_rates(2)
        perturbation = closed_form_perturbation([0.4, 0.9], eta_up=eta)
        assert_allclose(perturbation.signal_block, 0.)
        beta = perturbation.beta
        assert_allclose(perturbation.idler_block, beta @ eta @ beta)

    def test_pure_emission_excites_signals_only(self, random_rates):
        eta = random_rates(2)
        perturbation = closed_form_perturbation([0.4, 0.9], eta_down=eta)
        assert_allclose(perturbation.idler_block, 0.)
        alpha = perturbation.alpha
        assert_allclose(perturbation.signal_block, alpha @ eta @ alpha)

    def test_linear_part_matches_closed_form(self, random_rates):
        eta_up, eta_down = random_rates(2), random_rates(2)
        r = [0.3, 1.1]
        full, _ = echo_sequence(r, perturbative_interaction(eta_up, eta_down))
        half, _ = echo_sequence(r, perturbative_interaction(eta_up / 2, eta_down / 2))
        # the perturbative echo is exactly quadratic in the rates
        linear = 4 * half.cov - full.cov - 3 * np.eye(8)
        closed = closed_form_perturbation(r, eta_up, eta_down)
        assert_allclose(linear, 2 * closed.delta, atol=1e-12)

    def test_cross_block_prediction(self, random_rates):
        eta = random_rates(1)
        perturbation = closed_form_perturbation(0.7, eta_down=eta)
        alpha, beta = perturbation.alpha, perturbation.beta
        assert_allclose(2 * perturbation.cross_block, -alpha @ eta @ beta, atol=1e-12)

    def test_first_order_validity(self, rng, random_rates):
        for _ in range(25):
            pairs = rng.integers(1, 4)
            r = rng.uniform(0, 0.5, pairs)
            eta_up = random_rates(pairs, rng.uniform(0, 0.01))
            eta_down = random_rates(pairs, rng.uniform(0, 0.01))
            norm = max(np.linalg.norm(eta_up, 2), np.linalg.norm(eta_down, 2))
            assert echo_residual(r, eta_up, eta_down) <= 10 * norm ** 2

    def test_residual_bound_at_strong_squeezing(self, rng, random_rates):
        for _ in range(25):
            pairs = rng.integers(1, 4)
            r = rng.uniform(0, 2, pairs)
            eta_up, eta_down = random_rates(pairs), random_rates(pairs)
            delta = np.linalg.norm(eta_down - eta_up, 2)
            bound = np.exp(2 * r.max()) * np.cosh(2 * r.max()) * delta ** 2 / 4
            assert echo_residual(r, eta_up, eta_down) <= bound + 1e-12

    def test_halving_rates_quarters_the_residual(self, rng, random_rates):
        for _ in range(50):
            r = rng.uniform(0, 2, 2)
            eta_up, eta_down = random_rates(2, 0.01), random_rates(2, 0.01)
            ratio = echo_residual(r, eta_up, eta_down) / echo_residual(r, eta_up / 2, eta_down / 2)
            assert ratio == pytest.approx(4., rel=0.2)

    def test_exact_channel_residual_is_quadratic(self, random_rates):
        eta_up, eta_down = random_rates(2, 0.01), random_rates(2, 0.01)
        r = [0.5, 0.8]
        ratio = (echo_residual(r, eta_up, eta_down, exact=True)
                 / echo_residual(r, eta_up / 2, eta_down / 2, exact=True))
        assert 3.5 < ratio < 4.5

    def test_thermal_blocks_are_psd(self, rng, random_rates):
        for _ in range(10):
            perturbation = closed_form_perturbation(
                rng.uniform(0, 2, 2), random_rates(2), random_rates(2), rng.uniform(0, 6, 2),
            )
            assert perturbation.is_psd()

    def test_interaction_on_idlers_is_rejected(self):
        channel = loss_channel(0.99, modes=2)
        with pytest.raises(DimensionMismatchError):
            echo_sequence(0.5, channel)


class TestSinglePhotonDecompose:

    def test_vacuum(self):
        weight, gamma = single_photon_decompose(vacuum_state(2))
        assert weight == pytest.approx(1.)
        assert_allclose(gamma.entries, 0.)

    def test_weak_thermal_mode(self):
        weight, gamma = single_photon_decompose(thermal_state(0.003))
        assert gamma.entries[0, 0] == pytest.approx(0.003)
        assert weight == pytest.approx(0.997)

    def test_echoed_signal_is_cosh_amplified(self):
        eps, r = 1e-4, 0.8
        eta = coherence_to_quadrature(np.diag([eps, eps]))
        output, _ = echo_sequence([r, r], perturbative_interaction(np.zeros((4, 4)), eta))
        _, gamma = single_photon_decompose(output, modes=[2, 3])
        assert_allclose(np.diag(gamma.entries), eps * np.cosh(r) ** 2, rtol=1e-3)

    def test_full_echo_state_is_not_thermal(self):
        eta = coherence_to_quadrature([[1e-4]])
        output, _ = echo_sequence(0.8, perturbative_interaction(eta, eta))
        with pytest.raises(PerturbativeRegimeError):
            single_photon_decompose(output)

    def test_squeezed_residual_is_rejected(self):
        cov = np.diag([1.04, 1.01])
        with pytest.raises(PerturbativeRegimeError):
            single_photon_decompose(CovarianceState(np.zeros(2), cov))

    def test_sub_vacuum_is_unphysical(self):
        with pytest.raises(PhysicalityError):
            single_photon_decompose(CovarianceState(np.zeros(2), 0.9 * np.eye(2)))

    def test_displaced_state_is_rejected(self):
        with pytest.raises(PerturbativeRegimeError):
            single_photon_decompose(coherent_state(0.1))

    def test_ladder_map_inverts(self, rng):
        a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        gamma = a @ a.conj().T
        assert_allclose(normal_correlators(coherence_to_quadrature(gamma)), gamma, atol=1e-12)
