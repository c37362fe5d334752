import numpy as np
import pytest
from numpy.testing import assert_allclose

from echo_imager.base.exceptions import DimensionMismatchError, PhysicalityError
from echo_imager.fock.channels import (
    agn_channel, amp_kraus, apply_grandfather, apply_kraus, apply_unitary, loss_kraus,
)
from echo_imager.fock.measure import (
    dephase_sectors, fidelity, measure_counts, mutual_information, sector_counts, trace_distance,
)
from echo_imager.fock.operators import (
    basis_index, coherent_fock_state, number_operator, number_state, two_mode_squeeze_unitary,
    unitarity_defect, vacuum,
)
from echo_imager.fock.oracle import echo_click_probabilities, toy_echo_oracle
from echo_imager.fock.qfi import qfi_numeric
from echo_imager.fock.states import FockDensityMatrix


def mean_photons(state):
    return state.expectation(number_operator(state.cutoff)).real


class TestKraus:

    def test_unit_transmissivity_is_identity(self):
        channel = loss_kraus(1., 4)
        assert_allclose(channel.operators[0], np.eye(5))
        assert all(np.allclose(op, 0.) for op in channel.operators[1:])

    def test_single_photon_beamsplitter(self):
        out = apply_kraus(number_state(1, 3), loss_kraus(0.75, 3))
        assert_allclose(out.populations()[:2], [0.25, 0.75])

    def test_loss_scales_coherent_mean(self):
        eta = np.exp(-0.01)
        out = apply_kraus(coherent_fock_state(2., 30), loss_kraus(eta, 30))
        assert mean_photons(out) == pytest.approx(4 * eta, rel=1e-8)

    def test_completeness(self):
        assert loss_kraus(0.6, 8).completeness_defect() < 1e-8
        assert amp_kraus(1.01, 8).completeness_defect(levels=3) < 1e-8

    def test_unit_gain_is_identity(self):
        state = number_state(2, 4)
        assert trace_distance(apply_kraus(state, amp_kraus(1., 4)), state) < 1e-15

    def test_amplified_vacuum_is_thermal(self):
        out = apply_kraus(vacuum(1, 8), amp_kraus(1.01, 8))
        assert out.populations()[1] == pytest.approx(0.01 / 1.01 ** 2, rel=1e-12)
        assert out.populations()[1] == pytest.approx(0.0098, abs=1e-4)
        assert mean_photons(out) == pytest.approx(0.01, rel=1e-8)

    def test_parameter_ranges(self):
        with pytest.raises(PhysicalityError):
            loss_kraus(0., 4)
        with pytest.raises(PhysicalityError):
            loss_kraus(1.2, 4)
        with pytest.raises(PhysicalityError):
            amp_kraus(0.99, 4)

    def test_agn_adds_noise(self):
        assert trace_distance(apply_kraus(number_state(1, 4), agn_channel(0., 4)), number_state(1, 4)) < 1e-15
        assert mean_photons(apply_kraus(vacuum(1, 8), agn_channel(0.02, 8))) == pytest.approx(0.02, rel=1e-8)

    def test_agn_matches_first_order_map_quadratically(self):
        def gap(gamma):
            exact = apply_kraus(number_state(1, 8), agn_channel(gamma, 8))
            first = apply_grandfather(number_state(1, 8), [[gamma]], [[gamma]])
            return trace_distance(exact, first)

        slope = np.log2(gap(0.004) / gap(0.002))
        assert slope == pytest.approx(2., abs=0.1)

    def test_acts_on_selected_mode(self):
        out = apply_kraus(number_state((1, 1), 2), loss_kraus(0.5, 2), mode=1)
        populations = out.populations()
        assert populations[1, 0] == pytest.approx(0.5)
        assert populations[1, 1] == pytest.approx(0.5)
        with pytest.raises(DimensionMismatchError):
            apply_kraus(out, loss_kraus(0.5, 2), mode=2)


class TestGrandfather:

    def test_zero_rates(self):
        state = coherent_fock_state(0.3 + 0.2j, 6)
        out = apply_grandfather(state, [[0.]], [[0.]])
        assert_allclose(out.rho, state.rho)

    def test_trace_is_preserved(self, rng):
        a = rng.normal(size=(16, 16)) + 1j * rng.normal(size=(16, 16))
        rho = a @ a.conj().T
        state = FockDensityMatrix(rho / np.trace(rho), 2, 3)
        g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        out = apply_grandfather(state, 1e-3 * g @ g.conj().T, 2e-3 * np.eye(2))
        assert out.trace == pytest.approx(1., abs=1e-12)

    def test_passive_imaging_state(self):
        d, eps = 0.1, 0.01
        down = np.diag([eps * (1 - d ** 2 / 8), eps * d ** 2 / 8])
        populations = apply_grandfather(vacuum(2, 2), None, down).populations()
        assert populations[0, 0] == pytest.approx(1 - eps)
        assert populations[1, 0] == pytest.approx(down[0, 0])
        assert populations[0, 1] == pytest.approx(down[1, 1])

    def test_fock_probe_adjacent_levels(self):
        populations = apply_grandfather(number_state(3, 6), [[0.01]], [[0.005]]).populations()
        assert populations[2] == pytest.approx(0.03)
        assert populations[4] == pytest.approx(0.02)
        assert populations[3] == pytest.approx(0.95)

    def test_rejects_non_hermitian_rates(self):
        with pytest.raises(PhysicalityError):
            apply_grandfather(vacuum(2, 2), [[0., 0.01], [0., 0.]])


class TestSqueezer:

    def test_zero_squeezing(self):
        assert_allclose(two_mode_squeeze_unitary(0., 4), np.eye(25))

    def test_twin_beam_amplitude(self):
        unitary = two_mode_squeeze_unitary(0.5, 8)
        amplitude = unitary[basis_index((1, 1), 8), basis_index((0, 0), 8)]
        assert abs(amplitude) == pytest.approx(np.tanh(0.5) / np.cosh(0.5), abs=1e-4)
        assert abs(amplitude) == pytest.approx(0.4100, abs=1e-4)
        assert unitarity_defect(unitary) < 1e-10

    def test_echo_populations(self):
        r, gamma = 0.5, 1e-4
        p_signal, p_idler = echo_click_probabilities(toy_echo_oracle(gamma, gamma, r, cutoff=12))
        assert p_signal == pytest.approx(gamma * np.cosh(r) ** 2, rel=1e-4)
        assert p_idler == pytest.approx(gamma * np.sinh(r) ** 2, rel=1e-4)

    def test_no_scene_restores_vacuum(self):
        out = toy_echo_oracle(0., 0., 0.7, cutoff=8)
        assert out.populations()[0, 0] == pytest.approx(1., abs=1e-12)


class TestOracleScaling:

    @pytest.mark.parametrize('r', [0.2, 0.5, 0.8])
    def test_exact_echo_departs_quadratically(self, r):
        def gap(gamma):
            exact = toy_echo_oracle(gamma, gamma, r, cutoff=12, exact=True)
            first = toy_echo_oracle(gamma, gamma, r, cutoff=12)
            return trace_distance(exact, first)

        assert 3.2 <= gap(0.01) / gap(0.005) <= 4.8

    @pytest.mark.parametrize('r', [0.3, 0.6])
    def test_click_probabilities_depart_quadratically(self, r):
        def gaps(gamma):
            p_signal, p_idler = echo_click_probabilities(
                toy_echo_oracle(gamma, gamma, r, cutoff=12, exact=True)
            )
            return (abs(p_signal - gamma * np.cosh(r) ** 2),
                    abs(p_idler - gamma * np.sinh(r) ** 2))

        for full, half in zip(gaps(0.01), gaps(0.005)):
            assert 3.2 <= full / half <= 4.8

    def test_echo_factorizes_after_dephasing(self):
        state = toy_echo_oracle(5e-5, 5e-5, 0.5, cutoff=8)
        joint = sector_counts(dephase_sectors(state, [1], [0]), [1], [0])
        assert mutual_information(joint) <= 1e-8


class TestMeasurement:

    def test_vacuum_counts(self):
        counts = measure_counts(vacuum(2, 3))
        assert counts.probability((0, 0)) == 1.

    def test_thermal_single_photon(self):
        eps = 0.01
        counts = measure_counts(apply_kraus(vacuum(1, 8), amp_kraus(1 + eps, 8)))
        assert counts.probability((1,)) == pytest.approx(eps / (1 + eps) ** 2, rel=1e-10)
        assert counts.total == pytest.approx(1., abs=1e-10)

    def test_mode_order_is_respected(self):
        counts = measure_counts(number_state((2, 0, 1), 2), [2, 0])
        assert counts.probability((1, 2)) == pytest.approx(1.)

    def test_invalid_mode(self):
        with pytest.raises(DimensionMismatchError):
            measure_counts(vacuum(2, 2), [3])

    def test_dephasing_drops_cross_sector_coherence(self):
        state = toy_echo_oracle(1e-3, 1e-3, 0.5, cutoff=6)
        dephased = dephase_sectors(state, [1], [0])
        zero, one_one = basis_index((0, 0), 6), basis_index((1, 1), 6)
        assert abs(state.rho[zero, one_one]) > 0
        assert dephased.rho[zero, one_one] == 0
        assert_allclose(np.diag(dephased.rho), np.diag(state.rho))

    def test_fidelity(self):
        assert fidelity(number_state(1, 3), number_state(1, 3)) == pytest.approx(1.)
        assert fidelity(number_state(1, 3), number_state(2, 3)) == pytest.approx(0., abs=1e-12)

    def test_negative_eigenvalues(self):
        rho = np.diag([1.05, -0.05, 0., 0.])
        with pytest.raises(PhysicalityError):
            FockDensityMatrix(rho, 2, 1).validate()
        slightly = FockDensityMatrix(np.diag([1. + 1e-12, -1e-12, 0., 0.]), 2, 1)
        assert slightly.clipped().eigenvalues().min() >= -1e-15


class TestNumericQFI:

    def test_number_state_is_phase_insensitive(self):
        n = number_operator(3)

        def rotated(theta):
            unitary = np.diag(np.exp(-1j * theta * np.diag(n)))
            return apply_unitary(number_state(1, 3), unitary)

        assert qfi_numeric(rotated, 0.3, 0.01).value == pytest.approx(0., abs=1e-6)

    def test_loss_fock_probe(self):
        def state(gamma):
            return apply_kraus(number_state(4, 4), loss_kraus(np.exp(-gamma), 4))

        result = qfi_numeric(state, 0.05, 5e-4)
        assert result.value == pytest.approx(4 * np.exp(-0.05) / (1 - np.exp(-0.05)), rel=1e-3)
        assert result.value == pytest.approx(78.0, abs=0.1)
        assert result.method == 'numeric_qfi'

    def test_amplifier_fock_probe(self):
        def state(gamma):
            return apply_kraus(number_state(4, 16), amp_kraus(np.exp(gamma), 16))

        result = qfi_numeric(state, 0.05, 5e-4)
        assert result.value == pytest.approx(5 * np.exp(0.05) / (np.exp(0.05) - 1), rel=1e-3)
