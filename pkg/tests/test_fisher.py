import numpy as np
import pytest

from echo_imager.base.exceptions import (
    DimensionMismatchError, NumericalError, PhysicalityError, UnsupportedTaskError,
)
from echo_imager.fisher.bounds import (
    coherent_baselines, exact_channel_qfi, gaussian_mean_qfi, normalize_task, table1_pairs,
    table1_reference,
)
from echo_imager.fisher.channels import (
    coherent_channel_qfi, coherent_imaging_qfi, fock_channel_fi, fock_channel_qfi,
)
from echo_imager.fisher.classical import classical_fi, fisher_matrix
from echo_imager.fisher.result import FisherResult, default_step
from echo_imager.fisher.table import COLUMNS, squeezing_for, table1_grid, table1_row
from echo_imager.fock.oracle import toy_echo_oracle
from echo_imager.fock.qfi import qfi_numeric
from echo_imager.protocols.distribution import CountDistribution
from echo_imager.protocols.echo import displacement_echo, single_mode_sqz_echo, twin_beam_echo
from echo_imager.protocols.imaging import spade
from echo_imager.protocols.probes import ProbeConfig
from echo_imager.scene.scene import Scene


def binomial(p):
    return CountDistribution.clicks([p], ['click'])


class TestClassicalFI:

    def test_binomial(self):
        result = classical_fi(binomial, 0.1)
        assert result.value == pytest.approx(1 / (0.1 * 0.9), rel=1e-8)
        assert result.method == 'finite_difference'
        assert result.error_estimate < 1e-6

    def test_leading_order_skips_the_reference(self):
        assert classical_fi(binomial, 0.1, leading_order=True).value == pytest.approx(10., rel=1e-8)

    def test_dropped_mass_is_reported(self):
        result = classical_fi(lambda p: CountDistribution.clicks([p, 1e-20], ['a', 'b']), 0.1)
        assert result.dropped_mass == pytest.approx(1e-20)
        assert result.value == pytest.approx(1 / (0.1 * (0.9 - 1e-20)), rel=1e-8)

    def test_undefined_shifted_point(self):
        with pytest.raises(NumericalError):
            classical_fi(lambda g: twin_beam_echo(0., g, 1.)[0], 1e-7)

    def test_matrix_of_independent_parameters(self):
        def joint(theta):
            return binomial(theta[0]).combine(binomial(theta[1]))

        matrix = fisher_matrix(joint, [0.1, 0.2])
        assert matrix[0, 0] == pytest.approx(1 / 0.09, rel=1e-7)
        assert matrix[1, 1] == pytest.approx(1 / 0.16, rel=1e-7)
        assert abs(matrix[0, 1]) < 1e-8

    def test_default_step(self):
        assert default_step(0.01) == pytest.approx(1e-5)
        assert default_step(0.) == 1e-6

    def test_result_is_a_float(self):
        assert float(FisherResult.build(2.5, 'analytic')) == 2.5
        assert FisherResult.build(-1e-18, 'analytic').value == 0.


class TestSeparationFI:

    def test_passive_spade_is_half_the_brightness(self):
        fi = classical_fi(lambda d: spade(Scene.two_point(d, brightness=0.01)), 0.1).value
        assert fi / 0.01 == pytest.approx(0.5, rel=1e-2)

    def test_echo_spade(self):
        probe = ProbeConfig.twin_beam(1.)
        fi = classical_fi(lambda d: spade(Scene.two_point(d, brightness=0.01), probe=probe), 0.1).value
        assert fi == pytest.approx(0.01 * np.cosh(1.) ** 2 / 2, rel=2e-2)


class TestEchoFI:

    def test_emission_rate(self):
        fi = classical_fi(lambda g: twin_beam_echo(0.01, g, 1.)[0], 0.01, leading_order=True).value
        assert fi == pytest.approx(np.cosh(1.) ** 2 / 0.01, rel=1e-2)

    def test_absorption_rate(self):
        fi = classical_fi(lambda g: twin_beam_echo(g, 0.01, 1.)[1], 0.01, leading_order=True).value
        assert fi == pytest.approx(np.sinh(1.) ** 2 / 0.01, rel=1e-2)

    def test_emission_matches_oracle_qfi(self):
        oracle = qfi_numeric(lambda g: toy_echo_oracle(0., g, 1., cutoff=14, exact=True), 0.01, 1e-3)
        fi = classical_fi(lambda g: twin_beam_echo(0., g, 1.)[0], 0.01, leading_order=True).value
        assert fi == pytest.approx(oracle.value, rel=2e-2)

    def test_absorption_matches_oracle_qfi(self):
        oracle = qfi_numeric(lambda g: toy_echo_oracle(g, 0., 1., cutoff=14, exact=True), 0.01, 1e-3)
        fi = classical_fi(lambda g: twin_beam_echo(g, 0., 1.)[1], 0.01, leading_order=True).value
        assert fi == pytest.approx(oracle.value, rel=2e-2)

    def test_displacement_field(self):
        fi = classical_fi(lambda g: displacement_echo(g, 1.), 0.01, leading_order=True).value
        assert fi == pytest.approx((np.cosh(1.) ** 2 + np.sinh(1.) ** 2) / 0.01, rel=1e-2)
        n_s = np.sinh(1.) ** 2
        assert fi == pytest.approx(table1_reference('agn', 'optimal', n_s, 0.01), rel=1e-2)

    def test_twin_beam_estimates_both_rates(self):
        def joint(theta):
            signal, idler = twin_beam_echo(theta[0], theta[1], 1.)
            return signal.combine_first_order(idler)

        matrix = fisher_matrix(joint, [0.01, 0.01], leading_order=True)
        assert matrix[0, 0] == pytest.approx(np.sinh(1.) ** 2 / 0.01, rel=1e-6)
        assert matrix[1, 1] == pytest.approx(np.cosh(1.) ** 2 / 0.01, rel=1e-6)
        assert abs(matrix[0, 1]) < 1e-9 * matrix[0, 0]
        assert np.linalg.cond(matrix) < 1e3

    def test_single_mode_squeezing_cannot_separate_rates(self):
        matrix = fisher_matrix(lambda t: single_mode_sqz_echo(t[0], t[1], 1.), [0.01, 0.01])
        singular = np.linalg.svd(matrix, compute_uv=False)
        assert singular[-1] <= 1e-12 * singular[0]


class TestBounds:

    def test_pairs(self):
        pairs = table1_pairs()
        assert len(pairs) == 11
        assert ('subdiff_fluor', 'vacuum') in pairs
        assert ('subdiff_abs', 'vacuum') not in pairs

    def test_reference_values(self):
        assert table1_reference('loss', 'optimal', 4., 0.01) == pytest.approx(400.)
        assert table1_reference('amp', 'optimal', 1., 0.01) == pytest.approx(200.)
        assert table1_reference('agn', 'coherent', 1., 0.01) == pytest.approx(100.)
        assert table1_reference('subdiff-fluor', 'vacuum', 0., 0.01) == pytest.approx(0.005)
        assert table1_reference('subdiff_abs', 'optimal', 4., 0.01) == pytest.approx(0.04)

    def test_unknown_task_and_pair(self):
        with pytest.raises(UnsupportedTaskError):
            normalize_task('phase')
        with pytest.raises(UnsupportedTaskError):
            table1_reference('loss', 'vacuum', 1., 0.01)

    def test_invalid_rate(self):
        with pytest.raises(PhysicalityError):
            table1_reference('loss', 'optimal', 1., 0.)

    def test_exact_channels_reduce_to_first_order(self):
        assert exact_channel_qfi('loss', 1e-4, 2.) == pytest.approx(2e4, rel=1e-3)
        assert exact_channel_qfi('amp', 1e-4, 2.) == pytest.approx(3e4, rel=1e-3)
        with pytest.raises(UnsupportedTaskError):
            exact_channel_qfi('agn', 0.01, 1.)

    def test_gaussian_mean_qfi(self):
        assert gaussian_mean_qfi([1., 0.], np.eye(2)) == pytest.approx(2.)
        assert gaussian_mean_qfi([1., 0.], 2 * np.eye(2)) == pytest.approx(1.)

    def test_gaussian_mean_qfi_errors(self):
        with pytest.raises(DimensionMismatchError):
            gaussian_mean_qfi([1., 0.], np.eye(3))
        with pytest.raises(NumericalError):
            gaussian_mean_qfi([1., 0.], np.diag([1., 1e-14]))


class TestChannelFI:

    def test_fock_counting_through_loss(self):
        result = fock_channel_fi('loss', 0.01, 2)
        assert result.method == 'kraus_counting'
        assert result.value == pytest.approx(exact_channel_qfi('loss', 0.01, 2.), rel=1e-3)

    def test_fock_counting_through_amplifier(self):
        result = fock_channel_fi('amp', 0.01, 1)
        assert result.value == pytest.approx(exact_channel_qfi('amp', 0.01, 1.), rel=1e-3)

    def test_counting_attains_the_oracle(self):
        assert fock_channel_fi('loss', 0.01, 1).value == pytest.approx(
            fock_channel_qfi('loss', 0.01, 1, dtheta=1e-3).value, rel=1e-3)

    def test_coherent_probes(self):
        assert coherent_channel_qfi('loss', 0.01, 4.) == pytest.approx(coherent_baselines('loss', 0.01, 4.),
                                                                       rel=1e-6)
        assert coherent_channel_qfi('amp', 0.01, 4.) == pytest.approx(coherent_baselines('amp', 0.01, 4.),
                                                                      rel=1e-6)
        assert coherent_channel_qfi('agn', 0.01, 4.) == pytest.approx(1 / (0.01 * 1.01), rel=1e-9)

    def test_coherent_imaging(self):
        value = coherent_imaging_qfi('subdiff_fluor', 0.01, 4., 0.1)
        assert value == pytest.approx(table1_reference('subdiff_fluor', 'coherent', 4., 0.01, 0.1), rel=1e-3)
        with pytest.raises(UnsupportedTaskError):
            coherent_imaging_qfi('loss', 0.01, 4., 0.1)


class TestTable:

    def test_squeezing_for_photon_number(self):
        assert np.sinh(squeezing_for(4.)) ** 2 == pytest.approx(4.)

    def test_row_columns(self):
        row = table1_row('loss', 'optimal', 1., 0.01, oracle=False)
        assert set(row) == set(COLUMNS)
        assert row['oracle_qfi'] is None
        assert row['echo_ratio'] == pytest.approx(1., abs=0.02)

    def test_oracle_column(self):
        row = table1_row('loss', 'optimal', 1., 0.01)
        assert row['oracle_qfi'] == pytest.approx(row['exact'], rel=1e-3)

    def test_grid(self):
        """Coherent loss, amp and agn rows at rate 0.05 are skipped: their exact-to-first-order gap grows like the rate."""
        rows = table1_grid(oracle=False)
        assert len(rows) == 44
        for row in rows:
            if row['probe'] == 'coherent':
                if row['rate'] == 0.01 or row['task'].startswith('subdiff'):
                    assert row['exact_ratio'] == pytest.approx(1., abs=0.02), row
            else:
                assert row['echo_ratio'] == pytest.approx(1., abs=0.02), row
                if row['fock_ratio'] is not None:
                    assert row['fock_ratio'] == pytest.approx(1., abs=0.02), row

    def test_coherent_rows_fall_short(self):
        for task in ('loss', 'amp', 'agn', 'subdiff_fluor', 'subdiff_abs'):
            optimal = table1_reference(task, 'optimal', 1., 0.01, 0.1)
            coherent = table1_reference(task, 'coherent', 1., 0.01, 0.1)
            assert coherent < optimal
