"""
Reference bounds next to the Fisher information the protocols achieve.
"""
import logging

import numpy as np

from echo_imager.fisher.bounds import exact_channel_qfi, table1_pairs, table1_reference
from echo_imager.fisher.channels import coherent_channel_qfi, coherent_imaging_qfi, fock_channel_qfi
from echo_imager.fisher.classical import classical_fi
from echo_imager.protocols.echo import displacement_echo, twin_beam_echo
from echo_imager.protocols.fock import fock_probe
from echo_imager.protocols.imaging import spade
from echo_imager.protocols.probes import ProbeConfig
from echo_imager.scene.scene import Scene


logger = logging.getLogger(__name__)

COLUMNS = ('task', 'probe', 'n_s', 'rate', 'analytic', 'exact', 'echo_fi', 'fock_fi',
           'oracle_qfi', 'exact_ratio', 'echo_ratio', 'fock_ratio')


def squeezing_for(n_s):
    """Squeezing ``r`` with ``sinh^2 r = n_s``."""
    return float(np.arcsinh(np.sqrt(n_s)))


def _fi(dist_fn, theta):
    return classical_fi(dist_fn, theta, leading_order=True).value


def _channel_echo(task, rate, r):
    if task == 'loss':
        return _fi(lambda g: twin_beam_echo(g, 0., r)[1], rate)
    if task == 'amp':
        return _fi(lambda g: twin_beam_echo(0., g, r)[0], rate)
    return _fi(lambda g: displacement_echo(g, r), rate)


def _channel_fock(task, rate, n):
    if task == 'loss':
        return _fi(lambda g: fock_probe(g, 0., n), rate)
    if task == 'amp':
        return _fi(lambda g: fock_probe(0., g, n), rate)
    return _fi(lambda g: fock_probe(g, g, n), rate)


def _imaging(task, rate, separation, probe):
    if task == 'subdiff_fluor':
        scene = Scene.two_point(separation, brightness=rate)
    else:
        scene = Scene.two_point(separation, absorption_rate=rate)
    return _fi(lambda d: spade(scene.with_separation(d), probe=probe), separation)


def table1_row(task, probe, n_s, rate, separation=0.1, oracle=True):
    """One row of the grid as a mapping over ``COLUMNS``; missing entries are ``None``."""
    row = dict.fromkeys(COLUMNS)
    row.update(task=task, probe=probe, n_s=float(n_s), rate=float(rate))
    row['analytic'] = analytic = table1_reference(task, probe, n_s, rate, separation)
    r = squeezing_for(n_s)
    n = int(n_s) if float(n_s).is_integer() else None
    channel_task = task in ('loss', 'amp', 'agn')

    if probe == 'coherent':
        row['exact'] = (coherent_channel_qfi(task, rate, n_s) if channel_task
                        else coherent_imaging_qfi(task, rate, n_s, separation))
    elif channel_task:
        if task != 'agn':
            row['exact'] = exact_channel_qfi(task, rate, n_s)
        row['echo_fi'] = _channel_echo(task, rate, r)
        if n is not None:
            row['fock_fi'] = _channel_fock(task, rate, n)
            if oracle:
                row['oracle_qfi'] = fock_channel_qfi(task, rate, n, dtheta=rate / 10).value
    else:
        echo_probe = ProbeConfig.twin_beam(0. if probe == 'vacuum' else r)
        row['echo_fi'] = _imaging(task, rate, separation, echo_probe)
        if probe == 'vacuum':
            n = 0
        if n is not None:
            row['fock_fi'] = _imaging(task, rate, separation, ProbeConfig.fock(n))

    for column, ratio in (('exact', 'exact_ratio'), ('echo_fi', 'echo_ratio'), ('fock_fi', 'fock_ratio')):
        if row[column] is not None:
            row[ratio] = row[column] / analytic
    return row


def table1_grid(n_s_values=(1., 4.), rates=(0.01, 0.05), separation=0.1, oracle=True):
    """Every task/probe pair for every photon number and rate."""
    rows = []
    for n_s in n_s_values:
        for rate in rates:
            for task, probe in table1_pairs():
                rows.append(table1_row(task, probe, n_s, rate, separation, oracle))
    logger.info('table grid: %d rows', len(rows))
    return rows
