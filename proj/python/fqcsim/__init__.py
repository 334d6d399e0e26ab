"""Finite quasi-continuum emulation of non-Hermitian dynamics."""

import json as _json

from ._core import (
    ConfigError,
    DriveSpec,
    FqcSpec,
    Hamiltonian,
    IoError,
    NumericalError,
    TimeSeries,
    __version__,
    adaptive_spec_for_size,
    build_adaptive,
    build_single_level,
    build_two_level,
    coupling_for_gap,
    d1,
    d2,
    decay_reference,
    fermi_rate,
    fit_effective_params,
    nonhermitian_reference,
    nonmarkovianity,
    propagate,
    revival_time,
    sideband_spectrum,
    trace_distance,
    uniform_grid,
    zeno_time,
)
from ._core import default_config as _default_config
from ._core import run_command as _run_command


def default_config(command):
    """Resolved default configuration of a subcommand as a dict."""
    return _json.loads(_default_config(command))


def run(command, config=None, threads=0):
    """Run a subcommand in memory; returns (summary dict, {file name: content})."""
    summary, files = _run_command(command, _json.dumps(config or {}), threads)
    return _json.loads(summary), files
