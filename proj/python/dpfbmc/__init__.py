"""Dual-polarization FBMC simulation library.

Thin wrappers around the C++ core. Grids are numpy arrays indexed
[subcarrier, time]; configurations are JSON strings or dicts in the same
schema the ``dpfbmc`` command line tool reads.
"""

import json as _json

from ._core import (
    ConfigError,
    DomainError,
    IntegrityError,
    NumericalError,
    PrototypeFilter,
    ShapeError,
    UnsupportedDesign,
    __version__,
    channel_profiles,
    design_filter,
    dp_loopback,
    fbmc_demodulate,
    fbmc_modulate,
    localization_table,
    qpsk_ebn0_for_ber,
    rms_delay_spread,
    table_report,
    theoretical_ber_qpsk,
    theoretical_sinr_angular,
)
from . import _core


def _as_json(config):
    if config is None or isinstance(config, str):
        return config
    return _json.dumps(config)


def default_config(verb="ber"):
    """Default configuration of ``ber``, ``psd`` or ``offsets`` as a dict."""
    return _json.loads(_core.default_config(verb))


def config_fingerprint(verb="ber", config=None, overrides=()):
    return _core.config_fingerprint(verb, _as_json(config), list(overrides))


def run_sweep(verb="ber", config=None, overrides=(), workers=0):
    """Run a BER (``ber``) or offset (``offsets``) sweep.

    Returns ``(rows, csv)`` where rows is a list of dicts with the CSV columns.
    """
    return _core.run_sweep(verb, _as_json(config), list(overrides), workers)


def run_psd(config=None, overrides=()):
    """Returns ``({system: (frequency, density_db)}, oob_rows)``."""
    return _core.run_psd(_as_json(config), list(overrides))


__all__ = [
    "ConfigError",
    "DomainError",
    "IntegrityError",
    "NumericalError",
    "PrototypeFilter",
    "ShapeError",
    "UnsupportedDesign",
    "__version__",
    "channel_profiles",
    "config_fingerprint",
    "default_config",
    "design_filter",
    "dp_loopback",
    "fbmc_demodulate",
    "fbmc_modulate",
    "localization_table",
    "qpsk_ebn0_for_ber",
    "rms_delay_spread",
    "run_psd",
    "run_sweep",
    "table_report",
    "theoretical_ber_qpsk",
    "theoretical_sinr_angular",
]
