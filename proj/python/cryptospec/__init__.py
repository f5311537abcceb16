"""Complexified classical dynamics, semiclassical actions and shooting spectra."""

import json as _json

from ._core import (
    ConsistencyError,
    DomainError,
    NumericalError,
    UnsupportedError,
    action,
    classify_ray,
    exceptional_point,
    find_levels,
    integrate,
    kernel_coefficients,
    kernel_exact,
    osc_spectrum,
    parse_angle,
    potential,
    run_cli,
    semiclassical_levels,
    shoot_mismatch,
    split_hg,
    stem_trajectory,
    stokes_asymptotes,
    turning_points,
)


def cli_json(*args):
    """Run a CLI subcommand and return (exit code, parsed JSON document)."""
    code, out, err = run_cli([str(a) for a in args] + ["--format", "json"])
    if not out:
        raise RuntimeError(err.strip())
    return code, _json.loads(out)


__all__ = [name for name in dir() if not name.startswith("_")]
