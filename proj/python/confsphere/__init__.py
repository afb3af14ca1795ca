"""Exact and numeric checks for conformally covariant operators on round spheres."""

import json
from fractions import Fraction

from . import _core
from ._core import (
    InvalidArgument,
    ZonalFunction,
    check_commutator,
    deficit,
    energy_zonal,
    sphere_volume,
)

__all__ = [
    "InvalidArgument",
    "ZonalFunction",
    "check_commutator",
    "deficit",
    "energy",
    "energy_zonal",
    "gjms_eigenvalue",
    "minimize",
    "run",
    "sharp_constant",
    "sphere_volume",
]


def sharp_constant(n, k=1, sigma2=False):
    """Sharp constant as an exact Fraction (coefficient of the sphere volume)."""
    return Fraction(_core.sharp_constant_text(n, k, sigma2))


def gjms_eigenvalue(l, n, k):
    return Fraction(_core.gjms_eigenvalue_text(l, n, k))


def energy(poly, n, k=1, sigma2=False):
    """Exact energy of a polynomial such as "1 + 1/2 * x0^2", over the sphere volume."""
    return Fraction(_core.energy_text(poly, n, k, sigma2))


def minimize(n, k=1, sigma2=False, L=6, seed=1, init="random"):
    return json.loads(_core.minimize_json(n, k, sigma2, L, seed, init))


def run(*args):
    """Runs a command-line subcommand; returns (exit code, parsed report or None, stderr)."""
    code, out, err = _core.run_cli([str(a) for a in args])
    try:
        report = json.loads(out)
    except json.JSONDecodeError:
        report = None
    return code, report, err
