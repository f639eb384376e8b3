"""Ancestor weights in the m-parental Moran model.

Simulation, exact lumped-chain stationary laws and the large-population
limit law, backed by a C++ core.
"""

import json
from fractions import Fraction

from ._core import (
    CapabilityError,
    ConfigError,
    K_closed_form,
    MixtureLaw,
    RegimeError,
    StructuralError,
    __version__,
    generate_pedigree,
    joint_moment,
    run_to_convergence,
    suite_names,
)
from . import _core

__all__ = [
    "CapabilityError",
    "ConfigError",
    "K_closed_form",
    "MixtureLaw",
    "RegimeError",
    "StructuralError",
    "__version__",
    "exact",
    "generate_pedigree",
    "joint_moment",
    "run_to_convergence",
    "simulate",
    "stationary",
    "suite_names",
    "verify",
]


def exact(population_size, order, parent_count=2, method="linear-solve", arithmetic="auto"):
    """Lumped chain, stationary law, moments and K table as a dict."""
    return json.loads(_core._exact_json(population_size, order, parent_count, method, arithmetic))


def stationary(population_size, order, parent_count=2, method="linear-solve"):
    """Map configuration label -> Fraction (exact regime) or float."""
    report = exact(population_size, order, parent_count, method)
    return {
        label: Fraction(value) if isinstance(value, str) else value
        for label, value in report["nu"].items()
    }


def simulate(population_size, parent_count=2, variant="distinct", replicates=1000, tracked=2,
             seed=0, epsilon=1e-9, max_steps=0, jobs=0, moments=4):
    """Monte Carlo summary dict; raw estimates under "samples" (replicate x ancestor)."""
    return json.loads(
        _core._simulate_json(population_size, parent_count, variant, replicates, tracked, seed,
                             epsilon, max_steps, jobs, moments)
    )


def verify(suite="all"):
    """Run invariant suites; returns a list of result dicts."""
    names = list(suite_names()) if suite == "all" else [suite]
    return [json.loads(_core._verify_json(name)) for name in names]
