"""Counting statistics of energy exchange between a finite quantum system and
a confined thermal reservoir.

The compiled core exposes the model type and the main operations; this
package re-exports them and adds a small convenience constructor.
"""

from ._core import (
    ConfigError,
    DomainError,
    Model,
    ResourceError,
    ValidationError,
    char_function,
    gibbs_state,
    heisenberg_evolve,
    kolmogorov_distance,
    kron,
    measure_moment,
    random_reservoir,
    spectral_resolution,
    spin_chain_reservoir,
    truncated_oscillator,
    two_level_system,
    __version__,
)

__all__ = [
    "ConfigError",
    "DomainError",
    "Model",
    "ResourceError",
    "ValidationError",
    "char_function",
    "gibbs_state",
    "heisenberg_evolve",
    "kolmogorov_distance",
    "kron",
    "measure_moment",
    "model_from_builders",
    "random_reservoir",
    "spectral_resolution",
    "spin_chain_reservoir",
    "truncated_oscillator",
    "two_level_system",
    "__version__",
]


def model_from_builders(system, reservoir, coupling_strength, inverse_temperature):
    """Couples a system tuple (H_S, rho_S, A) to a reservoir tuple (H_R, B)
    through A (x) B, as produced by the builder helpers."""
    system_h, system_state, system_op = system
    reservoir_h, reservoir_op = reservoir
    return Model(
        system_h,
        system_state,
        reservoir_h,
        kron(system_op, reservoir_op),
        coupling_strength,
        inverse_temperature,
    )
