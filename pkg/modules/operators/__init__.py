"""Оператори температури та тертя, квантовий потенціал Бома."""

from .quantum_potential import (
    QuantumPotentialField,
    bohm_flux_divergence,
    bohm_potential,
    fourth_difference,
    linearized_bohm_term,
    second_difference,
)
from .symbols import (
    Friction,
    Identity,
    Product,
    SpectralSymbol,
    TemperatureExact,
    TemperatureSeries,
    apply_time_symbol,
    friction_symbol,
    quantum_quantum_temperature_symbol,
    temperature_symbol,
    temperature_symbol_series,
)


__all__ = [
    "SpectralSymbol",
    "TemperatureExact",
    "TemperatureSeries",
    "Friction",
    "Identity",
    "Product",
    "temperature_symbol",
    "temperature_symbol_series",
    "friction_symbol",
    "quantum_quantum_temperature_symbol",
    "apply_time_symbol",
    "QuantumPotentialField",
    "bohm_potential",
    "bohm_flux_divergence",
    "linearized_bohm_term",
    "second_difference",
    "fourth_difference",
]
