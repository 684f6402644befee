"""
neutralldp - large deviations for neutral stochastic functional differential equations

Simulates d{X(t) - G(X_t)} = b(X_t)dt + sqrt(eps) sigma(X_t)dW(t), solves the
controlled skeleton equations, minimises the action over discretised controls and
checks the exponential estimates behind the large deviation principle by Monte Carlo.
"""

__version__ = "0.3.0"

from ._errors import (  # noqa: E402
    ConfigError,
    Error,
    InputError,
    NumericalError,
    OutputError,
)

__all__ = [
    "__version__",
    "Error",
    "InputError",
    "NumericalError",
    "ConfigError",
    "OutputError",
]
