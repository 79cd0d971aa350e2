"""spinbatt: spin-chain quantum battery simulation.

Exact charging dynamics of the XXZ chain under a transverse drive,
closed-form weak/strong-coupling references, correlation-free mean-field
dynamics, and a CLI harness producing CSV result tables.
"""

__version__ = "0.1.0"

from . import dynamics, errors, meanfield, model, theory  # noqa: E402,F401
from .model import BatterySpec  # noqa: F401
