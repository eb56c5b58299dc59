"""Exception types raised across the toolkit.

The CLI maps these onto process exit codes: configuration problems exit
with 2, numerical failures with 3, verification failures with 4.
"""


class QBatteryError(Exception):
    """Base class for all toolkit errors."""


class NegativeRate(QBatteryError):
    """A decay rate, drive amplitude, or energy unit is negative."""


class NonFinite(QBatteryError):
    """A parameter or evolved quantity is NaN or infinite."""


class ZeroCoupling(QBatteryError):
    """Shared-bath weight normalization requested with p_a = 0 or p_b = 0."""


class StepUnderflow(QBatteryError):
    """Adaptive step control shrank the step below the minimum."""


class SingularSystem(QBatteryError):
    """The steady-state linear system is singular (an undamped normal mode)."""


class DivergentSteadyState(QBatteryError):
    """The steady-state response denominator vanishes (resonant, lossless transfer)."""


class ZeroRate(QBatteryError):
    """A closed-form expression needs a strictly positive decay rate."""


class PoleAtResonance(QBatteryError):
    """A comparison formula was evaluated exactly at its resonance pole."""


class TruncationOverflow(QBatteryError):
    """Occupation leaked into the highest retained Fock level beyond tolerance."""


class ConfigError(QBatteryError):
    """A scenario configuration violates the schema.

    Carries the offending key path so the CLI can report it precisely.
    """

    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"config key '{key}': {message}")
