"""Physical parameter set of the driven two-mode charger/battery model.

Mode a (the charger) is driven by a classical field of amplitude F detuned
by Delta from the common mode frequency omega, and exchanges energy with
mode b (the battery) through a coherent coupling J = |J| e^{i phi} and/or
through a shared zero-temperature reservoir with jump operator
z = p_a a + p_b b and rate Gamma.  Each mode additionally has a local
damping rate kappa.  All parameters are rates in one common arbitrary
unit; omega only sets the energy scale (omega = 1 makes energies equal
mean photon numbers).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

from .errors import NegativeRate, NonFinite, ZeroCoupling

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class DriveParams:
    """Classical drive on the charger: amplitude F >= 0 and detuning Delta = omega_L - omega."""

    amplitude_F: float
    detuning_Delta: float = 0.0


@dataclass(frozen=True)
class CoherentCoupling:
    """Coherent charger/battery coupling J = |J| e^{i phi}.

    The phase is stored reduced to [0, 2 pi).
    """

    magnitude_J: float
    phase_phi: float = 0.0

    def __post_init__(self):
        if math.isfinite(self.phase_phi):
            object.__setattr__(self, "phase_phi", self.phase_phi % TWO_PI)

    @property
    def value(self) -> complex:
        """The complex coupling |J| e^{i phi}."""
        return self.magnitude_J * cmath.exp(1j * self.phase_phi)


@dataclass(frozen=True)
class LocalBaths:
    """Local damping rates of charger (kappa_a) and battery (kappa_b)."""

    kappa_a: float
    kappa_b: float


@dataclass(frozen=True)
class SharedBath:
    """Shared reservoir: rate Gamma and complex mode weights p_a, p_b.

    The physically relevant combinations are the induced local rates
    Gamma_a = Gamma |p_a|^2, Gamma_b = Gamma |p_b|^2 and the cross-coupling
    weight mu = -p_b conj(p_a).
    """

    gamma: float = 0.0
    p_a: complex = 1.0 + 0.0j
    p_b: complex = 1.0 + 0.0j


@dataclass(frozen=True)
class SystemParams:
    """Complete parameter set shared by every other module."""

    drive: DriveParams
    coupling: CoherentCoupling
    local: LocalBaths
    shared: SharedBath
    omega: float = 1.0


def make_params(
    F: float = 0.0,
    Delta: float = 0.0,
    J: float = 0.0,
    phi: float = 0.0,
    kappa_a: float = 0.0,
    kappa_b: float = 0.0,
    Gamma: float = 0.0,
    p_a: complex = 1.0,
    p_b: complex = 1.0,
    omega: float = 1.0,
) -> SystemParams:
    """Flat convenience constructor; returns a validated SystemParams."""
    return validate(
        SystemParams(
            drive=DriveParams(amplitude_F=F, detuning_Delta=Delta),
            coupling=CoherentCoupling(magnitude_J=J, phase_phi=phi),
            local=LocalBaths(kappa_a=kappa_a, kappa_b=kappa_b),
            shared=SharedBath(gamma=Gamma, p_a=complex(p_a), p_b=complex(p_b)),
            omega=omega,
        )
    )


def _finite(*values) -> bool:
    return all(math.isfinite(v.real) and math.isfinite(v.imag) for v in map(complex, values))


def validate(params: SystemParams) -> SystemParams:
    """Check sign and finiteness invariants; returns the input unchanged."""
    d, c, l, s = params.drive, params.coupling, params.local, params.shared
    if not _finite(
        d.amplitude_F, d.detuning_Delta, c.magnitude_J, c.phase_phi,
        l.kappa_a, l.kappa_b, s.gamma, s.p_a, s.p_b, params.omega,
    ):
        raise NonFinite("all parameters must be finite")
    if d.amplitude_F < 0:
        raise NegativeRate(f"drive amplitude F = {d.amplitude_F} must be >= 0")
    if c.magnitude_J < 0:
        raise NegativeRate(f"coupling magnitude |J| = {c.magnitude_J} must be >= 0")
    if l.kappa_a < 0 or l.kappa_b < 0:
        raise NegativeRate(f"local rates kappa = ({l.kappa_a}, {l.kappa_b}) must be >= 0")
    if s.gamma < 0:
        raise NegativeRate(f"shared rate Gamma = {s.gamma} must be >= 0")
    if params.omega <= 0:
        raise NegativeRate(f"energy unit omega = {params.omega} must be > 0")
    return params


def derived_rates(params: SystemParams) -> tuple[float, float, complex]:
    """Shared-bath induced rates (Gamma_a, Gamma_b) and cross weight mu = -p_b conj(p_a)."""
    s = params.shared
    gamma_a = s.gamma * abs(s.p_a) ** 2
    gamma_b = s.gamma * abs(s.p_b) ** 2
    mu = -s.p_b * s.p_a.conjugate()
    return gamma_a, gamma_b, mu


def normalize_shared(params: SystemParams) -> SystemParams:
    """Rescale (p_a, p_b, Gamma) to the |mu| = 1 convention.

    Both weights are divided by sqrt(|p_a p_b|) and Gamma is multiplied by
    |p_a p_b|, which leaves Gamma_a, Gamma_b and Gamma*mu unchanged.
    Idempotent; raises ZeroCoupling when either weight vanishes.
    """
    s = params.shared
    prod = abs(s.p_a * s.p_b)
    if prod == 0.0:
        raise ZeroCoupling("|mu| = 1 normalization needs p_a != 0 and p_b != 0")
    root = math.sqrt(prod)
    shared = SharedBath(gamma=s.gamma * prod, p_a=s.p_a / root, p_b=s.p_b / root)
    return replace(params, shared=shared)


def builtin_detuning(params: SystemParams) -> float:
    """Splitting of the coupled eigenfrequencies relative to omega (positive branch |J|)."""
    return params.coupling.magnitude_J
