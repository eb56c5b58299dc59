"""Closed-form steady-state energies and an independent linear steady solve.

Setting the moment derivatives to zero gives the stationary energies as a
ratio of quadratic kernels,

    E_A = omega * 4 F^2 K_bb / D,      E_B = omega * 4 F^2 Jk(G_eff, pi/2 + phi_eff) / D,

where K_bb = 4 Delta^2 + (Gamma_b + kappa_b)^2 gates the charger response,
Jk(x, theta) = 4|J|^2 + x^2 - 4|J| x cos(theta) collects the transfer
channels, and the common response denominator is

    D = | Jk(i G_eff, phi_eff) - conj(K_ab) |^2,
    K_ab = (2 Delta + i (Gamma_a + kappa_a)) (2 Delta + i (Gamma_b + kappa_b)).

G_eff = Gamma |mu| and phi_eff = phi - arg(mu) + pi absorb the shared-bath
weight normalization, so the expressions hold for arbitrary complex p_a,
p_b (for real positive weights, mu = -|mu| and phi_eff = phi).  The
conjugation on K_ab is required for consistency with the moment equations
whenever Delta, Gamma, |J| and cos(phi) are all nonzero; it is invisible
in the usual special cases (Delta = 0, Gamma = 0, J = 0, or phi in
{0, pi}).  Every formula here is cross-checked against steady_moments,
which solves the moment equations directly.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import moments
from .errors import DivergentSteadyState, SingularSystem
from .moments import MomentState
from .params import SystemParams, derived_rates


@dataclass(frozen=True)
class SteadyKernels:
    """Kernel ingredients of the closed-form stationary energies."""

    j_mag: float
    K_bb: float
    K_ab: complex
    gamma_eff: float
    phi_eff: float
    alpha: float  # complementary coupling phase, alpha + phi = pi/2

    def J(self, x: complex, theta: float) -> complex:
        """Transfer kernel Jk(x, theta) = 4|J|^2 + x^2 - 4|J| x cos(theta)."""
        return 4.0 * self.j_mag**2 + x * x - 4.0 * self.j_mag * x * math.cos(theta)


def kernels(params: SystemParams) -> SteadyKernels:
    """Evaluate the steady-state kernels for a validated parameter set."""
    gamma_a, gamma_b, mu = derived_rates(params)
    ka, kb = params.local.kappa_a, params.local.kappa_b
    delta = params.drive.detuning_Delta
    phi = params.coupling.phase_phi
    gamma_eff = params.shared.gamma * abs(mu)
    phi_eff = (phi - cmath.phase(mu) + math.pi) if abs(mu) > 0 else 0.0
    return SteadyKernels(
        j_mag=params.coupling.magnitude_J,
        K_bb=4.0 * delta**2 + (gamma_b + kb) ** 2,
        K_ab=(2.0 * delta + 1j * (gamma_a + ka)) * (2.0 * delta + 1j * (gamma_b + kb)),
        gamma_eff=gamma_eff,
        phi_eff=phi_eff,
        alpha=math.pi / 2.0 - phi,
    )


def response_denominator(params: SystemParams) -> float:
    """|Jk(i G_eff, phi_eff) - conj(K_ab)|^2, the squared response determinant.

    Vanishes only for lossless resonant transfer (for instance
    kappa = Gamma = 0 with Delta = +-|J|); strictly positive whenever
    kappa_a * kappa_b > 0.
    """
    k = kernels(params)
    return abs(k.J(1j * k.gamma_eff, k.phi_eff) - k.K_ab.conjugate()) ** 2


def charger_energy(params: SystemParams) -> float:
    """Stationary charger energy E_A from the closed form."""
    k = kernels(params)
    den = response_denominator(params)
    if den == 0.0:
        raise DivergentSteadyState("response denominator vanishes (resonant lossless transfer)")
    f = params.drive.amplitude_F
    return params.omega * 4.0 * f**2 * k.K_bb / den


def battery_energy(params: SystemParams) -> float:
    """Stationary battery energy E_B from the closed form."""
    k = kernels(params)
    den = response_denominator(params)
    if den == 0.0:
        raise DivergentSteadyState("response denominator vanishes (resonant lossless transfer)")
    f = params.drive.amplitude_F
    numerator = k.J(k.gamma_eff, math.pi / 2.0 + k.phi_eff).real
    return params.omega * 4.0 * f**2 * numerator / den


def total_energy(params: SystemParams) -> float:
    """Stationary total energy xi = E_A + E_B."""
    return charger_energy(params) + battery_energy(params)


# ---------------------------------------------------------------------------
# direct linear steady solve (the independent route)
# ---------------------------------------------------------------------------

def steady_moments(params: SystemParams) -> MomentState:
    """Steady state of the moment equations by direct linear solve.

    First moments come from the complex 2x2 system; the second moments
    from the real 4x4 system in (n_a, n_b, Re<a^dag b>, Im<a^dag b>).
    The result is checked to satisfy rhs = 0 to 1e-12 * max(1, F).
    """
    gamma_a, gamma_b, mu = derived_rates(params)
    gam = params.shared.gamma
    ka, kb = params.local.kappa_a, params.local.kappa_b
    f = params.drive.amplitude_F
    j = params.coupling.value

    m2 = moments.first_moment_matrix(params)
    try:
        mean_a, mean_b = np.linalg.solve(m2, np.array([-1j * f, 0.0], dtype=complex))
    except np.linalg.LinAlgError as exc:
        raise SingularSystem("undamped normal mode: first-moment system is singular") from exc

    c1 = j + 0.5j * mu * gam              # J + i mu Gamma/2
    c1m = j - 0.5j * mu * gam
    c2 = j.conjugate() + 0.5j * mu.conjugate() * gam
    c2m = j.conjugate() - 0.5j * mu.conjugate() * gam
    ra, rb = gamma_a + ka, gamma_b + kb
    s = 0.5 * (ra + rb)

    # unknown vector (n_a, n_b, Re c, Im c); rows are the stationarity of
    # n_a, n_b and the real/imaginary parts of the cross moment
    ic1 = 1j * c1
    ic1m = 1j * c1m
    mc2 = -1j * c2    # coefficient of n_a in the cross equation
    pc2m = 1j * c2m   # coefficient of n_b in the cross equation
    mat = np.array(
        [
            [-ra, 0.0, -2.0 * ic1.real, 2.0 * ic1.imag],
            [0.0, -rb, 2.0 * ic1m.real, -2.0 * ic1m.imag],
            [mc2.real, pc2m.real, -s, 0.0],
            [mc2.imag, pc2m.imag, 0.0, -s],
        ]
    )
    drive_c = 1j * f * mean_b
    vec = np.array([2.0 * f * mean_a.imag, 0.0, -drive_c.real, -drive_c.imag])
    try:
        na, nb, cr, ci = np.linalg.solve(mat, vec)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem("undamped normal mode: second-moment system is singular") from exc

    state = MomentState(complex(mean_a), complex(mean_b), float(na), float(nb), complex(cr, ci))
    deriv = moments.rhs(params, state)
    residual = max(
        abs(deriv.mean_a), abs(deriv.mean_b), abs(deriv.n_a), abs(deriv.n_b), abs(deriv.cross_ab)
    )
    if not math.isfinite(residual) or residual > 1e-12 * max(1.0, f):
        raise SingularSystem(f"steady solve residual {residual:.3e} exceeds tolerance")
    return state


@dataclass(frozen=True)
class SteadyStateReport:
    """Stationary energies with the moments and the route that produced them."""

    E_A: float
    E_B: float
    xi: float
    moments: MomentState
    method: str  # "analytic" or "linear-solve"


def steady_state_report(params: SystemParams, method: str = "analytic") -> SteadyStateReport:
    """Stationary energies by either route.

    "analytic" evaluates the closed forms (moments from the explicit 2x2
    inverse, factorized second moments); "linear-solve" solves the full
    moment system numerically.
    """
    if method == "linear-solve":
        state = steady_moments(params)
        e_a, e_b, xi = moments.energies(state, params.omega)
        return SteadyStateReport(E_A=e_a, E_B=e_b, xi=xi, moments=state, method=method)
    if method != "analytic":
        raise ValueError(f"unknown method '{method}'")
    m2 = moments.first_moment_matrix(params)
    f = params.drive.amplitude_F
    det = m2[0, 0] * m2[1, 1] - m2[0, 1] * m2[1, 0]
    if det == 0:
        raise DivergentSteadyState("response denominator vanishes (resonant lossless transfer)")
    mean_a = -1j * f * m2[1, 1] / det
    mean_b = 1j * f * m2[1, 0] / det
    state = MomentState(
        mean_a=mean_a,
        mean_b=mean_b,
        n_a=abs(mean_a) ** 2,
        n_b=abs(mean_b) ** 2,
        cross_ab=mean_a.conjugate() * mean_b,
    )
    e_a = charger_energy(params)
    e_b = battery_energy(params)
    return SteadyStateReport(E_A=e_a, E_B=e_b, xi=e_a + e_b, moments=state, method=method)
