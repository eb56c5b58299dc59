"""Global (super-mode) view of the charger/battery dynamics.

The coupled Hamiltonian diagonalizes in the super-modes

    C+ = (a + e^{i phi} b) / sqrt(2),    C- = (a - e^{i phi} b) / sqrt(2),

with eigenfrequencies omega +- |J| (detunings Delta +- |J| in the rotating
frame) and the drive split as F / sqrt(2) onto both modes.  The three jump
operators become z = p_plus C+ + p_minus C- for the shared bath, with

    p_plus  = (p_a + e^{-i phi} p_b) / sqrt(2),
    p_minus = (p_a - e^{-i phi} p_b) / sqrt(2),

and fixed weight patterns for the two local baths.  When one of p_plus,
p_minus vanishes the corresponding super-mode decouples from the shared
reservoir entirely (a decoherence-free mode).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .moments import MomentState, StepControl, integrate_linear
from .params import SystemParams

_SQRT2 = math.sqrt(2.0)
_DIM = 8


@dataclass(frozen=True)
class SupermodeState:
    """First and second moments of the super-modes C+ and C-."""

    mean_plus: complex = 0.0
    mean_minus: complex = 0.0
    n_plus: float = 0.0
    n_minus: float = 0.0
    cross_pm: complex = 0.0  # <C+^dag C->


@dataclass(frozen=True)
class SupermodeCouplings:
    """Bath coupling weights of the three reservoirs in the super-mode basis."""

    p_plus_z: complex
    p_minus_z: complex
    mu_z: complex
    local_a_weights: tuple[complex, complex] = (1.0 / _SQRT2, 1.0 / _SQRT2)
    local_b_weights: tuple[complex, complex] = (0.0, 0.0)  # filled per phi
    mu_a: float = -0.5
    mu_b: float = 0.5


def to_supermode(state: MomentState, phi: float) -> SupermodeState:
    """Map local-basis moments into the super-mode basis (linear, invertible)."""
    e = cmath.exp(1j * phi)
    mean_p = (state.mean_a + e * state.mean_b) / _SQRT2
    mean_m = (state.mean_a - e * state.mean_b) / _SQRT2
    twisted = e * state.cross_ab
    n_p = 0.5 * (state.n_a + state.n_b + 2.0 * twisted.real)
    n_m = 0.5 * (state.n_a + state.n_b - 2.0 * twisted.real)
    cross = 0.5 * (state.n_a - state.n_b - 2j * twisted.imag)
    return SupermodeState(mean_p, mean_m, n_p, n_m, cross)


def from_supermode(state: SupermodeState, phi: float) -> MomentState:
    """Inverse of to_supermode."""
    e = cmath.exp(-1j * phi)
    mean_a = (state.mean_plus + state.mean_minus) / _SQRT2
    mean_b = e * (state.mean_plus - state.mean_minus) / _SQRT2
    n_a = 0.5 * (state.n_plus + state.n_minus + 2.0 * state.cross_pm.real)
    n_b = 0.5 * (state.n_plus + state.n_minus - 2.0 * state.cross_pm.real)
    cross = 0.5 * e * (state.n_plus - state.n_minus - 2j * state.cross_pm.imag)
    return MomentState(mean_a, mean_b, n_a, n_b, cross)


def supermode_couplings(params: SystemParams) -> SupermodeCouplings:
    """Shared- and local-bath weights in the super-mode basis."""
    phi = params.coupling.phase_phi
    e = cmath.exp(-1j * phi)
    p_a, p_b = params.shared.p_a, params.shared.p_b
    p_plus = (p_a + e * p_b) / _SQRT2
    p_minus = (p_a - e * p_b) / _SQRT2
    return SupermodeCouplings(
        p_plus_z=p_plus,
        p_minus_z=p_minus,
        mu_z=-p_plus * p_minus.conjugate(),
        local_b_weights=(e / _SQRT2, -e / _SQRT2),
    )


def decoherence_free_mode(params: SystemParams, tol: float = 1e-12):
    """Which super-mode (if any) carries zero weight in the shared jump operator.

    Returns "minus" when p_minus_z = 0 (for instance phi = 0 with
    p_a = p_b), "plus" when p_plus_z = 0 (phi = pi with p_a = p_b), and
    None otherwise.
    """
    c = supermode_couplings(params)
    if abs(c.p_minus_z) < tol and abs(c.p_plus_z) >= tol:
        return "minus"
    if abs(c.p_plus_z) < tol and abs(c.p_minus_z) >= tol:
        return "plus"
    return None


def rhs_global(params: SystemParams, state: SupermodeState) -> SupermodeState:
    """Time derivatives of the super-mode moments.

    The cross coupling is (Gamma/2) mu_z^* + (kappa_b - kappa_a)/4 on the
    plus equations and its conjugate pattern on the minus equations.  The
    drive term of the cross moment uses conj(<C+>), as required for the
    basis change of the local equations to be exact.
    """
    c = supermode_couplings(params)
    gam = params.shared.gamma
    ka, kb = params.local.kappa_a, params.local.kappa_b
    f = params.drive.amplitude_F / _SQRT2
    delta = params.drive.detuning_Delta
    j_mag = params.coupling.magnitude_J

    damp_p = gam * abs(c.p_plus_z) ** 2 + 0.5 * (ka + kb)
    damp_m = gam * abs(c.p_minus_z) ** 2 + 0.5 * (ka + kb)
    g_pm = 0.5 * gam * c.mu_z.conjugate() + 0.25 * (kb - ka)
    g_mp = 0.5 * gam * c.mu_z + 0.25 * (kb - ka)

    cp, cm = state.mean_plus, state.mean_minus
    np_, nm, x = state.n_plus, state.n_minus, state.cross_pm

    d_cp = -0.5 * (damp_p + 2j * (delta + j_mag)) * cp + g_pm * cm - 1j * f
    d_cm = -0.5 * (damp_m + 2j * (delta - j_mag)) * cm + g_mp * cp - 1j * f
    d_np = -damp_p * np_ + 2.0 * (g_pm * x).real - 2.0 * (f * cp).imag
    d_nm = -damp_m * nm + 2.0 * (g_pm * x).real - 2.0 * (f * cm).imag
    d_x = (
        -0.5 * (damp_p + damp_m - 4j * j_mag) * x
        + g_mp * np_
        + g_mp * nm
        - 1j * f * cp.conjugate()
        + 1j * f * cm
    )
    return SupermodeState(d_cp, d_cm, d_np, d_nm, d_x)


def _pack(state: SupermodeState) -> np.ndarray:
    return np.array(
        [
            state.mean_plus.real, state.mean_plus.imag,
            state.mean_minus.real, state.mean_minus.imag,
            state.n_plus, state.n_minus,
            state.cross_pm.real, state.cross_pm.imag,
        ]
    )


def _unpack(v: np.ndarray) -> SupermodeState:
    return SupermodeState(
        mean_plus=complex(v[0], v[1]),
        mean_minus=complex(v[2], v[3]),
        n_plus=float(v[4]),
        n_minus=float(v[5]),
        cross_pm=complex(v[6], v[7]),
    )


def integrate_global(
    params: SystemParams,
    initial: SupermodeState = SupermodeState(),
    t_end: float = 1.0,
    control: StepControl | None = None,
    samples: int = 600,
) -> tuple[np.ndarray, list[SupermodeState]]:
    """Integrate the super-mode moment equations with the shared fixed-step core."""
    rows = integrate_linear(
        lambda s: rhs_global(params, s), _pack(initial), t_end, control, samples, _pack, _unpack, _DIM
    )
    times = np.linspace(0.0, t_end, samples + 1)
    return times, [_unpack(r) for r in rows]
