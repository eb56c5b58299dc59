"""Closed moment equations of the driven two-mode model and their integration.

The Lindblad dynamics is linear, so the five tracked expectation values
<a>, <b>, <a^dag a>, <b^dag b>, <a^dag b> obey a closed ODE system:

    d<a>/dt  = -(Gamma_a + kappa_a + 2i Delta)/2 <a> - i (J + i mu Gamma/2) <b> - iF
    d<b>/dt  = -(Gamma_b + kappa_b + 2i Delta)/2 <b> - i (J* + i mu* Gamma/2) <a>
    d<n_a>/dt = -(Gamma_a + kappa_a) <n_a> - 2 Re{ i (J + i mu Gamma/2) <a^dag b> } - 2F Im<a>
    d<n_b>/dt = -(Gamma_b + kappa_b) <n_b> + 2 Re{ i (J - i mu Gamma/2) <a^dag b> }
    d<a^dag b>/dt = -(Gamma_a + kappa_a + Gamma_b + kappa_b)/2 <a^dag b>
                    - i (J* + i mu* Gamma/2) <n_a> + i (J* - i mu* Gamma/2) <n_b> + iF <b>

with Gamma_i = Gamma |p_i|^2 and mu = -p_b conj(p_a).  Zero-temperature
baths keep coherent states coherent, so trajectories started from vacuum
stay factorized: <n_a> = |<a>|^2 and <a^dag b> = conj(<a>) <b>.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NonFinite, StepUnderflow
from .params import SystemParams, derived_rates

_DIM = 8  # real packing: Re/Im of <a>, <b>, then n_a, n_b, Re/Im of <a^dag b>


@dataclass(frozen=True)
class MomentState:
    """First and second moments tracked by the closed equations."""

    mean_a: complex = 0.0
    mean_b: complex = 0.0
    n_a: float = 0.0
    n_b: float = 0.0
    cross_ab: complex = 0.0


VACUUM = MomentState()


def energies(state: MomentState, omega: float = 1.0) -> tuple[float, float, float]:
    """(E_A, E_B, xi) = omega * (n_a, n_b, n_a + n_b).

    Negative occupations from round-off are clamped to zero here, in
    reporting only; the state vector itself is never clamped.
    """
    e_a = omega * max(state.n_a, 0.0)
    e_b = omega * max(state.n_b, 0.0)
    return e_a, e_b, e_a + e_b


def purity_residual(state: MomentState) -> float:
    """Deviation from the coherent (factorized) manifold.

    max over |n_a - |<a>|^2|, |n_b - |<b>|^2| and |<a^dag b> - conj(<a>)<b>|.
    Zero for every coherent product state.
    """
    return max(
        abs(state.n_a - abs(state.mean_a) ** 2),
        abs(state.n_b - abs(state.mean_b) ** 2),
        abs(state.cross_ab - state.mean_a.conjugate() * state.mean_b),
    )


def cauchy_schwarz_excess(state: MomentState) -> float:
    """How much |<a^dag b>|^2 exceeds n_a * n_b (nonpositive for physical states)."""
    return abs(state.cross_ab) ** 2 - state.n_a * state.n_b


def rhs(params: SystemParams, state: MomentState) -> MomentState:
    """Time derivatives of the five moments (pure function)."""
    gamma_a, gamma_b, mu = derived_rates(params)
    gam = params.shared.gamma
    ka, kb = params.local.kappa_a, params.local.kappa_b
    f = params.drive.amplitude_F
    delta = params.drive.detuning_Delta
    j = params.coupling.value

    g_ab = j + 0.5j * mu * gam                       # J + i mu Gamma/2
    g_ab_m = j - 0.5j * mu * gam
    g_ba = j.conjugate() + 0.5j * mu.conjugate() * gam
    g_ba_m = j.conjugate() - 0.5j * mu.conjugate() * gam

    a, b, na, nb, c = state.mean_a, state.mean_b, state.n_a, state.n_b, state.cross_ab

    d_a = -0.5 * (gamma_a + ka + 2j * delta) * a - 1j * g_ab * b - 1j * f
    d_b = -0.5 * (gamma_b + kb + 2j * delta) * b - 1j * g_ba * a
    d_na = -(gamma_a + ka) * na - 2.0 * (1j * g_ab * c).real - 2.0 * f * a.imag
    d_nb = -(gamma_b + kb) * nb + 2.0 * (1j * g_ab_m * c).real
    d_c = (
        -0.5 * (gamma_a + ka + gamma_b + kb) * c
        - 1j * g_ba * na
        + 1j * g_ba_m * nb
        + 1j * f * b
    )
    return MomentState(d_a, d_b, d_na, d_nb, d_c)


def rate_scale(params: SystemParams) -> float:
    """Magnitude of the fastest rate/frequency in the moment equations."""
    gamma_a, gamma_b, mu = derived_rates(params)
    ka, kb = params.local.kappa_a, params.local.kappa_b
    return (
        max((gamma_a + ka) / 2, (gamma_b + kb) / 2)
        + abs(params.drive.detuning_Delta)
        + params.coupling.magnitude_J
        + params.shared.gamma * abs(mu) / 2
    )


def first_moment_matrix(params: SystemParams) -> np.ndarray:
    """Drift matrix M of the homogeneous first-moment system d v/dt = -M v."""
    gamma_a, gamma_b, mu = derived_rates(params)
    gam = params.shared.gamma
    ka, kb = params.local.kappa_a, params.local.kappa_b
    delta = params.drive.detuning_Delta
    j = params.coupling.value
    a_diag = 0.5 * (gamma_a + ka) + 1j * delta
    b_diag = 0.5 * (gamma_b + kb) + 1j * delta
    c1 = 1j * (j + 0.5j * mu * gam)
    c2 = 1j * (j.conjugate() + 0.5j * mu.conjugate() * gam)
    return np.array([[a_diag, c1], [c2, b_diag]], dtype=complex)


def slowest_decay_rate(params: SystemParams) -> float:
    """Smallest decay rate among the first-moment normal modes."""
    eig = np.linalg.eigvals(first_moment_matrix(params))
    return float(np.min(eig.real))


# ---------------------------------------------------------------------------
# fixed-step integration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StepControl:
    """Settings for the deterministic fixed-step integrator.

    dt pins the step directly; otherwise the step is rate_dt divided by the
    fastest system rate.  With adaptive=True the step is halved (Richardson
    style step doubling on the sampled outputs) until successive
    refinements agree within abs_tol.
    """

    dt: float | None = None
    rate_dt: float = 0.005
    abs_tol: float = 1e-9
    adaptive: bool = False
    min_step: float = 1e-12


@dataclass(frozen=True)
class Trajectory:
    """Sampled moment trajectory with reported energies.

    scale is the dimensionless-time factor for plotting (J, or Gamma/2
    when J = 0, or 1 when both couplings vanish): scaled_t = scale * t.
    """

    times: np.ndarray
    states: list[MomentState]
    energies: np.ndarray  # rows (E_A, E_B, xi)
    scale: float

    def purity_residuals(self) -> np.ndarray:
        return np.array([purity_residual(s) for s in self.states])

    def final(self) -> MomentState:
        return self.states[-1]


def reporting_scale(params: SystemParams) -> float:
    """Dimensionless-time factor: J when J > 0, else Gamma/2, else 1."""
    if params.coupling.magnitude_J > 0:
        return params.coupling.magnitude_J
    if params.shared.gamma > 0:
        return params.shared.gamma / 2.0
    return 1.0


def _pack(state: MomentState) -> np.ndarray:
    return np.array(
        [
            state.mean_a.real, state.mean_a.imag,
            state.mean_b.real, state.mean_b.imag,
            state.n_a, state.n_b,
            state.cross_ab.real, state.cross_ab.imag,
        ]
    )


def _unpack(v: np.ndarray) -> MomentState:
    return MomentState(
        mean_a=complex(v[0], v[1]),
        mean_b=complex(v[2], v[3]),
        n_a=float(v[4]),
        n_b=float(v[5]),
        cross_ab=complex(v[6], v[7]),
    )


def _affine_system(deriv, pack, unpack, dim):
    """Recover (M, f) with d x/dt = M x + f by probing a linear derivative function."""
    f = pack(deriv(unpack(np.zeros(dim))))
    m = np.empty((dim, dim))
    for j in range(dim):
        e = np.zeros(dim)
        e[j] = 1.0
        m[:, j] = pack(deriv(unpack(e))) - f
    return m, f


def _rk4_affine_map(m: np.ndarray, f: np.ndarray, h: float):
    """One classic fourth-order step of d x/dt = M x + f as an affine map.

    For a constant linear system the stage combination collapses to the
    quartic Taylor polynomial of the propagator.
    """
    a = h * m
    eye = np.eye(m.shape[0])
    a2 = a @ a
    a3 = a2 @ a
    phi = eye + a + a2 / 2.0 + a3 / 6.0 + a3 @ a / 24.0
    psi = (eye + a / 2.0 + a2 / 6.0 + a3 / 24.0) @ (h * f)
    return phi, psi


def _compose_pow(phi: np.ndarray, psi: np.ndarray, n: int):
    """n-fold composition of the affine map x -> phi x + psi (binary exponentiation)."""
    acc_phi = np.eye(phi.shape[0])
    acc_psi = np.zeros_like(psi)
    while n > 0:
        if n & 1:
            acc_phi, acc_psi = phi @ acc_phi, phi @ acc_psi + psi
        phi, psi = phi @ phi, phi @ psi + psi
        n >>= 1
    return acc_phi, acc_psi


def _sample_linear_system(m, f, x0, t_end, samples, dt_target, min_step):
    if dt_target < min_step:
        raise StepUnderflow(f"step {dt_target:g} below minimum {min_step:g}")
    interval = t_end / samples
    k = max(1, math.ceil(interval / dt_target))
    h = interval / k
    phi, psi = _rk4_affine_map(m, f, h)
    phi_i, psi_i = _compose_pow(phi, psi, k)
    out = np.empty((samples + 1, x0.size))
    out[0] = x0
    x = x0
    for i in range(1, samples + 1):
        x = phi_i @ x + psi_i
        out[i] = x
    return out


def integrate_linear(deriv, initial_vec, t_end, control, samples, pack, unpack, dim):
    """Shared fixed-step driver for any linear-affine moment system."""
    if t_end <= 0:
        raise ValueError("t_end must be positive")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    control = control or StepControl()
    m, f = _affine_system(deriv, pack, unpack, dim)
    scale = float(np.max(np.abs(np.linalg.eigvals(m)))) if np.any(m) else 0.0
    dt = control.dt if control.dt is not None else control.rate_dt / max(scale, 1e-3)
    rows = _sample_linear_system(m, f, initial_vec, t_end, samples, dt, control.min_step)
    if control.adaptive:
        for _ in range(24):
            dt /= 2.0
            refined = _sample_linear_system(m, f, initial_vec, t_end, samples, dt, control.min_step)
            if np.max(np.abs(refined - rows)) < control.abs_tol:
                rows = refined
                break
            rows = refined
        else:
            raise StepUnderflow("step doubling did not converge within abs_tol")
    if not np.all(np.isfinite(rows)):
        raise NonFinite("moment integration produced non-finite values")
    return rows


def integrate(
    params: SystemParams,
    initial: MomentState = VACUUM,
    t_end: float | None = None,
    control: StepControl | None = None,
    samples: int = 600,
) -> Trajectory:
    """Integrate the moment equations from `initial` and sample the result.

    t_end defaults to the time at which the slowest mode has decayed by
    nine decades, log(1e9) / slowest_decay_rate.
    """
    if t_end is None:
        rate = slowest_decay_rate(params)
        if rate <= 0:
            raise ValueError("t_end is required for undamped parameter sets")
        t_end = math.log(1e9) / rate
    rows = integrate_linear(
        lambda s: rhs(params, s), _pack(initial), t_end, control, samples, _pack, _unpack, _DIM
    )
    times = np.linspace(0.0, t_end, samples + 1)
    states = [_unpack(r) for r in rows]
    energy_rows = np.array([energies(s, params.omega) for s in states])
    return Trajectory(times=times, states=states, energies=energy_rows, scale=reporting_scale(params))
