"""Charging optimization: detuning optima, the shared-bath weight ratio,
and the comparisons against a directly driven battery.

The numeric optimizers are deterministic (dense grid with leftmost-maximum
tie breaking, then golden-section refinement) and serve as the oracle for
every closed form in this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import steady
from .errors import DivergentSteadyState, PoleAtResonance, ZeroRate
from .params import SystemParams, derived_rates, make_params

_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


# ---------------------------------------------------------------------------
# deterministic scalar search
# ---------------------------------------------------------------------------

def golden_section_max(f, lo: float, hi: float, xtol: float = 1e-10) -> float:
    """Maximize a unimodal scalar function on [lo, hi] by golden-section search."""
    x1 = hi - _INV_GOLDEN * (hi - lo)
    x2 = lo + _INV_GOLDEN * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while hi - lo > xtol:
        if f1 > f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INV_GOLDEN * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INV_GOLDEN * (hi - lo)
            f2 = f(x2)
    return 0.5 * (lo + hi)


def grid_refine_max(f, lo: float, hi: float, points: int = 2001, xtol: float = 1e-10):
    """Dense-grid argmax (leftmost on ties) refined by golden-section search."""
    step = (hi - lo) / (points - 1)
    best_i, best_v = 0, -math.inf
    for i in range(points):
        v = f(lo + i * step)
        if v > best_v:
            best_i, best_v = i, v
    left = lo + max(best_i - 1, 0) * step
    right = lo + min(best_i + 1, points - 1) * step
    x = golden_section_max(f, left, right, xtol)
    return x, f(x)


# ---------------------------------------------------------------------------
# detuning optimization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DetuningOptimum:
    """Result of maximizing the stationary battery energy over the drive detuning."""

    delta_opt: float
    both_branches: tuple[float, float]
    achieved_E_B: float
    method: str  # "closed-form-conventional", "closed-form-shared", or "numeric"
    closed_form_ok: bool = True
    note: str = ""


def _battery_energy_at(params: SystemParams, delta: float) -> float:
    p = make_params(
        F=params.drive.amplitude_F,
        Delta=delta,
        J=params.coupling.magnitude_J,
        phi=params.coupling.phase_phi,
        kappa_a=params.local.kappa_a,
        kappa_b=params.local.kappa_b,
        Gamma=params.shared.gamma,
        p_a=params.shared.p_a,
        p_b=params.shared.p_b,
        omega=params.omega,
    )
    try:
        return steady.battery_energy(p)
    except DivergentSteadyState:
        return math.inf  # resonant divergence: an unbounded maximum


def optimal_detuning_numeric(
    params: SystemParams,
    span: tuple[float, float] | None = None,
    grid_points: int = 2001,
    xtol: float = 1e-10,
) -> DetuningOptimum:
    """Numeric argmax of the stationary battery energy over the detuning.

    The search range defaults to +-2|J| widened by Gamma.  Independent of
    the drive amplitude, since E_B scales as F^2.
    """
    if span is None:
        j = params.coupling.magnitude_J
        half = 2.0 * j + params.shared.gamma
        half = half if half > 0 else 1.0
        span = (-half, half)
    lo, hi = span
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise ValueError("span must be a finite nonempty interval")
    delta, value = grid_refine_max(lambda d: _battery_energy_at(params, d), lo, hi, grid_points, xtol)
    return DetuningOptimum(
        delta_opt=delta,
        both_branches=(delta, -delta),
        achieved_E_B=value,
        method="numeric",
    )


def optimal_detuning_conventional(
    J: float, kappa_a: float, kappa_b: float, F: float = 0.1, omega: float = 1.0
) -> DetuningOptimum:
    """Optimal detuning without a shared bath: Delta_opt = +-sqrt(J^2 - kappa^2/8).

    kappa^2 = kappa_a^2 + kappa_b^2.  When the radicand is negative there
    is no interior critical point; the maximum sits at Delta = 0 and the
    result is tagged method="numeric".
    """
    disc = J * J - (kappa_a**2 + kappa_b**2) / 8.0
    if disc >= 0.0:
        root = math.sqrt(disc)
        conv = make_params(F=F, Delta=root, J=J, kappa_a=kappa_a, kappa_b=kappa_b, Gamma=0.0, omega=omega)
        achieved = steady.battery_energy(conv) if conv.local.kappa_a + conv.local.kappa_b > 0 else math.inf
        return DetuningOptimum(
            delta_opt=root,
            both_branches=(root, -root),
            achieved_E_B=achieved,
            method="closed-form-conventional",
        )
    flat = make_params(F=F, Delta=0.0, J=J, kappa_a=kappa_a, kappa_b=kappa_b, Gamma=0.0, omega=omega)
    return DetuningOptimum(
        delta_opt=0.0,
        both_branches=(0.0, 0.0),
        achieved_E_B=steady.battery_energy(flat),
        method="numeric",
        closed_form_ok=False,
        note="no interior optimum: J^2 < kappa^2/8, maximum at Delta = 0",
    )


def shared_detuning_candidates(params: SystemParams) -> list[float]:
    """Real roots of the stationarity cubic of E_B(Delta) with a shared bath.

    Maximizing E_B is minimizing the response denominator, whose
    stationarity condition is the depressed cubic

        144 Delta^3 - 18 W Delta - K = 0,
        W = 8 J^2 - 2 G^2 - (Gamma_a + kappa_a)^2 - (Gamma_b + kappa_b)^2,
        K = 36 |J| G cos(phi_eff) (Gamma_a + Gamma_b + kappa_a + kappa_b),

    with G = Gamma |mu|.  All Cardano cube-root branches are enumerated
    with complex arithmetic and the real candidates returned; the caller
    certifies them against the numeric optimizer.
    """
    gamma_a, gamma_b, mu = derived_rates(params)
    k = steady.kernels(params)
    ka, kb = params.local.kappa_a, params.local.kappa_b
    j = params.coupling.magnitude_J
    g = k.gamma_eff
    w = 8.0 * j * j - 2.0 * g * g - (gamma_a + ka) ** 2 - (gamma_b + kb) ** 2
    s = gamma_a + gamma_b + ka + kb
    kk = 36.0 * j * g * math.cos(k.phi_eff) * s
    disc = complex(kk * kk - 6.0 * w**3) ** 0.5
    candidates: set[float] = set()
    for sign in (1.0, -1.0):
        base = (kk + sign * disc) / 288.0
        if abs(base) < 1e-300:
            continue
        radius = abs(base) ** (1.0 / 3.0)
        theta = math.atan2(base.imag, base.real) / 3.0
        for branch in range(3):
            t = radius * complex(
                math.cos(theta + 2.0 * math.pi * branch / 3.0),
                math.sin(theta + 2.0 * math.pi * branch / 3.0),
            )
            root = t + w / (24.0 * t)
            if abs(root.imag) <= 1e-8 * max(1.0, abs(root.real)):
                candidates.add(round(float(root.real), 14))
    if not candidates:
        candidates.add(0.0)
    return sorted(candidates)


def optimal_detuning_shared(
    params: SystemParams,
    span: tuple[float, float] | None = None,
    certify_tol: float = 1e-6,
) -> DetuningOptimum:
    """Optimal detuning with the shared bath present.

    Evaluates the closed-form cubic-root candidates, picks the real root
    with the largest battery energy, and always cross-checks against the
    numeric optimizer.  If the achieved energies disagree by more than
    certify_tol the numeric result is returned with closed_form_ok=False.
    """
    numeric = optimal_detuning_numeric(params, span)
    candidates = shared_detuning_candidates(params)
    # ties between sign branches resolve to the positive root
    best = max(candidates, key=lambda d: (_battery_energy_at(params, d), d))
    achieved = _battery_energy_at(params, best)
    if not math.isfinite(achieved) or abs(achieved - numeric.achieved_E_B) > certify_tol:
        return DetuningOptimum(
            delta_opt=numeric.delta_opt,
            both_branches=numeric.both_branches,
            achieved_E_B=numeric.achieved_E_B,
            method="numeric",
            closed_form_ok=False,
            note="closed-form candidates disagreed with the numeric argmax",
        )
    even_landscape = params.coupling.magnitude_J * params.shared.gamma == 0.0 or math.isclose(
        math.cos(steady.kernels(params).phi_eff), 0.0, abs_tol=1e-15
    )
    branches = (best, -best) if even_landscape else (best, best)
    return DetuningOptimum(
        delta_opt=best,
        both_branches=branches,
        achieved_E_B=achieved,
        method="closed-form-shared",
    )


# ---------------------------------------------------------------------------
# shared-bath weight-ratio optimization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RatioOptimum:
    """Optimal shared-bath weight ratio and the energies it achieves.

    y_opt is the weight magnitude ratio |p_a| / |p_b| under the unit
    product normalization |p_a p_b| = 1, so the induced damping ratio is
    Gamma_a / Gamma_b = y_opt^2.
    """

    y_opt: float
    achieved: tuple[float, float, float]  # (E_A, E_B, xi)


def _ratio_params(y: float, kappa_a: float, kappa_b: float, F: float, Gamma: float, omega: float) -> SystemParams:
    # weight ratio y = |p_a| / |p_b| with |p_a p_b| = 1
    return make_params(
        F=F, Delta=0.0, J=0.0, kappa_a=kappa_a, kappa_b=kappa_b,
        Gamma=Gamma, p_a=math.sqrt(y), p_b=1.0 / math.sqrt(y), omega=omega,
    )


def super_optimal_ratio(
    kappa_a: float, kappa_b: float, F: float = 0.1, Gamma: float = 0.4, omega: float = 1.0
) -> RatioOptimum:
    """Battery-optimal shared-bath weight ratio y = sqrt(kappa_a / kappa_b).

    Achieved energies are evaluated from the general closed forms at
    J = 0, Delta = 0 with p_a = (kappa_a/kappa_b)^{1/4} and
    p_b = (kappa_a/kappa_b)^{-1/4}.
    """
    if kappa_a <= 0 or kappa_b <= 0:
        raise ZeroRate("ratio optimization needs kappa_a > 0 and kappa_b > 0")
    y = math.sqrt(kappa_a / kappa_b)
    p = _ratio_params(y, kappa_a, kappa_b, F, Gamma, omega)
    e_a = steady.charger_energy(p)
    e_b = steady.battery_energy(p)
    return RatioOptimum(y_opt=y, achieved=(e_a, e_b, e_a + e_b))


def ratio_argmax_numeric(
    kappa_a: float,
    kappa_b: float,
    Gamma: float,
    F: float = 0.1,
    objective: str = "battery",
    lo: float = 0.01,
    hi: float = 100.0,
    grid_points: int = 2001,
) -> float:
    """Numeric argmax over the weight ratio y on a log grid with refinement.

    objective "battery" maximizes E_B, "total" maximizes xi = E_A + E_B.
    """
    if kappa_a <= 0 or kappa_b <= 0:
        raise ZeroRate("ratio optimization needs kappa_a > 0 and kappa_b > 0")

    def value(log_y: float) -> float:
        p = _ratio_params(math.exp(log_y), kappa_a, kappa_b, F, Gamma, 1.0)
        if objective == "battery":
            return steady.battery_energy(p)
        if objective == "total":
            return steady.total_energy(p)
        raise ValueError(f"unknown objective '{objective}'")

    log_opt, _ = grid_refine_max(value, math.log(lo), math.log(hi), grid_points, xtol=1e-12)
    return math.exp(log_opt)


def super_optimal_energies(
    F: float, Gamma: float, kappa_a: float, kappa_b: float, omega: float = 1.0
) -> tuple[float, float, float]:
    """Stationary (E_A, E_B, xi) at the battery-optimal weight ratio, closed form.

        E_B = 4 G^2 F^2 / (ka kb (2G + sqrt(ka kb))^2)
        xi  = 4 F^2 (ka kb^2 + 2 G kb sqrt(ka kb) + G^2 (ka + kb)) / (ka^2 kb (2G + sqrt(ka kb))^2)
        E_A = xi - E_B = 4 F^2 (G + sqrt(ka kb))^2 / (ka^2 (2G + sqrt(ka kb))^2)

    Note the charger energy at this ratio is strictly below the single
    driven mode value 4 F^2 / kappa_a^2, which is the y -> 0 boundary
    value of E_A, not the value at the battery-optimal ratio.
    """
    if kappa_a <= 0 or kappa_b <= 0:
        raise ZeroRate("super-optimal energies need kappa_a > 0 and kappa_b > 0")
    if Gamma < 0:
        raise ZeroRate("Gamma must be >= 0")
    root = math.sqrt(kappa_a * kappa_b)
    shell = (2.0 * Gamma + root) ** 2
    e_b = 4.0 * Gamma**2 * F**2 / (kappa_a * kappa_b * shell)
    xi = (
        4.0 * F**2
        * (kappa_a * kappa_b**2 + 2.0 * Gamma * kappa_b * root + Gamma**2 * (kappa_a + kappa_b))
        / (kappa_a**2 * kappa_b * shell)
    )
    return omega * (xi - e_b), omega * e_b, omega * xi


# ---------------------------------------------------------------------------
# comparisons against the directly driven battery
# ---------------------------------------------------------------------------

def single_battery_energy(F: float, kappa: float, omega: float = 1.0) -> float:
    """Stationary energy 4 F^2 / kappa^2 of a single resonantly driven mode."""
    if kappa <= 0:
        raise ZeroRate("single driven mode needs kappa > 0")
    return omega * 4.0 * F**2 / kappa**2


def redistribution_gap(F: float, Gamma: float, kappa_a: float, kappa_b: float) -> float:
    """Battery-energy gap between super-optimal and conventional-optimal charging.

    Under the Gamma = 2|J| correspondence the gap has the closed form

        4 G^2 F^2 ( 4 / ((ka+kb)^2 ((ka-kb)^2 - 4G^2)) + 1 / (ka kb (2G + sqrt(ka kb))^2) )

    and equals super_optimal E_B minus the conventional optimum exactly.
    """
    if kappa_a <= 0 or kappa_b <= 0:
        raise ZeroRate("redistribution gap needs kappa_a > 0 and kappa_b > 0")
    pole = (kappa_a - kappa_b) ** 2 - 4.0 * Gamma**2
    scale = max((kappa_a - kappa_b) ** 2, 4.0 * Gamma**2, 1e-30)
    if abs(pole) <= 1e-12 * scale:
        raise PoleAtResonance("(kappa_a - kappa_b)^2 = 4 Gamma^2")
    root = math.sqrt(kappa_a * kappa_b)
    return (
        4.0 * Gamma**2 * F**2
        * (4.0 / ((kappa_a + kappa_b) ** 2 * pole) + 1.0 / (kappa_a * kappa_b * (2.0 * Gamma + root) ** 2))
    )


def delta_E_diss(F: float, Gamma: float, kappa: float, kappa_b: float) -> float:
    """Super-optimal battery energy minus the single driven mode energy.

        4 F^2 ( G^2 kappa / (kappa_b (2G + sqrt(kappa kappa_b))^2) - 1 ) / kappa^2

    Grows without bound as kappa_b -> 0.
    """
    if kappa <= 0 or kappa_b <= 0:
        raise ZeroRate("delta_E_diss needs kappa > 0 and kappa_b > 0")
    shell = (2.0 * Gamma + math.sqrt(kappa * kappa_b)) ** 2
    return 4.0 * F**2 * (Gamma**2 * kappa / (kappa_b * shell) - 1.0) / kappa**2


def delta_E_coh(F: float, J: float, kappa: float, kappa_b: float, form: str = "consistent") -> float:
    """Conventional-optimal battery energy minus the single driven mode energy.

    form="consistent" (default) evaluates E_B at the optimal detuning from
    the general closed form and subtracts 4 F^2 / kappa^2; its pole sits at
    (kappa - kappa_b)^2 = 16 J^2, outside the regime where the interior
    detuning optimum exists.

    form="printed" evaluates the commonly quoted expression

        4 F^2 ( -4 J^2 / ((kappa + kappa_b)^2 ((kappa - kappa_b)^2 - 4 J^2)) - 1 / kappa^2 )

    whose first term corresponds to substituting Gamma = J instead of
    Gamma = 2J into the dissipative comparison; at kappa_b = 0.01,
    kappa = 0.05, J = 0.2, F = 0.1 it gives -4.777 while the consistent
    difference is -4.861.  It is kept for its kappa_b -> 0 limit
    4 F^2 / (4 J^2 - kappa^2), see delta_E_coh_limit.
    """
    if kappa <= 0 or kappa_b <= 0:
        raise ZeroRate("delta_E_coh needs kappa > 0 and kappa_b > 0")
    if form == "printed":
        pole = (kappa - kappa_b) ** 2 - 4.0 * J**2
        scale = max((kappa - kappa_b) ** 2, 4.0 * J**2, 1e-30)
        if abs(pole) <= 1e-12 * scale:
            raise PoleAtResonance("(kappa - kappa_b)^2 = 4 J^2")
        return 4.0 * F**2 * (-4.0 * J**2 / ((kappa + kappa_b) ** 2 * pole) - 1.0 / kappa**2)
    if form != "consistent":
        raise ValueError(f"unknown form '{form}'")
    best = optimal_detuning_conventional(J, kappa, kappa_b, F=F)
    return best.achieved_E_B - single_battery_energy(F, kappa)


def delta_E_coh_limit(F: float, J: float, kappa: float) -> float:
    """kappa_b -> 0 limit of the printed coherent comparison: 4 F^2 / (4 J^2 - kappa^2)."""
    pole = 4.0 * J**2 - kappa**2
    if abs(pole) <= 1e-12 * max(4.0 * J**2, kappa**2, 1e-30):
        raise PoleAtResonance("4 J^2 = kappa^2")
    return 4.0 * F**2 / pole


@dataclass(frozen=True)
class ComparisonReport:
    """Stationary-energy comparison of the three charging arrangements."""

    E_single: float
    delta_E_coh: float
    delta_E_diss: float
    G_B_r: float


def compare_charging(
    F: float, J: float, Gamma: float, kappa: float, kappa_b: float
) -> ComparisonReport:
    """Evaluate all comparison quantities at one parameter point."""
    return ComparisonReport(
        E_single=single_battery_energy(F, kappa),
        delta_E_coh=delta_E_coh(F, J, kappa, kappa_b),
        delta_E_diss=delta_E_diss(F, Gamma, kappa, kappa_b),
        G_B_r=redistribution_gap(F, Gamma, kappa, kappa_b),
    )
