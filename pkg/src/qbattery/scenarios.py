"""Declarative charging scenarios, figure-data reproduction, and self-verification.

A scenario is a flat JSON document selecting one of the five preset
charging arrangements (or "custom") plus parameter overrides.  Presets pin
the parameter pattern that defines them; conflicting overrides are
configuration errors.  Running a scenario integrates the moment equations
from vacuum and writes trajectory.csv, steady.csv and meta.json with
fixed formatting, so identical configs produce byte-identical output.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import fock, moments, optimize, steady, supermode
from .errors import ConfigError
from .moments import StepControl
from .params import SystemParams, make_params

SCENARIOS = (
    "conventional",
    "shared-added",
    "shared-replaced",
    "super-optimal",
    "single-battery",
    "custom",
)
DETUNING_MODES = ("fixed", "optimal-closed", "optimal-numeric")
OUTPUT_DIR_ENV = "QBATTERY_OUTPUT_DIR"

_PARAM_KEYS = (
    "F", "Delta", "J_mag", "J_phase", "kappa_a", "kappa_b", "Gamma",
    "p_a_re", "p_a_im", "p_b_re", "p_b_im", "omega",
)
_ALL_KEYS = _PARAM_KEYS + ("scenario", "detuning_mode", "horizon", "samples", "output_dir")

_BASE_DEFAULTS = {
    "F": 0.1, "Delta": 0.0, "J_mag": 0.2, "J_phase": 0.0,
    "kappa_a": 0.05, "kappa_b": 0.01, "Gamma": 0.0,
    "p_a_re": 1.0, "p_a_im": 0.0, "p_b_re": 1.0, "p_b_im": 0.0,
    "omega": 1.0,
}

# per-scenario parameter pattern: defaults overriding the base, and pinned
# keys a user-supplied value must match
_SCENARIO_DEFAULTS = {
    "conventional": {"Gamma": 0.0},
    "shared-added": {"Gamma": 0.4},
    "shared-replaced": {"J_mag": 0.0, "Gamma": 0.4},
    "super-optimal": {"J_mag": 0.0, "Gamma": 0.4, "Delta": 0.0},
    "single-battery": {"J_mag": 0.0, "Gamma": 0.0},
    "custom": {},
}
_SCENARIO_PINS = {
    "conventional": ("Gamma",),
    "shared-added": (),
    "shared-replaced": ("J_mag",),
    "super-optimal": ("J_mag", "Delta", "p_a_re", "p_a_im", "p_b_re", "p_b_im"),
    "single-battery": ("J_mag", "Gamma"),
    "custom": (),
}
_DEFAULT_DETUNING_MODE = {
    "conventional": "optimal-closed",
    "shared-added": "optimal-closed",
    "shared-replaced": "fixed",
    "super-optimal": "fixed",
    "single-battery": "fixed",
    "custom": "fixed",
}


@dataclass(frozen=True)
class ScenarioConfig:
    """Validated scenario configuration with all keys resolved."""

    scenario: str
    values: dict
    detuning_mode: str
    horizon: float
    samples: int
    output_dir: str


def _require_number(raw: dict, key: str, default: float) -> float:
    if key not in raw:
        return float(default)
    v = raw[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(key, f"expected a number, got {v!r}")
    if not math.isfinite(float(v)):
        raise ConfigError(key, "must be finite")
    return float(v)


def load_config(source) -> ScenarioConfig:
    """Build a ScenarioConfig from a dict, a JSON string, or a file path."""
    if isinstance(source, (str, Path)):
        path = Path(source)
        if path.exists():
            raw = json.loads(path.read_text())
        else:
            try:
                raw = json.loads(str(source))
            except json.JSONDecodeError as exc:
                raise ConfigError("<file>", f"no such file and not valid JSON: {source}") from exc
    elif isinstance(source, dict):
        raw = dict(source)
    else:
        raise ConfigError("<root>", f"unsupported config source {type(source).__name__}")
    if not isinstance(raw, dict):
        raise ConfigError("<root>", "top-level JSON value must be an object")

    for key in raw:
        if key not in _ALL_KEYS:
            raise ConfigError(key, "unknown key")

    scenario = raw.get("scenario", "custom")
    if scenario not in SCENARIOS:
        raise ConfigError("scenario", f"must be one of {SCENARIOS}, got {scenario!r}")

    defaults = dict(_BASE_DEFAULTS)
    defaults.update(_SCENARIO_DEFAULTS[scenario])
    if scenario == "super-optimal":
        ka = _require_number(raw, "kappa_a", defaults["kappa_a"])
        kb = _require_number(raw, "kappa_b", defaults["kappa_b"])
        if ka <= 0 or kb <= 0:
            raise ConfigError("kappa_a", "super-optimal preset needs kappa_a > 0 and kappa_b > 0")
        ratio = (ka / kb) ** 0.25
        defaults.update({"p_a_re": ratio, "p_a_im": 0.0, "p_b_re": 1.0 / ratio, "p_b_im": 0.0})

    values = {}
    for key in _PARAM_KEYS:
        values[key] = _require_number(raw, key, defaults[key])
    # presets are definitions, not suggestions: pinned keys must match exactly
    for key in _SCENARIO_PINS[scenario]:
        if key in raw and values[key] != defaults[key]:
            raise ConfigError(key, f"{scenario} preset pins {key} = {defaults[key]}")

    if scenario in ("conventional", "shared-added") and values["J_mag"] <= 0:
        raise ConfigError("J_mag", f"{scenario} preset needs J_mag > 0")
    if scenario in ("shared-added", "shared-replaced", "super-optimal") and values["Gamma"] <= 0:
        raise ConfigError("Gamma", f"{scenario} preset needs Gamma > 0")

    detuning_mode = raw.get("detuning_mode", _DEFAULT_DETUNING_MODE[scenario])
    if detuning_mode not in DETUNING_MODES:
        raise ConfigError("detuning_mode", f"must be one of {DETUNING_MODES}, got {detuning_mode!r}")
    horizon = _require_number(raw, "horizon", 300.0)
    if horizon <= 0:
        raise ConfigError("horizon", "must be > 0")
    samples = raw.get("samples", 600)
    if isinstance(samples, bool) or not isinstance(samples, int) or samples < 1:
        raise ConfigError("samples", f"expected a positive integer, got {samples!r}")
    output_dir = raw.get("output_dir", os.environ.get(OUTPUT_DIR_ENV, "."))
    if not isinstance(output_dir, str):
        raise ConfigError("output_dir", "expected a string path")
    return ScenarioConfig(
        scenario=scenario,
        values=values,
        detuning_mode=detuning_mode,
        horizon=horizon,
        samples=samples,
        output_dir=output_dir,
    )


@dataclass(frozen=True)
class ResolvedScenario:
    """Scenario with the detuning resolved and the time scale fixed."""

    config: ScenarioConfig
    params: SystemParams
    delta_opt: float | None
    scale: float
    t_end: float
    y_opt: float | None = None


def _params_from_values(values: dict, delta: float | None = None) -> SystemParams:
    return make_params(
        F=values["F"],
        Delta=values["Delta"] if delta is None else delta,
        J=values["J_mag"],
        phi=values["J_phase"],
        kappa_a=values["kappa_a"],
        kappa_b=values["kappa_b"],
        Gamma=values["Gamma"],
        p_a=complex(values["p_a_re"], values["p_a_im"]),
        p_b=complex(values["p_b_re"], values["p_b_im"]),
        omega=values["omega"],
    )


def resolve(config: ScenarioConfig) -> ResolvedScenario:
    """Fill in the optimal detuning (when requested) and the reporting scale."""
    values = config.values
    delta_opt = None
    if config.detuning_mode == "optimal-closed":
        if values["J_mag"] == 0.0:
            delta_opt = 0.0  # no transfer resonance to tune to
        elif values["Gamma"] == 0.0:
            delta_opt = optimize.optimal_detuning_conventional(
                values["J_mag"], values["kappa_a"], values["kappa_b"], F=values["F"]
            ).delta_opt
        else:
            delta_opt = optimize.optimal_detuning_shared(_params_from_values(values)).delta_opt
    elif config.detuning_mode == "optimal-numeric":
        delta_opt = optimize.optimal_detuning_numeric(_params_from_values(values)).delta_opt
    params = _params_from_values(values, delta=delta_opt)
    scale = moments.reporting_scale(params)
    y_opt = None
    if config.scenario == "super-optimal":
        y_opt = math.sqrt(values["kappa_a"] / values["kappa_b"])
    return ResolvedScenario(
        config=config,
        params=params,
        delta_opt=delta_opt,
        scale=scale,
        t_end=config.horizon / scale,
        y_opt=y_opt,
    )


# ---------------------------------------------------------------------------
# output files
# ---------------------------------------------------------------------------

_TRAJECTORY_COLUMNS = (
    "t", "scaled_t", "re_a", "im_a", "re_b", "im_b",
    "n_a", "n_b", "E_A", "E_B", "xi", "purity_residual",
)


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _write_csv(path: Path, header: tuple[str, ...], rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def _trajectory_rows(traj: moments.Trajectory):
    for t, state, (e_a, e_b, xi) in zip(traj.times, traj.states, traj.energies):
        yield (
            t, traj.scale * t,
            state.mean_a.real, state.mean_a.imag,
            state.mean_b.real, state.mean_b.imag,
            state.n_a, state.n_b,
            e_a, e_b, xi,
            moments.purity_residual(state),
        )


@dataclass(frozen=True)
class ScenarioResult:
    output_dir: Path
    trajectory_csv: Path
    steady_csv: Path
    meta_json: Path
    summary: dict


def run_scenario(config: ScenarioConfig | dict | str | Path) -> ScenarioResult:
    """Integrate a scenario from vacuum and write its output files."""
    if not isinstance(config, ScenarioConfig):
        config = load_config(config)
    resolved = resolve(config)
    params = resolved.params

    traj = moments.integrate(params, t_end=resolved.t_end, samples=config.samples)
    analytic = steady.steady_state_report(params, method="analytic")
    solved = steady.steady_state_report(params, method="linear-solve")
    final_e = traj.energies[-1]

    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    trajectory_csv = out / "trajectory.csv"
    steady_csv = out / "steady.csv"
    meta_json = out / "meta.json"

    _write_csv(trajectory_csv, _TRAJECTORY_COLUMNS, _trajectory_rows(traj))
    # steady.csv carries a non-numeric first column; write it directly
    steady_lines = ["method,E_A,E_B,xi"]
    for name, report in (("analytic", analytic), ("linear-solve", solved)):
        steady_lines.append(f"{name},{_fmt(report.E_A)},{_fmt(report.E_B)},{_fmt(report.xi)}")
    steady_lines.append(
        f"trajectory-final,{_fmt(final_e[0])},{_fmt(final_e[1])},{_fmt(final_e[2])}"
    )
    steady_csv.write_text("\n".join(steady_lines) + "\n")

    meta = {
        "scenario": config.scenario,
        "detuning_mode": config.detuning_mode,
        "horizon": config.horizon,
        "samples": config.samples,
        "scale": resolved.scale,
        "t_end": resolved.t_end,
        **{k: config.values[k] for k in _PARAM_KEYS},
    }
    meta["Delta_resolved"] = params.drive.detuning_Delta
    if resolved.delta_opt is not None:
        meta["Delta_opt"] = resolved.delta_opt
    if resolved.y_opt is not None:
        meta["y_opt"] = resolved.y_opt
    meta_json.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")

    summary = {
        "E_A_analytic": analytic.E_A,
        "E_B_analytic": analytic.E_B,
        "xi_analytic": analytic.xi,
        "E_A_solve": solved.E_A,
        "E_B_solve": solved.E_B,
        "E_A_final": float(final_e[0]),
        "E_B_final": float(final_e[1]),
        "xi_final": float(final_e[2]),
        "max_purity_residual": float(np.max(traj.purity_residuals())),
        "delta_opt": resolved.delta_opt,
    }
    return ScenarioResult(out, trajectory_csv, steady_csv, meta_json, summary)


# ---------------------------------------------------------------------------
# figure data
# ---------------------------------------------------------------------------

FIGURE_IDS = ("fig2", "fig3a", "fig3b", "fig4a", "fig4b", "fig6", "figB")

_FIG_COMMON = {"F": 0.1, "kappa_a": 0.05, "kappa_b": 0.01, "J_mag": 0.2, "Gamma": 0.4}


def _conventional_optimal_params() -> tuple[SystemParams, float]:
    c = _FIG_COMMON
    opt = optimize.optimal_detuning_conventional(c["J_mag"], c["kappa_a"], c["kappa_b"], F=c["F"])
    return (
        make_params(F=c["F"], Delta=opt.delta_opt, J=c["J_mag"], kappa_a=c["kappa_a"], kappa_b=c["kappa_b"]),
        opt.delta_opt,
    )


def _shared_added_optimal_params() -> tuple[SystemParams, float]:
    c = _FIG_COMMON
    base = make_params(
        F=c["F"], J=c["J_mag"], kappa_a=c["kappa_a"], kappa_b=c["kappa_b"], Gamma=c["Gamma"]
    )
    opt = optimize.optimal_detuning_shared(base)
    return (
        make_params(
            F=c["F"], Delta=opt.delta_opt, J=c["J_mag"],
            kappa_a=c["kappa_a"], kappa_b=c["kappa_b"], Gamma=c["Gamma"],
        ),
        opt.delta_opt,
    )


def _shared_replaced_params(super_optimal: bool) -> SystemParams:
    c = _FIG_COMMON
    if super_optimal:
        ratio = (c["kappa_a"] / c["kappa_b"]) ** 0.25
        p_a, p_b = ratio, 1.0 / ratio
    else:
        p_a, p_b = 1.0, 1.0
    return make_params(
        F=c["F"], Delta=0.0, J=0.0, kappa_a=c["kappa_a"], kappa_b=c["kappa_b"],
        Gamma=c["Gamma"], p_a=p_a, p_b=p_b,
    )


def _figure_trajectories(fig_id: str):
    """Curve set (column label, params) and reporting scale for one figure."""
    c = _FIG_COMMON
    scale = c["J_mag"]  # abscissa is J t with J from the conventional scenario
    if fig_id == "fig2":
        conv, _ = _conventional_optimal_params()
        added, _ = _shared_added_optimal_params()
        flat = make_params(F=c["F"], Delta=0.0, J=c["J_mag"], kappa_a=c["kappa_a"], kappa_b=c["kappa_b"])
        return scale, "E_B", [
            ("E_B_conventional_optimal", conv),
            ("E_B_shared_added_optimal", added),
            ("E_B_conventional_zero_detuning", flat),
        ]
    if fig_id in ("fig3a", "fig3b"):
        conv, _ = _conventional_optimal_params()
        repl = _shared_replaced_params(super_optimal=False)
        col = "E_A" if fig_id == "fig3a" else "E_B"
        return scale, col, [
            (f"{col}_conventional_optimal", conv),
            (f"{col}_shared_replaced", repl),
        ]
    if fig_id in ("fig4a", "fig4b"):
        conv, _ = _conventional_optimal_params()
        sup = _shared_replaced_params(super_optimal=True)
        col = "E_A" if fig_id == "fig4a" else "E_B"
        return scale, col, [
            (f"{col}_conventional_optimal", conv),
            (f"{col}_super_optimal", sup),
        ]
    raise ConfigError("figure", f"unknown trajectory figure '{fig_id}'")


_PLOT_TEMPLATE = """\
# companion plot script for {csv_name}; run with:  python {script_name}
import csv
from pathlib import Path

import matplotlib.pyplot as plt

rows = list(csv.DictReader(Path(__file__).with_name("{csv_name}").open()))
x = [float(r["{x_col}"]) for r in rows]
fig, ax = plt.subplots()
for column in {y_cols}:
    ax.plot(x, [float(r[column]) for r in rows], label=column)
ax.set_xlabel("{x_label}")
ax.set_ylabel("{y_label}")
ax.legend()
fig.savefig(Path(__file__).with_name("{fig_id}.png"), dpi=200)
print("wrote {fig_id}.png")
"""


def reproduce_figure(fig_id: str, out_dir: str | Path, horizon: float = 300.0, samples: int = 600):
    """Write the data behind one result figure as CSV plus a plot script."""
    if fig_id not in FIGURE_IDS:
        raise ConfigError("figure", f"id must be one of {FIGURE_IDS}, got {fig_id!r}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / f"{fig_id}_data.csv"
    meta: dict = {"figure": fig_id, **_FIG_COMMON}
    c = _FIG_COMMON

    if fig_id in ("fig2", "fig3a", "fig3b", "fig4a", "fig4b"):
        scale, quantity, curves = _figure_trajectories(fig_id)
        t_end = horizon / scale
        columns = ["scaled_t"]
        series = []
        for label, params in curves:
            traj = moments.integrate(params, t_end=t_end, samples=samples)
            idx = 0 if quantity == "E_A" else 1
            series.append(traj.energies[:, idx])
            columns.append(label)
            meta[label] = {
                "Delta": params.drive.detuning_Delta,
                "J_mag": params.coupling.magnitude_J,
                "Gamma": params.shared.gamma,
                "p_a_re": params.shared.p_a.real,
                "p_b_re": params.shared.p_b.real,
            }
        times = np.linspace(0.0, t_end, samples + 1) * scale
        rows = zip(times, *series)
        x_col, x_label, y_label = "scaled_t", "J t", quantity
    elif fig_id == "fig6":
        kappa_bs = [0.0005 * k for k in range(1, 101)]
        rows = [
            (
                kb,
                optimize.delta_E_coh(c["F"], c["J_mag"], c["kappa_a"], kb),
                optimize.delta_E_diss(c["F"], c["Gamma"], c["kappa_a"], kb),
            )
            for kb in kappa_bs
        ]
        columns = ["kappa_b", "delta_E_coh", "delta_E_diss"]
        meta["kappa"] = c["kappa_a"]
        x_col, x_label, y_label = "kappa_b", "kappa_b", "stationary energy gain"
    elif fig_id == "figB":
        gammas = [0.01 * k for k in range(1, 101)]
        rows = []
        for g in gammas:
            flat = make_params(F=c["F"], J=0.0, kappa_a=c["kappa_a"], kappa_b=c["kappa_b"], Gamma=g)
            _, _, xi_opt = optimize.super_optimal_energies(c["F"], g, c["kappa_a"], c["kappa_b"])
            rows.append((g, steady.total_energy(flat), xi_opt))
        columns = ["Gamma", "xi_shared", "xi_super_optimal"]
        x_col, x_label, y_label = "Gamma", "Gamma", "stationary total energy"
    else:  # pragma: no cover
        raise AssertionError(fig_id)

    _write_csv(csv_path, tuple(columns), rows)
    meta_path = out / f"{fig_id}_meta.json"
    meta_path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    script_path = out / f"{fig_id}_plot.py"
    script_path.write_text(
        _PLOT_TEMPLATE.format(
            csv_name=csv_path.name,
            script_name=script_path.name,
            x_col=x_col,
            y_cols=[col for col in columns if col != x_col],
            x_label=x_label,
            y_label=y_label,
            fig_id=fig_id,
        )
    )
    return csv_path, meta_path, script_path


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class VerifyReport:
    level: str
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __str__(self) -> str:
        lines = [f"verification level: {self.level}"]
        for c in self.checks:
            lines.append(f"  [{'PASS' if c.passed else 'FAIL'}] {c.name}: {c.detail}")
        lines.append("overall: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines)


def _rel_err(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def _check_detuning_conventional() -> Check:
    c = _FIG_COMMON
    closed = optimize.optimal_detuning_conventional(c["J_mag"], c["kappa_a"], c["kappa_b"], F=c["F"])
    base = make_params(F=c["F"], J=c["J_mag"], kappa_a=c["kappa_a"], kappa_b=c["kappa_b"])
    numeric = optimize.optimal_detuning_numeric(base, span=(-0.4, 0.4))
    gap = min(abs(numeric.delta_opt - b) for b in closed.both_branches)
    ok = gap < 1e-8 and _rel_err(closed.achieved_E_B, numeric.achieved_E_B) < 1e-10
    return Check("detuning-closed-vs-numeric", ok, f"|Delta gap| = {gap:.2e}")


def _check_detuning_shared() -> Check:
    c = _FIG_COMMON
    base = make_params(F=c["F"], J=c["J_mag"], kappa_a=c["kappa_a"], kappa_b=c["kappa_b"], Gamma=c["Gamma"])
    result = optimize.optimal_detuning_shared(base)
    return Check(
        "shared-detuning-certified",
        result.closed_form_ok and result.method == "closed-form-shared",
        f"Delta_opt = {result.delta_opt:.9f}, method = {result.method}",
    )


def _check_ratio(seeded: np.random.Generator | None = None, rounds: int = 1) -> Check:
    c = _FIG_COMMON
    worst = 0.0
    rng = seeded
    for i in range(rounds):
        if rng is None or i == 0:
            ka, kb, gam = c["kappa_a"], c["kappa_b"], c["Gamma"]
        else:
            ka = float(rng.uniform(0.01, 0.3))
            kb = float(rng.uniform(0.005, ka))
            gam = float(rng.uniform(0.1, 0.8))
        got = optimize.ratio_argmax_numeric(ka, kb, gam, objective="battery")
        worst = max(worst, _rel_err(got, math.sqrt(ka / kb)))
    ok = worst < 1e-6
    return Check("ratio-battery-argmax", ok, f"worst relative error {worst:.2e} over {rounds} set(s)")


def _check_gap_identity(seeded: np.random.Generator | None = None, rounds: int = 1) -> Check:
    c = _FIG_COMMON
    worst = 0.0
    rng = seeded
    for i in range(rounds):
        if rng is None or i == 0:
            f, gam, ka, kb = c["F"], c["Gamma"], c["kappa_a"], c["kappa_b"]
        else:
            ka = float(rng.uniform(0.01, 0.2))
            kb = float(rng.uniform(0.005, ka))
            gam = float(rng.uniform(3.0 * max(ka, kb), 1.0))
            f = float(rng.uniform(0.02, 0.3))
        gap = optimize.redistribution_gap(f, gam, ka, kb)
        _, e_b_sup, _ = optimize.super_optimal_energies(f, gam, ka, kb)
        conv = optimize.optimal_detuning_conventional(gam / 2.0, ka, kb, F=f)
        worst = max(worst, _rel_err(gap, e_b_sup - conv.achieved_E_B))
    ok = worst < 1e-9
    return Check("redistribution-identity", ok, f"worst relative error {worst:.2e} over {rounds} set(s)")


def _check_analytic_vs_solve(seeded: np.random.Generator | None = None, rounds: int = 0) -> Check:
    cases = [
        _conventional_optimal_params()[0],
        _shared_added_optimal_params()[0],
        _shared_replaced_params(super_optimal=True),
    ]
    rng = seeded
    if rng is not None:
        for _ in range(rounds):
            cases.append(
                make_params(
                    F=float(rng.uniform(0.01, 0.5)),
                    Delta=float(rng.uniform(-0.8, 0.8)),
                    J=float(rng.uniform(0.0, 0.5)),
                    phi=float(rng.uniform(0.0, 2.0 * math.pi)),
                    kappa_a=float(rng.uniform(0.01, 0.5)),
                    kappa_b=float(rng.uniform(0.01, 0.5)),
                    Gamma=float(rng.uniform(0.0, 0.5)),
                    p_a=complex(rng.normal(), rng.normal()),
                    p_b=complex(rng.normal(), rng.normal()),
                )
            )
    worst = 0.0
    for p in cases:
        report = steady.steady_state_report(p, method="linear-solve")
        worst = max(
            worst,
            _rel_err(steady.charger_energy(p), report.E_A),
            _rel_err(steady.battery_energy(p), report.E_B),
        )
    ok = worst < 1e-9
    return Check("analytic-vs-linear-solve", ok, f"worst relative error {worst:.2e} over {len(cases)} set(s)")


_ORACLE_SET = dict(F=0.02, Delta=0.0, J=0.1, kappa_a=0.4, kappa_b=0.2, Gamma=0.2, p_a=1.0, p_b=1.0)


def _check_oracle(t_end: float = 30.0, records: int = 25, n_max: int = 6) -> Check:
    p = make_params(**_ORACLE_SET)
    evo = fock.evolve(p, fock.vacuum_density_matrix(n_max), t_end=t_end, n_records=records)
    traj = moments.integrate(
        p, t_end=t_end, samples=records, control=StepControl(rate_dt=0.002)
    )
    worst = 0.0
    for oracle_m, state in zip(evo.moments, traj.states):
        worst = max(
            worst,
            abs(oracle_m.mean_a - state.mean_a),
            abs(oracle_m.mean_b - state.mean_b),
            abs(oracle_m.n_a - state.n_a),
            abs(oracle_m.n_b - state.n_b),
            abs(oracle_m.cross_ab - state.cross_ab),
        )
    min_purity = float(np.min(evo.purities))
    ok = worst < 1e-6 and min_purity > 1.0 - 1e-6
    return Check(
        "oracle-equivalence",
        ok,
        f"max moment deviation {worst:.2e}, min purity {min_purity:.9f}",
    )


def _check_oracle_truncation(t_end: float = 20.0, records: int = 10) -> Check:
    p = make_params(**_ORACLE_SET)
    evo6 = fock.evolve(p, fock.vacuum_density_matrix(6), t_end=t_end, n_records=records)
    evo8 = fock.evolve(p, fock.vacuum_density_matrix(8), t_end=t_end, n_records=records)
    worst = 0.0
    for m6, m8 in zip(evo6.moments, evo8.moments):
        worst = max(
            worst,
            abs(m6.mean_a - m8.mean_a), abs(m6.mean_b - m8.mean_b),
            abs(m6.n_a - m8.n_a), abs(m6.n_b - m8.n_b), abs(m6.cross_ab - m8.cross_ab),
        )
    ok = worst < 1e-9
    return Check("oracle-truncation-convergence", ok, f"max N=6 vs N=8 deviation {worst:.2e}")


def verify(level: str = "fast") -> VerifyReport:
    """Run the oracle-equivalence and closed-form/numeric cross-check suite."""
    if level not in ("fast", "full"):
        raise ConfigError("level", f"must be 'fast' or 'full', got {level!r}")
    checks = [
        _check_detuning_conventional(),
        _check_detuning_shared(),
        _check_ratio(),
        _check_gap_identity(),
        _check_analytic_vs_solve(),
        _check_oracle(),
    ]
    if level == "full":
        rng = np.random.default_rng(20240901)
        checks.extend(
            [
                _check_analytic_vs_solve(rng, rounds=100),
                _check_ratio(rng, rounds=20),
                _check_gap_identity(rng, rounds=50),
                _check_oracle_truncation(),
            ]
        )
    return VerifyReport(level=level, checks=checks)
