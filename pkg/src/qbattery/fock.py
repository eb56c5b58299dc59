"""Brute-force verification oracle: the full master equation in a truncated
two-mode Fock basis.

The density operator lives on |n_a> (x) |n_b> with n_a, n_b <= N
(dimension (N+1)^2, row-major product ordering) and evolves under

    drho/dt = -i [H, rho] + Gamma D_z[rho] + kappa_a D_a[rho] + kappa_b D_b[rho],
    H = Delta (a^dag a + b^dag b) + J a^dag b + J^* a b^dag + F (a + a^dag),
    z = p_a a + p_b b,       D_O[r] = O r O^dag - {O^dag O, r} / 2,

in the same rotating frame as the moment equations, so the extracted
moments are directly comparable.  The model is linear, so agreement in the
small-amplitude regime (where the truncation is exact to machine noise)
certifies the moment equations at every amplitude; figure-scale photon
numbers would need infeasibly large truncations and add nothing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import sparse

from .errors import NonFinite, TruncationOverflow
from .moments import MomentState
from .params import SystemParams

_TAIL_TRUSTED = 1e-8
_TAIL_ERROR = 1e-6


@lru_cache(maxsize=8)
def _ops(n_max: int):
    """Dense ladder operators on the truncated product basis."""
    dim = n_max + 1
    lower = np.diag(np.sqrt(np.arange(1.0, dim)), 1)
    eye = np.eye(dim)
    a = np.kron(lower, eye).astype(complex)
    b = np.kron(eye, lower).astype(complex)
    num_a = a.conj().T @ a
    num_b = b.conj().T @ b
    # boolean masks of basis states with n_a = N or n_b = N
    idx_a, idx_b = np.divmod(np.arange(dim * dim), dim)
    tail_mask = (idx_a == n_max) | (idx_b == n_max)
    return a, b, num_a, num_b, tail_mask


@dataclass(frozen=True)
class FockDensityMatrix:
    """Truncated two-mode density operator."""

    truncation_N: int
    matrix: np.ndarray

    def __post_init__(self):
        dim = (self.truncation_N + 1) ** 2
        if self.matrix.shape != (dim, dim):
            raise ValueError(f"matrix must be {dim}x{dim} for N = {self.truncation_N}")

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))

    def purity(self) -> float:
        """tr(rho^2)."""
        return float(np.einsum("ij,ji->", self.matrix, self.matrix).real)

    def tail_occupation(self) -> float:
        """Population with n_a = N or n_b = N (truncation adequacy gauge)."""
        _, _, _, _, tail = _ops(self.truncation_N)
        return float(np.sum(np.diag(self.matrix).real[tail]))


def vacuum_density_matrix(n_max: int) -> FockDensityMatrix:
    dim = (n_max + 1) ** 2
    rho = np.zeros((dim, dim), dtype=complex)
    rho[0, 0] = 1.0
    return FockDensityMatrix(truncation_N=n_max, matrix=rho)


def coherent_density_matrix(alpha: complex, beta: complex, n_max: int) -> FockDensityMatrix:
    """Truncated product coherent state |alpha> (x) |beta>, renormalized."""
    ns = np.arange(n_max + 1)
    log_fact = np.cumsum(np.concatenate(([0.0], np.log(np.arange(1.0, n_max + 1)))))

    def amplitudes(z: complex) -> np.ndarray:
        if z == 0:
            out = np.zeros(n_max + 1, dtype=complex)
            out[0] = 1.0
            return out
        return np.exp(-abs(z) ** 2 / 2.0 + ns * np.log(complex(z)) - log_fact / 2.0)

    vec = np.kron(amplitudes(alpha), amplitudes(beta))
    vec = vec / np.linalg.norm(vec)
    return FockDensityMatrix(truncation_N=n_max, matrix=np.outer(vec, vec.conj()))


def extract_moments(rho: FockDensityMatrix) -> MomentState:
    """<a>, <b>, <a^dag a>, <b^dag b>, <a^dag b> by ladder-operator traces."""
    a, b, num_a, num_b, _ = _ops(rho.truncation_N)
    r = rho.matrix
    tr = lambda op: complex(np.einsum("ij,ji->", r, op))
    return MomentState(
        mean_a=tr(a),
        mean_b=tr(b),
        n_a=tr(num_a).real,
        n_b=tr(num_b).real,
        cross_ab=tr(a.conj().T @ b),
    )


def _collapse_terms(params: SystemParams, n_max: int):
    a, b, _, _, _ = _ops(n_max)
    j = params.coupling.value
    h = (
        params.drive.detuning_Delta * (a.conj().T @ a + b.conj().T @ b)
        + j * (a.conj().T @ b)
        + j.conjugate() * (a @ b.conj().T)
        + params.drive.amplitude_F * (a + a.conj().T)
    )
    z = params.shared.p_a * a + params.shared.p_b * b
    jumps = []
    for rate, op in ((params.shared.gamma, z), (params.local.kappa_a, a), (params.local.kappa_b, b)):
        if rate > 0:
            jumps.append((rate, op, op.conj().T, op.conj().T @ op))
    return h, jumps


def _rhs_matrix(h, jumps, r):
    out = -1j * (h @ r - r @ h)
    for rate, op, op_dag, op2 in jumps:
        out += rate * (op @ r @ op_dag - 0.5 * (op2 @ r + r @ op2))
    return out


def _liouvillian(params: SystemParams, n_max: int) -> sparse.csr_matrix:
    """Sparse superoperator L with vec(drho/dt) = L vec(rho), row-major vec.

    Built from the same H and jump list as the dense form via
    vec(A rho B) = (A kron B^T) vec(rho); the two are equality-tested in
    the suite.
    """
    h, jumps = _collapse_terms(params, n_max)
    dim = h.shape[0]
    eye = sparse.identity(dim, dtype=complex, format="csr")
    h_sp = sparse.csr_matrix(h)
    liou = -1j * (sparse.kron(h_sp, eye) - sparse.kron(eye, h_sp.T))
    for rate, op, op_dag, op2 in jumps:
        op_sp = sparse.csr_matrix(op)
        op2_sp = sparse.csr_matrix(op2)
        liou = liou + rate * (
            sparse.kron(op_sp, op_sp.conj())
            - 0.5 * (sparse.kron(op2_sp, eye) + sparse.kron(eye, op2_sp.T))
        )
    return liou.tocsr()


def lindblad_rhs(params: SystemParams, rho: FockDensityMatrix) -> np.ndarray:
    """Master-equation derivative of rho (trace-free, Hermiticity preserving).

    Raises TruncationOverflow when the highest retained level already
    carries more than 1e-6 population.
    """
    if rho.tail_occupation() > _TAIL_ERROR:
        raise TruncationOverflow(
            f"tail occupation {rho.tail_occupation():.2e} exceeds {_TAIL_ERROR:g}"
        )
    h, jumps = _collapse_terms(params, rho.truncation_N)
    return _rhs_matrix(h, jumps, rho.matrix)


def _max_rate(params: SystemParams) -> float:
    return max(
        abs(params.drive.detuning_Delta),
        params.coupling.magnitude_J,
        params.shared.gamma,
        params.local.kappa_a,
        params.local.kappa_b,
        params.drive.amplitude_F,
        1e-6,
    )


@dataclass(frozen=True)
class FockEvolution:
    """Sampled oracle evolution: times, extracted moments, and diagnostics."""

    times: np.ndarray
    moments: list[MomentState]
    purities: np.ndarray
    tail_occupations: np.ndarray
    final: FockDensityMatrix

    @property
    def samples(self) -> list[tuple[float, MomentState]]:
        return list(zip(self.times.tolist(), self.moments))


def evolve(
    params: SystemParams,
    rho0: FockDensityMatrix,
    t_end: float,
    dt: float | None = None,
    n_records: int = 50,
) -> FockEvolution:
    """Fixed-step fourth-order integration of the master equation.

    The state is Hermitized, rho <- (rho + rho^dag)/2, after every step.
    dt defaults to 1e-3 divided by the fastest parameter rate.  Moments
    are extracted at n_records+1 evenly spaced times (including t = 0).
    """
    if t_end <= 0:
        raise ValueError("t_end must be positive")
    if dt is None:
        dt = 1e-3 / _max_rate(params)
    liou = _liouvillian(params, rho0.truncation_N)
    dim = rho0.matrix.shape[0]
    record_times = np.linspace(0.0, t_end, n_records + 1)
    interval = t_end / n_records
    steps = max(1, math.ceil(interval / dt))
    step = interval / steps

    r = rho0.matrix.copy()
    moments_out = [extract_moments(FockDensityMatrix(rho0.truncation_N, r))]
    purities = [float(np.einsum("ij,ji->", r, r).real)]
    tails = [FockDensityMatrix(rho0.truncation_N, r).tail_occupation()]
    for _ in range(n_records):
        v = r.reshape(-1)
        for _ in range(steps):
            k1 = liou @ v
            k2 = liou @ (v + 0.5 * step * k1)
            k3 = liou @ (v + 0.5 * step * k2)
            k4 = liou @ (v + step * k3)
            v = v + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            m = v.reshape(dim, dim)
            v = (0.5 * (m + m.conj().T)).reshape(-1)
        r = v.reshape(dim, dim).copy()
        snapshot = FockDensityMatrix(rho0.truncation_N, r)
        tail = snapshot.tail_occupation()
        if tail > _TAIL_ERROR:
            raise TruncationOverflow(f"tail occupation {tail:.2e} exceeds {_TAIL_ERROR:g}")
        if not np.all(np.isfinite(r)):
            raise NonFinite("density matrix evolution produced non-finite entries")
        moments_out.append(extract_moments(snapshot))
        purities.append(snapshot.purity())
        tails.append(tail)
    return FockEvolution(
        times=record_times,
        moments=moments_out,
        purities=np.array(purities),
        tail_occupations=np.array(tails),
        final=FockDensityMatrix(rho0.truncation_N, r),
    )


def is_stationary(evolution: FockEvolution, window: float = 1.0, rtol: float = 1e-9) -> bool:
    """Whether all moments changed by less than rtol (relative) over the last window."""
    times = evolution.times
    if times[-1] - times[0] < window:
        return False
    idx = int(np.searchsorted(times, times[-1] - window)) - 1
    idx = max(idx, 0)
    a, b = evolution.moments[idx], evolution.moments[-1]
    pairs = [
        (a.mean_a, b.mean_a), (a.mean_b, b.mean_b),
        (a.n_a, b.n_a), (a.n_b, b.n_b), (a.cross_ab, b.cross_ab),
    ]
    return all(abs(x - y) <= rtol * max(abs(x), abs(y), 1e-30) for x, y in pairs)
