"""Time-evolution engines: Schrodinger states, time-ordered propagators, Lindblad.

All integrators use fixed-step RK4 on a uniform grid.  The default step count
is chosen from the spectral-norm bound of the Hamiltonian so that
``dt * ||H|| <= dt_rad`` (0.05 rad for states, tighter for propagators); this
keeps the norm/unitarity drift within the contracts below even for the
fast-rotating intermediate-state components.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import IntegrationError

NORM_TOL = 1e-6        # norm/trace drift beyond this raises IntegrationError
STATE_DT_RAD = 0.04    # default dt * ||H|| for state evolution
PROP_DT_RAD = 0.02     # tighter default for propagators (unitarity 1e-8)


@dataclass(frozen=True)
class DriveTerm:
    """One time-dependent Hamiltonian term: envelope(t) * operator."""

    envelope: object  # callable t -> rad/us, vectorized over ndarray t
    operator: np.ndarray


@dataclass(frozen=True)
class TimeDependentHamiltonian:
    """H(t) = static + sum_j envelope_j(t) * operator_j."""

    static: np.ndarray
    drives: tuple = ()

    def __call__(self, t):
        h = self.static.astype(complex).copy()
        for term in self.drives:
            h += term.envelope(t) * term.operator
        return h

    def norm_bound(self, t_end, samples=513):
        """Upper bound on max_t ||H(t)||_2 over [0, t_end]."""
        bound = np.linalg.norm(self.static, 2)
        t = np.linspace(0.0, t_end, samples)
        for term in self.drives:
            env = np.max(np.abs(np.asarray(term.envelope(t), dtype=float)))
            bound += env * np.linalg.norm(term.operator, 2)
        return float(bound)


def as_hamiltonian(h):
    if isinstance(h, TimeDependentHamiltonian):
        return h
    if isinstance(h, np.ndarray):
        return TimeDependentHamiltonian(static=h)
    return h  # generic callable t -> matrix


def default_steps(hamiltonian, t_end, dt_rad=STATE_DT_RAD, min_steps=1000):
    """Step count honoring the dt * ||H|| contract."""
    h = as_hamiltonian(hamiltonian)
    if isinstance(h, TimeDependentHamiltonian):
        bound = h.norm_bound(t_end)
    else:
        t = np.linspace(0.0, t_end, 33)
        bound = 1.5 * max(np.linalg.norm(h(tk), 2) for tk in t)
    return max(min_steps, int(np.ceil(t_end * bound / dt_rad)))


@dataclass
class Trajectory:
    """Uniform-grid record of one or more evolved input states.

    ``populations`` live on the full integration grid ``times``; state
    vectors are stored on the coarser ``state_times`` subgrid to bound
    memory for long runs.
    """

    times: np.ndarray
    populations: dict
    state_times: np.ndarray
    states: dict
    input_labels: tuple
    norm_drift: float = 0.0

    def final_state(self, label=None):
        label = label or self.input_labels[0]
        return self.states[label][-1]

    def population_columns(self):
        cols = {"t_us": self.times}
        for label, values in self.populations.items():
            cols[f"n_{label}"] = values
        return cols


@dataclass
class PropagatorSample:
    """Sampled time-ordered propagator with U(0) = I."""

    times: np.ndarray
    unitaries: np.ndarray
    unitarity_defect: float = 0.0


def _half_grid_envelopes(hamiltonian, t_end, steps):
    """Sample drive envelopes on the 2*steps+1 RK4 half-grid."""
    t_half = np.linspace(0.0, t_end, 2 * steps + 1)
    envs = [np.asarray(term.envelope(t_half), dtype=float) for term in hamiltonian.drives]
    ops = [np.ascontiguousarray(term.operator.astype(complex)) for term in hamiltonian.drives]
    return envs, ops


def _store_indices(steps, store_points):
    if store_points >= steps + 1:
        return np.arange(steps + 1)
    return np.unique(np.round(np.linspace(0, steps, store_points)).astype(int))


def _rk4_schrodinger(hamiltonian, y0, t_end, steps, observer):
    """Shared RK4 core for dy/dt = -i H(t) y; y may be a vector or a matrix."""
    h = as_hamiltonian(hamiltonian)
    dt = t_end / steps
    y = np.array(y0, dtype=complex)
    observer(0, y)
    if isinstance(h, TimeDependentHamiltonian):
        envs, ops = _half_grid_envelopes(h, t_end, steps)
        h0 = h.static.astype(complex)

        def hmat(i):
            m = h0
            for env, op in zip(envs, ops):
                m = m + env[i] * op
            return m

    else:
        t_half = np.linspace(0.0, t_end, 2 * steps + 1)

        def hmat(i):
            return np.asarray(h(t_half[i]), dtype=complex)

    for k in range(steps):
        ha = hmat(2 * k)
        hm = hmat(2 * k + 1)
        hb = hmat(2 * k + 2)
        k1 = -1j * (ha @ y)
        k2 = -1j * (hm @ (y + (0.5 * dt) * k1))
        k3 = -1j * (hm @ (y + (0.5 * dt) * k2))
        k4 = -1j * (hb @ (y + dt * k3))
        y = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        observer(k + 1, y)
    return y


def evolve_state(hamiltonian, psi0, t_end, steps=None, pop_weights=None,
                 store_points=1001, label="psi", norm_tol=NORM_TOL):
    """Propagate one state under the Schrodinger equation.

    ``pop_weights`` maps a level label to a diagonal weight vector; the
    corresponding occupancies are recorded at every grid point.  Raises
    :class:`IntegrationError` if the state norm drifts beyond 1e-6.
    """
    psi0 = np.asarray(psi0, dtype=complex)
    if not np.all(np.isfinite(psi0)):
        raise ValueError("psi0 must be finite")
    if abs(np.linalg.norm(psi0) - 1.0) > 1e-9:
        raise ValueError("psi0 must be normalized")
    if steps is None:
        steps = default_steps(hamiltonian, t_end)
    if steps < 1:
        raise ValueError("steps must be >= 1")

    pop_weights = pop_weights or {}
    pops = {lbl: np.empty(steps + 1) for lbl in pop_weights}
    stored_idx = _store_indices(steps, store_points)
    stored_set = {int(i): j for j, i in enumerate(stored_idx)}
    stored = np.empty((len(stored_idx), psi0.size), dtype=complex)

    def observer(k, y):
        if pop_weights:
            prob = np.abs(y) ** 2
            for lbl, w in pop_weights.items():
                pops[lbl][k] = float(w @ prob)
        j = stored_set.get(k)
        if j is not None:
            stored[j] = y

    y = _rk4_schrodinger(hamiltonian, psi0, t_end, steps, observer)
    drift = abs(np.linalg.norm(y) - 1.0)
    if drift > norm_tol:
        raise IntegrationError(
            f"state norm drifted by {drift:.2e} (> {norm_tol}); increase steps"
        )
    times = np.linspace(0.0, t_end, steps + 1)
    return Trajectory(
        times=times,
        populations=pops,
        state_times=times[stored_idx],
        states={label: stored},
        input_labels=(label,),
        norm_drift=drift,
    )


def evolve_propagator(hamiltonian, t_end, steps=None, store_points=2001):
    """Integrate i dU/dt = H(t) U with U(0) = I; checks unitarity at samples."""
    if steps is None:
        steps = default_steps(hamiltonian, t_end, dt_rad=PROP_DT_RAD)
    if steps < 1:
        raise ValueError("steps must be >= 1")
    h = as_hamiltonian(hamiltonian)
    dim = h.static.shape[0] if isinstance(h, TimeDependentHamiltonian) else h(0.0).shape[0]
    eye = np.eye(dim, dtype=complex)

    stored_idx = _store_indices(steps, store_points)
    stored_set = {int(i): j for j, i in enumerate(stored_idx)}
    stored = np.empty((len(stored_idx), dim, dim), dtype=complex)

    def observer(k, u):
        j = stored_set.get(k)
        if j is not None:
            stored[j] = u

    _rk4_schrodinger(hamiltonian, eye, t_end, steps, observer)
    defect = 0.0
    for j in (0, len(stored_idx) // 2, len(stored_idx) - 1):
        u = stored[j]
        defect = max(defect, float(np.abs(u.conj().T @ u - eye).max()))
    if defect > NORM_TOL:
        raise IntegrationError(
            f"propagator unitarity drifted by {defect:.2e} (> {NORM_TOL}); increase steps"
        )
    times = np.linspace(0.0, t_end, steps + 1)
    return PropagatorSample(times=times[stored_idx], unitaries=stored, unitarity_defect=defect)


@dataclass
class DensityTrajectory:
    times: np.ndarray
    rhos: np.ndarray
    trace_drift: float = 0.0

    def final(self):
        return self.rhos[-1]


def evolve_lindblad(hamiltonian, jumps, rho0, t_end, steps=None, store_points=201):
    """RK4 integration of the Lindblad master equation.

    ``jumps`` is a list of (rate, operator) pairs.  The trace is preserved to
    integrator accuracy when every jump target lives inside the simulated
    space (amplitude decay relocates population to its dump level rather
    than losing it).
    """
    rho0 = np.asarray(rho0, dtype=complex)
    if np.abs(rho0 - rho0.conj().T).max() > 1e-9:
        raise ValueError("rho0 must be Hermitian")
    if abs(np.trace(rho0).real - 1.0) > 1e-9:
        raise ValueError("rho0 must have unit trace")
    if steps is None:
        steps = default_steps(hamiltonian, t_end)
    h = as_hamiltonian(hamiltonian)

    ls = [(np.sqrt(rate) * np.asarray(op, dtype=complex)) for rate, op in jumps if rate > 0]
    ldl_half = sum((l.conj().T @ l for l in ls), np.zeros_like(rho0)) * 0.5

    if isinstance(h, TimeDependentHamiltonian):
        envs, ops = _half_grid_envelopes(h, t_end, steps)
        h0 = h.static.astype(complex)

        def hmat(i):
            m = h0
            for env, op in zip(envs, ops):
                m = m + env[i] * op
            return m

    else:
        t_half = np.linspace(0.0, t_end, 2 * steps + 1)

        def hmat(i):
            return np.asarray(h(t_half[i]), dtype=complex)

    def rhs(rho, hm):
        out = -1j * (hm @ rho - rho @ hm)
        out -= ldl_half @ rho + rho @ ldl_half
        for l in ls:
            out += l @ rho @ l.conj().T
        return out

    dt = t_end / steps
    rho = rho0.copy()
    stored_idx = _store_indices(steps, store_points)
    stored_set = {int(i): j for j, i in enumerate(stored_idx)}
    stored = np.empty((len(stored_idx), *rho0.shape), dtype=complex)
    if 0 in stored_set:
        stored[stored_set[0]] = rho
    for k in range(steps):
        ha = hmat(2 * k)
        hm = hmat(2 * k + 1)
        hb = hmat(2 * k + 2)
        k1 = rhs(rho, ha)
        k2 = rhs(rho + (0.5 * dt) * k1, hm)
        k3 = rhs(rho + (0.5 * dt) * k2, hm)
        k4 = rhs(rho + dt * k3, hb)
        rho = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        j = stored_set.get(k + 1)
        if j is not None:
            stored[j] = rho
    drift = abs(np.trace(rho).real - 1.0)
    if drift > NORM_TOL:
        raise IntegrationError(
            f"density trace drifted by {drift:.2e} (> {NORM_TOL}); increase steps"
        )
    times = np.linspace(0.0, t_end, steps + 1)
    return DensityTrajectory(times=times[stored_idx], rhos=stored, trace_drift=drift)


def time_in_state(traj, level):
    """Trapezoidal integral of the recorded occupancy of ``level`` (us)."""
    if level not in traj.populations:
        raise KeyError(f"no population record for level {level!r}")
    return float(np.trapezoid(traj.populations[level], traj.times))
