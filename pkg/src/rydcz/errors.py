"""Error-budget engine for the ancillary and probe drives.

Covers: amplitude/detuning deviation sweeps of the ancillary laser,
first-order dephasing errors from interaction-picture jump operators,
leakage into the non-computational hyperfine state, and a combined
budget report.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, asdict

import numpy as np

from . import metrics, model
from .dynamics import _rk4_schrodinger, default_steps, STATE_DT_RAD
from .pulses import scale_amplitude

KAPPA = 4  # computational-subspace dimension for two qubits

JUMP_KINDS = ("ancilla", "probe")


@dataclass
class ErrorReport:
    """Full error budget of one gate configuration."""

    scenario: str
    epsilon_curve: list = field(default_factory=list)   # (epsilon, infidelity)
    eta_curve: list = field(default_factory=list)       # (eta, infidelity)
    e_d: float = 0.0          # ancillary dephasing error
    e_d_prime: float = 0.0    # probe dephasing error
    e_k: float = 0.0          # leakage error
    combined: dict = field(default_factory=dict)

    def to_dict(self):
        return asdict(self)


def jump_operator(kind, scheme):
    """Single-atom dephasing jump operator for one scattering channel.

    ``ancilla``: |a><a| - |e><e| (relative phase noise of the ancillary
    laser); ``probe``: |1><1| - |e><e| (probe laser).
    """
    if kind == "ancilla":
        return model.projector("a", scheme) - model.projector("e", scheme)
    if kind == "probe":
        return model.projector("1", scheme) - model.projector("e", scheme)
    raise ValueError(f"unknown jump kind {kind!r}; expected one of {JUMP_KINDS}")


def leakage_operator(scheme):
    """Single-atom leakage jump |k><e| (requires the leakage level)."""
    if "k" not in scheme.labels:
        raise ValueError("leakage operator needs a scheme with the |k> level")
    op = np.zeros((scheme.dim, scheme.dim))
    op[scheme.index("k"), scheme.index("e")] = 1.0
    return op


def computational_columns(params, pulse1, pulsec=None, scheme=None, samples=2001,
                          steps=None):
    """Sampled propagator columns U(t)|q> for the four computational inputs.

    Returns (times, columns) with columns of shape (samples, dim^2, 4); this
    is the only part of the full propagator the error integrals consume.
    """
    scheme = scheme or params.scheme()
    t_end = pulse1.duration_t
    h2 = metrics.build_hamiltonian(params, pulse1, pulsec, scheme, two_atom=True)
    if steps is None:
        steps = default_steps(h2, t_end, dt_rad=STATE_DT_RAD)
    steps = max(steps, samples - 1)

    indices = model.computational_indices(scheme)
    y0 = np.zeros((scheme.dim**2, len(indices)), dtype=complex)
    for col, idx in enumerate(indices):
        y0[idx, col] = 1.0

    sample_idx = np.unique(np.round(np.linspace(0, steps, samples)).astype(int))
    sample_set = {int(i): j for j, i in enumerate(sample_idx)}
    stored = np.empty((len(sample_idx), *y0.shape), dtype=complex)

    def observer(k, y):
        j = sample_set.get(k)
        if j is not None:
            stored[j] = y

    final = _rk4_schrodinger(h2, y0, t_end, steps, observer)
    drift = float(np.abs(np.linalg.norm(final, axis=0) - 1.0).max())
    if drift > 1e-6:
        from . import IntegrationError

        raise IntegrationError(
            f"propagator column norm drifted by {drift:.2e}; increase steps"
        )
    times = np.linspace(0.0, t_end, steps + 1)[sample_idx]
    return times, stored


def delta_error(columns, jump, normalization="variance"):
    """Instantaneous error density delta_E(t, L) from sampled columns.

    ``columns`` has shape (samples, dim^2, 4) holding U(t)|q>; ``jump`` is
    the embedded two-atom jump operator L.  ``variance`` uses the three-term
    form with 1/(kappa(kappa+1)) cross terms; ``as-printed`` uses the
    two-term form with both terms weighted 1/kappa (leakage convention).
    """
    lc = np.einsum("ij,sjq->siq", jump, columns)
    term1 = np.einsum("siq,siq->s", lc.conj(), lc).real / KAPPA
    m = np.einsum("sip,siq->spq", columns.conj(), lc)
    term2 = np.einsum("spq,spq->s", m.conj(), m).real
    if normalization == "variance":
        tr = np.einsum("sqq->s", m)
        return term1 - (term2 + np.abs(tr) ** 2) / (KAPPA * (KAPPA + 1))
    if normalization == "as-printed":
        return term1 - term2 / KAPPA
    raise ValueError(
        f"unknown normalization {normalization!r}; expected 'variance' or 'as-printed'"
    )


def dephasing_integral(params, pulse1, pulsec=None, kind="ancilla", samples=2001,
                       steps=None, normalization="variance"):
    """Integral of delta_E(t, L) over the gate, summed over the two atoms."""
    scheme = params.scheme()
    times, columns = computational_columns(params, pulse1, pulsec, scheme,
                                           samples=samples, steps=steps)
    single = jump_operator(kind, scheme)
    total = 0.0
    for atom in (0, 1):
        embedded = model.embed_single(single, scheme, atom)
        total += float(np.trapezoid(delta_error(columns, embedded, normalization), times))
    return total


def dephasing_error(scenario, kind="ancilla", gamma=0.1, samples=2001, steps=None):
    """First-order dephasing error gamma * integral(delta_E) for one channel.

    ``gamma`` is the plain (no 2*pi) phase-noise scattering rate in 1/us;
    100 kHz corresponds to gamma = 0.1.
    """
    if gamma < 0:
        raise ValueError("gamma must be non-negative")
    t_end = scenario.pulse1.duration_t
    if gamma * t_end > 0.1:
        warnings.warn(
            f"gamma*T = {gamma * t_end:.3f} > 0.1: first-order dephasing "
            "estimate leaves its validity range",
            stacklevel=2,
        )
    integral = dephasing_integral(scenario.params, scenario.pulse1, scenario.pulsec,
                                  kind=kind, samples=samples, steps=steps)
    return gamma * integral


def leakage_error(scenario, samples=2001, steps=None, normalization="as-printed"):
    """First-order leakage error gamma_k * integral(delta_E(t, |k><e|)).

    Runs in the complete (leakage-extended) per-atom space; the rate is
    gamma_k = b * gamma_e with the branching ratio from the parameters.
    """
    params = scenario.params.with_(include_leakage=True)
    scheme = params.scheme()
    times, columns = computational_columns(params, scenario.pulse1, scenario.pulsec,
                                           scheme, samples=samples, steps=steps)
    single = leakage_operator(scheme)
    total = 0.0
    for atom in (0, 1):
        embedded = model.embed_single(single, scheme, atom)
        total += float(np.trapezoid(delta_error(columns, embedded, normalization), times))
    return params.branching_b * params.gamma_e * total


def _deviated(scenario, epsilon=0.0, eta=0.0):
    """Scenario parameters/pulses with ancillary deviations applied."""
    if scenario.pulsec is None:
        raise ValueError(
            f"scenario {scenario.name!r} has no ancillary drive; "
            "deviation sweeps need an ASA case"
        )
    params = scenario.params
    if eta:
        params = params.with_(alpha=params.alpha * (1.0 + eta))
    pulsec = scale_amplitude(scenario.pulsec, 1.0 + epsilon) if epsilon else scenario.pulsec
    return params, scenario.pulse1, pulsec


def amplitude_sweep(scenario, epsilon_values, steps=None):
    """Ideal-gate infidelity 1 - F for Omega_c(t) -> (1+epsilon)*Omega_c(t)."""
    curve = []
    for eps in epsilon_values:
        params, pulse1, pulsec = _deviated(scenario, epsilon=float(eps))
        result, _ = metrics.evaluate_gate(params, pulse1, pulsec, steps=steps)
        curve.append((float(eps), 1.0 - result.fidelity_ideal))
    return curve


def detuning_sweep(scenario, eta_values, steps=None):
    """Ideal-gate infidelity 1 - F for Delta_c -> (1+eta)*Delta_c."""
    curve = []
    for eta in eta_values:
        params, pulse1, pulsec = _deviated(scenario, eta=float(eta))
        result, _ = metrics.evaluate_gate(params, pulse1, pulsec, steps=steps)
        curve.append((float(eta), 1.0 - result.fidelity_ideal))
    return curve


def combined_budget(scenario, epsilon=0.0, eta=0.0, gamma_d=0.0, gamma_d_prime=0.0,
                    with_leakage=False, steps=None, samples=2001):
    """Total ancillary-attributed error and the resulting fidelity bound.

    The deviation part is the excess ideal infidelity of the gate evaluated
    with epsilon and eta applied simultaneously; dephasing and leakage
    errors add on top.  The reported fidelity is the unperturbed realistic
    fidelity minus the total ancillary error.
    """
    baseline, _ = metrics.evaluate_gate(scenario.params, scenario.pulse1,
                                        scenario.pulsec, steps=steps)
    if epsilon or eta:
        params, pulse1, pulsec = _deviated(scenario, epsilon=epsilon, eta=eta)
        deviated, _ = metrics.evaluate_gate(params, pulse1, pulsec, steps=steps)
        deviation_error = max(0.0, baseline.fidelity_ideal - deviated.fidelity_ideal)
    else:
        deviation_error = 0.0
    e_d = dephasing_error(scenario, "ancilla", gamma_d, samples=samples) if gamma_d else 0.0
    e_d_prime = (dephasing_error(scenario, "probe", gamma_d_prime, samples=samples)
                 if gamma_d_prime else 0.0)
    e_k = leakage_error(scenario, samples=samples) if with_leakage else 0.0
    total = deviation_error + e_d + e_d_prime + e_k
    return {
        "scenario": scenario.name,
        "epsilon": epsilon,
        "eta": eta,
        "gamma_d": gamma_d,
        "gamma_d_prime": gamma_d_prime,
        "deviation_error": deviation_error,
        "e_d": e_d,
        "e_d_prime": e_d_prime,
        "e_k": e_k,
        "total_ancillary_error": total,
        "fidelity_baseline": baseline.fidelity_realistic,
        "fidelity_bound": baseline.fidelity_realistic - total,
    }


def error_report(scenario, epsilon_values=(-0.02, -0.01, 0.0, 0.01, 0.02),
                 eta_values=(-0.02, -0.01, 0.0, 0.01, 0.02),
                 gamma_d=0.1, gamma_d_prime=0.1, with_leakage=True,
                 combined_epsilon=0.02, combined_eta=0.02, combined_gamma_d=0.05,
                 steps=None, samples=2001):
    """Assemble the full ErrorReport for one ASA scenario."""
    report = ErrorReport(scenario=scenario.name)
    report.epsilon_curve = amplitude_sweep(scenario, epsilon_values, steps=steps)
    report.eta_curve = detuning_sweep(scenario, eta_values, steps=steps)
    report.e_d = dephasing_error(scenario, "ancilla", gamma_d, samples=samples)
    report.e_d_prime = dephasing_error(scenario, "probe", gamma_d_prime, samples=samples)
    if with_leakage:
        report.e_k = leakage_error(scenario, samples=samples)
    report.combined = combined_budget(
        scenario, epsilon=combined_epsilon, eta=combined_eta,
        gamma_d=combined_gamma_d, with_leakage=with_leakage,
        steps=steps, samples=samples)
    return report
