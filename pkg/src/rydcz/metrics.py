"""Gate-level metrics: Bell fidelity, CZ phase condition, decay-penalized cost
and the full gate evaluation pipeline.

Phase convention: single-qubit phases are absorbed by measuring
phi_01 = arg<01|psi_01>, phi_10 = arg<10|psi_10> and imposing the CZ target
phi_11 = phi_01 + phi_10 + pi, so a perfect CZ (up to single-qubit phases)
scores fidelity 1.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict

import numpy as np

from . import model
from .dynamics import (
    DriveTerm,
    TimeDependentHamiltonian,
    evolve_lindblad,
    evolve_state,
)
from .pulses import pulse_value

INPUTS = ("00", "01", "10", "11")
LOSSY_LEVELS = ("e", "r", "a")


@dataclass
class GateResult:
    """Outcome of one gate evaluation."""

    fidelity_ideal: float
    phi01: float
    phi10: float
    phi11: float
    phase_defect: float
    t_e: float
    t_r: float
    t_a: float
    fidelity_realistic: float
    cost_j: float
    overlaps: dict

    def to_dict(self):
        d = asdict(self)
        d["overlaps"] = {
            q: {"abs": abs(o), "phase": float(np.angle(o))} for q, o in self.overlaps.items()
        }
        return d


def bell_fidelity(final_overlaps):
    """Bell-state fidelity from the four final overlaps <q|psi_q>.

    Returns (fidelity, phases) where phases maps each input to the target
    phase weight applied in the sum.
    """
    overlaps = {q: complex(final_overlaps[q]) for q in INPUTS}
    for q, o in overlaps.items():
        if abs(o) > 1.0 + 1e-9:
            raise ValueError(f"non-physical overlap |<{q}|psi>| = {abs(o)} > 1")
    phases = {
        "00": 0.0,
        "01": float(np.angle(overlaps["01"])),
        "10": float(np.angle(overlaps["10"])),
    }
    phases["11"] = phases["01"] + phases["10"] + np.pi
    total = sum(np.exp(-1j * phases[q]) * overlaps[q] for q in INPUTS)
    return float(abs(total) ** 2 / 16.0), phases


def phase_defect(overlaps):
    """|phi_11 - phi_10 - phi_01 - pi| folded to [0, pi]."""
    raw = (
        np.angle(complex(overlaps["11"]))
        - np.angle(complex(overlaps["10"]))
        - np.angle(complex(overlaps["01"]))
        - np.pi
    )
    return float(abs((raw + np.pi) % (2.0 * np.pi) - np.pi))


def cost(fidelity_ideal, t_e, t_r, params):
    """Decay-penalized optimization cost (1 - F) + gamma_e*T_e + gamma_r*T_r."""
    return (1.0 - fidelity_ideal) + params.gamma_e * t_e + params.gamma_r * t_r


def realistic_fidelity(fidelity_ideal, t_e, t_r, params, method="perturbative", **lindblad_kwargs):
    """Bell fidelity including spontaneous decay.

    ``perturbative`` (default) subtracts the first-order decay errors;
    ``lindblad`` runs the master equation (requires ``pulse1``/``pulsec``
    keyword arguments, see :func:`lindblad_fidelity`).
    """
    if method == "perturbative":
        return fidelity_ideal - (params.gamma_e * t_e + params.gamma_r * t_r)
    if method == "lindblad":
        return lindblad_fidelity(params, **lindblad_kwargs)
    raise ValueError(f"unknown method {method!r}; expected 'perturbative' or 'lindblad'")


def _pulse_drive(spec, operator):
    return DriveTerm(envelope=lambda t, s=spec: pulse_value(s, t), operator=operator)


def build_hamiltonian(params, pulse1, pulsec=None, scheme=None, two_atom=True):
    """Time-dependent gate Hamiltonian for one or two atoms."""
    scheme = scheme or params.scheme()
    static1 = model.single_atom_static(params, scheme)
    static1 = static1 + params.omega2 * model.coupling_op(scheme, "r", "e")
    c1 = model.coupling_op(scheme, "e", "1")
    cc = model.coupling_op(scheme, "e", "a")
    if not two_atom:
        drives = [_pulse_drive(pulse1, c1)]
        if pulsec is not None:
            drives.append(_pulse_drive(pulsec, cc))
        return TimeDependentHamiltonian(static=static1, drives=tuple(drives))
    eye = np.eye(scheme.dim)
    static2 = np.kron(static1, eye) + np.kron(eye, static1)
    irr = scheme.pair_index("rr")
    static2[irr, irr] += params.blockade_v
    c1_2 = model.embed_single(c1, scheme, 0) + model.embed_single(c1, scheme, 1)
    cc_2 = model.embed_single(cc, scheme, 0) + model.embed_single(cc, scheme, 1)
    drives = [_pulse_drive(pulse1, c1_2)]
    if pulsec is not None:
        drives.append(_pulse_drive(pulsec, cc_2))
    return TimeDependentHamiltonian(static=static2, drives=tuple(drives))


def _single_atom_weights(scheme):
    return {lbl: np.diag(model.projector(lbl, scheme)).copy() for lbl in LOSSY_LEVELS}


def _two_atom_weights(scheme):
    return {lbl: model.number_weights(lbl, scheme) for lbl in LOSSY_LEVELS}


def _integral(times, values):
    return float(np.trapezoid(values, times))


def evaluate_gate(params, pulse1, pulsec=None, steps=None, store_points=1001,
                  full_space_01=False, norm_tol=None):
    """Run the gate for the computational inputs and assemble a GateResult.

    The |00> channel is analytically stationary and is not integrated; |01>
    and |10> share one reduced single-active-atom evolution (the idle |0>
    atom is exactly decoupled); |11> runs in the full product space.  With
    ``full_space_01`` the |01> channel additionally runs in the product
    space (used by the reduced-vs-full equivalence check).
    """
    if pulsec is not None and not np.isclose(pulsec.duration_t, pulse1.duration_t):
        raise ValueError("pulse1 and pulsec must share one gate duration")
    t_end = pulse1.duration_t
    scheme = params.scheme()
    tol = {} if norm_tol is None else {"norm_tol": norm_tol}

    h1 = build_hamiltonian(params, pulse1, pulsec, scheme, two_atom=False)
    h2 = build_hamiltonian(params, pulse1, pulsec, scheme, two_atom=True)

    psi1 = np.zeros(scheme.dim, dtype=complex)
    psi1[scheme.index("1")] = 1.0
    traj1 = evolve_state(h1, psi1, t_end, steps=steps,
                         pop_weights=_single_atom_weights(scheme),
                         store_points=store_points, label="01", **tol)

    psi11 = np.zeros(scheme.dim**2, dtype=complex)
    psi11[scheme.pair_index("11")] = 1.0
    traj2 = evolve_state(h2, psi11, t_end, steps=steps,
                         pop_weights=_two_atom_weights(scheme),
                         store_points=store_points, label="11", **tol)

    o01 = complex(traj1.final_state("01")[scheme.index("1")])
    o11 = complex(traj2.final_state("11")[scheme.pair_index("11")])
    overlaps = {"00": 1.0 + 0.0j, "01": o01, "10": o01, "11": o11}

    # Average occupancy over the four inputs: |00> contributes zero, |01> and
    # |10> each contribute the single-active-atom population.
    integrals = {}
    for lbl in LOSSY_LEVELS:
        i1 = _integral(traj1.times, traj1.populations[lbl])
        i2 = _integral(traj2.times, traj2.populations[lbl])
        integrals[lbl] = (2.0 * i1 + i2) / 4.0

    fid, phases = bell_fidelity(overlaps)
    t_e, t_r, t_a = integrals["e"], integrals["r"], integrals["a"]
    result = GateResult(
        fidelity_ideal=fid,
        phi01=phases["01"],
        phi10=phases["10"],
        phi11=phases["11"],
        phase_defect=phase_defect(overlaps),
        t_e=t_e,
        t_r=t_r,
        t_a=t_a,
        fidelity_realistic=realistic_fidelity(fid, t_e, t_r, params),
        cost_j=cost(fid, t_e, t_r, params),
        overlaps=overlaps,
    )
    trajectories = {"01": traj1, "11": traj2}
    if full_space_01:
        psi01 = np.zeros(scheme.dim**2, dtype=complex)
        psi01[scheme.pair_index("01")] = 1.0
        trajectories["01_full"] = evolve_state(
            h2, psi01, t_end, steps=steps, pop_weights=_two_atom_weights(scheme),
            store_points=store_points, label="01_full")
    return result, trajectories


def decay_jumps(params, scheme):
    """Per-atom amplitude-decay jumps embedded in the product space.

    |e> decays into the internal dump level (and into |k> with branching b
    when leakage is enabled); |r> decays into the dump level.
    """
    if "d" not in scheme.labels:
        raise ValueError("lindblad evolution needs a scheme with the dump level")
    ket = {lbl: scheme.index(lbl) for lbl in scheme.labels}

    def lower(dst, src):
        op = np.zeros((scheme.dim, scheme.dim))
        op[ket[dst], ket[src]] = 1.0
        return op

    gamma_ed = params.gamma_e * (1.0 - params.branching_b) if params.include_leakage else params.gamma_e
    singles = [(gamma_ed, lower("d", "e")), (params.gamma_r, lower("d", "r"))]
    if params.include_leakage:
        singles.append((params.branching_b * params.gamma_e, lower("k", "e")))
    jumps = []
    for rate, op in singles:
        if rate > 0:
            jumps.append((rate, model.embed_single(op, scheme, 0)))
            jumps.append((rate, model.embed_single(op, scheme, 1)))
    return jumps


def lindblad_fidelity(params, pulse1, pulsec=None, phases=None, steps=None):
    """Bell fidelity from a master-equation run with amplitude-decay jumps.

    Target phases default to the ones measured on the decay-free run.
    """
    if phases is None:
        result, _ = evaluate_gate(params, pulse1, pulsec)
        phases = {"01": result.phi01, "10": result.phi10, "11": result.phi11}
    scheme = params.scheme(include_dump=True)
    h2 = build_hamiltonian(params, pulse1, pulsec, scheme, two_atom=True)
    dim2 = scheme.dim**2
    plus = np.zeros(dim2, dtype=complex)
    for pair in INPUTS:
        plus[scheme.pair_index(pair)] = 0.5
    rho0 = np.outer(plus, plus.conj())
    traj = evolve_lindblad(h2, decay_jumps(params, scheme), rho0,
                           pulse1.duration_t, steps=steps)
    target = np.zeros(dim2, dtype=complex)
    target[scheme.pair_index("00")] = 0.5
    target[scheme.pair_index("01")] = 0.5 * np.exp(1j * phases["01"])
    target[scheme.pair_index("10")] = 0.5 * np.exp(1j * phases["10"])
    target[scheme.pair_index("11")] = 0.5 * np.exp(1j * (phases["01"] + phases["10"] + np.pi))
    return float(np.real(target.conj() @ traj.final() @ target))
