"""Level scheme, unit conventions and Hamiltonian builders.

Unit conventions used throughout the package:

* angular frequencies and couplings are stored in rad/us,
* plain decay/dephasing rates are stored in 1/us (no 2*pi),
* time is in us.

Laser parameters quoted as ``X/2pi`` in MHz convert via :func:`mhz`.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

TWO_PI = 2.0 * np.pi

# Per-atom level labels; ordering is fixed so serialized states are portable.
BASE_LEVELS = ("0", "1", "e", "r", "a")
LEAK_LEVEL = "k"
DUMP_LEVEL = "d"


def mhz(value):
    """Convert a frequency quoted as value/2pi in MHz to rad/us."""
    return TWO_PI * np.asarray(value, dtype=float)


def khz_rate(value):
    """Convert a plain rate in kHz (no 2pi) to 1/us."""
    return 1e-3 * np.asarray(value, dtype=float)


@dataclass(frozen=True)
class LevelScheme:
    """Ordered per-atom level labels with a stable label -> index map.

    The base scheme is ``(0, 1, e, r, a)``.  A leakage target ``k`` and an
    internal dump level ``d`` (used as the destination of amplitude decay in
    master-equation runs) can be appended; neither carries couplings or
    diagonal energy.
    """

    labels: tuple

    def __post_init__(self):
        if self.labels[: len(BASE_LEVELS)] != BASE_LEVELS:
            raise ValueError(f"level ordering must start with {BASE_LEVELS}")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("duplicate level labels")

    @staticmethod
    def make(include_leakage=False, include_dump=False):
        labels = list(BASE_LEVELS)
        if include_leakage:
            labels.append(LEAK_LEVEL)
        if include_dump:
            labels.append(DUMP_LEVEL)
        return LevelScheme(tuple(labels))

    @property
    def dim(self):
        return len(self.labels)

    def index(self, label):
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown level label {label!r}; known: {self.labels}") from None

    def pair_index(self, pair):
        """Index of the two-atom product state, e.g. ``'11'`` or ``'rr'``."""
        if len(pair) != 2:
            raise ValueError(f"two-atom state label must have two characters, got {pair!r}")
        return self.index(pair[0]) * self.dim + self.index(pair[1])


@dataclass(frozen=True)
class GateParams:
    """Static laser/atom/decay parameters of the gate.

    All couplings/detunings in rad/us, decay rates in 1/us.  ``alpha`` fixes
    the ancillary detuning through ``delta_c = -alpha * delta_big``; it is
    ``None`` for gates without an ancillary drive.
    """

    delta_big: float            # intermediate detuning Delta
    omega2: float               # fixed upper-leg Rabi frequency
    delta_opt: float = 0.0      # constant two-photon detuning
    alpha: float | None = None  # ancillary detuning ratio, delta_c = -alpha*delta_big
    blockade_v: float = 0.0     # vdW shift on |rr>
    gamma_e: float = 0.0        # intermediate-state decay rate
    gamma_r: float = 0.0        # Rydberg-state decay rate
    branching_b: float = 0.0667  # |e> -> |k> leakage branching ratio
    include_leakage: bool = False
    amp_cap_1: float = mhz(200.0)
    amp_cap_c: float = mhz(200.0)

    def __post_init__(self):
        if not np.isfinite(self.delta_big) or self.delta_big <= 0:
            raise ValueError("delta_big must be finite and positive")
        if self.alpha is not None and not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must satisfy 0 < alpha < 1")
        for name in ("gamma_e", "gamma_r", "branching_b"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")

    @property
    def delta_c(self):
        return 0.0 if self.alpha is None else -self.alpha * self.delta_big

    @property
    def detuning_a(self):
        """Detuning of the ancillary state, Delta + Delta_c."""
        return self.delta_big + self.delta_c

    def scheme(self, include_dump=False):
        return LevelScheme.make(include_leakage=self.include_leakage, include_dump=include_dump)

    def with_(self, **changes):
        return replace(self, **changes)


def _check_finite(**values):
    for name, value in values.items():
        if not np.all(np.isfinite(value)):
            raise ValueError(f"{name} must be finite, got {value!r}")


def coupling_op(scheme, upper, lower):
    """Hermitized half-coupling operator (|upper><lower| + h.c.)/2."""
    op = np.zeros((scheme.dim, scheme.dim), dtype=complex)
    op[scheme.index(upper), scheme.index(lower)] = 0.5
    op[scheme.index(lower), scheme.index(upper)] = 0.5
    return op


def single_atom_static(params, scheme=None):
    """Diagonal part of the single-atom Hamiltonian (all couplings off)."""
    scheme = scheme or params.scheme()
    h = np.zeros((scheme.dim, scheme.dim), dtype=complex)
    h[scheme.index("e"), scheme.index("e")] = -params.delta_big
    h[scheme.index("a"), scheme.index("a")] = -params.detuning_a
    h[scheme.index("r"), scheme.index("r")] = -params.delta_opt
    return h


def single_atom_hamiltonian(params, omega1, omegac=0.0, scheme=None):
    """Single-atom Hamiltonian for instantaneous drive amplitudes (rad/us).

    Couplings: omega1/2 on |e><1|, omega2/2 on |r><e|, omegac/2 on |e><a|
    plus conjugates; diagonal -Delta, -(Delta+Delta_c), -delta_opt on
    |e>, |a>, |r>.  |0> (and |k>, |d> if present) stay fully decoupled.
    """
    _check_finite(omega1=omega1, omegac=omegac)
    scheme = scheme or params.scheme()
    h = single_atom_static(params, scheme)
    h += omega1 * coupling_op(scheme, "e", "1")
    h += params.omega2 * coupling_op(scheme, "r", "e")
    h += omegac * coupling_op(scheme, "e", "a")
    return h


def two_atom_static(params, scheme=None):
    scheme = scheme or params.scheme()
    h0 = single_atom_static(params, scheme)
    eye = np.eye(scheme.dim)
    h = np.kron(h0, eye) + np.kron(eye, h0)
    irr = scheme.pair_index("rr")
    h[irr, irr] += params.blockade_v
    return h


def two_atom_hamiltonian(params, omega1, omegac=0.0, scheme=None):
    """Two-atom Hamiltonian H = H0 x I + I x H0 + V |rr><rr|."""
    _check_finite(omega1=omega1, omegac=omegac)
    scheme = scheme or params.scheme()
    h0 = single_atom_hamiltonian(params, omega1, omegac, scheme)
    eye = np.eye(scheme.dim)
    h = np.kron(h0, eye) + np.kron(eye, h0)
    irr = scheme.pair_index("rr")
    h[irr, irr] += params.blockade_v
    return h


def embed_single(op, scheme, atom):
    """Embed a single-atom operator on atom 0 or 1 of the product space."""
    eye = np.eye(scheme.dim)
    if atom == 0:
        return np.kron(op, eye)
    if atom == 1:
        return np.kron(eye, op)
    raise ValueError("atom must be 0 or 1")


def projector(levels_subset, scheme):
    """Single-atom projector onto a subset of level labels."""
    if isinstance(levels_subset, str):
        levels_subset = (levels_subset,)
    p = np.zeros((scheme.dim, scheme.dim))
    for label in levels_subset:
        i = scheme.index(label)
        p[i, i] = 1.0
    return p


def number_operator(label, scheme):
    """Two-atom number operator n_l = Pi_l x I + I x Pi_l for level l."""
    p = projector(label, scheme)
    return embed_single(p, scheme, 0) + embed_single(p, scheme, 1)


def number_weights(label, scheme):
    """Diagonal of :func:`number_operator`, used for fast population sums."""
    return np.diag(number_operator(label, scheme)).real.copy()


def computational_projector(scheme):
    """Rank-4 projector onto the two-atom computational subspace."""
    p = np.zeros((scheme.dim**2, scheme.dim**2))
    for pair in ("00", "01", "10", "11"):
        i = scheme.pair_index(pair)
        p[i, i] = 1.0
    return p


def computational_indices(scheme):
    """Product-space indices of |00>, |01>, |10>, |11> in fixed order."""
    return tuple(scheme.pair_index(pair) for pair in ("00", "01", "10", "11"))


def swap_operator(scheme):
    """Atom-exchange permutation on the product space."""
    d = scheme.dim
    s = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            s[i * d + j, j * d + i] = 1.0
    return s


def hermiticity_defect(h):
    """Max |H - H^dag| element relative to the matrix norm."""
    scale = max(np.linalg.norm(h), 1.0)
    return np.abs(h - h.conj().T).max() / scale
