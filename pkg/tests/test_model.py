"""Level scheme, parameter validation and Hamiltonian structure."""

import numpy as np
import pytest

from rydcz import model
from rydcz.model import GateParams, LevelScheme, mhz


@pytest.fixture
def params():
    return GateParams(delta_big=mhz(1000.0), omega2=mhz(50.0),
                      delta_opt=mhz(-3.0), alpha=0.93, blockade_v=mhz(300.0))


def test_mhz_conversion():
    assert model.mhz(1.0) == pytest.approx(2.0 * np.pi)
    assert model.khz_rate(100.0) == pytest.approx(0.1)


def test_scheme_ordering_and_indices():
    s = LevelScheme.make()
    assert s.labels == ("0", "1", "e", "r", "a")
    assert s.dim == 5
    assert s.index("r") == 3
    assert s.pair_index("rr") == 3 * 5 + 3
    assert s.pair_index("01") == 0 * 5 + 1


def test_scheme_extensions():
    s = LevelScheme.make(include_leakage=True, include_dump=True)
    assert s.labels == ("0", "1", "e", "r", "a", "k", "d")
    with pytest.raises(KeyError):
        LevelScheme.make().index("k")


def test_scheme_rejects_bad_labels():
    with pytest.raises(ValueError):
        LevelScheme(("1", "0", "e", "r", "a"))
    with pytest.raises(ValueError):
        LevelScheme(("0", "1", "e", "r", "a", "a"))


def test_params_validation():
    with pytest.raises(ValueError):
        GateParams(delta_big=0.0, omega2=1.0)
    with pytest.raises(ValueError):
        GateParams(delta_big=1.0, omega2=1.0, alpha=1.5)
    with pytest.raises(ValueError):
        GateParams(delta_big=1.0, omega2=1.0, gamma_e=-1.0)


def test_delta_c_relation(params):
    assert params.delta_c == pytest.approx(-0.93 * params.delta_big)
    assert params.detuning_a == pytest.approx(params.delta_big * (1 - 0.93))
    no_ancilla = params.with_(alpha=None)
    assert no_ancilla.delta_c == 0.0


def test_single_atom_hamiltonian_structure(params):
    s = params.scheme()
    omega1 = mhz(80.0)
    omegac = mhz(120.0)
    h = model.single_atom_hamiltonian(params, omega1, omegac)
    assert model.hermiticity_defect(h) < 1e-14
    assert h[s.index("e"), s.index("1")] == pytest.approx(omega1 / 2)
    assert h[s.index("r"), s.index("e")] == pytest.approx(params.omega2 / 2)
    assert h[s.index("e"), s.index("a")] == pytest.approx(omegac / 2)
    assert h[s.index("e"), s.index("e")] == pytest.approx(-params.delta_big)
    assert h[s.index("a"), s.index("a")] == pytest.approx(-params.detuning_a)
    assert h[s.index("r"), s.index("r")] == pytest.approx(-params.delta_opt)
    # |0> fully decoupled
    i0 = s.index("0")
    assert np.all(h[i0, :] == 0) and np.all(h[:, i0] == 0)


def test_two_atom_hamiltonian_blockade_and_symmetry(params):
    s = params.scheme()
    h = model.two_atom_hamiltonian(params, mhz(80.0), mhz(120.0))
    assert model.hermiticity_defect(h) < 1e-14
    h0 = model.single_atom_hamiltonian(params, mhz(80.0), mhz(120.0))
    irr = s.pair_index("rr")
    assert h[irr, irr] == pytest.approx(2 * h0[s.index("r"), s.index("r")].real
                                        + params.blockade_v)
    swap = model.swap_operator(s)
    assert np.abs(swap @ h @ swap - h).max() < 1e-12


def test_embed_single_consistency(params):
    s = params.scheme()
    op = model.projector("e", s)
    n = model.number_operator("e", s)
    assert np.array_equal(model.embed_single(op, s, 0) + model.embed_single(op, s, 1), n)
    with pytest.raises(ValueError):
        model.embed_single(op, s, 2)


def test_number_weights_match_diagonal(params):
    s = params.scheme()
    for label in ("e", "r", "a"):
        w = model.number_weights(label, s)
        assert np.array_equal(w, np.diag(model.number_operator(label, s)))
        assert w.max() == 2.0  # doubly excited pair counts twice


def test_computational_projector(params):
    s = params.scheme()
    p = model.computational_projector(s)
    assert np.trace(p) == pytest.approx(4.0)
    assert np.array_equal(p @ p, p)
    idx = model.computational_indices(s)
    assert idx == (s.pair_index("00"), s.pair_index("01"),
                   s.pair_index("10"), s.pair_index("11"))
