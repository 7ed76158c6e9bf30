import math

import numpy as np
import pytest

from fluxlattice.errors import PreconditionError, TruncationError, TwoLevelError, UnboundPotentialError
from fluxlattice.fock import OneModeHamiltonian
from fluxlattice.lagrangian import KAPPA, reduce_circuit
from fluxlattice.netlist import builtin_circuit
from fluxlattice.quantize import (derived_parameters, fock_hamiltonian, legendre_transform, one_mode_hamiltonian,
                                  transmon_parameters, truncation_stability, two_level_reduce)
from fluxlattice.spectra import LONGITUDINAL

FF = 1e-15


def _hamiltonian(name, params=None):
    reduced_, _ = reduce_circuit(builtin_circuit(name, params or {}))
    return legendre_transform(reduced_)


def test_transmon_closed_forms():
    p_ = transmon_parameters(10., 4., .25)
    assert p_["E_star"] == pytest.approx(12.)
    assert p_["gap"] == pytest.approx(4. * math.sqrt(3.))
    assert p_["anharmonicity_leading"] == pytest.approx(-.416666667)
    # (1/48)^1.5 (20 - 425/12) on top of the leading term
    assert p_["anharmonicity"] == pytest.approx(-.4630251, rel=1e-6)
    assert 0 == transmon_parameters(0., 4., .25)["anharmonicity"]
    with pytest.raises(UnboundPotentialError):
        transmon_parameters(-5., 4., 1.)


@pytest.mark.parametrize("e_c", [.1, .2, .24])
def test_closed_forms_against_dense_spectrum(e_c):
    p_ = transmon_parameters(10., 4., e_c)
    assert p_["E_C"] / p_["E_star"] <= .02
    one_ = OneModeHamiltonian(8. * e_c, 4. / 4., [(-10., 1., 0.)])
    e_ = one_.levels(3, basis=200)
    # the closed-form gap is the harmonic part; the quartic shift is the anharmonicity
    assert e_[1] - e_[0] == pytest.approx(p_["gap"] + p_["anharmonicity"], rel=.02)
    assert one_.anharmonicity(basis=200) == pytest.approx(p_["anharmonicity"], rel=.05)


def test_legendre_transform_inverts_kinetic_form():
    reduced_, _ = reduce_circuit(builtin_circuit("two_blocks"))
    h_ = legendre_transform(reduced_)
    assert h_.labels == reduced_.labels
    assert h_.charge_form.matrix @ reduced_.kinetic.matrix == pytest.approx(np.eye(4) / 4.)
    assert ["phi_q1", "phi_q2"] == h_.qubit_labels
    assert ["phi_r1", "phi_r2"] == h_.resonator_labels
    with pytest.raises(PreconditionError):
        h_.index("phi_x")


def test_qubit_resonator_parameters():
    h_ = _hamiltonian("qubit_resonator")
    d_ = derived_parameters(h_)
    assert "qubit_resonator" == d_["topology"]
    q_ = d_["qubits"]["phi_q1"]
    # C_q in parallel with the two arm capacitors in series
    assert q_["E_C"] == pytest.approx(1. / (16. * KAPPA * 20. * FF), rel=1e-9)
    assert q_["E_Jq"] == pytest.approx(12. * 2. * math.pi * 1e9)
    assert q_["gap"] > 0 > q_["anharmonicity"]
    assert q_["gap_GHz"] == pytest.approx(q_["gap"] / (2. * math.pi * 1e9))
    r_ = d_["resonators"]["phi_r1"]
    assert r_["omega"] == pytest.approx(r_["omega_closed"], rel=1e-9)
    assert r_["omega"] == pytest.approx(1. / math.sqrt(30e-9 * 20. * FF), rel=1e-9)
    c_ = d_["couplings"]["phi_q1-phi_r1"]
    assert c_["g1"] > 0
    assert abs(c_["transverse"]) <= 1e-12 * abs(c_["g1_numeric"])
    header_, rows_ = d_.to_rows()
    assert ["item", "name", "value"] == header_
    assert rows_


def test_coupling_estimate_for_deep_qubit():
    # E_C / E* of order 1e-5: the dressing term is about 1.4e-3 and what is left is of order E_C / E*
    d_ = derived_parameters(_hamiltonian("qubit_resonator", {"C_q": 1e5}))
    c_ = d_["couplings"]["phi_q1-phi_r1"]
    assert abs(c_["g1_numeric"]) == pytest.approx(c_["g1"], rel=1e-3)
    assert abs(abs(c_["g1_numeric"]) / c_["g1_leading"] - 1.) > 1e-3


def test_coupling_estimate_at_default_parameters():
    c_ = derived_parameters(_hamiltonian("qubit_resonator"))["couplings"]["phi_q1-phi_r1"]
    assert abs(c_["g1_numeric"]) == pytest.approx(c_["g1"], rel=.05)
    assert c_["g1"] > c_["g1_leading"]


@pytest.mark.parametrize("c_g", [2., 5., 10.])
def test_two_blocks_closed_forms(c_g):
    d_ = derived_parameters(_hamiltonian("two_blocks", {"C_g": c_g, "C": [20., 25.]}))
    for label_ in ("phi_r1", "phi_r2"):
        r_ = d_["resonators"][label_]
        assert r_["omega"] == pytest.approx(r_["omega_closed"], rel=1e-6)
    conn_ = d_["connections"]["phi_r1-phi_r2"]
    assert conn_["g_c"] == pytest.approx(conn_["g_c_closed"], rel=1e-6)


def test_one_mode_clamps_other_variables():
    h_ = _hamiltonian("qubit_resonator")
    one_ = one_mode_hamiltonian(h_, "phi_q1")
    i_ = h_.index("phi_q1")
    assert one_.charge == pytest.approx(h_.charge_form.matrix[i_, i_])
    # qubit junction plus both coupling junctions
    assert 3 == len(one_.sinusoids)


def test_fock_hamiltonian():
    h_ = _hamiltonian("qubit_resonator")
    op_ = fock_hamiltonian(h_, {"phi_q1": 3, "phi_r1": 8})
    assert (3, 8) == op_.dims
    assert 24 == op_.dimension
    assert op_.hermiticity_error() < 1e-12
    assert op_.metadata["junction_energies"]["phi_q1"] == pytest.approx(12. * 2. * math.pi * 1e9)
    assert not op_.metadata["linearized"]
    assert "sin" in op_.modes[0].local
    lin_ = fock_hamiltonian(h_, {"phi_q1": 3, "phi_r1": 8}, linearize_coupling=True)
    assert lin_.metadata["residual_bound"] > 0
    assert lin_.hermiticity_error() < 1e-12


def test_truncation_stability_at_default_truncations():
    report_ = truncation_stability(_hamiltonian("qubit_resonator"))
    assert {"phi_q1": 12, "phi_r1": 10} == report_["dims"]
    assert 4 == len(report_["energies"])
    assert report_["worst"] < 1e-8
    assert set(report_["changes"]) == {"phi_q1", "phi_r1"}
    header_, rows_ = report_.to_rows()
    assert ["mode", "dimension", "raised", "change"] == header_
    assert ["phi_q1", 12, 17] == rows_[0][:3]


def test_truncation_stability_rejects_small_truncations():
    h_ = _hamiltonian("qubit_resonator")
    with pytest.raises(TruncationError):
        truncation_stability(h_, {"phi_q1": 2, "phi_r1": 3})
    with pytest.raises(PreconditionError):
        truncation_stability(h_, increase=0)


def test_fock_hamiltonian_rejects():
    h_ = _hamiltonian("qubit_resonator")
    with pytest.raises(PreconditionError):
        fock_hamiltonian(h_, {"phi_x": 3})
    with pytest.raises(PreconditionError):
        fock_hamiltonian(h_, {"phi_r1": 0})


def test_two_level_reduction_is_longitudinal():
    h_ = _hamiltonian("qubit_resonator", {"E_J": .5})
    model_, residual_ = two_level_reduce(h_)
    assert ("phi_q1",) == model_.qubits
    assert ("phi_r1",) == model_.resonators
    c_ = model_.couplings[0]
    assert LONGITUDINAL == c_.parity
    assert residual_["transverse_residual"] <= 1e-12 * abs(residual_["couplings"][0]["L"])
    # the same reduction from the Fock operator
    again_, _ = two_level_reduce(fock_hamiltonian(h_, {"phi_q1": 3, "phi_r1": 6}))
    assert again_.couplings[0].g == pytest.approx(c_.g)


def test_two_level_reduction_needs_anharmonicity():
    h_ = _hamiltonian("qubit_resonator", {"E_Jq": 0.})
    with pytest.raises(TwoLevelError):
        two_level_reduce(h_)


def test_two_blocks_reduction_has_resonator_coupling():
    model_, _ = two_level_reduce(_hamiltonian("two_blocks", {"E_J": .5}))
    assert 2 == len(model_.qubits)
    assert 1 == len(model_.resonator_couplings)
    assert model_.resonator_couplings[0].g_c > 0
    assert model_.is_longitudinal
