import numpy as np
import pytest

from fluxlattice.errors import InstabilityError, PreconditionError, ResonanceError
from fluxlattice.fock import OneModeHamiltonian
from fluxlattice.spectra import (LONGITUDINAL, MIXED, TRANSVERSE, UNCOUPLED, Coupling, SpinBosonModel,
                                 classify_asymmetric_coupling, classify_coupling, dispersive_shift_numeric,
                                 eigensystem, grid_spin_boson, junction_asymmetry_decompose, lang_firsov_frame,
                                 lang_firsov_spectrum, longitudinal_model, normal_mode_frequencies,
                                 normal_mode_table, quadratic_normal_mode_oracle, rabi_model,
                                 schrieffer_wolff_frame, spin_boson_hamiltonian)


def _qubit():
    return OneModeHamiltonian(8., 1., [(-50., 1., 0.)], label="q1")


@pytest.mark.parametrize("g", [.1, .3, .6, 1.])
def test_longitudinal_spectrum_is_displaced_oscillator(g):
    m_ = longitudinal_model(.8, 1., g)
    h_ = spin_boson_hamiltonian(m_, 120)
    levels_ = np.linalg.eigvalsh(h_.matrix)[:20]
    assert np.allclose(levels_, lang_firsov_spectrum(m_, 20), atol=1e-8)


def test_lang_firsov_frame_diagonalises():
    f_ = lang_firsov_frame(longitudinal_model(5., 1., .1), resonator_levels=60)
    assert f_["theta"] == pytest.approx(.1)
    assert f_["energy_offset"] == pytest.approx(-.01)
    assert f_["residual_offdiag_norm"] < 1e-6
    with pytest.raises(PreconditionError):
        lang_firsov_frame(rabi_model(5., 1., .1))


def test_schrieffer_wolff_parameters():
    f_ = schrieffer_wolff_frame(rabi_model(5., 1., .1))
    assert f_["gamma"] == pytest.approx(.025)
    assert f_["gamma_bar"] == pytest.approx(.0166667, rel=1e-5)
    assert f_["chi"] == pytest.approx(.00208333, rel=1e-5)


def test_schrieffer_wolff_rejects():
    with pytest.raises(PreconditionError):
        schrieffer_wolff_frame(longitudinal_model(5., 1., .1))
    with pytest.raises(ResonanceError):
        schrieffer_wolff_frame(rabi_model(1., 1., .1))
    two_ = grid_spin_boson(2, 5., 1., .1)
    with pytest.raises(PreconditionError):
        schrieffer_wolff_frame(two_)


def test_numeric_dispersive_shift():
    m_ = rabi_model(5.5, 1., .1)
    chi_ = dispersive_shift_numeric(spin_boson_hamiltonian(m_, 10))
    assert chi_ == pytest.approx(schrieffer_wolff_frame(m_)["chi"], rel=.02)


def test_dispersive_shift_is_quadratic_in_coupling():
    g_ = np.array([.02, .05, .1])
    chi_ = [dispersive_shift_numeric(spin_boson_hamiltonian(rabi_model(5.5, 1., x_), 10)) for x_ in g_]
    slope_, _ = np.polyfit(np.log(g_), np.log(np.abs(chi_)), 1)
    assert slope_ == pytest.approx(2., abs=.05)


def test_longitudinal_coupling_has_no_dispersive_shift():
    chi_ = dispersive_shift_numeric(spin_boson_hamiltonian(longitudinal_model(5.5, 1., .1), 20))
    assert abs(chi_) < 1e-10


def test_spectrum_labels():
    h_ = spin_boson_hamiltonian(rabi_model(5., 1., .01), 6)
    assert 12 == h_.dimension
    spec_ = eigensystem(h_, k=4)
    assert [[0, 0], [0, 1], [0, 2], [0, 3]] == spec_["labels"]
    assert spec_["energies"][0] == pytest.approx(-2.5, abs=1e-4)
    assert "g" == spec_.qubit_label(0)
    assert "1" == spec_.photon_label(1)
    assert 1 == spec_.level((0, 1))
    header_, rows_ = spec_.to_rows()
    assert "qubit_label" in header_
    assert 4 == len(rows_)


def test_coupling_parity():
    assert LONGITUDINAL == Coupling(0, 0, g=.1).parity
    assert TRANSVERSE == Coupling(0, 0, g_x=.1).parity
    assert MIXED == Coupling(0, 0, g=.1, g_x=.1).parity
    assert UNCOUPLED == Coupling(0, 0).parity
    assert longitudinal_model(5., 1., .1).is_longitudinal
    assert not rabi_model(5., 1., .1).is_longitudinal


def test_classify_symmetric_factors():
    q_ = _qubit()
    even_ = classify_coupling(q_, lambda x_: np.cos(x_ / 2.))
    assert LONGITUDINAL == even_["tag"]
    assert abs(even_["L"]) > 1e-3
    odd_ = classify_coupling(q_, lambda x_: np.sin(x_ / 2.))
    assert TRANSVERSE == odd_["tag"]


def test_asymmetry_decomposition():
    dec_ = junction_asymmetry_decompose(.9, 1.1)
    assert dec_["E_JSigma"] == pytest.approx(2.)
    assert dec_["d"] == pytest.approx(.1)
    x_, y_ = .7, -1.3
    direct_ = -.9 * np.sin(x_ / 2. + y_ / 2.) - 1.1 * np.sin(y_ / 2. - x_ / 2.)
    assert dec_.potential(x_, y_) == pytest.approx(direct_)
    assert junction_asymmetry_decompose(0., 0.)["uncoupled"]
    with pytest.raises(PreconditionError):
        junction_asymmetry_decompose(-1., 1.)


def test_classify_asymmetric_coupling():
    q_ = _qubit()
    c_ = classify_asymmetric_coupling(q_, .9, 1.1)
    assert MIXED == c_["tag"]
    assert 0 < c_["ratio"]
    assert c_["d"] == pytest.approx(.1)
    assert LONGITUDINAL == classify_asymmetric_coupling(q_, 1., 1.)["tag"]
    assert UNCOUPLED == classify_asymmetric_coupling(q_, 0., 0.)["tag"]


def test_asymmetry_ratio_is_linear_in_d():
    q_ = _qubit()
    d_ = np.array([.01, .05, .1, .2, .4])
    ratio_ = np.array([classify_asymmetric_coupling(q_, 1. - x_, 1. + x_)["ratio"] for x_ in d_])
    assert ratio_ / d_ == pytest.approx(np.full(d_.shape, ratio_[0] / d_[0]), rel=1e-6)


def test_normal_modes():
    up_, down_ = normal_mode_frequencies(1., 1., .1)
    assert up_ == pytest.approx(1.0954451, rel=1e-7)
    assert down_ == pytest.approx(.8944272, rel=1e-7)
    with pytest.raises(InstabilityError):
        normal_mode_frequencies(1., 1., .5)
    with pytest.raises(InstabilityError):
        quadratic_normal_mode_oracle(1., 1., .5)


@pytest.mark.parametrize("omega1,omega2,g_c", [(1., 1., .1), (1., 1.3, .05), (2., 1.5, .2)])
def test_normal_modes_match_quadratic_oracle(omega1, omega2, g_c):
    assert normal_mode_frequencies(omega1, omega2, g_c) == pytest.approx(
        quadratic_normal_mode_oracle(omega1, omega2, g_c), rel=1e-9)


def test_normal_modes_match_oracle_on_random_triples():
    rng_ = np.random.default_rng(7)
    for _ in range(1000):
        w1_, w2_ = rng_.uniform(.5, 2., 2)
        # stable below g_c = sqrt(w1 w2) / 2
        g_c_ = rng_.uniform(-.49, .49) * np.sqrt(w1_ * w2_)
        assert normal_mode_frequencies(w1_, w2_, g_c_) == pytest.approx(
            quadratic_normal_mode_oracle(w1_, w2_, g_c_), rel=1e-8)
    for _ in range(20):
        w1_, w2_ = rng_.uniform(.5, 2., 2)
        g_c_ = rng_.uniform(.51, 1.) * np.sqrt(w1_ * w2_)
        with pytest.raises(InstabilityError):
            normal_mode_frequencies(w1_, w2_, g_c_)
        with pytest.raises(InstabilityError):
            quadratic_normal_mode_oracle(w1_, w2_, g_c_)


def test_grid_models():
    one_ = grid_spin_boson(1, 5., 1., .05)
    assert ("q1",) == one_.qubits
    two_ = grid_spin_boson(2, 5., 1., .05, g_c=.1)
    assert 1 == len(two_.resonator_couplings)
    assert ["r1-r2"] == list(normal_mode_table(two_))
    four_ = grid_spin_boson(4, [5., 5.5, 6., 6.5], 1., .05, g_c=.1)
    assert 4 == len(four_.qubits)
    assert 8 == len(four_.resonators)
    assert 8 == len(four_.couplings)
    assert 4 == len(four_.resonator_couplings)
    assert [0, 7] == four_.resonators_of(0)
    assert all(four_.resonators[r_].startswith("r1") for r_ in four_.resonators_of(0))
    with pytest.raises(PreconditionError):
        grid_spin_boson(3, 5., 1., .05)
    with pytest.raises(PreconditionError):
        grid_spin_boson(2, [5.], 1., .05)


def test_restrict_and_scale():
    two_ = grid_spin_boson(2, [5., 6.], 1., .05, g_c=.1)
    sub_ = two_.restrict([1], [1])
    assert ("q2",) == sub_.qubits
    assert ("r2",) == sub_.resonators
    assert (6.,) == sub_.delta
    assert 1 == len(sub_.couplings)
    assert 0 == sub_.couplings[0].qubit
    assert () == sub_.resonator_couplings
    big_ = two_.scaled(2.)
    assert (10., 12.) == big_.delta
    assert big_.couplings[0].g == pytest.approx(.1)
    assert big_.resonator_couplings[0].g_c == pytest.approx(.2)
    assert 1 == two_.qubit_index("q2")
    with pytest.raises(PreconditionError):
        two_.qubit_index("q7")


def test_model_checks():
    with pytest.raises(PreconditionError):
        SpinBosonModel(("q1",), ("r1",), (5.,), (0.,)).check()
    with pytest.raises(PreconditionError):
        SpinBosonModel(("q1",), ("r1",), (5., 6.), (1.,)).check()
    d_ = grid_spin_boson(1, 5., 1., .05).to_dict()
    assert LONGITUDINAL == d_["couplings"][0]["parity"]
