import math

import numpy as np
import pytest

from fluxlattice.errors import NonHermitianError, PreconditionError, TruncationError, UnboundPotentialError
from fluxlattice.fock import (QUBIT, RESONATOR, FockOperator, Mode, OneModeHamiltonian, charge_operator,
                              check_hermitian, destroy, embed, hermiticity_error, kron_all, number,
                              phase_function, phase_operator, zero_point_phase)


def test_ladder_operators():
    a_ = destroy(5)
    assert np.allclose(a_.T @ a_, number(5))
    comm_ = a_ @ a_.T - a_.T @ a_
    # [a, a^dag] = 1 below the cutoff
    assert np.allclose(np.diag(comm_)[:-1], 1.)


def test_phase_and_charge_commute_canonically():
    z_ = zero_point_phase(2., .5)
    phi_ = phase_operator(30, z_)
    n_ = charge_operator(30, z_)
    comm_ = phi_ @ n_ - n_ @ phi_
    assert np.allclose(np.diag(comm_)[:-1], 1j)


def test_harmonic_mode_levels():
    # H = q n^2 + v phi^2 -> 2 sqrt(q v) (k + 1/2)
    one_ = OneModeHamiltonian(2., .5, label="r")
    assert one_.levels(4, basis=40) == pytest.approx([1., 3., 5., 7.], abs=1e-10)
    assert one_.anharmonicity(basis=40) == pytest.approx(0., abs=1e-9)


def test_transmon_like_mode():
    e_c, e_j, e_l = 1., 200., 4.
    one_ = OneModeHamiltonian(8. * e_c, e_l / 4., [(-e_j, 1., 0.)], label="q")
    e_star_ = e_j + e_l / 2.
    gap_ = one_.levels(2)[1] - one_.levels(2)[0]
    # leading order gap 4 sqrt(E* E_C) shifted down by 2 E_C E_J / E*
    assert gap_ == pytest.approx(4. * math.sqrt(e_star_ * e_c) - 2. * e_c * e_j / e_star_, rel=.02)
    assert one_.anharmonicity() == pytest.approx(-2. * e_c * e_j / e_star_, rel=.15)


def test_one_mode_preconditions():
    with pytest.raises(PreconditionError):
        OneModeHamiltonian(0., 1.)
    with pytest.raises(UnboundPotentialError):
        OneModeHamiltonian(1., 0.)


def test_truncation_is_detected():
    one_ = OneModeHamiltonian(2., .5)
    with pytest.raises(TruncationError):
        one_.eigensystem(basis=3, levels=3)
    # wide oscillator length with a tiny basis leaks into the top state
    wide_ = OneModeHamiltonian(1., 1e-4, [(-1., 1., 0.)])
    with pytest.raises(TruncationError):
        wide_.eigensystem(basis=6, levels=4, tolerance=1e-12)


def test_phase_function_matches_series():
    z_ = .1
    sin_ = phase_function(6, z_, np.sin)
    phi_ = phase_operator(6 + 30, z_)
    series_ = (phi_ - phi_ @ phi_ @ phi_ / 6. + np.linalg.matrix_power(phi_, 5) / 120.)[:6, :6]
    assert np.allclose(sin_, series_, atol=1e-5)


def test_embed_and_kron():
    x_ = np.array([[0., 1.], [1., 0.]])
    full_ = embed([2, 3], {0: x_})
    assert np.allclose(full_, np.kron(x_, np.eye(3)))
    assert kron_all([np.eye(2), np.eye(2)]).shape == (4, 4)


def test_hermiticity_checks():
    h_ = np.array([[1., 1j], [-1j, 2.]])
    assert 0 == hermiticity_error(h_)
    check_hermitian(h_)
    bad_ = np.array([[1., 1.], [0., 1.]])
    assert hermiticity_error(bad_) == pytest.approx(1.)
    with pytest.raises(NonHermitianError):
        check_hermitian(bad_)


def _two_modes(levels=6):
    q_ = Mode("q", QUBIT, 2, 1., local={"sigma_z": np.diag([-1., 1.])})
    r_ = Mode("r", RESONATOR, levels, 1., local={"number": number(levels)})
    h_ = embed([2, levels], {0: np.diag([-.5, .5])}) + embed([2, levels], {1: number(levels)})
    return FockOperator(h_, [q_, r_])


def test_fock_operator_layout():
    h_ = _two_modes()
    assert h_.dims == (2, 6)
    assert h_.labels == ("q", "r")
    assert 1 == h_.mode_index("r")
    assert [m_.label for m_ in h_.modes_of(QUBIT)] == ["q"]
    assert h_.basis_labels()[7] == (1, 1)
    assert np.allclose(h_.local_operator("r", "number"), np.kron(np.eye(2), number(6)))
    with pytest.raises(PreconditionError):
        h_.mode_index("x")
    with pytest.raises(PreconditionError):
        h_.local_operator("q", "a")
    with pytest.raises(PreconditionError):
        FockOperator(np.eye(3), h_.modes)


def test_ground_state_and_truncation_check():
    h_ = _two_modes()
    psi_ = h_.ground_state()
    assert abs(psi_[0]) == pytest.approx(1.)
    h_.check_truncation()
    # a displaced ground state populates the top resonator level
    a_ = destroy(3)
    m_ = embed([2, 3], {1: number(3)}) - 3. * embed([2, 3], {1: a_ + a_.T})
    shifted_ = FockOperator(m_, [Mode("q", QUBIT, 2, 1.), Mode("r", RESONATOR, 3, 1.)])
    with pytest.raises(TruncationError):
        shifted_.check_truncation()
