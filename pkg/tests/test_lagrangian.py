import math

import numpy as np
import pytest

from fluxlattice.errors import (IndefiniteFormError, PreconditionError, SingularTransformError, TopologyError)
from fluxlattice.lagrangian import (KAPPA, LinearTransform, QuadraticForm, SinusoidTerm, apply_linear_transform,
                                    build_lagrangian, check_reduction, cholesky_eliminate, connection_blocks,
                                    lifted_model, model_to_dict, quadratic_normal_modes, reduce_circuit,
                                    standard_block_transform)
from fluxlattice.netlist import TWO_PI, builtin_circuit, parse_netlist

FF = 1e-15


def test_quadratic_form_rejects_asymmetric():
    with pytest.raises(ValueError):
        QuadraticForm([[1., 2.], [0., 1.]])
    f_ = QuadraticForm([[2., 1.], [1., 3.]])
    assert f_.evaluate([1., 1.]) == pytest.approx(7.)
    assert f_.is_positive_definite()
    assert not QuadraticForm([[1., 2.], [2., 1.]]).is_positive_definite()


def test_sinusoid_evaluates_batches():
    s_ = SinusoidTerm(-2., (1., -1.), math.pi / 2.)
    pts_ = np.array([[0., 0.], [.3, .1]])
    assert s_.evaluate(pts_) == pytest.approx([-2. * math.cos(math.pi / 2.), -2. * math.cos(.2 + math.pi / 2.)])
    assert [0, 1] == s_.support()


def test_qubit_resonator_lagrangian():
    p_ = {"C_q": 10., "C": 20., "L": 30.}
    c_ = builtin_circuit("qubit_resonator", p_)
    m_ = build_lagrangian(c_)
    assert m_.labels == ("a1", "b1")
    # Cq + two arm capacitors to the reference node
    k_ = m_.kinetic.matrix / (KAPPA / 2.)
    assert k_ == pytest.approx(np.array([[30., -10.], [-10., 30.]]) * FF)
    # qubit junction and both coupling junctions
    assert 3 == len(m_.sinusoids)
    assert m_.metadata["circuit"] == "qubit_resonator"


def test_standard_transform_separates_qubit_and_resonator():
    c_ = builtin_circuit("qubit_resonator", {"C_q": 10., "C": 20., "L": 30.})
    t_ = standard_block_transform(c_)
    assert t_.labels == ("phi_q1", "phi_r1")
    m_ = apply_linear_transform(build_lagrangian(c_), t_)
    k_ = m_.kinetic.matrix / (KAPPA / 2.)
    assert k_[0, 0] == pytest.approx(20. * FF)
    assert k_[1, 1] == pytest.approx(10. * FF)
    assert 0 == k_[0, 1]
    v_ = m_.quad_potential.matrix
    assert v_[0, 0] == pytest.approx(KAPPA / (4. * 30e-9))
    assert v_[1, 1] == pytest.approx(KAPPA / (4. * 30e-9))
    # coupling junctions enter as (phi_r +- phi_q) / 2
    directions_ = sorted(tuple(s_.direction) for s_ in m_.sinusoids if 2 == len(s_.support()))
    assert directions_ == [(-.5, .5), (.5, .5)]
    w_ = quadratic_normal_modes(m_.kinetic, m_.quad_potential)
    assert 1. / math.sqrt(30e-9 * 20e-15) == pytest.approx(w_[1], rel=1e-12)


def test_transform_keeps_values():
    c_ = builtin_circuit("qubit_resonator")
    m_ = build_lagrangian(c_)
    t_ = standard_block_transform(c_)
    n_ = apply_linear_transform(m_, t_)
    rng_ = np.random.default_rng(3)
    x_ = rng_.uniform(-1., 1., size=(5, 2))
    xd_ = rng_.uniform(-1., 1., size=(5, 2))
    y_, yd_ = x_ @ t_.matrix.T, xd_ @ t_.matrix.T
    assert n_.evaluate(y_, yd_) == pytest.approx(m_.evaluate(x_, xd_), rel=1e-12)


def test_identity_transform_only_renames():
    m_ = build_lagrangian(builtin_circuit("qubit_resonator"))
    n_ = apply_linear_transform(m_, LinearTransform(np.eye(2), ("x", "y")))
    assert n_.labels == ("x", "y")
    assert n_.kinetic == m_.kinetic


def test_singular_transform():
    m_ = build_lagrangian(builtin_circuit("qubit_resonator"))
    with pytest.raises(SingularTransformError):
        apply_linear_transform(m_, LinearTransform(np.array([[1., 1.], [1., 1.]]), ("x", "y")))
    with pytest.raises(PreconditionError):
        apply_linear_transform(m_, LinearTransform(np.eye(3), ("x", "y", "z")))


@pytest.mark.parametrize("c_s", [0., 3.])
def test_two_blocks_elimination_coefficients(c_s):
    c_g, c = 5., 20.
    reduced_, transforms_ = reduce_circuit(builtin_circuit("two_blocks", {"C_g": c_g, "C": c, "C_s": c_s}))
    assert reduced_.labels == ("phi_q1", "phi_q2", "phi_r1", "phi_r2")
    assert transforms_[-1].labels[0] == "phi_*"
    k_ = reduced_.kinetic.matrix / KAPPA
    i_, j_ = reduced_.index("phi_r1"), reduced_.index("phi_r2")
    assert -k_[i_, j_] == pytest.approx(c_g ** 2 / (2. * (4. * c_g + c_s)) * FF, rel=1e-14)
    if 0 == c_s:
        assert -k_[i_, j_] == pytest.approx(c_g / 8. * FF, rel=1e-14)
    assert k_[i_, i_] == pytest.approx((c / 4. + c_g / 4. - c_g ** 2 / (2. * (4. * c_g + c_s))) * FF, rel=1e-12)
    # qubit variables never couple to the resonators through the kinetic energy
    assert np.abs(k_[:2, 2:]).max() <= 1e-14 * np.abs(k_).max()
    assert reduced_.metadata["eliminated"]["phi_*"] == pytest.approx(KAPPA * (4. * c_g + c_s) * FF / 2.)


def test_two_blocks_star_variable_decouples():
    c_ = builtin_circuit("two_blocks")
    m_ = apply_linear_transform(build_lagrangian(c_), standard_block_transform(c_))
    reduced_, t_ = cholesky_eliminate(m_, ["phi_c"])
    # phi_* carries only its own coefficient in the pulled-back form
    full_ = t_.matrix
    k_new_ = np.zeros((5, 5))
    k_new_[0, 0] = reduced_.metadata["eliminated"]["phi_*"]
    k_new_[1:, 1:] = reduced_.kinetic.matrix
    assert full_.T @ k_new_ @ full_ == pytest.approx(m_.kinetic.matrix, rel=1e-12, abs=1e-14 * KAPPA * FF)


def test_eliminating_a_potential_variable_fails():
    c_ = builtin_circuit("two_blocks")
    m_ = apply_linear_transform(build_lagrangian(c_), standard_block_transform(c_))
    with pytest.raises(PreconditionError, match="junction term|quadratic potential"):
        cholesky_eliminate(m_, ["phi_q1"])
    with pytest.raises(PreconditionError):
        cholesky_eliminate(m_, [])


def test_plaquette_reduction_on_lifted_coordinates():
    c_g = 5.
    c_ = builtin_circuit("plaquette", {"C_g": c_g})
    lifted_, lift_ = lifted_model(c_)
    assert 16 == lifted_.dimension
    assert lift_.shape == (16, 12)
    k_nodes_ = build_lagrangian(c_).kinetic.matrix
    assert lift_.T @ lifted_.kinetic.matrix @ lift_ == pytest.approx(k_nodes_, rel=1e-12, abs=1e-14 * KAPPA * FF)
    reduced_, transforms_ = reduce_circuit(c_)
    assert 12 == reduced_.dimension
    assert sorted(reduced_.metadata["eliminated"]) == ["phi_*_alpha", "phi_*_beta", "phi_*_delta", "phi_*_gamma"]
    k_ = reduced_.kinetic.matrix / KAPPA
    a_, b_ = reduced_.index("phi_r1alpha"), reduced_.index("phi_r2alpha")
    assert -k_[a_, b_] == pytest.approx(c_g / 8. * FF, rel=1e-12)
    # resonators of different connections stay uncoupled
    assert 0 == pytest.approx(k_[a_, reduced_.index("phi_r2beta")], abs=1e-12 * FF)
    check_ = check_reduction(build_lagrangian(c_), reduced_, transforms_, samples=8, seed=1)
    assert check_["kinetic_pullback_error"] < 1e-12
    assert check_["potential_error"] < 1e-10


def test_plaquette_square_standard_transform():
    t_ = standard_block_transform(builtin_circuit("plaquette"))
    assert t_.matrix.shape == (12, 12)
    assert "phi_c_alpha" in t_.labels


@pytest.mark.parametrize("name", ["qubit_resonator", "two_blocks", "junction_array_coupler"])
def test_reduction_check(name):
    c_ = builtin_circuit(name)
    reduced_, transforms_ = reduce_circuit(c_)
    check_ = check_reduction(build_lagrangian(c_), reduced_, transforms_, samples=16, seed=7)
    assert check_["kinetic_pullback_error"] < 1e-12
    assert check_["potential_error"] < 1e-10


def test_connection_blocks():
    blocks_ = connection_blocks(builtin_circuit("two_blocks", {"C_g": 5., "C": 20.}))
    b_ = blocks_["alpha"]
    assert b_.shape == (3, 3)
    assert b_[0, 0] == pytest.approx(20. * FF)
    assert b_[0, 1] == pytest.approx(5. * FF)
    assert b_[1, 1] == pytest.approx(12.5 * FF)
    assert b_[1, 2] == 0
    with pytest.raises(TopologyError):
        connection_blocks(builtin_circuit("qubit_resonator"))


def test_junction_array_direction_is_divided():
    m_ = build_lagrangian(builtin_circuit("junction_array_coupler", {"k": 3}))
    assert any(abs(x_) == pytest.approx(1. / 3.) for s_ in m_.sinusoids for x_ in s_.direction)
    offsets_ = {round(s_.offset, 12) for s_ in m_.sinusoids}
    assert round(TWO_PI - math.pi / 2., 12) in offsets_


def test_missing_kinetic_term():
    doc_ = """{"nodes": ["a", "b", "g"], "ground": "g", "branches": [
        {"kind": "C", "nodes": ["a", "g"], "value": 1.0, "unit": "fF"},
        {"kind": "L", "nodes": ["a", "b"], "value": 1.0, "unit": "nH"},
        {"kind": "L", "nodes": ["b", "g"], "value": 1.0, "unit": "nH"}]}"""
    with pytest.raises(IndefiniteFormError, match="no kinetic term for b"):
        build_lagrangian(parse_netlist(doc_))


def test_standard_transform_needs_topology():
    doc_ = """{"nodes": ["a", "g"], "ground": "g", "branches": [
        {"kind": "C", "nodes": ["a", "g"], "value": 1.0, "unit": "fF"}]}"""
    with pytest.raises(TopologyError):
        standard_block_transform(parse_netlist(doc_))


def test_model_dump():
    d_ = model_to_dict(reduce_circuit(builtin_circuit("two_blocks"))[0])
    assert d_["labels"] == ["phi_q1", "phi_q2", "phi_r1", "phi_r2"]
    assert "phi_*" in d_["metadata"]["eliminated"]
    assert 4 == len(d_["kinetic_capacitance"])
