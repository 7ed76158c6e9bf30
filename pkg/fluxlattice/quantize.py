"""
Hamiltonians of reduced circuit models

legendre_transform turns phidot^T K phidot into n^T Q n with Q = K^-1 / 4, so a single
qubit variable reads 8 E_C n^2 with E_C = Q_qq / 8 (canonical units, rad/s)
"""
import logging
import math
import typing

import numpy as np
import scipy.linalg as sla
from scipy import constants

from .errors import IndefiniteFormError, PreconditionError, TruncationError, TwoLevelError, UnboundPotentialError
from .fock import (PAD, QUBIT, RESONATOR, FockOperator, Mode, OneModeHamiltonian, charge_operator, check_hermitian,
                   destroy, embed, number, phase_function, phase_operator, zero_point_phase)
from .lagrangian import LagrangianModel, QuadraticForm, SinusoidTerm, check_invertible
from .netlist import TWO_PI
from .reports import Report
from .spectra import SIGMA_X, Coupling, ResonatorCoupling, SpinBosonModel

_lg = logging.getLogger("fluxlattice")

FEMTO = 1e-15
NANO = 1e-9


class HamiltonianModel(typing.NamedTuple):
    labels: typing.Tuple[str, ...]
    charge_form: QuadraticForm
    quad_potential: QuadraticForm
    sinusoids: typing.Tuple[SinusoidTerm, ...]
    metadata: typing.Optional[dict] = None

    @property
    def dimension(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise PreconditionError("unknown variable {} - model has {}".format(label, self.labels))

    @property
    def qubit_labels(self) -> typing.List[str]:
        """block qubits of a builtin circuit, else every variable carrying its own junction"""
        blocks_ = (self.metadata or {}).get("blocks")
        if blocks_:
            return [l_ for l_ in ("phi_" + b_["qubit"] for b_ in blocks_) if l_ in self.labels]
        return [l_ for i_, l_ in enumerate(self.labels)
                if any([i_] == s_.support() for s_ in self.sinusoids)]

    @property
    def resonator_labels(self) -> typing.List[str]:
        qubits_ = self.qubit_labels
        return [l_ for l_ in self.labels if l_ not in qubits_]

    def own_sinusoids(self, i: int) -> typing.List[SinusoidTerm]:
        return [s_ for s_ in self.sinusoids if [i] == s_.support()]


def legendre_transform(m: LagrangianModel) -> HamiltonianModel:
    if not m.kinetic.is_positive_definite():
        raise IndefiniteFormError("kinetic form over {} is not positive definite".format(m.labels))
    k_ = m.kinetic.matrix
    try:
        check_invertible(k_ / np.max(np.abs(k_)))
    except Exception as e_:
        raise IndefiniteFormError("kinetic form cannot be inverted: {}".format(e_))
    q_ = sla.inv(k_) / 4.
    return HamiltonianModel(labels=m.labels, charge_form=QuadraticForm((q_ + q_.T) / 2.),
                            quad_potential=m.quad_potential, sinusoids=m.sinusoids, metadata=m.metadata)


def one_mode_hamiltonian(h: HamiltonianModel, label: str) -> OneModeHamiltonian:
    """Hamiltonian of one variable with every other variable clamped to zero"""
    i_ = h.index(label)
    sinusoids_ = [(s_.amplitude, s_.direction[i_], s_.offset) for s_ in h.sinusoids if s_.direction[i_] != 0]
    return OneModeHamiltonian(h.charge_form.matrix[i_, i_], h.quad_potential.matrix[i_, i_], sinusoids_, label)


def transmon_parameters(e_jq: float, e_l_tot: float, e_c: float) -> dict:
    """
    gap and anharmonicity of 8 E_C n^2 + (E_L,tot / 4) phi^2 - E_Jq cos(phi)
    with r = E_C / E*: delta = -2 E_C E_Jq / E* + r^3/2 (2 E_Jq - 17/4 E_Jq^2 / E*), the second term from
    the quartic at second order and the sextic at first order; anharmonicity_leading keeps the first term
    """
    e_star_ = e_jq + e_l_tot / 2.
    if e_star_ <= 0:
        raise UnboundPotentialError("E*_Jq = {} is not positive".format(e_star_))
    r_ = e_c / e_star_
    leading_ = -2. * e_c * e_jq / e_star_
    return {"E_C": e_c, "E_Jq": e_jq, "E_L_tot": e_l_tot, "E_star": e_star_,
            "gap": 4. * math.sqrt(e_star_ * e_c), "anharmonicity_leading": leading_,
            "anharmonicity": leading_ + r_ ** 1.5 * (2. * e_jq - 4.25 * e_jq ** 2 / e_star_)}


def longitudinal_coupling_estimate(e_j: float, k: int, e_c: float, e_star: float, phi_zpf_r: float,
                                   e_jq: typing.Optional[float] = None) -> float:
    """
    g of the two coupling junctions -2 E_J cos(phi_q/2k) sin(phi_r/2k), first order in phi_r:
    E_J / (4 k^3) sqrt(E_C / E*) phi_zpf,r [1 + sqrt(E_C / E*) (E_Jq / E* - 1 / 4k^2)]
    the bracket dresses the qubit states with the quartic of its cosine and keeps the next term of
    cos(phi_q/2k); without e_jq only the leading order is returned
    """
    r_ = e_c / e_star
    leading_ = e_j / (4. * k ** 3) * math.sqrt(r_) * phi_zpf_r
    if e_jq is None:
        return leading_
    return leading_ * (1. + math.sqrt(r_) * (e_jq / e_star - 1. / (4. * k ** 2)))


def _param(params: dict, key: str, index: int = 0) -> float:
    v_ = params[key]
    if isinstance(v_, (list, tuple)):
        return float(v_[index])
    return float(v_)


class DerivedParameters(Report):
    """closed-form circuit parameters, canonical units with GHz copies"""
    def to_rows(self):
        header_ = ["item", "name", "value"]
        rows_ = []
        for group_ in ("qubits", "resonators", "couplings", "connections"):
            for item_, values_ in sorted(self.get(group_, {}).items()):
                for k_, v_ in sorted(values_.items()):
                    rows_.append(["{}:{}".format(group_, item_), k_, v_])
        return header_, rows_


def _ghz(values: dict, keys: typing.Iterable[str]) -> dict:
    out_ = dict(values)
    for k_ in keys:
        if out_.get(k_) is not None:
            out_[k_ + "_GHz"] = out_[k_] / (TWO_PI * 1e9)
    return out_


def derived_parameters(h: HamiltonianModel, metadata: typing.Optional[dict] = None, basis: int = 80
                       ) -> DerivedParameters:
    """
    per qubit E_C, E_Jq, E*_Jq, gap and anharmonicity; per resonator omega_r;
    per qubit-resonator pair g_1 (closed form and two-level projection); per connection g_c
    closed forms in terms of the circuit elements are added for builtin circuits without shunts
    """
    meta_ = dict(h.metadata or {})
    meta_.update(metadata or {})
    topology_ = meta_.get("topology")
    params_ = meta_.get("params") or {}
    q_ = h.charge_form.matrix
    v_ = h.quad_potential.matrix
    qubits_, resonators_ = {}, {}
    for l_ in h.qubit_labels:
        i_ = h.index(l_)
        e_jq_ = -sum(s_.amplitude for s_ in h.own_sinusoids(i_))
        p_ = transmon_parameters(e_jq_, 4. * v_[i_, i_], q_[i_, i_] / 8.)
        p_["C_tot"] = constants.e ** 2 / (2. * constants.hbar * p_["E_C"])
        qubits_[l_] = _ghz(p_, ("E_C", "E_Jq", "E_L_tot", "E_star", "gap", "anharmonicity",
                                "anharmonicity_leading"))
    for l_ in h.resonator_labels:
        i_ = h.index(l_)
        if v_[i_, i_] <= 0:
            raise UnboundPotentialError("resonator {} has no inductive potential".format(l_))
        resonators_[l_] = {"omega": 2. * math.sqrt(q_[i_, i_] * v_[i_, i_]),
                           "phi_zpf": zero_point_phase(q_[i_, i_], v_[i_, i_])}
    couplings_ = {}
    for ql_ in qubits_:
        qi_ = h.index(ql_)
        for rl_ in resonators_:
            ri_ = h.index(rl_)
            terms_ = [s_ for s_ in h.sinusoids if s_.direction[qi_] != 0 and s_.direction[ri_] != 0]
            if not terms_:
                continue
            e_j_ = max(abs(s_.amplitude) for s_ in terms_)
            k_ = int(round(1. / (2. * abs(terms_[0].direction[qi_]))))
            qp_ = qubits_[ql_]
            couplings_["{}-{}".format(ql_, rl_)] = {
                "g1": longitudinal_coupling_estimate(e_j_, k_, qp_["E_C"], qp_["E_star"],
                                                     resonators_[rl_]["phi_zpf"], qp_["E_Jq"]),
                "g1_leading": longitudinal_coupling_estimate(e_j_, k_, qp_["E_C"], qp_["E_star"],
                                                             resonators_[rl_]["phi_zpf"])}
    connections_ = {}
    labels_ = list(resonators_)
    for a_ in range(len(labels_)):
        for b_ in range(a_ + 1, len(labels_)):
            i_, j_ = h.index(labels_[a_]), h.index(labels_[b_])
            if q_[i_, j_] == 0:
                continue
            connections_["{}-{}".format(labels_[a_], labels_[b_])] = {
                "g_c": q_[i_, j_] * (v_[i_, i_] * v_[j_, j_] / (q_[i_, i_] * q_[j_, j_])) ** .25}
    if qubits_:
        try:
            model_, residual_ = two_level_reduce(h, basis=basis, anharmonicity_factor=0.)
        except TwoLevelError as e_:
            _lg.info("no two-level couplings: %s", e_)
        else:
            for c_ in model_.couplings:
                key_ = "{}-{}".format(model_.qubits[c_.qubit], model_.resonators[c_.resonator])
                if key_ in couplings_:
                    couplings_[key_].update(g1_numeric=c_.g, transverse=c_.g_x, epsilon=c_.epsilon)
            _lg.debug("two-level residuals %s", residual_["transverse_residual"])
    _closed_forms(topology_, params_, resonators_, couplings_, connections_, qubits_)
    out_ = DerivedParameters(
        topology=topology_,
        qubits=qubits_,
        resonators={k_: _ghz(x_, ("omega", "omega_closed")) for k_, x_ in resonators_.items()},
        couplings={k_: _ghz(x_, ("g1", "g1_leading", "g1_numeric", "g1_closed")) for k_, x_ in couplings_.items()},
        connections={k_: _ghz(x_, ("g_c", "g_c_closed")) for k_, x_ in connections_.items()})
    for l_, p_ in qubits_.items():
        if not (p_["gap"] > 0 and math.isfinite(p_["anharmonicity"])):
            raise UnboundPotentialError("qubit {} has gap {} and anharmonicity {}".format(
                l_, p_["gap"], p_["anharmonicity"]))
    return out_


def _closed_forms(topology: typing.Optional[str], params: dict, resonators: dict, couplings: dict,
                  connections: dict, qubits: dict) -> None:
    """element-level expressions for the builtin circuits without shunt capacitors"""
    if topology in ("qubit_resonator", "qubit_n_resonators"):
        for j_, (l_, r_) in enumerate(sorted(resonators.items())):
            c_ = _param(params, "C", j_) * FEMTO
            ind_ = _param(params, "L", j_) * NANO
            r_["omega_closed"] = 1. / math.sqrt(ind_ * c_)
        return
    if "two_blocks" != topology or _param(params, "C_s") > 0:
        return
    c1_, c2_ = _param(params, "C", 0) * FEMTO, _param(params, "C", 1) * FEMTO
    l1_, l2_ = _param(params, "L", 0) * NANO, _param(params, "L", 1) * NANO
    cg_ = _param(params, "C_g") * FEMTO
    d_ = 2. * c1_ * c2_ + cg_ * (c1_ + c2_)
    x_ = (2. * c1_ + cg_) * (2. * c2_ + cg_) * l1_ * l2_
    for label_, own_, other_, ind_ in (("phi_r1", c1_, c2_, l1_), ("phi_r2", c2_, c1_, l2_)):
        if label_ not in resonators:
            continue
        resonators[label_]["omega_closed"] = math.sqrt((2. * other_ + cg_) / (d_ * ind_))
        y_ = (2. * other_ + cg_) * ind_ / d_
        qubit_ = "phi_q" + label_[-1]
        key_ = "{}-{}".format(qubit_, label_)
        if key_ in couplings and qubit_ in qubits:
            qp_ = qubits[qubit_]
            e_j_ = _param(params, "E_J", int(label_[-1]) - 1) * TWO_PI * 1e9
            couplings[key_]["g1_closed"] = (e_j_ / 2. * constants.e / math.sqrt(constants.hbar) * y_ ** .25
                                            * math.sqrt(qp_["E_C"] / qp_["E_star"]))
    if "phi_r1-phi_r2" in connections:
        connections["phi_r1-phi_r2"]["g_c_closed"] = cg_ / (2. * math.sqrt(d_) * x_ ** .25)


def _qubit_local(one: OneModeHamiltonian, dim: int, basis: int, tolerance: float) -> typing.Tuple[dict, np.ndarray]:
    e_, vecs_ = one.eigensystem(basis=basis, tolerance=tolerance, levels=dim)
    z_ = one.phi_zpf
    big_ = basis + PAD
    phi_ = phase_operator(big_, z_)[:basis, :basis]
    n_ = charge_operator(big_, z_)[:basis, :basis]
    sigma_z_ = np.diag([-1.] + [1.] * (dim - 1))
    local_ = {"H": np.diag(e_), "phi": vecs_.T @ phi_ @ vecs_, "n": vecs_.T @ n_ @ vecs_,
              "sin": vecs_.T @ phase_function(basis, z_, np.sin) @ vecs_,
              "sigma_z": sigma_z_, "number": number(dim)}
    if 2 == dim:
        local_["sigma_x"] = SIGMA_X
    return local_, vecs_


def fock_hamiltonian(h: HamiltonianModel, truncation: typing.Optional[typing.Mapping[str, int]] = None,
                     linearize_coupling: bool = False, qubit_levels: int = 12, resonator_levels: int = 10,
                     qubit_basis: int = 80, truncation_tolerance: float = 1e-6,
                     hermiticity_tolerance: float = 1e-12) -> FockOperator:
    """
    truncated tensor-product Hamiltonian
    qubit modes are diagonalized in a qubit_basis harmonic basis and kept on their lowest levels,
    resonators use a, a^dag with the oscillator length of their own quadratic part;
    multi-mode junctions enter exactly, or to first order in the resonator phases when
    linearize_coupling is set (metadata["residual_bound"] bounds the dropped part)
    """
    truncation = dict(truncation or {})
    unknown_ = set(truncation) - set(h.labels)
    if unknown_:
        raise PreconditionError("truncation names unknown variables {}".format(sorted(unknown_)))
    q_ = h.charge_form.matrix
    v_ = h.quad_potential.matrix
    qubits_ = set(h.qubit_labels)
    modes_, functions_ = [], []
    for i_, l_ in enumerate(h.labels):
        if l_ in qubits_:
            dim_ = int(truncation.get(l_, qubit_levels))
            if dim_ < 1:
                raise PreconditionError("mode {} needs at least one level".format(l_))
            one_ = OneModeHamiltonian(q_[i_, i_], v_[i_, i_],
                                      [(s_.amplitude, s_.direction[i_], s_.offset) for s_ in h.own_sinusoids(i_)],
                                      l_)
            local_, vecs_ = _qubit_local(one_, dim_, qubit_basis, truncation_tolerance)
            z_ = one_.phi_zpf
            e_ = local_["H"].diagonal()
            modes_.append(Mode(l_, QUBIT, dim_, float(e_[1] - e_[0]) if dim_ > 1 else 0., z_, local_))
            functions_.append(lambda d_, vv_=vecs_, zz_=z_: vv_.T @ phase_function(
                qubit_basis, zz_, lambda w_: np.exp(1j * d_ * w_)) @ vv_)
        else:
            dim_ = int(truncation.get(l_, resonator_levels))
            if dim_ < 1:
                raise PreconditionError("mode {} needs at least one level".format(l_))
            if v_[i_, i_] <= 0:
                raise UnboundPotentialError("mode {} has no confining quadratic potential".format(l_))
            z_ = zero_point_phase(q_[i_, i_], v_[i_, i_])
            w_ = 2. * math.sqrt(q_[i_, i_] * v_[i_, i_])
            a_ = destroy(dim_)
            local_ = {"H": w_ * (number(dim_) + .5 * np.eye(dim_)), "a": a_, "number": number(dim_),
                      "x": a_ + a_.T, "phi": z_ * (a_ + a_.T), "n": charge_operator(dim_, z_)}
            modes_.append(Mode(l_, RESONATOR, dim_, w_, z_, local_))
            functions_.append(lambda d_, nn_=dim_, zz_=z_: phase_function(nn_, zz_, lambda x_: np.exp(1j * d_ * x_)))
    dims_ = [m_.dim for m_ in modes_]
    n_ = len(modes_)
    h_ = sum(embed(dims_, {i_: m_.local["H"]}) for i_, m_ in enumerate(modes_)).astype(complex)
    for i_ in range(n_):
        for j_ in range(i_ + 1, n_):
            if q_[i_, j_] != 0:
                h_ += 2. * q_[i_, j_] * embed(dims_, {i_: modes_[i_].local["n"], j_: modes_[j_].local["n"]})
            if v_[i_, j_] != 0:
                h_ += 2. * v_[i_, j_] * embed(dims_, {i_: modes_[i_].local["phi"], j_: modes_[j_].local["phi"]})
    residual_ = 0.
    for s_ in h.sinusoids:
        support_ = s_.support()
        if len(support_) < 2:
            if support_ and h.labels[support_[0]] not in qubits_:
                # a junction on a resonator variable alone
                i_ = support_[0]
                f_ = functions_[i_](s_.direction[i_])
                m_ = s_.amplitude * np.exp(1j * s_.offset) * embed(dims_, {i_: f_})
                h_ += (m_ + m_.conj().T) / 2.
            continue
        sq_ = [i_ for i_ in support_ if h.labels[i_] in qubits_]
        sr_ = [i_ for i_ in support_ if h.labels[i_] not in qubits_]
        if linearize_coupling and sq_ and sr_:
            e_ = np.exp(1j * s_.offset) * embed(dims_, {i_: functions_[i_](s_.direction[i_]) for i_ in sq_})
            cos_ = (e_ + e_.conj().T) / 2.
            sin_ = (e_ - e_.conj().T) / 2j
            lin_ = sum(s_.direction[i_] * embed(dims_, {i_: modes_[i_].local["phi"]}) for i_ in sr_)
            h_ += s_.amplitude * (cos_ - sin_ @ lin_)
            spread_ = sum(abs(s_.direction[i_]) * modes_[i_].phi_zpf * math.sqrt(4. * modes_[i_].dim + 2.)
                          for i_ in sr_)
            residual_ += abs(s_.amplitude) * spread_ ** 2 / 2.
        else:
            m_ = s_.amplitude * np.exp(1j * s_.offset) * embed(
                dims_, {i_: functions_[i_](s_.direction[i_]) for i_ in support_})
            h_ += (m_ + m_.conj().T) / 2.
    check_hermitian(h_, hermiticity_tolerance)
    h_ = (h_ + h_.conj().T) / 2.
    if np.max(np.abs(h_.imag)) == 0:
        h_ = h_.real
    junctions_ = {l_: -sum(s_.amplitude for s_ in h.own_sinusoids(h.index(l_))) for l_ in qubits_}
    op_ = FockOperator(h_, modes_, metadata={"source": h, "linearized": bool(linearize_coupling),
                                             "residual_bound": residual_, "junction_energies": junctions_})
    op_.check_truncation(truncation_tolerance)
    _lg.debug("fock hamiltonian over %s with dims %s, residual bound %.3g", h.labels, dims_, residual_)
    return op_


class TruncationStability(Report):
    def to_rows(self):
        header_ = ["mode", "dimension", "raised", "change"]
        rows_ = [[l_, self["dims"][l_], self["dims"][l_] + self["increase"], self["changes"][l_]]
                 for l_ in sorted(self["changes"])]
        return header_, rows_


def truncation_stability(h: HamiltonianModel, truncation: typing.Optional[typing.Mapping[str, int]] = None,
                         increase: int = 5, levels: int = 4, tolerance: float = 1e-8, **kwargs
                         ) -> TruncationStability:
    """
    relative change of the lowest eigenvalues when one mode at a time keeps `increase` more levels
    keyword arguments are passed on to fock_hamiltonian
    :raises TruncationError: some change above tolerance
    """
    if increase < 1 or levels < 1:
        raise PreconditionError("increase and levels must be positive, got {} and {}".format(increase, levels))
    base_ = fock_hamiltonian(h, truncation, **kwargs)
    dims_ = dict(zip(base_.labels, base_.dims))
    k_ = min(levels, base_.dimension)

    def lowest(op_: FockOperator) -> np.ndarray:
        return sla.eigh(op_.matrix, eigvals_only=True, subset_by_index=[0, k_ - 1])

    e0_ = lowest(base_)
    scale_ = max(float(np.max(np.abs(e0_))), 1e-300)
    changes_ = {}
    for l_ in base_.labels:
        raised_ = dict(dims_)
        raised_[l_] += increase
        changes_[l_] = float(np.max(np.abs(lowest(fock_hamiltonian(h, raised_, **kwargs)) - e0_))) / scale_
        _lg.debug("raising %s to %d levels moves the lowest %d levels by %.3g", l_, raised_[l_], k_, changes_[l_])
    worst_ = max(changes_, key=changes_.get)
    report_ = TruncationStability(dims=dims_, increase=increase, energies=list(e0_), changes=changes_,
                                  worst=changes_[worst_])
    if changes_[worst_] > tolerance:
        raise TruncationError("raising {} by {} levels moves the lowest {} levels by {:.3g} > {:.3g}".format(
            worst_, increase, k_, changes_[worst_], tolerance))
    return report_


def two_level_reduce(h: typing.Union[HamiltonianModel, FockOperator],
                     qubits: typing.Optional[typing.Sequence[str]] = None,
                     basis: int = 80, anharmonicity_factor: float = 10., tolerance: float = 1e-6
                     ) -> typing.Tuple[SpinBosonModel, Report]:
    """
    project every qubit onto its two lowest levels and linearize its junction couplings in the
    resonator phases: f_q(phi_q) phi_r -> [f_bar + g_z sigma_z + T sigma_x] phi_zpf,r (a + a^dag)
    with L = (<0|f|0> - <1|f|1>)/2 = -g_z and T = <0|f|1> reported as residual
    :raises TwoLevelError: |anharmonicity| not above anharmonicity_factor x the largest coupling
    """
    if isinstance(h, FockOperator):
        if "source" not in h.metadata:
            raise PreconditionError("operator carries no circuit model to reduce")
        h = h.metadata["source"]
    q_ = h.charge_form.matrix
    v_ = h.quad_potential.matrix
    qubit_labels_ = list(qubits) if qubits is not None else h.qubit_labels
    resonator_labels_ = [l_ for l_ in h.labels if l_ not in qubit_labels_]
    if not qubit_labels_:
        raise TwoLevelError("model has no qubit variable")
    delta_, omega_, zpf_, details_, couplings_ = [], [], [], [], []
    ones_ = {}
    for l_ in qubit_labels_:
        one_ = one_mode_hamiltonian(h, l_)
        ones_[l_] = one_
        e_ = one_.levels(3, basis)
        delta_.append(float(e_[1] - e_[0]))
    for l_ in resonator_labels_:
        i_ = h.index(l_)
        if v_[i_, i_] <= 0:
            raise UnboundPotentialError("resonator {} has no confining quadratic potential".format(l_))
        omega_.append(2. * math.sqrt(q_[i_, i_] * v_[i_, i_]))
        zpf_.append(zero_point_phase(q_[i_, i_], v_[i_, i_]))
    charge_cross_ = 0.
    skipped_ = 0
    for a_, ql_ in enumerate(qubit_labels_):
        qi_ = h.index(ql_)
        for b_, rl_ in enumerate(resonator_labels_):
            ri_ = h.index(rl_)
            terms_ = [s_ for s_ in h.sinusoids if s_.direction[qi_] != 0 and s_.direction[ri_] != 0]
            if any(set(s_.support()) - {qi_, ri_} for s_ in terms_):
                skipped_ += 1
                terms_ = [s_ for s_ in terms_ if not set(s_.support()) - {qi_, ri_}]
            charge_cross_ = max(charge_cross_, abs(q_[qi_, ri_]))
            if not terms_ and 0 == v_[qi_, ri_]:
                continue

            def factor(x_, terms=tuple(terms_), vq=v_[qi_, ri_], qi=qi_, ri=ri_):
                f_ = 2. * vq * x_
                for s_ in terms:
                    f_ = f_ - s_.amplitude * s_.direction[ri] * np.sin(s_.direction[qi] * x_ + s_.offset)
                return f_

            f_ = ones_[ql_].operator(factor, levels=2, basis=basis)
            g_z_ = (f_[1, 1] - f_[0, 0]) / 2.
            mean_ = (f_[1, 1] + f_[0, 0]) / 2.
            couplings_.append(Coupling(a_, b_, g=float(g_z_ * zpf_[b_]), g_x=float(f_[0, 1] * zpf_[b_]),
                                       epsilon=float(mean_ * zpf_[b_])))
            details_.append({"qubit": ql_, "resonator": rl_, "L": float(-g_z_), "T": float(abs(f_[0, 1])),
                             "phi_zpf": zpf_[b_]})
    resonator_couplings_ = []
    position_cross_ = 0.
    for a_ in range(len(resonator_labels_)):
        for b_ in range(a_ + 1, len(resonator_labels_)):
            i_, j_ = h.index(resonator_labels_[a_]), h.index(resonator_labels_[b_])
            position_cross_ = max(position_cross_, abs(v_[i_, j_]))
            if q_[i_, j_] != 0:
                g_c_ = q_[i_, j_] * (v_[i_, i_] * v_[j_, j_] / (q_[i_, i_] * q_[j_, j_])) ** .25
                resonator_couplings_.append(ResonatorCoupling(a_, b_, float(g_c_)))
    if charge_cross_ > 0 or position_cross_ > 0 or skipped_:
        _lg.warning("two-level reduction drops qubit-resonator charge terms (%.3g), resonator position terms "
                    "(%.3g) and %d multi-mode junction terms", charge_cross_, position_cross_, skipped_)
    anharm_ = {}
    for a_, ql_ in enumerate(qubit_labels_):
        delta_q_ = ones_[ql_].anharmonicity(basis)
        largest_ = max([abs(c_.g) for c_ in couplings_ if c_.qubit == a_]
                       + [abs(c_.g_x) for c_ in couplings_ if c_.qubit == a_] + [0.])
        anharm_[ql_] = delta_q_
        if abs(delta_q_) <= 1e-9 * delta_[a_] or abs(delta_q_) <= anharmonicity_factor * largest_:
            raise TwoLevelError("two-level approximation invalid for {}: |anharmonicity| {:.4g} vs largest "
                                "coupling {:.4g} (factor {})".format(ql_, abs(delta_q_), largest_,
                                                                     anharmonicity_factor))
    model_ = SpinBosonModel(qubits=tuple(qubit_labels_), resonators=tuple(resonator_labels_), delta=tuple(delta_),
                            omega=tuple(omega_), couplings=tuple(couplings_),
                            resonator_couplings=tuple(resonator_couplings_)).check()
    residual_ = Report(couplings=details_, anharmonicity=anharm_,
                       transverse_residual=max([d_["T"] for d_ in details_] + [0.]),
                       charge_cross=charge_cross_, position_cross=position_cross_, skipped_terms=skipped_)
    return model_, residual_
