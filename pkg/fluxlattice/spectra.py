"""
spin-boson models, spectra with adiabatic labels, coupling parity and the
Schrieffer-Wolff / Lang-Firsov frames

qubits are two-level with basis (g, e) and sigma_z = diag(-1, +1); resonators are
truncated oscillators. the spin-boson Hamiltonian is

H = sum_i Delta_i/2 sigma_z,i + sum_r omega_r a_r^dag a_r
    + sum_(i,r) [(g sigma_z,i + epsilon) + g_x sigma_x,i] (a_r + a_r^dag)
    - sum_(r,s) g_c (a_r^dag - a_r)(a_s^dag - a_s)
"""
import logging
import math
import typing

import numpy as np
import scipy.linalg as sla
import toolz
from scipy.optimize import linear_sum_assignment

from .errors import (InstabilityError, LabelAmbiguityError, PreconditionError, ResonanceError,
                     TruncationError)
from .fock import QUBIT, RESONATOR, FockOperator, Mode, OneModeHamiltonian, destroy, embed, number
from .netlist import CONNECTION_NAMES
from .reports import Report

_lg = logging.getLogger("fluxlattice")

LONGITUDINAL = "longitudinal"
TRANSVERSE = "transverse"
MIXED = "mixed"
UNCOUPLED = "uncoupled"
# relative size below which an amplitude counts as absent when tagging parity
PARITY_THRESHOLD = 1e-9

SIGMA_Z = np.diag([-1., 1.])
SIGMA_X = np.array([[0., 1.], [1., 0.]])


def _parity(longitudinal: float, transverse: float) -> str:
    scale_ = max(abs(longitudinal), abs(transverse))
    if scale_ < 1e-300:
        return UNCOUPLED
    if abs(transverse) <= PARITY_THRESHOLD * scale_:
        return LONGITUDINAL
    if abs(longitudinal) <= PARITY_THRESHOLD * scale_:
        return TRANSVERSE
    return MIXED


class Coupling(typing.NamedTuple):
    """qubit-resonator term [(g sigma_z + epsilon) + g_x sigma_x](a + a^dag)"""
    qubit: int
    resonator: int
    g: float = 0.
    g_x: float = 0.
    epsilon: float = 0.

    @property
    def parity(self) -> str:
        return _parity(self.g, self.g_x)


class ResonatorCoupling(typing.NamedTuple):
    first: int
    second: int
    g_c: float


class SpinBosonModel(typing.NamedTuple):
    qubits: typing.Tuple[str, ...]
    resonators: typing.Tuple[str, ...]
    delta: typing.Tuple[float, ...]
    omega: typing.Tuple[float, ...]
    couplings: typing.Tuple[Coupling, ...] = ()
    resonator_couplings: typing.Tuple[ResonatorCoupling, ...] = ()

    def check(self) -> "SpinBosonModel":
        if len(self.delta) != len(self.qubits) or len(self.omega) != len(self.resonators):
            raise PreconditionError("spin-boson model has mismatched parameter lists")
        for r_, w_ in zip(self.resonators, self.omega):
            if not w_ > 0:
                raise PreconditionError("resonator {} has non-positive frequency {}".format(r_, w_))
        return self

    def parity_tags(self) -> typing.Dict[typing.Tuple[str, str], str]:
        return {(self.qubits[c_.qubit], self.resonators[c_.resonator]): c_.parity for c_ in self.couplings}

    @property
    def is_longitudinal(self) -> bool:
        return all(c_.parity in (LONGITUDINAL, UNCOUPLED) for c_ in self.couplings)

    def resonators_of(self, qubit: int) -> typing.List[int]:
        return sorted({c_.resonator for c_ in self.couplings if c_.qubit == qubit})

    def qubit_index(self, label: typing.Union[str, int]) -> int:
        if isinstance(label, int) and 0 <= label < len(self.qubits):
            return label
        for l_ in (label, "phi_{}".format(label)):
            if l_ in self.qubits:
                return self.qubits.index(l_)
        raise PreconditionError("unknown qubit {} - model has {}".format(label, self.qubits))

    def restrict(self, qubits: typing.Sequence[int], resonators: typing.Sequence[int]) -> "SpinBosonModel":
        """sub-model over the given qubits and resonators, dropping every term that leaves it"""
        qmap_ = {q_: i_ for i_, q_ in enumerate(qubits)}
        rmap_ = {r_: i_ for i_, r_ in enumerate(resonators)}
        return SpinBosonModel(
            qubits=tuple(self.qubits[q_] for q_ in qubits),
            resonators=tuple(self.resonators[r_] for r_ in resonators),
            delta=tuple(self.delta[q_] for q_ in qubits),
            omega=tuple(self.omega[r_] for r_ in resonators),
            couplings=tuple(c_._replace(qubit=qmap_[c_.qubit], resonator=rmap_[c_.resonator])
                            for c_ in self.couplings if c_.qubit in qmap_ and c_.resonator in rmap_),
            resonator_couplings=tuple(k_._replace(first=rmap_[k_.first], second=rmap_[k_.second])
                                      for k_ in self.resonator_couplings
                                      if k_.first in rmap_ and k_.second in rmap_))

    def scaled(self, factor: float) -> "SpinBosonModel":
        """every frequency and coupling multiplied by factor (change of time unit)"""
        f_ = float(factor)
        return self._replace(
            delta=tuple(f_ * x_ for x_ in self.delta), omega=tuple(f_ * x_ for x_ in self.omega),
            couplings=tuple(c_._replace(g=f_ * c_.g, g_x=f_ * c_.g_x, epsilon=f_ * c_.epsilon)
                            for c_ in self.couplings),
            resonator_couplings=tuple(k_._replace(g_c=f_ * k_.g_c) for k_ in self.resonator_couplings))

    def to_dict(self) -> dict:
        return {
            "qubits": list(self.qubits),
            "resonators": list(self.resonators),
            "delta": list(self.delta),
            "omega": list(self.omega),
            "couplings": [{"qubit": self.qubits[c_.qubit], "resonator": self.resonators[c_.resonator],
                           "g": c_.g, "g_x": c_.g_x, "epsilon": c_.epsilon, "parity": c_.parity}
                          for c_ in self.couplings],
            "resonator_couplings": [{"first": self.resonators[k_.first], "second": self.resonators[k_.second],
                                     "g_c": k_.g_c} for k_ in self.resonator_couplings],
            }


def rabi_model(delta: float, omega: float, g: float) -> SpinBosonModel:
    return SpinBosonModel(("q1",), ("r1",), (float(delta),), (float(omega),), (Coupling(0, 0, g_x=float(g)),))


def longitudinal_model(delta: float, omega: float, g: float, epsilon: float = 0.) -> SpinBosonModel:
    return SpinBosonModel(("q1",), ("r1",), (float(delta),), (float(omega),),
                          (Coupling(0, 0, g=float(g), epsilon=float(epsilon)),))


def _listed(value, count: int, name: str) -> typing.List[float]:
    if isinstance(value, (list, tuple, np.ndarray)):
        if len(value) != count:
            raise PreconditionError("{} needs {} values, got {}".format(name, count, len(value)))
        return [float(v_) for v_ in value]
    return [float(value)] * count


def grid_spin_boson(blocks: int, delta, omega, g, g_c=0., epsilon=0.) -> SpinBosonModel:
    """
    spin-boson parameters of a single block (1), two connected blocks (2) or the plaquette ring (4)
    per-item values may be given as sequences: delta per qubit, omega and epsilon per resonator
    (resonators ordered by connection), g per qubit-resonator coupling in resonator order, g_c per connection
    """
    if 1 == blocks:
        qubits_ = ("q1",)
        resonators_ = ("r1",)
        arms_ = [(0, 0)]
        pairs_ = []
    elif 2 == blocks:
        qubits_ = ("q1", "q2")
        resonators_ = ("r1", "r2")
        arms_ = [(0, 0), (1, 1)]
        pairs_ = [(0, 1)]
    elif 4 == blocks:
        qubits_ = tuple("q{}".format(i_ + 1) for i_ in range(4))
        resonators_, arms_, pairs_ = [], [], []
        for j_, name_ in enumerate(CONNECTION_NAMES):
            for blk_ in (j_, (j_ + 1) % 4):
                arms_.append((blk_, len(resonators_)))
                resonators_.append("r{}{}".format(blk_ + 1, name_))
            pairs_.append((len(resonators_) - 2, len(resonators_) - 1))
        resonators_ = tuple(resonators_)
    else:
        raise PreconditionError("grid models exist for 1, 2 or 4 blocks, not {}".format(blocks))
    delta_ = _listed(delta, len(qubits_), "delta")
    omega_ = _listed(omega, len(resonators_), "omega")
    g_ = _listed(g, len(arms_), "g")
    eps_ = _listed(epsilon, len(arms_), "epsilon")
    gc_ = _listed(g_c, len(pairs_), "g_c")
    return SpinBosonModel(
        qubits=qubits_, resonators=resonators_, delta=tuple(delta_), omega=tuple(omega_),
        couplings=tuple(Coupling(q_, r_, g=x_, epsilon=e_) for (q_, r_), x_, e_ in zip(arms_, g_, eps_)),
        resonator_couplings=tuple(ResonatorCoupling(a_, b_, x_) for (a_, b_), x_ in zip(pairs_, gc_)),
        ).check()


def spin_boson_hamiltonian(model: SpinBosonModel, resonator_levels: typing.Union[int, typing.Sequence[int]] = 10
                           ) -> FockOperator:
    """dense Hamiltonian of a spin-boson model; qubit modes first, then resonators"""
    model.check()
    levels_ = _listed(resonator_levels, len(model.resonators), "resonator_levels")
    modes_ = []
    for q_, d_ in zip(model.qubits, model.delta):
        modes_.append(Mode(q_, QUBIT, 2, d_, local={"H": d_ / 2. * SIGMA_Z, "sigma_z": SIGMA_Z,
                                                    "sigma_x": SIGMA_X}))
    for r_, w_, n_ in zip(model.resonators, model.omega, levels_):
        n_ = int(n_)
        a_ = destroy(n_)
        modes_.append(Mode(r_, RESONATOR, n_, w_, phi_zpf=math.sqrt(.5),
                           local={"H": w_ * number(n_), "a": a_, "number": number(n_), "x": a_ + a_.T}))
    dims_ = [m_.dim for m_ in modes_]
    nq_ = len(model.qubits)
    h_ = sum(embed(dims_, {i_: m_.local["H"]}) for i_, m_ in enumerate(modes_))
    for c_ in model.couplings:
        r_ = nq_ + c_.resonator
        x_ = modes_[r_].local["x"]
        spin_ = c_.g * SIGMA_Z + c_.epsilon * np.eye(2) + c_.g_x * SIGMA_X
        h_ = h_ + embed(dims_, {c_.qubit: spin_, r_: x_})
    for k_ in model.resonator_couplings:
        i_, j_ = nq_ + k_.first, nq_ + k_.second
        p_i_ = modes_[i_].local["a"].T - modes_[i_].local["a"]
        p_j_ = modes_[j_].local["a"].T - modes_[j_].local["a"]
        h_ = h_ - k_.g_c * embed(dims_, {i_: p_i_, j_: p_j_})
    _lg.debug("spin-boson hamiltonian over %s, dimension %d", [m_.label for m_ in modes_], h_.shape[0])
    return FockOperator(h_, modes_, metadata={"model": model})


class SpectrumReport(Report):
    """lowest eigenvalues with the product state each eigenvector overlaps most"""
    def __init__(self, energies=(), labels=(), overlaps=(), mode_kinds=(), vectors=None, **kwargs):
        super().__init__(energies=list(energies), labels=[list(l_) for l_ in labels], overlaps=list(overlaps),
                         mode_kinds=list(mode_kinds), **kwargs)
        self.vectors = vectors

    def level(self, label: typing.Sequence[int]) -> int:
        label_ = list(label)
        for i_, l_ in enumerate(self["labels"]):
            if l_ == label_:
                return i_
        raise LabelAmbiguityError("no level labelled {}".format(tuple(label_)))

    def energy(self, label: typing.Sequence[int]) -> float:
        return self["energies"][self.level(label)]

    def qubit_label(self, index: int) -> str:
        kinds_ = self["mode_kinds"]
        parts_ = [l_ for l_, k_ in zip(self["labels"][index], kinds_) if QUBIT == k_]
        return "".join("ge"[p_] if p_ < 2 else str(p_) for p_ in parts_)

    def photon_label(self, index: int) -> str:
        kinds_ = self["mode_kinds"]
        return ";".join(str(l_) for l_, k_ in zip(self["labels"][index], kinds_) if RESONATOR == k_)

    def to_rows(self):
        header_ = ["index", "energy", "qubit_label", "photon_label"]
        rows_ = [[i_, e_, self.qubit_label(i_), self.photon_label(i_)] for i_, e_ in enumerate(self["energies"])]
        return header_, rows_


def product_labels(vectors: np.ndarray, basis: typing.Sequence[tuple]
                   ) -> typing.Tuple[typing.List[tuple], typing.List[float]]:
    """one-to-one assignment of eigenvectors (columns) to product basis states by maximal total overlap"""
    weight_ = np.abs(vectors.T) ** 2
    rows_, cols_ = linear_sum_assignment(-weight_)
    labels_ = [None] * vectors.shape[1]
    overlaps_ = [0.] * vectors.shape[1]
    for r_, c_ in zip(rows_, cols_):
        labels_[r_] = tuple(int(x_) for x_ in basis[c_])
        overlaps_[r_] = float(weight_[r_, c_])
    return labels_, overlaps_


def eigensystem(h: FockOperator, k: typing.Optional[int] = None, tolerance: float = 1e-12) -> SpectrumReport:
    """
    lowest k eigenpairs; each eigenvector gets the uncoupled product state it overlaps most,
    assigned one-to-one (ties follow energy order)
    """
    h.check_hermitian(tolerance)
    n_ = h.dimension
    k_ = n_ if k is None else min(int(k), n_)
    w_, v_ = sla.eigh(h.matrix, subset_by_index=[0, k_ - 1])
    labels_, overlaps_ = product_labels(v_, h.basis_labels())
    ambiguous_ = [i_ for i_, o_ in enumerate(overlaps_) if o_ < .5]
    if ambiguous_:
        _lg.debug("%d levels have no dominant product state", len(ambiguous_))
    return SpectrumReport(energies=w_.tolist(), labels=labels_, overlaps=overlaps_,
                          mode_kinds=[m_.kind for m_ in h.modes], vectors=v_,
                          ambiguous=ambiguous_, hermiticity_error=h.hermiticity_error())


class CouplingClass(Report):
    def __init__(self, longitudinal: float = 0., transverse: float = 0., **kwargs):
        super().__init__(L=float(longitudinal), T=float(transverse), tag=_parity(longitudinal, transverse),
                         dominant=(LONGITUDINAL if abs(longitudinal) >= abs(transverse) else TRANSVERSE), **kwargs)


def classify_coupling(qubit: OneModeHamiltonian, f_q: typing.Callable, basis: int = 80,
                      tolerance: float = 1e-6) -> CouplingClass:
    """
    longitudinal and transverse amplitudes of a coupling factor f_q(phi_q)
    L = (<0|f|0> - <1|f|1>)/2, T = |<0|f|1>| in the qubit eigenbasis
    """
    f_ = qubit.operator(f_q, levels=2, basis=basis)
    # eigensystem is checked against the top of the basis by operator()
    return CouplingClass((f_[0, 0] - f_[1, 1]) / 2., abs(f_[0, 1]))


class AsymmetryDecomposition(Report):
    """
    the two coupling junctions -E_J1 sin(phi_q/2 + phi_r/2) - E_J2 sin(phi_r/2 - phi_q/2) rewritten as
    -E_JSigma [cos(phi_q/2) sin(phi_r/2) - d sin(phi_q/2) cos(phi_r/2)]
    """
    def potential(self, phi_q, phi_r):
        l_, t_ = self["longitudinal_term"]["amplitude"], self["transverse_term"]["amplitude"]
        return l_ * np.cos(phi_q / 2.) * np.sin(phi_r / 2.) + t_ * np.sin(phi_q / 2.) * np.cos(phi_r / 2.)


def junction_asymmetry_decompose(e_j1: float, e_j2: float) -> AsymmetryDecomposition:
    if e_j1 < 0 or e_j2 < 0:
        raise PreconditionError("junction energies must be non-negative, got {} and {}".format(e_j1, e_j2))
    total_ = float(e_j1 + e_j2)
    if 0 == total_:
        return AsymmetryDecomposition(E_JSigma=0., d=0., uncoupled=True,
                                      longitudinal_term={"amplitude": 0., "qubit": "cos", "resonator": "sin"},
                                      transverse_term={"amplitude": 0., "qubit": "sin", "resonator": "cos"})
    d_ = (e_j2 - e_j1) / total_
    return AsymmetryDecomposition(E_JSigma=total_, d=d_, uncoupled=False,
                                  longitudinal_term={"amplitude": -total_, "qubit": "cos", "resonator": "sin"},
                                  transverse_term={"amplitude": total_ * d_, "qubit": "sin", "resonator": "cos"})


def classify_asymmetric_coupling(qubit: OneModeHamiltonian, e_j1: float, e_j2: float, basis: int = 80
                                 ) -> CouplingClass:
    """
    parity of the unequal-junction coupling, using the qubit factors of both product terms:
    f_q = E_JSigma (cos(phi_q/2) + d sin(phi_q/2))
    """
    dec_ = junction_asymmetry_decompose(e_j1, e_j2)
    if dec_["uncoupled"]:
        return CouplingClass(0., 0., E_JSigma=0., d=0., uncoupled=True, ratio=0.)
    s_, d_ = dec_["E_JSigma"], dec_["d"]
    c_ = classify_coupling(qubit, lambda x_: s_ * (np.cos(x_ / 2.) + d_ * np.sin(x_ / 2.)), basis=basis)
    c_.update(E_JSigma=s_, d=d_, uncoupled=False, ratio=(c_["T"] / abs(c_["L"]) if c_["L"] else math.inf))
    return c_


def _single_coupling(m: SpinBosonModel) -> Coupling:
    if 1 != len(m.couplings):
        raise PreconditionError("frame needs exactly one qubit-resonator coupling, model has {}".format(
            len(m.couplings)))
    return m.couplings[0]


def schrieffer_wolff_frame(m: SpinBosonModel, warning_threshold: float = .3) -> Report:
    """second-order dispersive parameters of a transverse (Rabi) coupling"""
    c_ = _single_coupling(m)
    if c_.parity not in (TRANSVERSE, UNCOUPLED):
        raise PreconditionError("Schrieffer-Wolff frame needs a transverse coupling, got {}".format(c_.parity))
    delta_, omega_, g_ = m.delta[c_.qubit], m.omega[c_.resonator], c_.g_x
    if abs(delta_ - omega_) <= 1e-12 * max(abs(delta_), abs(omega_)):
        raise ResonanceError("qubit gap {} equals resonator frequency {}".format(delta_, omega_))
    gamma_ = g_ / (delta_ - omega_)
    gamma_bar_ = g_ / (delta_ + omega_)
    if abs(gamma_) > warning_threshold:
        _lg.warning("|g/(Delta - omega)| = %.3g exceeds %.3g, dispersive expansion is unreliable",
                    abs(gamma_), warning_threshold)
    return Report(gamma=gamma_, gamma_bar=gamma_bar_, chi=g_ * (gamma_ + gamma_bar_) / 2., ratio=abs(gamma_))


def lang_firsov_frame(m: SpinBosonModel, resonator_levels: int = 120) -> Report:
    """
    displace the resonator by -(g sigma_z + epsilon)/omega: U = exp(-(theta sigma_z + epsilon/omega)(a^dag - a))
    H' = U^dag H U is diagonal up to truncation; the residual is the off-diagonal norm of H'
    on the states with at most half the photon cutoff
    """
    c_ = _single_coupling(m)
    if c_.parity not in (LONGITUDINAL, UNCOUPLED):
        raise PreconditionError("Lang-Firsov frame needs a longitudinal coupling, got {}".format(c_.parity))
    omega_ = m.omega[c_.resonator]
    theta_ = c_.g / omega_
    offset_ = -(c_.g ** 2 + c_.epsilon ** 2) / omega_
    h_ = spin_boson_hamiltonian(m, resonator_levels)
    a_ = destroy(resonator_levels)
    gen_ = np.kron((c_.g * SIGMA_Z + c_.epsilon * np.eye(2)) / omega_, a_.T - a_)
    if 0 == theta_ and 0 == c_.epsilon:
        u_ = np.eye(h_.dimension)
    else:
        u_ = sla.expm(-gen_)
    hp_ = u_.T @ h_.matrix @ u_
    trusted_ = [i_ for i_, (_, n_) in enumerate(h_.basis_labels()) if n_ <= resonator_levels // 2]
    block_ = hp_[np.ix_(trusted_, trusted_)]
    residual_ = float(np.linalg.norm(block_ - np.diag(np.diag(block_))))
    if residual_ > 1e-6:
        _lg.warning("Lang-Firsov residual %.3g, the photon cutoff %d is too small", residual_, resonator_levels)
    return Report(theta=theta_, energy_offset=offset_, qubit_shift=-2. * c_.g * c_.epsilon / omega_,
                  residual_offdiag_norm=residual_, resonator_levels=resonator_levels)


def lang_firsov_spectrum(m: SpinBosonModel, count: int) -> np.ndarray:
    """closed-form levels m omega + s Delta/2 - g^2/omega of a single longitudinal block (epsilon = 0)"""
    c_ = _single_coupling(m)
    omega_, delta_ = m.omega[c_.resonator], m.delta[c_.qubit]
    n_ = count // 2 + 2
    levels_ = [k_ * omega_ + s_ * delta_ / 2. - c_.g ** 2 / omega_ for k_ in range(n_) for s_ in (-1, 1)]
    return np.sort(levels_)[:count]


def dispersive_shift_numeric(h: FockOperator, qubit: int = 0, resonator: int = 0) -> float:
    """
    chi_num = [E(e,1) - E(e,0) - E(g,1) + E(g,0)] / 4 from labelled levels, every other mode in its ground level
    """
    qubits_ = [i_ for i_, m_ in enumerate(h.modes) if QUBIT == m_.kind]
    resonators_ = [i_ for i_, m_ in enumerate(h.modes) if RESONATOR == m_.kind]
    if qubit >= len(qubits_) or resonator >= len(resonators_):
        raise PreconditionError("model has no qubit {} / resonator {}".format(qubit, resonator))
    qi_, ri_ = qubits_[qubit], resonators_[resonator]
    if h.modes[ri_].dim < 2:
        raise TruncationError("resonator {} needs at least 2 levels".format(h.modes[ri_].label))
    spec_ = eigensystem(h, k=min(h.dimension, max(8, 4 * len(h.modes) + 8)))
    energies_ = {}
    for s_ in (0, 1):
        for n_ in (0, 1):
            label_ = [0] * len(h.modes)
            label_[qi_], label_[ri_] = s_, n_
            try:
                i_ = spec_.level(label_)
            except LabelAmbiguityError:
                spec_ = eigensystem(h)
                i_ = spec_.level(label_)
            if spec_["overlaps"][i_] < .5:
                raise LabelAmbiguityError("level {} has overlap {:.3g} with its product state".format(
                    tuple(label_), spec_["overlaps"][i_]))
            energies_[(s_, n_)] = spec_["energies"][i_]
    return (energies_[(1, 1)] - energies_[(1, 0)] - energies_[(0, 1)] + energies_[(0, 0)]) / 4.


def normal_mode_frequencies(omega1: float, omega2: float, g_c: float) -> typing.Tuple[float, float]:
    """
    Omega_pm^2 = (w1^2 + w2^2)/2 pm sqrt((w1^2 - w2^2)^2 + 16 g_c^2 w1 w2)/2
    :raises InstabilityError: Omega_-^2 <= 0
    """
    mean_ = (omega1 ** 2 + omega2 ** 2) / 2.
    half_ = math.sqrt((omega1 ** 2 - omega2 ** 2) ** 2 + 16. * g_c ** 2 * omega1 * omega2) / 2.
    if mean_ - half_ <= 0:
        raise InstabilityError("coupler too strong: Omega_-^2 = {:.6g} for omega = ({}, {}), g_c = {}".format(
            mean_ - half_, omega1, omega2, g_c))
    return math.sqrt(mean_ + half_), math.sqrt(mean_ - half_)


def quadratic_normal_mode_oracle(omega1: float, omega2: float, g_c: float) -> typing.Tuple[float, float]:
    """
    normal modes of the two-resonator quadratic Hamiltonian n^T Q n + phi^T V phi with
    Q = [[w1/2, g_c], [g_c, w2/2]], V = diag(w1/2, w2/2): omega^2 = eig(4 Q V)
    """
    q_ = np.array([[omega1 / 2., g_c], [g_c, omega2 / 2.]])
    v_ = np.diag([omega1 / 2., omega2 / 2.])
    try:
        w2_ = sla.eigh(4. * v_, sla.inv(q_), eigvals_only=True)
    except sla.LinAlgError as e_:
        raise InstabilityError("charge form is not positive definite: {}".format(e_))
    if w2_[0] <= 0:
        raise InstabilityError("coupler too strong: lowest squared frequency {:.6g}".format(w2_[0]))
    return float(math.sqrt(w2_[1])), float(math.sqrt(w2_[0]))


def normal_mode_table(model: SpinBosonModel) -> typing.Dict[str, typing.Tuple[float, float]]:
    """Omega_pm per resonator pair of a connected spin-boson model"""
    return toolz.valmap(lambda k_: normal_mode_frequencies(model.omega[k_.first], model.omega[k_.second], k_.g_c),
                        {"{}-{}".format(model.resonators[k_.first], model.resonators[k_.second]): k_
                         for k_ in model.resonator_couplings})
