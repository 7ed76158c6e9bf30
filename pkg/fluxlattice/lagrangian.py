"""
circuit Lagrangians as (kinetic quadratic form, potential)

L = phidot^T K phidot - U(phi),  U(phi) = phi^T V phi + sum_k A_k cos(d_k . phi + offset_k)

K and V are in canonical units (hbar = 1, energies in rad/s): a capacitor C between
two nodes adds KAPPA * C/2 to the (i,i), (j,j) entries and -KAPPA * C/2 to (i,j), (j,i),
an inductor adds KAPPA/(2L) the same way, with KAPPA = (Phi_0 / 2 pi)^2 / hbar.
junctions are stored with the sign they have in U (amplitude -E_J)
"""
import functools
import logging
import math
import typing

import numpy as np
import scipy.linalg as sla
from scipy import constants

from .errors import (IndefiniteFormError, NetlistError, PreconditionError, SingularTransformError,
                     TopologyError)
from .netlist import (CAPACITOR, INDUCTOR, JUNCTION, JUNCTION_ARRAY, TWO_PI, Circuit,
                      validate_circuit)

_lg = logging.getLogger("fluxlattice")

KAPPA = constants.hbar / (4. * constants.e ** 2)
RCOND_THRESHOLD = 1e-12
SYMMETRY_TOLERANCE = 1e-12


def _clean(matrix: np.ndarray) -> np.ndarray:
    # drop round-off residues of exact cancellations (integer-coefficient transforms)
    scale_ = np.max(np.abs(matrix)) if matrix.size else 0.
    if scale_ == 0:
        return matrix
    out_ = matrix.copy()
    out_[np.abs(out_) < 64 * np.finfo(float).eps * scale_] = 0.
    return out_


class QuadraticForm:
    """symmetric coefficient array, x^T M x"""
    __slots__ = ["_matrix"]

    def __init__(self, matrix):
        m_ = np.array(matrix, dtype=float)
        if 1 == m_.ndim and 0 == m_.size:
            m_ = m_.reshape((0, 0))
        if 2 != m_.ndim or m_.shape[0] != m_.shape[1]:
            raise ValueError("quadratic form needs a square array, got shape {}".format(m_.shape))
        scale_ = max(1., float(np.max(np.abs(m_)))) if m_.size else 1.
        if m_.size and np.max(np.abs(m_ - m_.T)) > SYMMETRY_TOLERANCE * scale_:
            raise ValueError("quadratic form is not symmetric")
        m_ = (m_ + m_.T) / 2.
        m_.flags.writeable = False
        self._matrix = m_

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def dimension(self) -> int:
        return self._matrix.shape[0]

    def evaluate(self, x) -> typing.Union[float, np.ndarray]:
        x_ = np.asarray(x, dtype=float)
        return np.einsum("...i,ij,...j->...", x_, self._matrix, x_)

    def congruence(self, p: np.ndarray) -> "QuadraticForm":
        """form in variables y with x = p y"""
        return QuadraticForm(_clean(p.T @ self._matrix @ p))

    def restrict(self, indices: typing.Sequence[int]) -> "QuadraticForm":
        idx_ = np.asarray(indices, dtype=int)
        return QuadraticForm(self._matrix[np.ix_(idx_, idx_)])

    def is_positive_definite(self) -> bool:
        if 0 == self.dimension:
            return True
        try:
            sla.cholesky(self._matrix, lower=False)
        except sla.LinAlgError:
            return False
        return True

    def __eq__(self, other) -> bool:
        return isinstance(other, QuadraticForm) and np.array_equal(self._matrix, other._matrix)

    def __repr__(self):
        return "QuadraticForm({})".format(self._matrix.tolist())


class SinusoidTerm(typing.NamedTuple):
    """amplitude * cos(direction . phi + offset)"""
    amplitude: float
    direction: typing.Tuple[float, ...]
    offset: float = 0.

    def evaluate(self, phi) -> typing.Union[float, np.ndarray]:
        phi_ = np.asarray(phi, dtype=float)
        return self.amplitude * np.cos(phi_ @ np.asarray(self.direction) + self.offset)

    def support(self) -> typing.List[int]:
        return [i_ for i_, d_ in enumerate(self.direction) if d_ != 0]


class LagrangianModel(typing.NamedTuple):
    labels: typing.Tuple[str, ...]
    kinetic: QuadraticForm
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

    def potential(self, phi) -> typing.Union[float, np.ndarray]:
        u_ = self.quad_potential.evaluate(phi)
        for s_ in self.sinusoids:
            u_ = u_ + s_.evaluate(phi)
        return u_

    def evaluate(self, phi, phidot) -> typing.Union[float, np.ndarray]:
        return self.kinetic.evaluate(phidot) - self.potential(phi)


class LinearTransform(typing.NamedTuple):
    """new = matrix @ old"""
    matrix: np.ndarray
    labels: typing.Tuple[str, ...]

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]


def check_invertible(matrix: np.ndarray) -> None:
    m_ = np.asarray(matrix, dtype=float)
    if 2 != m_.ndim or m_.shape[0] != m_.shape[1]:
        raise SingularTransformError("transform must be square, got shape {}".format(m_.shape))
    if 0 == m_.shape[0]:
        return
    with np.errstate(all="ignore"):
        cond_ = np.linalg.cond(m_)
    if not np.isfinite(cond_) or 1. / cond_ <= RCOND_THRESHOLD:
        raise SingularTransformError("transform is singular or ill-conditioned (condition number {:.3g})".format(
            cond_))


def build_lagrangian(c: Circuit) -> LagrangianModel:
    """
    node-phase Lagrangian of a circuit; the reference node (ground, else last node) is fixed to 0
    :param c: Circuit passing validate_circuit
    :return: LagrangianModel over the non-reference node phases
    """
    report_ = validate_circuit(c)
    if report_:
        raise NetlistError("invalid circuit {}: {}".format(c.name, "; ".join(report_)))
    labels_ = tuple(c.variables)
    index_ = {n_: i_ for i_, n_ in enumerate(labels_)}
    n_ = len(labels_)
    k_ = np.zeros((n_, n_))
    v_ = np.zeros((n_, n_))
    sinusoids_ = []
    for b_ in c.branches:
        u_ = np.zeros(n_)
        i_, j_ = b_.nodes
        if i_ in index_:
            u_[index_[i_]] += 1.
        if j_ in index_:
            u_[index_[j_]] -= 1.
        if b_.kind == CAPACITOR:
            k_ += KAPPA * b_.value / 2. * np.outer(u_, u_)
        elif b_.kind == INDUCTOR:
            v_ += KAPPA / (2. * b_.value) * np.outer(u_, u_)
        elif b_.kind in (JUNCTION, JUNCTION_ARRAY):
            d_ = u_ / b_.k if b_.kind == JUNCTION_ARRAY else u_
            sinusoids_.append(SinusoidTerm(-b_.value, tuple(float(x_) for x_ in d_),
                                           float((-b_.phase_offset) % TWO_PI)))
    kinetic_ = QuadraticForm(k_)
    missing_ = [labels_[i_] for i_ in range(n_) if k_[i_, i_] <= 0]
    if missing_:
        raise IndefiniteFormError("no kinetic term for {}".format(", ".join(missing_)))
    try:
        check_invertible(k_ / np.max(np.abs(k_)))
    except SingularTransformError as e_:
        raise IndefiniteFormError("capacitance form of {} is singular: {}".format(c.name, e_))
    meta_ = dict(c.metadata or {})
    meta_["circuit"] = c.name
    _lg.debug("built lagrangian of %s over %s with %d sinusoids", c.name, labels_, len(sinusoids_))
    return LagrangianModel(labels=labels_, kinetic=kinetic_, quad_potential=QuadraticForm(v_),
                           sinusoids=tuple(sinusoids_), metadata=meta_)


def apply_linear_transform(m: LagrangianModel, t: LinearTransform) -> LagrangianModel:
    """
    rewrite a model in new variables psi = T phi
    quadratic forms transform by congruence with T^-1, sinusoid directions by T^-T,
    so every term keeps its value at corresponding points
    """
    matrix_ = np.asarray(t.matrix, dtype=float)
    if matrix_.shape != (m.dimension, m.dimension) or len(t.labels) != m.dimension:
        raise PreconditionError("transform of dimension {} does not match model of dimension {}".format(
            matrix_.shape, m.dimension))
    check_invertible(matrix_)
    if np.array_equal(matrix_, np.eye(m.dimension)):
        return m._replace(labels=tuple(t.labels))
    inv_ = sla.inv(matrix_)
    sinusoids_ = []
    for s_ in m.sinusoids:
        d_ = _clean(inv_.T @ np.asarray(s_.direction))
        sinusoids_.append(s_._replace(direction=tuple(float(x_) for x_ in d_)))
    return LagrangianModel(labels=tuple(t.labels), kinetic=m.kinetic.congruence(inv_),
                           quad_potential=m.quad_potential.congruence(inv_),
                           sinusoids=tuple(sinusoids_), metadata=m.metadata)


def _block_rows(c: Circuit, labels: typing.Sequence[str]):
    meta_ = c.metadata or {}
    index_ = {n_: i_ for i_, n_ in enumerate(labels)}
    n_ = len(labels)

    def vec(**coefs):
        v_ = np.zeros(n_)
        for node_, x_ in coefs.items():
            if node_ in index_:
                v_[index_[node_]] += x_
        return v_

    return meta_, vec


def standard_block_transform(c: Circuit) -> LinearTransform:
    """
    per block phi_q = phi_a - phi_b and per resonator arm phi_r = phi_a + phi_b - 2 phi_c;
    connection nodes stay as they are (they are eliminated next)
    for the plaquette only the outgoing arm of every block is kept, which makes the map square
    """
    topology_ = c.topology
    if topology_ is None or not (c.metadata or {}).get("blocks"):
        raise TopologyError("no standard transform for circuit {} without builtin topology".format(c.name))
    labels_ = c.variables
    meta_, vec = _block_rows(c, labels_)
    rows_, new_labels_ = [], []
    blocks_ = meta_["blocks"]
    for blk_ in blocks_:
        rows_.append(vec(**{blk_["a"]: 1., blk_["b"]: -1.}))
        new_labels_.append("phi_" + blk_["qubit"])
    outgoing_ = {conn_["blocks"][0]: conn_["name"] for conn_ in meta_.get("connections", [])}
    for arm_ in meta_["arms"]:
        if "plaquette" == topology_ and arm_["connection"] != outgoing_.get(arm_["block"]):
            continue
        blk_ = blocks_[arm_["block"]]
        r_ = vec(**{blk_["a"]: 1.})
        r_ += vec(**{blk_["b"]: 1.})
        r_ += vec(**{arm_["c"]: -2.})
        rows_.append(r_)
        new_labels_.append("phi_" + arm_["resonator"])
    for conn_ in meta_.get("connections", []):
        if conn_["c"] in labels_:
            rows_.append(vec(**{conn_["c"]: 1.}))
            new_labels_.append("phi_" + conn_["c"])
    if len(rows_) != len(labels_):
        raise TopologyError("standard transform of {} gives {} variables for {} node phases".format(
            c.name, len(rows_), len(labels_)))
    matrix_ = np.vstack(rows_)
    check_invertible(matrix_)
    return LinearTransform(matrix=matrix_, labels=tuple(new_labels_))


def _star_label(label: str) -> str:
    if label.startswith("phi_c"):
        return "phi_*" + label[len("phi_c"):]
    return "phi_*:" + label


def cholesky_eliminate(m: LagrangianModel, cyclic: typing.Iterable[str]
                       ) -> typing.Tuple[LagrangianModel, LinearTransform]:
    """
    decouple cyclic variables (absent from the potential) from the kinetic energy
    the new variables phi_* are the rows of the Cholesky factor belonging to the cyclic
    block, rescaled so their own coefficient is 1; retained variables are unchanged
    :param m: LagrangianModel
    :param cyclic: labels of variables to eliminate
    :return: (model over the retained variables, full transform to (phi_*, retained))
    """
    cyclic_ = list(cyclic)
    idx_c_ = [m.index(l_) for l_ in cyclic_]
    if not idx_c_:
        raise PreconditionError("no cyclic variables given")
    idx_r_ = [i_ for i_ in range(m.dimension) if i_ not in idx_c_]
    v_ = m.quad_potential.matrix
    for i_, l_ in zip(idx_c_, cyclic_):
        if np.any(v_[i_, :] != 0) or np.any(v_[:, i_] != 0):
            raise PreconditionError("variable {} appears in the quadratic potential".format(l_))
        for s_ in m.sinusoids:
            if s_.direction[i_] != 0:
                raise PreconditionError("variable {} appears in a junction term".format(l_))
    k_ = m.kinetic.matrix
    k_cc_ = k_[np.ix_(idx_c_, idx_c_)]
    k_cr_ = k_[np.ix_(idx_c_, idx_r_)]
    try:
        u_ = sla.cholesky(k_cc_, lower=False)
    except sla.LinAlgError as e_:
        raise IndefiniteFormError("kinetic block of {} is not positive definite: {}".format(cyclic_, e_))
    w_ = sla.solve_triangular(u_, k_cr_, trans="T", lower=False)
    d_ = np.diag(u_)
    nc_, nr_ = len(idx_c_), len(idx_r_)
    # transform in (cyclic, retained) order, then columns put back in model order
    r_re_ = np.zeros((nc_ + nr_, nc_ + nr_))
    r_re_[:nc_, :nc_] = u_ / d_[:, None]
    r_re_[:nc_, nc_:] = w_ / d_[:, None]
    r_re_[nc_:, nc_:] = np.eye(nr_)
    r_full_ = np.zeros_like(r_re_)
    r_full_[:, idx_c_ + idx_r_] = r_re_
    labels_ = tuple(_star_label(l_) for l_ in cyclic_) + tuple(m.labels[i_] for i_ in idx_r_)
    transform_ = LinearTransform(matrix=r_full_, labels=labels_)

    reduced_k_ = k_[np.ix_(idx_r_, idx_r_)] - w_.T @ w_
    sinusoids_ = tuple(s_._replace(direction=tuple(s_.direction[i_] for i_ in idx_r_)) for s_ in m.sinusoids)
    meta_ = dict(m.metadata or {})
    eliminated_ = dict(meta_.get("eliminated", {}))
    for l_, x_ in zip(cyclic_, d_):
        eliminated_[_star_label(l_)] = float(x_ ** 2)
    meta_["eliminated"] = eliminated_
    reduced_ = LagrangianModel(labels=tuple(m.labels[i_] for i_ in idx_r_),
                               kinetic=QuadraticForm((reduced_k_ + reduced_k_.T) / 2.),
                               quad_potential=m.quad_potential.restrict(idx_r_),
                               sinusoids=sinusoids_, metadata=meta_)
    _lg.debug("eliminated %s, mixing rows %s", cyclic_, r_re_[:nc_].tolist())
    return reduced_, transform_


def reduce_circuit(c: Circuit) -> typing.Tuple[LagrangianModel, typing.List[LinearTransform]]:
    """
    build, apply the standard block transform and eliminate every connection variable
    the plaquette is reduced on its per-arm coordinates (see lifted_model); its first
    transform is then the non-square lift
    """
    if "plaquette" == c.topology:
        build_lagrangian(c)
        m_, lift_ = lifted_model(c)
        t_ = LinearTransform(matrix=lift_, labels=m_.labels)
    else:
        m_ = build_lagrangian(c)
        t_ = standard_block_transform(c)
        m_ = apply_linear_transform(m_, t_)
    transforms_ = [t_]
    cyclic_ = [l_ for l_ in m_.labels if l_.startswith("phi_c")]
    cyclic_ = [l_ for l_ in cyclic_ if _is_cyclic(m_, m_.index(l_))]
    if cyclic_:
        m_, t2_ = cholesky_eliminate(m_, cyclic_)
        transforms_.append(t2_)
    return m_, transforms_


def _is_cyclic(m: LagrangianModel, i: int) -> bool:
    v_ = m.quad_potential.matrix
    return not np.any(v_[i, :] != 0) and all(s_.direction[i] == 0 for s_ in m.sinusoids)


def lifted_model(c: Circuit) -> typing.Tuple[LagrangianModel, np.ndarray]:
    """
    model over per-arm coordinates (phi_q per block, phi_r per arm, phi_c per connection)
    for the connected topologies; the lift matrix M maps node phases to these coordinates
    and pulls every lifted form back onto the node form (M^T K_lift M = K_nodes)
    for the plaquette the per-arm coordinates are overcomplete (16 for 12 node phases)
    """
    meta_ = c.metadata or {}
    if not meta_.get("connections"):
        raise TopologyError("circuit {} has no block connections".format(c.name))
    variables_ = c.variables
    _, vec = _block_rows(c, variables_)
    blocks_ = meta_["blocks"]
    labels_ = ["phi_" + b_["qubit"] for b_ in blocks_]
    labels_ += ["phi_" + a_["resonator"] for a_ in meta_["arms"]]
    labels_ += ["phi_" + k_["c"] for k_ in meta_["connections"]]
    lindex_ = {l_: i_ for i_, l_ in enumerate(labels_)}
    rows_ = []
    for b_ in blocks_:
        rows_.append(vec(**{b_["a"]: 1.}) - vec(**{b_["b"]: 1.}))
    for a_ in meta_["arms"]:
        b_ = blocks_[a_["block"]]
        rows_.append(vec(**{b_["a"]: 1.}) + vec(**{b_["b"]: 1.}) - 2. * vec(**{a_["c"]: 1.}))
    for k_ in meta_["connections"]:
        rows_.append(vec(**{k_["c"]: 1.}))
    lift_ = np.vstack(rows_)

    ends_ = {}
    for i_, b_ in enumerate(blocks_):
        ends_[b_["a"]] = (i_, 1.)
        ends_[b_["b"]] = (i_, -1.)
    arm_of_ = {(a_["block"], a_["c"]): a_["resonator"] for a_ in meta_["arms"]}
    conn_c_ = {k_["name"]: k_["c"] for k_ in meta_["connections"]}

    def branch_vector(branch) -> np.ndarray:
        w_ = np.zeros(len(labels_))
        u_, v_ = branch.nodes
        tag_ = branch.label.split(":")
        if u_ in ends_ and v_ in ends_:
            w_[lindex_["phi_" + blocks_[ends_[u_][0]]["qubit"]]] = 1.
        elif u_ in ends_ and tag_[0] in ("C", "L", "EJ"):
            blk_, sign_ = ends_[u_]
            w_[lindex_["phi_" + blocks_[blk_]["qubit"]]] = sign_ / 2.
            w_[lindex_["phi_" + arm_of_[(blk_, v_)]]] = .5
        elif u_ in ends_ and "Cg" == tag_[0]:
            blk_, sign_ = ends_[u_]
            c_node_ = conn_c_[tag_[2]]
            w_[lindex_["phi_" + blocks_[blk_]["qubit"]]] = sign_ / 2.
            w_[lindex_["phi_" + arm_of_[(blk_, c_node_)]]] = .5
            w_[lindex_["phi_" + c_node_]] = 1.
        elif "Cs" == tag_[0]:
            w_[lindex_["phi_" + u_]] = 1.
        else:
            raise TopologyError("branch {} of {} has no per-arm coordinates".format(branch, c.name))
        return w_

    n_ = len(labels_)
    k_lift_ = np.zeros((n_, n_))
    v_lift_ = np.zeros((n_, n_))
    sinusoids_ = []
    index_ = {n_: i_ for i_, n_ in enumerate(variables_)}
    for b_ in c.branches:
        w_ = branch_vector(b_)
        incidence_ = np.zeros(len(variables_))
        for node_, x_ in zip(b_.nodes, (1., -1.)):
            if node_ in index_:
                incidence_[index_[node_]] += x_
        if not np.allclose(w_ @ lift_, incidence_, atol=1e-14):
            raise TopologyError("per-arm coordinates of branch {} are inconsistent".format(b_))
        if b_.kind == CAPACITOR:
            k_lift_ += KAPPA * b_.value / 2. * np.outer(w_, w_)
        elif b_.kind == INDUCTOR:
            v_lift_ += KAPPA / (2. * b_.value) * np.outer(w_, w_)
        else:
            d_ = w_ / b_.k if b_.kind == JUNCTION_ARRAY else w_
            sinusoids_.append(SinusoidTerm(-b_.value, tuple(float(x_) for x_ in d_),
                                           float((-b_.phase_offset) % TWO_PI)))
    meta2_ = dict(meta_)
    meta2_["circuit"] = c.name
    meta2_["lifted"] = True
    model_ = LagrangianModel(labels=tuple(labels_), kinetic=QuadraticForm(k_lift_),
                             quad_potential=QuadraticForm(v_lift_), sinusoids=tuple(sinusoids_),
                             metadata=meta2_)
    return model_, lift_


def connection_blocks(c: Circuit) -> typing.Dict[str, np.ndarray]:
    """
    per-connection capacitance blocks C_j over (phi_c,j, phi_r,1,j, phi_r,2,j), in farads,
    with T_j = (Phi_0 / 2 pi)^2 phidot_j^T C_j phidot_j / 2
    """
    model_, _ = lifted_model(c)
    meta_ = c.metadata
    k_ = model_.kinetic.matrix
    blocks_ = {}
    for conn_ in meta_["connections"]:
        arms_ = [a_["resonator"] for a_ in meta_["arms"] if a_["connection"] == conn_["name"]]
        idx_ = [model_.index("phi_" + conn_["c"])] + [model_.index("phi_" + r_) for r_ in arms_]
        blocks_[conn_["name"]] = 2. * k_[np.ix_(idx_, idx_)] / KAPPA
    return blocks_


def quadratic_normal_modes(kinetic: QuadraticForm, potential: QuadraticForm) -> np.ndarray:
    """
    angular frequencies of the quadratic part: K phi'' = -V phi, omega^2 = eig(V, K)
    """
    w2_ = sla.eigh(potential.matrix, kinetic.matrix, eigvals_only=True)
    return np.sqrt(np.clip(np.sort(w2_), 0., None))


def model_to_dict(m: LagrangianModel) -> dict:
    return {
        "labels": list(m.labels),
        "kinetic": m.kinetic.matrix.tolist(),
        "quad_potential": m.quad_potential.matrix.tolist(),
        "sinusoids": [{"amplitude": s_.amplitude, "direction": list(s_.direction), "offset": s_.offset}
                      for s_ in m.sinusoids],
        "kinetic_capacitance": (m.kinetic.matrix / KAPPA).tolist(),
        "metadata": {k_: v_ for k_, v_ in (m.metadata or {}).items() if k_ in ("circuit", "topology", "eliminated")},
        }


def check_reduction(original: LagrangianModel, reduced: LagrangianModel, transforms: typing.Sequence[LinearTransform],
                    samples: int = 16, seed: typing.Optional[int] = None) -> dict:
    """
    pull the reduced model back through the composed transforms and compare with the original:
    the kinetic form exactly (eliminated variables contribute their D^2 coefficient), the potential
    on random phase points drawn from [-pi, pi)
    """
    total_ = functools.reduce(lambda acc_, t_: t_.matrix @ acc_, transforms, np.eye(original.dimension))
    labels_ = transforms[-1].labels
    if total_.shape != (len(labels_), original.dimension):
        raise PreconditionError("transforms map {} variables onto {} labels".format(original.dimension, len(labels_)))
    eliminated_ = (reduced.metadata or {}).get("eliminated", {})
    k_new_ = np.zeros((len(labels_), len(labels_)))
    idx_ = [labels_.index(l_) for l_ in reduced.labels]
    k_new_[np.ix_(idx_, idx_)] = reduced.kinetic.matrix
    for l_, x_ in eliminated_.items():
        if l_ in labels_:
            k_new_[labels_.index(l_), labels_.index(l_)] = x_
    k_back_ = total_.T @ k_new_ @ total_
    scale_ = float(np.max(np.abs(original.kinetic.matrix)))
    kinetic_error_ = float(np.max(np.abs(k_back_ - original.kinetic.matrix))) / scale_
    rng_ = np.random.default_rng(seed)
    points_ = rng_.uniform(-np.pi, np.pi, size=(samples, original.dimension))
    u_old_ = np.atleast_1d(original.potential(points_))
    u_new_ = np.atleast_1d(reduced.potential((points_ @ total_.T)[:, idx_]))
    u_scale_ = max(float(np.max(np.abs(u_old_))), 1e-300) if samples else 1.
    potential_error_ = float(np.max(np.abs(u_new_ - u_old_))) / u_scale_ if samples else 0.
    _lg.debug("reduction check: kinetic %.3g, potential %.3g over %d samples", kinetic_error_, potential_error_,
              samples)
    return {"kinetic_pullback_error": kinetic_error_, "potential_error": potential_error_, "samples": samples,
            "seed": seed}
