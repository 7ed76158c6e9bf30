"""
truncated oscillator bases, one-mode Hamiltonians and tensor-product operators

phase and charge of a mode with H = q n^2 + v phi^2 are written as
phi = phi_zpf (a + a^dag), n = i (a^dag - a) / (2 phi_zpf), phi_zpf = (q / v)^(1/4) / sqrt(2)
so that [phi, n] = i and the quadratic part is 2 sqrt(q v) (a^dag a + 1/2)
"""
import functools
import logging
import math
import typing

import numpy as np
import scipy.linalg as sla

from .errors import NonHermitianError, PreconditionError, TruncationError, UnboundPotentialError

_lg = logging.getLogger("fluxlattice")

QUBIT = "qubit"
RESONATOR = "resonator"
# extra oscillator levels used when evaluating functions of phi before truncation
PAD = 24


def destroy(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1)


def number(dim: int) -> np.ndarray:
    return np.diag(np.arange(dim, dtype=float))


def phase_operator(dim: int, phi_zpf: float) -> np.ndarray:
    a_ = destroy(dim)
    return phi_zpf * (a_ + a_.T)


def charge_operator(dim: int, phi_zpf: float) -> np.ndarray:
    a_ = destroy(dim)
    return 1j / (2. * phi_zpf) * (a_.T - a_)


def zero_point_phase(charge: float, quad: float) -> float:
    return (charge / quad) ** .25 / math.sqrt(2.)


def hermitian_function(op: np.ndarray, func: typing.Callable) -> np.ndarray:
    """f(op) through the eigendecomposition of a Hermitian matrix"""
    w_, v_ = sla.eigh(op)
    return (v_ * func(w_)) @ v_.conj().T


def phase_function(dim: int, phi_zpf: float, func: typing.Callable, pad: int = PAD) -> np.ndarray:
    """func(phi) on the lowest dim oscillator states, evaluated in a basis padded by pad levels"""
    return hermitian_function(phase_operator(dim + pad, phi_zpf), func)[:dim, :dim]


def kron_all(ops: typing.Sequence[np.ndarray]) -> np.ndarray:
    return functools.reduce(np.kron, ops, np.ones((1, 1)))


def embed(dims: typing.Sequence[int], factors: typing.Mapping[int, np.ndarray]) -> np.ndarray:
    """tensor product with identities on every mode not in factors"""
    return kron_all([factors[i_] if i_ in factors else np.eye(d_) for i_, d_ in enumerate(dims)])


def hermiticity_error(matrix: np.ndarray) -> float:
    """max |H - H^dag| relative to max |H|"""
    scale_ = float(np.max(np.abs(matrix))) if matrix.size else 0.
    if 0 == scale_:
        return 0.
    return float(np.max(np.abs(matrix - matrix.conj().T))) / scale_


def check_hermitian(matrix: np.ndarray, tolerance: float = 1e-12) -> None:
    err_ = hermiticity_error(matrix)
    if err_ > tolerance:
        raise NonHermitianError("operator is not Hermitian: max |H - H^dag| = {:.3g} x max |H|".format(err_))


class OneModeHamiltonian:
    """
    H = charge n^2 + quad phi^2 + sum_k A_k cos(d_k phi + offset_k) for a single variable
    diagonalized in a harmonic basis whose oscillator length follows the curvature at phi = 0
    """
    def __init__(self, charge: float, quad: float, sinusoids: typing.Iterable = (), label: str = "phi"):
        if charge <= 0:
            raise PreconditionError("mode {} has non-positive charge coefficient {}".format(label, charge))
        if quad <= 0:
            raise UnboundPotentialError("mode {} has no confining quadratic potential (coefficient {})".format(
                label, quad))
        self._charge = float(charge)
        self._quad = float(quad)
        # (amplitude, d, offset)
        self._sinusoids = tuple((float(a_), float(d_), float(o_)) for a_, d_, o_ in sinusoids)
        self._label = label
        self._cache = {}

    @property
    def label(self) -> str:
        return self._label

    @property
    def charge(self) -> float:
        return self._charge

    @property
    def quad(self) -> float:
        return self._quad

    @property
    def sinusoids(self) -> tuple:
        return self._sinusoids

    @property
    def curvature(self) -> float:
        """coefficient of phi^2 in the expansion of the potential around phi = 0"""
        c_ = self._quad - sum(a_ * math.cos(o_) * d_ ** 2 / 2. for a_, d_, o_ in self._sinusoids)
        return c_ if c_ > 0 else self._quad

    @property
    def phi_zpf(self) -> float:
        return zero_point_phase(self._charge, self.curvature)

    def potential_function(self, phi) -> np.ndarray:
        phi_ = np.asarray(phi, dtype=float)
        u_ = self._quad * phi_ ** 2
        for a_, d_, o_ in self._sinusoids:
            u_ = u_ + a_ * np.cos(d_ * phi_ + o_)
        return u_

    def matrix(self, basis: int) -> np.ndarray:
        z_ = self.phi_zpf
        big_ = basis + PAD
        phi_ = phase_operator(big_, z_)
        n_ = charge_operator(big_, z_)
        h_ = self._charge * (n_ @ n_).real + self._quad * (phi_ @ phi_)
        if self._sinusoids:
            h_ = h_ + hermitian_function(phi_, lambda w_: sum(a_ * np.cos(d_ * w_ + o_)
                                                              for a_, d_, o_ in self._sinusoids))
        h_ = h_[:basis, :basis]
        return (h_ + h_.T) / 2.

    def eigensystem(self, basis: int = 80, tolerance: float = 1e-6, levels: int = 2
                    ) -> typing.Tuple[np.ndarray, np.ndarray]:
        """
        energies and eigenvectors (columns, harmonic basis) of the lowest levels
        :raises TruncationError: when a kept level populates the top basis state above tolerance
        """
        if basis < levels + 1:
            raise TruncationError("basis of {} states cannot resolve {} levels".format(basis, levels))
        key_ = basis
        if key_ not in self._cache:
            self._cache[key_] = sla.eigh(self.matrix(basis))
        w_, v_ = self._cache[key_]
        top_ = np.abs(v_[-1, :levels]) ** 2
        if np.max(top_) > tolerance:
            raise TruncationError(
                "mode {}: level {} populates the top of a {}-state basis with {:.3g} > {:.3g}".format(
                    self._label, int(np.argmax(top_)), basis, float(np.max(top_)), tolerance))
        return w_[:levels], v_[:, :levels]

    def levels(self, count: int, basis: int = 80) -> np.ndarray:
        return self.eigensystem(basis=basis, levels=count)[0]

    def anharmonicity(self, basis: int = 80) -> float:
        e_ = self.levels(3, basis)
        return float((e_[2] - e_[1]) - (e_[1] - e_[0]))

    def operator(self, func: typing.Callable, levels: int = 2, basis: int = 80) -> np.ndarray:
        """matrix of func(phi) between the lowest eigenstates"""
        _, v_ = self.eigensystem(basis=basis, levels=levels)
        f_ = phase_function(basis, self.phi_zpf, func)
        return v_.T @ f_ @ v_

    def charge_matrix(self, levels: int = 2, basis: int = 80) -> np.ndarray:
        _, v_ = self.eigensystem(basis=basis, levels=levels)
        n_ = charge_operator(basis + PAD, self.phi_zpf)[:basis, :basis]
        return v_.T @ n_ @ v_


class Mode(typing.NamedTuple):
    """
    one factor of a tensor-product space
    local holds the mode's operators in the truncated basis, keyed by name
    ("H", "phi", "n", "sigma_z", "sigma_x", "a", "number", "sin" ...)
    """
    label: str
    kind: str
    dim: int
    frequency: float
    phi_zpf: float = 0.
    local: typing.Optional[dict] = None


class FockOperator:
    """dense square operator on the tensor product of truncated modes"""
    def __init__(self, matrix: np.ndarray, modes: typing.Sequence[Mode], metadata: typing.Optional[dict] = None):
        self._matrix = np.asarray(matrix)
        self._modes = tuple(modes)
        dims_ = [m_.dim for m_ in self._modes]
        if self._matrix.shape != (int(np.prod(dims_)),) * 2:
            raise PreconditionError("operator of shape {} does not match mode dimensions {}".format(
                self._matrix.shape, dims_))
        self._metadata = dict(metadata or {})

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def modes(self) -> typing.Tuple[Mode, ...]:
        return self._modes

    @property
    def metadata(self) -> dict:
        return self._metadata

    @property
    def dims(self) -> typing.Tuple[int, ...]:
        return tuple(m_.dim for m_ in self._modes)

    @property
    def dimension(self) -> int:
        return self._matrix.shape[0]

    @property
    def labels(self) -> typing.Tuple[str, ...]:
        return tuple(m_.label for m_ in self._modes)

    def mode_index(self, label: str) -> int:
        for i_, m_ in enumerate(self._modes):
            if m_.label == label:
                return i_
        raise PreconditionError("no mode {} among {}".format(label, self.labels))

    def modes_of(self, kind: str) -> typing.List[Mode]:
        return [m_ for m_ in self._modes if m_.kind == kind]

    def embed(self, label: str, op: np.ndarray) -> np.ndarray:
        return embed(self.dims, {self.mode_index(label): op})

    def local_operator(self, label: str, name: str) -> np.ndarray:
        mode_ = self._modes[self.mode_index(label)]
        if not mode_.local or name not in mode_.local:
            raise PreconditionError("mode {} has no {} operator".format(label, name))
        return self.embed(label, mode_.local[name])

    def basis_labels(self) -> typing.List[typing.Tuple[int, ...]]:
        return list(np.ndindex(*self.dims))

    def hermiticity_error(self) -> float:
        return hermiticity_error(self._matrix)

    def check_hermitian(self, tolerance: float = 1e-12) -> "FockOperator":
        check_hermitian(self._matrix, tolerance)
        return self

    def ground_state(self) -> np.ndarray:
        _, v_ = sla.eigh(self._matrix, subset_by_index=[0, 0])
        return v_[:, 0]

    def check_truncation(self, tolerance: float = 1e-6, kinds: typing.Sequence[str] = (RESONATOR,)) -> None:
        """
        population of the highest kept Fock level in the ground state
        qubit modes keep their lowest dressed levels on purpose and are skipped by default
        :raises TruncationError: above tolerance; single-level modes are skipped
        """
        psi_ = np.abs(self.ground_state()) ** 2
        psi_ = psi_.reshape(self.dims)
        for i_, m_ in enumerate(self._modes):
            if m_.dim < 2 or m_.kind not in kinds:
                continue
            top_ = float(np.take(psi_, m_.dim - 1, axis=i_).sum())
            if top_ > tolerance:
                raise TruncationError("mode {} truncated at {} levels: ground-state population of the top level "
                                      "{:.3g} > {:.3g}".format(m_.label, m_.dim, top_, tolerance))
            _lg.debug("mode %s top-level population %.3g", m_.label, top_)

    def __repr__(self):
        return "FockOperator({}, dims={})".format(self.labels, self.dims)
