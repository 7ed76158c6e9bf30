"""
driven time evolution, sideband spectroscopy, drive locality and coupler frequency plans
"""
import functools
import itertools
import logging
import math
import typing

import numpy as np
import scipy.linalg as sla
import scipy.signal as ssig
import toolz

from .errors import (ConvergenceError, InfeasiblePlanError, InstabilityError, NormDriftError, PreconditionError,
                     TimeStepError)
from .fock import QUBIT, RESONATOR, FockOperator, embed
from .netlist import CONNECTION_NAMES
from .reports import Report
from .scan_spawner import ScanSpawner
from .spectra import (SpinBosonModel, normal_mode_frequencies, product_labels, quadratic_normal_mode_oracle,
                      spin_boson_hamiltonian)

_lg = logging.getLogger("fluxlattice")

VOLTAGE = "voltage"
FLUX = "flux"
CONSTANT = "constant"
COSINE_RAMP = "cosine-ramp"
# dt must stay below DT_FACTOR / (spectral half-width of H0 + drive amplitude x |O|)
DT_FACTOR = .05
# step halvings tried before a convergence check gives up
MAX_HALVINGS = 4
FLUX_WARNING = .1


class DriveSpec(typing.NamedTuple):
    """Omega env(t) cos(omega t + phase) times the drive operator of the target qubit"""
    target: str
    amplitude: float
    frequency: float
    phase: float = 0.
    envelope: str = CONSTANT
    duration: float = 100.
    kind: str = VOLTAGE
    ramp: float = 0.

    def check(self) -> "DriveSpec":
        if self.amplitude < 0:
            raise PreconditionError("drive amplitude must be non-negative, got {}".format(self.amplitude))
        if not self.duration > 0:
            raise PreconditionError("drive duration must be positive, got {}".format(self.duration))
        if self.envelope not in (CONSTANT, COSINE_RAMP):
            raise PreconditionError("unknown envelope {}".format(self.envelope))
        if self.kind not in (VOLTAGE, FLUX):
            raise PreconditionError("unknown drive kind {}".format(self.kind))
        if self.ramp < 0 or 2. * self.ramp > self.duration:
            raise PreconditionError("ramp {} does not fit a duration of {}".format(self.ramp, self.duration))
        return self

    def envelope_at(self, t) -> np.ndarray:
        t_ = np.asarray(t, dtype=float)
        if CONSTANT == self.envelope or 0 == self.ramp:
            return np.ones_like(t_)
        edge_ = np.minimum(np.clip(t_ / self.ramp, 0., 1.), np.clip((self.duration - t_) / self.ramp, 0., 1.))
        return (1. - np.cos(math.pi * edge_)) / 2.

    def coefficient(self, t) -> np.ndarray:
        return self.amplitude * self.envelope_at(t) * np.cos(self.frequency * np.asarray(t) + self.phase)


class DriveTerm(typing.NamedTuple):
    """
    H_d(t) = scale x spec.coefficient(t) x operator
    transverse and longitudinal are the two-level projections of the local drive operator
    """
    operator: np.ndarray
    spec: DriveSpec
    scale: float = 1.
    transverse: float = 0.
    longitudinal_residual: float = 0.
    involutory: bool = False

    def coefficient(self, t) -> float:
        return float(self.scale * self.spec.coefficient(t))

    def matrix(self, t) -> np.ndarray:
        return self.coefficient(t) * self.operator


def _find_mode(model: FockOperator, target: str) -> int:
    for label_ in (target, "phi_" + target):
        if label_ in model.labels:
            i_ = model.mode_index(label_)
            if model.modes[i_].kind == QUBIT:
                return i_
    raise PreconditionError("unknown qubit {} - model has qubits {}".format(
        target, [m_.label for m_ in model.modes_of(QUBIT)]))


def build_drive(spec: DriveSpec, model: FockOperator) -> DriveTerm:
    """
    voltage drives couple to the qubit charge (sigma_x on a two-level model),
    flux drives to E_Jq sin(phi_q)
    """
    spec.check()
    i_ = _find_mode(model, spec.target)
    mode_ = model.modes[i_]
    local_ = mode_.local or {}
    scale_ = 1.
    if VOLTAGE == spec.kind:
        op_ = local_["n"] if "n" in local_ else local_.get("sigma_x")
    else:
        if "sin" not in local_:
            raise PreconditionError("flux drive on {} needs a circuit-level model".format(mode_.label))
        if spec.amplitude > FLUX_WARNING:
            _lg.warning("flux drive amplitude %.3g is not small, the sin(phi_q) expansion needs A << 1",
                        spec.amplitude)
        op_ = local_["sin"]
        scale_ = model.metadata.get("junction_energies", {}).get(mode_.label, 1.)
    if op_ is None:
        raise PreconditionError("qubit {} has no drive operator".format(mode_.label))
    transverse_, residual_ = 0., 0.
    if op_.shape[0] >= 2:
        transverse_ = float(abs(op_[0, 1]))
        residual_ = float(abs(op_[0, 0] - op_[1, 1]) / 2.)
    involutory_ = bool(np.allclose(op_ @ op_, np.eye(op_.shape[0]), atol=1e-12))
    full_ = embed(model.dims, {i_: op_})
    _lg.debug("%s drive on %s: transverse %.3g, longitudinal residual %.3g", spec.kind, mode_.label,
              transverse_, residual_)
    return DriveTerm(full_, spec, scale_, transverse_, residual_, involutory_)


class Propagator:
    """
    second-order split-step propagation of H0 + c(t) O:
    exp(-i H0 dt/2) exp(-i c(t + dt/2) O dt) exp(-i H0 dt/2), each factor applied exactly
    the state is carried in the eigenbasis of H0, so every step is unitary to rounding
    """
    def __init__(self, h0: FockOperator, drive: typing.Optional[DriveTerm] = None):
        self._h0 = h0
        self._energies, self._vectors = sla.eigh(h0.matrix)
        self._op = None
        self._op_eig = None
        self._op_norm = 0.
        self._involutory = False
        if drive is not None and drive.spec.amplitude > 0 and np.any(drive.operator != 0):
            op_ = self._vectors.conj().T @ drive.operator @ self._vectors
            self._op = ((op_ + op_.conj().T) / 2.).astype(complex)
            self._involutory = drive.involutory
            if self._involutory:
                self._op_norm = 1.
            else:
                self._op_eig = sla.eigh(self._op)
                self._op_norm = float(np.max(np.abs(self._op_eig[0])))
            self._op_norm *= abs(drive.scale)

    @property
    def energies(self) -> np.ndarray:
        return self._energies

    @property
    def vectors(self) -> np.ndarray:
        return self._vectors

    @property
    def halfwidth(self) -> float:
        return float(self._energies[-1] - self._energies[0]) / 2.

    def max_dt(self, amplitude: float = 0.) -> float:
        return DT_FACTOR / max(self.halfwidth + amplitude * self._op_norm, 1e-300)

    def to_eigenbasis(self, psi: np.ndarray) -> np.ndarray:
        return self._vectors.conj().T @ psi

    def to_product(self, psi_e: np.ndarray) -> np.ndarray:
        return self._vectors @ psi_e

    def run(self, psi_e: np.ndarray, coefficient: typing.Optional[typing.Callable], duration: float, dt: float,
            record: typing.Optional[typing.Callable] = None, record_every: int = 1) -> np.ndarray:
        """
        propagate an eigenbasis state
        record(t, psi_e) is called at t = 0, every record_every steps and at the end
        """
        n_steps_ = max(1, int(round(duration / dt)))
        dt_ = duration / n_steps_
        half_ = np.exp(-.5j * dt_ * (self._energies - self._energies[0]))
        psi_ = np.array(psi_e, dtype=complex)
        if record is not None:
            record(0., psi_)
        driven_ = self._op is not None and coefficient is not None
        for k_ in range(n_steps_):
            psi_ = psi_ * half_
            if driven_:
                c_ = coefficient((k_ + .5) * dt_) * dt_
                if c_ != 0:
                    if self._involutory:
                        psi_ = math.cos(c_) * psi_ - 1j * math.sin(c_) * (self._op @ psi_)
                    else:
                        o_, w_ = self._op_eig
                        psi_ = w_ @ (np.exp(-1j * c_ * o_) * (w_.conj().T @ psi_))
            psi_ = psi_ * half_
            if record is not None and ((k_ + 1) % record_every == 0 or k_ + 1 == n_steps_):
                record((k_ + 1) * dt_, psi_)
        return psi_


def _diagonal(dims: typing.Sequence[int], index: int, diag: np.ndarray) -> np.ndarray:
    return functools.reduce(np.kron, [diag if i_ == index else np.ones(d_) for i_, d_ in enumerate(dims)],
                            np.ones(1))


def default_observables(h0: FockOperator) -> typing.Dict[str, np.ndarray]:
    """sigma_z of every qubit and photon number of every resonator, as product-basis diagonals"""
    obs_ = {}
    for i_, m_ in enumerate(h0.modes):
        if QUBIT == m_.kind:
            obs_["sigma_z:" + m_.label] = _diagonal(h0.dims, i_, np.diag(m_.local["sigma_z"]).astype(float))
        elif RESONATOR == m_.kind:
            obs_["number:" + m_.label] = _diagonal(h0.dims, i_, np.arange(m_.dim, dtype=float))
    return obs_


def basis_state(h0: FockOperator, levels: typing.Sequence[int]) -> np.ndarray:
    if len(levels) != len(h0.modes) or any(not 0 <= l_ < m_.dim for l_, m_ in zip(levels, h0.modes)):
        raise PreconditionError("levels {} do not fit modes with dimensions {}".format(tuple(levels), h0.dims))
    psi_ = np.zeros(h0.dimension, dtype=complex)
    psi_[np.ravel_multi_index(tuple(levels), h0.dims)] = 1.
    return psi_


class Trajectory(Report):
    def __init__(self, times=(), expectations=None, **kwargs):
        super().__init__(times=list(times), expectations=dict(expectations or {}), **kwargs)
        self.state = None

    def to_rows(self):
        names_ = sorted(self["expectations"])
        header_ = ["time"] + names_
        rows_ = [[t_] + [self["expectations"][n_][k_] for n_ in names_] for k_, t_ in enumerate(self["times"])]
        return header_, rows_


class _Recorder:
    def __init__(self, propagator: Propagator, observables: typing.Mapping[str, np.ndarray]):
        self._prop = propagator
        self._obs = observables
        self.times = []
        self.values = {n_: [] for n_ in observables}
        self.norms = []
        self.energies = []

    def __call__(self, t: float, psi_e: np.ndarray):
        self.times.append(t)
        p_e_ = np.abs(psi_e) ** 2
        self.norms.append(math.sqrt(float(p_e_.sum())))
        self.energies.append(float(p_e_ @ self._prop.energies))
        psi_ = self._prop.to_product(psi_e)
        p_ = np.abs(psi_) ** 2
        for n_, a_ in self._obs.items():
            if 1 == a_.ndim:
                self.values[n_].append(float(p_ @ a_))
            else:
                self.values[n_].append(float(np.vdot(psi_, a_ @ psi_).real))


def step_halving(run: typing.Callable[[int], typing.Tuple[typing.Any, typing.Mapping[str, typing.Sequence[float]]]],
                 tolerance: float, max_halvings: int = MAX_HALVINGS) -> typing.Tuple[typing.Any, float, int]:
    """
    run(k) propagates with dt / 2**k and records on the same time grid for every k
    halve until two consecutive runs agree within tolerance in every recorded series
    :returns: finest result, last difference and the number of halvings
    :raises ConvergenceError: still apart after max_halvings
    """
    result_, series_ = run(0)
    diff_ = math.inf
    for k_ in range(1, max(1, max_halvings) + 1):
        fine_, fine_series_ = run(k_)
        diff_ = 0.
        for n_, values_ in series_.items():
            m_ = min(len(values_), len(fine_series_[n_]))
            if m_:
                diff_ = max(diff_, float(np.max(np.abs(np.subtract(values_[:m_], fine_series_[n_][:m_])))))
        result_, series_ = fine_, fine_series_
        if diff_ <= tolerance:
            return result_, diff_, k_
        _lg.debug("step halving %d changes expectations by %.3g", k_, diff_)
    raise ConvergenceError("step halving changes expectations by {:.3g} > {:.3g} after {} halvings".format(
        diff_, tolerance, max_halvings))


def evolve(h0: FockOperator, drive: typing.Optional[DriveTerm], psi0: np.ndarray, duration: float, dt: float,
           observables: typing.Optional[typing.Mapping[str, np.ndarray]] = None, record_every: int = 1,
           norm_tolerance: float = 1e-8, check_convergence: bool = False, convergence_tolerance: float = 1e-6,
           propagator: typing.Optional[Propagator] = None, max_halvings: int = MAX_HALVINGS) -> Trajectory:
    """
    propagate psi0 (product basis of h0) under h0 + drive
    with check_convergence the step is halved until runs at dt and dt/2 agree within convergence_tolerance
    and the trajectory of the finer run is returned
    :raises TimeStepError: dt above DT_FACTOR / (spectral half-width + drive strength)
    :raises NormDriftError: |norm - 1| above norm_tolerance at any recorded time
    :raises ConvergenceError: runs at dt and dt/2 still differ by more than convergence_tolerance
    """
    psi0_ = np.asarray(psi0, dtype=complex)
    if psi0_.shape != (h0.dimension,):
        raise PreconditionError("initial state of shape {} for an operator of dimension {}".format(
            psi0_.shape, h0.dimension))
    if abs(np.linalg.norm(psi0_) - 1.) > 1e-10:
        raise PreconditionError("initial state is not normalized (norm {:.12g})".format(np.linalg.norm(psi0_)))
    if not duration > 0:
        raise PreconditionError("duration must be positive, got {}".format(duration))
    prop_ = propagator or Propagator(h0, drive)
    amplitude_ = drive.spec.amplitude if drive is not None else 0.
    limit_ = prop_.max_dt(amplitude_)
    if dt > limit_:
        raise TimeStepError("dt = {:.4g} does not resolve the fastest frequency, use dt <= {:.4g}".format(dt, limit_))
    obs_ = dict(observables) if observables is not None else default_observables(h0)
    coefficient_ = drive.coefficient if drive is not None else None
    steps_ = max(1, int(round(duration / dt)))
    psi0_e_ = prop_.to_eigenbasis(psi0_)

    def run(halvings: int) -> typing.Tuple[Trajectory, dict]:
        n_ = steps_ * 2 ** halvings
        rec_ = _Recorder(prop_, obs_)
        final_ = prop_.run(psi0_e_, coefficient_, duration, duration / n_, rec_, record_every * 2 ** halvings)
        drift_ = max(abs(x_ - 1.) for x_ in rec_.norms)
        if drift_ > norm_tolerance:
            worst_ = int(np.argmax([abs(x_ - 1.) for x_ in rec_.norms]))
            raise NormDriftError("norm drift {:.3g} at t = {:.6g} exceeds {:.3g}".format(
                drift_, rec_.times[worst_], norm_tolerance))
        e0_ = rec_.energies[0]
        trajectory_ = Trajectory(times=rec_.times, expectations=rec_.values, norm_drift=drift_,
                                 energy_drift=abs(rec_.energies[-1] - e0_) / max(abs(e0_), 1e-300),
                                 final_norm=rec_.norms[-1], dt=duration / n_, steps=n_)
        trajectory_.state = prop_.to_product(final_)
        return trajectory_, rec_.values

    if not check_convergence:
        return run(0)[0]
    trajectory_, diff_, halvings_ = step_halving(run, convergence_tolerance, max_halvings)
    trajectory_["convergence"] = diff_
    trajectory_["halvings"] = halvings_
    return trajectory_


def sideband_lines(delta: float, frequencies: typing.Mapping[str, float], order: int = 1,
                   pairs: typing.Sequence[typing.Tuple[str, str]] = ()) -> typing.List[dict]:
    """
    predicted sideband positions |Delta +- k omega| per resonator (or normal mode) and
    |Delta +- Omega_a +- Omega_b| per pair, sorted by frequency
    """
    lines_ = []
    for name_, w_ in sorted(frequencies.items()):
        for k_ in range(1, order + 1):
            lines_.append({"line": "|Delta-{}{}|".format("" if 1 == k_ else k_, name_),
                           "frequency": abs(delta - k_ * w_), "order": k_})
            lines_.append({"line": "|Delta+{}{}|".format("" if 1 == k_ else k_, name_),
                           "frequency": abs(delta + k_ * w_), "order": k_})
    for a_, b_ in pairs:
        for s1_, s2_ in itertools.product((1, -1), repeat=2):
            lines_.append({"line": "|Delta{}{}{}{}|".format("+" if s1_ > 0 else "-", a_, "+" if s2_ > 0 else "-", b_),
                           "frequency": abs(delta + s1_ * frequencies[a_] + s2_ * frequencies[b_]), "order": 2})
    return sorted(lines_, key=lambda x_: (x_["frequency"], x_["line"]))


class ResonanceTable(Report):
    def to_rows(self):
        peaks_ = {p_["index"] for p_ in self.get("peaks", [])}
        header_ = ["frequency", "transfer", "peak"]
        rows_ = [[w_, x_, int(i_ in peaks_)] for i_, (w_, x_) in enumerate(zip(self["frequencies"], self["transfer"]))]
        return header_, rows_


def find_resonances(frequencies: typing.Sequence[float], transfer: typing.Sequence[float],
                    threshold: float = 1e-6) -> typing.List[dict]:
    """local maxima above threshold with their full width at half maximum"""
    y_ = np.asarray(transfer, dtype=float)
    w_ = np.asarray(frequencies, dtype=float)
    if y_.size < 3 or np.max(y_) < threshold:
        return []
    idx_, _ = ssig.find_peaks(y_, height=threshold)
    if 0 == idx_.size:
        return []
    widths_ = ssig.peak_widths(y_, idx_, rel_height=.5)[0]
    step_ = float(np.mean(np.diff(w_)))
    return [{"index": int(i_), "frequency": float(w_[i_]), "transfer": float(y_[i_]), "width": float(x_ * step_)}
            for i_, x_ in zip(idx_, widths_)]


def sideband_scan(model: SpinBosonModel, template: DriveSpec, frequencies: typing.Sequence[float],
                  resonator_levels: typing.Union[int, typing.Sequence[int]] = 5, dt: typing.Optional[float] = None,
                  record_every: int = 10, initial_qubit: str = "e", flat_threshold: float = 1e-6,
                  threads: typing.Optional[int] = None, norm_tolerance: float = 1e-8,
                  convergence_tolerance: typing.Optional[float] = 1e-6, max_halvings: int = MAX_HALVINGS
                  ) -> ResonanceTable:
    """
    drive the target qubit at every frequency and record the largest population reached in dressed
    states whose qubit and photon labels both differ from the initial state
    the initial state is the dressed state labelled (target in initial_qubit, others g, vacuum)
    every point is step-halved until its transfer curve converges, unless convergence_tolerance is None
    """
    if not isinstance(model, SpinBosonModel):
        raise PreconditionError("sideband scans need a two-level reduced spin-boson model")
    template.check()
    h_ = spin_boson_hamiltonian(model, resonator_levels)
    drive_ = build_drive(template, h_)
    prop_ = Propagator(h_, drive_)
    labels_, _ = product_labels(prop_.vectors, h_.basis_labels())
    nq_ = len(model.qubits)
    start_ = [0] * len(h_.modes)
    start_[model.qubit_index(template.target)] = 1 if "e" == initial_qubit else 0
    start_ = tuple(start_)
    i0_ = labels_.index(start_)
    targets_ = np.array([l_[:nq_] != start_[:nq_] and l_[nq_:] != start_[nq_:] for l_ in labels_])
    dt_ = dt if dt is not None else .9 * prop_.max_dt(template.amplitude)
    if dt_ > prop_.max_dt(template.amplitude):
        raise TimeStepError("dt = {:.4g} does not resolve the fastest frequency, use dt <= {:.4g}".format(
            dt_, prop_.max_dt(template.amplitude)))
    steps_ = max(1, int(round(template.duration / dt_)))
    psi0_ = np.zeros(h_.dimension, dtype=complex)
    psi0_[i0_] = 1.

    def point(omega: float) -> typing.Tuple[float, float]:
        term_ = drive_._replace(spec=template._replace(frequency=float(omega)))

        def run(halvings: int) -> typing.Tuple[float, dict]:
            transfer_ = []

            def record(t_, psi_e_):
                transfer_.append(float(np.sum(np.abs(psi_e_[targets_]) ** 2)))

            n_ = steps_ * 2 ** halvings
            final_ = prop_.run(psi0_, term_.coefficient, template.duration, template.duration / n_, record,
                               record_every * 2 ** halvings)
            if abs(np.linalg.norm(final_) - 1.) > norm_tolerance:
                raise NormDriftError("norm drift {:.3g} at drive frequency {}".format(
                    abs(np.linalg.norm(final_) - 1.), omega))
            return max(transfer_), {"transfer": transfer_}

        if convergence_tolerance is None:
            return run(0)[0], math.nan
        best_, diff_, _ = step_halving(run, convergence_tolerance, max_halvings)
        return best_, diff_

    grid_ = [float(w_) for w_ in frequencies]
    _lg.info("scanning %d drive frequencies on %s (dimension %d, dt %.4g)", len(grid_), template.target,
             h_.dimension, dt_)
    results_ = ScanSpawner(threads).map(point, grid_)
    transfer_ = [r_[0] for r_ in results_]
    peaks_ = find_resonances(grid_, transfer_, flat_threshold)
    table_ = ResonanceTable(frequencies=grid_, transfer=transfer_, peaks=peaks_, flat=not peaks_,
                            initial=list(start_), dt=template.duration / steps_, target=template.target)
    if convergence_tolerance is not None:
        table_["convergence"] = max(r_[1] for r_ in results_) if results_ else 0.
    return table_


class FrequencyPlan(Report):
    """coupler values per connection and the resulting normal-mode frequencies"""
    def to_rows(self):
        header_ = ["connection", "g_c", "omega_plus", "omega_minus"]
        rows_ = [[c_, self["g_c"][c_], self["frequencies"][c_][0], self["frequencies"][c_][1]]
                 for c_ in self["connections"]]
        return header_, rows_

    def all_frequencies(self) -> typing.List[float]:
        return [w_ for c_ in self["connections"] for w_ in self["frequencies"][c_]]

    def verify(self, tolerance: float = 1e-9) -> typing.List[str]:
        """re-check the plan with the quadratic normal-mode oracle; empty means valid"""
        problems_ = []
        for c_ in self["connections"]:
            w1_, w2_ = self["omega"][c_]
            try:
                plus_, minus_ = quadratic_normal_mode_oracle(w1_, w2_, self["g_c"][c_])
            except InstabilityError as e_:
                problems_.append("{}: {}".format(c_, e_))
                continue
            for stored_, oracle_ in zip(self["frequencies"][c_], (plus_, minus_)):
                if abs(stored_ - oracle_) > tolerance * abs(oracle_):
                    problems_.append("{}: stored frequency {} differs from {}".format(c_, stored_, oracle_))
        freqs_ = sorted(self.all_frequencies())
        for a_, b_ in toolz.sliding_window(2, freqs_):
            if b_ - a_ < self["guard"]:
                problems_.append("frequencies {} and {} are closer than the guard band {}".format(
                    a_, b_, self["guard"]))
        return problems_


def _min_gap(values: typing.Sequence[float]) -> float:
    v_ = sorted(values)
    if len(v_) < 2:
        return math.inf
    return min(b_ - a_ for a_, b_ in toolz.sliding_window(2, v_))


def frequency_plan(n_connections: int, omegas, g_range: typing.Tuple[float, float], guard: float,
                   grid_points: int = 281) -> FrequencyPlan:
    """
    greedy choice of one g_c per connection from a uniform grid, each maximizing the smallest
    pairwise gap among all Omega_pm chosen so far
    :param omegas: bare frequency for all resonators, or per connection a frequency or a (omega1, omega2) pair
    :raises InfeasiblePlanError: the guard band cannot be reached
    """
    if not guard > 0:
        raise PreconditionError("guard band must be positive, got {}".format(guard))
    if n_connections < 1:
        raise PreconditionError("need at least one connection")
    lo_, hi_ = float(g_range[0]), float(g_range[1])
    if not 0 < lo_ <= hi_:
        raise PreconditionError("invalid g_c search range {}".format(g_range))
    if isinstance(omegas, (list, tuple)):
        if len(omegas) != n_connections:
            raise PreconditionError("need {} resonator frequencies, got {}".format(n_connections, len(omegas)))
        pairs_ = [tuple(w_) if isinstance(w_, (list, tuple)) else (float(w_), float(w_)) for w_ in omegas]
    else:
        pairs_ = [(float(omegas), float(omegas))] * n_connections
    names_ = list(CONNECTION_NAMES[:n_connections]) if n_connections <= len(CONNECTION_NAMES) else \
        ["c{}".format(j_ + 1) for j_ in range(n_connections)]
    grid_ = np.linspace(lo_, hi_, grid_points) if hi_ > lo_ else np.array([lo_])
    chosen_, g_c_, freqs_ = [], {}, {}
    for name_, (w1_, w2_) in zip(names_, pairs_):
        best_ = None
        for g_ in grid_:
            try:
                plus_, minus_ = normal_mode_frequencies(w1_, w2_, float(g_))
            except InstabilityError:
                continue
            gap_ = _min_gap(chosen_ + [plus_, minus_])
            if best_ is None or gap_ > best_[0]:
                best_ = (gap_, float(g_), plus_, minus_)
        if best_ is None:
            raise InfeasiblePlanError("no stable coupler value for connection {} in {}".format(name_, g_range))
        _, g_, plus_, minus_ = best_
        g_c_[name_] = g_
        freqs_[name_] = [plus_, minus_]
        chosen_ += [plus_, minus_]
    gap_ = _min_gap(chosen_)
    if gap_ < guard:
        raise InfeasiblePlanError("best plan reaches a minimum gap of {:.4g}, below the guard band {}".format(
            gap_, guard))
    _lg.info("frequency plan with minimum gap %.4g for %d connections", gap_, n_connections)
    return FrequencyPlan(connections=names_, g_c=g_c_, omega={n_: list(p_) for n_, p_ in zip(names_, pairs_)},
                         frequencies=freqs_, guard=float(guard), min_gap=gap_)


class LocalityReport(Report):
    def to_rows(self):
        header_ = ["item", "kind", "disturbance", "simulated"]
        rows_ = [[q_, "qubit", x_, int(q_ in self["simulated"])] for q_, x_ in sorted(self["qubits"].items())]
        rows_ += [[r_, "resonator", x_, int(r_ in self["simulated"])]
                  for r_, x_ in sorted(self["resonators"].items())]
        return header_, rows_


def reachable_subsystem(model: SpinBosonModel, qubit: int) -> typing.Tuple[typing.List[int], typing.List[int]]:
    """
    driven qubit, every resonator connected to it through qubit-resonator and resonator-resonator
    terms, and the qubits coupled to those resonators
    """
    adjacency_ = {}
    for k_ in model.resonator_couplings:
        adjacency_.setdefault(k_.first, set()).add(k_.second)
        adjacency_.setdefault(k_.second, set()).add(k_.first)
    resonators_ = set(model.resonators_of(qubit))
    frontier_ = list(resonators_)
    while frontier_:
        r_ = frontier_.pop()
        for s_ in adjacency_.get(r_, ()):
            if s_ not in resonators_:
                resonators_.add(s_)
                frontier_.append(s_)
    qubits_ = {c_.qubit for c_ in model.couplings if c_.resonator in resonators_} - {qubit}
    return [qubit] + sorted(qubits_), sorted(resonators_)


def locality_probe(model: SpinBosonModel, spec: DriveSpec, resonator_levels: int = 4, scope: str = "reachable",
                   dt: typing.Optional[float] = None, record_every: int = 10, initial_qubit: str = "e",
                   norm_tolerance: float = 1e-8, convergence_tolerance: typing.Optional[float] = 1e-6,
                   max_halvings: int = MAX_HALVINGS) -> LocalityReport:
    """
    largest |change of <sigma_z>| on every undriven qubit and largest photon-number difference to the
    undriven evolution on every resonator, starting from the driven qubit in initial_qubit, every other
    qubit in g and all resonators in vacuum
    with scope "reachable" only the subsystem the drive can reach is simulated: every other part couples
    through sigma_z of an undriven qubit, which the Hamiltonian conserves, so its evolution does not depend
    on the drive; those items are reported as None and listed under "unsimulated".
    scope "full" simulates the whole model
    """
    spec.check()
    driven_ = model.qubit_index(spec.target)
    if "full" == scope:
        qubits_ = [driven_] + [q_ for q_ in range(len(model.qubits)) if q_ != driven_]
        resonators_ = list(range(len(model.resonators)))
    elif "reachable" == scope:
        qubits_, resonators_ = reachable_subsystem(model, driven_)
    else:
        raise PreconditionError("unknown locality scope {}".format(scope))
    sub_ = model.restrict(qubits_, resonators_)
    h_ = spin_boson_hamiltonian(sub_, resonator_levels)
    drive_ = build_drive(spec._replace(target=sub_.qubits[0]), h_)
    prop_ = Propagator(h_, drive_)
    dt_ = dt if dt is not None else .9 * prop_.max_dt(spec.amplitude)
    levels_ = [0] * len(h_.modes)
    levels_[0] = 1 if "e" == initial_qubit else 0
    psi0_ = basis_state(h_, levels_)
    obs_ = default_observables(h_)
    _lg.info("locality probe on %s: simulating %d qubits and %d resonators (dimension %d)", sub_.qubits[0],
             len(qubits_), len(resonators_), h_.dimension)
    driven_run_ = evolve(h_, drive_, psi0_, spec.duration, dt_, obs_, record_every, norm_tolerance,
                         convergence_tolerance is not None, convergence_tolerance or 0., prop_, max_halvings)
    reference_ = evolve(h_, None, psi0_, spec.duration, dt_, obs_, record_every, norm_tolerance, propagator=prop_)
    qubit_table_ = {l_: None for i_, l_ in enumerate(model.qubits) if i_ != driven_}
    resonator_table_ = {l_: None for l_ in model.resonators}
    for l_ in sub_.qubits[1:]:
        z_ = np.asarray(driven_run_["expectations"]["sigma_z:" + l_])
        qubit_table_[l_] = float(np.max(np.abs(z_ - z_[0])))
    for l_ in sub_.resonators:
        a_ = np.asarray(driven_run_["expectations"]["number:" + l_])
        b_ = np.asarray(reference_["expectations"]["number:" + l_][:len(a_)])
        resonator_table_[l_] = float(np.max(np.abs(a_ - b_)))
    neighbours_ = [model.resonators[r_] for r_ in reachable_subsystem(model, driven_)[1]]
    others_ = [x_ for r_, x_ in resonator_table_.items() if r_ not in neighbours_ and x_ is not None]
    simulated_ = list(sub_.qubits) + list(sub_.resonators)
    report_ = LocalityReport(
        driven=model.qubits[driven_], scope=scope, qubits=qubit_table_, resonators=resonator_table_,
        neighbourhood=neighbours_, simulated=simulated_,
        unsimulated=[l_ for l_ in list(qubit_table_) + list(resonator_table_) if l_ not in simulated_],
        max_qubit_disturbance=max([x_ for x_ in qubit_table_.values() if x_ is not None] + [0.]),
        max_non_neighbour_transfer=max(others_ + [0.]),
        norm_drift=driven_run_["norm_drift"], driven_sigma_z=driven_run_["expectations"]["sigma_z:" + sub_.qubits[0]])
    if "convergence" in driven_run_:
        report_["convergence"] = driven_run_["convergence"]
    return report_
