import argparse
import json
import logging
import sys
import typing

import numpy as np

from .config_reader import ConfigReader
from .dynamics import (CONSTANT, COSINE_RAMP, FLUX, VOLTAGE, DriveSpec, frequency_plan, locality_probe,
                       sideband_lines, sideband_scan)
from .errors import FluxLatticeError, InfeasiblePlanError, PreconditionError, ValidationError
from .lagrangian import build_lagrangian, check_reduction, model_to_dict, reduce_circuit
from .netlist import BUILTIN_NAMES, Circuit, builtin_circuit, parse_netlist, validate_circuit
from .quantize import (derived_parameters, fock_hamiltonian, legendre_transform, one_mode_hamiltonian,
                       truncation_stability, two_level_reduce)
from .reports import Report, export_report
from .spectra import (CouplingClass, classify_asymmetric_coupling, eigensystem, grid_spin_boson,
                      normal_mode_table, spin_boson_hamiltonian)

_lg = logging.getLogger("fluxlattice")

# circuit-derived spin-boson models are propagated in rad/ns
TIME_UNIT = 1e-9
_CSV_FIRST = ("spectrum", "scan")


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise PreconditionError("invalid command line: {}".format(message))


def _key_value(text: str) -> typing.Tuple[str, typing.Any]:
    if "=" not in text:
        raise PreconditionError("expected key=value, got {}".format(text))
    k_, v_ = text.split("=", 1)
    try:
        return k_.strip(), json.loads(v_)
    except json.JSONDecodeError:
        return k_.strip(), v_.strip()


class FluxLattice:
    """
    command line front end: every subcommand turns its input into a Report and exports it;
    exit code 0 on success, 1 on validation failures, 2 on numeric failures
    """
    def __init__(self, argv: typing.Optional[typing.Sequence[str]] = None):
        self._argv = list(sys.argv[1:] if argv is None else argv)
        self._cmdline = {}
        self._config = None

    # noinspection PyProtectedMember
    def _setup(self):
        cmdline_ = FluxLattice._parse_cmdline(self._argv)
        # sanity check
        if cmdline_["log_level"] not in logging._nameToLevel.keys():
            cmdline_["log_level"] = "INFO"
        logging.basicConfig(
            format="[%(asctime)s][%(levelname)s][%(name)s][%(filename)s:%(lineno)s] %(message)s")
        logging.root.setLevel(logging._nameToLevel[cmdline_["log_level"]])
        _lg.debug("command line parsed as %s", cmdline_)
        self._cmdline = cmdline_
        self._config = ConfigReader(cmdline_["settings_file"])
        self._config.override("FLUXLATTICE", threads=cmdline_.get("threads"))
        self._config.override("SCAN", **{k_: cmdline_.get(k_) for k_ in
                                         ("amplitude", "duration", "dt", "kind", "envelope", "ramp",
                                          "initial_qubit", "resonator_levels")})

    @staticmethod
    def _parse_cmdline(argv: typing.Sequence[str]) -> dict:
        common_ = _ArgumentParser(add_help=False)
        common_.add_argument("--settings_file", "-s", type=str, default="settings.ini",
                             help="custom settings file (default is settings.ini)")
        common_.add_argument("--log_level", "-l", type=str, choices=["DEBUG", "INFO", "WARNING", "ERROR"],
                             default="WARNING", help="log level (default is WARNING)")
        common_.add_argument("--output", "-o", type=str, default=None,
                             help="output file (default is standard output)")
        common_.add_argument("--format", "-f", type=str, choices=["json", "csv"], default=None,
                             help="output format (default is csv for spectrum and scan, json otherwise)")
        common_.add_argument("--seed", type=int, default=0, help="seed of every sampled check (default is 0)")

        circuit_ = _ArgumentParser(add_help=False)
        source_ = circuit_.add_mutually_exclusive_group()
        source_.add_argument("--builtin", "-b", type=str, choices=BUILTIN_NAMES, default=None,
                             help="builtin circuit")
        source_.add_argument("--netlist", "-n", type=str, default=None, help="json netlist file")
        circuit_.add_argument("--param", "-p", type=_key_value, action="append", default=[],
                              help="builtin circuit parameter as key=value (json values, units fF, nH, GHz)")

        grid_ = _ArgumentParser(add_help=False)
        grid_.add_argument("--blocks", type=int, choices=[1, 2, 4], default=None,
                           help="use a spin-boson grid model with this many blocks instead of a circuit")
        grid_.add_argument("--delta", type=float, default=5., help="qubit gap of the grid model")
        grid_.add_argument("--omega", type=float, default=1., help="resonator frequency of the grid model")
        grid_.add_argument("--g", type=float, default=.05, help="longitudinal coupling of the grid model")
        grid_.add_argument("--g_c", type=float, default=0., help="resonator coupling of the grid model")
        grid_.add_argument("--epsilon", type=float, default=0., help="displacement term of the grid model")

        drive_ = _ArgumentParser(add_help=False)
        drive_.add_argument("--target", "-t", type=str, default="q1", help="driven qubit (default is q1)")
        drive_.add_argument("--amplitude", type=float, default=None)
        drive_.add_argument("--duration", type=float, default=None)
        drive_.add_argument("--dt", type=float, default=None)
        drive_.add_argument("--kind", type=str, choices=[VOLTAGE, FLUX], default=None)
        drive_.add_argument("--envelope", type=str, choices=[CONSTANT, COSINE_RAMP], default=None)
        drive_.add_argument("--ramp", type=float, default=None)
        drive_.add_argument("--initial_qubit", type=str, choices=["g", "e"], default=None)
        drive_.add_argument("--resonator_levels", type=int, default=None)

        ap_ = _ArgumentParser(prog="fluxlattice")
        sub_ = ap_.add_subparsers(dest="subcommand")
        sub_.required = True
        sub_.add_parser("validate", parents=[common_, circuit_], help="check a circuit")
        p_ = sub_.add_parser("reduce", parents=[common_, circuit_], help="reduced Lagrangian")
        p_.add_argument("--samples", type=int, default=16, help="random points of the reduction check")
        sub_.add_parser("params", parents=[common_, circuit_], help="derived circuit parameters")
        p_ = sub_.add_parser("spectrum", parents=[common_, circuit_, grid_], help="lowest levels")
        p_.add_argument("--levels", "-k", type=int, default=10)
        p_.add_argument("--truncation", type=_key_value, action="append", default=[],
                        help="levels kept per variable as label=dim")
        p_.add_argument("--linearize", action="store_true", help="linearize the junction couplings")
        p_.add_argument("--two_level", action="store_true", help="spectrum of the two-level reduced model")
        p_.add_argument("--stability", action="store_true",
                        help="also check that 5 more levels per mode leave the lowest 4 levels unchanged")
        p_ = sub_.add_parser("classify", parents=[common_, circuit_], help="coupling parity")
        p_.add_argument("--asymmetry", type=float, default=None,
                        help="junction asymmetry d, E_J1 = E_J (1 - d), E_J2 = E_J (1 + d)")
        p_ = sub_.add_parser("scan", parents=[common_, circuit_, grid_, drive_], help="sideband scan")
        p_.add_argument("--start", type=float, required=True)
        p_.add_argument("--stop", type=float, required=True)
        p_.add_argument("--steps", type=int, default=101)
        p_.add_argument("--threads", type=int, default=None)
        p_ = sub_.add_parser("plan", parents=[common_], help="coupler frequency plan")
        p_.add_argument("--connections", type=int, default=4)
        p_.add_argument("--omega", type=float, action="append", default=None,
                        help="bare resonator frequency, once or per connection (default 1)")
        p_.add_argument("--g_min", type=float, default=.02)
        p_.add_argument("--g_max", type=float, default=.3)
        p_.add_argument("--guard", type=float, default=.01)
        p_.add_argument("--grid_points", type=int, default=281)
        p_ = sub_.add_parser("locality", parents=[common_, circuit_, grid_, drive_], help="drive locality probe")
        p_.add_argument("--frequency", type=float, required=True)
        p_.add_argument("--scope", type=str, choices=["reachable", "full"], default="reachable")
        return ap_.parse_args(argv).__dict__

    def _circuit(self) -> Circuit:
        if self._cmdline.get("netlist"):
            if self._cmdline["param"]:
                raise PreconditionError("--param applies to builtin circuits only")
            try:
                with open(self._cmdline["netlist"], "rb") as f_:
                    text_ = f_.read()
            except OSError as e_:
                raise PreconditionError("cannot read netlist {}: {}".format(self._cmdline["netlist"], e_))
            return parse_netlist(text_)
        if not self._cmdline.get("builtin"):
            raise PreconditionError("one of --builtin or --netlist is required")
        return builtin_circuit(self._cmdline["builtin"], dict(self._cmdline["param"]))

    def _hamiltonian(self):
        reduced_, _ = reduce_circuit(self._circuit())
        return legendre_transform(reduced_)

    def _spin_boson(self):
        if self._cmdline.get("blocks"):
            c_ = self._cmdline
            return grid_spin_boson(c_["blocks"], c_["delta"], c_["omega"], c_["g"], c_["g_c"], c_["epsilon"])
        model_, _ = two_level_reduce(self._hamiltonian(), basis=self._config.qubit_basis,
                                     anharmonicity_factor=self._config.anharmonicity_factor)
        return model_.scaled(TIME_UNIT)

    def _drive(self, frequency: float = 0.) -> DriveSpec:
        s_ = self._config.section("SCAN")
        return DriveSpec(target=self._cmdline["target"], amplitude=float(s_["amplitude"]), frequency=frequency,
                         envelope=s_["envelope"], duration=float(s_["duration"]), kind=s_["kind"],
                         ramp=float(s_["ramp"])).check()

    def _validate(self):
        report_ = validate_circuit(self._circuit())
        if not report_.valid:
            for v_ in report_:
                print(v_, file=sys.stderr)
        return report_

    def _reduce(self) -> Report:
        c_ = self._circuit()
        original_ = build_lagrangian(c_)
        reduced_, transforms_ = reduce_circuit(c_)
        check_ = check_reduction(original_, reduced_, transforms_, self._cmdline["samples"],
                                 self._cmdline["seed"])
        return Report(original=model_to_dict(original_), reduced=model_to_dict(reduced_),
                      transforms=[{"labels": list(t_.labels), "matrix": t_.matrix} for t_ in transforms_],
                      check=check_)

    def _params(self) -> Report:
        return derived_parameters(self._hamiltonian(), basis=self._config.qubit_basis)

    def _spectrum(self) -> Report:
        tolerance_ = float(self._config.get("hermiticity_tolerance"))
        if self._cmdline.get("blocks") or self._cmdline["two_level"]:
            return eigensystem(spin_boson_hamiltonian(self._spin_boson(), self._config.resonator_levels),
                               self._cmdline["levels"], tolerance_)
        options_ = dict(linearize_coupling=self._cmdline["linearize"],
                        qubit_levels=self._config.qubit_levels,
                        resonator_levels=self._config.resonator_levels,
                        qubit_basis=self._config.qubit_basis,
                        truncation_tolerance=float(self._config.get("truncation_population")),
                        hermiticity_tolerance=tolerance_)
        h_ = self._hamiltonian()
        op_ = fock_hamiltonian(h_, dict(self._cmdline["truncation"]), **options_)
        spectrum_ = eigensystem(op_, self._cmdline["levels"], tolerance_)
        if self._cmdline["stability"]:
            spectrum_["truncation_stability"] = truncation_stability(h_, dict(zip(op_.labels, op_.dims)),
                                                                     **options_)
        return spectrum_

    def _classify(self) -> Report:
        d_ = self._cmdline["asymmetry"]
        params_ = dict(self._cmdline["param"])
        if d_ is not None:
            if "qubit_resonator" != self._cmdline.get("builtin"):
                raise PreconditionError("--asymmetry applies to the qubit_resonator builtin")
            if not -1. < d_ < 1.:
                raise PreconditionError("asymmetry must lie in (-1, 1), got {}".format(d_))
            c_ = builtin_circuit("qubit_resonator", params_)
            e_j_ = float(c_.metadata["params"]["E_J"])
            params_.update(E_J1=e_j_ * (1. - d_), E_J2=e_j_ * (1. + d_))
            self._cmdline["param"] = list(params_.items())
        h_ = self._hamiltonian()
        _, residual_ = two_level_reduce(h_, basis=self._config.qubit_basis, anharmonicity_factor=0.)
        couplings_ = {}
        for x_ in residual_["couplings"]:
            k_ = CouplingClass(x_["L"], x_["T"])
            k_["ratio"] = x_["T"] / abs(x_["L"]) if x_["L"] else float("inf")
            couplings_["{}-{}".format(x_["qubit"], x_["resonator"])] = k_
        out_ = Report(couplings=couplings_)
        if d_ is not None:
            e_j_ = float(h_.metadata["params"]["E_J"]) * 2. * np.pi * 1e9
            qubit_ = one_mode_hamiltonian(h_, h_.qubit_labels[0])
            out_["asymmetry"] = classify_asymmetric_coupling(qubit_, e_j_ * (1. - d_), e_j_ * (1. + d_),
                                                             basis=self._config.qubit_basis)
        return out_

    def _dynamics_tolerances(self) -> dict:
        return {"norm_tolerance": self._config.norm_tolerance,
                "convergence_tolerance": self._config.convergence_tolerance,
                "max_halvings": self._config.max_halvings}

    def _scan(self) -> Report:
        model_ = self._spin_boson()
        s_ = self._config.section("SCAN")
        grid_ = np.linspace(self._cmdline["start"], self._cmdline["stop"], self._cmdline["steps"])
        table_ = sideband_scan(model_, self._drive(), grid_, resonator_levels=int(s_["resonator_levels"]),
                               dt=float(s_["dt"]) or None, initial_qubit=s_["initial_qubit"],
                               threads=self._config.threads, **self._dynamics_tolerances())
        q_ = model_.qubit_index(self._cmdline["target"])
        frequencies_ = {r_: w_ for r_, w_ in zip(model_.resonators, model_.omega)}
        frequencies_.update({"Omega+({})".format(k_): p_[0] for k_, p_ in normal_mode_table(model_).items()})
        frequencies_.update({"Omega-({})".format(k_): p_[1] for k_, p_ in normal_mode_table(model_).items()})
        table_["predicted"] = sideband_lines(model_.delta[q_], frequencies_)
        return table_

    def _plan(self) -> Report:
        omegas_ = self._cmdline["omega"] or [1.]
        omegas_ = omegas_[0] if 1 == len(omegas_) else list(omegas_)
        plan_ = frequency_plan(self._cmdline["connections"], omegas_,
                               (self._cmdline["g_min"], self._cmdline["g_max"]), self._cmdline["guard"],
                               self._cmdline["grid_points"])
        problems_ = plan_.verify()
        if problems_:
            raise InfeasiblePlanError("plan failed verification: {}".format("; ".join(problems_)))
        return plan_

    def _locality(self) -> Report:
        s_ = self._config.section("SCAN")
        return locality_probe(self._spin_boson(), self._drive(self._cmdline["frequency"]),
                              resonator_levels=int(s_["resonator_levels"]), scope=self._cmdline["scope"],
                              dt=float(s_["dt"]) or None, initial_qubit=s_["initial_qubit"],
                              **self._dynamics_tolerances())

    def run(self) -> int:
        try:
            self._setup()
            sub_ = self._cmdline["subcommand"]
            _lg.info("running %s", sub_)
            report_ = getattr(self, "_" + sub_)()
            fmt_ = self._cmdline["format"] or ("csv" if sub_ in _CSV_FIRST else "json")
            try:
                text_ = export_report(report_, fmt_, self._cmdline["output"])
            except ValueError as e_:
                raise PreconditionError(str(e_))
            except OSError as e_:
                raise PreconditionError("cannot write {}: {}".format(self._cmdline["output"], e_))
            if not self._cmdline["output"] or "-" == self._cmdline["output"]:
                sys.stdout.write(text_)
            if "validate" == sub_ and not report_.valid:
                return ValidationError.exit_code
            return 0
        except FluxLatticeError as e_:
            _lg.error("[%s] %s", e_.__class__.__name__, e_)
            return e_.exit_code


def main(argv: typing.Optional[typing.Sequence[str]] = None) -> int:
    return FluxLattice(argv).run()
