from .errors import FluxLatticeError, NumericError, ValidationError
from .netlist import Branch, Circuit, builtin_circuit, parse_netlist, serialize_netlist, validate_circuit
from .lagrangian import (LagrangianModel, LinearTransform, QuadraticForm, SinusoidTerm, apply_linear_transform,
                         build_lagrangian, cholesky_eliminate, reduce_circuit, standard_block_transform)
from .fock import FockOperator, Mode, OneModeHamiltonian
from .spectra import (SpinBosonModel, classify_coupling, eigensystem, lang_firsov_frame, normal_mode_frequencies,
                      schrieffer_wolff_frame, spin_boson_hamiltonian)
from .quantize import (HamiltonianModel, derived_parameters, fock_hamiltonian, legendre_transform,
                       truncation_stability, two_level_reduce)
from .dynamics import DriveSpec, build_drive, evolve, frequency_plan, locality_probe, sideband_scan
from .reports import Report, export_report
from .cli import FluxLattice, main
