import configparser as cp
import logging
import os
import typing

_lg = logging.getLogger("fluxlattice")

# built-in defaults, overridden by the settings file and then by command line flags
DEFAULTS = {
    "FLUXLATTICE": {
        "qubit_levels": 12,
        "resonator_levels": 10,
        "qubit_basis": 80,
        "anharmonicity_factor": 10.,
        "dispersive_warning": 0.3,
        "hermiticity_tolerance": 1e-12,
        "truncation_population": 1e-6,
        "norm_tolerance": 1e-8,
        "convergence_tolerance": 1e-6,
        "max_halvings": 4,
        "threads": 0,
        },
    "SCAN": {
        "amplitude": 0.05,
        "duration": 200.,
        "dt": 0.,
        "kind": "voltage",
        "envelope": "constant",
        "ramp": 0.,
        "initial_qubit": "e",
        "resonator_levels": 5,
        },
    }


class ConfigReader:
    def __init__(self, settings_file: typing.Optional[str] = None):
        if settings_file is None:   # pragma: no branch
            settings_file = "settings.ini"
        self._settings = {k_: dict(v_) for k_, v_ in DEFAULTS.items()}
        if not os.path.exists(settings_file):
            _lg.debug("no settings file %s, using built-in defaults", settings_file)
            return
        try:
            parser_ = cp.ConfigParser()
            _lg.debug("reading file %s" % settings_file)
            parser_.read(settings_file)
            for section_, defaults_ in DEFAULTS.items():
                if section_ not in parser_.sections():
                    continue
                for k_, v_ in parser_[section_].items():
                    if k_ not in defaults_:
                        _lg.warning("ignoring unknown setting %s in [%s]", k_, section_)
                        continue
                    # cast to the type of the built-in default
                    self._settings[section_][k_] = type(defaults_[k_])(v_)
        except Exception as e_:
            _lg.error("failed to read the config file %s: %s", settings_file, e_)
            raise

    def get(self, key: str, section: str = "FLUXLATTICE"):
        return self._settings[section][key]

    def section(self, section: str) -> dict:
        return dict(self._settings[section])

    def override(self, section: str, **kwargs) -> "ConfigReader":
        """apply non-None command line values on top of the file settings"""
        for k_, v_ in kwargs.items():
            if v_ is not None and k_ in self._settings[section]:
                self._settings[section][k_] = v_
        return self

    @property
    def threads(self) -> int:
        """
        scan parallelism: settings value capped by FLUXLATTICE_THREADS
        :return: int, 0 means use every available slot
        """
        n_ = int(self._settings["FLUXLATTICE"]["threads"])
        env_ = os.environ.get("FLUXLATTICE_THREADS", None)
        if env_:
            try:
                cap_ = int(env_)
            except ValueError:
                _lg.warning("ignoring invalid FLUXLATTICE_THREADS value %s", env_)
                return n_
            if cap_ > 0:
                n_ = cap_ if n_ <= 0 else min(n_, cap_)
        return n_

    @property
    def qubit_levels(self) -> int:
        return int(self._settings["FLUXLATTICE"]["qubit_levels"])

    @property
    def resonator_levels(self) -> int:
        return int(self._settings["FLUXLATTICE"]["resonator_levels"])

    @property
    def qubit_basis(self) -> int:
        return int(self._settings["FLUXLATTICE"]["qubit_basis"])

    @property
    def anharmonicity_factor(self) -> float:
        return float(self._settings["FLUXLATTICE"]["anharmonicity_factor"])

    @property
    def dispersive_warning(self) -> float:
        return float(self._settings["FLUXLATTICE"]["dispersive_warning"])

    @property
    def norm_tolerance(self) -> float:
        return float(self._settings["FLUXLATTICE"]["norm_tolerance"])

    @property
    def convergence_tolerance(self) -> typing.Optional[float]:
        """agreement required between runs at dt and dt/2, None when the check is switched off"""
        tol_ = float(self._settings["FLUXLATTICE"]["convergence_tolerance"])
        return tol_ if tol_ > 0 else None

    @property
    def max_halvings(self) -> int:
        return int(self._settings["FLUXLATTICE"]["max_halvings"])
