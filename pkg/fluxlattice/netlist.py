"""
circuit descriptions: nodes, branches and flux offsets

element values are stored in canonical units: capacitances in farads,
inductances in henries, Josephson energies as angular frequencies (rad/s, hbar = 1).
external flux is carried by the junction branches as a phase offset:
a junction contributes U = -E_J cos(phi_i - phi_j - phase_offset), a junction array
U = -E_J cos((phi_i - phi_j) / k - phase_offset). the spanning-tree convention is therefore
"every loop flux is assigned to the junction branches closing the loop"; builtin circuits
put pi/2 on every coupling junction (Phi_x = Phi_0/4 per loop, k Phi_0/4 for arrays)
"""
import json
import logging
import math
import typing

import toolz
from scipy import constants

from .errors import NetlistError, TopologyError

_lg = logging.getLogger("fluxlattice")

CAPACITOR = "C"
INDUCTOR = "L"
JUNCTION = "JJ"
JUNCTION_ARRAY = "JJ_ARRAY"
BRANCH_KINDS = (CAPACITOR, INDUCTOR, JUNCTION, JUNCTION_ARRAY)
_KIND_ALIASES = {
    "Capacitor": CAPACITOR, "Inductor": INDUCTOR,
    "Junction": JUNCTION, "JunctionArray": JUNCTION_ARRAY}

TWO_PI = 2. * math.pi

# unit -> (kind family, factor to canonical)
UNITS = {
    "F": ("C", 1.),
    "pF": ("C", 1e-12),
    "fF": ("C", 1e-15),
    "H": ("L", 1.),
    "uH": ("L", 1e-6),
    "nH": ("L", 1e-9),
    "pH": ("L", 1e-12),
    "rad/s": ("E", 1.),
    "GHz": ("E", TWO_PI * 1e9),
    "MHz": ("E", TWO_PI * 1e6),
    }
_CANONICAL_UNIT = {CAPACITOR: "F", INDUCTOR: "H", JUNCTION: "rad/s", JUNCTION_ARRAY: "rad/s"}
_FAMILY = {CAPACITOR: "C", INDUCTOR: "L", JUNCTION: "E", JUNCTION_ARRAY: "E"}


def charging_energy(capacitance: float) -> float:
    """E_C = e^2 / 2C as an angular frequency"""
    return constants.e ** 2 / (2. * capacitance * constants.hbar)


def inductive_energy(inductance: float) -> float:
    """E_L = (Phi_0 / 2 pi)^2 / L as an angular frequency"""
    return (constants.hbar / (2. * constants.e)) ** 2 / (inductance * constants.hbar)


def to_ghz(omega: float) -> float:
    return omega / (TWO_PI * 1e9)


class Branch(typing.NamedTuple):
    kind: str
    nodes: typing.Tuple[str, str]
    value: float
    phase_offset: float = 0.
    k: int = 1
    label: str = ""

    @classmethod
    def from_units(cls, kind: str, nodes: typing.Sequence[str], value: float, unit: str,
            phase_offset: float = 0., k: int = 1, label: str = "") -> "Branch":
        kind = _KIND_ALIASES.get(kind, kind)
        if kind not in BRANCH_KINDS:
            raise NetlistError("unknown branch kind {}".format(kind))
        if unit not in UNITS:
            raise NetlistError("unknown unit {} for {} branch".format(unit, kind))
        family_, factor_ = UNITS[unit]
        if family_ != _FAMILY[kind]:
            raise NetlistError("unit {} does not apply to a {} branch".format(unit, kind))
        if factor_ == 1.:
            value_ = float(value)
        else:
            value_ = float(value) * factor_
        return cls(kind=kind, nodes=(str(nodes[0]), str(nodes[1])), value=value_,
                   phase_offset=float(phase_offset), k=int(k), label=label)

    @property
    def is_junction(self) -> bool:
        return self.kind in (JUNCTION, JUNCTION_ARRAY)


class Circuit(typing.NamedTuple):
    name: str
    nodes: typing.Tuple[str, ...]
    branches: typing.Tuple[Branch, ...]
    ground: typing.Optional[str] = None
    metadata: typing.Optional[dict] = None

    @property
    def topology(self) -> typing.Optional[str]:
        if not self.metadata:
            return None
        return self.metadata.get("topology", None)

    @property
    def reference(self) -> str:
        """node whose phase is fixed to zero: the ground, else the last node"""
        return self.ground if self.ground is not None else self.nodes[-1]

    @property
    def variables(self) -> typing.List[str]:
        ref_ = self.reference
        return [n_ for n_ in self.nodes if n_ != ref_]

    def branches_of(self, kind: str) -> typing.List[Branch]:
        return [b_ for b_ in self.branches if b_.kind == kind]


class ValidationReport(list):
    """list of violated circuit invariants, empty means valid"""
    @property
    def valid(self) -> bool:
        return 0 == len(self)

    def to_dict(self) -> dict:
        return {"valid": self.valid, "violations": list(self)}


def validate_circuit(c: Circuit) -> ValidationReport:
    report_ = ValidationReport()
    nodes_ = list(c.nodes)
    declared_ = set(nodes_)
    if len(declared_) != len(nodes_):
        dups_ = sorted(k_ for k_, v_ in toolz.frequencies(nodes_).items() if v_ > 1)
        report_.append("duplicate node declaration: {}".format(", ".join(dups_)))
    if isinstance(c.ground, (list, tuple)):
        if len(c.ground) > 1:
            report_.append("more than one ground node flagged")
    elif c.ground is not None and c.ground not in declared_:
        report_.append("ground node {} is not declared".format(c.ground))
    if 0 == len(c.branches):
        report_.append("circuit has no branches")

    for i_, b_ in enumerate(c.branches):
        tag_ = "branch {} ({} {}-{})".format(i_, b_.kind, *b_.nodes)
        if b_.kind not in BRANCH_KINDS:
            report_.append("{}: unknown branch kind".format(tag_))
        for n_ in b_.nodes:
            if n_ not in declared_:
                report_.append("{}: undeclared node {}".format(tag_, n_))
        if b_.nodes[0] == b_.nodes[1]:
            report_.append("{}: endpoints are not distinct".format(tag_))
        if not (b_.value > 0) or not math.isfinite(b_.value):
            report_.append("{}: non-positive value {}".format(tag_, b_.value))
        if b_.is_junction and not (0. <= b_.phase_offset < TWO_PI):
            report_.append("{}: phase offset {} outside [0, 2pi)".format(tag_, b_.phase_offset))
        if b_.kind == JUNCTION_ARRAY and b_.k < 1:
            report_.append("{}: array length {} below 1".format(tag_, b_.k))

    # connectivity over declared nodes
    adjacency_ = {n_: set() for n_ in declared_}
    for b_ in c.branches:
        u_, v_ = b_.nodes
        if u_ in adjacency_ and v_ in adjacency_:
            adjacency_[u_].add(v_)
            adjacency_[v_].add(u_)
    if nodes_:
        seen_ = {nodes_[0]}
        stack_ = [nodes_[0]]
        while stack_:
            for m_ in adjacency_[stack_.pop()]:
                if m_ not in seen_:
                    seen_.add(m_)
                    stack_.append(m_)
        if len(seen_) != len(declared_):
            report_.append("circuit is disconnected: {} unreachable from {}".format(
                ", ".join(sorted(declared_ - seen_)), nodes_[0]))
    if report_:
        _lg.debug("circuit %s has %d violations", c.name, len(report_))
    return report_


def parse_netlist(text: typing.Union[str, bytes]) -> Circuit:
    """
    parse a json netlist document
    :param text: utf-8 json, {"name", "nodes", "ground", "branches": [{"kind", "nodes", "value", "unit",
        "phase_offset"?, "k"?, "label"?}], "metadata"?}
    :return: Circuit with branches in document order, values in canonical units
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        doc_ = json.loads(text)
    except json.JSONDecodeError as e_:
        raise NetlistError("syntax error at line {} column {} (char {}): {}".format(
            e_.lineno, e_.colno, e_.pos, e_.msg)) from e_
    if not isinstance(doc_, dict):
        raise NetlistError("netlist document must be a json object")
    nodes_ = doc_.get("nodes", None)
    if not isinstance(nodes_, list) or not all(isinstance(n_, str) for n_ in nodes_):
        raise NetlistError("'nodes' must be a list of node names")
    declared_ = set(nodes_)
    ground_ = doc_.get("ground", None)
    if ground_ is not None and ground_ not in declared_:
        raise NetlistError("ground node {} is not declared".format(ground_))
    raw_branches_ = doc_.get("branches", None)
    if not isinstance(raw_branches_, list):
        raise NetlistError("'branches' must be a list")

    branches_ = []
    for i_, rb_ in enumerate(raw_branches_):
        if not isinstance(rb_, dict):
            raise NetlistError("branch {} is not an object".format(i_))
        kind_ = _KIND_ALIASES.get(rb_.get("kind"), rb_.get("kind"))
        if kind_ not in BRANCH_KINDS:
            raise NetlistError("branch {}: unknown branch kind {}".format(i_, rb_.get("kind")))
        ends_ = rb_.get("nodes", None)
        if not isinstance(ends_, list) or 2 != len(ends_):
            raise NetlistError("branch {}: 'nodes' must name exactly two nodes".format(i_))
        for n_ in ends_:
            if n_ not in declared_:
                raise NetlistError("branch {}: undeclared node {}".format(i_, n_))
        value_ = rb_.get("value", None)
        if isinstance(value_, bool) or not isinstance(value_, (int, float)):
            raise NetlistError("branch {}: value must be a number".format(i_))
        if not value_ > 0:
            raise NetlistError("branch {}: non-positive value {}".format(i_, value_))
        unit_ = rb_.get("unit", _CANONICAL_UNIT[kind_])
        offset_ = rb_.get("phase_offset", 0.)
        if not isinstance(offset_, (int, float)) or not (0. <= offset_ < TWO_PI):
            raise NetlistError("branch {}: phase_offset must be a number in [0, 2pi)".format(i_))
        if offset_ and kind_ not in (JUNCTION, JUNCTION_ARRAY):
            raise NetlistError("branch {}: phase_offset only applies to junctions".format(i_))
        k_ = rb_.get("k", 1)
        if not isinstance(k_, int) or k_ < 1:
            raise NetlistError("branch {}: k must be a positive integer".format(i_))
        branches_.append(Branch.from_units(kind_, ends_, value_, unit_, offset_, k_, rb_.get("label", "")))

    c_ = Circuit(name=str(doc_.get("name", "")), nodes=tuple(nodes_), branches=tuple(branches_),
                 ground=ground_, metadata=doc_.get("metadata", None))
    _lg.debug("parsed netlist %s: %d nodes, %d branches", c_.name, len(c_.nodes), len(c_.branches))
    return c_


def serialize_netlist(c: Circuit) -> str:
    """json document in canonical units; parse_netlist(serialize_netlist(c)) == c"""
    branches_ = []
    for b_ in c.branches:
        d_ = {"kind": b_.kind, "nodes": list(b_.nodes), "value": b_.value, "unit": _CANONICAL_UNIT[b_.kind]}
        if b_.is_junction:
            d_["phase_offset"] = b_.phase_offset
        if b_.kind == JUNCTION_ARRAY:
            d_["k"] = b_.k
        if b_.label:
            d_["label"] = b_.label
        branches_.append(d_)
    doc_ = {"name": c.name, "nodes": list(c.nodes), "ground": c.ground, "branches": branches_}
    if c.metadata is not None:
        doc_["metadata"] = c.metadata
    return json.dumps(doc_, indent=2)


# builtin circuits, document units: fF, nH, GHz
BUILTIN_DEFAULTS = {
    "qubit_resonator": {"C_q": 10., "E_Jq": 12., "C": 20., "L": 30., "E_J": 1., "E_J1": None, "E_J2": None},
    "qubit_n_resonators": {"n": 2, "C_q": 10., "E_Jq": 12., "C": 20., "L": 30., "E_J": 1.},
    "two_blocks": {"C_q": 10., "E_Jq": 12., "C": 20., "L": 30., "E_J": 1., "C_g": 5., "C_s": 0.},
    "plaquette": {"C_q": 10., "E_Jq": 12., "C": 20., "L": 30., "E_J": 1., "C_g": 5., "C_s": 0.},
    "junction_array_coupler": {"C_q": 10., "E_Jq": 12., "C": 20., "L": 30., "E_J": 1., "k": 3},
    }
BUILTIN_NAMES = tuple(BUILTIN_DEFAULTS.keys())
CONNECTION_NAMES = ("alpha", "beta", "gamma", "delta")


def _per(params: dict, key: str, count: int) -> list:
    v_ = params[key]
    if v_ is None:
        raise TopologyError("missing required parameter {}".format(key))
    if isinstance(v_, (list, tuple)):
        if len(v_) != count:
            raise TopologyError("parameter {} needs {} values, got {}".format(key, count, len(v_)))
        return [float(x_) for x_ in v_]
    return [float(v_)] * count


class _Builder:
    """accumulates branches and topology metadata for the builtin generators"""
    def __init__(self, name: str):
        self.name = name
        self.nodes = []
        self.branches = []
        self.metadata = {"topology": name, "blocks": [], "arms": [], "connections": []}

    def node(self, *names):
        for n_ in names:
            if n_ not in self.nodes:
                self.nodes.append(n_)

    def add(self, kind, a, b, value, unit, phase_offset=0., k=1, label=""):
        self.node(a, b)
        self.branches.append(Branch.from_units(kind, (a, b), value, unit, phase_offset, k, label))

    def qubit(self, i: int, c_q: float, e_jq: float):
        a_, b_ = "a{}".format(i), "b{}".format(i)
        self.add(CAPACITOR, a_, b_, c_q, "fF", label="Cq{}".format(i))
        if e_jq > 0:
            self.add(JUNCTION, a_, b_, e_jq, "GHz", label="EJq{}".format(i))
        self.metadata["blocks"].append({"qubit": "q{}".format(i), "a": a_, "b": b_})
        return a_, b_

    def arm(self, block: int, c_node: str, resonator: str, c: float, l: float,
            e_j_upper: float, e_j_lower: float, k: int = 1, connection: typing.Optional[str] = None):
        blk_ = self.metadata["blocks"][block]
        kind_ = JUNCTION if 1 == k else JUNCTION_ARRAY
        for end_, e_j_ in ((blk_["a"], e_j_upper), (blk_["b"], e_j_lower)):
            self.add(CAPACITOR, end_, c_node, c, "fF", label="C:{}".format(resonator))
            self.add(INDUCTOR, end_, c_node, l, "nH", label="L:{}".format(resonator))
            if e_j_ > 0:
                self.add(kind_, end_, c_node, e_j_, "GHz", phase_offset=math.pi / 2., k=k,
                         label="EJ:{}".format(resonator))
        self.metadata["arms"].append({"resonator": resonator, "block": block, "c": c_node,
                                      "connection": connection})

    def ground_ties(self, block: int, ground: str, c_g: float, connection: str):
        # one C_g pair per connection a qubit block takes part in
        blk_ = self.metadata["blocks"][block]
        for end_ in (blk_["a"], blk_["b"]):
            self.add(CAPACITOR, end_, ground, c_g, "fF", label="Cg:{}:{}".format(blk_["qubit"], connection))

    def build(self, ground=None, params=None) -> Circuit:
        meta_ = dict(self.metadata)
        meta_["params"] = params or {}
        if ground is not None:
            # reference node goes last
            self.nodes = [n_ for n_ in self.nodes if n_ != ground] + [ground]
        return Circuit(name=self.name, nodes=tuple(self.nodes), branches=tuple(self.branches),
                       ground=ground, metadata=meta_)


def _qubit_resonator(p: dict, k: int = 1, name: str = "qubit_resonator") -> Circuit:
    b_ = _Builder(name)
    b_.qubit(1, p["C_q"], p["E_Jq"])
    upper_ = p["E_J1"] if p.get("E_J1", None) is not None else p["E_J"]
    lower_ = p["E_J2"] if p.get("E_J2", None) is not None else p["E_J"]
    b_.arm(0, "c1", "r1", p["C"], p["L"], upper_, lower_, k=k)
    return b_.build(params=p)


def _qubit_n_resonators(p: dict) -> Circuit:
    n_ = int(p["n"])
    if n_ < 1:
        raise TopologyError("qubit_n_resonators needs n >= 1")
    b_ = _Builder("qubit_n_resonators")
    b_.qubit(1, p["C_q"], p["E_Jq"])
    for j_, (c_, l_, e_j_) in enumerate(zip(_per(p, "C", n_), _per(p, "L", n_), _per(p, "E_J", n_))):
        b_.arm(0, "c{}".format(j_ + 1), "r{}".format(j_ + 1), c_, l_, e_j_, e_j_)
    return b_.build(params=p)


def _ring(p: dict, blocks: int, name: str) -> Circuit:
    # two_blocks is the open chain of two blocks with one connection,
    # the plaquette closes four blocks into a ring with four connections
    connections_ = 1 if 2 == blocks else blocks
    b_ = _Builder(name)
    c_q_, e_jq_ = _per(p, "C_q", blocks), _per(p, "E_Jq", blocks)
    for i_ in range(blocks):
        b_.qubit(i_ + 1, c_q_[i_], e_jq_[i_])
    # arm values are per block
    c_, l_, e_j_ = _per(p, "C", blocks), _per(p, "L", blocks), _per(p, "E_J", blocks)
    c_g_, c_s_ = _per(p, "C_g", connections_), _per(p, "C_s", connections_)
    for j_ in range(connections_):
        conn_ = CONNECTION_NAMES[j_]
        c_node_ = "c_{}".format(conn_) if connections_ > 1 else "c"
        members_ = [j_, (j_ + 1) % blocks]
        for i_ in members_:
            res_ = "r{}".format(i_ + 1) if connections_ == 1 else "r{}{}".format(i_ + 1, conn_)
            b_.arm(i_, c_node_, res_, c_[i_], l_[i_], e_j_[i_], e_j_[i_], connection=conn_)
            b_.ground_ties(i_, "g", c_g_[j_], conn_)
        if c_s_[j_] > 0:
            b_.add(CAPACITOR, c_node_, "g", c_s_[j_], "fF", label="Cs:{}".format(conn_))
        b_.metadata["connections"].append({"name": conn_, "c": c_node_, "blocks": members_})
    return b_.build(ground="g", params=p)


def builtin_circuit(name: str, params: typing.Optional[dict] = None) -> Circuit:
    """
    circuits of the longitudinal-coupling construction
    :param name: one of BUILTIN_NAMES
    :param params: overrides of BUILTIN_DEFAULTS[name] (document units fF, nH, GHz)
    :return: Circuit with topology metadata (blocks, resonator arms, connections)
    """
    if name not in BUILTIN_DEFAULTS:
        raise TopologyError("unknown builtin circuit {} - should be one of {}".format(name, BUILTIN_NAMES))
    params = dict(params or {})
    unknown_ = set(params) - set(BUILTIN_DEFAULTS[name])
    if unknown_:
        raise TopologyError("unknown parameters for {}: {}".format(name, sorted(unknown_)))
    p_ = toolz.merge(BUILTIN_DEFAULTS[name], params)
    for k_ in ("C_q", "E_Jq", "C", "L", "E_J"):
        if p_.get(k_, 0) is None:
            raise TopologyError("missing required parameter {}".format(k_))
    _lg.debug("building %s with %s", name, p_)
    if "qubit_resonator" == name:
        return _qubit_resonator(p_)
    if "junction_array_coupler" == name:
        k_ = int(p_["k"])
        if k_ < 1:
            raise TopologyError("junction array length must be positive")
        return _qubit_resonator(p_, k=k_, name=name)
    if "qubit_n_resonators" == name:
        return _qubit_n_resonators(p_)
    if "two_blocks" == name:
        return _ring(p_, 2, name)
    return _ring(p_, 4, name)
