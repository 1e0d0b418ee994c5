"""Run configuration: JSON parsing, validation and the figure presets."""
from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field, replace

import jsonschema

from .chain import LatticeConfig, PhaseMode
from .errors import ParseError, ValidationError
from .model import CouplingConfig, DispersionModel, EmitterConfig, Linear, Nonlinear

TASKS = ("spectrum", "chain", "bands", "gapfit")

_num = {"type": "number"}


def _obj(props, required=()):
    return {"type": "object", "additionalProperties": False, "properties": props, "required": list(required)}


SCHEMA = _obj({
    "task": {"enum": list(TASKS)},
    "frequency_unit": {"enum": ["omega2", "absolute"]},
    "emitter": _obj({k: _num for k in ("omega2", "delta", "gamma2", "gamma3", "omega_rabi")}),
    "coupling": _obj({k: _num for k in ("gamma_L", "gamma_R", "V_L", "V_R", "v_g")}),
    "dispersion": _obj({"kind": {"enum": ["linear", "nonlinear"]}, "J": _num, "v_g": _num}, ["kind"]),
    "lattice": _obj({
        "n_emitters": {"type": "integer"},
        "spacing": _num,
        "phase_mode": {"enum": [m.value for m in PhaseMode]},
    }),
    "sweep": _obj({"omega_min": _num, "omega_max": _num, "n_points": {"type": "integer"},
                   "derivative": {"type": "boolean"}}),
    "bands": _obj({"spacings": {"type": "array", "items": _num, "minItems": 1},
                   "omega_min": _num, "omega_max": _num, "resolution": _num}),
    "gapfit": _obj({"j_min": _num, "j_max": _num, "n_j": {"type": "integer"}, "spacing": _num}),
    "outputs": _obj({"format": {"enum": ["csv", "json"]}, "path": {"type": ["string", "null"]}}),
}, ["emitter", "coupling"])


@dataclass(frozen=True)
class SweepConfig:
    omega_min: float = 0.5
    omega_max: float = 1.5
    n_points: int = 2001
    derivative: bool = False

    def __post_init__(self):
        if not self.omega_min < self.omega_max:
            raise ValueError("omega_min must be < omega_max")
        if self.n_points < 2:
            raise ValueError("n_points must be >= 2")


@dataclass(frozen=True)
class BandsConfig:
    spacings: tuple[float, ...] = (0.045, 0.05)
    omega_min: float = 0.01
    omega_max: float = 2.0
    resolution: float = 1e-4

    def __post_init__(self):
        object.__setattr__(self, "spacings", tuple(float(s) for s in self.spacings))
        if any(not s > 0 for s in self.spacings):
            raise ValueError("spacings must be > 0")
        if not self.omega_min < self.omega_max:
            raise ValueError("omega_min must be < omega_max")
        if not 0 < self.resolution <= 1e-4:
            raise ValueError("resolution must be in (0, 1e-4] (>= 1e4 points per omega2)")


@dataclass(frozen=True)
class GapFitConfig:
    j_min: float = 1.2
    j_max: float = 5.0
    n_j: int = 20
    spacing: float = 0.045

    def __post_init__(self):
        if not (self.j_min > 0 and self.j_max >= self.j_min):
            raise ValueError("need 0 < j_min <= j_max")
        if self.n_j < 1:
            raise ValueError("n_j must be >= 1")
        if self.n_j > 1 and self.j_min == self.j_max:
            raise ValueError("j_min == j_max only allowed with n_j = 1")
        if not self.spacing > 0:
            raise ValueError("spacing must be > 0")


@dataclass(frozen=True)
class OutputConfig:
    format: str = "csv"
    path: str | None = None


@dataclass(frozen=True)
class RunConfig:
    emitter: EmitterConfig
    coupling: CouplingConfig
    dispersion: DispersionModel = field(default_factory=Linear)
    lattice: LatticeConfig | None = None
    sweep: SweepConfig = field(default_factory=SweepConfig)
    bands: BandsConfig = field(default_factory=BandsConfig)
    gapfit: GapFitConfig = field(default_factory=GapFitConfig)
    outputs: OutputConfig = field(default_factory=OutputConfig)
    task: str | None = None

    def lossless(self) -> "RunConfig":
        return replace(self, emitter=replace(self.emitter, gamma2=0.0, gamma3=0.0))

    def with_phase_mode(self, mode) -> "RunConfig":
        lattice = self.lattice or LatticeConfig()
        return replace(self, lattice=replace(lattice, phase_mode=PhaseMode(mode)))


# Fields carrying a frequency or rate, rescaled by omega2 when given in
# absolute units.
_FREQUENCY_FIELDS = {
    "emitter": ("omega2", "delta", "gamma2", "gamma3", "omega_rabi"),
    "coupling": ("gamma_L", "gamma_R"),
    "dispersion": ("J",),
    "sweep": ("omega_min", "omega_max"),
    "bands": ("omega_min", "omega_max", "resolution"),
    "gapfit": ("j_min", "j_max"),
}


def _normalize_units(doc):
    unit = doc.pop("frequency_unit", "omega2")
    coupling = doc["coupling"]
    if "V_L" in coupling or "V_R" in coupling:
        v_g = coupling.get("v_g", 1.0)
        converted = CouplingConfig.from_amplitudes(coupling.pop("V_L", 0.0), coupling.pop("V_R", 0.0), v_g)
        coupling["gamma_L"], coupling["gamma_R"] = converted.gamma_L, converted.gamma_R
    if unit == "omega2":
        return doc
    scale = doc["emitter"].get("omega2", 1.0)
    if not (isinstance(scale, (int, float)) and scale > 0):
        raise ValidationError("must be > 0 when frequency_unit is absolute", "$.emitter.omega2")
    for section, names in _FREQUENCY_FIELDS.items():
        for name in names:
            if section in doc and name in doc[section]:
                doc[section][name] = doc[section][name] / scale
    return doc


def _build(where, factory, /, **kwargs):
    try:
        return factory(**kwargs)
    except (TypeError, ValueError) as exc:
        name = str(exc).split(" ", 1)[0]
        raise ValidationError(str(exc), f"{where}.{name}" if name in kwargs else where) from exc


def _check_coupling(doc):
    c = doc["coupling"]
    has_rates = "gamma_L" in c or "gamma_R" in c
    has_amps = "V_L" in c or "V_R" in c
    if has_rates and has_amps:
        raise ValidationError("give either gamma_L/gamma_R or V_L/V_R, not both", "$.coupling")
    if not (has_rates or has_amps):
        raise ValidationError("missing gamma_L/gamma_R (or V_L/V_R)", "$.coupling")


def config_from_dict(doc: dict) -> RunConfig:
    try:
        jsonschema.validate(doc, SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ValidationError(exc.message, exc.json_path) from None
    doc = copy.deepcopy(doc)
    _check_coupling(doc)
    doc = _normalize_units(doc)

    emitter = _build("$.emitter", EmitterConfig, **doc["emitter"])
    c = doc["coupling"]
    coupling = _build("$.coupling", CouplingConfig,
                      gamma_L=c.get("gamma_L", 0.0), gamma_R=c.get("gamma_R", 0.0), v_g=c.get("v_g", 1.0))
    d = doc.get("dispersion", {"kind": "linear"})
    if d["kind"] == "nonlinear":
        if "J" not in d:
            raise ValidationError("nonlinear dispersion needs J", "$.dispersion")
        dispersion = _build("$.dispersion.J", Nonlinear, J=d["J"])
        if coupling.v_g != 1.0:
            raise ValidationError("nonlinear dispersion is dimensionless; v_g must be 1", "$.coupling.v_g")
    else:
        if "J" in d:
            raise ValidationError("J is only valid for nonlinear dispersion", "$.dispersion.J")
        dispersion = _build("$.dispersion", Linear, v_g=d.get("v_g", coupling.v_g))
        if dispersion.v_g != coupling.v_g:
            raise ValidationError("dispersion.v_g must equal coupling.v_g", "$.dispersion.v_g")
    lattice = None
    if "lattice" in doc:
        lattice = _build("$.lattice", LatticeConfig, **doc["lattice"])
    sweep = _build("$.sweep", SweepConfig, **doc.get("sweep", {}))
    if isinstance(dispersion, Nonlinear) and sweep.omega_min <= 0:
        raise ValidationError("nonlinear dispersion requires omega_min > 0", "$.sweep.omega_min")
    bands = _build("$.bands", BandsConfig, **doc.get("bands", {}))
    gapfit = _build("$.gapfit", GapFitConfig, **doc.get("gapfit", {}))
    outputs = _build("$.outputs", OutputConfig, **doc.get("outputs", {}))
    return RunConfig(emitter, coupling, dispersion, lattice, sweep, bands, gapfit, outputs, doc.get("task"))


def parse_config(text: str) -> RunConfig:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc.msg} (line {exc.lineno}, column {exc.colno})") from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be a JSON object")
    return config_from_dict(doc)


def config_to_dict(config: RunConfig) -> dict:
    e, c = config.emitter, config.coupling
    doc = {
        "frequency_unit": "omega2",
        "emitter": {"omega2": e.omega2, "delta": e.delta, "gamma2": e.gamma2,
                    "gamma3": e.gamma3, "omega_rabi": e.omega_rabi},
        "coupling": {"gamma_L": c.gamma_L, "gamma_R": c.gamma_R, "v_g": c.v_g},
    }
    if isinstance(config.dispersion, Nonlinear):
        doc["dispersion"] = {"kind": "nonlinear", "J": config.dispersion.J}
    else:
        doc["dispersion"] = {"kind": "linear", "v_g": config.dispersion.v_g}
    if config.lattice is not None:
        lat = config.lattice
        doc["lattice"] = {"n_emitters": lat.n_emitters, "spacing": lat.spacing,
                          "phase_mode": lat.phase_mode.value}
    s, b, g, o = config.sweep, config.bands, config.gapfit, config.outputs
    doc["sweep"] = {"omega_min": s.omega_min, "omega_max": s.omega_max,
                    "n_points": s.n_points, "derivative": s.derivative}
    doc["bands"] = {"spacings": list(b.spacings), "omega_min": b.omega_min,
                    "omega_max": b.omega_max, "resolution": b.resolution}
    doc["gapfit"] = {"j_min": g.j_min, "j_max": g.j_max, "n_j": g.n_j, "spacing": g.spacing}
    doc["outputs"] = {"format": o.format, "path": o.path}
    if config.task is not None:
        doc["task"] = config.task
    return doc


def dump_config(config: RunConfig) -> str:
    return json.dumps(config_to_dict(config), indent=2, sort_keys=True)


# Figure presets.  Common single-emitter parameters: Omega = 0.2, gamma2 = 0.1,
# gamma3 = 0, Delta = 0; over-coupled means Gamma = 4 gamma2.
_G2 = 0.1
_EMITTER = {"omega2": 1.0, "delta": 0.0, "gamma2": _G2, "gamma3": 0.0, "omega_rabi": 0.2}
_LOSSLESS = dict(_EMITTER, gamma2=0.0)


def _rates(gamma):
    return {"gamma_L": gamma, "gamma_R": gamma, "v_g": 1.0}


def _spectrum(gamma, dispersion, lo, hi, n=2001, derivative=False):
    return {"task": "spectrum", "emitter": dict(_EMITTER), "coupling": _rates(gamma),
            "dispersion": dispersion,
            "sweep": {"omega_min": lo, "omega_max": hi, "n_points": n, "derivative": derivative}}


def _nonlinear(J):
    return {"kind": "nonlinear", "J": J}


PRESETS: dict[str, dict] = {
    "fig2a-oc": _spectrum(4 * _G2, {"kind": "linear"}, 0.5, 1.5),
    "fig2a-uc": _spectrum(_G2 / 2, {"kind": "linear"}, 0.5, 1.5),
    "fig2a-cr": _spectrum(_G2, {"kind": "linear"}, 0.5, 1.5),
    "fig2b-J0.5": _spectrum(4 * _G2, _nonlinear(0.5), 0.01, 1.5),
    "fig2b-J1.0": _spectrum(4 * _G2, _nonlinear(1.0), 0.01, 1.5),
    "fig2b-J2.5": _spectrum(4 * _G2, _nonlinear(2.5), 0.01, 1.5),
    "fig2c": _spectrum(4 * _G2, _nonlinear(2.5), 0.05, 1.5, derivative=True),
    "fig4": {"task": "bands", "emitter": dict(_LOSSLESS), "coupling": _rates(4 * _G2),
             "dispersion": _nonlinear(2.5),
             "lattice": {"n_emitters": 1, "spacing": 0.045, "phase_mode": "frequency_dependent"},
             "bands": {"spacings": [0.045, 0.05], "omega_min": 0.01, "omega_max": 2.0, "resolution": 1e-4}},
    "fig4-inset": {"task": "gapfit", "emitter": dict(_LOSSLESS), "coupling": _rates(4 * _G2),
                   "lattice": {"n_emitters": 1, "spacing": 0.045, "phase_mode": "frequency_dependent"},
                   "gapfit": {"j_min": 1.2, "j_max": 5.0, "n_j": 20, "spacing": 0.045}},
}
for _n in (2, 5, 10):
    PRESETS[f"fig3-N{_n}"] = {
        "task": "chain", "emitter": dict(_EMITTER), "coupling": _rates(4 * _G2),
        "dispersion": _nonlinear(2.5),
        "lattice": {"n_emitters": _n, "spacing": 0.5, "phase_mode": "frequency_dependent"},
        "sweep": {"omega_min": 0.01, "omega_max": 1.5, "n_points": 3001},
    }


def preset(name: str) -> RunConfig:
    try:
        doc = PRESETS[name]
    except KeyError:
        raise ValidationError(f"unknown preset {name!r}; see `wqed presets`") from None
    return config_from_dict(doc)
