"""Robot configuration files (YAML): schema, validation and round-tripping.

The loaded document is normalized (every optional field filled in, numbers
as floats, angles kept in degrees as written) and kept on the config object;
domain objects are built from it. Dumping writes the normalized document
back, so load -> dump -> load is the identity.
"""
from __future__ import annotations

import copy
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import yaml

from .arrangement import CableArrangement
from .errors import CableWrenchError, MissingField, ParseError, ValidationError
from .geometry import Pose
from .kinematics import RobotGeometry
from .statics import TensionBox
from .workspace import GridSpec
from .wrist import WristParams

SCHEMA_VERSION = 1
REFERENCE_CONFIG = Path(__file__).with_name("data") / "reference.yaml"


@dataclass(frozen=True)
class SearchSettings:
    loop_anchor_pairs: tuple
    simple_anchors: tuple
    n_simple: int
    coarse_n: tuple | None
    slack: float
    top_k: int


@dataclass(frozen=True)
class RobotConfig:
    document: dict
    geometry: RobotGeometry
    box: TensionBox
    eq_tolerance: float | None
    grid: GridSpec
    arrangement: CableArrangement
    search: SearchSettings
    trajectories: dict

    @property
    def fabricated(self) -> list[str]:
        return [k for k, v in self.document.items() if isinstance(v, dict) and v.get("fabricated")]


def _get(doc: dict, path: str, default=...):
    node = doc
    for part in path.split("."):
        if not isinstance(node, dict) or part not in node:
            if default is ...:
                raise MissingField(path)
            return default
        node = node[part]
    return node


def _number(value, path, positive=False, nonneg=False) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(path, f"expected a number, got {value!r}")
    v = float(value)
    if not math.isfinite(v):
        raise ValidationError(path, "must be finite")
    if positive and v <= 0:
        raise ValidationError(path, "must be positive")
    if nonneg and v < 0:
        raise ValidationError(path, "must be non-negative")
    return v


def _vector(value, path, length=3) -> list:
    if not isinstance(value, (list, tuple)) or len(value) != length:
        raise ValidationError(path, f"expected a list of {length} numbers")
    return [_number(v, f"{path}[{i}]") for i, v in enumerate(value)]


def _points(value, path, count) -> list:
    if not isinstance(value, list) or len(value) != count:
        got = len(value) if isinstance(value, list) else type(value).__name__
        raise ValidationError(path, f"expected {count} points, got {got}")
    return [_vector(p, f"{path}[{i}]") for i, p in enumerate(value)]


def _int(value, path, low=None, high=None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(path, f"expected an integer, got {value!r}")
    if (low is not None and value < low) or (high is not None and value > high):
        raise ValidationError(path, f"must lie in [{low}, {high}]")
    return value


def _index_pairs(value, path, high) -> list:
    if not isinstance(value, list):
        raise ValidationError(path, "expected a list of index pairs")
    out = []
    for i, pair in enumerate(value):
        if not isinstance(pair, list) or len(pair) != 2:
            raise ValidationError(f"{path}[{i}]", "expected a pair of indices")
        out.append([_int(v, f"{path}[{i}]", 1, high) for v in pair])
    return out


def _tension_vector(value, path) -> list:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return [_number(value, path, nonneg=True)] * 8
    if not isinstance(value, list) or len(value) != 8:
        raise ValidationError(path, "expected a number or a list of 8 numbers")
    return [_number(v, f"{path}[{i}]", nonneg=True) for i, v in enumerate(value)]


def normalize(doc) -> dict:
    """Validate a raw document and return its normalized form."""
    if not isinstance(doc, dict):
        raise ValidationError("<root>", "configuration must be a mapping")
    version = _get(doc, "schema_version")
    if version != SCHEMA_VERSION:
        raise ValidationError("schema_version", f"unsupported version {version!r} (expected {SCHEMA_VERSION})")
    out = {"schema_version": SCHEMA_VERSION}

    def flag(section):
        return {"fabricated": bool(_get(doc, f"{section}.fabricated", False))}

    out["frame"] = flag("frame") | {"exit_points": _points(_get(doc, "frame.exit_points"), "frame.exit_points", 8)}

    out["platform"] = flag("platform") | {
        "anchors": _points(_get(doc, "platform.anchors"), "platform.anchors", 15),
        "mass": _number(_get(doc, "platform.mass"), "platform.mass", nonneg=True),
        "com": _vector(_get(doc, "platform.com", [0.0, 0.0, 0.0]), "platform.com"),
        "gravity": _number(_get(doc, "platform.gravity", 9.81), "platform.gravity"),
    }

    w = {
        "alpha_deg": _number(_get(doc, "wrist.alpha_deg", 35.2), "wrist.alpha_deg"),
        "beta_deg": _number(_get(doc, "wrist.beta_deg", 0.0), "wrist.beta_deg"),
        "gamma_deg": _vector(_get(doc, "wrist.gamma_deg", [0.0, 120.0, 240.0]), "wrist.gamma_deg"),
        "r_s": _number(_get(doc, "wrist.r_s"), "wrist.r_s", positive=True),
        "r_o": _number(_get(doc, "wrist.r_o"), "wrist.r_o", positive=True),
        "r_d": _number(_get(doc, "wrist.r_d"), "wrist.r_d", positive=True),
        "sphere_mass": _number(_get(doc, "wrist.sphere_mass", 0.0), "wrist.sphere_mass", nonneg=True),
    }
    if not 0.0 <= w["alpha_deg"] <= 180.0:
        raise ValidationError("wrist.alpha_deg", "must lie in [0, 180]")
    if not -90.0 <= w["beta_deg"] <= 90.0:
        raise ValidationError("wrist.beta_deg", "must lie in [-90, 90]")
    out["wrist"] = flag("wrist") | w

    t_min = _tension_vector(_get(doc, "tensions.t_min"), "tensions.t_min")
    t_max = _tension_vector(_get(doc, "tensions.t_max"), "tensions.t_max")
    if any(lo > hi for lo, hi in zip(t_min, t_max)):
        raise ValidationError("tensions", "t_min exceeds t_max for some cable")
    tol = _get(doc, "tensions.eq_tolerance", None)
    out["tensions"] = flag("tensions") | {
        "t_min": t_min,
        "t_max": t_max,
        "eq_tolerance": None if tol is None else _number(tol, "tensions.eq_tolerance", positive=True),
    }

    lower = _vector(_get(doc, "grid.lower"), "grid.lower")
    upper = _vector(_get(doc, "grid.upper"), "grid.upper")
    counts = _get(doc, "grid.n")
    if not isinstance(counts, list) or len(counts) != 3:
        raise ValidationError("grid.n", "expected 3 interval counts")
    counts = [_int(v, f"grid.n[{i}]", 1) for i, v in enumerate(counts)]
    if any(lo >= hi for lo, hi in zip(lower, upper)):
        raise ValidationError("grid", "lower must be below upper on every axis")
    out["grid"] = flag("grid") | {"lower": lower, "upper": upper, "n": counts}

    assignment = _index_pairs(_get(doc, "arrangement.assignment"), "arrangement.assignment", 15)
    if len(assignment) != 8 or any(e > 8 for e, _ in assignment):
        raise ValidationError("arrangement.assignment", "expected 8 (exit 1..8, anchor 1..15) pairs")
    out["arrangement"] = flag("arrangement") | {
        "assignment": assignment,
        "loop_pairs": _index_pairs(_get(doc, "arrangement.loop_pairs"), "arrangement.loop_pairs", 8),
        "simple_cables": [_int(v, "arrangement.simple_cables", 1, 8) for v in _get(doc, "arrangement.simple_cables")],
    }

    coarse = _get(doc, "search.coarse_n", None)
    if coarse is not None:
        if not isinstance(coarse, list) or len(coarse) != 3:
            raise ValidationError("search.coarse_n", "expected 3 interval counts or null")
        coarse = [_int(v, f"search.coarse_n[{i}]", 1) for i, v in enumerate(coarse)]
    simple = _get(doc, "search.simple_anchors", [1, 6, 11])
    out["search"] = flag("search") | {
        "loop_anchor_pairs": _index_pairs(
            _get(doc, "search.loop_anchor_pairs", [[3, 4], [8, 9], [13, 14]]), "search.loop_anchor_pairs", 15
        ),
        "simple_anchors": [_int(v, "search.simple_anchors", 1, 15) for v in simple],
        "n_simple": _int(_get(doc, "search.n_simple", 2), "search.n_simple", 0, 8),
        "coarse_n": coarse,
        "slack": _number(_get(doc, "search.slack", 0.05), "search.slack", nonneg=True),
        "top_k": _int(_get(doc, "search.top_k", 10), "search.top_k", 1),
    }

    tr = _get(doc, "trajectories", {})
    t1 = _get(tr, "trajectory_1", {})
    t2 = _get(tr, "trajectory_2", {})
    t3 = _get(tr, "trajectory_3", {})
    axes = ("x", "y", "z")
    for path, value in (("trajectories.trajectory_1.axis", t1.get("axis", "x")),
                        ("trajectories.trajectory_3.sphere_axis", t3.get("sphere_axis", "z"))):
        if value not in axes:
            raise ValidationError(path, "must be one of x, y, z")
    waypoints = t2.get("waypoints", [[0.0, 0.0, 2.0], [0.0, 0.0, 2.0]])
    if not isinstance(waypoints, list) or len(waypoints) < 2:
        raise ValidationError("trajectories.trajectory_2.waypoints", "expected at least 2 points")
    out["trajectories"] = flag("trajectories") | {
        "dt": _number(tr.get("dt", 0.01), "trajectories.dt", positive=True),
        "trajectory_1": {
            "position": _vector(t1.get("position", [0.0, 0.0, 2.0]), "trajectories.trajectory_1.position"),
            "axis": t1.get("axis", "x"),
            "amplitude_deg": _number(t1.get("amplitude_deg", 90.0), "trajectories.trajectory_1.amplitude_deg"),
            "duration": _number(t1.get("duration", 4.0), "trajectories.trajectory_1.duration", positive=True),
        },
        "trajectory_2": {
            "waypoints": _points(waypoints, "trajectories.trajectory_2.waypoints", len(waypoints)),
            "segment_duration": _number(t2.get("segment_duration", 4.0),
                                        "trajectories.trajectory_2.segment_duration", positive=True),
        },
        "trajectory_3": {
            "start": _vector(t3.get("start", [0.0, 0.0, 1.5]), "trajectories.trajectory_3.start"),
            "z_span": _number(t3.get("z_span", 0.5), "trajectories.trajectory_3.z_span"),
            "sphere_axis": t3.get("sphere_axis", "z"),
            "sphere_amplitude_deg": _number(t3.get("sphere_amplitude_deg", 180.0),
                                            "trajectories.trajectory_3.sphere_amplitude_deg"),
            "duration": _number(t3.get("duration", 5.0), "trajectories.trajectory_3.duration", positive=True),
        },
    }
    return out


def build(doc: dict) -> RobotConfig:
    doc = normalize(doc)
    w = doc["wrist"]
    try:
        wrist = WristParams(
            alpha=math.radians(w["alpha_deg"]),
            beta=math.radians(w["beta_deg"]),
            gamma=tuple(math.radians(g) for g in w["gamma_deg"]),
            r_s=w["r_s"],
            r_o=w["r_o"],
            r_d=w["r_d"],
            sphere_mass=w["sphere_mass"],
        )
    except CableWrenchError as exc:
        raise ValidationError("wrist", str(exc)) from exc
    p = doc["platform"]
    geometry = RobotGeometry(
        np.array(doc["frame"]["exit_points"]), np.array(p["anchors"]), p["mass"], np.array(p["com"]), wrist,
        p["gravity"],
    )
    box = TensionBox(doc["tensions"]["t_min"], doc["tensions"]["t_max"])
    g = doc["grid"]
    grid = GridSpec(g["lower"], g["upper"], g["n"])
    a = doc["arrangement"]
    try:
        arrangement = CableArrangement(tuple(map(tuple, a["assignment"])), tuple(map(tuple, a["loop_pairs"])),
                                       tuple(a["simple_cables"]))
    except CableWrenchError as exc:
        raise ValidationError("arrangement", str(exc)) from exc
    s = doc["search"]
    search = SearchSettings(
        tuple(map(tuple, s["loop_anchor_pairs"])),
        tuple(s["simple_anchors"]),
        s["n_simple"],
        None if s["coarse_n"] is None else tuple(s["coarse_n"]),
        s["slack"],
        s["top_k"],
    )
    try:
        arrangement.check_anchor_sets(search.loop_anchor_pairs, set(range(1, 16)) - {
            x for pair in search.loop_anchor_pairs for x in pair})
    except CableWrenchError as exc:
        raise ValidationError("arrangement", str(exc)) from exc
    return RobotConfig(doc, geometry, box, doc["tensions"]["eq_tolerance"], grid, arrangement, search,
                       copy.deepcopy(doc["trajectories"]))


def loads(text: str) -> RobotConfig:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ParseError(f"cannot parse configuration: {exc}") from exc
    return build(doc)


def load_config(path) -> RobotConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return loads(text)


def dumps(cfg: RobotConfig) -> str:
    return yaml.safe_dump(cfg.document, sort_keys=False, default_flow_style=None)


def home_pose(cfg: RobotConfig) -> Pose:
    return Pose(np.array(cfg.trajectories["trajectory_1"]["position"]))
