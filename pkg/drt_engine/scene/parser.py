# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""Reader and writer for the two-section scene text format.

See docs/scene_format.md for the grammar. Syntax errors carry the line and
column of the offending token.
"""

import logging
import re
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from ..constants import DEG, KMH
from ..errors import SceneError, SceneSyntaxError, SceneValidationError
from ..geometry.kinematics import KinematicState, RigidMotion
from ..geometry.vectors import Z_AXIS, norm, normalized
from .builders import box_faces, rectangle_face
from .model import Antenna, Face, Material, Scene, SceneObject, Terminal

logger = logging.getLogger(__name__)

UNITS = {
    "": 1.0,
    "m": 1.0,
    "s": 1.0,
    "W": 1.0,
    "rad": 1.0,
    "Hz": 1.0,
    "kHz": 1e3,
    "MHz": 1e6,
    "GHz": 1e9,
    "kmh": KMH,
    "deg": DEG,
}

_TOKEN = re.compile(
    r"(?P<key>[A-Za-z_]\w*)=(?P<val>\([^)]*\)[A-Za-z]*|\S+)"
    r"|(?P<tuple>\([^)]*\)[A-Za-z]*)"
    r"|(?P<word>\S+)"
)
_NUMBER = re.compile(r"^([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)([A-Za-z]*)$")


class _Token:
    __slots__ = ("key", "text", "column")

    def __init__(self, key: Optional[str], text: str, column: int):
        self.key = key
        self.text = text
        self.column = column


def _tokenize(line: str, lineno: int) -> List[_Token]:
    tokens = []
    for m in _TOKEN.finditer(line):
        if m.group("key"):
            tokens.append(_Token(m.group("key"), m.group("val"), m.start() + 1))
        else:
            text = m.group("tuple") or m.group("word")
            if text.startswith("(") and ")" not in text:
                raise SceneSyntaxError("unterminated '('", lineno, m.start() + 1)
            tokens.append(_Token(None, text, m.start() + 1))
    return tokens


def _number(text: str, lineno: int, column: int) -> float:
    m = _NUMBER.match(text)
    if not m:
        raise SceneSyntaxError(f"expected a number, got {text!r}", lineno, column)
    unit_name = m.group(2)
    if unit_name not in UNITS:
        raise SceneSyntaxError(f"unknown unit {unit_name!r}", lineno, column)
    return float(m.group(1)) * UNITS[unit_name]


def _vector(text: str, lineno: int, column: int) -> np.ndarray:
    m = re.match(r"^\(([^)]*)\)([A-Za-z]*)$", text)
    if not m:
        raise SceneSyntaxError(f"expected a vector '(x, y, z)', got {text!r}", lineno, column)
    parts = [p.strip() for p in m.group(1).split(",")]
    if len(parts) != 3:
        raise SceneSyntaxError(f"a vector needs 3 components, got {len(parts)}", lineno, column)
    unit_name = m.group(2)
    if unit_name not in UNITS:
        raise SceneSyntaxError(f"unknown unit {unit_name!r}", lineno, column)
    return np.array([_number(p, lineno, column) for p in parts]) * UNITS[unit_name]


class _Statement:
    """One non-empty line: keyword, positional tokens and key=value options."""

    def __init__(self, lineno: int, tokens: List[_Token]):
        self.lineno = lineno
        self.keyword = tokens[0].text
        self.column = tokens[0].column
        self.positional = [t for t in tokens[1:] if t.key is None]
        self.options: Dict[str, _Token] = {}
        for t in tokens[1:]:
            if t.key is None:
                continue
            if t.key in self.options:
                raise SceneSyntaxError(f"option {t.key!r} given twice", lineno, t.column)
            self.options[t.key] = t
        self._used = set()

    def has(self, key: str) -> bool:
        return key in self.options

    def text(self, key: str, default: Optional[str] = None) -> Optional[str]:
        self._used.add(key)
        tok = self.options.get(key)
        return tok.text if tok else default

    def number(self, key: str, default: Optional[float] = None) -> Optional[float]:
        self._used.add(key)
        tok = self.options.get(key)
        if tok is None:
            if default is None:
                raise SceneSyntaxError(f"missing option {key}=", self.lineno, self.column)
            return default
        return _number(tok.text, self.lineno, tok.column)

    def vector(self, key: str, default=None) -> np.ndarray:
        self._used.add(key)
        tok = self.options.get(key)
        if tok is None:
            if default is None:
                raise SceneSyntaxError(f"missing option {key}=", self.lineno, self.column)
            return np.array(default, dtype=float)
        return _vector(tok.text, self.lineno, tok.column)

    def name(self, index: int = 0) -> str:
        if len(self.positional) <= index:
            raise SceneSyntaxError(f"'{self.keyword}' needs a name", self.lineno, self.column)
        return self.positional[index].text

    def check_options(self):
        for key, tok in self.options.items():
            if key not in self._used:
                raise SceneSyntaxError(f"unknown option {key!r} for '{self.keyword}'", self.lineno, tok.column)


class _ObjectBuilder:
    def __init__(self, stmt: _Statement):
        self.object_id = stmt.name()
        self.material = stmt.text("material")
        self.closed = not any(t.text == "open" for t in stmt.positional[1:])
        self.diffraction = stmt.text("diffraction", "auto")
        self.faces: List[Face] = []
        self.lineno = stmt.lineno

    def next_id(self) -> str:
        return f"{self.object_id}/f{len(self.faces)}"


def _where(err: Exception, lineno: int) -> SceneError:
    cls = type(err) if isinstance(err, SceneValidationError) else SceneValidationError
    return cls(f"line {lineno}: {err}")


def parse_scene(text: str) -> Scene:
    """Parse scene text into a validated Scene.

    Raises:
        SceneSyntaxError: text that does not follow the grammar
        SceneValidationError: a model invariant is violated (names the object or face)
        DuplicateIdError: two objects or terminals share an id
    """
    name = "scene"
    section = None
    t0 = 0.0
    materials: Dict[str, Material] = {}
    objects: List[SceneObject] = []
    current: Optional[_ObjectBuilder] = None
    motions: Dict[str, Tuple[int, RigidMotion]] = {}
    terminals: List[Tuple[int, dict]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stmt = _Statement(lineno, _tokenize(line, lineno))
        kw = stmt.keyword

        if kw in ("GEOMETRY", "DYNAMICS"):
            if current is not None:
                raise SceneSyntaxError(f"object {current.object_id!r} is missing 'end'", lineno, stmt.column)
            if kw == "DYNAMICS" and section != "GEOMETRY":
                raise SceneSyntaxError("DYNAMICS must follow GEOMETRY", lineno, stmt.column)
            if kw == "GEOMETRY" and section is not None:
                raise SceneSyntaxError("GEOMETRY given twice", lineno, stmt.column)
            section = kw
            continue
        if kw == "scene":
            if section is not None:
                raise SceneSyntaxError("'scene' must come before GEOMETRY", lineno, stmt.column)
            name = stmt.name()
            continue
        if section is None:
            raise SceneSyntaxError(f"statement {kw!r} outside of a section", lineno, stmt.column)

        try:
            if section == "GEOMETRY":
                current = _geometry_statement(stmt, current, materials, objects)
            else:
                value = _dynamics_statement(stmt, motions, terminals, objects)
                if value is not None:
                    t0 = value
            stmt.check_options()
        except SceneSyntaxError:
            raise
        except (SceneError, ValueError) as e:
            raise _where(e, lineno) from e

    if current is not None:
        raise SceneSyntaxError(f"object {current.object_id!r} is missing 'end'", current.lineno, 1)
    if section != "DYNAMICS":
        raise SceneSyntaxError("missing DYNAMICS section", max(1, len(text.splitlines())), 1)

    known = {o.object_id: o for o in objects}
    for object_id, (lineno, _) in motions.items():
        if object_id not in known:
            raise SceneValidationError(f"line {lineno}: motion for unknown object", object_id)
    objects = [
        SceneObject(o.object_id, o.faces, motions[o.object_id][1], o.closed, o.diffraction)
        if o.object_id in motions else o
        for o in objects
    ]

    tx = [term for _, term in terminals if term["role"] == "TX"]
    rx = [term for _, term in terminals if term["role"] == "RX"]
    if len(tx) != 1 or len(rx) != 1:
        raise SceneValidationError(
            f"a scene needs exactly one TX and one RX, found {len(tx)} TX and {len(rx)} RX", "terminals"
        )
    transmitter = _make_terminal(tx[0], t0)
    receiver = _make_terminal(rx[0], t0)
    scene = Scene(tuple(objects), transmitter, receiver, materials, t0, name)
    logger.info(f"Parsed scene {name!r}: {len(objects)} objects, {len(scene.faces)} faces, {len(scene.edges)} edges")
    return scene


def _geometry_statement(stmt, current, materials, objects):
    kw = stmt.keyword
    if kw == "material":
        mat_name = stmt.name()
        pec = any(t.text == "pec" for t in stmt.positional[1:])
        if mat_name in materials:
            raise SceneValidationError("duplicate material", mat_name)
        materials[mat_name] = Material(
            mat_name,
            permittivity=stmt.number("eps", 1.0),
            conductivity=stmt.number("sigma", 0.0),
            scattering=stmt.number("S", 0.0),
            perfect_conductor=pec,
        )
        return current
    if kw == "object":
        if current is not None:
            raise SceneSyntaxError(f"object {current.object_id!r} is missing 'end'", stmt.lineno, stmt.column)
        return _ObjectBuilder(stmt)
    if kw == "end":
        if current is None:
            raise SceneSyntaxError("'end' without 'object'", stmt.lineno, stmt.column)
        objects.append(SceneObject(current.object_id, tuple(current.faces), RigidMotion.static(),
                                   current.closed, current.diffraction))
        return None
    if kw in ("face", "box", "wall"):
        if current is None:
            raise SceneSyntaxError(f"'{kw}' outside of an object", stmt.lineno, stmt.column)
        material = stmt.text("material", current.material)
        if material is None:
            raise SceneSyntaxError("no material given for the face or its object", stmt.lineno, stmt.column)
        if kw == "face":
            verts = [_vector(t.text, stmt.lineno, t.column) for t in stmt.positional]
            current.faces.append(Face(current.next_id(), np.array(verts) if verts else np.zeros((0, 3)), material))
        elif kw == "box":
            faces = box_faces(current.object_id, stmt.vector("center"), stmt.vector("size"), material)
            offset = len(current.faces)
            for i, f in enumerate(faces):
                current.faces.append(Face(f"{current.object_id}/f{offset + i}", f.vertices, material))
        else:
            current.faces.append(rectangle_face(
                current.next_id(), stmt.vector("from"), stmt.vector("to"), stmt.number("height"),
                stmt.vector("facing"), material,
            ))
        return current
    raise SceneSyntaxError(f"unknown GEOMETRY statement {kw!r}", stmt.lineno, stmt.column)


def _dynamics_statement(stmt, motions, terminals, objects) -> Optional[float]:
    """Record one DYNAMICS statement; returns the value of a 't0' statement."""
    kw = stmt.keyword
    if kw == "t0":
        return _number(stmt.name(), stmt.lineno, stmt.positional[0].column)
    if kw == "motion":
        object_id = stmt.name()
        if object_id in motions:
            raise SceneValidationError(f"line {stmt.lineno}: motion given twice", object_id)
        center = stmt.vector("center", None) if stmt.has("center") else None
        if center is None:
            obj = next((o for o in objects if o.object_id == object_id), None)
            center = np.mean([f.centroid for f in obj.faces], axis=0) if obj else np.zeros(3)
        axis = stmt.vector("axis", Z_AXIS)
        if norm(axis) == 0.0:
            raise SceneValidationError("rotation axis must be non-zero", object_id)
        motions[object_id] = (stmt.lineno, RigidMotion(
            translation_velocity=stmt.vector("velocity", (0.0, 0.0, 0.0)),
            translation_acceleration=stmt.vector("acceleration", (0.0, 0.0, 0.0)),
            rotation_center=center,
            rotation_axis=normalized(axis),
            angular_speed=stmt.number("omega", 0.0),
            angular_acceleration=stmt.number("alpha", 0.0),
        ))
        return
    if kw == "terminal":
        term = {
            "id": stmt.name(),
            "role": stmt.text("role"),
            "position": stmt.vector("position"),
            "velocity": stmt.vector("velocity", (0.0, 0.0, 0.0)),
            "acceleration": stmt.vector("acceleration", (0.0, 0.0, 0.0)),
            "antenna": stmt.text("antenna", "isotropic"),
            "axis": stmt.vector("axis", Z_AXIS),
            "frequency": stmt.number("frequency", 3e9),
            "power": stmt.number("power", 1.0),
        }
        if term["role"] not in ("TX", "RX"):
            raise SceneSyntaxError("terminal role must be TX or RX", stmt.lineno, stmt.column)
        terminals.append((stmt.lineno, term))
        return
    raise SceneSyntaxError(f"unknown DYNAMICS statement {kw!r}", stmt.lineno, stmt.column)


def _make_terminal(term: dict, t0: float) -> Terminal:
    return Terminal(
        term["id"],
        term["role"],
        KinematicState(term["position"], term["velocity"], term["acceleration"], t0),
        Antenna(term["antenna"], term["axis"]),
        term["frequency"],
        term["power"],
    )


def load_scene(path: Union[str, Path]) -> Scene:
    """Read and parse a scene file; FileNotFoundError if it does not exist."""
    p = Path(path)
    text = p.read_text(encoding="utf-8")
    logger.info(f"Loading scene from {p}")
    return parse_scene(text)


def _f(x: float) -> str:
    return repr(float(x))


def _v(v) -> str:
    return "(" + ", ".join(_f(c) for c in v) + ")"


def serialize_scene(scene: Scene) -> str:
    """Write a scene back to text; parse_scene(serialize_scene(s)) == s."""
    lines = [f"scene {scene.name}", "GEOMETRY"]
    for m in scene.materials.values():
        flag = " pec" if m.perfect_conductor else ""
        lines.append(
            f"material {m.name}{flag} eps={_f(m.permittivity)} sigma={_f(m.conductivity)} S={_f(m.scattering)}"
        )
    for obj in scene.objects:
        head = f"object {obj.object_id}"
        if not obj.closed:
            head += " open"
        lines.append(f"{head} diffraction={obj.diffraction}")
        for face in obj.faces:
            verts = " ".join(_v(p) for p in face.vertices)
            lines.append(f"  face material={face.material} {verts}")
        lines.append("end")
    lines.append("DYNAMICS")
    lines.append(f"t0 {_f(scene.t0)}")
    for obj in scene.objects:
        m = obj.motion
        lines.append(
            f"motion {obj.object_id} velocity={_v(m.translation_velocity)} "
            f"acceleration={_v(m.translation_acceleration)} center={_v(m.rotation_center)} "
            f"axis={_v(m.rotation_axis)} omega={_f(m.angular_speed)} alpha={_f(m.angular_acceleration)}"
        )
    for term in (scene.transmitter, scene.receiver):
        s = term.state
        lines.append(
            f"terminal {term.terminal_id} role={term.role} position={_v(s.position)} "
            f"velocity={_v(s.velocity)} acceleration={_v(s.acceleration)} "
            f"antenna={term.antenna.kind} axis={_v(term.antenna.axis)} "
            f"frequency={_f(term.frequency)} power={_f(term.power)}"
        )
    return "\n".join(lines) + "\n"


def save_scene(scene: Scene, path: Union[str, Path]) -> bool:
    """Write a scene file; returns False (and logs) on failure."""
    try:
        Path(path).write_text(serialize_scene(scene), encoding="utf-8")
        logger.info(f"Saved scene {scene.name!r} to {path}")
        return True
    except OSError as e:
        logger.error(f"Error saving scene to {path}: {e}")
        return False
