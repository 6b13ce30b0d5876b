"""Structural-material constants and a small registry with JSON file loading."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from decimal import Decimal
from pathlib import Path


class MaterialError(ValueError):
    pass


class UnknownMaterialError(MaterialError, KeyError):
    def __str__(self):
        return self.args[0]


class MaterialInvariantError(MaterialError):
    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


class DuplicateMaterialError(MaterialError):
    pass


class MaterialParseError(MaterialError):
    def __init__(self, message, line=None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


@dataclass(frozen=True)
class Material:
    """Isotropic elastic constants. SI units; temperature in deg C."""

    name: str
    youngs_modulus: float
    density: float
    poisson: float
    deposition_temp: float | None = None
    conductivity: float | None = None

    def __post_init__(self):
        if not self.name or not isinstance(self.name, str):
            raise MaterialInvariantError("name", "must be a non-empty string")
        if not (self.youngs_modulus > 0 and math.isfinite(self.youngs_modulus)):
            raise MaterialInvariantError("youngs_modulus", f"must be positive, got {self.youngs_modulus}")
        if not (self.density > 0 and math.isfinite(self.density)):
            raise MaterialInvariantError("density", f"must be positive, got {self.density}")
        if not 0 <= self.poisson < 0.5:
            raise MaterialInvariantError("poisson", f"must lie in [0, 0.5), got {self.poisson}")


GPA = 1e9

# conductivity column is printed in units of 1e7 S/m
_BUILTIN = {
    "silicon": Material("silicon", 130 * GPA, 2330.0, 0.28, 1000.0, 0.00023e7),
    "polysilicon": Material("polysilicon", 150 * GPA, 2300.0, 0.226, 588.0, 0.001e7),
    "polydiamond": Material("polydiamond", 1144 * GPA, 3500.0, 0.069, 800.0, 0.001e7),
    "silicon_carbide": Material("silicon_carbide", 415 * GPA, 3200.0, 0.192, 800.0, 0.00083e7),
    "polysige": Material("polysige", 146 * GPA, 4280.0, 0.23, 450.0, 0.005e7),
    "nickel": Material("nickel", 195 * GPA, 8900.0, 0.31, 50.0, 1.43e7),
}

_ALIASES = {
    "silicon<100>": "silicon",
    "si": "silicon",
    "scs": "silicon",
    "poly-si": "polysilicon",
    "sic": "silicon_carbide",
    "silicon carbide": "silicon_carbide",
    "poly-sige": "polysige",
    "polysi0.35ge0.65": "polysige",
}


def builtin(name: str) -> Material:
    key = name.strip().lower()
    key = _ALIASES.get(key, key)
    try:
        return _BUILTIN[key]
    except KeyError:
        raise UnknownMaterialError(
            f"unknown material {name!r}; available: {', '.join(sorted(_BUILTIN))}") from None


def builtin_names() -> list[str]:
    return list(_BUILTIN)


def acoustic_velocity(m: Material) -> float:
    return math.sqrt(m.youngs_modulus / m.density)


def _gpa(pascals: float) -> Decimal:
    # exact decimal shift of the shortest repr, so reloading restores the same float
    return Decimal(repr(float(pascals))).scaleb(-9)


def to_record(m: Material) -> dict:
    rec = {"name": m.name, "E_GPa": _gpa(m.youngs_modulus), "rho": m.density, "poisson": m.poisson}
    if m.deposition_temp is not None:
        rec["dep_temp_C"] = m.deposition_temp
    if m.conductivity is not None:
        rec["conductivity"] = m.conductivity
    return rec


def _from_record(rec, index, line):
    if not isinstance(rec, dict):
        raise MaterialParseError(f"record {index} is not an object", line)
    missing = {"name", "E_GPa", "rho", "poisson"} - rec.keys()
    if missing:
        raise MaterialParseError(f"record {index} missing keys {sorted(missing)}", line)
    unknown = rec.keys() - {"name", "E_GPa", "rho", "poisson", "dep_temp_C", "conductivity"}
    if unknown:
        raise MaterialParseError(f"record {index} has unknown keys {sorted(unknown)}", line)
    for key in ("E_GPa", "rho", "poisson", "dep_temp_C", "conductivity"):
        if key in rec and (isinstance(rec[key], bool) or not isinstance(rec[key], (int, Decimal))):
            raise MaterialParseError(f"record {index} key {key!r} must be a number", line)
    opt = lambda k: float(rec[k]) if rec.get(k) is not None else None
    return Material(
        name=str(rec["name"]),
        youngs_modulus=float(Decimal(rec["E_GPa"]).scaleb(9)),
        density=float(rec["rho"]),
        poisson=float(rec["poisson"]),
        deposition_temp=opt("dep_temp_C"),
        conductivity=opt("conductivity"),
    )


def parse_materials(text: str) -> list[Material]:
    try:
        data = json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise MaterialParseError(exc.msg, exc.lineno) from exc
    if not isinstance(data, list):
        raise MaterialParseError("top level must be a JSON array", 1)
    # approximate source line of each record, for error messages
    lines = []
    depth, line = 0, 1
    for ch in text:
        if ch == "\n":
            line += 1
        elif ch in "[{":
            depth += 1
            if ch == "{" and depth == 2:
                lines.append(line)
        elif ch in "]}":
            depth -= 1
    out = []
    for i, rec in enumerate(data):
        ln = lines[i] if i < len(lines) else None
        try:
            out.append(_from_record(rec, i, ln))
        except MaterialInvariantError as exc:
            exc.line = ln
            raise
    return out


class MaterialRegistry:
    """Name -> Material map seeded with the builtin table."""

    def __init__(self, include_builtin: bool = True):
        self._items: dict[str, Material] = dict(_BUILTIN) if include_builtin else {}

    def __contains__(self, name):
        return self._key(name) in self._items

    def __len__(self):
        return len(self._items)

    def names(self):
        return list(self._items)

    def _key(self, name):
        key = name.strip().lower()
        return _ALIASES.get(key, key)

    def get(self, name: str) -> Material:
        try:
            return self._items[self._key(name)]
        except KeyError:
            raise UnknownMaterialError(
                f"unknown material {name!r}; available: {', '.join(sorted(self._items))}") from None

    def add(self, m: Material):
        key = self._key(m.name)
        if key in self._items:
            raise DuplicateMaterialError(f"material {m.name!r} already registered")
        self._items[key] = m

    def load(self, path) -> list[Material]:
        mats = parse_materials(Path(path).read_text(encoding="utf-8"))
        names = [self._key(m.name) for m in mats]
        for key in names:
            if key in self._items or names.count(key) > 1:
                raise DuplicateMaterialError(f"material {key!r} already registered")
        for m in mats:
            self._items[self._key(m.name)] = m
        return mats


def load_materials(path, registry: MaterialRegistry | None = None) -> list[Material]:
    """Read a materials JSON file into ``registry`` (a fresh one if omitted)."""
    if registry is None:
        registry = MaterialRegistry()
    return registry.load(path)


def _number(v) -> str:
    if isinstance(v, Decimal):
        return format(v.normalize(), "f")
    return repr(float(v))


def format_materials(materials) -> str:
    rows = []
    for m in materials:
        rec = to_record(m)
        body = ", ".join(
            f"{json.dumps(k)}: {json.dumps(v) if k == 'name' else _number(v)}" for k, v in rec.items())
        rows.append("  {" + body + "}")
    return "[\n" + ",\n".join(rows) + "\n]\n"


def dump_materials(materials, path):
    Path(path).write_text(format_materials(materials), encoding="utf-8")
