"""Problem files: one JSON document per run.

Rationals may be written as JSON integers or as strings "a" / "a/b".  Floats are
rejected so that every input is exact.  Schema (all blocks optional unless a
command needs them)::

    {
      "spec_version": 1,
      "lattice": {"gram": [[0,1],[1,0]], "canonical": [-2,-2], "chi": 1, "name": "quadric"},
      "chern":   {"r": 2, "c1": [1,1], "c2": 2},
      "cone":    {"generators": [[1,2],[2,1]]},
      "nef":     {"generators": [[1,0],[0,1]], "shrink_steps": 6},
      "path":    {"start": [1,2], "end": [2,1]},
      "twist":   {"wall_point": [1,1], "start": [3,6], "end": [6,3]},
      "thresholds": {"n": 3, "n_prime": 3},
      "classify":   {"wall_point": [1,1], "polarization": [1,2],
                     "candidates": [{"r": 1, "c1": [1,0], "c2": 1}]},
      "counterexample": {"count": 5, "probe": [1,0,0]},
      "approx":  {"d": 3, "count": 4},
      "plot":    {"basis": [[1,2],[2,1]]}
    }
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .chern import ChernData
from .errors import SheafWallsError, SpecError
from .lattice import NumClass, SurfaceLattice, validate_lattice
from .walls import AmpleCone

SPEC_VERSION = 1
KNOWN_BLOCKS = {"spec_version", "lattice", "chern", "cone", "nef", "path", "twist",
                "thresholds", "classify", "counterexample", "approx", "plot"}


def _rational(value: Any, path: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise SpecError("expected an integer or a \"num/den\" string", path)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise SpecError(f"cannot parse {value!r} as a rational", path) from None
    raise SpecError("expected an integer or a \"num/den\" string", path)


def _integer(value: Any, path: str) -> int:
    x = _rational(value, path)
    if x.denominator != 1:
        raise SpecError(f"expected an integer, got {x}", path)
    return int(x)


def _vector(value: Any, path: str, dim: int | None = None) -> NumClass:
    if not isinstance(value, list):
        raise SpecError("expected a list of rationals", path)
    if dim is not None and len(value) != dim:
        raise SpecError(f"expected {dim} coordinates, got {len(value)}", path)
    return NumClass(_rational(v, f"{path}[{i}]") for i, v in enumerate(value))


def _block(doc: dict, name: str, required: bool = True) -> dict | None:
    if name not in doc:
        if required:
            raise SpecError(f"missing required block {name!r}", "$")
        return None
    block = doc[name]
    if not isinstance(block, dict):
        raise SpecError("expected an object", f"$.{name}")
    return block


def _field(block: dict, name: str, path: str):
    if name not in block:
        raise SpecError(f"missing field {name!r}", path)
    return block[name]


@dataclass(frozen=True)
class ProblemSpec:
    raw: dict

    def lattice(self) -> SurfaceLattice:
        block = _block(self.raw, "lattice")
        gram = _field(block, "gram", "$.lattice")
        if not isinstance(gram, list) or not gram or not all(isinstance(r, list) for r in gram):
            raise SpecError("expected a nonempty square matrix", "$.lattice.gram")
        rho = len(gram)
        rows = [[_integer(v, f"$.lattice.gram[{i}][{j}]") for j, v in enumerate(row)]
                for i, row in enumerate(gram)]
        for i, row in enumerate(rows):
            if len(row) != rho:
                raise SpecError(f"row has {len(row)} entries, expected {rho}",
                                f"$.lattice.gram[{i}]")
        if "rank" in block and _integer(block["rank"], "$.lattice.rank") != rho:
            raise SpecError("rank does not match the Gram matrix size", "$.lattice.rank")
        canonical = _vector(block.get("canonical", [0] * rho), "$.lattice.canonical", rho)
        for i, c in enumerate(canonical):
            if c.denominator != 1:
                raise SpecError("canonical class must be integral", f"$.lattice.canonical[{i}]")
        chi = _integer(block.get("chi", 0), "$.lattice.chi")
        name = block.get("name", "")
        lat = SurfaceLattice(rows, canonical, chi, name=str(name))
        validate_lattice(lat)
        return lat

    def chern(self, lat: SurfaceLattice) -> ChernData:
        return _chern(_block(self.raw, "chern"), "$.chern", lat.rank)

    def cone(self, lat: SurfaceLattice, block_name: str = "cone") -> AmpleCone:
        block = _block(self.raw, block_name)
        gens = _field(block, "generators", f"$.{block_name}")
        if not isinstance(gens, list) or not gens:
            raise SpecError("expected a nonempty list of classes", f"$.{block_name}.generators")
        # no strict validation here: cones touching the isotropic boundary are
        # reported by the subdivision step, which names the offending subcone
        return AmpleCone([_vector(g, f"$.{block_name}.generators[{i}]", lat.rank)
                          for i, g in enumerate(gens)])

    def nef(self, lat: SurfaceLattice) -> tuple[list[NumClass], int] | None:
        block = _block(self.raw, "nef", required=False)
        if block is None:
            return None
        cone = self.cone(lat, "nef")
        steps = _integer(block.get("shrink_steps", 6), "$.nef.shrink_steps")
        if steps < 1:
            raise SpecError("shrink_steps must be positive", "$.nef.shrink_steps")
        return list(cone.generators), steps

    def classes(self, name: str, fields: tuple[str, ...], lat: SurfaceLattice,
                required: bool = True) -> dict[str, NumClass] | None:
        block = _block(self.raw, name, required)
        if block is None:
            return None
        return {f: _vector(_field(block, f, f"$.{name}"), f"$.{name}.{f}", lat.rank)
                for f in fields}

    def optional_class(self, name: str, field: str, lat: SurfaceLattice) -> NumClass | None:
        block = _block(self.raw, name, required=False)
        if block is None or field not in block:
            return None
        return _vector(block[field], f"$.{name}.{field}", lat.rank)

    def thresholds(self) -> tuple[int | None, int | None]:
        block = _block(self.raw, "thresholds", required=False) or {}
        out = []
        for key in ("n", "n_prime"):
            out.append(None if block.get(key) is None
                       else _integer(block[key], f"$.thresholds.{key}"))
        return out[0], out[1]

    def classify_candidates(self, lat: SurfaceLattice) -> list[ChernData]:
        block = _block(self.raw, "classify")
        cands = block.get("candidates", [])
        if not isinstance(cands, list):
            raise SpecError("expected a list", "$.classify.candidates")
        return [_chern(c, f"$.classify.candidates[{i}]", lat.rank) for i, c in enumerate(cands)]

    def counterexample(self) -> tuple[int, NumClass]:
        block = _block(self.raw, "counterexample", required=False) or {}
        count = _integer(block.get("count", 5), "$.counterexample.count")
        probe = _vector(block.get("probe", [1, 0, 0]), "$.counterexample.probe", 3)
        return count, probe

    def approx(self) -> tuple[int, int]:
        block = _block(self.raw, "approx", required=False) or {}
        return (_integer(block.get("d", 3), "$.approx.d"),
                _integer(block.get("count", 4), "$.approx.count"))

    def plot_basis(self, lat: SurfaceLattice) -> tuple[NumClass, NumClass] | None:
        block = _block(self.raw, "plot", required=False)
        if block is None or "basis" not in block:
            return None
        basis = block["basis"]
        if not isinstance(basis, list) or len(basis) != 2:
            raise SpecError("expected two classes", "$.plot.basis")
        return (_vector(basis[0], "$.plot.basis[0]", lat.rank),
                _vector(basis[1], "$.plot.basis[1]", lat.rank))


def _chern(block: Any, path: str, rho: int) -> ChernData:
    if not isinstance(block, dict):
        raise SpecError("expected an object", path)
    r = _integer(_field(block, "r", path), f"{path}.r")
    c1 = _vector(_field(block, "c1", path), f"{path}.c1", rho)
    c2 = _rational(_field(block, "c2", path), f"{path}.c2")
    try:
        return ChernData(r, c1, c2)
    except SheafWallsError as exc:
        raise SpecError(exc.message, f"{path}.r") from None


def parse_spec(text: str) -> ProblemSpec:
    """Parse a JSON problem document; errors carry a line/column or a $.path."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"invalid JSON: {exc.msg}", f"line {exc.lineno}, column {exc.colno}") \
            from None
    if not isinstance(doc, dict):
        raise SpecError("top level must be an object", "$")
    if "spec_version" not in doc:
        raise SpecError("missing spec_version", "$")
    version = doc["spec_version"]
    if isinstance(version, bool) or version != SPEC_VERSION:
        raise SpecError(f"unsupported spec_version {version!r}; expected {SPEC_VERSION}",
                        "$.spec_version")
    unknown = sorted(set(doc) - KNOWN_BLOCKS)
    if unknown:
        raise SpecError(f"unknown block {unknown[0]!r}", f"$.{unknown[0]}")
    return ProblemSpec(doc)
