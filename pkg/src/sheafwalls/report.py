"""Deterministic report payloads.

Every mathematical quantity is emitted as an exact rational string ("3", "-9/2");
only bookkeeping such as indices and counts are JSON integers.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .chern import ChernData
from .lattice import NumClass, SurfaceLattice
from .numex import SurdApprox, UnboundedFamily, to_fibre_basis
from .stability import Verdict
from .strata import ChamberPath, FlipSequence, TwistStratification, WallFlip
from .walls import NefWallResult, WallDatum, WallSet


def q(x) -> str:
    return str(Fraction(x))


def vec(x: NumClass) -> list[str]:
    return [q(c) for c in x]


def chern(e: ChernData) -> dict:
    return {"r": q(e.rank), "c1": vec(e.c1), "c2": q(e.c2)}


def lattice(lat: SurfaceLattice) -> dict:
    return {"name": lat.name, "gram": [[q(v) for v in row] for row in lat.gram],
            "canonical": vec(lat.canonical), "chi": q(lat.chi_structure)}


def datum(d: WallDatum) -> dict:
    return {"r_F": q(d.r_f), "c1_F": vec(d.c1_f), "L": vec(d.L), "xi": vec(d.xi),
            "c2F_range": [q(d.c2f_range[0]), q(d.c2f_range[1])]}


def wall_set(ws: WallSet) -> dict:
    return {
        "chern": chern(ws.chern),
        "cone": [vec(g) for g in ws.cone.generators],
        "case_a_bound": None if ws.case_a is None else q(ws.case_a),
        "split_bounds": [{"r_F": q(r), "bound": q(b)} for r, b in ws.bounds],
        "notice": ws.notice,
        "count": len(ws),
        "hyperplanes": [{"normal": vec(hp.normal), "data": [datum(d) for d in hp.data]}
                        for hp in ws.hyperplanes],
    }


def nef_result(res: NefWallResult) -> dict:
    out = wall_set(res.walls)
    out["stabilized"] = res.stabilized
    out["history"] = [[vec(n) for n in step] for step in res.history]
    return out


def chamber_path(path: ChamberPath) -> dict:
    return {
        "start": vec(path.start),
        "end": vec(path.end),
        "events": [{"t": q(ev.t), "point": vec(path.point(ev.t)),
                    "normals": [vec(n) for n in ev.normals]} for ev in path.events],
        "chambers": [{"t_range": [q(lo), q(hi)], "midpoint": vec(path.point((lo + hi) / 2))}
                     for lo, hi in path.chambers],
    }


def stratification(st: TwistStratification) -> dict:
    return {
        "wall_point": vec(st.wall_point),
        "line": [vec(st.z_start), vec(st.z_end)],
        "functionals": [{"sub": chern(f.sub), "xi": vec(f.xi), "offset": q(f.offset)}
                        for f in st.functionals],
        "crossings": [q(s) for s in st.crossings],
        "strata": [{"label": s.label, "s_range": [q(s.s_range[0]), q(s.s_range[1])],
                    "representative": vec(s.representative), "signs": list(s.signs)}
                   for s in st.strata],
    }


def flip(f: WallFlip, e: ChernData) -> dict:
    return {
        "t": q(f.t),
        "normals": [vec(hp.normal) for hp in f.hyperplanes],
        "wall_point": vec(f.wall_point),
        "redraws": f.redraws,
        "h_before": vec(f.h_before),
        "h_after": vec(f.h_after),
        "n_min": q(f.n_min), "n_min_prime": q(f.n_min_prime),
        "n": q(f.n), "n_prime": q(f.n_prime),
        "diagram": f.diagram(),
        "moduli": f.moduli_symbols(e),
        "stratification": stratification(f.stratification),
        "annotations": [{"stratum": a.stratum, "label": a.label,
                         "representative": vec(a.representative),
                         "integral_representative": (None if a.integral_representative is None
                                                     else vec(a.integral_representative)),
                         "transformed": None if a.transformed is None else chern(a.transformed)}
                        for a in f.annotations],
    }


def flip_sequence(fs: FlipSequence) -> dict:
    return {
        "chern": chern(fs.chern),
        "start": vec(fs.start),
        "end": vec(fs.end),
        "note": fs.note,
        "wall_count": len(fs.walls),
        "path": chamber_path(fs.path),
        "flips": [flip(f, fs.chern) for f in fs.flips],
    }


def verdict(v: Verdict) -> dict:
    return {"kind": v.kind.value, "witness": None if v.witness is None else chern(v.witness)}


def family(fam: UnboundedFamily) -> dict:
    return {
        "lattice": lattice(fam.lattice),
        "probe": vec(fam.probe),
        "members": [{"p": q(m.p), "q": q(m.q), "L": vec(m.line),
                     "L_fibre_basis": vec(to_fibre_basis(m.line)),
                     "H": vec(m.polarization), "c2": q(m.c2), "verdict": m.verdict.value,
                     "probe_dot_L": q(m.probe_pairing), "constant_term": q(m.constant_term)}
                    for m in fam.members],
        "notes": list(fam.notes),
    }


def approximation(ap: SurdApprox, pell: list[tuple[int, int]]) -> dict:
    return {"d": q(ap.d),
            "above_approximants": [{"p": q(p), "q": q(qq), "ratio": q(Fraction(qq, p))}
                                   for p, qq in ap.convergents],
            "pell_solutions": [{"p": q(p), "q": q(qq)} for p, qq in pell]}


def to_json(payload: Any) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def to_text(payload: Any, indent: int = 0) -> str:
    """Plain indented rendering; vectors print inline as (a, b, ...)."""
    pad = "  " * indent
    lines = []
    if isinstance(payload, dict):
        for key, value in payload.items():
            if _is_leaf(value):
                lines.append(f"{pad}{key}: {_leaf(value)}")
            else:
                lines.append(f"{pad}{key}:")
                lines.append(to_text(value, indent + 1).rstrip("\n"))
    elif isinstance(payload, list):
        for item in payload:
            if _is_leaf(item):
                lines.append(f"{pad}- {_leaf(item)}")
            else:
                body = to_text(item, indent + 1).rstrip("\n")
                lines.append(f"{pad}- {body[len(pad) + 2:]}")
    else:
        lines.append(f"{pad}{_leaf(payload)}")
    return "\n".join(line for line in lines if line) + "\n"


def _is_leaf(value: Any) -> bool:
    if isinstance(value, list):
        return all(isinstance(v, (str, int)) and not isinstance(v, bool) for v in value)
    return not isinstance(value, dict)


def _leaf(value: Any) -> str:
    if isinstance(value, list):
        return "(" + ", ".join(str(v) for v in value) + ")"
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)
