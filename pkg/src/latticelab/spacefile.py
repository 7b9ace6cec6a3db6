"""Space-definition files.

A space file is a JSON document::

    {
      "name": "my-space",
      "dim": 3,
      "asserted_absolute": true,
      "spec": { ... combinator object ... }
    }

Combinator objects (scalars anywhere may be JSON numbers or exact rational
strings "p/q"):

* ``{"type": "lp", "p": 1 | 2 | "inf", "dim": n}``
* ``{"type": "facet", "functionals": [[...], ...]}``
* ``{"type": "polytope", "vertices": [[...], ...]}``
* ``{"type": "hull", "dim": n, "pieces": [
      {"type": "disk", "axes": [i, j], "radii": [r_i, r_j]},
      {"type": "points", "points": [[...], ...]}]}``
* ``{"type": "direct_sum", "parts": [{"coords": [...], "spec": {...}}, ...],
     "outer": {...}}``
* ``{"type": "dual", "inner": {...}}``

``asserted_absolute`` controls the symmetrization of generating sets:
asserted sets are closed under all coordinate sign flips, otherwise only
under negation.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .norms import (Disk, DirectSum, DualOf, FacetNorm, HullOfPieces, Lp,
                    NormSpec, PointSet, PolytopeBall)

INF = float("inf")


class SpaceFileError(ValueError):
    """Malformed space-definition file."""


def _scalar(v):
    if isinstance(v, str):
        try:
            return Fraction(v)
        except (ValueError, ZeroDivisionError) as exc:
            raise SpaceFileError(f"bad rational literal {v!r}") from exc
    if isinstance(v, (int, float)):
        return v
    raise SpaceFileError(f"bad scalar {v!r}")


def _vector(v):
    if not isinstance(v, (list, tuple)) or not v:
        raise SpaceFileError(f"bad vector {v!r}")
    return tuple(_scalar(c) for c in v)


def spec_from_config(cfg, asserted_absolute: bool = False) -> NormSpec:
    if not isinstance(cfg, dict) or "type" not in cfg:
        raise SpaceFileError(f"combinator object needs a 'type': {cfg!r}")
    kind = cfg["type"]
    try:
        if kind == "lp":
            p = cfg["p"]
            p = INF if p in ("inf", "oo") else float(_scalar(p))
            return Lp(p, int(cfg["dim"]))
        if kind == "facet":
            return FacetNorm(functionals=tuple(_vector(f) for f in cfg["functionals"]),
                             sign_flips=asserted_absolute)
        if kind == "polytope":
            return PolytopeBall(vertices=tuple(_vector(v) for v in cfg["vertices"]),
                                sign_flips=asserted_absolute)
        if kind == "hull":
            pieces = []
            for pc in cfg["pieces"]:
                if pc["type"] == "disk":
                    radii = pc.get("radii", (1.0, 1.0))
                    pieces.append(Disk(axes=tuple(int(a) for a in pc["axes"]),
                                       radii=tuple(float(_scalar(r)) for r in radii)))
                elif pc["type"] == "points":
                    pieces.append(PointSet(points=tuple(_vector(p) for p in pc["points"])))
                else:
                    raise SpaceFileError(f"unknown hull piece {pc!r}")
            return HullOfPieces(pieces=tuple(pieces), n=int(cfg["dim"]))
        if kind == "direct_sum":
            parts = tuple(
                (spec_from_config(part["spec"], asserted_absolute),
                 tuple(int(c) for c in part["coords"]))
                for part in cfg["parts"])
            return DirectSum(parts=parts,
                             outer=spec_from_config(cfg["outer"], asserted_absolute))
        if kind == "dual":
            return DualOf(spec_from_config(cfg["inner"], asserted_absolute))
    except SpaceFileError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise SpaceFileError(f"malformed {kind!r} combinator: {exc}") from exc
    raise SpaceFileError(f"unknown combinator type {kind!r}")


def _emit_scalar(v):
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    return float(v)


def _emit_vector(v):
    return [_emit_scalar(c) for c in v]


def spec_to_config(spec: NormSpec) -> dict:
    if isinstance(spec, Lp):
        p = "inf" if spec.p == INF else float(spec.p)
        return {"type": "lp", "p": p, "dim": spec.n}
    if isinstance(spec, FacetNorm):
        return {"type": "facet", "functionals": [_emit_vector(f) for f in spec.functionals]}
    if isinstance(spec, PolytopeBall):
        return {"type": "polytope", "vertices": [_emit_vector(v) for v in spec.vertices]}
    if isinstance(spec, HullOfPieces):
        pieces = []
        for pc in spec.pieces:
            if isinstance(pc, Disk):
                pieces.append({"type": "disk", "axes": list(pc.axes),
                               "radii": list(pc.radii)})
            else:
                pieces.append({"type": "points",
                               "points": [_emit_vector(p) for p in pc.points]})
        return {"type": "hull", "dim": spec.n, "pieces": pieces}
    if isinstance(spec, DirectSum):
        return {"type": "direct_sum",
                "parts": [{"coords": list(coords), "spec": spec_to_config(part)}
                          for part, coords in spec.parts],
                "outer": spec_to_config(spec.outer)}
    if isinstance(spec, DualOf):
        return {"type": "dual", "inner": spec_to_config(spec.inner)}
    raise SpaceFileError(f"cannot serialize {spec!r}")


def load_space(path: str):
    """Returns (name, spec, asserted_absolute)."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SpaceFileError(f"cannot read space file {path}: {exc}") from exc
    if not isinstance(doc, dict) or "spec" not in doc:
        raise SpaceFileError("space file needs a top-level 'spec' object")
    asserted = bool(doc.get("asserted_absolute", False))
    spec = spec_from_config(doc["spec"], asserted_absolute=asserted)
    if "dim" in doc and int(doc["dim"]) != spec.dim:
        raise SpaceFileError(
            f"declared dim {doc['dim']} does not match the spec dim {spec.dim}")
    return str(doc.get("name", "unnamed")), spec, asserted


def save_space(path: str, name: str, spec: NormSpec,
               asserted_absolute: bool = False) -> None:
    doc = {"name": name, "dim": spec.dim,
           "asserted_absolute": asserted_absolute,
           "spec": spec_to_config(spec)}
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")

