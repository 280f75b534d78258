"""Action specification files (TOML or JSON) and their loader.

A document has four sections::

    [meta]        name, description, citation (all optional)
    [space]       constructor = "discrete" | "cycle" | "torus_grid" with n, scale
                  or points = [...] with distances = [[...], ...]
    [generators]  labels, inverse (table label -> label), relations, kind, weights
    [maps]        label = { permutation = [...] }
                  or label = { constructor = "affine_mod" | "matrix_mod" |
                                             "flip_1_minus_x" | "identity", ... }

A map may be omitted when its inverse partner is given. Distances and
scales accept integers, ``"p/q"`` or decimal strings, or floats (floats
make the space inexact). A cover file may add ``[cover]`` with
``projection`` (base point ids or indices, one per point) and ``delta0``.
"""

import hashlib
import json
import sys
from pathlib import Path

from . import fixtures as _fixtures
from ._exact import as_fraction, format_fraction
from .action import GroupAction, affine_mod, flip_1_minus_x, identity_map, matrix_mod
from .errors import GroupDynError, SpecError
from .group_core import GeneratorSystem
from .metric_space import FiniteMetricSpace, cycle, discrete, torus_grid

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

__all__ = ["LoadedSpec", "load", "load_document", "parse_document", "action_document", "digest"]


class LoadedSpec:
    """A parsed document: the action, its metadata and optional cover data."""

    def __init__(self, action, meta, cover=None, source=None, raw=b""):
        self.action = action
        self.meta = meta
        self.cover = cover
        self.source = source
        self.raw = raw

    @property
    def name(self):
        return self.meta.get("name") or self.action.name or self.source


def digest(raw):
    return hashlib.sha256(raw).hexdigest()


def _number(v, where):
    try:
        return as_fraction(v)[0] if not isinstance(v, float) else v
    except (TypeError, ValueError, ZeroDivisionError):
        raise SpecError(f"{where}: cannot read {v!r} as a number") from None


def _space(sec):
    if "constructor" in sec:
        kind = sec["constructor"]
        n = sec.get("n")
        if not isinstance(n, int) or n < 1:
            raise SpecError("space.n must be a positive integer")
        scale = _number(sec.get("scale", 1), "space.scale")
        if kind == "discrete":
            return discrete(n, sec.get("points"))
        if kind == "cycle":
            return cycle(n, scale)
        if kind == "torus_grid":
            return torus_grid(n, scale)
        raise SpecError(f"unknown space constructor {kind!r}")
    if "points" not in sec or "distances" not in sec:
        raise SpecError("space needs a constructor or both points and distances")
    dist = [[_number(v, "space.distances") for v in row] for row in sec["distances"]]
    return FiniteMetricSpace(sec["points"], dist)


def _generators(sec):
    labels = sec.get("labels")
    if not labels:
        raise SpecError("generators.labels is required")
    inverse = sec.get("inverse", {})
    relations = [(tuple(lhs), tuple(rhs)) for lhs, rhs in sec.get("relations", [])]
    weights = sec.get("weights")
    return GeneratorSystem(labels, inverse, relations, sec.get("kind", "free"), weights)


def _map(spec, space, label):
    if "permutation" in spec:
        perm = spec["permutation"]
        if all(isinstance(p, str) for p in perm):
            return tuple(space.index(p) for p in perm)
        return tuple(perm)
    kind = spec.get("constructor")
    n = len(space)
    if kind == "identity":
        return identity_map(n)
    if kind == "affine_mod":
        return affine_mod(spec.get("a", 1), spec.get("b", 0), spec.get("n", n))
    if kind == "matrix_mod":
        return matrix_mod(spec["M"], spec["n"])
    if kind == "flip_1_minus_x":
        return flip_1_minus_x(space)
    raise SpecError(f"map {label!r}: unknown constructor {kind!r}")


def parse_document(doc, source=None, raw=b""):
    """Build a LoadedSpec from a decoded document."""
    try:
        meta = dict(doc.get("meta", {}))
        space = _space(doc.get("space") or {})
        gens = _generators(doc.get("generators") or {})
        maps = {label: _map(spec, space, label) for label, spec in (doc.get("maps") or {}).items()}
        action = GroupAction(gens, space, maps, name=meta.get("name"))
        cover = None
        if "cover" in doc:
            sec = doc["cover"]
            cover = {
                "projection": list(sec["projection"]),
                "delta0": _number(sec["delta0"], "cover.delta0"),
            }
    except SpecError:
        raise
    except GroupDynError as exc:
        raise SpecError(f"{source or 'document'}: {type(exc).__name__}: {exc}") from exc
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError(f"{source or 'document'}: malformed entry ({exc})") from exc
    return LoadedSpec(action, meta, cover, source, raw)


def load_document(path):
    path = Path(path)
    raw = path.read_bytes()
    try:
        if path.suffix == ".json":
            doc = json.loads(raw)
        else:
            doc = tomllib.loads(raw.decode("utf-8"))
    except (ValueError, tomllib.TOMLDecodeError) as exc:
        raise SpecError(f"{path}: {exc}") from exc
    return doc, raw


def load(ref):
    """Load a spec file, or a built-in fixture written as ``fixture:NAME``."""
    ref = str(ref)
    if ref.startswith("fixture:"):
        name = ref.split(":", 1)[1]
        try:
            action = _fixtures.get(name)
        except KeyError as exc:
            raise SpecError(str(exc.args[0])) from None
        doc = action_document(action)
        raw = json.dumps(doc, sort_keys=True).encode()
        return LoadedSpec(action, doc["meta"], None, ref, raw)
    doc, raw = load_document(ref)
    return parse_document(doc, ref, raw)


def action_document(action, description=""):
    """A self-contained document (explicit points, distances, permutations)."""
    space = action.space
    gens = action.gens
    doc = {
        "meta": {"name": action.name or "action", "description": description},
        "space": {
            "points": list(space.points),
            "distances": [[format_fraction(v) for v in row] for row in space.dist],
        },
        "generators": {
            "labels": list(gens.labels),
            "inverse": {a: b for a, b in gens.inverse_of},
            "relations": [[list(l), list(r)] for l, r in gens.relations],
            "kind": gens.kind,
        },
        "maps": {s: {"permutation": list(action.maps[s])} for s in gens.labels},
    }
    if gens.weights is not None:
        doc["generators"]["weights"] = {a: list(w) for a, w in gens.weights}
    return doc
