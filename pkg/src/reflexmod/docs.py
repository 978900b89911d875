"""Workspace documents: a JSON tree describing a field, a carrier lattice, homs and modules.

Example::

    {
      "field": "Q",
      "dim": 2,
      "subspaces": {"e1": [["1", "0"]]},
      "lattice": {"carrier": ["0", "e1", "H"]},
      "homs": {"phi": {"0": "0", "e1": "0", "H": "e1"}, "id": "identity"},
      "modules": {"U": {"side": "right", "hom": "phi"}},
      "seeds": {"audit": 0, "sampling": 0}
    }

``"0"`` and ``"H"`` always name the zero space and the whole space.  A
lattice may instead be given as ``{"close": true, "generators": [...],
"cap": 512}``.  Carrier elements without a user name are called ``L<i>``
by their position in the sorted carrier.  A hom is ``"identity"``, a full
mapping from carrier names to subspaces (names or inline bases), or
``{"complete": "monotone", "values": {...}}`` for the monotone completion
of a partial assignment.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .algebra import OperatorSpace
from .lattice import DEFAULT_CAP, CapExceeded, NotMonotone, OrderHom, SubspaceLattice, lattice_closure
from .linalg import DimensionMismatch, Subspace, full_space, parse_vector, span, zero_space
from .scalars import FIELDS, GaussianRational, format_scalar, parse_scalar

__all__ = ["DocumentError", "Workspace", "load_workspace", "parse_workspace", "to_jsonable", "canonical_json"]

MAX_DIM = 6


class DocumentError(ValueError):
    """Malformed workspace document; the message starts with the offending field path."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass
class Workspace:
    field: str
    n: int
    names: dict[str, Subspace]
    lattice: SubspaceLattice
    homs: dict[str, OrderHom]
    modules: dict[str, tuple[str, str]]
    seeds: dict[str, int]
    algebra: OperatorSpace | None = None
    raw: dict = field(default_factory=dict)

    def name_of(self, s: Subspace) -> str | None:
        for k, v in self.names.items():
            if v == s:
                return k
        return None

    def digest(self, extra: dict | None = None) -> str:
        payload = {"doc": self.raw, "options": extra or {}}
        return hashlib.sha256(canonical_json(payload).encode()).hexdigest()[:16]

    def seed(self, key: str, default: int = 0) -> int:
        return int(self.seeds.get(key, default))


def _parse_basis(value: Any, n: int, fieldname: str, path: str) -> Subspace:
    if not isinstance(value, list):
        raise DocumentError(path, "expected a list of vectors")
    try:
        vectors = [parse_vector(v, n, fieldname) for v in value]
    except (ValueError, DimensionMismatch) as exc:
        raise DocumentError(path, str(exc)) from None
    return span(vectors, n)


def _resolve(value: Any, names: dict[str, Subspace], n: int, fieldname: str, path: str) -> Subspace:
    if isinstance(value, str):
        if value not in names:
            raise DocumentError(path, f"unknown subspace name {value!r}")
        return names[value]
    return _parse_basis(value, n, fieldname, path)


def parse_workspace(doc: Any, cap: int | None = None) -> Workspace:
    if not isinstance(doc, dict):
        raise DocumentError("$", "document must be a JSON object")
    fieldname = doc.get("field", "Q")
    if fieldname not in FIELDS:
        raise DocumentError("field", f"must be one of {FIELDS}")
    n = doc.get("dim")
    if not isinstance(n, int) or isinstance(n, bool) or not 1 <= n <= MAX_DIM:
        raise DocumentError("dim", f"must be an integer between 1 and {MAX_DIM}")

    names: dict[str, Subspace] = {"0": zero_space(n), "H": full_space(n)}
    subs = doc.get("subspaces", {})
    if not isinstance(subs, dict):
        raise DocumentError("subspaces", "must be an object")
    for key, value in subs.items():
        if key in ("0", "H"):
            raise DocumentError(f"subspaces.{key}", "reserved name")
        names[key] = _parse_basis(value, n, fieldname, f"subspaces.{key}")

    lat_doc = doc.get("lattice", {"close": True, "generators": []})
    if not isinstance(lat_doc, dict):
        raise DocumentError("lattice", "must be an object")
    if "carrier" in lat_doc:
        carrier = lat_doc["carrier"]
        if not isinstance(carrier, list):
            raise DocumentError("lattice.carrier", "must be a list of names")
        elems = [_resolve(c, names, n, fieldname, f"lattice.carrier[{i}]") for i, c in enumerate(carrier)]
        try:
            lattice = SubspaceLattice(elems, n)
        except ValueError as exc:
            raise DocumentError("lattice.carrier", str(exc)) from None
    elif lat_doc.get("close"):
        gens = lat_doc.get("generators", [])
        if not isinstance(gens, list):
            raise DocumentError("lattice.generators", "must be a list")
        elems = [_resolve(g, names, n, fieldname, f"lattice.generators[{i}]") for i, g in enumerate(gens)]
        use_cap = cap if cap is not None else lat_doc.get("cap", DEFAULT_CAP)
        try:
            lattice = lattice_closure(elems, n, cap=use_cap)
        except CapExceeded as exc:
            raise DocumentError("lattice", str(exc)) from None
        except ValueError as exc:
            raise DocumentError("lattice.cap", str(exc)) from None
    else:
        raise DocumentError("lattice", 'needs "carrier" or "close": true')

    by_space = {v: k for k, v in reversed(list(names.items()))}
    for i, e in enumerate(lattice):
        if e not in by_space:
            label = f"L{i}"
            if label in names:
                raise DocumentError("subspaces", f"name {label!r} collides with an unnamed carrier element")
            names[label] = e
            by_space[e] = label

    homs: dict[str, OrderHom] = {}
    hom_docs = doc.get("homs", {})
    if not isinstance(hom_docs, dict):
        raise DocumentError("homs", "must be an object")
    for hname, hdoc in hom_docs.items():
        homs[hname] = _parse_hom(hdoc, lattice, names, n, fieldname, f"homs.{hname}")

    modules: dict[str, tuple[str, str]] = {}
    mod_docs = doc.get("modules", {})
    if not isinstance(mod_docs, dict):
        raise DocumentError("modules", "must be an object")
    for mname, mdoc in mod_docs.items():
        path = f"modules.{mname}"
        if not isinstance(mdoc, dict):
            raise DocumentError(path, "must be an object")
        side = mdoc.get("side", "right")
        if side not in ("right", "left"):
            raise DocumentError(f"{path}.side", 'must be "right" or "left"')
        hom = mdoc.get("hom")
        if hom not in homs:
            raise DocumentError(f"{path}.hom", f"unknown hom {hom!r}")
        modules[mname] = (side, hom)

    algebra = None
    if "algebra" in doc:
        mats = doc["algebra"]
        if not isinstance(mats, list):
            raise DocumentError("algebra", "must be a list of matrices")
        parsed = []
        for i, m in enumerate(mats):
            if not isinstance(m, list) or len(m) != n:
                raise DocumentError(f"algebra[{i}]", f"must be a {n}x{n} matrix")
            try:
                parsed.append(tuple(parse_vector(r, n, fieldname) for r in m))
            except (ValueError, DimensionMismatch) as exc:
                raise DocumentError(f"algebra[{i}]", str(exc)) from None
        algebra = OperatorSpace.from_matrices(parsed, n)

    seeds = doc.get("seeds", {})
    if not isinstance(seeds, dict) or not all(isinstance(v, int) for v in seeds.values()):
        raise DocumentError("seeds", "must map names to integers")

    return Workspace(fieldname, n, names, lattice, homs, modules, dict(seeds), algebra, doc)


def _parse_hom(hdoc: Any, lattice: SubspaceLattice, names: dict, n: int, fieldname: str, path: str) -> OrderHom:
    try:
        if hdoc == "identity":
            return OrderHom.identity(lattice)
        if isinstance(hdoc, dict) and hdoc.get("complete") == "monotone":
            values = hdoc.get("values", {})
            if not isinstance(values, dict):
                raise DocumentError(f"{path}.values", "must be an object")
            assigned = {}
            for key, v in values.items():
                e = _resolve(key, names, n, fieldname, f"{path}.values.{key}")
                if e not in lattice:
                    raise DocumentError(f"{path}.values.{key}", "not a carrier element")
                assigned[e] = _resolve(v, names, n, fieldname, f"{path}.values.{key}")
            return OrderHom.monotone_completion(lattice, assigned)
        if not isinstance(hdoc, dict):
            raise DocumentError(path, 'must be "identity" or an object')
        table = {}
        for key, v in hdoc.items():
            e = _resolve(key, names, n, fieldname, f"{path}.{key}")
            if e not in lattice:
                raise DocumentError(f"{path}.{key}", "not a carrier element")
            table[e] = _resolve(v, names, n, fieldname, f"{path}.{key}")
        return OrderHom(lattice, table)
    except NotMonotone as exc:
        raise DocumentError(path, f"not monotone: {exc}") from None
    except KeyError as exc:
        raise DocumentError(path, str(exc.args[0])) from None


def load_workspace(path: str, cap: int | None = None) -> Workspace:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    except OSError as exc:
        raise DocumentError(path, exc.strerror or str(exc)) from None
    return parse_workspace(doc, cap)


def to_jsonable(obj: Any) -> Any:
    """Convert library values to plain JSON: scalars become strings, subspaces basis lists."""
    if isinstance(obj, (Fraction, GaussianRational)):
        return format_scalar(obj)
    if isinstance(obj, Subspace):
        return obj.to_json()
    if isinstance(obj, OperatorSpace):
        return obj.to_json()
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, "to_json"):
        return obj.to_json()
    return obj


def canonical_json(obj: Any) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, separators=(",", ":"))
