"""JSON structure files for cover systems, locales and predicate models.

Cover system::

    {"elements": [...], "leq": [[i, j], ...], "covers": [[i, [j, ...]], ...], "R": [[i, j], ...]}

Locale with optional operator::

    {"elements": [...], "leq": [[i, j], ...], "m": [i, ...]}

Order pairs are closed reflexively and transitively.  A predicate model is a
cover-system document with ``"domain": [...]`` and
``"valuation": {"P": [[[d, ...], [i, ...]], ...]}`` listing, per argument tuple,
the points of the proposition.
"""
from __future__ import annotations

import json

from .locale import FiniteLocale
from .model import PredicateModel
from .poset import FinitePoset, mask_of
from .system import CoverSystem


class StructureError(ValueError):
    pass


def _poset(doc) -> FinitePoset:
    try:
        elements = list(doc["elements"])
        pairs = [tuple(map(int, p)) for p in doc.get("leq", [])]
    except (KeyError, TypeError, ValueError) as e:
        raise StructureError(f"bad elements/leq: {e}") from None
    n = len(elements)
    for a, b in pairs:
        if not (0 <= a < n and 0 <= b < n):
            raise StructureError(f"order pair ({a}, {b}) out of range")
    p = FinitePoset.from_pairs(elements, pairs)
    if not p.is_valid():
        raise StructureError("leq does not generate a partial order")
    return p


def cover_system_from_json(doc) -> CoverSystem:
    p = _poset(doc)
    n = p.size
    covers = [set() for _ in range(n)]
    try:
        for x, C in doc.get("covers", []):
            x = int(x)
            C = [int(c) for c in C]
            if not 0 <= x < n or any(not 0 <= c < n for c in C):
                raise StructureError(f"cover ({x}, {C}) out of range")
            covers[x].add(mask_of(C))
        R = None
        if "R" in doc and doc["R"] is not None:
            R = frozenset(tuple(map(int, pr)) for pr in doc["R"])
            if any(not (0 <= a < n and 0 <= b < n) for a, b in R):
                raise StructureError("R pair out of range")
    except (TypeError, ValueError) as e:
        if isinstance(e, StructureError):
            raise
        raise StructureError(f"bad covers/R: {e}") from None
    return CoverSystem(p, tuple(tuple(cs) for cs in covers), R)


def cover_system_to_json(s: CoverSystem) -> dict:
    p = s.poset
    doc = {
        "elements": list(p.elements),
        "leq": sorted([a, b] for a, b in p.leq if a != b),
        "covers": [[x, [i for i in range(p.size) if C >> i & 1]] for x, C in s.pairs()],
    }
    if s.R is not None:
        doc["R"] = sorted([a, b] for a, b in s.R)
    return doc


def locale_from_json(doc):
    p = _poset(doc)
    l = FiniteLocale(p)
    m = doc.get("m")
    if m is not None:
        m = tuple(int(v) for v in m)
        if len(m) != p.size or any(not 0 <= v < p.size for v in m):
            raise StructureError("operator m must list one element index per element")
    return l, m


def model_from_json(doc) -> PredicateModel:
    s = cover_system_from_json(doc)
    domain = tuple(doc.get("domain", ["*"]))
    val = {}
    for name, rows in doc.get("valuation", {}).items():
        val[name] = {tuple(int(d) for d in args): mask_of(int(i) for i in pts) for args, pts in rows}
    return PredicateModel(s, domain, val)


def kind_of(doc) -> str:
    if "covers" in doc:
        return "model" if "valuation" in doc else "cover"
    return "locale"


def load(path: str):
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as e:
            raise StructureError(f"invalid JSON: {e}") from None
    if not isinstance(doc, dict):
        raise StructureError("structure file must hold a JSON object")
    return doc
