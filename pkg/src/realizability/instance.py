"""JSON instance documents for finite Krivine structures.

Tables are written with term and stack *names*, so a document reads::

    {"terms": ["K", "S", "cc"], "stacks": ["a"],
     "app": [["K", "K", "K"], ...], "push": [["a"], ...], "save": ["K"],
     "K": "K", "S": "S", "cc": "cc", "pole": [["K", "a"]], "qp": [...]}

``qp`` is optional; when present the loader returns a :class:`FiniteAks`.
A ``meta`` object is carried through untouched.
"""
from __future__ import annotations

import json
from pathlib import Path

from .errors import ParseError, SchemaError
from .rl_core import RealizabilityLattice, bits_of, members
from .paks import FiniteAks, FinitePaks

FIELDS = ("terms", "stacks", "app", "push", "save", "K", "S", "cc", "pole")


def _names(doc, key):
    v = doc[key]
    if not isinstance(v, list) or not all(isinstance(x, str) for x in v):
        raise SchemaError(key, "expected a list of names")
    if len(set(v)) != len(v):
        raise SchemaError(key, "duplicate names")
    if not v:
        raise SchemaError(key, "must be non-empty")
    return {name: i for i, name in enumerate(v)}


def _lookup(table, name, field):
    if not isinstance(name, str) or name not in table:
        raise SchemaError(field, f"unknown name {name!r}")
    return table[name]


def _matrix(doc, key, rows, cols, values):
    m = doc[key]
    if not isinstance(m, list) or len(m) != len(rows):
        raise SchemaError(key, f"expected {len(rows)} rows")
    out = []
    for i, row in enumerate(m):
        if not isinstance(row, list) or len(row) != len(cols):
            raise SchemaError(key, f"row {i} must have {len(cols)} entries")
        out.append([_lookup(values, v, f"{key}[{i}]") for v in row])
    return out


def paks_from_doc(doc: dict):
    if not isinstance(doc, dict):
        raise SchemaError("document", "expected a JSON object")
    for key in FIELDS:
        if key not in doc:
            raise SchemaError(key, "missing field")
    terms = _names(doc, "terms")
    stacks = _names(doc, "stacks")
    app = _matrix(doc, "app", terms, terms, terms)
    push = _matrix(doc, "push", terms, stacks, stacks)
    save = doc["save"]
    if not isinstance(save, list) or len(save) != len(stacks):
        raise SchemaError("save", f"expected {len(stacks)} entries")
    save = [_lookup(terms, v, "save") for v in save]
    pole = set()
    if not isinstance(doc["pole"], list):
        raise SchemaError("pole", "expected a list of pairs")
    for pair in doc["pole"]:
        if not isinstance(pair, list) or len(pair) != 2:
            raise SchemaError("pole", f"bad pair {pair!r}")
        pole.add((_lookup(terms, pair[0], "pole"), _lookup(stacks, pair[1], "pole")))
    rl = RealizabilityLattice(tuple(doc["terms"]), tuple(doc["stacks"]), frozenset(pole))
    p = FinitePaks(rl, app, push, save, _lookup(terms, doc["K"], "K"),
                   _lookup(terms, doc["S"], "S"), _lookup(terms, doc["cc"], "cc"))
    if "qp" in doc and doc["qp"] is not None:
        qp = bits_of(_lookup(terms, v, "qp") for v in doc["qp"])
        return FiniteAks(p, qp)
    return p


def paks_to_doc(p, meta=None) -> dict:
    qp = None
    if isinstance(p, FiniteAks):
        qp, p = p.qp, p.paks
    T, P = p.rl.terms, p.rl.stacks
    doc = {
        "terms": list(T),
        "stacks": list(P),
        "app": [[T[v] for v in row] for row in p.app],
        "push": [[P[v] for v in row] for row in p.push],
        "save": [T[v] for v in p.save],
        "K": T[p.K], "S": T[p.S], "cc": T[p.cc],
        "pole": [[T[t], P[q]] for t, q in sorted(p.rl.pole)],
    }
    if qp is not None:
        doc["qp"] = [T[t] for t in members(qp)]
    if meta:
        doc["meta"] = meta
    return doc


def dumps(p, meta=None) -> str:
    return json.dumps(paks_to_doc(p, meta), indent=1) + "\n"


def loads(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, (exc.lineno, exc.colno)) from None
    return paks_from_doc(doc)


def parse_instance(path):
    """Load an instance file; raises ParseError, SchemaError or InvalidPaks."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}", str(path)) from None
    obj = loads(text)
    (obj.paks if isinstance(obj, FiniteAks) else obj).require_valid()
    return obj


def read_meta(path) -> dict:
    return json.loads(Path(path).read_text()).get("meta", {})
