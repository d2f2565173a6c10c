"""Append-only text cache of extremal results.

One record per line, tab-separated ``key=value`` fields in a fixed order.
Formatting a parsed line reproduces it byte for byte.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from datetime import datetime, timezone

from .embedding import GridFamily
from .errors import CorruptRecordError
from .extremal import is_free
from .lattice import SetFamily
from .poset import Poset

KINDS = ("la_star", "ex_star", "ex_star_gapped", "forb_star")
FIELDS = ("kind", "poset", "relation", "n", "d", "sides", "t", "value", "exact",
          "witness", "timestamp", "version")


def _now():
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _version():
    from . import __version__
    return __version__


@dataclass(frozen=True)
class ExtremalRecord:
    kind: str
    relation: str                 # "k:x<y,..." over covers, 0-based
    value: int
    n: int | None = None
    d: int | None = None
    sides: tuple | None = None
    t: int | None = None
    exact: bool = True
    witness: tuple | None = None  # bitmasks, or grid points
    timestamp: str = field(default_factory=_now)
    version: str = field(default_factory=_version)

    @classmethod
    def for_result(cls, kind, P, value, witness=None, exact=True, **params):
        if witness is not None and not isinstance(witness, tuple):
            witness = tuple(witness.members)
        if params.get("sides") is not None:
            params["sides"] = tuple(params["sides"])
            params.setdefault("d", len(params["sides"]))
        return cls(kind, relation_text(P), int(value), exact=bool(exact), witness=witness, **params)

    @property
    def poset(self):
        return parse_relation(self.relation)

    @property
    def fingerprint(self):
        return self.poset.fingerprint()

    def params(self):
        return {"n": self.n, "d": self.d, "sides": self.sides, "t": self.t}

    def witness_family(self):
        if self.witness is None:
            return None
        if self.sides is not None:
            return GridFamily(self.sides, self.witness)
        return SetFamily(self.n, self.witness)


def relation_text(P):
    return f"{P.size}:" + ",".join(f"{x}<{y}" for x, y in P.covers())


def parse_relation(text):
    k, _, rest = text.partition(":")
    pairs = []
    for tok in filter(None, rest.split(",")):
        x, y = tok.split("<")
        pairs.append((int(x), int(y)))
    return Poset.from_relations(int(k), pairs)


def _fmt_opt(v):
    return "-" if v is None else str(v)


def format_record(rec):
    if rec.witness is None:
        witness = "-"
    elif rec.sides is not None:
        witness = ";".join(".".join(map(str, p)) for p in rec.witness) or "_"
    else:
        witness = ",".join(f"0x{m:x}" for m in rec.witness) or "_"
    values = {
        "kind": rec.kind,
        "poset": rec.fingerprint,
        "relation": rec.relation,
        "n": _fmt_opt(rec.n),
        "d": _fmt_opt(rec.d),
        "sides": "-" if rec.sides is None else "x".join(map(str, rec.sides)),
        "t": _fmt_opt(rec.t),
        "value": str(rec.value),
        "exact": "1" if rec.exact else "0",
        "witness": witness,
        "timestamp": rec.timestamp,
        "version": rec.version,
    }
    return "\t".join(f"{k}={values[k]}" for k in FIELDS)


def _opt_int(v):
    return None if v == "-" else int(v)


def parse_record(line, lineno=0):
    """Inverse of :func:`format_record`; raises :class:`CorruptRecordError`."""
    parts = line.rstrip("\n").split("\t")
    try:
        pairs = [p.split("=", 1) for p in parts]
        keys = [kv[0] for kv in pairs]
        if keys != list(FIELDS) or any(len(kv) != 2 for kv in pairs):
            raise ValueError(f"expected fields {', '.join(FIELDS)}")
        raw = dict(pairs)
        if raw["kind"] not in KINDS:
            raise ValueError(f"unknown kind {raw['kind']!r}")
        sides = None if raw["sides"] == "-" else tuple(int(k) for k in raw["sides"].split("x"))
        if raw["witness"] == "-":
            witness = None
        elif raw["witness"] == "_":
            witness = ()
        elif sides is not None:
            witness = tuple(tuple(int(a) for a in p.split(".")) for p in raw["witness"].split(";"))
        else:
            witness = tuple(int(m, 16) for m in raw["witness"].split(","))
        if raw["exact"] not in ("0", "1"):
            raise ValueError("exact must be 0 or 1")
        rec = ExtremalRecord(
            kind=raw["kind"], relation=raw["relation"], value=int(raw["value"]),
            n=_opt_int(raw["n"]), d=_opt_int(raw["d"]), sides=sides, t=_opt_int(raw["t"]),
            exact=raw["exact"] == "1", witness=witness,
            timestamp=raw["timestamp"], version=raw["version"])
        if rec.fingerprint != raw["poset"]:
            raise ValueError("poset fingerprint does not match the relation")
        if rec.value < 0:
            raise ValueError("negative value")
    except CorruptRecordError:
        raise
    except (ValueError, KeyError, TypeError) as exc:
        raise CorruptRecordError(lineno, str(exc)) from None
    return rec


class ResultCache:
    """Single-writer cache file; later records win on lookup."""

    def __init__(self, path):
        self.path = os.fspath(path)

    def records(self):
        if not os.path.exists(self.path):
            return []
        out = []
        with open(self.path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if line.strip():
                    out.append((lineno, parse_record(line, lineno)))
        return out

    def put(self, record):
        line = format_record(record)
        with open(self.path, "a", encoding="utf-8", newline="\n") as fh:
            fh.write(line + "\n")
        return record

    def get(self, kind, P, **params):
        """Latest matching record, witness re-verified, or ``None``."""
        want = {"n": None, "d": None, "sides": None, "t": None}
        want.update(params)
        if want["sides"] is not None:
            want["sides"] = tuple(want["sides"])
            if want["d"] is None:
                want["d"] = len(want["sides"])
        fp = P.fingerprint()
        found = None
        for lineno, rec in self.records():
            if rec.kind == kind and rec.fingerprint == fp and rec.params() == want:
                found = (lineno, rec)
        if found is None:
            return None
        lineno, rec = found
        family = rec.witness_family()
        if family is not None:
            t = rec.t or 0
            if not is_free(P, family, t):
                raise CorruptRecordError(lineno, "witness contains a forbidden copy")
            if rec.exact and len(family) != rec.value:
                raise CorruptRecordError(lineno, "witness size differs from value")
        return rec
