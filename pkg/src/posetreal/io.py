"""JSON formats.  Rationals are ``"p/q"`` strings; no floats anywhere."""
from __future__ import annotations

import json
from fractions import Fraction

from posetreal.approximation import SampledMap
from posetreal.covers import Cover, FiniteMetric
from posetreal.poset import Adjoined, MonotoneMap, Poset, Preposet, Star
from posetreal.realization import RPoint
from posetreal.subdivision import Interval


class FormatError(ValueError):
    pass


def rational(v):
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def parse_rational(s):
    if isinstance(s, bool) or isinstance(s, float):
        raise FormatError(f"expected a rational string, got {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    try:
        return Fraction(s)
    except (TypeError, ValueError):
        raise FormatError(f"not a rational: {s!r}") from None


# ------------------------------------------------------------------ labels

def encode_label(x):
    if isinstance(x, bool) or x is None:
        raise FormatError(f"unsupported label {x!r}")
    if isinstance(x, (int, str)):
        return x
    if isinstance(x, Interval):
        return {"interval": [encode_label(x.lo), encode_label(x.hi)]}
    if isinstance(x, tuple):
        return [encode_label(e) for e in x]
    if isinstance(x, frozenset):
        items = [encode_label(e) for e in x]
        return {"set": sorted(items, key=_sort_key)}
    if isinstance(x, Star):
        out = {"dual": encode_label(x.base)}
        if x.stage:
            out["stage"] = x.stage
        return out
    if isinstance(x, Adjoined):
        return {"adjoined": x.kind, "level": x.level}
    raise FormatError(f"unsupported label {x!r}")


def decode_label(v):
    if isinstance(v, (int, str)) and not isinstance(v, bool):
        return v
    if isinstance(v, list):
        return tuple(decode_label(e) for e in v)
    if isinstance(v, dict):
        if "interval" in v:
            lo, hi = v["interval"]
            return Interval(decode_label(lo), decode_label(hi))
        if "set" in v:
            return frozenset(decode_label(e) for e in v["set"])
        if "dual" in v:
            return Star(decode_label(v["dual"]), v.get("stage", 0))
        if "adjoined" in v:
            return Adjoined(v["adjoined"], v.get("level", 0))
    raise FormatError(f"cannot decode label {v!r}")


def _sort_key(encoded):
    return json.dumps(encoded, sort_keys=True)


# ----------------------------------------------------------------- objects

def poset_to_json(P):
    kind = "poset" if isinstance(P, Poset) else "preposet"
    edges = P.covers() if isinstance(P, Poset) else P.edges
    rel = sorted(([encode_label(u), encode_label(v)] for u, v in edges), key=_sort_key)
    return {"kind": kind, "elements": [encode_label(e) for e in P.elements], "relations": rel}


def poset_from_json(obj):
    elements = [decode_label(e) for e in obj["elements"]]
    rel = [(decode_label(u), decode_label(v)) for u, v in obj.get("relations", [])]
    kind = obj.get("kind", "poset")
    if kind == "poset":
        return Poset(elements, rel)
    if kind == "preposet":
        return Preposet(elements, rel)
    raise FormatError(f"unknown poset kind {kind!r}")


def point_to_json(x):
    return {"chain": [encode_label(c) for c in x.chain], "weights": [rational(w) for w in x.weights]}


def point_from_json(obj, base):
    chain = [decode_label(c) for c in obj["chain"]]
    weights = [parse_rational(w) for w in obj["weights"]]
    return RPoint.make(base, zip(chain, weights))


def map_to_json(f):
    return {
        "kind": "map",
        "source": poset_to_json(f.source),
        "target": poset_to_json(f.target),
        "assign": [[encode_label(p), encode_label(f.assign[p])] for p in f.source.elements],
    }


def map_from_json(obj):
    S, T = poset_from_json(obj["source"]), poset_from_json(obj["target"])
    return MonotoneMap(S, T, {decode_label(p): decode_label(q) for p, q in obj["assign"]})


def metric_to_json(X):
    return {
        "kind": "metric",
        "points": [encode_label(p) for p in X.points],
        "d": [[rational(v) for v in row] for row in X.d],
    }


def metric_from_json(obj):
    points = [decode_label(p) for p in obj["points"]]
    return FiniteMetric(points, [[parse_rational(v) for v in row] for row in obj["d"]])


def cover_to_json(C):
    return {
        "kind": "cover",
        "ground": sorted((encode_label(p) for p in C.ground), key=_sort_key),
        "sets": [
            [encode_label(k), sorted((encode_label(p) for p in U), key=_sort_key)]
            for k, U in C.items()
        ],
    }


def cover_from_json(obj, ground=None):
    g = [decode_label(p) for p in obj["ground"]] if "ground" in obj else ground
    sets = obj["sets"]
    if isinstance(sets, dict):
        sets = list(sets.items())
    pairs = [(decode_label(k), [decode_label(p) for p in U]) for k, U in sets]
    if g is None:
        g = set().union(*(set(U) for _, U in pairs))
    return Cover(g, pairs)


def sampled_map_to_json(f, target):
    values = {}
    pairs = []
    for x in f.domain.points:
        pairs.append([encode_label(x), point_to_json(f.values[x])])
        values[x] = pairs[-1][1]
    out = {
        "kind": "sampled_map",
        "domain": metric_to_json(f.domain),
        "target": poset_to_json(target),
        "gamma": rational(f.gamma),
        "delta": rational(f.delta),
    }
    out["values"] = values if all(isinstance(x, str) for x in f.domain.points) else pairs
    return out


def sampled_map_from_json(obj):
    X = metric_from_json(obj["domain"])
    Q = poset_from_json(obj["target"])
    vals = obj["values"]
    items = vals.items() if isinstance(vals, dict) else vals
    values = {decode_label(x): point_from_json(v, Q) for x, v in items}
    return SampledMap(X, values, parse_rational(obj["gamma"]), parse_rational(obj["delta"])), Q


def tower_from_json(obj):
    X = metric_from_json(obj["metric"])
    return X, [cover_from_json(c, X.points) for c in obj["covers"]]


def tower_to_json(X, covers):
    return {"kind": "tower", "metric": metric_to_json(X), "covers": [cover_to_json(C) for C in covers]}


LOADERS = {
    "poset": poset_from_json,
    "preposet": poset_from_json,
    "map": map_from_json,
    "metric": metric_from_json,
    "cover": cover_from_json,
    "sampled_map": sampled_map_from_json,
    "tower": tower_from_json,
}


def load_object(obj):
    """Decode any tagged document; returns ``(kind, value)``."""
    kind = obj.get("kind") if isinstance(obj, dict) else None
    if kind not in LOADERS:
        raise FormatError(f"unknown or missing kind {kind!r}")
    return kind, LOADERS[kind](obj)


# ------------------------------------------------------------------ output

def jsonable(v):
    """Convert report values: rationals to strings, tuples to lists."""
    if isinstance(v, bool) or v is None or isinstance(v, (int, str)):
        return v
    if isinstance(v, Fraction):
        return rational(v)
    if isinstance(v, float):
        raise FormatError("floating point values are not serialized")
    if isinstance(v, dict):
        return {str(k): jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [jsonable(x) for x in v]
    if isinstance(v, RPoint):
        return point_to_json(v)
    return encode_label(v)


def dumps(obj):
    return json.dumps(jsonable(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def report_json(report, timing=False):
    d = report.to_dict(timing=timing)
    if timing:
        # Wall time is the only non-rational number and is kept out of rationals.
        wt = d.pop("wall_time")
        out = jsonable(d)
        out["wall_time_ms"] = int(wt * 1000)
        return json.dumps(out, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    return dumps(d)


def report_csv(reports):
    import csv
    import io as _io

    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["suite", "check", "passed", "detail"])
    for r in reports:
        for c in r.checks:
            w.writerow([r.suite, c.name, "pass" if c.passed else "fail", c.detail])
    return buf.getvalue()


def read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh, parse_float=_no_float)


def _no_float(s):
    raise FormatError(f"floating point literal {s} is not allowed; use a \"p/q\" string")


__all__ = [
    "FormatError",
    "rational",
    "parse_rational",
    "encode_label",
    "decode_label",
    "poset_to_json",
    "poset_from_json",
    "point_to_json",
    "point_from_json",
    "map_to_json",
    "map_from_json",
    "metric_to_json",
    "metric_from_json",
    "cover_to_json",
    "cover_from_json",
    "sampled_map_to_json",
    "sampled_map_from_json",
    "tower_to_json",
    "tower_from_json",
    "load_object",
    "jsonable",
    "dumps",
    "report_json",
    "report_csv",
    "read_json",
]
