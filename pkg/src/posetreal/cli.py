"""``poly``: validate inputs, run single operations, fuzz suites and experiments."""
from __future__ import annotations

import argparse
import sys

from posetreal import experiments as ex
from posetreal import io
from posetreal.approximation import hahn_phi, lcu_pair, nerve_tower
from posetreal.covers import bonding, ip, nerve, vd
from posetreal.errors import PosetError
from posetreal.homology import z2_betti
from posetreal.realization import d3_upper, dist, h_down
from posetreal.subdivision import barycentric, canonical


# ------------------------------------------------------------------ ops

def _op_closure(doc):
    return io.poset_to_json(io.poset_from_json(doc).closure())


def _op_canonical(doc):
    return io.poset_to_json(canonical(io.poset_from_json(doc)))


def _op_barycentric(doc):
    return io.poset_to_json(barycentric(io.poset_from_json(doc)))


def _op_homology(doc):
    if "simplices" in doc:
        K = [frozenset(io.decode_label(v) for v in s) for s in doc["simplices"]]
    else:
        K = io.poset_from_json(doc)
    return {"betti_z2": z2_betti(K)}


def _op_dist(doc):
    P = io.poset_from_json(doc["poset"])
    x, y = io.point_from_json(doc["x"], P), io.point_from_json(doc["y"], P)
    return {"dist": dist(x, y), "d3_upper": d3_upper(x, y)[0]}


def _op_h_down(doc):
    P = io.poset_from_json(doc["poset"])
    x = io.point_from_json(doc["x"], canonical(P.closure()))
    return {"point": h_down(x, P)}


def _op_nerve(doc):
    return io.poset_to_json(nerve(io.cover_from_json(doc)))


def _op_ip(doc):
    return io.poset_to_json(ip(io.cover_from_json(doc)))


def _op_vd(doc):
    return io.poset_to_json(vd(io.cover_from_json(doc)))


def _op_bonding(doc):
    fine, coarse = io.cover_from_json(doc["fine"]), io.cover_from_json(doc["coarse"])
    return io.map_to_json(bonding(fine, coarse))


def _op_lcu(doc):
    P = io.poset_from_json(doc["poset"])
    x, y = io.point_from_json(doc["x"], P), io.point_from_json(doc["y"], P)
    xp, yp = lcu_pair(x, y, io.parse_rational(doc["delta"]))
    return {"x_prime": xp, "y_prime": yp}


def _op_hahn(doc):
    f, Q = io.sampled_map_from_json(doc)
    res = hahn_phi(f, Q, int(doc.get("n", 1)))
    return {
        "ok": res.ok,
        "phi": [[io.encode_label(x), res.phi[x]] for x in f.domain.points],
        "certificates": [
            {"point": io.encode_label(x), "contained": c.contained, "distance": c.distance, "bound": c.bound}
            for x, c in res.certificates.items()
        ],
    }


def _op_tower(doc):
    X, covers = io.tower_from_json(doc)
    T = nerve_tower(X, covers)
    return {"nerve_sizes": [len(N) for N in T.nerves], "depth": T.depth}


OPS = {
    "closure": _op_closure,
    "canonical": _op_canonical,
    "barycentric": _op_barycentric,
    "homology": _op_homology,
    "dist": _op_dist,
    "h_down": _op_h_down,
    "nerve": _op_nerve,
    "ip": _op_ip,
    "vd": _op_vd,
    "bonding": _op_bonding,
    "lcu": _op_lcu,
    "hahn": _op_hahn,
    "tower": _op_tower,
}


# --------------------------------------------------------------- commands

def _write(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _emit(reports, args):
    if args.format == "csv":
        text = io.report_csv(reports)
    elif len(reports) == 1:
        text = io.report_json(reports[0], timing=args.timing)
    else:
        text = "[\n" + ",\n".join(io.report_json(r, timing=args.timing).rstrip() for r in reports) + "\n]\n"
    _write(text, args.out)
    for r in reports:
        status = "PASS" if r.ok else "FAIL"
        print(f"{status} {r.suite}", file=sys.stderr)
    return 0 if all(r.ok for r in reports) else 1


def cmd_validate(args):
    try:
        kind, obj = io.load_object(io.read_json(args.file))
    except (io.FormatError, PosetError, KeyError, ValueError) as e:
        print(f"invalid: {e}", file=sys.stderr)
        return 1
    if kind == "sampled_map":
        f, _ = obj
        bad = f.continuity_violations()
        if bad:
            print(f"valid sampled_map, {len(bad)} pairs break the continuity moduli", file=sys.stderr)
            return 1
    print(f"valid {kind}")
    return 0


def cmd_op(args):
    try:
        result = OPS[args.name](io.read_json(args.infile))
    except (io.FormatError, PosetError, KeyError, ValueError) as e:
        print(f"{args.name} failed: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    _write(io.dumps(result), args.out)
    return 0 if not isinstance(result, dict) or result.get("ok", True) else 1


def cmd_verify(args):
    fn = ex.SUITES[args.suite]
    kwargs = {}
    if args.suite == "ipvd":
        kwargs["max_size"] = args.max_size
    elif args.suite in ("hahn",):
        kwargs = {"trials": args.trials or 20, "seed": args.seed}
    else:
        kwargs = {"seed": args.seed}
        if args.trials:
            kwargs["trials"] = args.trials
    return _emit([fn(**kwargs)], args)


def cmd_experiment(args):
    name = args.name
    if name == "pigeonhole":
        ns = [args.n] if args.n else list(range(2, 9))
        reps = [ex.experiment_pigeonhole(n, samples=args.trials or 200, seed=args.seed) for n in ns]
    elif name == "codeleted":
        reps = [ex.experiment_codeleted(args.n or 1)]
    elif name == "sphere-nerve":
        reps = [ex.experiment_sphere_nerve(args.n or 1)]
    else:
        if args.tower:
            X, covers = io.tower_from_json(io.read_json(args.tower))
            reps = [ex.experiment_tower(X, covers)]
        else:
            reps = [ex.experiment_tower()]
    return _emit(reps, args)


def build_parser():
    p = argparse.ArgumentParser(prog="poly", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="check a JSON document")
    v.add_argument("file")
    v.set_defaults(func=cmd_validate)

    o = sub.add_parser("op", help="run one operation on a JSON input")
    o.add_argument("name", choices=sorted(OPS))
    o.add_argument("--in", dest="infile", required=True)
    o.add_argument("--out", default="-")
    o.set_defaults(func=cmd_op)

    def common(sp):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--trials", type=int, default=None)
        sp.add_argument("--out", default="-")
        sp.add_argument("--format", choices=["json", "csv"], default="json")
        sp.add_argument("--timing", action="store_true", help="include wall time (breaks byte identity)")

    r = sub.add_parser("verify", help="run a randomized invariant suite")
    r.add_argument("suite", choices=sorted(ex.SUITES))
    r.add_argument("--max-size", type=int, default=6)
    common(r)
    r.set_defaults(func=cmd_verify)

    e = sub.add_parser("experiment", help="run a worked experiment")
    e.add_argument("name", choices=sorted(ex.EXPERIMENTS))
    e.add_argument("--n", type=int, default=None)
    e.add_argument("--tower", default=None, help="JSON document with a metric and a list of covers")
    common(e)
    e.set_defaults(func=cmd_experiment)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (io.FormatError, PosetError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
