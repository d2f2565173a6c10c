"""Command-line front end.  Exit status: 0 success, 1 usage error, 2 guard or timeout."""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings
from fractions import Fraction
from math import sqrt

import numpy as np

from . import __version__, config
from .cache import ExtremalRecord, ResultCache
from .containers import (build_containers, check_tree_coverage, container_tree,
                         copies_hypergraph, forb_certificate, Hypergraph)
from .decomposition import (default_side_length, estimate_grid_pair_probability,
                            format_partition, grid_pair_probability_bound, grid_partition,
                            partition_to_dot, permute_partition, scd)
from .embedding import (GridFamily, automorphism_count, d_star, full_grid, mu,
                        parse_grid_text)
from .errors import PosetfreeError, SizeGuardError
from .extremal import SolverTimeout, ex_star, ex_star_gapped, forb_star_count, la_star
from .lattice import (SetFamily, as_rng, containment_probability, estimate_containment,
                      full_lattice, gap_d, mask_to_set, parse_family_text, popcount,
                      verify_containment_lemma)
from .poset import dimension_of, height, load_poset, width
from .supersaturation import (SupersatParams, congruence_split, gapped_copy_via_shift,
                              greedy_balanced_collection, probe_gap_claim, supersat_pipeline)


class UsageError(Exception):
    pass


class Family(tuple):
    """Bitmask family; rendered per output format."""


class Points(tuple):
    """Grid points; rendered per output format."""


# -- rendering -------------------------------------------------------------------

def _set_text(m):
    return "{" + ",".join(map(str, mask_to_set(m))) + "}"


def _cell(v):
    if isinstance(v, Family):
        return " ".join(f"0x{m:x}" for m in v)
    if isinstance(v, Points):
        return " ".join(".".join(map(str, p)) for p in v)
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, dict):
        return ";".join(f"{k}={_cell(x)}" for k, x in v.items())
    if isinstance(v, (tuple, list)):
        return "x".join(map(_cell, v))
    return str(v)


def _text(v):
    if isinstance(v, Family):
        return " ".join(map(_set_text, v)) or "(empty)"
    if isinstance(v, Points):
        return " ".join("(" + ",".join(map(str, p)) + ")" for p in v) or "(empty)"
    if isinstance(v, (tuple, list)) and not isinstance(v, (Family, Points)):
        return "[" + ", ".join(map(_text, v)) + "]"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_text(x)}" for k, x in v.items()) + "}"
    return _cell(v)


def _plain(v):
    if isinstance(v, Family):
        return [mask_to_set(m) for m in v]
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (tuple, list)):
        return [_plain(x) for x in v]
    if isinstance(v, np.integer):
        return int(v)
    return v


def emit_report(rows, fmt="text", path=None, columns=None, meta=None):
    """Render ``rows`` (list of dicts) with optional ``meta`` key/values.

    CSV: ``# key: value`` comment lines for meta, then a header from ``columns``
    or first-seen key order, ``\\n`` endings.
    JSON: sorted keys.  Text: ``key: value`` lines.  Writes to ``path`` when given.
    """
    meta = meta or {}
    if columns is None:
        columns = []
        for r in rows:
            columns += [k for k in r if k not in columns]
    if fmt == "csv":
        buf = io.StringIO()
        for k, v in meta.items():
            buf.write(f"# {k}: {_cell(v)}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_cell(r.get(c)) for c in columns])
        out = buf.getvalue()
    elif fmt == "json":
        out = json.dumps({"meta": _plain(meta), "rows": _plain(rows)}, sort_keys=True,
                         indent=1) + "\n"
    else:
        lines = [f"{k}: {_text(v)}" for k, v in meta.items()]
        for i, r in enumerate(rows):
            if lines:
                lines.append("")
            lines += [f"{k}: {_text(r.get(k))}" for k in columns if k in r]
        out = "\n".join(lines) + "\n"
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(out)
    return out


def write_plot_data(path, xs, ys, names=("x", "y")):
    """Two-column CSV series."""
    return emit_report([{names[0]: x, names[1]: y} for x, y in zip(xs, ys)], "csv", path,
                       columns=list(names))


# -- argument helpers ---------------------------------------------------------------

def _int_range(text):
    for sep in ("..", "-"):
        if sep in text:
            a, b = text.split(sep, 1)
            return list(range(int(a), int(b) + 1))
    return [int(text)]


def _sides(text):
    return tuple(int(k) for k in text.replace(",", "x").split("x"))


def _threshold(text):
    s, _, value = text.partition("=")
    return int(s), (math.inf if value.strip().lower() in ("inf", "infinity") else float(value))


def _read(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _family(args):
    if getattr(args, "family", None):
        return parse_family_text(_read(args.family))
    if getattr(args, "n", None) is None:
        raise UsageError("give --family or --n")
    return full_lattice(int(args.n))


def _params(args, P=None):
    kw = {}
    for name in ("t", "k", "alpha", "c", "epsilon", "d"):
        if getattr(args, name, None) is not None:
            kw[name] = getattr(args, name)
    if getattr(args, "K_P", None) is not None:
        kw["K_P"] = args.K_P
    if getattr(args, "C_P", None) is not None:
        kw["C_P"] = args.C_P
    if getattr(args, "threshold", None):
        kw["thresholds"] = dict(args.threshold)
    return SupersatParams(**kw)


# -- commands --------------------------------------------------------------------------

def cmd_poset_info(args):
    P = load_poset(args.poset)
    row = {"poset": repr(P), "size": P.size, "relations": len(P.pairs), "height": height(P),
           "width": width(P), "dimension": dimension_of(P) if P.size > 1 else 1,
           "automorphisms": automorphism_count(P), "d_star": d_star(P),
           "mu": mu(P) if P.size > 1 else None, "fingerprint": P.fingerprint(),
           "covers": " ".join(f"{x + 1}<{y + 1}" for x, y in P.covers())}
    return [row], {}


def _cached(args, kind, P, compute, **params):
    cache = ResultCache(args.cache) if args.cache else None
    if cache is not None:
        rec = cache.get(kind, P, **params)
        if rec is not None:
            print(f"cache hit: {args.cache}", file=sys.stderr)
            return rec.value, rec.witness, rec.exact
    res = compute()
    witness = tuple(res.witness.members)
    if cache is not None and res.exact:
        cache.put(ExtremalRecord.for_result(kind, P, res.value, witness, res.exact, **params))
    return res.value, witness, res.exact


def cmd_la_star(args):
    P = load_poset(args.poset)
    rows = []
    for n in _int_range(args.n):
        value, witness, exact = _cached(args, "la_star", P,
                                        lambda: la_star(n, P, timeout=args.timeout), n=n)
        rows.append({"n": n, "value": value, "exact": exact, "witness": Family(witness)})
    if args.plot_data:
        write_plot_data(args.plot_data, [r["n"] for r in rows], [r["value"] for r in rows],
                        ("n", "la_star"))
    return rows, {"poset": repr(P)}, not all(r["exact"] for r in rows)


def cmd_ex_star(args):
    P = load_poset(args.poset)
    sides = _sides(args.sides)
    value, witness, exact = _cached(args, "ex_star", P,
                                    lambda: ex_star(sides, P, timeout=args.timeout), sides=sides)
    return [{"sides": sides, "value": value, "exact": exact, "witness": Points(witness)}], \
        {"poset": repr(P)}, not exact


def cmd_ex_star_gapped(args):
    P = load_poset(args.poset)
    sides = _sides(args.sides)
    value, witness, exact = _cached(
        args, "ex_star_gapped", P,
        lambda: ex_star_gapped(sides, P, args.t, timeout=args.timeout), sides=sides, t=args.t)
    return [{"sides": sides, "t": args.t, "value": value, "exact": exact,
             "witness": Points(witness)}], {"poset": repr(P)}, not exact


def cmd_forb_count(args):
    P = load_poset(args.poset)
    rows = []
    partial = False
    for n in _int_range(args.n):
        rec = None
        if args.cache:
            rec = ResultCache(args.cache).get("forb_star", P, n=n)
            if rec is not None:
                print(f"cache hit: {args.cache}", file=sys.stderr)
                rows.append({"n": n, "value": rec.value, "exact": rec.exact})
                continue
        try:
            value = forb_star_count(n, P, timeout=args.timeout)
            rows.append({"n": n, "value": value, "exact": True})
            if args.cache:
                ResultCache(args.cache).put(ExtremalRecord.for_result("forb_star", P, value, n=n))
        except SolverTimeout as exc:
            rows.append({"n": n, "value": exc.lower_bound, "exact": False})
            partial = True
            break
    if args.plot_data:
        write_plot_data(args.plot_data, [r["n"] for r in rows], [r["value"] for r in rows],
                        ("n", "forb_star"))
    return rows, {"poset": repr(P)}, partial


def cmd_d_star(args):
    P = load_poset(args.poset)
    return [{"poset": repr(P), "d_star": d_star(P)}], {}


def cmd_mu(args):
    P = load_poset(args.poset)
    return [{"poset": repr(P), "mu": mu(P)}], {}


def cmd_interval_lemma(args):
    n, m = args.n, args.m
    if args.family:
        S = parse_family_text(_read(args.family))
        if S.n != n:
            raise UsageError(f"family is over [{S.n}], not [{n}]")
    else:
        rng = as_rng(args.seed)
        S = SetFamily(n, sorted({int(x) for x in rng.integers(0, 1 << n, size=2)}))
    d = gap_d(S)
    formula = containment_probability(n, m, d)
    exhaustive = None
    if n <= config.ENUMERATION_GUARD:
        exhaustive, _ = verify_containment_lemma(S, m, n)
    freq = estimate_containment(S, m, args.trials, args.seed, n)
    p = float(formula)
    sigma = sqrt(p * (1 - p) / args.trials)
    ok = abs(freq - p) <= 3 * sigma + 1e-12 and (exhaustive is None or exhaustive == formula)
    row = {"n": n, "m": m, "family": Family(S.members), "gap": d, "formula": formula,
           "exhaustive": exhaustive, "frequency": freq, "sigma": sigma,
           "verdict": "PASS" if ok else "FAIL"}
    return [row], {"seed": args.seed, "trials": args.trials}


def cmd_grid_lemma(args):
    n, d = args.n, args.d
    L = args.L if args.L is not None else default_side_length(n, d, args.c or config.DEFAULT_C)
    gp = grid_partition(n, d, L)
    ss = np.random.SeedSequence(args.seed)
    pair_rng = np.random.default_rng(ss.spawn(1)[0])
    rows = []
    for i, child in enumerate(ss.spawn(args.instances + 1)[1:]):
        B = int(pair_rng.integers(1, 1 << n))
        A = B & int(pair_rng.integers(0, 1 << n))
        if A == B:
            A = B & (B - 1)
        bound = grid_pair_probability_bound(popcount(A), popcount(B), n, d)
        seed = int(child.generate_state(1)[0])
        est = estimate_grid_pair_probability(gp, A, B, args.trials, seed, threads=args.threads)
        q = min(float(bound), 1.0)
        sigma = sqrt(q * (1 - q) / args.trials)
        rows.append({"instance": i, "A": Family([A]), "B": Family([B]), "bound": bound,
                     "frequency": est, "sigma": sigma,
                     "verdict": "PASS" if est <= float(bound) + 3 * sigma + 1e-12 else "FAIL"})
    return rows, {"seed": args.seed, "n": n, "d": d, "L": L, "trials": args.trials,
                  "violations": len(gp.violations)}


def cmd_probe(args):
    F = _family(args)
    split = congruence_split(F, args.t)
    Fi = split.classes[split.largest]
    found = probe_gap_claim(Fi, args.t, samples=args.samples, seed=args.seed)
    rows = [{"members": Family(v.members), "gap": v.gap, "d_star": v.d_star, "t": v.t}
            for v in found]
    return rows, {"seed": args.seed, "t": args.t, "class": split.largest,
                  "class_size": len(Fi), "violations": len(rows)}


def cmd_scd(args):
    cp = scd(args.n)
    rows = [{"chain": i, "length": len(c), "sets": Family(c)} for i, c in enumerate(cp.chains)]
    return rows, {"n": args.n, "chains": len(rows)}


def cmd_grid_partition(args):
    L = args.L if args.L is not None else default_side_length(args.n, args.d,
                                                               args.c or config.DEFAULT_C)
    gp = grid_partition(args.n, args.d, L, repair=args.repair)
    meta = {"n": args.n, "d": args.d, "L": L, "grids": len(gp), "violations": len(gp.violations)}
    if args.seed is not None:
        gp = permute_partition(gp, seed=args.seed)
        meta["seed"] = args.seed
        meta["perm"] = tuple(p + 1 for p in gp.perm)
    if args.dot:
        with open(args.dot, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(partition_to_dot(gp))
    if args.export:
        with open(args.export, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(format_partition(gp))
    rows = [{"grid": j, "sides": gp.grid_sides(j), "size": len(gp.members(j))}
            for j in range(len(gp))]
    rows += [{"violation_block": b, "violation_chain": c, "violation_length": ln}
             for b, c, ln in gp.violations]
    return rows, meta


def _constants(params, P, mu_value):
    return {"t": params.t, "k": params.k, "K_P": params.kp(P), "alpha": params.alpha,
            "mu": mu_value}


def cmd_greedy(args):
    P = load_poset(args.poset)
    F = _family(args)
    params = _params(args)
    H, rep = greedy_balanced_collection(F, P, params)
    meta = _constants(params, P, rep["mu"])
    for key in ("family_size", "class_index", "class_size", "candidates", "copies",
                "theory_bound", "invariant_holds", "max_excess"):
        meta[key] = rep[key]
    rows = [{"size": s, "threshold": rep["thresholds"][s],
             "dangerous": rep["dangerous_by_size"][s], "max_degree": rep["max_degree_by_size"][s],
             "cap": rep["cap_by_size"][s], "cap_alpha": rep["cap_alpha_by_size"][s]}
            for s in sorted(rep["thresholds"])]
    if args.export:
        with open(args.export, "w", encoding="utf-8", newline="\n") as fh:
            for copy in H.copies:
                fh.write(" ".join(_set_text(m) for m in copy) + "\n")
    return rows, meta


def cmd_gapped_shift(args):
    P = load_poset(args.poset)
    if args.family:
        G = parse_grid_text(_read(args.family))
        meta = {}
    else:
        if args.sides is None or args.seed is None:
            raise UsageError("give --family, or --sides with --density and --seed")
        G = full_grid(_sides(args.sides))
        rng = as_rng(args.seed)
        keep = rng.random(len(G.members)) < args.density
        G = GridFamily(G.sides, [p for p, k in zip(G.members, keep) if k])
        meta = {"seed": args.seed, "density": args.density}
    meta.update({"sides": G.sides, "family_size": len(G), "t": args.t})
    res = gapped_copy_via_shift(G, P, args.t)
    if res is None:
        return [{"found": False}], meta
    return [{"found": True, "images": Points(res.images), "gap": res.gap()}], meta


def cmd_supersat(args):
    P = load_poset(args.poset)
    F = _family(args)
    params = _params(args)
    copies, rep = supersat_pipeline(F, P, params, seed=args.seed, L=args.L, t_prime=args.t_prime)
    meta = {k: rep[k] for k in ("seed", "n", "d", "L", "t", "t_prime", "K", "c", "C_P",
                                 "epsilon", "family_size", "filtered_size", "grids",
                                 "side_violations", "lambda", "asymptotic_lower_bound")}
    meta["perm"] = tuple(p + 1 for p in rep["perm"])
    rows = [dict(r) for r in rep["per_grid"]]
    if args.export:
        with open(args.export, "w", encoding="utf-8", newline="\n") as fh:
            for c in copies:
                fh.write(" ".join(_set_text(m) for m in c.images) + "\n")
    return rows, meta


def _read_hypergraph(text):
    lines = [ln.split("#")[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    v = int(lines[0])
    masks = [sum(1 << (int(x) - 1) for x in ln.replace(",", " ").split()) for ln in lines[1:]]
    return Hypergraph.from_masks(v, masks)


def cmd_containers(args):
    if args.hypergraph:
        H = _read_hypergraph(_read(args.hypergraph))
    else:
        P = load_poset(args.poset)
        H = copies_hypergraph(P, _family(args))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        cert = build_containers(H, tau=args.tau, A=args.A, samples=args.samples, seed=args.seed)
    meta = {"v": H.v, "r": H.r, "edges": len(H), "tau": args.tau, "A": args.A,
            "delta": cert.delta, "cap": cert.cap, "checked": cert.checked,
            "exhaustive": cert.exhaustive, "containers": len(cert.containers),
            "violations": 0}
    if not cert.exhaustive:
        meta["seed"] = args.seed
    meta.update({f"feasible_{k}": v for k, v in cert.feasibility.items()})
    rows = [{"fingerprint": _vertices(S), "container_size": popcount(S | f),
             "f_size": popcount(f)}
            for S, f in sorted(cert.containers.items(), key=lambda kv: (popcount(kv[0]), kv[0]))]
    return rows, meta


def _vertices(mask):
    return ".".join(str(x + 1) for x in range(mask.bit_length()) if mask >> x & 1) or "-"


def cmd_container_tree(args):
    P = load_poset(args.poset)
    params = _params(args)
    tree = container_tree(args.n, P, params, case1_k=args.case1_k, case2_k=args.case2_k,
                          tau=args.tau, A=args.A, C_P=args.C_P)
    upper, exact, ratio = forb_certificate(tree, args.n, P)
    meta = {"n": args.n, "poset": repr(P), "C_P": tree.C_P, "t": params.t,
            "case1_k": args.case1_k, "case2_k": args.case2_k, "tau": args.tau, "A": args.A,
            "nodes": len(tree.nodes), "leaves": len(tree.leaves), "upper_bound": upper,
            "forb_star": exact, "ratio": ratio}
    if args.check_coverage:
        meta["uncovered"] = len(check_tree_coverage(tree))
    if args.export:
        with open(args.export, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(tree.to_text())
    if args.export_leaves:
        with open(args.export_leaves, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(tree.leaves_text())
    rows = [{"node": nd.index, "parent": nd.parent, "depth": nd.depth, "case": nd.case,
             "size": len(nd.family), "k": nd.k, "children": len(nd.children),
             "flagged": nd.flagged} for nd in tree.nodes]
    return rows, meta


def cmd_cache(args):
    cache = ResultCache(args.cache)
    if args.action == "list":
        rows = []
        for ln, rec in cache.records():
            rows.append({"line": ln, "kind": rec.kind, "poset": rec.fingerprint,
                         "relation": rec.relation.replace(",", " "), "n": rec.n,
                         "sides": rec.sides, "t": rec.t, "value": rec.value, "exact": rec.exact,
                         "timestamp": rec.timestamp})
        return rows, {}
    if args.action == "verify":
        count = 0
        for ln, rec in cache.records():
            cache.get(rec.kind, rec.poset, **rec.params())
            count += 1
        return [], {"records": count, "status": "ok"}
    P = load_poset(args.poset)
    params = {"n": args.n, "t": args.t}
    if args.sides:
        params["sides"] = _sides(args.sides)
    rec = cache.get(args.kind, P, **params)
    if rec is None:
        return [], {"found": False}
    return [{"value": rec.value, "exact": rec.exact, "timestamp": rec.timestamp,
             "version": rec.version}], {"found": True}


# -- parser -------------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "csv", "json"), default="text")
    common.add_argument("--output", help="also write the report to this file")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--timeout", type=float)
    common.add_argument("--config", help="JSON file of flag defaults")

    p = _Parser(prog="posetfree", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, **kw):
        sp = sub.add_parser(name, parents=[common], **kw)
        sp.set_defaults(func=func)
        return sp

    def poset(sp, required=True):
        sp.add_argument("--poset", required=required, help="catalog spec (chain:3, V) or file")

    def supersat_flags(sp):
        sp.add_argument("--t", type=int)
        sp.add_argument("--k", type=float)
        sp.add_argument("--K-P", dest="K_P", type=float)
        sp.add_argument("--alpha", type=int, choices=(1, 2))
        sp.add_argument("--c", type=float)
        sp.add_argument("--epsilon", type=float)
        sp.add_argument("--C-P", dest="C_P", type=float)
        sp.add_argument("--threshold", type=_threshold, action="append",
                        help="size=value danger threshold override (value may be inf)")

    sp = add("poset-info", cmd_poset_info)
    poset(sp)
    for name, func in (("la-star", cmd_la_star), ("forb-count", cmd_forb_count)):
        sp = add(name, func)
        poset(sp)
        sp.add_argument("--n", required=True, help="n or a range a..b")
        sp.add_argument("--plot-data")
        sp.add_argument("--cache")
    sp = add("ex-star", cmd_ex_star)
    poset(sp)
    sp.add_argument("--sides", required=True, help="e.g. 3x4")
    sp.add_argument("--cache")
    sp = add("ex-star-gapped", cmd_ex_star_gapped)
    poset(sp)
    sp.add_argument("--sides", required=True)
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--cache")
    for name, func in (("d-star", cmd_d_star), ("mu", cmd_mu)):
        poset(add(name, func))

    verify = sub.add_parser("verify")
    vsub = verify.add_subparsers(dest="lemma", required=True, parser_class=_Parser)
    sp = vsub.add_parser("interval-lemma", parents=[common])
    sp.set_defaults(func=cmd_interval_lemma)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--trials", type=int, default=10000)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--family")
    sp = vsub.add_parser("grid-lemma", parents=[common])
    sp.set_defaults(func=cmd_grid_lemma)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--L", type=int)
    sp.add_argument("--c", type=float)
    sp.add_argument("--trials", type=int, default=10000)
    sp.add_argument("--instances", type=int, default=5)
    sp.add_argument("--seed", type=int, required=True)

    sp = add("probe-gap-claim", cmd_probe)
    sp.add_argument("--family")
    sp.add_argument("--n", type=int)
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--samples", type=int, help="omit for an exhaustive check")
    sp.add_argument("--seed", type=int, required=True)

    sp = add("scd", cmd_scd)
    sp.add_argument("--n", type=int, required=True)

    sp = add("grid-partition", cmd_grid_partition)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--L", type=int)
    sp.add_argument("--c", type=float)
    sp.add_argument("--repair", action="store_true")
    sp.add_argument("--seed", type=int, help="apply a random permutation of [n]")
    sp.add_argument("--dot")
    sp.add_argument("--export")

    sp = add("greedy-collection", cmd_greedy)
    poset(sp)
    sp.add_argument("--family")
    sp.add_argument("--n", type=int)
    supersat_flags(sp)
    sp.add_argument("--export")

    sp = add("gapped-shift", cmd_gapped_shift)
    poset(sp)
    sp.add_argument("--family", help="grid family file")
    sp.add_argument("--sides")
    sp.add_argument("--density", type=float, default=0.5)
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--seed", type=int)

    sp = add("supersat", cmd_supersat)
    poset(sp)
    sp.add_argument("--family")
    sp.add_argument("--n", type=int)
    sp.add_argument("--d", type=int)
    sp.add_argument("--L", type=int)
    sp.add_argument("--t-prime", dest="t_prime", type=int)
    sp.add_argument("--seed", type=int, required=True)
    supersat_flags(sp)
    sp.add_argument("--export")

    sp = add("containers", cmd_containers)
    poset(sp, required=False)
    sp.add_argument("--hypergraph", help="file: v, then one edge per line (1-based vertices)")
    sp.add_argument("--family")
    sp.add_argument("--n", type=int)
    sp.add_argument("--tau", type=float, default=1.0)
    sp.add_argument("--A", type=float, default=1.0)
    sp.add_argument("--samples", type=int, default=2000)
    sp.add_argument("--seed", type=int, default=0)

    sp = add("container-tree", cmd_container_tree)
    poset(sp)
    sp.add_argument("--n", type=int, required=True)
    supersat_flags(sp)
    sp.add_argument("--case1-k", dest="case1_k", type=float, default=1.0)
    sp.add_argument("--case2-k", dest="case2_k", type=float, default=4.0)
    sp.add_argument("--tau", type=float, default=1.0)
    sp.add_argument("--A", type=float, default=1.0)
    sp.add_argument("--check-coverage", action="store_true")
    sp.add_argument("--export")
    sp.add_argument("--export-leaves")

    sp = add("cache", cmd_cache)
    sp.add_argument("action", choices=("list", "get", "verify"))
    sp.add_argument("--cache", required=True)
    sp.add_argument("--kind")
    poset(sp, required=False)
    sp.add_argument("--n", type=int)
    sp.add_argument("--sides")
    sp.add_argument("--t", type=int)
    return p


def _apply_config(args):
    if not getattr(args, "config", None):
        return
    with open(args.config, encoding="utf-8") as fh:
        data = json.load(fh)
    for key, value in data.items():
        key = key.replace("-", "_")
        if getattr(args, key, None) is None:
            setattr(args, key, value)


def main(argv=None, stdout=None):
    """Run one command; returns the exit status."""
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _apply_config(args)
        result = args.func(args)
    except UsageError as exc:
        print(f"posetfree: error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except (SizeGuardError, SolverTimeout) as exc:
        print(f"posetfree: limit reached: {exc}", file=sys.stderr)
        return 2
    except (PosetfreeError, ValueError, KeyError, OSError) as exc:
        print(f"posetfree: error: {exc}", file=sys.stderr)
        return 1
    rows, meta, *rest = result
    partial = bool(rest and rest[0])
    if partial:
        meta = dict(meta, partial=True)
    out = emit_report(rows, args.format, args.output, meta=meta)
    stdout.write(out)
    return 2 if partial else 0


def main_exit():
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
