"""Command line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or load error.
"""
from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from . import fixtures, verify
from .charts import NonGenericCovector, cc, cc_inverse, intersect_zero_section
from .complex import ComplexError, OpenSet, euler_char_cc, manifold_report
from .constructible import euler_integral, pullback_subdivision
from .cosheaf import mv_split
from .formats import LoadError, Workspace, dumps, function_doc, parse_rat, rat, table_doc
from .morse import NonInjectiveOrder, VertexOrder, morse_evaluate
from .orbifold import (check_regularity, class_of, coarse_weighted_integral, iota, orbifold_integral,
                       pushforward_p, quotient, regularize)


class UsageError(Exception):
    pass


def _vertex_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated vertex ids, got {text!r}") from None


def cmd_info(ws: Workspace, args):
    name = args.name
    for kind in ("complexes", "charts", "functions", "actions", "tables"):
        if name in getattr(ws, kind):
            obj = getattr(ws, kind)[name]
            break
    else:
        raise LoadError(f"unknown object {name!r}")
    doc = {"name": name, "kind": kind[:-1] if kind != "complexes" else "complex"}
    if kind == "complexes":
        doc.update({"simplices": len(obj), "f_vector": obj.f_vector(),
                    "euler_characteristic": rat(euler_char_cc(obj))})
        if args.manifold is not None:
            rep = manifold_report(obj, args.manifold)
            doc["manifold_check"] = {"n": rep.n, "pseudomanifold": rep.pseudomanifold,
                                     "bad_links": [list(s) for s, *_ in rep.bad_links], "ok": rep.ok}
    elif kind == "charts":
        doc.update({"complex": ws.owner.get(name), "dim": obj.n,
                    "chambers": len(obj.all_chambers)})
    elif kind == "functions":
        doc.update({"complex": ws.owner.get(name), "support": len(obj.support)})
    elif kind == "actions":
        rep = check_regularity(obj.complex, obj)
        doc.update({"complex": ws.owner.get(name), "order": obj.order, "free": obj.is_free(),
                    "regular": rep.ok, "quotient_safe": rep.quotient_safe})
    else:
        doc.update({"chart": ws.owner.get(name), "entries": len(obj.mult)})
    text = [f"{k}: {v}" for k, v in doc.items()]
    return doc, True, text


def _function(ws, names):
    if len(names) == 2:
        K = ws.get("complexes", names[0])
        f = ws.get("functions", names[1])
        if f.complex != K:
            raise UsageError(f"function {names[1]!r} does not live on complex {names[0]!r}")
        return f
    if len(names) == 1:
        return ws.get("functions", names[0])
    raise UsageError("expected [COMPLEX] FUNCTION")


def cmd_integrate(ws, args):
    f = _function(ws, args.names)
    val = euler_integral(f)
    return {"integral": rat(val)}, True, [rat(val)]


def cmd_morse_eval(ws, args):
    f = _function(ws, args.names)
    if args.heights:
        vals = _vertex_list_rat(args.heights)
        verts = f.complex.vertices
        if len(vals) != len(verts):
            raise UsageError(f"need {len(verts)} heights, got {len(vals)}")
        orders = [VertexOrder(dict(zip(verts, vals)))]
    else:
        rng = random.Random(f"{args.seed}:morse-eval")
        orders = [VertexOrder.random(f.complex, rng) for _ in range(args.trials)]
    values = [morse_evaluate(f, u) for u in orders]
    doc = {"values": [rat(v) for v in values], "integral": rat(euler_integral(f))}
    ok = all(v == euler_integral(f) for v in values)
    return doc, ok, [rat(values[0])] if len(set(values)) == 1 else [" ".join(map(rat, values))]


def _vertex_list_rat(text):
    return [parse_rat(x, "covector") for x in text.split(",") if x.strip()]


def _chart_function(ws, args):
    ch = ws.get("charts", args.chart)
    f = ws.get("functions", args.function)
    if f.complex != ch.complex:
        raise UsageError(f"function {args.function!r} does not live on chart {args.chart!r}")
    return ch, f


def cmd_cc(ws, args):
    ch, f = _chart_function(ws, args)
    t = cc(f, ch)
    doc = table_doc(t, args.chart)
    text = [f"{d['simplex']} {d['signs'] or '.'} {d['mult']}" for d in doc["entries"]]
    return doc, True, text


def cmd_cc_inverse(ws, args):
    t = ws.get("tables", args.table)
    f = cc_inverse(t)
    doc = function_doc(f, ws.owner[ws.owner[args.table]])
    return doc, True, [f"{list(s)} {rat(v)}" for s, v in f.items()]


def cmd_intersect(ws, args):
    if args.function is None:
        t = ws.get("tables", args.chart_or_table)
    else:
        ch = ws.get("charts", args.chart_or_table)
        f = ws.get("functions", args.function)
        if f.complex != ch.complex:
            raise UsageError("function does not live on that chart")
        t = cc(f, ch)
    xi = _vertex_list_rat(args.covector) if args.covector else None
    val = intersect_zero_section(t, xi, seed=args.seed)
    return {"zeta": rat(val)}, True, [rat(val)]


def cmd_mv_split(ws, args):
    f = _function(ws, args.names)
    K = f.complex
    U = OpenSet.union_of_stars(K, _vertex_list(args.U))
    V = OpenSet.union_of_stars(K, _vertex_list(args.V))
    sp = mv_split(f, U, V)
    eU, eV = sp.extended()
    doc = {"subdivisions": len(sp.sd.parts),
           "f_U": [{"simplex": list(s), "value": rat(v)} for s, v in eU.items()],
           "f_V": [{"simplex": list(s), "value": rat(v)} for s, v in eV.items()],
           "integral_U": rat(euler_integral(eU)), "integral_V": rat(euler_integral(eV)),
           "integral": rat(euler_integral(f))}
    ok = euler_integral(eU) + euler_integral(eV) == euler_integral(f)
    text = [f"subdivisions: {doc['subdivisions']}",
            f"integral: {doc['integral']} = {doc['integral_U']} + {doc['integral_V']}"]
    return doc, ok, text


def _quotient(ws, cname, aname, allow_regularize):
    K = ws.get("complexes", cname)
    G = ws.get("actions", aname)
    if G.complex != K:
        raise UsageError(f"action {aname!r} does not act on complex {cname!r}")
    if allow_regularize:
        K, G, sd = regularize(K, G)
    else:
        sd = None
    return quotient(K, G), sd


def cmd_quotient(ws, args):
    qd, sd = _quotient(ws, args.complex, args.action, args.regularize)
    doc = {"coarse": [list(s) for s in qd.coarse],
           "stabilizer_orders": [{"simplex": list(s), "order": qd.coarse_stabilizer_order(s)}
                                 for s in qd.coarse],
           "group_order": qd.action.order,
           "subdivisions": len(sd.parts) if sd is not None else 0}
    text = [f"{list(s)} |G_s|={qd.coarse_stabilizer_order(s)}" for s in qd.coarse]
    return doc, True, text


def cmd_iota(ws, args):
    qd, _ = _quotient(ws, args.complex, args.action, args.regularize)
    f = iota(qd)
    doc = {"iota": [{"simplex": list(s), "value": rat(v)} for s, v in f.items()]}
    return doc, True, [f"{list(s)} {rat(v)}" for s, v in f.items()]


def cmd_pushforward(ws, args):
    h = ws.get("functions", args.function)
    G = ws.get("actions", args.action)
    if h.complex != G.complex:
        raise UsageError("function and action live on different complexes")
    K, G2, sd = regularize(G.complex, G) if args.regularize else (G.complex, G, None)
    if sd is not None:
        h = pullback_subdivision(h, sd)
    qd = quotient(K, G2)
    c = class_of(h, G2)
    p = pushforward_p(c, qd)
    a, b = orbifold_integral(c), coarse_weighted_integral(c, qd)
    doc = {"pushforward": [{"simplex": list(s), "value": rat(v)} for s, v in p.items()],
           "orbifold_integral": rat(a), "coarse_weighted_integral": rat(b)}
    text = [f"{list(s)} {rat(v)}" for s, v in p.items()]
    text.append(f"integral over X: {rat(a)}; integral of p_!(f)*iota: {rat(b)}")
    return doc, a == b, text


def _emit_suite(doc):
    text = []
    suites = doc["suites"] if doc.get("suite") == "all" else [doc]
    for s in suites:
        label = s.get("chart") or s.get("action") or s.get("complex") or ""
        text.append(f"{s['suite']:<15} {label:<12} {'pass' if s['ok'] else 'FAIL'}")
        if s["suite"] == "orbifold-index" and doc is s:
            for r in s["results"]:
                text.append(f"  trial {r['trial']}: ({r['integral_X']}, {r['coarse_weighted']}, {r['zeta']})")
    return text


def cmd_verify(ws, args):
    what = args.what
    if what == "index":
        names = [args.chart] if args.chart else list(fixtures.INDEX_CHARTS)
        docs = [verify.index_suite(ws.get("charts", n), n, args.trials, args.seed) for n in names]
    elif what == "chambers":
        names = [args.chart] if args.chart else fixtures.chart_names()
        docs = [verify.chambers_suite(ws.get("charts", n), n) for n in names]
    elif what == "norm":
        names = [args.action] if args.action else list(fixtures.ORBIFOLD_ACTIONS)
        docs = [verify.norm_suite(ws.get("actions", n), n, args.trials, args.seed) for n in names]
    elif what == "orbifold-index":
        names = [args.action] if args.action else list(fixtures.ORBIFOLD_ACTIONS)
        docs = []
        for n in names:
            key = args.chart or n
            if key in ws.eqcharts:
                eq = ws.eqcharts[key]
            else:
                try:
                    eq = fixtures.equivariant_chart(key)
                except KeyError:
                    raise UsageError(f"no equivariant chart for {key!r}") from None
            if args.complex and ws.get("complexes", args.complex) != eq.chart.complex:
                raise UsageError(f"action {n!r} does not act on complex {args.complex!r}")
            docs.append(verify.orbifold_index_suite(eq, n, args.trials, args.seed))
    elif what == "cosheaf":
        names = [args.complex] if args.complex else list(fixtures.COVERS)
        docs = []
        for n in names:
            ch = ws.charts.get(n)
            K = ch.complex if ch is not None else ws.get("complexes", n)
            if args.U and args.V:
                U = OpenSet.union_of_stars(K, _vertex_list(args.U))
                V = OpenSet.union_of_stars(K, _vertex_list(args.V))
            elif n in fixtures.COVERS:
                U, V = fixtures.cover(n, K)
            else:
                raise UsageError(f"no cover known for {n!r}; pass --U and --V")
            docs.append(verify.cosheaf_suite(K, U, V, n, args.trials, args.seed, ch))
    elif what == "all":
        doc = verify.full_battery(args.trials, args.seed)
        return doc, doc["ok"], _emit_suite(doc)
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(what)
    doc = docs[0] if len(docs) == 1 else {"suite": what, "ok": all(d["ok"] for d in docs), "suites": docs}
    if len(docs) > 1:
        text = []
        for d in docs:
            text += _emit_suite(d)
    else:
        text = _emit_suite(doc)
    return doc, doc["ok"], text


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="64-bit unsigned seed")
    common.add_argument("--trials", type=int, default=100)
    common.add_argument("--out", type=Path, help="write the structured report here")
    common.add_argument("--load", type=Path, action="append", default=[],
                        help="JSON object file or directory of them (repeatable)")

    p = argparse.ArgumentParser(prog="eulercc",
                                description="Euler calculus, characteristic cycles and orbifold index checks")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("info", parents=[common])
    s.add_argument("name")
    s.add_argument("--manifold", type=int, help="also run the necessary n-manifold checks")
    s.set_defaults(func=cmd_info)

    s = sub.add_parser("integrate", parents=[common])
    s.add_argument("names", nargs="+", metavar="[COMPLEX] FUNCTION")
    s.set_defaults(func=cmd_integrate)

    s = sub.add_parser("morse-eval", parents=[common])
    s.add_argument("names", nargs="+", metavar="[COMPLEX] FUNCTION")
    s.add_argument("--heights", help="comma-separated rational heights in vertex order")
    s.set_defaults(func=cmd_morse_eval)

    s = sub.add_parser("cc", parents=[common])
    s.add_argument("chart")
    s.add_argument("function")
    s.set_defaults(func=cmd_cc)

    s = sub.add_parser("cc-inverse", parents=[common])
    s.add_argument("table")
    s.set_defaults(func=cmd_cc_inverse)

    s = sub.add_parser("intersect", parents=[common])
    s.add_argument("chart_or_table")
    s.add_argument("function", nargs="?")
    s.add_argument("--covector", help="comma-separated rational covector")
    s.set_defaults(func=cmd_intersect)

    s = sub.add_parser("mv-split", parents=[common])
    s.add_argument("names", nargs="+", metavar="[COMPLEX] FUNCTION")
    s.add_argument("--U", required=True, help="vertices whose open stars make up U")
    s.add_argument("--V", required=True, help="vertices whose open stars make up V")
    s.set_defaults(func=cmd_mv_split)

    for name, func in (("quotient", cmd_quotient), ("iota", cmd_iota)):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("complex")
        s.add_argument("action")
        s.add_argument("--regularize", action="store_true")
        s.set_defaults(func=func)

    s = sub.add_parser("pushforward", parents=[common])
    s.add_argument("function")
    s.add_argument("action")
    s.add_argument("--regularize", action="store_true")
    s.set_defaults(func=cmd_pushforward)

    s = sub.add_parser("verify", parents=[common])
    s.add_argument("what", choices=["index", "orbifold-index", "cosheaf", "norm", "chambers", "all"])
    s.add_argument("--chart")
    s.add_argument("--complex")
    s.add_argument("--action")
    s.add_argument("--U")
    s.add_argument("--V")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    if not 0 <= args.seed < 2**64:
        print("error: --seed must be a 64-bit unsigned integer", file=sys.stderr)
        return 2
    try:
        ws = Workspace.with_fixtures()
        for path in args.load:
            ws.load_path(path)
        doc, ok, text = args.func(ws, args)
    except (LoadError, UsageError, ComplexError, NonGenericCovector, NonInjectiveOrder,
            OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    for line in text:
        print(line)
    if args.out is not None:
        args.out.write_text(dumps(doc), encoding="utf-8")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
