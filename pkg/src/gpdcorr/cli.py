"""Command-line entry point and the document file format.

Documents are JSON with a fixed key order per kind, so serialisation is
byte-stable: finite maps are arrays of pairs, tuples are encoded as
arrays and decoded back.  Every command is deterministic; --seed is
accepted for interface stability but nothing here is randomised.

Exit codes: 0 ok, 1 violation found, 2 usage or parse error, 3 bound
exceeded.
"""

import argparse
import json
import sys

from . import cgx as cgxmod
from . import mn as mnmod
from .corr import Correspondence, compose, validate_correspondence
from .diagram import discrete_diagram, from_generators, validate_diagram
from .errors import (BoundExceeded, DepthInsufficient, Mismatch,
                     NotSupported, ParseError, SchemaError, Undefined)
from .fincat import FinCategory, PresentedShape, validate_category
from .groupoid import (FinGroupoid, Group, germ_groupoid,
                       validate_groupoid)
from .model import (model_discrete_shape, model_group_shape,
                    ore_universal_action, pair_groupoid_model,
                    tight_universal_action, verify_model)
from .selfsim import (SelfSimilarData, act_on_word, effective_check,
                      germ_equal, nf, nf_mul, slice_intersections)

FORMAT_VERSION = "1"

KINDS = ("category", "groupoid", "correspondence", "diagram",
         "complex_of_groups", "selfsimilar", "mn", "action")


def _enc(value):
    if isinstance(value, tuple):
        return ["t", [_enc(v) for v in value]]
    if isinstance(value, (list, frozenset, set)):
        return ["l", [_enc(v) for v in sorted(value, key=repr)]]
    return value


def _dec(value):
    if isinstance(value, list):
        tag, items = value
        decoded = [_dec(v) for v in items]
        return tuple(decoded) if tag == "t" else decoded
    return value


def _pairs(mapping):
    return [[_enc(k), _enc(v)] for k, v in
            sorted(mapping.items(), key=lambda kv: repr(kv[0]))]


def _unpairs(pairs):
    return {_dec(k): _dec(v) for k, v in pairs}


def category_payload(cat):
    return {"objects": [_enc(x) for x in cat.objects],
            "arrows": _pairs(cat.arrows),
            "compose": _pairs(cat.compose),
            "identities": _pairs(cat.identities)}


def category_from(payload):
    return FinCategory([_dec(x) for x in payload["objects"]],
                       _unpairs(payload["arrows"]),
                       _unpairs(payload["compose"]),
                       _unpairs(payload["identities"]))


def groupoid_payload(gpd):
    return {"category": category_payload(gpd.category),
            "inv": _pairs(gpd.inv)}


def groupoid_from(payload):
    return FinGroupoid(category_from(payload["category"]),
                       _unpairs(payload["inv"]))


def correspondence_payload(c):
    return {"left": groupoid_payload(c.left),
            "right": groupoid_payload(c.right),
            "carrier": [_enc(x) for x in c.carrier],
            "r": _pairs(c.rmap), "s": _pairs(c.smap),
            "lact": _pairs(c.lact), "ract": _pairs(c.ract)}


def correspondence_from(payload):
    return Correspondence(
        groupoid_from(payload["left"]), groupoid_from(payload["right"]),
        [_dec(x) for x in payload["carrier"]],
        _unpairs(payload["r"]), _unpairs(payload["s"]),
        _unpairs(payload["lact"]), _unpairs(payload["ract"]))


def group_payload(g):
    return {"elements": [_enc(x) for x in g.elements],
            "mul": _pairs(g.mul), "identity": _enc(g.identity)}


def group_from(payload):
    return Group([_dec(x) for x in payload["elements"]],
                 _unpairs(payload["mul"]), _dec(payload["identity"]))


def selfsimilar_payload(data):
    return {"group": group_payload(data.group),
            "vertices": [_enc(v) for v in data.vertices],
            "edges": [_enc(e) for e in data.edges],
            "er": _pairs(data.er), "es": _pairs(data.es),
            "vact": _pairs(data.vact), "eact": _pairs(data.eact),
            "cocycle": _pairs(data.cocycle)}


def selfsimilar_from(payload):
    return SelfSimilarData(
        group_from(payload["group"]),
        [_dec(v) for v in payload["vertices"]],
        [_dec(e) for e in payload["edges"]],
        _unpairs(payload["er"]), _unpairs(payload["es"]),
        _unpairs(payload["vact"]), _unpairs(payload["eact"]),
        _unpairs(payload["cocycle"]))


def complex_payload(c):
    return {"shape": category_payload(c.shape),
            "groups": [[_enc(x), group_payload(g)]
                       for x, g in sorted(c.groups.items(), key=repr)],
            "homs": [[_enc(g), _pairs(h)]
                     for g, h in sorted(c.homs.items(), key=repr)],
            "twists": _pairs(c.twists)}


def complex_from(payload):
    return cgxmod.ComplexOfGroups(
        category_from(payload["shape"]),
        {_dec(x): group_from(g) for x, g in payload["groups"]},
        {_dec(g): _unpairs(h) for g, h in payload["homs"]},
        _unpairs(payload["twists"]))


def diagram_payload(d):
    shape = d.shape
    payload = {"shape_kind": shape.kind,
               "objects": [_enc(x) for x in shape.objects],
               "gens": _pairs({g: (shape.gen_dst[g], shape.gen_src[g])
                               for g in shape.gens}),
               "bound": d.bound,
               "groupoids": [[_enc(x), groupoid_payload(gp)]
                             for x, gp in sorted(d.gr.items(), key=repr)]}
    gens = getattr(d, "gen_data", None)
    if gens is None:
        gens = {g[2][0]: d.X(g) for g in d.gen_arrows()}
    payload["generators"] = [[_enc(a), correspondence_payload(c)]
                             for a, c in sorted(gens.items(), key=repr)]
    if d.selfsim is not None:
        payload["selfsimilar"] = selfsimilar_payload(d.selfsim)
    return payload


def diagram_from(payload):
    kind = payload["shape_kind"]
    bound = payload["bound"]
    gens_ep = _unpairs(payload["gens"])
    if kind == "free":
        shape = PresentedShape.free_monoid(sorted(gens_ep), bound)
    elif kind == "path":
        shape = PresentedShape.path_category(
            [_dec(x) for x in payload["objects"]], gens_ep, bound)
    elif kind == "comm":
        shape = PresentedShape.free_commutative(sorted(gens_ep), bound)
    elif kind == "finite" and not gens_ep:
        groupoids = {_dec(x): groupoid_from(gp)
                     for x, gp in payload["groupoids"]}
        return discrete_diagram(groupoids)
    else:
        raise SchemaError(f"unsupported shape kind {kind!r} in a diagram "
                          "document")
    gens = {_dec(a): correspondence_from(c)
            for a, c in payload["generators"]}
    d = from_generators(shape, gens)
    if "selfsimilar" in payload:
        d.selfsim = selfsimilar_from(payload["selfsimilar"])
    return d


def action_payload(d, a):
    return {"diagram": diagram_payload(d),
            "carrier": [_enc(y) for y in a.carrier],
            "part": _pairs(a.part), "anchor": _pairs(a.anchor),
            "gact": _pairs(a.gact),
            "alph": [[_enc(g), _pairs(t)]
                     for g, t in sorted(a.alph.items(), key=repr)]}


def action_from(payload):
    from .diagram import FAction
    d = diagram_from(payload["diagram"])
    return d, FAction(d, [_dec(y) for y in payload["carrier"]],
                      _unpairs(payload["part"]), _unpairs(payload["anchor"]),
                      _unpairs(payload["gact"]),
                      {_dec(g): _unpairs(t) for g, t in payload["alph"]})


PAYLOADERS = {"category": category_from, "groupoid": groupoid_from,
              "correspondence": correspondence_from,
              "diagram": diagram_from,
              "complex_of_groups": complex_from,
              "selfsimilar": selfsimilar_from,
              "action": action_from}


def envelope(kind, payload):
    return {"format_version": FORMAT_VERSION, "kind": kind,
            "payload": payload}


def dumps(doc):
    return json.dumps(doc, indent=1) + "\n"


def parse_document(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(str(exc))
    if not isinstance(doc, dict) or "format_version" not in doc:
        raise SchemaError("missing format_version")
    if doc["format_version"] != FORMAT_VERSION:
        raise SchemaError(f"unsupported format_version {doc['format_version']!r}")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise SchemaError(f"unknown kind {kind!r}")
    return kind, doc["payload"]


def load(path):
    with open(path, "r", encoding="utf-8") as handle:
        return parse_document(handle.read())


def value_of(kind, payload):
    if kind == "mn":
        return (payload["m"], payload["n"])
    if kind not in PAYLOADERS:
        raise SchemaError(f"no loader for kind {kind!r}")
    try:
        return PAYLOADERS[kind](payload)
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"malformed {kind} payload: {exc}")


# -- normal-form and word grammar for the selfsim commands --------------------

def parse_word(data, text):
    """A path: dot-separated edges, 'e' for empty, with '@v' if needed."""
    vertex = None
    if "@" in text:
        text, vtext = text.split("@", 1)
        vertex = vtext
    letters = () if text in ("e", "") else tuple(text.split("."))
    return data.path(letters, vertex)


def parse_nf(data, text):
    parts = text.split(":")
    if len(parts) != 3:
        raise ParseError(f"normal form must be w1:g:w2, got {text!r}")
    w1 = parse_word(data, parts[0])
    w2 = parse_word(data, parts[2])
    return nf(data, w1.edges, parts[1], w2.edges, rv1=w1.rv, rv2=w2.rv)


def parse_point(data, text):
    if "|" not in text:
        raise ParseError(f"point must be pre|per, got {text!r}")
    pre_t, per_t = text.split("|", 1)
    pre = parse_word(data, pre_t)
    per = parse_word(data, per_t)
    return data.ev(pre.edges, per.edges, pre.rv)


def show_word(w):
    return ".".join(str(e) for e in w.edges) if w.edges else "e"


def show_nf(t):
    if t.zero:
        return "0"
    return f"{show_word(t.w1)}:{t.g}:{show_word(t.w2)}"


def show_point(z):
    return f"{'.'.join(map(str, z.pre)) if z.pre else 'e'}|" + \
        ".".join(map(str, z.per))


# -- commands ------------------------------------------------------------------

def emit(args, text_lines, json_obj):
    if args.json:
        sys.stdout.write(dumps(json_obj))
    else:
        for line in text_lines:
            sys.stdout.write(line + "\n")


def cmd_validate(args):
    kind, payload = load(args.path)
    value = value_of(kind, payload)
    flags = {}
    if kind == "category":
        report = validate_category(value)
    elif kind == "groupoid":
        report = validate_groupoid(value)
    elif kind == "correspondence":
        report = validate_correspondence(value)
    elif kind == "diagram":
        report = validate_diagram(value)
    elif kind == "complex_of_groups":
        report, flags = cgxmod.validate_cgx(value)
    elif kind == "selfsimilar":
        report = value.validate()
    elif kind == "mn":
        report = validate_diagram(mnmod.make_emn(*value))
    elif kind == "action":
        from .diagram import validate_action
        d, a = value
        report = validate_action(d, a)
    else:
        raise SchemaError(f"validate does not handle kind {kind!r}")
    lines = ["OK"] if not report else report
    lines += [f"note: {k} = {v}" for k, v in sorted(flags.items())]
    emit(args, lines, {"ok": not report, "report": report,
                       "flags": _pairs(flags)})
    return 0 if not report else 1


def cmd_compose(args):
    kind1, p1 = load(args.path)
    kind2, p2 = load(args.path2)
    if kind1 != "correspondence" or kind2 != "correspondence":
        raise SchemaError("compose expects two correspondence documents")
    c = compose(value_of(kind1, p1), value_of(kind2, p2))
    sys.stdout.write(dumps(envelope("correspondence",
                                    correspondence_payload(c))))
    return 0


def cmd_model(args):
    kind, payload = load(args.path)
    if kind == "complex_of_groups":
        c = value_of(kind, payload)
        report, _ = cgxmod.validate_cgx(c)
        if report:
            emit(args, report, {"ok": False, "report": report})
            return 1
        pres = cgxmod.model_presentation(c)
        pi1 = cgxmod.fundamental_group(c)
        lines = ["groupoid presentation:"]
        lines += [f"  object {x!r}" for x in pres.objects]
        lines += [f"  gen {sym!r}: {ep!r}"
                  for sym, ep in sorted(pres.generators.items(), key=repr)]
        lines += [f"  rel {r!r}" for r in pres.relators]
        lines.append("fundamental group:")
        lines += [f"  gen {sym!r}" for sym in pi1.generators]
        lines += [f"  rel {r!r}" for r in pi1.relators]
        if args.verify:
            d, pm = cgxmod.presentation_model(c)
            verify_model(d, pm, args.verify)
            lines.append(f"verify({args.verify}): OK")
        emit(args, lines, {"ok": True, "lines": lines})
        return 0
    if kind == "mn":
        m, n = value_of(kind, payload)
        configs = mnmod.omega_depth(m, n, args.depth)
        gd = mnmod.mn_groupoid_depth(m, n, args.depth)
        lines = [f"configurations at depth {args.depth}: {len(configs)}",
                 f"arrows at depth {args.depth}: {len(gd.arrows())}"]
        emit(args, lines, {"ok": True, "configs": len(configs),
                           "arrows": len(gd.arrows())})
        return 0
    if kind != "diagram":
        raise SchemaError(f"model does not handle kind {kind!r}")
    d = value_of(kind, payload)
    shape = d.shape
    if not shape.gens:
        model = model_discrete_shape(d)
        lines = [f"disjoint union groupoid: {len(model.groupoid)} arrows, "
                 f"{len(model.groupoid.objects)} objects"]
        if args.verify:
            verify_model(d, model, args.verify)
            lines.append(f"verify({args.verify}): OK")
        emit(args, lines, {"ok": True, "lines": lines,
                           "groupoid": groupoid_payload(model.groupoid)})
        return 0
    if shape.kind == "group":
        model = model_group_shape(d)
        lines = [f"graded groupoid: {len(model.groupoid)} arrows over "
                 f"{len(model.groupoid.objects)} objects"]
        if args.verify:
            verify_model(d, model, args.verify)
            lines.append(f"verify({args.verify}): OK")
        emit(args, lines, {"ok": True, "lines": lines,
                           "groupoid": groupoid_payload(model.groupoid)})
        return 0
    if shape.kind == "free" and len(shape.gens) == 1:
        om = ore_universal_action(d, depth=args.depth)
        pm = pair_groupoid_model(d, depth=args.depth)
        points = om.points(1, 1)
        arrows = pm.arrows_over(points, word_len=1)
        grades = {}
        for p in arrows:
            grades[p.grade()] = grades.get(p.grade(), 0) + 1
        lines = [f"universal action: {om.status}",
                 f"sample points: {len(points)}",
                 "pair arrows per grade: " + ", ".join(
                     f"{k}: {grades[k]}" for k in sorted(grades))]
        if args.verify:
            if len(points) == 1 and len(d.X(d.gen_arrows()[0])) == 1:
                from .model import PresentationModel
                t = d.gen_arrows()[0]
                xi = d.X(t).carrier[0]
                zp = PresentationModel(
                    d, list(d.gr[shape.objects[0]].objects),
                    {"T": ("*", "*")}, [], {"T": ("alph", t, xi)})
                verify_model(d, zp, args.verify)
                lines.append(f"verify({args.verify}): OK "
                             "(free group on one generator)")
            else:
                lines.append(f"verify({args.verify}): skipped "
                             "(no finite presentation at this depth)")
        emit(args, lines, {"ok": True, "lines": lines})
        return 0
    if d.is_tight():
        if not args.effective_quotient:
            raise NotSupported(
                "no exact model for this shape; the diagram is tight, so "
                "pass --effective-quotient for the germ groupoid of the "
                "unit-space action")
        omega = tight_universal_action(d)
        thetas = {}
        from .diagram import theta_from_action
        for (g, xi), pb in theta_from_action(d, omega).items():
            thetas[(g, xi)] = pb
        gg = germ_groupoid({repr(k): v for k, v in thetas.items()},
                           omega.carrier)
        lines = ["warning: non-Ore shape, emitting the effective quotient "
                 "of the unit-space action only",
                 f"germ groupoid: {len(gg.arrows())} arrows on "
                 f"{len(gg.carrier)} objects"]
        emit(args, lines, {"ok": True, "lines": lines})
        return 0
    raise NotSupported(f"no model construction for shape kind {shape.kind!r}")


def cmd_selfsim(args):
    kind, payload = load(args.path)
    if kind != "selfsimilar":
        raise SchemaError("selfsim expects a selfsimilar document")
    data = value_of(kind, payload)
    if args.sub == "effective":
        res = effective_check(data)
        if res.effective:
            emit(args, ["EFFECTIVE"], {"effective": True})
        else:
            emit(args, [f"NOT EFFECTIVE witness={res.witness}"],
                 {"effective": False, "witness": _enc(res.witness)})
        return 0
    if args.sub == "nf-mul":
        t = nf_mul(parse_nf(data, args.args[0]), parse_nf(data, args.args[1]))
        emit(args, [show_nf(t)], {"result": show_nf(t)})
        return 0
    if args.sub == "act":
        t = parse_nf(data, args.args[0])
        z = parse_point(data, args.args[1])
        try:
            out = act_on_word(t, z)
        except Undefined:
            emit(args, ["undefined"], {"result": None})
            return 0
        emit(args, [show_point(out)], {"result": show_point(out)})
        return 0
    if args.sub == "germ":
        t1 = parse_nf(data, args.args[0])
        t2 = parse_nf(data, args.args[1])
        z = parse_point(data, args.args[2])
        ans = germ_equal(t1, t2, z)
        emit(args, ["EQUAL" if ans else "DISTINCT"], {"equal": ans})
        return 0
    if args.sub == "slices":
        t1 = parse_nf(data, args.args[0])
        t2 = parse_nf(data, args.args[1])
        pieces = slice_intersections(t1, t2, depth=args.depth)
        lines = [show_nf(s) for s in pieces] or ["EMPTY"]
        emit(args, lines, {"pieces": [show_nf(s) for s in pieces]})
        return 0
    raise SchemaError(f"unknown selfsim subcommand {args.sub!r}")


def cmd_cgx(args):
    kind, payload = load(args.path)
    if kind != "complex_of_groups":
        raise SchemaError("cgx expects a complex_of_groups document")
    c = value_of(kind, payload)
    if args.sub == "pi1":
        p = cgxmod.fundamental_group(c)
    elif args.sub == "isotropy":
        p = cgxmod.isotropy_at_infinity(c)
    elif args.sub == "homs":
        p = cgxmod.fundamental_group(c)
        count = cgxmod.count_homs(p, args.n)
        emit(args, [str(count)], {"count": count})
        return 0
    else:
        raise SchemaError(f"unknown cgx subcommand {args.sub!r}")
    lines = [f"gen {sym!r}" for sym in p.generators]
    lines += [f"rel {r!r}" for r in p.relators]
    emit(args, lines, {"generators": [repr(s) for s in p.generators],
                       "relators": [repr(r) for r in p.relators]})
    return 0


def cmd_mn(args):
    configs = mnmod.omega_depth(args.m, args.n, args.depth)
    gd = mnmod.mn_groupoid_depth(args.m, args.n, args.depth)
    lines = [f"configurations: {len(configs)}",
             f"arrows: {len(gd.arrows())}"]
    emit(args, lines, {"configs": len(configs), "arrows": len(gd.arrows())})
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gpdcorr",
        description="exact computation with finite groupoid correspondences")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json", action="store_true")
        p.add_argument("--depth", type=int, default=3)
        p.add_argument("--verify", type=int, default=0)
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("validate")
    p.add_argument("path")
    common(p)
    p = sub.add_parser("compose")
    p.add_argument("path")
    p.add_argument("path2")
    common(p)
    p = sub.add_parser("model")
    p.add_argument("path")
    p.add_argument("--effective-quotient", action="store_true")
    common(p)
    p = sub.add_parser("selfsim")
    p.add_argument("path")
    p.add_argument("sub")
    p.add_argument("args", nargs="*")
    common(p)
    p = sub.add_parser("cgx")
    p.add_argument("path")
    p.add_argument("sub")
    p.add_argument("-n", type=int, default=3)
    common(p)
    p = sub.add_parser("mn")
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)
    common(p)
    return parser


COMMANDS = {"validate": cmd_validate, "compose": cmd_compose,
            "model": cmd_model, "selfsim": cmd_selfsim, "cgx": cmd_cgx,
            "mn": cmd_mn}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0,) else 0
    try:
        return COMMANDS[args.command](args)
    except (ParseError, SchemaError, FileNotFoundError, NotSupported,
            AssertionError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (BoundExceeded, DepthInsufficient) as exc:
        sys.stderr.write(f"bound exceeded: {exc}\n")
        return 3
    except Mismatch as exc:
        sys.stderr.write(f"violation: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
