"""Groupoid models: constructions and the action-bijection verifier.

A groupoid model of a diagram is a groupoid whose actions biject
naturally with diagram actions.  The constructions here cover the cases
with exact finite answers: disjoint unions for discrete shapes, graded
groupoids for group shapes, and the universal action on the unit spaces
for tight diagrams.  Free-monoid diagrams are reduced to a letter
system (a self-similarity over the base), whose universal space is
handled through eventually periodic points; on those the pair
construction gives a groupoid with decidable arrow equality, graded by
the groupoid completion of the shape.

Every model object carries a translator between its own actions and
diagram actions on the same carrier; verify_model exercises the
defining bijection on all labelled carriers up to a size bound and
checks naturality on every map, equivariant or not.
"""

from itertools import product

from .corr import Correspondence, classify, morita_check
from .diagram import (FAction, _actions_with_frame, _left_actions,
                      enumerate_actions, equivariant_maps, from_generators,
                      invariant_check, validate_action)
from .errors import (DepthInsufficient, Mismatch, NotEquivalence,
                     NotSupported, NotTight)
from .fincat import FREE, GROUP, IS_ORE, FinCategory, PresentedShape, ore_check
from .groupoid import FinGroupoid, Group
from .selfsim import SelfSimilarData, act_on_word, nf


def groupoid_semidirect(gpd, carrier, anchor, act):
    """The transformation groupoid of a groupoid action on a finite set.

    Arrows are pairs (gamma, w) from w to gamma.w for anchor-matching
    points w.
    """
    arrows = {}
    for g in gpd.arrow_ids():
        for w in carrier:
            if anchor[w] == gpd.src(g):
                arrows[(g, w)] = (w, act[(g, w)])
    comp = {}
    for (g2, w2) in arrows:
        for (g1, w1) in arrows:
            if w2 == act[(g1, w1)]:
                comp[((g2, w2), (g1, w1))] = (gpd.mul(g2, g1), w1)
    ident = {w: (gpd.unit(anchor[w]), w) for w in carrier}
    inv = {(g, w): (gpd.invert(g), act[(g, w)]) for (g, w) in arrows}
    return FinGroupoid(FinCategory(tuple(carrier), arrows, comp, ident), inv)


# -- models with translators -------------------------------------------------

class DisjointUnionModel:
    """Model of a discrete-shape diagram: the disjoint union groupoid."""

    def __init__(self, d):
        self.d = d
        self.tags = sorted(d.shape.objects, key=repr)
        self.groupoid = FinGroupoid.disjoint_union(
            [d.gr[x] for x in self.tags], tags=self.tags)

    def enumerate_on(self, carrier):
        return _groupoid_actions_on(self.groupoid, carrier)

    def to_faction(self, ua):
        anchor, act = ua
        part = {y: anchor[y][0] for y in anchor}
        fanchor = {y: anchor[y][1] for y in anchor}
        gact = {(g, y): z for (((tag, g), y), z) in act.items()}
        alph = {g: {} for g in self.d.gen_arrows()}
        return FAction(self.d, sorted(anchor, key=repr), part, fanchor,
                       gact, alph)

    def is_equivariant(self, ua1, ua2, f):
        return _ua_equivariant(ua1, ua2, f)

    def is_invariant(self, ua, f):
        return _ua_invariant(ua, f)


class GradedGroupoidModel:
    """Model of a group-shape diagram: the graded groupoid L.

    L is the disjoint union of the correspondences with multiplication
    through mu; the grade of an arrow (c, xi) is the shape arrow c.
    Every piece must be a Morita equivalence.
    """

    def __init__(self, d):
        self.d = d
        shape = d.shape
        self.obj = shape.objects[0]
        for g in d.gen_arrows():
            if not morita_check(d.X(g)):
                raise NotEquivalence(g)
        base = d.gr[self.obj]
        self.shape_arrows = shape.arrows(1)
        arrows = {}
        for c in self.shape_arrows:
            xc = d.X(c)
            for xi in xc.carrier:
                arrows[(c, xi)] = (xc.smap[xi], xc.rmap[xi])
        comp = {}
        for (c, xi) in arrows:
            for (e, eta) in arrows:
                if d.X(c).smap[xi] != d.X(e).rmap[eta]:
                    continue
                ce = shape.compose(c, e)
                comp[((c, xi), (e, eta))] = (ce, d.mu_apply(c, e, xi, eta))
        unit_arrow = shape.identity(self.obj)
        ident = {x: (unit_arrow, base.unit(x)) for x in base.objects}
        inv = {}
        for a, (s, r) in arrows.items():
            for b in arrows:
                if comp.get((a, b)) == ident[r] and comp.get((b, a)) == ident[s]:
                    inv[a] = b
        self.groupoid = FinGroupoid(
            FinCategory(base.objects, arrows, comp, ident), inv)
        self.grading = {a: a[0] for a in arrows}

    def enumerate_on(self, carrier):
        return _groupoid_actions_on(self.groupoid, carrier)

    def to_faction(self, ua):
        anchor, act = ua
        d = self.d
        part = {y: self.obj for y in anchor}
        unit_arrow = d.shape.identity(self.obj)
        gact = {(xi, y): z for (((c, xi), y), z) in act.items()
                if c == unit_arrow}
        alph = {g: {(xi, y): z for (((c, xi), y), z) in act.items() if c == g}
                for g in d.gen_arrows()}
        return FAction(d, sorted(anchor, key=repr), part, dict(anchor),
                       gact, alph)

    def is_equivariant(self, ua1, ua2, f):
        return _ua_equivariant(ua1, ua2, f)

    def is_invariant(self, ua, f):
        return _ua_invariant(ua, f)


def _groupoid_actions_on(gpd, carrier):
    out = []
    objects = sorted(gpd.objects, key=repr)
    for anchors in product(objects, repeat=len(carrier)):
        anchor = dict(zip(carrier, anchors))
        for act in _left_actions(gpd, list(carrier), anchor):
            out.append((anchor, act))
    return out


def _ua_equivariant(ua1, ua2, f):
    anchor1, act1 = ua1
    anchor2, act2 = ua2
    for y in anchor1:
        if anchor2[f[y]] != anchor1[y]:
            return False
    for (g, y), z in act1.items():
        if act2.get((g, f[y])) != f[z]:
            return False
    return True


def _ua_invariant(ua, f):
    _, act = ua
    return all(f[y] == f[z] for (g, y), z in act.items())


class PresentationModel:
    """A claimed model given by a groupoid presentation.

    ``gens`` maps generator name -> (dst, src) over ``objects``;
    ``relators`` are words of (name, +-1) pairs that must act as the
    identity.  ``binding`` translates each generator into diagram data:
    ("alph", g, xi) makes it act as the carrier element xi of X_g, and
    ("gact", x, gamma) as the groupoid arrow gamma at the object x.
    ``object_map`` sends a presentation object to the pair (shape
    object, groupoid unit) anchoring its points.
    """

    def __init__(self, d, objects, gens, relators, binding, object_map=None):
        self.d = d
        self.objects = list(objects)
        self.gens = dict(gens)
        self.relators = [tuple(r) for r in relators]
        self.binding = dict(binding)
        if object_map is None:
            obj = d.shape.objects[0]
            object_map = {o: (obj, o) for o in objects}
        self.object_map = dict(object_map)

    def enumerate_on(self, carrier):
        out = []
        names = sorted(self.gens)
        for anchors in product(self.objects, repeat=len(carrier)):
            anchor = dict(zip(carrier, anchors))
            fibers = {x: [y for y in carrier if anchor[y] == x]
                      for x in self.objects}
            self._extend(names, 0, {}, fibers, anchor, out)
        return out

    def _extend(self, names, i, imgs, fibers, anchor, out):
        if i == len(names):
            if all(self._relator_trivial(imgs, r) for r in self.relators):
                out.append((dict(anchor), {n: dict(t) for n, t in imgs.items()}))
            return
        name = names[i]
        dst, src = self.gens[name]
        dom, cod = fibers[src], fibers[dst]
        if len(dom) != len(cod):
            return
        for bij in _bijections(dom, cod):
            imgs[name] = bij
            self._extend(names, i + 1, imgs, fibers, anchor, out)
            del imgs[name]

    def _relator_trivial(self, imgs, relator):
        tables = {}
        for name, table in imgs.items():
            tables[(name, 1)] = table
            tables[(name, -1)] = {v: k for k, v in table.items()}
        points = set()
        for t in tables.values():
            points.update(t)
        for y in points:
            z, defined = y, True
            for name, power in reversed(relator):
                t = tables.get((name, 1 if power > 0 else -1))
                step = abs(power)
                for _ in range(step):
                    if z not in t:
                        defined = False
                        break
                    z = t[z]
                if not defined:
                    break
            if defined and z != y:
                return False
        return True

    def to_faction(self, ua):
        anchor, imgs = ua
        d = self.d
        part, fanchor, gact = {}, {}, {}
        for y in anchor:
            x, u = self.object_map[anchor[y]]
            part[y], fanchor[y] = x, u
            gact[(d.gr[x].unit(u), y)] = y
        alph = {g: {} for g in d.gen_arrows()}
        for name, table in imgs.items():
            kind = self.binding[name]
            if kind[0] == "alph":
                _, g, xi = kind
                for y, z in table.items():
                    alph[g][(xi, y)] = z
            else:
                _, x, gamma = kind
                for y, z in table.items():
                    gact[(gamma, y)] = z
        # the bound slices only seed the tables; the rest of each
        # correspondence is reached through the two groupoid actions
        for g, table in alph.items():
            c = d.X(g)
            changed = True
            while changed:
                changed = False
                for (xi, y), z in list(table.items()):
                    for gamma in c.right.arrow_ids():
                        # alpha(xi.gamma, y') == alpha(xi, gamma.y')
                        if (xi, gamma) in c.ract:
                            for (gamma2, y2), yv in gact.items():
                                if gamma2 == gamma and yv == y:
                                    key = (c.ract[(xi, gamma)], y2)
                                    if key not in table:
                                        table[key] = z
                                        changed = True
                    for gamma in c.left.arrow_ids():
                        if (gamma, xi) in c.lact and (gamma, z) in gact:
                            key = (c.lact[(gamma, xi)], y)
                            if key not in table:
                                table[key] = gact[(gamma, z)]
                                changed = True
        return FAction(d, sorted(anchor, key=repr), part, fanchor, gact, alph)

    def is_equivariant(self, ua1, ua2, f):
        anchor1, imgs1 = ua1
        anchor2, imgs2 = ua2
        for y in anchor1:
            if anchor2[f[y]] != anchor1[y]:
                return False
        for name, table in imgs1.items():
            for y, z in table.items():
                if imgs2[name].get(f[y]) != f[z]:
                    return False
        return True

    def is_invariant(self, ua, f):
        _, imgs = ua
        return all(f[y] == f[z] for table in imgs.values()
                   for y, z in table.items())


def _bijections(dom, cod):
    if len(dom) != len(cod):
        return
    if not dom:
        yield {}
        return
    y, rest = dom[0], dom[1:]
    for z in cod:
        for tail in _bijections(rest, [c for c in cod if c != z]):
            yield {y: z, **tail}


def model_discrete_shape(d):
    if d.gen_arrows():
        raise NotSupported("shape is not discrete")
    return DisjointUnionModel(d)


def model_group_shape(d):
    if d.shape.kind != GROUP:
        raise NotSupported("shape is not a group")
    return GradedGroupoidModel(d)


# -- the tight universal action ---------------------------------------------

def tight_universal_action(d):
    """The action on the disjoint unit spaces, for a tight diagram."""
    for g in d.gen_arrows():
        if not classify(d.X(g))["tight"]:
            raise NotTight(g)
    carrier, part, anchor = [], {}, {}
    for x in d.shape.objects:
        for u in d.gr[x].objects:
            y = (x, u)
            carrier.append(y)
            part[y] = x
            anchor[y] = u
    gact = {}
    for x in d.shape.objects:
        for g in d.gr[x].arrow_ids():
            gact[(g, (x, d.gr[x].src(g)))] = (x, d.gr[x].dst(g))
    alph = {}
    for g in d.gen_arrows():
        c = d.X(g)
        src, dst = d.shape.s(g), d.shape.r(g)
        alph[g] = {(xi, (src, c.smap[xi])): (dst, c.rmap[xi])
                   for xi in c.carrier}
    return FAction(d, carrier, part, anchor, gact, alph)


def check_terminal(d, omega, n):
    """Exactly one equivariant map from every action of size <= n."""
    for a in enumerate_actions(d, n):
        if len(equivariant_maps(a, omega)) != 1:
            return False
    return True


# -- the model-defining bijection --------------------------------------------

def _signature(a):
    return (tuple(sorted(a.part.items(), key=repr)),
            tuple(sorted(a.anchor.items(), key=repr)),
            tuple(sorted(a.gact.items(), key=repr)),
            tuple(sorted(((g, tuple(sorted(t.items(), key=repr)))
                          for g, t in a.alph.items()), key=repr)))


def _factions_on(d, carrier):
    out = []
    objects = list(d.shape.objects)
    for parts in product(objects, repeat=len(carrier)):
        part = dict(zip(carrier, parts))
        anchor_choices = [sorted(d.gr[part[y]].objects, key=repr)
                          for y in carrier]
        for anchors in product(*anchor_choices):
            anchor = dict(zip(carrier, anchors))
            out.extend(_actions_with_frame(d, list(carrier), part, anchor))
    return out


def verify_model(d, model, n):
    """Check the defining property of a groupoid model up to size n.

    Builds the translation from model actions to diagram actions on
    every labelled carrier of size <= n, checks that it is a bijection,
    and that it preserves and reflects equivariant and invariant maps.
    Raises Mismatch with a witness on failure.
    """
    per_size = {}
    for k in range(n + 1):
        carrier = list(range(k))
        fas = _factions_on(d, carrier)
        fsigs = {_signature(a) for a in fas}
        uas = model.enumerate_on(carrier)
        translated, tsigs = [], set()
        for ua in uas:
            fa = model.to_faction(ua)
            report = validate_action(d, fa)
            if report:
                raise Mismatch(
                    f"translated action invalid at size {k}: {report[0]}")
            translated.append((ua, fa))
            tsigs.add(_signature(fa))
        if len(tsigs) != len(uas):
            raise Mismatch(f"translation not injective at size {k}")
        if tsigs != fsigs:
            raise Mismatch(
                f"action sets differ at size {k}: {len(uas)} model actions "
                f"vs {len(fas)} diagram actions")
        per_size[k] = translated
    for k1 in range(n + 1):
        for k2 in range(n + 1):
            for ua1, fa1 in per_size[k1]:
                for ua2, fa2 in per_size[k2]:
                    for values in product(range(k2), repeat=k1):
                        f = dict(zip(range(k1), values))
                        if model.is_equivariant(ua1, ua2, f) != \
                                _fa_equivariant(fa1, fa2, f):
                            raise Mismatch(
                                f"naturality fails for {f!r} between sizes "
                                f"{k1} and {k2}")
        for ua1, fa1 in per_size[k1]:
            for values in product(range(max(k1, 2)), repeat=k1):
                f = dict(zip(range(k1), values))
                if model.is_invariant(ua1, f) != invariant_check(fa1, f):
                    raise Mismatch(
                        f"invariant maps differ for {f!r} at size {k1}")
    return True


def _fa_equivariant(a1, a2, f):
    for y in a1.carrier:
        if a2.part.get(f[y]) != a1.part[y] or \
                a2.anchor.get(f[y]) != a1.anchor[y]:
            return False
    for (g, y), z in a1.gact.items():
        if a2.gact.get((g, f[y])) != f[z]:
            return False
    for g, table in a1.alph.items():
        for (xi, y), z in table.items():
            if a2.alph[g].get((xi, f[y])) != f[z]:
                return False
    return True


# -- free-monoid shapes: the letter system and the universal space -----------

def as_selfsim(d):
    """Reduce a free-monoid diagram to self-similarity data.

    Uses the stored data when the diagram was built from one; otherwise
    a diagram over a space base is turned into trivial-group graph data
    whose letters are the points of the generating correspondence.
    """
    if d.selfsim is not None:
        return d.selfsim
    if d.shape.kind != FREE or len(d.shape.gens) != 1:
        raise NotSupported("only free-monoid shapes reduce to letter systems")
    g = d.gen_arrows()[0]
    c = d.X(g)
    base = d.gr[d.shape.objects[0]]
    if any(not base.is_unit(a) for a in base.arrow_ids()):
        raise NotSupported("base groupoid is not a space and the diagram "
                           "carries no self-similarity data")
    triv = Group.trivial()
    letters = tuple(c.carrier)
    er = {e: c.rmap[e] for e in letters}
    es = {e: c.smap[e] for e in letters}
    vact = {("1", v): v for v in base.objects}
    eact = {("1", e): e for e in letters}
    coc = {("1", e): "1" for e in letters}
    return SelfSimilarData.graph(triv, base.objects, letters, er, es,
                                 vact, eact, coc)


class OreUniversal:
    """The universal action of a free-monoid diagram along its chain.

    Levels are the orbit spaces of the iterated correspondences with
    the prefix projections between them.  When every vertex of the
    letter graph has at most one outgoing letter, the point space is
    finite and exact; otherwise points are represented by eventually
    periodic threads.
    """

    def __init__(self, d, depth=3):
        if ore_check(d.shape).status != IS_ORE:
            raise NotSupported("shape fails the right Ore conditions")
        self.d = d
        self.depth = depth = min(depth, d.bound)
        self.data = as_selfsim(d)
        self.levels, self.projections = self._chain_levels(depth)
        degrees = {v: sum(1 for e in self.data.edges if self.data.er[e] == v)
                   for v in self.data.vertices}
        self.finite = all(deg <= 1 for deg in degrees.values())
        if d.is_tight():
            self.status = "tight"
        elif self.finite:
            self.status = "finite"
        else:
            self.status = f"rational({depth})"

    def _word(self, n):
        gen = self.d.shape.gens[0]
        obj = self.d.shape.objects[0]
        return (obj, obj, (gen,) * n)

    def _chain_levels(self, depth):
        d = self.d
        levels, projections = [], []
        unit_corr = d.X(self._word(0))
        levels.append(sorted({unit_corr.p(t) for t in unit_corr.carrier},
                             key=repr))
        for n in range(1, depth + 1):
            c = d.X(self._word(n))
            level = sorted({c.p(t) for t in c.carrier}, key=repr)
            prev = d.X(self._word(n - 1))
            proj = {}
            for t in c.carrier:
                if n == 1:
                    base = d.gr[d.shape.objects[0]]
                    proj[c.p(t)] = prev.p(base.unit(c.rmap[t]))
                else:
                    proj[c.p(t)] = prev.p(t[:n - 1])
            levels.append(level)
            projections.append(proj)
        return levels, projections

    def points(self, pre_len=2, per_len=2):
        """Eventually periodic points, canonically deduplicated.

        In the finite case this enumerates the whole point space.
        """
        data = self.data
        out = []
        if self.finite:
            nxt = {}
            for e in data.edges:
                nxt[data.er[e]] = e
            for v in sorted(data.vertices, key=repr):
                edges, seen, w = [], {}, v
                while w in nxt and w not in seen:
                    seen[w] = len(edges)
                    edges.append(nxt[w])
                    w = data.es[nxt[w]]
                if w in nxt or (edges and w in seen):
                    j = seen[w]
                    z = data.ev(tuple(edges[:j]), tuple(edges[j:]), v)
                    if z not in out:
                        out.append(z)
            return out
        for np_ in range(pre_len + 1):
            for pre in data.paths(np_):
                for k in range(1, per_len + 1):
                    for per in data.paths(k):
                        if data.ps(pre) != data.pr(per) or \
                                data.ps(per) != data.pr(per):
                            continue
                        z = data.ev(pre.edges, per.edges, pre.rv)
                        if z not in out:
                            out.append(z)
        return out

    def thread(self, z, n):
        """The level-n entry of the thread of a point: its n-prefix."""
        return tuple(self.data.ev_letter(z, i) for i in range(n))

    def act(self, t, z):
        """The diagram action on points, through the letter calculus."""
        return act_on_word(t, z)


def ore_universal_action(d, depth=3):
    return OreUniversal(d, depth)


def rho(d, a, g, y):
    """The class in X_g / G of any decomposition y == gamma . y'."""
    c = d.X(g)
    for xi in c.carrier:
        for y2 in a.carrier:
            if a.apply(g, xi, y2) == y:
                return c.p(xi)
    return None


# -- tightening ---------------------------------------------------------------

def tighten(d, omega):
    """The tight diagram over the base extended by the universal space.

    For a finite point space the result is a fully materialised
    diagram over the transformation groupoid; otherwise a scan
    certificate checks tightness on sample rational points.
    """
    if not omega.finite:
        return RationalTightScan(d, omega)
    data = omega.data
    points = omega.points()
    base = FinGroupoid.transformation(data.group, data.vertices, data.vact)
    anchor = {z: z.rv for z in points}
    act = {}
    for (g, v) in base.arrow_ids():
        for z in points:
            if z.rv == v:
                act[((g, v), z)] = data.group_act_ev(g, z)
    bo = groupoid_semidirect(base, points, anchor, act)
    carrier = []
    for e in sorted(data.edges, key=repr):
        for g in data.group:
            for z in points:
                if data.vact[(data.group.inv[g], data.es[e])] == z.rv:
                    carrier.append((e, g, z))
    rmap, smap = {}, {}
    for (e, g, z) in carrier:
        smap[(e, g, z)] = z
        moved = data.group_act_ev(g, z)
        rmap[(e, g, z)] = data.ev((e,) + moved.pre, moved.per, data.er[e])
    lact, ract = {}, {}
    for ((h, v), z0) in bo.arrow_ids():
        for (e, g, z) in carrier:
            if rmap[(e, g, z)] == z0:
                lact[(((h, v), z0), (e, g, z))] = (
                    data.eact[(h, e)],
                    data.group.op(data.cocycle[(h, e)], g), z)
            if bo.dst(((h, v), z0)) == z:
                ract[((e, g, z), ((h, v), z0))] = (
                    e, data.group.op(g, h), z0)
    xo = Correspondence(bo, bo, carrier, rmap, smap, lact, ract)
    shape = PresentedShape.free_monoid(d.shape.gens, d.bound)
    out = from_generators(shape, {d.shape.gens[0]: xo})
    return out


class RationalTightScan:
    """Tightness certificate on eventually periodic sample points.

    The extended correspondence is tight when every point decomposes as
    letter . tail in exactly one right-orbit way; the scan verifies
    this on all rational points up to the given complexity.
    """

    def __init__(self, d, omega):
        self.d = d
        self.omega = omega

    def scan_tight(self, pre_len=2, per_len=2):
        data = self.omega.data
        for z in self.omega.points(pre_len, per_len):
            head = data.ev_letter(z, 0)
            tail = data.ev_drop(z, 1)
            decompositions = set()
            for e in data.edges:
                for g in data.group:
                    back = data.group_act_ev(data.group.inv[g], tail)
                    if data.vact[(data.group.inv[g], data.es[e])] != back.rv:
                        continue
                    moved = data.group_act_ev(g, back)
                    cand = data.ev((e,) + moved.pre, moved.per, data.er[e])
                    if cand == z:
                        # right-orbit normal form: twist g away
                        decompositions.add(e)
            if decompositions != {head}:
                return False
        return True


# -- the pair construction over rational points -------------------------------

class PairArrow:
    """An arrow [gamma_g, gamma_h] of the pair groupoid, in coordinates.

    The two legs are (w1, g1, z) and (w2, g2, z) over a common tail z;
    the source is w2.(g2.z), the range w1.(g1.z), and the grade is
    len(w1) - len(w2).  The class is stable under the right twist by a
    group element and under extension along the letters of z.
    """

    def __init__(self, data, w1, g1, w2, g2, z):
        self.data = data
        self.w1, self.g1, self.w2, self.g2, self.z = w1, g1, w2, g2, z

    def normalised(self):
        """Twist so that the second leg carries the trivial element."""
        data = self.data
        G = data.group
        h = G.inv[self.g2]
        z = data.group_act_ev(self.g2, self.z)
        return PairArrow(data, self.w1, G.op(self.g1, h), self.w2,
                         G.identity, z)

    def extend(self, k):
        """Append the first k letters of the tail to both legs."""
        data = self.data
        out = self
        for _ in range(k):
            e = data.ev_letter(out.z, 0)
            tail = data.ev_drop(out.z, 1)
            w1, r1 = data.act_path(out.g1, data.path((e,)))
            w2, r2 = data.act_path(out.g2, data.path((e,)))
            out = PairArrow(
                data, data.path(out.w1.edges + w1.edges, out.w1.rv),
                r1, data.path(out.w2.edges + w2.edges, out.w2.rv), r2, tail)
        return out

    def grade(self):
        return len(self.w1.edges) - len(self.w2.edges)

    def source(self):
        data = self.data
        moved = data.group_act_ev(self.g2, self.z)
        return data.ev(self.w2.edges + moved.pre, moved.per, self.w2.rv)

    def target(self):
        data = self.data
        moved = data.group_act_ev(self.g1, self.z)
        return data.ev(self.w1.edges + moved.pre, moved.per, self.w1.rv)

    def inverse(self):
        return PairArrow(self.data, self.w2, self.g2, self.w1, self.g1,
                         self.z)

    def key(self):
        n = self.normalised()
        return (n.w1, n.g1, n.w2, n.z)


def pair_from_nf(data, t, z):
    """The pair arrow of a normal form at a point of its domain."""
    assert data.ev_starts_with(z, t.w2), "point outside the domain"
    tail = data.ev_drop(z, len(t.w2.edges))
    return PairArrow(data, t.w1, t.g, t.w2, data.group.identity, tail)


def pair_unit(data, z):
    p = data.path((), z.rv)
    return PairArrow(data, p, data.group.identity, p,
                     data.group.identity, z)


class SelfSimPairModel:
    """The pair groupoid over rational points, with decidable equality.

    Arrow equality aligns the two pairs at a common source, then walks
    the extensions level by level; a repeated pair of residuals at the
    same phase of the tail certifies inequality by pigeonhole.
    """

    def __init__(self, d, depth=4):
        self.d = d
        self.data = as_selfsim(d)
        self.depth = depth

    def equal(self, p, q):
        data = self.data
        p, q = p.normalised(), q.normalised()
        if p.source() != q.source() or p.grade() != q.grade():
            return False
        z0 = p.source()
        lp, lq = len(p.w2.edges), len(q.w2.edges)
        top = max(lp, lq)
        p = p.extend(top - lp)
        q = q.extend(top - lq)
        seen = set()
        pos = top
        while True:
            if (p.w1, p.g1, p.w2) == (q.w1, q.g1, q.w2):
                return True
            if p.w1.edges != q.w1.edges or p.w2.edges != q.w2.edges:
                return False
            state = (p.g1, q.g1, data.ev_phase(z0, pos))
            if state in seen:
                return False
            seen.add(state)
            p, q = p.extend(1), q.extend(1)
            pos += 1

    def mult(self, p, q):
        """[g_g, g_h].[g_h', g_k] by common refinement within the depth."""
        data = self.data
        G = data.group
        if p.source() != q.target():
            raise DepthInsufficient("arrows not composable")
        p = p.normalised()
        for k1 in range(self.depth + 1):
            pe = p.extend(k1)
            mid_p = (pe.w2.edges, pe.g2)
            for k2 in range(self.depth + 1):
                qe = q.extend(k2)
                # twist q so that its first leg matches p's second leg
                if len(qe.w1.edges) != len(mid_p[0]):
                    continue
                if qe.w1.edges != mid_p[0]:
                    continue
                h = G.op(G.inv[qe.g1], mid_p[1])
                tail_q = data.group_act_ev(G.inv[h], qe.z)
                if tail_q != pe.z:
                    continue
                return PairArrow(
                    data, pe.w1, pe.g1, qe.w2,
                    G.op(qe.g2, h), pe.z)
        raise DepthInsufficient(
            f"no common refinement within depth {self.depth}")

    def is_unit(self, p):
        return self.equal(p, pair_unit(self.data, p.source()))

    def arrows_over(self, points, word_len=2):
        """All distinct arrows with legs of the given length, as reps."""
        data = self.data
        out = []
        paths = [w for n in range(word_len + 1) for w in data.paths(n)]
        for z in points:
            for w1 in paths:
                for g in data.group:
                    for w2 in paths:
                        if data.ps(w1) != data.vact[(g, data.ps(w2))]:
                            continue
                        t = nf(data, w1.edges, g, w2.edges,
                               rv1=w1.rv, rv2=w2.rv)
                        if not data.ev_starts_with(z, t.w2):
                            continue
                        p = pair_from_nf(data, t, z)
                        if not any(self.equal(p, q) for q in out):
                            out.append(p)
        return out

    def grading_functor(self, completion):
        """The map to the groupoid completion: grade as a zigzag class."""
        gen = self.d.shape.gens[0]
        obj = self.d.shape.objects[0]

        def theta(p):
            m, n = len(p.w1.edges), len(p.w2.edges)
            return completion.cls((obj, obj, (gen,) * m),
                                  (obj, obj, (gen,) * n))

        return theta


def pair_groupoid_model(d, depth=4):
    """The pair-construction model of a free-monoid diagram."""
    if d.shape.kind == GROUP:
        return model_group_shape(d)
    return SelfSimPairModel(d, depth)
