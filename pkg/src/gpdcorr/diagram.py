"""Diagrams of correspondences over a shape, and their actions.

A diagram assigns a groupoid to every shape object, a correspondence to
every arrow, and multiplication bijections mu_{g,h} to composable
pairs; unit correspondences and unit multiplications are built in.
Generator data over free shapes is materialised as canonical composable
tuples modulo the junction moves (xi.gamma, eta) ~ (xi, gamma.eta), so
that multiplication is concatenation followed by canonicalisation; over
free commutative shapes the concatenation is bubble-sorted through the
given braidings first.  Explicitly given mu maps are stored on raw
pairs and checked, never assumed, to descend to bijections of the
composed correspondences.

An action on a finite set is a partitioned carrier with anchors and one
surjection per arrow.  All machinery works with the generator arrows
and the groupoid pieces; longer arrows act by folding.
"""

from itertools import product

from .corr import (Correspondence, compose, identity_correspondence,
                   inner_product)
from .errors import ConditionFailed, HexagonViolation
from .fincat import COMM, PresentedShape
from .groupoid import FinGroupoid, PartialBijection


class Diagram:

    def __init__(self, shape, gr, corr, mu, bound=None, sigma=None):
        self.shape = shape
        self.gr = dict(gr)
        self.corr = dict(corr)
        self.mu = dict(mu)
        self.bound = bound if bound is not None else shape.length_bound
        self.sigma = sigma
        self.selfsim = None

    def arrows(self, bound=None):
        return self.shape.arrows(self.bound if bound is None else bound)

    def gen_arrows(self):
        return self.shape.generator_arrows()

    def X(self, g):
        if self.shape.is_identity_arrow(g) and g not in self.corr:
            self.corr[g] = identity_correspondence(self.gr[g[0]])
        return self.corr[g]

    def mu_apply(self, g, h, xi, eta):
        """The element xi.eta of X(g.h)."""
        if self.shape.is_identity_arrow(g):
            return self.X(h).lact[(xi, eta)]
        if self.shape.is_identity_arrow(h):
            return self.X(g).ract[(xi, eta)]
        return self.mu[(g, h)][(xi, eta)]

    def is_tight(self):
        from .corr import classify
        return all(classify(self.X(g))["tight"] for g in self.gen_arrows())


def discrete_diagram(groupoids):
    """A diagram over a shape with only identity arrows."""
    shape = PresentedShape.discrete(sorted(groupoids, key=repr))
    return Diagram(shape, groupoids, {}, {}, bound=1)


class _Tuples:
    """Canonical composable tuples over a sequence of correspondences."""

    def __init__(self, comps):
        self.comps = comps
        raw = [(x,) for x in comps[0].carrier]
        for c in comps[1:]:
            k = len(raw[0]) if raw else 0
            raw = [t + (y,) for t in raw for y in c.carrier
                   if comps[k - 1].smap[t[-1]] == c.rmap[y]]
        self.raw = raw
        parent = {t: t for t in raw}
        index = [{x: i for i, x in enumerate(c.carrier)} for c in comps]

        def key(t):
            return tuple(index[i][x] for i, x in enumerate(t))

        def find(t):
            while parent[t] != t:
                parent[t] = parent[parent[t]]
                t = parent[t]
            return t

        mids = [c.right for c in comps[:-1]]
        for t in raw:
            for i, mid in enumerate(mids):
                for g in mid.arrow_ids():
                    xg = comps[i].ract.get((t[i], g))
                    gy = comps[i + 1].lact.get((mid.invert(g), t[i + 1]))
                    if xg is None or gy is None:
                        continue
                    other = t[:i] + (xg, gy) + t[i + 2:]
                    a, b = sorted((find(t), find(other)), key=key)
                    if a != b:
                        parent[b] = a
        self.canon = {t: find(t) for t in raw}
        self.carrier = sorted({self.canon[t] for t in raw}, key=key)


def _as_tuple_corr(tp):
    comps = tp.comps
    left, right = comps[0].left, comps[-1].right
    rmap = {t: comps[0].rmap[t[0]] for t in tp.carrier}
    smap = {t: comps[-1].smap[t[-1]] for t in tp.carrier}
    lact, ract = {}, {}
    for h in left.arrow_ids():
        for t in tp.carrier:
            moved = comps[0].lact.get((h, t[0]))
            if moved is not None:
                lact[(h, t)] = tp.canon[(moved,) + t[1:]]
    for g in right.arrow_ids():
        for t in tp.carrier:
            moved = comps[-1].ract.get((t[-1], g))
            if moved is not None:
                ract[(t, g)] = tp.canon[t[:-1] + (moved,)]
    c = Correspondence(left, right, tp.carrier, rmap, smap, lact, ract)
    c.tuples = tp
    return c


def from_generators(shape, gens, groupoids=None, braidings=None, bound=None):
    """Materialise a diagram from its generator correspondences.

    ``gens`` maps generator id -> Correspondence.  For free commutative
    shapes, ``braidings`` maps (a, b) with a < b to a dict on raw pairs
    (x_a, x_b) -> (x_b', x_a') realising X_a.X_b ~ X_b.X_a; the braiding
    hexagons are checked during materialisation.
    """
    bound = bound if bound is not None else shape.length_bound
    gr = dict(groupoids or {})
    for a, c in gens.items():
        gr.setdefault(shape.gen_dst[a], c.left)
        gr.setdefault(shape.gen_src[a], c.right)
    d = Diagram(shape, gr, {}, {}, bound=bound,
                sigma=dict(braidings) if braidings else None)
    d.gen_data = dict(gens)
    if shape.kind == COMM and len(shape.gens) > 1:
        _check_hexagons(shape, gens, d.sigma or {})
    words = [w for w in shape.arrows(bound)]
    tuple_cache = {}
    for w in words:
        if shape.is_identity_arrow(w):
            continue
        tp = _Tuples([gens[a] for a in w[2]])
        tuple_cache[w] = tp
        d.corr[w] = _as_tuple_corr(tp)
    for g in words:
        for h in words:
            if shape.is_identity_arrow(g) or shape.is_identity_arrow(h):
                continue
            gh = shape.compose(g, h)
            if gh is None or shape.length(gh) > bound:
                continue
            table = {}
            for xi in d.corr[g].carrier:
                for eta in d.corr[h].carrier:
                    if d.corr[g].smap[xi] != d.corr[h].rmap[eta]:
                        continue
                    raw = xi + eta
                    if shape.kind == COMM:
                        raw = _sort_letters(gens, d.sigma or {},
                                            g[2] + h[2], raw)
                    table[(xi, eta)] = tuple_cache[gh].canon[raw]
            d.mu[(g, h)] = table
    return d


def _swap(gens, sigma, a, b, xa, xb):
    """One braiding step: (x_a, x_b) over letters (a, b) -> over (b, a)."""
    if a == b:
        return xb, xa
    if a < b:
        return sigma[(a, b)][(xa, xb)]
    # invert the stored direction by searching through the pair class
    ca, cb = gens[b], gens[a]
    for (ya, yb), (zb, za) in sigma[(b, a)].items():
        if (zb, za) == (xa, xb):
            return ya, yb
        # same class: (xa, xb) ~ (zb, za) via an arrow of the middle groupoid
        mid = gens[a].right
        for gmid in mid.arrow_ids():
            if cb.ract.get((zb, gmid)) == xa and \
                    ca.lact.get((mid.invert(gmid), za)) == xb:
                return ya, yb
    raise KeyError(f"braiding has no entry covering {(xa, xb)!r}")


def _sort_letters(gens, sigma, letters, raw):
    letters, raw = list(letters), list(raw)
    changed = True
    while changed:
        changed = False
        for i in range(len(letters) - 1):
            if letters[i] > letters[i + 1]:
                raw[i], raw[i + 1] = _swap(gens, sigma, letters[i],
                                           letters[i + 1], raw[i], raw[i + 1])
                letters[i], letters[i + 1] = letters[i + 1], letters[i]
                changed = True
    return tuple(raw)


def _check_hexagons(shape, gens, sigma):
    gs = sorted(shape.gens)
    for i, a in enumerate(gs):
        for b in gs[i + 1:]:
            for (xa, xb), (yb, ya) in sigma[(a, b)].items():
                back = _swap(gens, sigma, b, a, yb, ya)
                if not _same_pair_class(gens[a], gens[b], back, (xa, xb)):
                    raise HexagonViolation((a, b, "not inverse to itself"))
    for i, a in enumerate(gs):
        for j, b in enumerate(gs[i + 1:], i + 1):
            for c in gs[j + 1:]:
                _check_one_hexagon(gens, sigma, a, b, c)


def _same_pair_class(c1, c2, p, q):
    if p == q:
        return True
    mid = c1.right
    for g in mid.arrow_ids():
        if c1.ract.get((p[0], g)) == q[0] and \
                c2.lact.get((mid.invert(g), p[1])) == q[1]:
            return True
    return False


def _check_one_hexagon(gens, sigma, a, b, c):
    """Both routes X_a X_b X_c -> X_c X_b X_a must agree on all triples."""
    ca, cb, cc = gens[a], gens[b], gens[c]
    for xa in ca.carrier:
        for xb in cb.carrier:
            if ca.smap[xa] != cb.rmap[xb]:
                continue
            for xc in cc.carrier:
                if cb.smap[xb] != cc.rmap[xc]:
                    continue
                # route 1: swap (b,c), then (a,c), then (a,b)
                yb, yc = xb, xc
                yc1, yb1 = _swap(gens, sigma, b, c, yb, yc)
                ya1, dummy_c = xa, yc1
                zc, za = _swap(gens, sigma, a, c, ya1, yc1)
                zb, za2 = _swap(gens, sigma, a, b, za, yb1)
                route1 = (zc, zb, za2)
                # route 2: swap (a,b), then (a,c) in the middle, then (b,c)
                wb, wa = _swap(gens, sigma, a, b, xa, xb)
                wc, wa2 = _swap(gens, sigma, a, c, wa, xc)
                wc2, wb2 = _swap(gens, sigma, b, c, wb, wc)
                route2 = (wc2, wb2, wa2)
                if not _same_triple_class(gens, (c, b, a), route1, route2):
                    raise HexagonViolation((a, b, c))


def _same_triple_class(gens, letters, t1, t2):
    comps = [gens[a] for a in letters]
    tp = _Tuples(comps)
    return tp.canon[t1] == tp.canon[t2]


def from_complex(category, groups, homs, twists):
    """The tight diagram of a complex of groups.

    X_g is the source group with the left action through phi_g, and
    mu_{g,h}(gamma, eta) = u_{g,h}.phi_h(gamma).eta.
    """
    from .corr import from_group_hom
    invertible = all(
        any(category.mul(g, h) == category.identity(category.dst(g)) and
            category.mul(h, g) == category.identity(category.src(g))
            for h in category.arrow_ids())
        for g in category.arrow_ids())
    if invertible and len(category.objects) == 1:
        shape = PresentedShape.group_shape(category)
    else:
        shape = PresentedShape.finite(category)
    gr = {x: FinGroupoid.from_group(groups[x]) for x in category.objects}
    corr = {}
    for g in shape.generator_arrows():
        gid = g[2][0]
        corr[g] = from_group_hom(groups[category.dst(gid)],
                                 groups[category.src(gid)], homs[gid])
        corr[g].left = gr[category.dst(gid)]
        corr[g].right = gr[category.src(gid)]
    mu = {}
    for g in shape.generator_arrows():
        for h in shape.generator_arrows():
            gh = shape.compose(g, h)
            if gh is None:
                continue
            gid, hid = g[2][0], h[2][0]
            u = twists[(gid, hid)]
            gs = groups[category.src(hid)]
            mu[(g, h)] = {(gamma, eta): gs.op(gs.op(u, homs[hid][gamma]), eta)
                          for gamma in corr[g].carrier
                          for eta in corr[h].carrier}
    d = Diagram(shape, gr, corr, mu, bound=1)
    return d


def validate_diagram(d, bound=None):
    """Element-wise check of the unit and associativity coherence."""
    from .corr import validate_correspondence
    report = []
    bound = bound if bound is not None else d.bound
    arrows = [g for g in d.arrows(bound)]
    for g in arrows:
        for line in validate_correspondence(d.X(g)):
            report.append(f"X({g!r}): {line}")
    pairs = [(g, h) for g in arrows for h in arrows
             if not d.shape.is_identity_arrow(g)
             and not d.shape.is_identity_arrow(h)
             and d.shape.compose(g, h) is not None
             and d.shape.length(d.shape.compose(g, h)) <= bound]
    for (g, h) in pairs:
        gh = d.shape.compose(g, h)
        cg, ch, cgh = d.X(g), d.X(h), d.X(gh)
        table = d.mu.get((g, h))
        if table is None:
            report.append(f"missing mu for ({g!r},{h!r})")
            continue
        mid = cg.right
        for (xi, eta), val in table.items():
            for k in mid.arrow_ids():
                xik = cg.ract.get((xi, k))
                kinv_eta = ch.lact.get((mid.invert(k), eta))
                if xik is None or kinv_eta is None:
                    continue
                if table.get((xik, kinv_eta)) != val:
                    report.append(
                        f"mu({g!r},{h!r}) not balanced at ({xi!r},{eta!r},{k!r})")
            for hh in cg.left.arrow_ids():
                if (hh, xi) in cg.lact:
                    if table.get((cg.lact[(hh, xi)], eta)) != cgh.lact.get((hh, val)):
                        report.append(
                            f"mu({g!r},{h!r}) not left equivariant at ({hh!r},{xi!r},{eta!r})")
            for k in ch.right.arrow_ids():
                if (eta, k) in ch.ract:
                    if table.get((xi, ch.ract[(eta, k)])) != cgh.ract.get((val, k)):
                        report.append(
                            f"mu({g!r},{h!r}) not right equivariant at ({xi!r},{eta!r},{k!r})")
        image = set(table.values())
        if image != set(cgh.carrier):
            report.append(f"mu({g!r},{h!r}) not surjective onto X({gh!r})")
        comp = compose(cg, ch)
        if len(image) < len(comp.carrier):
            report.append(f"mu({g!r},{h!r}) not injective on classes")
    for (g, h) in pairs:
        gh = d.shape.compose(g, h)
        for k in arrows:
            if d.shape.is_identity_arrow(k):
                continue
            hk = d.shape.compose(h, k)
            ghk = d.shape.compose(gh, k) if gh is not None else None
            if hk is None or ghk is None or d.shape.length(ghk) > bound or \
                    d.shape.length(hk) > bound:
                continue
            cg, ch, ck = d.X(g), d.X(h), d.X(k)
            for xi in cg.carrier:
                for eta in ch.carrier:
                    if cg.smap[xi] != ch.rmap[eta]:
                        continue
                    for zeta in ck.carrier:
                        if ch.smap[eta] != ck.rmap[zeta]:
                            continue
                        try:
                            lhs = d.mu_apply(
                                gh, k, d.mu_apply(g, h, xi, eta), zeta)
                            rhs = d.mu_apply(
                                g, hk, xi, d.mu_apply(h, k, eta, zeta))
                        except KeyError:
                            lhs, rhs = "missing", None
                        if lhs != rhs:
                            report.append(
                                "associativity coherence fails on "
                                f"({g!r},{h!r},{k!r}) at ({xi!r},{eta!r},{zeta!r})")
    return report


class FAction:
    """An action of a diagram on a partitioned finite set.

    ``gact`` holds the groupoid actions (arrow, y) -> y for each piece;
    ``alph`` maps each generator arrow to its multiplication table
    (xi, y) -> y.  Longer arrows act by folding over the letters of the
    canonical tuple.
    """

    def __init__(self, diagram, carrier, part, anchor, gact, alph):
        self.diagram = diagram
        self.carrier = tuple(carrier)
        self.part = dict(part)
        self.anchor = dict(anchor)
        self.gact = dict(gact)
        self.alph = {g: dict(t) for g, t in alph.items()}

    def piece(self, x):
        return tuple(y for y in self.carrier if self.part[y] == x)

    def apply(self, g, xi, y):
        """xi.y for xi in X(g); None when undefined."""
        d = self.diagram
        if d.shape.is_identity_arrow(g):
            return self.gact.get((xi, y))
        if len(g[2]) == 1:
            return self.alph[g].get((xi, y))
        letters = list(g[2])
        gens = {a: (d.shape.gen_dst[a], d.shape.gen_src[a], (a,))
                for a in letters}
        for i in range(len(letters) - 1, -1, -1):
            y = self.alph[gens[letters[i]]].get(((xi[i],), y))
            if y is None:
                return None
        return y

    def theta(self, g, u):
        """The partial bijection of a slice u of X(g)."""
        d = self.diagram
        c = d.X(g)
        mapping = {}
        for y in self.piece(d.shape.s(g)):
            for xi in u:
                if c.smap[xi] == self.anchor[y]:
                    if d.shape.is_identity_arrow(g):
                        mapping[y] = self.gact[(xi, y)]
                    else:
                        mapping[y] = self.apply(g, xi, y)
        return PartialBijection(mapping)


def validate_action(d, a):
    """Check the definition of a diagram action, within the bound."""
    report = []
    for y in a.carrier:
        if a.part.get(y) not in d.shape.objects:
            report.append(f"{y!r} not assigned to a shape object")
            continue
        if a.anchor.get(y) not in d.gr[a.part[y]].objects:
            report.append(f"anchor of {y!r} is not a unit of its groupoid")
    for x in d.shape.objects:
        gpd = d.gr[x]
        ys = a.piece(x)
        for g in gpd.arrow_ids():
            for y in ys:
                has = (g, y) in a.gact
                want = gpd.src(g) == a.anchor[y]
                if has != want:
                    report.append(f"groupoid action domain wrong at ({g!r},{y!r})")
                elif has:
                    z = a.gact[(g, y)]
                    if a.part[z] != x or a.anchor[z] != gpd.dst(g):
                        report.append(f"groupoid action anchor wrong at ({g!r},{y!r})")
        for g in gpd.arrow_ids():
            for h in gpd.arrow_ids():
                if not gpd.category.composable(g, h):
                    continue
                gh = gpd.mul(g, h)
                for y in ys:
                    if (h, y) not in a.gact:
                        continue
                    if a.gact.get((g, a.gact[(h, y)])) != a.gact.get((gh, y)):
                        report.append(
                            f"groupoid associativity fails at ({g!r},{h!r},{y!r})")
        u = {y: y for y in ys}
        for y in ys:
            uy = a.gact.get((gpd.unit(a.anchor[y]), y))
            if uy != y:
                report.append(f"unit moves {y!r}")
    for g in d.gen_arrows():
        c = d.X(g)
        table = a.alph.get(g)
        if table is None:
            report.append(f"no action table for {g!r}")
            continue
        src, dst = d.shape.s(g), d.shape.r(g)
        for xi in c.carrier:
            for y in a.piece(src):
                has = (xi, y) in table
                want = c.smap[xi] == a.anchor[y]
                if has != want:
                    report.append(f"alpha({g!r}) domain wrong at ({xi!r},{y!r})")
                elif has:
                    z = table[(xi, y)]
                    if a.part[z] != dst or a.anchor[z] != c.rmap[xi]:
                        report.append(
                            f"alpha({g!r}) anchor wrong at ({xi!r},{y!r})")
        image = set(table.values())
        if image != set(a.piece(dst)):
            report.append(f"alpha({g!r}) not surjective onto the {dst!r} piece")
        # compatibility with the groupoid actions on both sides
        for xi in c.carrier:
            for y in a.piece(src):
                if (xi, y) not in table:
                    continue
                for gamma in d.gr[dst].arrow_ids():
                    if (gamma, xi) in c.lact:
                        lhs = a.gact.get((gamma, table[(xi, y)]))
                        rhs = table.get((c.lact[(gamma, xi)], y))
                        if lhs != rhs:
                            report.append(
                                f"(5.1) fails at ({gamma!r},{xi!r},{y!r})")
                for gamma in d.gr[src].arrow_ids():
                    if (xi, gamma) in c.ract and (gamma, y) in a.gact:
                        lhs = table.get((c.ract[(xi, gamma)], y))
                        rhs = table.get((xi, a.gact[(gamma, y)]))
                        if lhs != rhs:
                            report.append(
                                f"(5.1) fails at ({xi!r},{gamma!r},{y!r})")
        # (5.2): xi.y == xi'.y' forces co-orbital xi and y == <xi|xi'>.y'
        for (xi, y), z in table.items():
            for (xi2, y2), z2 in table.items():
                if z != z2:
                    continue
                if c.p(xi) != c.p(xi2):
                    report.append(f"(5.2) fails: {xi!r},{xi2!r} not co-orbital")
                    continue
                eta = inner_product(c, xi, xi2)
                if a.gact.get((eta, y2)) != y:
                    report.append(
                        f"(5.2) fails at ({xi!r},{y!r}) vs ({xi2!r},{y2!r})")
    # mixed associativity for composable generator pairs with materialised gh
    for g in d.gen_arrows():
        for h in d.gen_arrows():
            gh = d.shape.compose(g, h)
            if gh is None or d.shape.length(gh) > d.bound:
                continue
            cg, ch = d.X(g), d.X(h)
            for xi in cg.carrier:
                for eta in ch.carrier:
                    if cg.smap[xi] != ch.rmap[eta]:
                        continue
                    prod = d.mu_apply(g, h, xi, eta)
                    for y in a.piece(d.shape.s(h)):
                        inner = a.apply(h, eta, y)
                        if inner is None:
                            continue
                        lhs = a.apply(g, xi, inner)
                        rhs = a.apply(gh, prod, y)
                        if lhs != rhs:
                            report.append(
                                f"(5.1) fails at ({g!r},{h!r},{xi!r},{eta!r},{y!r})")
    return report


def singleton_thetas(d, a):
    """theta on the singleton slices of every materialised arrow."""
    out = {}
    for g in d.arrows():
        c = d.X(g)
        for xi in c.carrier:
            out[(g, xi)] = a.theta(g, frozenset([xi]))
    return out


def theta_from_action(d, a):
    return singleton_thetas(d, a)


def action_from_theta(d, part, anchor, thetas):
    """Rebuild the unique action inducing the given singleton thetas.

    ``thetas`` maps (arrow, xi) -> PartialBijection as produced by
    theta_from_action.  The four reconstruction conditions
    are checked and violations raise ConditionFailed.
    """
    carrier = sorted(part, key=repr)

    def piece(x):
        return [y for y in carrier if part[y] == x]

    units = {x: d.shape.identity(x) for x in d.shape.objects}
    # (.4) anchors transform along theta, and domains are r^-1(s(xi))
    for (g, xi), pb in thetas.items():
        c = d.X(g)
        want_dom = {y for y in piece(d.shape.s(g))
                    if anchor[y] == c.smap[xi]}
        if set(pb.domain) != want_dom:
            raise ConditionFailed(".4", (g, xi, "domain"))
        for y, z in pb.mapping.items():
            if anchor[z] != c.rmap[xi] or part[z] != d.shape.r(g):
                raise ConditionFailed(".4", (g, xi, y))
    # (.1) multiplicativity on singleton slices
    for (g, xi), pb_g in thetas.items():
        for (h, eta), pb_h in thetas.items():
            gh = d.shape.compose(g, h)
            if gh is None or d.shape.length(gh) > d.bound:
                continue
            cg, ch = d.X(g), d.X(h)
            if cg.smap[xi] != ch.rmap[eta]:
                expected = PartialBijection.empty()
            else:
                prod = d.mu_apply(g, h, xi, eta)
                expected = thetas[(gh, prod)]
            if pb_g * pb_h != expected:
                raise ConditionFailed(".1", (g, xi, h, eta))
    # (.2) braket law within each arrow
    arrows_seen = sorted({g for (g, _) in thetas}, key=repr)
    for g in arrows_seen:
        c = d.X(g)
        for xi in c.carrier:
            for eta in c.carrier:
                lhs = thetas[(g, xi)].star() * thetas[(g, eta)]
                if c.p(xi) != c.p(eta):
                    if lhs != PartialBijection.empty():
                        raise ConditionFailed(".2", (g, xi, eta))
                    continue
                k = inner_product(c, xi, eta)
                x_obj = d.shape.s(g)
                if lhs != thetas[(units[x_obj], k)]:
                    raise ConditionFailed(".2", (g, xi, eta))
    # (.3) images cover each target piece
    for g in d.gen_arrows():
        c = d.X(g)
        covered = set()
        for xi in c.carrier:
            covered.update(thetas[(g, xi)].image)
        if covered != set(piece(d.shape.r(g))):
            raise ConditionFailed(".3", g)
    gact = {}
    for x in d.shape.objects:
        gpd = d.gr[x]
        for gamma in gpd.arrow_ids():
            pb = thetas[(units[x], gamma)]
            for y, z in pb.mapping.items():
                gact[(gamma, y)] = z
    alph = {}
    for g in d.gen_arrows():
        table = {}
        for xi in d.X(g).carrier:
            for y, z in thetas[(g, xi)].mapping.items():
                table[(xi, y)] = z
        alph[g] = table
    a = FAction(d, carrier, part, anchor, gact, alph)
    report = validate_action(d, a)
    if report:
        raise ConditionFailed("action", report[0])
    return a


def equivariant_maps(a1, a2):
    """All equivariant maps between two actions of the same diagram."""
    d = a1.diagram
    carrier = list(a1.carrier)
    candidates = {y: [z for z in a2.carrier
                      if a2.part[z] == a1.part[y]
                      and a2.anchor[z] == a1.anchor[y]]
                  for y in carrier}
    out = []
    for values in product(*(candidates[y] for y in carrier)):
        f = dict(zip(carrier, values))
        if _is_equivariant(d, a1, a2, f):
            out.append(f)
    return out


def _is_equivariant(d, a1, a2, f):
    for (gamma, y), z in a1.gact.items():
        if a2.gact.get((gamma, f[y])) != f[z]:
            return False
    for g, table in a1.alph.items():
        for (xi, y), z in table.items():
            if a2.alph[g].get((xi, f[y])) != f[z]:
                return False
    return True


def invariant_check(a, f):
    """Whether f is invariant: constant along every action move."""
    for (gamma, y), z in a.gact.items():
        if f[y] != f[z]:
            return False
    for table in a.alph.values():
        for (xi, y), z in table.items():
            if f[y] != f[z]:
                return False
    return True


def actions_isomorphic(a1, a2):
    if len(a1.carrier) != len(a2.carrier):
        return False
    for f in equivariant_maps(a1, a2):
        if len(set(f.values())) == len(a2.carrier):
            return True
    return False


def _left_actions(gpd, ys, anchor):
    """All left actions of a groupoid on a fibred finite set."""
    arrows = [g for g in gpd.arrow_ids() if not gpd.is_unit(g)]
    base = {(gpd.unit(anchor[y]), y): y for y in ys}

    def extend(i, act):
        if i == len(arrows):
            ok = all(
                act.get((gpd.mul(g, h), y)) == act.get((g, act[(h, y)]))
                for g in gpd.arrow_ids() for h in gpd.arrow_ids()
                if gpd.category.composable(g, h)
                for y in ys if (h, y) in act)
            if ok:
                yield dict(act)
            return
        g = arrows[i]
        dom = [y for y in ys if anchor[y] == gpd.src(g)]
        cod = [y for y in ys if anchor[y] == gpd.dst(g)]
        if len(dom) != len(cod):
            return
        for image in _injections(dom, cod):
            nxt = dict(act)
            nxt.update({(g, y): image[y] for y in dom})
            yield from extend(i + 1, nxt)

    yield from extend(0, base)


def _injections(dom, cod):
    if not dom:
        yield {}
        return
    y, rest = dom[0], dom[1:]
    for z in cod:
        for tail in _injections(rest, [c for c in cod if c != z]):
            yield {y: z, **tail}


def _equivariant_bijections(d, g, c, gact, ys_src, ys_dst, anchor):
    """All candidate alpha tables for one generator arrow."""
    pairs = [(xi, y) for xi in c.carrier for y in ys_src
             if c.smap[xi] == anchor[y]]
    classes = {}
    parent = {p: p for p in pairs}

    def find(p):
        while parent[p] != p:
            parent[p] = parent[parent[p]]
            p = parent[p]
        return p

    for (xi, y) in pairs:
        for gamma in c.right.arrow_ids():
            xig = c.ract.get((xi, gamma))
            if xig is None:
                continue
            giy = gact.get((c.right.invert(gamma), y))
            if giy is None:
                continue
            q = (xig, giy)
            a, b = sorted((find((xi, y)), find(q)), key=repr)
            if a != b:
                parent[b] = a
    for p in pairs:
        classes.setdefault(find(p), []).append(p)
    reps = sorted(classes, key=repr)
    # orbits of the left groupoid action on classes
    def act_left(gamma, rep):
        xi, y = rep
        moved = c.lact.get((gamma, xi))
        return None if moved is None else find((moved, y))

    def anchor_of(rep):
        return c.rmap[rep[0]]

    gpd = c.left
    orbit = {rep: rep for rep in reps}
    for rep in reps:
        for gamma in gpd.arrow_ids():
            moved = act_left(gamma, rep)
            if moved is not None and orbit[moved] != orbit[rep]:
                a, b = sorted((orbit[rep], orbit[moved]), key=repr)
                for k, v in list(orbit.items()):
                    if v == b:
                        orbit[k] = a
    orbit_reps = sorted({orbit[rep] for rep in reps}, key=repr)

    def place(i, assign):
        if i == len(orbit_reps):
            vals = {assign[rep] for rep in reps}
            if len(vals) == len(reps) == len(ys_dst):
                table = {}
                for rep in reps:
                    for p in classes[rep]:
                        table[p] = assign[rep]
                yield table
            return
        base = orbit_reps[i]
        for z in ys_dst:
            if anchor[z] != anchor_of(base):
                continue
            nxt = dict(assign)
            nxt[base] = z
            good = True
            for gamma in gpd.arrow_ids():
                moved = act_left(gamma, base)
                if moved is None:
                    continue
                want = gact.get((gamma, z))
                if want is None or nxt.get(moved, want) != want:
                    good = False
                    break
                nxt[moved] = want
            if good:
                yield from place(i + 1, nxt)

    yield from place(0, {})


def enumerate_actions(d, n, up_to_iso=True):
    """All actions of the diagram on carriers of size <= n."""
    objects = list(d.shape.objects)
    out = []
    for k in range(n + 1):
        carrier = list(range(k))
        for parts in product(objects, repeat=k):
            part = dict(zip(carrier, parts))
            anchor_choices = [sorted(d.gr[part[y]].objects, key=repr)
                              for y in carrier]
            for anchors in product(*anchor_choices):
                anchor = dict(zip(carrier, anchors))
                for a in _actions_with_frame(d, carrier, part, anchor):
                    if up_to_iso and any(actions_isomorphic(a, b)
                                         for b in out):
                        continue
                    out.append(a)
    return out


def _actions_with_frame(d, carrier, part, anchor):
    pieces = {x: [y for y in carrier if part[y] == x]
              for x in d.shape.objects}
    object_list = sorted(d.shape.objects, key=repr)

    def build_gact(i, gact):
        if i == len(object_list):
            yield dict(gact)
            return
        x = object_list[i]
        for act in _left_actions(d.gr[x], pieces[x], anchor):
            nxt = dict(gact)
            nxt.update(act)
            yield from build_gact(i + 1, nxt)

    gens = d.gen_arrows()
    for gact in build_gact(0, {}):
        def build_alph(j, alph):
            if j == len(gens):
                a = FAction(d, carrier, part, anchor, gact, alph)
                if _coherent(d, a):
                    yield a
                return
            g = gens[j]
            for table in _equivariant_bijections(
                    d, g, d.X(g), gact, pieces[d.shape.s(g)],
                    pieces[d.shape.r(g)], anchor):
                nxt = dict(alph)
                nxt[g] = table
                yield from build_alph(j + 1, nxt)

        yield from build_alph(0, {})


def _coherent(d, a):
    """Relation constraints: generator pairs act compatibly with mu."""
    for g in d.gen_arrows():
        for h in d.gen_arrows():
            gh = d.shape.compose(g, h)
            if gh is None or d.shape.length(gh) > d.bound:
                continue
            cg, ch = d.X(g), d.X(h)
            for xi in cg.carrier:
                for eta in ch.carrier:
                    if cg.smap[xi] != ch.rmap[eta]:
                        continue
                    prod = d.mu_apply(g, h, xi, eta)
                    for y in a.piece(d.shape.s(h)):
                        inner = a.apply(h, eta, y)
                        if inner is None:
                            continue
                        if a.apply(g, xi, inner) != a.apply(gh, prod, y):
                            return False
    return True


class Transformation:
    """A strong transformation between two diagrams of the same shape.

    ``Y`` maps each object x to a correspondence G1_x <- G0_x and ``V``
    maps arrows g to tables (xi1, y) -> (y', xi0) realising the
    isomorphism X1_g . Y_{s(g)} ~ Y_{r(g)} . X0_g on representatives.
    """

    def __init__(self, d0, d1, Y, V):
        self.d0 = d0
        self.d1 = d1
        self.Y = dict(Y)
        self.V = {g: dict(t) for g, t in V.items()}


def identity_transformation(d):
    Y = {x: identity_correspondence(d.gr[x]) for x in d.shape.objects}
    V = {}
    for g in d.arrows():
        if d.shape.is_identity_arrow(g):
            continue
        c = d.X(g)
        table = {}
        for xi in c.carrier:
            for gamma in d.gr[d.shape.s(g)].arrow_ids():
                if (xi, gamma) in c.ract:
                    table[(xi, gamma)] = (
                        d.gr[d.shape.r(g)].unit(c.rmap[xi]),
                        c.ract[(xi, gamma)])
        V[g] = table
    return Transformation(d, d, Y, V)


def compose_transformations(t21, t10):
    """The composite transformation, built on composed correspondences."""
    d0, d2 = t10.d0, t21.d1
    Y, V = {}, {}
    for x in d0.shape.objects:
        Y[x] = compose(t21.Y[x], t10.Y[x])
    for g in t21.V:
        cx = Y[d0.shape.r(g)]
        c1g = t21.d1.X(g)
        ys = Y[d0.shape.s(g)]
        table = {}
        for xi2 in c1g.carrier:
            for i in ys.carrier:
                y21, y10 = ys.pairs[i]
                if c1g.smap[xi2] != t21.Y[d0.shape.s(g)].rmap[y21]:
                    continue
                y21p, xi1 = t21.V[g][(xi2, y21)]
                y10p, xi0 = t10.V[g][(xi1, y10)]
                table[(xi2, i)] = (cx.cls[(y21p, y10p)], xi0)
        V[g] = table
    return Transformation(d0, d2, Y, V)


def validate_transformation(t, bound=None):
    """Element-wise check of the naturality squares of a transformation."""
    from .corr import validate_correspondence
    d0, d1 = t.d0, t.d1
    report = []
    for x, c in t.Y.items():
        for line in validate_correspondence(c):
            report.append(f"Y({x!r}): {line}")
    bound = bound if bound is not None else min(d0.bound, d1.bound)
    for g, table in t.V.items():
        c1, c0 = d1.X(g), d0.X(g)
        ys, yr = t.Y[d0.shape.s(g)], t.Y[d0.shape.r(g)]
        target = compose(yr, c0)
        source = compose(c1, ys)
        mid = c1.right
        vals = set()
        for (xi, y), (yp, xip) in table.items():
            if yr.rmap[yp] != c1.rmap[xi] or c0.smap[xip] != ys.smap[y]:
                report.append(f"V({g!r}) breaks anchors at ({xi!r},{y!r})")
            vals.add(target.cls[(yp, xip)])
            for k in mid.arrow_ids():
                xik = c1.ract.get((xi, k))
                kinv_y = ys.lact.get((mid.invert(k), y))
                if xik is None or kinv_y is None:
                    continue
                other = table.get((xik, kinv_y))
                if other is None or \
                        target.cls[(other[0], other[1])] != target.cls[(yp, xip)]:
                    report.append(f"V({g!r}) not balanced at ({xi!r},{y!r},{k!r})")
        if len(vals) != len(target.carrier) or \
                len({source.cls[p] for p in table}) != len(source.carrier):
            report.append(f"V({g!r}) is not a bijection of the composites")
    gens = [g for g in t.V]
    for g in gens:
        for h in gens:
            gh = d0.shape.compose(g, h)
            if gh is None or gh not in t.V or \
                    d0.shape.length(gh) > bound:
                continue
            c1g, c1h = d1.X(g), d1.X(h)
            yz = t.Y[d0.shape.s(h)]
            yx = t.Y[d0.shape.r(g)]
            target = compose(yx, d0.X(gh))
            for xi in c1g.carrier:
                for eta in c1h.carrier:
                    if c1g.smap[xi] != c1h.rmap[eta]:
                        continue
                    for y in yz.carrier:
                        if c1h.smap[eta] != yz.rmap[y]:
                            continue
                        # route A: V_h, then V_g, then mu0
                        yp, eta0 = t.V[h][(eta, y)]
                        ypp, xi0 = t.V[g][(xi, yp)]
                        routeA = (ypp, d0.mu_apply(g, h, xi0, eta0))
                        # route B: mu1, then V_{gh}
                        prod = d1.mu_apply(g, h, xi, eta)
                        routeB = t.V[gh].get((prod, y))
                        if routeB is None or \
                                target.cls[routeA] != target.cls[routeB]:
                            report.append(
                                f"square fails on ({g!r},{h!r}) at "
                                f"({xi!r},{eta!r},{y!r})")
    return report


def validate_modification(t1, t2, W):
    """Check the squares of a modification W between two transformations."""
    report = []
    d0, d1 = t1.d0, t1.d1
    for x in d0.shape.objects:
        c1, c2 = t1.Y[x], t2.Y[x]
        w = W[x]
        for y in c1.carrier:
            if c2.rmap[w[y]] != c1.rmap[y] or c2.smap[w[y]] != c1.smap[y]:
                report.append(f"W({x!r}) breaks anchors at {y!r}")
        for (h, y), z in c1.lact.items():
            if c2.lact.get((h, w[y])) != w[z]:
                report.append(f"W({x!r}) not left equivariant at ({h!r},{y!r})")
        for (y, g), z in c1.ract.items():
            if c2.ract.get((w[y], g)) != w[z]:
                report.append(f"W({x!r}) not right equivariant at ({y!r},{g!r})")
    for g in t1.V:
        if g not in t2.V:
            continue
        x, z = d0.shape.r(g), d0.shape.s(g)
        target = compose(t2.Y[x], d0.X(g))
        for (xi, y), (yp, xi0) in t1.V[g].items():
            other = t2.V[g].get((xi, W[z][y]))
            if other is None or \
                    target.cls.get((W[x][yp], xi0)) != target.cls.get(other):
                report.append(f"modification square fails on {g!r} at "
                              f"({xi!r},{y!r})")
    return report
