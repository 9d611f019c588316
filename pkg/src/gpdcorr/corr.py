"""Groupoid correspondences over finite data.

A correspondence X: H <- G is a finite set with commuting left H- and
right G-actions whose right action is basic (here: free).  Composition
quotients the fibre product by the diagonal middle action; composed
carriers are canonically relabelled as integer ranges with a stored
provenance map so that iterated composites stay comparable and
serialisable.
"""

from .errors import NotCoOrbital
from .groupoid import FinGroupoid, GroupoidAction, check_basic


class Correspondence:

    def __init__(self, left, right, carrier, rmap, smap, lact, ract,
                 pairs=None, cls=None):
        self.left = left
        self.right = right
        self.carrier = tuple(carrier)
        self.rmap = dict(rmap)
        self.smap = dict(smap)
        self.lact = dict(lact)      # (h, x) -> x'
        self.ract = dict(ract)      # (x, g) -> x'
        self.pairs = pairs          # provenance of composed carriers
        self.cls = cls
        self._index = {x: i for i, x in enumerate(self.carrier)}
        self._orbit_rep = None

    def right_action(self):
        return GroupoidAction(
            self.right, self.carrier, self.smap,
            {(g, x): y for (x, g), y in self.ract.items()}, side="right")

    def left_action(self):
        return GroupoidAction(self.left, self.carrier, self.rmap, self.lact,
                              side="left")

    def p(self, x):
        """Orbit projection for the right action, as a canonical member."""
        if self._orbit_rep is None:
            rep = {z: z for z in self.carrier}
            for (u, g), v in self.ract.items():
                a, b = sorted((rep[u], rep[v]), key=self._index.get)
                if a != b:
                    for z in [z for z, r in rep.items() if r == b]:
                        rep[z] = a
            self._orbit_rep = rep
        return self._orbit_rep[x]

    def orbits(self):
        reps = sorted({self.p(x) for x in self.carrier}, key=self._index.get)
        return [tuple(y for y in self.carrier if self.p(y) == r) for r in reps]

    def __len__(self):
        return len(self.carrier)


def identity_correspondence(gpd):
    """The arrow space of a groupoid acting on itself both ways."""
    arrows = gpd.arrow_ids()
    lact = {(h, x): gpd.mul(h, x) for h in arrows for x in arrows
            if gpd.category.composable(h, x)}
    ract = {(x, g): gpd.mul(x, g) for x in arrows for g in arrows
            if gpd.category.composable(x, g)}
    return Correspondence(gpd, gpd, arrows,
                          {x: gpd.dst(x) for x in arrows},
                          {x: gpd.src(x) for x in arrows}, lact, ract)


def from_group_hom(left_group, right_group, phi):
    """The tight correspondence of a group homomorphism.

    The carrier is the right-hand group with right multiplication, and
    the left group acts through phi: h.g = phi(h).g.
    """
    gl = FinGroupoid.from_group(left_group)
    gr = FinGroupoid.from_group(right_group)
    carrier = right_group.elements
    lact = {(h, x): right_group.op(phi[h], x) for h in left_group
            for x in carrier}
    ract = {(x, g): right_group.op(x, g) for x in carrier for g in right_group}
    return Correspondence(gl, gr, carrier, {x: "*" for x in carrier},
                          {x: "*" for x in carrier}, lact, ract)


def space_correspondence(left_points, right_points, rmap, smap, carrier=None):
    """A correspondence between spaces: a set with two maps."""
    carrier = tuple(carrier if carrier is not None else sorted(rmap, key=repr))
    gl = FinGroupoid.space(left_points)
    gr = FinGroupoid.space(right_points)
    lact = {(("u", rmap[x]), x): x for x in carrier}
    ract = {(x, ("u", smap[x])): x for x in carrier}
    return Correspondence(gl, gr, carrier, rmap, smap, lact, ract)


def disjoint_union_lift(c):
    """The induced correspondence over the disjoint union H | G."""
    both = FinGroupoid.disjoint_union([c.left, c.right], tags=("H", "G"))
    rmap = {x: ("H", c.rmap[x]) for x in c.carrier}
    smap = {x: ("G", c.smap[x]) for x in c.carrier}
    lact = {(("H", h), x): y for (h, x), y in c.lact.items()}
    ract = {(x, ("G", g)): y for (x, g), y in c.ract.items()}
    return Correspondence(both, both, c.carrier, rmap, smap, lact, ract)


def validate_correspondence(c):
    """Report violations of the correspondence axioms."""
    report = []
    for x in c.carrier:
        if c.rmap[x] not in c.left.objects:
            report.append(f"r({x!r}) is not an object of the left groupoid")
        if c.smap[x] not in c.right.objects:
            report.append(f"s({x!r}) is not an object of the right groupoid")
    report.extend("left action: " + line for line in c.left_action().validate())
    report.extend("right action: " + line
                  for line in c.right_action().validate())
    for (h, x), y in c.lact.items():
        if c.smap[y] != c.smap[x]:
            report.append(f"s({h!r}.{x!r}) != s({x!r})")
    for (x, g), y in c.ract.items():
        if c.rmap[y] != c.rmap[x]:
            report.append(f"r({x!r}.{g!r}) != r({x!r})")
    for (h, x), y in c.lact.items():
        for g in c.right.arrow_ids():
            if (y, g) in c.ract:
                other = c.lact.get((h, c.ract[(x, g)]))
                if other != c.ract[(y, g)]:
                    report.append(
                        f"actions do not commute at ({h!r},{x!r},{g!r})")
    ok, witness = check_basic(c.right_action())
    if not ok:
        report.append(f"right action not basic, witness {witness!r}")
    return report


def inner_product(c, x1, x2):
    """The unique g with x2 == x1.g, if x1 and x2 are co-orbital."""
    if c.p(x1) != c.p(x2):
        raise NotCoOrbital(f"{x1!r} and {x2!r} lie in different orbits")
    for g in c.right.arrow_ids():
        if c.ract.get((x1, g)) == x2:
            return g
    raise NotCoOrbital(f"no arrow carries {x1!r} to {x2!r}")


def compose(c1, c2):
    """The composite correspondence (X x_s,r Y) / G, canonically relabelled."""
    assert c1.right is c2.left or \
        c1.right.category.arrows == c2.left.category.arrows, \
        "middle groupoids differ"
    mid = c1.right
    fibre = [(x, y) for x in c1.carrier for y in c2.carrier
             if c1.smap[x] == c2.rmap[y]]
    fset = set(fibre)
    parent = {p: p for p in fibre}

    def find(p):
        while parent[p] != p:
            parent[p] = parent[parent[p]]
            p = parent[p]
        return p

    def key(p):
        return (c1._index[p[0]], c2._index[p[1]])

    for (x, y) in fibre:
        for g in mid.arrow_ids():
            gy = c2.lact.get((g, y))
            xg = c1.ract.get((x, mid.invert(g)))
            if gy is None or xg is None:
                continue
            q = (xg, gy)
            if q in fset:
                a, b = sorted((find((x, y)), find(q)), key=key)
                parent[b] = a

    reps = sorted({find(p) for p in fibre}, key=key)
    index = {rep: i for i, rep in enumerate(reps)}
    cls = {p: index[find(p)] for p in fibre}
    carrier = list(range(len(reps)))
    pairs = {i: rep for i, rep in enumerate(reps)}
    rmap = {i: c1.rmap[pairs[i][0]] for i in carrier}
    smap = {i: c2.smap[pairs[i][1]] for i in carrier}
    lact = {}
    for h in c1.left.arrow_ids():
        for i in carrier:
            x, y = pairs[i]
            if (h, x) in c1.lact:
                lact[(h, i)] = cls[(c1.lact[(h, x)], y)]
    ract = {}
    for g in c2.right.arrow_ids():
        for i in carrier:
            x, y = pairs[i]
            if (y, g) in c2.ract:
                ract[(i, g)] = cls[(x, c2.ract[(y, g)])]
    return Correspondence(c1.left, c2.right, carrier, rmap, smap, lact, ract,
                          pairs=pairs, cls=cls)


def classify(c):
    """Proper / regular / tight, through the induced map X/G -> H^0.

    On finite data the fibres are always finite, so every correspondence
    is proper; the flag is kept for interface stability.
    """
    objects = list(c.left.objects)
    image = {c.rmap[c.p(x)] for x in c.carrier}
    fibre_sizes = {}
    for x in c.carrier:
        rep = c.p(x)
        fibre_sizes.setdefault(c.rmap[rep], set()).add(rep)
    regular = image == set(objects)
    tight = regular and all(len(v) == 1 for v in fibre_sizes.values())
    return {"proper": True, "regular": regular, "tight": tight}


def is_slice(c, u):
    """s and the orbit projection must both be injective on a slice."""
    u = list(u)
    svals = [c.smap[x] for x in u]
    pvals = [c.p(x) for x in u]
    return len(set(svals)) == len(u) and len(set(pvals)) == len(u)


def groupoid_slice_star(gpd, u):
    return frozenset(gpd.invert(g) for g in u)


def slice_mult(c1, u, c2, v):
    """The slice U.V inside the composed correspondence.

    Returns (compose(c1, c2), set of composed-carrier points).
    """
    c12 = compose(c1, c2)
    uv = frozenset(c12.cls[(x, y)] for x in u for y in v
                   if c1.smap[x] == c2.rmap[y])
    return c12, uv


def slice_mult_right(c, u, v):
    """U.V inside X when V is a slice of the right groupoid."""
    return frozenset(c.ract[(x, g)] for x in u for g in v
                     if (x, g) in c.ract)


def slice_mult_left(c, v, u):
    """V.U inside X when V is a slice of the left groupoid."""
    return frozenset(c.lact[(h, x)] for h in v for x in u
                     if (h, x) in c.lact)


def braket(c, u1, u2):
    """The slice <U1|U2> = { <x|y> : x in U1, y in U2, p(x) == p(y) }."""
    out = set()
    for x in u1:
        for y in u2:
            if c.p(x) == c.p(y):
                out.add(inner_product(c, x, y))
    return frozenset(out)


def morita_check(c):
    """Whether the correspondence is an equivalence of groupoids."""
    if not check_basic(c.right_action())[0]:
        return False
    for x in c.carrier:
        for h in c.left.arrow_ids():
            if (h, x) in c.lact and c.lact[(h, x)] == x \
                    and not c.left.is_unit(h):
                return False
    right_orbit_reps = {c.p(x) for x in c.carrier}
    rstar = {c.rmap[rep] for rep in right_orbit_reps}
    if len(right_orbit_reps) != len(c.left.objects) or \
            rstar != set(c.left.objects):
        return False
    lrep = {x: x for x in c.carrier}
    for (h, x), y in c.lact.items():
        a, b = sorted((lrep[x], lrep[y]), key=c._index.get)
        for z, r in list(lrep.items()):
            if r == b:
                lrep[z] = a
    left_orbit_reps = set(lrep.values())
    sstar = {c.smap[rep] for rep in left_orbit_reps}
    return len(left_orbit_reps) == len(c.right.objects) and \
        sstar == set(c.right.objects)


def associator(c1, c2, c3):
    """The canonical bijection ((c1.c2).c3) -> (c1.(c2.c3))."""
    left = compose(compose(c1, c2), c3)
    right = compose(c1, compose(c2, c3))
    c12 = compose(c1, c2)
    c23 = compose(c2, c3)
    out = {}
    for i in left.carrier:
        xy, z = left.pairs[i]
        x, y = c12.pairs[xy]
        out[i] = right.cls[(x, c23.cls[(y, z)])]
    return left, right, out
