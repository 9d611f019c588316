"""Finite groupoids, their actions, and pseudogroup machinery.

Everything is discrete, so "open", "continuous" and "local
homeomorphism" are vacuous; a basic action is the same as a free one.
Groupoids are finite categories with an explicit inverse map.  The germ
relation for pseudogroups of partial bijections is pointwise equality
of values; germ equality for abstract element calculi is delegated to
an oracle supplied by the caller.
"""

from .errors import NotEquivariant, OracleIncomplete
from .fincat import FinCategory, validate_category


class Group:
    """A finite group given by a multiplication table."""

    def __init__(self, elements, mul, identity="1"):
        self.elements = tuple(elements)
        self.mul = dict(mul)
        self.identity = identity
        self.inv = {}
        for a in self.elements:
            for b in self.elements:
                if self.mul[(a, b)] == identity:
                    self.inv[a] = b
        assert len(self.inv) == len(self.elements), "not a group: missing inverses"

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def op(self, a, b):
        return self.mul[(a, b)]

    @classmethod
    def trivial(cls):
        return cls(("1",), {("1", "1"): "1"})

    @classmethod
    def cyclic(cls, n, gen="a"):
        names = ["1"] + [gen if k == 1 else f"{gen}{k}" for k in range(1, n)]
        mul = {(names[i], names[j]): names[(i + j) % n]
               for i in range(n) for j in range(n)}
        return cls(names, mul)


class FinGroupoid:
    """A finite groupoid: a finite category with an inverse map."""

    def __init__(self, category, inv):
        self.category = category
        self.inv = dict(inv)

    @property
    def objects(self):
        return self.category.objects

    def arrow_ids(self):
        return self.category.arrow_ids()

    def src(self, g):
        return self.category.src(g)

    def dst(self, g):
        return self.category.dst(g)

    def mul(self, g, h):
        return self.category.mul(g, h)

    def unit(self, x):
        return self.category.identity(x)

    def is_unit(self, g):
        return self.category.is_identity(g)

    def invert(self, g):
        return self.inv[g]

    def __len__(self):
        return len(self.category.arrows)

    @classmethod
    def from_group(cls, group):
        cat = FinCategory(("*",), {g: ("*", "*") for g in group.elements},
                          {(a, b): group.op(a, b) for a in group for b in group},
                          {"*": group.identity})
        return cls(cat, dict(group.inv))

    @classmethod
    def space(cls, points):
        cat = FinCategory(tuple(points), {("u", x): (x, x) for x in points},
                          {(("u", x), ("u", x)): ("u", x) for x in points},
                          {x: ("u", x) for x in points})
        return cls(cat, {("u", x): ("u", x) for x in points})

    @classmethod
    def transformation(cls, group, points, action):
        """The groupoid of a group action: arrows (g, v) from v to g.v."""
        points = tuple(points)
        arrows = {(g, v): (v, action[(g, v)]) for g in group for v in points}
        comp = {}
        for (g2, v2) in arrows:
            for (g1, v1) in arrows:
                if v2 == action[(g1, v1)]:
                    comp[((g2, v2), (g1, v1))] = (group.op(g2, g1), v1)
        ident = {v: (group.identity, v) for v in points}
        inv = {(g, v): (group.inv[g], action[(g, v)]) for (g, v) in arrows}
        gpd = cls(FinCategory(points, arrows, comp, ident), inv)
        gpd.group, gpd.points, gpd.action = group, points, dict(action)
        return gpd

    @classmethod
    def disjoint_union(cls, groupoids, tags=None):
        tags = tags or [str(i) for i in range(len(groupoids))]
        objects, arrows, comp, ident, inv = [], {}, {}, {}, {}
        for tag, g in zip(tags, groupoids):
            objects.extend((tag, x) for x in g.objects)
            for a, (s, d) in g.category.arrows.items():
                arrows[(tag, a)] = ((tag, s), (tag, d))
            for (a, b), c in g.category.compose.items():
                comp[((tag, a), (tag, b))] = (tag, c)
            for x, i in g.category.identities.items():
                ident[(tag, x)] = (tag, i)
            for a, b in g.inv.items():
                inv[(tag, a)] = (tag, b)
        return cls(FinCategory(objects, arrows, comp, ident), inv)


def validate_groupoid(gpd):
    report = validate_category(gpd.category)
    for g in gpd.arrow_ids():
        gi = gpd.inv.get(g)
        if gi is None:
            report.append(f"arrow {g!r} has no inverse")
            continue
        if gpd.inv.get(gi) != g:
            report.append(f"inverse of {g!r} is not an involution")
        if gpd.mul(g, gi) != gpd.unit(gpd.dst(g)):
            report.append(f"{g!r}.inv({g!r}) is not the unit at dst")
        if gpd.mul(gi, g) != gpd.unit(gpd.src(g)):
            report.append(f"inv({g!r}).{g!r} is not the unit at src")
    return report


class GroupoidAction:
    """An action of a finite groupoid on a finite set.

    For a left action the anchor is the range map r_Y: g.y is defined
    when src(g) == anchor(y) and lands at anchor dst(g).  For a right
    action the anchor is the source map s_Y: y.g is defined when
    anchor(y) == dst(g) and lands at anchor src(g).  ``act`` maps
    (arrow, point) -> point in both cases.
    """

    def __init__(self, groupoid, carrier, anchor, act, side="right"):
        assert side in ("left", "right")
        self.groupoid = groupoid
        self.carrier = tuple(carrier)
        self.anchor = dict(anchor)
        self.act = dict(act)
        self.side = side

    def defined(self, g, y):
        gp = self.groupoid
        if self.side == "left":
            return gp.src(g) == self.anchor[y]
        return self.anchor[y] == gp.dst(g)

    def apply(self, g, y):
        return self.act[(g, y)]

    def validate(self):
        gp = self.groupoid
        report = []
        for g in gp.arrow_ids():
            for y in self.carrier:
                has = (g, y) in self.act
                if has != self.defined(g, y):
                    report.append(f"domain of action wrong at ({g!r},{y!r})")
                if not has:
                    continue
                z = self.act[(g, y)]
                want = gp.dst(g) if self.side == "left" else gp.src(g)
                if self.anchor[z] != want:
                    report.append(f"anchor of {g!r}.{y!r} is not {want!r}")
        for x in gp.objects:
            u = gp.unit(x)
            for y in self.carrier:
                if (u, y) in self.act and self.act[(u, y)] != y:
                    report.append(f"unit at {x!r} moves {y!r}")
        for g in gp.arrow_ids():
            for h in gp.arrow_ids():
                gh = gp.mul(g, h) if gp.category.composable(g, h) else None
                if gh is None:
                    continue
                for y in self.carrier:
                    if self.side == "left":
                        if (h, y) not in self.act:
                            continue
                        lhs = self.act.get((g, self.act[(h, y)]))
                        rhs = self.act.get((gh, y))
                    else:
                        # y.(g.h) == (y.g).h
                        if (g, y) not in self.act:
                            continue
                        lhs = self.act.get((h, self.act[(g, y)]))
                        rhs = self.act.get((gh, y))
                    if lhs != rhs:
                        report.append(
                            f"associativity fails at ({g!r},{h!r},{y!r})")
        return report


def check_basic(action):
    """Whether (y, g) -> (y.g, y) is injective; discretely, freeness.

    Returns (flag, witness); the witness is a pair (y, g) with y.g == y
    for a non-unit g when the action is not basic.
    """
    assert action.side == "right"
    gp = action.groupoid
    for y in action.carrier:
        for g in gp.arrow_ids():
            if (g, y) in action.act and action.act[(g, y)] == y \
                    and not gp.is_unit(g):
                return False, (y, g)
    return True, None


def check_basic_bruteforce(action):
    """Independent oracle: literal injectivity of (y, g) -> (y.g, y)."""
    seen = {}
    for (g, y), z in sorted(action.act.items(), key=repr):
        key = (z, y)
        if key in seen and seen[key] != g:
            return False
        seen[key] = g
    return True


def orbit_space(action):
    """The partition of the carrier into orbits, with the class map."""
    parent = {y: y for y in action.carrier}

    def find(y):
        while parent[y] != y:
            parent[y] = parent[parent[y]]
            y = parent[y]
        return y

    for (g, y), z in action.act.items():
        ry, rz = find(y), find(z)
        if ry != rz:
            lo, hi = sorted((ry, rz), key=repr)
            parent[hi] = lo
    proj = {y: find(y) for y in action.carrier}
    orbits = {}
    for y, rep in proj.items():
        orbits.setdefault(rep, []).append(y)
    return [tuple(sorted(orbits[rep], key=repr))
            for rep in sorted(orbits, key=repr)], proj


class PartialBijection:
    """An injective partial map of a finite set."""

    def __init__(self, mapping):
        mapping = dict(mapping)
        assert len(set(mapping.values())) == len(mapping), "not injective"
        self.mapping = mapping
        self._key = frozenset(mapping.items())

    @classmethod
    def identity(cls, points):
        return cls({y: y for y in points})

    @classmethod
    def empty(cls):
        return cls({})

    @property
    def domain(self):
        return frozenset(self.mapping)

    @property
    def image(self):
        return frozenset(self.mapping.values())

    def __call__(self, y):
        return self.mapping.get(y)

    def __mul__(self, other):
        return PartialBijection({y: self.mapping[z]
                                 for y, z in other.mapping.items()
                                 if z in self.mapping})

    def star(self):
        return PartialBijection({z: y for y, z in self.mapping.items()})

    def restrict(self, dom):
        return PartialBijection({y: z for y, z in self.mapping.items()
                                 if y in dom})

    def is_partial_identity(self):
        return all(y == z for y, z in self.mapping.items())

    def __eq__(self, other):
        return isinstance(other, PartialBijection) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        items = sorted(self.mapping.items(), key=repr)
        return "pbij{" + ", ".join(f"{y!r}->{z!r}" for y, z in items) + "}"


def pseudogroup_closure(gens):
    """Close a set of partial bijections under composition and inverse.

    The empty map is always included; restrictions to the subdomains
    generated by the occurring domains arise as composites with the
    idempotents f*f.
    """
    if isinstance(gens, dict):
        gens = list(gens.values())
    closure = {PartialBijection.empty()}
    closure.update(gens)
    closure.update(f.star() for f in list(closure))
    frontier = set(closure)
    while frontier:
        new = set()
        for f in frontier:
            for g in closure:
                for h in (f * g, g * f):
                    if h not in closure:
                        new.add(h)
        for f in new:
            fi = f.star()
            if fi not in closure and fi not in new:
                new.add(fi)
        closure.update(new)
        frontier = new
    return closure


class GermGroupoid:
    """Germs of a pseudogroup on a finite set.

    Discretely a germ is determined by its source and value, so the
    arrows form an equivalence relation on the carrier and the groupoid
    is effective by construction.  Arrow identity is the canonical
    (src, dst, minimal label) triple.
    """

    def __init__(self, gens, carrier):
        if not isinstance(gens, dict):
            gens = {f"g{i}": f for i, f in enumerate(gens)}
        self.carrier = tuple(carrier)
        self.closure = pseudogroup_closure(gens)
        self.labels = {}
        for label, f in sorted(gens.items()):
            for y, z in f.mapping.items():
                self.labels.setdefault((y, z), label)
        germs = {(y, y) for y in carrier}
        for f in self.closure:
            germs.update(f.mapping.items())
        self.germs = sorted(germs, key=repr)

    def arrow(self, y, z):
        assert (y, z) in set(self.germs)
        return (y, z, self.labels.get((y, z), "id" if y == z else "w"))

    def arrows(self):
        return [self.arrow(y, z) for (y, z) in self.germs]

    def is_unit(self, arrow):
        return arrow[0] == arrow[1]

    def to_fingroupoid(self):
        arrows = {self.arrow(y, z): (y, z) for (y, z) in self.germs}
        comp = {}
        for (y2, z2) in self.germs:
            for (y1, z1) in self.germs:
                if y2 == z1:
                    comp[(self.arrow(y2, z2), self.arrow(y1, z1))] = \
                        self.arrow(y1, z2)
        ident = {y: self.arrow(y, y) for y in self.carrier}
        inv = {self.arrow(y, z): self.arrow(z, y) for (y, z) in self.germs}
        return FinGroupoid(
            FinCategory(self.carrier, arrows, comp, ident), inv)


def germ_groupoid(gens, carrier):
    return GermGroupoid(gens, carrier)


def pointwise_oracle(apply):
    """The germ oracle of a concrete pseudogroup: equality of values."""

    def oracle(t, u, x):
        return apply(t, x) is not None and apply(t, x) == apply(u, x)

    return oracle


class TransformationGroupoid:
    """Arrows [t, x] for an inverse-semigroup-like calculus acting on a set.

    ``elements`` is a finite list of formal elements, ``mul`` their
    product, ``apply(t, x)`` the partial action, and ``oracle(t, u, x)``
    decides whether there is an idempotent e defined at x with te == ue.
    The oracle may return None to decline, which raises
    OracleIncomplete.  ``unit_of(x)`` names an idempotent defined at x.
    """

    def __init__(self, elements, mul, apply, oracle, carrier, unit_of):
        self.elements = list(elements)
        self._index = {t: i for i, t in enumerate(self.elements)}
        self.mul = mul
        self.apply = apply
        self.oracle = oracle
        self.carrier = tuple(carrier)
        self.unit_of = unit_of

    def _ask(self, t, u, x):
        ans = self.oracle(t, u, x)
        if ans is None:
            raise OracleIncomplete(f"germ query ({t!r},{u!r},{x!r}) declined")
        return ans

    def arrow(self, t, x):
        """Canonical class representative of (t, x)."""
        assert self.apply(t, x) is not None, "t not defined at x"
        best = min((u for u in self.elements
                    if self.apply(u, x) is not None and self._ask(t, u, x)),
                   key=lambda u: self._index[u])
        return (best, x)

    def arrows(self):
        out = []
        for t in self.elements:
            for x in self.carrier:
                if self.apply(t, x) is not None:
                    a = self.arrow(t, x)
                    if a not in out:
                        out.append(a)
        return out

    def r(self, arrow):
        return self.apply(*arrow)

    def s(self, arrow):
        return arrow[1]

    def compose(self, a2, a1):
        (u, y), (t, x) = a2, a1
        assert y == self.apply(t, x), "arrows not composable"
        ut = self.mul(u, t)
        if ut not in self._index:
            raise OracleIncomplete(f"product {u!r}.{t!r} left the universe")
        return self.arrow(ut, x)

    def is_unit(self, arrow):
        t, x = arrow
        return self._ask(t, self.unit_of(x), x)


def transformation_groupoid(elements, mul, apply, oracle, carrier, unit_of):
    return TransformationGroupoid(elements, mul, apply, oracle, carrier,
                                  unit_of)


def _concrete_oracle(semigroup, theta):
    idempotents = [e for e in semigroup if theta[e].is_partial_identity()]

    def oracle(t, u, x):
        for e in idempotents:
            if theta[e](x) is not None and theta[t] * theta[e] == theta[u] * theta[e]:
                return True
        return False

    return oracle


def isg_action_vs_groupoid_action(semigroup, theta_x, carrier_x,
                                  theta_y=None, f=None, carrier_y=None,
                                  action=None):
    """Pass between S-actions with an equivariant map and (S x X)-actions.

    ``semigroup`` is a finite list of formal elements closed under
    products and stars in the sense that ``theta_x`` (a dict element ->
    PartialBijection on X) is a faithful copy.  Given (theta_y, f) the
    induced action of the transformation groupoid on Y is returned;
    given an ``action`` of that groupoid the pair (theta_y, f) is
    recovered.  Round trips are the identity.
    """
    oracle = _concrete_oracle(semigroup, theta_x)

    def unit_of(x):
        for e in semigroup:
            if theta_x[e].is_partial_identity() and theta_x[e](x) is not None:
                return e
        raise OracleIncomplete(f"no idempotent defined at {x!r}")

    gpd = transformation_groupoid(
        list(semigroup), lambda a, b: _mul_in(semigroup, theta_x, a, b),
        lambda t, x: theta_x[t](x), oracle, carrier_x, unit_of)
    if action is None:
        for t in semigroup:
            for y in carrier_y:
                dy = theta_y[t](y) is not None
                dx = theta_x[t](f[y]) is not None
                if dy != dx:
                    raise NotEquivariant((t, y))
                if dy and f[theta_y[t](y)] != theta_x[t](f[y]):
                    raise NotEquivariant((t, y))
        act = {}
        for t in semigroup:
            for y in carrier_y:
                if theta_y[t](y) is None:
                    continue
                act[(gpd.arrow(t, f[y]), y)] = theta_y[t](y)
        return gpd, act
    theta_y = {t: PartialBijection(
        {y: action[(gpd.arrow(t, f[y]), y)]
         for y in carrier_y if theta_x[t](f[y]) is not None})
        for t in semigroup}
    return theta_y, dict(f)


def _mul_in(semigroup, theta, a, b):
    prod = theta[a] * theta[b]
    for c in semigroup:
        if theta[c] == prod:
            return c
    raise OracleIncomplete(f"product of {a!r} and {b!r} not in the semigroup")
