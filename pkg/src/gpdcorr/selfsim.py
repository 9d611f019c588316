"""Self-similar groups and self-similar graphs.

The data is a finite group acting on the vertices and edges of a finite
graph together with a restriction cocycle g|_e; a self-similar group is
the one-vertex case, where edges are the letters of an alphabet.  The
inverse semigroup of normal forms (w1, g, w2) acts on finite and on
eventually periodic infinite paths by cut-act-paste.  All germ
decisions on eventually periodic points are exact: the walk along the
periodic tail is pruned by pigeonhole on the pair of residual group
elements.

Paths are pairs Path(rv, edges); the range vertex is stored explicitly
so that empty paths at different vertices stay distinct.
"""

from collections import namedtuple

from .corr import Correspondence
from .errors import DepthInsufficient, Undefined
from .groupoid import FinGroupoid

Path = namedtuple("Path", ["rv", "edges"])
EvPeriodicWord = namedtuple("EvPeriodicWord", ["rv", "pre", "per"])
EffectiveResult = namedtuple("EffectiveResult", ["effective", "witness"])


class SelfSimilarData:

    def __init__(self, group, vertices, edges, er, es, vact, eact, cocycle):
        self.group = group
        self.vertices = tuple(vertices)
        self.edges = tuple(edges)
        self.er = dict(er)
        self.es = dict(es)
        self.vact = dict(vact)
        self.eact = dict(eact)
        self.cocycle = dict(cocycle)

    @classmethod
    def group_alphabet(cls, group, letters, eact, cocycle):
        """The one-vertex case: a self-similar group on an alphabet."""
        letters = tuple(letters)
        return cls(group, ("*",), letters,
                   {a: "*" for a in letters}, {a: "*" for a in letters},
                   {(g, "*"): "*" for g in group}, eact, cocycle)

    @classmethod
    def graph(cls, group, vertices, edges, er, es, vact, eact, cocycle):
        return cls(group, vertices, edges, er, es, vact, eact, cocycle)

    def validate(self):
        report = []
        G = self.group
        for v in self.vertices:
            if self.vact[(G.identity, v)] != v:
                report.append(f"identity moves vertex {v!r}")
        for e in self.edges:
            if self.eact[(G.identity, e)] != e:
                report.append(f"identity moves edge {e!r}")
            if self.cocycle[(G.identity, e)] != G.identity:
                report.append(f"1|_{e!r} != 1")
        for g in G:
            for h in G:
                gh = G.op(g, h)
                for v in self.vertices:
                    if self.vact[(gh, v)] != self.vact[(g, self.vact[(h, v)])]:
                        report.append(f"vertex action fails at ({g!r},{h!r},{v!r})")
                for e in self.edges:
                    if self.eact[(gh, e)] != self.eact[(g, self.eact[(h, e)])]:
                        report.append(f"edge action fails at ({g!r},{h!r},{e!r})")
                    want = G.op(self.cocycle[(g, self.eact[(h, e)])],
                                self.cocycle[(h, e)])
                    if self.cocycle[(gh, e)] != want:
                        report.append(f"cocycle fails at ({g!r},{h!r},{e!r})")
        for g in G:
            for e in self.edges:
                ge = self.eact[(g, e)]
                if self.es[ge] != self.vact[(self.cocycle[(g, e)], self.es[e])]:
                    report.append(f"s(g.e) != (g|_e).s(e) at ({g!r},{e!r})")
                if self.er[ge] != self.vact[(g, self.er[e])]:
                    report.append(f"r(g.e) != g.r(e) at ({g!r},{e!r})")
        return report

    # -- paths ---------------------------------------------------------------

    def path(self, edges, rv=None):
        edges = tuple(edges)
        if edges:
            rv = self.er[edges[0]]
            for a, b in zip(edges, edges[1:]):
                assert self.es[a] == self.er[b], f"path breaks at {a!r},{b!r}"
        else:
            if rv is None and len(self.vertices) == 1:
                rv = self.vertices[0]
            assert rv in self.vertices, "empty path needs a vertex"
        return Path(rv, edges)

    def ps(self, p):
        return self.es[p.edges[-1]] if p.edges else p.rv

    def pr(self, p):
        return p.rv

    def paths(self, n):
        """All paths of length exactly n, deterministically ordered."""
        out = [self.path((), v) for v in sorted(self.vertices, key=repr)]
        for _ in range(n):
            out = [self.path(p.edges + (e,), p.rv)
                   for p in out for e in sorted(self.edges, key=repr)
                   if self.ps(p) == self.er[e]]
        return out

    def act_path(self, g, p):
        """g . (e1...en) and the residual restriction g|_(e1...en)."""
        h, out = g, []
        for e in p.edges:
            out.append(self.eact[(h, e)])
            h = self.cocycle[(h, e)]
        return self.path(tuple(out), self.vact[(g, p.rv)]), h

    # -- eventually periodic points ------------------------------------------

    def ev(self, pre, per, rv=None):
        """Canonical eventually periodic point pre . per^infinity."""
        pre, per = tuple(pre), tuple(per)
        assert per, "period must be nonempty"
        word = self.path(pre + per + per, rv)   # composability check
        assert self.es[per[-1]] == self.er[per[0]], "period does not loop"
        k = next(k for k in range(1, len(per) + 1)
                 if len(per) % k == 0 and per == per[:k] * (len(per) // k))
        per = per[:k]
        while pre and pre[-1] == per[-1]:
            pre, per = pre[:-1], (per[-1],) + per[:-1]
        rv = self.er[pre[0]] if pre else self.er[per[0]]
        return EvPeriodicWord(rv, pre, per)

    def ev_letter(self, z, i):
        if i < len(z.pre):
            return z.pre[i]
        return z.per[(i - len(z.pre)) % len(z.per)]

    def ev_phase(self, z, i):
        """Canonical index used for pigeonhole walks along z."""
        if i < len(z.pre):
            return i
        return len(z.pre) + (i - len(z.pre)) % len(z.per)

    def ev_drop(self, z, k):
        if k <= len(z.pre):
            return self.ev(z.pre[k:], z.per)
        j = (k - len(z.pre)) % len(z.per)
        return self.ev((), z.per[j:] + z.per[:j])

    def ev_starts_with(self, z, p):
        if self.pr(p) != z.rv:
            return False
        return all(self.ev_letter(z, i) == e for i, e in enumerate(p.edges))

    def group_act_ev(self, g, z):
        """g . z for an eventually periodic z; again eventually periodic."""
        out_pre, h = self.act_path(g, Path(z.rv, z.pre))
        blocks, seen = [], {}
        while h not in seen:
            seen[h] = len(blocks)
            block, h = self.act_path(h, self.path(z.per))
            blocks.append(block.edges)
        j = seen[h]
        pre = out_pre.edges + sum(blocks[:j], ())
        per = sum(blocks[j:], ())
        return self.ev(pre, per, self.vact[(g, z.rv)])


class NormalForm:
    """A canonical element (w1, g, w2) of the normal-form semigroup.

    It acts on paths by cutting away the leading path w2, acting by g,
    and pasting w1 in front; the compatibility g.s(w2) == s(w1) makes
    the pasting composable.  There is a single zero element.
    """

    def __init__(self, data, w1=None, g=None, w2=None, zero=False):
        self.data = data
        self.zero = zero
        if zero:
            self.w1 = self.g = self.w2 = None
        else:
            self.w1, self.g, self.w2 = w1, g, w2
            assert data.ps(w1) == data.vact[(g, data.ps(w2))], \
                "incompatible normal form"

    def key(self):
        return ("0",) if self.zero else (self.w1, self.g, self.w2)

    def __eq__(self, other):
        return isinstance(other, NormalForm) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        if self.zero:
            return "nf<0>"
        w1 = "".join(map(str, self.w1.edges)) or "e"
        w2 = "".join(map(str, self.w2.edges)) or "e"
        return f"nf<{w1},{self.g},{w2}>"

    def __mul__(self, other):
        return nf_mul(self, other)

    def star(self):
        return nf_star(self)


def nf(data, w1_edges, g, w2_edges, rv1=None, rv2=None):
    return NormalForm(data, data.path(w1_edges, rv1), g,
                      data.path(w2_edges, rv2))


def nf_zero(data):
    return NormalForm(data, zero=True)


def nf_unit(data, v=None):
    v = v if v is not None else data.vertices[0]
    p = data.path((), v)
    return NormalForm(data, p, data.group.identity, p)


def _split(data, long, short):
    """The path x with long == short . x, or None."""
    if long.edges[:len(short.edges)] != short.edges or \
            data.pr(long) != data.pr(short):
        return None
    rest = long.edges[len(short.edges):]
    return data.path(rest, data.ps(short))


def nf_mul(t1, t2):
    """The three-case product of normal forms."""
    data = t1.data
    assert data is t2.data, "operands over different data"
    if t1.zero or t2.zero:
        return nf_zero(data)
    G = data.group
    x = _split(data, t2.w1, t1.w2)
    if x is not None:
        gx, res = data.act_path(t1.g, x)
        w1 = data.path(t1.w1.edges + gx.edges, data.pr(t1.w1))
        return NormalForm(data, w1, G.op(res, t2.g), t2.w2)
    x = _split(data, t1.w2, t2.w1)
    if x is not None:
        g2inv = G.inv[t2.g]
        g2x, res = data.act_path(g2inv, x)
        w2 = data.path(t2.w2.edges + g2x.edges, data.pr(t2.w2))
        return NormalForm(data, t1.w1, G.op(t1.g, G.inv[res]), w2)
    return nf_zero(data)


def nf_star(t):
    if t.zero:
        return t
    return NormalForm(t.data, t.w2, t.data.group.inv[t.g], t.w1)


def nf_restrict(t, x):
    """Restrict the slice of t along a path x in its source domain."""
    data = t.data
    assert data.ps(t.w2) == data.pr(x)
    gx, res = data.act_path(t.g, x)
    w1 = data.path(t.w1.edges + gx.edges, data.pr(t.w1))
    w2 = data.path(t.w2.edges + x.edges, data.pr(t.w2))
    return NormalForm(data, w1, res, w2)


def act_on_word(t, z):
    """Apply a normal form to a finite path or eventually periodic point."""
    data = t.data
    if t.zero:
        raise Undefined("the zero element has empty domain")
    if isinstance(z, Path):
        x = _split(data, z, t.w2)
        if x is None:
            raise Undefined(f"{z!r} does not start with {t.w2!r}")
        gx, _ = data.act_path(t.g, x)
        return data.path(t.w1.edges + gx.edges, data.pr(t.w1))
    if not data.ev_starts_with(z, t.w2):
        raise Undefined(f"{z!r} does not start with {t.w2!r}")
    tail = data.ev_drop(z, len(t.w2.edges))
    moved = data.group_act_ev(t.g, tail)
    return data.ev(t.w1.edges + moved.pre, moved.per, data.pr(t.w1))


def germ_equal(t1, t2, z):
    """Whether t1 and t2 have the same germ at the point z.

    Decides the existence of a prefix x of z past the source words with
    w1.(g.x) == w1'.(g'.x'), g|_x == g'|_{x'} and w2.x == w2'.x'.  The
    walk along z is exact: a mismatch in the output words is permanent,
    and a repeated pair of residuals at the same phase of z never
    equalises later.
    """
    data = t1.data
    if t1.zero or t2.zero:
        return t1.zero == t2.zero
    assert data.ev_starts_with(z, t1.w2) and data.ev_starts_with(z, t2.w2), \
        "z outside a domain"
    if len(t1.w1.edges) - len(t1.w2.edges) != \
            len(t2.w1.edges) - len(t2.w2.edges):
        return False
    p0 = max(len(t1.w2.edges), len(t2.w2.edges))

    def aligned(t):
        x = data.path(tuple(data.ev_letter(z, i)
                            for i in range(len(t.w2.edges), p0)),
                      data.ps(t.w2))
        return nf_restrict(t, x)

    a, b = aligned(t1), aligned(t2)
    if data.pr(a.w1) != data.pr(b.w1):
        return False
    out_a, out_b = list(a.w1.edges), list(b.w1.edges)
    if out_a != out_b:
        return False
    ra, rb = a.g, b.g
    p, seen = p0, set()
    while True:
        if ra == rb:
            return True
        state = (ra, rb, data.ev_phase(z, p))
        if state in seen:
            return False
        seen.add(state)
        e = data.ev_letter(z, p)
        if data.eact[(ra, e)] != data.eact[(rb, e)]:
            return False
        ra, rb = data.cocycle[(ra, e)], data.cocycle[(rb, e)]
        p += 1


def effective_check(data):
    """Effectiveness of the germ data on the infinite path space.

    The kernel of the action is computed as a greatest fixed point;
    each kernel element is then tested for eventual triviality of all
    its restrictions by reachability in the restriction automaton.
    """
    G = data.group
    kernel = {g for g in G
              if all(data.vact[(g, v)] == v for v in data.vertices)
              and all(data.eact[(g, e)] == e for e in data.edges)}
    while True:
        smaller = {g for g in kernel
                   if all(data.cocycle[(g, e)] in kernel for e in data.edges)}
        if smaller == kernel:
            break
        kernel = smaller
    for g in sorted(kernel, key=G.elements.index):
        if g == G.identity:
            continue
        reach, seen = {g}, []
        while reach not in seen:
            if reach == {G.identity}:
                break
            seen.append(reach)
            reach = {data.cocycle[(h, e)] for h in reach for e in data.edges}
        else:
            return EffectiveResult(False, g)
    return EffectiveResult(True, None)


def slice_intersections(t1, t2, depth=None):
    """Decompose the intersection of two normal-form slices.

    Returns a list of normal forms sigma with disjoint domains whose
    slices union to the intersection.  With depth=None the recursion is
    pruned exactly by pigeonhole on residual pairs; a smaller depth
    raises DepthInsufficient when it is reached before resolution.
    """
    data = t1.data
    if t1.zero or t2.zero:
        return []
    x = _split(data, t2.w2, t1.w2)
    if x is not None:
        t1 = nf_restrict(t1, x)
    else:
        x = _split(data, t1.w2, t2.w2)
        if x is None:
            return []
        t2 = nf_restrict(t2, x)
    if len(t1.w1.edges) != len(t2.w1.edges):
        return []

    out = []

    def descend(a, b, visited, d):
        if a.w1 != b.w1:
            return
        if a.g == b.g:
            out.append(a)
            return
        state = (a.g, b.g, data.ps(a.w2))
        if state in visited:
            return
        if depth is not None and d >= depth:
            raise DepthInsufficient(
                f"intersection of {t1!r} and {t2!r} needs depth > {depth}")
        for e in sorted(data.edges, key=repr):
            if data.er[e] != data.ps(a.w2):
                continue
            descend(nf_restrict(a, data.path((e,))),
                    nf_restrict(b, data.path((e,))),
                    visited | {state}, d + 1)

    descend(t1, t2, frozenset(), 0)
    return out


def iterate(data, n):
    """The n-fold composite correspondence, with carrier P^n(E) x G."""
    G = data.group
    base = FinGroupoid.transformation(G, data.vertices, data.vact)
    carrier = [(p, g) for p in data.paths(n) for g in G]
    rmap = {(p, g): data.pr(p) for (p, g) in carrier}
    smap = {(p, g): data.vact[(G.inv[g], data.ps(p))] for (p, g) in carrier}
    lact = {}
    for (h, v) in base.arrow_ids():
        for (p, g) in carrier:
            if v != data.pr(p):
                continue
            hp, res = data.act_path(h, p)
            lact[((h, v), (p, g))] = (hp, G.op(res, g))
    ract = {}
    for (h, v) in base.arrow_ids():
        for (p, g) in carrier:
            if smap[(p, g)] != data.vact[(h, v)]:
                continue
            ract[((p, g), (h, v))] = (p, G.op(g, h))
    return Correspondence(base, base, carrier, rmap, smap, lact, ract)
