import pytest

from gpdcorr.corr import (
    Correspondence, associator, braket, classify, compose,
    disjoint_union_lift, from_group_hom, identity_correspondence,
    inner_product, is_slice, morita_check, slice_mult, slice_mult_right,
    space_correspondence, validate_correspondence)
from gpdcorr.errors import NotCoOrbital
from gpdcorr.groupoid import FinGroupoid, Group


def e1_correspondence():
    """The letter-flip self-similarity: A = {0,1}, G = Z/2, a|_x = a."""
    z2 = Group.cyclic(2)
    gpd = FinGroupoid.from_group(z2)
    carrier = [("0", "1"), ("0", "a"), ("1", "1"), ("1", "a")]
    flip = {"0": "1", "1": "0"}
    lact = {}
    for x in carrier:
        letter, h = x
        lact[("1", x)] = x
        lact[("a", x)] = (flip[letter], z2.op("a", h))
    ract = {(x, g): (x[0], z2.op(x[1], g)) for x in carrier for g in z2}
    return Correspondence(gpd, gpd, carrier,
                          {x: "*" for x in carrier}, {x: "*" for x in carrier},
                          lact, ract)


def test_identity_correspondence_valid():
    for gpd in [FinGroupoid.from_group(Group.cyclic(3)),
                FinGroupoid.space(("p", "q"))]:
        assert validate_correspondence(identity_correspondence(gpd)) == []


def test_e1_correspondence_valid():
    assert validate_correspondence(e1_correspondence()) == []


def test_fixed_point_reported_as_basicness_violation():
    z2 = Group.cyclic(2)
    gpd = FinGroupoid.from_group(z2)
    c = Correspondence(gpd, gpd, ("x",), {"x": "*"}, {"x": "*"},
                       {(g, "x"): "x" for g in z2},
                       {("x", g): "x" for g in z2})
    report = validate_correspondence(c)
    assert any("not basic" in line for line in report)


def test_inner_product_of_point_with_itself_is_unit():
    c = e1_correspondence()
    for x in c.carrier:
        assert inner_product(c, x, x) == "1"


def test_inner_product_e1():
    c = e1_correspondence()
    assert inner_product(c, ("0", "1"), ("0", "a")) == "a"


def test_inner_product_distinct_orbits():
    c = e1_correspondence()
    with pytest.raises(NotCoOrbital):
        inner_product(c, ("0", "1"), ("1", "1"))


def test_inner_product_four_clauses():
    # r<x1|x2> == s(x1), s<x1|x2> == s(x2), x2 == x1.<x1|x2>;
    # <x|x> == s(x); <x1|x2> == <x2|x1>^-1; <h x1 g1|h x2 g2> == g1^-1<x1|x2>g2
    for c in [e1_correspondence(),
              identity_correspondence(FinGroupoid.from_group(Group.cyclic(3)))]:
        gp = c.right
        for x1 in c.carrier:
            for x2 in c.carrier:
                if c.p(x1) != c.p(x2):
                    continue
                g = inner_product(c, x1, x2)
                assert gp.dst(g) == c.smap[x1] and gp.src(g) == c.smap[x2]
                assert c.ract[(x1, g)] == x2
                assert inner_product(c, x2, x1) == gp.invert(g)
                for h in c.left.arrow_ids():
                    if (h, x1) not in c.lact or (h, x2) not in c.lact:
                        continue
                    for g1 in gp.arrow_ids():
                        for g2 in gp.arrow_ids():
                            y1 = c.ract.get((c.lact[(h, x1)], g1))
                            y2 = c.ract.get((c.lact[(h, x2)], g2))
                            if y1 is None or y2 is None:
                                continue
                            lhs = inner_product(c, y1, y2)
                            rhs = gp.mul(gp.mul(gp.invert(g1), g), g2)
                            assert lhs == rhs


def test_compose_with_identity_is_unitor():
    c = e1_correspondence()
    ci = compose(c, identity_correspondence(c.right))
    # [x, g] -> x.g is a bijection intertwining all structure maps
    iso = {i: c.ract[ci.pairs[i]] for i in ci.carrier}
    assert sorted(iso.values(), key=repr) == sorted(c.carrier, key=repr)
    for i in ci.carrier:
        assert ci.rmap[i] == c.rmap[iso[i]]
        assert ci.smap[i] == c.smap[iso[i]]
    for (h, i), j in ci.lact.items():
        assert c.lact[(h, iso[i])] == iso[j]
    for (i, g), j in ci.ract.items():
        assert c.ract[(iso[i], g)] == iso[j]


def test_compose_e1_square_has_carrier_size_8():
    c = e1_correspondence()
    cc = compose(c, c)
    assert len(cc) == 8
    assert validate_correspondence(cc) == []


def test_tight_space_correspondences_compose_contravariantly():
    # X_f: V1 <- V2 has carrier V1 with s == f; composition reverses order
    f = {"x": "p", "y": "q"}     # V1 -> V2
    g = {"p": "m", "q": "m"}     # V2 -> V3
    xf = space_correspondence(("x", "y"), ("p", "q"), {"x": "x", "y": "y"}, f,
                              carrier=("x", "y"))
    xg = space_correspondence(("p", "q"), ("m",), {"p": "p", "q": "q"}, g,
                              carrier=("p", "q"))
    comp = compose(xf, xg)
    assert classify(comp)["tight"]
    for i in comp.carrier:
        x, _ = comp.pairs[i]
        assert comp.rmap[i] == x
        assert comp.smap[i] == g[f[x]]


def test_classify():
    gpd = FinGroupoid.from_group(Group.cyclic(2))
    assert classify(identity_correspondence(gpd)) == {
        "proper": True, "regular": True, "tight": True}
    assert classify(e1_correspondence()) == {
        "proper": True, "regular": True, "tight": False}
    empty = Correspondence(gpd, gpd, (), {}, {}, {}, {})
    assert classify(empty) == {"proper": True, "regular": False, "tight": False}


def test_classify_tight_composed_tight_is_tight():
    z2, z4 = Group.cyclic(2), Group.cyclic(4)
    phi = {"1": "1", "a": "a2"}
    c1 = from_group_hom(z2, z4, phi)
    c2 = from_group_hom(z4, z2, {"1": "1", "a": "a", "a2": "1", "a3": "a"})
    assert classify(c1)["tight"] and classify(c2)["tight"]
    assert classify(compose(c1, c2))["tight"]


def test_braket_of_slice_with_itself_is_source_units():
    # over a one-object groupoid nonempty slices are singletons
    c = e1_correspondence()
    u = [("0", "1")]
    assert is_slice(c, u)
    assert not is_slice(c, [("0", "1"), ("1", "a")])
    assert braket(c, u, u) == frozenset({"1"})
    # a multi-point slice over a space groupoid
    sp = identity_correspondence(FinGroupoid.space(("p", "q")))
    u2 = list(sp.carrier)
    assert is_slice(sp, u2)
    assert braket(sp, u2, u2) == frozenset(sp.carrier)


def test_braket_of_singletons():
    c = e1_correspondence()
    assert braket(c, [("0", "1")], [("0", "a")]) == frozenset({"a"})


def test_slice_times_empty_is_empty():
    c = e1_correspondence()
    assert slice_mult_right(c, [("0", "1")], frozenset()) == frozenset()
    _, uv = slice_mult(c, [("0", "1")], c, [])
    assert uv == frozenset()


def test_slice_mult_in_composite_is_a_slice():
    c = e1_correspondence()
    c12, uv = slice_mult(c, [("0", "1")], c, [("1", "1")])
    assert len(uv) == 1 and is_slice(c12, uv)


def test_morita_identity_true_e1_false():
    gpd = FinGroupoid.from_group(Group.cyclic(2))
    assert morita_check(identity_correspondence(gpd))
    assert not morita_check(e1_correspondence())
    iso = from_group_hom(Group.cyclic(2), Group.cyclic(2), {"1": "1", "a": "a"})
    assert morita_check(iso)


def test_associator_coherence():
    c = e1_correspondence()
    left, right, iso = associator(c, c, c)
    assert sorted(iso) == list(left.carrier)
    assert sorted(iso.values()) == list(right.carrier)
    for i, j in iso.items():
        assert left.rmap[i] == right.rmap[j]
        assert left.smap[i] == right.smap[j]
    for (h, i), k in left.lact.items():
        assert right.lact[(h, iso[i])] == iso[k]
    for (i, g), k in left.ract.items():
        assert right.ract[(iso[i], g)] == iso[k]


def test_disjoint_union_lift_valid():
    lifted = disjoint_union_lift(e1_correspondence())
    assert validate_correspondence(lifted) == []
    assert len(lifted.left.objects) == 2


def test_e1_orbit_count_is_alphabet_size():
    c = e1_correspondence()
    assert len(c.orbits()) == 2
