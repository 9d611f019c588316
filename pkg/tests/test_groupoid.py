import pytest

from gpdcorr.errors import NotEquivariant
from gpdcorr.groupoid import (
    FinGroupoid, Group, GroupoidAction, PartialBijection, check_basic,
    check_basic_bruteforce, germ_groupoid, isg_action_vs_groupoid_action,
    orbit_space, pointwise_oracle, pseudogroup_closure,
    transformation_groupoid, validate_groupoid)


def right_mult_action(group):
    gpd = FinGroupoid.from_group(group)
    act = {(g, y): group.op(y, g) for g in group for y in group}
    return GroupoidAction(gpd, group.elements, {y: "*" for y in group}, act)


def test_groupoid_constructors_valid():
    assert validate_groupoid(FinGroupoid.from_group(Group.cyclic(3))) == []
    assert validate_groupoid(FinGroupoid.space(("p", "q"))) == []
    z2 = Group.cyclic(2)
    act = {("1", "p"): "p", ("1", "q"): "q", ("a", "p"): "q", ("a", "q"): "p"}
    assert validate_groupoid(FinGroupoid.transformation(z2, ("p", "q"), act)) == []
    assert validate_groupoid(FinGroupoid.disjoint_union(
        [FinGroupoid.from_group(Group.cyclic(2)),
         FinGroupoid.from_group(Group.cyclic(3))])) == []


def test_right_multiplication_is_basic():
    action = right_mult_action(Group.cyclic(2))
    assert action.validate() == []
    ok, witness = check_basic(action)
    assert ok and witness is None


def test_trivial_action_not_basic_with_witness():
    z2 = Group.cyclic(2)
    gpd = FinGroupoid.from_group(z2)
    action = GroupoidAction(gpd, ("pt",), {"pt": "*"},
                            {(g, "pt"): "pt" for g in z2})
    ok, witness = check_basic(action)
    assert not ok
    assert witness == ("pt", "a")


def test_check_basic_agrees_with_bruteforce():
    z2 = Group.cyclic(2)
    gpd = FinGroupoid.from_group(z2)
    actions = [right_mult_action(z2),
               GroupoidAction(gpd, ("pt",), {"pt": "*"},
                              {(g, "pt"): "pt" for g in z2}),
               GroupoidAction(gpd, (0, 1, 2, 3), {y: "*" for y in range(4)},
                              {(g, y): (y + 2) % 4 if g == "a" else y
                               for g in z2 for y in range(4)})]
    for action in actions:
        assert check_basic(action)[0] == check_basic_bruteforce(action)


def test_orbit_space_free_action_on_four_points():
    z2 = Group.cyclic(2)
    gpd = FinGroupoid.from_group(z2)
    act = {(g, y): (y + 2) % 4 if g == "a" else y
           for g in z2 for y in range(4)}
    action = GroupoidAction(gpd, (0, 1, 2, 3), {y: "*" for y in range(4)}, act)
    orbits, proj = orbit_space(action)
    assert len(orbits) == 2
    assert proj[0] == proj[2] and proj[1] == proj[3]


def test_orbit_space_trivial_action_is_singletons():
    z2 = Group.cyclic(2)
    gpd = FinGroupoid.from_group(z2)
    act = {(g, y): y for g in z2 for y in range(3)}
    action = GroupoidAction(gpd, (0, 1, 2), {y: "*" for y in range(3)}, act)
    orbits, _ = orbit_space(action)
    assert orbits == [(0,), (1,), (2,)]


def test_pseudogroup_closure_of_involution():
    sigma = PartialBijection({1: 2, 2: 1})
    closure = pseudogroup_closure([sigma])
    assert closure == {PartialBijection.empty(), sigma,
                       PartialBijection.identity((1, 2))}


def test_pseudogroup_closure_empty_generators():
    assert pseudogroup_closure([]) == {PartialBijection.empty()}


def test_pseudogroup_closure_idempotent():
    gens = [PartialBijection({1: 2}), PartialBijection({2: 3, 3: 1})]
    once = pseudogroup_closure(gens)
    assert pseudogroup_closure(once) == once


def test_germ_groupoid_of_involution():
    sigma = PartialBijection({1: 2, 2: 1})
    gg = germ_groupoid({"s": sigma}, (1, 2))
    assert len(gg.carrier) == 2
    assert len(gg.arrows()) == 4
    assert validate_groupoid(gg.to_fingroupoid()) == []


def test_identity_generator_gives_unit_groupoid():
    gg = germ_groupoid({"e": PartialBijection.identity((1, 2, 3))}, (1, 2, 3))
    assert all(gg.is_unit(a) for a in gg.arrows())


def test_equal_graphs_have_equal_germs():
    f = PartialBijection({1: 2})
    g = PartialBijection({1: 2})
    gg = germ_groupoid({"f": f, "g": g}, (1, 2))
    assert gg.arrow(1, 2) == (1, 2, "f")


def test_transformation_groupoid_with_pointwise_oracle_is_germ_groupoid():
    sigma = PartialBijection({1: 2, 2: 1})
    gens = {"s": sigma, "e": PartialBijection.identity((1, 2))}
    closure = sorted(pseudogroup_closure(gens), key=repr)
    apply = lambda t, x: t(x)
    tg = transformation_groupoid(
        closure, lambda a, b: a * b, apply, pointwise_oracle(apply), (1, 2),
        lambda x: PartialBijection.identity((1, 2)))
    gg = germ_groupoid(gens, (1, 2))
    pairs = {(x, tg.r(a)) for a in tg.arrows() for x in [tg.s(a)]}
    assert pairs == set(gg.germs)
    for a2 in tg.arrows():
        for a1 in tg.arrows():
            if tg.s(a2) == tg.r(a1):
                c = tg.compose(a2, a1)
                assert (tg.s(c), tg.r(c)) == (tg.s(a1), tg.r(a2))


def test_empty_carrier_transformation_groupoid():
    tg = transformation_groupoid([], lambda a, b: a, lambda t, x: None,
                                 lambda t, u, x: True, (), lambda x: None)
    assert tg.arrows() == []


def fold_setup():
    x_points = (1, 2)
    sigma = PartialBijection({1: 2, 2: 1})
    gens = {"s": sigma}
    semigroup = sorted(pseudogroup_closure(gens), key=repr)
    theta_x = {t: t for t in semigroup}
    y_points = tuple((i, c) for i in x_points for c in (0, 1))
    f = {(i, c): i for (i, c) in y_points}
    theta_y = {t: PartialBijection({(i, c): (t(i), c) for (i, c) in y_points
                                    if t(i) is not None})
               for t in semigroup}
    return semigroup, theta_x, x_points, theta_y, f, y_points


def test_isg_round_trip_tautological():
    sigma = PartialBijection({1: 2, 2: 1})
    semigroup = sorted(pseudogroup_closure([sigma]), key=repr)
    theta = {t: t for t in semigroup}
    f = {1: 1, 2: 2}
    gpd, act = isg_action_vs_groupoid_action(
        semigroup, theta, (1, 2), theta_y=theta, f=f, carrier_y=(1, 2))
    theta_back, f_back = isg_action_vs_groupoid_action(
        semigroup, theta, (1, 2), f=f, carrier_y=(1, 2), action=act)
    assert f_back == f
    assert theta_back == theta


def test_isg_round_trip_fold_map():
    semigroup, theta_x, xs, theta_y, f, ys = fold_setup()
    gpd, act = isg_action_vs_groupoid_action(
        semigroup, theta_x, xs, theta_y=theta_y, f=f, carrier_y=ys)
    theta_back, f_back = isg_action_vs_groupoid_action(
        semigroup, theta_x, xs, f=f, carrier_y=ys, action=act)
    assert theta_back == theta_y and f_back == f


def test_isg_not_equivariant_witness():
    semigroup, theta_x, xs, theta_y, f, ys = fold_setup()
    broken = dict(theta_y)
    sigma = next(t for t in semigroup if t == PartialBijection({1: 2, 2: 1}))
    broken[sigma] = PartialBijection({(1, 0): (2, 0)})
    with pytest.raises(NotEquivariant):
        isg_action_vs_groupoid_action(
            semigroup, theta_x, xs, theta_y=broken, f=f, carrier_y=ys)
