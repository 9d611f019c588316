"""Shared test data: small self-similar and graph systems."""

from gpdcorr.groupoid import Group
from gpdcorr.selfsim import SelfSimilarData


def e1():
    """Z/2 on {0,1} flipping letters, with constant restriction a|_x = a.

    The generator acts on infinite words by flipping every letter, so
    the kernel of the action is trivial.
    """
    z2 = Group.cyclic(2)
    eact = {("1", "0"): "0", ("1", "1"): "1", ("a", "0"): "1", ("a", "1"): "0"}
    coc = {("1", "0"): "1", ("1", "1"): "1", ("a", "0"): "a", ("a", "1"): "a"}
    return SelfSimilarData.group_alphabet(z2, ("0", "1"), eact, coc)


def e2():
    """Z/2 with trivial letter action and constant restriction a|_x = a.

    The generator acts trivially on the path space but its restrictions
    never reach the identity, so the system is not effective.
    """
    z2 = Group.cyclic(2)
    eact = {(g, x): x for g in z2 for x in ("0", "1")}
    coc = {("1", "0"): "1", ("1", "1"): "1", ("a", "0"): "a", ("a", "1"): "a"}
    return SelfSimilarData.group_alphabet(z2, ("0", "1"), eact, coc)


def trivial_alphabet(letters=("0", "1")):
    triv = Group.trivial()
    eact = {("1", x): x for x in letters}
    coc = {("1", x): "1" for x in letters}
    return SelfSimilarData.group_alphabet(triv, letters, eact, coc)


def ep_graph():
    """A self-similar graph: 2 vertices, 3 edges, group Z/2.

    The group fixes the vertices, swaps the two parallel edges at p and
    fixes the third; restriction is trivial on the swapped pair and the
    generator itself on the fixed edge.
    """
    z2 = Group.cyclic(2)
    vertices = ("p", "q")
    edges = ("x", "y", "z")
    er = {"x": "p", "y": "p", "z": "q"}
    es = {"x": "p", "y": "p", "z": "p"}
    vact = {(g, v): v for g in z2 for v in vertices}
    eact = {("1", "x"): "x", ("1", "y"): "y", ("1", "z"): "z",
            ("a", "x"): "y", ("a", "y"): "x", ("a", "z"): "z"}
    coc = {("1", "x"): "1", ("1", "y"): "1", ("1", "z"): "1",
           ("a", "x"): "1", ("a", "y"): "1", ("a", "z"): "a"}
    return SelfSimilarData.graph(z2, vertices, edges, er, es, vact, eact, coc)
