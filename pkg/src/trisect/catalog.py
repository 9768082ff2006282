"""The built-in genus-one diagrams and the genus-zero identity diagram.

Slope conventions are frozen here once and used everywhere: each entry is
the (alpha, beta, gamma) slope triple on the single handle.

* CP2    = ((1,0), (0,1), (1,1))   parameters (1;0,0,0), triangle sign +1
* CP2R   = ((1,0), (0,1), (1,-1))  parameters (1;0,0,0), triangle sign -1
* S1xS3  = ((1,0), (1,0), (1,0))   parameters (1;1,1,1)
* S4STAB1 = ((1,0), (1,0), (0,1))  parameters (1;1,0,0)
* S4STAB2 = ((0,1), (1,0), (1,0))  parameters (1;0,1,0)
* S4STAB3 = ((1,0), (0,1), (1,0))  parameters (1;0,0,1)

CP2R is CP2 with the opposite orientation; the two are told apart by the
sign of det(a,b)*det(b,c)*det(c,a) over the slope triple, which is
invariant under slope sign flips and common SL(2,Z) changes of the
handle basis.
"""

from __future__ import annotations

from .diagram import (CutSystem, TrisectionDiagram, system_from_templates,
                      trisection_params)
from .homology import algebraic_intersection
from .verdict import refuted, unknown, verified

GENUS_ONE_SLOPES = {
    "CP2": ((1, 0), (0, 1), (1, 1)),
    "CP2R": ((1, 0), (0, 1), (1, -1)),
    "S1xS3": ((1, 0), (1, 0), (1, 0)),
    "S4STAB1": ((1, 0), (1, 0), (0, 1)),
    "S4STAB2": ((0, 1), (1, 0), (1, 0)),
    "S4STAB3": ((1, 0), (0, 1), (1, 0)),
}

GENUS_ONE_PARAMS = {
    "CP2": (0, 0, 0),
    "CP2R": (0, 0, 0),
    "S1xS3": (1, 1, 1),
    "S4STAB1": (1, 0, 0),
    "S4STAB2": (0, 1, 0),
    "S4STAB3": (0, 0, 1),
}

# display groups: the three balanced diagrams and the three stabilizations
FIGURE_ONE = ("CP2", "CP2R", "S1xS3")
FIGURE_TWO = ("S4STAB1", "S4STAB2", "S4STAB3")

ALL_NAMES = FIGURE_ONE + FIGURE_TWO


def genus_one_diagram(name):
    slopes = GENUS_ONE_SLOPES.get(name)
    if slopes is None:
        raise ValueError("unknown catalog name %r (try one of %s)"
                         % (name, ", ".join(ALL_NAMES)))
    systems = [system_from_templates(1, [(1, p, q)]) for (p, q) in slopes]
    return TrisectionDiagram(1, systems[0], systems[1], systems[2],
                             declared_params=GENUS_ONE_PARAMS[name])


def genus_zero_diagram():
    empty = CutSystem(0, ())
    return TrisectionDiagram(0, empty, empty, empty, declared_params=(0, 0, 0))


def stabilization_diagram(i):
    """The i-th genus-one S4 diagram, i in {1, 2, 3}."""
    if i not in (1, 2, 3):
        raise ValueError("stabilization index must be 1, 2, or 3")
    return genus_one_diagram("S4STAB%d" % i)


def triangle_sign(t):
    """Orientation sign of a genus-one diagram's slope triangle."""
    a = t.alpha.curves[0].homology
    b = t.beta.curves[0].homology
    c = t.gamma.curves[0].homology
    prod = (algebraic_intersection(a, b)
            * algebraic_intersection(b, c)
            * algebraic_intersection(c, a))
    return 0 if prod == 0 else (1 if prod > 0 else -1)


def match_genus_one(t, budget=None):
    """Name a genus-one diagram by parameters plus the triangle sign."""
    if t.genus != 1:
        raise ValueError("match_genus_one needs a genus-one diagram")
    params, v = trisection_params(t, budget=budget)
    if v.is_refuted:
        return None, v
    ks = params.ks
    if ks == (1, 1, 1):
        name = "S1xS3"
    elif ks == (1, 0, 0):
        name = "S4STAB1"
    elif ks == (0, 1, 0):
        name = "S4STAB2"
    elif ks == (0, 0, 1):
        name = "S4STAB3"
    elif ks == (0, 0, 0):
        sign = triangle_sign(t)
        if sign == 0:
            return None, unknown("degenerate slope triangle for (1;0,0,0)")
        name = "CP2" if sign > 0 else "CP2R"
    else:
        return None, refuted(
            "parameters %s match no genus-one diagram" % params,
            {"kind": "no-genus-one-match", "params": list(ks)})
    if v.is_verified:
        return name, verified(
            "matched catalog diagram %s" % name,
            {"kind": "catalog-match", "name": name, "params": list(ks),
             "pairs": v.witness})
    return name, v
