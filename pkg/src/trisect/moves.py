"""Moves on diagrams and the standardization pipeline.

The pipeline direction is always: unscramble (greedy slide descent back to
shortest words, then restore slope templates), split along reducing
curves, destabilize certified genus-one pieces, and name what remains
against the genus-one catalog.  Certificates are searched in a fixed
deterministic order and every positive verdict carries a replayable
script.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from . import words
from .catalog import genus_one_diagram, match_genus_one
from .diagram import (Curve, CutSystem, HeegaardDiagram, TrisectionDiagram,
                      curve_from_template, curve_from_word,
                      geometric_intersection, relabel_systems,
                      trisection_params)
from .verdict import refuted, unknown, verified, weakest

_MEMBERSHIP_SLIDE_BUDGET = 3
_MEMBERSHIP_STATE_CAP = 2000
_DESCENT_PLATEAU_CAP = 64
_DESCENT_STEP_CAP = 400


def handleslide(cs, i, j, guide=(), sign=1):
    """Slide curve i over curve j along a guide word.

    The slid word is reduce(w_i * guide * w_j^sign * guide^-1); the
    homology class moves by +-class_j and the slope template of curve i
    is dropped (slides generally leave the template family).  Indices
    are 1-based.
    """
    if i == j:
        raise ValueError("cannot slide a curve over itself")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    wi = cs.curve(i).word
    wj = cs.curve(j).word
    if sign < 0:
        wj = words.inverse(wj)
    guide = tuple(guide)
    new_word = wi + guide + wj + words.inverse(guide)
    return cs.replace(i, curve_from_word(cs.genus, new_word))


def connected_sum(t1, t2):
    """Concatenate the diagrams, re-indexing t2's handles above t1's."""
    g1, g = t1.genus, t1.genus + t2.genus

    def carried(c):
        if c.template is not None:
            return curve_from_template(g, c.template.handle, c.template.p,
                                       c.template.q)
        return curve_from_word(g, c.word)

    def shifted(c):
        if c.template is not None:
            return curve_from_template(g, c.template.handle + g1,
                                       c.template.p, c.template.q)
        w = tuple(v + 2 * g1 if v > 0 else v - 2 * g1 for v in c.word)
        return curve_from_word(g, w)

    systems = []
    for cs1, cs2 in zip(t1.systems(), t2.systems()):
        curves = tuple(carried(c) for c in cs1.curves)
        curves += tuple(shifted(c) for c in cs2.curves)
        systems.append(CutSystem(g, curves))
    declared = None
    if t1.declared_params is not None and t2.declared_params is not None:
        declared = tuple(a + b for a, b in
                         zip(t1.declared_params, t2.declared_params))
    return TrisectionDiagram(g, systems[0], systems[1], systems[2],
                             declared_params=declared)


def i_stabilize(t, i):
    """Connected sum with the i-th genus-one stabilization diagram."""
    return connected_sum(t, genus_one_diagram("S4STAB%d" % i))


def heegaard_stabilize(d):
    """Add a trivially dual handle pair: alpha (1,0), beta (0,1)."""
    g = d.genus + 1

    def lift(cs, p, q):
        curves = []
        for c in cs.curves:
            if c.template is not None:
                curves.append(curve_from_template(g, c.template.handle,
                                                  c.template.p, c.template.q))
            else:
                curves.append(curve_from_word(g, c.word))
        curves.append(curve_from_template(g, g, p, q))
        return CutSystem(g, tuple(curves))

    return HeegaardDiagram(g, lift(d.alpha, 1, 0), lift(d.beta, 0, 1))


# -- certificates -------------------------------------------------------------

@dataclass(frozen=True)
class StabilizationCertificate:
    """Witness that the diagram splits off the index-i genus-one piece.

    omega is (slide-reachably) a member of the two systems prescribed for
    index i and meets exactly one curve of the third system exactly once.
    """
    index: int
    omega: Curve
    dual: Curve
    evidence: dict


@dataclass(frozen=True)
class ReducingCertificate:
    """A separating curve splitting the handle set into two closed groups."""
    delta: Curve
    left_handles: tuple
    right_handles: tuple


_PAIR_FOR_INDEX = {1: ("alpha", "beta", "gamma"),
                   2: ("beta", "gamma", "alpha"),
                   3: ("gamma", "alpha", "beta")}


def _slide_membership(cs, target, slide_budget, state_cap):
    """Slides (trivial guide) turning some member of cs into target.

    Returns the move list ([] for literal membership) or None.  Bounded
    breadth-first search; deterministic order.
    """
    if cs.member(target):
        return []
    if slide_budget <= 0:
        return None
    start = tuple(c.word for c in cs.curves)
    seen = {start}
    queue = deque([(cs, [])])
    states = 0
    while queue:
        cur, path = queue.popleft()
        if len(path) >= slide_budget:
            continue
        for i in range(1, cur.genus + 1):
            for j in range(1, cur.genus + 1):
                if i == j:
                    continue
                for sign in (1, -1):
                    try:
                        nxt = handleslide(cur, i, j, sign=sign)
                    except ValueError:
                        continue
                    key = tuple(c.word for c in nxt.curves)
                    if key in seen:
                        continue
                    seen.add(key)
                    npath = path + [(i, j, sign)]
                    if nxt.member(target):
                        return npath
                    states += 1
                    if states >= state_cap:
                        return None
                    queue.append((nxt, npath))
    return None


def find_stabilization_certificate(t, slide_budget=_MEMBERSHIP_SLIDE_BUDGET,
                                   index=None):
    """First certificate in deterministic order, or None.

    For index i the curve omega must bound in the two handlebodies whose
    pair detects k_i, witnessed by membership (or slide-reachable
    membership) in both defining systems, and must meet exactly one curve
    of the third system in exactly one point, all counts exact.  Absence
    of a certificate proves nothing.  index, when given, restricts the
    search to that single stabilization type.
    """
    if index is not None and index not in (1, 2, 3):
        raise ValueError("stabilization index must be 1, 2, or 3")
    for index in (1, 2, 3) if index is None else (index,):
        first, second, third = (t.system(n) for n in _PAIR_FOR_INDEX[index])
        candidates = []
        seen_keys = set()
        # literal members of both systems first, then one-sided members
        for cs in (first, second):
            for c in cs.curves:
                k = c.key()
                if k in seen_keys:
                    continue
                seen_keys.add(k)
                candidates.append(c)
        candidates.sort(key=lambda c: (not (first.member(c) and second.member(c)),
                                       c.key()))
        for omega in candidates:
            mem1 = _slide_membership(first, omega, slide_budget,
                                     _MEMBERSHIP_STATE_CAP)
            if mem1 is None:
                continue
            mem2 = _slide_membership(second, omega, slide_budget,
                                     _MEMBERSHIP_STATE_CAP)
            if mem2 is None:
                continue
            counts = [geometric_intersection(omega, c) for c in third.curves]
            if any(not exact for (_, exact) in counts):
                continue
            ones = [idx for idx, (n, _) in enumerate(counts) if n == 1]
            rest_zero = all(n == 0 for idx, (n, _) in enumerate(counts)
                            if idx not in ones)
            if len(ones) == 1 and rest_zero:
                dual = third.curves[ones[0]]
                names = _PAIR_FOR_INDEX[index]
                return StabilizationCertificate(
                    index, omega, dual,
                    {"pair": (names[0], names[1]),
                     "dual_system": names[2],
                     "dual_index": ones[0] + 1,
                     "slides": {names[0]: mem1, names[1]: mem2}})
    return None


def destabilize(t, cert):
    """Remove the certified genus-one summand; genus and k_index drop by 1.

    Requires the strict template shape: omega a literal member of both
    prescribed systems, the dual the unique third-system curve on the
    same handle, and no other curve touching that handle.
    """
    if cert.index not in (1, 2, 3):
        raise ValueError("certificate index must be 1, 2, or 3")
    names = _PAIR_FOR_INDEX[cert.index]
    first, second, third = (t.system(n) for n in names)
    for cs, label in ((first, names[0]), (second, names[1])):
        if not cs.member(cert.omega):
            raise ValueError("stale certificate: omega is not a member of "
                             "the %s system" % label)
    if cert.omega.template is None:
        raise ValueError("destabilization needs a slope template on omega")
    h = cert.omega.template.handle
    if not third.member(cert.dual):
        raise ValueError("stale certificate: dual curve missing from the "
                         "%s system" % names[2])
    count = geometric_intersection(cert.omega, cert.dual)
    if count != (1, True):
        raise ValueError("certificate dual does not meet omega exactly once")

    piece_curves = []
    for cs, label in zip(t.systems(), ("alpha", "beta", "gamma")):
        on_handle = [c for c in cs.curves if h in c.support()]
        if len(on_handle) != 1 or on_handle[0].support() != {h}:
            raise ValueError("handle %d is not split off cleanly in the %s "
                             "system" % (h, label))
        piece_curves.append(on_handle[0])

    # the removed piece must be the matching stabilization diagram
    piece_systems = []
    for c in piece_curves:
        if c.template is None:
            raise ValueError("summand curve on handle %d lacks a template" % h)
        piece_systems.append(CutSystem(1, (curve_from_template(
            1, 1, c.template.p, c.template.q),)))
    piece = TrisectionDiagram(1, *piece_systems)
    name, v = match_genus_one(piece)
    if name != "S4STAB%d" % cert.index:
        raise ValueError("removed summand is %s, not the index-%d "
                         "stabilization" % (name, cert.index))

    g = t.genus - 1

    def drop(c):
        if c.template is not None:
            nh = c.template.handle - (1 if c.template.handle > h else 0)
            return curve_from_template(g, nh, c.template.p, c.template.q)
        w = tuple(v - 2 if v > 2 * h else v + 2 if v < -2 * h else v
                  for v in c.word)
        return curve_from_word(g, w)

    systems = []
    for cs in t.systems():
        keep = [drop(c) for c in cs.curves if h not in c.support()]
        systems.append(CutSystem(g, tuple(keep)))
    declared = None
    if t.declared_params is not None:
        ks = list(t.declared_params)
        ks[cert.index - 1] -= 1
        if min(ks) < 0:
            raise ValueError("declared parameters cannot drop below zero")
        declared = tuple(ks)
    return TrisectionDiagram(g, systems[0], systems[1], systems[2],
                             declared_params=declared)


def _handle_components(t):
    """Connected components of handles under shared curve support."""
    parent = list(range(t.genus + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for cs in t.systems():
        for c in cs.curves:
            supp = sorted(c.support())
            for h in supp[1:]:
                parent[find(h)] = find(supp[0])
    comps = {}
    for h in range(1, t.genus + 1):
        comps.setdefault(find(h), []).append(h)
    return sorted(comps.values())


def find_reducing_certificate(t):
    """A separating curve splitting off the first support component.

    The witness partition has every curve of every system supported
    entirely on one side; delta is the boundary word of the left
    subsurface (a product of commutators, hence null-homologous).
    Absence never implies irreducibility.
    """
    if t.genus <= 1:
        return None
    comps = _handle_components(t)
    if len(comps) <= 1:
        return None
    left = tuple(comps[0])
    right = tuple(h for h in range(1, t.genus + 1) if h not in comps[0])
    delta_word = []
    for h in left:
        x, y = 2 * h - 1, 2 * h
        delta_word.extend((x, y, -x, -y))
    delta = curve_from_word(t.genus, tuple(delta_word))
    return ReducingCertificate(delta, left, right)


def split_along(t, cert):
    """Cut the diagram into the two sides of a reducing certificate."""
    left, right = tuple(cert.left_handles), tuple(cert.right_handles)
    if sorted(left + right) != list(range(1, t.genus + 1)):
        raise ValueError("certificate handles do not partition 1..g")
    sides = []
    for side in (left, right):
        side_set = set(side)
        remap = {h: i + 1 for i, h in enumerate(sorted(side))}
        g_side = len(side)

        def moved(c):
            if c.template is not None:
                return curve_from_template(g_side, remap[c.template.handle],
                                           c.template.p, c.template.q)
            w = []
            for v in c.word:
                h = (abs(v) + 1) // 2
                base = 2 * (remap[h] - 1)
                letter = base + (1 if abs(v) % 2 == 1 else 2)
                w.append(letter if v > 0 else -letter)
            return curve_from_word(g_side, tuple(w))

        systems = []
        for cs in t.systems():
            picked = [c for c in cs.curves if c.support() <= side_set]
            if len(picked) != g_side:
                raise ValueError("curve supports straddle the certificate "
                                 "partition")
            systems.append(CutSystem(g_side, tuple(moved(c) for c in picked)))
        sides.append(TrisectionDiagram(g_side, *systems))
    return sides[0], sides[1]


# -- unscrambling -------------------------------------------------------------

def _rot_candidates(wi, base):
    """Rotations of the slid-over word that cancel against w_i.

    Sliding with guide g = inverse(base[:r]) appends the r-th rotation of
    base to w_i; only rotations cancelling at the seam or the cyclic wrap
    can shorten or preserve the total length, so the rest are skipped.
    """
    if not wi or not base:
        return (0,)
    rs = set()
    n = len(base)
    seam, wrap = -wi[-1], -wi[0]
    for p, v in enumerate(base):
        if v == seam:
            rs.add(p)
        if v == wrap:
            rs.add((p + 1) % n)
    return tuple(sorted(rs))


def _raw_moves(state):
    g = len(state)
    for i in range(g):
        for j in range(g):
            if i == j:
                continue
            for sign in (1, -1):
                base = state[j] if sign > 0 else words.inverse(state[j])
                for r in _rot_candidates(state[i], base):
                    yield (i, j, sign, r)


def _raw_slide(state, move):
    i, j, sign, r = move
    base = state[j] if sign > 0 else words.inverse(state[j])
    rot = base[r:] + base[:r]
    new = words.cyclic_reduce(state[i] + rot)
    if not new:
        return None
    out = list(state)
    out[i] = new
    return tuple(out)


def _descend_words(state):
    """Greedy slide descent on raw word tuples, minimizing total length.

    Steepest strictly improving slide first; when stuck, a small
    breadth-first search over equal-length states looks for an escape.
    Returns the final state and the move script (0-based, with the
    rotation of the slid-over word).
    """
    cur = state
    script = []
    for _ in range(_DESCENT_STEP_CAP):
        base_len = sum(map(len, cur))
        best = None
        best_len = base_len
        for move in _raw_moves(cur):
            cand = _raw_slide(cur, move)
            if cand is None:
                continue
            clen = sum(map(len, cand))
            if clen < best_len:
                best = (cand, move)
                best_len = clen
        if best is not None:
            cur = best[0]
            script.append(best[1])
            continue
        # plateau: equal-length states, looking for a strict drop
        seen = {cur}
        queue = deque([(cur, [])])
        found = None
        while queue and found is None:
            node, path = queue.popleft()
            if len(path) >= 3:
                continue
            for move in _raw_moves(node):
                cand = _raw_slide(node, move)
                if cand is None:
                    continue
                clen = sum(map(len, cand))
                if clen < base_len:
                    found = (cand, path + [move])
                    break
                if clen == base_len and cand not in seen \
                        and len(seen) < _DESCENT_PLATEAU_CAP:
                    seen.add(cand)
                    queue.append((cand, path + [move]))
        if found is None:
            break
        cur = found[0]
        script.extend(found[1])
    return cur, script


def _descend_system(cs):
    """Run the raw descent, then replay it through handleslide.

    The replay turns each (i, j, sign, rotation) into a guided slide on
    the live system, so the returned script validates move by move.
    """
    _, raw_script = _descend_words(tuple(c.word for c in cs.curves))
    cur = cs
    script = []
    for (i, j, sign, r) in raw_script:
        wj = cur.curve(j + 1).word
        base = wj if sign > 0 else words.inverse(wj)
        guide = words.inverse(base[:r])
        cur = handleslide(cur, i + 1, j + 1, guide=guide, sign=sign)
        script.append((i + 1, j + 1, sign, guide))
    return cur, script


def _retemplate_system(cs):
    """Restore slope templates on single-handle shortest-word curves."""
    out = []
    for c in cs.curves:
        if c.template is None:
            supp = c.support()
            if len(supp) == 1:
                (h,) = supp
                p, q = c.homology.handle_part(h)
                if (p, q) != (0, 0) and len(c.word) == abs(p) + abs(q):
                    try:
                        out.append(curve_from_template(cs.genus, h, p, q))
                        continue
                    except ValueError:
                        pass
        out.append(c)
    return CutSystem(cs.genus, tuple(out))


def unscramble(t):
    """Slide every system back to shortest words, then retemplate.

    Returns the cleaned diagram and the per-system slide scripts (the
    replayable part of any downstream certificate).
    """
    systems = []
    scripts = {}
    for cs, name in zip(t.systems(), ("alpha", "beta", "gamma")):
        down, script = _descend_system(cs)
        systems.append(_retemplate_system(down))
        scripts[name] = script
    cleaned = TrisectionDiagram(t.genus, systems[0], systems[1], systems[2],
                                declared_params=t.declared_params)
    return cleaned, scripts


def retemplate(t):
    systems = [_retemplate_system(cs) for cs in t.systems()]
    return TrisectionDiagram(t.genus, systems[0], systems[1], systems[2],
                             declared_params=t.declared_params)


# -- parameter constraints ----------------------------------------------------

def check_classified_params(params):
    """Constraint check for parameter triples in the classified range.

    With k1 the maximum: k1 = g forces k2 = k3; k1 = g-1 forces
    |k2 - k3| <= 1.  Anything below g-1 is outside the classified range.
    """
    g = params.genus
    ks = sorted(params.ks, reverse=True)
    k1, k2, k3 = ks
    if k1 == g:
        if k2 == k3:
            return verified("parameters %s satisfy the k1=g constraint"
                            % str(params),
                            {"kind": "param-constraint", "case": "k1=g",
                             "ks": list(params.ks)})
        return refuted(
            "a (g;g,k2,k3) triple needs k2 = k3, got %s" % str(params),
            {"kind": "param-constraint", "case": "k1=g",
             "ks": list(params.ks)})
    if k1 == g - 1:
        if abs(k2 - k3) <= 1:
            return verified("parameters %s satisfy the k1=g-1 constraint"
                            % str(params),
                            {"kind": "param-constraint", "case": "k1=g-1",
                             "ks": list(params.ks)})
        return refuted(
            "a (g;g-1,k2,k3) triple needs k3 within 1 of k2, got %s"
            % str(params),
            {"kind": "param-constraint", "case": "k1=g-1",
             "ks": list(params.ks)})
    return unknown("parameters %s are outside the classified range "
                   "(max k < g-1)" % str(params))


# -- standardization ----------------------------------------------------------

_ORDER_FOR_MAX = {0: "abc", 1: "bca", 2: "cab"}

# how stabilization names read in the original frame after relabeling
_NAME_BACK = {
    "abc": {1: 1, 2: 2, 3: 3},
    "bca": {1: 2, 2: 3, 3: 1},
    "cab": {1: 3, 2: 1, 3: 2},
}


def _translate_name(name, order):
    if name.startswith("S4STAB"):
        return "S4STAB%d" % _NAME_BACK[order][int(name[-1])]
    return name


def _decompose(t, budget):
    """Recursive split/destabilize walk; returns (names, verdict, tree)."""
    if t.genus == 0:
        return [], verified("empty diagram", {"kind": "empty"}), {"op": "empty"}
    if t.genus == 1:
        name, v = match_genus_one(t, budget=budget)
        if name is None:
            return [], v, {"op": "stuck", "reason": v.reason}
        return [name], v, {"op": "match", "name": name}
    cleaned, scripts = unscramble(t)
    node = {"op": "unscramble", "slides": scripts}
    cert = find_reducing_certificate(cleaned)
    if cert is not None:
        left_t, right_t = split_along(cleaned, cert)
        l_names, l_v, l_tree = _decompose(left_t, budget)
        r_names, r_v, r_tree = _decompose(right_t, budget)
        node["next"] = {"op": "split",
                        "left": list(cert.left_handles),
                        "left_tree": l_tree, "right_tree": r_tree}
        return l_names + r_names, weakest([l_v, r_v]), node
    scert = find_stabilization_certificate(cleaned, slide_budget=0)
    if scert is not None and scert.omega.template is not None:
        try:
            rest = destabilize(cleaned, scert)
        except ValueError:
            rest = None
        if rest is not None:
            name = "S4STAB%d" % scert.index
            r_names, r_v, r_tree = _decompose(rest, budget)
            node["next"] = {"op": "destabilize",
                            "handle": scert.omega.template.handle,
                            "index": scert.index, "next_tree": r_tree}
            return [name] + r_names, r_v, node
    node["next"] = {"op": "stuck",
                    "reason": "no reducing or stabilization certificate "
                              "at genus %d" % t.genus}
    return [], unknown(node["next"]["reason"]), node


def standardize(t, budget=None):
    """Decompose into genus-one summand names (classified range only).

    Requires verified parameters with max(k) >= g-1; the diagram is
    relabeled so the maximal k sits first, the parameter constraints are
    checked, and the split/destabilize walk runs.  Names are reported in
    the caller's original system labeling.
    """
    params, pv = trisection_params(t, budget=budget)
    if pv.is_refuted:
        return [], pv
    if pv.is_unknown:
        return [], unknown("parameters not verified: %s" % pv.reason)
    ks = params.ks
    if max(ks) < params.genus - 1:
        raise ValueError("outside classified range: max(k) = %d < g-1 = %d"
                         % (max(ks), params.genus - 1))
    order = _ORDER_FOR_MAX[ks.index(max(ks))]
    relabeled = relabel_systems(t, order)
    new_params, _ = trisection_params(relabeled, budget=budget)
    cv = check_classified_params(new_params)
    if cv.is_refuted:
        return [], cv
    names, v, tree = _decompose(relabeled, budget)
    names = [_translate_name(n, order) for n in names]
    if v.is_verified:
        return names, verified(
            "decomposed into %s" % " # ".join(sorted(names)),
            {"kind": "decomposition", "order": order, "names": list(names),
             "tree": tree})
    return names, v


def classify_genus_one_sum(t, budget=None):
    """Name the diagram as a connected sum of genus-one pieces.

    Unlike standardize this applies no parameter precondition; it just
    tries to split and match, returning Unknown when the walk stalls.
    """
    names, v, tree = _decompose(t, budget)
    if not v.is_verified:
        return None, v
    name = sum_name(names)
    return name, verified(
        "diagram is %s" % name,
        {"kind": "classification", "name": name, "names": list(names),
         "tree": tree})


def sum_name(names):
    """Manifold name from a summand multiset (S4 pieces vanish)."""
    s1xs3 = sum(1 for n in names if n == "S1xS3")
    cp2 = sum(1 for n in names if n == "CP2")
    cp2r = sum(1 for n in names if n == "CP2R")
    parts = []
    if s1xs3 == 1:
        parts.append("S1xS3")
    elif s1xs3 > 1:
        parts.append("#%d(S1xS3)" % s1xs3)
    parts.extend(["CP2"] * cp2)
    parts.extend(["CP2R"] * cp2r)
    return " # ".join(parts) if parts else "S4"


# -- witness replay -----------------------------------------------------------

def replay_decomposition(t, witness):
    """Re-derive a decomposition verdict from its script, without search.

    Walks the recorded tree, re-applying recorded slides and re-checking
    each split partition and destabilization certificate.  Raises
    ValueError when the script does not validate against the diagram.
    """
    order = witness.get("order", "abc")
    current = relabel_systems(t, order)
    names = _replay_tree(current, witness["tree"])
    names = [_translate_name(n, order) for n in names]
    if sorted(names) != sorted(witness["names"]):
        raise ValueError("replayed names %r do not match recorded %r"
                         % (names, witness["names"]))
    return names


def _replay_tree(t, node):
    op = node["op"]
    if op == "empty":
        if t.genus != 0:
            raise ValueError("script claims an empty diagram at genus %d"
                             % t.genus)
        return []
    if op == "match":
        name, v = match_genus_one(t)
        if name != node["name"] or not v.is_verified:
            raise ValueError("genus-one piece does not match recorded %r"
                             % node["name"])
        return [name]
    if op == "unscramble":
        systems = []
        for cs, label in zip(t.systems(), ("alpha", "beta", "gamma")):
            cur = cs
            for (i, j, sign, guide) in node["slides"].get(label, []):
                cur = handleslide(cur, i, j, guide=guide, sign=sign)
            systems.append(_retemplate_system(cur))
        cleaned = TrisectionDiagram(t.genus, systems[0], systems[1],
                                    systems[2],
                                    declared_params=t.declared_params)
        return _replay_tree(cleaned, node["next"])
    if op == "split":
        left = tuple(node["left"])
        right = tuple(h for h in range(1, t.genus + 1) if h not in left)
        cert = ReducingCertificate(
            curve_from_word(t.genus, _commutator_word(left)), left, right)
        lt, rt = split_along(t, cert)
        return (_replay_tree(lt, node["left_tree"])
                + _replay_tree(rt, node["right_tree"]))
    if op == "destabilize":
        cert = _rebuild_stab_certificate(t, node["handle"], node["index"])
        rest = destabilize(t, cert)
        return ["S4STAB%d" % node["index"]] + _replay_tree(rest,
                                                           node["next_tree"])
    if op == "stuck":
        raise ValueError("script records a stuck state: %s" % node["reason"])
    raise ValueError("unknown script op %r" % op)


def _commutator_word(handles):
    out = []
    for h in handles:
        x, y = 2 * h - 1, 2 * h
        out.extend((x, y, -x, -y))
    return tuple(out)


def _rebuild_stab_certificate(t, handle, index):
    names = _PAIR_FOR_INDEX[index]
    first, second, third = (t.system(n) for n in names)
    omega = next((c for c in first.curves
                  if c.template is not None and c.template.handle == handle),
                 None)
    if omega is None or not second.member(omega):
        raise ValueError("recorded certificate no longer validates")
    dual = next((c for c in third.curves
                 if geometric_intersection(omega, c) == (1, True)), None)
    if dual is None:
        raise ValueError("recorded certificate has no dual curve")
    return StabilizationCertificate(
        index, omega, dual,
        {"pair": (names[0], names[1]), "dual_system": names[2],
         "dual_index": third.curves.index(dual) + 1,
         "slides": {names[0]: [], names[1]: []}})
