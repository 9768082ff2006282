"""Round trip between Heegaard-Kirby diagrams and trisections.

Validates the 0-framed unknot on the standard genus-1 splitting,
completes it to a trisection, then goes the other way: picks a
primitive gamma/beta pair on the CP2 diagram and rebuilds the same
trisection from the extracted surgery diagram.
"""

from trisect.catalog import genus_one_diagram
from trisect.diagio import format_diagram
from trisect.diagram import curve_from_template, standard_heegaard, trisection_params
from trisect.kirby import (FramedComponent, HeegaardKirbyDiagram, find_primitive_pairs,
                           hk_to_trisection, trisection_to_hk, validate_hk)
from trisect.canonical import canonical_form


def main():
    print("== 0-framed unknot over the standard genus-1 splitting ==")
    H = HeegaardKirbyDiagram(1, standard_heegaard(1, 0),
                             (FramedComponent(curve_from_template(1, 1, 1, 0)),),
                             m=1)
    print(format_diagram(H))
    verdict = validate_hk(H)
    print("validate: %s (%s)" % (verdict.status, verdict.reason))

    t, bridge = hk_to_trisection(H)
    params, _ = trisection_params(t)
    print("completed trisection parameters: (%d;%d,%d,%d)  [%s]"
          % (params.genus, *params.ks, bridge.status))
    print()
    print(format_diagram(t))

    print()
    print("== back the other way, starting from CP2 ==")
    cp2 = genus_one_diagram("CP2")
    pairs, pv = find_primitive_pairs(cp2)
    print("primitive gamma/beta pairs on CP2: %s  [%s]" % (pairs, pv.status))
    H2, hv = trisection_to_hk(cp2, [pairs[0]])
    print("extracted surgery diagram [%s]:" % hv.status)
    print(format_diagram(H2))
    back, bv = hk_to_trisection(H2)
    same = canonical_form(back) == canonical_form(cp2)
    print("round trip reproduces CP2 up to canonical form: %s  [%s]"
          % (same, bv.status))


if __name__ == "__main__":
    main()
