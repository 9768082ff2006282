import random

import pytest

from trisect.catalog import genus_one_diagram, genus_zero_diagram
from trisect.canonical import canonical_form
from trisect.diagram import (TrisectionDiagram, CutSystem, curve_from_word,
                             euler_characteristic, system_from_templates,
                             trisection_params)
from trisect.intmatrix import span_equal
from trisect.moves import (check_classified_params, classify_genus_one_sum,
                           connected_sum, destabilize,
                           find_reducing_certificate,
                           find_stabilization_certificate, handleslide,
                           heegaard_stabilize, i_stabilize,
                           replay_decomposition, split_along, standardize,
                           sum_name, unscramble)


def _scrambled(t, rng, steps=5):
    if t.genus < 2:
        return t
    systems = []
    for cs in t.systems():
        cur = cs
        for _ in range(steps):
            i = rng.randrange(1, cur.genus + 1)
            j = rng.randrange(1, cur.genus + 1)
            while j == i:
                j = rng.randrange(1, cur.genus + 1)
            cur = handleslide(cur, i, j, sign=rng.choice((1, -1)))
        systems.append(cur)
    return TrisectionDiagram(t.genus, systems[0], systems[1], systems[2],
                             declared_params=t.declared_params)


def test_handleslide_adds_words_and_classes():
    cs = system_from_templates(2, [(1, 1, 0), (2, 1, 0)])
    slid = handleslide(cs, 1, 2)
    assert slid.curve(1).word == (1, 3)
    assert slid.curve(1).homology.coeffs == (1, 0, 1, 0)
    assert slid.curve(1).template is None
    assert slid.curve(2) == cs.curve(2)


def test_handleslide_back_is_an_inverse():
    cs = system_from_templates(2, [(1, 1, 0), (2, 1, 0)])
    back = handleslide(handleslide(cs, 1, 2), 1, 2, sign=-1)
    assert back.curve(1).word == (1,)
    assert back.curve(1).homology == cs.curve(1).homology


def test_handleslide_with_guide_conjugates():
    cs = system_from_templates(2, [(1, 1, 0), (2, 1, 0)])
    slid = handleslide(cs, 1, 2, guide=(2,))
    assert slid.curve(1).word == (1, 2, 3, -2)
    assert slid.curve(1).homology.coeffs == (1, 0, 1, 0)


def test_handleslide_rejects_bad_arguments():
    cs = system_from_templates(2, [(1, 1, 0), (2, 1, 0)])
    with pytest.raises(ValueError):
        handleslide(cs, 1, 1)
    with pytest.raises(ValueError):
        handleslide(cs, 1, 2, sign=2)


def test_random_slides_preserve_the_spanned_lattice():
    rng = random.Random(41)
    cs = system_from_templates(3, [(1, 1, 0), (2, 1, 0), (3, 1, 0)])
    start = [list(c.coeffs) for c in cs.classes()]
    cur = cs
    for _ in range(20):
        i = rng.randrange(1, 4)
        j = rng.randrange(1, 4)
        while j == i:
            j = rng.randrange(1, 4)
        cur = handleslide(cur, i, j, sign=rng.choice((1, -1)))
        now = [list(c.coeffs) for c in cur.classes()]
        assert span_equal(start, now, 6)


def test_connected_sum_concatenates_and_adds_params():
    t = connected_sum(genus_one_diagram("CP2"), genus_one_diagram("CP2R"))
    assert t.genus == 2
    assert t.declared_params == (0, 0, 0)
    params, v = trisection_params(t)
    assert params.ks == (0, 0, 0)
    assert v.is_verified
    assert t.alpha.curve(2).template.handle == 2


def test_connected_sum_identity_and_associativity():
    a = genus_one_diagram("CP2")
    b = genus_one_diagram("S1xS3")
    c = genus_one_diagram("S4STAB1")
    assert connected_sum(a, genus_zero_diagram()) == a
    assert connected_sum(genus_zero_diagram(), a) == a
    assert (connected_sum(connected_sum(a, b), c)
            == connected_sum(a, connected_sum(b, c)))


def test_connected_sum_commutes_up_to_isomorphism():
    a = genus_one_diagram("CP2")
    b = genus_one_diagram("S1xS3")
    assert canonical_form(connected_sum(a, b)) \
        == canonical_form(connected_sum(b, a))
    assert connected_sum(a, b) != connected_sum(b, a)


def test_euler_characteristic_adds_under_sum():
    rng = random.Random(20260814)
    names = ["CP2", "CP2R", "S1xS3", "S4STAB1", "S4STAB2", "S4STAB3"]
    for _ in range(20):
        t1 = genus_one_diagram(rng.choice(names))
        t2 = genus_one_diagram(rng.choice(names))
        s = connected_sum(t1, t2)
        p, _ = trisection_params(s)
        p1, _ = trisection_params(t1)
        p2, _ = trisection_params(t2)
        assert euler_characteristic(p) \
            == euler_characteristic(p1) + euler_characteristic(p2) - 2


def test_i_stabilize_bumps_one_parameter():
    for i, expect in ((1, (1, 0, 0)), (2, (0, 1, 0)), (3, (0, 0, 1))):
        t = i_stabilize(genus_one_diagram("CP2"), i)
        params, v = trisection_params(t)
        assert v.is_verified
        assert params.genus == 2
        assert params.ks == expect


def test_stabilizations_commute_up_to_isomorphism():
    base = genus_one_diagram("CP2")
    t12 = i_stabilize(i_stabilize(base, 1), 2)
    t21 = i_stabilize(i_stabilize(base, 2), 1)
    assert canonical_form(t12) == canonical_form(t21)


def test_heegaard_stabilize_preserves_first_homology():
    from trisect.diagram import heegaard_h1, standard_heegaard
    d = standard_heegaard(2, 1)
    s = heegaard_stabilize(d)
    assert s.genus == 3
    assert s.alpha.curve(3).template.slope == (1, 0)
    assert s.beta.curve(3).template.slope == (0, 1)
    assert heegaard_h1(s) == heegaard_h1(d)


def test_stabilization_certificate_found_and_destabilized():
    for i in (1, 2, 3):
        t = i_stabilize(genus_one_diagram("CP2"), i)
        cert = find_stabilization_certificate(t)
        assert cert is not None
        assert cert.index == i
        assert cert.omega.template.handle == 2
        assert cert.evidence["slides"] == {cert.evidence["pair"][0]: [],
                                           cert.evidence["pair"][1]: []}
        back = destabilize(t, cert)
        assert back == genus_one_diagram("CP2")


def test_certificate_search_sees_through_bounded_slides():
    t = i_stabilize(genus_one_diagram("S1xS3"), 2)
    # hide the shared beta/gamma curve behind one slide in beta
    beta = handleslide(t.beta, 2, 1)
    hidden = TrisectionDiagram(2, t.alpha, beta, t.gamma,
                               declared_params=t.declared_params)
    cert = find_stabilization_certificate(hidden)
    assert cert is not None
    assert cert.index == 2
    slides = cert.evidence["slides"]
    assert slides["gamma"] == [] or slides["beta"] == []
    assert any(len(v) == 1 for v in slides.values())


def test_destabilize_rejects_a_stale_certificate():
    t1 = i_stabilize(genus_one_diagram("CP2"), 1)
    cert = find_stabilization_certificate(t1)
    t2 = i_stabilize(genus_one_diagram("CP2"), 2)
    with pytest.raises(ValueError):
        destabilize(t2, cert)


def test_destabilize_requires_literal_membership():
    t = i_stabilize(genus_one_diagram("S1xS3"), 2)
    cert = find_stabilization_certificate(t)
    beta = handleslide(t.beta, 2, 1)
    moved = TrisectionDiagram(2, t.alpha, beta, t.gamma,
                              declared_params=t.declared_params)
    with pytest.raises(ValueError):
        destabilize(moved, cert)


def test_reducing_certificate_splits_a_sum():
    t = connected_sum(genus_one_diagram("CP2"), genus_one_diagram("CP2R"))
    cert = find_reducing_certificate(t)
    assert cert is not None
    assert cert.left_handles == (1,)
    assert cert.right_handles == (2,)
    assert all(c == 0 for c in cert.delta.homology.coeffs)
    left, right = split_along(t, cert)
    p_left, _ = trisection_params(left)
    p_right, _ = trisection_params(right)
    assert (p_left.ks, p_right.ks) == ((0, 0, 0), (0, 0, 0))
    assert canonical_form(left) == canonical_form(genus_one_diagram("CP2"))
    assert canonical_form(right) == canonical_form(genus_one_diagram("CP2R"))


def test_no_reducing_certificate_when_supports_merge():
    t = connected_sum(genus_one_diagram("CP2"), genus_one_diagram("CP2R"))
    alpha = handleslide(t.alpha, 1, 2)
    merged = TrisectionDiagram(2, alpha, t.beta, t.gamma,
                               declared_params=t.declared_params)
    assert find_reducing_certificate(merged) is None
    assert find_reducing_certificate(genus_one_diagram("CP2")) is None


def test_unscramble_recovers_a_scrambled_sum():
    rng = random.Random(7)
    t = connected_sum(connected_sum(genus_one_diagram("CP2"),
                                    genus_one_diagram("S1xS3")),
                      genus_one_diagram("S4STAB1"))
    scrambled = _scrambled(t, rng, steps=5)
    assert not all(cs.all_templated() for cs in scrambled.systems())
    cleaned, scripts = unscramble(scrambled)
    assert canonical_form(cleaned) == canonical_form(t)
    assert all(cs.all_templated() for cs in cleaned.systems())
    assert any(scripts.values())


def test_check_classified_params_cases():
    from trisect.diagram import TrisectionParams
    assert check_classified_params(TrisectionParams(2, 2, 1, 1)).is_verified
    assert check_classified_params(TrisectionParams(2, 2, 1, 0)).is_refuted
    assert check_classified_params(TrisectionParams(3, 2, 2, 1)).is_verified
    assert check_classified_params(TrisectionParams(3, 1, 2, 2)).is_verified
    assert check_classified_params(TrisectionParams(3, 0, 2, 2)).is_refuted
    v = check_classified_params(TrisectionParams(3, 2, 0, 2))
    assert v.is_refuted
    assert v.witness["case"] == "k1=g-1"
    assert check_classified_params(TrisectionParams(4, 2, 1, 1)).is_unknown
    assert check_classified_params(TrisectionParams(1, 0, 0, 0)).is_verified
    assert check_classified_params(TrisectionParams(0, 0, 0, 0)).is_verified


def test_standardize_names_a_clean_sum():
    t = connected_sum(genus_one_diagram("S1xS3"), genus_one_diagram("CP2"))
    names, v = standardize(t)
    assert v.is_verified
    assert sorted(names) == ["CP2", "S1xS3"]
    assert v.witness["kind"] == "decomposition"


def test_standardize_relabels_and_reports_original_names():
    t = connected_sum(genus_one_diagram("S4STAB2"),
                      genus_one_diagram("S4STAB2"))
    params, _ = trisection_params(t)
    assert params.ks == (0, 2, 0)
    names, v = standardize(t)
    assert v.is_verified
    assert names == ["S4STAB2", "S4STAB2"]
    assert v.witness["order"] == "bca"


def test_standardize_handles_a_scrambled_sum():
    rng = random.Random(13)
    t = connected_sum(genus_one_diagram("S1xS3"), genus_one_diagram("CP2R"))
    scrambled = _scrambled(t, rng, steps=6)
    names, v = standardize(scrambled)
    assert v.is_verified
    assert sorted(names) == ["CP2R", "S1xS3"]
    replayed = replay_decomposition(scrambled, v.witness)
    assert sorted(replayed) == ["CP2R", "S1xS3"]


def test_standardize_rejects_out_of_range_parameters():
    t = connected_sum(connected_sum(genus_one_diagram("CP2"),
                                    genus_one_diagram("CP2R")),
                      genus_one_diagram("S1xS3"))
    params, _ = trisection_params(t)
    assert params.ks == (1, 1, 1)
    with pytest.raises(ValueError, match="classified range"):
        standardize(t)


def test_standardize_passes_through_refuted_parameters():
    base = connected_sum(genus_one_diagram("S1xS3"), genus_one_diagram("CP2"))
    wrong = TrisectionDiagram(2, base.alpha, base.beta, base.gamma,
                              declared_params=(2, 1, 1))
    names, v = standardize(wrong)
    assert names == []
    assert v.is_refuted


def test_classify_names_catalog_sums():
    one = genus_one_diagram("CP2")
    name, v = classify_genus_one_sum(one)
    assert (name, v.is_verified) == ("CP2", True)
    t = connected_sum(connected_sum(genus_one_diagram("S1xS3"),
                                    genus_one_diagram("S1xS3")),
                      genus_one_diagram("CP2"))
    name, v = classify_genus_one_sum(t)
    assert name == "#2(S1xS3) # CP2"
    assert v.is_verified
    s4 = connected_sum(genus_one_diagram("S4STAB1"),
                       genus_one_diagram("S4STAB3"))
    name, v = classify_genus_one_sum(s4)
    assert (name, v.is_verified) == ("S4", True)


def _twisted_product_diagram():
    # a valid (2; 0,0,0) diagram whose third system crosses both handles
    alpha = system_from_templates(2, [(1, 1, 0), (2, 1, 0)])
    beta = system_from_templates(2, [(1, 0, 1), (2, 0, 1)])
    gamma = CutSystem(2, (curve_from_word(2, (1, 4)),
                          curve_from_word(2, (2, 3))))
    return TrisectionDiagram(2, alpha, beta, gamma)


def test_classify_reports_unknown_when_stuck():
    t = _twisted_product_diagram()
    params, v = trisection_params(t)
    assert params.ks == (0, 0, 0)
    assert v.is_verified
    name, cv = classify_genus_one_sum(t)
    assert name is None
    assert cv.is_unknown


def test_standardize_range_check_uses_computed_params():
    with pytest.raises(ValueError, match="classified range"):
        standardize(_twisted_product_diagram())


def test_replay_rejects_tampered_witnesses():
    t = connected_sum(genus_one_diagram("S1xS3"), genus_one_diagram("CP2"))
    names, v = standardize(t)
    forged = dict(v.witness)
    forged["names"] = ["CP2", "CP2"]
    with pytest.raises(ValueError):
        replay_decomposition(t, forged)


def test_sum_name_formatting():
    assert sum_name([]) == "S4"
    assert sum_name(["S4STAB1", "S4STAB2"]) == "S4"
    assert sum_name(["CP2"]) == "CP2"
    assert sum_name(["S1xS3", "CP2", "S1xS3"]) == "#2(S1xS3) # CP2"
    assert sum_name(["CP2", "CP2R", "CP2"]) == "CP2 # CP2 # CP2R"
