from __future__ import annotations

import random

import pytest

from trisect.homology import (HomologyClass, abelianize, algebraic_intersection,
                              lagrangian_verdict)


def _pairing_oracle(u, v):
    """Independent bilinear expansion over the basis pair table."""
    g = u.genus
    total = 0
    for i in range(2 * g):
        for j in range(2 * g):
            # <a_h, b_h> = +1, <b_h, a_h> = -1, all else 0
            if i % 2 == 0 and j == i + 1:
                form = 1
            elif i % 2 == 1 and j == i - 1:
                form = -1
            else:
                form = 0
            total += u.coeffs[i] * v.coeffs[j] * form
    return total


def test_pairing_frozen_example():
    # (2 a1 + b2, a1 - 3 b1) at genus 2; oracle value frozen at -6
    u = HomologyClass(2, (2, 0, 0, 1))
    v = HomologyClass(2, (1, -3, 0, 0))
    assert _pairing_oracle(u, v) == -6
    assert algebraic_intersection(u, v) == -6


def test_pairing_matches_oracle_random():
    rng = random.Random(31)
    for _ in range(100):
        g = rng.randint(0, 4)
        u = HomologyClass(g, tuple(rng.randint(-5, 5) for _ in range(2 * g)))
        v = HomologyClass(g, tuple(rng.randint(-5, 5) for _ in range(2 * g)))
        got = algebraic_intersection(u, v)
        assert got == _pairing_oracle(u, v)
        assert algebraic_intersection(v, u) == -got  # antisymmetry


def test_pairing_basis_convention():
    a1 = HomologyClass.basis_a(2, 1)
    b1 = HomologyClass.basis_b(2, 1)
    b2 = HomologyClass.basis_b(2, 2)
    assert algebraic_intersection(a1, b1) == 1
    assert algebraic_intersection(b1, a1) == -1
    assert algebraic_intersection(a1, b2) == 0


def test_abelianize():
    # x1 y1 X1 Y1 is null-homologous
    assert abelianize(1, (1, 2, -1, -2)).is_zero
    assert abelianize(2, (1, 2, 2)).coeffs == (1, 2, 0, 0)
    with pytest.raises(ValueError):
        abelianize(1, (5,))


def test_lagrangian_standard_system():
    g = 3
    classes = [HomologyClass.basis_a(g, h) for h in range(1, g + 1)]
    v = lagrangian_verdict(classes, g)
    assert v.is_verified


def test_lagrangian_counts():
    v = lagrangian_verdict([HomologyClass.basis_a(2, 1)], 2)
    assert v.is_refuted and v.witness["kind"] == "count"


def test_lagrangian_pairing_refutation():
    g = 1
    # a1 and b1 pair to 1, cannot cobound
    v = lagrangian_verdict([HomologyClass.basis_a(g, 1)], g)
    assert v.is_verified
    v = lagrangian_verdict([HomologyClass(1, (1, 1))], 1)
    assert v.is_verified  # a1 + b1 is primitive
    v2 = lagrangian_verdict(
        [HomologyClass.basis_a(2, 1), HomologyClass.basis_b(2, 1)], 2)
    assert v2.is_refuted and v2.witness["kind"] == "pairing"


def test_lagrangian_imprimitive():
    # the class 2 a1 spans an index-2 sublattice; oracle: SNF factor 2
    v = lagrangian_verdict([HomologyClass(1, (2, 0))], 1)
    assert v.is_refuted
    assert v.witness["kind"] == "imprimitive"
    assert v.witness["snf_factors"] == [2]


def test_lagrangian_genus_zero():
    assert lagrangian_verdict([], 0).is_verified


def test_lagrangian_invariant_under_unimodular_change():
    # replacing class_i by class_i + class_j preserves the verdict
    rng = random.Random(5)
    for _ in range(40):
        g = rng.randint(1, 4)
        classes = [HomologyClass.basis_a(g, h) for h in range(1, g + 1)]
        # scramble with unimodular column moves
        for _ in range(12):
            i, j = rng.randrange(g), rng.randrange(g)
            if i == j:
                continue
            classes[i] = classes[i].add(classes[j]) if rng.random() < 0.5 \
                else classes[i].sub(classes[j])
        assert lagrangian_verdict(classes, g).is_verified
