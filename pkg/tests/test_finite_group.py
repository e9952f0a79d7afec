"""Tests for table groups, homomorphism enumeration, and conjugacy helpers."""
import pytest

from gogkit.errors import NoIdentity, NonAssociative, NotPermutationRow
from gogkit.finite_group import (
    Subgroup,
    conjugate_subgroup,
    enumerate_embeddings,
    enumerate_homs,
    hom_from_generator_images,
    is_conjugate_into,
    make_group,
    subgroup_closure,
    trivial_group,
)

from _oracles import count_embeddings_brute


def test_cyclic_basics():
    g = make_group("cyclic 6")
    assert g.order == 6
    assert g.identity == 0
    assert g.mul(4, 5) == 3
    assert g.inv(2) == 4
    assert g.element_order(2) == 3
    assert g.label(1) == "x"


def test_dihedral_relations():
    """r has order n, s has order 2, and s·r·s = r⁻¹."""
    d = make_group("dihedral 4")
    assert d.order == 8
    r, s = 1, 4
    assert d.element_order(r) == 4
    assert d.element_order(s) == 2
    assert d.mul(d.mul(s, r), s) == d.inv(r)


def test_symmetric_composition():
    s3 = make_group("symmetric 3")
    assert s3.order == 6
    # Labels are one-line images: p maps i to label[i].
    perms = [tuple(int(c) for c in s3.label(i)) for i in range(6)]
    for i in range(6):
        for j in range(6):
            composed = tuple(perms[i][perms[j][k]] for k in range(3))
            assert perms[s3.mul(i, j)] == composed


def test_product_group():
    g = make_group(["cyclic 2", "cyclic 3"])
    assert g.order == 6
    assert sorted(g.element_order(i) for i in range(6)) == [1, 2, 3, 3, 6, 6]


def test_table_validation_errors():
    with pytest.raises(NotPermutationRow):
        make_group({"table": [[0, 1], [1, 1]]})
    with pytest.raises(NoIdentity):
        make_group({"table": [[0, 1, 2], [2, 0, 1], [1, 2, 0]]})
    # The rotation table of order 3 relabelled to break associativity while
    # keeping rows and columns Latin and an identity in place.
    with pytest.raises(NonAssociative):
        make_group(
            {
                "table": [
                    [0, 1, 2, 3, 4],
                    [1, 0, 3, 4, 2],
                    [2, 4, 0, 1, 3],
                    [3, 2, 4, 0, 1],
                    [4, 3, 1, 2, 0],
                ]
            }
        )
    with pytest.raises(ValueError):
        make_group("unitary 3")


def test_subgroup_closure():
    c6 = make_group("cyclic 6")
    assert subgroup_closure(c6, [2]).elements == (0, 2, 4)
    assert subgroup_closure(c6, [3]).elements == (0, 3)
    assert subgroup_closure(c6, []).elements == (0,)
    d4 = make_group("dihedral 4")
    assert subgroup_closure(d4, [4]).elements == (0, 4)


@pytest.mark.parametrize(
    "source, target, expected",
    [
        ("cyclic 2", "cyclic 4", 1),
        ("cyclic 2", "cyclic 6", 1),
        ("cyclic 3", "cyclic 4", 0),
        ("cyclic 2", "symmetric 3", 3),
        ("cyclic 3", "symmetric 3", 2),
    ],
)
def test_embedding_counts(source, target, expected):
    src, tgt = make_group(source), make_group(target)
    found = enumerate_embeddings(src, tgt)
    assert len(found) == expected
    assert count_embeddings_brute(src.table, tgt.table) == expected


def test_embeddings_match_brute_force_on_mixed_pairs():
    pairs = [
        ("cyclic 4", "dihedral 4"),
        ("cyclic 6", "symmetric 3"),
        (["cyclic 2", "cyclic 2"], "dihedral 4"),
        ("symmetric 3", "symmetric 3"),
    ]
    for a, b in pairs:
        src, tgt = make_group(a), make_group(b)
        assert len(enumerate_embeddings(src, tgt)) == count_embeddings_brute(
            src.table, tgt.table
        )


def test_hom_enumeration_is_complete_and_sorted():
    c3, s3 = make_group("cyclic 3"), make_group("symmetric 3")
    homs = enumerate_homs(c3, s3)
    assert len(homs) == 3  # trivial plus the two embeddings
    assert homs == sorted(homs, key=lambda h: h.images)
    for h in homs:
        for i in range(3):
            for j in range(3):
                assert h.apply(c3.mul(i, j)) == s3.mul(h.apply(i), h.apply(j))


def test_conjugacy_helpers():
    s3 = make_group("symmetric 3")
    # Order-2 subgroups of S3 are all conjugate.
    twos = [i for i in range(6) if s3.element_order(i) == 2]
    assert len(twos) == 3
    a = subgroup_closure(s3, [twos[0]])
    b = subgroup_closure(s3, [twos[1]])
    h = is_conjugate_into(a, b, s3)
    assert h is not None
    assert set(conjugate_subgroup(a, h).elements) <= set(b.elements)
    # C3 does not fit inside an order-2 subgroup.
    c3 = subgroup_closure(s3, [t for t in range(6) if s3.element_order(t) == 3][:1])
    assert is_conjugate_into(c3, a, s3) is None


def test_hom_from_generator_images():
    c6, c3 = make_group("cyclic 6"), make_group("cyclic 3")
    h = hom_from_generator_images(c6, c3, [(1, 1)])
    assert h is not None
    assert h.images == (0, 1, 2, 0, 1, 2)
    assert hom_from_generator_images(c6, c3, [(1, 0)]).images == (0,) * 6
    with pytest.raises(ValueError):
        hom_from_generator_images(c6, c3, [(2, 0)])  # 2 generates only C3
    # No hom can send an order-4 element to an order-3 one.
    c4 = make_group("cyclic 4")
    assert hom_from_generator_images(c4, c3, [(1, 1)]) is None


def test_trivial_group():
    assert trivial_group().order == 1


def test_conjugate_convention():
    """x^g means g⁻¹·x·g throughout."""
    s3 = make_group("symmetric 3")
    for x in range(6):
        for g in range(6):
            assert s3.conjugate(x, g) == s3.mul(s3.mul(s3.inv(g), x), g)
