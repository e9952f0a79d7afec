"""Tests for the word problem: reduction, balls, membership, malnormality.

Soundness and canonicity of normal forms are checked against independent
models: SL(2,Z) matrices for the amalgam and the path, affine maps for the
free product, and a free-product-times-center model for the HNN fixture.
"""
import pytest
from hypothesis import given, settings, strategies as st

from gogkit.errors import (
    BadSubgraph,
    BallTooLarge,
    MalformedWord,
    MixedOwners,
    NotFinite,
)
from gogkit.fixtures import load_fixture
from gogkit.gog import (
    LETTER,
    VERTEX,
    Subgraph,
    Word,
    ball,
    equal,
    identity,
    invert,
    multiply,
    nf,
    parse_word,
    presentation,
    reduce,
    subgraph_group_membership,
    validate,
    verify_relative_malnormality,
    vertex_element,
    vertex_group_membership,
    vertex_handle_of,
    word_text,
)
from gogkit.finite_group import subgroup_closure

from _oracles import (
    AFFINE_ID,
    I2,
    c2c2_affine,
    c4c2c4_matrix,
    c4c6_matrix,
    c6hnn_in_vertex,
    c6hnn_model,
)

# ---------------------------------------------------------------------------
# Word alphabets and oracle adapters


def oracle_sylls(word: Word):
    """Convert syllables to (generator, exponent) pairs for the matrix oracles."""
    out = []
    for syl in word.syllables:
        if syl[0] == VERTEX:
            out.append((syl[1], syl[2]))
        # Stable letters of tree edges are trivial; these fixtures have no others.
    return out


def hnn_sylls(word: Word):
    out = []
    for syl in word.syllables:
        if syl[0] == VERTEX:
            out.append(("b", syl[2]))
        else:
            out.append(("t", syl[2]))
    return out


def words_over(alphabet, max_size=8):
    return st.lists(st.sampled_from(alphabet), max_size=max_size).map(
        lambda sylls: Word(tuple(sylls))
    )


C4C6_ALPHABET = (
    [(VERTEX, "v", k) for k in range(1, 4)]
    + [(VERTEX, "w", k) for k in range(1, 6)]
    + [(LETTER, "e", 1), (LETTER, "e", -1)]
)
C4C2C4_ALPHABET = (
    [(VERTEX, "u", k) for k in range(1, 4)]
    + [(VERTEX, "m", 1)]
    + [(VERTEX, "w", k) for k in range(1, 4)]
)
C2C2_ALPHABET = [(VERTEX, "u", 1), (VERTEX, "w", 1)]
C6HNN_ALPHABET = [(VERTEX, "v", k) for k in range(1, 6)] + [
    (LETTER, "t", 1),
    (LETTER, "t", -1),
]

AMALGAM = load_fixture("c4c6")
PATH = load_fixture("c4c2c4")
FREE = load_fixture("c2c2")
HNN = load_fixture("c6hnn")


# ---------------------------------------------------------------------------
# Parsing and serialization


def test_parse_round_trip(c4c6):
    for text in ("1", "v:g2", "w:g3 * t(e) * v:g1", "t(e)^-1 * w:g5"):
        w = parse_word(c4c6, text)
        assert word_text(c4c6, w) == text


def test_identity_serializes_as_one(c4c6):
    assert identity(c4c6).text() == "1"
    assert nf(c4c6, "1").syllables == ()


def test_parse_errors(c4c6):
    for bad in (
        "z:g1",  # unknown vertex
        "t(f)",  # unknown edge
        "v:g9",  # element index out of range
        "v:q1",  # not an element reference
        "v:g1 * * w:g2",  # empty syllable
        "v:{u:g1}",  # braces on a table vertex
        "v",  # no colon
    ):
        with pytest.raises(MalformedWord):
            parse_word(c4c6, bad)


def test_normal_form_reparses_to_itself(c4c6):
    x = nf(c4c6, "w:g4 * v:g3 * w:g5 * v:g2")
    assert nf(c4c6, x.text()) == x


# ---------------------------------------------------------------------------
# Oracle cross-checks


@settings(deadline=None)
@given(words_over(C4C6_ALPHABET), words_over(C4C6_ALPHABET))
def test_amalgam_equality_matches_matrices(w1, w2):
    x, y = reduce(AMALGAM, w1), reduce(AMALGAM, w2)
    assert equal(x, y) == (c4c6_matrix(oracle_sylls(w1)) == c4c6_matrix(oracle_sylls(w2)))


@settings(deadline=None)
@given(words_over(C4C6_ALPHABET))
def test_amalgam_triviality_matches_matrices(w):
    assert (not reduce(AMALGAM, w).syllables) == (c4c6_matrix(oracle_sylls(w)) == I2)


@settings(deadline=None)
@given(words_over(C4C2C4_ALPHABET))
def test_path_triviality_matches_matrices(w):
    assert (not reduce(PATH, w).syllables) == (c4c2c4_matrix(oracle_sylls(w)) == I2)


@settings(deadline=None)
@given(words_over(C4C2C4_ALPHABET), words_over(C4C2C4_ALPHABET))
def test_path_equality_matches_matrices(w1, w2):
    lhs = equal(reduce(PATH, w1), reduce(PATH, w2))
    assert lhs == (c4c2c4_matrix(oracle_sylls(w1)) == c4c2c4_matrix(oracle_sylls(w2)))


@settings(deadline=None)
@given(words_over(C2C2_ALPHABET, max_size=10))
def test_free_product_matches_affine_maps(w):
    assert (not reduce(FREE, w).syllables) == (c2c2_affine(oracle_sylls(w)) == AFFINE_ID)


@settings(deadline=None)
@given(words_over(C6HNN_ALPHABET), words_over(C6HNN_ALPHABET))
def test_hnn_equality_matches_split_model(w1, w2):
    lhs = equal(reduce(HNN, w1), reduce(HNN, w2))
    assert lhs == (c6hnn_model(hnn_sylls(w1)) == c6hnn_model(hnn_sylls(w2)))


@settings(deadline=None)
@given(words_over(C6HNN_ALPHABET))
def test_hnn_vertex_membership_matches_split_model(w):
    x = reduce(HNN, w)
    assert vertex_group_membership(HNN, "v", x) == c6hnn_in_vertex(
        c6hnn_model(hnn_sylls(w))
    )


# ---------------------------------------------------------------------------
# Algebraic laws


@settings(deadline=None)
@given(words_over(C4C6_ALPHABET))
def test_reduce_is_idempotent(w):
    x = reduce(AMALGAM, w)
    assert reduce(AMALGAM, Word(x.syllables)) == x


@settings(deadline=None)
@given(words_over(C6HNN_ALPHABET))
def test_reduce_is_idempotent_hnn(w):
    x = reduce(HNN, w)
    assert reduce(HNN, Word(x.syllables)) == x


@settings(deadline=None)
@given(words_over(C4C6_ALPHABET))
def test_inverse_law(w):
    x = reduce(AMALGAM, w)
    assert not multiply(x, invert(x)).syllables
    assert not multiply(invert(x), x).syllables


@settings(deadline=None)
@given(
    words_over(C4C6_ALPHABET, max_size=5),
    words_over(C4C6_ALPHABET, max_size=5),
    words_over(C4C6_ALPHABET, max_size=5),
)
def test_multiplication_is_associative(w1, w2, w3):
    x, y, z = (reduce(AMALGAM, w) for w in (w1, w2, w3))
    assert multiply(multiply(x, y), z) == multiply(x, multiply(y, z))


def test_mixed_owners_rejected():
    g1, g2 = load_fixture("c4c6"), load_fixture("c4c6")
    with pytest.raises(MixedOwners):
        multiply(identity(g1), identity(g2))
    with pytest.raises(MixedOwners):
        equal(identity(g1), identity(g2))


# ---------------------------------------------------------------------------
# Specific identifications


def test_amalgam_identification(c4c6):
    assert equal(nf(c4c6, "v:g2"), nf(c4c6, "w:g3"))
    assert nf(c4c6, "v:g2 * w:g3").syllables == ()


def test_path_identification(c4c2c4):
    assert equal(nf(c4c2c4, "u:g2"), nf(c4c2c4, "m:g1"))
    assert equal(nf(c4c2c4, "w:g2"), nf(c4c2c4, "m:g1"))
    assert equal(nf(c4c2c4, "u:g2"), nf(c4c2c4, "w:g2"))


def test_hnn_britton_relation(c6hnn):
    assert equal(nf(c6hnn, "t(t)^-1 * v:g3 * t(t)"), nf(c6hnn, "v:g3"))
    conj = nf(c6hnn, "t(t) * v:g1 * t(t)^-1")
    assert len(conj.syllables) == 3
    assert not vertex_group_membership(c6hnn, "v", conj)


# ---------------------------------------------------------------------------
# Presentation


@pytest.mark.parametrize(
    "name, n_gens, n_relators",
    [
        ("c4c6", 3 + 5 + 1, 1 + 2),
        ("c6hnn", 5 + 1, 0 + 2),
        ("c4c2c4", 3 + 1 + 3 + 2, 2 + 4),
        ("c2c2", 1 + 1 + 1, 1 + 1),
    ],
)
def test_presentation_counts(name, n_gens, n_relators):
    g = load_fixture(name)
    pres = presentation(g)
    assert len(pres.generators) == n_gens
    assert len(pres.relators) == n_relators


def test_presentation_relators_reduce_to_identity():
    for name in ("c4c6", "c6hnn", "c4c2c4", "c2c2"):
        g = load_fixture(name)
        for rel in presentation(g).relators:
            assert reduce(g, rel).syllables == (), f"{name}: {word_text(g, rel)}"


# ---------------------------------------------------------------------------
# Balls


def test_ball_radius_zero(c4c6):
    assert [x.text() for x in ball(c4c6, 0)] == ["1"]


def test_ball_amalgam_radius_one(c4c6):
    # One-syllable words cover a, a², a³, b, ..., b⁵, but b³ = a² collapses,
    # so there are 8 distinct elements including the identity.
    assert len(ball(c4c6, 1)) == 8


def test_ball_free_product(c2c2):
    got = [x.text() for x in ball(c2c2, 2)]
    assert got == ["1", "u:g1", "w:g1", "u:g1 * w:g1", "w:g1 * u:g1"]


def test_ball_nesting(c4c6):
    b2 = {x.syllables for x in ball(c4c6, 2)}
    b3 = {x.syllables for x in ball(c4c6, 3)}
    assert b2 <= b3


def test_ball_cap(c6hnn):
    with pytest.raises(BallTooLarge):
        ball(c6hnn, 6, max_size=100)


def test_ball_deterministic(c4c6):
    first = [x.text() for x in ball(c4c6, 3)]
    second = [x.text() for x in ball(c4c6, 3)]
    assert first == second


def test_ball_rejects_negative_radius(c4c6):
    with pytest.raises(ValueError):
        ball(c4c6, -1)


def test_ball_needs_table_groups(expand_demo):
    with pytest.raises(NotFinite):
        ball(expand_demo, 2)


# ---------------------------------------------------------------------------
# Membership


def test_subgraph_membership(c4c6):
    sub = Subgraph.of({"v"})
    assert subgraph_group_membership(c4c6, sub, nf(c4c6, "v:g1"))
    assert subgraph_group_membership(c4c6, sub, nf(c4c6, "w:g3"))  # b³ = a²
    assert not subgraph_group_membership(c4c6, sub, nf(c4c6, "w:g1"))


def test_subgraph_membership_whole_graph(c6hnn):
    sub = Subgraph.of({"v"}, {"t"})
    assert subgraph_group_membership(c6hnn, sub, nf(c6hnn, "t(t) * v:g1"))


def test_subgraph_membership_excludes_letter(c6hnn):
    sub = Subgraph.of({"v"})
    assert not subgraph_group_membership(c6hnn, sub, nf(c6hnn, "t(t)"))


def test_bad_subgraphs(c4c6, c4c2c4):
    with pytest.raises(BadSubgraph):
        subgraph_group_membership(c4c6, Subgraph.of({"w"}), identity(c4c6))
    with pytest.raises(BadSubgraph):
        subgraph_group_membership(c4c6, Subgraph.of({"v", "w"}), identity(c4c6))
    with pytest.raises(BadSubgraph):
        subgraph_group_membership(c4c6, Subgraph.of({"v", "z"}), identity(c4c6))
    with pytest.raises(BadSubgraph):
        # Edge without its endpoints.
        subgraph_group_membership(c4c2c4, Subgraph.of({"m"}, {"e1"}), identity(c4c2c4))


def test_vertex_membership_away_from_basepoint(c4c6):
    x = nf(c4c6, "v:g2")  # a² = b³ lives in the w vertex group too
    assert vertex_group_membership(c4c6, "w", x)
    assert vertex_handle_of(c4c6, "w", x) == 3
    y = nf(c4c6, "v:g1")
    assert not vertex_group_membership(c4c6, "w", y)
    assert vertex_handle_of(c4c6, "w", y) is None
    assert vertex_handle_of(c4c6, "w", identity(c4c6)) == 0


# ---------------------------------------------------------------------------
# Relative malnormality


def test_malnormality_amalgam(c4c6):
    chi = subgroup_closure(c4c6.vertex_groups["w"].group, [3])
    report = verify_relative_malnormality(c4c6, "w", chi, radius=3)
    assert report.ok, report.summary()


def test_malnormality_free_product(c2c2):
    chi = subgroup_closure(c2c2.vertex_groups["u"].group, [])
    report = verify_relative_malnormality(c2c2, "u", chi, radius=4)
    assert report.ok, report.summary()


def test_malnormality_counterexample(c4c6):
    trivial = subgroup_closure(c4c6.vertex_groups["w"].group, [])
    report = verify_relative_malnormality(c4c6, "w", trivial, radius=2)
    assert not report.ok
    assert "H ∩ H^s" in report.problems[0]


def test_malnormality_wrong_shape(c4c2c4):
    chi = subgroup_closure(c4c2c4.vertex_groups["m"].group, [])
    report = verify_relative_malnormality(c4c2c4, "m", chi, radius=2)
    assert not report.ok


# ---------------------------------------------------------------------------
# Composite vertex groups


def test_composite_word_round_trip(expand_demo):
    text = "m:{u:g1 * w:g1} * z:g1"
    w = parse_word(expand_demo, text)
    assert word_text(expand_demo, w) == text


def test_composite_inclusion_identifies(expand_demo):
    # The edge glues z's generator to the left factor of the nested group.
    assert equal(nf(expand_demo, "z:g1"), nf(expand_demo, "m:{u:g1}"))
    assert not equal(nf(expand_demo, "z:g1"), nf(expand_demo, "m:{w:g1}"))
    x = nf(expand_demo, "m:{u:g1 * w:g1} * m:{w:g1}")
    assert equal(x, nf(expand_demo, "z:g1"))


def test_validate_reports(c4c6):
    assert validate(c4c6).ok
    broken = load_fixture("c4c6")
    broken.inclusions["e"] = ((0, 2), (0, 2))  # b² is not an involution
    broken._preimages[("e", 1)] = {0: 0, 2: 1}
    report = validate(broken)
    assert not report.ok
    assert any("not a homomorphism" in p for p in report.problems)


def test_vertex_element_and_identity_helpers(c4c6):
    assert vertex_element(c4c6, "v", 1).text() == "v:g1"
    assert identity(c4c6).syllables == ()
