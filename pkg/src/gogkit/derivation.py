"""Right derivations on fundamental groups, valued in (Z/m)[Γ]^n.

A derivation component f satisfies f(gh) = f(g)·α(h) + f(h), where the
action α is either right translation by h itself ("standard") or by the
image of h under the retraction killing all vertex groups ("twisted").
Components are defined by a table of values on the generators; evaluation
extends the table along the derivation law, and well-definedness amounts to
every defining relator evaluating to zero.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import BadModulus, GluingConditionFailed, NotFinite
from .gog import (
    LETTER,
    VERTEX,
    GraphOfGroups,
    NormalForm,
    Report,
    Subgraph,
    Word,
    ball,
    identity,
    invert,
    multiply,
    parse_word,
    presentation,
    reduce,
    subgraph_group_membership,
    vertex_element,
    vertex_group_membership,
    word_text,
)
from .graph_core import POSITIVE, classify
from .group_ring import (
    RingVector,
    act_right,
    add,
    group_sum,
    ring_data,
    ring_from_data,
    ring_term,
    ring_zero,
    scale,
    subtract,
)

STANDARD = "standard"
TWISTED = "twisted"


@dataclass(frozen=True)
class Component:
    """One coordinate of a derivation: an action tag and generator values."""

    action: str
    values: dict[tuple, RingVector]


@dataclass(frozen=True)
class Derivation:
    """A tuple of derivation components over a common graph of groups and modulus."""

    owner: GraphOfGroups
    mod: int
    components: tuple[Component, ...]

    @property
    def rank(self) -> int:
        return len(self.components)


def free_retract(g: GraphOfGroups, x: NormalForm) -> NormalForm:
    """Image of x under the retraction killing every vertex group."""
    letters = tuple(syl for syl in x.syllables if syl[0] == LETTER)
    return reduce(g, Word(letters))


def _act(g: GraphOfGroups, vec: RingVector, suffix: NormalForm, action: str) -> RingVector:
    if action == TWISTED:
        suffix = free_retract(g, suffix)
    return act_right(vec, suffix)


def _generator_value(
    g: GraphOfGroups, comp: Component, mod: int, syl: tuple
) -> RingVector:
    zero = ring_zero(g, mod)
    if syl[0] == VERTEX:
        return comp.values.get((VERTEX, syl[1], syl[2]), zero)
    _, eid, exp = syl
    vec = comp.values.get((LETTER, eid), zero)
    if exp > 0:
        return vec
    letter_inv = reduce(g, Word(((LETTER, eid, -1),)))
    return scale(_act(g, vec, letter_inv, comp.action), -1)


def evaluate(d: Derivation, x) -> list[RingVector]:
    """Evaluate every component on a word or normal form."""
    g = d.owner
    syllables = x.syllables if isinstance(x, (NormalForm, Word)) else tuple(x)
    out = []
    for comp in d.components:
        value = ring_zero(g, d.mod)
        suffix = identity(g)
        for syl in reversed(syllables):
            vec = _generator_value(g, comp, d.mod, syl)
            value = add(value, _act(g, vec, suffix, comp.action))
            if syl[0] == VERTEX:
                elem = vertex_element(g, syl[1], syl[2])
            else:
                elem = reduce(g, Word((syl,)))
            suffix = multiply(elem, suffix)
        out.append(value)
    return out


def is_zero(values: list[RingVector]) -> bool:
    return all(v.is_zero() for v in values)


def _generator_alphabet(g: GraphOfGroups) -> list[tuple]:
    out: list[tuple] = []
    for vid in sorted(g.graph.vertices):
        for h in g.vertex_groups[vid].generator_handles():
            out.append((VERTEX, vid, h))
    for eid in sorted(g.graph.edges):
        out.append((LETTER, eid, 1))
        out.append((LETTER, eid, -1))
    return out


def check_well_defined(d: Derivation, samples: int = 500, seed: int = 0) -> Report:
    """Relator evaluation plus sampled equal-word pairs; zero everywhere passes."""
    g = d.owner
    report = Report()
    pres = presentation(g)
    for rel in pres.relators:
        values = evaluate(d, rel)
        for i, v in enumerate(values):
            if not v.is_zero():
                report.fail(
                    f"component {i}: relator {word_text(g, rel)} evaluates to {v.text()}"
                )
    rng = random.Random(seed)
    alphabet = _generator_alphabet(g)
    for _ in range(samples):
        sylls = tuple(rng.choice(alphabet) for _ in range(rng.randint(0, 8)))
        w = Word(sylls)
        x = reduce(g, w)
        lhs = evaluate(d, w)
        rhs = evaluate(d, x)
        if lhs != rhs:
            report.fail(
                f"law breaks on word {word_text(g, w)} vs its normal form {x.text()}"
            )
            break
    report.counts["relators"] = len(pres.relators)
    report.counts["sampled_pairs"] = samples
    return report


def _component_from_text_table(
    g: GraphOfGroups, action: str, table: dict[str, RingVector]
) -> Component:
    values: dict[tuple, RingVector] = {}
    for key, vec in table.items():
        w = parse_word(g, key)
        if len(w.syllables) != 1:
            raise ValueError(f"derivation table keys must be single generators, got {key!r}")
        syl = w.syllables[0]
        if syl[0] == LETTER:
            if syl[2] < 0:
                raise ValueError(f"give letter values on t(e), not its inverse: {key!r}")
            values[(LETTER, syl[1])] = vec
        else:
            if g.vertex_groups[syl[1]].is_identity(syl[2]):
                raise ValueError(f"identity elements carry no value: {key!r}")
            values[(VERTEX, syl[1], syl[2])] = vec
    return Component(action, values)


def glue(g: GraphOfGroups, mod: int, components: list[tuple[str, dict[str, RingVector]]]) -> Derivation:
    """Assemble a derivation from generator tables and enforce the gluing condition.

    Every defining relator must evaluate to zero in every component; the first
    violation raises GluingConditionFailed carrying (edge, element, residue).
    """
    built = tuple(
        _component_from_text_table(g, action, table) for action, table in components
    )
    d = Derivation(g, mod, built)
    for eid in sorted(g.graph.edges):
        if eid in g.tree.edges:
            rel = Word(((LETTER, eid, 1),))
            values = evaluate(d, rel)
            for v in values:
                if not v.is_zero():
                    raise GluingConditionFailed(eid, None, v.text())
    for eid in sorted(g.graph.edges):
        d1v, d0v = g.graph.d1[eid], g.graph.d0[eid]
        vg1 = g.vertex_groups[d1v]
        for k in range(g.edge_groups[eid].order):
            rel = Word(
                (
                    (VERTEX, d1v, vg1.inv(g.incl(eid, 1, k))),
                    (LETTER, eid, -1),
                    (VERTEX, d0v, g.incl(eid, 0, k)),
                    (LETTER, eid, 1),
                )
            )
            values = evaluate(d, rel)
            for v in values:
                if not v.is_zero():
                    raise GluingConditionFailed(eid, k, v.text())
    return d


# ---------------------------------------------------------------------------
# The two constructed families


def _edge_image_sum(g: GraphOfGroups, eid: str, mod: int) -> RingVector:
    """Σκ over the image of the edge group at the d1 end, as elements of Γ."""
    d1v = g.graph.d1[eid]
    elems = [
        vertex_element(g, d1v, g.incl(eid, 1, k)) for k in range(g.edge_groups[eid].order)
    ]
    return group_sum(g, elems, mod)


def dunwoody_derivation(g: GraphOfGroups, v: str, w: str, mod: int) -> Derivation:
    """The single-component derivation separating w from v across their tree path.

    With P the formal sum of the base-edge-group image, positive-vertex
    elements map to P·(x − 1); stable letters map by the sign of their
    endpoints.  Its kernel meets each positive vertex group exactly in the
    edge-group image.
    """
    if not g.all_tables():
        raise NotFinite("derivations need finite table vertex groups")
    signs = classify(g.tree, v, w)
    P = _edge_image_sum(g, signs.base_edge, mod)
    values: dict[tuple, RingVector] = {}
    for vid in sorted(g.graph.vertices):
        if signs.vertex_signs[vid] != POSITIVE:
            continue
        for h in g.vertex_groups[vid].generator_handles():
            x = vertex_element(g, vid, h)
            values[(VERTEX, vid, h)] = subtract(act_right(P, x), P)
    for eid in sorted(g.graph.edges):
        if eid in g.tree.edges:
            continue
        d0_pos = signs.vertex_signs[g.graph.d0[eid]] == POSITIVE
        d1_pos = signs.vertex_signs[g.graph.d1[eid]] == POSITIVE
        letter = reduce(g, Word(((LETTER, eid, 1),)))
        if d0_pos and d1_pos:
            values[(LETTER, eid)] = subtract(act_right(P, letter), P)
        elif d1_pos and not d0_pos:
            values[(LETTER, eid)] = scale(P, -1)
        elif d0_pos and not d1_pos:
            values[(LETTER, eid)] = act_right(P, letter)
    return Derivation(g, mod, (Component(STANDARD, values),))


def _letter_component(g: GraphOfGroups, eid: str, mod: int) -> Component:
    """Standard-action component detecting the stable letter of a non-tree edge.

    The only relator family touching t is X·∂1(k) = X, so the value must be
    right-invariant under the edge-group image; (t − 1)·Σκ is the canonical
    choice and vanishes on no reduced word using the letter.
    """
    P = _edge_image_sum(g, eid, mod)
    letter = reduce(g, Word(((LETTER, eid, 1),)))
    t_then_k = group_sum(
        g,
        [
            multiply(letter, vertex_element(g, g.graph.d1[eid], g.incl(eid, 1, k)))
            for k in range(g.edge_groups[eid].order)
        ],
        mod,
    )
    return Component(STANDARD, {(LETTER, eid): subtract(t_then_k, P)})


def accessibility_derivation(g: GraphOfGroups, v: str, mod: int) -> Derivation:
    """One component per tree direction plus one per stable letter; rank |E|.

    Raises BadModulus when the modulus divides an edge-group order, which
    would collapse the edge-image sums the construction relies on.
    """
    if not g.all_tables():
        raise NotFinite("derivations need finite table vertex groups")
    for eid in sorted(g.graph.edges):
        if g.edge_groups[eid].order % mod == 0:
            raise BadModulus(
                f"modulus {mod} divides the order of the edge group at {eid!r}"
            )
    components: list[Component] = []
    for w in sorted(g.graph.vertices):
        if w == v:
            continue
        components.extend(dunwoody_derivation(g, v, w, mod).components)
    for eid in sorted(g.graph.edges):
        if eid not in g.tree.edges:
            components.append(_letter_component(g, eid, mod))
    return Derivation(g, mod, tuple(components))


def kernel_scan(d: Derivation, designation, radius: int) -> Report:
    """Compare {x : f(x) = 0} with a designated subgroup over a whole ball.

    ``designation`` is a vertex id (membership in that vertex group) or a
    Subgraph (membership in the subgraph's fundamental group).
    """
    g = d.owner
    report = Report()
    elements = ball(g, radius)
    mismatches = 0
    for x in elements:
        zero = is_zero(evaluate(d, x))
        if isinstance(designation, Subgraph):
            member = subgraph_group_membership(g, designation, x)
        else:
            member = vertex_group_membership(g, designation, x)
        if zero != member:
            mismatches += 1
            if len(report.problems) < 5:
                verb = "killed but outside" if zero else "detected but inside"
                report.fail(f"{x.text()}: {verb} the designated subgroup")
    report.ok = mismatches == 0
    report.counts["elements"] = len(elements)
    report.counts["mismatches"] = mismatches
    return report


# ---------------------------------------------------------------------------
# Serialization


_KEY_ORDER = {VERTEX: 0, LETTER: 1}


def derivation_data(d: Derivation) -> dict:
    components = []
    for comp in d.components:
        values = {}
        for key in sorted(comp.values, key=lambda k: (_KEY_ORDER[k[0]], k[1:])):
            if key[0] == VERTEX:
                text = word_text(d.owner, Word(((VERTEX, key[1], key[2]),)))
            else:
                text = f"t({key[1]})"
            values[text] = ring_data(comp.values[key])["terms"]
        components.append({"action": comp.action, "values": values})
    return {"mod": d.mod, "components": components}


def derivation_from_data(g: GraphOfGroups, data: dict) -> Derivation:
    if "mod" not in data or "components" not in data:
        raise ValueError("derivation data needs 'mod' and 'components'")
    mod = int(data["mod"])
    components = []
    for entry in data["components"]:
        action = entry.get("action", STANDARD)
        if action not in (STANDARD, TWISTED):
            raise ValueError(f"unknown action {action!r}")
        table = {
            key: ring_from_data(g, {"mod": mod, "terms": terms})
            for key, terms in entry.get("values", {}).items()
        }
        components.append((action, table))
    built = tuple(
        _component_from_text_table(g, action, table) for action, table in components
    )
    return Derivation(g, mod, built)
