"""Finite quotients of fundamental groups: search, certificates, coset functionals.

A quotient is stored as one image array per vertex group plus one image per
stable letter; tree letters always map to the identity.  Searches walk a
deterministic candidate list (cyclic groups up to order 24, then symmetric
groups up to degree 6 by default) and enumerate generator images in
lexicographic order, so the first hit is reproducible.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

from .errors import Exhausted
from .finite_group import (
    FiniteGroup,
    Subgroup,
    _extend_hom,
    _generating_sequence,
    make_group,
)
from .gog import (
    LETTER,
    VERTEX,
    GraphOfGroups,
    NormalForm,
    Subgraph,
    TableVertexGroup,
    Word,
    _check_subgraph,
)
from .graph_core import FiniteGraph, SpanningTree
from .group_ring import RingVector, push_to_quotient


@dataclass(frozen=True)
class FiniteQuotient:
    """A homomorphism from a fundamental group onto (into) a finite group."""

    owner: GraphOfGroups
    target: FiniteGroup
    vertex_images: dict[str, tuple[int, ...]]
    letter_images: dict[str, int]

    def image_of(self, x) -> int:
        """Image of a word or normal form in the target group."""
        syllables = x.syllables if isinstance(x, (NormalForm, Word)) else tuple(x)
        out = self.target.identity
        for syl in syllables:
            if syl[0] == VERTEX:
                out = self.target.mul(out, self.vertex_images[syl[1]][syl[2]])
            else:
                img = self.letter_images[syl[1]]
                if syl[2] < 0:
                    img = self.target.inv(img)
                out = self.target.mul(out, img)
        return out

    def is_vertex_injective(self) -> bool:
        return all(
            len(set(images)) == len(images) for images in self.vertex_images.values()
        )

    def push(self, u: RingVector) -> dict[int, int]:
        return push_to_quotient(u, self.target, self.image_of)


def quotient_from_images(
    g: GraphOfGroups,
    target: FiniteGroup,
    vertex_images: dict[str, tuple[int, ...]],
    letter_images: dict[str, int],
) -> FiniteQuotient | None:
    """Assemble a quotient and check every defining relator; None if not a hom."""
    q = FiniteQuotient(g, target, dict(vertex_images), dict(letter_images))
    for vid in g.graph.vertices:
        vg = g.vertex_groups[vid]
        if not isinstance(vg, TableVertexGroup):
            return None
        images = vertex_images.get(vid)
        if images is None or len(images) != vg.group.order:
            return None
        for i in range(vg.group.order):
            for j in range(vg.group.order):
                if images[vg.group.mul(i, j)] != target.mul(images[i], images[j]):
                    return None
    for eid in g.graph.edges:
        if eid in g.tree.edges and letter_images.get(eid, target.identity) != target.identity:
            return None
        if eid not in letter_images:
            return None
    if not _relators_die(g, q):
        return None
    return q


def _relators_die(g: GraphOfGroups, q: FiniteQuotient) -> bool:
    t = q.target
    for eid in g.graph.edges:
        timg = q.letter_images[eid]
        if eid in g.tree.edges and timg != t.identity:
            return False
        for k in range(g.edge_groups[eid].order):
            lhs = q.vertex_images[g.graph.d1[eid]][g.incl(eid, 1, k)]
            rhs = t.mul(t.mul(t.inv(timg), q.vertex_images[g.graph.d0[eid]][g.incl(eid, 0, k)]), timg)
            if lhs != rhs:
                return False
    return True


def default_targets() -> list[FiniteGroup]:
    """Cyclic groups of order 2..24, then symmetric groups of degree 3..6."""
    out = [make_group(f"cyclic {n}") for n in range(2, 25)]
    out.extend(make_group(f"symmetric {n}") for n in range(3, 7))
    return out


def _resolve_targets(targets) -> list[FiniteGroup]:
    if targets is None:
        return default_targets()
    if isinstance(targets, int):
        out = [make_group(f"cyclic {n}") for n in range(2, 25)]
        out.extend(make_group(f"symmetric {n}") for n in range(3, targets + 1))
        return out
    return [make_group(t) for t in targets]


def _iter_quotients(g: GraphOfGroups, target: FiniteGroup):
    """All quotients onto a fixed target, in lexicographic image order."""
    vertex_ids = sorted(g.graph.vertices)
    gens: list[tuple[str, list[int]]] = []
    for vid in vertex_ids:
        vg = g.vertex_groups[vid]
        if not isinstance(vg, TableVertexGroup):
            return
        gens.append((vid, _generating_sequence(vg.group)))
    candidate_lists = []
    for vid, seq in gens:
        group = g.vertex_groups[vid].group
        for s in seq:
            o = group.element_order(s)
            candidate_lists.append(
                [t for t in range(target.order) if o % target.element_order(t) == 0]
            )
    letters = [e for e in sorted(g.graph.edges) if e not in g.tree.edges]
    for e in letters:
        candidate_lists.append(list(range(target.order)))
    flat_gens = [(vid, s) for vid, seq in gens for s in seq]
    for combo in itertools.product(*candidate_lists):
        vertex_images: dict[str, tuple[int, ...]] = {}
        pos = 0
        ok = True
        for vid, seq in gens:
            images = combo[pos : pos + len(seq)]
            pos += len(seq)
            group = g.vertex_groups[vid].group
            if not seq:
                arr = (target.identity,) * group.order
            else:
                arr = _extend_hom(group, target, seq, list(images))
            if arr is None:
                ok = False
                break
            vertex_images[vid] = arr
        if not ok:
            continue
        letter_images = {e: target.identity for e in g.graph.edges if e in g.tree.edges}
        for e, img in zip(letters, combo[pos:]):
            letter_images[e] = img
        q = FiniteQuotient(g, target, vertex_images, letter_images)
        if _relators_die(g, q):
            yield q


def subgraph_gog(g: GraphOfGroups, sub: Subgraph) -> GraphOfGroups:
    """The restriction of g to a designated subgraph, sharing the basepoint."""
    _check_subgraph(g, sub)
    vertices = tuple(v for v in g.graph.vertices if v in sub.vertices)
    edges = tuple(e for e in g.graph.edges if e in sub.edges)
    graph = FiniteGraph(
        vertices, edges, {e: g.graph.d0[e] for e in edges}, {e: g.graph.d1[e] for e in edges}
    )
    tree = SpanningTree(graph, frozenset(e for e in g.tree.edges if e in sub.edges))
    return GraphOfGroups(
        graph,
        {v: g.vertex_groups[v] for v in vertices},
        {e: g.edge_groups[e] for e in edges},
        {e: g.inclusions[e] for e in edges},
        tree=tree,
        basepoint=g.basepoint,
        name=f"{g.name}|sub" if g.name else "sub",
    )


def _factors_through(g: GraphOfGroups, q: FiniteQuotient, sub: Subgraph, given: FiniteQuotient) -> bool:
    """Whether the given subgraph quotient factors through q's restriction.

    Equivalently: a map θ with θ(q(s)) = given(s) exists on the subgroup of
    q.target generated by the subgraph generators.
    """
    pairs: dict[int, int] = {q.target.identity: given.target.identity}
    gen_pairs: list[tuple[int, int]] = []
    for vid in sorted(sub.vertices):
        vg = g.vertex_groups[vid]
        for h in vg.generator_handles():
            gen_pairs.append((q.vertex_images[vid][h], given.vertex_images[vid][h]))
    for eid in sorted(sub.edges):
        if eid not in g.tree.edges:
            gen_pairs.append((q.letter_images[eid], given.letter_images[eid]))
    frontier = [q.target.identity]
    while frontier:
        nxt = []
        for a in frontier:
            for ga, gb in gen_pairs:
                b = q.target.mul(a, ga)
                v = given.target.mul(pairs[a], gb)
                if b in pairs:
                    if pairs[b] != v:
                        return False
                else:
                    pairs[b] = v
                    nxt.append(b)
        frontier = nxt
    return True


def search_quotient(
    g: GraphOfGroups,
    goal: str,
    *,
    elements: list[NormalForm] | None = None,
    vertex: str | None = None,
    subgroup: Subgroup | None = None,
    subgraph: Subgraph | None = None,
    given: FiniteQuotient | None = None,
    targets=None,
) -> FiniteQuotient:
    """First quotient (deterministic order) achieving the stated goal.

    Goals: "separate" (every listed element maps away from the identity;
    quotients must be injective on every vertex group), "embed" (injective on
    a designated subgroup of one vertex group), "refine" (the restriction to a
    designated subgraph group factors the given quotient of it).  Raises
    Exhausted when the candidate pool runs out; that is never a disproof.
    """
    if goal == "separate":
        if not elements:
            raise ValueError("separate needs a non-empty element list")
        for x in elements:
            if not x.syllables:
                raise ValueError("cannot separate the identity from itself")

        def accept(q: FiniteQuotient) -> bool:
            if not q.is_vertex_injective():
                return False
            return all(q.image_of(x) != q.target.identity for x in elements)

    elif goal == "embed":
        if vertex is None or subgroup is None:
            raise ValueError("embed needs a vertex id and a subgroup of its group")

        def accept(q: FiniteQuotient) -> bool:
            images = [q.vertex_images[vertex][h] for h in subgroup.elements]
            return len(set(images)) == len(images)

    elif goal == "refine":
        if subgraph is None or given is None:
            raise ValueError("refine needs a subgraph and a quotient of its group")

        def accept(q: FiniteQuotient) -> bool:
            return _factors_through(g, q, subgraph, given)

    else:
        raise ValueError(f"unknown goal {goal!r}")

    for target in _resolve_targets(targets):
        for q in _iter_quotients(g, target):
            if accept(q):
                return q
    raise Exhausted(f"no quotient in the candidate pool achieves goal {goal!r}")


# ---------------------------------------------------------------------------
# Certificates


@dataclass(frozen=True)
class NonkernelCertificate:
    """A finite quotient witnessing that a derivation value is nonzero."""

    quotient: FiniteQuotient
    component: int
    pushed: dict[int, int]


def certify_nonkernel(d, x: NormalForm, targets=None) -> NonkernelCertificate:
    """A quotient and component where the pushed derivation value is nonzero.

    Sound by construction: a nonzero push forces eval(d, x) ≠ 0 upstairs.
    Raises Exhausted when no candidate quotient shows anything (inconclusive).
    """
    from .derivation import evaluate

    values = evaluate(d, x)
    if all(v.is_zero() for v in values):
        raise Exhausted("the value is zero; no certificate can exist")
    for target in _resolve_targets(targets):
        for q in _iter_quotients(d.owner, target):
            for i, v in enumerate(values):
                pushed = q.push(v)
                if pushed:
                    return NonkernelCertificate(q, i, pushed)
    raise Exhausted("no candidate quotient shows a nonzero push; inconclusive")


def check_certificate(cert: NonkernelCertificate, d, x: NormalForm) -> bool:
    """Re-derive the pushed value from scratch and compare."""
    from .derivation import evaluate

    value = evaluate(d, x)[cert.component]
    return cert.quotient.push(value) == cert.pushed and bool(cert.pushed)


# ---------------------------------------------------------------------------
# The coset-complement functional


def coset_complement_functional(q: FiniteQuotient, D, pushed: dict[int, int], mod: int) -> int:
    """Sum of pushed coefficients on classes outside the designated subgroup."""
    if isinstance(D, Subgroup):
        inside = set(D.elements)
    else:
        inside = set(D)
    return sum(c for cls, c in pushed.items() if cls not in inside) % mod


# ---------------------------------------------------------------------------
# Serialization


def quotient_data(q: FiniteQuotient) -> dict:
    from .documents import _group_spec

    return {
        "target": _group_spec(q.target),
        "vertex_images": {v: list(q.vertex_images[v]) for v in sorted(q.vertex_images)},
        "letter_images": {e: q.letter_images[e] for e in sorted(q.letter_images)},
    }


def quotient_from_data(g: GraphOfGroups, data) -> FiniteQuotient:
    if isinstance(data, str):
        data = json.loads(data)
    target = make_group(data["target"])
    vertex_images = {v: tuple(arr) for v, arr in data["vertex_images"].items()}
    letter_images = {e: int(i) for e, i in data["letter_images"].items()}
    q = quotient_from_images(g, target, vertex_images, letter_images)
    if q is None:
        raise ValueError("image tables do not define a homomorphism")
    return q
