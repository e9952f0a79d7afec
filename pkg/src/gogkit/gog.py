"""Graphs of finite groups and the word problem for their fundamental groups.

Elements are represented by canonical normal forms computed with a fixed left
transversal per edge inclusion (least element per coset).  Reduction follows
the classical scheme: realize the word as a based loop (spanning-tree letters
are trivial), eliminate pinches with a stack, then normalize syllables left to
right against the transversals.  Two elements are equal iff their canonical
words are identical.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import BadSubgraph, BallTooLarge, MalformedWord, MixedOwners, NotFinite
from .finite_group import FiniteGroup, Subgroup
from .graph_core import FiniteGraph, SpanningTree, spanning_tree, tree_path_oriented

BALL_CAP = 10**6


class TableVertexGroup:
    """A vertex group backed by a finite multiplication table; handles are indices."""

    def __init__(self, group: FiniteGroup):
        self.group = group

    @property
    def order(self) -> int | None:
        return self.group.order

    def identity(self) -> int:
        return self.group.identity

    def mul(self, a: int, b: int) -> int:
        return self.group.mul(a, b)

    def inv(self, a: int) -> int:
        return self.group.inv(a)

    def is_identity(self, a: int) -> bool:
        return a == self.group.identity

    def sort_key(self, a: int):
        return a

    def handles(self) -> list[int]:
        return list(range(self.group.order))

    def generator_handles(self) -> list[int]:
        return [i for i in range(self.group.order) if i != self.group.identity]

    def text(self, a: int) -> str:
        return f"g{a}"

    def contains_handle(self, a) -> bool:
        return isinstance(a, int) and 0 <= a < self.group.order


class CompositeVertexGroup:
    """A vertex group presented by a nested graph of groups; handles are its normal forms.

    Only the word-problem operations are available; enumeration raises since
    the underlying group is generally infinite.
    """

    def __init__(self, sub: GraphOfGroups):
        self.sub = sub

    @property
    def order(self) -> int | None:
        return None

    def identity(self) -> NormalForm:
        return reduce(self.sub, Word(()))

    def mul(self, a: NormalForm, b: NormalForm) -> NormalForm:
        return multiply(a, b)

    def inv(self, a: NormalForm) -> NormalForm:
        return invert(a)

    def is_identity(self, a: NormalForm) -> bool:
        return not a.syllables

    def sort_key(self, a: NormalForm):
        return (len(a.syllables), a.text())

    def handles(self):
        raise NotFinite("vertex group is a nested graph of groups; cannot enumerate")

    def generator_handles(self) -> list[NormalForm]:
        out = []
        for vid in sorted(self.sub.graph.vertices):
            vg = self.sub.vertex_groups[vid]
            for h in vg.generator_handles():
                out.append(reduce(self.sub, Word(((VERTEX, vid, h),))))
        for eid in sorted(self.sub.graph.edges):
            if eid not in self.sub.tree.edges:
                out.append(reduce(self.sub, Word(((LETTER, eid, 1),))))
        return out

    def text(self, a: NormalForm) -> str:
        return "{" + a.text() + "}"

    def contains_handle(self, a) -> bool:
        return isinstance(a, NormalForm) and a.owner is self.sub


VERTEX = "v"
LETTER = "t"


@dataclass(frozen=True)
class Word:
    """A syllable sequence: (VERTEX, vertex id, handle) or (LETTER, edge id, ±1)."""

    syllables: tuple[tuple, ...]

    def __len__(self) -> int:
        return len(self.syllables)


class GraphOfGroups:
    """A finite graph with a group per vertex/edge and injective edge inclusions.

    ``inclusions[e]`` is a pair of handle tuples (into the d0 and d1 vertex
    groups), indexed by the elements of the edge group.  Immutable after
    construction; structural validity is checked here, while the homomorphism
    invariants are checked by :func:`validate` (report-based).
    """

    def __init__(
        self,
        graph: FiniteGraph,
        vertex_groups: dict[str, object],
        edge_groups: dict[str, FiniteGroup],
        inclusions: dict[str, tuple[tuple, tuple]],
        tree: SpanningTree | None = None,
        basepoint: str | None = None,
        name: str = "",
    ):
        self.graph = graph
        self.vertex_groups = {
            v: (TableVertexGroup(g) if isinstance(g, FiniteGroup) else g)
            for v, g in vertex_groups.items()
        }
        self.edge_groups = edge_groups
        self.inclusions = {e: (tuple(a), tuple(b)) for e, (a, b) in inclusions.items()}
        self.tree = tree if tree is not None else spanning_tree(graph)
        self.basepoint = basepoint if basepoint is not None else min(graph.vertices)
        self.name = name
        for v in graph.vertices:
            if v not in self.vertex_groups:
                raise ValueError(f"vertex {v!r} has no group")
        for e in graph.edges:
            if e not in self.edge_groups or e not in self.inclusions:
                raise ValueError(f"edge {e!r} has no group or inclusions")
            n = self.edge_groups[e].order
            if len(self.inclusions[e][0]) != n or len(self.inclusions[e][1]) != n:
                raise ValueError(f"edge {e!r}: inclusion image arrays must have length {n}")
        if self.basepoint not in graph.vertices:
            raise ValueError(f"basepoint {self.basepoint!r} is not a vertex")
        self._preimages: dict[tuple[str, int], dict] = {}
        for e in graph.edges:
            for side in (0, 1):
                self._preimages[(e, side)] = {
                    h: k for k, h in enumerate(self.inclusions[e][side])
                }

    def vertex_group(self, v: str):
        return self.vertex_groups[v]

    def incl(self, e: str, side: int, k: int):
        """Image handle of edge-group element k under the side-inclusion of e."""
        return self.inclusions[e][side][k]

    def incl_preimage(self, e: str, side: int, handle) -> int | None:
        return self._preimages[(e, side)].get(handle)

    def all_tables(self) -> bool:
        return all(isinstance(vg, TableVertexGroup) for vg in self.vertex_groups.values())

    def __repr__(self) -> str:
        tag = self.name or "gog"
        return f"GraphOfGroups({tag}, |V|={len(self.graph.vertices)}, |E|={len(self.graph.edges)})"


class NormalForm:
    """A canonical word together with its owning graph of groups."""

    __slots__ = ("owner", "syllables", "_hash")

    def __init__(self, owner: GraphOfGroups, syllables: tuple[tuple, ...]):
        self.owner = owner
        self.syllables = syllables
        self._hash = hash(syllables)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, NormalForm)
            and self.owner is other.owner
            and self.syllables == other.syllables
        )

    def __hash__(self) -> int:
        return self._hash

    def __len__(self) -> int:
        return len(self.syllables)

    def text(self) -> str:
        return word_text(self.owner, Word(self.syllables))

    def __repr__(self) -> str:
        return f"nf({self.text()})"


def word_text(g: GraphOfGroups, w: Word) -> str:
    """Serialize a word; the identity is written as "1"."""
    if not w.syllables:
        return "1"
    parts = []
    for syl in w.syllables:
        if syl[0] == VERTEX:
            _, vid, h = syl
            parts.append(f"{vid}:{g.vertex_groups[vid].text(h)}")
        else:
            _, eid, exp = syl
            parts.append(f"t({eid})" + ("^-1" if exp < 0 else ""))
    return " * ".join(parts)


_LETTER_RE = re.compile(r"^t\(([^()\s]+)\)(\^-1)?$")


def _split_word_text(text: str) -> list[str]:
    """Split on top-level '*' separators, respecting {...} nesting."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
            if depth < 0:
                raise MalformedWord(f"unbalanced braces in {text!r}")
        if ch == "*" and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    if depth != 0:
        raise MalformedWord(f"unbalanced braces in {text!r}")
    parts.append("".join(cur).strip())
    return parts


def parse_word(g: GraphOfGroups, text: str) -> Word:
    """Parse word text: syllables joined by '*', `vid:gN` or `t(eid)[^-1]`."""
    text = text.strip()
    if text in ("", "1"):
        return Word(())
    syllables = []
    for token in _split_word_text(text):
        if not token:
            raise MalformedWord(f"empty syllable in {text!r}")
        m = _LETTER_RE.match(token)
        if m:
            eid = m.group(1)
            if eid not in g.graph.edges:
                raise MalformedWord(f"unknown edge {eid!r} in {token!r}")
            syllables.append((LETTER, eid, -1 if m.group(2) else 1))
            continue
        if ":" not in token:
            raise MalformedWord(f"cannot parse syllable {token!r}")
        vid, _, elem = token.partition(":")
        vid, elem = vid.strip(), elem.strip()
        if vid not in g.graph.vertices:
            raise MalformedWord(f"unknown vertex {vid!r} in {token!r}")
        vg = g.vertex_groups[vid]
        if elem.startswith("{") and elem.endswith("}"):
            if not isinstance(vg, CompositeVertexGroup):
                raise MalformedWord(f"vertex {vid!r} has a table group; got {elem!r}")
            handle = reduce(vg.sub, parse_word(vg.sub, elem[1:-1]))
        else:
            if not elem.startswith("g") or not elem[1:].isdigit():
                raise MalformedWord(f"cannot parse element {elem!r} in {token!r}")
            idx = int(elem[1:])
            if not isinstance(vg, TableVertexGroup) or idx >= vg.group.order:
                raise MalformedWord(f"element index {idx} out of range at {vid!r}")
            handle = idx
        syllables.append((VERTEX, vid, handle))
    return Word(tuple(syllables))


# ---------------------------------------------------------------------------
# Reduction


def _word_to_path(g: GraphOfGroups, w: Word, base: str) -> list[tuple]:
    """Realize a word as a based loop: Elem moves plus tree/letter crossings.

    Items are ("x", edge, dir) crossings and ("e", vertex, handle) elements.
    """
    path: list[tuple] = []
    cur = base

    def walk_to(target: str):
        nonlocal cur
        for e, direction in tree_path_oriented(g.tree, cur, target):
            path.append(("x", e, direction))
        cur = target

    for syl in w.syllables:
        if syl[0] == VERTEX:
            _, vid, h = syl
            if not g.vertex_groups[vid].contains_handle(h):
                raise MalformedWord(f"bad element handle {h!r} at vertex {vid!r}")
            walk_to(vid)
            path.append(("e", vid, h))
        else:
            _, eid, exp = syl
            start = g.graph.d0[eid] if exp > 0 else g.graph.d1[eid]
            end = g.graph.d1[eid] if exp > 0 else g.graph.d0[eid]
            walk_to(start)
            path.append(("x", eid, exp))
            cur = end
    walk_to(base)
    return path


def _pinch_reduce(g: GraphOfGroups, path: list[tuple]) -> list[tuple]:
    """Eliminate pinches t_e⁻¹·(∂0 image)·t_e and t_e·(∂1 image)·t_e⁻¹."""
    stack: list[tuple] = []

    def push_elem(vid: str, h):
        vg = g.vertex_groups[vid]
        if stack and stack[-1][0] == "e" and stack[-1][1] == vid:
            h = vg.mul(stack.pop()[2], h)
        if not vg.is_identity(h):
            stack.append(("e", vid, h))

    for item in path:
        if item[0] == "e":
            push_elem(item[1], item[2])
            continue
        _, eid, direction = item
        # A crossing may close a pinch with the previous crossing of the same
        # edge in the opposite direction, with an optional image element between.
        middle = None
        prev = None
        if stack and stack[-1][0] == "x":
            prev = stack[-1]
        elif len(stack) >= 2 and stack[-1][0] == "e" and stack[-2][0] == "x":
            middle, prev = stack[-1], stack[-2]
        if prev is not None and prev[1] == eid and prev[2] == -direction:
            src_side = 0 if direction > 0 else 1
            dst_side = 1 - src_side
            h = middle[2] if middle is not None else g.vertex_groups[
                g.graph.d0[eid] if src_side == 0 else g.graph.d1[eid]
            ].identity()
            k = g.incl_preimage(eid, src_side, h)
            if k is not None:
                if middle is not None:
                    stack.pop()
                stack.pop()
                dst_vertex = g.graph.d1[eid] if dst_side == 1 else g.graph.d0[eid]
                push_elem(dst_vertex, g.incl(eid, dst_side, k))
                continue
        stack.append(item)
    return stack


def _normalize(g: GraphOfGroups, path: list[tuple], base: str) -> tuple[tuple, ...]:
    """Left-to-right transversal normalization of a pinch-free path."""
    syllables: list[tuple] = []
    cur = base
    carry = g.vertex_groups[base].identity()
    for item in path:
        if item[0] == "e":
            carry = g.vertex_groups[cur].mul(carry, item[2])
            continue
        _, eid, direction = item
        src_side = 0 if direction > 0 else 1
        dst_side = 1 - src_side
        vg = g.vertex_groups[cur]
        edge_group = g.edge_groups[eid]
        best_k, best_rep, best_key = None, None, None
        for k in range(edge_group.order):
            rep = vg.mul(carry, vg.inv(g.incl(eid, src_side, k)))
            key = vg.sort_key(rep)
            if best_key is None or key < best_key:
                best_k, best_rep, best_key = k, rep, key
        if not vg.is_identity(best_rep):
            syllables.append((VERTEX, cur, best_rep))
        if eid not in g.tree.edges:
            syllables.append((LETTER, eid, direction))
        cur = g.graph.d1[eid] if dst_side == 1 else g.graph.d0[eid]
        carry = g.incl(eid, dst_side, best_k)
    if not g.vertex_groups[cur].is_identity(carry):
        syllables.append((VERTEX, cur, carry))
    return tuple(syllables)


def _reduce_from(g: GraphOfGroups, w: Word, base: str) -> tuple[tuple, ...]:
    path = _word_to_path(g, w, base)
    path = _pinch_reduce(g, path)
    return _normalize(g, path, base)


def reduce(g: GraphOfGroups, w: Word) -> NormalForm:
    """Canonical normal form of the element represented by ``w``."""
    return NormalForm(g, _reduce_from(g, w, g.basepoint))


def nf(g: GraphOfGroups, text: str) -> NormalForm:
    """Parse and reduce word text; convenience wrapper."""
    return reduce(g, parse_word(g, text))


def identity(g: GraphOfGroups) -> NormalForm:
    return NormalForm(g, ())


def vertex_element(g: GraphOfGroups, vid: str, handle) -> NormalForm:
    return reduce(g, Word(((VERTEX, vid, handle),)))


def stable_letter(g: GraphOfGroups, eid: str, exp: int = 1) -> NormalForm:
    return reduce(g, Word(((LETTER, eid, exp),)))


def _check_owner(x: NormalForm, y: NormalForm):
    if x.owner is not y.owner:
        raise MixedOwners("normal forms belong to different graphs of groups")


def multiply(x: NormalForm, y: NormalForm) -> NormalForm:
    _check_owner(x, y)
    return reduce(x.owner, Word(x.syllables + y.syllables))


def invert(x: NormalForm) -> NormalForm:
    g = x.owner
    out = []
    for syl in reversed(x.syllables):
        if syl[0] == VERTEX:
            out.append((VERTEX, syl[1], g.vertex_groups[syl[1]].inv(syl[2])))
        else:
            out.append((LETTER, syl[1], -syl[2]))
    return reduce(g, Word(tuple(out)))


def invert_word(g: GraphOfGroups, w: Word) -> Word:
    out = []
    for syl in reversed(w.syllables):
        if syl[0] == VERTEX:
            out.append((VERTEX, syl[1], g.vertex_groups[syl[1]].inv(syl[2])))
        else:
            out.append((LETTER, syl[1], -syl[2]))
    return Word(tuple(out))


def equal(x: NormalForm, y: NormalForm) -> bool:
    _check_owner(x, y)
    return x.syllables == y.syllables


# ---------------------------------------------------------------------------
# Presentation


@dataclass(frozen=True)
class Presentation:
    """Generators (vertex elements and stable letters) with defining relators."""

    generators: tuple[tuple, ...]
    relators: tuple[Word, ...]


def presentation(g: GraphOfGroups) -> Presentation:
    """Generators and relators: tree letters plus one conjugation family per edge."""
    gens: list[tuple] = []
    for vid in sorted(g.graph.vertices):
        for h in g.vertex_groups[vid].generator_handles():
            gens.append((VERTEX, vid, h))
    for eid in sorted(g.graph.edges):
        gens.append((LETTER, eid, 1))
    relators: list[Word] = []
    for eid in sorted(g.graph.edges):
        if eid in g.tree.edges:
            relators.append(Word(((LETTER, eid, 1),)))
    for eid in sorted(g.graph.edges):
        d1v = g.graph.d1[eid]
        d0v = g.graph.d0[eid]
        vg1 = g.vertex_groups[d1v]
        for k in range(g.edge_groups[eid].order):
            relators.append(
                Word(
                    (
                        (VERTEX, d1v, vg1.inv(g.incl(eid, 1, k))),
                        (LETTER, eid, -1),
                        (VERTEX, d0v, g.incl(eid, 0, k)),
                        (LETTER, eid, 1),
                    )
                )
            )
    return Presentation(tuple(gens), tuple(relators))


# ---------------------------------------------------------------------------
# Validation


@dataclass
class Report:
    """A pass/fail verdict with human-readable problem lines."""

    ok: bool = True
    problems: list[str] = field(default_factory=list)
    counts: dict[str, int] = field(default_factory=dict)

    def fail(self, line: str):
        self.ok = False
        self.problems.append(line)

    def summary(self) -> str:
        status = "ok" if self.ok else "FAIL"
        lines = [f"{status}" + (f" ({self.counts})" if self.counts else "")]
        lines.extend(self.problems)
        return "\n".join(lines)


def validate(g: GraphOfGroups) -> Report:
    """Check every structural invariant; returns a report, never raises."""
    report = Report()
    comps = []
    seen: set[str] = set()
    for v in g.graph.vertices:
        if v not in seen:
            comp = {v}
            frontier = [v]
            while frontier:
                nxt = []
                for x in frontier:
                    for e in g.graph.incident(x):
                        y = g.graph.other_end(e, x)
                        if y not in comp:
                            comp.add(y)
                            nxt.append(y)
                frontier = nxt
            comps.append(comp)
            seen |= comp
    if len(comps) != 1:
        report.fail(f"graph is disconnected: {sorted(sorted(c) for c in comps)}")
    if len(g.tree.edges) != len(g.graph.vertices) - 1:
        report.fail(
            f"spanning tree has {len(g.tree.edges)} edges for "
            f"{len(g.graph.vertices)} vertices"
        )
    for e in sorted(g.tree.edges):
        if g.graph.is_loop(e):
            report.fail(f"tree edge {e!r} is a loop")
    for eid in sorted(g.graph.edges):
        K = g.edge_groups[eid]
        for side, vid in ((0, g.graph.d0[eid]), (1, g.graph.d1[eid])):
            vg = g.vertex_groups[vid]
            images = g.inclusions[eid][side]
            for h in images:
                if not vg.contains_handle(h):
                    report.fail(f"edge {eid!r} side {side}: image {h!r} not in group at {vid!r}")
            if len({vg.sort_key(h) for h in images}) != K.order:
                report.fail(f"edge {eid!r} side {side}: inclusion is not injective")
            if images and not vg.is_identity(images[K.identity]):
                report.fail(f"edge {eid!r} side {side}: identity does not map to identity")
            for i in range(K.order):
                for j in range(K.order):
                    lhs = images[K.mul(i, j)]
                    rhs = vg.mul(images[i], images[j])
                    if vg.sort_key(lhs) != vg.sort_key(rhs):
                        report.fail(
                            f"edge {eid!r} side {side}: not a homomorphism on pair ({i},{j})"
                        )
                        break
                else:
                    continue
                break
    report.counts["vertices"] = len(g.graph.vertices)
    report.counts["edges"] = len(g.graph.edges)
    return report


# ---------------------------------------------------------------------------
# Balls and membership


def ball(g: GraphOfGroups, radius: int, max_size: int = BALL_CAP) -> list[NormalForm]:
    """All distinct normal forms of elements expressible by ≤ radius syllables.

    Breadth-first closure under right multiplication by one-syllable words;
    deterministic order (syllable count, then word text).
    """
    if radius < 0:
        raise ValueError("radius must be non-negative")
    if not g.all_tables():
        raise NotFinite("ball enumeration requires finite table vertex groups")
    gens: list[Word] = []
    for vid in sorted(g.graph.vertices):
        for h in g.vertex_groups[vid].generator_handles():
            gens.append(Word(((VERTEX, vid, h),)))
    for eid in sorted(g.graph.edges):
        if eid not in g.tree.edges:
            gens.append(Word(((LETTER, eid, 1),)))
            gens.append(Word(((LETTER, eid, -1),)))
    seen = {identity(g)}
    frontier = [identity(g)]
    for _ in range(radius):
        nxt = []
        for x in frontier:
            for s in gens:
                y = reduce(g, Word(x.syllables + s.syllables))
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
                    if len(seen) > max_size:
                        raise BallTooLarge(f"ball exceeds cap of {max_size} elements")
        frontier = nxt
        if not frontier:
            break
    return sorted(seen, key=lambda x: (len(x.syllables), x.text()))


@dataclass(frozen=True)
class Subgraph:
    """A designated subgraph: vertex and edge id sets."""

    vertices: frozenset[str]
    edges: frozenset[str]

    @staticmethod
    def of(vertices, edges=()) -> Subgraph:
        return Subgraph(frozenset(vertices), frozenset(edges))


def _check_subgraph(g: GraphOfGroups, sub: Subgraph):
    if not sub.vertices <= set(g.graph.vertices) or not sub.edges <= set(g.graph.edges):
        raise BadSubgraph("subgraph references unknown vertices or edges")
    for e in sub.edges:
        if g.graph.d0[e] not in sub.vertices or g.graph.d1[e] not in sub.vertices:
            raise BadSubgraph(f"subgraph edge {e!r} has an endpoint outside the subgraph")
    if g.basepoint not in sub.vertices:
        raise BadSubgraph("subgraph must contain the basepoint")
    for v in sub.vertices:
        for e, _ in tree_path_oriented(g.tree, g.basepoint, v):
            if e not in sub.edges:
                raise BadSubgraph(
                    f"subgraph is not closed under tree paths to the basepoint "
                    f"(missing edge {e!r})"
                )


def subgraph_group_membership(g: GraphOfGroups, sub: Subgraph, x: NormalForm) -> bool:
    """True iff every syllable of x lives in the subgraph."""
    _check_subgraph(g, sub)
    if x.owner is not g:
        raise MixedOwners("normal form belongs to a different graph of groups")
    for syl in x.syllables:
        if syl[0] == VERTEX:
            if syl[1] not in sub.vertices:
                return False
        else:
            if syl[1] not in sub.edges:
                return False
    return True


def vertex_group_membership(g: GraphOfGroups, vid: str, x: NormalForm) -> bool:
    """True iff x lies in the image of the vertex group at ``vid``.

    Canonicalizes from ``vid`` itself, so this works for any vertex, not just
    the basepoint.
    """
    if x.owner is not g:
        raise MixedOwners("normal form belongs to a different graph of groups")
    syllables = _reduce_from(g, Word(x.syllables), vid)
    if not syllables:
        return True
    return len(syllables) == 1 and syllables[0][0] == VERTEX and syllables[0][1] == vid


def vertex_handle_of(g: GraphOfGroups, vid: str, x: NormalForm):
    """The handle of x at vertex ``vid`` when x lies there, else None."""
    if x.owner is not g:
        raise MixedOwners("normal form belongs to a different graph of groups")
    syllables = _reduce_from(g, Word(x.syllables), vid)
    if not syllables:
        return g.vertex_groups[vid].identity()
    if len(syllables) == 1 and syllables[0][0] == VERTEX and syllables[0][1] == vid:
        return syllables[0][2]
    return None


def verify_relative_malnormality(
    g: GraphOfGroups, h_vertex: str, chi: Subgroup, radius: int
) -> Report:
    """Check H ∩ H^s ⊆ some H-conjugate of χ for all ball elements s outside H.

    ``g`` must be an amalgam (two vertices, one edge); H is the vertex group
    at ``h_vertex`` and χ a subgroup of it.
    """
    report = Report()
    if len(g.graph.vertices) != 2 or len(g.graph.edges) != 1:
        report.fail("graph is not a two-factor amalgam (need 2 vertices, 1 edge)")
        return report
    vg = g.vertex_groups[h_vertex]
    if not isinstance(vg, TableVertexGroup):
        report.fail(f"vertex group at {h_vertex!r} is not a finite table")
        return report
    H = vg.group
    chi_set = set(chi.elements)
    elements = ball(g, radius)
    checked = 0
    for s in elements:
        if vertex_group_membership(g, h_vertex, s):
            continue
        checked += 1
        s_inv = invert(s)
        intersection = []
        for i in range(H.order):
            if i == H.identity:
                continue
            x = vertex_element(g, h_vertex, i)
            conj = multiply(multiply(s_inv, x), s)
            if vertex_group_membership(g, h_vertex, conj):
                intersection.append(i)
        if not intersection:
            continue
        good = False
        for h in range(H.order):
            if all(H.conjugate(x, H.inv(h)) in chi_set for x in intersection):
                good = True
                break
        if not good:
            report.fail(
                f"malnormality fails at s = {s.text()}: "
                f"H ∩ H^s = {sorted(intersection)} not inside any χ-conjugate"
            )
            return report
    report.counts["ball"] = len(elements)
    report.counts["checked"] = checked
    return report
