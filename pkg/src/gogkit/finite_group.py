"""Finite groups as multiplication tables: subgroups, homomorphisms, conjugacy."""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

from .errors import NoIdentity, NonAssociative, NotPermutationRow

MAX_EXHAUSTIVE_ORDER = 256


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group given by its full multiplication table.

    Elements are the indices 0..order-1; ``table[i][j]`` is the index of the
    product of i and j.  ``identity`` and ``inverse`` are derived during
    validation.  ``labels`` is optional display text per element.
    """

    table: tuple[tuple[int, ...], ...]
    identity: int
    inverse: tuple[int, ...]
    labels: tuple[str, ...] | None = None
    name: str = ""

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def inv(self, i: int) -> int:
        return self.inverse[i]

    def element_order(self, i: int) -> int:
        k, x = 1, i
        while x != self.identity:
            x = self.mul(x, i)
            k += 1
        return k

    def label(self, i: int) -> str:
        if self.labels is not None:
            return self.labels[i]
        return str(i)

    def conjugate(self, x: int, g: int) -> int:
        """x^g = g⁻¹ x g."""
        return self.mul(self.mul(self.inv(g), x), g)

    def __repr__(self) -> str:
        tag = self.name or "group"
        return f"FiniteGroup({tag}, order={self.order})"


@dataclass(frozen=True)
class Subgroup:
    """A subgroup of a table group, stored as a sorted index tuple."""

    parent: FiniteGroup
    elements: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, i: int) -> bool:
        return i in self.elements


@dataclass(frozen=True)
class GroupHom:
    """A homomorphism between table groups, stored as a full image array."""

    source: FiniteGroup
    target: FiniteGroup
    images: tuple[int, ...]

    def apply(self, i: int) -> int:
        return self.images[i]

    def is_injective(self) -> bool:
        return len(set(self.images)) == len(self.images)

    def image_subgroup(self) -> Subgroup:
        return Subgroup(self.target, tuple(sorted(set(self.images))))


def _validate_table(
    table: list[list[int]], check_associativity: bool = True
) -> tuple[int, tuple[int, ...]]:
    """Check the group axioms, returning (identity index, inverse array)."""
    n = len(table)
    idx = set(range(n))
    for i, row in enumerate(table):
        if len(row) != n or set(row) != idx:
            raise NotPermutationRow(f"row {i} is not a permutation of 0..{n - 1}")
    for j in range(n):
        col = {table[i][j] for i in range(n)}
        if col != idx:
            raise NotPermutationRow(f"column {j} is not a permutation of 0..{n - 1}")
    identity = None
    for e in range(n):
        if all(table[e][i] == i and table[i][e] == i for i in range(n)):
            identity = e
            break
    if identity is None:
        raise NoIdentity("table has no two-sided identity element")
    if check_associativity:
        # The n³ scan is the expensive part; builders whose tables come from
        # an associative model (residues, permutations, products) skip it.
        for i in range(n):
            for j in range(n):
                ij = table[i][j]
                row_j = table[j]
                row_ij = table[ij]
                for k in range(n):
                    if row_ij[k] != table[i][row_j[k]]:
                        raise NonAssociative(f"({i}·{j})·{k} != {i}·({j}·{k})")
    inverse = [0] * n
    for i in range(n):
        for j in range(n):
            if table[i][j] == identity:
                inverse[i] = j
                break
    return identity, tuple(inverse)


def _from_table(
    table: list[list[int]], labels: list[str] | None, name: str, trusted: bool = False
) -> FiniteGroup:
    identity, inverse = _validate_table(table, check_associativity=not trusted)
    return FiniteGroup(
        table=tuple(tuple(row) for row in table),
        identity=identity,
        inverse=inverse,
        labels=tuple(labels) if labels is not None else None,
        name=name,
    )


def _cyclic(n: int) -> FiniteGroup:
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    labels = ["e"] + [f"x{'' if i == 1 else i}" for i in range(1, n)]
    return _from_table(table, labels, f"C{n}", trusted=True)


def _dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order 2n; index k + n·s encodes r^k s^s."""
    if n < 1:
        raise ValueError("dihedral parameter must be >= 1")

    def mul(i: int, j: int) -> int:
        k1, s1 = i % n, i // n
        k2, s2 = j % n, j // n
        k = (k1 + (k2 if s1 == 0 else -k2)) % n
        return k + n * (s1 ^ s2)

    table = [[mul(i, j) for j in range(2 * n)] for i in range(2 * n)]
    labels = [f"r{k}" for k in range(n)] + [f"s{k}" for k in range(n)]
    return _from_table(table, labels, f"D{n}", trusted=True)


def _dicyclic(n: int) -> FiniteGroup:
    """Dicyclic group of order 4n; index k + 2n·s encodes a^k b^s, b² = aⁿ."""
    if n < 2:
        raise ValueError("dicyclic parameter must be >= 2")

    def mul(i: int, j: int) -> int:
        k1, s1 = i % (2 * n), i // (2 * n)
        k2, s2 = j % (2 * n), j // (2 * n)
        k = (k1 + (k2 if s1 == 0 else -k2) + (n if s1 and s2 else 0)) % (2 * n)
        return k + 2 * n * (s1 ^ s2)

    table = [[mul(i, j) for j in range(4 * n)] for i in range(4 * n)]
    labels = [f"a{k}" for k in range(2 * n)] + [f"b{k}" for k in range(2 * n)]
    return _from_table(table, labels, f"Dic{n}", trusted=True)


def _symmetric(n: int) -> FiniteGroup:
    """Symmetric group on n letters; permutations in lexicographic order."""
    perms = list(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}

    def compose(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
        # (p·q)(i) = p(q(i))
        return tuple(p[q[i]] for i in range(n))

    table = [[index[compose(p, q)] for q in perms] for p in perms]
    labels = ["".join(str(v) for v in p) for p in perms]
    return _from_table(table, labels, f"S{n}", trusted=True)


def _product(factors: list[FiniteGroup]) -> FiniteGroup:
    orders = [g.order for g in factors]
    total = 1
    for o in orders:
        total *= o

    def split(i: int) -> list[int]:
        parts = []
        for o in reversed(orders):
            parts.append(i % o)
            i //= o
        return parts[::-1]

    def join(parts: list[int]) -> int:
        i = 0
        for o, p in zip(orders, parts):
            i = i * o + p
        return i

    table = []
    for i in range(total):
        pi = split(i)
        row = []
        for j in range(total):
            pj = split(j)
            row.append(join([g.mul(a, b) for g, a, b in zip(factors, pi, pj)]))
        table.append(row)
    labels = [
        "|".join(g.label(p) for g, p in zip(factors, split(i))) for i in range(total)
    ]
    name = "x".join(g.name or "?" for g in factors)
    return _from_table(table, labels, name, trusted=True)


@functools.lru_cache(maxsize=None)
def _shorthand_group(kind: str, n: int) -> FiniteGroup:
    # FiniteGroup is immutable, so sharing cached instances is safe.
    if kind == "cyclic":
        return _cyclic(n)
    if kind == "dihedral":
        return _dihedral(n)
    if kind == "dicyclic":
        return _dicyclic(n)
    if kind == "symmetric":
        return _symmetric(n)
    raise ValueError(f"unrecognized group shorthand: {kind} {n}")


def make_group(spec) -> FiniteGroup:
    """Build a finite group from a shorthand spec or an explicit table.

    Accepted forms: "cyclic N", "dihedral N", "dicyclic N", "symmetric N"; a
    list of specs (direct product); or a dict {"table": [[...]],
    "labels": [...]} / {"product": [spec, ...]}.
    """
    if isinstance(spec, FiniteGroup):
        return spec
    if isinstance(spec, str):
        parts = spec.split()
        if len(parts) != 2 or not parts[1].isdigit():
            raise ValueError(f"unrecognized group shorthand: {spec!r}")
        return _shorthand_group(parts[0], int(parts[1]))
    if isinstance(spec, list):
        return _product([make_group(s) for s in spec])
    if isinstance(spec, dict):
        if "product" in spec:
            return _product([make_group(s) for s in spec["product"]])
        if "table" in spec:
            return _from_table(spec["table"], spec.get("labels"), spec.get("name", ""))
    raise ValueError(f"unrecognized group spec: {spec!r}")


def subgroup_as_group(sub: Subgroup) -> tuple[FiniteGroup, dict[int, int]]:
    """The subgroup as a standalone group, plus the parent→local index map."""
    parent = sub.parent
    local = {p: i for i, p in enumerate(sub.elements)}
    table = []
    for a in sub.elements:
        row = []
        for b in sub.elements:
            c = parent.mul(a, b)
            if c not in local:
                raise ValueError("element set is not closed under multiplication")
            row.append(local[c])
        table.append(row)
    labels = [parent.label(p) for p in sub.elements]
    name = f"{parent.name}:{len(sub.elements)}" if parent.name else ""
    return _from_table(table, labels, name, trusted=True), local


def subgroup_closure(group: FiniteGroup, seeds) -> Subgroup:
    """Smallest subgroup of ``group`` containing all seed indices."""
    seen = {group.identity}
    frontier = [group.identity]
    for s in seeds:
        if s not in seen:
            seen.add(s)
            frontier.append(s)
    while frontier:
        nxt = []
        for x in frontier:
            for y in list(seen):
                for z in (group.mul(x, y), group.mul(y, x), group.inv(x)):
                    if z not in seen:
                        seen.add(z)
                        nxt.append(z)
        frontier = nxt
    return Subgroup(group, tuple(sorted(seen)))


def _generating_sequence(group: FiniteGroup) -> list[int]:
    """A short generating sequence, chosen greedily and deterministically."""
    gens: list[int] = []
    current = {group.identity}
    while len(current) < group.order:
        for i in range(group.order):
            if i not in current:
                gens.append(i)
                current = set(subgroup_closure(group, gens).elements)
                break
    return gens


def _extend_hom(
    source: FiniteGroup, target: FiniteGroup, gens: list[int], gen_images: list[int]
) -> tuple[int, ...] | None:
    """Grow generator images to a full image array, or None on conflict."""
    images = {source.identity: target.identity}
    frontier = [source.identity]
    for g, im in zip(gens, gen_images):
        if g in images:
            if images[g] != im:
                return None
        else:
            images[g] = im
            frontier.append(g)
    while frontier:
        nxt = []
        for x in list(images):
            for g, im in zip(gens, gen_images):
                y = source.mul(x, g)
                v = target.mul(images[x], im)
                if y in images:
                    if images[y] != v:
                        return None
                else:
                    images[y] = v
                    nxt.append(y)
        if len(images) == source.order:
            break
        if not nxt:
            break
        frontier = nxt
    if len(images) != source.order:
        return None
    arr = tuple(images[i] for i in range(source.order))
    for i in range(source.order):
        row = source.table[i]
        for j in range(source.order):
            if arr[row[j]] != target.mul(arr[i], arr[j]):
                return None
    return arr


def enumerate_homs(source: FiniteGroup, target: FiniteGroup) -> list[GroupHom]:
    """All homomorphisms source → target, ordered by their image arrays."""
    gens = _generating_sequence(source)
    if not gens:
        return [GroupHom(source, target, (target.identity,) * source.order)]
    candidates: list[list[int]] = []
    for g in gens:
        o = source.element_order(g)
        candidates.append([t for t in range(target.order) if o % target.element_order(t) == 0])
    out = []
    for combo in itertools.product(*candidates):
        arr = _extend_hom(source, target, gens, list(combo))
        if arr is not None:
            out.append(GroupHom(source, target, arr))
    out.sort(key=lambda h: h.images)
    deduped = [h for i, h in enumerate(out) if i == 0 or h.images != out[i - 1].images]
    return deduped


def enumerate_embeddings(source: FiniteGroup, target: FiniteGroup) -> list[GroupHom]:
    """All injective homomorphisms source → target, deterministic order."""
    return [h for h in enumerate_homs(source, target) if h.is_injective()]


def conjugate_subgroup(sub: Subgroup, g: int) -> Subgroup:
    """S^g = g⁻¹ S g inside the parent group."""
    parent = sub.parent
    return Subgroup(parent, tuple(sorted(parent.conjugate(s, g) for s in sub.elements)))


def is_conjugate_into(sub: Subgroup, other: Subgroup, group: FiniteGroup) -> int | None:
    """Least h with sub^h ⊆ other, or None."""
    if sub.order > other.order or other.order % sub.order != 0:
        return None
    target = set(other.elements)
    for h in range(group.order):
        if all(group.conjugate(s, h) in target for s in sub.elements):
            return h
    return None


def hom_from_generator_images(
    source: FiniteGroup, target: FiniteGroup, pairs: list[tuple[int, int]]
) -> GroupHom | None:
    """The unique hom sending each (element, image) pair, or None if none exists."""
    gens = [p[0] for p in pairs]
    if len(set(subgroup_closure(source, gens).elements)) != source.order:
        raise ValueError("given elements do not generate the source group")
    arr = _extend_hom(source, target, gens, [p[1] for p in pairs])
    if arr is None:
        return None
    return GroupHom(source, target, arr)


def trivial_group() -> FiniteGroup:
    return make_group("cyclic 1")
