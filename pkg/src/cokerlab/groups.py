"""Finite group tables, subgroup enumeration, and builtin acting groups.

Elements are integers 0..order-1 with the identity at index 0. The
multiplication convention for permutations is (p * q)(x) = p(q(x)).
"""

from __future__ import annotations

import numpy as np

DEFAULT_MAX_ORDER = 64


class FiniteGroupTable:
    """Immutable multiplication table of a finite group.

    Attributes: order, mul (order x order int64), inv (int64 vector),
    names (tuple of element labels). Construction validates the full
    group axioms exhaustively.
    """

    def __init__(self, mul, names=None, max_order: int = DEFAULT_MAX_ORDER):
        mul = np.asarray(mul, dtype=np.int64)
        if mul.ndim != 2 or mul.shape[0] != mul.shape[1]:
            raise ValueError("multiplication table must be square")
        order = mul.shape[0]
        if order == 0:
            raise ValueError("empty group table")
        if order > max_order:
            raise ValueError(f"group order {order} exceeds bound {max_order}")
        if mul.min() < 0 or mul.max() >= order:
            raise ValueError("table entries out of range")
        if not (np.array_equal(mul[0], np.arange(order)) and np.array_equal(mul[:, 0], np.arange(order))):
            raise ValueError("element 0 is not the identity")
        # associativity: (ab)c == a(bc) for all triples
        if not np.array_equal(mul[mul, :], mul[:, mul]):
            raise ValueError("table is not associative")
        inv = np.full(order, -1, dtype=np.int64)
        for a in range(order):
            hits = np.nonzero(mul[a] == 0)[0]
            if len(hits) != 1:
                raise ValueError("table has no unique inverse")
            inv[a] = hits[0]
        self.order = order
        self.mul = mul
        self.inv = inv
        self.names = tuple(names) if names is not None else tuple(f"g{i}" for i in range(order))
        if len(self.names) != order:
            raise ValueError("wrong number of element names")
        self.mul.setflags(write=False)
        self.inv.setflags(write=False)

    def multiply(self, a: int, b: int) -> int:
        return int(self.mul[a, b])

    def inverse(self, a: int) -> int:
        return int(self.inv[a])

    def element_order(self, a: int) -> int:
        n, x = 1, a
        while x != 0:
            x = int(self.mul[x, a])
            n += 1
        return n

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    def conjugacy_classes(self) -> list[tuple[int, ...]]:
        seen = [False] * self.order
        classes = []
        for a in range(self.order):
            if seen[a]:
                continue
            cls = set()
            for g in range(self.order):
                cls.add(int(self.mul[self.mul[g, a], self.inv[g]]))
            for x in cls:
                seen[x] = True
            classes.append(tuple(sorted(cls)))
        return classes

    def generating_set(self) -> tuple[int, ...]:
        """A small generating set found greedily in index order."""
        gens: list[int] = []
        have = {0}
        for a in range(1, self.order):
            if a not in have:
                gens.append(a)
                have = self._closure(have | {a})
                if len(have) == self.order:
                    break
        return tuple(gens)

    def _closure(self, seed: set[int]) -> set[int]:
        out = set(seed) | {0}
        frontier = list(out)
        while frontier:
            x = frontier.pop()
            for y in tuple(out):
                for z in (int(self.mul[x, y]), int(self.mul[y, x])):
                    if z not in out:
                        out.add(z)
                        frontier.append(z)
            xin = int(self.inv[x])
            if xin not in out:
                out.add(xin)
                frontier.append(xin)
        return out

    def __repr__(self):
        return f"FiniteGroupTable(order={self.order})"


class Subgroup:
    """A subgroup given by its sorted member indices inside a parent table."""

    def __init__(self, group: FiniteGroupTable, members):
        members = tuple(sorted(set(int(m) for m in members)))
        if 0 not in members:
            raise ValueError("subgroup must contain the identity")
        mul = group.mul
        mem = set(members)
        for a in members:
            if int(group.inv[a]) not in mem:
                raise ValueError("subgroup not closed under inverse")
            for b in members:
                if int(mul[a, b]) not in mem:
                    raise ValueError("subgroup not closed under multiplication")
        self.group = group
        self.members = members

    @property
    def order(self) -> int:
        return len(self.members)

    def is_trivial(self) -> bool:
        return self.order == 1

    def is_full(self) -> bool:
        return self.order == self.group.order

    def is_normal(self) -> bool:
        g = self.group
        mem = set(self.members)
        for x in range(g.order):
            for h in self.members:
                if int(g.mul[g.mul[x, h], g.inv[x]]) not in mem:
                    return False
        return True

    def __eq__(self, other):
        return isinstance(other, Subgroup) and self.group is other.group and self.members == other.members

    def __hash__(self):
        return hash((id(self.group), self.members))

    def __repr__(self):
        return f"Subgroup(order={self.order}, members={self.members})"


def subgroup_generated_by(group: FiniteGroupTable, generators) -> Subgroup:
    return Subgroup(group, group._closure({0, *(int(g) for g in generators)}))


def trivial_subgroup(group: FiniteGroupTable) -> Subgroup:
    return Subgroup(group, (0,))


def full_subgroup(group: FiniteGroupTable) -> Subgroup:
    return Subgroup(group, range(group.order))


def enumerate_subgroups(group: FiniteGroupTable) -> list[Subgroup]:
    """All subgroups, ordered by (order, members). Exhaustive closure growth."""
    found = {(0,)}
    frontier = [(0,)]
    while frontier:
        fresh = []
        for members in frontier:
            base = set(members)
            for g in range(1, group.order):
                if g in base:
                    continue
                closed = tuple(sorted(group._closure(base | {g})))
                if closed not in found:
                    found.add(closed)
                    fresh.append(closed)
        frontier = fresh
    out = [Subgroup(group, m) for m in sorted(found, key=lambda m: (len(m), m))]
    return out


def conjugate_subgroup(sub: Subgroup, g: int) -> Subgroup:
    """The subgroup g H g^-1."""
    grp = sub.group
    gi = int(grp.inv[g])
    return Subgroup(grp, (int(grp.mul[grp.mul[g, h], gi]) for h in sub.members))


def _compose(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(p[q[x]] for x in range(len(p)))


def build_group(perm_generators, names=None, max_order: int = DEFAULT_MAX_ORDER) -> FiniteGroupTable:
    """Group generated by permutations in one-line notation (0-based images).

    Element order is breadth-first closure order with the identity first,
    so construction is deterministic for a fixed generator list.
    """
    gens = [tuple(int(x) for x in p) for p in perm_generators]
    if not gens:
        raise ValueError("need at least one generator")
    degree = len(gens[0])
    for p in gens:
        if len(p) != degree or sorted(p) != list(range(degree)):
            raise ValueError(f"not a permutation of 0..{degree - 1}: {p}")
    ident = tuple(range(degree))
    elems = [ident]
    index = {ident: 0}
    head = 0
    while head < len(elems):
        cur = elems[head]
        head += 1
        for g in gens:
            nxt = _compose(g, cur)
            if nxt not in index:
                if len(elems) >= max_order:
                    raise ValueError(f"group order exceeds bound {max_order}")
                index[nxt] = len(elems)
                elems.append(nxt)
    order = len(elems)
    mul = np.zeros((order, order), dtype=np.int64)
    for i, p in enumerate(elems):
        for j, q in enumerate(elems):
            mul[i, j] = index[_compose(p, q)]
    return FiniteGroupTable(mul, names=names, max_order=max_order)


def cyclic_group(n: int, max_order: int = DEFAULT_MAX_ORDER) -> FiniteGroupTable:
    if n < 1:
        raise ValueError("cyclic group order must be positive")
    mul = (np.arange(n)[:, None] + np.arange(n)[None, :]) % n
    return FiniteGroupTable(mul, names=[f"r{i}" if i else "e" for i in range(n)], max_order=max_order)


_BUILTIN_PERMS = {
    "C2": [[1, 0]],
    "C3": [[1, 2, 0]],
    "C4": [[1, 2, 3, 0]],
    "C6": [[1, 2, 3, 4, 5, 0]],
    "C2xC2": [[1, 0, 3, 2], [2, 3, 0, 1]],
    "S3": [[1, 0, 2], [1, 2, 0]],
}


def builtin_group(name: str) -> FiniteGroupTable:
    """Builtin acting groups: C2, C3, C4, C6, C2xC2, S3."""
    if name not in _BUILTIN_PERMS:
        raise KeyError(f"unknown builtin group {name!r}; have {sorted(_BUILTIN_PERMS)}")
    return build_group(_BUILTIN_PERMS[name])


def builtin_group_names() -> tuple[str, ...]:
    return tuple(sorted(_BUILTIN_PERMS))
