"""Finite groups as validated Cayley tables, with the subgroup, coset,
conjugation, and double-coset machinery the rest of the package needs.

Elements are dense integer indices 0..n-1 and the identity is always index 0
(explicit tables are relabelled on input).  Symmetric-group elements are the
one-line permutation tuples in lexicographic order, composed as
(sigma * tau)(x) = sigma(tau(x)).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError

MAX_ORDER = 48


@dataclass(eq=False)
class FiniteGroup:
    """A finite group given by its Cayley table (row = left factor)."""

    order: int
    table: np.ndarray
    inverse: np.ndarray
    name: str = "group"

    identity: int = 0

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def conj(self, g: int, x: int) -> int:
        """g x g^-1."""
        return self.mul(self.mul(g, x), self.inv(g))

    def element_order(self, a: int) -> int:
        x, n = a, 1
        while x != 0:
            x = self.mul(x, a)
            n += 1
        return n

    def conjugacy_classes(self) -> list[tuple[int, ...]]:
        seen = set()
        classes = []
        for x in range(self.order):
            if x in seen:
                continue
            orbit = {self.conj(g, x) for g in range(self.order)}
            seen |= orbit
            classes.append(tuple(sorted(orbit)))
        return classes

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order {self.order})"


def _validate_table(table: np.ndarray) -> None:
    n = table.shape[0]
    if table.shape != (n, n):
        raise ValidationError("Cayley table must be square")
    if table.min() < 0 or table.max() >= n:
        raise ValidationError("Cayley table entries out of range")
    ref = np.arange(n)
    for i in range(n):
        if not np.array_equal(np.sort(table[i]), ref):
            raise ValidationError(f"table is not a Latin square: row {i} repeats")
        if not np.array_equal(np.sort(table[:, i]), ref):
            raise ValidationError(f"table is not a Latin square: column {i} repeats")
    left = table[table]          # left[a,b,c] = (a*b)*c
    right = table[:, table]      # right[a,b,c] = a*(b*c)
    if not np.array_equal(left, right):
        a, b, c = (int(v) for v in np.argwhere(left != right)[0])
        raise ValidationError(
            f"table is not associative: ({a}*{b})*{c} != {a}*({b}*{c})"
        )


def _finish(table: np.ndarray, name: str) -> FiniteGroup:
    n = table.shape[0]
    if n > MAX_ORDER:
        raise ValidationError(f"group order {n} exceeds the supported bound {MAX_ORDER}")
    _validate_table(table)
    ident = None
    for e in range(n):
        if np.array_equal(table[e], np.arange(n)) and np.array_equal(table[:, e], np.arange(n)):
            ident = e
            break
    if ident is None:
        raise ValidationError("table has no identity element")
    if ident != 0:
        relabel = np.arange(n)
        relabel[0], relabel[ident] = ident, 0
        new = np.empty_like(table)
        for a in range(n):
            for b in range(n):
                new[relabel[a], relabel[b]] = relabel[table[a, b]]
        table = new
    inverse = np.empty(n, dtype=np.int64)
    for a in range(n):
        hits = np.nonzero(table[a] == 0)[0]
        if len(hits) != 1 or table[hits[0], a] != 0:
            raise ValidationError(f"element {a} has no two-sided inverse")
        inverse[a] = hits[0]
    return FiniteGroup(order=n, table=table, inverse=inverse, name=name)


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise ValidationError("cyclic group needs n >= 1")
    idx = np.arange(n)
    table = (idx[:, None] + idx[None, :]) % n
    return _finish(table.astype(np.int64), f"C{n}")


def dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order 2n: rotations first, then reflections."""
    if n < 1:
        raise ValidationError("dihedral group needs n >= 1")
    # element k < n is x -> x+k, element n+k is x -> k-x (all mod n)
    def apply(e: int, x: int) -> int:
        return (x + e) % n if e < n else (e - n - x) % n

    def index_of(fn) -> int:
        img = tuple(fn(x) for x in range(n))
        for e in range(2 * n):
            if tuple(apply(e, x) for x in range(n)) == img:
                return e
        raise AssertionError

    table = np.empty((2 * n, 2 * n), dtype=np.int64)
    for a in range(2 * n):
        for b in range(2 * n):
            table[a, b] = index_of(lambda x, a=a, b=b: apply(a, apply(b, x)))
    return _finish(table, f"D{n}")


def symmetric(n: int) -> FiniteGroup:
    if not 1 <= n <= 5:
        raise ValidationError("symmetric group supported for 1 <= n <= 5")
    perms = sorted(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    m = len(perms)
    table = np.empty((m, m), dtype=np.int64)
    for i, s in enumerate(perms):
        for j, t in enumerate(perms):
            table[i, j] = index[tuple(s[t[x]] for x in range(n))]
    return _finish(table, f"S{n}")


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    n, m = g.order, h.order
    table = np.empty((n * m, n * m), dtype=np.int64)
    for a in range(n):
        for b in range(m):
            for c in range(n):
                for d in range(m):
                    table[a * m + b, c * m + d] = g.table[a, c] * m + h.table[b, d]
    return _finish(table, f"{g.name}x{h.name}")


def from_table(table) -> FiniteGroup:
    return _finish(np.array(table, dtype=np.int64), "explicit")


def build(kind: str, **params) -> FiniteGroup:
    """Build a group by kind: cyclic, dihedral, symmetric, product, table."""
    if kind == "cyclic":
        return cyclic(int(params["n"]))
    if kind == "dihedral":
        return dihedral(int(params["n"]))
    if kind == "symmetric":
        return symmetric(int(params["n"]))
    if kind == "product":
        factors = [build(f.pop("kind"), **f) for f in [dict(d) for d in params["factors"]]]
        if not factors:
            raise ValidationError("product needs at least one factor")
        g = factors[0]
        for h in factors[1:]:
            g = direct_product(g, h)
        return g
    if kind == "table":
        return from_table(params["table"])
    raise ValidationError(f"unknown group kind {kind!r}")


@dataclass(eq=False)
class Subgroup:
    """A validated subgroup: a sorted element subset closed under the table."""

    group: FiniteGroup
    elements: tuple[int, ...]
    _local: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        elems = tuple(sorted(set(int(e) for e in self.elements)))
        object.__setattr__(self, "elements", elems)
        g = self.group
        if not elems or elems[0] != 0:
            raise ValidationError("subgroup must contain the identity (index 0)")
        inside = set(elems)
        for a in elems:
            if g.inv(a) not in inside:
                raise ValidationError(f"subgroup not closed under inverse at {a}")
            for b in elems:
                if g.mul(a, b) not in inside:
                    raise ValidationError(f"subgroup not closed under product at ({a},{b})")

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def key(self) -> tuple[int, ...]:
        return self.elements

    def contains(self, x: int) -> bool:
        return x in set(self.elements)

    def is_subset_of(self, other: "Subgroup") -> bool:
        return set(self.elements) <= set(other.elements)

    def as_group(self) -> tuple[FiniteGroup, np.ndarray]:
        """The subgroup as a group in its own right, plus the map
        local index -> parent element index (identity stays at 0)."""
        if "as_group" not in self._local:
            to_parent = np.array(self.elements, dtype=np.int64)
            pos = {e: i for i, e in enumerate(self.elements)}
            n = self.order
            table = np.empty((n, n), dtype=np.int64)
            for i, a in enumerate(self.elements):
                for j, b in enumerate(self.elements):
                    table[i, j] = pos[self.group.mul(a, b)]
            self._local["as_group"] = (_finish(table, "sub"), to_parent)
        return self._local["as_group"]

    def __repr__(self) -> str:
        return f"Subgroup{self.elements}"


def full_subgroup(g: FiniteGroup) -> Subgroup:
    return Subgroup(g, tuple(range(g.order)))


def trivial_subgroup(g: FiniteGroup) -> Subgroup:
    return Subgroup(g, (0,))


def subgroup_generated(g: FiniteGroup, gens) -> Subgroup:
    """Smallest subgroup containing the generators."""
    elems = {0}
    gens = sorted(set(int(x) for x in gens))
    for x in gens:
        if not 0 <= x < g.order:
            raise ValidationError(f"generator {x} out of range")
    frontier = list(elems)
    while frontier:
        nxt = []
        for a in frontier:
            for s in gens:
                for prod in (g.mul(a, s), g.mul(s, a), g.inv(a)):
                    if prod not in elems:
                        elems.add(prod)
                        nxt.append(prod)
        frontier = nxt
    return Subgroup(g, tuple(sorted(elems)))


def conjugate_subgroup(g_elt: int, h: Subgroup) -> Subgroup:
    g = h.group
    return Subgroup(g, tuple(sorted(g.conj(g_elt, x) for x in h.elements)))


def intersect(k: Subgroup, h: Subgroup) -> Subgroup:
    if k.group is not h.group:
        raise ValidationError("subgroups live in different groups")
    return Subgroup(k.group, tuple(sorted(set(k.elements) & set(h.elements))))


def cosets(h: Subgroup, side: str = "left") -> list[int]:
    """Minimal-index representatives of the left (gH) or right (Hg) cosets."""
    g = h.group
    if side not in ("left", "right"):
        raise ValidationError("side must be 'left' or 'right'")
    reps = []
    seen = set()
    for x in range(g.order):
        if x in seen:
            continue
        reps.append(x)
        for e in h.elements:
            seen.add(g.mul(x, e) if side == "left" else g.mul(e, x))
    return reps


def double_coset(k: Subgroup, g_elt: int, h: Subgroup) -> tuple[int, ...]:
    """The set KgH as a sorted element tuple."""
    g = k.group
    out = set()
    for a in k.elements:
        ag = g.mul(a, g_elt)
        for b in h.elements:
            out.add(g.mul(ag, b))
    return tuple(sorted(out))


def double_coset_reps(k: Subgroup, h: Subgroup) -> list[int]:
    """Minimal-index representative of each double coset KgH, ascending."""
    g = k.group
    reps = []
    seen = set()
    for x in range(g.order):
        if x in seen:
            continue
        reps.append(x)
        seen |= set(double_coset(k, x, h))
    return reps


def all_subgroups(g: FiniteGroup) -> list[Subgroup]:
    """Every subgroup, ordered by (order, element tuple)."""
    found = {(0,): trivial_subgroup(g)}
    frontier = [found[(0,)]]
    while frontier:
        nxt = []
        for sub in frontier:
            for x in range(1, g.order):
                if x in set(sub.elements):
                    continue
                bigger = subgroup_generated(g, set(sub.elements) | {x})
                if bigger.key not in found:
                    found[bigger.key] = bigger
                    nxt.append(bigger)
        frontier = nxt
    return sorted(found.values(), key=lambda s: (s.order, s.elements))
