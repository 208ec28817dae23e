"""Finite groups given by multiplication tables.

Every group is stored with element 0 as the identity.  Builtin groups are
produced by closing a set of generators under composition; arbitrary groups
can be loaded from a table file (see :func:`read_group_table`).
"""

from __future__ import annotations

import functools
import itertools
import math
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

MAX_ORDER = 64


class GroupTableError(ValueError):
    """Raised for malformed or non-group multiplication tables."""


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    order: int
    mult: np.ndarray
    inv: np.ndarray
    name: str = "G"
    labels: tuple = ()
    id: int = 0
    # quot[a, b] is the index of a * b^{-1}; M(x)[a, b] = x(a b^{-1}).
    quot: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        mult = np.asarray(self.mult, dtype=np.intp)
        inv = np.asarray(self.inv, dtype=np.intp)
        mult.setflags(write=False)
        inv.setflags(write=False)
        object.__setattr__(self, "mult", mult)
        object.__setattr__(self, "inv", inv)
        quot = mult[:, inv]
        quot.setflags(write=False)
        object.__setattr__(self, "quot", quot)

    @property
    def delta(self) -> float:
        return math.sqrt(self.order)

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mult, self.mult.T))

    def same_as(self, other: "FiniteGroup") -> bool:
        return self is other or (
            self.order == other.order and np.array_equal(self.mult, other.mult)
        )

    def element_order(self, g: int) -> int:
        k, h = 1, g
        while h != self.id:
            h = self.mult[h, g]
            k += 1
        return k

    def label(self, g: int) -> str:
        return str(self.labels[g]) if self.labels else str(g)

    def __repr__(self):
        return f"FiniteGroup({self.name!r}, order={self.order})"


def validate_table(mult) -> tuple[np.ndarray, np.ndarray]:
    """Check that ``mult`` is a group table with identity 0; return (mult, inv)."""
    try:
        mult = np.asarray(mult, dtype=np.intp)
    except (TypeError, ValueError) as exc:
        raise GroupTableError(f"table is not an integer array: {exc}") from None
    if mult.ndim != 2 or mult.shape[0] != mult.shape[1] or mult.shape[0] == 0:
        raise GroupTableError(f"table must be square and nonempty, got shape {mult.shape}")
    n = mult.shape[0]
    if n > MAX_ORDER:
        raise GroupTableError(f"group order {n} exceeds the cap of {MAX_ORDER}")
    if mult.min() < 0 or mult.max() >= n:
        raise GroupTableError("table entries must lie in [0, n)")
    idx = np.arange(n)
    if not (np.array_equal(mult[0], idx) and np.array_equal(mult[:, 0], idx)):
        bad = int(np.flatnonzero((mult[0] != idx) | (mult[:, 0] != idx))[0])
        raise GroupTableError(f"element 0 is not the identity (fails at g={bad})")
    left = mult[mult, :]  # left[a, b, c] = (ab)c
    right = mult[idx[:, None, None], mult[None, :, :]]  # a(bc)
    bad = np.argwhere(left != right)
    if bad.size:
        a, b, c = (int(v) for v in bad[0])
        raise GroupTableError(f"associativity fails for triple (a, b, c) = ({a}, {b}, {c})")
    inv = np.full(n, -1, dtype=np.intp)
    for g in range(n):
        hits = np.flatnonzero(mult[g] == 0)
        if hits.size != 1 or mult[hits[0], g] != 0:
            raise GroupTableError(f"element {g} has no two-sided inverse")
        inv[g] = hits[0]
    return mult, inv


def from_table(mult, name: str = "G", labels=()) -> FiniteGroup:
    mult, inv = validate_table(mult)
    return FiniteGroup(order=mult.shape[0], mult=mult, inv=inv, name=name, labels=tuple(labels))


def read_group_table(path) -> FiniteGroup:
    """Load a table file: first line ``n``, then ``n`` rows of ``n`` indices."""
    path = Path(path)
    try:
        lines = [ln.split() for ln in path.read_text().splitlines() if ln.strip()]
    except OSError as exc:
        raise GroupTableError(f"cannot read {path}: {exc}") from None
    if not lines or len(lines[0]) != 1:
        raise GroupTableError("first line must hold the group order")
    try:
        n = int(lines[0][0])
        rows = [[int(v) for v in row] for row in lines[1:]]
    except ValueError as exc:
        raise GroupTableError(f"non-integer entry: {exc}") from None
    if len(rows) != n or any(len(r) != n for r in rows):
        raise GroupTableError(f"expected {n} rows of {n} entries")
    return from_table(rows, name=path.stem)


def write_group_table(group: FiniteGroup, path) -> None:
    rows = [str(group.order)] + [" ".join(map(str, row)) for row in group.mult]
    Path(path).write_text("\n".join(rows) + "\n")


def _closure(generators, compose, identity):
    elements = [identity]
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for a in frontier:
            for g in generators:
                b = compose(a, g)
                if b not in seen:
                    seen.add(b)
                    elements.append(b)
                    nxt.append(b)
        frontier = nxt
    return elements


def _from_elements(elements, compose, name):
    index = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    if n > MAX_ORDER:
        raise GroupTableError(f"group order {n} exceeds the cap of {MAX_ORDER}")
    mult = np.empty((n, n), dtype=np.intp)
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            mult[i, j] = index[compose(a, b)]
    return from_table(mult, name=name, labels=elements)


def _perm_compose(p, q):
    return tuple(p[i] for i in q)


def _perm_group(generators, degree, name):
    ident = tuple(range(degree))
    return _from_elements(_closure(generators, _perm_compose, ident), _perm_compose, name)


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupTableError("cyclic group needs n >= 1")
    if n > MAX_ORDER:
        raise GroupTableError(f"group order {n} exceeds the cap of {MAX_ORDER}")
    idx = np.arange(n)
    return from_table((idx[:, None] + idx[None, :]) % n, name=f"Z{n}", labels=range(n))


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the regular n-gon (order 2n)."""
    if n < 3:
        raise GroupTableError("dihedral group D_n needs n >= 3")
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    return _perm_group([rot, ref], n, f"D{n}")


def symmetric(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupTableError("symmetric group needs n >= 1")
    if n == 1:
        return _perm_group([], 1, "S1")
    cycle = tuple((i + 1) % n for i in range(n))
    swap = (1, 0) + tuple(range(2, n))
    return _perm_group([swap, cycle] if n > 2 else [swap], n, f"S{n}")


def alternating(n: int) -> FiniteGroup:
    if n < 3:
        raise GroupTableError("alternating group needs n >= 3")
    gens = []
    for j in range(2, n):
        p = list(range(n))
        p[0], p[1], p[j] = 1, j, 0
        gens.append(tuple(p))
    return _perm_group(gens, n, f"A{n}")


def quaternion() -> FiniteGroup:
    # Quaternion units as (sign, letter); letter in "1ijk".
    table = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
        ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
        ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
    }

    def compose(a, b):
        s, letter = table[(a[1], b[1])]
        return (a[0] * b[0] * s, letter)

    elements = _closure([(1, "i"), (1, "j")], compose, (1, "1"))
    return _from_elements(elements, compose, "Q8")


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    m = h.order
    n = g.order * m
    a = np.arange(n)
    ga, ha = a // m, a % m
    mult = g.mult[ga[:, None], ga[None, :]] * m + h.mult[ha[:, None], ha[None, :]]
    labels = [(g.label(i), h.label(j)) for i, j in itertools.product(range(g.order), range(m))]
    return from_table(mult, name=f"{g.name}x{h.name}", labels=labels)


_FACTOR = re.compile(r"^(Z|C|D|S|A)(\d+)$|^Q8$")


def _factor(token: str) -> FiniteGroup:
    m = _FACTOR.match(token)
    if not m:
        raise GroupTableError(f"unknown group name {token!r}")
    if token == "Q8":
        return quaternion()
    kind, n = m.group(1), int(m.group(2))
    if kind in "ZC":
        return cyclic(n)
    if kind == "D":
        return dihedral(n)
    if kind == "S":
        if math.factorial(n) > MAX_ORDER:
            raise GroupTableError(f"S{n} exceeds the order cap of {MAX_ORDER}")
        return symmetric(n)
    if math.factorial(n) // 2 > MAX_ORDER:
        raise GroupTableError(f"A{n} exceeds the order cap of {MAX_ORDER}")
    return alternating(n)


@functools.lru_cache(maxsize=None)
def group_from_spec(spec: str) -> FiniteGroup:
    """Build a group from a builtin name ("Z6", "S3", "D4", "Q8", "Z2xZ4") or a table path.

    ``D<n>`` is the dihedral group of order 2n, so "D4" has order 8.
    """
    spec = spec.strip()
    if Path(spec).is_file():
        return read_group_table(spec)
    tokens = spec.split("x")
    if not all(tokens):
        raise GroupTableError(f"malformed group spec {spec!r}")
    group = _factor(tokens[0])
    for tok in tokens[1:]:
        group = direct_product(group, _factor(tok))
        if group.order > MAX_ORDER:
            raise GroupTableError(f"group order {group.order} exceeds the cap of {MAX_ORDER}")
    return group


BUILTIN_CORPUS = ("Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "Z2xZ2", "S3", "D4", "Q8")


def generated_subgroup(group: FiniteGroup, gens) -> frozenset:
    elems = {group.id}
    frontier = [group.id]
    gens = list(gens)
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = int(group.mult[a, g])
                if b not in elems:
                    elems.add(b)
                    nxt.append(b)
        frontier = nxt
    return frozenset(elems)


def is_subgroup(group: FiniteGroup, subset) -> bool:
    s = set(int(v) for v in subset)
    if group.id not in s:
        return False
    arr = np.fromiter(s, dtype=np.intp)
    prods = group.mult[np.ix_(arr, arr)]
    return all(int(v) in s for v in prods.ravel()) and all(int(group.inv[v]) in s for v in arr)


@functools.lru_cache(maxsize=None)
def _subgroups_cached(group: FiniteGroup) -> tuple:
    found = {frozenset({group.id})}
    frontier = list(found)
    while frontier:
        nxt = []
        for h in frontier:
            for g in range(group.order):
                if g in h:
                    continue
                k = generated_subgroup(group, set(h) | {g})
                if k not in found:
                    found.add(k)
                    nxt.append(k)
        frontier = nxt
    return tuple(sorted(found, key=lambda s: (len(s), sorted(s))))


def subgroups(group: FiniteGroup) -> list[frozenset]:
    """All subgroups, ordered by size then by sorted elements."""
    return list(_subgroups_cached(group))


def left_cosets(group: FiniteGroup, h) -> list[frozenset]:
    """Cosets gH."""
    out = []
    for g in range(group.order):
        c = frozenset(int(group.mult[g, k]) for k in h)
        if c not in out:
            out.append(c)
    return out


def right_cosets(group: FiniteGroup, h) -> list[frozenset]:
    """Cosets Hg."""
    out = []
    for g in range(group.order):
        c = frozenset(int(group.mult[k, g]) for k in h)
        if c not in out:
            out.append(c)
    return out


def subgroup_as_group(group: FiniteGroup, h) -> tuple[FiniteGroup, list[int]]:
    """Return H as a standalone group plus the embedding (list of G-indices)."""
    elems = [group.id] + sorted(int(v) for v in h if v != group.id)
    pos = {g: i for i, g in enumerate(elems)}
    mult = [[pos[int(group.mult[a, b])] for b in elems] for a in elems]
    return from_table(mult, name=f"{group.name}|H{len(elems)}"), elems


def conjugacy_classes(group: FiniteGroup) -> list[list[int]]:
    seen = set()
    classes = []
    for g in range(group.order):
        if g in seen:
            continue
        cls = sorted({int(group.mult[group.mult[k, g], group.inv[k]]) for k in range(group.order)})
        seen.update(cls)
        classes.append(cls)
    return classes


@dataclass(frozen=True)
class CharacterTable:
    group: FiniteGroup
    dims: tuple
    values: np.ndarray  # values[i, g] = chi_i(g)
    classes: tuple

    def __len__(self):
        return len(self.dims)


@functools.lru_cache(maxsize=None)
def character_table(group: FiniteGroup) -> CharacterTable:
    """Irreducible characters, computed from the isotypic blocks of the regular representation.

    A random Hermitian combination of class sums acts by a distinct scalar on
    each isotypic component; its eigenspaces are the central idempotents
    z_chi = (d/n) sum_g conj(chi(g)) L_g.
    """
    n = group.order
    classes = conjugacy_classes(group)
    rng = np.random.default_rng(20170523)
    coef = np.zeros(n, dtype=complex)
    for cls in classes:
        c = rng.normal() + 1j * rng.normal()
        coef[cls] += c
        coef[group.inv[cls]] += np.conj(c)
    mat = coef[group.quot]
    w, v = np.linalg.eigh(mat)
    scale = max(1.0, float(np.abs(w).max()))
    cuts = np.flatnonzero(np.diff(w) > 1e-7 * scale) + 1
    blocks = np.split(np.arange(n), cuts)
    if len(blocks) != len(classes):
        raise RuntimeError(
            f"character table of {group.name}: found {len(blocks)} blocks for {len(classes)} classes"
        )
    dims, values = [], []
    for blk in blocks:
        proj = v[:, blk] @ v[:, blk].conj().T
        z = proj[:, 0]
        d = int(round(math.sqrt(len(blk))))
        dims.append(d)
        values.append(np.conj(z) * n / d)
    values = np.array(values)
    values[np.abs(values.imag) < 1e-12] = values[np.abs(values.imag) < 1e-12].real
    order = sorted(
        range(len(dims)),
        key=lambda i: (
            0 if np.allclose(values[i], 1) else 1,
            dims[i],
            tuple(np.round(np.angle(values[i]) % (2 * np.pi), 6)),
            tuple(np.round(values[i].real, 6)),
        ),
    )
    vals = values[order]
    vals.setflags(write=False)
    return CharacterTable(group, tuple(dims[i] for i in order), vals, tuple(map(tuple, classes)))


def subgroup_characters(group: FiniteGroup, h) -> np.ndarray:
    """Linear characters of an abelian group's subgroup H, as functions on G supported on H.

    Row 0 is the trivial character.  Only valid for abelian ``group``.
    """
    if not group.is_abelian():
        raise ValueError(f"{group.name} is not abelian")
    table = character_table(group)
    hs = sorted(h)
    rows = []
    for chi in table.values:
        r = np.zeros(group.order, dtype=complex)
        r[hs] = chi[hs]
        if not any(np.allclose(r, q, atol=1e-9) for q in rows):
            rows.append(r)
    return np.array(rows)
