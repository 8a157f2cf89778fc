"""Finite abelian groups Z(n_1) x ... x Z(n_r), their subgroups, quotients and characters.

Elements are plain tuples of residues.  Every group is identified with its own
character group through the pairing

    (x, y) = zeta_m ** sum_i (m / n_i) * x_i * y_i,    m = exponent,

so dual elements reuse the element type.  Internally elements are also
addressed by their mixed-radix index (last coordinate fastest), which coincides
with lexicographic order on coordinate tuples.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from .cyclotomic import RootOfUnity, lcm
from .errors import EnumerationTooLarge, InvalidArgument, InvalidElement, InvalidGroup

Element = tuple[int, ...]

ENUMERATION_CAP = 256


@dataclass(frozen=True)
class Group:
    """Z(n_1) x ... x Z(n_r), moduli kept in the order given."""

    moduli: tuple[int, ...]

    def __post_init__(self) -> None:
        mods = tuple(int(n) for n in self.moduli)
        if not mods:
            raise InvalidGroup("a group needs at least one cyclic factor")
        if any(n < 1 for n in mods):
            raise InvalidGroup(f"moduli must be positive, got {list(mods)}")
        object.__setattr__(self, "moduli", mods)

    @cached_property
    def order(self) -> int:
        return math.prod(self.moduli)

    @cached_property
    def exponent(self) -> int:
        return lcm(*self.moduli)

    @property
    def rank(self) -> int:
        return len(self.moduli)

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    @cached_property
    def strides(self) -> np.ndarray:
        s = [1] * self.rank
        for i in range(self.rank - 2, -1, -1):
            s[i] = s[i + 1] * self.moduli[i + 1]
        return np.array(s, dtype=np.int64)

    @cached_property
    def mod_array(self) -> np.ndarray:
        return np.array(self.moduli, dtype=np.int64)

    @cached_property
    def pairing_scales(self) -> np.ndarray:
        """m / n_i for each coordinate."""
        return np.array([self.exponent // n for n in self.moduli], dtype=np.int64)

    @cached_property
    def coords(self) -> np.ndarray:
        """(order, rank) array of all element coordinates in index order."""
        idx = np.arange(self.order, dtype=np.int64)
        return (idx[:, None] // self.strides[None, :]) % self.mod_array[None, :]

    def coords_range(self, start: int, stop: int) -> np.ndarray:
        idx = np.arange(start, min(stop, self.order), dtype=np.int64)
        return (idx[:, None] // self.strides[None, :]) % self.mod_array[None, :]

    def encode(self, coords: np.ndarray) -> np.ndarray:
        """Indices of the (already reduced) coordinate rows."""
        return np.asarray(coords, dtype=np.int64) @ self.strides

    def reduce_coords(self, coords: np.ndarray) -> np.ndarray:
        return np.asarray(coords, dtype=np.int64) % self.mod_array

    def elements(self) -> list[Element]:
        return list(itertools.product(*(range(n) for n in self.moduli)))

    def __iter__(self) -> Iterator[Element]:
        return iter(self.elements())

    def __len__(self) -> int:
        return self.order

    def validate(self, x: Sequence[int]) -> Element:
        try:
            vals = tuple(int(c) for c in x)
        except TypeError as exc:
            raise InvalidElement(f"element must be a sequence of integers, got {x!r}") from exc
        if len(vals) != self.rank:
            raise InvalidElement(f"element {list(vals)} has {len(vals)} coordinates, group {self} needs {self.rank}")
        return tuple(c % n for c, n in zip(vals, self.moduli))

    def index(self, x: Sequence[int]) -> int:
        return int(sum(c * int(s) for c, s in zip(self.validate(x), self.strides)))

    def element(self, i: int) -> Element:
        if not 0 <= i < self.order:
            raise InvalidElement(f"index {i} out of range for group of order {self.order}")
        return tuple(int(c) for c in self.coords[i])

    @property
    def zero(self) -> Element:
        return (0,) * self.rank

    def add(self, a: Sequence[int], b: Sequence[int]) -> Element:
        a, b = self.validate(a), self.validate(b)
        return tuple((x + y) % n for x, y, n in zip(a, b, self.moduli))

    def neg(self, a: Sequence[int]) -> Element:
        return tuple((-x) % n for x, n in zip(self.validate(a), self.moduli))

    def sub(self, a: Sequence[int], b: Sequence[int]) -> Element:
        return self.add(a, self.neg(b))

    def scale(self, k: int, a: Sequence[int]) -> Element:
        return tuple((k * x) % n for x, n in zip(self.validate(a), self.moduli))

    def element_order(self, a: Sequence[int]) -> int:
        a = self.validate(a)
        return lcm(*(n // math.gcd(n, x) for x, n in zip(a, self.moduli)))

    def pairing_exponent(self, x: Sequence[int], y: Sequence[int]) -> int:
        x, y = self.validate(x), self.validate(y)
        m = self.exponent
        return sum((m // n) * a * b for a, b, n in zip(x, y, self.moduli)) % m

    def pairing(self, x: Sequence[int], y: Sequence[int]) -> RootOfUnity:
        return RootOfUnity(self.pairing_exponent(x, y), self.exponent)

    def pairing_exponents(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        """Exponent table ``e[a, b]`` for coordinate rows xs[a], ys[b]."""
        return ((xs * self.pairing_scales) @ ys.T) % self.exponent

    def power(self, n: int) -> "Group":
        """The n-fold direct product of this group with itself."""
        return Group(self.moduli * n)

    def __str__(self) -> str:
        return "x".join(f"Z({n})" for n in self.moduli)


def make_group(moduli: Iterable[int]) -> Group:
    """Validated constructor: every modulus must be at least 2."""
    mods = list(moduli)
    if not mods:
        raise InvalidGroup("moduli list must be nonempty")
    for n in mods:
        if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
            raise InvalidGroup(f"modulus {n!r} is not an integer")
        if n < 2:
            raise InvalidGroup(f"modulus {n} < 2 in {mods}")
    return Group(tuple(int(n) for n in mods))


def trivial_group() -> Group:
    return Group((1,))


def element_arith(group: Group, op: str, a: Sequence[int] | None = None, b: Sequence[int] | None = None) -> Element:
    if op == "zero":
        return group.zero
    if op == "negate":
        return group.neg(a)
    if op == "add":
        if b is None:
            raise InvalidElement("add needs two operands")
        return group.add(a, b)
    raise InvalidArgument(f"unknown element operation {op!r}")


def pairing(group: Group, x: Sequence[int], y: Sequence[int]) -> RootOfUnity:
    return group.pairing(x, y)


# ---------------------------------------------------------------------------
# subgroups
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Subgroup:
    """A subgroup given by its sorted member list."""

    parent: Group
    members: tuple[Element, ...]

    @classmethod
    def from_indices(cls, parent: Group, indices: Iterable[int]) -> "Subgroup":
        idx = np.unique(np.fromiter(indices, dtype=np.int64))
        return cls(parent, tuple(tuple(int(c) for c in row) for row in parent.coords[idx]))

    @cached_property
    def indices(self) -> np.ndarray:
        if not self.members:
            return np.zeros(0, dtype=np.int64)
        return self.parent.encode(np.array(self.members, dtype=np.int64))

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.parent.order, dtype=bool)
        m[self.indices] = True
        return m

    @property
    def order(self) -> int:
        return len(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Element]:
        return iter(self.members)

    def __contains__(self, x: object) -> bool:
        try:
            return bool(self.mask[self.parent.index(x)])  # type: ignore[arg-type]
        except InvalidElement:
            return False

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    @property
    def is_whole(self) -> bool:
        return self.order == self.parent.order

    def is_closed(self) -> bool:
        """Contains zero and is closed under addition and negation."""
        g = self.parent
        if not self.mask[0]:
            return False
        # grow the span of the members one cyclic subgroup at a time; it equals the set iff never leaves it
        have = np.zeros(g.order, dtype=bool)
        have[0] = True
        current = np.array([0], dtype=np.int64)
        for i in self.indices:
            if have[i]:
                continue
            current = _join(g, current, _cyclic(g, int(i)))
            if not self.mask[current].all():
                return False
            have[current] = True
        return True

    def issubset(self, other: "Subgroup") -> bool:
        return bool(other.mask[self.indices].all())

    def intersection(self, other: "Subgroup") -> "Subgroup":
        return Subgroup.from_indices(self.parent, np.nonzero(self.mask & other.mask)[0])

    @cached_property
    def generators(self) -> tuple[Element, ...]:
        """A small generating set picked greedily in member order."""
        g = self.parent
        gens: list[Element] = []
        current = np.array([0], dtype=np.int64)
        have = np.zeros(g.order, dtype=bool)
        have[0] = True
        for i in self.indices:
            if not have[i]:
                gens.append(tuple(int(c) for c in g.coords[i]))
                current = _join(g, current, _cyclic(g, int(i)))
                have[:] = False
                have[current] = True
        return tuple(gens)

    def sort_key(self) -> tuple:
        return (self.order, tuple(int(i) for i in self.indices))

    def __str__(self) -> str:
        return "{" + ", ".join(str(m if len(m) > 1 else m[0]) for m in self.members) + "}"


def _cyclic(g: Group, i: int) -> np.ndarray:
    x = g.coords[i]
    k = g.element_order(tuple(int(c) for c in x))
    mult = g.reduce_coords(np.arange(k, dtype=np.int64)[:, None] * x[None, :])
    return np.unique(g.encode(mult))


def _join(g: Group, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    ca, cb = g.coords[a], g.coords[b]
    s = g.reduce_coords(ca[:, None, :] + cb[None, :, :]).reshape(-1, g.rank)
    return np.unique(g.encode(s))


def subgroup_generate(group: Group, generators: Iterable[Sequence[int]]) -> Subgroup:
    """Smallest subgroup containing the generators."""
    current = np.array([0], dtype=np.int64)
    have = np.zeros(group.order, dtype=bool)
    have[0] = True
    for x in generators:
        i = group.index(x)
        if have[i]:
            continue
        current = _join(group, current, _cyclic(group, i))
        have[current] = True
    return Subgroup.from_indices(group, current)


def trivial_subgroup(group: Group) -> Subgroup:
    return Subgroup(group, (group.zero,))


def whole_group(group: Group) -> Subgroup:
    return Subgroup(group, tuple(group.elements()))


def subset_is_subgroup(group: Group, elements: Iterable[Sequence[int]]) -> bool:
    idx = {group.index(x) for x in elements}
    return Subgroup.from_indices(group, idx).is_closed() if idx else False


def enumerate_subgroups(group: Group, cap: int = ENUMERATION_CAP) -> list[Subgroup]:
    """Every subgroup, sorted by size and then by members.

    Found as the closure of {0} under joins with cyclic subgroups, which reaches
    every subgroup of a finite abelian group.
    """
    if group.order > cap:
        raise EnumerationTooLarge(f"group of order {group.order} exceeds subgroup enumeration cap {cap}")
    cyclics: dict[tuple[int, ...], np.ndarray] = {}
    for i in range(group.order):
        c = _cyclic(group, i)
        cyclics.setdefault(tuple(c.tolist()), c)
    cyc_list = list(cyclics.values())
    seen: dict[tuple[int, ...], np.ndarray] = {(0,): np.array([0], dtype=np.int64)}
    frontier = [np.array([0], dtype=np.int64)]
    while frontier:
        nxt = []
        for s in frontier:
            mask = np.zeros(group.order, dtype=bool)
            mask[s] = True
            for c in cyc_list:
                if mask[c].all():
                    continue
                j = _join(group, s, c)
                key = tuple(j.tolist())
                if key not in seen:
                    seen[key] = j
                    nxt.append(j)
        frontier = nxt
    subs = [Subgroup.from_indices(group, idx) for idx in seen.values()]
    subs.sort(key=Subgroup.sort_key)
    return subs


def annihilator(group: Group, b: Subgroup) -> Subgroup:
    """A(Y, B): all y with (x, y) = 1 for every x in B."""
    if b.parent != group:
        raise InvalidArgument("subgroup belongs to a different group")
    gens = np.array(b.generators, dtype=np.int64).reshape(-1, group.rank)
    if len(gens) == 0:
        return whole_group(group)
    e = group.pairing_exponents(gens, group.coords)
    return Subgroup.from_indices(group, np.nonzero(~np.any(e != 0, axis=0))[0])


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, math.isqrt(p) + 1))


def p_component(group: Group, p: int) -> Subgroup:
    """X_(p) = {x : p x = 0}."""
    if not isinstance(p, int) or not _is_prime(p):
        raise InvalidArgument(f"{p!r} is not a prime")
    zero = ~np.any(group.reduce_coords(p * group.coords) != 0, axis=1)
    return Subgroup.from_indices(group, np.nonzero(zero)[0])


def prime_divisors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# quotients
# ---------------------------------------------------------------------------


def _diagonalize(rows: list[list[int]], r: int) -> tuple[list[int], list[list[int]], list[list[int]]]:
    """Diagonalise an integer relation matrix by unimodular row and column moves.

    Returns (diag, V, Vinv) with column transform V tracked exactly, so that
    the lattice spanned by the rows, multiplied on the right by V, is spanned
    by diag(d_0, ..., d_{r-1}).
    """
    A = [list(row) for row in rows]
    q = len(A)
    V = [[int(i == j) for j in range(r)] for i in range(r)]
    Vi = [[int(i == j) for j in range(r)] for i in range(r)]

    def col_add(src: int, dst: int, k: int) -> None:
        for row in A:
            row[dst] += k * row[src]
        for row in V:
            row[dst] += k * row[src]
        Vi[src] = [a - k * b for a, b in zip(Vi[src], Vi[dst])]

    def col_swap(a: int, b: int) -> None:
        if a == b:
            return
        for row in A:
            row[a], row[b] = row[b], row[a]
        for row in V:
            row[a], row[b] = row[b], row[a]
        Vi[a], Vi[b] = Vi[b], Vi[a]

    def col_neg(a: int) -> None:
        for row in A:
            row[a] = -row[a]
        for row in V:
            row[a] = -row[a]
        Vi[a] = [-x for x in Vi[a]]

    for t in range(r):
        while True:
            cands = [(abs(A[i][j]), i, j) for i in range(t, q) for j in range(t, r) if A[i][j]]
            if not cands:
                raise ArithmeticError("relation lattice is not of full rank")
            _, pi, pj = min(cands)
            A[t], A[pi] = A[pi], A[t]
            col_swap(t, pj)
            clean = True
            piv = A[t][t]
            for i in range(t + 1, q):
                k = A[i][t] // piv
                if k:
                    A[i] = [a - k * b for a, b in zip(A[i], A[t])]
                if A[i][t]:
                    clean = False
            for j in range(t + 1, r):
                k = A[t][j] // piv
                if k:
                    col_add(t, j, -k)
                if A[t][j]:
                    clean = False
            if clean:
                break
        if A[t][t] < 0:
            col_neg(t)
    return [A[t][t] for t in range(r)], V, Vi


@dataclass(frozen=True, eq=False)
class QuotientGroup:
    """X / H with an explicit isomorphism onto a product-of-cyclics ``structure``."""

    parent: Group
    kernel: Subgroup
    structure: Group
    cosets: tuple[Element, ...]
    _V: np.ndarray = field(repr=False)
    _Vinv: np.ndarray = field(repr=False)
    _diag: np.ndarray = field(repr=False)
    _keep: np.ndarray = field(repr=False)

    def project_coords(self, coords: np.ndarray) -> np.ndarray:
        coords = np.asarray(coords, dtype=np.int64)
        if not len(self._keep):
            return np.zeros(coords.shape[:-1] + (1,), dtype=np.int64)
        return ((coords @ self._V) % self._diag)[..., self._keep]

    def project(self, x: Sequence[int]) -> Element:
        x = self.parent.validate(x)
        return tuple(int(c) for c in self.project_coords(np.array(x, dtype=np.int64)))

    def coset_index(self, x: Sequence[int]) -> int:
        return self.structure.index(self.project(x))

    def lift(self, s: Sequence[int]) -> Element:
        """A parent element in the coset named by structure element s."""
        s = self.structure.validate(s)
        full = np.zeros(self.parent.rank, dtype=np.int64)
        if len(self._keep):
            full[self._keep] = s
        return tuple(int(c) for c in self.parent.reduce_coords(full @ self._Vinv))

    @property
    def order(self) -> int:
        return len(self.cosets)


def quotient(group: Group, h: Subgroup) -> QuotientGroup:
    if h.parent != group:
        raise InvalidArgument("subgroup belongs to a different group")
    r = group.rank
    if h.is_trivial:
        eye = np.eye(r, dtype=np.int64)
        return QuotientGroup(
            group, h, group, tuple(group.elements()), eye, eye, group.mod_array.copy(), np.arange(r)
        )
    rows = [[n if i == j else 0 for j in range(r)] for i, n in enumerate(group.moduli)]
    rows += [list(g) for g in h.generators]
    diag, V, Vi = _diagonalize(rows, r)
    keep = np.array([t for t in range(r) if diag[t] > 1], dtype=np.int64)
    structure = Group(tuple(diag[t] for t in keep)) if len(keep) else trivial_group()
    Varr = np.array(V, dtype=np.int64)
    Viarr = np.array(Vi, dtype=np.int64)
    darr = np.array(diag, dtype=np.int64)
    proj = (group.coords @ Varr) % darr
    proj = proj[:, keep] if len(keep) else np.zeros((group.order, 1), dtype=np.int64)
    sidx = structure.encode(proj)
    reps = np.full(structure.order, -1, dtype=np.int64)
    # first (smallest) parent index in each coset
    for i in range(group.order - 1, -1, -1):
        reps[sidx[i]] = i
    if (reps < 0).any() or structure.order * h.order != group.order:
        raise ArithmeticError("quotient construction failed consistency check")
    cosets = tuple(tuple(int(c) for c in group.coords[i]) for i in reps)
    return QuotientGroup(group, h, structure, cosets, Varr, Viarr, darr, keep)
