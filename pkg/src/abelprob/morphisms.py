"""Homomorphisms between product-of-cyclic groups as integer matrices.

``matrix[j][i]`` is the coefficient of input coordinate i in output coordinate
j, so ``(h x)_j = sum_i matrix[j][i] * x_i  (mod k_j)``.  Such a matrix defines
a homomorphism Z(n_1) x ... -> Z(k_1) x ... iff ``k_j`` divides
``n_i * matrix[j][i]`` for every entry.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import EnumerationTooLarge, InvalidArgument, InvalidElement, InvalidHomomorphism, NotInvariant
from .groups import (
    ENUMERATION_CAP,
    Element,
    Group,
    QuotientGroup,
    Subgroup,
)

AUTOMORPHISM_COUNT_CAP = 200_000
ADJOINT_CHECK_ORDER = 64


@dataclass(frozen=True)
class Homomorphism:
    domain: Group
    codomain: Group
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(int(v) for v in row) for row in self.matrix)
        if len(rows) != self.codomain.rank or any(len(r) != self.domain.rank for r in rows):
            raise InvalidHomomorphism(
                f"matrix must be {self.codomain.rank}x{self.domain.rank} for {self.domain} -> {self.codomain}"
            )
        reduced = []
        for j, row in enumerate(rows):
            kj = self.codomain.moduli[j]
            for i, v in enumerate(row):
                if (self.domain.moduli[i] * v) % kj:
                    raise InvalidHomomorphism(
                        f"entry [{j}][{i}] = {v} is not well defined: "
                        f"{v}*{self.domain.moduli[i]} is not 0 mod {kj}"
                    )
            reduced.append(tuple(v % kj for v in row))
        object.__setattr__(self, "matrix", tuple(reduced))

    @cached_property
    def matrix_array(self) -> np.ndarray:
        return np.array(self.matrix, dtype=np.int64).reshape(self.codomain.rank, self.domain.rank)

    def apply_coords(self, coords: np.ndarray) -> np.ndarray:
        return self.codomain.reduce_coords(np.asarray(coords, dtype=np.int64) @ self.matrix_array.T)

    @cached_property
    def image_indices(self) -> np.ndarray:
        """Codomain index of h(x) for every domain element x, in index order."""
        return self.codomain.encode(self.apply_coords(self.domain.coords))

    def apply(self, x: Sequence[int]) -> Element:
        x = self.domain.validate(x)
        return tuple(int(c) for c in self.apply_coords(np.array(x, dtype=np.int64)))

    __call__ = apply

    @property
    def is_endomorphism(self) -> bool:
        return self.domain == self.codomain

    def compose(self, other: "Homomorphism") -> "Homomorphism":
        """self after other."""
        if other.codomain != self.domain:
            raise InvalidHomomorphism("composition of incompatible homomorphisms")
        return Homomorphism(other.domain, self.codomain, _mat(self.matrix_array @ other.matrix_array))

    def __matmul__(self, other: "Homomorphism") -> "Homomorphism":
        return self.compose(other)

    def kernel(self, chunk: int = 1 << 17) -> Subgroup:
        found = []
        for start in range(0, self.domain.order, chunk):
            img = self.apply_coords(self.domain.coords_range(start, start + chunk))
            found.append(start + np.nonzero(~np.any(img != 0, axis=1))[0])
        return Subgroup.from_indices(self.domain, np.concatenate(found))

    def image(self, sub: Subgroup | None = None) -> Subgroup:
        idx = self.image_indices if sub is None else self.image_indices[sub.indices]
        return Subgroup.from_indices(self.codomain, idx)

    def is_identity(self) -> bool:
        return self.is_endomorphism and bool((self.image_indices == np.arange(self.domain.order)).all())

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.matrix)

    def __str__(self) -> str:
        return f"{self.domain}->{self.codomain} {[list(r) for r in self.matrix]}"


def _mat(a: np.ndarray) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(v) for v in row) for row in a)


def make_homomorphism(group: Group, matrix: Sequence[Sequence[int]], codomain: Group | None = None) -> Homomorphism:
    return Homomorphism(group, codomain or group, _mat(np.array(matrix, dtype=object).reshape(
        (codomain or group).rank, group.rank)))


def identity(group: Group) -> Homomorphism:
    return Homomorphism(group, group, _mat(np.eye(group.rank, dtype=np.int64)))


def scalar(group: Group, c: int) -> Homomorphism:
    """Multiplication by the integer c."""
    return Homomorphism(group, group, _mat(c * np.eye(group.rank, dtype=np.int64)))


def zero_map(domain: Group, codomain: Group | None = None) -> Homomorphism:
    codomain = codomain or domain
    return Homomorphism(domain, codomain, _mat(np.zeros((codomain.rank, domain.rank), dtype=np.int64)))


def from_images(domain: Group, codomain: Group, images: Sequence[Sequence[int]]) -> Homomorphism:
    """The homomorphism sending the i-th unit vector to images[i]."""
    cols = [codomain.validate(g) for g in images]
    if len(cols) != domain.rank:
        raise InvalidHomomorphism(f"need {domain.rank} images, got {len(cols)}")
    return Homomorphism(domain, codomain, tuple(tuple(c[j] for c in cols) for j in range(codomain.rank)))


def from_function(domain: Group, codomain: Group, f: Callable[[Element], Sequence[int]]) -> Homomorphism:
    """Matrix of f, after checking f agrees with it on every element."""
    units = [tuple(int(i == t) for i in range(domain.rank)) for t in range(domain.rank)]
    h = from_images(domain, codomain, [f(u) for u in units])
    for x in domain.elements():
        if codomain.validate(f(x)) != h.apply(x):
            raise InvalidHomomorphism(f"function is not additive at {x}")
    return h


def apply_hom(h: Homomorphism, x: Sequence[int]) -> Element:
    return h.apply(x)


def is_automorphism(h: Homomorphism) -> bool:
    return h.is_endomorphism and len(np.unique(h.image_indices)) == h.domain.order


def inverse(h: Homomorphism) -> Homomorphism:
    if not is_automorphism(h):
        raise InvalidHomomorphism("only automorphisms are invertible")
    g = h.domain
    inv = np.empty(g.order, dtype=np.int64)
    inv[h.image_indices] = np.arange(g.order)
    units = [g.index(tuple(int(i == t) for i in range(g.rank))) for t in range(g.rank)]
    return from_images(g, g, [g.element(int(inv[u])) for u in units])


def _adjoint_matrix(h: Homomorphism) -> tuple[tuple[int, ...], ...]:
    n, k = h.domain.moduli, h.codomain.moduli
    M = h.matrix
    return tuple(
        tuple((n[i] * M[j][i] // k[j]) % n[i] for j in range(len(k)))
        for i in range(len(n))
    )


def adjoint_identity_holds(h: Homomorphism, adj: Homomorphism) -> bool:
    """Exhaustive check of (h x, y) = (x, adj y) over all x, y."""
    X, Z = h.domain, h.codomain
    left = Z.pairing_exponents(Z.coords[h.image_indices], Z.coords)  # (|X|, |Z|), unit 1/m_Z
    right = X.pairing_exponents(X.coords, X.coords[adj.image_indices])  # unit 1/m_X
    mx, mz = X.exponent, Z.exponent
    return bool(((left * mx - right * mz) % (mx * mz) == 0).all())


@lru_cache(maxsize=1 << 14)
def adjoint(h: Homomorphism, check_order: int = ADJOINT_CHECK_ORDER) -> Homomorphism:
    """The adjoint h~ with (h x, y) = (x, h~ y) under the fixed pairing.

    Built from the coordinate formula ``h~[i][j] = n_i * h[j][i] / k_j``, then
    verified exhaustively when both groups have order <= check_order.
    """
    adj = Homomorphism(h.codomain, h.domain, _adjoint_matrix(h))
    if h.domain.order <= check_order and h.codomain.order <= check_order:
        if not adjoint_identity_holds(h, adj):
            raise ArithmeticError(f"adjoint construction failed for {h}")
    return adj


def compose(g: Homomorphism, h: Homomorphism) -> Homomorphism:
    return g.compose(h)


def _cyclic_mask(group: Group, g: np.ndarray, k: int) -> np.ndarray:
    mult = group.reduce_coords(np.arange(k, dtype=np.int64)[:, None] * g[None, :])
    return group.encode(mult)


def enumerate_automorphisms(
    group: Group, cap: int = ENUMERATION_CAP, max_count: int = AUTOMORPHISM_COUNT_CAP
) -> list[Homomorphism]:
    """All automorphisms, ordered lexicographically by the images of the unit vectors.

    Depth-first over images of the generators; a partial assignment survives only
    while it stays injective on the subgroup the assigned generators span.
    """
    if group.order > cap:
        raise EnumerationTooLarge(f"group of order {group.order} exceeds automorphism enumeration cap {cap}")
    coords = group.coords
    cands = []
    for n in group.moduli:
        ok = ~np.any(group.reduce_coords(n * coords) != 0, axis=1)
        cands.append(np.nonzero(ok)[0])
    out: list[Homomorphism] = []
    images: list[int] = []

    def dfs(t: int, span: np.ndarray) -> None:
        if t == group.rank:
            if len(out) >= max_count:
                raise EnumerationTooLarge(f"more than {max_count} automorphisms of {group}")
            out.append(from_images(group, group, [group.element(i) for i in images]))
            return
        n_t = group.moduli[t]
        in_span = np.zeros(group.order, dtype=bool)
        in_span[span] = True
        for c in cands[t]:
            mult = _cyclic_mask(group, coords[c], n_t)
            if len(np.unique(mult)) != n_t or in_span[mult[1:]].any():
                continue
            new = group.encode(group.reduce_coords(
                (coords[span][:, None, :] + coords[mult][None, :, :]).reshape(-1, group.rank)))
            images.append(int(c))
            dfs(t + 1, np.unique(new))
            images.pop()

    dfs(0, np.array([0], dtype=np.int64))
    return out


def enumerate_endomorphisms(group: Group, max_count: int = AUTOMORPHISM_COUNT_CAP) -> list[Homomorphism]:
    """All endomorphisms: every well-defined matrix with reduced entries."""
    n = group.moduli
    choices = []
    for j in range(group.rank):
        for i in range(group.rank):
            step = n[j] // math.gcd(n[j], n[i])
            choices.append(range(0, n[j], step))
    total = math.prod(len(c) for c in choices)
    if total > max_count:
        raise EnumerationTooLarge(f"{total} endomorphisms of {group} exceed cap {max_count}")
    r = group.rank
    return [
        Homomorphism(group, group, tuple(tuple(vals[j * r : (j + 1) * r]) for j in range(r)))
        for vals in itertools.product(*choices)
    ]


def induced_on_quotient(h: Homomorphism, q: QuotientGroup) -> Homomorphism:
    """The map [y] -> [h y] on q.structure; requires h(H) = H."""
    if h.domain != q.parent or h.codomain != q.parent:
        raise InvalidArgument("homomorphism must be an endomorphism of the quotient's parent group")
    if h.image(q.kernel) != q.kernel:
        raise NotInvariant(f"{h} does not map the kernel {q.kernel} onto itself")
    S = q.structure
    images = []
    for t in range(S.rank):
        unit = tuple(int(i == t) for i in range(S.rank))
        images.append(q.project(h.apply(q.lift(unit))))
    return from_images(S, S, images)


# ---------------------------------------------------------------------------
# systems of linear forms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FormSystem:
    """Linear forms L_j = sum_i alpha_ij xi_i, stored as ``coeffs[j][i] = alpha_ij``."""

    group: Group
    coeffs: tuple[tuple[Homomorphism, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(r) for r in self.coeffs)
        if not rows or not rows[0]:
            raise InvalidArgument("a form system needs at least one form and one variable")
        if len({len(r) for r in rows}) != 1:
            raise InvalidArgument("every form must have one coefficient per variable")
        for r in rows:
            for h in r:
                if h.domain != self.group or h.codomain != self.group:
                    raise InvalidHomomorphism(f"coefficient {h} is not an endomorphism of {self.group}")
        object.__setattr__(self, "coeffs", rows)

    @property
    def k(self) -> int:
        return len(self.coeffs)

    @property
    def n(self) -> int:
        return len(self.coeffs[0])

    def alpha(self, i: int, j: int) -> Homomorphism:
        """Coefficient of variable i in form j (0-based)."""
        return self.coeffs[j][i]

    @property
    def is_square(self) -> bool:
        return self.k == self.n

    def adjoints(self) -> "FormSystem":
        return FormSystem(self.group, tuple(tuple(adjoint(h) for h in row) for row in self.coeffs))

    def all_automorphisms(self) -> bool:
        return all(is_automorphism(h) for row in self.coeffs for h in row)

    def is_normalized(self) -> bool:
        """alpha_1j = alpha_i1 = I for all i, j."""
        return all(self.alpha(0, j).is_identity() for j in range(self.k)) and all(
            self.alpha(i, 0).is_identity() for i in range(self.n)
        )

    def first_forms(self, k: int) -> "FormSystem":
        return FormSystem(self.group, self.coeffs[:k])


def make_form_system(group: Group, coeffs: Sequence[Sequence[Homomorphism | Sequence[Sequence[int]]]]) -> FormSystem:
    """Build from a k x n grid (row = form j, column = variable i) of homomorphisms or matrices."""
    grid = []
    for row in coeffs:
        grid.append(tuple(h if isinstance(h, Homomorphism) else make_homomorphism(group, h) for h in row))
    return FormSystem(group, tuple(grid))


@dataclass(frozen=True)
class StackedMap:
    pi: Homomorphism
    kernel: Subgroup
    is_automorphism: bool


def stacked_form_map(fs: FormSystem, use_adjoints: bool = True) -> StackedMap:
    """pi(u_1..u_n) = (sum_j c_1j u_j, ..., sum_j c_nj u_j) on G^n, c = alpha~ or alpha."""
    if not fs.is_square:
        raise InvalidArgument(f"stacked map needs a square system, got k={fs.k}, n={fs.n}")
    G, n, r = fs.group, fs.n, fs.group.rank
    big = G.power(n)
    M = np.zeros((n * r, n * r), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            c = adjoint(fs.alpha(i, j)) if use_adjoints else fs.alpha(i, j)
            M[i * r : (i + 1) * r, j * r : (j + 1) * r] = c.matrix_array
    pi = Homomorphism(big, big, _mat(M))
    ker = pi.kernel()
    return StackedMap(pi, ker, ker.is_trivial)


def block_diagonal(parts: Iterable[Homomorphism]) -> Homomorphism:
    """h_1 x ... x h_n acting on the product of the domains."""
    parts = list(parts)
    dom = Group(tuple(m for h in parts for m in h.domain.moduli))
    cod = Group(tuple(m for h in parts for m in h.codomain.moduli))
    M = np.zeros((cod.rank, dom.rank), dtype=np.int64)
    r0 = c0 = 0
    for h in parts:
        M[r0 : r0 + h.codomain.rank, c0 : c0 + h.domain.rank] = h.matrix_array
        r0 += h.codomain.rank
        c0 += h.domain.rank
    return Homomorphism(dom, cod, _mat(M))


def subgroup_power(sub: Subgroup, n: int) -> Subgroup:
    """H^n inside G^n."""
    G = sub.parent
    big = G.power(n)
    rows = [tuple(itertools.chain.from_iterable(t)) for t in itertools.product(sub.members, repeat=n)]
    if not rows:
        raise InvalidElement("empty subgroup")
    return Subgroup.from_indices(big, big.encode(np.array(rows, dtype=np.int64)))
