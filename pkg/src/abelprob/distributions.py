"""Exact probability distributions on a finite abelian group.

Masses are exact: Fractions in the common case, :class:`Cyclotomic` reals when
a construction needs them (densities like ``1 + Re(x, e)``).  The heavy
lifting (convolution, push-forward, Fourier transform) runs on integer
group-ring arrays over a common denominator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from .cyclotomic import (
    Cyclotomic,
    lcm,
    ring_conj,
    ring_from_values,
    ring_is_zero,
    ring_lift,
    ring_mul,
    ring_sub,
    ring_to_values,
    scatter_sum,
    simplify,
    value_width,
    _dtype_for,
    maxabs,
)
from .errors import InvalidArgument, InvalidDistribution
from .groups import Element, Group, Subgroup, annihilator, subgroup_generate, subset_is_subgroup
from .morphisms import Homomorphism

Mass = Union[Fraction, Cyclotomic]


def parse_mass(value: object) -> Mass:
    """Accept ints, Fractions, "a/b" strings and Cyclotomic values."""
    if isinstance(value, Cyclotomic):
        return simplify(value)
    if isinstance(value, bool):
        raise InvalidDistribution(f"mass {value!r} is not a number")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ValueError as exc:
            raise InvalidDistribution(f"cannot parse mass {value!r}") from exc
    raise InvalidDistribution(f"mass {value!r} must be rational or cyclotomic, not {type(value).__name__}")


@dataclass(frozen=True, eq=False)
class Distribution:
    """Masses indexed by element index (mixed radix, last coordinate fastest)."""

    group: Group
    masses: tuple[Mass, ...]

    __hash__ = None  # type: ignore[assignment]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Distribution):
            return NotImplemented
        return self.group == other.group and all(a == b for a, b in zip(self.masses, other.masses))

    @cached_property
    def width(self) -> int:
        """Ring width of the masses: 1 when rational, else a conductor."""
        return value_width(self.masses)

    @cached_property
    def ring(self) -> tuple[np.ndarray, int]:
        return ring_from_values(self.masses, self.width)

    def ring_in(self, W: int) -> tuple[np.ndarray, int]:
        arr, den = self.ring
        return ring_lift(arr, self.width, W), den

    @cached_property
    def support_indices(self) -> np.ndarray:
        arr, _ = self.ring
        return np.nonzero(~ring_is_zero(arr, self.width))[0]

    @cached_property
    def char_table(self) -> "CharFnTable":
        return _char_fn(self)

    def mass(self, x: Sequence[int]) -> Mass:
        return self.masses[self.group.index(x)]

    @property
    def is_rational(self) -> bool:
        return self.width == 1

    def as_dict(self) -> dict[Element, Mass]:
        return {self.group.element(int(i)): self.masses[int(i)] for i in self.support_indices}

    def __repr__(self) -> str:
        return f"Distribution({self.group}, [{', '.join(str(m) for m in self.masses)}])"


def _from_ring(group: Group, arr: np.ndarray, den: int, w: int) -> Distribution:
    return Distribution(group, tuple(ring_to_values(arr, den, w)))


def make_distribution(group: Group, pmf: Sequence[object] | Mapping[Sequence[int], object]) -> Distribution:
    """Validated constructor: masses must be real, nonnegative and sum to exactly 1."""
    if isinstance(pmf, Mapping):
        masses: list[Mass] = [Fraction(0)] * group.order
        for x, v in pmf.items():
            masses[group.index(x)] = parse_mass(v)
    else:
        masses = [parse_mass(v) for v in pmf]
        if len(masses) != group.order:
            raise InvalidDistribution(f"pmf has {len(masses)} entries, group {group} has order {group.order}")
    total: Mass = Fraction(0)
    for i, v in enumerate(masses):
        if isinstance(v, Cyclotomic):
            if not v.is_real():
                raise InvalidDistribution(f"mass at index {i} is not real: {v}")
            if v.sign() < 0:
                raise InvalidDistribution(f"negative mass {v} at {group.element(i)}")
        elif v < 0:
            raise InvalidDistribution(f"negative mass {v} at {group.element(i)}")
        total = total + v
    if total != 1:
        raise InvalidDistribution(f"masses sum to {simplify(total)}, off by {simplify(total - 1)}")
    return Distribution(group, tuple(masses))


def degenerate(group: Group, x: Sequence[int] | None = None) -> Distribution:
    """E_x, the point mass at x (default 0)."""
    i = group.index(x if x is not None else group.zero)
    return Distribution(group, tuple(Fraction(int(j == i)) for j in range(group.order)))


def haar(group: Group, k: Subgroup) -> Distribution:
    """m_K: uniform on the members of K."""
    if k.parent != group:
        raise InvalidArgument("subgroup belongs to a different group")
    q = Fraction(1, k.order)
    return Distribution(group, tuple(q if b else Fraction(0) for b in k.mask))


def uniform(group: Group) -> Distribution:
    """m_X."""
    q = Fraction(1, group.order)
    return Distribution(group, (q,) * group.order)


def mixture(parts: Iterable[tuple[object, Distribution]]) -> Distribution:
    parts = [(parse_mass(w), d) for w, d in parts]
    group = parts[0][1].group
    masses: list[Mass] = [Fraction(0)] * group.order
    for w, d in parts:
        if d.group != group:
            raise InvalidArgument("mixture components live on different groups")
        masses = [a + w * b for a, b in zip(masses, d.masses)]
    return make_distribution(group, [simplify(m) for m in masses])


def ring_convolve(group: Group, A: np.ndarray, B: np.ndarray, W: int, chunk: int = 1 << 20) -> np.ndarray:
    """Convolution of two (order, W) ring arrays, summing only over nonzero rows."""
    sa = np.nonzero(np.any(A != 0, axis=1))[0]
    sb = np.nonzero(np.any(B != 0, axis=1))[0]
    dt = _dtype_for(maxabs(A) * maxabs(B) * W * max(len(sa), 1), A, B)
    out = np.zeros((group.order, W), dtype=dt)
    cb = group.coords[sb]
    step = max(1, chunk // max(len(sb) * W, 1))
    for start in range(0, len(sa), step):
        part = sa[start : start + step]
        vals = ring_mul(A[part][:, None, :], B[sb][None, :, :], W).reshape(-1, W)
        sums = group.reduce_coords(group.coords[part][:, None, :] + cb[None, :, :]).reshape(-1, group.rank)
        out = out + scatter_sum(group.encode(sums), vals, group.order)
    return out


def convolve(a: Distribution, b: Distribution) -> Distribution:
    """(a * b)(z) = sum_x a(x) b(z - x)."""
    if a.group != b.group:
        raise InvalidArgument(f"cannot convolve distributions on {a.group} and {b.group}")
    W = lcm(a.width, b.width)
    A, da = a.ring_in(W)
    B, db = b.ring_in(W)
    return _from_ring(a.group, ring_convolve(a.group, A, B, W), da * db, W)


def reflect(mu: Distribution) -> Distribution:
    """mu-bar(M) = mu(-M)."""
    g = mu.group
    neg = g.encode(g.reduce_coords(-g.coords))
    masses = [Fraction(0)] * g.order
    for i in range(g.order):
        masses[int(neg[i])] = mu.masses[i]
    return Distribution(g, tuple(masses))


def symmetrize(mu: Distribution) -> Distribution:
    """mu * mu-bar, whose characteristic function is |mu^|**2."""
    return convolve(mu, reflect(mu))


def shift(mu: Distribution, x: Sequence[int]) -> Distribution:
    """mu * E_x."""
    g = mu.group
    x = np.array(g.validate(x), dtype=np.int64)
    dest = g.encode(g.reduce_coords(g.coords + x))
    masses = [Fraction(0)] * g.order
    for i in range(g.order):
        masses[int(dest[i])] = mu.masses[i]
    return Distribution(g, tuple(masses))


def pushforward(mu: Distribution, h: Homomorphism) -> Distribution:
    """Law of h(xi) for xi ~ mu."""
    if h.domain != mu.group:
        raise InvalidArgument("homomorphism domain differs from the distribution's group")
    arr, den = mu.ring
    s = mu.support_indices
    out = scatter_sum(h.image_indices[s], arr[s], h.codomain.order)
    return _from_ring(h.codomain, out, den, mu.width)


def support(mu: Distribution) -> tuple[Element, ...]:
    """sigma(mu): elements of strictly positive mass, in index order."""
    return tuple(mu.group.element(int(i)) for i in mu.support_indices)


# ---------------------------------------------------------------------------
# characteristic functions
# ---------------------------------------------------------------------------


def _transform(group: Group, arr: np.ndarray, w: int, sign: int) -> tuple[np.ndarray, int]:
    """Row-column Fourier transform over the cyclic factors, exact in Z[C_W]."""
    W = lcm(w, group.exponent)
    dt = _dtype_for(maxabs(arr) * group.order, arr)
    T = ring_lift(arr.astype(dt, copy=False), w, W).reshape(group.moduli + (W,))
    for a, n in enumerate(group.moduli):
        step = W // n
        T = np.moveaxis(T, a, 0)
        out = np.zeros_like(T)
        for y in range(n):
            for x in range(n):
                out[y] += np.roll(T[x], (sign * step * x * y) % W, axis=-1)
        T = np.moveaxis(out, 0, a)
    return T.reshape(group.order, W), W


@dataclass(frozen=True, eq=False)
class CharFnTable:
    """Exact values of a characteristic function, indexed by dual element index."""

    group: Group
    values: tuple[Mass, ...]
    _ring: tuple[np.ndarray, int, int] | None = field(default=None, repr=False)

    __hash__ = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if len(self.values) != self.group.order:
            raise InvalidArgument(f"table needs {self.group.order} values, got {len(self.values)}")
        if self.values[0] != 1:
            raise InvalidArgument(f"a characteristic function equals 1 at 0, got {self.values[0]}")
        if np.any(np.abs(self.float_view) > 1 + 1e-12):
            raise InvalidArgument("characteristic function exceeds modulus 1")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CharFnTable):
            return NotImplemented
        return self.group == other.group and all(a == b for a, b in zip(self.values, other.values))

    @classmethod
    def from_values(cls, group: Group, values: Sequence[object]) -> "CharFnTable":
        return cls(group, tuple(parse_mass(v) for v in values))

    @cached_property
    def width(self) -> int:
        return self._ring[2] if self._ring else lcm(value_width(self.values), 1)

    @cached_property
    def ring(self) -> tuple[np.ndarray, int]:
        if self._ring is not None:
            return self._ring[0], self._ring[1]
        return ring_from_values(self.values, self.width)

    @cached_property
    def float_view(self) -> np.ndarray:
        return np.array([complex(v) for v in self.values])

    def value(self, y: Sequence[int]) -> Mass:
        return self.values[self.group.index(y)]

    def is_real(self) -> bool:
        return all(not isinstance(v, Cyclotomic) or v.is_real() for v in self.values)

    def is_nonnegative(self) -> bool:
        if not self.is_real():
            return False
        return all((v.sign() if isinstance(v, Cyclotomic) else (v > 0) - (v < 0)) >= 0 for v in self.values)

    @cached_property
    def nonzero_indices(self) -> np.ndarray:
        arr, _ = self.ring
        return np.nonzero(~ring_is_zero(arr, self.width))[0]

    @cached_property
    def one_indices(self) -> np.ndarray:
        arr, den = self.ring
        one = np.zeros((1, self.width), dtype=arr.dtype)
        one[0, 0] = den
        return np.nonzero(ring_is_zero(ring_sub(arr, one), self.width))[0]

    def ones(self) -> Subgroup:
        """{y : value(y) = 1} (a subgroup for genuine characteristic functions)."""
        return Subgroup.from_indices(self.group, self.one_indices)


def char_fn(mu: Distribution) -> CharFnTable:
    """mu^(y) = sum_x (x, y) mu({x}) for every y (computed once per distribution)."""
    return mu.char_table


def _char_fn(mu: Distribution) -> CharFnTable:
    arr, den = mu.ring
    T, W = _transform(mu.group, arr, mu.width, +1)
    return CharFnTable(mu.group, tuple(ring_to_values(T, den, W)), (T, den, W))


def inverse_char_fn(table: CharFnTable) -> Distribution:
    """Recover the pmf: mu(x) = |X|^-1 sum_y conj((x, y)) mu^(y)."""
    arr, den = table.ring
    T, W = _transform(table.group, arr, table.width, -1)
    return make_distribution(table.group, ring_to_values(T, den * table.group.order, W))


def f_subgroup(mu: Distribution) -> Subgroup:
    """F_mu = {y : mu^(y) = 1}.

    A convex combination of unit-modulus values equals 1 only if each term does,
    so this is the annihilator of the subgroup generated by the support.
    """
    g = mu.group
    return annihilator(g, subgroup_generate(g, support(mu)))


@dataclass(frozen=True)
class IdempotentClassification:
    is_idempotent: bool
    subgroup: Subgroup | None = None
    shift: Element | None = None


def classify_idempotent(mu: Distribution) -> IdempotentClassification:
    """Decide whether mu = m_K * E_x; x is the smallest support element."""
    g = mu.group
    s = mu.support_indices
    x0 = g.coords[s[0]]
    diffs = g.encode(g.reduce_coords(g.coords[s] - x0))
    K = Subgroup.from_indices(g, diffs)
    if not K.is_closed():
        return IdempotentClassification(False)
    first = mu.masses[int(s[0])]
    if any(mu.masses[int(i)] != first for i in s[1:]):
        return IdempotentClassification(False)
    return IdempotentClassification(True, K, tuple(int(c) for c in x0))


def spectral_idempotent(mu: Distribution) -> bool:
    """Fourier-side test: {y : mu^(y) != 0} is a subgroup and |mu^| = 1 on it."""
    table = char_fn(mu)
    g = mu.group
    nz = table.nonzero_indices
    if not subset_is_subgroup(g, [g.element(int(i)) for i in nz]):
        return False
    arr, den = table.ring
    W = table.width
    sq = ring_mul(arr[nz], ring_conj(arr[nz], W), W)
    one = np.zeros((1, W), dtype=sq.dtype)
    one[0, 0] = den * den
    return bool(ring_is_zero(ring_sub(sq, one), W).all())


def is_idempotent(mu: Distribution) -> bool:
    return classify_idempotent(mu).is_idempotent


def idempotent_distributions(group: Group, subgroups: Sequence[Subgroup]) -> list[Distribution]:
    """Every m_K * E_x, one per coset of each given subgroup."""
    out = []
    for K in subgroups:
        seen = np.zeros(group.order, dtype=bool)
        base = haar(group, K)
        for i in range(group.order):
            if not seen[i]:
                x = group.element(i)
                coset = group.encode(group.reduce_coords(group.coords[K.indices] + group.coords[i]))
                seen[coset] = True
                out.append(shift(base, x))
    return out
