"""Exact arithmetic with roots of unity and elements of cyclotomic fields.

Two layers live here.  :class:`RootOfUnity` and :class:`Cyclotomic` are the
scalar types used at the public surface.  The ``ring_*`` helpers work on numpy
integer arrays whose last axis holds coefficients in the group ring Z[C_w]
(coefficient ``t`` multiplies ``zeta_w**t``); these are the vectorised
kernels behind convolution, characteristic functions and the independence
checks.  Group-ring vectors are not canonical: two vectors denote the same
field element iff their difference reduces to zero modulo the w-th
cyclotomic polynomial, which is what :func:`ring_reduce` computes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

import mpmath
import numpy as np

Rational = Union[int, Fraction]

_INT64_SAFE = 2**62


def lcm(*values: int) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out


def _exact_div(num: list[int], den: Sequence[int]) -> list[int]:
    # den is monic
    num = list(num)
    q = [0] * (len(num) - len(den) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = num[i + len(den) - 1]
        q[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    if any(num[: len(den) - 1]):
        raise ArithmeticError("inexact polynomial division")
    return q


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Integer coefficients of the m-th cyclotomic polynomial, lowest degree first."""
    if m < 1:
        raise ValueError(f"cyclotomic polynomial index must be >= 1, got {m}")
    num = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            num = _exact_div(num, cyclotomic_polynomial(d))
    return tuple(num)


def totient(m: int) -> int:
    return len(cyclotomic_polynomial(m)) - 1


@lru_cache(maxsize=None)
def _reduction_rows(m: int) -> tuple[tuple[int, ...], ...]:
    # row i = coefficients of x**i mod Phi_m
    poly = cyclotomic_polynomial(m)
    f = len(poly) - 1
    rows = []
    cur = [1] + [0] * (f - 1)
    for _ in range(m):
        rows.append(tuple(cur))
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            cur = [c - top * p for c, p in zip(cur, poly[:-1])]
    return tuple(rows)


@lru_cache(maxsize=None)
def reduction_matrix(m: int) -> np.ndarray:
    """The (m, phi(m)) integer matrix mapping Z[C_m] onto the power basis of Q(zeta_m)."""
    return np.array(_reduction_rows(m), dtype=np.int64).reshape(m, totient(m))


def _units(m: int) -> list[int]:
    return [k for k in range(1, m + 1) if math.gcd(k, m) == 1] if m > 1 else [1]


class Cyclotomic:
    """An exact element of the cyclotomic field Q(zeta_m).

    Stored in the power basis ``1, z, ..., z**(phi(m)-1)`` with ``z = exp(2 pi i/m)``.
    Values whose coefficients beyond the constant term vanish are normalised to
    ``m == 1``.  Arithmetic between fields of different conductor happens in the
    field of the lcm.  Instances are immutable but deliberately unhashable: the
    same irrational number can be written over different conductors.
    """

    __slots__ = ("m", "coeffs")
    __hash__ = None  # type: ignore[assignment]

    def __init__(self, m: int, coeffs: Sequence[Rational]):
        if len(coeffs) != totient(m):
            raise ValueError(f"Q(zeta_{m}) needs {totient(m)} coefficients, got {len(coeffs)}")
        cs = tuple(Fraction(c) for c in coeffs)
        if not any(cs[1:]):
            m, cs = 1, cs[:1]
        self.m = m
        self.coeffs = cs

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_ring(cls, m: int, vec: Iterable[Rational]) -> "Cyclotomic":
        """Build ``sum_t vec[t] * z**t`` (exponents taken mod m)."""
        rows = _reduction_rows(m)
        out = [Fraction(0)] * totient(m)
        for t, c in enumerate(vec):
            if c:
                for j, r in enumerate(rows[t % m]):
                    if r:
                        out[j] += c * r
        return cls(m, out)

    @classmethod
    def rational(cls, q: Rational) -> "Cyclotomic":
        return cls(1, (q,))

    @classmethod
    def zeta(cls, m: int, e: int = 1) -> "Cyclotomic":
        vec = [0] * m
        vec[e % m] = 1
        return cls.from_ring(m, vec)

    # -- coercion helpers -------------------------------------------------

    @staticmethod
    def _coerce(other: object) -> "Cyclotomic | None":
        if isinstance(other, Cyclotomic):
            return other
        if isinstance(other, (int, Fraction)):
            return Cyclotomic(1, (other,))
        if isinstance(other, RootOfUnity):
            return other.to_cyclotomic()
        return None

    def lift(self, M: int) -> tuple[Fraction, ...]:
        """Power-basis coefficients of this value inside Q(zeta_M); M must be a multiple of m."""
        if M % self.m:
            raise ValueError(f"Q(zeta_{self.m}) is not contained in Q(zeta_{M})")
        if M == self.m:
            return self.coeffs
        step = M // self.m
        rows = _reduction_rows(M)
        out = [Fraction(0)] * totient(M)
        for i, c in enumerate(self.coeffs):
            if c:
                for j, r in enumerate(rows[(i * step) % M]):
                    if r:
                        out[j] += c * r
        return tuple(out)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other: object) -> "Cyclotomic":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        M = lcm(self.m, o.m)
        return Cyclotomic(M, [a + b for a, b in zip(self.lift(M), o.lift(M))])

    __radd__ = __add__

    def __neg__(self) -> "Cyclotomic":
        return Cyclotomic(self.m, [-c for c in self.coeffs])

    def __pos__(self) -> "Cyclotomic":
        return self

    def __sub__(self, other: object) -> "Cyclotomic":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> "Cyclotomic":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other: object) -> "Cyclotomic":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.m == 1:
            q = o.coeffs[0]
            return Cyclotomic(self.m, [c * q for c in self.coeffs])
        if self.m == 1:
            return o * self
        M = lcm(self.m, o.m)
        a, b = self.lift(M), o.lift(M)
        vec = [Fraction(0)] * M
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        vec[(i + j) % M] += x * y
        return Cyclotomic.from_ring(M, vec)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> "Cyclotomic":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: object) -> "Cyclotomic":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int) -> "Cyclotomic":
        if k < 0:
            return self.inverse() ** (-k)
        out = Cyclotomic(1, (1,))
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def galois(self, k: int) -> "Cyclotomic":
        """Apply the field automorphism z -> z**k (k coprime to m)."""
        if math.gcd(k, self.m) != 1:
            raise ValueError(f"{k} is not a unit mod {self.m}")
        vec = [Fraction(0)] * self.m
        for i, c in enumerate(self.coeffs):
            vec[(i * k) % self.m] += c
        return Cyclotomic.from_ring(self.m, vec)

    def conj(self) -> "Cyclotomic":
        return self.galois(-1) if self.m > 1 else self

    def abs2(self) -> "Cyclotomic":
        return self * self.conj()

    def norm(self) -> Fraction:
        """Field norm down to Q: the product of all Galois conjugates."""
        out = Cyclotomic(1, (1,))
        for k in _units(self.m):
            out = out * self.galois(k)
        return out.to_fraction()

    def inverse(self) -> "Cyclotomic":
        if not self:
            raise ZeroDivisionError("inverse of zero")
        if self.m == 1:
            return Cyclotomic(1, (1 / self.coeffs[0],))
        acc = Cyclotomic(1, (1,))
        for k in _units(self.m)[1:]:
            acc = acc * self.galois(k)
        return acc * (1 / self.norm())

    # -- predicates and views ---------------------------------------------

    def is_rational(self) -> bool:
        return self.m == 1

    def is_real(self) -> bool:
        return self.m == 1 or self == self.conj()

    def to_fraction(self) -> Fraction:
        if self.m != 1:
            raise ValueError(f"{self!r} is not rational")
        return self.coeffs[0]

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __eq__(self, other: object) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.m == o.m:
            return self.coeffs == o.coeffs
        M = lcm(self.m, o.m)
        return self.lift(M) == o.lift(M)

    def __complex__(self) -> complex:
        return complex(sum(float(c) * np.exp(2j * np.pi * i / self.m) for i, c in enumerate(self.coeffs)))

    def __float__(self) -> float:
        return complex(self).real

    def sign(self) -> int:
        """Exact sign of a real value.

        A nonzero algebraic integer-combination has ``|a| >= |N(a)| / B**(phi-1)``
        where B bounds every conjugate; evaluating with enough bits to beat that
        margin makes the numerical sign certain.
        """
        if self.m == 1:
            c = self.coeffs[0]
            return (c > 0) - (c < 0)
        if not self.is_real():
            raise ValueError(f"sign of non-real value {self!r}")
        if not self:
            return 0
        B = sum(abs(c) for c in self.coeffs)
        # double precision is decisive when the value clears the rounding error by a wide margin
        approx = math.fsum(float(c) * math.cos(2 * math.pi * i / self.m) for i, c in enumerate(self.coeffs))
        if abs(approx) > 1e-9 * float(B):
            return 1 if approx > 0 else -1
        lower = abs(self.norm()) / B ** (totient(self.m) - 1)
        bits = max(53, math.ceil(math.log2(B / lower)) + 2 * totient(self.m).bit_length() + 24)
        with mpmath.workprec(bits):
            val = mpmath.fsum(
                mpmath.mpf(c.numerator) / c.denominator * mpmath.cospi(mpmath.mpf(2 * i) / self.m)
                for i, c in enumerate(self.coeffs)
            )
        return 1 if val > 0 else -1

    def _cmp(self, other: object) -> int | None:
        o = self._coerce(other)
        if o is None:
            return None
        return (self - o).sign()

    def __lt__(self, other: object) -> bool:
        s = self._cmp(other)
        return NotImplemented if s is None else s < 0

    def __le__(self, other: object) -> bool:
        s = self._cmp(other)
        return NotImplemented if s is None else s <= 0

    def __gt__(self, other: object) -> bool:
        s = self._cmp(other)
        return NotImplemented if s is None else s > 0

    def __ge__(self, other: object) -> bool:
        s = self._cmp(other)
        return NotImplemented if s is None else s >= 0

    def __repr__(self) -> str:
        return f"Cyclotomic({self.m}, [{', '.join(str(c) for c in self.coeffs)}])"

    def __str__(self) -> str:
        if self.m == 1:
            return str(self.coeffs[0])
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(str(c) if i == 0 else f"({c})*z{self.m}^{i}")
        return " + ".join(terms) or "0"


def as_cyclotomic(value: object) -> Cyclotomic:
    out = Cyclotomic._coerce(value)
    if out is None:
        raise TypeError(f"cannot interpret {value!r} as a cyclotomic number")
    return out


def simplify(value: "Rational | Cyclotomic") -> "Fraction | Cyclotomic":
    """Return a Fraction when the value is rational, else the Cyclotomic itself."""
    if isinstance(value, Cyclotomic):
        return value.coeffs[0] if value.m == 1 else value
    return Fraction(value)


@dataclass(frozen=True)
class RootOfUnity:
    """The value ``zeta_modulus ** exponent``."""

    exponent: int
    modulus: int

    def __post_init__(self) -> None:
        if self.modulus < 1:
            raise ValueError(f"modulus must be >= 1, got {self.modulus}")
        object.__setattr__(self, "exponent", self.exponent % self.modulus)

    def _key(self) -> Fraction:
        return Fraction(self.exponent, self.modulus)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, RootOfUnity):
            return self._key() == other._key()
        if isinstance(other, (int, Fraction, Cyclotomic)):
            return self.to_cyclotomic() == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._key())

    def __mul__(self, other: object) -> "RootOfUnity":
        if isinstance(other, RootOfUnity):
            M = lcm(self.modulus, other.modulus)
            return RootOfUnity(
                self.exponent * (M // self.modulus) + other.exponent * (M // other.modulus), M
            )
        return NotImplemented

    def __pow__(self, k: int) -> "RootOfUnity":
        return RootOfUnity(self.exponent * k, self.modulus)

    def conj(self) -> "RootOfUnity":
        return RootOfUnity(-self.exponent, self.modulus)

    def is_one(self) -> bool:
        return self.exponent == 0

    def to_cyclotomic(self) -> Cyclotomic:
        return Cyclotomic.zeta(self.modulus, self.exponent)

    def __complex__(self) -> complex:
        return complex(np.exp(2j * np.pi * self.exponent / self.modulus))


# ---------------------------------------------------------------------------
# vectorised group-ring kernels
# ---------------------------------------------------------------------------


def maxabs(a: np.ndarray) -> int:
    if not a.size:
        return 0
    if a.dtype == object:
        return max(int(a.max()), -int(a.min()))
    # int64 values stay far from the minimum, so abs cannot wrap
    return int(np.abs(a).max())


def _dtype_for(bound: int, *arrays: np.ndarray):
    if bound < _INT64_SAFE and all(a.dtype != object for a in arrays):
        return np.int64
    return object


@lru_cache(maxsize=None)
def _circulant(w: int) -> np.ndarray:
    return (np.arange(w)[None, :] - np.arange(w)[:, None]) % w


def ring_mul(a: np.ndarray, b: np.ndarray, w: int) -> np.ndarray:
    """Multiply in Z[C_w]: cyclic convolution over the last axis, broadcasting the rest."""
    dt = _dtype_for(maxabs(a) * maxabs(b) * w, a, b)
    a = a.astype(dt, copy=False)
    b = b.astype(dt, copy=False)
    if w == 1:
        return a * b
    if w <= 16:
        # gather a circulant of b: out[k] = sum_r a[r] b[k - r]
        return (a[..., :, None] * b[..., _circulant(w)]).sum(axis=-2)
    out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=dt)
    for r in range(w):
        out += a[..., r : r + 1] * np.roll(b, r, axis=-1)
    return out


def ring_prod(arrays: Sequence[np.ndarray], w: int) -> np.ndarray:
    out = arrays[0]
    for a in arrays[1:]:
        out = ring_mul(out, a, w)
    return out


def ring_scale(a: np.ndarray, k: int) -> np.ndarray:
    dt = _dtype_for(maxabs(a) * abs(k), a)
    return a.astype(dt, copy=False) * k


def ring_sub(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    dt = _dtype_for(maxabs(a) + maxabs(b), a, b)
    return a.astype(dt, copy=False) - b.astype(dt, copy=False)


def ring_shift(a: np.ndarray, e: np.ndarray, w: int) -> np.ndarray:
    """Multiply row r of a 2-d ring array by ``zeta_w ** e[r]``."""
    idx = (np.arange(w)[None, :] - np.asarray(e)[:, None]) % w
    return np.take_along_axis(a, idx, axis=-1)


def ring_lift(a: np.ndarray, w: int, W: int) -> np.ndarray:
    """Re-embed a width-w ring array in width W (a multiple of w)."""
    if w == W:
        return a
    if W % w:
        raise ValueError(f"ring width {w} does not divide {W}")
    out = np.zeros(a.shape[:-1] + (W,), dtype=a.dtype)
    out[..., :: W // w] = a
    return out


def ring_conj(a: np.ndarray, w: int) -> np.ndarray:
    return a[..., (-np.arange(w)) % w]


def ring_reduce(a: np.ndarray, w: int) -> np.ndarray:
    """Canonical power-basis coefficients (last axis of length phi(w))."""
    R = reduction_matrix(w)
    dt = _dtype_for(maxabs(a) * w * maxabs(R), a)
    return a.astype(dt, copy=False) @ R.astype(dt)


def ring_is_zero(a: np.ndarray, w: int) -> np.ndarray:
    return ~np.any(ring_reduce(a, w) != 0, axis=-1)


def scatter_sum(index: np.ndarray, values: np.ndarray, size: int) -> np.ndarray:
    """``out[i] = sum(values[index == i])`` exactly, for integer/object arrays."""
    dt = _dtype_for(maxabs(values) * max(len(values), 1), values)
    values = values.astype(dt, copy=False)
    out = np.zeros((size,) + values.shape[1:], dtype=dt)
    if len(index) == 0:
        return out
    order = np.argsort(index, kind="stable")
    sorted_idx = index[order]
    uniq, starts = np.unique(sorted_idx, return_index=True)
    out[uniq] = np.add.reduceat(values[order], starts, axis=0)
    return out


def ring_from_values(values: Sequence["Rational | Cyclotomic"], w: int) -> tuple[np.ndarray, int]:
    """Encode exact scalars as an (N, w) integer ring array over a common denominator."""
    lifted: list[list[Fraction]] = []
    for v in values:
        row = [Fraction(0)] * w
        if isinstance(v, Cyclotomic):
            if w % v.m:
                raise ValueError(f"value in Q(zeta_{v.m}) does not fit in ring width {w}")
            step = w // v.m
            for i, c in enumerate(v.coeffs):
                row[i * step] = c
        else:
            row[0] = Fraction(v)
        lifted.append(row)
    den = lcm(*(c.denominator for row in lifted for c in row)) if lifted else 1
    nums = [[int(c * den) for c in row] for row in lifted]
    bound = max((abs(x) for row in nums for x in row), default=0)
    arr = np.array(nums, dtype=_dtype_for(bound)).reshape(len(nums), w)
    return arr, den


def ring_to_values(a: np.ndarray, den: int, w: int) -> list["Fraction | Cyclotomic"]:
    """Decode a 2-d ring array into simplified exact scalars (Fraction when rational)."""
    red = ring_reduce(a, w)
    out: list[Fraction | Cyclotomic] = []
    for row in red:
        out.append(simplify(Cyclotomic(w, [Fraction(int(x), den) for x in row])))
    return out


def value_width(values: Iterable[object]) -> int:
    """Smallest ring width able to hold every value (1 when all rational)."""
    w = 1
    for v in values:
        if isinstance(v, Cyclotomic):
            w = lcm(w, v.m)
    return w
