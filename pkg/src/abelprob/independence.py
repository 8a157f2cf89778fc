"""Independence of linear forms L_j = sum_i alpha_ij xi_i, decided two ways.

The pmf route builds the exact joint law of (L_1, ..., L_k) and compares it
with the product of its marginals.  The Fourier route checks the product
identity

    prod_i mu_i^(sum_j a~_ij u_j) = prod_i prod_j mu_i^(a~_ij u_j),   u in Y^k,

with a~_ij the adjoint coefficients.  The two routes share no code beyond the
group-ring kernels, so agreement between them is a real cross-check.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .cyclotomic import (
    lcm,
    ring_is_zero,
    ring_lift,
    ring_mul,
    ring_scale,
    ring_sub,
    ring_to_values,
    scatter_sum,
    simplify,
)
from .distributions import CharFnTable, Distribution, Mass, char_fn, ring_convolve
from .errors import EnumerationTooLarge, InvalidArgument
from .groups import Element, Group, _is_prime
from .morphisms import FormSystem, Homomorphism, adjoint

ENUMERATION_STEPS_CAP = 10**7
DENSE_ALWAYS = 4096


@dataclass(frozen=True)
class Witness:
    """A point where the two sides differ, with both exact values."""

    point: tuple[Element, ...]
    left: Mass
    right: Mass


@dataclass(frozen=True)
class IndependenceReport:
    independent: bool
    method: str
    witness: Witness | None = None


def _check_inputs(dists: Sequence[Distribution], fs: FormSystem) -> None:
    if len(dists) != fs.n:
        raise InvalidArgument(f"{fs.n} variables need {fs.n} distributions, got {len(dists)}")
    for i, d in enumerate(dists):
        if d.group != fs.group:
            raise InvalidArgument(f"distribution {i} lives on {d.group}, forms on {fs.group}")


def _point(group: Group, big_coords: np.ndarray, k: int) -> tuple[Element, ...]:
    r = group.rank
    return tuple(tuple(int(v) for v in big_coords[j * r : (j + 1) * r]) for j in range(k))


# ---------------------------------------------------------------------------
# pmf route
# ---------------------------------------------------------------------------


def _joint_ring(dists: Sequence[Distribution], fs: FormSystem, cap: int) -> tuple[Group, np.ndarray, int, int]:
    X, n, k = fs.group, fs.n, fs.k
    steps = X.order**n
    if steps > cap:
        raise EnumerationTooLarge(f"joint law needs |X|^n = {steps} steps, above the cap {cap}")
    big = X.power(k)
    W = lcm(*(d.width for d in dists))
    joint = np.zeros((big.order, W), dtype=np.int64)
    joint[0, 0] = 1
    den = 1
    strides = X.order ** np.arange(k - 1, -1, -1, dtype=np.int64)
    for i, d in enumerate(dists):
        arr, di = d.ring_in(W)
        # law of (alpha_i1 x, ..., alpha_ik x) for x ~ mu_i
        dest = sum(fs.alpha(i, j).image_indices * strides[j] for j in range(k))
        part = scatter_sum(np.asarray(dest, dtype=np.int64), arr, big.order)
        joint = ring_convolve(big, joint, part, W)
        den *= di
    return big, joint, den, W


def pushforward_joint(dists: Sequence[Distribution], fs: FormSystem, cap: int = ENUMERATION_STEPS_CAP) -> Distribution:
    """Exact law of (L_1, ..., L_k) on X^k for independent xi_i ~ mu_i."""
    _check_inputs(dists, fs)
    big, joint, den, W = _joint_ring(dists, fs, cap)
    return Distribution(big, tuple(ring_to_values(joint, den, W)))


def _marginals(joint: np.ndarray, X: Group, k: int, W: int) -> list[np.ndarray]:
    shaped = joint.reshape((X.order,) * k + (W,))
    return [shaped.sum(axis=tuple(a for a in range(k) if a != j)) for j in range(k)]


def marginals(joint: Distribution, X: Group, k: int) -> list[Distribution]:
    arr, den = joint.ring
    return [
        Distribution(X, tuple(ring_to_values(m, den, joint.width)))
        for m in _marginals(arr, X, k, joint.width)
    ]


def are_independent_pmf(
    dists: Sequence[Distribution], fs: FormSystem, cap: int = ENUMERATION_STEPS_CAP
) -> IndependenceReport:
    """Joint law of the forms against the product of its marginals, exactly."""
    _check_inputs(dists, fs)
    X, k = fs.group, fs.k
    big, joint, den, W = _joint_ring(dists, fs, cap)
    margs = _marginals(joint, X, k, W)
    prod = margs[0]
    for m in margs[1:]:
        prod = ring_mul(prod[:, None, :], m[None, :, :], W).reshape(-1, W)
    # joint / den  vs  prod / den^k
    lhs = ring_scale(joint, den ** (k - 1))
    bad = np.nonzero(~ring_is_zero(ring_sub(lhs, prod), W))[0]
    if len(bad) == 0:
        return IndependenceReport(True, "pmf")
    i = int(bad[0])
    left = ring_to_values(joint[i : i + 1], den, W)[0]
    right = ring_to_values(prod[i : i + 1], den**k, W)[0]
    return IndependenceReport(False, "pmf", Witness(_point(X, big.coords[i], k), left, right))


# ---------------------------------------------------------------------------
# Fourier route
# ---------------------------------------------------------------------------


class ProductIdentity:
    """prod_i f_i(sum_j c_ij u_j) = prod_i prod_j f_i(c_ij u_j) over u in Y^k.

    ``coeffs[j][i]`` is c_ij, an endomorphism of Y; ``tables[i]`` is f_i.
    Points of Y^k are handled as coordinate rows of length k * rank, so the
    sparse scan works even when |Y|^k does not fit in a machine integer;
    lexicographic order on rows is the canonical index order.
    """

    def __init__(self, tables: Sequence[CharFnTable], coeffs: Sequence[Sequence[Homomorphism]]):
        self.tables = list(tables)
        self.coeffs = [list(row) for row in coeffs]
        self.Y = self.tables[0].group
        self.n = len(self.tables)
        self.k = len(self.coeffs)
        if any(len(row) != self.n for row in self.coeffs):
            raise InvalidArgument("every form needs one coefficient per table")
        self.big = self.Y.power(self.k)
        self.W = lcm(*(t.width for t in self.tables))
        self.rings = []
        self.dens = []
        for t in self.tables:
            arr, den = t.ring
            self.rings.append(ring_lift(arr, t.width, self.W))
            self.dens.append(den)
        self.nonzero = []
        for t in self.tables:
            m = np.zeros(self.Y.order, dtype=bool)
            m[t.nonzero_indices] = True
            self.nonzero.append(m)
        self.images = [[self.coeffs[j][i].image_indices for j in range(self.k)] for i in range(self.n)]

    def _parts(self, pts: np.ndarray) -> tuple[list[np.ndarray], list[list[np.ndarray]]]:
        Y, r = self.Y, self.Y.rank
        u = [Y.encode(pts[:, j * r : (j + 1) * r]) for j in range(self.k)]
        img = [[self.images[i][j][u[j]] for j in range(self.k)] for i in range(self.n)]
        args = []
        for i in range(self.n):
            total = sum(Y.coords[img[i][j]] for j in range(self.k))
            args.append(Y.encode(Y.reduce_coords(total)))
        return args, img

    def _products(self, args, img, rows):
        lhs = self.rings[0][args[0][rows]]
        for i in range(1, self.n):
            lhs = ring_mul(lhs, self.rings[i][args[i][rows]], self.W)
        rhs = None
        for i in range(self.n):
            for j in range(self.k):
                f = self.rings[i][img[i][j][rows]]
                rhs = f if rhs is None else ring_mul(rhs, f, self.W)
        return lhs, rhs

    @property
    def lhs_den(self) -> int:
        return math.prod(self.dens)

    @property
    def rhs_den(self) -> int:
        return math.prod(self.dens) ** self.k

    def violations(self, pts: np.ndarray) -> np.ndarray:
        """The rows of ``pts`` (points of Y^k, in the given order) where the identity fails."""
        pts = np.asarray(pts, dtype=np.int64).reshape(-1, self.big.rank)
        if len(pts) == 0:
            return pts
        args, img = self._parts(pts)
        lnz = np.ones(len(pts), dtype=bool)
        rnz = np.ones(len(pts), dtype=bool)
        for i in range(self.n):
            lnz &= self.nonzero[i][args[i]]
            for j in range(self.k):
                rnz &= self.nonzero[i][img[i][j]]
        bad = lnz != rnz
        both = np.nonzero(lnz & rnz)[0]
        if len(both):
            lhs, rhs = self._products(args, img, both)
            scale = self.rhs_den // self.lhs_den
            diff = ring_sub(ring_scale(lhs, scale), rhs)
            bad[both[~ring_is_zero(diff, self.W)]] = True
        return pts[bad]

    def sides(self, point: Sequence[int]) -> tuple[Mass, Mass]:
        pts = np.asarray(point, dtype=np.int64).reshape(1, self.big.rank)
        args, img = self._parts(pts)
        lhs, rhs = self._products(args, img, np.array([0]))
        return (
            ring_to_values(lhs, self.lhs_den, self.W)[0],
            ring_to_values(rhs, self.rhs_den, self.W)[0],
        )

    def witness(self, point: Sequence[int]) -> Witness:
        left, right = self.sides(point)
        return Witness(_point(self.Y, np.asarray(point), self.k), left, right)

    def _chunks(self, chunk: int):
        for start in range(0, self.big.order, chunk):
            yield self.big.coords_range(start, start + chunk)

    def lhs_support(self, chunk: int = 1 << 16) -> np.ndarray:
        """Points u with a nonzero left side, by direct scan."""
        found = [np.zeros((0, self.big.rank), dtype=np.int64)]
        for pts in self._chunks(chunk):
            args, _ = self._parts(pts)
            ok = np.ones(len(pts), dtype=bool)
            for i in range(self.n):
                ok &= self.nonzero[i][args[i]]
            found.append(pts[ok])
        return np.concatenate(found)

    # -- dense and sparse scans -------------------------------------------

    def scan_dense(self, cap: int = ENUMERATION_STEPS_CAP, chunk: int = 1 << 16) -> np.ndarray | None:
        if self.big.order > cap:
            raise EnumerationTooLarge(f"|Y|^k = {self.big.order} exceeds the cap {cap}")
        for pts in self._chunks(chunk):
            bad = self.violations(pts)
            if len(bad):
                return bad[0]
        return None

    def _slot_supports(self) -> list[np.ndarray]:
        per_slot = []
        for j in range(self.k):
            ok = np.ones(self.Y.order, dtype=bool)
            for i in range(self.n):
                ok &= self.nonzero[i][self.images[i][j]]
            per_slot.append(np.nonzero(ok)[0])
        return per_slot

    def rhs_support(self, cap: int = ENUMERATION_STEPS_CAP) -> np.ndarray:
        """Points where every right-side factor is nonzero: a product of sets, in lexicographic order."""
        per_slot = self._slot_supports()
        size = math.prod(len(s) for s in per_slot)
        if size > cap:
            raise EnumerationTooLarge(f"right-side support has {size} points, above the cap {cap}")
        out = np.zeros((1, 0), dtype=np.int64)
        for s in per_slot:
            c = self.Y.coords[s]
            out = np.concatenate([np.repeat(out, len(c), axis=0), np.tile(c, (len(out), 1))], axis=1)
        return out

    def _linear_system(self) -> tuple[np.ndarray, np.ndarray, list[int], list[int]]:
        Y = self.Y
        p, d = Y.moduli[0], Y.rank
        A = np.zeros((self.n * d, self.k * d), dtype=np.int64)
        for i in range(self.n):
            for j in range(self.k):
                A[i * d : (i + 1) * d, j * d : (j + 1) * d] = self.coeffs[j][i].matrix_array
        R, T, pivots = rref_mod_p(A, p)
        free = [c for c in range(self.k * d) if c not in pivots]
        return R, T, pivots, free

    def sparse_cost(self) -> int:
        """Points the sparse scan would touch."""
        p = self.Y.moduli[0]
        free = self._linear_system()[3]
        targets = math.prod(len(t.nonzero_indices) for t in self.tables)
        return targets * p ** len(free) + math.prod(len(s) for s in self._slot_supports())

    def lhs_support_elementary(self, cap: int = ENUMERATION_STEPS_CAP) -> np.ndarray:
        """Nonzero points of the left side via linear algebra over F_p.

        The left side is nonzero exactly on pi^-1(prod_i supp f_i), where
        pi(u) = (sum_j c_ij u_j)_i is F_p-linear when Y is elementary abelian.
        """
        if not is_elementary(self.Y):
            raise InvalidArgument(f"sparse scan needs an elementary abelian group, got {self.Y}")
        Y = self.Y
        p, d, k = Y.moduli[0], Y.rank, self.k
        R, T, pivots, free = self._linear_system()
        rank = len(pivots)
        n_targets = math.prod(len(t.nonzero_indices) for t in self.tables)
        if n_targets * p ** len(free) > cap:
            raise EnumerationTooLarge(
                f"left-side support search needs {n_targets} targets x {p ** len(free)} kernel points, above {cap}"
            )
        targets = np.zeros((1, 0), dtype=np.int64)
        for t in self.tables:
            c = Y.coords[t.nonzero_indices]
            targets = np.concatenate(
                [np.repeat(targets, len(c), axis=0), np.tile(c, (len(targets), 1))], axis=1
            )
        Bp = (targets @ T.T) % p  # (targets, n*d)
        consistent = ~np.any(Bp[:, rank:] != 0, axis=1)
        Bp = Bp[consistent]
        part = np.zeros((len(Bp), k * d), dtype=np.int64)
        for r, c in enumerate(pivots):
            part[:, c] = Bp[:, r]
        basis = []
        for f in free:
            v = np.zeros(k * d, dtype=np.int64)
            v[f] = 1
            for r, c in enumerate(pivots):
                v[c] = (-R[r, f]) % p
            basis.append(v)
        if basis:
            combos = np.array(list(itertools.product(range(p), repeat=len(basis))), dtype=np.int64)
            kern = (combos @ np.array(basis)) % p
        else:
            kern = np.zeros((1, k * d), dtype=np.int64)
        sols = (part[:, None, :] + kern[None, :, :]).reshape(-1, k * d) % p
        return np.unique(sols, axis=0).reshape(-1, k * d)

    def scan_sparse(self, cap: int = ENUMERATION_STEPS_CAP) -> np.ndarray | None:
        """Only points where some side is nonzero can violate the identity."""
        cand = np.concatenate([self.rhs_support(cap), self.lhs_support_elementary(cap)])
        cand = np.unique(cand, axis=0).reshape(-1, self.big.rank)
        bad = self.violations(cand)
        return bad[0] if len(bad) else None

    def scan(self, strategy: str = "auto", cap: int = ENUMERATION_STEPS_CAP) -> np.ndarray | None:
        """First violating point of Y^k (a coordinate row) in canonical order, or None."""
        if strategy == "auto":
            strategy = "dense"
            # below DENSE_ALWAYS points the row-reduction behind sparse_cost costs more than it saves
            big = self.big.order
            if is_elementary(self.Y) and big > DENSE_ALWAYS and (big > cap or self.sparse_cost() < big):
                strategy = "sparse"
        if strategy == "dense":
            return self.scan_dense(cap)
        if strategy == "sparse":
            return self.scan_sparse(cap)
        raise InvalidArgument(f"unknown strategy {strategy!r}")


def is_elementary(group: Group) -> bool:
    p = group.moduli[0]
    return _is_prime(p) and all(m == p for m in group.moduli)


def rref_mod_p(A: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray, list[int]]:
    """Reduced row echelon form R = T A (mod p) with the transform T and pivot columns."""
    R = np.asarray(A, dtype=np.int64) % p
    rows, cols = R.shape
    T = np.eye(rows, dtype=np.int64)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if len(nz) == 0:
            continue
        s = r + int(nz[0])
        R[[r, s]] = R[[s, r]]
        T[[r, s]] = T[[s, r]]
        inv = pow(int(R[r, c]), -1, p)
        R[r] = (R[r] * inv) % p
        T[r] = (T[r] * inv) % p
        for o in range(rows):
            if o != r and R[o, c]:
                f = R[o, c]
                R[o] = (R[o] - f * R[r]) % p
                T[o] = (T[o] - f * T[r]) % p
        pivots.append(c)
        r += 1
    return R, T, pivots


def charfn_identity(dists: Sequence[Distribution], fs: FormSystem) -> ProductIdentity:
    """The product identity for the forms, on exact characteristic functions and adjoints."""
    _check_inputs(dists, fs)
    tables = [char_fn(d) for d in dists]
    adj = [[adjoint(fs.alpha(i, j)) for i in range(fs.n)] for j in range(fs.k)]
    return ProductIdentity(tables, adj)


def are_independent_charfn(
    dists: Sequence[Distribution], fs: FormSystem, cap: int = ENUMERATION_STEPS_CAP, strategy: str = "auto"
) -> IndependenceReport:
    ident = charfn_identity(dists, fs)
    bad = ident.scan(strategy, cap)
    if bad is None:
        return IndependenceReport(True, "charfn")
    return IndependenceReport(False, "charfn", ident.witness(bad))


def product_identity_sides(dists: Sequence[Distribution], fs: FormSystem, u: Sequence[Sequence[int]]) -> tuple[Mass, Mass]:
    """Both sides of the product identity at one point, by plain scalar arithmetic."""
    _check_inputs(dists, fs)
    if len(u) != fs.k:
        raise InvalidArgument(f"need {fs.k} dual elements, got {len(u)}")
    Y = fs.group
    u = [Y.validate(x) for x in u]
    tables = [char_fn(d) for d in dists]
    left: Mass = 1
    right: Mass = 1
    for i in range(fs.n):
        acc = Y.zero
        for j in range(fs.k):
            v = adjoint(fs.alpha(i, j)).apply(u[j])
            right = right * tables[i].value(v)
            acc = Y.add(acc, v)
        left = left * tables[i].value(acc)
    return simplify(left), simplify(right)


def check_independence(
    dists: Sequence[Distribution], fs: FormSystem, method: str = "both", cap: int = ENUMERATION_STEPS_CAP
) -> list[IndependenceReport]:
    """Run one or both routes; ``both`` returns [pmf, charfn]."""
    if method not in ("pmf", "charfn", "both"):
        raise InvalidArgument(f"method must be pmf, charfn or both, got {method!r}")
    out = []
    if method in ("pmf", "both"):
        out.append(are_independent_pmf(dists, fs, cap))
    if method in ("charfn", "both"):
        out.append(are_independent_charfn(dists, fs, cap))
    return out
