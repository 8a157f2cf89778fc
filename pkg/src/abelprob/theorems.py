"""Harnesses for the characterization theorem and exact counterexample builders.

``verify_theorem1`` sweeps coefficient systems of automorphisms and batteries
of rational distributions, and flags any independent instance with a
non-idempotent factor.  The builders reproduce the two constructions showing
the theorem is sharp: fewer forms than variables, and non-invertible
coefficients.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from .cyclotomic import Cyclotomic, _dtype_for
from .distributions import (
    CharFnTable,
    Distribution,
    char_fn,
    classify_idempotent,
    degenerate,
    haar,
    idempotent_distributions,
    make_distribution,
    mixture,
    pushforward,
    support,
    symmetrize,
    uniform,
)
from .errors import EnumerationTooLarge, InvalidArgument, InvalidInstance, InvalidParameters, NotApplicable
from .groups import (
    Group,
    Subgroup,
    _is_prime,
    annihilator,
    enumerate_subgroups,
    make_group,
    p_component,
    prime_divisors,
    trivial_subgroup,
)
from .independence import (
    ENUMERATION_STEPS_CAP,
    IndependenceReport,
    ProductIdentity,
    are_independent_charfn,
    are_independent_pmf,
    charfn_identity,
    is_elementary,
)
from .morphisms import (
    FormSystem,
    Homomorphism,
    adjoint,
    enumerate_automorphisms,
    from_function,
    identity,
    inverse,
    is_automorphism,
    make_form_system,
    scalar,
    stacked_form_map,
    subgroup_power,
)

SAMPLER_MAX_DEN = 12
BATTERY_CAP = 48
COEFFICIENT_TUPLE_CAP = 50_000


# ---------------------------------------------------------------------------
# distribution sources
# ---------------------------------------------------------------------------


def random_distribution(group: Group, rng: random.Random, max_den: int = SAMPLER_MAX_DEN) -> Distribution:
    """A rational pmf with denominator at most max_den and a random support size."""
    den = rng.randint(1, max_den)
    size = rng.randint(1, min(group.order, den))
    where = rng.sample(range(group.order), size)
    # split den into `size` positive parts
    cuts = sorted(rng.sample(range(1, den), size - 1)) if size > 1 else []
    parts = [b - a for a, b in zip([0] + cuts, cuts + [den])]
    masses = [Fraction(0)] * group.order
    for i, c in zip(where, parts):
        masses[i] = Fraction(c, den)
    return make_distribution(group, masses)


def structured_battery(group: Group, cap: int = BATTERY_CAP) -> list[Distribution]:
    """Deterministic cases: idempotents, two-point masses and simple mixtures."""
    subs = enumerate_subgroups(group)
    out: list[Distribution] = list(idempotent_distributions(group, subs))
    half, third = Fraction(1, 2), Fraction(1, 3)
    for i in range(1, group.order):
        x = group.element(i)
        out.append(mixture([(half, degenerate(group)), (half, degenerate(group, x))]))
        out.append(mixture([(third, degenerate(group)), (2 * third, degenerate(group, x))]))
    for K in subs[1:-1]:
        out.append(mixture([(half, uniform(group)), (half, haar(group, K))]))
    seen: list[tuple] = []
    unique = []
    for d in out:
        key = d.masses
        if key not in seen:
            seen.append(key)
            unique.append(d)
    return unique[:cap]


# ---------------------------------------------------------------------------
# batched exact joint-law check for rational distributions
# ---------------------------------------------------------------------------


class BatchIndependence:
    """Exact independence of one form system for many rational distribution tuples at once.

    Works on integer numerators: joint law numerators are sums of products of
    pmf numerators, compared with the product of the marginals after clearing
    denominators.
    """

    def __init__(self, fs: FormSystem, cap: int = ENUMERATION_STEPS_CAP):
        X, n, k = fs.group, fs.n, fs.k
        if X.order**n > cap or X.order ** (n + k) > 4 * cap:
            raise EnumerationTooLarge(f"batched joint law on {X} with n={n}, k={k} exceeds the cap {cap}")
        self.fs = fs
        big = X.power(n)
        c = big.coords
        r = X.rank
        self.var_idx = [X.encode(c[:, i * r : (i + 1) * r]) for i in range(n)]
        dest = np.zeros(big.order, dtype=np.int64)
        for j in range(k):
            total = sum(X.coords[fs.alpha(i, j).image_indices[self.var_idx[i]]] for i in range(n))
            dest = dest * X.order + X.encode(X.reduce_coords(total))
        inc = np.zeros((big.order, X.order**k), dtype=np.int64)
        inc[np.arange(big.order), dest] = 1
        self.incidence = inc

    def run(self, nums: np.ndarray, dens: np.ndarray) -> np.ndarray:
        """nums: (B, n, |X|) integer numerators, dens: (B, n) denominators -> independent flags."""
        fs = self.fs
        X, n, k = fs.group, fs.n, fs.k
        B = nums.shape[0]
        den = np.prod(dens.astype(object), axis=1)
        bound = int(max(den, default=1)) ** k
        dt = _dtype_for(bound * X.order**k, nums)
        nums = nums.astype(dt)
        w = nums[:, 0, self.var_idx[0]]
        for i in range(1, n):
            w = w * nums[:, i, self.var_idx[i]]
        joint = w @ self.incidence.astype(dt)
        shaped = joint.reshape((B,) + (X.order,) * k)
        margs = [shaped.sum(axis=tuple(1 + a for a in range(k) if a != j)) for j in range(k)]
        prod = margs[0]
        for m in margs[1:]:
            prod = (prod[:, :, None] * m[:, None, :]).reshape(B, -1)
        scale = np.array([int(d) ** (k - 1) for d in den], dtype=dt)
        return np.all(joint * scale[:, None] == prod, axis=1)


def _rational_arrays(dists: Sequence[Distribution]) -> tuple[np.ndarray, np.ndarray]:
    nums, dens = [], []
    for d in dists:
        if not d.is_rational:
            raise InvalidArgument("batched checks need rational masses")
        arr, den = d.ring
        nums.append(arr[:, 0].astype(np.int64))
        dens.append(den)
    return np.array(nums), np.array(dens, dtype=np.int64)


# ---------------------------------------------------------------------------
# normalization and the same-subgroup property
# ---------------------------------------------------------------------------


def normalization(fs: FormSystem) -> tuple[list[Homomorphism], FormSystem]:
    """The variable changes alpha'_i1 and the normalized system gamma.

    Form j is multiplied by alpha_1j^-1, then variable i is replaced by
    eta_i = alpha'_i1 xi_i, giving gamma_ij = alpha'_ij alpha'_i1^-1 with
    gamma_1j = gamma_i1 = I.  Independence is preserved in both steps.
    """
    if not fs.is_square or not fs.all_automorphisms():
        raise InvalidInstance("normalization needs a square system of automorphisms")
    n = fs.n
    a1 = [inverse(fs.alpha(0, j)) for j in range(n)]
    prime = [[a1[j] @ fs.alpha(i, j) for i in range(n)] for j in range(n)]  # prime[j][i] = alpha'_ij
    first_inv = [inverse(prime[0][i]) for i in range(n)]
    gamma = [[prime[j][i] @ first_inv[i] for i in range(n)] for j in range(n)]
    return list(prime[0]), FormSystem(fs.group, tuple(tuple(row) for row in gamma))


def normalize_instance(dists: Sequence[Distribution], fs: FormSystem) -> tuple[list[Distribution], FormSystem]:
    """Equivalent instance with alpha_1j = alpha_i1 = I."""
    push, norm = normalization(fs)
    return [pushforward(d, h) for d, h in zip(dists, push)], norm


def same_subgroup(dists: Sequence[Distribution]) -> bool:
    """All idempotent, with one common subgroup K."""
    cls = [classify_idempotent(d) for d in dists]
    if not all(c.is_idempotent for c in cls):
        return False
    return all(c.subgroup == cls[0].subgroup for c in cls)


def check_remark1(dists: Sequence[Distribution], fs: FormSystem, cap: int = ENUMERATION_STEPS_CAP) -> bool:
    """For normalized independent forms, every mu_i is a shift of one Haar distribution m_K."""
    if not fs.is_square or not fs.is_normalized():
        raise InvalidInstance("coefficients must satisfy alpha_1j = alpha_i1 = I")
    if not are_independent_pmf(dists, fs, cap).independent:
        raise InvalidInstance("the forms are not independent for these distributions")
    return same_subgroup(dists)


# ---------------------------------------------------------------------------
# characterization harness
# ---------------------------------------------------------------------------


@dataclass
class Violation:
    dists: list[Distribution]
    forms: FormSystem
    pmf: IndependenceReport
    charfn: IndependenceReport
    classifications: list


@dataclass
class VerificationReport:
    group: Group
    n: int
    trials: int
    mode: str
    seed: int
    coefficient_tuples: int = 0
    instances: int = 0
    independent_instances: int = 0
    idempotent_confirmations: int = 0
    violations: list[Violation] = field(default_factory=list)
    same_subgroup_checked: int = 0
    same_subgroup_failures: list[tuple[list[Distribution], FormSystem]] = field(default_factory=list)
    details: list[dict] | None = None

    @property
    def ok(self) -> bool:
        return not self.violations and not self.same_subgroup_failures


def _distribution_tuples(
    pool: list[Distribution], battery_size: int, n: int, rng: random.Random, random_tuples: int, combo_cap: int = 512
) -> list[tuple[int, ...]]:
    """Indices into the pool: i.i.d. tuples, idempotent combinations, and random mixes."""
    tuples: list[tuple[int, ...]] = [(i,) * n for i in range(len(pool))]
    idem = [i for i in range(battery_size) if classify_idempotent(pool[i]).is_idempotent]
    combos = list(itertools.product(idem, repeat=n))
    if len(combos) > combo_cap:
        combos = rng.sample(combos, combo_cap)
    tuples += [c for c in combos if len(set(c)) > 1]
    tuples += [tuple(rng.randrange(len(pool)) for _ in range(n)) for _ in range(random_tuples)]
    return tuples


def verify_theorem1(
    group: Group,
    n: int,
    mode: str = "exhaustive",
    trials: int = 200,
    seed: int = 0,
    max_den: int = SAMPLER_MAX_DEN,
    samples: int = 50,
    coefficient_cap: int = COEFFICIENT_TUPLE_CAP,
    details: bool = False,
) -> VerificationReport:
    """Search for independent automorphism forms with a non-idempotent factor.

    In exhaustive mode every tuple in Aut(X)^(n x n) is tried and ``trials``
    random distributions join the structured battery.  In sampled mode
    ``trials`` coefficient tuples are drawn and ``samples`` random
    distributions join the battery.
    """
    if n < 2:
        raise InvalidArgument(f"need at least two variables, got n={n}")
    if mode not in ("exhaustive", "sampled"):
        raise InvalidArgument(f"mode must be exhaustive or sampled, got {mode!r}")
    rng = random.Random(seed)
    auts = enumerate_automorphisms(group)
    if mode == "exhaustive":
        count = len(auts) ** (n * n)
        if count > coefficient_cap:
            raise EnumerationTooLarge(
                f"{count} coefficient tuples exceed the cap {coefficient_cap}; use sampled mode"
            )
        coeff_iter = itertools.product(range(len(auts)), repeat=n * n)
        n_random = trials
    else:
        coeff_iter = (tuple(rng.randrange(len(auts)) for _ in range(n * n)) for _ in range(trials))
        n_random = samples

    battery = structured_battery(group)
    pool = battery + [random_distribution(group, rng, max_den) for _ in range(n_random)]
    tuples = _distribution_tuples(pool, len(battery), n, rng, n_random)
    nums, dens = _rational_arrays(pool)
    T = np.array(tuples, dtype=np.int64)
    tuple_nums = nums[T]  # (B, n, |X|)
    tuple_dens = dens[T]
    idem_pool = [classify_idempotent(d) for d in pool]

    report = VerificationReport(group, n, trials, mode, seed, details=[] if details else None)
    pushed: dict[tuple[int, Homomorphism], tuple[Distribution, Any]] = {}

    def pushed_class(t: int, h: Homomorphism):
        key = (t, h)
        if key not in pushed:
            d = pushforward(pool[t], h)
            pushed[key] = (d, classify_idempotent(d))
        return pushed[key]

    for ct in coeff_iter:
        report.coefficient_tuples += 1
        grid = [[auts[ct[j * n + i]] for i in range(n)] for j in range(n)]
        fs = FormSystem(group, tuple(tuple(r) for r in grid))
        flags = BatchIndependence(fs).run(tuple_nums, tuple_dens)
        report.instances += len(tuples)
        hits = np.nonzero(flags)[0]
        report.independent_instances += len(hits)
        if details:
            report.details.append({"coefficients": ct, "independent": [tuples[int(h)] for h in hits]})
        if len(hits) == 0:
            continue
        for h in hits:
            cls = [idem_pool[int(t)] for t in tuples[h]]
            if all(c.is_idempotent for c in cls):
                report.idempotent_confirmations += 1
            else:
                dists = [pool[int(t)] for t in tuples[h]]
                report.violations.append(
                    Violation(dists, fs, are_independent_pmf(dists, fs), are_independent_charfn(dists, fs), cls)
                )
        # the same instances after normalization: still independent, one common subgroup
        push, norm_fs = normalization(fs)
        perms = [hm.image_indices for hm in push]
        norm_nums = np.zeros_like(tuple_nums[hits])
        for i in range(n):
            norm_nums[:, i, perms[i]] = tuple_nums[hits, i, :]
        if not BatchIndependence(norm_fs).run(norm_nums, tuple_dens[hits]).all():
            raise ArithmeticError("normalization changed an independence verdict")
        for h in hits:
            entries = [pushed_class(int(t), push[i]) for i, t in enumerate(tuples[h])]
            report.same_subgroup_checked += 1
            cls = [c for _, c in entries]
            if not (all(c.is_idempotent for c in cls) and all(c.subgroup == cls[0].subgroup for c in cls)):
                report.same_subgroup_failures.append(([d for d, _ in entries], norm_fs))
    return report


# ---------------------------------------------------------------------------
# the dichotomy for nonnegative characteristic systems
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DichotomyReport:
    branch: int | None
    f_subgroups: tuple[Subgroup, ...]
    prime: int | None = None
    h: Subgroup | None = None
    h_invariant: bool = False


def _normalized_betas(betas: Sequence[Sequence[Homomorphism]]) -> list[list[Homomorphism]]:
    n = len(betas)
    if n < 2 or any(len(row) != n for row in betas):
        raise InvalidArgument("coefficients must form an n x n grid with n >= 2")
    for i in range(n):
        for j in range(n):
            b = betas[i][j]
            if not is_automorphism(b):
                raise InvalidArgument(f"coefficient [{i}][{j}] is not an automorphism")
            if (i == 0 or j == 0) and not b.is_identity():
                raise InvalidArgument(f"coefficient [{i}][{j}] must be the identity")
    return [list(r) for r in betas]


def check_corollary1(tables: Sequence[CharFnTable], betas: Sequence[Sequence[Homomorphism]]) -> DichotomyReport:
    """Either every F_i is trivial, or they share a nonzero subgroup H fixed by every beta_ij.

    ``betas[i][j]`` multiplies u_j inside the argument of the i-th function.
    """
    betas = _normalized_betas(betas)
    n = len(betas)
    if len(tables) != n:
        raise InvalidArgument(f"{n} x {n} coefficients need {n} tables, got {len(tables)}")
    Y = tables[0].group
    for t in tables:
        if t.group != Y:
            raise InvalidArgument("tables live on different groups")
        if not t.is_nonnegative():
            raise InvalidArgument("tables must be real and nonnegative")
    ident = ProductIdentity(tables, [[betas[i][j] for i in range(n)] for j in range(n)])
    if ident.scan() is not None:
        raise NotApplicable("the product identity fails for these tables and coefficients")
    fsubs = tuple(t.ones() for t in tables)
    trivial = [f.is_trivial for f in fsubs]
    if all(trivial):
        return DichotomyReport(1, fsubs)
    if any(trivial):
        return DichotomyReport(None, fsubs)
    for p in prime_divisors(Y.order):
        H = p_component(Y, p).intersection(fsubs[0])
        if H.is_trivial:
            continue
        inside = all(H.issubset(f) for f in fsubs)
        invariant = all(b.image(H) == H for row in betas for b in row)
        return DichotomyReport(2 if inside and invariant else None, fsubs, p, H, invariant)
    return DichotomyReport(None, fsubs)


def dichotomy_systems(
    groups: Sequence[Group], count: int = 120, ns: Sequence[int] = (2, 3)
) -> list[tuple[list[CharFnTable], list[list[Homomorphism]]]]:
    """Nonnegative tables with normalized coefficients satisfying the product identity.

    Candidates are symmetrized idempotents (Haar tables) and symmetrized
    full-support distributions; only systems passing the identity are kept.
    """
    out = []
    for Y in groups:
        subs = enumerate_subgroups(Y)
        cands = [char_fn(symmetrize(haar(Y, K))) for K in subs]
        full = [mixture([(Fraction(1, 2), uniform(Y)), (Fraction(1, 2), degenerate(Y))])]
        if len(subs) > 2:
            full.append(mixture([(Fraction(2, 3), uniform(Y)), (Fraction(1, 3), haar(Y, subs[1]))]))
        cands += [char_fn(symmetrize(d)) for d in full]
        auts = enumerate_automorphisms(Y)
        I = identity(Y)
        for n in ns:
            free = (n - 1) ** 2
            if len(auts) ** free * len(cands) ** n > 200_000:
                continue
            for choice in itertools.product(auts, repeat=free):
                betas = [[I] * n for _ in range(n)]
                for t, b in enumerate(choice):
                    betas[1 + t // (n - 1)][1 + t % (n - 1)] = b
                for tt in itertools.product(range(len(cands)), repeat=n):
                    tables = [cands[t] for t in tt]
                    ident = ProductIdentity(tables, [[betas[i][j] for i in range(n)] for j in range(n)])
                    if ident.scan() is None:
                        out.append((tables, betas))
                        if len(out) >= count:
                            return out
    return out


# ---------------------------------------------------------------------------
# counterexamples
# ---------------------------------------------------------------------------


@dataclass
class CounterexampleBundle:
    group: Group
    dists: list[Distribution]
    forms: FormSystem
    claims: dict[str, bool]
    extras: dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.claims.values())


def fewer_forms_system(p: int, n: int, k: int) -> tuple[Group, FormSystem]:
    """X = Z(p)^n; form j has coefficient 2 on variable j+1 and the identity elsewhere."""
    X = make_group([p] * n)
    I, two = identity(X), scalar(X, 2)
    rows = [tuple(two if i == j + 1 else I for i in range(n)) for j in range(k)]
    return X, FormSystem(X, tuple(rows))


def cosine_density_distribution(X: Group, i: int) -> Distribution:
    """Density 1 + Re(x, e_i) against Haar measure on X."""
    p = X.moduli[i]
    scale = Fraction(1, 2 * X.order)
    # the mass depends only on the i-th coordinate
    by_residue = [(2 + Cyclotomic.zeta(p, t) + Cyclotomic.zeta(p, -t)) * scale for t in range(p)]
    return make_distribution(X, [by_residue[int(t)] for t in X.coords[:, i]])


def thm2_counterexample(p: int, n: int, k: int, cap: int = ENUMERATION_STEPS_CAP) -> CounterexampleBundle:
    """Independent forms, k < n, with no idempotent factor."""
    if not isinstance(p, int) or not _is_prime(p) or p <= 2:
        raise InvalidParameters(f"p must be an odd prime, got {p}")
    if not (isinstance(n, int) and isinstance(k, int) and n > k > 1):
        raise InvalidParameters(f"need n > k > 1, got n={n}, k={k}")
    if n % p == 0:
        raise InvalidParameters(f"p={p} divides n={n}")
    X, fs = fewer_forms_system(p, n, k)
    dists = [cosine_density_distribution(X, i) for i in range(n)]
    ident = charfn_identity(dists, fs)
    charfn_ok = ident.scan("auto", cap) is None
    verdicts = {"charfn": charfn_ok}
    if X.order**n <= cap:
        verdicts["pmf"] = are_independent_pmf(dists, fs, cap).independent
    tables_ok = True
    half = Fraction(1, 2)
    for i, d in enumerate(dists):
        e = [0] * n
        e[i] = 1
        plus, minus = X.index(e), X.index([-c for c in e])
        expect = [Fraction(0)] * X.order
        expect[0] = Fraction(1)
        expect[plus] = expect[minus] = half
        tables_ok &= list(char_fn(d).values) == expect
    lhs = ident.lhs_support_elementary(cap)
    claims = {
        "forms_independent": all(verdicts.values()),
        "all_nonidempotent": not any(classify_idempotent(d).is_idempotent for d in dists),
        "char_tables_match": tables_ok,
        "lhs_nonzero_only_at_zero": len(lhs) == 1 and not lhs.any(),
    }
    return CounterexampleBundle(X, dists, fs, claims, {"verdicts": verdicts})


def _p_part_multiplier(modulus: int, p: int) -> int:
    """CRT idempotent of Z(modulus) projecting onto its p-primary part."""
    q = p ** _valuation(modulus, p)
    rest = modulus // q
    if q == 1:
        return 0
    if rest == 1:
        return 1
    return (rest * pow(rest, -1, q)) % modulus


def _valuation(m: int, p: int) -> int:
    v = 0
    while m % p == 0:
        m //= p
        v += 1
    return v


def _diag(X: Group, values: Sequence[int]) -> Homomorphism:
    M = [[values[i] if i == j else 0 for i in range(X.rank)] for j in range(X.rank)]
    return Homomorphism(X, X, tuple(tuple(r) for r in M))


def noninvertible_pair(X: Group) -> tuple[Homomorphism, Homomorphism]:
    """alpha not invertible, beta invertible, beta(Ker alpha) = Ker alpha, alpha^2 x != beta x for x != 0."""
    if _is_prime(X.order):
        raise NotApplicable(f"{X} is cyclic of prime order")
    primes = prime_divisors(X.order)
    proj = {p: [_p_part_multiplier(m, p) for m in X.moduli] for p in primes}

    def cyclic_p(p: int) -> bool:
        return sum(1 for m in X.moduli if m % p == 0) == 1

    def on_part(p: int, c: int) -> list[int]:
        return [(c * e) % m for e, m in zip(proj[p], X.moduli)]

    def combine(*parts: list[int]) -> Homomorphism:
        return _diag(X, [sum(v) % m for v, m in zip(zip(*parts), X.moduli)])

    zero = [0] * X.rank
    for p in primes:
        if not cyclic_p(p):
            # alpha sends the first p-primary cyclic factor into the second, beta = I
            a_i, b_i = [i for i, m in enumerate(X.moduli) if m % p == 0][:2]
            a, b = _valuation(X.moduli[a_i], p), _valuation(X.moduli[b_i], p)
            ga, gb = X.moduli[a_i] // p**a, X.moduli[b_i] // p**b
            ea = proj[p][a_i]
            lift = p ** max(b - a, 0) * gb

            def alpha_fn(x, a_i=a_i, b_i=b_i, ea=ea, ga=ga, lift=lift):
                t = (ea * x[a_i]) % X.moduli[a_i] // ga
                out = [0] * X.rank
                out[b_i] = (lift * t) % X.moduli[b_i]
                return out

            return from_function(X, X, alpha_fn), identity(X)
    for p in primes:
        if _valuation(X.order, p) > 1:
            # X_p cyclic of order p^k with k > 1: alpha = p, beta = p - 1 there
            others = [q for q in primes if q != p]
            alpha = combine(on_part(p, p), zero)
            beta = combine(on_part(p, p - 1), *[on_part(q, 1) for q in others], zero)
            return alpha, beta
    # squarefree cyclic order with at least two primes: flip an odd part
    q = max(primes)
    others = [r for r in primes if r != q]
    alpha = combine(on_part(q, 1), zero)
    beta = combine(on_part(q, -1), *[on_part(r, 1) for r in others], zero)
    return alpha, beta


def pair_conditions(alpha: Homomorphism, beta: Homomorphism) -> dict[str, bool]:
    X = alpha.domain
    ker = alpha.kernel()
    a2 = (alpha @ alpha).image_indices
    b = beta.image_indices
    return {
        "alpha_not_invertible": not is_automorphism(alpha),
        "beta_invertible": is_automorphism(beta),
        "beta_fixes_kernel": beta.image(ker) == ker,
        "alpha_squared_differs": bool((a2[1:] != b[1:]).all()),
    }


def prop1_counterexample(group: Group, b: object = Fraction(1, 2), cap: int = ENUMERATION_STEPS_CAP) -> CounterexampleBundle:
    """Independent L_1 = alpha xi_1 + beta xi_2, L_2 = xi_1 + alpha xi_2 with a non-idempotent full-support law."""
    b = Fraction(b) if not isinstance(b, Fraction) else b
    if not 0 < b < 1:
        raise InvalidParameters(f"b must lie strictly between 0 and 1, got {b}")
    X = group
    alpha, beta = noninvertible_pair(X)
    conds = pair_conditions(alpha, beta)
    fs = FormSystem(X, ((alpha, beta), (identity(X), alpha)))
    stacked = stacked_form_map(fs)
    H = adjoint(alpha).kernel()
    H2 = subgroup_power(H, 2)
    K = annihilator(X, H)
    mu = mixture([(1 - b, uniform(X)), (b, haar(X, K))])
    dists = [mu, mu]
    expect = [Fraction(1) if i == 0 else (b if H.mask[i] else Fraction(0)) for i in range(X.order)]
    pmf = are_independent_pmf(dists, fs, cap)
    cf = are_independent_charfn(dists, fs, cap)
    claims = dict(conds)
    claims.update(
        {
            "pi_invertible": stacked.is_automorphism,
            "pi_fixes_h_squared": stacked.pi.image(H2) == H2,
            "forms_independent": pmf.independent and cf.independent,
            "mu_nonidempotent": not classify_idempotent(mu).is_idempotent,
            "full_support": len(support(mu)) == X.order,
            "char_table_matches": list(char_fn(mu).values) == expect,
        }
    )
    extras = {"alpha": alpha, "beta": beta, "h": H, "k": K, "b": b, "verdicts": {"pmf": pmf.independent, "charfn": cf.independent}}
    return CounterexampleBundle(X, dists, fs, claims, extras)
