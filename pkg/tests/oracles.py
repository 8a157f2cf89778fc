"""Naive reference implementations used to freeze expected values.

Nothing here imports the library's arithmetic: pmfs are dicts of Fractions,
character values are evaluated with mpmath at high precision.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import mpmath

mpmath.mp.dps = 40


def elements(moduli):
    return list(itertools.product(*(range(n) for n in moduli)))


def add(moduli, a, b):
    return tuple((x + y) % n for x, y, n in zip(a, b, moduli))


def neg(moduli, a):
    return tuple((-x) % n for x, n in zip(a, moduli))


def pairing_complex(moduli, x, y):
    m = math.lcm(*moduli)
    e = sum((m // n) * a * b for a, b, n in zip(x, y, moduli)) % m
    return mpmath.exp(2j * mpmath.pi * e / m)


def apply(moduli, matrix, x):
    return tuple(sum(matrix[j][i] * x[i] for i in range(len(x))) % moduli[j] for j in range(len(moduli)))


def closure(moduli, gens):
    zero = tuple(0 for _ in moduli)
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for s in frontier:
            for g in gens:
                t = add(moduli, s, g)
                if t not in seen:
                    seen.add(t)
                    nxt.append(t)
        frontier = nxt
    return frozenset(seen)


def all_subgroups(moduli):
    """Closures of every subset of at most rank + 1 generators (enough for these small groups)."""
    els = elements(moduli)
    subs = set()
    for r in range(0, len(moduli) + 2):
        for gens in itertools.combinations(els, r):
            subs.add(closure(moduli, gens))
    return subs


def all_automorphism_matrices(moduli):
    """Every well-defined matrix whose action is a bijection."""
    r = len(moduli)
    els = elements(moduli)
    ranges = [range(moduli[j]) for j in range(r) for _ in range(r)]
    out = []
    for flat in itertools.product(*ranges):
        M = [list(flat[j * r : (j + 1) * r]) for j in range(r)]
        if any((moduli[i] * M[j][i]) % moduli[j] for j in range(r) for i in range(r)):
            continue
        if len({apply(moduli, M, x) for x in els}) == len(els):
            out.append(M)
    return out


def char_value(moduli, pmf, y):
    """mu^(y) as an mpmath complex."""
    return mpmath.fsum(pairing_complex(moduli, x, y) * mpmath.mpf(p.numerator) / p.denominator for x, p in pmf.items())


def convolve(moduli, a, b):
    out = {}
    for x, p in a.items():
        for z, q in b.items():
            s = add(moduli, x, z)
            out[s] = out.get(s, Fraction(0)) + p * q
    return {k: v for k, v in out.items() if v}


def joint_law(moduli, pmfs, coeffs):
    """Law of (L_1..L_k), coeffs[j][i] = matrix of alpha_ij, by enumerating X^n."""
    out = {}
    supports = [list(p.items()) for p in pmfs]
    for combo in itertools.product(*supports):
        w = Fraction(1)
        for _, p in combo:
            w *= p
        point = []
        for row in coeffs:
            acc = tuple(0 for _ in moduli)
            for (x, _), M in zip(combo, row):
                acc = add(moduli, acc, apply(moduli, M, x))
            point.append(acc)
        key = tuple(point)
        out[key] = out.get(key, Fraction(0)) + w
    return out


def independent_by_brute_force(moduli, pmfs, coeffs):
    joint = joint_law(moduli, pmfs, coeffs)
    k = len(coeffs)
    margs = [dict() for _ in range(k)]
    for pt, w in joint.items():
        for j in range(k):
            margs[j][pt[j]] = margs[j].get(pt[j], Fraction(0)) + w
    els = elements(moduli)
    for pt in itertools.product(els, repeat=k):
        prod = Fraction(1)
        for j in range(k):
            prod *= margs[j].get(pt[j], Fraction(0))
        if joint.get(pt, Fraction(0)) != prod:
            return False, pt, joint.get(pt, Fraction(0)), prod
    return True, None, None, None


def as_pmf(moduli, masses):
    return {x: Fraction(m) for x, m in zip(elements(moduli), masses) if Fraction(m)}
