import math
import os
import sys
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from abelprob import make_distribution, make_group, make_homomorphism  # noqa: E402

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def small_moduli_lists(max_order=32, max_len=3):
    """Every moduli list of length <= max_len with each modulus >= 2 and product <= max_order."""
    out = []

    def rec(prefix, prod):
        if prefix:
            out.append(tuple(prefix))
        if len(prefix) == max_len:
            return
        for m in range(2, max_order // prod + 1):
            rec(prefix + [m], prod * m)

    rec([], 1)
    return out


SMALL_MODULI = small_moduli_lists()


@st.composite
def groups(draw, max_order=32, max_len=3):
    mods = draw(st.sampled_from([m for m in SMALL_MODULI if math.prod(m) <= max_order and len(m) <= max_len]))
    return make_group(mods)


@st.composite
def distributions(draw, group, max_den=12):
    weights = draw(st.lists(st.integers(0, max_den), min_size=group.order, max_size=group.order))
    if not any(weights):
        weights[draw(st.integers(0, group.order - 1))] = 1
    total = sum(weights)
    return make_distribution(group, [Fraction(w, total) for w in weights])


@st.composite
def endomorphisms(draw, g):
    r = g.rank
    rows = []
    for j in range(r):
        row = []
        for i in range(r):
            step = g.moduli[j] // math.gcd(g.moduli[j], g.moduli[i])
            row.append(step * draw(st.integers(0, g.moduli[j] - 1)))
        rows.append(row)
    return make_homomorphism(g, rows)


@pytest.fixture
def z4():
    return make_group([4])
