import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from abelprob import (
    InvalidArgument,
    InvalidHomomorphism,
    NotInvariant,
    adjoint,
    apply_hom,
    compose,
    enumerate_automorphisms,
    enumerate_subgroups,
    identity,
    induced_on_quotient,
    inverse,
    is_automorphism,
    make_form_system,
    make_group,
    make_homomorphism,
    pairing,
    quotient,
    scalar,
    stacked_form_map,
    subgroup_generate,
)
from abelprob.morphisms import enumerate_endomorphisms, subgroup_power
from abelprob.theorems import fewer_forms_system
from conftest import endomorphisms, groups


def test_make_homomorphism_examples():
    z4 = make_group([4])
    two = make_homomorphism(z4, [[2]])
    assert [apply_hom(two, x) for x in z4] == [(0,), (2,), (0,), (2,)]
    with pytest.raises(InvalidHomomorphism, match=r"\[1\]\[0\]"):
        make_homomorphism(make_group([2, 4]), [[1, 0], [1, 1]])
    g = make_group([2, 4])
    assert make_homomorphism(g, [[1, 0], [0, 1]]) == identity(g)
    assert make_homomorphism(z4, [[7]]).matrix == ((3,),)


def test_apply_examples():
    z4 = make_group([4])
    assert apply_hom(scalar(z4, 2), (3,)) == (2,)
    g = make_group([3, 5])
    assert all(apply_hom(identity(g), x) == x for x in g)
    X, fs = fewer_forms_system(5, 3, 2)
    assert apply_hom(fs.alpha(1, 0), (1, 2, 3)) == (2, 4, 1)


def test_is_automorphism_examples():
    z4 = make_group([4])
    assert is_automorphism(scalar(z4, 3))
    assert not is_automorphism(scalar(z4, 2))
    assert scalar(z4, 2).kernel().members == ((0,), (2,))
    assert is_automorphism(identity(make_group([2, 2])))


def test_adjoint_examples():
    for n in (2, 5, 6, 9):
        g = make_group([n])
        for c in range(n):
            assert adjoint(scalar(g, c)) == scalar(g, c)
    g = make_group([2, 4])
    assert adjoint(identity(g)) == identity(g)
    h = make_homomorphism(g, [[1, 0], [2, 1]])
    adj = adjoint(h)
    for x, y in itertools.product(g, g):
        assert pairing(g, h.apply(x), y) == pairing(g, x, adj.apply(y))
        lhs = oracles.pairing_complex(g.moduli, oracles.apply(g.moduli, h.matrix, x), y)
        rhs = oracles.pairing_complex(g.moduli, x, oracles.apply(g.moduli, adj.matrix, y))
        assert abs(lhs - rhs) < 1e-30


@pytest.mark.parametrize("moduli,count", [([4], 2), ([2, 2], 6), ([3], 2), ([2, 4], 8), ([3, 3], 48), ([6], 2)])
def test_automorphism_counts(moduli, count):
    auts = enumerate_automorphisms(make_group(moduli))
    ref = oracles.all_automorphism_matrices(moduli)
    assert len(auts) == len(ref) == count
    assert sorted(a.matrix for a in auts) == sorted(tuple(tuple(r) for r in m) for m in ref)


def test_induced_on_quotient_examples():
    z4 = make_group([4])
    q = quotient(z4, subgroup_generate(z4, [(2,)]))
    assert induced_on_quotient(scalar(z4, 3), q).is_identity()
    assert induced_on_quotient(identity(z4), q).is_identity()
    with pytest.raises(NotInvariant):
        induced_on_quotient(scalar(z4, 2), q)


def test_stacked_map_examples():
    z4 = make_group([4])
    I = identity(z4)
    st_ = stacked_form_map(make_form_system(z4, [[I, I], [I, I]]))
    assert st_.kernel.order == 4 and not st_.is_automorphism
    assert set(st_.kernel.members) == {(u, (-u) % 4) for u in range(4)}
    alpha = scalar(z4, 2)
    # L_1 = alpha xi_1 + xi_2, L_2 = xi_1 + alpha xi_2
    st_ = stacked_form_map(make_form_system(z4, [[alpha, I], [I, alpha]]))
    assert st_.is_automorphism and st_.kernel.is_trivial
    X, fs = fewer_forms_system(5, 3, 2)
    # third form repeats the first, so the square system is singular
    padded = make_form_system(X, list(fs.coeffs) + [fs.coeffs[0]])
    assert not stacked_form_map(padded).is_automorphism
    with pytest.raises(InvalidArgument):
        stacked_form_map(fs)


def test_subgroup_power():
    z4 = make_group([4])
    h = subgroup_generate(z4, [(2,)])
    assert subgroup_power(h, 2).order == 4


@given(groups(max_order=32), st.data())
def test_adjoint_identity_and_involution(g, data):
    h = data.draw(endomorphisms(g))
    adj = adjoint(h)
    for x, y in itertools.islice(itertools.product(g, g), 400):
        assert pairing(g, h.apply(x), y) == pairing(g, x, adj.apply(y))
    assert adjoint(adj) == h


@given(groups(max_order=32), st.data())
def test_adjoint_contravariant(g, data):
    a = data.draw(endomorphisms(g))
    b = data.draw(endomorphisms(g))
    assert adjoint(compose(a, b)) == compose(adjoint(b), adjoint(a))


@given(groups(max_order=32), st.data())
def test_compose_matches_pointwise(g, data):
    a = data.draw(endomorphisms(g))
    b = data.draw(endomorphisms(g))
    ab = compose(a, b)
    assert all(ab.apply(x) == a.apply(b.apply(x)) for x in g)


@given(groups(max_order=32))
def test_adjoint_of_automorphism_is_automorphism(g):
    for a in enumerate_automorphisms(g):
        assert is_automorphism(adjoint(a))


@given(groups(max_order=16))
def test_automorphisms_form_a_group(g):
    auts = enumerate_automorphisms(g)
    mats = {a.matrix for a in auts}
    assert identity(g).matrix in mats
    for a in auts[:6]:
        assert inverse(a).matrix in mats
        assert compose(a, inverse(a)).is_identity()
        for b in auts[:6]:
            assert compose(a, b).matrix in mats


@given(groups(max_order=12))
def test_endomorphism_enumeration_complete(g):
    ends = enumerate_endomorphisms(g)
    assert len({e.matrix for e in ends}) == len(ends)
    assert sum(is_automorphism(e) for e in ends) == len(enumerate_automorphisms(g))


@given(groups(max_order=32), st.data())
def test_induced_map_commutes_with_projection(g, data):
    a = data.draw(st.sampled_from(enumerate_automorphisms(g)[:40]))
    for h in enumerate_subgroups(g):
        if a.image(h) != h:
            continue
        q = quotient(g, h)
        ind = induced_on_quotient(a, q)
        for x in g:
            assert q.project(a.apply(x)) == ind.apply(q.project(x))
