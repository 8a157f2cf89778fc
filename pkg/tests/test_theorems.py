import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from abelprob import (
    EnumerationTooLarge,
    InvalidArgument,
    InvalidInstance,
    InvalidParameters,
    NotApplicable,
    are_independent_pmf,
    char_fn,
    check_corollary1,
    check_independence,
    check_remark1,
    classify_idempotent,
    degenerate,
    enumerate_automorphisms,
    haar,
    identity,
    make_form_system,
    make_group,
    normalize_instance,
    p_component,
    prop1_counterexample,
    scalar,
    shift,
    subgroup_generate,
    symmetrize,
    thm2_counterexample,
    uniform,
    verify_theorem1,
)
from abelprob.groups import whole_group
from abelprob.morphisms import is_automorphism
from abelprob.theorems import (
    dichotomy_systems,
    noninvertible_pair,
    pair_conditions,
    random_distribution,
    structured_battery,
)
from conftest import SMALL_MODULI, distributions

F = Fraction


# -- distribution sources ----------------------------------------------------


def test_random_distribution_is_valid_and_seeded():
    g = make_group([2, 3])
    a = [random_distribution(g, random.Random(5)) for _ in range(3)]
    b = [random_distribution(g, random.Random(5)) for _ in range(3)]
    assert a == b
    rng = random.Random(11)
    for _ in range(200):
        d = random_distribution(g, rng, max_den=7)
        assert sum(d.masses) == 1 and all(m >= 0 for m in d.masses)
        assert all(m.denominator <= 7 for m in d.masses)


def test_structured_battery():
    g = make_group([4])
    bat = structured_battery(g)
    assert bat == structured_battery(g)
    assert len({d.masses for d in bat}) == len(bat)
    # every shifted Haar distribution of Z(4) is present: 4 + 2 + 1
    assert sum(classify_idempotent(d).is_idempotent for d in bat) == 7


# -- normalization and the same-subgroup property ----------------------------


@given(st.sampled_from([m for m in SMALL_MODULI if 2 < __import__("math").prod(m) <= 8]), st.data())
def test_normalization_preserves_independence(mods, data):
    g = make_group(mods)
    auts = enumerate_automorphisms(g)
    fs = make_form_system(g, [[data.draw(st.sampled_from(auts)) for _ in range(2)] for _ in range(2)])
    dists = [data.draw(distributions(g, max_den=4)) for _ in range(2)]
    nd, nfs = normalize_instance(dists, fs)
    assert nfs.is_normalized()
    assert are_independent_pmf(dists, fs).independent == are_independent_pmf(nd, nfs).independent
    assert [classify_idempotent(d).is_idempotent for d in dists] == [classify_idempotent(d).is_idempotent for d in nd]


def test_same_subgroup_examples():
    g = make_group([3])
    I = identity(g)
    fs = make_form_system(g, [[I, I], [I, scalar(g, 2)]])
    assert check_remark1([shift(uniform(g), (1,)), shift(uniform(g), (2,))], fs)
    assert check_remark1([degenerate(g, (1,)), degenerate(g, (2,))], fs)
    z4 = make_group([4])
    I4 = identity(z4)
    with pytest.raises(InvalidInstance):
        check_remark1([uniform(z4)] * 2, make_form_system(z4, [[I4, scalar(z4, 3)], [I4, I4]]))
    # normalized but dependent for Haar inputs: the stacked map is singular
    with pytest.raises(InvalidInstance):
        check_remark1([uniform(z4)] * 2, make_form_system(z4, [[I4, I4], [I4, scalar(z4, 3)]]))


def test_same_subgroup_on_harness_instances():
    g = make_group([4])
    rep = verify_theorem1(g, 2, "exhaustive", trials=30, seed=3, details=True)
    assert rep.ok and rep.same_subgroup_checked == rep.independent_instances > 0
    auts = enumerate_automorphisms(g)
    battery = structured_battery(g)
    hits = 0
    for entry in rep.details:
        ct = entry["coefficients"]
        fs = make_form_system(g, [[auts[ct[j * 2 + i]] for i in range(2)] for j in range(2)])
        for tup in entry["independent"]:
            if max(tup) >= len(battery):
                continue
            nd, nfs = normalize_instance([battery[t] for t in tup], fs)
            assert check_remark1(nd, nfs)
            hits += 1
    assert hits > 0


# -- characterization harness ------------------------------------------------


def test_harness_small_exhaustive():
    rep = verify_theorem1(make_group([3]), 2, "exhaustive", trials=40, seed=1)
    assert rep.coefficient_tuples == 16
    assert rep.ok and rep.violations == [] and rep.idempotent_confirmations == rep.independent_instances > 0


def test_harness_haar_identity_case_is_a_confirmation():
    g = make_group([3])
    I = identity(g)
    fs = make_form_system(g, [[I, I], [I, scalar(g, 2)]])
    assert all(r.independent for r in check_independence([uniform(g)] * 2, fs))
    assert classify_idempotent(uniform(g)).is_idempotent


def test_harness_sampled_is_deterministic():
    g = make_group([2, 4])
    a = verify_theorem1(g, 2, "sampled", trials=30, seed=9, samples=10)
    b = verify_theorem1(g, 2, "sampled", trials=30, seed=9, samples=10)
    assert a.coefficient_tuples == 30 and a.ok
    assert (a.instances, a.independent_instances, a.same_subgroup_checked) == (b.instances, b.independent_instances, b.same_subgroup_checked)


def test_harness_argument_errors():
    with pytest.raises(InvalidArgument):
        verify_theorem1(make_group([3]), 1)
    with pytest.raises(InvalidArgument):
        verify_theorem1(make_group([3]), 2, mode="random")
    with pytest.raises(EnumerationTooLarge, match="sampled"):
        verify_theorem1(make_group([3, 3]), 3)


def test_harness_oracle_spot_check():
    # every independent instance the harness reports for Z(2)^2 is independent by brute force too
    g = make_group([2, 2])
    rep = verify_theorem1(g, 2, "sampled", trials=12, seed=4, samples=6, details=True)
    auts = enumerate_automorphisms(g)
    checked = 0
    for entry in rep.details:
        ct = entry["coefficients"]
        mats = [[auts[ct[j * 2 + i]].matrix for i in range(2)] for j in range(2)]
        for tup in entry["independent"][:5]:
            pool = structured_battery(g)
            if max(tup) >= len(pool):
                continue
            pm = [oracles.as_pmf([2, 2], pool[t].masses) for t in tup]
            assert oracles.independent_by_brute_force([2, 2], pm, mats)[0]
            checked += 1
    assert checked > 0


# -- dichotomy for nonnegative systems ----------------------------------------


def test_dichotomy_degenerate_tables():
    z4 = make_group([4])
    I = identity(z4)
    t = char_fn(symmetrize(degenerate(z4, (1,))))
    rep = check_corollary1([t, t], [[I, I], [I, I]])
    assert rep.branch == 2 and rep.prime == 2 and rep.h == p_component(z4, 2) and rep.h_invariant


def test_dichotomy_rejects_failing_identity():
    z4 = make_group([4])
    I = identity(z4)
    t = char_fn(symmetrize(haar(z4, subgroup_generate(z4, [(2,)]))))
    with pytest.raises(NotApplicable):
        check_corollary1([t, t], [[I, I], [I, I]])


def test_dichotomy_argument_errors():
    z4 = make_group([4])
    I = identity(z4)
    t = char_fn(degenerate(z4, (1,)))  # complex-valued
    with pytest.raises(InvalidArgument):
        check_corollary1([t, t], [[I, I], [I, I]])
    u = char_fn(uniform(z4))
    with pytest.raises(InvalidArgument):
        check_corollary1([u, u], [[I, scalar(z4, 3)], [I, I]])
    with pytest.raises(InvalidArgument):
        check_corollary1([u, u], [[I, I], [I, scalar(z4, 2)]])


def test_dichotomy_dichotomy_on_generated_systems():
    systems = dichotomy_systems([make_group(m) for m in ([4], [2, 2], [3], [2, 4])], count=60)
    assert len(systems) >= 30
    branches = set()
    for tables, betas in systems:
        rep = check_corollary1(tables, betas)
        trivial = [f.is_trivial for f in rep.f_subgroups]
        assert not any(trivial) or all(trivial)
        assert rep.branch in (1, 2)
        if rep.branch == 2:
            assert not rep.h.is_trivial and rep.h_invariant
            assert all(rep.h.issubset(f) for f in rep.f_subgroups)
        branches.add(rep.branch)
    assert branches == {1, 2}


# -- fewer forms than variables ----------------------------------------------


def test_fewer_forms_bundle():
    b = thm2_counterexample(5, 3, 2)
    assert b.ok and b.claims == {
        "forms_independent": True,
        "all_nonidempotent": True,
        "char_tables_match": True,
        "lhs_nonzero_only_at_zero": True,
    }
    assert b.extras["verdicts"] == {"charfn": True, "pmf": True}
    assert b.forms.k == 2 and b.forms.n == 3


@pytest.mark.parametrize("args", [(3, 3, 2), (2, 3, 2), (4, 3, 2), (5, 3, 3), (5, 3, 1), (7, 7, 3)])
def test_fewer_forms_parameter_errors(args):
    with pytest.raises(InvalidParameters):
        thm2_counterexample(*args)


@pytest.mark.parametrize("p,n,k", [(3, 4, 2), (3, 4, 3), (3, 5, 4), (5, 4, 2), (5, 4, 3), (7, 3, 2), (11, 3, 2)])
def test_fewer_forms_admissible_parameters(p, n, k):
    b = thm2_counterexample(p, n, k)
    assert b.ok, b.claims


def test_fewer_forms_against_oracle_at_small_size():
    b = thm2_counterexample(3, 4, 2)
    # k forms of n variables: the joint law is too big for brute force; check marginal laws instead
    X = b.group
    for d in b.dists:
        assert sum(d.masses) == 1
        assert not classify_idempotent(d).is_idempotent
    assert X.order == 81


# -- non-invertible coefficients --------------------------------------------


def test_noninvertible_z4():
    b = prop1_counterexample(make_group([4]), F(1, 2))
    assert b.ok
    assert b.dists[0].masses == (F(3, 8), F(1, 8), F(3, 8), F(1, 8))
    assert b.extras["alpha"] == scalar(make_group([4]), 2)
    assert b.extras["beta"].is_identity()


def test_noninvertible_z2_squared():
    g = make_group([2, 2])
    b = prop1_counterexample(g, F(1, 3))
    assert b.ok
    assert b.extras["alpha"].matrix == ((0, 0), (1, 0))
    assert b.extras["beta"].is_identity()
    assert len(set(b.dists[0].masses)) == 2


def test_noninvertible_rejects_prime_order_and_bad_b():
    with pytest.raises(NotApplicable):
        prop1_counterexample(make_group([3]))
    with pytest.raises(InvalidParameters):
        prop1_counterexample(make_group([4]), F(1))
    with pytest.raises(InvalidParameters):
        prop1_counterexample(make_group([4]), 0)


@pytest.mark.parametrize(
    "moduli", [[4], [8], [9], [6], [10], [12], [2, 2], [2, 4], [3, 3], [2, 6], [2, 2, 2], [4, 4], [15], [3, 9], [25]]
)
def test_noninvertible_general_construction(moduli):
    g = make_group(moduli)
    alpha, beta = noninvertible_pair(g)
    assert all(pair_conditions(alpha, beta).values())
    # alpha^2 x != beta x away from zero, by direct scan
    assert all(alpha.apply(alpha.apply(x)) != beta.apply(x) for x in list(g)[1:])
    assert not is_automorphism(alpha) and is_automorphism(beta)
    b = prop1_counterexample(g, F(2, 5))
    assert b.ok, b.claims
    pm = [oracles.as_pmf(moduli, d.masses) for d in b.dists]
    if g.order <= 16:
        mats = [[h.matrix for h in row] for row in b.forms.coeffs]
        assert oracles.independent_by_brute_force(moduli, pm, mats)[0]


def test_noninvertible_whole_group_is_not_the_kernel_subgroup():
    b = prop1_counterexample(make_group([2, 4]))
    K = b.extras["k"]
    assert not K.is_whole and not K.is_trivial
    assert b.extras["h"] != whole_group(make_group([2, 4]))
