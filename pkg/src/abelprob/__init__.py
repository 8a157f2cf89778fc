"""Exact probability theory on finite abelian groups.

Groups are products of cyclic factors, distributions carry exact masses, and
characteristic functions live in cyclotomic fields, so every equality the
library reports is an exact one.
"""

from .cyclotomic import Cyclotomic, RootOfUnity
from .distributions import (
    CharFnTable,
    Distribution,
    IdempotentClassification,
    char_fn,
    classify_idempotent,
    convolve,
    degenerate,
    f_subgroup,
    haar,
    inverse_char_fn,
    make_distribution,
    mixture,
    pushforward,
    reflect,
    shift,
    spectral_idempotent,
    support,
    symmetrize,
    uniform,
)
from .errors import (
    AbelProbError,
    EnumerationTooLarge,
    InvalidArgument,
    InvalidDistribution,
    InvalidElement,
    InvalidGroup,
    InvalidHomomorphism,
    InvalidInstance,
    InvalidParameters,
    NotApplicable,
    NotInvariant,
)
from .groups import (
    Group,
    QuotientGroup,
    Subgroup,
    annihilator,
    element_arith,
    enumerate_subgroups,
    make_group,
    p_component,
    pairing,
    quotient,
    subgroup_generate,
    subset_is_subgroup,
)
from .independence import (
    IndependenceReport,
    Witness,
    are_independent_charfn,
    are_independent_pmf,
    check_independence,
    product_identity_sides,
    pushforward_joint,
)
from .morphisms import (
    FormSystem,
    Homomorphism,
    adjoint,
    apply_hom,
    compose,
    enumerate_automorphisms,
    identity,
    induced_on_quotient,
    inverse,
    is_automorphism,
    make_form_system,
    make_homomorphism,
    scalar,
    stacked_form_map,
)
from .theorems import (
    DichotomyReport,
    CounterexampleBundle,
    VerificationReport,
    check_corollary1,
    check_remark1,
    normalize_instance,
    prop1_counterexample,
    thm2_counterexample,
    verify_theorem1,
)

__version__ = "0.1.0"
