"""Binet 展开验证器与数值检验"""

import itertools
import random
from dataclasses import replace

import pytest

from lucas_identities.core.catalog import catalog, catalog_instance, catalog_names
from lucas_identities.core.dsl import parse_identity, parse_lid
from lucas_identities.core.exceptions import PreconditionError, SingularParameterError
from lucas_identities.core.identity import substitute
from lucas_identities.core.verifier import (
    VerdictStatus, binet_expand, evaluate_sides, numeric_check, verdict_to_dict, verify, verify_all,
)


def _double_first_term(template):
    first, *rest = template.terms
    return template.with_terms([replace(first, coefficient=2 * first.coefficient)] + rest)


@pytest.mark.parametrize("name", catalog_names())
def test_catalog_identities_verify(name):
    verdict = verify(catalog_instance(name))
    assert verdict.status is VerdictStatus.VERIFIED, verdict_to_dict(verdict)
    assert verdict.witness is None


@pytest.mark.parametrize("name", catalog_names()[:20])
def test_perturbed_identities_are_refuted(name):
    template = _double_first_term(catalog_instance(name))
    verdict = verify(template, trials=100, seed=1)
    assert verdict.status is VerdictStatus.REFUTED
    assert verdict.witness is not None
    example = verdict.counterexample
    assert example is not None
    assert example.lhs != example.rhs


def test_simple_identities():
    assert verify(parse_identity("U[2k] = U[k]*V[k]")).verified
    assert verify(parse_identity("V[k]^2 - (P^2 - 4*Q)*U[k]^2 = 4*Q^k")).verified
    assert verify(parse_identity("V[k] = U[k+1] - Q*U[k-1]")).verified
    assert binet_expand(catalog("F.3")).is_zero()


def test_refuted_identity_has_witness_and_counterexample():
    verdict = verify(parse_identity("U[2k] = U[k]^2", name="bad"))
    assert not verdict.verified
    data = verdict_to_dict(verdict)
    assert data["name"] == "bad"
    assert data["status"] == "Refuted"
    assert data["witness"]["monomial"]
    assert data["counterexample"]["lhs"] != data["counterexample"]["rhs"]


def test_guards_are_reported():
    verdict = verify(catalog("GF.5"))
    assert verdict.verified
    assert verdict.guards == ["P != 0"]


def test_symbolic_step_identity():
    # l、m 不取定值，直接在三个下标变量上展开
    template = catalog("GF.13")
    assert template.index_vars == ("k", "l", "m")
    assert verify(template).verified


@pytest.mark.parametrize("nodes", list(itertools.combinations(range(-3, 4), 3)))
def test_three_node_interpolation_over_distinct_nodes(nodes):
    m, l, s = nodes
    template = substitute(catalog("GF.14"), {"m": m, "l": l, "s": s})
    assert verify(template).verified, nodes


def test_four_node_interpolation_random_nodes():
    rng = random.Random(4)
    for _ in range(4):
        m, l, p, s = rng.sample(range(-4, 5), 4)
        template = substitute(catalog("GF.15"), {"m": m, "l": l, "p": p, "s": s})
        assert verify(template).verified, (m, l, p, s)


def test_unknowns_are_rejected():
    template = parse_identity("U[2k] = c1*U[k]*V[k]")
    with pytest.raises(PreconditionError):
        verify(template)
    with pytest.raises(PreconditionError):
        numeric_check(template)


# ===== 参数特化 =====

def test_split_specialization():
    # P = 3, Q = 2 时两根为 1 和 2
    assert verify(parse_lid("@specialize P=3, Q=2\nU[2k] = U[k]*V[k]")).verified


def test_degenerate_specialization():
    with pytest.raises(SingularParameterError):
        verify(parse_lid("@specialize P=2, Q=1\nU[2k] = U[k]*V[k]"))


@pytest.mark.parametrize("text", [
    "@specialize P=1, Q=-1\nU[-k]^2 = U[k]^2",
    "@specialize P=1, Q=-1\nU[k]^2 - U[k+n]*U[k-n] = Q^(k-n)*U[n]^2",
    "@specialize P=1, Q=-1\nU[k]^2 - U[k+n]*U[k-n] = Q^(k+n)*U[n]^2",
    "@specialize P=3, Q=1\nU[-k] = -U[k]",
    "@specialize P=1, Q=-1\nQ^k*U[-k] = -U[k]",
    "@specialize P=3, Q=2\nQ^k*U[-k] = -U[k]",
])
def test_unit_q_specializations(text):
    assert verify(parse_lid(text)).verified


def test_fibonacci_entries_with_free_steps():
    assert verify(catalog("F.2")).verified
    assert verify(catalog("F.13")).verified
    assert verify(substitute(catalog("GF.13"), {"P": 1, "Q": -1})).verified
    assert verify(substitute(catalog("GF.2"), {"P": 1, "Q": -1})).verified


def test_non_unit_q_keeps_q_powers():
    verdict = verify(parse_lid("@specialize P=3, Q=2\nU[-k] = -U[k]"))
    assert not verdict.verified
    assert verdict.counterexample is not None
    # Q = -1 时 U[-k] = -U[k] 只在偶数 k 上成立
    verdict = verify(parse_lid("@specialize P=1, Q=-1\nU[-k] = -U[k]"))
    assert not verdict.verified
    assert verdict.counterexample is not None


def test_fibonacci_perturbation():
    template = parse_lid("@specialize P=1, Q=-1\nU[2k+1] = U[k+1]^2 + 2*U[k]^2")
    verdict = verify(template)
    assert not verdict.verified
    assert verdict.counterexample.params == {"P": 1, "Q": -1}


# ===== Horadam =====

def test_horadam_recurrence_with_numeric_parameters():
    template = parse_lid("@params a0=2, a1=1, p0=1, p1=1\nW[k+2] = W[k+1] + W[k]")
    assert verify(template).verified
    broken = parse_lid("@params a0=2, a1=1, p0=1, p1=1\nW[k+2] = W[k+1] + 2*W[k]")
    assert not verify(broken).verified


def test_horadam_recurrence_with_symbolic_parameters():
    template = parse_lid("@params a0=a0, a1=a1, p0=p0, p1=p1\nW[k+2] = p0*W[k+1] + p1*W[k]")
    assert verify(template).verified


# ===== 数值检验 =====

def test_numeric_check_is_deterministic():
    template = parse_identity("U[3k] = U[k]^3")
    first = numeric_check(template, trials=50, seed=3)
    second = numeric_check(template, trials=50, seed=3)
    assert first is not None
    assert first == second
    assert numeric_check(catalog("GF.8"), trials=50) is None


def test_evaluate_sides():
    lhs, rhs = evaluate_sides(catalog("F.3"), {}, {"k": 5})
    # F_11 = F_6^2 + F_5^2
    assert lhs == rhs == 89


def test_verify_all_keeps_order():
    names = ["EQ.20", "GF.3", "F.9", "CAT.4"]
    verdicts = verify_all(names, workers=3)
    assert [v.name for v in verdicts] == names
    assert all(v.verified for v in verdicts)
