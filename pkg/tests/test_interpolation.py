"""插值型恒等式生成器"""

import itertools

import pytest

from lucas_identities.core.catalog import catalog
from lucas_identities.core.exceptions import PreconditionError, SingularNodeError
from lucas_identities.core.identity import substitute
from lucas_identities.core.interpolation import (
    default_horadam, fibonacci_coefficients, interpolation_identity, search_nodes,
)
from lucas_identities.core.lucas import HoradamParams
from lucas_identities.core.verifier import verify

FIB = {"P": 1, "Q": -1}


def test_fibonacci_cubes():
    template = interpolation_identity(3, [-2, -1, 0, 1], 2, params=FIB)
    assert template.name == "INTERP.U3[-2,-1,0,1|2]"
    assert template == catalog("EQ.20")
    assert fibonacci_coefficients(template) == {-2: -1, -1: -3, 0: 6, 1: 3}
    assert verify(template).verified


@pytest.mark.parametrize("n, x, nodes, name", [
    (3, 2, (-2, -1, 0, 1), "EQ.20"),
    (4, 3, (-3, -2, -1, 1, 2), "EQ.21"),
    (5, 3, (-3, -2, -1, 0, 1, 2), "EQ.22"),
])
def test_search_nodes_finds_fibonacci_identities(n, x, nodes, name):
    assert nodes in search_nodes(n, x, catalog(name))


@pytest.mark.parametrize("nodes", [(0, 1, 2), (-1, 1, 3), (-3, 0, 2)])
def test_symbolic_x_squares(nodes):
    template = interpolation_identity(2, nodes)
    assert template.index_vars == ("k", "x")
    assert verify(template).verified


@pytest.mark.parametrize("nodes", [(-2, -1, 0, 1), (-3, -1, 2, 3)])
def test_symbolic_x_cubes(nodes):
    assert verify(interpolation_identity(3, nodes, "x")).verified


@pytest.mark.parametrize("n, nodes", [
    (1, (-1, 2)), (2, (-2, 0, 3)), (2, (1, 2, 3)), (3, (-3, -1, 0, 2)),
])
def test_q_scaled_form_matches_x_zero(n, nodes):
    scaled = interpolation_identity(n, nodes, variant="Q")
    assert scaled == interpolation_identity(n, nodes, 0)
    assert verify(scaled).verified


@pytest.mark.parametrize("nodes", list(itertools.permutations(range(-3, 4), 3))[::17])
def test_three_node_catalog_entry_matches_generator(nodes):
    m, l, s = nodes
    expected = interpolation_identity(2, nodes, variant="Q")
    assert substitute(catalog("GF.14"), {"m": m, "l": l, "s": s}) == expected


def test_four_node_catalog_entry_matches_generator():
    for nodes in [(1, 2, 3, -1), (-2, 0, 1, 3), (3, -3, 2, -1)]:
        m, l, p, s = nodes
        expected = interpolation_identity(3, nodes, variant="Q")
        assert substitute(catalog("GF.15"), {"m": m, "l": l, "p": p, "s": s}) == expected


# ===== Horadam =====

def test_horadam_variant_with_symbolic_recurrence():
    template = interpolation_identity(2, [0, 1, 2], 3, variant="W")
    assert template.horadam == default_horadam()
    assert verify(template).verified


def test_horadam_variant_with_numeric_parameters():
    # W_k = U_{k-1}(1, -1)，W_1 = 0
    params = HoradamParams(1, 0, 1, 1)
    assert verify(interpolation_identity(2, [-1, 0, 2], 3, variant="W", horadam_params=params)).verified
    assert verify(interpolation_identity(2, [0, 1, 3], "x", variant="W", horadam_params=params)).verified


def test_horadam_variant_requires_vanishing_shift():
    with pytest.raises(PreconditionError):
        interpolation_identity(2, [0, 1, 2], 3, variant="W", horadam_params=HoradamParams(2, 1, 1, 1))


# ===== 错误 =====

@pytest.mark.parametrize("kwargs", [
    {"n": 2, "nodes": [0, 1, 1]},
    {"n": 2, "nodes": [0, 1]},
    {"n": 0, "nodes": [0]},
    {"n": 1, "nodes": [0, 1], "variant": "Z"},
])
def test_invalid_arguments(kwargs):
    with pytest.raises(PreconditionError):
        interpolation_identity(**kwargs)


def test_singular_nodes_after_specialization():
    # P = 0 时 U_2 = 0
    with pytest.raises(SingularNodeError):
        interpolation_identity(1, [0, 2], 1, params={"P": 0, "Q": 1})
