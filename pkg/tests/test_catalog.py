"""内置恒等式目录"""

import pytest

from lucas_identities.core.catalog import catalog, catalog_instance, catalog_metadata, catalog_names
from lucas_identities.core.exceptions import UnknownIdentityError
from lucas_identities.core.identity import substitute


def test_catalog_names():
    names = catalog_names()
    expected = ([f"GF.{n}" for n in range(1, 16)] + [f"F.{n}" for n in range(1, 15)]
                + ["EQ.20", "EQ.21", "EQ.22", "ADD"] + [f"CAT.{n}" for n in range(1, 7)])
    assert set(expected) <= set(names)
    assert len(names) == len(set(names))
    assert names[-6:] == [f"CAT.{n}" for n in range(1, 7)]


def test_unknown_name():
    with pytest.raises(UnknownIdentityError) as info:
        catalog("GF.99")
    assert info.value.name == "GF.99"
    assert "GF.1" in info.value.available
    with pytest.raises(UnknownIdentityError):
        catalog_metadata("nope")


def test_catalan_entries_are_generated():
    assert catalog("CAT.3") == substitute(catalog("GF.2"), {"n": 3})
    assert catalog("CAT.3").name == "CAT.3"
    # 任意整数 n 都可以取
    assert catalog("CAT.-2").index_vars == ("k",)
    assert catalog("CAT.40").index_vars == ("k",)


def test_catalog_is_cached():
    assert catalog("GF.8") is catalog("GF.8")


def test_metadata():
    meta = catalog_metadata("GF.14")
    assert meta["name"] == "GF.14"
    assert meta["instance"] == {"m": 1, "l": 2, "s": 3}
    assert meta["index_vars"] == ["k", "l", "m", "s"]
    assert meta["description"]

    fib = catalog_metadata("F.9")
    assert fib["specialize"] == {"P": 1, "Q": -1}
    assert fib["guards"] == []

    assert catalog_metadata("GF.7")["guards"] == ["P != 0"]
    assert catalog_metadata("CAT.2")["description"]


def test_catalog_instance_binds_default_indices():
    template = catalog_instance("GF.15")
    assert template.index_vars == ("k",)
    assert template.name == "GF.15"
    assert not template.has_symbolic_denominators()
    # 没有实例的条目原样返回
    assert catalog_instance("GF.3") is catalog("GF.3")


@pytest.mark.parametrize("name", ["GF.1", "GF.8", "F.2", "EQ.21", "ADD"])
def test_entries_have_no_unknowns(name):
    assert catalog(name).is_fully_known()
