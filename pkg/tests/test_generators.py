import random

import pytest
from hypothesis import given, settings, strategies as st

from reflexmod.docs import parse_workspace
from reflexmod.generators import HOM_STYLES, LATTICE_STYLES, random_instance, random_lattice
from reflexmod.lattice import is_distributive


def test_determinism():
    assert random_instance(2, 4, "random", 11) == random_instance(2, 4, "random", 11)
    assert random_instance(3, 5, "random", 1) != random_instance(3, 5, "random", 2)


def test_nest_style_gives_full_chain():
    ws = parse_workspace(random_instance(3, 4, "identity", 5, "nest"))
    assert len(ws.lattice) == 4 and ws.lattice.is_chain()


def test_lines_style_in_the_plane():
    sizes = set()
    for seed in range(10):
        ws = parse_workspace(random_instance(2, 5, "random", seed, "lines"))
        sizes.add(len(ws.lattice))
        assert len(ws.lattice) <= 5
    assert 5 in sizes


def test_distributive_style():
    for seed in range(10):
        ws = parse_workspace(random_instance(4, 6, "random", seed, "distributive"))
        assert is_distributive(ws.lattice)


def test_rejects_bad_parameters():
    with pytest.raises(ValueError):
        random_instance(7, 4)
    with pytest.raises(ValueError):
        random_instance(3, 4, "bogus")
    with pytest.raises(ValueError):
        random_lattice(random.Random(0), 3, 4, "bogus")


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 4), st.integers(2, 12), st.sampled_from(LATTICE_STYLES),
       st.sampled_from(HOM_STYLES))
def test_generated_documents_validate(seed, dim, size, style, hom_style):
    d = random_instance(dim, size, hom_style, seed, style, homs=2)
    ws = parse_workspace(d)
    assert len(ws.lattice) <= 64
    assert set(ws.homs) == {"phi0", "phi1"}
    assert len(ws.modules) == 4
