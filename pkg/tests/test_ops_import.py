"""Import smoke tests for the public operations."""

import pytest

import sun_expm.ops as ops


@pytest.mark.parametrize("name", ops.__all__)
def test_public_name_is_callable(name):
    """Every exported name is a function, a type or a type alias."""
    exported = getattr(ops, name)
    assert callable(exported) or hasattr(exported, "__origin__")


def test_entry_points_import():
    from sun_expm.__main__ import main
    from sun_expm.cli import run

    assert callable(main)
    assert callable(run)
