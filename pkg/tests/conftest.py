"""Shared lattices and small lattice VOAs."""

import pytest

from voalab import Lattice, LatticeVOA


def _diagonal(name, norms, basis):
    d = len(norms)
    return Lattice(name, tuple(tuple(norms[i] if i == j else 0 for j in range(d)) for i in range(d)), basis)


@pytest.fixture(scope="session")
def a1():
    """The root lattice A1."""
    return Lattice("A1", ((2,),), ("a",))


@pytest.fixture(scope="session")
def a1x2():
    """A1 + A1."""
    return _diagonal("A1x2", (2, 2), ("a1", "a2"))


@pytest.fixture(scope="session")
def a1x3():
    """A1^3."""
    return _diagonal("A1x3", (2, 2, 2), ("a1", "a2", "a3"))


@pytest.fixture(scope="session")
def a1x4():
    """A1^4."""
    return _diagonal("A1x4", (2, 2, 2, 2), ("a1", "a2", "a3", "a4"))


@pytest.fixture(scope="session")
def zg1g2():
    """Z gamma1 + Z gamma2 with norms 12 and 4."""
    return _diagonal("Zg1g2", (12, 4), ("gamma1", "gamma2"))


@pytest.fixture(scope="session")
def v_a1(a1):
    """V_A1 up to weight 4, shared so products are memoized across tests."""
    return LatticeVOA(a1, 4)


@pytest.fixture(scope="session")
def v_a1x2(a1x2):
    """V_{A1 + A1} up to weight 3."""
    return LatticeVOA(a1x2, 3)
