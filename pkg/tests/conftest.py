import pytest

from blochforms.field import nf_create
from blochforms.qforms import TSubspace


@pytest.fixture(scope="session")
def field_q():
    return nf_create([0, 1], label="Q")


@pytest.fixture(scope="session")
def field_gauss():
    return nf_create([1, 0, 1], label="Q(i)")


@pytest.fixture(scope="session")
def field_eis():
    return nf_create([3, 0, 1], label="Q(sqrt-3)")


@pytest.fixture(scope="session")
def field_zeta5():
    return nf_create([1, 1, 1, 1, 1], label="Q(zeta5)")


@pytest.fixture(scope="session")
def t_gauss(field_gauss):
    return TSubspace(field_gauss, 2)


@pytest.fixture(scope="session")
def t_eis(field_eis):
    return TSubspace(field_eis, 2)


@pytest.fixture(scope="session")
def gauss_graph(t_gauss):
    from blochforms.voronoi import enumerate_perfect
    return enumerate_perfect(t_gauss, budget=20)


@pytest.fixture(scope="session")
def eis_graph(t_eis):
    from blochforms.voronoi import enumerate_perfect
    return enumerate_perfect(t_eis, budget=20)


@pytest.fixture(scope="session")
def gauss_complex(t_gauss, gauss_graph):
    from blochforms.complexbuild import build_complex
    return build_complex(t_gauss, gauss_graph.classes)


@pytest.fixture(scope="session")
def eis_complex(t_eis, eis_graph):
    from blochforms.complexbuild import build_complex
    return build_complex(t_eis, eis_graph.classes)
