import pytest

from realwdvv.complex_gw import solve_complex
from realwdvv.real_wdvv import solve_real
from realwdvv.target import ProjectiveSpaceP3

SOLVED_DEGREE = 4


@pytest.fixture(scope="session")
def p3():
    return ProjectiveSpaceP3()


@pytest.fixture(scope="session")
def complex_store(p3):
    return solve_complex(p3, SOLVED_DEGREE)


@pytest.fixture(scope="session")
def real_store(p3, complex_store):
    return solve_real(p3, complex_store, SOLVED_DEGREE, seed=1)
