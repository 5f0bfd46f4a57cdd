import numpy as np
import pytest

from hftkyle import ModelParams, ThetaPair, equilibrium_from_thetas
from hftkyle import _kernels_py

try:
    from hftkyle import _kernels as _kernels_c
except ImportError:  # extension not built
    _kernels_c = None

KERNEL_MODULES = [pytest.param(_kernels_py, id="python")]
if _kernels_c is not None:
    KERNEL_MODULES.append(pytest.param(_kernels_c, id="cython"))


@pytest.fixture(params=KERNEL_MODULES)
def kernel_module(request):
    return request.param


@pytest.fixture
def base_thetas():
    return ThetaPair(1.0, 0.04)


@pytest.fixture
def base_eq(base_thetas):
    return equilibrium_from_thetas(base_thetas)


@pytest.fixture
def unit_params():
    return ModelParams.from_thetas(1.0, 0.04)


def theta_grid(n1=30, nz=30):
    """The log grid used by the bound/uniqueness checks: theta_z includes 0."""
    t1 = np.logspace(-3, 3, n1)
    tz = np.r_[0.0, np.logspace(-3, 3, nz - 1)]
    return [float(x) for x in t1], [float(x) for x in tz]


def pytest_terminal_summary(terminalreporter):
    try:
        from .test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
