import pytest
from pytest import fixture

from kernid.constants import THREADS_ENV_VAR
from kernid.design import Design
from kernid.kernels import MixedKernelSpec, KernelFamily


def pytest_addoption(parser):
    parser.addoption('--skip-slow', action='store_true',
                     help='Skip slow tests')


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: mark test as slow to run")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--skip-slow"):
        skip_slow = pytest.mark.skip(reason="Skipping due to --skip-slow")
        for item in items:
            if "slow" in item.keywords:
                item.add_marker(skip_slow)


@fixture
def no_local_config(monkeypatch):
    """Ensure settings from the calling shell don't leak into a test.

    CLIFactory reads ``os.environ`` when no environ is passed in.
    """
    monkeypatch.delenv(THREADS_ENV_VAR, raising=False)


@fixture
def identifiable_design():
    return Design.from_points([0, 3, 7, 10])


@fixture
def aligned_design():
    return Design.from_points([1, 8, 15, 22, 29, 36])


@fixture
def offgrid_design():
    return Design.from_points([0, 1, 2, 3])


@fixture
def sample_spec():
    # sigma, ell, tau, s with period 7.
    return MixedKernelSpec.from_vector(
        KernelFamily.RBF_PERIODIC, [1.0, 3.0, 1.0, 1.0], p=7.0)


@fixture
def sample_two_rbf_spec():
    # sigma1, ell1, sigma2, ell2.
    return MixedKernelSpec.from_vector(
        KernelFamily.TWO_RBF, [1.0, 0.5, 2.0, 2.0])
