import os
import sys
from functools import lru_cache

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from bruteforce import TableGroup, catalog_table  # noqa: E402
from pgwb.catalog import SMALL_ENTRIES, catalog_build, load_corpus  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@lru_cache(maxsize=None)
def group(name, *params):
    return catalog_build(name, *params)


@lru_cache(maxsize=None)
def model_group(name, *params):
    """Table scan wrapper over the independent model of a catalog entry."""
    return TableGroup(catalog_table(group(name, *params), name, *params))


@lru_cache(maxsize=None)
def corpus():
    return load_corpus()


SMALL = [e for e in SMALL_ENTRIES if catalog_build(*e).order <= 2 ** 10]


def entry_id(e):
    return f"{e[0]}({', '.join(map(str, e[1:]))})"


@pytest.fixture
def D8():
    return group("dihedral", 8)


@pytest.fixture
def Q8():
    return group("quaternion", 8)


@pytest.fixture
def E5():
    return group("extraspecial_exp_p", 5)


@pytest.fixture
def H5():
    return group("huppert_p4", 5)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
