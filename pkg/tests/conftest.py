import os
import random
import sys
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from mcst import fixtures
from mcst.budget import m1 as make_m1
from mcst.generate import gen_random

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", deadline=None, max_examples=25,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

F = Fraction


@pytest.fixture
def e1():
    return fixtures.e1()


@pytest.fixture
def e2():
    return fixtures.e2()


@pytest.fixture
def e3():
    return fixtures.e3()


@pytest.fixture
def m1():
    return make_m1()


def random_instance(seed, lo=4, hi=8, max_chain=4, lam=2):
    rng = random.Random(seed)
    return gen_random(seed, n_nodes=rng.randint(lo, hi), n_chain=rng.randint(1, max_chain),
                      lam=lam)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
