import random
import sys

import pytest

from nokequal import Parameters
from nokequal.forest import enumerate_all, enumerate_basic, feasible_degrees
from nokequal.ring import Z, CohomologyClass

SMALL = [(2, 3, 4), (2, 3, 5), (2, 3, 6), (3, 3, 5), (2, 4, 6)]


def positive_degrees(p):
    return [d for d in feasible_degrees(p) if d > 0 and len(enumerate_basic(p, d))]


def random_class(p, rng, deg=None, ring=Z, spread=3):
    """Random Z-combination of basic forests in one degree (random degree if None)."""
    if deg is None:
        deg = rng.choice(positive_degrees(p))
    basis = list(enumerate_basic(p, deg))
    picks = rng.sample(basis, min(len(basis), rng.randint(1, 3)))
    terms = {f: rng.choice([c for c in range(-spread, spread + 1) if c]) for f in picks}
    return CohomologyClass.from_dict(p, ring, terms)


def all_forests(p):
    out = []
    for deg in feasible_degrees(p):
        out.extend(enumerate_all(p, deg))
    return out


@pytest.fixture
def rng():
    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(mod.RESULTS):
            terminalreporter.write_line(mod.RESULTS[number])
