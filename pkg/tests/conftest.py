import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from lagstab.laurent import FieldSpec, LaurentMatrix, LaurentPoly
from lagstab.lattices import ShellSpec, enumerate_shell

XI2 = (Fraction(1, 4), Fraction(-1, 4))
XI3 = (Fraction(1, 5), Fraction(1, 7), Fraction(-12, 35))

# oracle-frozen shell sizes, keyed by (d, n, p); see tests/oracles.py
SHELL_SIZES = {
    (2, 1, 2): 7,
    (2, 1, 3): 13,
    (2, 1, 5): 31,
    (2, 2, 2): 31,
    (2, 2, 3): 121,
    (3, 1, 2): 155,
}


def eps(p, k=1):
    return LaurentPoly.eps(p, k)


def lp(p, pairs):
    return LaurentPoly(p, pairs)


def matrix(p, entries):
    return LaurentMatrix(p, entries)


@pytest.fixture(scope="session")
def shells():
    """Enumerated lattice lists for the acceptance instances, computed once."""
    out = {}
    for d, n, p in SHELL_SIZES:
        out[(d, n, p)] = list(enumerate_shell(ShellSpec(d, n), FieldSpec(p)))
    return out


@pytest.fixture(scope="session")
def xi_for():
    return {2: XI2, 3: XI3}
