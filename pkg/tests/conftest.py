"""Shared fixtures and brute-force oracles.

The oracles deliberately avoid the library's fast paths: norms are computed by
direct double loops over character values, and the pattern search enumerates
all ordered row/column triples, so they can arbitrate the optimized
implementations.
"""

import itertools

import numpy as np
import pytest

from idemnorm import (
    builtin_group,
    character_value,
    make_abelian_group,
    subset_elements,
)


@pytest.fixture(scope="session")
def z4():
    return make_abelian_group([4])


@pytest.fixture(scope="session")
def z5():
    return make_abelian_group([5])


@pytest.fixture(scope="session")
def z6():
    return make_abelian_group([6])


@pytest.fixture(scope="session")
def z8():
    return make_abelian_group([8])


@pytest.fixture(scope="session")
def z2z4():
    return make_abelian_group([2, 4])


@pytest.fixture(scope="session")
def s3():
    return builtin_group("S3")


@pytest.fixture(scope="session")
def d4():
    return builtin_group("D4")


@pytest.fixture(scope="session")
def q8():
    return builtin_group("Q8")


def oracle_mu(group, mask):
    """mu by direct summation of conjugated character values."""
    n = group.order
    members = subset_elements(mask)
    return np.array([sum(np.conj(character_value(group, x, s)) for s in members) / n
                     for x in range(n)], dtype=complex)


def oracle_bs_norm(group, mask):
    if mask == 0:
        return 0.0
    return float(np.abs(oracle_mu(group, mask)).sum())


FORBIDDEN = ((1, 1, 1), (1, 1, 0), (1, 0, 1))


def oracle_pattern_search(group, mask):
    """First forbidden-pattern submatrix in (rows, cols) lexicographic order,
    by plain enumeration of all ordered triples."""
    n = group.order
    for rows in itertools.permutations(range(n), 3):
        for cols in itertools.permutations(range(n), 3):
            if all(((mask >> group.mul(group.inv(r), c)) & 1) == FORBIDDEN[i][j]
                   for i, r in enumerate(rows) for j, c in enumerate(cols)):
                return rows, cols
    return None


def all_subgroups(group):
    """Bitmasks of every subgroup, by filtering all subsets (small orders only)."""
    from idemnorm import is_subgroup

    return [m for m in range(1 << group.order) if is_subgroup(group, m)]
