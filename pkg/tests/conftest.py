import random

import pytest

from padicdual import FactoredForm, InductiveLimitGroup, PadicMatrix, ZERO_ROW, factored_form_of_inductive_limit
from padicdual.cli import resolve_spec
from padicdual.io import load_group_spec

EX21 = [[1, 1], [1, 4]]
EX22 = [[0, 0, -3], [1, 0, -1], [0, 1, -1]]


def form(rank, rows_by_prime, precision=32):
    """Shorthand: ``{p: [[...]] or ZERO_ROW}`` -> FactoredForm."""
    exc = {}
    for p, rows in rows_by_prime.items():
        exc[p] = ZERO_ROW if rows is ZERO_ROW else PadicMatrix.from_rows(rows, p, precision, rank)
    return FactoredForm(rank, precision, exc)


def bundled(name, precision=None):
    return load_group_spec(str(resolve_spec(name)), precision)


@pytest.fixture(scope="session")
def ex21():
    return factored_form_of_inductive_limit(InductiveLimitGroup(EX21))


@pytest.fixture(scope="session")
def ex22():
    return factored_form_of_inductive_limit(InductiveLimitGroup(EX22))


@pytest.fixture(scope="session")
def ttf():
    return form(2, {2: [[0, 1]], 3: [[1, 0]], 5: [[1, -1]]})


@pytest.fixture
def rng():
    return random.Random(20240601)


def random_gl(rng, n, p):
    """Random integer matrix invertible over Z_p."""
    from padicdual.linalg import rank_mod_p

    while True:
        U = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
        if rank_mod_p(U, p) == n:
            return U


def random_unimodular(rng, n, steps=6):
    """Random V in GL(n, Z) together with its integer inverse."""
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    W = [row[:] for row in V]
    for _ in range(steps):
        if n == 1:
            s = rng.choice([1, -1])
            V, W = [[V[0][0] * s]], [[W[0][0] * s]]
            continue
        i, j = rng.sample(range(n), 2)
        t = rng.randint(-3, 3)
        # V <- E V, W <- W E^-1 with E = I + t e_ij
        V[i] = [a + t * b for a, b in zip(V[i], V[j])]
        for row in W:
            row[j] -= t * row[i]
    return V, W


def random_form(rng, precision=32, primes=(2, 3, 5)):
    """A random valid factored form of rank 1-3."""
    from padicdual import validate_factored_form

    while True:
        n = rng.randint(1, 3)
        exc = {}
        for p in primes:
            roll = rng.random()
            if roll < 0.35:
                continue
            if roll < 0.45:
                exc[p] = ZERO_ROW
                continue
            k = rng.randint(1, n)
            exc[p] = [[rng.choice([0, 1, -1, p, 2 * p, p * p, rng.randint(-30, 30)]) for _ in range(n)] for _ in range(k)]
        ff = form(n, exc, precision)
        if validate_factored_form(ff):
            return ff


def transformed_form(rng, ff):
    """``B_p = U_p A_p V^-1`` for random U_p and unimodular V; returns (B, V)."""
    n = ff.rank
    V, Vinv = random_unimodular(rng, n)
    exc = {}
    for p in ff.primes:
        A = ff.exceptional[p]
        if A is ZERO_ROW:
            exc[p] = ZERO_ROW
            continue
        U = random_gl(rng, A.rows, p)
        UA = [[sum(U[i][k] * A.entries[k][j] for k in range(A.rows)) for j in range(n)] for i in range(A.rows)]
        exc[p] = [[sum(UA[i][k] * Vinv[k][j] for k in range(n)) for j in range(n)] for i in range(A.rows)]
    return form(n, exc, ff.precision), V
