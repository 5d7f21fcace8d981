"""Shared fixtures and independent oracles.

Contexts, decompositions and six-bases bundles are cached per dimension for
the whole session; building them once keeps the exact-arithmetic suites fast.

The oracle helpers here deliberately avoid the library's own computational
paths (no Bareiss elimination, no incremental series) so that derived
expected values are confirmed through an independent route.
"""

from __future__ import annotations

from fractions import Fraction

import pytest

from tcube.cube import build_context
from tcube.decomposition import decompose
from tcube.leonard import build_six_bases, phi_matrix
from tcube.scalar import GaussRat

_CTX = {}
_DEC = {}
_BUNDLES = {}
_PHI = {}


def get_ctx(D):
    if D not in _CTX:
        _CTX[D] = build_context(D)
    return _CTX[D]


def get_decomposition(D):
    if D not in _DEC:
        _DEC[D] = decompose(get_ctx(D))
    return _DEC[D]


def get_phi(d):
    if d not in _PHI:
        _PHI[d] = phi_matrix(d)
    return _PHI[d]


def get_bundles(D):
    """List of (module, six_bases, phi) for every module of dimension D."""
    if D not in _BUNDLES:
        ctx = get_ctx(D)
        _BUNDLES[D] = [(m, build_six_bases(ctx, m), get_phi(m.d))
                       for m in get_decomposition(D).modules]
    return _BUNDLES[D]


@pytest.fixture(scope="session")
def ctx_cache():
    return get_ctx


@pytest.fixture(scope="session")
def decomposition_cache():
    return get_decomposition


@pytest.fixture(scope="session")
def bundle_cache():
    return get_bundles


# -- independent oracles ----------------------------------------------------------


def naive_rank(rows) -> int:
    """Plain Gaussian elimination over Q(i) with division (no fraction-free
    machinery, no numpy): the independent rank oracle."""
    grid = [list(row) for row in rows]
    if not grid:
        return 0
    ncols = len(grid[0])
    rank = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(grid)) if grid[r][col]), None)
        if piv is None:
            continue
        grid[rank], grid[piv] = grid[piv], grid[rank]
        inv = GaussRat(1) / grid[rank][col]
        grid[rank] = [e * inv for e in grid[rank]]
        for r in range(len(grid)):
            if r != rank and grid[r][col]:
                f = grid[r][col]
                grid[r] = [a - f * b for a, b in zip(grid[r], grid[rank])]
        rank += 1
    return rank


def naive_matrix_rank(m) -> int:
    return naive_rank(m.to_rows())


def hamming_weight(v: int) -> int:
    return bin(v).count("1")


def brute_p_1j(D: int, h: int, j: int) -> int:
    """Intersection number p^h_{1j} counted directly on the vertex set:
    pick any pair at distance h and count common neighbours-at-1/distance-j."""
    y = 0
    z = (1 << h) - 1  # distance h from y
    count = 0
    for w in range(2 ** D):
        if hamming_weight(w ^ y) == 1 and hamming_weight(w ^ z) == j:
            count += 1
    return count


def series_2f1(i: int, j: int, d: int) -> Fraction:
    """2F1(-i,-j;-d;2) summed with explicit Pochhammer products (independent
    of the incremental-term evaluation in the library)."""
    def poch(a, n):
        out = 1
        for k in range(n):
            out *= a + k
        return out

    total = Fraction(0)
    fact = 1
    for n in range(d + 1):
        if n > 0:
            fact *= n
        num = poch(-i, n) * poch(-j, n) * 2 ** n
        den = poch(-d, n) * fact
        if num == 0:
            continue
        total += Fraction(num, den)
    return total
