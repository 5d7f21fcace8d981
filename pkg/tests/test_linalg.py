"""Exact matrix/vector algebra: products, Kronecker structure, adjoints,
inner products, kernels, orthogonalization, dump round-trips."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import naive_matrix_rank
from tcube.linalg import (ExactMatrix, ExactVector, gram_schmidt, inner,
                          kernel_basis, kron, kron_power, rank)
from tcube.scalar import GaussRat

small = st.integers(min_value=-6, max_value=6)
gauss_small = st.builds(lambda a, b: GaussRat(a, b), small, small)


def mat_strategy(rows, cols):
    return st.lists(
        st.lists(gauss_small, min_size=cols, max_size=cols),
        min_size=rows, max_size=rows).map(ExactMatrix)


def vec_strategy(n):
    return st.lists(gauss_small, min_size=n, max_size=n).map(ExactVector)


SWAP = ExactMatrix([[0, 1], [1, 0]])
P1 = ExactMatrix([[GaussRat(1), GaussRat(1)],
                  [GaussRat(0, -1), GaussRat(0, 1)]])


def test_identity_neutral():
    ident = ExactMatrix.identity(3)
    m = ExactMatrix([[1, 2, 3], [4, 5, 6], [7, 8, 9]])
    assert ident @ m == m and m @ ident == m


def test_swap_squares_to_identity():
    assert SWAP @ SWAP == ExactMatrix.identity(2)


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        ExactMatrix.identity(2) @ ExactMatrix.identity(3)
    with pytest.raises(ValueError):
        ExactMatrix.identity(2).matvec(ExactVector([1, 2, 3]))
    with pytest.raises(ValueError):
        inner(ExactVector([1]), ExactVector([1, 2]))


@given(mat_strategy(2, 2), mat_strategy(2, 2), mat_strategy(2, 2),
       mat_strategy(2, 2))
def test_kron_mixed_product(b1, b1p, b2, b2p):
    assert kron(b1, b1p) @ kron(b2, b2p) == kron(b1 @ b2, b1p @ b2p)


@given(mat_strategy(2, 3), mat_strategy(3, 2))
def test_kron_transpose(b, bp):
    assert kron(b, bp).transpose() == kron(b.transpose(), bp.transpose())


@given(mat_strategy(2, 2), mat_strategy(2, 2))
def test_kron_adjoint(b, bp):
    assert kron(b, bp).adjoint() == kron(b.adjoint(), bp.adjoint())


@given(mat_strategy(2, 2), mat_strategy(2, 2), mat_strategy(2, 2), gauss_small,
       gauss_small)
def test_kron_bilinearity(b, b1, b2, c1, c2):
    lhs = kron(b, b1.scale(c1) + b2.scale(c2))
    assert lhs == kron(b, b1).scale(c1) + kron(b, b2).scale(c2)


def test_kron_identity():
    assert kron(ExactMatrix.identity(2), ExactMatrix.identity(2)) \
        == ExactMatrix.identity(4)


def test_kron_power_matches_entry_formula():
    # oracle: (P1 (x) P1)_{yz} = prod_k (P1)_{y_k z_k} with the first bit
    # most significant
    p = kron_power(P1, 2)
    for y in range(4):
        for z in range(4):
            expect = GaussRat(1)
            for bits in ((y >> 1 & 1, z >> 1 & 1), (y & 1, z & 1)):
                expect = expect * P1[bits[0], bits[1]]
            assert p[y, z] == expect


@given(mat_strategy(2, 3), mat_strategy(3, 2), mat_strategy(2, 2))
def test_matmul_associative(a, b, c):
    assert (a @ b) @ c == a @ (b @ c)


def test_adjoint_examples():
    d = ExactMatrix.diagonal([GaussRat(0, 1), GaussRat(0, -1)])
    assert d.adjoint() == ExactMatrix.diagonal([GaussRat(0, -1), GaussRat(0, 1)])
    assert SWAP.adjoint() == SWAP


@given(vec_strategy(3), vec_strategy(3), mat_strategy(3, 3))
def test_adjoint_moves_across_inner_product(u, v, b):
    assert inner(u, b.matvec(v)) == inner(b.adjoint().matvec(u), v)


def test_inner_examples():
    e0 = ExactVector.basis_vector(4, 0)
    assert inner(e0, e0) == GaussRat(1)
    v = ExactVector([GaussRat(1), GaussRat(0, 1)])
    assert inner(v, v) == GaussRat(2)


@given(vec_strategy(4), vec_strategy(4))
def test_inner_hermitian_symmetry(u, v):
    assert inner(u, v) == inner(v, u).conj()


def test_kernel_of_identity_empty():
    assert kernel_basis(ExactMatrix.identity(3)) == []


def test_kernel_of_zero_matrix():
    vecs = kernel_basis(ExactMatrix.zeros(2, 2))
    assert len(vecs) == 2
    assert vecs[0] == ExactVector.basis_vector(2, 0)
    assert vecs[1] == ExactVector.basis_vector(2, 1)


@settings(max_examples=60)
@given(mat_strategy(3, 4))
def test_kernel_vectors_annihilated_and_rank_nullity(m):
    vecs = kernel_basis(m)
    for v in vecs:
        assert m.matvec(v).is_zero()
    assert rank(m) + len(vecs) == m.cols
    # independent oracle: plain rational elimination
    assert rank(m) == naive_matrix_rank(m)


def test_gram_schmidt_example():
    out = gram_schmidt([ExactVector([1, 0]), ExactVector([1, 1])])
    assert out == [ExactVector([1, 0]), ExactVector([0, 1])]


def test_gram_schmidt_rejects_dependent():
    with pytest.raises(ValueError):
        gram_schmidt([ExactVector([1, 2]), ExactVector([2, 4])])


@settings(max_examples=40)
@given(st.lists(vec_strategy(4), min_size=2, max_size=3))
def test_gram_schmidt_orthogonal_and_span(vs):
    stacked = ExactMatrix([v.entries() for v in vs])
    if rank(stacked) < len(vs):
        return
    out = gram_schmidt(vs)
    for a in range(len(out)):
        for b in range(a):
            assert inner(out[a], out[b]).is_zero()
    # span preserved: every input lies in the span of the outputs
    for v in vs:
        w = v
        for u in out:
            c = inner(w, u) / inner(u, u)
            if c:
                w = w - u.scale(c)
        assert w.is_zero()


def test_matrix_dump_round_trip():
    m = ExactMatrix([[GaussRat(Fraction(1, 2), Fraction(-3, 4)), GaussRat(0)],
                     [GaussRat(0, 2), GaussRat(-5)]])
    d = m.to_dump()
    assert d["rows"] == 2 and d["cols"] == 2
    assert [e[:2] for e in d["entries"]] == [[0, 0], [1, 0], [1, 1]]
    assert ExactMatrix.from_dump(d) == m


def test_vector_dump_round_trip():
    v = ExactVector([GaussRat(0), GaussRat(Fraction(2, 3), 1)])
    d = v.to_dump()
    assert d["length"] == 2 and len(d["entries"]) == 1
    assert ExactVector.from_dump(d) == v


def test_scalar_and_additive_ops():
    m = ExactMatrix([[1, 2], [3, 4]])
    assert m + (-m) == ExactMatrix.zeros(2, 2)
    assert m.scale(Fraction(1, 2)) + m.scale(Fraction(1, 2)) == m
    assert (m - m).is_zero()


def test_trace():
    m = ExactMatrix([[GaussRat(1, 2), GaussRat(5)], [GaussRat(7), GaussRat(3, -2)]])
    assert m.trace() == GaussRat(4)


def test_big_integer_matmul_falls_back_exactly():
    big = 2 ** 70
    a = ExactMatrix([[big, 1], [0, big]])
    sq = a @ a
    assert sq[0, 0] == GaussRat(big * big)
    assert sq[0, 1] == GaussRat(2 * big)
