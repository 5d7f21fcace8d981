"""Module decomposition: ladder operators, kernel seeding, multiplicities,
invariant validation, seed normalization."""

import pytest

from conftest import get_ctx, get_decomposition, naive_rank
from tcube.decomposition import (FieldExtensionRequired, InfeasibleTargets,
                                 decompose, lowering_operator, multiplicity,
                                 normalize_seeds, proportional,
                                 raising_operator, verify_module_p_cycle,
                                 verify_seed_norms)
from tcube.linalg import ExactVector, inner
from tcube.report import all_passed
from tcube.scalar import GaussRat


def _restricted_lowering(ctx, r):
    """L restricted to slice r, as rows over the slice below (oracle input)."""
    cols = ctx.slice_indices(r)
    rows = ctx.slice_indices(r - 1) if r >= 1 else []
    return [[ctx.A[y, z] for z in cols] for y in rows]


def test_lowering_plus_raising_is_adjacency():
    ctx = get_ctx(4)
    assert lowering_operator(ctx) + raising_operator(ctx) == ctx.A


def test_lowering_kills_bottom_slice():
    ctx = get_ctx(3)
    bottom = ExactVector.basis_vector(8, 0)
    assert lowering_operator(ctx).matvec(bottom).is_zero()


def test_adjoint_of_lowering_is_raising():
    ctx = get_ctx(4)
    assert lowering_operator(ctx).adjoint() == raising_operator(ctx)


def test_kernel_dimension_oracle_d3():
    # dim ker(L restricted to slice 1) = C(3,1) - C(3,0) = 2
    ctx = get_ctx(3)
    rows = _restricted_lowering(ctx, 1)
    assert len(rows[0]) - naive_rank(rows) == 2


def test_multiplicity_examples():
    assert multiplicity(4, 2) == 2
    assert multiplicity(5, 0) == 1
    with pytest.raises(ValueError):
        multiplicity(4, 3)
    # oracle for (4, 2): kernel dimension of L on slice 2
    ctx = get_ctx(4)
    rows = _restricted_lowering(ctx, 2)
    assert len(rows[0]) - naive_rank(rows) == 2


@pytest.mark.parametrize("D", range(1, 9))
def test_multiplicity_sum_is_total_dimension(D):
    assert sum(multiplicity(D, r) * (D - 2 * r + 1)
               for r in range(D // 2 + 1)) == 2 ** D


def test_decompose_d1_single_module():
    dec = get_decomposition(1)
    assert len(dec.modules) == 1
    m = dec.modules[0]
    assert (m.r, m.d, m.dim) == (0, 1, 2)
    # spans C^2: the two slice vectors are the standard basis up to scale
    assert not m.slice_basis[0].is_zero() and not m.slice_basis[1].is_zero()


def test_decompose_d2_structure():
    dec = get_decomposition(2)
    shape = sorted((m.r, m.dim) for m in dec.modules)
    assert shape == [(0, 3), (1, 1)]
    assert dec.multiplicities == {0: 1, 1: 1}


def test_decompose_d3_structure():
    dec = get_decomposition(3)
    shape = sorted((m.r, m.dim) for m in dec.modules)
    assert shape == [(0, 4), (1, 2), (1, 2)]
    assert dec.multiplicities == {0: 1, 1: 2}


@pytest.mark.parametrize("D", [2, 3, 4, 5, 6])
def test_decompose_counts_match_closed_form(D):
    dec = get_decomposition(D)
    for r, count in dec.multiplicities.items():
        assert count == multiplicity(D, r)
    assert sum(m.dim for m in dec.modules) == 2 ** D


@pytest.mark.parametrize("D", [3, 4, 5])
def test_tridiagonal_action_on_slice_basis(D):
    ctx = get_ctx(D)
    for m in get_decomposition(D).modules:
        for k, b in enumerate(m.slice_basis):
            image = ctx.A.matvec(b)
            below = m.slice_basis[k - 1] if k >= 1 else None
            above = m.slice_basis[k + 1] if k < m.d else None
            recon = ExactVector.zeros(ctx.n)
            for nb in (below, above):
                if nb is None:
                    continue
                coeff = inner(image, nb) / inner(nb, nb)
                recon = recon + nb.scale(coeff)
            assert image == recon


@pytest.mark.parametrize("D", [3, 4])
def test_module_p_cycle(D):
    ctx = get_ctx(D)
    for m in get_decomposition(D).modules:
        assert all_passed(verify_module_p_cycle(ctx, m))


@pytest.mark.parametrize("D", [1, 2, 3, 4, 5])
def test_seed_norm_relations(D):
    for m in get_decomposition(D).modules:
        assert all_passed(verify_seed_norms(m))


def test_seed_window_nonvanishing_d4():
    ctx = get_ctx(4)
    for m in get_decomposition(4).modules:
        for i in range(5):
            in_window = m.r <= i <= m.r + m.d
            assert (not ctx.E[i].matvec(m.u_star).is_zero()) == in_window
            assert (not ctx.Eeps[i].matvec(m.u_star).is_zero()) == in_window


def test_normalize_seeds_round_trip():
    dec = get_decomposition(3)
    m = dec.modules[1]
    a0 = m.seed_inner("u", "u*")
    b0 = m.seed_inner("u*", "ue")
    c0 = m.seed_inner("ue", "u")
    # scaling the current products by the positive rational q = delta_0 makes
    # delta = q^2, a perfect square, so these targets are always realizable
    prod = (a0 * b0 * c0 * GaussRat(1, 1) ** m.d).re
    q = prod / (c0.abs_sq() * inner(m.u_star, m.u_star).re)
    targets = (a0 * q, b0 * q, c0 * q)
    out = normalize_seeds(m, *targets)
    assert out.seed_inner("u", "u*") == targets[0]
    assert out.seed_inner("u*", "ue") == targets[1]
    assert out.seed_inner("ue", "u") == targets[2]
    # the rescaled module still satisfies the norm relations
    assert all_passed(verify_seed_norms(out))


def test_normalize_seeds_rejects_zero_target():
    m = get_decomposition(3).modules[0]
    with pytest.raises(InfeasibleTargets):
        normalize_seeds(m, GaussRat(0), GaussRat(1), GaussRat(1))


def test_normalize_seeds_rejects_nonpositive_product():
    m = get_decomposition(3).modules[0]
    with pytest.raises(InfeasibleTargets):
        normalize_seeds(m, GaussRat(1), GaussRat(1), GaussRat(1, 1))


def test_normalize_seeds_field_extension():
    m = get_decomposition(3).modules[1]
    a0 = m.seed_inner("u", "u*")
    b0 = m.seed_inner("u*", "ue")
    c0 = m.seed_inner("ue", "u")
    prod = (a0 * b0 * c0 * GaussRat(1, 1) ** m.d).re
    q = prod / (c0.abs_sq() * inner(m.u_star, m.u_star).re)
    # scaling all three targets by 2q makes delta = 2q^2: never a square in Q
    with pytest.raises(FieldExtensionRequired):
        normalize_seeds(m, a0 * (2 * q), b0 * (2 * q), c0 * (2 * q))


def test_scaling_seeds_by_i_preserves_inner_products():
    m = get_decomposition(2).modules[0]
    i_unit = GaussRat(0, 1)
    u, us, ue = m.u.scale(i_unit), m.u_star.scale(i_unit), m.u_eps.scale(i_unit)
    assert inner(u, us) == m.seed_inner("u", "u*")
    assert inner(us, ue) == m.seed_inner("u*", "ue")
    assert inner(ue, u) == m.seed_inner("ue", "u")


def test_cross_module_orthogonality_d4():
    modules = get_decomposition(4).modules
    for a in range(len(modules)):
        for b in range(a):
            for va in modules[a].slice_basis:
                for vb in modules[b].slice_basis:
                    assert inner(va, vb).is_zero()


def test_proportional_helper():
    v = ExactVector([2, 4])
    assert proportional(v.scale(GaussRat(0, 3)), v)
    assert not proportional(ExactVector([1, 0]), ExactVector([0, 1]))
    assert proportional(ExactVector.zeros(2), ExactVector.zeros(2))


def test_decomposition_report_shape():
    doc = get_decomposition(3).to_json()
    assert doc["D"] == 3
    assert doc["multiplicities"] == {"0": 1, "1": 2}
    assert doc["modules"][0] == {"r": 0, "d": 3, "index": 0, "dim": 4}
