"""Operators of the hypercube Q_D relative to the all-zeros base vertex.

Vertices are bit strings (t_1, ..., t_D) indexed by sum(t_k * 2^(D-k)), i.e.
the first coordinate is the most significant bit.  With that convention every
operator factors through Kronecker products of its Q_1 counterpart, and each
operator that admits two independent constructions (combinatorial definition
vs. Kronecker identity) is built both ways with exact agreement enforced.

Operators:
  A      adjacency matrix (vertices differing in one coordinate)
  Astar  diagonal with (y,y)-entry D - 2*dist(y)
  Aeps   -i(A Astar - Astar A)/2, supported on edges with entries +-i
  P      kron_power(P1, D) with P1 = [[1, 1], [-i, i]]; conjugation by P
         cycles A -> Astar -> Aeps -> A
  A_k    distance-k indicator matrices
  E, Estar, Eeps   the three idempotent families (spectral projections)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

import numpy as np

from .linalg import ExactMatrix, kron, kron_power, rank
from .report import check_equal, check_true
from .scalar import GaussRat

DEFAULT_D_LIMIT = 10

P1 = ExactMatrix([[GaussRat(1), GaussRat(1)],
                  [GaussRat(0, -1), GaussRat(0, 1)]])
A1 = ExactMatrix([[0, 1], [1, 0]])
ASTAR1 = ExactMatrix.diagonal([1, -1])
I1 = ExactMatrix.identity(2)


class ConstructionError(RuntimeError):
    """A self-check between two independent constructions disagreed."""


def _require(cond: bool, msg: str):
    if not cond:
        raise ConstructionError(msg)


def vertex_of_index(idx: int, D: int) -> Tuple[int, ...]:
    return tuple((idx >> (D - 1 - k)) & 1 for k in range(D))


def index_of_vertex(t) -> int:
    idx = 0
    for bit in t:
        idx = (idx << 1) | bit
    return idx


def _kron_sum(factor: ExactMatrix, D: int) -> ExactMatrix:
    """sum over positions of I1^(x i) (x) factor (x) I1^(x (D-1-i))."""
    total = ExactMatrix.zeros(2 ** D, 2 ** D)
    for i in range(D):
        total = total + kron(kron(kron_power(I1, i), factor),
                             kron_power(I1, D - 1 - i))
    return total


class CubeContext:
    """All operators of Q_D for one dimension; immutable after construction.

    The idempotent families are built lazily (interpolation products are the
    expensive part) and cached; everything else is constructed eagerly with
    the dual-construction cross-checks.
    """

    def __init__(self, D: int, d_limit: int = DEFAULT_D_LIMIT):
        if not 1 <= D <= d_limit:
            raise ValueError(f"D must satisfy 1 <= D <= {d_limit}, got {D}")
        self.D = D
        self.n = 2 ** D
        self.base_point = (0,) * D
        self.dist = np.array([bin(v).count("1") for v in range(self.n)],
                             dtype=object)
        self.theta = [D - 2 * i for i in range(D + 1)]

        self.A = self._build_adjacency()
        self.Astar = self._build_dual_adjacency()
        self.Aeps = self._build_imaginary_adjacency()
        self.P = kron_power(P1, D)
        self.Pinv = self.P.adjoint().scale(Fraction(1, self.n))
        _require(self.P @ self.Pinv == ExactMatrix.identity(self.n),
                 "P inverse construction failed")
        self.dist_matrices = tuple(self._distance_matrix(k)
                                   for k in range(D + 1))
        self._E = None
        self._Estar = None
        self._Eeps = None

    # -- operator constructions ------------------------------------------------

    def _build_adjacency(self) -> ExactMatrix:
        n = self.n
        re = np.zeros((n, n), dtype=object)
        for y in range(n):
            for k in range(self.D):
                re[y, y ^ (1 << k)] = 1
        a = ExactMatrix._raw(re, np.zeros((n, n), dtype=object), 1,
                             reduce=False)
        _require(a == _kron_sum(A1, self.D),
                 "adjacency: Hamming and Kronecker constructions disagree")
        return a

    def _build_dual_adjacency(self) -> ExactMatrix:
        astar = ExactMatrix.diagonal([self.D - 2 * int(self.dist[y])
                                      for y in range(self.n)])
        _require(astar == _kron_sum(ASTAR1, self.D),
                 "dual adjacency: distance and Kronecker constructions disagree")
        return astar

    def _build_imaginary_adjacency(self) -> ExactMatrix:
        by_def = (self.A @ self.Astar - self.Astar @ self.A).scale(
            GaussRat(0, Fraction(-1, 2)))
        # entrywise: i * (dist(z) - dist(y)) on edges
        im = self.A._re * (self.dist[None, :] - self.dist[:, None])
        by_entries = ExactMatrix._raw(np.zeros((self.n, self.n), dtype=object),
                                      im, 1, reduce=False)
        _require(by_def == by_entries,
                 "imaginary adjacency: commutator and entry formula disagree")
        aeps1 = (A1 @ ASTAR1 - ASTAR1 @ A1).scale(GaussRat(0, Fraction(-1, 2)))
        _require(by_def == _kron_sum(aeps1, self.D),
                 "imaginary adjacency: Kronecker construction disagrees")
        return by_def

    def _distance_matrix(self, k: int) -> ExactMatrix:
        n = self.n
        re = np.zeros((n, n), dtype=object)
        for y in range(n):
            for z in range(n):
                if bin(y ^ z).count("1") == k:
                    re[y, z] = 1
        return ExactMatrix._raw(re, np.zeros((n, n), dtype=object), 1,
                                reduce=False)

    # -- idempotent families ------------------------------------------------------

    @property
    def E(self):
        """Primitive idempotents of A by linear interpolation."""
        if self._E is None:
            self._E = tuple(self._interpolation_idempotent(self.A, i)
                            for i in range(self.D + 1))
        return self._E

    @property
    def Estar(self):
        """Dual idempotents: diagonal indicators of the distance slices."""
        if self._Estar is None:
            fam = []
            for i in range(self.D + 1):
                fam.append(ExactMatrix.diagonal(
                    [1 if int(self.dist[y]) == i else 0
                     for y in range(self.n)]))
            self._Estar = tuple(fam)
        return self._Estar

    @property
    def Eeps(self):
        """Imaginary idempotents Pinv @ E_i @ P."""
        if self._Eeps is None:
            self._Eeps = tuple(self.Pinv @ e @ self.P for e in self.E)
        return self._Eeps

    def _interpolation_idempotent(self, m: ExactMatrix, i: int) -> ExactMatrix:
        prod = ExactMatrix.identity(self.n)
        scale = Fraction(1)
        for j in range(self.D + 1):
            if j == i:
                continue
            prod = prod @ (m - ExactMatrix.identity(self.n).scale(self.theta[j]))
            scale /= self.theta[i] - self.theta[j]
        return prod.scale(scale)

    # -- slices --------------------------------------------------------------------

    def slice_indices(self, k: int):
        """Vertex indices at distance k from the base point, ascending."""
        return [y for y in range(self.n) if int(self.dist[y]) == k]

    # -- testing hook ----------------------------------------------------------------

    def with_flipped_sign(self, op: str, r: int, c: int) -> "CubeContext":
        """Copy of this context with one entry of an operator sign-flipped.

        Bypasses the construction cross-checks on purpose; used to confirm the
        verification suites actually detect corruption.
        """
        clone = object.__new__(CubeContext)
        clone.__dict__.update(self.__dict__)
        m = getattr(clone, op)
        g = m[r, c]
        grid = m.to_rows()
        grid[r][c] = -g
        setattr(clone, op, ExactMatrix(grid))
        return clone


def build_context(D: int, d_limit: int = DEFAULT_D_LIMIT) -> CubeContext:
    return CubeContext(D, d_limit)


def imaginary_adjacency(ctx: CubeContext) -> ExactMatrix:
    return ctx.Aeps


def primitive_idempotents(ctx: CubeContext):
    return ctx.E


def dual_idempotents(ctx: CubeContext):
    return ctx.Estar


def imaginary_idempotents(ctx: CubeContext):
    return ctx.Eeps


def build_P(ctx: CubeContext) -> ExactMatrix:
    return ctx.P


def coordinate_transposition(ctx: CubeContext, a: int, b: int) -> ExactMatrix:
    """Permutation matrix of the automorphism swapping coordinates a and b
    (0-based positions, coordinate 0 most significant)."""
    D, n = ctx.D, ctx.n
    pa, pb = D - 1 - a, D - 1 - b
    re = np.zeros((n, n), dtype=object)
    for y in range(n):
        ba, bb = (y >> pa) & 1, (y >> pb) & 1
        z = y & ~(1 << pa) & ~(1 << pb) | (bb << pa) | (ba << pb)
        re[y, z] = 1
    return ExactMatrix._raw(re, np.zeros((n, n), dtype=object), 1, reduce=False)


# -- spectra -------------------------------------------------------------------------


@dataclass(frozen=True)
class SpectrumTable:
    """(eigenvalue, multiplicity) pairs, eigenvalue descending."""

    entries: Tuple[Tuple[int, int], ...]

    def total(self) -> int:
        return sum(m for _, m in self.entries)

    def to_json(self) -> dict:
        return {"spectrum": [[ev, m] for ev, m in self.entries]}


_FAMILIES = {"adjacency": "E", "dual": "Estar", "imaginary": "Eeps"}


def spectrum(ctx: CubeContext, which: str) -> SpectrumTable:
    """Eigenvalue table read off the idempotent ranks of the chosen family."""
    if which not in _FAMILIES:
        raise ValueError(f"unknown operator family {which!r}")
    family = getattr(ctx, _FAMILIES[which])
    return SpectrumTable(tuple((ctx.D - 2 * i, rank(family[i]))
                               for i in range(ctx.D + 1)))


# -- verification suites ----------------------------------------------------------------


def verify_commutators(ctx: CubeContext):
    """The three commutator identities and the two quadratic relations."""
    A, As, Ae = ctx.A, ctx.Astar, ctx.Aeps
    two_i = GaussRat(0, 2)
    checks = [
        check_equal("commutator_A_Astar", A @ As - As @ A, Ae.scale(two_i)),
        check_equal("commutator_Astar_Aeps", As @ Ae - Ae @ As, A.scale(two_i)),
        check_equal("commutator_Aeps_A", Ae @ A - A @ Ae, As.scale(two_i)),
        check_equal("quadratic_dual",
                    As @ As @ A - (As @ A @ As).scale(2) + A @ As @ As,
                    A.scale(4)),
        check_equal("quadratic_adjacency",
                    A @ A @ As - (A @ As @ A).scale(2) + As @ A @ A,
                    As.scale(4)),
    ]
    return checks


def verify_idempotent_families(ctx: CubeContext, include_ranks: bool = True):
    """Sum-to-identity, symmetry/reality, orthogonal idempotence and (optionally)
    ranks for all three families."""
    n, D = ctx.n, ctx.D
    ident = ExactMatrix.identity(n)
    checks = []
    allones = ExactMatrix([[1] * n for _ in range(n)])
    checks.append(check_equal("E_trivial_allones", ctx.E[0].scale(n), allones))
    for label, family in (("E", ctx.E), ("Estar", ctx.Estar), ("Eeps", ctx.Eeps)):
        total = ExactMatrix.zeros(n, n)
        for e in family:
            total = total + e
        checks.append(check_equal(f"{label}_sum_identity", total, ident))
        for i, e in enumerate(family):
            if label == "Eeps":
                checks.append(check_equal(f"{label}_adjoint[{i}]", e.adjoint(), e))
            else:
                checks.append(check_equal(f"{label}_transpose[{i}]",
                                          e.transpose(), e))
                checks.append(check_equal(f"{label}_conj[{i}]", e.conj(), e))
        for i in range(D + 1):
            for j in range(D + 1):
                expected = family[i] if i == j else ExactMatrix.zeros(n, n)
                checks.append(check_equal(f"{label}_product[{i},{j}]",
                                          family[i] @ family[j], expected))
    spectral = ExactMatrix.zeros(n, n)
    for i, e in enumerate(ctx.Eeps):
        spectral = spectral + e.scale(D - 2 * i)
        checks.append(check_equal(f"Eeps_eigen[{i}]", ctx.Aeps @ e,
                                  e.scale(D - 2 * i)))
        checks.append(check_equal(f"Eeps_eigen_right[{i}]", e @ ctx.Aeps,
                                  e.scale(D - 2 * i)))
    checks.append(check_equal("Aeps_spectral_sum", spectral, ctx.Aeps))
    if include_ranks:
        for label, family in (("E", ctx.E), ("Estar", ctx.Estar),
                              ("Eeps", ctx.Eeps)):
            for i, e in enumerate(family):
                checks.append(check_true(f"{label}_rank[{i}]",
                                         rank(e) == math.comb(D, i)))
    return checks


def verify_conjugation(ctx: CubeContext):
    """Scaled unitarity and cube of P, and the conjugation cycle on the
    operators and on the idempotent families."""
    n, D = ctx.n, ctx.D
    ident = ExactMatrix.identity(n)
    scaled = ident.scale(n)
    p3_scalar = GaussRat(1, -1) ** D * n
    checks = [
        check_equal("P_unitary_scaled", ctx.P @ ctx.P.adjoint(), scaled),
        check_equal("P_unitary_scaled_right", ctx.P.adjoint() @ ctx.P, scaled),
        check_equal("P_cubed", ctx.P @ ctx.P @ ctx.P, ident.scale(p3_scalar)),
        check_equal("conj_A_to_Astar", ctx.P @ ctx.A @ ctx.Pinv, ctx.Astar),
        check_equal("conj_Astar_to_Aeps", ctx.P @ ctx.Astar @ ctx.Pinv, ctx.Aeps),
        check_equal("conj_Aeps_to_A", ctx.P @ ctx.Aeps @ ctx.Pinv, ctx.A),
    ]
    for i in range(D + 1):
        checks.append(check_equal(f"conj_E_to_Estar[{i}]",
                                  ctx.P @ ctx.E[i] @ ctx.Pinv, ctx.Estar[i]))
        checks.append(check_equal(f"conj_Estar_to_Eeps[{i}]",
                                  ctx.P @ ctx.Estar[i] @ ctx.Pinv, ctx.Eeps[i]))
        checks.append(check_equal(f"conj_Eeps_to_E[{i}]",
                                  ctx.P @ ctx.Eeps[i] @ ctx.Pinv, ctx.E[i]))
    return checks


def verify_spectra(ctx: CubeContext):
    """All three spectra match (eigenvalue D-2i, multiplicity C(D,i))."""
    expected = SpectrumTable(tuple((ctx.D - 2 * i, math.comb(ctx.D, i))
                                   for i in range(ctx.D + 1)))
    return [check_true(f"spectrum_{name}", spectrum(ctx, name) == expected)
            for name in ("adjacency", "dual", "imaginary")]
