"""Six bases per irreducible module and everything verified against them.

For a module with endpoint r and diameter d the six bases are labeled by
which operator acts diagonally and which seed generates them:

    AsA  = (Estar_{r+i} u)_i      AeA  = (Eeps_{r+i} u)_i
    AeAs = (Eeps_{r+i} u*)_i      AAs  = (E_{r+i} u*)_i
    AAe  = (E_{r+i} ue)_i         AsAe = (Estar_{r+i} ue)_i

with u, u*, ue the seeds in E_r W, Estar_r W, Eeps_r W.  The module provides:

  * the terminating hypergeometric values 2F1(-i,-j;-d;2) (Krawtchouk values
    at p = 1/2) and the matrix Phi_ij = C(d,j) * 2F1(-i,-j;-d;2);
  * exact representation matrices of A, Astar, Aeps in all six bases and a
    comparison against the four closed forms (one diagonal and three
    tridiagonal shapes);
  * the full grid of inner products between bases, checked against the
    closed-form values built from the seeds' mutual inner products;
  * the 36 transition matrices, computed by exact change of basis and
    compared cell by cell to the closed-form tables, including inverse and
    composition coherence;
  * a generic Leonard-triple recognizer working over Q(i).

Coefficient extraction never assumes orthogonality: each basis gets a pivot
submatrix inverted once, and every solve is verified by exact reconstruction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .cube import CubeContext
from .decomposition import IrreducibleModule
from .linalg import ExactMatrix, ExactVector, inner, kernel_basis, _echelon
from .report import IdentityCheck, check_true
from .scalar import GaussRat, I as IUNIT

BASIS_LABELS = ("AsA", "AeA", "AeAs", "AAs", "AAe", "AsAe")
OPERATOR_LABELS = ("A", "Astar", "Aeps")


class BasisError(RuntimeError):
    """A constructed basis violated its defining properties."""


# -- hypergeometric values and the Phi matrix -----------------------------------


def hypergeometric_2f1(i: int, j: int, d: int) -> Fraction:
    """Terminating 2F1(-i,-j;-d;2); the sum stops at n = min(i,j), before
    the (-d)_n factor can vanish."""
    if d < 0 or not (0 <= i <= d and 0 <= j <= d):
        raise ValueError(f"need 0 <= i,j <= d, got i={i} j={j} d={d}")
    top = min(i, j)
    total = Fraction(0)
    term = Fraction(1)
    for n in range(top + 1):
        total += term
        if n < top:
            term *= Fraction((-i + n) * (-j + n) * 2, (-d + n) * (n + 1))
    return total


@dataclass(frozen=True)
class PhiMatrix:
    """Phi_ij = C(d,j) * 2F1(-i,-j;-d;2); self-inverse up to 2^d."""

    d: int
    hyper: Tuple[Tuple[Fraction, ...], ...]

    def f(self, i: int, j: int) -> Fraction:
        return self.hyper[i][j]

    def phi(self, i: int, j: int) -> Fraction:
        return math.comb(self.d, j) * self.hyper[i][j]

    def matrix(self) -> ExactMatrix:
        n = self.d + 1
        return ExactMatrix([[GaussRat(self.phi(i, j)) for j in range(n)]
                            for i in range(n)])

    def with_flipped_entry(self, i: int, j: int) -> "PhiMatrix":
        """Sign-flip one hypergeometric value (testing hook; the flipped
        Phi entry is C(d,j) times it)."""
        grid = [list(row) for row in self.hyper]
        grid[i][j] = -grid[i][j]
        return PhiMatrix(self.d, tuple(tuple(row) for row in grid))


def phi_matrix(d: int) -> PhiMatrix:
    if d < 0:
        raise ValueError("d must be nonnegative")
    grid = tuple(tuple(hypergeometric_2f1(i, j, d) for j in range(d + 1))
                 for i in range(d + 1))
    phi = PhiMatrix(d, grid)
    bad = [c for c in verify_phi(phi) if not c.passed]
    if bad:
        raise BasisError(f"hypergeometric table failed self-checks: {bad[:3]}")
    return phi


def verify_phi(phi: PhiMatrix) -> List[IdentityCheck]:
    """Three-term recurrence (an independent route to the same values),
    boundary rows/columns, and self-inversion up to 2^d."""
    d = phi.d
    checks = []
    for j in range(d + 1):
        checks.append(check_true(f"phi_row0[{j}]",
                                 phi.phi(0, j) == math.comb(d, j)))
    for i in range(d + 1):
        checks.append(check_true(f"phi_col0[{i}]", phi.f(i, 0) == 1))
    for i in range(2, d + 1):
        for j in range(d + 1):
            lhs = phi.f(i, j)
            rhs = (Fraction(d - 2 * j, d - i + 1) * phi.f(i - 1, j)
                   - Fraction(i - 1, d - i + 1) * phi.f(i - 2, j))
            checks.append(check_true(f"phi_recurrence[{i},{j}]", lhs == rhs))
    m = phi.matrix()
    checks.append(check_true("phi_self_inverse",
                             m @ m == ExactMatrix.identity(d + 1).scale(2 ** d)))
    return checks


# -- exact coordinates in a basis -------------------------------------------------


class BasisSolver:
    """Exact coordinates with respect to a fixed independent list of vectors.

    Elimination locates coordinate positions whose square submatrix is
    invertible; that inverse is computed once, and every solve is certified
    by reconstructing the target exactly.
    """

    def __init__(self, vectors: List[ExactVector]):
        self.vectors = list(vectors)
        k = len(self.vectors)
        stacked = ExactMatrix([v.entries() for v in self.vectors])
        rk, pivots, _, _ = _echelon(stacked._re, stacked._im)
        if rk != k:
            raise BasisError("vectors are linearly dependent")
        self.positions = pivots
        grid = [[self.vectors[b][p] for b in range(k)] for p in pivots]
        self.inverse = _invert_grid(grid)

    def coords(self, target: ExactVector) -> List[GaussRat]:
        k = len(self.vectors)
        rhs = [target[p] for p in self.positions]
        coeffs = [sum((self.inverse[a][b] * rhs[b] for b in range(k)),
                      GaussRat(0)) for a in range(k)]
        recon = ExactVector.zeros(target.length)
        for c, v in zip(coeffs, self.vectors):
            if c:
                recon = recon + v.scale(c)
        if recon != target:
            raise BasisError("target is outside the span of the basis")
        return coeffs


def _invert_grid(grid) -> List[List[GaussRat]]:
    """Gauss-Jordan inverse of a small matrix of scalars."""
    k = len(grid)
    aug = [[grid[r][c] for c in range(k)]
           + [GaussRat(1 if c == r else 0) for c in range(k)]
           for r in range(k)]
    for col in range(k):
        piv = next((r for r in range(col, k) if aug[r][col]), None)
        if piv is None:
            raise BasisError("coefficient system is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = GaussRat(1) / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(k):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[k:] for row in aug]


def representation_matrix(op: ExactMatrix, basis: List[ExactVector],
                          solver: Optional[BasisSolver] = None) -> ExactMatrix:
    """Matrix B with op @ v_j = sum_i B_ij v_i, extracted by exact solving."""
    solver = solver or BasisSolver(basis)
    k = len(basis)
    cols = [solver.coords(op.matvec(v)) for v in basis]
    return ExactMatrix([[cols[j][i] for j in range(k)] for i in range(k)])


# -- the six bases ------------------------------------------------------------------


@dataclass(frozen=True)
class SixBases:
    module: IrreducibleModule
    vectors: Dict[str, Tuple[ExactVector, ...]]

    def __getitem__(self, label: str) -> Tuple[ExactVector, ...]:
        return self.vectors[label]


def build_six_bases(ctx: CubeContext, mod: IrreducibleModule) -> SixBases:
    """Apply the idempotent families to the seeds; every vector must be
    nonzero, the seeds must decompose as the sums of their slices, and the
    bases must be P-images of each other under the chained normalization."""
    r, d = mod.r, mod.d
    fams = {"A": ctx.E, "As": ctx.Estar, "Ae": ctx.Eeps}
    seeds = {"A": mod.u, "As": mod.u_star, "Ae": mod.u_eps}
    spec = {"AsA": ("As", "A"), "AeA": ("Ae", "A"), "AeAs": ("Ae", "As"),
            "AAs": ("A", "As"), "AAe": ("A", "Ae"), "AsAe": ("As", "Ae")}
    vectors = {}
    for label, (fam, seed) in spec.items():
        vs = tuple(fams[fam][r + i].matvec(seeds[seed]) for i in range(d + 1))
        for i, v in enumerate(vs):
            if v.is_zero():
                raise BasisError(f"basis {label} vector {i} is zero "
                                 f"(module r={r} index={mod.index})")
        vectors[label] = vs
    for label, seed in (("AsA", mod.u), ("AeA", mod.u),
                        ("AeAs", mod.u_star), ("AAs", mod.u_star),
                        ("AAe", mod.u_eps), ("AsAe", mod.u_eps)):
        total = vectors[label][0]
        for v in vectors[label][1:]:
            total = total + v
        if total != seed:
            raise BasisError(f"basis {label} does not sum back to its seed")
    _check_p_shift(ctx, mod)
    return SixBases(module=mod, vectors=vectors)


def _check_p_shift(ctx: CubeContext, mod: IrreducibleModule) -> None:
    """With seeds chained by P (u* := Pu, ue := Pu*), each basis is the
    entrywise P-image of its predecessor."""
    r, d = mod.r, mod.d
    u = mod.u
    us = ctx.P.matvec(u)
    ue = ctx.P.matvec(us)
    u_back = ctx.P.matvec(ue)
    for i in range(d + 1):
        pairs = (
            ("AsA->AeAs", ctx.P.matvec(ctx.Estar[r + i].matvec(u)),
             ctx.Eeps[r + i].matvec(us)),
            ("AeAs->AAe", ctx.P.matvec(ctx.Eeps[r + i].matvec(us)),
             ctx.E[r + i].matvec(ue)),
            ("AAe->AsA", ctx.P.matvec(ctx.E[r + i].matvec(ue)),
             ctx.Estar[r + i].matvec(u_back)),
            ("AeA->AAs", ctx.P.matvec(ctx.Eeps[r + i].matvec(u)),
             ctx.E[r + i].matvec(us)),
            ("AAs->AsAe", ctx.P.matvec(ctx.E[r + i].matvec(us)),
             ctx.Estar[r + i].matvec(ue)),
            ("AsAe->AeA", ctx.P.matvec(ctx.Estar[r + i].matvec(ue)),
             ctx.Eeps[r + i].matvec(u_back)),
        )
        for name, lhs, rhs in pairs:
            if lhs != rhs:
                raise BasisError(f"P-shift {name} failed at slice {i} "
                                 f"(module r={r} index={mod.index})")


# -- representation matrices ----------------------------------------------------------


def diagonal_form(d: int) -> ExactMatrix:
    return ExactMatrix.diagonal([d - 2 * i for i in range(d + 1)])


def _tridiag(d: int, sub_sign: int, super_sign: int,
             imaginary: bool) -> ExactMatrix:
    grid = [[GaussRat(0)] * (d + 1) for _ in range(d + 1)]
    unit = IUNIT if imaginary else GaussRat(1)
    for i in range(1, d + 1):
        grid[i][i - 1] = unit * (sub_sign * i)
    for i in range(d):
        grid[i][i + 1] = unit * (super_sign * (d - i))
    return ExactMatrix(grid)


def tridiagonal_form(d: int) -> ExactMatrix:
    """Real tridiagonal: subdiagonal 1..d, superdiagonal d..1, zero diagonal."""
    return _tridiag(d, +1, +1, imaginary=False)


def itridiagonal_subneg_form(d: int) -> ExactMatrix:
    """i times the tridiagonal shape with negated subdiagonal."""
    return _tridiag(d, -1, +1, imaginary=True)


def itridiagonal_superneg_form(d: int) -> ExactMatrix:
    """i times the tridiagonal shape with negated superdiagonal."""
    return _tridiag(d, +1, -1, imaginary=True)


REP_FORMS = {
    ("A", "AAs"): "diagonal", ("A", "AAe"): "diagonal",
    ("A", "AsA"): "tridiagonal", ("A", "AeA"): "tridiagonal",
    ("A", "AeAs"): "itridiagonal_subneg",
    ("A", "AsAe"): "itridiagonal_superneg",
    ("Astar", "AsA"): "diagonal", ("Astar", "AsAe"): "diagonal",
    ("Astar", "AeAs"): "tridiagonal", ("Astar", "AAs"): "tridiagonal",
    ("Astar", "AAe"): "itridiagonal_subneg",
    ("Astar", "AeA"): "itridiagonal_superneg",
    ("Aeps", "AeA"): "diagonal", ("Aeps", "AeAs"): "diagonal",
    ("Aeps", "AAe"): "tridiagonal", ("Aeps", "AsAe"): "tridiagonal",
    ("Aeps", "AsA"): "itridiagonal_subneg",
    ("Aeps", "AAs"): "itridiagonal_superneg",
}

_FORM_BUILDERS = {
    "diagonal": diagonal_form,
    "tridiagonal": tridiagonal_form,
    "itridiagonal_subneg": itridiagonal_subneg_form,
    "itridiagonal_superneg": itridiagonal_superneg_form,
}


@dataclass(frozen=True)
class RepCell:
    basis: str
    op: str
    form: str
    passed: bool
    matrix: ExactMatrix


def verify_rep_matrices(ctx: CubeContext, bases: SixBases) -> List[RepCell]:
    """The full 6 bases x 3 operators grid against the closed forms."""
    d = bases.module.d
    ops = {"A": ctx.A, "Astar": ctx.Astar, "Aeps": ctx.Aeps}
    cells = []
    for label in BASIS_LABELS:
        solver = BasisSolver(list(bases[label]))
        for op_name in OPERATOR_LABELS:
            form = REP_FORMS[(op_name, label)]
            got = representation_matrix(ops[op_name], list(bases[label]),
                                        solver)
            cells.append(RepCell(basis=label, op=op_name, form=form,
                                 passed=got == _FORM_BUILDERS[form](d),
                                 matrix=got))
    return cells


# -- inner products ------------------------------------------------------------------


@dataclass(frozen=True)
class GridCheck:
    check_id: str
    i: int
    j: int
    passed: bool


def _seed_scalars(mod: IrreducibleModule) -> Dict[str, GaussRat]:
    u, us, ue = mod.u, mod.u_star, mod.u_eps
    return {
        "u|u": inner(u, u), "u*|u*": inner(us, us), "ue|ue": inner(ue, ue),
        "u|u*": inner(u, us), "u*|u": inner(us, u),
        "u|ue": inner(u, ue), "ue|u": inner(ue, u),
        "u*|ue": inner(us, ue), "ue|u*": inner(ue, us),
    }


# (first basis, second basis) -> (formula kind, seed scalar key); the value of
# <first[i], second[j]> is the kind evaluated at (i, j) times the seed scalar.
INNER_FORMULAS = {
    ("AsA", "AsA"): ("delta", "u|u"),
    ("AeA", "AeA"): ("delta", "u|u"),
    ("AeAs", "AeAs"): ("delta", "u*|u*"),
    ("AAs", "AAs"): ("delta", "u*|u*"),
    ("AAe", "AAe"): ("delta", "ue|ue"),
    ("AsAe", "AsAe"): ("delta", "ue|ue"),
    ("AAe", "AAs"): ("delta_ipow", "ue|u*"),
    ("AsA", "AsAe"): ("delta_ipow", "u|ue"),
    ("AeAs", "AeA"): ("delta_ipow", "u*|u"),
    ("AAs", "AsA"): ("f", "u*|u"),
    ("AsAe", "AeAs"): ("f", "ue|u*"),
    ("AeA", "AAe"): ("f", "u|ue"),
    ("AAs", "AsAe"): ("f_ipow_j", "u*|ue"),
    ("AsAe", "AeA"): ("f_ipow_j", "ue|u"),
    ("AeA", "AAs"): ("f_ipow_j", "u|u*"),
    ("AAe", "AsA"): ("f_ipow_i", "ue|u"),
    ("AsA", "AeAs"): ("f_ipow_i", "u|u*"),
    ("AeAs", "AAe"): ("f_ipow_i", "u*|ue"),
    ("AAs", "AeAs"): ("f_ipow_negij", "u*|u*"),
    ("AsAe", "AAe"): ("f_ipow_negij", "ue|ue"),
    ("AeA", "AsA"): ("f_ipow_negij", "u|u"),
}


def expected_inner(kind: str, i: int, j: int, d: int, scalar: GaussRat,
                   phi: PhiMatrix) -> GaussRat:
    binom = math.comb(d, i)
    if kind == "delta":
        if i != j:
            return GaussRat(0)
        return scalar * Fraction(binom, 2 ** d)
    if kind == "delta_ipow":
        if i != j:
            return GaussRat(0)
        return scalar * (IUNIT ** i) * binom * (GaussRat(1, 1) ** (-d))
    pair = binom * math.comb(d, j) * phi.f(i, j)
    if kind == "f":
        return scalar * Fraction(pair, 2 ** d)
    if kind == "f_ipow_j":
        return scalar * Fraction(pair, 2 ** d) * IUNIT ** j
    if kind == "f_ipow_i":
        return scalar * Fraction(pair, 2 ** d) * IUNIT ** i
    if kind == "f_ipow_negij":
        return scalar * pair * (IUNIT ** (-i - j)) * (GaussRat(2, -2) ** (-d))
    raise ValueError(f"unknown formula kind {kind}")


def verify_inner_products(bases: SixBases, phi: PhiMatrix) -> List[GridCheck]:
    """Every pairing of the closed-form inner-product theorems, all (i, j)."""
    mod = bases.module
    d = mod.d
    scal = _seed_scalars(mod)
    checks = []
    for (x, y), (kind, key) in INNER_FORMULAS.items():
        scalar = scal[key]
        for i in range(d + 1):
            for j in range(d + 1):
                got = inner(bases[x][i], bases[y][j])
                want = expected_inner(kind, i, j, d, scalar, phi)
                checks.append(GridCheck(f"inner[{x}|{y}]", i, j, got == want))
    checks.extend(_verify_slice_proportionality(bases))
    return checks


def _verify_slice_proportionality(bases: SixBases) -> List[GridCheck]:
    """The slicewise proportionality between bases sharing an idempotent
    family: each AAe (resp. AsA, AeAs) vector is an explicit multiple of the
    matching AAs (resp. AsAe, AeA) vector."""
    mod = bases.module
    d = mod.d
    scal = _seed_scalars(mod)
    omi_d = GaussRat(1, -1) ** d
    triples = (
        ("AAe", "AAs", scal["ue|u*"] / scal["u*|u*"]),
        ("AsA", "AsAe", scal["u|ue"] / scal["ue|ue"]),
        ("AeAs", "AeA", scal["u*|u"] / scal["u|u"]),
    )
    checks = []
    for x, y, factor in triples:
        for i in range(d + 1):
            coeff = (IUNIT ** i) * omi_d * factor
            ok = bases[x][i] == bases[y][i].scale(coeff)
            checks.append(GridCheck(f"proportional[{x}|{y}]", i, i, ok))
    return checks


# -- transition matrices ----------------------------------------------------------------


# (src, dst) -> (i-power pattern over the Phi grid | D1 | D2, prefactor kind)
# Prefactor kinds: ("unit", sign_exp) for (1 -+ i)^(+-d) alone, or
# (seed_key, norm_key, extra) with extra in {None, "omi", "opi"}.
TRANSITION_TABLE = {
    ("AsA", "AeA"): ("neg_sum", ("unit", "omi_inv")),
    ("AsA", "AeAs"): ("neg_i", ("u*|u", "u|u", None)),
    ("AsA", "AAs"): ("zero", ("u*|u", "u|u", None)),
    ("AsA", "AAe"): ("j", ("ue|u", "u|u", None)),
    ("AsA", "AsAe"): ("D2", ("ue|u", "u|u", "opi")),
    ("AeA", "AsA"): ("sum", ("unit", "opi_inv")),
    ("AeA", "AeAs"): ("D1", ("u*|u", "u|u", "omi")),
    ("AeA", "AAs"): ("neg_j", ("u*|u", "u|u", None)),
    ("AeA", "AAe"): ("zero", ("ue|u", "u|u", None)),
    ("AeA", "AsAe"): ("i", ("ue|u", "u|u", None)),
    ("AeAs", "AsA"): ("j", ("u|u*", "u*|u*", None)),
    ("AeAs", "AeA"): ("D2", ("u|u*", "u*|u*", "opi")),
    ("AeAs", "AAs"): ("neg_sum", ("unit", "omi_inv")),
    ("AeAs", "AAe"): ("neg_i", ("ue|u*", "u*|u*", None)),
    ("AeAs", "AsAe"): ("zero", ("ue|u*", "u*|u*", None)),
    ("AAs", "AsA"): ("zero", ("u|u*", "u*|u*", None)),
    ("AAs", "AeA"): ("i", ("u|u*", "u*|u*", None)),
    ("AAs", "AeAs"): ("sum", ("unit", "opi_inv")),
    ("AAs", "AAe"): ("D1", ("ue|u*", "u*|u*", "omi")),
    ("AAs", "AsAe"): ("neg_j", ("ue|u*", "u*|u*", None)),
    ("AAe", "AsA"): ("neg_i", ("u|ue", "ue|ue", None)),
    ("AAe", "AeA"): ("zero", ("u|ue", "ue|ue", None)),
    ("AAe", "AeAs"): ("j", ("u*|ue", "ue|ue", None)),
    ("AAe", "AAs"): ("D2", ("u*|ue", "ue|ue", "opi")),
    ("AAe", "AsAe"): ("neg_sum", ("unit", "omi_inv")),
    ("AsAe", "AsA"): ("D1", ("u|ue", "ue|ue", "omi")),
    ("AsAe", "AeA"): ("neg_j", ("u|ue", "ue|ue", None)),
    ("AsAe", "AeAs"): ("zero", ("u*|ue", "ue|ue", None)),
    ("AsAe", "AAs"): ("i", ("u*|ue", "ue|ue", None)),
    ("AsAe", "AAe"): ("sum", ("unit", "opi_inv")),
}

_POWER_PATTERNS = {
    "zero": lambda i, j: 0, "i": lambda i, j: i, "j": lambda i, j: j,
    "neg_i": lambda i, j: -i, "neg_j": lambda i, j: -j,
    "sum": lambda i, j: i + j, "neg_sum": lambda i, j: -i - j,
}


def transition_formula(src: str, dst: str, mod: IrreducibleModule,
                       phi: PhiMatrix) -> ExactMatrix:
    """Closed-form transition matrix from basis src to basis dst."""
    d = mod.d
    if src == dst:
        return ExactMatrix.identity(d + 1)
    pattern, prefactor = TRANSITION_TABLE[(src, dst)]
    scal = _seed_scalars(mod)
    opi, omi = GaussRat(1, 1), GaussRat(1, -1)
    if prefactor[0] == "unit":
        scale = opi ** (-d) if prefactor[1] == "opi_inv" else omi ** (-d)
    else:
        key, norm, extra = prefactor
        scale = scal[key] / scal[norm]
        if extra == "omi":
            scale = scale * omi ** d
        elif extra == "opi":
            scale = scale * opi ** d
    if pattern == "D1":
        return ExactMatrix.diagonal([scale * IUNIT ** k
                                     for k in range(d + 1)])
    if pattern == "D2":
        return ExactMatrix.diagonal([scale * IUNIT ** (-k)
                                     for k in range(d + 1)])
    power = _POWER_PATTERNS[pattern]
    return ExactMatrix([[scale * (IUNIT ** power(i, j)) * phi.phi(i, j)
                         for j in range(d + 1)] for i in range(d + 1)])


@dataclass(frozen=True)
class TransitionCell:
    src: str
    dst: str
    passed: bool
    computed: ExactMatrix
    formula: ExactMatrix


@dataclass(frozen=True)
class TransitionReport:
    module: IrreducibleModule
    cells: Dict[Tuple[str, str], TransitionCell]
    coherence: Tuple[IdentityCheck, ...]

    def all_passed(self) -> bool:
        return (all(c.passed for c in self.cells.values())
                and all(c.passed for c in self.coherence))

    def failures(self) -> List[str]:
        out = [f"{s}->{t}" for (s, t), c in self.cells.items() if not c.passed]
        out.extend(c.identity for c in self.coherence if not c.passed)
        return out


def transition_matrices(bases: SixBases, phi: PhiMatrix) -> TransitionReport:
    """All 36 transitions: direct change-of-basis vs closed form, then
    inverse and composition coherence on the computed matrices."""
    mod = bases.module
    solvers = {label: BasisSolver(list(bases[label]))
               for label in BASIS_LABELS}
    computed = {}
    for src in BASIS_LABELS:
        for dst in BASIS_LABELS:
            k = mod.d + 1
            cols = [solvers[src].coords(v) for v in bases[dst]]
            computed[(src, dst)] = ExactMatrix(
                [[cols[j][a] for j in range(k)] for a in range(k)])
    cells = {}
    for key, mat in computed.items():
        formula = transition_formula(key[0], key[1], mod, phi)
        cells[key] = TransitionCell(src=key[0], dst=key[1],
                                    passed=mat == formula,
                                    computed=mat, formula=formula)
    ident = ExactMatrix.identity(mod.d + 1)
    coherence = []
    for a in BASIS_LABELS:
        for b in BASIS_LABELS:
            if a < b:
                ok = computed[(a, b)] @ computed[(b, a)] == ident
                coherence.append(check_true(f"transition_inverse[{a}|{b}]", ok))
    for a in BASIS_LABELS:
        for b in BASIS_LABELS:
            for c in BASIS_LABELS:
                ok = (computed[(a, b)] @ computed[(b, c)]
                      == computed[(a, c)])
                coherence.append(
                    check_true(f"transition_composition[{a}|{b}|{c}]", ok))
    return TransitionReport(module=mod, cells=cells,
                            coherence=tuple(coherence))


# -- Leonard triple recognizer --------------------------------------------------------------


def _is_irreducible_tridiagonal(m: ExactMatrix) -> bool:
    n = m.rows
    for r in range(n):
        for c in range(n):
            if abs(r - c) > 1 and m[r, c]:
                return False
    return all(m[k + 1, k] and m[k, k + 1] for k in range(n - 1))


@dataclass(frozen=True)
class LeonardVerdict:
    verdict: str  # "true" | "false" | "unverifiable"
    reason: str
    eigenvalue_order: Tuple[int, ...]
    tridiagonal: Dict[Tuple[int, int], bool]
    bases: Dict[int, Tuple[ExactVector, ...]]
    rep_matrices: Dict[Tuple[int, int], ExactMatrix]


def is_leonard_triple(b0: ExactMatrix, b1: ExactMatrix,
                      b2: ExactMatrix) -> LeonardVerdict:
    """Decide whether an ordered triple acts as a Leonard triple.

    Eigenvalues are searched in the integer candidate set {d, d-2, ..., -d}
    (d = size - 1); each operator's eigenbasis is ordered by descending
    eigenvalue and the other two operators are represented in it and tested
    for irreducible tridiagonality.  If some operator's candidate eigenspaces
    do not span, the verdict is "unverifiable" (a field limitation, not a
    disproof).
    """
    ops = (b0, b1, b2)
    n = b0.rows
    if any(m.rows != n or m.cols != n for m in ops):
        raise ValueError("operators must be square and of equal size")
    d = n - 1
    candidates = tuple(d - 2 * k for k in range(d + 1))
    bases = {}
    for t, m in enumerate(ops):
        vecs = []
        for theta in candidates:
            shifted = m - ExactMatrix.identity(n).scale(theta)
            vecs.extend(kernel_basis(shifted))
        if len(vecs) != n:
            return LeonardVerdict(
                verdict="unverifiable",
                reason=f"operator {t}: eigenspaces over the candidate set "
                       f"span dimension {len(vecs)} of {n}",
                eigenvalue_order=candidates, tridiagonal={}, bases={},
                rep_matrices={})
        bases[t] = tuple(vecs)
    tri = {}
    reps = {}
    for t in range(3):
        solver = BasisSolver(list(bases[t]))
        for o in range(3):
            if o == t:
                continue
            rep = representation_matrix(ops[o], list(bases[t]), solver)
            reps[(t, o)] = rep
            tri[(t, o)] = _is_irreducible_tridiagonal(rep)
    ok = all(tri.values())
    return LeonardVerdict(
        verdict="true" if ok else "false",
        reason="all six off-diagonal representations are irreducible "
               "tridiagonal" if ok else
               "failed: " + ", ".join(f"op{o} in eigenbasis of op{t}"
                                      for (t, o), v in tri.items() if not v),
        eigenvalue_order=candidates, tridiagonal=tri, bases=bases,
        rep_matrices=reps)


def module_triple(ctx: CubeContext, bases: SixBases):
    """The three operators restricted to the module, as matrices in the
    basis diagonalizing the dual adjacency operator."""
    basis = list(bases["AsA"])
    solver = BasisSolver(basis)
    return tuple(representation_matrix(op, basis, solver)
                 for op in (ctx.A, ctx.Astar, ctx.Aeps))


# -- per-module report ------------------------------------------------------------------------


def module_report(ctx: CubeContext, bases: SixBases,
                  phi: Optional[PhiMatrix] = None) -> dict:
    mod = bases.module
    phi = phi or phi_matrix(mod.d)
    rep_cells = verify_rep_matrices(ctx, bases)
    rep_json: Dict[str, dict] = {}
    for cell in rep_cells:
        rep_json.setdefault(cell.basis, {})[cell.op] = {
            "form": cell.form, "passed": cell.passed}
    inner_checks = verify_inner_products(bases, phi)
    inner_json: Dict[str, bool] = {}
    for c in inner_checks:
        inner_json[c.check_id] = inner_json.get(c.check_id, True) and c.passed
    trans = transition_matrices(bases, phi)
    verdict = is_leonard_triple(*module_triple(ctx, bases))
    return {
        "D": ctx.D,
        "r": mod.r,
        "module_index": mod.index,
        "rep_matrices": rep_json,
        "inner_products": inner_json,
        "transitions": {"cells_checked": len(trans.cells),
                        "failures": sorted(trans.failures())},
        "leonard_triple": verdict.verdict,
    }
