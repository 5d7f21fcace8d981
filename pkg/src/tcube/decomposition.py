"""Decomposition of the standard module into irreducible T-modules.

Seeding strategy: the adjacency operator splits as A = L + R where L lowers
the distance slice by one and R raises it (the flat part vanishes because the
cube has no odd cycles).  For each endpoint r the kernel of L restricted to
slice r gives one seed per module; seeds are exactly orthogonalized, and the
module attached to a seed w is span{w, Rw, R^2 w, ...}.  Every structural
claim used downstream (thinness, nonvanishing windows, closure, orthogonality,
dimension count) is re-verified on the constructed data, so the seeding
routine itself does not have to be trusted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Dict, Tuple

import numpy as np

from .cube import CubeContext
from .linalg import (ExactMatrix, ExactVector, gram_schmidt, inner,
                     kernel_basis)
from .report import check_true
from .scalar import GaussRat


class InvariantViolation(RuntimeError):
    """A constructed module failed one of its structural invariants."""


class InfeasibleTargets(ValueError):
    """Requested seed inner products cannot be realized at all."""


class FieldExtensionRequired(ValueError):
    """Targets are feasible over C but need a square root outside Q(i)."""


def _masked_adjacency(ctx: CubeContext, shift: int) -> ExactMatrix:
    mask = np.array((ctx.dist[:, None] + shift) == ctx.dist[None, :],
                    dtype=object)
    re = ctx.A._re * mask
    return ExactMatrix._raw(re, np.zeros_like(re), 1, reduce=False)


def lowering_operator(ctx: CubeContext) -> ExactMatrix:
    """L = sum_i Estar_{i-1} A Estar_i; moves slice k to slice k-1."""
    return _masked_adjacency(ctx, +1)


def raising_operator(ctx: CubeContext) -> ExactMatrix:
    """R = sum_i Estar_{i+1} A Estar_i; L + R = A exactly."""
    return _masked_adjacency(ctx, -1)


def multiplicity(D: int, r: int) -> int:
    """Number of irreducible modules with endpoint r: C(D,r) - C(D,r-1)."""
    if not 0 <= 2 * r <= D:
        raise ValueError(f"endpoint r={r} out of range for D={D}")
    low = math.comb(D, r - 1) if r >= 1 else 0
    return math.comb(D, r) - low


def proportional(v: ExactVector, w: ExactVector) -> bool:
    """True when v = c*w for some scalar c (zero vectors allowed)."""
    if w.is_zero():
        return v.is_zero()
    p = w.support()[0]
    c = v[p] / w[p]
    return v == w.scale(c)


@dataclass(frozen=True)
class IrreducibleModule:
    """One irreducible T-module: endpoint r, diameter d = D - 2r, the three
    seeds and a basis with one vector per distance slice."""

    r: int
    d: int
    index: int
    u_star: ExactVector
    u: ExactVector
    u_eps: ExactVector
    slice_basis: Tuple[ExactVector, ...]

    @property
    def dim(self) -> int:
        return self.d + 1

    def seed_inner(self, first: str, second: str) -> GaussRat:
        seeds = {"u": self.u, "u*": self.u_star, "ue": self.u_eps}
        return inner(seeds[first], seeds[second])

    def to_json(self) -> dict:
        return {"r": self.r, "d": self.d, "index": self.index, "dim": self.dim}


@dataclass(frozen=True)
class Decomposition:
    D: int
    modules: Tuple[IrreducibleModule, ...]
    multiplicities: Dict[int, int]

    def to_json(self) -> dict:
        return {
            "D": self.D,
            "modules": [m.to_json() for m in self.modules],
            "multiplicities": {str(r): c
                               for r, c in sorted(self.multiplicities.items())},
        }


def _fail(r, index, what):
    raise InvariantViolation(f"module r={r} index={index}: {what}")


def _embed(ctx: CubeContext, small: ExactVector, indices) -> ExactVector:
    entries = [GaussRat(0)] * ctx.n
    for k, idx in enumerate(indices):
        entries[idx] = small[k]
    return ExactVector(entries)


def _check_images_thin(ctx, family, basis, r, d, index, label):
    """dim(family_i W) <= 1 with the nonvanishing window r <= i <= r+d."""
    for i in range(ctx.D + 1):
        images = [family[i].matvec(b) for b in basis]
        nonzero = [v for v in images if not v.is_zero()]
        in_window = r <= i <= r + d
        if in_window and not nonzero:
            _fail(r, index, f"{label}_{i} W vanished inside the window")
        if not in_window and nonzero:
            _fail(r, index, f"{label}_{i} W nonzero outside the window")
        for v in nonzero[1:]:
            if not proportional(v, nonzero[0]):
                _fail(r, index, f"dim({label}_{i} W) > 1 (not thin)")


def _validate_module(ctx: CubeContext, mod: IrreducibleModule,
                     L: ExactMatrix) -> None:
    r, d, index = mod.r, mod.d, mod.index
    basis = mod.slice_basis
    if d != ctx.D - 2 * r:
        _fail(r, index, "diameter is not D - 2r")
    for k, b in enumerate(basis):
        if b.is_zero():
            _fail(r, index, f"slice basis vector {k} is zero")
        if any(int(ctx.dist[p]) != r + k for p in b.support()):
            _fail(r, index, f"slice basis vector {k} leaves slice {r + k}")
    # closure under A = L + R along the slice ladder
    if not L.matvec(basis[0]).is_zero():
        _fail(r, index, "seed not annihilated by the lowering operator")
    for k in range(1, d + 1):
        img = L.matvec(basis[k])
        if img.is_zero() or not proportional(img, basis[k - 1]):
            _fail(r, index, f"L does not map slice {k} onto slice {k - 1}")
    top = (ctx.A.matvec(basis[d]) - L.matvec(basis[d]))
    if not top.is_zero():
        _fail(r, index, "raising the top slice does not vanish")
    # closure under Astar is automatic for slice-supported vectors; verify.
    for k, b in enumerate(basis):
        if ctx.Astar.matvec(b) != b.scale(ctx.D - 2 * (r + k)):
            _fail(r, index, f"Astar does not scale slice {k}")
    for seed, name in ((mod.u, "u"), (mod.u_eps, "ue")):
        if seed.is_zero():
            _fail(r, index, f"seed {name} is zero")
    for a, b in (("u*", "u"), ("u", "ue"), ("ue", "u*")):
        if not mod.seed_inner(a, b):
            _fail(r, index, f"<{a},{b}> vanished")
    _check_images_thin(ctx, ctx.E, basis, r, d, index, "E")
    _check_images_thin(ctx, ctx.Eeps, basis, r, d, index, "Eeps")


def _check_orthogonal_sum(ctx: CubeContext, modules) -> None:
    vectors = [b for m in modules for b in m.slice_basis]
    if len(vectors) != ctx.n:
        raise InvariantViolation(
            f"module dimensions sum to {len(vectors)}, expected {ctx.n}")
    stacked = ExactMatrix([v.entries() for v in vectors])
    gram = stacked @ stacked.adjoint()
    owner = [m_idx for m_idx, m in enumerate(modules) for _ in m.slice_basis]
    for a in range(len(vectors)):
        for b in range(len(vectors)):
            if owner[a] != owner[b] and gram[a, b]:
                raise InvariantViolation(
                    f"modules {owner[a]} and {owner[b]} are not orthogonal")


def decompose(ctx: CubeContext) -> Decomposition:
    """Split C^(2^D) into irreducible T-modules and validate every invariant."""
    L = lowering_operator(ctx)
    R = raising_operator(ctx)
    if L + R != ctx.A:
        raise InvariantViolation("L + R differs from A")
    modules = []
    mults = {}
    for r in range(ctx.D // 2 + 1):
        cols = ctx.slice_indices(r)
        rows = ctx.slice_indices(r - 1) if r >= 1 else []
        if rows:
            restricted = ExactMatrix([[ctx.A[y, z] for z in cols]
                                      for y in rows])
        else:
            restricted = ExactMatrix.zeros(0, len(cols))
        seeds_small = kernel_basis(restricted)
        if len(seeds_small) != multiplicity(ctx.D, r):
            raise InvariantViolation(
                f"endpoint {r}: kernel dimension {len(seeds_small)} differs "
                f"from C(D,r) - C(D,r-1) = {multiplicity(ctx.D, r)}")
        seeds = [_embed(ctx, s, cols) for s in seeds_small]
        if len(seeds) > 1:
            seeds = gram_schmidt(seeds)
        else:
            seeds = [s.primitive() for s in seeds]
        d = ctx.D - 2 * r
        for index, u_star in enumerate(seeds):
            basis = [u_star]
            for _ in range(d):
                basis.append(R.matvec(basis[-1]))
            mod = IrreducibleModule(
                r=r, d=d, index=index,
                u_star=u_star,
                u=ctx.E[r].matvec(u_star),
                u_eps=ctx.Eeps[r].matvec(u_star),
                slice_basis=tuple(basis),
            )
            _validate_module(ctx, mod, L)
            modules.append(mod)
        mults[r] = len(seeds)
    _check_orthogonal_sum(ctx, modules)
    return Decomposition(D=ctx.D, modules=tuple(modules), multiplicities=mults)


# -- seed inner products ---------------------------------------------------------


def verify_seed_norms(mod: IrreducibleModule):
    """Norms of the three seeds against the product of their mutual inner
    products, plus positivity of the invariant scalar."""
    one_plus_i_d = GaussRat(1, 1) ** mod.d
    a = mod.seed_inner("u", "u*")
    b = mod.seed_inner("u*", "ue")
    c = mod.seed_inner("ue", "u")
    nu = inner(mod.u, mod.u)
    nus = inner(mod.u_star, mod.u_star)
    nue = inner(mod.u_eps, mod.u_eps)
    scalar = a * b * c * one_plus_i_d
    return [
        check_true("seed_norm_u",
                   nu == one_plus_i_d * a * c / mod.seed_inner("ue", "u*")),
        check_true("seed_norm_ustar",
                   nus == one_plus_i_d * b * a / mod.seed_inner("u", "ue")),
        check_true("seed_norm_ueps",
                   nue == one_plus_i_d * c * b / mod.seed_inner("u*", "u")),
        check_true("seed_product_positive",
                   scalar.is_real() and scalar.re > 0),
    ]


def _rational_sqrt(q: Fraction):
    if q <= 0:
        return None
    num, den = q.numerator, q.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def normalize_seeds(mod: IrreducibleModule, a, b, c) -> IrreducibleModule:
    """Rescale the seeds so that <u,u*> = a, <u*,ue> = b, <ue,u> = c.

    The rescaling follows the existence construction: with delta =
    a*b*c*(1+i)^d / ||c*u*||^2 the three scale factors involve delta^(1/2),
    so the targets are realizable over Q(i) exactly when delta is the square
    of a rational.
    """
    a, b, c = GaussRat._coerce(a), GaussRat._coerce(b), GaussRat._coerce(c)
    if a is None or b is None or c is None:
        raise TypeError("targets must be elements of Q(i)")
    product = a * b * c * GaussRat(1, 1) ** mod.d
    if not product.is_real() or product.re <= 0:
        raise InfeasibleTargets("infeasible targets")
    nus = inner(mod.u_star, mod.u_star).re
    delta = product.re / (c.abs_sq() * nus)
    root = _rational_sqrt(delta)
    if root is None:
        raise FieldExtensionRequired("targets require field extension")
    inv_root = GaussRat(1 / root)
    lam = a * inv_root / mod.seed_inner("u", "u*")
    lam_star = GaussRat(root)
    lam_eps = b.conj() * inv_root / mod.seed_inner("ue", "u*")
    out = replace(
        mod,
        u=mod.u.scale(lam),
        u_star=mod.u_star.scale(lam_star),
        u_eps=mod.u_eps.scale(lam_eps),
        slice_basis=tuple(v.scale(lam_star) for v in mod.slice_basis),
    )
    got = (out.seed_inner("u", "u*"), out.seed_inner("u*", "ue"),
           out.seed_inner("ue", "u"))
    if got != (a, b, c):
        raise InvariantViolation(f"normalization produced {got} instead of "
                                 f"the requested targets")
    return out


# -- subspace conjugation under P ---------------------------------------------------


def verify_module_p_cycle(ctx: CubeContext, mod: IrreducibleModule):
    """P maps E_i W -> Estar_i W -> Eeps_i W -> E_i W inside the window."""
    checks = []
    for i in range(mod.r, mod.r + mod.d + 1):
        e_vec = ctx.E[i].matvec(mod.u_star)
        eps_vec = ctx.Eeps[i].matvec(mod.u_star)
        star_vec = mod.slice_basis[i - mod.r]
        checks.append(check_true(
            f"P_E_to_Estar[{i}]", proportional(ctx.P.matvec(e_vec), star_vec)))
        checks.append(check_true(
            f"P_Estar_to_Eeps[{i}]",
            proportional(ctx.P.matvec(star_vec), eps_vec)))
        checks.append(check_true(
            f"P_Eeps_to_E[{i}]", proportional(ctx.P.matvec(eps_vec), e_vec)))
    return checks
