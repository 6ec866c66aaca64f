"""Invariant and equivariant (Cartan model) chain-level cohomology.

The invariant subcomplex of a module M is the simultaneous kernel of the
Lie derivatives, with the restricted differential and an action of the
invariant multivectors by composite contractions.  The Cartan model is
the invariant part of S(g*) ⊗ M with differential

    a ⊗ m  |->  a ⊗ dm + sum_k (u^k a) ⊗ i_k m,

where the contraction term carries structural-deletion flavor (plus sign
relative to the module's own i); this is the variant under which the
twist embedding into the basic Weil subcomplex is a chain map.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .complexes import (
    ChainMap,
    Complex,
    GradedSpace,
    LinMap,
    SubcomplexError,
    Truncation,
    induced_map,
    subcomplex,
)
from .lie import LieAlgebra, RepMatrices, adjoint_matrices, invariant_vectors
from .linalg import Matrix, kernel_basis, vec, vstack
from .modules import (
    KgModule,
    derivation_on_lambda,
    derivation_on_sym,
    lambda_label,
    lambda_monomials,
    sym_label,
    sym_monomials,
    sym_multiply,
)

Q0 = Fraction(0)


# ---------------------------------------------------------------------------
# Invariants of the standard auxiliary representations
# ---------------------------------------------------------------------------


def invariant_multivectors(g: LieAlgebra, p: int) -> list:
    """Basis of the adjoint invariants of the p-th exterior power of g."""
    ad, _ = adjoint_matrices(g)
    mats = derivation_on_lambda(list(ad.matrices), p)
    monos = lambda_monomials(g.dim, p)
    if not monos:
        return []
    if not mats or all(m.is_zero() for m in mats):
        return [tuple(Q0 if i != j else Fraction(1) for i in range(len(monos)))
                for j in range(len(monos))]
    return kernel_basis(vstack(mats))


def sym_invariants(g: LieAlgebra, a: int) -> list:
    """Basis of coadjoint invariants of S^a(g*)."""
    _, coad = adjoint_matrices(g)
    mats = derivation_on_sym(list(coad.matrices), a)
    monos = sym_monomials(g.dim, a)
    if not monos:
        return []
    if not mats or all(m.is_zero() for m in mats):
        return [tuple(Q0 if i != j else Fraction(1) for i in range(len(monos)))
                for j in range(len(monos))]
    return kernel_basis(vstack(mats))


@dataclass(frozen=True)
class MultivectorElement:
    """An invariant multivector: degree, coefficients over the monomial basis."""

    degree: int
    coeffs: tuple
    label: str


def invariant_multivector_basis(g: LieAlgebra, min_degree: int = 1) -> list:
    """All invariant multivectors of degree >= min_degree, by degree then index."""
    out = []
    for p in range(min_degree, g.dim + 1):
        monos = lambda_monomials(g.dim, p)
        for i, v in enumerate(invariant_multivectors(g, p)):
            terms = " + ".join(
                f"{c}·{lambda_label(m, g.basis_labels).replace('*', '')}"
                for c, m in zip(v, monos) if c
            )
            out.append(MultivectorElement(p, tuple(v), terms or "0"))
    return out


def sym_invariant_complex(g: LieAlgebra, N: int):
    """(S(g*))^g as a complex with zero differential, degrees 0..N.

    Returns (Complex, vectors) where vectors[2a] lists coordinate vectors
    over the degree-a symmetric monomial basis.
    """
    labels = {}
    vectors = {}
    for a in range(0, N // 2 + 1):
        inv = sym_invariants(g, a)
        if inv:
            vectors[2 * a] = inv
            labels[2 * a] = tuple(f"S^g[{2*a},{i}]" for i in range(len(inv)))
    space = GradedSpace(labels, lo=0, hi=N)
    cx = Complex(space, LinMap.zero(space, space, 1), complete=False, check=False)
    return cx, vectors


# ---------------------------------------------------------------------------
# Invariant subcomplex with its multivector action
# ---------------------------------------------------------------------------


@dataclass
class InvariantModel:
    """(M)^g with its restricted differential and contraction action."""

    module: KgModule
    complex: Complex
    inclusion: ChainMap
    vectors: dict  # degree -> ambient coordinate vectors
    multivectors: list  # MultivectorElement, positive degrees
    actions: list  # LinMap on the subcomplex, one per multivector

    def action_of(self, idx: int) -> LinMap:
        return self.actions[idx]


def invariant_subcomplex(M: KgModule, with_actions: bool = True) -> InvariantModel:
    """Restrict M to the simultaneous kernel of all Lie derivatives.

    The restricted differential is verified to exist; each invariant
    multivector acts by the composite contraction, verified to commute
    with the restricted differential in the graded sense
    d∘a = (-1)^p a∘d (p the multivector degree).  Pass with_actions=False
    to skip building the contraction action (cheaper for large modules).
    """
    g = M.g
    vectors: dict = {}
    top = M.max_usable
    for deg in M.space.degrees():
        if deg > top:
            continue
        n_dim = M.space.dim(deg)
        stacked = vstack([op.block(deg) for op in M.L_ops])
        vectors[deg] = kernel_basis(stacked) if n_dim else []
    sub, incl = subcomplex(
        _restrict_complex(M, top), {d: v for d, v in vectors.items() if v},
        label_prefix=f"({M.name})^g",
    )
    multis = invariant_multivector_basis(g) if with_actions else []
    actions = []
    for mv in multis:
        monos = lambda_monomials(g.dim, mv.degree)
        ambient_op = M.contraction_of_multivector(mv.coeffs, monos)
        act = induced_map(ambient_op, vectors, vectors, sub.space, sub.space)
        sign = -1 if mv.degree % 2 else 1
        lhs = sub.d.compose(act)
        rhs = act.compose(sub.d).scale(sign)
        check_degs = [d for d in sub.space.degrees()
                      if M.complete or d <= top - 1]
        if not lhs.equal_on(rhs, check_degs):
            raise SubcomplexError(
                f"invariant multivector action fails graded commutation with d "
                f"for {mv.label}"
            )
        actions.append(act)
    return InvariantModel(M, sub, incl, vectors, multis, actions)


def _restrict_complex(M: KgModule, top: int) -> Complex:
    """View of M's complex cut at the trustworthy band (no-op when complete)."""
    if M.complete or top >= M.space.hi:
        return M.complex
    labels = {d: M.space.labels(d) for d in M.space.degrees() if d <= top}
    space = GradedSpace(labels, lo=M.space.lo, hi=top)
    blocks = {d: m for d, m in M.d.blocks.items() if d <= top - 1}
    return Complex(space, LinMap(space, space, 1, blocks), complete=False, check=False)


# ---------------------------------------------------------------------------
# Cartan model
# ---------------------------------------------------------------------------


@dataclass
class CartanModel:
    """(S(g*) ⊗ M)^g with the equivariant differential and S-module structure."""

    module: KgModule
    g: LieAlgebra
    N: int
    complex: Complex
    ambient: dict  # degree -> list of (sym_exps, m_degree, m_index)
    vectors: dict  # degree -> invariant vectors in ambient coordinates
    s_invariants: dict  # cohomological degree 2a -> list of S^a coefficient vectors

    def ambient_dim(self, deg: int) -> int:
        return len(self.ambient.get(deg, ()))

    def s_action(self, sym_degree: int, coeffs: Sequence) -> LinMap:
        """Multiplication by an S^sym_degree element on the model (shift 2a)."""
        g_dim = self.g.dim
        monos = sym_monomials(g_dim, sym_degree)
        if len(coeffs) != len(monos):
            raise ValueError("coefficient vector does not match the monomial basis")
        shift = 2 * sym_degree
        blocks = {}
        for deg, ents in self.ambient.items():
            tgt_deg = deg + shift
            tgt_ents = self.ambient.get(tgt_deg)
            if tgt_ents is None:
                continue
            tgt_index = {e: i for i, e in enumerate(tgt_ents)}
            src_vecs = self.vectors.get(deg, [])
            if not src_vecs:
                continue
            amb = {}
            for col, (exps, q, mi) in enumerate(ents):
                for smono, c in zip(monos, coeffs):
                    if not c:
                        continue
                    key = (sym_multiply(exps, smono), q, mi)
                    row = tgt_index.get(key)
                    if row is not None:
                        amb[(row, col)] = amb.get((row, col), Q0) + c
            m = Matrix(len(tgt_ents), len(ents), amb)
            cols = []
            for v in src_vecs:
                img = m.apply(v)
                from .linalg import express_in_span

                co = express_in_span(self.vectors.get(tgt_deg, []), img,
                                     dim=len(tgt_ents))
                if co is None:
                    raise SubcomplexError(
                        f"S-multiplication leaves the invariants at degree {deg}"
                    )
                cols.append(co)
            blk = Matrix.from_columns(cols, nrows=len(self.vectors.get(tgt_deg, [])))
            if not blk.is_zero():
                blocks[deg] = blk
        return LinMap(self.complex.space, self.complex.space, shift, blocks)


def cartan_model(M: KgModule, trunc: Truncation) -> CartanModel:
    """Build the equivariant model of M up to total degree trunc.max_degree."""
    g = M.g
    n = g.dim
    N = trunc.max_degree
    if not M.complete:
        raise ValueError("the equivariant model needs a complete (untruncated) module")
    lo = M.space.lo
    _, coad = adjoint_matrices(g)

    sym_bases = {}
    coad_sym = {}
    max_a = max(0, (N - lo) // 2)
    for a in range(max_a + 1):
        sym_bases[a] = sym_monomials(n, a)
        coad_sym[a] = derivation_on_sym(list(coad.matrices), a)

    ambient: dict = {}
    labels: dict = {}
    for deg in range(lo, N + 1):
        ents = []
        labs = []
        for a in range((deg - lo) // 2 + 1):
            q = deg - 2 * a
            if M.space.dim(q) == 0:
                continue
            for exps in sym_bases[a]:
                s_lbl = sym_label(exps, g.basis_labels)
                for mi, m_lbl in enumerate(M.space.labels(q)):
                    ents.append((exps, q, mi))
                    labs.append(f"{s_lbl}⊗{m_lbl}")
        if ents:
            ambient[deg] = ents
            labels[deg] = tuple(labs)

    # invariants of the diagonal action per total degree
    vectors: dict = {}
    for deg, ents in ambient.items():
        dim = len(ents)
        index = {e: i for i, e in enumerate(ents)}
        stacked_rows = []
        for k in range(n):
            amb: dict = {}
            for col, (exps, q, mi) in enumerate(ents):
                a = sum(exps)
                smat = coad_sym[a][k]
                scol_idx = sym_bases[a].index(exps)
                for (r_, c_), v in smat.entries.items():
                    if c_ == scol_idx:
                        row = index.get((sym_bases[a][r_], q, mi))
                        if row is not None:
                            amb[(row, col)] = amb.get((row, col), Q0) + v
                lmat = M.L_ops[k].block(q)
                for (r_, c_), v in lmat.entries.items():
                    if c_ == mi:
                        row = index.get((exps, q, r_))
                        if row is not None:
                            amb[(row, col)] = amb.get((row, col), Q0) + v
            stacked_rows.append(Matrix(dim, dim, amb))
        vectors[deg] = kernel_basis(vstack(stacked_rows))

    # ambient equivariant differential
    amb_space = GradedSpace(labels, lo=lo, hi=N)
    d_blocks = {}
    for deg, ents in ambient.items():
        tgt = ambient.get(deg + 1)
        if tgt is None:
            continue
        tgt_index = {e: i for i, e in enumerate(tgt)}
        amb: dict = {}
        for col, (exps, q, mi) in enumerate(ents):
            dmat = M.d.block(q)
            for (r_, c_), v in dmat.entries.items():
                if c_ == mi:
                    row = tgt_index.get((exps, q + 1, r_))
                    if row is not None:
                        amb[(row, col)] = amb.get((row, col), Q0) + v
            for k in range(n):
                imat = M.i_ops[k].block(q)
                bumped = list(exps)
                bumped[k] += 1
                key_exps = tuple(bumped)
                for (r_, c_), v in imat.entries.items():
                    if c_ == mi:
                        row = tgt_index.get((key_exps, q - 1, r_))
                        if row is not None:
                            amb[(row, col)] = amb.get((row, col), Q0) + v
        m = Matrix(len(tgt), len(ents), amb)
        if not m.is_zero():
            d_blocks[deg] = m
    amb_d = LinMap(amb_space, amb_space, 1, d_blocks)
    amb_complex = Complex(amb_space, amb_d, complete=False, check=False)

    sub, _ = subcomplex(amb_complex, {d: v for d, v in vectors.items() if v},
                        label_prefix=f"({M.name})_g")
    bad = sub.d_squared_defect()
    if bad is not None:
        raise SubcomplexError(f"equivariant differential fails d^2 = 0 at {bad}")

    s_inv = {}
    for a in range(max_a + 1):
        inv = sym_invariants(g, a)
        if inv:
            s_inv[2 * a] = inv

    return CartanModel(
        module=M,
        g=g,
        N=N,
        complex=sub,
        ambient=ambient,
        vectors={d: v for d, v in vectors.items() if v},
        s_invariants=s_inv,
    )


def induced_action_on_cohomology(M: KgModule, deg: int):
    """Matrices of the Lie derivatives on H^deg(M) (they vanish: L = [d, i])."""
    from .complexes import cohomology_representatives
    from .linalg import express_in_span

    reps, boundaries = cohomology_representatives(M.complex, deg)
    span = list(reps) + list(boundaries)
    out = []
    for L in M.L_ops:
        cols = []
        for r in reps:
            img = L.apply(deg, r)
            co = express_in_span(span, img, dim=M.space.dim(deg))
            if co is None:
                raise ValueError("Lie derivative does not preserve cocycles")
            cols.append(vec(co[: len(reps)]))
        out.append(Matrix.from_columns(cols, nrows=len(reps)))
    return out
