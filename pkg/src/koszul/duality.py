"""The duality between equivariant and invariant chain-level cohomology.

Given a module M, the verification exhibits the zig-zag

    (M)^g  -->  (W(g) ⊗ M)^g  <--  h((M)_g)

where the left leg is m -> 1⊗1⊗m, the right leg multiplies transgression
lifts against the twist embedding, and both legs are checked to be chain
maps inducing isomorphisms on cohomology through the requested degree.
The functor h tensors a module over the invariant polynomials with the
exterior algebra on the primitives, with the Koszul-style differential
that trades a primitive factor for multiplication by its transgression.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

from .complexes import (
    ChainMap,
    ChainMapReport,
    CohomologyReport,
    Complex,
    GradedSpace,
    LinMap,
    QuasiIsoReport,
    Truncation,
    check_chain_map,
    cohomology,
    quasi_iso_check,
)
from .equivariant import CartanModel, cartan_model, invariant_subcomplex
from .lie import LieAlgebra
from .linalg import Matrix, express_in_span, kernel_basis, vec, vstack
from .modules import (
    KgModule,
    exterior_model,
    lambda_monomials,
    tensor_module,
)
from .transgression import (
    PrimitiveSpace,
    TransgressionData,
    distinguished_transgression,
    primitive_basis,
)
from .weil import TwistData, WeilModule, twist_operators, weil_model

Q0 = Fraction(0)
Q1 = Fraction(1)


# ---------------------------------------------------------------------------
# The functor h
# ---------------------------------------------------------------------------


@dataclass
class KoszulDualComplex:
    """h(A) = (exterior algebra on the primitives) ⊗ A with the trade differential."""

    complex: Complex
    basis: dict  # degree -> list of (primitive index subset, A degree, A index)
    primitive_degrees: list
    source: CartanModel


def h_of(A: CartanModel, T: TransgressionData, trunc: Truncation) -> KoszulDualComplex:
    """Build h(A) up to the truncation degree.

    Differential on (ξ_{j_1}∧...∧ξ_{j_t}) ⊗ a: delete the r-th primitive
    with sign (−1)^{r+1} and multiply a by its transgression, plus
    (−1)^t on the inner differential of a.
    """
    N = trunc.max_degree
    prims = [e.primitive for e in T.entries]
    weights = [p.degree for p in prims]
    mults = []
    for idx, entry in enumerate(T.entries):
        w = T.xi_tilde_sym_degree(idx)
        mults.append(A.s_action(w, entry.xi_tilde))

    subsets = []
    for r in range(len(prims) + 1):
        for J in combinations(range(len(prims)), r):
            deg = sum(weights[j] for j in J)
            if deg <= N:
                subsets.append((J, deg))

    basis: dict = {}
    labels: dict = {}
    A_space = A.complex.space
    for total in range(0, N + 1):
        ents = []
        labs = []
        for J, jdeg in subsets:
            adeg = total - jdeg
            if A_space.dim(adeg) == 0:
                continue
            for ai, albl in enumerate(A_space.labels(adeg)):
                ents.append((J, adeg, ai))
                prefix = "∧".join(f"P{j}" for j in J) or "1"
                labs.append(f"{prefix}⊗{albl}")
        if ents:
            basis[total] = ents
            labels[total] = tuple(labs)
    space = GradedSpace(labels, lo=0, hi=N)
    index = {deg: {e: i for i, e in enumerate(ents)} for deg, ents in basis.items()}

    d_blocks = {}
    for total, ents in basis.items():
        tgt_index = index.get(total + 1, {})
        mat: dict = {}
        for col, (J, adeg, ai) in enumerate(ents):
            t = len(J)
            for r, j in enumerate(J):
                sign = Fraction((-1) ** r)  # (−1)^{(r+1)+1} with 1-based position
                subJ = J[:r] + J[r + 1 :]
                blk = mults[j].block(adeg)
                for (row_a, col_a), v in blk.entries.items():
                    if col_a != ai:
                        continue
                    row = tgt_index.get((subJ, adeg + 2 * T.xi_tilde_sym_degree(j), row_a))
                    if row is not None:
                        s = mat.get((row, col), Q0) + sign * v
                        if s:
                            mat[(row, col)] = s
                        else:
                            mat.pop((row, col), None)
            sign_d = Fraction((-1) ** t)
            for (row_a, col_a), v in A.complex.d.block(adeg).entries.items():
                if col_a != ai:
                    continue
                row = tgt_index.get((J, adeg + 1, row_a))
                if row is not None:
                    s = mat.get((row, col), Q0) + sign_d * v
                    if s:
                        mat[(row, col)] = s
                    else:
                        mat.pop((row, col), None)
        m = Matrix(space.dim(total + 1), len(ents), mat)
        if not m.is_zero():
            d_blocks[total] = m
    cx = Complex(space, LinMap(space, space, 1, d_blocks), complete=False, check=True)
    return KoszulDualComplex(cx, basis, weights, A)


# ---------------------------------------------------------------------------
# The two legs of the zig-zag
# ---------------------------------------------------------------------------


@dataclass
class DualityComputation:
    """All shared objects of one duality verification."""

    g: LieAlgebra
    module: KgModule
    N: int
    weil: WeilModule
    product: KgModule  # W ⊗ M
    invariants: "object"  # InvariantModel of W ⊗ M
    cartan: CartanModel
    transgression: TransgressionData
    twist: TwistData
    h: KoszulDualComplex
    psi: ChainMap
    inclusion: ChainMap


def _invariant_coords(inv_model, deg: int, ambient_vec, dim: int):
    coords = express_in_span(inv_model.vectors.get(deg, []), ambient_vec, dim=dim)
    if coords is None:
        raise ValueError(f"vector is not invariant at degree {deg}")
    return coords


def inclusion_map(M: KgModule, WM: KgModule, inv_model, inv_M) -> ChainMap:
    """(M)^g -> (W⊗M)^g, m -> 1⊗1⊗m."""
    wm_basis = WM.meta["basis"]
    wm_index = {deg: {e: i for i, e in enumerate(ents)} for deg, ents in wm_basis.items()}
    blocks = {}
    src = inv_M.complex.space
    for deg in src.degrees():
        vecs = inv_M.vectors.get(deg, [])
        if not vecs or deg not in wm_index:
            continue
        cols = []
        for v in vecs:
            amb = [Q0] * WM.space.dim(deg)
            for mi, c in enumerate(v):
                if c:
                    row = wm_index[deg].get((0, 0, deg, mi))
                    if row is None:
                        raise AssertionError("inclusion escaped the window")
                    amb[row] = c
            cols.append(_invariant_coords(inv_model, deg, tuple(amb), WM.space.dim(deg)))
        blk = Matrix.from_columns(cols, nrows=inv_model.complex.space.dim(deg))
        if not blk.is_zero():
            blocks[deg] = blk
    return ChainMap(
        inv_M.complex, inv_model.complex,
        LinMap(src, inv_model.complex.space, 0, blocks),
    )


def build_psi(
    comp_g: LieAlgebra,
    M: KgModule,
    T: TransgressionData,
    A: CartanModel,
    h: KoszulDualComplex,
    WM: KgModule,
    inv_model,
    twist: TwistData,
    corrupt_transgression: bool = False,
) -> ChainMap:
    """The multiplicative extension of the twist embedding along h(A).

    (ξ_{j_1}∧...∧ξ_{j_t})⊗x  ->  ω(ξ_{j_1}) ... ω(ξ_{j_t}) · Ψ0(x).
    With corrupt_transgression the lifts ω(ξ) are replaced by the naive
    cocycle candidates 1⊗ξ, which breaks the chain property away from the
    abelian case.
    """
    alg = T.weil.algebra
    n = comp_g.dim
    zero_exps = tuple([0] * n)

    omegas = []
    for entry in T.entries:
        if corrupt_transgression:
            elt = {
                (zero_exps, mono): c
                for mono, c in zip(
                    lambda_monomials(n, entry.primitive.degree), entry.primitive.coeffs
                )
                if c
            }
        else:
            elt = entry.omega
        omegas.append(elt)

    products: dict = {(): {(zero_exps, ()): Q1}}

    def omega_product(J: tuple) -> dict:
        if J not in products:
            head, rest = J[0], J[1:]
            products[J] = alg.multiply(omegas[head], omega_product(rest))
        return products[J]

    ext_monos = twist.exterior.meta["monomials"]
    tm_basis = twist.tensor.meta["basis"]
    tm_index = {deg: {e: i for i, e in enumerate(ents)} for deg, ents in tm_basis.items()}
    wm_basis = WM.meta["basis"]
    wm_index = {deg: {e: i for i, e in enumerate(ents)} for deg, ents in wm_basis.items()}

    blocks = {}
    for deg, ents in h.basis.items():
        if deg > inv_model.complex.space.hi:
            continue
        cols = []
        for (J, adeg, ai) in ents:
            wfactor = omega_product(J)
            avec = A.vectors[adeg][ai]
            amb_ents = A.ambient[adeg]
            img = [Q0] * WM.space.dim(deg)
            for coeff, (exps, q, mi) in zip(avec, amb_ents):
                if not coeff:
                    continue
                src_idx = tm_index[q][(0, 0, q, mi)]
                tcol = twist.twist.block(q).column(src_idx)
                for pos, tval in enumerate(tcol):
                    if not tval:
                        continue
                    p, il, r, im = tm_basis[q][pos]
                    base = {(exps, ext_monos[p][il]): Q1}
                    prod = alg.multiply(wfactor, base)
                    for (w_exps, w_mono), wv in prod.items():
                        w_deg = 2 * sum(w_exps) + len(w_mono)
                        row = wm_index[deg].get(
                            (w_deg, alg.index[w_deg][(w_exps, w_mono)], r, im)
                        )
                        if row is None:
                            raise AssertionError("duality image escaped the window")
                        img[row] += coeff * tval * wv
            cols.append(
                _invariant_coords(inv_model, deg, tuple(img), WM.space.dim(deg))
            )
        blk = Matrix.from_columns(cols, nrows=inv_model.complex.space.dim(deg))
        if not blk.is_zero():
            blocks[deg] = blk
    return ChainMap(
        h.complex, inv_model.complex,
        LinMap(h.complex.space, inv_model.complex.space, 0, blocks),
    )


# ---------------------------------------------------------------------------
# Report and the end-to-end verdict
# ---------------------------------------------------------------------------


@dataclass
class DualityReport:
    algebra: str
    module: str
    max_degree: int
    psi_chain: ChainMapReport
    inclusion_chain: ChainMapReport
    psi_quasi_iso: Optional[QuasiIsoReport]
    inclusion_quasi_iso: Optional[QuasiIsoReport]
    betti_h: dict
    betti_product_invariants: dict
    betti_invariants: dict
    betti_match: bool
    verdict: bool

    def to_dict(self) -> dict:
        def chain_dict(rep: ChainMapReport):
            out = {"ok": rep.ok}
            if rep.witness:
                deg, lbl, defect = rep.witness
                out["witness"] = {
                    "degree": deg,
                    "basis": lbl,
                    "defect": {str(i): str(v) for i, v in enumerate(defect) if v},
                }
            return out

        def qi_dict(rep: Optional[QuasiIsoReport]):
            if rep is None:
                return None
            return {
                "ok": rep.ok,
                "degrees": {
                    str(d): info for d, info in sorted(rep.degrees.items())
                },
            }

        return {
            "algebra": self.algebra,
            "module": self.module,
            "max_degree": self.max_degree,
            "psi_chain": chain_dict(self.psi_chain),
            "inclusion_chain": chain_dict(self.inclusion_chain),
            "psi_quasi_iso": qi_dict(self.psi_quasi_iso),
            "inclusion_quasi_iso": qi_dict(self.inclusion_quasi_iso),
            "betti": {
                "h_of_equivariant": {str(k): v for k, v in sorted(self.betti_h.items())},
                "product_invariants": {
                    str(k): v for k, v in sorted(self.betti_product_invariants.items())
                },
                "invariants": {str(k): v for k, v in sorted(self.betti_invariants.items())},
            },
            "betti_match": self.betti_match,
            "verdict": "pass" if self.verdict else "fail",
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def describe(self) -> str:
        rows = [
            f"duality check: {self.algebra}, module {self.module}, degrees < {self.max_degree}",
            f"  zig-zag leg (M)^g -> (W⊗M)^g : chain {'ok' if self.inclusion_chain.ok else 'FAIL'},"
            f" quasi-iso {'ok' if self.inclusion_quasi_iso and self.inclusion_quasi_iso.ok else 'FAIL'}",
            f"  zig-zag leg h((M)_g) -> (W⊗M)^g : chain {'ok' if self.psi_chain.ok else 'FAIL'},"
            f" quasi-iso {'ok' if self.psi_quasi_iso and self.psi_quasi_iso.ok else 'FAIL'}",
        ]
        if not self.psi_chain.ok:
            rows.append("    " + self.psi_chain.describe())
        degs = sorted(set(self.betti_h) | set(self.betti_invariants))
        rows.append("  deg | betti h((M)_g) | betti (W⊗M)^g | betti (M)^g")
        for d in degs:
            rows.append(
                f"  {d:3d} | {self.betti_h.get(d, 0):14d} | "
                f"{self.betti_product_invariants.get(d, 0):13d} | {self.betti_invariants.get(d, 0):11d}"
            )
        rows.append(f"  betti tables agree: {self.betti_match}")
        rows.append(f"  verdict: {'pass' if self.verdict else 'FAIL'}")
        return "\n".join(rows)


def verify_duality(
    M: KgModule,
    trunc: Truncation,
    corrupt_transgression: bool = False,
) -> "tuple[DualityReport, DualityComputation]":
    """Run the full zig-zag verification for one module.

    Quasi-isomorphisms are certified for degrees <= trunc.max_degree - 1;
    all internal objects are materialized one degree beyond.
    """
    g = M.g
    N = trunc.max_degree
    W = weil_model(g, Truncation(N + 1))
    WM = tensor_module(W, M, max_total=N + 1, name=f"W⊗{M.name}")
    inv_WM = invariant_subcomplex(WM, with_actions=False)
    inv_M = invariant_subcomplex(M, with_actions=False)
    A = cartan_model(M, Truncation(N))
    P = primitive_basis(g, Truncation(N))
    T = distinguished_transgression(g, P, Truncation(N), weil=W)
    twist = twist_operators(M, Truncation(N + 1))
    h = h_of(A, T, Truncation(N))
    psi = build_psi(g, M, T, A, h, WM, inv_WM, twist,
                    corrupt_transgression=corrupt_transgression)
    incl = inclusion_map(M, WM, inv_WM, inv_M)

    psi_chain = check_chain_map(psi)
    incl_chain = check_chain_map(incl)
    psi_qi = quasi_iso_check(psi, trunc) if psi_chain.ok else None
    incl_qi = quasi_iso_check(incl, trunc) if incl_chain.ok else None

    betti_h = cohomology(h.complex, trunc).betti
    betti_prod = cohomology(inv_WM.complex, trunc).betti
    betti_inv = cohomology(inv_M.complex, trunc).betti
    degs = range(0, N)
    betti_match = all(
        betti_h.get(d, 0) == betti_inv.get(d, 0) for d in degs
    )

    verdict = (
        psi_chain.ok
        and incl_chain.ok
        and psi_qi is not None
        and psi_qi.ok
        and incl_qi is not None
        and incl_qi.ok
    )
    report = DualityReport(
        algebra=g.name,
        module=M.name,
        max_degree=N,
        psi_chain=psi_chain,
        inclusion_chain=incl_chain,
        psi_quasi_iso=psi_qi,
        inclusion_quasi_iso=incl_qi,
        betti_h={d: betti_h.get(d, 0) for d in degs},
        betti_product_invariants={d: betti_prod.get(d, 0) for d in degs},
        betti_invariants={d: betti_inv.get(d, 0) for d in degs},
        betti_match=betti_match,
        verdict=verdict,
    )
    comp = DualityComputation(
        g=g, module=M, N=N, weil=W, product=WM, invariants=inv_WM,
        cartan=A, transgression=T, twist=twist, h=h, psi=psi, inclusion=incl,
    )
    return report, comp


def psi_contraction_compatibility(comp: DualityComputation) -> bool:
    """ψ intertwines the invariant-multivector contractions on both sides."""
    from .equivariant import invariant_multivector_basis

    g = comp.g
    ext = exterior_model(g)
    inv_WM_full = invariant_subcomplex(comp.product, with_actions=True)
    psi = build_psi(
        g, comp.module, comp.transgression, comp.cartan, comp.h,
        comp.product, inv_WM_full, comp.twist,
    )
    multis = invariant_multivector_basis(g)
    for mv_idx, mv in enumerate(multis):
        # action on the h side: contract the primitive-product forms
        lhs_blocks = _h_side_contraction(comp, ext, mv)
        act = inv_WM_full.actions[mv_idx]
        for deg in comp.h.complex.space.degrees():
            if deg > inv_WM_full.complex.space.hi:
                continue
            lhs = act.block(deg) @ psi.map.block(deg)
            rhs_blk = psi.map.block(deg - mv.degree) @ lhs_blocks.get(
                deg, Matrix.zero(comp.h.complex.space.dim(deg - mv.degree),
                                 comp.h.complex.space.dim(deg))
            )
            if lhs != rhs_blk:
                return False
    return True


def _h_side_contraction(comp: DualityComputation, ext: KgModule, mv):
    """Contraction by an invariant multivector on the exterior factor of h."""
    from .transgression import wedge_vectors

    g = comp.g
    n = g.dim
    T = comp.transgression
    prims = [e.primitive for e in T.entries]
    op = ext.contraction_of_multivector(mv.coeffs, lambda_monomials(n, mv.degree))

    # expand each primitive subset into an exterior form, contract, and
    # re-express in the subset basis
    subsets: dict = {}
    for deg, ents in comp.h.basis.items():
        for (J, adeg, ai) in ents:
            subsets.setdefault(J, None)
    forms = {}
    for J in subsets:
        v = (Q1,)
        d_so_far = 0
        for j in J:
            v = wedge_vectors(v, d_so_far, prims[j].coeffs, prims[j].degree, n)
            d_so_far += prims[j].degree
        forms[J] = (v, d_so_far)

    by_degree: dict = {}
    for J, (v, dJ) in forms.items():
        by_degree.setdefault(dJ, []).append((J, v))

    # coordinates of i_mv(form_J) over the forms of lower degree
    contracted: dict = {}
    for J, (v, dJ) in forms.items():
        tgt = dJ - mv.degree
        img = op.apply(dJ, v)
        basis_vecs = [w for (_, w) in by_degree.get(tgt, [])]
        if not basis_vecs:
            if any(img):
                raise AssertionError("contraction left the primitive algebra")
            contracted[J] = []
            continue
        coords = express_in_span(basis_vecs, img, dim=len(img))
        if coords is None:
            raise AssertionError("contraction left the primitive algebra")
        contracted[J] = list(zip([Jt for (Jt, _) in by_degree[tgt]], coords))

    h_index = {
        deg: {e: i for i, e in enumerate(ents)} for deg, ents in comp.h.basis.items()
    }
    blocks = {}
    for deg, ents in comp.h.basis.items():
        tgt_index = h_index.get(deg - mv.degree, {})
        mat: dict = {}
        for col, (J, adeg, ai) in enumerate(ents):
            for Jt, c in contracted[J]:
                if not c:
                    continue
                row = tgt_index.get((Jt, adeg, ai))
                if row is not None:
                    mat[(row, col)] = mat.get((row, col), Q0) + c
        m = Matrix(comp.h.complex.space.dim(deg - mv.degree), len(ents), mat)
        blocks[deg] = m
    return blocks
