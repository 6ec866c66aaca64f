"""Lie algebra data: loading, validation, reductivity certification.

Structure constants follow [x_i, x_j] = sum_k c^k_ij x_k with c^k_ij
antisymmetric in (i, j).  Indices are 0-based everywhere, including the
JSON file format.  A loaded algebra is always Jacobi-checked; downstream
constructions additionally require `certify_reductive` to pass, since the
duality theorems need g = center + [g,g] with a nondegenerate Killing
form on the derived part.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Optional, Sequence

from .linalg import (
    Matrix,
    independent_subset,
    kernel_basis,
    qparse,
    qstr,
    rank,
    vec,
    vstack,
    zero_vec,
)

Q0 = Fraction(0)


class LieAlgebraError(ValueError):
    pass


class BadIndex(LieAlgebraError):
    pass


class AntisymmetryViolation(LieAlgebraError):
    pass


class JacobiViolation(LieAlgebraError):
    pass


class NotReductive(LieAlgebraError):
    pass


@dataclass(frozen=True)
class LieAlgebra:
    """Finite-dimensional Lie algebra over Q in a fixed basis."""

    name: str
    dim: int
    basis_labels: tuple
    # (i, j) with i < j  ->  tuple of (k, coefficient)
    structure: dict = field(compare=False)

    def bracket(self, i: int, j: int) -> tuple:
        """[x_i, x_j] as a coordinate vector."""
        if not (0 <= i < self.dim and 0 <= j < self.dim):
            raise BadIndex(f"basis index out of range: ({i},{j})")
        out = [Q0] * self.dim
        if i == j:
            return tuple(out)
        sign = 1
        if i > j:
            i, j, sign = j, i, -1
        for k, c in self.structure.get((i, j), ()):
            out[k] += sign * c
        return tuple(out)

    def c(self, k: int, i: int, j: int) -> Fraction:
        """Structure constant c^k_ij."""
        return self.bracket(i, j)[k]

    def bracket_vectors(self, u: Sequence, v: Sequence) -> tuple:
        out = [Q0] * self.dim
        for i, a in enumerate(u):
            if not a:
                continue
            for j, b in enumerate(v):
                if not b:
                    continue
                w = self.bracket(i, j)
                for k in range(self.dim):
                    out[k] += a * b * w[k]
        return tuple(out)


def _check_jacobi(g: LieAlgebra) -> None:
    n = g.dim
    for a in range(n):
        for b in range(a + 1, n):
            for c in range(b + 1, n):
                acc = [Q0] * n
                for (x, y, z) in ((a, b, c), (b, c, a), (c, a, b)):
                    inner = g.bracket(y, z)
                    for k in range(n):
                        if inner[k]:
                            outer = g.bracket(x, k)
                            for m in range(n):
                                acc[m] += inner[k] * outer[m]
                if any(acc):
                    raise JacobiViolation(
                        f"Jacobi identity fails on basis triple ({a},{b},{c}): "
                        f"residual {[qstr(v) for v in acc]}"
                    )


def lie_algebra_from_dict(data: dict) -> LieAlgebra:
    """Build and validate a LieAlgebra from the JSON-shaped description.

    Only i < j entries are required; a (j, i) entry, if present, must be
    consistent with antisymmetry.
    """
    try:
        name = str(data["name"])
        n = int(data["dim"])
        labels = tuple(str(x) for x in data["basis"])
        bracket_list = data.get("brackets", [])
    except (KeyError, TypeError) as exc:
        raise LieAlgebraError(f"malformed algebra description: {exc}") from exc
    if n < 0 or len(labels) != n:
        raise LieAlgebraError(f"dim {n} does not match {len(labels)} basis labels")
    structure: dict = {}
    for ent in bracket_list:
        i, j = int(ent["i"]), int(ent["j"])
        if not (0 <= i < n and 0 <= j < n):
            raise BadIndex(f"bracket index ({i},{j}) outside 0..{n - 1}")
        if i == j:
            if any(qparse(t["c"]) for t in ent["terms"]):
                raise AntisymmetryViolation(f"nonzero bracket [x_{i}, x_{i}]")
            continue
        terms = []
        for t in ent["terms"]:
            k = int(t["k"])
            if not (0 <= k < n):
                raise BadIndex(f"bracket target index {k} outside 0..{n - 1}")
            c = qparse(t["c"])
            if c:
                terms.append((k, c))
        key, sign = ((i, j), 1) if i < j else ((j, i), -1)
        terms = tuple((k, sign * c) for k, c in terms)
        if key in structure:
            if dict(structure[key]) != dict(terms):
                raise AntisymmetryViolation(
                    f"brackets for ({key[0]},{key[1]}) given twice with inconsistent values"
                )
        else:
            structure[key] = terms
    g = LieAlgebra(name=name, dim=n, basis_labels=labels, structure=structure)
    _check_jacobi(g)
    return g


def load_lie_algebra(path_or_name: str) -> LieAlgebra:
    """Load an algebra from a JSON file path or a built-in name."""
    if path_or_name in BUILTIN_NAMES:
        return builtin_algebra(path_or_name)
    with open(path_or_name, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise LieAlgebraError(
                f"invalid JSON in {path_or_name} at line {exc.lineno} column {exc.colno}: {exc.msg}"
            ) from exc
    return lie_algebra_from_dict(data)


BUILTIN_NAMES = ("su2", "sl2", "abelian1", "abelian2", "su2xsu2")


def builtin_algebra(name: str) -> LieAlgebra:
    base = name.split(":", 1)
    if base[0] == "abelian" and len(base) == 2:
        n = int(base[1])
        return lie_algebra_from_dict(
            {"name": f"abelian{n}", "dim": n, "basis": [f"t{i+1}" for i in range(n)], "brackets": []}
        )
    if name not in BUILTIN_NAMES:
        raise LieAlgebraError(f"unknown builtin algebra {name!r}; have {BUILTIN_NAMES}")
    text = resources.files("koszul.data").joinpath(f"{name}.json").read_text("utf-8")
    return lie_algebra_from_dict(json.loads(text))


# ---------------------------------------------------------------------------
# Representations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RepMatrices:
    """A representation of g: one square matrix per basis vector."""

    g: LieAlgebra
    matrices: tuple  # n matrices, all dim x dim on the representation space

    @property
    def space_dim(self) -> int:
        return self.matrices[0].rows if self.matrices else 0

    def check(self) -> None:
        n = self.g.dim
        if len(self.matrices) != n:
            raise LieAlgebraError(f"expected {n} action matrices, got {len(self.matrices)}")
        d = self.space_dim
        for m in self.matrices:
            if (m.rows, m.cols) != (d, d):
                raise LieAlgebraError("action matrices must be square and equal-sized")
        for i in range(n):
            for j in range(i + 1, n):
                lhs = self.matrices[i] @ self.matrices[j] - self.matrices[j] @ self.matrices[i]
                rhs = Matrix.zero(d, d)
                for k, c in enumerate(self.g.bracket(i, j)):
                    if c:
                        rhs = rhs + self.matrices[k].scale(c)
                if lhs != rhs:
                    raise LieAlgebraError(
                        f"bracket compatibility fails: [rho_{i}, rho_{j}] != rho([x_{i},x_{j}])"
                    )


def adjoint_matrices(g: LieAlgebra):
    """(ad, coad): the adjoint action on g and the coadjoint action on g*.

    coad_k = -(ad_k)^T, the convention under which the Lie derivative
    induced on degree-1 exterior generators coincides with coad.
    """
    n = g.dim
    ad = []
    for k in range(n):
        ents = {}
        for j in range(n):
            w = g.bracket(k, j)
            for m in range(n):
                if w[m]:
                    ents[(m, j)] = w[m]
        ad.append(Matrix(n, n, ents))
    coad = [m.transpose().scale(-1) for m in ad]
    return RepMatrices(g, tuple(ad)), RepMatrices(g, tuple(coad))


def invariant_vectors(rep: RepMatrices) -> list:
    """Basis of the simultaneous kernel of all action matrices."""
    rep.check()
    d = rep.space_dim
    if d == 0:
        return []
    if not rep.matrices:
        return [tuple(vec(row)) for row in Matrix.identity(d).dense()]
    stacked = vstack(list(rep.matrices))
    return kernel_basis(stacked)


def killing_form(g: LieAlgebra) -> Matrix:
    """K(x,y) = trace(ad_x ad_y), computed directly."""
    ad, _ = adjoint_matrices(g)
    n = g.dim
    ents = {}
    for i in range(n):
        for j in range(i, n):
            prod = ad.matrices[i] @ ad.matrices[j]
            tr = sum((prod[(t, t)] for t in range(n)), Q0)
            if tr:
                ents[(i, j)] = tr
                if i != j:
                    ents[(j, i)] = tr
    return Matrix(n, n, ents)


@dataclass(frozen=True)
class ReductiveDecomposition:
    center: tuple  # basis vectors of z(g)
    derived: tuple  # basis vectors of [g, g]
    killing: Matrix


def certify_reductive(g: LieAlgebra) -> ReductiveDecomposition:
    """Certify g = z(g) + [g,g] with Killing nondegenerate on [g,g].

    Raises NotReductive with the failed condition otherwise.
    """
    n = g.dim
    ad, _ = adjoint_matrices(g)
    if n == 0:
        return ReductiveDecomposition((), (), Matrix.zero(0, 0))
    center = kernel_basis(vstack(list(ad.matrices)))
    brackets = [g.bracket(i, j) for i in range(n) for j in range(i + 1, n)]
    derived = independent_subset([v for v in brackets if any(v)], dim=n)
    if len(center) + len(derived) != n:
        raise NotReductive(
            f"dim z(g) + dim [g,g] = {len(center)} + {len(derived)} != {n}"
        )
    if derived:
        B = Matrix.from_columns(derived, nrows=n)
        K_restricted = B.transpose() @ killing_form(g) @ B
        if rank(K_restricted) != len(derived):
            raise NotReductive("Killing form is degenerate on the derived subalgebra")
    if center and derived:
        if rank(Matrix.from_columns(list(center) + list(derived), nrows=n)) != n:
            raise NotReductive("center and derived subalgebra do not span g directly")
    return ReductiveDecomposition(tuple(center), tuple(derived), killing_form(g))
