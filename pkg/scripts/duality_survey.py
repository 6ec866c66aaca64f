#!/usr/bin/env python3
"""Run the duality verification across the whole (algebra, module) matrix.

Prints one line per case with the verdict and wall time.  Window sizes are
chosen per case so the survey finishes in a couple of minutes; pass a
single integer argument to override every window.
"""

import sys
import time

from koszul.complexes import Truncation
from koszul.duality import verify_duality
from koszul.lie import adjoint_matrices, builtin_algebra
from koszul.modules import (
    exterior_model,
    polynomial_forms_module,
    tensor_module,
    trivial_module,
)

CASES = [
    ("abelian1", "trivial", 6),
    ("abelian1", "exterior", 8),
    ("abelian1", "forms d=1", 5),
    ("abelian2", "exterior", 8),
    ("abelian2", "exterior⊗exterior", 5),
    ("su2", "trivial", 8),
    ("su2", "exterior", 8),
    ("su2", "forms d=1", 8),
    ("su2", "exterior⊗exterior", 6),
    ("sl2", "trivial", 8),
    ("sl2", "exterior", 8),
    ("sl2", "forms d=1", 6),
    ("su2xsu2", "trivial", 8),
    ("su2xsu2", "exterior", 4),
]


def build(g, kind):
    if kind == "trivial":
        return trivial_module(g)
    if kind == "exterior":
        return exterior_model(g)
    if kind.startswith("forms"):
        _, coad = adjoint_matrices(g)
        return polynomial_forms_module(g, coad, poly_degree=1)
    if "⊗" in kind:
        ext = exterior_model(g)
        return tensor_module(ext, ext)
    raise ValueError(kind)


def main():
    override = int(sys.argv[1]) if len(sys.argv) > 1 else None
    failures = 0
    total0 = time.perf_counter()
    for name, kind, window in CASES:
        N = override or window
        g = builtin_algebra(name)
        M = build(g, kind)
        t0 = time.perf_counter()
        report, _ = verify_duality(M, Truncation(N))
        dt = time.perf_counter() - t0
        status = "pass" if report.verdict else "FAIL"
        print(f"{name:9s} {kind:22s} degrees<{N}: {status}  ({dt:6.2f}s)")
        if not report.verdict:
            failures += 1
            print(report.describe())
    print(f"total: {time.perf_counter() - total0:.1f}s, {failures} failures")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
