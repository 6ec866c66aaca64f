import json

import pytest

from koszul.lie import (
    AntisymmetryViolation,
    BadIndex,
    JacobiViolation,
    LieAlgebraError,
    NotReductive,
    RepMatrices,
    adjoint_matrices,
    builtin_algebra,
    certify_reductive,
    invariant_vectors,
    killing_form,
    lie_algebra_from_dict,
    load_lie_algebra,
)
from koszul.linalg import Matrix, vec


def test_su2_loads_and_brackets():
    g = builtin_algebra("su2")
    assert g.dim == 3
    assert g.bracket(0, 1) == vec([0, 0, 2])
    assert g.bracket(1, 2) == vec([2, 0, 0])
    assert g.bracket(2, 0) == vec([0, 2, 0])
    # antisymmetry completed automatically
    assert g.bracket(1, 0) == vec([0, 0, -2])


def test_abelian_accepted():
    g = builtin_algebra("abelian2")
    assert all(not any(g.bracket(i, j)) for i in range(2) for j in range(2))


def test_sl2_accepted():
    # the single nontrivial Jacobi triple (h,e,f) was checked by hand
    g = builtin_algebra("sl2")
    assert g.bracket(0, 1) == vec([0, 2, 0])
    assert g.bracket(1, 2) == vec([1, 0, 0])


def test_jacobi_violation_reported():
    data = {
        "name": "bad",
        "dim": 3,
        "basis": ["a", "b", "c"],
        "brackets": [
            {"i": 0, "j": 1, "terms": [{"k": 2, "c": "1"}]},
            {"i": 0, "j": 2, "terms": [{"k": 1, "c": "1"}]},
            {"i": 1, "j": 2, "terms": [{"k": 1, "c": "1"}]},
        ],
    }
    with pytest.raises(JacobiViolation) as err:
        lie_algebra_from_dict(data)
    assert "triple" in str(err.value)


def test_bad_index_rejected():
    data = {"name": "bad", "dim": 2, "basis": ["a", "b"],
            "brackets": [{"i": 0, "j": 5, "terms": [{"k": 0, "c": "1"}]}]}
    with pytest.raises(BadIndex):
        lie_algebra_from_dict(data)


def test_inconsistent_antisymmetry_rejected():
    data = {
        "name": "bad",
        "dim": 2,
        "basis": ["a", "b"],
        "brackets": [
            {"i": 0, "j": 1, "terms": [{"k": 0, "c": "1"}]},
            {"i": 1, "j": 0, "terms": [{"k": 0, "c": "1"}]},
        ],
    }
    with pytest.raises(AntisymmetryViolation):
        lie_algebra_from_dict(data)


def test_certify_su2():
    g = builtin_algebra("su2")
    dec = certify_reductive(g)
    assert dec.center == ()
    assert len(dec.derived) == 3
    assert killing_form(g) == Matrix.identity(3).scale(-8)


def test_certify_abelian():
    g = builtin_algebra("abelian2")
    dec = certify_reductive(g)
    assert len(dec.center) == 2
    assert dec.derived == ()


def test_nonreductive_rejected():
    #  [x, y] = y: solvable, not reductive
    data = {"name": "aff1", "dim": 2, "basis": ["x", "y"],
            "brackets": [{"i": 0, "j": 1, "terms": [{"k": 1, "c": "1"}]}]}
    g = lie_algebra_from_dict(data)
    with pytest.raises(NotReductive):
        certify_reductive(g)


def test_adjoint_matrices_su2():
    g = builtin_algebra("su2")
    ad, coad = adjoint_matrices(g)
    # ad_i: i -> 0, j -> 2k, k -> -2j
    assert ad.matrices[0].column(0) == vec([0, 0, 0])
    assert ad.matrices[0].column(1) == vec([0, 0, 2])
    assert ad.matrices[0].column(2) == vec([0, -2, 0])
    ad.check()
    coad.check()


def test_adjoint_matrices_sl2():
    g = builtin_algebra("sl2")
    ad, _ = adjoint_matrices(g)
    # ad_h: e -> 2e, f -> -2f, h -> 0
    assert ad.matrices[0].column(1) == vec([0, 2, 0])
    assert ad.matrices[0].column(2) == vec([0, 0, -2])
    assert ad.matrices[0].column(0) == vec([0, 0, 0])


def test_invariants_trivial_rep():
    g = builtin_algebra("su2")
    rep = RepMatrices(g, (Matrix.zero(1, 1),) * 3)
    assert invariant_vectors(rep) == [vec([1])]


def test_invariants_coadjoint_su2_empty():
    g = builtin_algebra("su2")
    _, coad = adjoint_matrices(g)
    assert invariant_vectors(coad) == []


def test_invariants_abelian_full():
    g = builtin_algebra("abelian2")
    _, coad = adjoint_matrices(g)
    assert len(invariant_vectors(coad)) == 2


def test_rep_bracket_compat_enforced():
    g = builtin_algebra("su2")
    bad = RepMatrices(g, (Matrix.identity(2), Matrix.zero(2, 2), Matrix.zero(2, 2)))
    with pytest.raises(LieAlgebraError):
        bad.check()


def test_load_from_file(tmp_path):
    p = tmp_path / "alg.json"
    p.write_text(json.dumps({"name": "a1", "dim": 1, "basis": ["t"], "brackets": []}))
    g = load_lie_algebra(str(p))
    assert g.dim == 1


def test_load_malformed_json_reports_position(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text('{"name": "x", ')
    with pytest.raises(LieAlgebraError) as err:
        load_lie_algebra(str(p))
    assert "line" in str(err.value)


def test_builtin_abelian_n():
    g = builtin_algebra("abelian:3")
    assert g.dim == 3


def test_su2xsu2_certifies():
    g = builtin_algebra("su2xsu2")
    dec = certify_reductive(g)
    assert len(dec.derived) == 6 and dec.center == ()
