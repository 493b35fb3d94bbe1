import numpy as np
import pytest

from modesub.pointgroup import (
    MATCH_TOL,
    TE,
    TM,
    O3IrrepId,
    builtin_group,
    format_character_table,
    group_to_json,
    normalize_group_name,
    o3_character,
    operation_from_matrix,
    perturbed_character_table,
    rotation_character,
    verify_group,
)

GROUP_ORDERS = {"O_h": 48, "O": 24, "D_4h": 16, "C_4v": 8, "C_2v": 4}

# class label -> size, per group (encoded order)
CLASS_SIZES = {
    "O_h": {"E": 1, "8C3": 8, "6C2'": 6, "6C4": 6, "3C2": 3, "i": 1,
            "6S4": 6, "8S6": 8, "3s_h": 3, "6s_d": 6},
    "O": {"E": 1, "8C3": 8, "6C2'": 6, "6C4": 6, "3C2": 3},
    "D_4h": {"E": 1, "2C4": 2, "C2": 1, "2C2'": 2, "2C2''": 2, "i": 1,
             "2S4": 2, "s_h": 1, "2s_v": 2, "2s_d": 2},
    "C_4v": {"E": 1, "2C4": 2, "C2": 1, "2s_v": 2, "2s_d": 2},
    "C_2v": {"E": 1, "C2": 1, "s_xz": 1, "s_yz": 1},
}


def test_orders_and_closure():
    for name, order in GROUP_ORDERS.items():
        g = builtin_group(name)
        assert g.order == order
        assert len(g.elements) == order
        mats = [e.matrix for e in g.elements]
        for a in mats[:6]:
            for b in mats[:6]:
                prod = a @ b
                assert any(np.abs(prod - m).max() < MATCH_TOL for m in mats)


def test_class_structure():
    for name, sizes in CLASS_SIZES.items():
        g = builtin_group(name)
        got = {c.label: c.size for c in g.classes}
        assert got == sizes
        assert sum(got.values()) == g.order


def test_identity_column_is_dimension():
    for name in GROUP_ORDERS:
        g = builtin_group(name)
        e_col = [c.label for c in g.classes].index("E")
        for p in g.irreps:
            assert p.characters[e_col] == p.dimension
        assert sum(p.dimension ** 2 for p in g.irreps) == g.order


def test_known_character_rows():
    oh = builtin_group("O_h")
    cols = [c.label for c in oh.classes]
    t1u = oh.irrep("T_1u")
    expect = {"E": 3, "8C3": 0, "6C2'": -1, "6C4": 1, "3C2": -1,
              "i": -3, "6S4": -1, "8S6": 0, "3s_h": 1, "6s_d": 1}
    assert {c: t1u.characters[i] for i, c in enumerate(cols)} == expect
    d4h = builtin_group("D_4h")
    cols = [c.label for c in d4h.classes]
    eu = d4h.irrep("E_u")
    expect = {"E": 2, "2C4": 0, "C2": -2, "2C2'": 0, "2C2''": 0,
              "i": -2, "2S4": 0, "s_h": 2, "2s_v": 0, "2s_d": 0}
    assert {c: eu.characters[i] for i, c in enumerate(cols)} == expect


def test_verify_group_accepts_builtins():
    for name in GROUP_ORDERS:
        report = verify_group(builtin_group(name))
        assert report.ok, report.violations


def test_verify_group_rejects_perturbed_table():
    g = builtin_group("C_4v")
    col = [c.label for c in g.classes].index("2s_v")
    bad = perturbed_character_table(g, "B_1", col, -3)
    report = verify_group(bad)
    assert not report.ok
    assert any("orthogonality" in v for v in report.violations)


def test_operation_from_matrix_round_trip():
    rng = np.random.default_rng(42)
    for g in map(builtin_group, GROUP_ORDERS):
        for e in g.elements:
            op = operation_from_matrix(e.matrix)
            assert op.kind in ("proper", "improper")
            det = np.linalg.det(e.matrix)
            assert op.kind == ("proper" if det > 0 else "improper")
            assert 0.0 <= op.angle <= np.pi + 1e-12
            # axis is a unit vector of the proper part's rotation axis
            p = e.matrix * (1.0 if det > 0 else -1.0)
            if op.angle > 1e-9:
                assert np.abs(p @ op.axis - op.axis).max() < 1e-8
    _ = rng  # seeds kept equal across runs


def test_rotation_character_closed_form_vs_cosine_sum():
    for t in range(7):
        for theta in np.linspace(1e-4, np.pi, 17):
            direct = sum(np.cos(m * theta) for m in range(-t, t + 1))
            assert rotation_character(t, theta) == pytest.approx(direct, abs=1e-9)
    # removable singularities
    for t in range(7):
        assert rotation_character(t, 0.0) == pytest.approx(2 * t + 1)
        assert rotation_character(t, 2 * np.pi) == pytest.approx(2 * t + 1)


def test_o3_character_parity_factor():
    oh = builtin_group("O_h")
    inv = next(e for e in oh.elements
               if np.abs(e.matrix + np.eye(3)).max() < 1e-12)
    for t in range(1, 5):
        chi_te = o3_character(O3IrrepId(t, TE), inv)
        chi_tm = o3_character(O3IrrepId(t, TM), inv)
        assert chi_te == pytest.approx((-1) ** (t + 1) * (2 * t + 1))
        assert chi_tm == pytest.approx((-1) ** t * (2 * t + 1))


def test_irrep_matrices_trace_to_characters():
    for name in GROUP_ORDERS:
        g = builtin_group(name)
        for p in g.irreps:
            for idx, e in enumerate(g.elements):
                chi = p.characters[g.class_of_element[idx]]
                assert np.trace(p.matrices[idx]) == pytest.approx(chi, abs=1e-9)


def test_irrep_matrices_are_homomorphisms():
    rng = np.random.default_rng(5)
    for name in ("O_h", "C_4v"):
        g = builtin_group(name)
        find = {e.matrix.tobytes(): i for i, e in enumerate(g.elements)}

        def index_of(m):
            for i, e in enumerate(g.elements):
                if np.abs(e.matrix - m).max() < MATCH_TOL:
                    return i
            raise AssertionError("product left the group")

        for _ in range(40):
            i, j = rng.integers(0, g.order, 2)
            k = index_of(g.elements[i].matrix @ g.elements[j].matrix)
            for p in g.irreps:
                lhs = p.matrices[i] @ p.matrices[j]
                assert np.abs(lhs - p.matrices[k]).max() < 1e-8
        _ = find


def test_subgroup_containment():
    oh = builtin_group("O_h")
    for name in ("O", "D_4h", "C_4v", "C_2v"):
        assert oh.contains_group(builtin_group(name))
    assert builtin_group("D_4h").contains_group(builtin_group("C_4v"))
    assert not builtin_group("C_4v").contains_group(builtin_group("D_4h"))


def test_name_normalization():
    assert normalize_group_name("Oh") == "O_h"
    assert normalize_group_name("D4h") == "D_4h"
    assert normalize_group_name("c4v") == "C_4v"
    assert normalize_group_name("C_2v") == "C_2v"
    with pytest.raises(ValueError):
        normalize_group_name("D_6h")


def test_json_export_and_table_format():
    g = builtin_group("C_2v")
    doc = group_to_json(g)
    assert doc["name"] == "C_2v" and doc["order"] == 4
    assert len(doc["classes"]) == 4
    assert len(doc["character_table"]) == 4
    text = format_character_table(g)
    lines = text.splitlines()
    assert lines[0].startswith("C_2v")
    assert any(line.split()[0] == "B_2" for line in lines[1:])
