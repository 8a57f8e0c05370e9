"""Theorem database and stems queries against the transcribed answer key."""

from __future__ import annotations

import json

import pytest

from hcm import classify as cl
from hcm.errors import InputError, NotFoundError, UnsupportedError
from hcm.groups import AbelianGroup

Z2 = AbelianGroup.cyclic(2)
Z8 = AbelianGroup.cyclic(8)
ZERO = AbelianGroup.ZERO


def test_inertia_zero_away_from_exceptions():
    for n in range(3, 65):
        if n in (4, 8, 9):
            continue
        assert cl.inertia_group(n).group == ZERO


def test_inertia_n4():
    assert cl.inertia_group(4, 8).group == ZERO
    assert cl.inertia_group(4, 16).group == ZERO
    assert cl.inertia_group(4, 4).group == Z2
    assert cl.inertia_group(4, 12).group == Z2


def test_inertia_n8():
    assert cl.inertia_group(8, 24).group == ZERO
    assert cl.inertia_group(8, 48).group == ZERO
    assert cl.inertia_group(8, 6).group == Z2
    assert cl.inertia_group(8, 30).group == Z2


def test_inertia_n9():
    assert cl.inertia_group(9, 0).group == ZERO
    got = cl.inertia_group(9, 1)
    assert got.group == Z8
    assert "bSpin_19" in got.note


def test_inertia_branch_table_without_invariant():
    table = cl.inertia_group(4)
    assert not table.decided
    assert dict(table.branches)["8 | p1"] == ZERO
    assert dict(table.branches)["not (8 | p1)"] == Z2


def test_inertia_unsupported_below_3():
    with pytest.raises(UnsupportedError):
        cl.inertia_group(2)


def test_h_c_inertia_always_vanishes():
    for n in (3, 4, 8, 9, 100):
        assert cl.h_c_inertia(n) == (ZERO, ZERO)


def test_kernel_unit_map_table():
    expected = {1: ("eta^2",), 3: ("nu^2",), 4: ("epsilon",), 7: ("sigma^2",),
                8: ("eta4",), 9: ("[h2h4]",)}
    for n in range(1, 65):
        got = cl.kernel_unit_map(n)
        assert got.generators == expected.get(n, ())
        assert "Thm 1.3" in got.citations


def test_a_group_table():
    assert cl.a_group(16) == AbelianGroup(0, (2, 2))
    assert cl.a_group(4) == AbelianGroup(0, (2, 2))
    assert cl.a_group(9) == Z8
    assert cl.a_group(10) == Z2
    assert cl.a_group(12) == Z2
    assert cl.a_group(20) == Z2
    assert cl.a_group(7) == ZERO
    for n in range(3, 65):
        nonzero = n % 8 in (0, 1, 2, 4)
        assert (not cl.a_group(n).is_zero) == nonzero


def test_boundary_info():
    assert "every homotopy 8-sphere" in cl.boundary_info(4).spheres_bounding
    assert "[nu4 o eta7]" in cl.boundary_info(4).boundary_map
    assert "every homotopy 16-sphere" in cl.boundary_info(8).spheres_bounding
    assert "omega(f)*[h2h4]" in cl.boundary_info(9).boundary_map
    assert "standard sphere" in cl.boundary_info(6).spheres_bounding
    assert cl.boundary_info(9).qualifier == "up to multiplication by a 2-adic unit"


def test_boundary_image_divides_stem_group():
    db = cl.load_stems()
    image_order = {4: 2, 8: 2, 9: 8}
    for n, order in image_order.items():
        stem_group = db.stem(2 * n).group
        assert stem_group.order % order == 0


def test_classification_answer_key():
    for n in range(3, 65):
        rec = cl.classification_result(n)
        assert rec.dimension == 2 * n
        if n == 63:
            assert rec.status == cl.OPEN_DIM_126
        else:
            assert rec.status == "complete"
        assert rec.citations  # every row cited
        assert rec.homotopy_inertia == ZERO and rec.concordance_inertia == ZERO
        if n not in (4, 8, 9):
            assert rec.inertia.group == ZERO


def test_stem_records():
    db = cl.load_stems()
    r7 = db.stem(7)
    assert r7.group == AbelianGroup.cyclic(16)
    assert r7.im_j_order == 16
    assert db.stem(6).group == Z2
    assert db.stem(8).group == AbelianGroup(0, (2, 2))
    assert db.stem(9).group == AbelianGroup(0, (2, 2, 2))
    assert db.stem(10).group == Z2
    assert db.stem(14).group == AbelianGroup(0, (2, 2))
    assert db.stem(18).group == AbelianGroup(0, (8, 2))
    assert db.stem(20).group == Z8
    labels16 = [g.label for g in db.stem(16).generators]
    assert labels16 == ["[Pc0]", "eta4"]
    with pytest.raises(NotFoundError):
        db.stem(25)


def test_im_j_divides_everywhere():
    db = cl.load_stems()
    for k, rec in db.records.items():
        order = rec.group.order
        assert order is not None and order % rec.im_j_order == 0


def test_products():
    db = cl.load_stems()
    assert db.product("sigma", "mu9").result == "eta*rho"
    assert db.product("mu9", "sigma").result == "eta*rho"  # symmetric lookup
    assert db.product("epsilon", "eta*mu9").result == "0"
    assert db.product("nu-bar", "eta*mu9").result == "0"
    assert db.product("sigma", "nu^3").result == "0"
    assert db.product("sigma", "eta*epsilon").result == "0"
    with pytest.raises(NotFoundError):
        db.product("sigma", "kappa")


def test_alias_resolution():
    db = cl.load_stems()
    assert db.resolve("[h1h4]") == (16, "eta4")
    assert db.resolve("h3") == (7, "sigma")
    # the composite labeling of the stem-8 group resolves through its relation
    assert db.resolve("eta*sigma") == (8, "eta*sigma")
    rel = db.stem(8).relations[0]
    assert set(rel["sum"]) == {"nu-bar", "epsilon"}


def test_mu_family_flags():
    db = cl.load_stems()
    mu = {g.label for k in db.records for g in db.stem(k).generators if g.mu_family}
    assert mu == {"mu9", "eta*mu9", "mu17", "eta*mu17"}


def test_load_stems_file_and_schema_errors(tmp_path):
    db = cl.load_stems()
    # a trimmed but schema-valid override file
    payload = {"stems": [
        {"k": 7, "cyclic_orders": [16], "im_j_order": 16,
         "generators": [{"label": "sigma", "aliases": [], "im_j": True,
                         "mu_family": False}]}],
        "products": []}
    path = tmp_path / "stems.json"
    path.write_text(json.dumps(payload), encoding="utf-8")
    db2 = cl.load_stems(str(path))
    assert db2.stem(7).group == db.stem(7).group

    bad = tmp_path / "bad.json"
    bad.write_text("{ not json", encoding="utf-8")
    with pytest.raises(InputError):
        cl.load_stems(str(bad))

    mismatched = tmp_path / "mismatch.json"
    mismatched.write_text(json.dumps({"stems": [
        {"k": 3, "cyclic_orders": [8, 2], "generators": []}]}), encoding="utf-8")
    with pytest.raises(InputError):
        cl.load_stems(str(mismatched))

    with pytest.raises(InputError):
        cl.load_stems(str(tmp_path / "missing.json"))


def test_kervaire_notes_present():
    db = cl.load_stems()
    assert any("Kervaire" in note for note in db.stem(14).notes)
    assert any("Kervaire" in note for note in db.stem(2).notes)
