import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from mcg4 import catalog
from mcg4.automorphisms import rel_boundary_isometries
from mcg4.forms import e8, hyperbolic, is_rel_boundary, make_form
from mcg4.linalg import IntMatrix
from mcg4.mcg import (
    FIX_CAVEAT,
    PARITY_NOTE,
    BoundaryComponentInfo,
    ManifoldModel,
    MCGReport,
    ModelError,
    RealizabilityKind,
    Tri,
    analyze,
    gdt_parity_flag,
    seifert_kappa,
    stabilize_model,
    theta_rank,
    theta_realizable_smoothly,
    torelli,
)
from mcg4.variations import is_variation, lift_isometry, xi

from oracles import isometries_brute, is_member


def model(gram, spin, r, components=None, name=""):
    return ManifoldModel(make_form(gram), spin, r, components, name)


def comp(label, gdt="unknown", genus=None, euler=None):
    return BoundaryComponentInfo(label, genus, Tri(gdt), None, euler)


# --- analyze ----------------------------------------------------------------


def test_analyze_s3xi():
    rep = analyze(model([], True, 2))
    assert rep.order == 2 and rep.structure == "Z/2"
    assert rep.theta_rank == 1 and rep.torelli_free_rank == 0


def test_analyze_cp2_minus_disk():
    rep = analyze(model([[1]], False, 1))
    assert rep.order == 2
    assert FIX_CAVEAT in rep.caveats
    members = [v for v in range(-10, 11) if is_member([[1]], [[v]])]
    assert members == [0, 2]
    assert sorted(xi_val for xi_val in (1 - v for v in members)) == [-1, 1]


def test_analyze_d4():
    rep = analyze(model([], True, 1))
    assert rep.order == 1 and rep.structure == "trivial group"


def test_analyze_zero_2x2():
    rep = analyze(model([[0, 0], [0, 0]], True, 1))
    assert rep.torelli_free_rank == 1 and rep.theta_rank == 0
    assert rep.order is None
    assert rep.structure.startswith("infinite")


def test_analyze_degenerate_infinite_quotient():
    rep = analyze(model([[1, 0], [0, 0]], False, 1))
    assert rep.order is None
    assert rep.aut_description["finite"] is False
    assert rep.aut_description["translation_rank"] == 1


def test_analyze_indefinite_reports_no_order():
    rep = analyze(model([[1, 0, 0], [0, 1, 0], [0, 0, -1]], False, 1))
    assert rep.order is None
    assert "not certified" in rep.to_text() or rep.structure.startswith("not certified")


def test_every_nonspin_report_has_fix_caveat():
    for gram in ([], [[1]], [[0]], [[2, 1], [1, 2]], [[0, 0], [0, 0]]):
        assert FIX_CAVEAT in analyze(model(gram, False, 1)).caveats


def test_odd_spin_forms_lift_everything():
    rep = analyze(model([[1, 0], [0, 0]], True, 1))
    assert rep.order is None  # translations make the group infinite
    rep = analyze(model([[1]], True, 1))
    assert not any("do not lift" in c for c in rep.caveats)


def test_report_text_template():
    text = analyze(model([], True, 2, name="S3xI")).to_text()
    assert "group: Z/2" in text.splitlines()
    assert "order: 2" in text.splitlines()


# --- torelli and theta ------------------------------------------------------


def test_torelli_examples():
    assert torelli(model([], True, 2)) == (0, 1)
    assert torelli(model([[0] * 3] * 3, False, 1)) == (3, 0)
    assert torelli(model([[0, 1], [1, 0]], True, 1)) == (0, 0)


@given(
    st.integers(0, 6).flatmap(
        lambda n: st.tuples(
            st.lists(st.integers(-2, 2), min_size=n * n, max_size=n * n).map(
                lambda xs, n=n: [[xs[i * n + j] + xs[j * n + i] for j in range(n)] for i in range(n)]
            ),
            st.booleans(),
            st.integers(1, 5),
        )
    )
)
def test_closed_form_laws(args):
    gram, spin, r = args
    m = model(gram, spin, r)
    b = m.corank
    assert torelli(m) == (b * (b - 1) // 2, r - 1 if spin else 0)
    assert theta_rank(m) == (max(r - 1, 0) if spin else 0)


def test_theta_realizable_examples():
    lens = [comp("L(5,1)", genus=1), comp("L(7,2)", genus=1)]
    assert theta_realizable_smoothly(model([], True, 2, lens)).kind is RealizabilityKind.ALL
    hyp = [comp("M1", "no"), comp("M2", "no")]
    res = theta_realizable_smoothly(model([], True, 2, hyp))
    assert res.kind is RealizabilityKind.SUBGROUP_AT_LEAST
    assert res.generators == () and res.conservative
    assert theta_realizable_smoothly(model([], True, 1)).kind is RealizabilityKind.ALL
    assert theta_realizable_smoothly(model([], True, 3)).kind is RealizabilityKind.UNKNOWN
    with pytest.raises(ModelError):
        theta_realizable_smoothly(model([], False, 2))


@given(st.lists(st.sampled_from(["yes", "no", "unknown"]), min_size=1, max_size=6))
def test_theta_all_only_under_hypothesis(flags):
    comps = [comp(f"Y{i}", f) for i, f in enumerate(flags)]
    r = len(flags)
    res = theta_realizable_smoothly(model([], True, r, comps))
    yes = flags.count("yes")
    if r <= 1 or yes >= r - 1:
        assert res.kind is RealizabilityKind.ALL
    else:
        assert res.kind is RealizabilityKind.SUBGROUP_AT_LEAST and res.conservative
        assert len(res.generators) == yes
        bases = {g[0] for g in res.generators}
        assert len(bases) <= 1
        for base, target in res.generators:
            assert flags[int(target[1:])] == "yes"
            assert flags[int(base[1:])] != "yes"


def test_heegaard_genus_forces_gdt():
    assert comp("L", genus=0).admits_gdt is Tri.YES
    with pytest.raises(ModelError):
        comp("L", "no", genus=1)
    assert comp("M", "no", genus=2).admits_gdt is Tri.NO


# --- seifert data -------------------------------------------------------------


def test_seifert_kappa():
    assert seifert_kappa(1).b.tolist() == [[0, 1], [-1, 0]]
    assert seifert_kappa(2).b.tolist() == [
        [0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0],
    ]
    with pytest.raises(ValueError):
        seifert_kappa(0)


def test_gdt_parity_flag():
    note = gdt_parity_flag(comp("Y", euler=Fraction(1, 3)))
    assert note is not None and PARITY_NOTE in note
    assert gdt_parity_flag(comp("Y", euler=Fraction(1, 2))) is None
    assert gdt_parity_flag(comp("Y")) is None
    info = comp("Y", "no", euler=Fraction(3, 5))
    gdt_parity_flag(info)
    assert info.admits_gdt is Tri.NO


def test_parity_note_reaches_report():
    rep = analyze(model([], True, 1, [comp("Y", euler=Fraction(1, 3))]))
    assert any(PARITY_NOTE in n for n in rep.notes)


# --- stabilization ------------------------------------------------------------


def test_stabilize_examples():
    s = stabilize_model(model([[1]], False, 1), 1)
    assert s.form.gram.tolist() == [[1, 0, 0], [0, 0, 1], [0, 1, 0]]
    s = stabilize_model(model([], True, 1), 2)
    assert s.form.gram == IntMatrix.block_diag(hyperbolic().gram, hyperbolic().gram)


@pytest.mark.parametrize("gram", [[], [[0]], [[0, 0], [0, 0]], [[1, 0], [0, 0]], [[2, 1], [1, 2]]])
@pytest.mark.parametrize("g", range(6))
def test_stabilize_preserves_torelli(gram, g):
    m = model(gram, True, 3) if gram == [] or gram[0][0] % 2 == 0 else model(gram, False, 2)
    s = stabilize_model(m, g)
    assert torelli(s) == torelli(m)
    assert s.spin == m.spin and s.boundary_components == m.boundary_components


# --- model validation and serialization -------------------------------------


@pytest.mark.parametrize(
    "data, field",
    [
        ({"gram": [[1, 2], [3, 4]], "spin": True, "boundary_components": 1}, "gram"),
        ({"gram": [[1]], "spin": "yes", "boundary_components": 1}, "spin"),
        ({"gram": [[1]], "spin": True, "boundary_components": -1}, "boundary_components"),
        ({"gram": [[0]], "spin": True, "boundary_components": 0}, "gram"),
        ({"gram": [[1]], "spin": True, "boundary_components": 0}, "spin"),
        ({"gram": [[1]], "spin": True, "boundary_components": 2, "components": [{"label": "a"}]}, "components"),
        ({"gram": [[1]], "spin": True, "boundary_components": 1,
          "components": [{"label": "a", "admits_gdt": "maybe"}]}, "components[0].admits_gdt"),
        ({"gram": [[1]], "spin": True, "boundary_components": 1,
          "components": [{"label": "a", "seifert_euler": [1, 0]}]}, "components[0].seifert_euler"),
        ({"gram": [[1]], "spin": True, "boundary_components": 1, "colour": 1}, ""),
    ],
)
def test_model_validation(data, field):
    with pytest.raises(ModelError) as exc:
        ManifoldModel.from_dict(data)
    assert exc.value.field == field


def test_seifert_euler_reduced_on_ingest():
    m = ManifoldModel.from_dict({
        "gram": [], "spin": True, "boundary_components": 1,
        "components": [{"label": "Y", "seifert_euler": [2, -6]}],
    })
    assert m.components[0].seifert_euler == Fraction(-1, 3)
    assert m.to_dict()["components"][0]["seifert_euler"] == [-1, 3]


@pytest.mark.parametrize("name", catalog.names())
def test_report_round_trip(name):
    rep = analyze(catalog.get(name).load())
    assert MCGReport.from_dict(rep.to_dict()) == rep
    m = catalog.get(name).load()
    assert ManifoldModel.from_dict(m.to_dict()) == m


# --- order cross-check by lifting ---------------------------------------------


@pytest.mark.parametrize(
    "gram",
    [[[1]], [[2]], [[1, 0], [0, 1]], [[2, 1], [1, 2]], [[1, 0], [0, 2]], [[2, 1], [1, 3]],
     [[2, -1, 0], [-1, 2, -1], [0, -1, 2]], [[1, 0, 0], [0, 1, 0], [0, 0, 1]]],
)
@pytest.mark.parametrize("spin_r", [(False, 1), (True, 1), (True, 0)])
def test_order_matches_lift_enumeration(gram, spin_r):
    spin, r = spin_r
    if r == 0 and spin and any(gram[i][i] % 2 for i in range(len(gram))):
        with pytest.raises(ModelError):
            model(gram, spin, r)
        return
    m = model(gram, spin, r)
    rep = analyze(m)
    q = m.form
    brute = [IntMatrix(a) for a in isometries_brute(gram, 1)]
    rel = [a for a in brute if is_rel_boundary(q, a)]
    assert sorted(rel) == rel_boundary_isometries(q)
    lifts = set()
    for a in rel:
        v = lift_isometry(q, a)
        assert v is not None and is_variation(q, v.v) and xi(v).a == a
        lifts.add(v.v)
    assert len(lifts) == len(rel)
    assert rep.order == len(rel) * 2 ** rep.theta_rank


def test_e8_order():
    rep = analyze(model(e8().gram.tolist(), True, 1))
    assert rep.order == 696729600
