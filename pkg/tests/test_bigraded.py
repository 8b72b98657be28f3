import json

import pytest

from experiments.growth import free_lie_dimensions
from sullivan import serialize
from sullivan.bigraded import (BUILTIN_SPECS, CohomologySpec, build, build_stage_zero, extend_stage,
                               quadratic_cycles, resolve_spec, verify, without)
from sullivan.cdga import cohomology
from sullivan.errors import ModelError

WEDGE = BUILTIN_SPECS["wedge-s2-s3-s3"]


def _fmt(model, polys):
    return [model.context.format(p) for p in polys]


def test_stage_zero():
    model = build_stage_zero(WEDGE, 6)
    assert [(g.name, g.degree) for g in model.w_generators()] == [("a2", 2), ("b3", 3), ("c3", 3)]
    assert all(not model.cdga.d_of(g.id) for g in model.w_generators())
    assert model.stages == {0: (0, 1, 2)}


def test_stage_zero_of_empty_spec():
    model = build_stage_zero(CohomologySpec(()), 5)
    assert len(model.context) == 0
    assert model.top_stage == -1


def test_quadratic_cycles_on_stage_zero():
    model = build_stage_zero(WEDGE, 6)
    assert _fmt(model, quadratic_cycles(model, 0, 4)) == ["a2^2"]
    assert _fmt(model, quadratic_cycles(model, 0, 5)) == ["a2*b3", "a2*c3"]
    assert _fmt(model, quadratic_cycles(model, 0, 6)) == ["b3*c3"]
    assert quadratic_cycles(model, 0, 3) == []


def test_quadratic_cycles_mixing_stages(wedge6):
    # stage-1 quadratics of degree 6: a2*w1_4_0, a2*w1_4_1, b3*w1_3_0, c3*w1_3_0
    cycles = quadratic_cycles(wedge6, 1, 6)
    assert len(cycles) == 2
    for z in cycles:
        assert wedge6.cdga.d(z, limit=7).is_zero
        assert {wedge6.context.stage(m) for m in z.monomials()} == {1}


def test_first_extension():
    model = extend_stage(build_stage_zero(WEDGE, 6), 0)
    stage1 = model.stage_generators(1)
    assert [g.degree for g in stage1] == [3, 4, 4, 5]
    assert [g.name for g in stage1] == ["w1_3_0", "w1_4_0", "w1_4_1", "w1_5_0"]
    assert [model.context.format(model.cdga.d_of(g.id)) for g in stage1] == \
        ["a2^2", "a2*b3", "a2*c3", "b3*c3"]


def test_first_extension_respects_the_cap():
    model = extend_stage(build_stage_zero(WEDGE, 4), 0)
    assert [g.degree for g in model.stage_generators(1)] == [3, 4, 4]


def test_extend_stage_out_of_order():
    with pytest.raises(ModelError):
        extend_stage(build_stage_zero(WEDGE, 6), 1)


def test_model_of_s2():
    model = build(BUILTIN_SPECS["s2"], 5)
    assert [(g.name, g.degree) for g in model.w_generators()] == [("a2", 2), ("w1_3_0", 3)]
    assert model.context.format(model.cdga.d_of("w1_3_0")) == "a2^2"
    report = verify(model)
    assert report.passed
    assert report.h_dims == (1, 0, 1, 0, 0)


def test_model_of_s3_wedge_s3():
    model = build(BUILTIN_SPECS["s3-wedge-s3"], 7)
    assert model.degree_counts() == {3: 2, 5: 1, 7: 2}
    assert verify(model).passed


def test_empty_spec():
    model = build(CohomologySpec(()), 6)
    assert len(model.context) == 0
    assert verify(model).h_dims == (1, 0, 0, 0, 0, 0)


def test_wedge_generator_counts_match_free_lie_algebra(wedge6):
    assert wedge6.degree_counts() == {2: 1, 3: 3, 4: 2, 5: 3, 6: 6}
    lie = free_lie_dimensions([1, 2, 2], 5)
    assert {k + 1: n for k, n in lie.items() if n} == wedge6.degree_counts()


def test_bigrading_of_the_built_model(wedge6):
    ctx = wedge6.context
    for g in wedge6.w_generators():
        if g.stage == 0:
            continue
        dg = wedge6.cdga.d_of(g.id)
        assert dg
        assert all(len([1 for _, e in m for _ in range(e)]) == 2 for m in dg.monomials())
        assert {ctx.stage(m) for m in dg.monomials()} == {g.stage - 1}
        assert g.degree >= g.stage + 2


def test_verify_wedge(wedge6):
    report = verify(wedge6)
    assert report.passed, report.violations
    assert report.h_dims == (1, 0, 1, 2, 0, 0)


def test_verify_catches_a_missing_generator(wedge6):
    broken = without(wedge6, ["w1_3_0"])
    report = verify(broken)
    assert not report.passed
    hits = [v for v in report.violations if v.check == "decomposable" and v.degree == 4]
    assert hits and "a2^2" in hits[0].detail
    assert any(v.check == "cohomology" and v.degree == 4 for v in report.violations)


def test_verify_stage_zero_only_model():
    report = verify(build_stage_zero(WEDGE, 6))
    assert "decomposable" in report.failed_checks()


def test_verify_cap_too_small():
    model = build(WEDGE, 2)
    assert [g.name for g in model.w_generators()] == ["a2"]
    assert model.skipped == ("b3", "c3")
    report = verify(model)
    assert report.failed_checks() == ["cap"]
    assert "top class degree 3" in report.violations[0].detail


def test_build_is_deterministic():
    a = serialize.dumps(serialize.model_to_json(build(WEDGE, 6)))
    b = serialize.dumps(serialize.model_to_json(build(WEDGE, 6)))
    assert a == b


def test_spec_validation_and_loading(tmp_path):
    with pytest.raises(ModelError):
        CohomologySpec((("e", 1),))
    with pytest.raises(ModelError):
        CohomologySpec((("a", 2), ("a", 3)))

    path = tmp_path / "s2s4.json"
    path.write_text(json.dumps([{"name": "a2", "degree": 2}, {"name": "b4", "degree": 4}]))
    spec = resolve_spec(str(path))
    assert spec.classes == (("a2", 2), ("b4", 4))
    assert spec.name == "s2s4"
    assert resolve_spec("s2") is BUILTIN_SPECS["s2"]


@pytest.mark.slow
def test_wedge_cap_12_acceptance():
    model = build(WEDGE, 12)
    report = verify(model)
    assert report.passed, report.violations
    assert report.h_dims == (1, 0, 1, 2) + (0,) * 8
    lie = free_lie_dimensions([1, 2, 2], 11)
    assert model.degree_counts() == {k + 1: n for k, n in lie.items() if n}
    assert cohomology(model.cdga, 11).h_dim == 0
