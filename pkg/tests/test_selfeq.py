import pytest

from sullivan import linalg
from sullivan.bigraded import BUILTIN_SPECS, build
from sullivan.errors import ExtensionError, MorphismError
from sullivan.selfeq import (CdgaMorphism, cohomology_matrix, compose, construct_phi, defect_cycle,
                             e_sharp_report, extend_linear, extend_phi, identity_morphism, invert,
                             is_chain_map, is_two_sided_inverse, kill_circle,
                             linear_part_identity_up_to, nontriviality_witness, seed_phi)


def _img(phi, name):
    return phi.model.context.format(phi.image(name))


def test_seed(wedge6x):
    phi = seed_phi(wedge6x)
    ctx = wedge6x.context
    assert _img(phi, "c3") == "c3 + a2*x"
    assert _img(phi, "a2") == "a2"
    assert _img(phi, "b3") == "b3"
    assert _img(phi, "x") == "x"
    assert list(ctx.word_split(phi.image("c3") - ctx.gen("c3"))) == [2]
    assert not phi.is_total


def test_seed_needs_the_wedge_and_the_circle(wedge6):
    with pytest.raises(MorphismError):
        seed_phi(wedge6)
    with pytest.raises(MorphismError):
        seed_phi(build(BUILTIN_SPECS["s2"], 5).with_circle())


def test_first_stage_extension(wedge6x):
    phi = extend_phi(seed_phi(wedge6x), wedge6x, 1)
    ctx = wedge6x.context
    assert _img(phi, "w1_3_0") == "w1_3_0"
    assert _img(phi, "w1_4_0") == "w1_4_0"
    assert _img(phi, "w1_4_1") == "w1_4_1 + w1_3_0*x"
    assert _img(phi, "w1_5_0") == "w1_5_0 + w1_4_0*x"
    assert defect_cycle(phi, "w1_4_1") == ctx.parse("a2^2")
    assert defect_cycle(phi, "w1_3_0").is_zero


def test_construct_phi(phi6, wedge6x):
    ctx = wedge6x.context
    x = ctx.circle.id
    assert phi6.is_total
    assert _img(phi6, "x") == "x"
    for g in wedge6x.context.generators:
        diff = phi6.image(g.id) - ctx.gen(g.id)
        assert all(any(h == x for h, _ in m) for m in diff.monomials())
    again = construct_phi(wedge6x)
    assert again.format() == phi6.format()


def test_chain_map(phi6, wedge6x):
    report = is_chain_map(phi6)
    assert report.passed and report.unverifiable == ()
    assert is_chain_map(identity_morphism(wedge6x.cdga)).passed


def test_chain_map_failure_location(phi6, wedge6x):
    ctx = wedge6x.context
    broken = phi6.with_images({"w1_4_1": ctx.gen("w1_4_1")})
    assert is_chain_map(broken).first_failure == "w1_4_1"

    misseeded = phi6.with_images({"c3": ctx.parse("c3 + w1_3_0")})
    assert is_chain_map(misseeded).first_failure == "c3"


def test_misseeded_extension_fails(wedge6x):
    ctx = wedge6x.context
    seed = seed_phi(wedge6x).with_images({"c3": ctx.parse("c3 + w1_3_0")})
    with pytest.raises(ExtensionError, match="not of the form"):
        extend_phi(seed, wedge6x, 1)


def test_degree_violating_image_is_rejected(wedge6x):
    ctx = wedge6x.context
    with pytest.raises(MorphismError):
        seed_phi(wedge6x).with_images({"c3": ctx.parse("c3 + b3*x")})


def test_e_sharp_membership_and_moved_class(phi6):
    report = e_sharp_report(phi6, 3)
    assert report.is_member and report.is_chain_map
    assert report.linear_part_identity_up_to == 6
    assert len(report.moved_classes) == 1
    moved = report.moved_classes[0]
    assert (moved.degree, moved.source, moved.image) == (3, "[c3]", "[a2*x] + [c3]")
    assert moved.coordinates == (1, 0, 1)
    assert all(e_sharp_report(phi6, m).is_member for m in range(1, 7))
    assert nontriviality_witness(phi6)


def test_cohomology_matrix_in_degree_three(phi6):
    rows = linalg.to_rows(cohomology_matrix(phi6, 3))
    assert rows == [[1, 0, 1], [0, 1, 0], [0, 0, 1]]
    for k in (0, 1, 2, 4, 5):
        M = linalg.to_rows(cohomology_matrix(phi6, k))
        assert M == [[int(i == j) for j in range(len(M))] for i in range(len(M))]


def test_identity_is_a_trivial_member(wedge6x):
    ident = identity_morphism(wedge6x.cdga)
    report = e_sharp_report(ident, 6)
    assert report.is_member and report.moved_classes == ()
    assert not nontriviality_witness(ident)


def test_swap_is_not_a_member(wedge6x):
    ctx = wedge6x.context
    swap = extend_linear(wedge6x, {"b3": ctx.gen("c3"), "c3": ctx.gen("b3")})
    assert is_chain_map(swap).passed
    assert _img(swap, "w1_4_0") == "w1_4_1"
    assert _img(swap, "w1_5_0") == "-w1_5_0"
    assert linear_part_identity_up_to(swap) == 2
    assert e_sharp_report(swap, 2).is_member
    assert not e_sharp_report(swap, 3).is_member


def test_invert(phi6, wedge6x):
    psi = invert(phi6)
    assert _img(psi, "c3") == "c3 - a2*x"
    assert is_two_sided_inverse(phi6, psi)
    assert is_chain_map(psi).passed
    ident = identity_morphism(wedge6x.cdga)
    assert invert(ident).format() == ident.format()


def test_invert_singular_linear_part(wedge6x):
    zero = CdgaMorphism(wedge6x.cdga, {g.id: wedge6x.context.gen(g.id).scale(0)
                                       for g in wedge6x.context.generators})
    with pytest.raises(MorphismError):
        invert(zero)


def test_kill_circle_gives_the_identity(phi6):
    reduced = kill_circle(phi6)
    ctx = reduced.model.context
    assert ctx.circle is None
    assert all(reduced.image(g.id) == ctx.gen(g.id) for g in ctx.generators)


def test_compose_across_models_is_rejected(phi6, wedge6):
    with pytest.raises(MorphismError):
        compose(phi6, identity_morphism(wedge6.cdga))


@pytest.mark.slow
def test_cap_12_self_equivalence():
    model = build(BUILTIN_SPECS["wedge-s2-s3-s3"], 12).with_circle()
    phi = construct_phi(model)
    assert is_chain_map(phi).passed
    assert linear_part_identity_up_to(phi) == 12
    assert nontriviality_witness(phi)
    assert is_two_sided_inverse(phi, invert(phi))
