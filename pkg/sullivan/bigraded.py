"""
sullivan.bigraded – bigraded minimal models of cohomology with trivial products.

Construction, truncated at the degree cap:

    W_0      one closed generator per cohomology class
    W_{m+1}  one generator per basis cycle of (Λ²W_{≤m})_m ∩ ker d, with d
             mapping it onto that cycle (so d lowers the stage by one)

Stages are added until one contributes nothing in degrees <= cap.
verify() then certifies the result a posteriori: H ≅ the requested
cohomology, decomposable cocycles bound, d² = 0, the bigrading rule and the
stage isomorphisms.

Typical usage
-------------
model  = build(BUILTIN_SPECS["wedge-s2-s3-s3"], cap=8)
report = verify(model)
"""

from __future__ import annotations
import json
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import networkx as nx

from sullivan.algebra import AlgebraContext, Generator, Monomial, Polynomial, word_length
from sullivan.cdga import CdgaModel, check_d_squared, cohomology, dependency_graph, remove_generators
from sullivan.errors import ModelError
from sullivan.workers import run_parallel
from sullivan import linalg


# -------------------------------------------------- #
@dataclass(frozen=True)
class CohomologySpec:
    """Simply connected graded algebra with trivial products: named classes of degree >= 2."""
    classes: Tuple[Tuple[str, int], ...]
    name: str = "custom"

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple((str(n), int(d)) for n, d in self.classes))
        names = [n for n, _ in self.classes]
        if len(set(names)) != len(names):
            raise ModelError(f"spec {self.name}: class names must be unique")
        for n, d in self.classes:
            if d < 2:
                raise ModelError(f"spec {self.name}: class {n} has degree {d}; only simply connected input (degree >= 2) is supported")

    @property
    def max_degree(self) -> int:
        return max((d for _, d in self.classes), default=0)

    def count(self, degree: int) -> int:
        return sum(1 for _, d in self.classes if d == degree)

    def to_json(self) -> List[dict]:
        return [{"name": n, "degree": d} for n, d in self.classes]

    @classmethod
    def from_json(cls, obj, name: str = "custom") -> "CohomologySpec":
        """Accepts [{"name","degree"}...], [[name, degree]...] or {"name":..,"classes":[...]}."""
        if isinstance(obj, dict):
            return cls.from_json(obj.get("classes", []), obj.get("name", name))
        classes = []
        for item in obj:
            if isinstance(item, dict):
                classes.append((item["name"], item["degree"]))
            else:
                classes.append((item[0], item[1]))
        return cls(tuple(classes), name)


BUILTIN_SPECS: Dict[str, CohomologySpec] = {
    "wedge-s2-s3-s3": CohomologySpec((("a2", 2), ("b3", 3), ("c3", 3)), "wedge-s2-s3-s3"),
    "s2":             CohomologySpec((("a2", 2),), "s2"),
    "s3-wedge-s3":    CohomologySpec((("b3", 3), ("c3", 3)), "s3-wedge-s3"),
}


def resolve_spec(ref: str) -> CohomologySpec:
    """Built-in spec name, or path to a JSON spec file."""
    if ref in BUILTIN_SPECS:
        return BUILTIN_SPECS[ref]
    path = Path(ref)
    with path.open("r", encoding="utf-8") as fh:
        return CohomologySpec.from_json(json.load(fh), name=path.stem)


# -------------------------------------------------- #
@dataclass(frozen=True, eq=False)
class BigradedModel:
    cdga: CdgaModel
    stages: Mapping[int, Tuple[int, ...]]
    spec: CohomologySpec
    cap: int
    skipped: Tuple[str, ...] = ()          # spec classes above the cap

    @property
    def context(self) -> AlgebraContext:
        return self.cdga.context

    @property
    def top_stage(self) -> int:
        return max(self.stages, default=-1)

    @property
    def circle(self) -> Optional[Generator]:
        return self.context.circle

    def stage_generators(self, stage: int) -> List[Generator]:
        return [self.context.generators[i] for i in self.stages.get(stage, ())]

    def w_generators(self) -> List[Generator]:
        return [g for g in self.context.generators if not g.circle]

    def degree_counts(self) -> Dict[int, int]:
        """Number of W generators per degree."""
        out: Dict[int, int] = {}
        for g in self.w_generators():
            out[g.degree] = out.get(g.degree, 0) + 1
        return dict(sorted(out.items()))

    def with_circle(self, name: str = "x") -> "BigradedModel":
        """(ΛW, d) ⊗ (Λx, 0); x stays outside the stage table."""
        return replace(self, cdga=self.cdga.adjoin_circle(name))


def _stages_of(ctx: AlgebraContext) -> Dict[int, Tuple[int, ...]]:
    out: Dict[int, List[int]] = {}
    for g in ctx.generators:
        if not g.circle:
            out.setdefault(g.stage, []).append(g.id)
    return {s: tuple(ids) for s, ids in sorted(out.items())}


def from_cdga(cdga: CdgaModel, spec: CohomologySpec, skipped: Sequence[str] = ()) -> BigradedModel:
    return BigradedModel(cdga, _stages_of(cdga.context), spec, cdga.cap, tuple(skipped))


# -------------------------------------------------- #
# construction
# -------------------------------------------------- #
def build_stage_zero(spec: CohomologySpec, cap: int) -> BigradedModel:
    """W_0 ≅ H with d = 0; classes above the cap are recorded as skipped."""
    kept = [(n, d) for n, d in spec.classes if d <= cap]
    skipped = tuple(n for n, d in spec.classes if d > cap)
    if skipped:
        print(f"[builder] cap {cap} < {spec.max_degree}: skipping {', '.join(skipped)}")
    ctx = AlgebraContext([Generator(i, n, d, 0) for i, (n, d) in enumerate(kept)], cap)
    return BigradedModel(CdgaModel(ctx), _stages_of(ctx), spec, cap, skipped)


def _quadratic_basis(model: BigradedModel, m: int, k: int) -> List[Monomial]:
    ids = [g.id for g in model.w_generators()]
    return model.context.basis_of(k, word_length=2, stage=m, limit=model.cap + 1, generators=ids)


def quadratic_cycles(model: BigradedModel, m: int, k: int) -> List[Polynomial]:
    """Basis of ker d on the word-length-2, stage-m, degree-k component (k <= cap + 1)."""
    basis = _quadratic_basis(model, m, k)
    if not basis:
        return []
    if m == 0:
        return [Polynomial.monomial(b) for b in basis]
    D = model.cdga.matrix_of_d(basis, limit=model.cap + 2)
    return [Polynomial({basis[i]: c for i, c in v.items()})
            for v in linalg.kernel_basis(D, sparse=True)]


def extend_stage(model: BigradedModel, m: int) -> BigradedModel:
    """Adjoin W_{m+1}: one generator of degree k per basis cycle of degree k + 1."""
    if m != model.top_stage:
        raise ModelError(f"extend_stage({m}) called but the top built stage is {model.top_stage}")
    if model.circle is not None:
        raise ModelError("extend the model before adjoining the circle generator")

    degrees = list(range(3, model.cap + 1))
    cycles = run_parallel(lambda k: quadratic_cycles(model, m, k + 1), degrees)

    new = []
    for k, found in zip(degrees, cycles):
        if found and k < m + 3:
            raise ModelError(f"stage {m + 1} produced degree {k} < {m + 3}")
        for i, z in enumerate(found):
            new.append((f"w{m + 1}_{k}_{i}", k, m + 1, z))
    if not new:
        return model
    cdga = model.cdga.adjoin(new)
    return BigradedModel(cdga, _stages_of(cdga.context), model.spec, model.cap, model.skipped)


def build(spec: CohomologySpec, cap: int) -> BigradedModel:
    """Stage loop until a stage adds nothing below the cap (hard stop after cap stages)."""
    model = build_stage_zero(spec, cap)
    if not model.stages:
        return model
    for m in range(cap):
        before = len(model.context)
        model = extend_stage(model, m)
        added = model.stage_generators(m + 1)
        if len(model.context) == before:
            break
        degs = sorted({g.degree for g in added})
        print(f"[builder] stage {m + 1}: +{len(added)} generators (degrees {degs[0]}..{degs[-1]})")
    return model


def without(model: BigradedModel, names: Sequence[str]) -> BigradedModel:
    """Model with generators (and their dependants) removed"""
    cdga, _ = remove_generators(model.cdga, names)
    return from_cdga(cdga, model.spec, model.skipped)


# -------------------------------------------------- #
# verification
# -------------------------------------------------- #
@dataclass(frozen=True)
class Violation:
    check: str                      # cap | cohomology | decomposable | d_squared | bigrading | isomorphism
    degree: Optional[int]
    detail: str


@dataclass(frozen=True)
class VerifyReport:
    h_dims: Tuple[int, ...]
    violations: Tuple[Violation, ...] = ()
    unverifiable: Tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return not self.violations

    def failed_checks(self) -> List[str]:
        return sorted({v.check for v in self.violations})


def _degree_checks(model: BigradedModel, k: int) -> Tuple[int, List[Violation]]:
    cdga, ctx = model.cdga, model.context
    out: List[Violation] = []
    report = cohomology(cdga, k)
    expected = model.spec.count(k) + (1 if k == 0 else 0)
    if report.h_dim != expected:
        out.append(Violation("cohomology", k, f"dim H^{k} = {report.h_dim}, expected {expected}"))

    # decomposable cocycles: dim Z_dec must equal dim B (B ⊆ Z_dec by minimality)
    dec = ctx.basis_of(k, min_word_length=2)
    groups: Dict[Optional[int], List[Monomial]] = {}
    for mono in dec:
        groups.setdefault(ctx.stage(mono) if cdga.is_stage_graded() else None, []).append(mono)
    z_dec = sum(len(g) - linalg.rank(cdga.matrix_of_d(g)) for g in groups.values())
    if z_dec != report.coboundary_dim:
        out.append(Violation("decomposable", k,
                             f"{z_dec - report.coboundary_dim} decomposable cocycle class(es) do not bound, "
                             f"e.g. {_non_bounding_example(model, k)}"))
    return report.h_dim, out


def _non_bounding_example(model: BigradedModel, k: int) -> str:
    cdga, ctx = model.cdga, model.context
    dec = ctx.basis_of(k, min_word_length=2)
    index = {m: i for i, m in enumerate(dec)}
    kernel = linalg.kernel_basis(cdga.matrix_of_d(dec, ctx.basis_of(k + 1)), sparse=True)
    images = []
    for m in ctx.basis_of(k - 1) if k >= 1 else []:
        img = cdga.d(Polynomial.monomial(m))
        if img:
            images.append({index[x]: c for x, c in img.items()})
    q = linalg.quotient_dimension(images, kernel, len(dec))
    v = q.pick(kernel)[0]
    return ctx.format(Polynomial({dec[i]: c for i, c in v.items()}))


def _bigrading_checks(model: BigradedModel) -> List[Violation]:
    cdga, ctx = model.cdga, model.context
    out: List[Violation] = []
    for g in model.w_generators():
        dg = cdga.d_of(g.id)
        if g.stage == 0:
            if dg:
                out.append(Violation("bigrading", g.degree, f"d({g.name}) must vanish on W_0"))
            continue
        if not dg:
            out.append(Violation("bigrading", g.degree, f"d({g.name}) = 0 for a stage-{g.stage} generator"))
        elif any(word_length(m) != 2 or ctx.stage(m) != g.stage - 1 for m in dg.monomials()):
            out.append(Violation("bigrading", g.degree,
                                 f"d({g.name}) is not quadratic of stage {g.stage - 1}"))
    if not nx.is_directed_acyclic_graph(dependency_graph(cdga)):
        out.append(Violation("bigrading", None, "generator dependency graph has a cycle"))
    return out


def _isomorphism_checks(model: BigradedModel) -> List[Violation]:
    """d: W_{s+1}^k -> (Λ²W_{≤s})_s^{k+1} ∩ ker d is onto and injective for k <= cap."""
    ctx = model.context
    out: List[Violation] = []
    for s in range(model.top_stage + 1):
        for k in range(3, model.cap + 1):
            gens = [g for g in model.stage_generators(s + 1) if g.degree == k]
            cycles = quadratic_cycles(model, s, k + 1)
            if not gens and not cycles:
                continue
            images = [model.cdga.d_of(g.id) for g in gens]
            rows = _quadratic_basis(model, s, k + 1)
            rows += sorted({m for p in images for m in p.monomials()} - set(rows))
            index = {m: i for i, m in enumerate(rows)}
            r = linalg.rank(linalg.columns_matrix([{index[m]: c for m, c in p.items()} for p in images],
                                                  len(rows)))
            if r != len(gens) or r != len(cycles):
                out.append(Violation("isomorphism", k,
                                     f"stage {s + 1}: rank {r} from {len(gens)} generators "
                                     f"vs {len(cycles)} quadratic cycles in degree {k + 1}"))
    return out


def verify(model: BigradedModel) -> VerifyReport:
    violations: List[Violation] = []
    if model.skipped:
        violations.append(Violation("cap", None,
                                    f"cap {model.cap} below the top class degree {model.spec.max_degree}; "
                                    f"skipped {', '.join(model.skipped)}"))

    degrees = list(range(0, model.cap))
    results = run_parallel(lambda k: _degree_checks(model, k), degrees)
    h_dims = tuple(h for h, _ in results)
    for _, found in results:
        violations.extend(found)

    d2 = check_d_squared(model.cdga)
    for name in d2.failures:
        violations.append(Violation("d_squared", model.context.generator(name).degree, f"d(d({name})) != 0"))

    violations.extend(_bigrading_checks(model))
    violations.extend(_isomorphism_checks(model))
    return VerifyReport(h_dims, tuple(violations), d2.unverifiable)
