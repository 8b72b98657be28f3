"""
sullivan.selfeq – a non-trivial self-equivalence of (ΛW, d) ⊗ (Λx, 0).

The automorphism φ is seeded on stage 0 and x,

    φ(a2) = a2,  φ(b3) = b3,  φ(c3) = c3 + a2·x,  φ(x) = x,

and extended one stage at a time: for w in stage m the defect
φ(dw) − dw is α·x with α a quadratic cycle, α = d(w′) for a unique w′ in
the span of the generators one stage up, and φ(w) = w + w′·x.  x is always
the last generator, so it sits rightmost in every normalized monomial and
d(w′·x) = d(w′)·x needs no sign.

Public API
----------
    CdgaMorphism, identity_morphism, compose
    seed_phi, extend_phi, construct_phi, extend_linear
    is_chain_map, e_sharp_report, cohomology_matrix
    invert, kill_circle
"""

from __future__ import annotations
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

from sullivan.algebra import Monomial, Polynomial, word_length
from sullivan.bigraded import BUILTIN_SPECS, BigradedModel
from sullivan.cdga import CdgaModel, class_of, cohomology, remove_generators
from sullivan.errors import ExtensionError, MorphismError, SingularMatrixError
from sullivan.workers import run_parallel
from sullivan import linalg

WEDGE = BUILTIN_SPECS["wedge-s2-s3-s3"]


# -------------------------------------------------- #
class CdgaMorphism:
    """Algebra endomorphism of one model, given on (some of) its generators."""

    def __init__(self, model: CdgaModel, images: Mapping[Union[int, str], Polynomial]):
        self.model = model
        ctx = model.context
        out: Dict[int, Polynomial] = {}
        for ref, p in images.items():
            g = ctx.generator(ref)
            if p and ctx.homogeneous_degree(p) != g.degree:
                raise MorphismError(f"image of {g.name} is not homogeneous of degree {g.degree}: {ctx.format(p)}")
            out[g.id] = p
        self.images = out
        self._cache: Dict[Monomial, Polynomial] = {}

    @property
    def is_total(self) -> bool:
        return len(self.images) == len(self.model.context)

    def image(self, ref: Union[int, str]) -> Polynomial:
        g = self.model.context.generator(ref)
        try:
            return self.images[g.id]
        except KeyError:
            raise MorphismError(f"morphism undefined on {g.name}") from None

    def with_images(self, extra: Mapping[Union[int, str], Polynomial]) -> "CdgaMorphism":
        merged: Dict[Union[int, str], Polynomial] = dict(self.images)
        merged.update({self.model.context.generator(r).id: p for r, p in extra.items()})
        return CdgaMorphism(self.model, merged)

    def _apply_monomial(self, mono: Monomial) -> Polynomial:
        cached = self._cache.get(mono)
        if cached is None:
            ctx = self.model.context
            limit = max(ctx.cap, ctx.degree(mono))
            cached = Polynomial.one()
            for g, e in mono:
                for _ in range(e):
                    cached = ctx.multiply(cached, self.image(g), limit=limit)
            self._cache[mono] = cached
        return cached

    def apply(self, p: Polynomial) -> Polynomial:
        """Extension to ΛV as an algebra map (degree preserving, so no cap issue)."""
        out: Dict[Monomial, Fraction] = {}
        for mono, coef in p.items():
            for m2, c2 in self._apply_monomial(mono).items():
                out[m2] = out.get(m2, 0) + coef * c2
        return Polynomial(out)

    def __call__(self, p: Polynomial) -> Polynomial:
        return self.apply(p)

    def format(self) -> Dict[str, str]:
        ctx = self.model.context
        return {ctx.generators[i].name: ctx.format(p) for i, p in sorted(self.images.items())}


def identity_morphism(model: CdgaModel) -> CdgaMorphism:
    return CdgaMorphism(model, {g.id: model.context.gen(g.id) for g in model.generators})


def compose(f: CdgaMorphism, g: CdgaMorphism) -> CdgaMorphism:
    """f ∘ g (apply g first)."""
    if f.model is not g.model:
        raise MorphismError("cannot compose morphisms of different models")
    return CdgaMorphism(g.model, {i: f.apply(p) for i, p in g.images.items()})


# -------------------------------------------------- #
# construction of φ
# -------------------------------------------------- #
def _require_circle(model: BigradedModel):
    x = model.circle
    if x is None:
        raise MorphismError("model has no circle generator; call with_circle() first")
    return x


def seed_phi(model: BigradedModel) -> CdgaMorphism:
    """φ on a2, b3, c3 and x."""
    if model.spec.classes != WEDGE.classes:
        raise MorphismError(f"the seed needs the {WEDGE.name} cohomology, got {model.spec.name}")
    if model.skipped:
        raise MorphismError(f"cap {model.cap} drops {', '.join(model.skipped)}")
    x = _require_circle(model)
    ctx = model.context
    return CdgaMorphism(model.cdga, {
        "a2": ctx.gen("a2"),
        "b3": ctx.gen("b3"),
        "c3": ctx.gen("c3") + ctx.multiply(ctx.gen("a2"), ctx.gen(x.id)),
        x.id: ctx.gen(x.id),
    })


def defect_cycle(phi: CdgaMorphism, w: Union[int, str]) -> Polynomial:
    """α with φ(dw) − dw = α·x; the defect must be divisible by x."""
    model = phi.model
    ctx = model.context
    x = ctx.circle
    g = ctx.generator(w)
    dw = model.d_of(g.id)
    defect = phi.apply(dw) - dw

    alpha: Dict[Monomial, Fraction] = {}
    for mono, c in defect.items():
        if not mono or mono[-1] != (x.id, 1):
            raise ExtensionError(f"defect of {g.name} not of the form α·x: {ctx.format(defect)}")
        alpha[mono[:-1]] = c
    out = Polynomial(alpha)
    if any(word_length(m) != 2 for m in out.monomials()):
        raise ExtensionError(f"defect α of {g.name} is not quadratic: {ctx.format(out)}")
    if model.d(out, limit=g.degree + 1):
        raise ExtensionError(f"α not a cycle for {g.name}: {ctx.format(out)}")
    return out


def _solve_among(model: BigradedModel, target: Polynomial, stage: int, degree: int,
                 what: str) -> Polynomial:
    """Unique w′ in span(stage-*stage*, degree-*degree* generators) with d(w′) = target."""
    ctx = model.context
    gens = [g for g in model.stage_generators(stage) if g.degree == degree]
    images = [model.cdga.d_of(g.id) for g in gens]
    rows = sorted({m for p in images for m in p.monomials()} | set(target.monomials()))
    index = {m: i for i, m in enumerate(rows)}
    M = linalg.columns_matrix([{index[m]: c for m, c in p.items()} for p in images], len(rows))
    if linalg.rank(M) != len(gens):
        raise ExtensionError(f"{what}: d is not injective on stage {stage}, degree {degree}")
    sol = linalg.solve(M, [target.coefficient(m) for m in rows])
    if sol is None:
        raise ExtensionError(f"{what}: α not a boundary: {ctx.format(target)}")
    out = Polynomial.zero()
    for g, c in zip(gens, sol):
        if c:
            out = out + ctx.gen(g.id).scale(c)
    return out


def extend_phi(phi: CdgaMorphism, model: BigradedModel, m: int) -> CdgaMorphism:
    """Define φ on every stage-m generator, assuming stages < m are done."""
    ctx = model.context
    x = _require_circle(model)
    new: Dict[int, Polynomial] = {}
    moved = 0
    for g in model.stage_generators(m):
        alpha = defect_cycle(phi, g.id)
        w_prime = Polynomial.zero()
        for j, part in ctx.stage_split(alpha).items():
            w_prime = w_prime + _solve_among(model, part, j + 1, g.degree - 1, g.name)
        image = ctx.gen(g.id)
        if w_prime:
            image = image + ctx.multiply(w_prime, ctx.gen(x.id), limit=g.degree)
            moved += 1
        new[g.id] = image
    if new:
        print(f"[selfeq] stage {m}: {len(new)} generators, {moved} with an x-term")
    return phi.with_images(new)


def construct_phi(model: BigradedModel) -> CdgaMorphism:
    phi = seed_phi(model)
    for m in range(1, model.top_stage + 1):
        phi = extend_phi(phi, model, m)
    return phi


def extend_linear(model: BigradedModel, seed: Mapping[str, Polynomial]) -> CdgaMorphism:
    """
    Extend a linear automorphism of W_0 over every stage by solving
    d(φ(w)) = φ(dw) inside W_m; x (if present) is fixed.
    """
    ctx = model.context
    images: Dict[Union[int, str], Polynomial] = {g.id: ctx.gen(g.id) for g in model.stage_generators(0)}
    for name, p in seed.items():
        g = ctx.generator(name)
        if g.stage != 0 or g.circle:
            raise MorphismError(f"seed must act on stage-0 generators, got {g.name}")
        if any(word_length(mm) != 1 or ctx.stage(mm) != 0 for mm in p.monomials()):
            raise MorphismError(f"seed image of {g.name} must be linear in stage 0")
        images[g.id] = p
    if model.circle is not None:
        images[model.circle.id] = ctx.gen(model.circle.id)
    phi = CdgaMorphism(model.cdga, images)

    for m in range(1, model.top_stage + 1):
        new = {g.id: _solve_among(model, phi.apply(model.cdga.d_of(g.id)), m, g.degree, g.name)
               for g in model.stage_generators(m)}
        phi = phi.with_images(new)
    return phi


# -------------------------------------------------- #
# checks
# -------------------------------------------------- #
@dataclass(frozen=True)
class ChainMapReport:
    passed: bool
    first_failure: Optional[str] = None
    failures: Tuple[str, ...] = ()
    unverifiable: Tuple[str, ...] = ()


def is_chain_map(phi: CdgaMorphism, *, limit: int | None = None) -> ChainMapReport:
    """φ(dg) = d(φ g) for every generator whose check stays within *limit* (default cap + 1)."""
    model = phi.model
    bound = model.cap + 1 if limit is None else limit

    def check(g) -> Optional[bool]:
        if g.degree + 1 > bound:
            return None
        rhs = model.apply_d(phi.image(g.id), limit=bound)
        if rhs.overflow:
            return None
        return phi.apply(model.d_of(g.id)) == rhs.value

    results = run_parallel(check, list(model.generators))
    failures = tuple(g.name for g, ok in zip(model.generators, results) if ok is False)
    unverifiable = tuple(g.name for g, ok in zip(model.generators, results) if ok is None)
    return ChainMapReport(not failures, failures[0] if failures else None, failures, unverifiable)


def cohomology_matrix(phi: CdgaMorphism, k: int) -> linalg.RationalMatrix:
    """H^k(φ) in the representative basis of cohomology(model, k); column j = image of class j."""
    report = cohomology(phi.model, k)
    cols = [class_of(phi.model, phi.apply(rep), k) for rep in report.representatives]
    return linalg.columns_matrix(cols, report.h_dim)


@dataclass(frozen=True)
class MovedClass:
    degree: int
    source: str                      # representative of the moved class
    coordinates: Tuple[Fraction, ...]
    image: str                       # H(φ)[source] as a combination of classes


@dataclass(frozen=True)
class ESharpReport:
    m: int
    is_member: bool
    is_chain_map: bool
    linear_part_identity_up_to: int
    moved_classes: Tuple[MovedClass, ...] = ()


def linear_part_identity_up_to(phi: CdgaMorphism) -> int:
    """Largest D such that φ(v) − v is decomposable for every generator of degree <= D."""
    ctx = phi.model.context
    bad = [g.degree for g in phi.model.generators
           if ctx.word_split(phi.image(g.id) - ctx.gen(g.id)).get(1)]
    return min(bad) - 1 if bad else phi.model.cap


def _moved_in_degree(phi: CdgaMorphism, k: int) -> List[MovedClass]:
    ctx = phi.model.context
    report = cohomology(phi.model, k)
    rows = linalg.to_rows(cohomology_matrix(phi, k))
    names = [f"[{ctx.format(r)}]" for r in report.representatives]
    out = []
    for j, rep in enumerate(names):
        col = tuple(rows[i][j] for i in range(report.h_dim))
        if any(c != (1 if i == j else 0) for i, c in enumerate(col)):
            terms = [(names[i] if c == 1 else f"{c}*{names[i]}") for i, c in enumerate(col) if c]
            out.append(MovedClass(k, rep, col, " + ".join(terms) if terms else "0"))
    return out


def e_sharp_report(phi: CdgaMorphism, m: int) -> ESharpReport:
    """Membership in the group of self-equivalences inducing the identity below degree m."""
    return e_sharp_reports(phi, [m])[0]


def e_sharp_reports(phi: CdgaMorphism, ms: Iterable[int]) -> List[ESharpReport]:
    """One report per m; the chain-map and cohomology work is shared."""
    model = phi.model
    ms = list(ms)
    for m in ms:
        if m > model.cap:
            raise MorphismError(f"m = {m} exceeds the cap {model.cap}")
    chain = is_chain_map(phi)
    up_to = linear_part_identity_up_to(phi)
    moved = run_parallel(lambda k: _moved_in_degree(phi, k), range(model.cap))
    moved_classes = tuple(c for batch in moved for c in batch)
    return [ESharpReport(m=m, is_member=chain.passed and up_to >= m, is_chain_map=chain.passed,
                         linear_part_identity_up_to=up_to, moved_classes=moved_classes)
            for m in ms]


def nontriviality_witness(phi: CdgaMorphism) -> bool:
    """H^3(φ)[c3] = [c3] + [a2·x] with [a2·x] != 0."""
    model = phi.model
    ctx = model.context
    x = ctx.circle
    if x is None or model.cap < 4:
        return False
    c3 = ctx.gen("c3")
    a2x = ctx.multiply(ctx.gen("a2"), ctx.gen(x.id))
    shift = class_of(model, a2x, 3)
    if not any(shift):
        return False
    expected = [u + v for u, v in zip(class_of(model, c3, 3), shift)]
    return class_of(model, phi.apply(c3), 3) == expected


def is_two_sided_inverse(phi: CdgaMorphism, psi: CdgaMorphism) -> bool:
    ctx = phi.model.context
    for f in (compose(psi, phi), compose(phi, psi)):
        if any(f.image(g.id) != ctx.gen(g.id) for g in phi.model.generators):
            return False
    return True


# -------------------------------------------------- #
# inverse and reductions
# -------------------------------------------------- #
def invert(phi: CdgaMorphism) -> CdgaMorphism:
    """
    ψ with ψ∘φ = id, built degree by degree: φ(g) = L(g) + N(g) with N
    decomposable in lower degrees, so ψ(g) follows from L⁻¹ and ψ on lower
    degrees.
    """
    if not phi.is_total:
        raise MorphismError("cannot invert a partial morphism")
    model = phi.model
    ctx = model.context
    psi = CdgaMorphism(model, {})
    by_degree: Dict[int, List[int]] = {}
    for g in model.generators:
        by_degree.setdefault(g.degree, []).append(g.id)

    for k, gids in sorted(by_degree.items()):
        pos = {gid: i for i, gid in enumerate(gids)}
        L: Dict[int, Dict[int, Fraction]] = {}
        rhs: List[Polynomial] = []
        for r, gid in enumerate(gids):
            parts = ctx.word_split(phi.image(gid))
            for mono, c in parts.get(1, Polynomial.zero()).items():
                L.setdefault(r, {})[pos[mono[0][0]]] = c
            decomposable = Polynomial({mm: c for n, p in parts.items() if n != 1 for mm, c in p.items()})
            rhs.append(ctx.gen(gid) - psi.apply(decomposable))
        try:
            L_inv = linalg.to_rows(linalg.inverse(linalg.sparse_rational_matrix(L, (len(gids), len(gids)))))
        except SingularMatrixError as e:
            raise MorphismError(f"linear part of the morphism is not invertible in degree {k}") from e
        psi = psi.with_images({
            gid: _combine(L_inv[i], rhs) for i, gid in enumerate(gids)
        })
    return psi


def _combine(coefs: List[Fraction], polys: List[Polynomial]) -> Polynomial:
    out = Polynomial.zero()
    for c, p in zip(coefs, polys):
        if c:
            out = out + p.scale(c)
    return out


def kill_circle(phi: CdgaMorphism) -> CdgaMorphism:
    """φ with x ↦ 0: a morphism of (ΛW, d)."""
    model = phi.model
    x = model.context.circle
    if x is None:
        return phi
    reduced, remap = remove_generators(model, [x.name])

    def move(p: Polynomial) -> Polynomial:
        return Polynomial({tuple((remap[h], e) for h, e in mono): c for mono, c in p.items()
                           if all(h != x.id for h, _ in mono)})

    return CdgaMorphism(reduced, {remap[g]: move(p) for g, p in phi.images.items() if g != x.id})
