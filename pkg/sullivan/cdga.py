"""
sullivan.cdga – differentials on free graded-commutative algebras.

A ``CdgaModel`` is an ``AlgebraContext`` plus the value of d on every
generator.  d is extended as a degree +1 derivation,

    d(uv) = d(u)·v + (-1)^|u| u·d(v),

and cohomology is computed degree by degree from exact ranks.  When every
d(g) has stage exactly stage(g) - 1 (the bigraded case) each degree splits
into independent stage blocks, which keeps the matrices small.

Truncation rule: apply_d() drops every term above the limit (default: the
cap) and reports it through ``DiffResult.overflow``.
"""

from __future__ import annotations
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

import networkx as nx

from sullivan.algebra import AlgebraContext, Generator, Monomial, Polynomial, word_length
from sullivan.errors import DegreeCapError, ModelError, NotACocycleError
from sullivan import linalg


class DiffResult(NamedTuple):
    value: Polynomial
    overflow: bool


# -------------------------------------------------- #
class CdgaModel:
    """(ΛV, d) with d given on generators; immutable after construction."""

    def __init__(self, context: AlgebraContext, differential: Mapping[Union[int, str], Polynomial] | None = None):
        self.context = context
        diff: Dict[int, Polynomial] = {}
        for ref, p in (differential or {}).items():
            diff[context.generator(ref).id] = p

        n = len(context)
        for gid, p in diff.items():
            g = context.generators[gid]
            for mono in p.monomials():
                if any(h >= n or h < 0 for h, _ in mono):
                    raise ModelError(f"d({g.name}) references a generator outside the table")
                if context.degree(mono) != g.degree + 1:
                    raise ModelError(f"d({g.name}) must be homogeneous of degree {g.degree + 1}")
                if word_length(mono) < 2:
                    raise ModelError(f"d({g.name}) has a linear term; the model must be minimal")
        self._d: Tuple[Polynomial, ...] = tuple(diff.get(i, Polynomial.zero()) for i in range(n))
        self._mono_cache: Dict[Monomial, Polynomial] = {}
        self._coh_cache: Dict[int, "CohomologyReport"] = {}
        self._stage_graded: Optional[bool] = None

    # -------------------------------------------------- #
    @property
    def generators(self) -> Tuple[Generator, ...]:
        return self.context.generators

    @property
    def cap(self) -> int:
        return self.context.cap

    def d_of(self, ref: Union[int, str]) -> Polynomial:
        """Stored differential of one generator."""
        return self._d[self.context.generator(ref).id]

    @property
    def differential(self) -> Dict[int, Polynomial]:
        return {i: p for i, p in enumerate(self._d) if p}

    def is_stage_graded(self) -> bool:
        """True when d lowers the stage of every generator by exactly one."""
        if self._stage_graded is None:
            ctx = self.context
            self._stage_graded = all(
                ctx.stage(m) == g.stage - 1
                for g, p in zip(ctx.generators, self._d) for m in p.monomials()
            )
        return self._stage_graded

    # -------------------------------------------------- #
    def _d_monomial(self, mono: Monomial) -> Polynomial:
        cached = self._mono_cache.get(mono)
        if cached is not None:
            return cached
        ctx = self.context
        out: Dict[Monomial, Fraction] = {}
        degs = [ctx.generators[g].degree * e for g, e in mono]
        total = sum(degs)
        prefix = 0
        for i, (g, e) in enumerate(mono):
            dg = self._d[g]
            suffix = total - prefix - degs[i]
            if dg:
                rest = mono[:i] + (((g, e - 1),) if e > 1 else ()) + mono[i + 1:]
                deg_dg = ctx.generators[g].degree + 1
                sign = -1 if (prefix + deg_dg * suffix) % 2 else 1
                for m2, c2 in dg.items():
                    res = ctx.multiply_monomials(rest, m2)
                    if res is None:
                        continue
                    s, prod = res
                    out[prod] = out.get(prod, 0) + sign * s * e * c2
            prefix += degs[i]
        result = Polynomial(out)
        self._mono_cache[mono] = result
        return result

    def apply_d(self, p: Polynomial, *, limit: int | None = None) -> DiffResult:
        """d(p) as a derivation; terms above *limit* (default cap) dropped and flagged."""
        bound = self.cap if limit is None else limit
        out: Dict[Monomial, Fraction] = {}
        overflow = False
        for mono, coef in p.items():
            dm = self._d_monomial(mono)
            if not dm:
                continue
            if self.context.degree(mono) + 1 > bound:
                overflow = True
                continue
            for m2, c2 in dm.items():
                out[m2] = out.get(m2, 0) + coef * c2
        return DiffResult(Polynomial(out), overflow)

    def d(self, p: Polynomial, *, limit: int | None = None) -> Polynomial:
        """apply_d() without the overflow flag (callers that already bound degrees)."""
        return self.apply_d(p, limit=limit).value

    # -------------------------------------------------- #
    def adjoin(self, new: Sequence[Tuple[str, int, int, Polynomial]], *, circle: bool = False) -> "CdgaModel":
        """Model with (name, degree, stage, d) generators appended."""
        ctx = self.context.with_generators([(n, deg, st) for n, deg, st, _ in new], circle=circle)
        diff = dict(self.differential)
        for i, (_, _, _, p) in enumerate(new):
            diff[len(self.context) + i] = p
        return CdgaModel(ctx, diff)

    def adjoin_circle(self, name: str = "x") -> "CdgaModel":
        return adjoin_circle(self, name)

    def matrix_of_d(self, source: Sequence[Monomial], target: Sequence[Monomial] | None = None,
                    *, limit: int | None = None) -> linalg.RationalMatrix:
        """
        d restricted to span(source), in coordinates of *target* (columns =
        source).  Without a target the rows are the monomials the images
        actually hit, in canonical order.
        """
        images = [self.apply_d(Polynomial.monomial(m), limit=limit).value for m in source]
        if target is None:
            target = sorted({m for img in images for m in img.monomials()})
        index = {m: i for i, m in enumerate(target)}
        data: Dict[int, Dict[int, Fraction]] = {}
        for j, (mono, image) in enumerate(zip(source, images)):
            for m2, c in image.items():
                try:
                    data.setdefault(index[m2], {})[j] = c
                except KeyError:
                    raise ModelError(f"d({self.context.format_monomial(mono)}) leaves the target basis") from None
        return linalg.sparse_rational_matrix(data, (len(target), len(source)))


# -------------------------------------------------- #
def adjoin_circle(model: CdgaModel, name: str = "x") -> CdgaModel:
    """(ΛV, d) ⊗ (Λx, 0) with x of degree 1, stage 0."""
    if model.context.circle is not None:
        raise ModelError(f"circle generator {model.context.circle.name!r} already present")
    return model.adjoin([(name, 1, 0, Polynomial.zero())], circle=True)


def dependency_graph(model: CdgaModel) -> nx.DiGraph:
    """Edge g -> h whenever g occurs in d(h)."""
    g = nx.DiGraph()
    for gen in model.generators:
        g.add_node(gen.id, name=gen.name, degree=gen.degree, stage=gen.stage)
    for h, p in model.differential.items():
        for mono in p.monomials():
            for gid, _ in mono:
                g.add_edge(gid, h)
    return g


def remove_generators(model: CdgaModel, names: Iterable[str]) -> Tuple[CdgaModel, Dict[int, int]]:
    """
    Delete generators plus everything whose differential depends on them.
    Returns the new model and the old-id -> new-id map of the survivors.
    """
    graph = dependency_graph(model)
    doomed = set()
    for name in names:
        gid = model.context.generator(name).id
        doomed.add(gid)
        doomed.update(nx.descendants(graph, gid))

    keep = [g for g in model.generators if g.id not in doomed]
    remap = {g.id: i for i, g in enumerate(keep)}
    ctx = AlgebraContext([Generator(remap[g.id], g.name, g.degree, g.stage, g.circle) for g in keep],
                         model.cap)

    def move(p: Polynomial) -> Polynomial:
        return Polynomial({tuple((remap[h], e) for h, e in mono): c for mono, c in p.items()})

    diff = {remap[h]: move(p) for h, p in model.differential.items() if h in remap}
    return CdgaModel(ctx, diff), remap


# -------------------------------------------------- #
@dataclass(frozen=True)
class DSquaredReport:
    passed: bool
    first_failure: Optional[str] = None
    failures: Tuple[str, ...] = ()
    unverifiable: Tuple[str, ...] = ()


def check_d_squared(model: CdgaModel, *, limit: int | None = None) -> DSquaredReport:
    """d(d(g)) = 0 for every generator whose check fits below *limit*."""
    bound = model.cap if limit is None else limit
    failures, unverifiable = [], []
    for g in model.generators:
        if g.degree + 2 > bound:
            unverifiable.append(g.name)
            continue
        dd = model.apply_d(model.d_of(g.id), limit=bound)
        if dd.overflow:
            unverifiable.append(g.name)
        elif dd.value:
            failures.append(g.name)
    return DSquaredReport(not failures, failures[0] if failures else None, tuple(failures), tuple(unverifiable))


# -------------------------------------------------- #
# cohomology
# -------------------------------------------------- #
@dataclass(frozen=True)
class _Block:
    stage: Optional[int]
    basis: Tuple[Monomial, ...]
    representatives: Tuple[linalg.SparseVector, ...]
    coboundaries: Tuple[linalg.SparseVector, ...]


@dataclass(frozen=True)
class CohomologyReport:
    degree: int
    cocycle_dim: int
    coboundary_dim: int
    h_dim: int
    representatives: Tuple[Polynomial, ...]
    blocks: Tuple[_Block, ...] = field(default=(), repr=False, compare=False)


def _blocks_of(model: CdgaModel, k: int) -> List[Tuple[Optional[int], List[Monomial], List[Monomial], List[Monomial]]]:
    """(stage, C^{k-1} part, C^k part, C^{k+1} part) for every block of degree k."""
    ctx = model.context
    prev = ctx.basis_of(k - 1) if k >= 1 else []
    here = ctx.basis_of(k)
    nxt  = ctx.basis_of(k + 1)
    if not model.is_stage_graded():
        return [(None, prev, here, nxt)]

    def by_stage(basis):
        out: Dict[int, List[Monomial]] = {}
        for m in basis:
            out.setdefault(ctx.stage(m), []).append(m)
        return out

    p, h, n = by_stage(prev), by_stage(here), by_stage(nxt)
    return [(s, p.get(s + 1, []), h[s], n.get(s - 1, [])) for s in sorted(h)]


def _vector(p: Polynomial, index: Dict[Monomial, int]) -> linalg.SparseVector:
    return {index[m]: c for m, c in p.items()}


def cohomology(model: CdgaModel, k: int) -> CohomologyReport:
    """Exact H^k; needs k <= cap - 1 so that C^{k+1} is complete."""
    if k < 0:
        return CohomologyReport(k, 0, 0, 0, ())
    if k > model.cap - 1:
        raise DegreeCapError(f"H^{k} needs degree {k + 1} but the cap is {model.cap}")
    cached = model._coh_cache.get(k)
    if cached is not None:
        return cached

    ctx = model.context
    cocycles = coboundaries = 0
    reps: List[Polynomial] = []
    blocks: List[_Block] = []
    for stage, prev, here, nxt in _blocks_of(model, k):
        d_here = model.matrix_of_d(here, nxt)
        d_prev = model.matrix_of_d(prev, here)
        z = len(here) - linalg.rank(d_here)
        b = linalg.rank(d_prev)
        cocycles += z
        coboundaries += b
        if z == b:
            blocks.append(_Block(stage, tuple(here), (), ()))
            continue

        index = {m: i for i, m in enumerate(here)}
        kernel = linalg.kernel_basis(d_here, sparse=True)
        images = [_vector(model.d(Polynomial.monomial(m)), index) for m in prev]
        images = [v for v in images if v]
        q = linalg.quotient_dimension(images, kernel, len(here))
        if q.dimension != z - b:
            raise ModelError(f"H^{k}: rank count {z - b} disagrees with quotient {q.dimension}")
        chosen = q.pick(kernel)
        reps.extend(Polynomial({here[i]: c for i, c in v.items()}) for v in chosen)
        blocks.append(_Block(stage, tuple(here), tuple(chosen), tuple(images)))

    report = CohomologyReport(k, cocycles, coboundaries, cocycles - coboundaries, tuple(reps), tuple(blocks))
    model._coh_cache[k] = report
    return report


def class_of(model: CdgaModel, p: Polynomial, k: int) -> List[Fraction]:
    """Coordinates of [p] against cohomology(model, k).representatives."""
    if p and model.context.homogeneous_degree(p) != k:
        raise NotACocycleError(f"element is not homogeneous of degree {k}")
    if model.d(p, limit=k + 1):
        raise NotACocycleError(f"d({model.context.format(p)}) != 0")
    report = cohomology(model, k)

    coords: List[Fraction] = []
    remaining = dict(p.items())
    for block in report.blocks:
        index = {m: i for i, m in enumerate(block.basis)}
        part = {index[m]: c for m, c in p.items() if m in index}
        for m in list(remaining):
            if m in index:
                del remaining[m]
        if not block.representatives:
            continue
        cols = list(block.representatives) + list(block.coboundaries)
        x = linalg.solve(linalg.columns_matrix(cols, len(block.basis)), part)
        if x is None:
            raise NotACocycleError("cocycle is not in the span of representatives and coboundaries")
        coords.extend(x[:len(block.representatives)])
    if remaining:
        raise NotACocycleError("element has terms outside the degree basis")
    return coords

