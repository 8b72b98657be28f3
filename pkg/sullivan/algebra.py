"""
sullivan.algebra – free graded-commutative algebras over QQ.

A monomial is a tuple of ``(generator id, exponent)`` pairs sorted by id;
odd generators never carry an exponent above 1.  Polynomials are immutable
``Monomial -> Fraction`` maps with no zero coefficients.  Everything that
needs degrees or Koszul signs goes through an ``AlgebraContext`` (the
generator table plus the degree cap).

Typical usage
-------------
ctx = AlgebraContext([Generator(0, "a2", 2), Generator(1, "b3", 3)], cap=8)
p   = ctx.parse("a2^2 + 3*b3")
ctx.format(ctx.multiply(p, ctx.gen("a2")))      # 'a2^3 + 3*a2*b3'
"""

from __future__ import annotations
import re
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from sullivan.errors import DegreeCapError, UnknownGeneratorError

Monomial = Tuple[Tuple[int, int], ...]
UNIT: Monomial = ()


# -------------------------------------------------- #
@dataclass(frozen=True)
class Generator:
    """A free generator: cohomological degree plus its bigrading stage."""
    id:     int
    name:   str
    degree: int
    stage:  int = 0
    circle: bool = False          # the degree-1 generator x of (Λx, 0)

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError(f"generator {self.name}: degree must be >= 1, got {self.degree}")
        if self.stage < 0:
            raise ValueError(f"generator {self.name}: stage must be >= 0, got {self.stage}")
        if self.circle and (self.degree != 1 or self.stage != 0):
            raise ValueError("the circle generator has degree 1 and stage 0")

    @property
    def odd(self) -> bool:
        return self.degree % 2 == 1


# -------------------------------------------------- #
class Polynomial:
    """Finite QQ-linear combination of normalized monomials (a value)."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Rational] | None = None):
        clean: Dict[Monomial, Fraction] = {}
        for mono, coef in (terms or {}).items():
            coef = Fraction(coef)
            if coef:
                clean[tuple(mono)] = coef
        self._terms = clean
        self._hash: Optional[int] = None

    # ---- constructors ----
    @classmethod
    def zero(cls) -> "Polynomial":
        return cls()

    @classmethod
    def one(cls) -> "Polynomial":
        return cls({UNIT: 1})

    @classmethod
    def monomial(cls, mono: Monomial, coef: Rational = 1) -> "Polynomial":
        return cls({mono: coef})

    # ---- mapping protocol ----
    def items(self):
        return self._terms.items()

    def monomials(self) -> Iterator[Monomial]:
        return iter(self._terms)

    def coefficient(self, mono: Monomial) -> Fraction:
        return self._terms.get(tuple(mono), Fraction(0))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    # ---- linear structure ----
    def __add__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return NotImplemented
        out = dict(self._terms)
        for mono, coef in other._terms.items():
            out[mono] = out.get(mono, 0) + coef
        return Polynomial(out)

    def __neg__(self) -> "Polynomial":
        return Polynomial({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self + (-other)

    def scale(self, k: Rational) -> "Polynomial":
        return Polynomial({m: c * k for m, c in self._terms.items()})

    def __rmul__(self, k):
        if isinstance(k, (int, Fraction)):
            return self.scale(k)
        return NotImplemented

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial({UNIT: other})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"Polynomial({dict(sorted(self._terms.items()))!r})"


def word_length(mono: Monomial) -> int:
    return sum(e for _, e in mono)


# -------------------------------------------------- #
_TERM = re.compile(r"\s*([+-]?)\s*([^+-]+)")
_COEF = re.compile(r"^-?\d+(/\d+)?$")


class AlgebraContext:
    """
    Generator table + degree cap.  Immutable after construction; the basis
    cache only memoizes pure results.
    """

    def __init__(self, generators: Sequence[Generator], cap: int):
        if cap < 1:
            raise ValueError(f"degree cap must be positive, got {cap}")
        gens = tuple(generators)
        for i, g in enumerate(gens):
            if g.id != i:
                raise ValueError(f"generator ids must be contiguous from 0; {g.name} has id {g.id}, expected {i}")
        names = [g.name for g in gens]
        if len(set(names)) != len(names):
            raise ValueError("generator names must be unique")
        if sum(g.circle for g in gens) > 1:
            raise ValueError("at most one circle generator")
        self.generators: Tuple[Generator, ...] = gens
        self.cap = cap
        self._by_name = {g.name: g for g in gens}
        self._odd = tuple(g.odd for g in gens)
        self._deg = tuple(g.degree for g in gens)
        self._basis_cache: Dict[tuple, Tuple[Monomial, ...]] = {}

    # -------------------------------------------------- #
    def __len__(self) -> int:
        return len(self.generators)

    def generator(self, ref: Union[int, str]) -> Generator:
        try:
            if isinstance(ref, str):
                return self._by_name[ref]
            if ref < 0:
                raise IndexError(ref)
            return self.generators[ref]
        except (KeyError, IndexError):
            raise UnknownGeneratorError(f"unknown generator {ref!r}") from None

    def gen(self, ref: Union[int, str]) -> Polynomial:
        """The generator as a polynomial."""
        return Polynomial.monomial(((self.generator(ref).id, 1),))

    @property
    def circle(self) -> Optional[Generator]:
        return next((g for g in self.generators if g.circle), None)

    def with_generators(self, extra: Sequence[Tuple[str, int, int]], *, circle: bool = False,
                        cap: int | None = None) -> "AlgebraContext":
        """New context with (name, degree, stage) generators appended."""
        n = len(self.generators)
        new = [Generator(n + i, name, deg, stage, circle) for i, (name, deg, stage) in enumerate(extra)]
        return AlgebraContext(self.generators + tuple(new), self.cap if cap is None else cap)

    # -------------------------------------------------- #
    # gradings
    # -------------------------------------------------- #
    def degree(self, mono: Monomial) -> int:
        return sum(e * self._deg[g] for g, e in mono)

    def stage(self, mono: Monomial) -> int:
        return sum(e * self.generators[g].stage for g, e in mono)

    word_length = staticmethod(word_length)

    def homogeneous_degree(self, p: Polynomial) -> Optional[int]:
        """Degree of *p* when homogeneous (None for 0 or mixed degrees)."""
        degrees = {self.degree(m) for m in p.monomials()}
        return degrees.pop() if len(degrees) == 1 else None

    # -------------------------------------------------- #
    # normalization and products
    # -------------------------------------------------- #
    def normalize(self, factors: Iterable[Union[int, Tuple[int, int]]]) -> Optional[Tuple[int, Monomial]]:
        """
        Sort a product of generator powers into canonical order.

        Returns (sign, monomial), sign = (-1)^(odd-odd transpositions), or
        None when an odd generator occurs twice.
        """
        flat: List[int] = []
        for f in factors:
            g, e = (f, 1) if isinstance(f, int) else f
            self.generator(g)
            if e < 1:
                raise ValueError(f"exponent must be >= 1, got {e}")
            if self._odd[g] and e > 1:
                return None
            flat.extend([g] * e)

        odd = [g for g in flat if self._odd[g]]
        if len(set(odd)) != len(odd):
            return None
        inversions = sum(1 for i in range(len(odd)) for j in range(i + 1, len(odd)) if odd[i] > odd[j])

        counts: Dict[int, int] = {}
        for g in flat:
            counts[g] = counts.get(g, 0) + 1
        return (-1 if inversions % 2 else 1), tuple(sorted(counts.items()))

    def multiply_monomials(self, left: Monomial, right: Monomial) -> Optional[Tuple[int, Monomial]]:
        """Merge two normalized monomials; sign counts right-odd factors jumping left-odd ones."""
        odd = self._odd
        out: List[Tuple[int, int]] = []
        i = j = 0
        sign = 1
        # odd factors of `left` still waiting to be emitted
        left_odd_remaining = sum(1 for g, _ in left if odd[g])
        while i < len(left) and j < len(right):
            gl, el = left[i]
            gr, er = right[j]
            if gl < gr:
                out.append(left[i])
                if odd[gl]:
                    left_odd_remaining -= 1
                i += 1
            elif gr < gl:
                if odd[gr] and left_odd_remaining % 2:
                    sign = -sign
                out.append(right[j])
                j += 1
            else:
                if odd[gl]:
                    return None
                out.append((gl, el + er))
                i += 1
                j += 1
        out.extend(left[i:])
        out.extend(right[j:])
        return sign, tuple(out)

    def _product(self, p: Polynomial, q: Polynomial, limit: int, truncate: bool) -> Tuple[Polynomial, bool]:
        out: Dict[Monomial, Fraction] = {}
        overflow = False
        q_items = [(m, c, self.degree(m)) for m, c in q.items()]
        for mp, cp in p.items():
            dp = self.degree(mp)
            for mq, cq, dq in q_items:
                if dp + dq > limit:
                    if not truncate:
                        raise DegreeCapError(f"product of degree {dp + dq} exceeds the cap {limit}")
                    overflow = True
                    continue
                res = self.multiply_monomials(mp, mq)
                if res is None:
                    continue
                sign, mono = res
                out[mono] = out.get(mono, 0) + sign * cp * cq
        return Polynomial(out), overflow

    def multiply(self, p: Polynomial, q: Polynomial, *, limit: int | None = None) -> Polynomial:
        """
        Graded-commutative product.  Raises DegreeCapError instead of
        creating a term above *limit* (default: the context cap).
        """
        return self._product(p, q, self.cap if limit is None else limit, truncate=False)[0]

    def multiply_truncated(self, p: Polynomial, q: Polynomial, *,
                           limit: int | None = None) -> Tuple[Polynomial, bool]:
        """Product with every term above *limit* dropped; second value flags a drop."""
        return self._product(p, q, self.cap if limit is None else limit, truncate=True)

    def product(self, *factors: Polynomial, limit: int | None = None) -> Polynomial:
        out = Polynomial.one()
        for f in factors:
            out = self.multiply(out, f, limit=limit)
        return out

    def power(self, p: Polynomial, n: int, *, limit: int | None = None) -> Polynomial:
        return self.product(*([p] * n), limit=limit)

    # -------------------------------------------------- #
    # bases
    # -------------------------------------------------- #
    def basis_of(self, degree: int, *, word_length: int | None = None, min_word_length: int | None = None,
                 stage: int | None = None, limit: int | None = None,
                 generators: Iterable[int] | None = None) -> List[Monomial]:
        """
        Monomial basis of the degree-*degree* component, optionally
        restricted to an exact / minimal word length, an exact stage and a
        subset of generators.  Lexicographic on factor lists.

        Raises DegreeCapError when degree > limit (default: the cap).
        """
        bound = self.cap if limit is None else limit
        if degree > bound:
            raise DegreeCapError(f"basis requested in degree {degree} above the cap {bound}")
        if degree < 0:
            return []
        allowed = tuple(sorted(set(generators))) if generators is not None else None
        key = (degree, word_length, min_word_length, stage, allowed)
        cached = self._basis_cache.get(key)
        if cached is None:
            cached = tuple(sorted(self._enumerate(degree, word_length, min_word_length, stage, allowed)))
            self._basis_cache[key] = cached
        return list(cached)

    def _enumerate(self, degree, exact_len, min_len, stage, allowed) -> Iterator[Monomial]:
        pool = [g for g in (allowed if allowed is not None else range(len(self.generators)))
                if self._deg[g] <= degree and (stage is None or self.generators[g].stage <= stage)]
        max_len = exact_len if exact_len is not None else degree
        stages = [self.generators[g].stage for g in pool]

        def rec(k: int, left: int, length: int, st: int, acc: List[Tuple[int, int]]):
            if left == 0:
                if (exact_len is None or length == exact_len) and (min_len is None or length >= min_len) \
                        and (stage is None or st == stage):
                    yield tuple(acc)
                return
            if k == len(pool) or length >= max_len:
                return
            g = pool[k]
            d = self._deg[g]
            top = min(left // d, 1 if self._odd[g] else left // d, max_len - length)
            if stage is not None and stages[k]:
                top = min(top, (stage - st) // stages[k])
            for e in range(top, 0, -1):
                acc.append((g, e))
                yield from rec(k + 1, left - e * d, length + e, st + e * stages[k], acc)
                acc.pop()
            yield from rec(k + 1, left, length, st, acc)

        if degree == 0:
            if (exact_len in (None, 0)) and (min_len is None or min_len <= 0) and stage in (None, 0):
                yield UNIT
            return
        yield from rec(0, degree, 0, 0, [])

    # -------------------------------------------------- #
    # splittings
    # -------------------------------------------------- #
    def word_split(self, p: Polynomial) -> Dict[int, Polynomial]:
        """Components of *p* by word length (only nonzero components)."""
        parts: Dict[int, Dict[Monomial, Fraction]] = {}
        for mono, coef in p.items():
            parts.setdefault(word_length(mono), {})[mono] = coef
        return {k: Polynomial(v) for k, v in sorted(parts.items())}

    def stage_split(self, p: Polynomial) -> Dict[int, Polynomial]:
        parts: Dict[int, Dict[Monomial, Fraction]] = {}
        for mono, coef in p.items():
            parts.setdefault(self.stage(mono), {})[mono] = coef
        return {k: Polynomial(v) for k, v in sorted(parts.items())}

    def degree_split(self, p: Polynomial) -> Dict[int, Polynomial]:
        parts: Dict[int, Dict[Monomial, Fraction]] = {}
        for mono, coef in p.items():
            parts.setdefault(self.degree(mono), {})[mono] = coef
        return {k: Polynomial(v) for k, v in sorted(parts.items())}

    def uses(self, p: Polynomial, ref: Union[int, str]) -> bool:
        gid = self.generator(ref).id
        return any(g == gid for mono in p.monomials() for g, _ in mono)

    # -------------------------------------------------- #
    # text form
    # -------------------------------------------------- #
    @staticmethod
    def term_key(mono: Monomial):
        return (word_length(mono), mono)

    def format_monomial(self, mono: Monomial) -> str:
        if not mono:
            return "1"
        return "*".join(self.generators[g].name + (f"^{e}" if e > 1 else "") for g, e in mono)

    def format(self, p: Polynomial) -> str:
        """Canonical text: terms by (word length, factors), e.g. 'c3 + a2*x'."""
        if p.is_zero:
            return "0"
        out = []
        for mono in sorted(p.monomials(), key=self.term_key):
            coef = p.coefficient(mono)
            sign = "-" if coef < 0 else "+"
            mag = abs(coef)
            body = self.format_monomial(mono)
            if mag != 1:
                body = f"{mag}" if not mono else f"{mag}*{body}"
            out.append((sign, body))
        text = ("-" if out[0][0] == "-" else "") + out[0][1]
        for sign, body in out[1:]:
            text += f" {sign} {body}"
        return text

    def parse(self, text: str) -> Polynomial:
        """
        Inverse of format(): '+'/'-' separated terms, each an optional
        'p/q' coefficient and '*'-joined factors 'name' or 'name^e', in any
        order (Koszul signs applied on normalization).
        """
        text = text.strip()
        if text in ("", "0"):
            return Polynomial.zero()
        out: Dict[Monomial, Fraction] = {}
        for sign, body in _TERM.findall(text):
            coef = Fraction(-1 if sign == "-" else 1)
            factors: List[Tuple[int, int]] = []
            for tok in body.strip().split("*"):
                tok = tok.strip()
                if _COEF.match(tok):
                    coef *= Fraction(tok)
                    continue
                name, _, exp = tok.partition("^")
                factors.append((self.generator(name).id, int(exp) if exp else 1))
            norm = self.normalize(factors)
            if norm is None:
                continue
            s, mono = norm
            out[mono] = out.get(mono, 0) + s * coef
        return Polynomial(out)
