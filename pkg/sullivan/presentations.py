"""
sullivan.presentations – finitely presented groups and their abelianization.

File format
-----------
    # comment to end of line
    x1, x2, a                 <- first non-blank line: generators
    [x1, x2]                  <- one relator per line ...
    a x1 = x1^-1 a            <- ... or an equation lhs = rhs (stored as lhs·rhs⁻¹)

Words are juxtapositions of generators, ``g^k`` powers (k a nonzero
integer), commutators ``[u, v]`` = u v u⁻¹ v⁻¹ and parenthesized groups
``(u)^k``.  ``1`` is the empty word.

Only the abelianized shadow is computed: the exponent-sum matrix goes
through integer Smith normal form.
"""

from __future__ import annotations
import re
from dataclasses import dataclass
from pathlib import Path
from typing import List, Sequence, Tuple

from sullivan.errors import PresentationError
from sullivan import linalg

Letter = Tuple[str, int]


# -------------------------------------------------- #
@dataclass(frozen=True)
class Word:
    """Freely reduced word: adjacent equal letters merged, zero exponents dropped."""
    letters: Tuple[Letter, ...] = ()

    def __post_init__(self):
        stack: List[List] = []
        for name, exp in self.letters:
            if stack and stack[-1][0] == name:
                stack[-1][1] += exp
                if stack[-1][1] == 0:
                    stack.pop()
            elif exp:
                stack.append([name, exp])
        object.__setattr__(self, "letters", tuple((n, e) for n, e in stack))

    @classmethod
    def of(cls, name: str, exp: int = 1) -> "Word":
        return cls(((name, exp),))

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(tuple((n, -e) for n, e in reversed(self.letters)))

    def __pow__(self, k: int) -> "Word":
        base = self if k >= 0 else self.inverse()
        return Word(base.letters * abs(k))

    def __len__(self) -> int:
        return sum(abs(e) for _, e in self.letters)

    def exponent_sum(self, name: str) -> int:
        return sum(e for n, e in self.letters if n == name)

    def names(self) -> List[str]:
        return [n for n, _ in self.letters]

    def format(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(n if e == 1 else f"{n}^{e}" for n, e in self.letters)


def commutator(u: Word, v: Word) -> Word:
    return u * v * u.inverse() * v.inverse()


@dataclass(frozen=True)
class GroupPresentation:
    generators: Tuple[str, ...]
    relators: Tuple[Word, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "relators", tuple(self.relators))
        if len(set(self.generators)) != len(self.generators):
            raise PresentationError("duplicate generator names")
        known = set(self.generators)
        for r in self.relators:
            for n in r.names():
                if n not in known:
                    raise PresentationError(f"relator {r.format()!r} uses unknown generator {n!r}")


@dataclass(frozen=True)
class AbelianInvariants:
    free_rank: int
    torsion: Tuple[int, ...] = ()

    def format(self) -> str:
        parts = ["Z"] * self.free_rank + [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


# -------------------------------------------------- #
# parsing
# -------------------------------------------------- #
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_INT  = re.compile(r"-?\d+")


class _Parser:
    """Recursive descent over one line; columns are 1-based."""

    def __init__(self, text: str, line: int, known: Sequence[str]):
        self.text, self.pos, self.line, self.known = text, 0, line, set(known)

    def fail(self, msg: str):
        raise PresentationError(msg, line=self.line, column=self.pos + 1)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            self.fail(f"expected {ch!r}")
        self.pos += 1

    # relation := word ('=' word)?
    def relation(self) -> Word:
        lhs = self.word()
        if self.peek() == "=":
            self.pos += 1
            rhs = self.word()
            lhs = lhs * rhs.inverse()
        if self.peek():
            self.fail(f"unexpected {self.peek()!r}")
        return lhs

    # word := factor*
    def word(self) -> Word:
        out = Word()
        while self.peek() and self.peek() not in ",)]=":
            out = out * self.factor()
        return out

    # factor := atom ('^' int)?
    def factor(self) -> Word:
        base = self.atom()
        if self.peek() == "^":
            self.pos += 1
            self.skip()
            m = _INT.match(self.text, self.pos)
            if not m:
                self.fail("expected an integer exponent")
            k = int(m.group())
            if k == 0:
                self.fail("exponent must be nonzero")
            self.pos = m.end()
            base = base ** k
        return base

    def atom(self) -> Word:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            w = self.word()
            self.expect(")")
            return w
        if ch == "[":
            self.pos += 1
            u = self.word()
            self.expect(",")
            v = self.word()
            self.expect("]")
            return commutator(u, v)
        if ch == "1":
            self.pos += 1
            return Word()
        m = _NAME.match(self.text, self.pos)
        if not m:
            self.fail(f"unexpected {ch!r}" if ch else "unexpected end of line")
        if m.group() not in self.known:
            self.fail(f"unknown generator {m.group()!r}")
        self.pos = m.end()
        return Word.of(m.group())


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0]


def parse(text: str) -> GroupPresentation:
    generators: List[str] | None = None
    relators: List[Word] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        if generators is None:
            generators = [g.strip() for g in line.split(",")]
            for g in generators:
                if not _NAME.fullmatch(g):
                    raise PresentationError(f"bad generator name {g!r}", line=lineno,
                                            column=raw.find(g) + 1 if g else None)
            continue
        relators.append(_Parser(line, lineno, generators).relation())
    if generators is None:
        raise PresentationError("empty presentation: no generator line")
    return GroupPresentation(tuple(generators), tuple(relators))


def load(path: str | Path) -> GroupPresentation:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise PresentationError(f"cannot read {path}: {e.strerror}") from e
    return parse(text)


def format_presentation(pres: GroupPresentation) -> str:
    lines = [", ".join(pres.generators)]
    lines.extend(r.format() for r in pres.relators)
    return "\n".join(lines) + "\n"


# -------------------------------------------------- #
# abelianization
# -------------------------------------------------- #
def relation_matrix(pres: GroupPresentation) -> linalg.IntegerMatrix:
    """Exponent sums: one row per relator, one column per generator."""
    rows = [[r.exponent_sum(g) for g in pres.generators] for r in pres.relators]
    return linalg.integer_matrix(rows, len(pres.generators))


def abelian_invariants(pres: GroupPresentation) -> AbelianInvariants:
    snf = linalg.smith_normal_form(relation_matrix(pres))
    return AbelianInvariants(len(pres.generators) - snf.rank,
                             tuple(d for d in snf.diagonal if d > 1))


def rational_rank(pres: GroupPresentation) -> int:
    """dim G^ab ⊗ Q."""
    return abelian_invariants(pres).free_rank


def is_perfect(pres: GroupPresentation) -> bool:
    inv = abelian_invariants(pres)
    return inv.free_rank == 0 and not inv.torsion


def _p_part(n: int, p: int) -> int:
    out = 1
    while n % p == 0:
        n //= p
        out *= p
    return out


def local_invariants(pres: GroupPresentation, p: int) -> AbelianInvariants:
    """G^ab ⊗ Z_(p); p = 0 means ⊗ Q."""
    inv = abelian_invariants(pres)
    if p == 0:
        return AbelianInvariants(inv.free_rank)
    if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
        raise ValueError(f"{p} is not a prime")
    return AbelianInvariants(inv.free_rank, tuple(t for t in (_p_part(t, p) for t in inv.torsion) if t > 1))


def direct_product_with_z(pres: GroupPresentation, name: str = "t") -> GroupPresentation:
    """G × Z: a new central generator commuting with every old one."""
    if name in pres.generators:
        raise PresentationError(f"generator {name!r} already present")
    t = Word.of(name)
    extra = [commutator(t, Word.of(g)) for g in pres.generators]
    return GroupPresentation(pres.generators + (name,), pres.relators + tuple(extra))

