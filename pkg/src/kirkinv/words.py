"""Words in the reduced free group and their reduced Magnus expansion.

Elements of the reduced free group on ``x_j`` (``j != i``) are handled as
plain letter strings (:class:`Word`) or as expression trees (:class:`Expr`)
built from generators, products, inverses, powers, conjugates and
commutators.  Conventions: ``[a, b] = a^-1 b^-1 a b`` and ``a^b = b^-1 a b``.

Equality in the reduced free group is decided by comparing expansions,
``x_j^(+-1) -> 1 +- X_j``, which is injective on that group.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

from .ring import Poly

Letter = Tuple[int, int]

__all__ = [
    "Letter",
    "Word",
    "Expr",
    "Gen",
    "Prod",
    "Inv",
    "Pow",
    "Conj",
    "Comm",
    "WordSyntaxError",
    "WordValueError",
    "parse_word",
    "magnus_expand",
    "rf_equal",
    "is_positive",
    "positive_normalize",
    "normal_form",
    "nested_commutator",
    "left_normed_commutator",
]


class WordSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos} in {text!r}")
        self.text = text
        self.pos = pos


class WordValueError(ValueError):
    """A generator is out of range or equal to the excluded index."""


def _check_gen(j: int, n: Optional[int], excluded: Optional[int]) -> None:
    if n is not None and not 1 <= j <= n:
        raise WordValueError(f"generator x{j} out of range 1..{n}")
    if excluded is not None and j == excluded:
        raise WordValueError(f"generator x{j} is excluded (component {excluded})")


# ---------------------------------------------------------------------------
# expression trees


class Expr:
    """Structured group expression; flatten with :meth:`letters` or :meth:`word`."""

    def letters(self) -> Tuple[Letter, ...]:
        raise NotImplementedError

    def _flat(self) -> Tuple[Letter, ...]:
        # expressions are immutable, so the flattening is memoized on the instance
        cached = self.__dict__.get("_letters")
        if cached is None:
            cached = self.letters()
            object.__setattr__(self, "_letters", cached)
        return cached

    def generators(self) -> frozenset:
        return frozenset(j for j, _ in self._flat())

    def word(self, n: int, excluded: int) -> "Word":
        return Word(self._flat(), n, excluded)

    def to_text(self) -> str:
        raise NotImplementedError

    def __str__(self) -> str:
        return self.to_text()

    # subclasses that may stand alone as a grammar atom
    def _atom(self) -> str:
        return "(" + self.to_text() + ")"

    # subclasses that may stand alone as a grammar factor
    def _factor(self) -> str:
        return self._atom()


@dataclass(frozen=True)
class Gen(Expr):
    index: int

    def letters(self):
        return ((self.index, 1),)

    def to_text(self):
        return f"x{self.index}"

    def _atom(self):
        return self.to_text()


@dataclass(frozen=True)
class Prod(Expr):
    factors: Tuple[Expr, ...]

    def letters(self):
        out: List[Letter] = []
        for f in self.factors:
            out.extend(f._flat())
        return tuple(out)

    def to_text(self):
        return " ".join(f._factor() for f in self.factors)

    def _atom(self):
        if len(self.factors) == 1:
            return self.factors[0]._atom()
        return "(" + self.to_text() + ")"

    def _factor(self):
        if len(self.factors) == 1:
            return self.factors[0]._factor()
        return "(" + self.to_text() + ")"


@dataclass(frozen=True)
class Inv(Expr):
    base: Expr

    def letters(self):
        return _invert(self.base.letters())

    def to_text(self):
        return self.base._atom() + "^-1"

    def _factor(self):
        return self.to_text()


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: int

    def letters(self):
        inner = self.base.letters()
        if self.exponent < 0:
            inner = _invert(inner)
        return inner * abs(self.exponent)

    def to_text(self):
        return f"{self.base._atom()}^{self.exponent}"

    def _factor(self):
        return self.to_text()


@dataclass(frozen=True)
class Conj(Expr):
    """``base^by`` meaning ``by^-1 base by``."""

    base: Expr
    by: Expr

    def letters(self):
        b = self.by.letters()
        return _invert(b) + self.base.letters() + b

    def to_text(self):
        return f"{self.base._atom()}^{self.by._atom()}"

    def _factor(self):
        return self.to_text()


@dataclass(frozen=True)
class Comm(Expr):
    """``[left, right]`` meaning ``left^-1 right^-1 left right``."""

    left: Expr
    right: Expr

    def letters(self):
        a = self.left.letters()
        b = self.right.letters()
        return _invert(a) + _invert(b) + a + b

    def to_text(self):
        return f"[{self.left.to_text()},{self.right.to_text()}]"

    def _atom(self):
        return self.to_text()


def _invert(letters: Sequence[Letter]) -> Tuple[Letter, ...]:
    return tuple((j, -s) for j, s in reversed(letters))


def nested_commutator(indices: Sequence[int], invert: Iterable[int] = ()) -> Expr:
    """Right-nested ``[x_a, [x_b, ... [x_y, x_z] ...]]``; a single index gives the generator.

    Generators listed in ``invert`` enter as their inverses.
    """
    invert = set(invert)
    if not indices:
        return Prod(())
    leaves = [Inv(Gen(j)) if j in invert else Gen(j) for j in indices]
    expr = leaves[-1]
    for leaf in reversed(leaves[:-1]):
        expr = Comm(leaf, expr)
    return expr


def left_normed_commutator(indices: Sequence[int]) -> Expr:
    expr: Expr = Gen(indices[0])
    for j in indices[1:]:
        expr = Comm(expr, Gen(j))
    return expr


# ---------------------------------------------------------------------------
# parser
#
#   word     := factor { factor }
#   factor   := atom [ '^' exponent ]
#   atom     := 'x' INT | '(' word ')' | '[' word ',' word ']'
#   exponent := SIGNED_INT | atom
#
# The empty string denotes the identity.


class _Parser:
    def __init__(self, text: str, n: Optional[int], excluded: Optional[int]):
        self.text = text
        self.pos = 0
        self.n = n
        self.excluded = excluded

    def error(self, message: str):
        raise WordSyntaxError(message, self.text, self.pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def integer(self, signed: bool) -> int:
        self.skip()
        start = self.pos
        if signed and self.pos < len(self.text) and self.text[self.pos] in "+-":
            self.pos += 1
        digits = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == digits:
            self.pos = start
            self.error("expected integer")
        return int(self.text[start:self.pos])

    def parse(self) -> Expr:
        if self.peek() == "":
            return Prod(())
        expr = self.word()
        if self.peek() != "":
            self.error("unexpected character")
        return expr

    def word(self) -> Expr:
        factors = [self.factor()]
        while self.peek() not in ("", ")", ",", "]"):
            factors.append(self.factor())
        return factors[0] if len(factors) == 1 else Prod(tuple(factors))

    def factor(self) -> Expr:
        base = self.atom()
        if self.peek() == "^":
            self.pos += 1
            nxt = self.peek()
            if nxt and (nxt.isdigit() or nxt in "+-"):
                k = self.integer(signed=True)
                return Inv(base) if k == -1 else Pow(base, k)
            return Conj(base, self.atom())
        return base

    def atom(self) -> Expr:
        ch = self.peek()
        if ch == "x":
            start = self.pos
            self.pos += 1
            j = self.integer(signed=False)
            try:
                _check_gen(j, self.n, self.excluded)
            except WordValueError as exc:
                raise WordValueError(f"{exc} at position {start} in {self.text!r}") from None
            return Gen(j)
        if ch == "(":
            self.pos += 1
            if self.peek() == ")":
                self.pos += 1
                return Prod(())
            inner = self.word()
            self.expect(")")
            return inner if not isinstance(inner, Prod) else inner
        if ch == "[":
            self.pos += 1
            left = self.word()
            self.expect(",")
            right = self.word()
            self.expect("]")
            return Comm(left, right)
        if ch == "":
            self.error("unexpected end of input")
        self.error(f"unexpected character {ch!r}")


def parse_word(text: str, n: Optional[int] = None, excluded: Optional[int] = None) -> Expr:
    """Parse the word grammar; generators are validated when ``n``/``excluded`` are given."""
    return _Parser(text, n, excluded).parse()


# ---------------------------------------------------------------------------
# flat words


class Word:
    """A finite sequence of letters ``(generator, +-1)`` valid for ``(n, excluded)``.

    Words are not required to be freely reduced; use :func:`rf_equal` for
    equality in the reduced free group.  ``==`` compares letters literally.
    """

    __slots__ = ("letters", "n", "excluded")

    def __init__(self, letters: Iterable[Letter], n: int, excluded: int):
        letters = tuple(letters)
        try:
            hash(letters)
        except TypeError:  # letters given as lists
            letters = tuple(map(tuple, letters))
        letters = _validated(letters, n, excluded)
        self.letters = letters
        self.n = n
        self.excluded = excluded

    @classmethod
    def _trusted(cls, letters: Tuple[Letter, ...], n: int, excluded: int) -> "Word":
        w = cls.__new__(cls)
        w.letters = letters
        w.n = n
        w.excluded = excluded
        return w

    @classmethod
    def parse(cls, text: str, n: int, excluded: int) -> "Word":
        return parse_word(text, n, excluded).word(n, excluded)

    @classmethod
    def empty(cls, n: int, excluded: int) -> "Word":
        return cls((), n, excluded)

    @classmethod
    def gen(cls, j: int, n: int, excluded: int, sign: int = 1) -> "Word":
        return cls(((j, sign),), n, excluded)

    def _same_group(self, other: "Word") -> None:
        if (self.n, self.excluded) != (other.n, other.excluded):
            raise WordValueError(
                f"words live in different groups: (n={self.n}, i={self.excluded}) vs (n={other.n}, i={other.excluded})"
            )

    def __mul__(self, other: "Word") -> "Word":
        self._same_group(other)
        return Word._trusted(self.letters + other.letters, self.n, self.excluded)

    def inverse(self) -> "Word":
        return Word._trusted(_invert(self.letters), self.n, self.excluded)

    def conjugate(self, by: "Word") -> "Word":
        """``by^-1 self by``."""
        return by.inverse() * self * by

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Word):
            return NotImplemented
        return (self.letters, self.n, self.excluded) == (other.letters, other.n, other.excluded)

    def __hash__(self) -> int:
        return hash((self.letters, self.n, self.excluded))

    def generators(self) -> frozenset:
        return frozenset(j for j, _ in self.letters)

    def reduced(self) -> "Word":
        """Free reduction."""
        return Word._trusted(_free_reduce(self.letters), self.n, self.excluded)

    def substitute(self, j: int, image: "Word") -> "Word":
        """Replace each ``x_j^(+-1)`` by ``image^(+-1)``."""
        self._same_group(image)
        inv = _invert(image.letters)
        out: List[Letter] = []
        for k, s in self.letters:
            if k == j:
                out.extend(image.letters if s == 1 else inv)
            else:
                out.append((k, s))
        return Word._trusted(tuple(out), self.n, self.excluded)

    def to_expr(self) -> Expr:
        e = Prod(tuple(_letter_expr(j, s) for j, s in self.letters))
        object.__setattr__(e, "_letters", self.letters)
        return e

    def to_text(self) -> str:
        return " ".join(f"x{j}" if s == 1 else f"x{j}^-1" for j, s in self.letters)

    def __str__(self) -> str:
        return self.to_text() or "1"

    def __repr__(self) -> str:
        return f"Word({self.to_text()!r}, n={self.n}, i={self.excluded})"


@lru_cache(maxsize=1 << 16)
def _validated(letters: Tuple, n: int, excluded: int) -> Tuple[Letter, ...]:
    letters = tuple((int(j), int(s)) for j, s in letters)
    for j, s in letters:
        if s not in (1, -1):
            raise WordValueError(f"letter sign must be +-1, got {s}")
        _check_gen(j, n, excluded)
    return letters


@lru_cache(maxsize=None)
def _letter_expr(j: int, s: int) -> Expr:
    return Gen(j) if s == 1 else Inv(Gen(j))


def _free_reduce(letters: Tuple[Letter, ...]) -> Tuple[Letter, ...]:
    out: List[Letter] = []
    for j, s in letters:
        if out and out[-1] == (j, -s):
            out.pop()
        else:
            out.append((j, s))
    return tuple(out)


@lru_cache(maxsize=65536)
def _expand(letters: Tuple[Letter, ...], n: int, excluded: int) -> Poly:
    p = Poly.one(n, excluded)
    for j, s in _free_reduce(letters):
        p = p.mul_letter(j, s)
    return p


def magnus_expand(w: Word) -> Poly:
    """Product over the letters of ``1 +- X_j``."""
    return _expand(w.letters, w.n, w.excluded)


def rf_equal(u: Word, v: Word) -> bool:
    u._same_group(v)
    return magnus_expand(u) == magnus_expand(v)


def is_positive(w: Word) -> bool:
    lead = magnus_expand(w).leading_term()
    return lead is None or lead[1] > 0


def positive_normalize(w: Word) -> Tuple[Word, bool]:
    """Return ``(w, False)`` when ``w`` is positive, else ``(w^-1, True)``."""
    if is_positive(w):
        return w, False
    return w.inverse(), True


# ---------------------------------------------------------------------------
# normal form by commutator collection


@lru_cache(maxsize=None)
def _basic_expansion(indices: Tuple[int, ...], n: int, excluded: int) -> Poly:
    return _expand(left_normed_commutator(indices).letters(), n, excluded)


def normal_form(target, n: Optional[int] = None, excluded: Optional[int] = None) -> Expr:
    """Collected word for an element given by a :class:`Word` or its expansion.

    The result is a product of powers of left-normed basic commutators
    ``[[x_a, x_b], ...]`` with ``a`` the smallest index involved, ordered by
    degree; its expansion equals the target.  Raises ``ValueError`` when a
    polynomial target is not the expansion of a group element.
    """
    if isinstance(target, Word):
        n, excluded = target.n, target.excluded
        target = magnus_expand(target)
    elif n is None or excluded is None:
        n, excluded = target.n, target.excluded
    if target.constant_term != 1:
        raise ValueError("not a group-like expansion: constant term must be 1")
    current = Poly.one(n, excluded)
    current_inv = Poly.one(n, excluded)
    factors: List[Expr] = []
    for d in range(1, n):
        rest = current_inv * target
        for m, c in rest.homogeneous_part(d).items():
            if m[0] != min(m):
                continue
            basis = left_normed_commutator(m)
            factors.append(basis if c == 1 else Pow(basis, c))
            e = _basic_expansion(m, n, excluded)
            current = current * e ** c
            current_inv = e.inverse() ** c * current_inv
    if current != target:
        raise ValueError("not a group-like expansion")
    if len(factors) == 1:
        return factors[0]
    return Prod(tuple(factors))
