"""Truncated non-commutative polynomial ring.

``Poly`` models the quotient of Z<<X_1, ..., X_n>> by the ideal generated by
monomials that contain the excluded variable X_i or repeat a variable.  What
is left is a free abelian group on the non-repeating index sequences avoiding
``i``, so a polynomial is a sparse map ``tuple[int, ...] -> int``.

Monomials are ordered by degree first, then lexicographically on the index
sequence.  The leading term of a polynomial is the smallest non-constant
monomial with a nonzero coefficient in that order.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Tuple

Monomial = Tuple[int, ...]

__all__ = [
    "Monomial",
    "Poly",
    "Residue",
    "RingMismatch",
    "InvalidSequence",
    "monomial_key",
    "sequences",
    "proper_subsequences",
    "indeterminacy",
    "residue",
    "format_sequence",
    "parse_sequence",
]


class RingMismatch(ValueError):
    """Operands live in different rings (arity or excluded index differ)."""


class InvalidSequence(ValueError):
    """An index sequence is not a monomial of the ring."""


def monomial_key(m: Monomial) -> Tuple[int, Monomial]:
    return (len(m), m)


def _mask(m: Monomial) -> int:
    bits = 0
    for j in m:
        bits |= 1 << j
    return bits


def check_sequence(seq: Iterable[int], n: int, excluded: int) -> Monomial:
    seq = tuple(int(j) for j in seq)
    if len(set(seq)) != len(seq):
        raise InvalidSequence(f"sequence {seq} repeats an index")
    for j in seq:
        if not 1 <= j <= n:
            raise InvalidSequence(f"index {j} out of range 1..{n}")
        if j == excluded:
            raise InvalidSequence(f"index {j} is the excluded index")
    return seq


@lru_cache(maxsize=None)
def sequences(n: int, excluded: int, min_len: int = 1, max_len: Optional[int] = None) -> Tuple[Monomial, ...]:
    """All non-repeating sequences over ``{1..n} \\ {excluded}`` in monomial order."""
    letters = [j for j in range(1, n + 1) if j != excluded]
    top = len(letters) if max_len is None else min(max_len, len(letters))
    out: List[Monomial] = []
    for k in range(min_len, top + 1):
        out.extend(sorted(permutations(letters, k)))
    return tuple(out)


@lru_cache(maxsize=None)
def proper_subsequences(seq: Monomial) -> Tuple[Monomial, ...]:
    """Nonempty, order-preserving, proper subsequences of ``seq``."""
    k = len(seq)
    out = []
    for size in range(1, k):
        for pos in combinations(range(k), size):
            out.append(tuple(seq[p] for p in pos))
    return tuple(out)


def format_sequence(seq: Iterable[int]) -> str:
    seq = tuple(seq)
    if all(j < 10 for j in seq):
        return "".join(str(j) for j in seq)
    return ",".join(str(j) for j in seq)


def parse_sequence(text: str) -> Monomial:
    """Parse ``"1,2,3"`` or ``"123"`` (single digits only) into a sequence."""
    text = text.strip()
    if not text:
        return ()
    if "," in text or " " in text:
        parts = [p.strip() for p in text.split(",")] if "," in text else text.split()
        if not all(p.isdigit() for p in parts):
            raise InvalidSequence(f"cannot parse sequence {text!r}")
        return tuple(int(p) for p in parts)
    if not text.isdigit():
        raise InvalidSequence(f"cannot parse sequence {text!r}")
    return tuple(int(ch) for ch in text)


class Poly:
    """Element of the truncated ring for arity ``n`` and excluded index ``excluded``.

    Instances are immutable; arithmetic returns new objects.  Equality is
    structural (same ring, same nonzero terms).
    """

    __slots__ = ("n", "excluded", "_terms", "_hash")

    def __init__(self, n: int, excluded: int, terms: Optional[Mapping[Iterable[int], int]] = None, *, check: bool = True):
        if n < 1:
            raise ValueError("arity must be positive")
        if not 1 <= excluded <= n:
            raise ValueError(f"excluded index {excluded} out of range 1..{n}")
        self.n = n
        self.excluded = excluded
        clean: Dict[Monomial, int] = {}
        if terms:
            for m, c in terms.items():
                if check:
                    m = check_sequence(m, n, excluded)
                    c = int(c)
                if c:
                    clean[m] = clean.get(m, 0) + c
            if check:
                clean = {m: c for m, c in clean.items() if c}
        self._terms = clean
        self._hash = None

    # constructors

    @classmethod
    def zero(cls, n: int, excluded: int) -> "Poly":
        return cls(n, excluded)

    @classmethod
    def one(cls, n: int, excluded: int) -> "Poly":
        return cls(n, excluded, {(): 1}, check=False)

    @classmethod
    def constant(cls, n: int, excluded: int, c: int) -> "Poly":
        return cls(n, excluded, {(): c} if c else None, check=False)

    @classmethod
    def var(cls, n: int, excluded: int, j: int) -> "Poly":
        return cls(n, excluded, {(j,): 1})

    @classmethod
    def monomial(cls, n: int, excluded: int, seq: Iterable[int], coeff: int = 1) -> "Poly":
        return cls(n, excluded, {tuple(seq): coeff})

    @classmethod
    def _raw(cls, n: int, excluded: int, terms: Dict[Monomial, int]) -> "Poly":
        p = cls.__new__(cls)
        p.n = n
        p.excluded = excluded
        p._terms = terms
        p._hash = None
        return p

    # inspection

    def items(self) -> List[Tuple[Monomial, int]]:
        """Nonzero terms in increasing monomial order."""
        return sorted(self._terms.items(), key=lambda t: monomial_key(t[0]))

    def __iter__(self) -> Iterator[Tuple[Monomial, int]]:
        return iter(self.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def coefficient(self, seq: Iterable[int] = ()) -> int:
        seq = check_sequence(seq, self.n, self.excluded)
        return self._terms.get(seq, 0)

    def coeff(self, seq: Monomial) -> int:
        """Unchecked coefficient lookup for hot loops."""
        return self._terms.get(seq, 0)

    @property
    def constant_term(self) -> int:
        return self._terms.get((), 0)

    def degree(self) -> int:
        return max((len(m) for m in self._terms), default=-1)

    def is_homogeneous(self, d: int) -> bool:
        return all(len(m) == d for m in self._terms)

    def leading_term(self) -> Optional[Tuple[Monomial, int]]:
        """Smallest non-constant monomial with nonzero coefficient, or None."""
        best = None
        for m, c in self._terms.items():
            if m and (best is None or monomial_key(m) < monomial_key(best[0])):
                best = (m, c)
        return best

    def lowest_part(self) -> "Poly":
        """Non-constant terms of minimal degree."""
        degs = [len(m) for m in self._terms if m]
        if not degs:
            return Poly.zero(self.n, self.excluded)
        d = min(degs)
        return Poly._raw(self.n, self.excluded, {m: c for m, c in self._terms.items() if len(m) == d})

    def homogeneous_part(self, d: int) -> "Poly":
        return Poly._raw(self.n, self.excluded, {m: c for m, c in self._terms.items() if len(m) == d})

    def sort_key(self) -> Tuple:
        return tuple((len(m), m, c) for m, c in self.items())

    # arithmetic

    def _check_ring(self, other: "Poly") -> None:
        if not isinstance(other, Poly):
            raise TypeError(f"expected Poly, got {type(other).__name__}")
        if other.n != self.n or other.excluded != self.excluded:
            raise RingMismatch(
                f"ring mismatch: (n={self.n}, i={self.excluded}) vs (n={other.n}, i={other.excluded})"
            )

    def _coerce(self, other) -> "Poly":
        if isinstance(other, int):
            return Poly.constant(self.n, self.excluded, other)
        self._check_ring(other)
        return other

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Poly._raw(self.n, self.excluded, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw(self.n, self.excluded, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def scale(self, k: int) -> "Poly":
        if not k:
            return Poly.zero(self.n, self.excluded)
        return Poly._raw(self.n, self.excluded, {m: k * c for m, c in self._terms.items()})

    def __mul__(self, other) -> "Poly":
        if isinstance(other, int):
            return self.scale(other)
        self._check_ring(other)
        right = [(m, _mask(m), c) for m, c in other._terms.items()]
        out: Dict[Monomial, int] = {}
        get = out.get
        for m1, c1 in self._terms.items():
            k1 = _mask(m1)
            for m2, k2, c2 in right:
                if k1 & k2:
                    continue
                key = m1 + m2
                out[key] = get(key, 0) + c1 * c2
        return Poly._raw(self.n, self.excluded, {m: c for m, c in out.items() if c})

    def __rmul__(self, other) -> "Poly":
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def mul_letter(self, j: int, sign: int) -> "Poly":
        """Right multiplication by ``1 + sign * X_j`` (sign = +-1)."""
        out = dict(self._terms)
        for m, c in self._terms.items():
            if j in m:
                continue
            key = m + (j,)
            v = out.get(key, 0) + sign * c
            if v:
                out[key] = v
            else:
                out.pop(key, None)
        return Poly._raw(self.n, self.excluded, out)

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            return self.inverse() ** (-k)
        result = Poly.one(self.n, self.excluded)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_unit(self) -> bool:
        return self.constant_term in (1, -1)

    def inverse(self) -> "Poly":
        """Inverse of a unit (constant term +-1); the series terminates by nilpotency."""
        c = self.constant_term
        if c not in (1, -1):
            raise ValueError("only polynomials with constant term +-1 are invertible")
        v = self.scale(c) - 1  # self = c(1 + v)
        total = Poly.one(self.n, self.excluded)
        power = Poly.one(self.n, self.excluded)
        for _ in range(self.n):
            power = power * (-v)
            if not power:
                break
            total = total + power
        return total.scale(c)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self._terms == ({(): other} if other else {})
        if not isinstance(other, Poly):
            return NotImplemented
        return self.n == other.n and self.excluded == other.excluded and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.excluded, frozenset(self._terms.items())))
        return self._hash

    # substitution

    def substitute(self, j: int, u: "Poly") -> "Poly":
        """Replace every X_j by ``X_j + X_j u - u X_j`` and truncate.

        ``u`` must have zero constant term.
        """
        self._check_ring(u)
        if j == self.excluded or not 1 <= j <= self.n:
            raise InvalidSequence(f"cannot substitute index {j} in ring (n={self.n}, i={self.excluded})")
        if u.constant_term:
            raise ValueError("substitution polynomial must have zero constant term")
        uterms = list(u._terms.items())
        out: Dict[Monomial, int] = {}
        for m, c in self._terms.items():
            out[m] = out.get(m, 0) + c
            if j not in m:
                continue
            p = m.index(j)
            head, tail = m[:p], m[p + 1:]
            used = set(m)
            for um, uc in uterms:
                if used.intersection(um):
                    continue
                a = head + (j,) + um + tail
                b = head + um + (j,) + tail
                out[a] = out.get(a, 0) + c * uc
                out[b] = out.get(b, 0) - c * uc
        return Poly._raw(self.n, self.excluded, {m: c for m, c in out.items() if c})

    # serialization

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"Poly(n={self.n}, i={self.excluded}, {self.to_text()!r})"

    def to_text(self) -> str:
        items = self.items()
        if not items:
            return "0"
        parts = []
        for k, (m, c) in enumerate(items):
            mono = "".join(f"X{j}" for j in m)
            mag = abs(c)
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}{mono}")
            if k == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("- " if c < 0 else "+ ") + body)
        return " ".join(parts)

    def to_structured(self) -> List[dict]:
        return [{"indices": list(m), "coeff": c} for m, c in self.items()]

    @classmethod
    def from_structured(cls, n: int, excluded: int, data: Iterable[Mapping]) -> "Poly":
        terms: Dict[Monomial, int] = {}
        for row in data:
            m = tuple(row["indices"])
            terms[m] = terms.get(m, 0) + int(row["coeff"])
        return cls(n, excluded, terms)

    _TERM = re.compile(r"\s*([+-]?)\s*(\d*)\s*((?:X\d+)*)\s*")

    @classmethod
    def parse(cls, n: int, excluded: int, text: str) -> "Poly":
        """Inverse of :meth:`to_text`, e.g. ``"1 + X1 - 2X1X2"``."""
        s = text.strip()
        if s in ("", "0"):
            return cls.zero(n, excluded)
        terms: Dict[Monomial, int] = {}
        pos = 0
        while pos < len(s):
            mt = cls._TERM.match(s, pos)
            if mt is None or mt.end() == pos or not (mt.group(2) or mt.group(3)):
                raise ValueError(f"cannot parse polynomial at position {pos}: {text!r}")
            if pos > 0 and not mt.group(1):
                raise ValueError(f"missing sign at position {pos}: {text!r}")
            sign = -1 if mt.group(1) == "-" else 1
            c = int(mt.group(2)) if mt.group(2) else 1
            m = tuple(int(x) for x in re.findall(r"X(\d+)", mt.group(3)))
            terms[m] = terms.get(m, 0) + sign * c
            pos = mt.end()
        return cls(n, excluded, terms)


@dataclass(frozen=True, order=True)
class Residue:
    """Residue class ``value mod modulus``; modulus 0 means the plain integer."""

    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 0:
            raise ValueError("modulus must be nonnegative")
        if self.modulus and not 0 <= self.value < self.modulus:
            raise ValueError("value must be canonical for a positive modulus")

    @classmethod
    def of(cls, value: int, modulus: int) -> "Residue":
        modulus = abs(modulus)
        return cls(value % modulus if modulus else value, modulus)

    @property
    def is_zero(self) -> bool:
        return self.value == 0

    def __str__(self) -> str:
        return str(self.value) if self.modulus == 0 else f"{self.value} mod {self.modulus}"

    def to_structured(self) -> dict:
        return {"value": self.value, "modulus": self.modulus}


def indeterminacy(p: Poly, seq: Iterable[int]) -> int:
    """gcd of the coefficients of ``p`` on the nonempty proper subsequences of ``seq``.

    The gcd of an empty family, or of zeros only, is 0.
    """
    seq = check_sequence(seq, p.n, p.excluded)
    return _indeterminacy(p, seq)


def _indeterminacy(p: Poly, seq: Monomial) -> int:
    g = 0
    get = p._terms.get
    for sub in proper_subsequences(seq):
        c = get(sub)
        if c:
            g = math.gcd(g, c)
            if g == 1:
                break
    return g


def residue(p: Poly, seq: Iterable[int]) -> Residue:
    seq = check_sequence(seq, p.n, p.excluded)
    return Residue.of(p._terms.get(seq, 0), _indeterminacy(p, seq))


def residue_table(p: Poly, seqs: Optional[Iterable[Monomial]] = None) -> List[Tuple[Monomial, int, int, Residue]]:
    """Rows ``(I, kappa, D, kappa_tilde)`` for every nonempty sequence (or the given ones)."""
    if seqs is None:
        return list(_full_table(p))
    rows = []
    for seq in seqs:
        seq = check_sequence(seq, p.n, p.excluded)
        rows.append(_row(p, seq))
    return rows


def _row(p: Poly, seq: Monomial) -> Tuple[Monomial, int, int, Residue]:
    k = p._terms.get(seq, 0)
    d = _indeterminacy(p, seq)
    return (seq, k, d, Residue.of(k, d))


@lru_cache(maxsize=1 << 16)
def _full_table(p: Poly) -> Tuple[Tuple[Monomial, int, int, Residue], ...]:
    return tuple(_row(p, seq) for seq in sequences(p.n, p.excluded))
