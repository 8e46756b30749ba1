"""Kirk-type invariants of link maps from their singularity words.

A link map enters as a :class:`LinkMapPresentation`: for every component
``i`` a list of signed singular points, each carrying a word in the reduced
free group on the other components' meridians.  From it we compute the based
group-ring sum ``S_i``, its expansion ``E_i``, the residues ``kappa~(I; i)``,
the multisets ``K_i`` and ``K(I; i)``, the covering-space sum ``sigma_i`` and,
for two components, the classical Kirk polynomials.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .ring import (
    Monomial,
    Poly,
    Residue,
    check_sequence,
    format_sequence,
    residue,
    residue_table,
    sequences,
)
from .words import Expr, Word, WordValueError, magnus_expand, parse_word, positive_normalize

__all__ = [
    "PresentationError",
    "BasingError",
    "Singularity",
    "LinkMapPresentation",
    "GroupRingTerm",
    "GroupRingElement",
    "KEntry",
    "KSequence",
    "KirkPolynomial",
    "s_invariant",
    "e_invariant",
    "kappa_tilde",
    "kappa_table",
    "k_multiset",
    "k_sequence",
    "k_sequences",
    "sigma_covering",
    "kirk_classical",
    "basing_change",
    "rebase_component",
]


class PresentationError(ValueError):
    """Malformed link map presentation."""


class BasingError(ValueError):
    """A basing change word uses a generator that is excluded where it is applied."""


@dataclass(frozen=True)
class Singularity:
    sign: int
    expr: Expr

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise PresentationError(f"singularity sign must be +-1, got {self.sign}")


class LinkMapPresentation:
    """Signed singularity words per component.

    ``components[i]`` lists the singular points of component ``i``; their
    words use generators ``x_j`` with ``j != i``.
    """

    def __init__(self, n: int, components: Optional[Mapping[int, Iterable[Singularity]]] = None):
        if n < 2:
            raise PresentationError("a link map presentation needs n >= 2 components")
        self.n = n
        comps: Dict[int, Tuple[Singularity, ...]] = {i: () for i in range(1, n + 1)}
        words: Dict[int, Tuple[Tuple[int, Word], ...]] = {i: () for i in range(1, n + 1)}
        for i, sings in (components or {}).items():
            i = int(i)
            if not 1 <= i <= n:
                raise PresentationError(f"component {i} out of range 1..{n}")
            sings = tuple(sings)
            try:
                words[i] = tuple((s.sign, s.expr.word(n, i)) for s in sings)
            except WordValueError as exc:
                raise PresentationError(f"component {i}: {exc}") from None
            comps[i] = sings
        self.components = comps
        self._words = words
        self._s_cache: Dict[int, "GroupRingElement"] = {}

    def words(self, i: int) -> List[Tuple[int, Word]]:
        self._check_component(i)
        return list(self._words[i])

    def _check_component(self, i: int) -> None:
        if not 1 <= i <= self.n:
            raise PresentationError(f"component {i} out of range 1..{self.n}")

    def with_component(self, i: int, sings: Iterable[Singularity]) -> "LinkMapPresentation":
        comps = dict(self.components)
        comps[i] = tuple(sings)
        return LinkMapPresentation(self.n, comps)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinkMapPresentation):
            return NotImplemented
        return self.n == other.n and self.components == other.components

    def __repr__(self) -> str:
        body = {i: [(s.sign, s.expr.to_text()) for s in ss] for i, ss in self.components.items() if ss}
        return f"LinkMapPresentation(n={self.n}, {body})"

    # file format: {"n": 4, "components": {"4": [{"sign": 1, "word": "[x1,[x2,x3]]"}]}}

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "components": {
                str(i): [{"sign": s.sign, "word": s.expr.to_text()} for s in sings]
                for i, sings in sorted(self.components.items())
                if sings
            },
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "LinkMapPresentation":
        try:
            n = int(data["n"])
        except (KeyError, TypeError, ValueError):
            raise PresentationError("presentation needs an integer field 'n'") from None
        raw = data.get("components")
        if raw is None:
            raw = {}
        if not isinstance(raw, Mapping):
            raise PresentationError("'components' must be an object keyed by component index")
        comps = {}
        for key, rows in raw.items():
            try:
                i = int(key)
            except ValueError:
                raise PresentationError(f"bad component key {key!r}") from None
            if not 1 <= i <= n:
                raise PresentationError(f"component {i} out of range 1..{n}")
            sings = []
            for row in rows:
                if not isinstance(row, Mapping) or "sign" not in row or "word" not in row:
                    raise PresentationError(f"component {i}: each singularity needs 'sign' and 'word'")
                try:
                    expr = parse_word(str(row["word"]), n, i)
                except ValueError as exc:
                    raise PresentationError(f"component {i}: {exc}") from None
                sign = row["sign"]
                if sign not in (1, -1):
                    raise PresentationError(f"component {i}: sign must be 1 or -1, got {sign!r}")
                sings.append(Singularity(int(sign), expr))
            comps[i] = sings
        return cls(n, comps)

    @classmethod
    def load(cls, path) -> "LinkMapPresentation":
        with open(path) as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise PresentationError(f"invalid JSON: {exc}") from None
        return cls.from_json(data)

    def dump(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=2, sort_keys=True)
            fh.write("\n")


# ---------------------------------------------------------------------------
# group ring


@dataclass(frozen=True)
class GroupRingTerm:
    rho: int
    word: Word          # positive witness, first one met
    expansion: Poly
    inversions: int = 0  # how many contributing words were inverted to become positive
    count: int = 1       # how many singularities were aggregated


@dataclass(frozen=True)
class GroupRingElement:
    """``sum rho(g) (g - 1)`` over positive, nontrivial ``g`` with ``rho(g) != 0``.

    Terms are keyed by expansion (a faithful invariant of ``g``) and sorted
    by it.
    """

    n: int
    component: int
    terms: Tuple[GroupRingTerm, ...]

    def rho(self) -> Dict[Poly, int]:
        return {t.expansion: t.rho for t in self.terms}

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        return (self.n, self.component) == (other.n, other.component) and self.rho() == other.rho()

    def __hash__(self):
        return hash((self.n, self.component, frozenset(self.rho().items())))


def s_invariant(p: LinkMapPresentation, i: int) -> GroupRingElement:
    """Aggregate the positive-normalized singularity words of component ``i``."""
    p._check_component(i)
    cached = p._s_cache.get(i)
    if cached is not None:
        return cached
    buckets: Dict[Poly, list] = {}
    for sign, w in p.words(i):
        pw, inverted = positive_normalize(w)
        e = magnus_expand(pw)
        if e == 1:
            continue
        slot = buckets.get(e)
        if slot is None:
            buckets[e] = [sign, pw, int(inverted), 1]
        else:
            slot[0] += sign
            slot[2] += int(inverted)
            slot[3] += 1
    terms = [
        GroupRingTerm(rho, w, e, inv, cnt)
        for e, (rho, w, inv, cnt) in buckets.items()
        if rho
    ]
    terms.sort(key=lambda t: t.expansion.sort_key())
    result = GroupRingElement(p.n, i, tuple(terms))
    p._s_cache[i] = result
    return result


def e_invariant(p: LinkMapPresentation, i: int) -> Poly:
    total = Poly.zero(p.n, i)
    for t in s_invariant(p, i):
        total = total + (t.expansion - 1).scale(t.rho)
    return total


def kappa_tilde(p: LinkMapPresentation, i: int, seq: Iterable[int]) -> Residue:
    seq = check_sequence(seq, p.n, i)
    return residue(e_invariant(p, i), seq)


def kappa_table(p: LinkMapPresentation, i: int, seqs: Optional[Iterable[Monomial]] = None):
    """Rows ``(I, kappa, D, kappa_tilde)`` of ``E_i`` over all (or the given) sequences."""
    return residue_table(e_invariant(p, i), seqs)


# ---------------------------------------------------------------------------
# multisets


@dataclass(frozen=True, order=True)
class KEntry:
    """One element ``(rho(g), sum_I kappa~(I; g) X_I)`` of ``K_i``.

    ``payload`` carries the canonical residue values; ``moduli`` lists the
    sequences whose modulus is nonzero.
    """

    rho: int
    payload_key: Tuple
    moduli: Tuple[Tuple[Monomial, int], ...]
    payload: Poly = field(compare=False)

    def residue(self, seq: Monomial) -> Residue:
        return Residue(self.payload.coeff(seq), dict(self.moduli).get(seq, 0))

    def to_text(self) -> str:
        return f"({self.rho}, {self.payload.to_text()})"

    def to_structured(self) -> dict:
        return {
            "rho": self.rho,
            "payload": self.payload.to_structured(),
            "moduli": [{"indices": list(m), "modulus": d} for m, d in self.moduli],
        }


def _entry_residues(e: Poly) -> List[Tuple[Monomial, int, int, Residue]]:
    return residue_table(e)


def k_multiset(p: LinkMapPresentation, i: int) -> Tuple[KEntry, ...]:
    """The multiset ``K_i`` as a sorted tuple (duplicates retained)."""
    out = []
    for t in s_invariant(p, i):
        payload = {}
        moduli = []
        for seq, _, _, r in _entry_residues(t.expansion):
            if r.value:
                payload[seq] = r.value
            if r.modulus:
                moduli.append((seq, r.modulus))
        poly = Poly._raw(p.n, i, payload)
        out.append(KEntry(t.rho, poly.sort_key(), tuple(moduli), poly))
    return tuple(sorted(out))


_ZERO_RESIDUE = Residue(0, 0)


@dataclass(frozen=True)
class KSequence:
    """``K(I; i)`` in both readings: every contributing ``g``, and without ``(rho, 0)`` entries."""

    sequence: Monomial
    full: Tuple[Tuple[int, Residue], ...]

    @property
    def filtered(self) -> Tuple[Tuple[int, Residue], ...]:
        return tuple(e for e in self.full if e[1] != _ZERO_RESIDUE)

    @staticmethod
    def format(entries) -> str:
        return "{" + "; ".join(f"({rho},{r})" for rho, r in entries) + "}"

    def to_structured(self) -> dict:
        def rows(entries):
            return [{"rho": rho, "value": r.value, "modulus": r.modulus} for rho, r in entries]

        return {"sequence": list(self.sequence), "full": rows(self.full), "filtered": rows(self.filtered)}


def _multiset(pairs) -> Tuple:
    return tuple(sorted(pairs))


def k_sequence(p: LinkMapPresentation, i: int, seq: Iterable[int]) -> KSequence:
    seq = check_sequence(seq, p.n, i)
    pairs = [(t.rho, residue(t.expansion, seq)) for t in s_invariant(p, i)]
    return KSequence(seq, _multiset(pairs))


def k_sequences(p: LinkMapPresentation, i: int) -> List[KSequence]:
    """``K(I; i)`` for every nonempty sequence, computed in one pass per ``g``."""
    seqs = sequences(p.n, i)
    per_seq: Dict[Monomial, list] = {s: [] for s in seqs}
    for t in s_invariant(p, i):
        for seq, _, _, r in residue_table(t.expansion):
            per_seq[seq].append((t.rho, r))
    return [KSequence(s, _multiset(per_seq[s])) for s in seqs]


def sigma_covering(p: LinkMapPresentation, i: int) -> Poly:
    """Expansion of ``-sum rho(g) (g - 1)(g^-1 - 1)``."""
    total = Poly.zero(p.n, i)
    for t in s_invariant(p, i):
        a = t.expansion - 1
        b = t.expansion.inverse() - 1
        total = total - (a * b).scale(t.rho)
    return total


# ---------------------------------------------------------------------------
# two components


@dataclass(frozen=True)
class KirkPolynomial:
    """``sum_p eps(p) (t^{n_p} - 1)`` stored as ``{n_p: sum of signs}``."""

    counts: Tuple[Tuple[int, int], ...]

    def coefficients(self) -> Dict[int, int]:
        coeffs: Dict[int, int] = {}
        for k, rho in self.counts:
            coeffs[k] = coeffs.get(k, 0) + rho
            coeffs[0] = coeffs.get(0, 0) - rho
        return {k: c for k, c in coeffs.items() if c}

    def to_text(self) -> str:
        coeffs = self.coefficients()
        if not coeffs:
            return "0"
        pos = sorted((k for k, c in coeffs.items() if c > 0), reverse=True)
        neg = sorted((k for k, c in coeffs.items() if c < 0), reverse=True)
        out = ""
        for k in pos + neg:
            c = coeffs[k]
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            mag = abs(c)
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}{mono}")
            sign = "-" if c < 0 else ("+" if out else "")
            out += sign + body
        return out

    def __str__(self) -> str:
        return self.to_text()


def kirk_classical(p: LinkMapPresentation) -> Tuple[KirkPolynomial, KirkPolynomial]:
    if p.n != 2:
        raise PresentationError(f"the classical Kirk invariant needs n = 2, got n = {p.n}")
    out = []
    for i in (1, 2):
        j = 3 - i
        counts: Dict[int, int] = {}
        for t in s_invariant(p, i):
            k = t.expansion.coeff((j,))
            counts[k] = counts.get(k, 0) + t.rho
        out.append(KirkPolynomial(tuple(sorted((k, r) for k, r in counts.items() if r))))
    return out[0], out[1]


# ---------------------------------------------------------------------------
# basing changes


def basing_change(
    p: LinkMapPresentation, j: int, g: Expr, components: Optional[Iterable[int]] = None
) -> LinkMapPresentation:
    """Substitute ``x_j -> g^-1 x_j g`` in the words of the given components.

    By default every component other than ``j`` is affected; ``g`` must avoid
    the excluded generator of each affected component.
    """
    if not 1 <= j <= p.n:
        raise BasingError(f"component {j} out of range 1..{p.n}")
    targets = set(range(1, p.n + 1)) - {j} if components is None else set(components) - {j}
    comps = dict(p.components)
    for i in sorted(targets):
        p._check_component(i)
        if not comps[i]:
            continue
        try:
            gw = g.word(p.n, i)
        except WordValueError as exc:
            raise BasingError(f"component {i}: {exc}") from None
        if magnus_expand(gw) == 1:
            continue
        image = Word.gen(j, p.n, i).conjugate(gw)
        comps[i] = tuple(
            Singularity(s.sign, s.expr.word(p.n, i).substitute(j, image).to_expr()) for s in comps[i]
        )
    return LinkMapPresentation(p.n, comps)


def rebase_component(p: LinkMapPresentation, i: int, gamma: Expr) -> LinkMapPresentation:
    """Conjugate every word of component ``i``: ``w -> gamma^-1 w gamma``."""
    p._check_component(i)
    try:
        gw = gamma.word(p.n, i)
    except WordValueError as exc:
        raise BasingError(f"component {i}: {exc}") from None
    if magnus_expand(gw) == 1:
        return p
    sings = [Singularity(s.sign, s.expr.word(p.n, i).conjugate(gw).to_expr()) for s in p.components[i]]
    return p.with_component(i, sings)
