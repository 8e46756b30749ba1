"""Singularity words from a cross-section diagram.

A cross-section is a diagram of a self-singular link in 3-space together
with, for each singular point, the based loop through it, recorded as the
signed sequence of diagram arcs it passes under.  Self-singular points of
the link itself may be entered as self-crossings of either sign: in the
reduced group a component's meridians commute with each other's conjugates,
so the sign of a self-crossing is invisible.

For a component ``i`` we delete it from the diagram, express every remaining
arc's meridian as a conjugate ``w_a^-1 x_c w_a`` of its component's base
meridian (Milnor's algorithm, iterated in the reduced free group until the
expansions settle) and read off loop words as products of meridians.

Wirtinger convention at a crossing with over-arc ``o``, sign ``e``::

    m(under_out) = m(o)^-e  m(under_in)  m(o)^e
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .invariants import LinkMapPresentation, Singularity
from .ring import Poly
from .words import Word, magnus_expand, normal_form, positive_normalize

__all__ = [
    "MalformedDiagram",
    "NonStabilizing",
    "NotFreeOnMeridians",
    "LoopError",
    "Crossing",
    "DiagramSpec",
    "LoopSpec",
    "CrossSection",
    "MilnorSolution",
    "milnor_sweeps",
    "conjugator_words",
    "loop_word",
    "presentation_from_cross_section",
    "check_wirtinger_consistency",
]


class MalformedDiagram(ValueError):
    pass


class NonStabilizing(RuntimeError):
    """Milnor's iteration did not settle, or settled on an inconsistent assignment."""


class NotFreeOnMeridians(NonStabilizing):
    """A closing Wirtinger relation fails: the reduced group is not free on the meridians."""


class LoopError(ValueError):
    pass


@dataclass(frozen=True)
class Crossing:
    over: str
    under_in: str
    under_out: str
    sign: int


@dataclass(frozen=True)
class DiagramSpec:
    n: int
    arcs: Tuple[Tuple[str, int], ...]
    base_arcs: Tuple[Tuple[int, str], ...]
    crossings: Tuple[Crossing, ...]

    def __post_init__(self):
        self.validate()

    @classmethod
    def build(cls, n: int, arcs: Mapping[str, int], base_arcs: Mapping[int, str],
              crossings: Iterable[Sequence]) -> "DiagramSpec":
        xs = tuple(c if isinstance(c, Crossing) else Crossing(*c) for c in crossings)
        return cls(n, tuple(arcs.items()), tuple(sorted((int(k), v) for k, v in base_arcs.items())), xs)

    @property
    def component(self) -> Dict[str, int]:
        return dict(self.arcs)

    @property
    def base(self) -> Dict[int, str]:
        return dict(self.base_arcs)

    def validate(self) -> None:
        comp = {}
        for a, c in self.arcs:
            if a in comp:
                raise MalformedDiagram(f"duplicate arc id {a!r}")
            if not 1 <= c <= self.n:
                raise MalformedDiagram(f"arc {a!r}: component {c} out of range 1..{self.n}")
            comp[a] = c
        base = dict(self.base_arcs)
        for c in range(1, self.n + 1):
            if c not in base:
                raise MalformedDiagram(f"component {c} has no base arc")
            if base[c] not in comp:
                raise MalformedDiagram(f"base arc {base[c]!r} of component {c} does not exist")
            if comp[base[c]] != c:
                raise MalformedDiagram(f"base arc {base[c]!r} does not belong to component {c}")
        outgoing: Dict[str, Crossing] = {}
        incoming = set()
        for x in self.crossings:
            for a in (x.over, x.under_in, x.under_out):
                if a not in comp:
                    raise MalformedDiagram(f"crossing refers to unknown arc {a!r}")
            if x.sign not in (1, -1):
                raise MalformedDiagram(f"crossing sign must be +-1, got {x.sign}")
            if comp[x.under_in] != comp[x.under_out]:
                raise MalformedDiagram(f"under arcs {x.under_in!r}, {x.under_out!r} lie on different components")
            if x.under_out in incoming:
                raise MalformedDiagram(f"arc {x.under_out!r} ends at two crossings")
            if x.under_in in outgoing:
                raise MalformedDiagram(f"arc {x.under_in!r} starts at two crossings")
            incoming.add(x.under_out)
            outgoing[x.under_in] = x
        # each component must be one cycle of arcs
        for c in range(1, self.n + 1):
            arcs_c = {a for a, k in self.arcs if k == c}
            walk = self.walk(c, outgoing)
            seen = {x.under_in for x in walk} if walk else {base[c]}
            if seen != arcs_c:
                raise MalformedDiagram(f"arcs of component {c} do not form a single closed strand")

    def walk(self, c: int, outgoing: Optional[Dict[str, Crossing]] = None) -> List[Crossing]:
        """Crossings met along component ``c`` starting at its base arc."""
        if outgoing is None:
            outgoing = {x.under_in: x for x in self.crossings}
        start = self.base[c]
        out: List[Crossing] = []
        a = start
        while a in outgoing:
            x = outgoing[a]
            out.append(x)
            a = x.under_out
            if a == start:
                return out
            if len(out) > len(self.crossings):
                break
        if out:
            raise MalformedDiagram(f"component {c} does not close up")
        return out

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "arcs": [{"id": a, "component": c} for a, c in self.arcs],
            "base_arcs": {str(c): a for c, a in self.base_arcs},
            "crossings": [
                {"over": x.over, "under_in": x.under_in, "under_out": x.under_out, "sign": x.sign}
                for x in self.crossings
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "DiagramSpec":
        try:
            return cls.build(
                int(data["n"]),
                {str(r["id"]): int(r["component"]) for r in data.get("arcs", [])},
                {int(k): str(v) for k, v in data.get("base_arcs", {}).items()},
                [Crossing(str(r["over"]), str(r["under_in"]), str(r["under_out"]), int(r["sign"]))
                 for r in data.get("crossings", [])],
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, MalformedDiagram):
                raise
            raise MalformedDiagram(f"bad diagram record: {exc!r}") from None

    def with_base_arc(self, c: int, arc: str) -> "DiagramSpec":
        base = self.base
        base[c] = arc
        return DiagramSpec(self.n, self.arcs, tuple(sorted(base.items())), self.crossings)


@dataclass(frozen=True)
class LoopSpec:
    """Signed arcs passed under by a based loop, in order."""

    crossings: Tuple[Tuple[str, int], ...]

    @classmethod
    def of(cls, pairs: Iterable[Sequence]) -> "LoopSpec":
        return cls(tuple((str(a), int(s)) for a, s in pairs))

    def reversed(self) -> "LoopSpec":
        return LoopSpec(tuple((a, -s) for a, s in reversed(self.crossings)))


@dataclass(frozen=True)
class CrossSection:
    n: int
    diagram: DiagramSpec
    singularities: Tuple[Tuple[int, Tuple[Tuple[int, LoopSpec], ...]], ...]

    def __post_init__(self):
        if self.diagram.n != self.n:
            raise MalformedDiagram("cross-section and diagram disagree on n")
        comp = self.diagram.component
        for i, sings in self.singularities:
            if not 1 <= i <= self.n:
                raise MalformedDiagram(f"singularities on unknown component {i}")
            for sign, loop in sings:
                if sign not in (1, -1):
                    raise MalformedDiagram(f"singularity sign must be +-1, got {sign}")
                for a, s in loop.crossings:
                    if a not in comp:
                        raise MalformedDiagram(f"loop refers to unknown arc {a!r}")
                    if s not in (1, -1):
                        raise MalformedDiagram(f"loop crossing sign must be +-1, got {s}")

    @classmethod
    def build(cls, diagram: DiagramSpec, singularities: Mapping[int, Iterable[Tuple[int, LoopSpec]]]) -> "CrossSection":
        sings = tuple(sorted((int(i), tuple(v)) for i, v in singularities.items()))
        return cls(diagram.n, diagram, sings)

    def to_json(self) -> dict:
        data = self.diagram.to_json()
        data["singularities"] = {
            str(i): [{"sign": s, "loop": [[a, e] for a, e in loop.crossings]} for s, loop in sings]
            for i, sings in self.singularities
        }
        return data

    @classmethod
    def from_json(cls, data: Mapping) -> "CrossSection":
        diagram = DiagramSpec.from_json(data.get("diagram", data))
        try:
            sings = {
                int(i): [(int(r["sign"]), LoopSpec.of(r.get("loop", []))) for r in rows]
                for i, rows in data.get("singularities", {}).items()
            }
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedDiagram(f"bad singularity record: {exc!r}") from None
        return cls.build(diagram, sings)

    @classmethod
    def load(cls, path) -> "CrossSection":
        with open(path) as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise MalformedDiagram(f"invalid JSON: {exc}") from None
        return cls.from_json(data)


# ---------------------------------------------------------------------------
# Milnor's algorithm


@dataclass(frozen=True)
class MilnorSolution:
    n: int
    excluded: int
    conjugators: Dict[str, Poly]   # arc -> expansion of w_a
    words: Dict[str, Word]         # arc -> collected word with that expansion
    sweeps: int                    # sweeps that still changed something

    def meridian(self, arc: str, component: int) -> Poly:
        w = self.conjugators[arc]
        return w.inverse() * Poly.one(self.n, self.excluded).mul_letter(component, 1) * w


class _Reduced:
    """Diagram with component ``i`` deleted: arcs merged across its over-passes."""

    def __init__(self, d: DiagramSpec, i: int):
        if not 1 <= i <= d.n:
            raise MalformedDiagram(f"component {i} out of range 1..{d.n}")
        comp = d.component
        self.comp = comp
        parent = {a: a for a, c in d.arcs if c != i}

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for x in d.crossings:
            if comp[x.under_in] != i and comp[x.over] == i:
                ra, rb = find(x.under_in), find(x.under_out)
                if ra != rb:
                    parent[rb] = ra
        self.cls = {a: find(a) for a in parent}
        # retained crossings in walk order, per component; the last one closes the strand
        self.chains: Dict[int, List[Crossing]] = {}
        self.base: Dict[int, str] = {}
        for c in range(1, d.n + 1):
            if c == i:
                continue
            self.base[c] = self.cls[d.base[c]]
            self.chains[c] = [x for x in d.walk(c) if comp[x.over] != i]


def milnor_sweeps(d: DiagramSpec, i: int, max_sweeps: Optional[int] = None) -> MilnorSolution:
    """Run the conjugator iteration for the diagram with component ``i`` deleted."""
    red = _Reduced(d, i)
    n = d.n
    cap = n if max_sweeps is None else max_sweeps
    one = Poly.one(n, i)
    classes = sorted(set(red.cls.values()))
    conj = {a: one for a in classes}

    def meridians(w):
        return {a: w[a].inverse() * one.mul_letter(red.comp[a], 1) * w[a] for a in classes}

    changed_sweeps = 0
    for sweep in range(1, cap + 1):
        prev_m = meridians(conj)
        new = {a: one for a in classes}
        for c, chain in red.chains.items():
            for x in chain[:-1]:
                o = red.cls[x.over]
                m = prev_m[o] if x.sign == 1 else prev_m[o].inverse()
                # w_out = w_in * w_over^-1 x_over^e w_over, i.e. w_in * m_over^e
                new[red.cls[x.under_out]] = new[red.cls[x.under_in]] * m
        if new == conj:
            break
        conj = new
        changed_sweeps = sweep
    else:
        raise NonStabilizing(
            f"conjugator expansions still changing after {cap} sweeps (component {i} deleted)"
        )
    # closing relations
    final_m = meridians(conj)
    for c, chain in red.chains.items():
        if not chain:
            continue
        x = chain[-1]
        o = red.cls[x.over]
        mo = final_m[o] if x.sign == 1 else final_m[o].inverse()
        lhs = final_m[red.cls[x.under_out]]
        rhs = mo.inverse() * final_m[red.cls[x.under_in]] * mo
        if lhs != rhs:
            raise NotFreeOnMeridians(
                f"component {c} does not close up in the reduced free group (component {i} deleted): "
                f"the reduced group is not free on the meridians"
            )
    words = {}
    for a, ca in red.cls.items():
        words[a] = normal_form(conj[ca], n, i).word(n, i)
    return MilnorSolution(n, i, {a: conj[ca] for a, ca in red.cls.items()}, words, changed_sweeps)


def conjugator_words(d: DiagramSpec, i: int) -> Dict[str, Word]:
    """Map each arc off component ``i`` to ``w_a`` with meridian ``w_a^-1 x_c w_a``."""
    return milnor_sweeps(d, i).words


def check_wirtinger_consistency(d: DiagramSpec, i: int, words: Optional[Mapping[str, Word]] = None) -> bool:
    """Check base meridians and every retained crossing relation on expansions."""
    if words is None:
        try:
            words = conjugator_words(d, i)
        except NonStabilizing:
            return False
    comp = d.component
    n = d.n
    try:
        mer = {}
        for a, c in d.arcs:
            if c == i:
                continue
            w = words[a]
            mer[a] = magnus_expand(w.inverse() * Word.gen(c, n, i) * w)
    except (KeyError, ValueError):
        return False
    one = Poly.one(n, i)
    for c, a in d.base_arcs:
        if c != i and mer[a] != one.mul_letter(c, 1):
            return False
    for x in d.crossings:
        if comp[x.under_in] == i:
            continue
        if comp[x.over] == i:
            if mer[x.under_in] != mer[x.under_out]:
                return False
            continue
        mo = mer[x.over] if x.sign == 1 else mer[x.over].inverse()
        if mer[x.under_out] != mo.inverse() * mer[x.under_in] * mo:
            return False
    return True


def loop_word(d: DiagramSpec, i: int, loop: LoopSpec, words: Optional[Mapping[str, Word]] = None) -> Word:
    """Product over the loop's crossings of ``(w_a^-1 x_c w_a)^e``."""
    comp = d.component
    for a, _ in loop.crossings:
        if a not in comp:
            raise LoopError(f"loop refers to unknown arc {a!r}")
        if comp[a] == i:
            raise LoopError(f"loop for component {i} passes under arc {a!r} of component {i}")
    if words is None:
        words = conjugator_words(d, i)
    out = Word.empty(d.n, i)
    for a, s in loop.crossings:
        w = words[a]
        m = w.inverse() * Word.gen(comp[a], d.n, i) * w
        out = out * (m if s == 1 else m.inverse())
    return out


def presentation_from_cross_section(cs: CrossSection) -> LinkMapPresentation:
    comps = {}
    for i, sings in cs.singularities:
        if not sings:
            continue
        words = conjugator_words(cs.diagram, i)
        out = []
        for sign, loop in sings:
            w, _ = positive_normalize(loop_word(cs.diagram, i, loop, words))
            out.append(Singularity(sign, normal_form(w)))
        comps[i] = out
    return LinkMapPresentation(cs.n, comps)
