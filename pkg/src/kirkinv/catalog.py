"""Link maps with known invariants, as presentations and cross-section fixtures.

Only the components whose invariants are tabulated carry singularities; the
other components' singular data is left empty (their words are not known),
so those components' invariants are not part of the expected tables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

from . import invariants as inv
from .invariants import LinkMapPresentation, Singularity
from .ring import Poly, Residue, format_sequence, sequences
from .wirtinger import Crossing, CrossSection, DiagramSpec, LoopSpec
from .words import Conj, Expr, Gen, nested_commutator, parse_word

__all__ = [
    "Expectation",
    "CatalogEntry",
    "build_fenn_rolfsen",
    "build_Y",
    "build_stirling",
    "build_stirling_reversed",
    "build_Y3",
    "fenn_rolfsen_cross_section",
    "y3_cross_section",
    "milnor_cross_section",
    "CATALOG",
    "build",
]


@dataclass(frozen=True)
class Expectation:
    label: str
    origin: str  # "published", "hand-derived" or "by-definition"
    compute: Callable[[LinkMapPresentation], Any]
    expected: Any

    def check(self, p: LinkMapPresentation) -> Tuple[bool, Any]:
        actual = self.compute(p)
        return actual == self.expected, actual


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    params: Dict[str, int]
    presentation: LinkMapPresentation
    authoritative: Tuple[int, ...]
    expected: Tuple[Expectation, ...] = field(default=())

    def check(self, p: Optional[LinkMapPresentation] = None) -> List[Tuple[Expectation, bool, Any]]:
        p = self.presentation if p is None else p
        return [(e, *e.check(p)) for e in self.expected]


def _sing(sign: int, expr: Expr) -> Singularity:
    return Singularity(sign, expr)


def _full(n: int) -> Tuple[int, ...]:
    return tuple(range(1, n))


def _filtered(i, seq):
    return lambda p: inv.k_sequence(p, i, seq).filtered


def _full_k(i, seq):
    return lambda p: inv.k_sequence(p, i, seq).full


def _r(v, m=0):
    return Residue(v, m)


def build_fenn_rolfsen() -> CatalogEntry:
    p = LinkMapPresentation(2, {1: [_sing(-1, Gen(2))], 2: [_sing(1, Gen(1))]})
    expected = (
        Expectation("kirk (sigma_1, sigma_2)", "published",
                    lambda q: tuple(k.to_text() for k in inv.kirk_classical(q)), ("1-t", "t-1")),
        Expectation("kappa~(2;1)", "hand-derived", lambda q: inv.kappa_tilde(q, 1, (2,)), _r(-1)),
        Expectation("kappa~(1;2)", "hand-derived", lambda q: inv.kappa_tilde(q, 2, (1,)), _r(1)),
        Expectation("sigma_1", "by-definition", lambda q: inv.sigma_covering(q, 1), Poly.zero(2, 1)),
    )
    return CatalogEntry("fenn-rolfsen", {}, p, (1, 2), expected)


def y_word(n: int) -> Expr:
    """``[x_1, [x_2, ... [x_{n-2}, x_{n-1}] ...]]``."""
    return nested_commutator(list(range(1, n)))


def _shorter_all_zero(i: int, n: int):
    def compute(p):
        e = inv.e_invariant(p, i)
        return all(e.coeff(s) == 0 for s in sequences(n, i, 1, n - 2))
    return compute


def build_Y(n: int) -> CatalogEntry:
    if n < 3:
        raise ValueError("Y[n] needs n >= 3")
    p = LinkMapPresentation(n, {n: [_sing(1, y_word(n))]})
    top = _full(n)
    expected = (
        Expectation(f"kappa~({format_sequence(top)};{n})", "published",
                    lambda q: inv.kappa_tilde(q, n, top), _r(1)),
        Expectation("kappa(I;n) = 0 for |I| <= n-2", "published", _shorter_all_zero(n, n), True),
        Expectation("E_n term count", "published", lambda q: len(inv.e_invariant(q, n)), 2 ** (n - 2)),
        Expectation("E_n homogeneous of degree n-1", "published",
                    lambda q: inv.e_invariant(q, n).is_homogeneous(n - 1), True),
        Expectation("E_n leading term", "published", lambda q: inv.e_invariant(q, n).leading_term(), (top, 1)),
        Expectation(f"K({format_sequence(top)};{n}) filtered", "published", _filtered(n, top), ((1, _r(1)),)),
        Expectation("sigma_n", "published", lambda q: inv.sigma_covering(q, n), Poly.zero(n, n)),
    )
    return CatalogEntry("Y", {"n": n}, p, (n,), expected)


def stirling_c(n: int, reversed_index: Optional[int] = None) -> Expr:
    """``c = [x_2, [x_3, ... [x_{n-2}, x_{n-1}] ...]]``, with ``x_i^-1`` in place of ``x_i`` if reversed."""
    inverted = () if reversed_index is None else (reversed_index,)
    return nested_commutator(list(range(2, n)), inverted)


def _stirling_presentation(n: int, reversed_index: Optional[int]) -> LinkMapPresentation:
    c = stirling_c(n, reversed_index)
    return LinkMapPresentation(n, {n: [_sing(1, Gen(1)), _sing(-1, Conj(Gen(1), c))]})


def build_stirling(n: int) -> CatalogEntry:
    if n < 3:
        raise ValueError("S[n] needs n >= 3")
    p = _stirling_presentation(n, None)
    top = _full(n)
    expected = (
        Expectation(f"kappa~({format_sequence(top)};{n})", "published",
                    lambda q: inv.kappa_tilde(q, n, top), _r(-1)),
        Expectation("kappa(I;n) = 0 for |I| <= n-2", "published", _shorter_all_zero(n, n), True),
        Expectation(f"K(1;{n}) filtered", "published", _filtered(n, (1,)), ((-1, _r(1)), (1, _r(1)))),
        Expectation("sigma_n", "published", lambda q: inv.sigma_covering(q, n), Poly.zero(n, n)),
    )
    return CatalogEntry("stirling", {"n": n}, p, (n,), expected)


def build_stirling_reversed(n: int, i: int) -> CatalogEntry:
    if n < 3 or not 1 < i < n:
        raise ValueError("S^i[n] needs n >= 3 and 1 < i < n")
    p = _stirling_presentation(n, i)
    top = _full(n)
    x1 = Poly.var(n, n, 1)
    plain = _stirling_presentation(n, None)
    expected = (
        Expectation(f"kappa~({format_sequence(top)};{n})", "published",
                    lambda q: inv.kappa_tilde(q, n, top), _r(1)),
        Expectation(f"K_{n} payloads", "published",
                    lambda q: tuple((e.rho, e.payload) for e in inv.k_multiset(q, n)), ((-1, x1), (1, x1))),
        Expectation(f"K_{n} equals K_{n}(S[{n}])", "published",
                    lambda q: inv.k_multiset(q, n) == inv.k_multiset(plain, n), True),
    )
    return CatalogEntry("stirling", {"n": n, "reversed": i}, p, (n,), expected)


Y3_WORDS = ("x1 x2^-1", "x1", "x2 x1", "x2 x1 x2^-1")
Y3_SIGNS = (1, -1, 1, -1)


def build_Y3() -> CatalogEntry:
    sings = [_sing(s, parse_word(w, 3, 3)) for s, w in zip(Y3_SIGNS, Y3_WORDS)]
    p = LinkMapPresentation(3, {3: sings})
    expected = (
        Expectation("E_3", "published", lambda q: inv.e_invariant(q, 3), Poly.zero(3, 3)),
        Expectation("kappa~(I;3) = 0 for all I", "published",
                    lambda q: all(r == _r(0) for *_, r in inv.kappa_table(q, 3)), True),
        Expectation("K(1;3)", "published", _full_k(3, (1,)), ((-1, _r(1)), (-1, _r(1)), (1, _r(1)), (1, _r(1)))),
        Expectation("K(2;3) filtered", "published", _filtered(3, (2,)), ((1, _r(-1)), (1, _r(1)))),
        Expectation("K(2;3) full", "hand-derived", _full_k(3, (2,)),
                    ((-1, _r(0)), (-1, _r(0)), (1, _r(-1)), (1, _r(1)))),
    )
    return CatalogEntry("Y3", {}, p, (3,), expected)


# ---------------------------------------------------------------------------
# cross-section fixtures


def fenn_rolfsen_cross_section() -> CrossSection:
    """Two figure-eight curves whose lobes clasp with opposite crossing signs.

    Each component's self-crossing is its singular point; the loop through it
    runs around the clasping lobe and passes once under the other component.
    """
    d = DiagramSpec.build(
        2,
        {"a1": 1, "a2": 1, "b1": 2, "b2": 2},
        {1: "a1", 2: "b1"},
        [
            Crossing("b1", "a1", "a2", 1),   # clasp, component 1 under
            Crossing("a1", "a2", "a1", 1),   # singular point of component 1
            Crossing("a2", "b1", "b2", -1),  # clasp, component 2 under
            Crossing("b1", "b2", "b1", 1),   # singular point of component 2
        ],
    )
    return CrossSection.build(d, {
        1: [(-1, LoopSpec.of([("b1", -1)]))],
        2: [(1, LoopSpec.of([("a2", 1)]))],
    })


def y3_cross_section() -> CrossSection:
    """Slice of Y[3]: an unlink of three components drawn with Reidemeister-II overlaps.

    Component 2 lies over component 1 twice and component 1 over component 3
    twice, with opposite signs.  The loop of component 3's singular point
    runs Borromean-fashion under components 1 and 2.
    """
    d = DiagramSpec.build(
        3,
        {"a1": 1, "a2": 1, "a3": 1, "a4": 1, "b1": 2, "c1": 3, "c2": 3},
        {1: "a1", 2: "b1", 3: "c1"},
        [
            Crossing("b1", "a1", "a2", 1),
            Crossing("b1", "a2", "a3", -1),
            Crossing("c1", "a3", "a4", 1),
            Crossing("c1", "a4", "a1", -1),
            Crossing("a2", "c1", "c2", 1),
            Crossing("a2", "c2", "c1", -1),
        ],
    )
    loop = LoopSpec.of([("a2", -1), ("b1", -1), ("a2", 1), ("b1", 1)])
    return CrossSection.build(d, {3: [(1, loop)]})


def milnor_cross_section(n: int) -> CrossSection:
    """Trivial diagram of ``n - 1`` round components plus component ``n``.

    The loop of component ``n``'s singular point follows the letters of
    ``[x_1, [x_2, ... [x_{n-2}, x_{n-1}] ...]]`` (Milnor's link).
    """
    if n < 3:
        raise ValueError("needs n >= 3")
    arcs = {f"a{j}": j for j in range(1, n + 1)}
    d = DiagramSpec.build(n, arcs, {j: f"a{j}" for j in range(1, n + 1)}, [])
    loop = LoopSpec.of([(f"a{j}", s) for j, s in y_word(n).letters()])
    return CrossSection.build(d, {n: [(1, loop)]})


CATALOG = {
    "fenn-rolfsen": "Fenn-Rolfsen link map (2 components)",
    "Y": "Y[n], n >= 3 (use --n)",
    "stirling": "generalized Stirling link map S[n] (use --n; --reversed i for S^i[n])",
    "Y3": "3-component link map Y",
}


def build(name: str, n: Optional[int] = None, reversed_index: Optional[int] = None) -> CatalogEntry:
    if name == "fenn-rolfsen":
        return build_fenn_rolfsen()
    if name == "Y3":
        return build_Y3()
    if name == "Y":
        if n is None:
            raise ValueError("Y needs n")
        return build_Y(n)
    if name == "stirling":
        if n is None:
            raise ValueError("stirling needs n")
        if reversed_index is not None:
            return build_stirling_reversed(n, reversed_index)
        return build_stirling(n)
    raise KeyError(f"unknown catalog entry {name!r}; known: {', '.join(CATALOG)}")


def cross_section(name: str, n: Optional[int] = None) -> CrossSection:
    if name == "fenn-rolfsen":
        return fenn_rolfsen_cross_section()
    if name == "Y":
        if n is None:
            raise ValueError("Y needs n")
        return y3_cross_section() if n == 3 else milnor_cross_section(n)
    raise KeyError(f"no cross-section fixture for {name!r}")
