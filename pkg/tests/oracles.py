"""Independent reference implementations used only by the tests.

Nothing here calls the package's polynomial arithmetic except where noted;
the point is to cross-check the engine against code written differently.
"""

from __future__ import annotations

import itertools
import random
from functools import reduce
from math import gcd
from typing import Dict, List, Optional, Tuple

from kirkinv import Poly
from kirkinv.wirtinger import Crossing, DiagramSpec
from kirkinv.words import Word, magnus_expand

Series = Dict[Tuple[int, ...], int]


# ---------------------------------------------------------------------------
# Magnus expansion in the full (non-reduced) free algebra, truncated


def _series_mul(a: Series, b: Series, deg: int) -> Series:
    out: Series = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = ma + mb
            if len(m) > deg:
                continue
            out[m] = out.get(m, 0) + ca * cb
    return {m: c for m, c in out.items() if c}


def full_magnus(letters, deg: int) -> Series:
    """Expansion in Z<<X>> truncated above ``deg``; x^-1 -> sum_k (-X)^k."""
    acc: Series = {(): 1}
    for j, s in letters:
        if s > 0:
            f = {(): 1, (j,): 1}
        else:
            f = {(j,) * k: (-1) ** k for k in range(deg + 1)}
        acc = _series_mul(acc, f, deg)
    return acc


def reduced_magnus(letters, n: int, i: int) -> Dict[Tuple[int, ...], int]:
    """Project the truncated expansion onto multilinear monomials avoiding ``i``."""
    full = full_magnus(letters, n - 1)
    return {
        m: c
        for m, c in full.items()
        if c and i not in m and len(set(m)) == len(m)
    }


def poly_dict(p: Poly) -> Dict[Tuple[int, ...], int]:
    return {m: c for m, c in p.items()}


# ---------------------------------------------------------------------------
# residues by brute force over index subsets


def brute_kappa_D(coeffs: Dict[Tuple[int, ...], int], seq: Tuple[int, ...]) -> Tuple[int, int]:
    kappa = coeffs.get(tuple(seq), 0)
    vals = []
    for r in range(1, len(seq)):
        for pos in itertools.combinations(range(len(seq)), r):
            vals.append(coeffs.get(tuple(seq[p] for p in pos), 0))
    return kappa, reduce(gcd, (abs(v) for v in vals), 0)


def brute_residue(coeffs, seq) -> Tuple[int, int]:
    k, d = brute_kappa_D(coeffs, seq)
    return (k % d if d else k), d


def first_nonzero(coeffs: Dict[Tuple[int, ...], int]) -> Optional[int]:
    keys = sorted((m for m in coeffs if m and coeffs[m]), key=lambda m: (len(m), m))
    return coeffs[keys[0]] if keys else None


# ---------------------------------------------------------------------------
# random inputs


def random_letters(rng: random.Random, gens, max_len: int):
    return [(rng.choice(gens), rng.choice((1, -1))) for _ in range(rng.randint(0, max_len))]


def random_word(rng: random.Random, n: int, i: int, max_len: int = 12) -> Word:
    gens = [j for j in range(1, n + 1) if j != i]
    return Word(tuple(random_letters(rng, gens, max_len)), n, i)


def random_diagram(rng: random.Random, n: int, max_crossings: int = 8) -> DiagramSpec:
    """Combinatorial Wirtinger data: each component a cycle of arcs, random over-arcs.

    These need not come from a planar diagram; every crossing still reads as a
    Wirtinger relation, which is all the solver and oracle look at.
    """
    total = rng.randint(0, max_crossings)
    counts = [0] * n
    for _ in range(total):
        counts[rng.randrange(n)] += 1
    arcs = {}
    names = {}
    for c in range(1, n + 1):
        k = max(counts[c - 1], 1)
        names[c] = [f"{chr(96 + c)}{t}" for t in range(k)]
        for a in names[c]:
            arcs[a] = c
    all_arcs = list(arcs)
    crossings = []
    for c in range(1, n + 1):
        for t in range(counts[c - 1]):
            k = len(names[c])
            crossings.append(
                Crossing(rng.choice(all_arcs), names[c][t], names[c][(t + 1) % k], rng.choice((1, -1)))
            )
    base = {c: rng.choice(names[c]) for c in range(1, n + 1)}
    return DiagramSpec.build(n, arcs, base, crossings)


# ---------------------------------------------------------------------------
# bounded-conjugator Wirtinger solver


def _reduced_words(gens, length: int):
    letters = [(g, s) for g in gens for s in (1, -1)]
    frontier = [()]
    yield ()
    for _ in range(length):
        nxt = []
        for w in frontier:
            for l in letters:
                if w and w[-1] == (l[0], -l[1]):
                    continue
                nxt.append(w + (l,))
        yield from nxt
        frontier = nxt


def conjugate_ball(n: int, i: int, c: int, radius: int) -> Dict[Poly, Tuple]:
    """Expansions of ``g^-1 x_c g`` for reduced ``g`` of length <= radius."""
    gens = [j for j in range(1, n + 1) if j != i]
    out: Dict[Poly, Tuple] = {}
    for g in _reduced_words(gens, radius):
        w = Word(g, n, i)
        e = magnus_expand(w.inverse() * Word.gen(c, n, i) * w)
        out.setdefault(e, g)
    return out


def brute_force_meridians(d: DiagramSpec, i: int, radius: int) -> Optional[Dict[str, Poly]]:
    """Search meridian values in a bounded conjugate ball satisfying every relation.

    Returns ``None`` when no assignment inside the ball works.  Arcs are not
    merged in advance: over-crossings by component ``i`` become equalities.
    """
    comp = d.component
    n = d.n
    arcs = [a for a, c in d.arcs if c != i]
    balls = {c: conjugate_ball(n, i, c, radius) for c in set(comp[a] for a in arcs)}
    one = Poly.one(n, i)
    rels = [x for x in d.crossings if comp[x.under_in] != i]

    def ok(x, m) -> Optional[bool]:
        if x.under_in not in m or x.under_out not in m:
            return None
        if comp[x.over] == i:
            return m[x.under_in] == m[x.under_out]
        if x.over not in m:
            return None
        mo = m[x.over] if x.sign == 1 else m[x.over].inverse()
        return m[x.under_out] == mo.inverse() * m[x.under_in] * mo

    def forced(m):
        for x in rels:
            if comp[x.over] == i:
                if x.under_in in m and x.under_out not in m:
                    return x.under_out, m[x.under_in]
                if x.under_out in m and x.under_in not in m:
                    return x.under_in, m[x.under_out]
                continue
            if x.over not in m:
                continue
            mo = m[x.over] if x.sign == 1 else m[x.over].inverse()
            if x.under_in in m and x.under_out not in m:
                return x.under_out, mo.inverse() * m[x.under_in] * mo
            if x.under_out in m and x.under_in not in m:
                return x.under_in, mo * m[x.under_out] * mo.inverse()
        return None

    def search(m):
        if any(ok(x, m) is False for x in rels):
            return None
        f = forced(m)
        if f is not None:
            a, v = f
            if v not in balls[comp[a]]:
                return None
            return search({**m, a: v})
        free = [a for a in arcs if a not in m]
        if not free:
            return m
        a = free[0]
        for v in balls[comp[a]]:
            r = search({**m, a: v})
            if r is not None:
                return r
        return None

    start = {d.base[c]: one.mul_letter(c, 1) for c in range(1, n + 1) if c != i}
    return search(start)
