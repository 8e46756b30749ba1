"""Deterministic invariant reports and pairwise comparison."""

from __future__ import annotations

import hashlib
from typing import Dict, Iterable, List, Optional, Sequence

from . import __version__
from . import invariants as inv
from .invariants import LinkMapPresentation
from .ring import Monomial, Poly, format_sequence, sequences
from .words import magnus_expand, positive_normalize

__all__ = ["InternalInconsistency", "build_report", "render_text", "compare", "render_comparison"]


class InternalInconsistency(RuntimeError):
    pass


def _raw_e(p: LinkMapPresentation, i: int) -> Poly:
    """E_i summed singularity by singularity, without the group-ring bucketing."""
    total = Poly.zero(p.n, i)
    for sign, w in p.words(i):
        total = total + (magnus_expand(positive_normalize(w)[0]) - 1).scale(sign)
    return total


def component_report(p: LinkMapPresentation, i: int, seqs: Optional[Sequence[Monomial]] = None) -> dict:
    s = inv.s_invariant(p, i)
    e = inv.e_invariant(p, i)
    if e != _raw_e(p, i):
        raise InternalInconsistency(f"component {i}: aggregated E_{i} differs from the raw singularity sum")
    all_seqs = seqs is None
    if all_seqs:
        seqs = sequences(p.n, i)
    kappa = inv.kappa_table(p, i, seqs)
    kseq = inv.k_sequences(p, i) if all_seqs else [inv.k_sequence(p, i, q) for q in seqs]
    return {
        "component": i,
        "S": [
            {
                "rho": t.rho,
                "word": t.word.to_text(),
                "expansion": t.expansion.to_text(),
                "singularities": t.count,
                "inverted": t.inversions,
            }
            for t in s
        ],
        "E": e.to_text(),
        "E_terms": e.to_structured(),
        "kappa": [
            {"sequence": list(q), "kappa": k, "D": d, "kappa_tilde": r.to_structured()}
            for q, k, d, r in kappa
        ],
        "K": [entry.to_structured() | {"text": entry.to_text()} for entry in inv.k_multiset(p, i)],
        "K_sequences": [ks.to_structured() for ks in kseq],
        "sigma": inv.sigma_covering(p, i).to_text(),
    }


def build_report(
    p: LinkMapPresentation,
    components: Optional[Iterable[int]] = None,
    seq: Optional[Monomial] = None,
    source: Optional[str] = None,
    source_bytes: Optional[bytes] = None,
) -> dict:
    comps = sorted(set(components)) if components else list(range(1, p.n + 1))
    report: Dict[str, object] = {
        "engine": {"name": "kirkinv", "version": __version__},
        "n": p.n,
        "components": {},
    }
    if source is not None:
        prov = {"path": source}
        if source_bytes is not None:
            prov["sha256"] = hashlib.sha256(source_bytes).hexdigest()
        report["input"] = prov
    for i in comps:
        if seq is not None and i in seq:
            continue
        report["components"][str(i)] = component_report(p, i, None if seq is None else [seq])
    if p.n == 2:
        s1, s2 = inv.kirk_classical(p)
        report["kirk_classical"] = {"sigma_1": s1.to_text(), "sigma_2": s2.to_text()}
    return report


def _fmt_k(rows: List[dict]) -> str:
    def one(r):
        v = str(r["value"]) if r["modulus"] == 0 else f"{r['value']} mod {r['modulus']}"
        return f"({r['rho']},{v})"
    return "{" + "; ".join(one(r) for r in rows) + "}"


def render_text(report: dict, verbose: bool = False) -> str:
    lines = [f"kirkinv {report['engine']['version']}"]
    if "input" in report:
        src = report["input"]
        lines[0] += f"  input: {src['path']}" + (f" (sha256 {src['sha256'][:16]})" if "sha256" in src else "")
    lines.append(f"n = {report['n']}")
    if "kirk_classical" in report:
        k = report["kirk_classical"]
        lines.append(f"classical Kirk (sigma_1, sigma_2) = ({k['sigma_1']}, {k['sigma_2']})")
    for key in sorted(report["components"], key=int):
        c = report["components"][key]
        i = c["component"]
        lines.append("")
        lines.append(f"component {i}")
        if c["S"]:
            lines.append(f"  S_{i}:")
            for t in c["S"]:
                extra = ""
                if verbose:
                    extra = f"   [{t['singularities']} singularities, {t['inverted']} inverted]"
                lines.append(f"    rho={t['rho']:+d}  g = {t['word'] or '1'}   E(g) = {t['expansion']}{extra}")
        else:
            lines.append(f"  S_{i} = 0")
        lines.append(f"  E_{i} = {c['E']}")
        rows = c["kappa"]
        shown = [r for r in rows if verbose or r["kappa"] or r["D"] or len(rows) == 1]
        lines.append(f"  kappa table (I, kappa, D, kappa~):")
        for r in shown:
            kt = r["kappa_tilde"]
            kts = str(kt["value"]) if kt["modulus"] == 0 else f"{kt['value']} mod {kt['modulus']}"
            lines.append(f"    {format_sequence(r['sequence']):>8}  {r['kappa']:>4}  {r['D']:>4}  {kts}")
        if len(shown) < len(rows):
            lines.append(f"    (other {len(rows) - len(shown)} sequences: kappa = D = 0)")
        lines.append(f"  K_{i} = {{" + "; ".join(e["text"] for e in c["K"]) + "}")
        ks_rows = c["K_sequences"]
        shown_k = [r for r in ks_rows if verbose or r["filtered"] or len(ks_rows) == 1]
        for r in shown_k:
            seq = format_sequence(r["sequence"])
            lines.append(f"  K({seq};{i}) full = {_fmt_k(r['full'])}  filtered = {_fmt_k(r['filtered'])}")
        if len(shown_k) < len(ks_rows):
            lines.append(f"  (K(I;{i}) filtered is empty for the other {len(ks_rows) - len(shown_k)} sequences)")
        lines.append(f"  sigma_{i} = {c['sigma']}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# comparison


def _invariant_values(p: LinkMapPresentation) -> Dict[str, str]:
    """Every basing-independent invariant, keyed by a readable name."""
    out: Dict[str, str] = {}
    for i in range(1, p.n + 1):
        for q, _, _, r in inv.kappa_table(p, i):
            out[f"kappa~({format_sequence(q)};{i})"] = str(r)
        out[f"K_{i}"] = "{" + "; ".join(
            f"{e.to_text()}" + (f" moduli {[(format_sequence(m), d) for m, d in e.moduli]}" if e.moduli else "")
            for e in inv.k_multiset(p, i)
        ) + "}"
        for ks in inv.k_sequences(p, i):
            seq = format_sequence(ks.sequence)
            out[f"K({seq};{i}) full"] = inv.KSequence.format(ks.full)
            out[f"K({seq};{i}) filtered"] = inv.KSequence.format(ks.filtered)
        out[f"sigma_{i}"] = inv.sigma_covering(p, i).to_text()
    return out


def compare(a: LinkMapPresentation, b: LinkMapPresentation) -> dict:
    if a.n != b.n:
        raise ValueError(f"arity mismatch: {a.n} vs {b.n}")
    va, vb = _invariant_values(a), _invariant_values(b)
    diffs = [{"invariant": k, "a": va[k], "b": vb[k]} for k in va if va[k] != vb[k]]
    return {
        "n": a.n,
        "verdict": "DISTINGUISHED" if diffs else "INDISTINGUISHABLE-BY-THESE-INVARIANTS",
        "differences": diffs,
    }


def render_comparison(result: dict) -> str:
    lines = [result["verdict"]]
    for d in result["differences"]:
        lines.append(f"  {d['invariant']}: {d['a']} vs {d['b']}")
    return "\n".join(lines) + "\n"
