"""Assemble the complexes of a degeneration and check the Betti-number bound.

Basis conventions
-----------------
``C_q`` in degree ``p`` is the concatenation, over strata of dimension ``p``
in SDD order, of ``rank H_c^{p+q}`` of the torus bundle over each stratum.
The real complex in degree ``p`` is the concatenation, over strata of
dimension ``p``, of ``real_components * 2^(m-1)`` cover components; inside a
block the component ``(c, g)`` sits at index ``c * 2^(m-1) + g`` with ``g``
the deck-group element written as a bitmask.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .complexes import (CochainComplex, Coefficient, ComplexError,
                        FilteredComplex, cohomology, reduce_mod2,
                        spectral_sequence, universal_coefficients_check,
                        validate)
from .degeneration import (DegenerationError, HypothesisViolated,
                           StratifiedDegeneration, Stratum,
                           log_stratum_hc_mod2, log_stratum_hc_ranks,
                           real_cover_h0, validate_hypotheses)
from .linalg import span_rank_mod2

__all__ = [
    "ShapeMismatch",
    "MissingBlock",
    "FiltrationUnavailable",
    "q_range",
    "build_cq",
    "build_cq_f2",
    "build_real_complex",
    "RealComplex",
    "augmentation_filtration",
    "filtration_level_map",
    "VerdictReport",
    "verdict",
    "check_sdd",
]


class ShapeMismatch(DegenerationError):
    def __init__(self, where, p, expected, found):
        self.where, self.degree = where, p
        super().__init__(f"{where}: block at degree {p} has shape {found}, "
                         f"term ranks require {expected}")


class MissingBlock(DegenerationError):
    def __init__(self, where, p):
        self.where, self.degree = where, p
        super().__init__(f"{where}: no differential block at degree {p} between "
                         f"nonzero terms (set zero_blocks_ok to allow zero maps)")


class FiltrationUnavailable(DegenerationError):
    pass


def _term_span(s: Stratum, ranks) -> tuple:
    """(lowest, highest) q with a nonzero term for stratum ``s``."""
    nz = [n for n, r in enumerate(ranks) if r]
    if not nz:
        return None
    return nz[0] - s.dim, nz[-1] - s.dim


def q_range(sdd: StratifiedDegeneration) -> range:
    """Values of q carrying a nonzero complex; always covers ``0..fiber_dim``."""
    lo, hi = 0, sdd.fiber_dim
    for s in sdd.strata:
        span = _term_span(s, log_stratum_hc_mod2(s))
        if span:
            lo, hi = min(lo, span[0]), max(hi, span[1])
    return range(lo, hi + 1)


def _term(sdd, q, p, mod2=False):
    """Blocks (stratum, rank) making up degree ``p`` of ``C_q``."""
    fn = log_stratum_hc_mod2 if mod2 else log_stratum_hc_ranks
    out = []
    for s in sdd.strata_of_dim(p):
        ranks = fn(s)
        n = p + q
        out.append((s, ranks[n] if 0 <= n < len(ranks) else 0))
    return out


def _assemble(sdd, blocks, ranks, where, coefficient, labels, fallback=None):
    diffs = {}
    degrees = sdd.dim_range
    for p in degrees:
        want = (ranks.get(p + 1, 0), ranks.get(p, 0))
        m = blocks.get(p)
        if m is None and fallback is not None:
            m = fallback(p)
        if m is None:
            if want[0] and want[1] and not sdd.zero_blocks_ok:
                raise MissingBlock(where, p)
            continue
        if m.shape != want:
            raise ShapeMismatch(where, p, want, m.shape)
        diffs[p] = m
    lo, hi = (degrees.start, degrees.stop - 1) if len(degrees) else (0, -1)
    c = CochainComplex(coefficient, (lo, hi), ranks, diffs, labels)
    validate(c)
    return c


def build_cq(sdd: StratifiedDegeneration, q: int) -> CochainComplex:
    """The integral complex ``C_q``."""
    ranks, labels = {}, {}
    for p in sdd.dim_range:
        term = _term(sdd, q, p)
        ranks[p] = sum(r for _, r in term)
        labels[p] = [f"{s.id}:{q}:{k}" for s, r in term for k in range(r)]
    blocks = {p: m for (qq, p), m in sdd.cq_differentials.items() if qq == q}
    return _assemble(sdd, blocks, ranks, f"C_{q}", Coefficient.Z, labels)


def build_cq_f2(sdd: StratifiedDegeneration, q: int) -> CochainComplex:
    """``C_q`` with F2 coefficients, assembled from its own blocks.

    Uses ``cq_differentials_f2`` when the SDD supplies them; otherwise the
    integral blocks reduced mod 2, which is only legitimate when the strata
    are torsion free (term ranks then agree).
    """
    ranks, labels = {}, {}
    z_ranks = {}
    for p in sdd.dim_range:
        term = _term(sdd, q, p, mod2=True)
        ranks[p] = sum(r for _, r in term)
        z_ranks[p] = sum(r for _, r in _term(sdd, q, p))
        labels[p] = [f"{s.id}:{q}:{k}" for s, r in term for k in range(r)]
    blocks = {p: m for (qq, p), m in sdd.cq_differentials_f2.items() if qq == q}

    def fallback(p):
        m = sdd.cq_differentials.get((q, p))
        if m is None:
            return None
        if ranks != z_ranks:
            raise DegenerationError(
                f"C_{q}: torsion in strata changes F2 term ranks; supply "
                f"cq_differentials_f2")
        return m.mod(2)

    return _assemble(sdd, blocks, ranks, f"C_{q} (F2)", Coefficient.F2, labels, fallback)


@dataclass(frozen=True)
class RealComplex:
    complex: CochainComplex
    blocks: dict  # degree -> list of (stratum, offset, size)

    def euler_characteristic(self) -> int:
        return self.complex.euler_characteristic()


def build_real_complex(sdd: StratifiedDegeneration, force: bool = False) -> RealComplex:
    """The single-row real complex whose cohomology is that of a positive real fiber.

    Refuses to build unless hypotheses (a) and (b) hold, or ``force`` is set.
    """
    report = validate_hypotheses(sdd)
    if not force and not report.bound_applicable:
        bad = [r for v in report.strata for r in v.reasons if r[:3] in ("(a)", "(b)")]
        raise HypothesisViolated("; ".join(bad) or "hypotheses (a), (b) fail")
    ranks, labels, blocks = {}, {}, {}
    for p in sdd.dim_range:
        off = 0
        blocks[p] = []
        labels[p] = []
        for s in sdd.strata_of_dim(p):
            if force and not s.real_acyclic:
                size = 2 ** (s.multiplicity - 1) * s.real_components
            else:
                size = real_cover_h0(s)
            blocks[p].append((s, off, size))
            sheets = 2 ** (s.multiplicity - 1)
            labels[p] += [f"{s.id}:{c}:{g}" for c in range(s.real_components)
                          for g in range(sheets)]
            off += size
        ranks[p] = off
    c = _assemble(sdd, dict(sdd.real_differentials), ranks, "real complex",
                  Coefficient.F2, labels)
    return RealComplex(c, blocks)


# -- filtration ---------------------------------------------------------------

def _augmentation_powers(k: int) -> list:
    """Spanning sets of ``I^i`` in ``F2[(Z/2)^k]``, ``i = 0 .. k``.

    ``prod_{j in S} (1 + x_j)`` is the indicator of the subsets of ``S``.
    """
    n = 2 ** k
    vec = {}
    for S in range(n):
        v = np.zeros(n, dtype=np.uint8)
        for T in range(n):
            if T & S == T:
                v[T] = 1
        vec[S] = v
    return [[vec[S] for S in range(n) if bin(S).count("1") >= i] for i in range(k + 1)]


def _internal_filtration(s: Stratum) -> list:
    """Spanning sets of ``F_j`` (``j >= 1``) on ``F2^{real components}``."""
    r = s.real_components
    if s.real_filtration is not None:
        levels = [[np.array(v, dtype=np.uint8) for v in lvl] for lvl in s.real_filtration]
    elif s.dim == 0:
        levels = []
    elif s.dim == 1:
        # augmentation kernel of the component set
        aug = []
        for k in range(1, r):
            v = np.zeros(r, dtype=np.uint8)
            v[0] = v[k] = 1
            aug.append(v)
        levels = [aug]
    else:
        raise FiltrationUnavailable(
            f"stratum {s.id}: dimension {s.dim} needs an explicit real_filtration")
    return levels


def _stratum_filtration(s: Stratum) -> list:
    """Local levels ``L = 0, 1, ...`` as spanning sets over the cover block."""
    r = s.real_components
    internal = _internal_filtration(s)
    full = [[np.eye(r, dtype=np.uint8)[c] for c in range(r)]] + internal
    dims = [span_rank_mod2(v) for v in full] + [0]
    graded = [dims[j] - dims[j + 1] for j in range(len(full))]
    betti = list(s.betti_mod2)
    padded = graded + [0] * (len(betti) - len(graded))
    if padded[:len(betti)] != betti or any(padded[len(betti):]):
        raise FiltrationUnavailable(
            f"stratum {s.id}: real filtration graded dims {graded} do not match "
            f"mod-2 Betti numbers {betti}")
    deck = _augmentation_powers(s.multiplicity - 1)
    levels = []
    for L in range(len(full) + len(deck) - 1):
        vecs = []
        for j, fj in enumerate(full):
            i = L - j
            if 0 <= i < len(deck):
                vecs += [np.kron(u, w) for u in fj for w in deck[i]]
        levels.append(vecs)
    return levels


def filtration_level_map(sdd: StratifiedDegeneration) -> dict:
    """Global filtration level for each q: level ``l`` has graded piece ``C_q``."""
    qs = q_range(sdd)
    return {q: qs.stop - 1 - q for q in qs}


def augmentation_filtration(sdd: StratifiedDegeneration, rc: RealComplex) -> FilteredComplex:
    """Filtration of the real complex by powers of augmentation ideals.

    On a stratum block the filtration is the tensor product of the
    filtration of the real components (augmentation kernel for curves) and
    of the augmentation-ideal filtration of the deck group algebra.  Local
    level ``L`` corresponds to ``q = dim + m - 1 - L`` and is placed at the
    global level of that ``q``.
    """
    qs = q_range(sdd)
    q_hi = qs.stop - 1
    depth = len(qs) - 1
    per_stratum = {}
    for p, blocks in rc.blocks.items():
        for s, off, size in blocks:
            per_stratum[s.id] = _stratum_filtration(s)

    levels = []
    for ell in range(1, depth + 1):
        level = {}
        for p, blocks in rc.blocks.items():
            n = rc.complex.rank(p)
            cols = []
            for s, off, size in blocks:
                local = per_stratum[s.id]
                L = ell - (q_hi - s.dim - s.multiplicity + 1)
                if L <= 0:
                    vecs = [np.eye(size, dtype=np.uint8)[k] for k in range(size)]
                elif L < len(local):
                    vecs = local[L]
                else:
                    vecs = []
                for v in vecs:
                    col = np.zeros(n, dtype=np.uint8)
                    col[off:off + size] = v
                    cols.append(col)
            level[p] = (np.array(cols, dtype=np.uint8).T if cols
                        else np.zeros((n, 0), dtype=np.uint8))
        levels.append(level)
    return FilteredComplex(rc.complex, levels)


# -- verdict ------------------------------------------------------------------

@dataclass
class VerdictReport:
    name: str
    hypotheses: dict
    theorem_applicable: bool
    hodge_valid: bool
    q_values: list
    degrees: list
    betti_real: Optional[list] = None
    cq: dict = field(default_factory=dict)
    inequality: list = field(default_factory=list)
    torsion_free: dict = field(default_factory=dict)
    mod2_compat: bool = True
    mod2_compat_source: str = "derived"
    universal_coefficients: bool = True
    term_rank_identity: Optional[bool] = None
    maximality: dict = field(default_factory=dict)
    filtration: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    violations: list = field(default_factory=list)

    def hodge(self) -> list:
        """``h[p][q] = rank H^p(C_q (x) Q)``."""
        return [[self.cq[(p, q)]["rank"] for q in self.q_values] for p in self.degrees]

    @property
    def all_torsion_free(self) -> bool:
        return all(self.torsion_free.values())

    def to_json(self, coeff: str = "both") -> dict:
        cq = {}
        for (p, q), v in sorted(self.cq.items()):
            entry = {}
            if coeff in ("z", "both"):
                entry["rank"] = v["rank"]
                entry["torsion"] = list(v["torsion"])
            if coeff in ("f2", "both"):
                entry["mod2"] = v["mod2"]
            cq[f"{p},{q}"] = entry
        out = {
            "name": self.name,
            "betti_real": self.betti_real,
            "cq": cq,
            "inequality": self.inequality,
            "hypotheses": self.hypotheses,
            "flags": {
                "theorem_applicable": self.theorem_applicable,
                "torsion_free": self.all_torsion_free,
                "mod2_compat": self.mod2_compat,
                "mod2_compat_source": self.mod2_compat_source,
                "universal_coefficients": self.universal_coefficients,
                "term_rank_identity": self.term_rank_identity,
                "maximal": self.maximality.get("maximal"),
            },
            "maximality": self.maximality,
            "filtration": self.filtration,
            "warnings": self.warnings,
            "violations": self.violations,
        }
        if coeff in ("z", "both"):
            out["h"] = self.hodge()
            out["h_label"] = ("h^{p,q}, valid under hypotheses (a)(b)(c)" if self.hodge_valid
                              else "rank H^p(C_q (x) Q); Hodge interpretation needs (c)")
        return out

    def to_markdown(self, coeff: str = "both") -> str:
        lines = [f"# Verdict: {self.name or 'degeneration'}", ""]
        h = self.hypotheses
        lines.append(f"Hypotheses: (a) {h['a']}, (b) {h['b']}, (c) {h['c']}")
        if not self.theorem_applicable:
            lines += ["", "> **Warning**: hypotheses (a)/(b) fail; the bound is "
                          "*theorem not applicable*."]
        lines.append("")
        if self.betti_real is not None:
            lines.append("Real Betti numbers: " + ", ".join(map(str, self.betti_real)))
            lines.append("")
        lines.append("| p | q | rank | torsion | mod 2 |")
        lines.append("|---|---|------|---------|-------|")
        for (p, q), v in sorted(self.cq.items()):
            rank = v["rank"] if coeff != "f2" else "-"
            tors = (",".join(map(str, v["torsion"])) or "-") if coeff != "f2" else "-"
            mod2 = v["mod2"] if coeff != "z" else "-"
            lines.append(f"| {p} | {q} | {rank} | {tors} | {mod2} |")
        if coeff != "f2":
            label = "h^{p,q}" if self.hodge_valid else "rank H^p(C_q (x) Q) (needs (c) for h^{p,q})"
            lines += ["", f"Hodge table ({label}), rows p, columns q:"]
            for p, row in zip(self.degrees, self.hodge()):
                lines.append(f"    p={p}: " + " ".join(map(str, row)))
        if self.inequality:
            lines += ["", "| p | b_p | sum_q dim H^p(C_q) | slack |", "|---|-----|-----|-----|"]
            for row in self.inequality:
                lines.append(f"| {row['p']} | {row['lhs']} | {row['rhs']} | {row['slack']} |")
        lines += ["", f"- torsion free: {self.all_torsion_free}",
                  f"- mod-2 compatibility: {self.mod2_compat} ({self.mod2_compat_source})",
                  f"- maximal: {self.maximality.get('maximal')}"]
        if self.filtration:
            lines.append(f"- filtration: {self.filtration}")
        for w in self.warnings:
            lines.append(f"- warning: {w}")
        for v in self.violations:
            lines.append(f"- **VIOLATION**: {v}")
        return "\n".join(lines) + "\n"


def verdict(sdd: StratifiedDegeneration) -> VerdictReport:
    """Compute every quantity in the bound and cross-check them."""
    hyp = validate_hypotheses(sdd)
    qs = list(q_range(sdd))
    degrees = list(sdd.dim_range)
    rep = VerdictReport(
        name=sdd.name,
        hypotheses=hyp.to_json(),
        theorem_applicable=hyp.bound_applicable,
        hodge_valid=hyp.bound_applicable and hyp.c_holds,
        q_values=qs,
        degrees=degrees,
        warnings=sdd.structure_warnings(),
    )
    f2_direct = {}
    for q in qs:
        cz = build_cq(sdd, q)
        hz = cohomology(cz)
        try:
            universal_coefficients_check(cz)
        except ComplexError as exc:
            rep.universal_coefficients = False
            rep.violations.append(f"C_{q}: {exc}")
        h_red = cohomology(reduce_mod2(cz))
        cf = build_cq_f2(sdd, q)
        f2_direct[q] = cf
        hf = cohomology(cf)
        for p in degrees:
            rep.cq[(p, q)] = {"rank": hz[p].rank, "torsion": hz[p].torsion,
                              "mod2": hf[p].rank}
            rep.torsion_free[(p, q)] = hz[p].torsion_free
            if h_red[p].rank != hf[p].rank:
                rep.mod2_compat = False
    if sdd.cq_differentials_f2:
        rep.mod2_compat_source = "independent"
    if not rep.mod2_compat and hyp.c_holds:
        rep.violations.append("mod-2 reduction of C_q disagrees with C_q over F2")

    try:
        rc = build_real_complex(sdd, force=True)
    except HypothesisViolated as exc:
        rep.warnings.append(str(exc))
        return rep
    hr = cohomology(rc.complex)
    rep.betti_real = [hr[p].rank for p in degrees]
    total_real = sum(rep.betti_real)
    total_cx = 0
    for p in degrees:
        rhs = sum(rep.cq[(p, q)]["mod2"] for q in qs)
        total_cx += rhs
        lhs = hr[p].rank
        rep.inequality.append({"p": p, "lhs": lhs, "rhs": rhs, "slack": rhs - lhs})
        if lhs > rhs and rep.theorem_applicable:
            rep.violations.append(f"b_{p} = {lhs} exceeds bound {rhs}")
    rep.maximality = {
        "total_real": total_real,
        "total_complex": total_cx,
        "maximal": total_real == total_cx,
        "equality_every_degree": all(r["slack"] == 0 for r in rep.inequality),
    }
    if rep.maximality["maximal"] != rep.maximality["equality_every_degree"] \
            and rep.theorem_applicable:
        rep.violations.append("total equality without degreewise equality")

    rep.term_rank_identity = all(
        rc.complex.rank(p) == sum(f2_direct[q].rank(p) for q in qs) for p in degrees)
    if not rep.term_rank_identity and rep.theorem_applicable:
        rep.violations.append("real term ranks differ from summed C_q term ranks")

    if rep.theorem_applicable:
        try:
            rep.filtration = filtration_checks(sdd, rc, f2_direct)
        except (ComplexError, FiltrationUnavailable) as exc:
            rep.filtration = {"valid": False, "error": str(exc)}
            if not isinstance(exc, FiltrationUnavailable):
                rep.violations.append(f"filtration: {exc}")
        else:
            if not (rep.filtration["convergence"] and rep.filtration["e1_matches_cq"]):
                rep.violations.append("filtration spectral sequence check failed")
    else:
        rep.warnings.append("theorem not applicable: hypotheses (a)/(b) fail")
    return rep


def filtration_checks(sdd, rc, f2_complexes=None) -> dict:
    """Validity, convergence and E_1 comparison for the augmentation filtration."""
    f = augmentation_filtration(sdd, rc)
    pages = spectral_sequence(f)
    hr = cohomology(rc.complex)
    e_inf = pages[-1]
    convergence = all(e_inf.total(n) == hr[n].rank for n in rc.complex.degree_range)
    levels = filtration_level_map(sdd)
    if f2_complexes is None:
        f2_complexes = {q: build_cq_f2(sdd, q) for q in levels}
    graded = f.graded_dims()
    e1_match = all(graded[(levels[q], p)] == f2_complexes[q].rank(p)
                   for q in levels for p in rc.complex.degree_range)
    return {
        "valid": True,
        "depth": f.depth,
        "pages": len(pages),
        "convergence": convergence,
        "e1_matches_cq": e1_match,
        "e_inf": {f"{a},{b}": v for (a, b), v in sorted(e_inf.nonzero().items())},
    }


def check_sdd(sdd: StratifiedDegeneration, force: bool = False) -> list:
    """Build every complex of ``sdd``; return a list of diagnostics (empty if ok)."""
    problems = []
    for q in q_range(sdd):
        for builder in (build_cq, build_cq_f2):
            try:
                builder(sdd, q)
            except (DegenerationError, ComplexError) as exc:
                problems.append({"kind": type(exc).__name__, "message": str(exc)})
    try:
        build_real_complex(sdd, force=force)
    except (DegenerationError, ComplexError) as exc:
        problems.append({"kind": type(exc).__name__, "message": str(exc)})
    return problems
