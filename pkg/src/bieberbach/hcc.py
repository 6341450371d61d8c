"""Halperin-Carlsson bounds, splitting subgroups and the combined report.

For a homologically injective ``T^k``-action the binomial bounds
``C(k, j) <= b_j`` hold in every degree, and summing them gives
``2^k <= Σ b_j``.  :func:`full_report` runs the whole pipeline on a group
and checks these bounds against the computed Betti numbers, together with
the maximality statement ``rank C(π) = rank H_1``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Optional, Sequence

from . import linalg as la
from .calabi import TorusActionCertificate, certificate_to_dict, torus_action
from .crystal import AffineElement, CrystalGroup, ValidationReport, format_word, validate
from .errors import CertificateFailure, InternalInconsistency, NotInjective
from .topology import HomologyH1, _presentation, betti, center_rank, h1


def binom_bound_check(k: int, betti_numbers: Sequence[int]) -> list[tuple[int, int, int, bool]]:
    """``(j, C(k, j), b_j, C(k, j) <= b_j)`` for every degree j."""
    return [(j, comb(k, j), b, comb(k, j) <= b) for j, b in enumerate(betti_numbers)]


def sum_bound_check(k: int, betti_numbers: Sequence[int]) -> tuple[int, int, bool]:
    total = sum(betti_numbers)
    return 2 ** k, total, 2 ** k <= total


# ----------------------------------------------------------------------------
# splitting subgroup


@dataclass(frozen=True)
class SplittingSubgroup:
    """Finite-index normal subgroup π' of π containing the torus lattice as a
    direct factor.

    ``generators`` are Schreier generators, as words in the presentation
    generators of π.  ``abelian_free_rank``/``abelian_torsion`` describe
    ``π'^ab`` as computed from the rewritten relators.
    """

    index: int
    generators: tuple
    transversal: tuple
    verified_direct_product: bool
    abelian_free_rank: int
    abelian_torsion: tuple


def splitting_subgroup(group: CrystalGroup, homology: Optional[HomologyH1],
                       torus_lattice: la.LatticeBasis, keep_torsion: bool = False) -> SplittingSubgroup:
    """Construct π' = q^-1(I ⊕ C) where I is the image of ``torus_lattice``
    in the free part of H_1 and C a complement of its saturation.

    With ``keep_torsion`` the torsion of H_1 is kept inside π' (a smaller
    index); by default π' maps trivially to the torsion.  The direct
    product claim is checked on the Reidemeister-Schreier presentation of
    π': the torus lattice must be central and map onto a direct summand of
    ``π'^ab``.
    """
    homology = homology or h1(group)
    pres = _presentation(group)
    n = group.dim
    m = len(pres.generators)
    r = homology.free_rank
    nu = homology.lattice_projection()
    image = [la.matvec(nu, v) for v in torus_lattice.vectors] if r else []
    s = torus_lattice.rank
    if s == 0 or la.rank(tuple(image)) != s:
        raise NotInjective(f"{group}: torus lattice {list(torus_lattice.vectors)} does not inject into H_1")
    sat = la.saturate(la.LatticeBasis(r, tuple(tuple(v) for v in image)))
    comp = la.complement_in_lattice(sat)

    # S lives in Z^(r+t) modulo the torsion relations d_i e_(r+i)
    divisors = homology.torsion_divisors
    t = len(divisors)

    def full(exponents) -> tuple:
        return tuple(homology.free_part(exponents)) + tuple(homology.torsion_part(exponents))

    rows = [full(tuple(v) + (0,) * (m - n)) for v in torus_lattice.vectors]
    rows += [tuple(c) + (0,) * t for c in comp.vectors]
    for i, d in enumerate(divisors):
        unit = tuple(int(j == r + i) for j in range(r + t))
        rows.append(unit if keep_torsion else la.vscale(d, unit))
    dec = la.snf(tuple(rows), r + t)
    diag = dec.diagonal
    if len(diag) < r + t or 0 in diag:
        raise InternalInconsistency("S does not have finite index in H_1")
    vt = la.transpose(dec.V)
    moduli_all = tuple(d for d in diag if d > 1)

    def key(exponents) -> tuple:
        coords = la.matvec(vt, full(exponents))
        return tuple(c % d for c, d in zip(coords, diag) if d > 1)

    def add(a, b, sign=1):
        return tuple((x + sign * y) % d for x, y, d in zip(a, b, moduli_all))

    gen_keys = [key(tuple(int(i == j) for j in range(m))) for i in range(m)]
    zero = tuple(0 for _ in moduli_all)

    # Schreier transversal, breadth first over letters g, g^-1
    transversal = {zero: ()}
    queue = deque([zero])
    while queue:
        c = queue.popleft()
        for g in range(m):
            for e in (1, -1):
                d = add(c, gen_keys[g], e)
                if d not in transversal:
                    transversal[d] = transversal[c] + ((g, e),)
                    queue.append(d)
    cosets = list(transversal)
    index = len(cosets)

    def is_tree_edge(c, g) -> bool:
        d = add(c, gen_keys[g])
        tc, td = transversal[c], transversal[d]
        return td == tc + ((g, 1),) or tc == td + ((g, -1),)

    schreier: dict = {}
    words = []
    for c in cosets:
        for g in range(m):
            if not is_tree_edge(c, g):
                schreier[(c, g)] = len(words)
                d = add(c, gen_keys[g])
                inv_td = tuple((h, -e) for h, e in reversed(transversal[d]))
                words.append(transversal[c] + ((g, 1),) + inv_td)

    def rewrite(word, start) -> tuple[dict, tuple]:
        row: dict = {}
        cur = start
        for g, e in word:
            for _ in range(abs(e)):
                if e > 0:
                    sid = schreier.get((cur, g))
                    sign = 1
                    nxt = add(cur, gen_keys[g])
                else:
                    nxt = add(cur, gen_keys[g], -1)
                    sid = schreier.get((nxt, g))
                    sign = -1
                if sid is not None:
                    row[sid] = row.get(sid, 0) + sign
                cur = nxt
        return {k: v for k, v in row.items() if v}, cur

    rows = []
    seen = set()
    for c in cosets:
        for rel in pres.relators:
            row, end = rewrite(rel, c)
            if end != c:
                raise InternalInconsistency("relator does not close up in the coset graph")
            frozen = tuple(sorted(row.items()))
            if frozen and frozen not in seen:
                seen.add(frozen)
                rows.append(row)

    ncols = len(words)
    sdiag, vcols = la.smith_columns(rows, ncols)
    rk = sum(1 for d in sdiag if d)
    free_proj = [tuple(vcols[t].get(j, 0) for j in range(ncols)) for t in range(rk, ncols)]
    torsion = tuple(d for d in sdiag[:rk] if d > 1)

    columns = []
    for v in torus_lattice.vectors:
        row, end = rewrite(pres.lattice_word(v), zero)
        if end != zero:
            raise InternalInconsistency(f"torus lattice vector {v} is not in π'")
        exps = [row.get(j, 0) for j in range(ncols)]
        columns.append(la.matvec(free_proj, exps) if free_proj else ())
    summand = False
    if free_proj:
        dec_t = la.snf(la.transpose(tuple(columns)))
        summand = dec_t.rank == s and all(d == 1 for d in dec_t.invariant_factors)
    central = all(la.matvec(a, v) == tuple(v) for a in group.holonomy.elements for v in torus_lattice.vectors)
    return SplittingSubgroup(index, tuple(words), tuple(transversal[c] for c in cosets),
                             summand and central, ncols - rk, torsion)


# ----------------------------------------------------------------------------
# report


NOT_APPLICABLE = "not-applicable"


@dataclass(frozen=True)
class HccVerdict:
    k: int
    betti: tuple
    per_degree: tuple
    sum_bound: tuple
    homologically_injective: str  # "pass" | "fail" | "not-applicable"
    maximal: bool

    @property
    def ok(self) -> bool:
        return (all(p[3] for p in self.per_degree) and self.sum_bound[2]
                and self.homologically_injective != "fail" and self.maximal)


@dataclass(frozen=True)
class InvariantReport:
    h1: HomologyH1
    betti: tuple
    center_rank: int


@dataclass(frozen=True)
class FullReport:
    group: CrystalGroup
    validation: ValidationReport
    invariants: Optional[InvariantReport] = None
    certificate: Optional[TorusActionCertificate] = None
    hcc: Optional[HccVerdict] = None
    splitting: Optional[SplittingSubgroup] = None
    failures: tuple = field(default=())

    @property
    def passed(self) -> bool:
        return self.validation.ok and not self.failures and self.hcc is not None and self.hcc.ok


def hcc_verdict(k: int, betti_numbers: Sequence[int], injective: Optional[bool], maximal: bool) -> HccVerdict:
    if k == 0:
        hi = NOT_APPLICABLE
    else:
        hi = "pass" if injective else "fail"
    return HccVerdict(k, tuple(betti_numbers), tuple(binom_bound_check(k, betti_numbers)),
                      sum_bound_check(k, betti_numbers), hi, maximal)


def full_report(group: CrystalGroup) -> FullReport:
    """Validate, compute invariants, build the torus action and check HCC."""
    report = validate(group)
    if not report.ok:
        return FullReport(group, report, failures=tuple(f"validation: {c.name}" for c in report.failures()))
    homology = h1(group)
    bn = betti(group)
    cr = center_rank(group)
    inv = InvariantReport(homology, bn, cr)
    k = homology.free_rank
    failures = []
    cert = split = None
    if k:
        try:
            cert = torus_action(group)
        except CertificateFailure as exc:
            failures.append(f"certificate: {exc}")
    injective = cert is not None and cert.checks["homological_injectivity"]
    verdict = hcc_verdict(k, bn, injective, k == cr)
    if cert is not None:
        try:
            split = splitting_subgroup(group, homology, la.lattice(group.dim, cert.tilde_B.lattice_vectors))
            if not split.verified_direct_product:
                failures.append("splitting_subgroup: direct product not verified")
        except NotInjective as exc:
            failures.append(f"splitting_subgroup: {exc}")
    if bn[1] != k:
        failures.append(f"consistency: b_1 = {bn[1]} but rank H_1 = {k}")
    return FullReport(group, report, inv, cert, verdict, split, tuple(failures))


def json_value(x):
    """Exact JSON form: rationals as "p/q" strings, affine maps as dicts."""
    if isinstance(x, AffineElement):
        return {"linear": json_value(x.linear), "translation": json_value(x.translation)}
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, (int, Fraction)):
        x = la.normalize_number(Fraction(x))
        return x if isinstance(x, int) else str(x)
    if isinstance(x, dict):
        return {str(k): json_value(v) for k, v in x.items()}
    if isinstance(x, (tuple, list)):
        return [json_value(v) for v in x]
    return str(x)


def check_to_dict(c) -> dict:
    out = {"name": c.name, "passed": c.passed}
    if c.detail:
        out["detail"] = c.detail
    if c.witness is not None:
        out["witness"] = json_value(c.witness)
    return out


def report_to_dict(rep: FullReport) -> dict:
    """JSON-ready dict with a fixed field order."""
    g = rep.group
    out: dict = {"group_name": g.name, "dim": g.dim}
    out["validation"] = [check_to_dict(c) for c in rep.validation.checks]
    if rep.invariants is None:
        out.update({"h1": None, "betti": None, "center_rank": None, "k": None,
                    "certificate": None, "hcc": None, "splitting_subgroup": None})
    else:
        inv = rep.invariants
        out["h1"] = {"free_rank": inv.h1.free_rank, "torsion": list(inv.h1.torsion_divisors)}
        out["betti"] = list(inv.betti)
        out["center_rank"] = inv.center_rank
        out["k"] = rep.hcc.k
        out["certificate"] = certificate_to_dict(rep.certificate) if rep.certificate else None
        v = rep.hcc
        out["hcc"] = {
            "per_degree": [{"j": j, "binom": c, "betti": b, "pass": p} for j, c, b, p in v.per_degree],
            "sum_bound": {"bound": v.sum_bound[0], "betti_sum": v.sum_bound[1], "pass": v.sum_bound[2]},
            "homologically_injective": v.homologically_injective,
            "maximal": v.maximal,
        }
        if rep.splitting is None:
            out["splitting_subgroup"] = None
        else:
            pres = _presentation(g)
            out["splitting_subgroup"] = {
                "index": rep.splitting.index,
                "generators": [format_word(pres, w) for w in rep.splitting.generators],
                "verified_direct_product": rep.splitting.verified_direct_product,
            }
    out["failures"] = list(rep.failures)
    out["passed"] = rep.passed
    return out


def report_to_text(rep: FullReport) -> str:
    d = report_to_dict(rep)
    lines = [f"group {d['group_name']} (dim {d['dim']})"]
    for c in d["validation"]:
        mark = {True: "ok", False: "FAIL", None: "skipped"}[c["passed"]]
        extra = f"  {c['detail']}" if c.get("detail") else ""
        lines.append(f"  validate {c['name']}: {mark}{extra}")
    if rep.invariants is not None:
        inv = rep.invariants
        lines.append(f"  H_1 = {inv.h1}")
        lines.append(f"  betti = {' '.join(map(str, inv.betti))}")
        lines.append(f"  center rank = {inv.center_rank}, k = {rep.hcc.k}")
        if rep.certificate is not None:
            c = d["certificate"]
            lines.append(f"  torus action: ell = {c['ell']}, tilde_B = {c['tilde_B']}, image index {c['image_index']}")
            for name, ok in c["checks"].items():
                lines.append(f"    {name}: {'ok' if ok else 'FAIL'}")
        v = d["hcc"]
        for e in v["per_degree"]:
            lines.append(f"  C({rep.hcc.k},{e['j']}) = {e['binom']} <= b_{e['j']} = {e['betti']}: {'ok' if e['pass'] else 'FAIL'}")
        sb = v["sum_bound"]
        lines.append(f"  2^k = {sb['bound']} <= sum b_j = {sb['betti_sum']}: {'ok' if sb['pass'] else 'FAIL'}")
        lines.append(f"  homologically injective: {v['homologically_injective']}")
        lines.append(f"  maximal (k = center rank): {'ok' if v['maximal'] else 'FAIL'}")
        sp = d["splitting_subgroup"]
        if sp is not None:
            lines.append(f"  splitting subgroup: index {sp['index']}, "
                         f"direct product {'verified' if sp['verified_direct_product'] else 'NOT verified'}")
    for f in d["failures"]:
        lines.append(f"  failure: {f}")
    lines.append(f"  result: {'PASS' if d['passed'] else 'FAIL'}")
    return "\n".join(lines)
