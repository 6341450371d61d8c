"""Acceptance criteria 1-9.  Every comparison is exact.

Each test prints one ``[PASS]``/``[FAIL]`` line; run directly with
``python tests/test_acceptance.py`` for just those lines.
"""

import random
import sys
import time
from dataclasses import replace
from math import comb

import pytest

from bieberbach import catalog
from bieberbach import linalg as la
from bieberbach.calabi import centralizer_check, torus_action
from bieberbach.crystal import AffineElement, CrystalGroup, from_bott_matrix, torsion_free_check, validate
from bieberbach.errors import NotInjective
from bieberbach.hcc import full_report, splitting_subgroup
from bieberbach.topology import _presentation, betti, betti_oracle, center_rank, h1, image_rank_in_h1

SEED = 20240607
ORACLE_GROUP_LIMIT = 48


def _emit(number, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
    capture = getattr(_emit, "capsys", None)
    if capture is not None:
        with capture.disabled():
            print("\n" + line)
    else:
        print(line)
    return ok


@pytest.fixture(autouse=True)
def _printer(capsys):
    _emit.capsys = capsys
    yield
    _emit.capsys = None


def _bott_up_to(n):
    for m in range(1, n + 1):
        for a in catalog.all_bott_matrices(m):
            yield from_bott_matrix(a)


def _random_bott(n, count, rng, max_order=None):
    c = n * (n - 1) // 2
    out, seen = [], set()
    while len(out) < count:
        bits = "".join(rng.choice("01") for _ in range(c))
        if bits in seen:
            continue
        seen.add(bits)
        g = catalog.get(f"bott-{n}-{bits}").group
        if max_order is None or len(g.holonomy) <= max_order:
            out.append(g)
    return out


def _catalog_groups():
    return [catalog.get(name).group for name in catalog.list()]


def test_1_torus_equality():
    bad = []
    for n in range(1, 7):
        rep = full_report(catalog.get(f"torus{n}").group)
        inv = rep.invariants
        ok = (rep.passed and inv.h1.free_rank == n and inv.h1.torsion_divisors == ()
              and inv.betti == tuple(comb(n, j) for j in range(n + 1)) and rep.hcc.k == n
              and all(c == b for _, c, b, _ in rep.hcc.per_degree)
              and rep.hcc.sum_bound == (2 ** n, 2 ** n, True))
        if not ok:
            bad.append(n)
    assert _emit(1, not bad, f"tori n=1..6 tight in every bound; failures {bad}")


def test_2_klein_bottle():
    rep = full_report(catalog.get("klein").group)
    inv = rep.invariants
    ok = (inv.h1.free_rank == 1 and inv.h1.torsion_divisors == (2,) and inv.betti == (1, 1, 0)
          and inv.center_rank == 1 == rep.hcc.k and rep.certificate is not None and rep.certificate.ok
          and rep.splitting.index == 4 and rep.splitting.verified_direct_product and rep.passed)
    assert _emit(2, ok, f"H1 = {inv.h1}, betti {inv.betti}, splitting index {rep.splitting.index}")


def test_3_flat_3_manifolds():
    names = ["G1", "G2", "G3", "G4", "G5", "G6", "B1", "B2", "B3", "B4"]
    bad = []
    for name in names:
        g = catalog.get(name).group
        rep = full_report(g)
        b = rep.invariants.betti if rep.invariants else None
        if not (validate(g).ok and rep.passed):
            bad.append(name)
        elif name.startswith("G") and b != b[::-1]:
            bad.append(name + " (duality)")
    g2 = betti(catalog.get("G2").group)
    hw = full_report(catalog.get("hantzsche-wendt").group)
    ok = (not bad and g2 == (1, 1, 1, 1) and hw.invariants.betti == (1, 0, 0, 1)
          and hw.hcc.k == 0 and hw.passed)
    assert _emit(3, ok, f"ten flat 3-manifolds, G2 betti {g2}, HW betti {hw.invariants.betti}; failures {bad}")


def test_4_center_rank_equals_h1_rank():
    rng = random.Random(SEED)
    groups = _catalog_groups() + list(_bott_up_to(4)) + _random_bott(5, 40, rng)
    bad = [str(g) for g in groups if center_rank(g) != h1(g).free_rank]
    assert _emit(4, not bad, f"{len(groups)} groups (catalog, Bott n<=4, 40 random Bott n=5); violations {bad}")


def test_5_certificates_and_bounds():
    bad = []
    count = 0
    for g in _catalog_groups():
        if h1(g).free_rank == 0:
            continue
        count += 1
        rep = full_report(g)
        ok = (rep.certificate is not None and rep.certificate.checks["homological_injectivity"]
              and all(p for *_, p in rep.hcc.per_degree) and rep.hcc.sum_bound[2])
        if not ok:
            bad.append(str(g))
    assert _emit(5, not bad, f"{count} catalog entries with k >= 1; failures {bad}")


def test_6_betti_oracle():
    rng = random.Random(SEED + 6)
    groups = (_catalog_groups() + list(_bott_up_to(4))
              + _random_bott(5, 6, rng, ORACLE_GROUP_LIMIT) + _random_bott(6, 4, rng, ORACLE_GROUP_LIMIT))
    bad, slow, worst = [], [], 0.0
    for g in groups:
        assert g.dim <= 6 and len(g.holonomy) <= ORACLE_GROUP_LIMIT
        t = time.perf_counter()
        if betti(g) != tuple(betti_oracle(g, j) for j in range(g.dim + 1)):
            bad.append(str(g))
        dt = time.perf_counter() - t
        worst = max(worst, dt)
        if dt > 10:
            slow.append(str(g))
    ok = not bad and not slow
    assert _emit(6, ok, f"{len(groups)} groups, slowest {worst:.2f}s; mismatches {bad}, over 10s {slow}")


def test_7_construction_identities():
    bad = []
    groups = [g for g in _catalog_groups() + list(_bott_up_to(4)) if h1(g).free_rank]
    for g in groups:
        cert = torus_action(g)
        n, k = g.dim, cert.k
        pres = _presentation(g)
        relators_ok = all(cert.rho.evaluate(w).is_identity for w in pres.relators)
        imgs = cert.tilde_B.images
        pure = all(t.is_translation and not any(t.translation[:n - k]) for t in imgs)
        full_rank = la.rank(tuple(t.translation[n - k:] for t in imgs)) == k
        central = centralizer_check(cert.rho)[0]
        integral = all(la.is_integral(cert.ell * x for x in v) for v in cert.lambda_values.on_complement)
        if not (relators_ok and pure and full_rank and central and integral):
            bad.append(str(g))
    assert _emit(7, not bad, f"{len(groups)} certificates checked; failures {bad}")


def test_8_bott_sweep():
    h1.cache_clear()
    _presentation.cache_clear()
    start = time.perf_counter()
    bad, count = [], 0
    for n in range(1, 5):
        for a in catalog.all_bott_matrices(n):
            g = from_bott_matrix(a)
            count += 1
            if not (validate(g).ok and full_report(g).passed):
                bad.append(str(g))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 30 and count == 1 + 2 + 8 + 64
    assert _emit(8, ok, f"{count} Bott groups with n <= 4 in {elapsed:.1f}s; failures {bad}")


def test_9_negative_controls():
    inversion = CrystalGroup(2, (((-1, 0), (0, -1)),), ((0, 0),), "point-inversion")
    witness = torsion_free_check(inversion)
    torsion_ok = witness is not None and (witness * witness).is_identity and not witness.is_identity

    klein = catalog.get("klein").group
    cert = torus_action(klein)
    images = list(cert.rho.images)
    images[-1] = AffineElement(((-1, 0), (0, -1)), images[-1].translation)
    passed, w = centralizer_check(replace(cert.rho, images=tuple(images)))
    centralizer_ok = not passed and w is not None

    torsion_sub = la.lattice(2, [(0, 1)])
    rank_ok = image_rank_in_h1(klein, torsion_sub) < 1
    try:
        splitting_subgroup(klein, None, torsion_sub)
        raised = False
    except NotInjective:
        raised = True
    ok = torsion_ok and centralizer_ok and rank_ok and raised
    assert _emit(9, ok, f"torsion witness {torsion_ok}, centralizer witness {w}, "
                        f"torsion sublattice rank-deficient {rank_ok}, NotInjective {raised}")


if __name__ == "__main__":
    failures = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_"):
            try:
                fn()
            except AssertionError:
                failures += 1
    sys.exit(1 if failures else 0)
