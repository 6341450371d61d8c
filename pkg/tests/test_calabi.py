from dataclasses import replace
from fractions import Fraction

import pytest

from bieberbach import catalog
from bieberbach import linalg as la
from bieberbach.calabi import (CHECK_NAMES, build_tilde_B, centralizer_check, certificate_to_dict,
                               cocompactness_check, conjugation_blocks, faithful_sample_check,
                               solve_lambda, split_lattice, torus_action)
from bieberbach.crystal import AffineElement
from bieberbach.errors import RankZero
from bieberbach.topology import _presentation

from conftest import HALF, make

# λ on the complement basis has denominator 2 here, forcing ℓ = 2
HALF_LAMBDA = make(3, [((-1, 1, 0), (0, 1, 0), (0, 0, 1))], [(0, 0, HALF)], "half-lambda")


def test_split_torus():
    s = split_lattice(make(3))
    assert s.k == 3 and s.kernel_basis.rank == 0 and s.image_index == 1


def test_split_klein(klein):
    s = split_lattice(klein)
    assert s.kernel_basis.vectors == ((0, 1),)
    assert s.complement_basis.vectors == ((1, 0),)
    assert s.image_index == 2


def test_split_g2(g2):
    s = split_lattice(g2)
    assert s.kernel_basis.rank == 2 and s.complement_basis.rank == 1


def test_split_rank_zero(hw):
    with pytest.raises(RankZero):
        split_lattice(hw)
    with pytest.raises(RankZero):
        torus_action(hw)


def test_blocks(klein):
    blocks = conjugation_blocks(klein, split_lattice(klein))
    assert blocks[1].phi == ((-1,),)
    for name in catalog.list():
        g = catalog.get(name).group
        if g.dim and catalog.get(name).expected["h1"][0]:
            for b in conjugation_blocks(g, split_lattice(g)):
                assert len(b.phi) == g.dim - split_lattice(g).k


def test_klein_representation(klein):
    s = split_lattice(klein)
    lam, rho = solve_lambda(klein, s, conjugation_blocks(klein, s))
    assert lam.on_holonomy == ((0,),)
    assert rho.image("g1") == AffineElement(((-1, 0), (0, 1)), (0, 1))
    tb = build_tilde_B(rho, lam, s)
    assert tb.ell == 1
    assert tb.lattice_vectors == ((1, 0),)
    assert tb.images == (AffineElement.pure_translation((0, 2)),)


def test_torus_representation():
    cert = torus_action(make(2))
    assert cert.ell == 1
    assert all(img.is_translation for img in cert.rho.images)
    assert cert.tilde_B.lattice_vectors == ((1, 0), (0, 1))


def test_ell_two():
    cert = torus_action(HALF_LAMBDA)
    assert cert.ell == 2
    assert any(Fraction(x).denominator == 2 for v in cert.lambda_values.on_complement for x in v)
    for v in cert.lambda_values.on_complement:
        assert la.is_integral(cert.ell * x for x in v)


def test_centralizer_negative_control(klein):
    cert = torus_action(klein)
    assert centralizer_check(cert.rho) == (True, None)
    images = list(cert.rho.images)
    g = images[2]
    images[2] = AffineElement(((-1, 0), (0, -1)), g.translation)
    bad = replace(cert.rho, images=tuple(images))
    ok, witness = centralizer_check(bad)
    assert not ok and witness == ("g1", 0)


def test_cocompactness():
    t = AffineElement.pure_translation
    assert cocompactness_check([t((0, 2))], 1)
    assert not cocompactness_check([t((0, 1, 1)), t((0, 2, 2))], 2)
    assert not cocompactness_check([t((1, 2))], 1)
    assert not cocompactness_check([], 1)


def test_faithful_sample(klein):
    cert = torus_action(klein)
    ok, size = faithful_sample_check(klein, cert.rho, size=200)
    assert ok and size >= 200
    collapsed = replace(cert.rho, images=(AffineElement.identity(2),) * 3)
    assert not faithful_sample_check(klein, collapsed)[0]


@pytest.mark.parametrize("name", [n for n in catalog.list() if n != "G6"] + ["bott-3-110", "bott-4-111111"])
def test_certificates(name):
    g = catalog.get(name).group
    cert = torus_action(g)
    assert cert.ok and set(cert.checks) == set(CHECK_NAMES)
    pres = _presentation(g)
    for word in pres.relators:
        assert cert.rho.evaluate(word).is_identity
    n, k = g.dim, cert.k
    for img in cert.tilde_B.images:
        assert img.is_translation and not any(img.translation[:n - k])
    assert la.rank(tuple(img.translation[n - k:] for img in cert.tilde_B.images)) == k
    d = certificate_to_dict(cert)
    assert d["k"] == k and d["ell"] == cert.ell


def test_certificate_dict_uses_strings_for_fractions():
    d = certificate_to_dict(torus_action(HALF_LAMBDA))
    flat = [x for v in d["lambda"]["complement_basis"] for x in v]
    assert all(isinstance(x, (int, str)) for x in flat)
    assert "-1/2" in flat or "1/2" in flat
