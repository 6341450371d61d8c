"""Explicit torus actions on flat manifolds with positive first Betti number.

Given π with ``rank H_1 = k > 0`` and the projection ν of π onto the free
part of H_1, the lattice splits as ``Z^n = K ⊕ B`` with ``K = ker ν|Z^n``
and ``ν|B`` injective.  In adapted coordinates ``(x, w) ∈ R^(n-k) × R^k``
π is represented by

    ρ(γ) = ((t(γ), ν(γ)), diag(φ̄(γ), I_k))

where φ̄ is conjugation on ``K`` and the top translations ``t`` are found
by solving the relators of a presentation as linear equations over Q.
Translations along ``0 × R^k`` then commute with ρ(π) and the lattice
``B̃ = {(-ℓ λ(β), ℓ β)}`` maps to translations of rank k, which together
exhibit a homologically injective ``T^k``-action.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Optional, Sequence

from . import linalg as la
from .crystal import AffineElement, CrystalGroup, Presentation, format_word
from .errors import (BlockStructureViolation, CertificateFailure, InternalInconsistency, NoSolution,
                     NotTranslation, RankZero)
from .topology import HomologyH1, _presentation, h1, image_rank_in_h1

FAITHFUL_SAMPLE = 100


@dataclass(frozen=True)
class LatticeSplitting:
    """``Z^n = kernel ⊕ complement`` with ν injective on the complement.

    ``change_of_basis`` has the kernel basis as its first columns and the
    complement basis as its last ``k``; it maps adapted coordinates to
    standard ones.  ``nu_complement`` (``k x k``) holds ν of the complement
    basis as columns, so ``image_index = |det nu_complement|``.
    """

    k: int
    kernel_basis: la.LatticeBasis
    complement_basis: la.LatticeBasis
    image_lattice: la.LatticeBasis
    image_index: int
    change_of_basis: la.Matrix
    nu_complement: la.Matrix

    @property
    def dim(self) -> int:
        return len(self.change_of_basis)

    def to_adapted(self, x: Sequence[la.Number]) -> la.Vector:
        return la.matvec(self._inverse, x)

    def to_standard(self, x: Sequence[la.Number]) -> la.Vector:
        return la.matvec(self.change_of_basis, x)

    @property
    def _inverse(self) -> la.Matrix:
        inv = self.__dict__.get("_inv")
        if inv is None:
            inv = la.to_int_matrix(la.inverse(self.change_of_basis))
            self.__dict__["_inv"] = inv
        return inv


def split_lattice(group: CrystalGroup, homology: Optional[HomologyH1] = None) -> LatticeSplitting:
    homology = homology or h1(group)
    k = homology.free_rank
    n = group.dim
    if k == 0:
        raise RankZero(f"{group}: H_1 has free rank 0")
    nu = homology.lattice_projection()
    kernel = la.kernel_lattice(nu, n)
    if kernel.rank != n - k:
        raise InternalInconsistency(f"ν(Z^n) has rank {n - kernel.rank}, expected {k}")
    complement = la.complement_in_lattice(kernel, nu)
    cob = la.transpose(kernel.vectors + complement.vectors)
    nu_b = la.matmul(nu, complement.columns())
    image = la.lattice(k, la.transpose(nu_b))
    return LatticeSplitting(k, kernel, complement, image, abs(la.det(nu_b)), cob, nu_b)


@dataclass(frozen=True)
class ConjugationBlock:
    """Conjugation by a holonomy element in adapted coordinates.

    ``phi`` acts on the kernel lattice; ``coupling`` is the top-right block
    recording how the complement is pushed into the kernel.
    """

    phi: la.Matrix
    coupling: la.Matrix


def conjugation_blocks(group: CrystalGroup, splitting: LatticeSplitting) -> tuple:
    """One :class:`ConjugationBlock` per holonomy element (identity first).

    Conjugation fixes H_1, so the bottom row of blocks must be ``(0, I_k)``.
    """
    n, k = group.dim, splitting.k
    m = n - k
    tinv = splitting._inverse
    out = []
    for i, a in enumerate(group.holonomy.elements):
        c = la.matmul(la.matmul(tinv, a), splitting.change_of_basis)
        for r in range(m, n):
            for s in range(n):
                if c[r][s] != (1 if r == s else 0):
                    raise BlockStructureViolation(
                        f"holonomy element {i}: adapted matrix has entry {c[r][s]} at ({r}, {s})")
        out.append(ConjugationBlock(tuple(row[:m] for row in c[:m]), tuple(row[m:] for row in c[:m])))
    return tuple(out)


# ----------------------------------------------------------------------------
# ρ and λ


@dataclass(frozen=True)
class BlockRepresentation:
    """Images of the presentation generators in E(n), adapted coordinates."""

    k: int
    images: tuple
    generators: tuple
    splitting: LatticeSplitting = field(compare=False)

    def image(self, name: str) -> AffineElement:
        return self.images[self.generators.index(name)]

    def lattice_image(self, x: Sequence[int]) -> AffineElement:
        """ρ of the lattice translation with standard coordinates ``x``."""
        out = AffineElement.identity(len(x))
        for i, c in enumerate(x):
            if c:
                out = out * (self.images[i] ** int(c))
        return out

    def evaluate(self, word) -> AffineElement:
        out = AffineElement.identity(self.splitting.dim)
        for g, e in word:
            out = out * (self.images[g] ** e)
        return out


class _Affine:
    """Affine map whose translation is affine in a vector of unknowns.

    ``coeff[r]`` is a sparse dict of unknown index -> coefficient.
    """

    __slots__ = ("linear", "const", "coeff")

    def __init__(self, linear, const, coeff):
        self.linear = linear
        self.const = const
        self.coeff = coeff

    def __mul__(self, other: "_Affine") -> "_Affine":
        a = self.linear
        const = tuple(sum(a[r][s] * other.const[s] for s in range(len(a))) + self.const[r]
                      for r in range(len(a)))
        coeff = []
        for r in range(len(a)):
            row = dict(self.coeff[r])
            for s, x in enumerate(a[r]):
                if x:
                    for u, y in other.coeff[s].items():
                        v = row.get(u, 0) + x * y
                        if v:
                            row[u] = v
                        else:
                            row.pop(u, None)
            coeff.append(row)
        return _Affine(la.matmul(a, other.linear), const, coeff)

    def inverse(self) -> "_Affine":
        inv = la.to_int_matrix(la.inverse(self.linear))
        n = len(inv)
        const = tuple(-sum(inv[r][s] * self.const[s] for s in range(n)) for r in range(n))
        coeff = []
        for r in range(n):
            row: dict = {}
            for s, x in enumerate(inv[r]):
                if x:
                    for u, y in self.coeff[s].items():
                        v = row.get(u, 0) - x * y
                        if v:
                            row[u] = v
                        else:
                            row.pop(u, None)
            coeff.append(row)
        return _Affine(inv, const, coeff)


def _block_diag(phi: la.Matrix, k: int) -> la.Matrix:
    m = len(phi)
    n = m + k
    return tuple(tuple(phi[r][s] if r < m and s < m else (1 if r == s and r >= m else 0)
                       for s in range(n)) for r in range(n))


def _symbolic_images(group, pres, splitting, blocks, homology):
    n, k = group.dim, splitting.k
    m = n - k
    nvars = m * k + m * (len(group.holonomy) - 1)
    ident = la.identity(n)
    images = []
    for i in range(n):
        e = tuple(int(i == j) for j in range(n))
        x = splitting.to_adapted(e)
        p, q = x[:m], x[m:]
        const = tuple(p) + tuple(la.matvec(splitting.nu_complement, q))
        coeff = [{a * k + j: q[j] for j in range(k) if q[j]} for a in range(m)] + [{} for _ in range(k)]
        images.append(_Affine(ident, const, coeff))
    for h in range(1, len(group.holonomy)):
        base = m * k + (h - 1) * m
        nu_g = homology.generator_image(pres.generators[n + h - 1])
        const = (0,) * m + tuple(nu_g)
        coeff = [{base + a: 1} for a in range(m)] + [{} for _ in range(k)]
        images.append(_Affine(_block_diag(blocks[h].phi, k), const, coeff))
    return images, nvars


def _sym_evaluate(images, word, n):
    out = _Affine(la.identity(n), (0,) * n, [{} for _ in range(n)])
    inverses: dict = {}
    for g, e in word:
        if e < 0 and g not in inverses:
            inverses[g] = images[g].inverse()
        step = images[g] if e > 0 else inverses[g]
        for _ in range(abs(e)):
            out = out * step
    return out


@dataclass(frozen=True)
class LambdaValues:
    """Top translations: ``on_complement[j]`` is λ of complement vector ``j``;
    ``on_holonomy[h - 1]`` is λ of the representative ``g_h``."""

    on_complement: tuple
    on_holonomy: tuple

    def all_values(self):
        yield from self.on_complement
        yield from self.on_holonomy


def solve_lambda(group: CrystalGroup, splitting: LatticeSplitting, blocks: Sequence[ConjugationBlock],
                 homology: Optional[HomologyH1] = None) -> tuple[LambdaValues, BlockRepresentation]:
    """Solve for λ so that ρ kills every relator.

    Unknowns, in order: λ on the complement basis (row-major, making λ
    additive on B by construction), then λ(g_h) for each nontrivial
    holonomy element.  Free unknowns are set to zero.
    """
    homology = homology or h1(group)
    pres = _presentation(group)
    n, k = group.dim, splitting.k
    m = n - k
    sym, nvars = _symbolic_images(group, pres, splitting, blocks, homology)
    ech = la.RationalEchelon()
    for word in pres.relators:
        val = _sym_evaluate(sym, word, n)
        if val.linear != la.identity(n):
            raise BlockStructureViolation(f"relator {format_word(pres, word)} has nontrivial linear part")
        for r in range(n):
            ech.add(val.coeff[r], -Fraction(val.const[r]))
        if ech.inconsistent:
            raise NoSolution(f"relator {format_word(pres, word)} admits no λ")
    u = [la.normalize_number(x) for x in ech.back_substitute(nvars, {})]
    lam_b = tuple(tuple(u[a * k + j] for a in range(m)) for j in range(k))
    lam_h = tuple(tuple(u[m * k + (h - 1) * m + a] for a in range(m)) for h in range(1, len(group.holonomy)))
    images = []
    for s in sym:
        top = tuple(la.normalize_number(s.const[r] + sum(c * u[v] for v, c in s.coeff[r].items()))
                    for r in range(n))
        images.append(AffineElement(s.linear, top))
    rho = BlockRepresentation(k, tuple(images), pres.generators, splitting)
    for word in pres.relators:
        if not rho.evaluate(word).is_identity:
            raise InternalInconsistency(f"ρ does not kill relator {format_word(pres, word)}")
    return LambdaValues(lam_b, lam_h), rho


# ----------------------------------------------------------------------------
# B̃ and the certificate checks


@dataclass(frozen=True)
class TildeB:
    ell: int
    generators: tuple      # (-ℓ λ(β_j), ℓ β_j) in adapted coordinates
    lattice_vectors: tuple  # the same translations in standard coordinates
    images: tuple          # ρ of each generator


def build_tilde_B(rho: BlockRepresentation, lam: LambdaValues, splitting: LatticeSplitting) -> TildeB:
    k = splitting.k
    n = splitting.dim
    m = n - k
    ell = 1
    for v in lam.on_complement:
        ell = lcm(ell, la.denominator_lcm(v))
    gens, vecs, imgs = [], [], []
    for j in range(k):
        top = tuple(-ell * x for x in lam.on_complement[j])
        if not la.is_integral(top):
            raise NotTranslation(f"ℓ λ(β_{j + 1}) is not integral")
        adapted = tuple(int(x) for x in top) + tuple(ell if i == j else 0 for i in range(k))
        std = tuple(int(x) for x in splitting.to_standard(adapted))
        img = rho.lattice_image(std)
        if not img.is_translation or any(img.translation[:m]):
            raise NotTranslation(f"ρ(B̃ generator {j + 1}) = {img} is not a translation along 0 × R^k")
        gens.append(AffineElement.pure_translation(adapted))
        vecs.append(std)
        imgs.append(img)
    return TildeB(ell, tuple(gens), tuple(vecs), tuple(imgs))


def centralizer_check(rho: BlockRepresentation) -> tuple[bool, Optional[tuple]]:
    """Every translation along ``0 × R^k`` commutes with every ρ-generator.

    Returns ``(True, None)`` or ``(False, (generator name, j))``.
    """
    n = len(rho.images[0].translation) if rho.images else rho.splitting.dim
    for name, img in zip(rho.generators, rho.images):
        for j in range(rho.k):
            t = AffineElement.pure_translation(tuple(int(i == n - rho.k + j) for i in range(n)))
            if img * t != t * img:
                return False, (name, j)
    return True, None


def cocompactness_check(tilde_images: Sequence[AffineElement], k: int) -> bool:
    """The translations ρ(B̃) lie in ``0 × R^k`` and span it."""
    if len(tilde_images) == 0:
        return k == 0
    n = tilde_images[0].dim
    if any(not t.is_translation or any(t.translation[:n - k]) for t in tilde_images):
        return False
    return la.rank(tuple(t.translation[n - k:] for t in tilde_images)) == k


def faithful_sample_check(group: CrystalGroup, rho: BlockRepresentation,
                          pres: Optional[Presentation] = None, size: int = FAITHFUL_SAMPLE) -> tuple[bool, int]:
    """Breadth-first ball in π: ρ must be well defined and injective on it.

    Returns ``(ok, number of distinct elements sampled)``.
    """
    pres = pres or _presentation(group)
    letters = []
    for g, elem in enumerate(pres.assignment):
        letters.append((elem, rho.images[g]))
        letters.append((elem.inverse(), rho.images[g].inverse()))
    n = group.dim
    seen = {AffineElement.identity(n): AffineElement.identity(n)}
    queue = deque(seen)
    while queue and len(seen) < size:
        x = queue.popleft()
        rx = seen[x]
        for elem, img in letters:
            y, ry = x * elem, rx * img
            if y in seen:
                if seen[y] != ry:
                    return False, len(seen)
                continue
            seen[y] = ry
            queue.append(y)
    return len(set(seen.values())) == len(seen), len(seen)


@dataclass(frozen=True)
class TorusActionCertificate:
    k: int
    splitting: LatticeSplitting
    rho: BlockRepresentation
    lambda_values: LambdaValues
    ell: int
    tilde_B: TildeB
    checks: dict

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    @property
    def tilde_B_gens(self) -> tuple:
        return self.tilde_B.generators


CHECK_NAMES = ("rho_homomorphism", "rho_faithful_sample", "tilde_B_translations",
               "centralizer", "cocompact", "homological_injectivity")


def torus_action(group: CrystalGroup) -> TorusActionCertificate:
    """Build ρ, λ, ℓ and B̃ for ``group`` and certify the ``T^k``-action.

    Raises :class:`RankZero` when ``k = 0`` and :class:`CertificateFailure`
    naming the first failing check otherwise.
    """
    homology = h1(group)
    splitting = split_lattice(group, homology)
    blocks = conjugation_blocks(group, splitting)
    lam, rho = solve_lambda(group, splitting, blocks, homology)
    checks = {"rho_homomorphism": True}  # solve_lambda re-verified every relator
    ok, _ = faithful_sample_check(group, rho)
    checks["rho_faithful_sample"] = ok
    try:
        tb = build_tilde_B(rho, lam, splitting)
        checks["tilde_B_translations"] = True
    except NotTranslation as exc:
        raise CertificateFailure("tilde_B_translations", str(exc)) from exc
    checks["centralizer"] = centralizer_check(rho)[0]
    checks["cocompact"] = cocompactness_check(tb.images, splitting.k)
    sub = la.lattice(group.dim, tb.lattice_vectors)
    checks["homological_injectivity"] = image_rank_in_h1(group, sub, homology) == splitting.k
    for name in CHECK_NAMES:
        if not checks[name]:
            raise CertificateFailure(name, f"{group}: check failed")
    return TorusActionCertificate(splitting.k, splitting, rho, lam, tb.ell, tb, checks)


def certificate_to_dict(cert: TorusActionCertificate) -> dict:
    def rat(v):
        return [str(la.normalize_number(Fraction(x))) for x in v]

    return {
        "k": cert.k,
        "kernel_basis": [list(v) for v in cert.splitting.kernel_basis.vectors],
        "complement_basis": [list(v) for v in cert.splitting.complement_basis.vectors],
        "image_index": cert.splitting.image_index,
        "lambda": {
            "complement_basis": [rat(v) for v in cert.lambda_values.on_complement],
            "holonomy": {cert.rho.generators[cert.splitting.dim + h]: rat(v)
                         for h, v in enumerate(cert.lambda_values.on_holonomy)},
        },
        "ell": cert.ell,
        "tilde_B": [list(v) for v in cert.tilde_B.lattice_vectors],
        "checks": dict(cert.checks),
    }
