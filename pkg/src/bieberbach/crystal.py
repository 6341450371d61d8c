"""Crystallographic groups acting on R^n, with the lattice fixed to Z^n.

A :class:`CrystalGroup` is stored as integral holonomy generators together
with one translation vector per generator.  Everything else (the finite
holonomy group, coset representatives, a finite presentation) is derived
from those data and checked exactly.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

from . import linalg as la
from .errors import BadMatrix, ClosureBound, GroupFileError, InputError, InternalInconsistency

DEFAULT_CLOSURE_BOUND = 1024
MAX_DIM = 32


@dataclass(frozen=True)
class AffineElement:
    """The map ``x -> linear @ x + translation``."""

    linear: la.Matrix
    translation: la.Vector

    @classmethod
    def identity(cls, n: int) -> "AffineElement":
        return cls(la.identity(n), (0,) * n)

    @classmethod
    def pure_translation(cls, v: Sequence[la.Number]) -> "AffineElement":
        return cls(la.identity(len(v)), tuple(v))

    @property
    def dim(self) -> int:
        return len(self.translation)

    def __mul__(self, other: "AffineElement") -> "AffineElement":
        return AffineElement(
            la.matmul(self.linear, other.linear),
            tuple(la.normalize_number(x) for x in
                  la.vadd(la.matvec(self.linear, other.translation), self.translation)),
        )

    def inverse(self) -> "AffineElement":
        inv = la.inverse(self.linear)
        return AffineElement(inv, tuple(la.normalize_number(-x) for x in la.matvec(inv, self.translation)))

    def __pow__(self, e: int) -> "AffineElement":
        base = self if e >= 0 else self.inverse()
        out = AffineElement.identity(self.dim)
        for _ in range(abs(e)):
            out = out * base
        return out

    def __call__(self, x: Sequence[la.Number]) -> la.Vector:
        return la.vadd(la.matvec(self.linear, x), self.translation)

    @property
    def is_identity(self) -> bool:
        return self.is_translation and not any(self.translation)

    @property
    def is_translation(self) -> bool:
        return self.linear == la.identity(self.dim)


@dataclass(frozen=True)
class CrystalGroup:
    """Group generated by Z^n translations and ``(A_i, v_i)``.

    ``holonomy_gens`` are integral matrices; ``vectors[i]`` is the
    translation part attached to ``holonomy_gens[i]``.
    """

    dim: int
    holonomy_gens: tuple = ()
    vectors: tuple = ()
    name: str = field(default="", compare=False)

    def __post_init__(self):
        gens = tuple(la.as_matrix(a) for a in self.holonomy_gens)
        vecs = tuple(tuple(la.normalize_number(Fraction(x)) for x in v) for v in self.vectors)
        object.__setattr__(self, "holonomy_gens", gens)
        object.__setattr__(self, "vectors", vecs)
        if len(gens) != len(vecs):
            raise InputError("need exactly one vector per holonomy generator")
        if not 0 <= self.dim <= MAX_DIM:
            raise InputError(f"dimension must lie in 0..{MAX_DIM}")
        for a, v in zip(gens, vecs):
            if la.shape(a) != (self.dim, self.dim) or len(v) != self.dim:
                raise InputError("generator shape does not match the dimension")

    def generators(self) -> list[AffineElement]:
        return [AffineElement(a, v) for a, v in zip(self.holonomy_gens, self.vectors)]

    @cached_property
    def holonomy(self) -> "HolonomyGroup":
        return generate_holonomy(self)

    def __str__(self):
        return self.name or f"<crystal group dim {self.dim}>"


# ----------------------------------------------------------------------------
# holonomy


@dataclass(frozen=True)
class HolonomyGroup:
    """Finite holonomy group with coset representatives.

    ``elements[0]`` is the identity.  ``vectors[i]`` is the translation of
    the chosen representative of ``elements[i]``, reduced into [0, 1)^n.
    ``table[i][j]`` indexes ``elements[i] @ elements[j]``.  ``words[i]`` is
    the breadth-first word in the generators that produced element ``i``.
    """

    elements: tuple
    vectors: tuple
    table: tuple
    words: tuple

    def __len__(self):
        return len(self.elements)

    @cached_property
    def _lookup(self) -> dict:
        return {a: i for i, a in enumerate(self.elements)}

    def index(self, matrix: la.Matrix) -> Optional[int]:
        return self._lookup.get(la.as_matrix(matrix))

    def representative(self, i: int) -> AffineElement:
        return AffineElement(self.elements[i], self.vectors[i])

    def order(self, i: int) -> int:
        k, cur = 1, i
        while cur != 0:
            cur = self.table[cur][i]
            k += 1
        return k

    def inverse_index(self, i: int) -> int:
        return next(j for j in range(len(self)) if self.table[i][j] == 0)


def _mod1(v: Sequence[la.Number]) -> la.Vector:
    return tuple(la.normalize_number(la.frac_mod1(x)) for x in v)


def generate_holonomy(group: CrystalGroup, bound: int = DEFAULT_CLOSURE_BOUND) -> HolonomyGroup:
    """Close the holonomy generators under products, breadth first.

    Raises :class:`ClosureBound` past ``bound`` elements.
    """
    n = group.dim
    ident = la.identity(n)
    elements = [ident]
    vectors = [(0,) * n]
    words: list[tuple] = [()]
    lookup = {ident: 0}
    queue = deque([0])
    while queue:
        h = queue.popleft()
        for s, (a, v) in enumerate(zip(group.holonomy_gens, group.vectors)):
            prod = la.matmul(elements[h], a)
            if prod in lookup:
                continue
            if len(elements) >= bound:
                raise ClosureBound(f"holonomy closure exceeds {bound} elements")
            lookup[prod] = len(elements)
            elements.append(prod)
            vectors.append(_mod1(la.vadd(la.matvec(elements[h], v), vectors[h])))
            words.append(words[h] + (s,))
            queue.append(lookup[prod])
    table = tuple(tuple(lookup[la.matmul(a, b)] for b in elements) for a in elements)
    return HolonomyGroup(tuple(elements), tuple(vectors), table, tuple(words))


# ----------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Check:
    name: str
    passed: Optional[bool]  # None: skipped because a prerequisite failed
    detail: str = ""
    witness: object = None


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.passed is False]


def torsion_free_check(group: CrystalGroup) -> Optional[AffineElement]:
    """``None`` if the group is torsion free, else an element of finite order.

    An element ``(A, v + λ)`` with ``A`` of order ``m`` has
    ``(A, w)^m = (I, N w)`` where ``N = I + A + ... + A^(m-1)``, so torsion
    exists over ``A`` iff ``N λ = -N v`` has an integral solution.
    """
    hol = group.holonomy
    n = group.dim
    for i in range(1, len(hol)):
        a = hol.elements[i]
        v = hol.vectors[i]
        m = hol.order(i)
        norm = la.zeros(n, n)
        power = la.identity(n)
        for _ in range(m):
            norm = tuple(la.vadd(r, s) for r, s in zip(norm, power))
            power = la.matmul(power, a)
        rhs = tuple(-x for x in la.matvec(norm, v))
        lam = la.solve_integer(norm, rhs)
        if lam is not None:
            return AffineElement(a, tuple(la.normalize_number(x) for x in la.vadd(v, lam)))
    return None


def validate(group: CrystalGroup, bound: int = DEFAULT_CLOSURE_BOUND) -> ValidationReport:
    """Check the Bieberbach conditions one after another.

    Later checks are skipped (``passed=None``) once an earlier one fails.
    """
    checks = []

    bad = [i for i, a in enumerate(group.holonomy_gens)
           if not la.is_integer_matrix(a) or abs(la.det(a)) != 1]
    if bad:
        checks.append(Check("lattice_invariance", False,
                            f"generator {bad[0] + 1} is not in GL(n, Z)", group.holonomy_gens[bad[0]]))
    else:
        checks.append(Check("lattice_invariance", True))

    hol = None
    if checks[-1].passed:
        try:
            hol = generate_holonomy(group, bound)
            checks.append(Check("holonomy_finite", True, f"|G| = {len(hol)}"))
        except ClosureBound as exc:
            checks.append(Check("holonomy_finite", False, str(exc)))
    else:
        checks.append(Check("holonomy_finite", None))

    if hol is not None:
        witness = _vector_system_defect(group, hol)
        if witness is None:
            checks.append(Check("vector_system", True))
        else:
            checks.append(Check("vector_system", False, witness[0], witness[1]))
    else:
        checks.append(Check("vector_system", None))

    if checks[-1].passed:
        # reuse the closure computed under the caller's bound
        group.__dict__.setdefault("holonomy", hol)
        w = torsion_free_check(group)
        if w is None:
            checks.append(Check("torsion_free", True))
        else:
            checks.append(Check("torsion_free", False, "element of finite order", w))
    else:
        checks.append(Check("torsion_free", None))
    return ValidationReport(tuple(checks))


def _vector_system_defect(group: CrystalGroup, hol: HolonomyGroup):
    for s, (a, v) in enumerate(zip(group.holonomy_gens, group.vectors)):
        i = hol.index(a)
        if _mod1(v) != hol.vectors[i]:
            return (f"generator {s + 1} disagrees with its coset representative mod Z^n",
                    AffineElement(a, v))
    for i, (a, va) in enumerate(zip(hol.elements, hol.vectors)):
        for j, vb in enumerate(hol.vectors):
            k = hol.table[i][j]
            if _mod1(la.vadd(la.matvec(a, vb), va)) != hol.vectors[k]:
                return (f"v(g{i} g{j}) != A(g{i}) v(g{j}) + v(g{i}) mod Z^n", (i, j))
    return None


def element_in_group(group: CrystalGroup, elem: AffineElement) -> bool:
    hol = group.holonomy
    i = hol.index(elem.linear) if la.is_integer_matrix(elem.linear) else None
    if i is None:
        return False
    return la.is_integral(la.vsub(elem.translation, hol.vectors[i]))


# ----------------------------------------------------------------------------
# standardising affine generators


def from_affine_generators(gens: Sequence[AffineElement], name: str = "",
                           bound: int = DEFAULT_CLOSURE_BOUND) -> CrystalGroup:
    """Conjugate the group generated by ``gens`` so its lattice becomes Z^n.

    The translation subgroup is found from Schreier generators over the
    holonomy closure; its Hermite basis ``M`` then conjugates every
    generator to ``(M^-1 A M, M^-1 v)``.  Generators that become pure
    lattice translations are dropped.
    """
    if not gens:
        raise InputError("need at least one generator")
    n = gens[0].dim
    reps = {la.identity(n): AffineElement.identity(n)}
    order = [la.identity(n)]
    queue = deque(order)
    while queue:
        h = queue.popleft()
        for g in gens:
            prod = reps[h] * g
            if prod.linear not in reps:
                if len(reps) >= bound:
                    raise ClosureBound(f"holonomy closure exceeds {bound} elements")
                reps[prod.linear] = prod
                order.append(prod.linear)
                queue.append(prod.linear)
    translations = []
    for h in order:
        for g in gens:
            prod = reps[h] * g
            t = prod * reps[prod.linear].inverse()
            if any(t.translation):
                translations.append(t.translation)
    den = la.denominator_lcm(x for t in translations for x in t)
    basis = la.lattice(n, [tuple(int(x * den) for x in t) for t in translations])
    if basis.rank != n:
        raise InputError("translations do not span R^n; the group is not cocompact")
    m = tuple(tuple(Fraction(basis.vectors[j][i], den) for j in range(n)) for i in range(n))
    minv = la.inverse(m)
    hol_gens, vecs = [], []
    for g in gens:
        a = la.to_int_matrix(la.matmul(la.matmul(minv, g.linear), m))
        if a == la.identity(n):
            continue
        hol_gens.append(a)
        vecs.append(_mod1(la.matvec(minv, g.translation)))
    return CrystalGroup(n, tuple(hol_gens), tuple(vecs), name=name)


def check_bott_matrix(a: Sequence[Sequence[int]]) -> la.Matrix:
    a = la.as_matrix(a)
    n = len(a)
    if any(len(row) != n for row in a):
        raise BadMatrix("Bott matrix must be square")
    for i in range(n):
        for j in range(n):
            if a[i][j] not in (0, 1):
                raise BadMatrix(f"entry ({i + 1},{j + 1}) is not 0 or 1")
            if j <= i and a[i][j]:
                raise BadMatrix(f"entry ({i + 1},{j + 1}) is not above the diagonal")
    return a


def from_bott_matrix(a: Sequence[Sequence[int]], name: str = "") -> CrystalGroup:
    """Real Bott manifold group of a strictly upper-triangular binary matrix.

    Generator ``i`` translates coordinate ``i`` by 1/2 and flips the sign
    of every later coordinate ``j`` with ``a[i][j] == 1``.
    """
    a = check_bott_matrix(a)
    n = len(a)
    if n == 0:
        raise BadMatrix("Bott matrix must be at least 1 x 1")
    gens = []
    for i in range(n):
        d = tuple(tuple((-1 if a[i][r] else 1) if r == c else 0 for c in range(n)) for r in range(n))
        gens.append(AffineElement(d, tuple(Fraction(1, 2) if r == i else 0 for r in range(n))))
    return from_affine_generators(gens, name=name or bott_name(a))


def bott_bits(a: la.Matrix) -> str:
    n = len(a)
    return "".join(str(a[i][j]) for i in range(n) for j in range(i + 1, n))


def bott_name(a: la.Matrix) -> str:
    bits = bott_bits(a)
    return f"bott-{len(a)}" + (f"-{bits}" if bits else "")


def bott_matrix_from_bits(n: int, bits: str) -> la.Matrix:
    """Strictly upper-triangular matrix filled row by row from ``bits``."""
    bits = bits.strip()
    if len(bits) != n * (n - 1) // 2 or set(bits) - {"0", "1"}:
        raise BadMatrix(f"expected {n * (n - 1) // 2} binary digits for n = {n}, got {bits!r}")
    it = iter(bits)
    return tuple(tuple(int(next(it)) if j > i else 0 for j in range(n)) for i in range(n))


# ----------------------------------------------------------------------------
# presentations

Word = tuple  # ((generator index, exponent), ...)


@dataclass(frozen=True)
class Presentation:
    """Finite presentation of a crystal group.

    Generators ``e1..en`` are the lattice translations; ``g{i}`` is the
    representative of holonomy element ``i`` (``i >= 1``).  ``assignment``
    maps each generator to the affine element it stands for.
    """

    generators: tuple
    relators: tuple
    assignment: tuple
    dim: int

    def evaluate(self, word: Word, images: Optional[Sequence[AffineElement]] = None) -> AffineElement:
        images = self.assignment if images is None else images
        out = AffineElement.identity(len(images[0].translation)) if images else AffineElement.identity(self.dim)
        inverses: dict = {}
        for g, e in word:
            if e < 0 and g not in inverses:
                inverses[g] = images[g].inverse()
            step = images[g] if e > 0 else inverses[g]
            for _ in range(abs(e)):
                out = out * step
        return out

    def abelianized(self) -> list[dict]:
        """Exponent-sum rows of the relators, as sparse dicts."""
        rows = []
        for word in self.relators:
            row: dict = {}
            for g, e in word:
                row[g] = row.get(g, 0) + e
            rows.append({g: e for g, e in row.items() if e})
        return rows

    def lattice_word(self, v: Sequence[int]) -> Word:
        return tuple((i, int(x)) for i, x in enumerate(v) if x)

    def holonomy_generator(self, element_index: int) -> int:
        return self.dim + element_index - 1


def presentation(group: CrystalGroup, full_table: bool = False) -> Presentation:
    """Presentation of the extension ``Z^n -> π -> G``.

    Relators: lattice commutators; ``g e_i g^-1 = e^(A_g e_i)``; and
    ``g_h g_s = e^t g_(hs)`` with ``t`` read off the vector system, for
    ``s`` ranging over the holonomy generators (all of ``G`` when
    ``full_table``).  Each relator is evaluated in E(n) before returning.
    """
    hol = group.holonomy
    n = group.dim
    names = [f"e{i + 1}" for i in range(n)] + [f"g{i}" for i in range(1, len(hol))]
    assignment = [AffineElement.pure_translation(tuple(int(i == j) for j in range(n))) for i in range(n)]
    assignment += [hol.representative(i) for i in range(1, len(hol))]

    def g(i: int) -> int:
        return n + i - 1

    def lattice(v, sign=1) -> list:
        return [(k, sign * int(x)) for k, x in enumerate(v) if x]

    relators = []
    for i in range(n):
        for j in range(i + 1, n):
            relators.append(((i, 1), (j, 1), (i, -1), (j, -1)))
    for h in range(1, len(hol)):
        a = hol.elements[h]
        for i in range(n):
            image = [a[r][i] for r in range(n)]
            relators.append(tuple([(g(h), 1), (i, 1), (g(h), -1)] + lattice(image, -1)))
    if full_table:
        right = range(1, len(hol))
    else:
        right = sorted({hol.index(a) for a in group.holonomy_gens} - {0})
    for h in range(1, len(hol)):
        for s in right:
            hs = hol.table[h][s]
            t = la.vsub(la.vadd(la.matvec(hol.elements[h], hol.vectors[s]), hol.vectors[h]), hol.vectors[hs])
            if not la.is_integral(t):
                raise InternalInconsistency(f"vector system not consistent at (g{h}, g{s})")
            word = [(g(h), 1), (g(s), 1)]
            if hs:
                word.append((g(hs), -1))
            relators.append(tuple(word + lattice(t, -1)))
    pres = Presentation(tuple(names), tuple(relators), tuple(assignment), n)
    for r in pres.relators:
        if not pres.evaluate(r).is_identity:
            raise InternalInconsistency(f"relator {format_word(pres, r)} does not evaluate to 1")
    return pres


def format_word(pres: Presentation, word: Word) -> str:
    if not word:
        return "1"
    return " ".join(pres.generators[g] + ("" if e == 1 else f"^{e}") for g, e in word)


# ----------------------------------------------------------------------------
# group file format


def _fmt(x) -> str:
    return str(la.normalize_number(Fraction(x)))


def format_group(group: CrystalGroup) -> str:
    lines = []
    if group.name:
        lines.append(f"# {group.name}")
    lines.append(f"dim {group.dim}")
    for a, v in zip(group.holonomy_gens, group.vectors):
        lines.append("gen")
        lines.extend(" ".join(_fmt(x) for x in row) for row in a)
        lines.append("vec " + " ".join(_fmt(x) for x in v))
    return "\n".join(lines) + "\n"


_INT = re.compile(r"[+-]?\d+\Z")
_RAT = re.compile(r"[+-]?\d+(/\d+)?\Z")


def _tokens(line: str) -> list[tuple[str, int]]:
    return [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", line)]


def parse_group(text: str, name: str = "") -> CrystalGroup:
    """Parse the line-oriented group file format.

    ``dim n``, then per generator ``gen`` followed by ``n`` matrix rows
    and a ``vec`` line (the rationals may sit on the ``vec`` line itself or
    on the next one).  ``#`` starts a comment.
    """
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        content = raw.split("#", 1)[0]
        toks = _tokens(content)
        if toks:
            lines.append((lineno, toks))
    if not lines:
        raise GroupFileError("empty group file", 1)
    it = iter(lines)
    lineno, toks = next(it)
    if toks[0][0] != "dim" or len(toks) != 2 or not _INT.match(toks[1][0]):
        raise GroupFileError("expected 'dim <n>'", lineno, toks[0][1])
    n = int(toks[1][0])
    if not 0 <= n <= MAX_DIM:
        raise GroupFileError(f"dimension must lie in 0..{MAX_DIM}", lineno, toks[1][1])
    gens, vecs = [], []
    pending = list(it)
    pos = 0

    def take():
        nonlocal pos
        if pos >= len(pending):
            last = lines[-1][0]
            raise GroupFileError("unexpected end of file", last + 1)
        item = pending[pos]
        pos += 1
        return item

    while pos < len(pending):
        lineno, toks = take()
        if toks[0][0] != "gen" or len(toks) != 1:
            raise GroupFileError(f"expected 'gen', got {toks[0][0]!r}", lineno, toks[0][1])
        rows = []
        for _ in range(n):
            lineno, toks = take()
            if len(toks) != n:
                col = toks[n][1] if len(toks) > n else toks[-1][1]
                raise GroupFileError(f"matrix row needs {n} integers, got {len(toks)}", lineno, col)
            for tok, col in toks:
                if not _INT.match(tok):
                    raise GroupFileError(f"not an integer: {tok!r}", lineno, col)
            rows.append(tuple(int(t) for t, _ in toks))
        lineno, toks = take()
        if toks[0][0] != "vec":
            raise GroupFileError(f"expected 'vec', got {toks[0][0]!r}", lineno, toks[0][1])
        entries = toks[1:]
        if not entries:
            lineno, entries = take()
        if len(entries) != n:
            col = entries[n][1] if len(entries) > n else entries[-1][1]
            raise GroupFileError(f"vector needs {n} rationals, got {len(entries)}", lineno, col)
        vec = []
        for tok, col in entries:
            if not _RAT.match(tok):
                raise GroupFileError(f"not a rational: {tok!r}", lineno, col)
            try:
                vec.append(Fraction(tok))
            except ZeroDivisionError:
                raise GroupFileError("zero denominator", lineno, col) from None
        gens.append(tuple(rows))
        vecs.append(tuple(vec))
    return CrystalGroup(n, tuple(gens), tuple(vecs), name=name)
