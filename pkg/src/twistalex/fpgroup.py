"""Finitely presented groups, Fox calculus, braid closures and surgery.

Letters of a word are signed 1-based generator indices: ``+i`` is generator
``i`` and ``-i`` its inverse.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from math import gcd
from typing import Iterable, Mapping, Sequence

from .algebra.normal_forms import int_smith

BOUNDARY_TORI = "boundary-tori"
CLOSED = "closed"


class PresentationError(ValueError):
    """Malformed words, presentations or braids."""


def _free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for a in letters:
        if a == 0:
            raise PresentationError("0 is not a valid letter")
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


class Word:
    """Freely reduced word in the free group on generators 1..n."""

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[int] = ()):
        self.letters = _free_reduce(letters)

    @classmethod
    def gen(cls, i: int, power: int = 1) -> "Word":
        return cls([i if power > 0 else -i] * abs(power))

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(-a for a in reversed(self.letters))

    def __pow__(self, n: int) -> "Word":
        base = self if n >= 0 else self.inverse()
        return Word(base.letters * abs(n))

    def conjugate_by(self, w: "Word") -> "Word":
        """``w self w^-1``."""
        return w * self * w.inverse()

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def __lt__(self, other: "Word") -> bool:
        return (len(self.letters), self.letters) < (len(other.letters), other.letters)

    def max_generator(self) -> int:
        return max((abs(a) for a in self.letters), default=0)

    def exponent_sums(self, n: int) -> list[int]:
        sums = [0] * n
        for a in self.letters:
            sums[abs(a) - 1] += 1 if a > 0 else -1
        return sums

    def weight(self, phi: Sequence[int]) -> int:
        return sum(phi[a - 1] if a > 0 else -phi[-a - 1] for a in self.letters)

    def __repr__(self):
        return f"Word({list(self.letters)})"

    def format(self, names: Sequence[str]) -> str:
        if not self.letters:
            return "1"
        return " ".join(names[a - 1] if a > 0 else f"{names[-a - 1]}^-1" for a in self.letters)


class GroupRingElem:
    """Finite integer combination of freely reduced words."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Word, int] | Iterable[tuple[int, Word]] = ()):
        acc: dict[Word, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else ((w, c) for c, w in terms)
        for w, c in items:
            acc[w] = acc.get(w, 0) + c
        self.terms = {w: c for w, c in acc.items() if c}

    def __add__(self, other: "GroupRingElem") -> "GroupRingElem":
        merged = dict(self.terms)
        for w, c in other.terms.items():
            merged[w] = merged.get(w, 0) + c
        return GroupRingElem(merged)

    def __neg__(self) -> "GroupRingElem":
        return GroupRingElem({w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "GroupRingElem") -> "GroupRingElem":
        return self + (-other)

    def left_mul(self, w: Word) -> "GroupRingElem":
        return GroupRingElem({w * v: c for v, c in self.terms.items()})

    def right_mul(self, w: Word) -> "GroupRingElem":
        return GroupRingElem({v * w: c for v, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupRingElem) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        inner = " + ".join(f"{c}*{list(w.letters)}" for w, c in sorted(self.terms.items(), key=lambda kv: kv[0]))
        return f"GroupRingElem({inner or '0'})"


def fox_derivative(w: Word, g: int, num_generators: int | None = None) -> GroupRingElem:
    """Left Fox derivative: d(uv)/dg = du/dg + u dv/dg, d(g^-1)/dg = -g^-1."""
    if g < 1 or (num_generators is not None and g > num_generators):
        raise PresentationError(f"unknown generator index {g}")
    terms: dict[Word, int] = {}
    letters = w.letters
    for pos, a in enumerate(letters):
        if a == g:
            key = Word(letters[:pos])
            terms[key] = terms.get(key, 0) + 1
        elif a == -g:
            key = Word(letters[: pos + 1])
            terms[key] = terms.get(key, 0) - 1
    return GroupRingElem(terms)


@dataclass(frozen=True)
class Presentation:
    """Group presentation with a class phi: pi -> Z and a manifold kind.

    ``meridional`` records that all generators are known to be conjugate
    (Wirtinger / braid presentations of knots).  ``source`` keeps the braid a
    presentation came from, if any.
    """

    generators: tuple[str, ...]
    relators: tuple[Word, ...]
    phi: tuple[int, ...] | None = None
    kind: str = BOUNDARY_TORI
    label: str = ""
    meridional: bool = False
    source: object = field(default=None, compare=False)

    def __post_init__(self):
        n = len(self.generators)
        if len(set(self.generators)) != n:
            raise PresentationError("duplicate generator names")
        for r in self.relators:
            if r.max_generator() > n:
                raise PresentationError(f"relator {r} references an undeclared generator")
        if self.kind not in (BOUNDARY_TORI, CLOSED):
            raise PresentationError(f"unknown manifold kind {self.kind!r}")
        if self.phi is not None:
            if len(self.phi) != n:
                raise PresentationError("phi must have one value per generator")
            for r in self.relators:
                if r.weight(self.phi) != 0:
                    raise PresentationError(f"phi does not vanish on relator {r.format(self.generators)}")

    @property
    def num_generators(self) -> int:
        return len(self.generators)

    @property
    def deficiency(self) -> int:
        return len(self.generators) - len(self.relators)

    @property
    def b3(self) -> int:
        return 1 if self.kind == CLOSED else 0

    def index(self, name: str) -> int:
        try:
            return self.generators.index(name) + 1
        except ValueError:
            raise PresentationError(f"unknown generator {name!r}") from None

    def word(self, text: str) -> Word:
        """Parse ``"a b^-1 c^2"`` with this presentation's generator names."""
        return parse_word(text, self.generators)

    def abelianization_matrix(self) -> list[list[int]]:
        n = len(self.generators)
        return [r.exponent_sums(n) for r in self.relators]

    def with_phi(self, phi: Sequence[int]) -> "Presentation":
        return replace(self, phi=tuple(phi))


def parse_word(text: str, names: Sequence[str]) -> Word:
    """Whitespace separated tokens ``x``, ``x^-1``, ``x^3``; ``1`` is the empty word."""
    lookup = {nm: i + 1 for i, nm in enumerate(names)}
    letters: list[int] = []
    for tok in text.split():
        if tok == "1":
            continue
        base, _, exp = tok.partition("^")
        if base not in lookup:
            raise PresentationError(f"unknown generator {base!r}")
        try:
            e = int(exp) if exp else 1
        except ValueError:
            raise PresentationError(f"bad exponent in {tok!r}") from None
        idx = lookup[base]
        letters.extend([idx if e > 0 else -idx] * abs(e))
    return Word(letters)


# ---------------------------------------------------------------------------
# abelianization and phi


def homology_rank(p: Presentation) -> int:
    """First Betti number of the presented group."""
    n = p.num_generators
    if not p.relators:
        return n
    return n - int_smith(p.abelianization_matrix(), n).rank


def abelianization_invariants(p: Presentation) -> list[int]:
    """Invariant factors of H_1 (0 for each free summand, units dropped)."""
    n = p.num_generators
    if not p.relators:
        return [0] * n
    s = int_smith(p.abelianization_matrix(), n)
    divs = [abs(d) for d in s.divisors if abs(d) != 1]
    return divs + [0] * (n - len(s.divisors))


def derive_phi(p: Presentation) -> Presentation:
    """Attach (or primitivise) a primitive class phi vanishing on all relators."""
    n = p.num_generators
    if p.phi is not None:
        g = 0
        for v in p.phi:
            g = gcd(g, v)
        if g == 0:
            raise PresentationError("phi is trivial")
        return p.with_phi(v // g for v in p.phi)
    if p.relators:
        s = int_smith(p.abelianization_matrix(), n)
        rank = s.rank
        kernel = [[s.V[i][j] for i in range(n)] for j in range(rank, n)]
    else:
        kernel = [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    if not kernel:
        raise PresentationError("b_1 = 0: no nontrivial class phi exists")
    vec = kernel[0]
    g = 0
    for v in vec:
        g = gcd(g, v)
    vec = [v // g for v in vec]
    first = next(v for v in vec if v)
    if first < 0:
        vec = [-v for v in vec]
    return p.with_phi(vec)


def is_primitive(phi: Sequence[int]) -> bool:
    g = 0
    for v in phi:
        g = gcd(g, v)
    return g == 1


# ---------------------------------------------------------------------------
# Wirtinger data and braids


def wirtinger_presentation(
    generators: Sequence[str],
    relations: Sequence[tuple[str, Word | str, str]],
    label: str = "",
    drop_redundant: bool = True,
) -> Presentation:
    """Relations ``x = w y w^-1`` given as ``(x, w, y)``; one relator dropped."""
    names = tuple(generators)
    relators = []
    for x, w, y in relations:
        if isinstance(w, str):
            w = parse_word(w, names)
        xi = parse_word(x, names)
        yi = parse_word(y, names)
        if len(xi) != 1 or len(yi) != 1 or xi.letters[0] < 0 or yi.letters[0] < 0:
            raise PresentationError(f"not a conjugation relation: {x} = ({w}) {y} ({w})^-1")
        relators.append(xi * (yi.conjugate_by(w)).inverse())
    if drop_redundant and relators:
        relators = relators[:-1]
    return Presentation(names, tuple(relators), tuple([1] * len(names)), BOUNDARY_TORI, label, meridional=True)


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple[int, ...]

    def __post_init__(self):
        if self.strands < 2:
            raise PresentationError("a braid needs at least 2 strands")
        for a in self.letters:
            if a == 0 or abs(a) >= self.strands:
                raise PresentationError(f"letter {a} invalid for {self.strands} strands")

    def permutation(self) -> list[int]:
        """Strand permutation: top position -> bottom position (0-based)."""
        pos = list(range(self.strands))  # pos[strand] = position
        for a in self.letters:
            i = abs(a) - 1
            for s in range(self.strands):
                if pos[s] == i:
                    pos[s] = i + 1
                elif pos[s] == i + 1:
                    pos[s] = i
        return pos

    def components(self) -> int:
        perm = self.permutation()
        seen = set()
        count = 0
        for s in range(self.strands):
            if s not in seen:
                count += 1
                while s not in seen:
                    seen.add(s)
                    s = perm[s]
        return count

    def writhe(self) -> int:
        return sum(1 if a > 0 else -1 for a in self.letters)

    def __str__(self):
        return f"braid {self.strands}: " + " ".join(str(a) for a in self.letters)


def _artin_step(values: list, a: int, mul, inv):
    """Apply one braid letter to the position values (shared by words and permutations)."""
    i = abs(a) - 1
    u, v = values[i], values[i + 1]
    if a > 0:
        values[i] = mul(mul(u, v), inv(u))
        values[i + 1] = u
    else:
        values[i] = v
        values[i + 1] = mul(mul(inv(v), u), v)


def braid_action(b: BraidWord) -> list[Word]:
    """Images of x_1..x_n under the braid automorphism."""
    values = [Word([j + 1]) for j in range(b.strands)]
    for a in b.letters:
        _artin_step(values, a, Word.__mul__, Word.inverse)
    return values


def braid_to_presentation(b: BraidWord, label: str = "") -> Presentation:
    """Exterior of the braid closure: generators x_1..x_n, relators x_j^-1 beta(x_j)."""
    values = braid_action(b)
    relators = [Word([-(j + 1)]) * values[j] for j in range(b.strands)]
    relators = tuple(r for r in relators[:-1])
    names = tuple(f"x{j + 1}" for j in range(b.strands))
    return Presentation(
        names,
        relators,
        tuple([1] * b.strands),
        BOUNDARY_TORI,
        label or str(b),
        meridional=b.components() == 1,
        source=b,
    )


def braid_longitude(b: BraidWord, start: int = 1) -> Word:
    """Zero-framed longitude of the closure component through strand ``start``.

    Follows the strand through the braid (as many passes as the component
    needs), prepending ``o^e`` for every crossing it passes under, where ``o``
    is the over-strand value and ``e`` the crossing sign; the blackboard
    framing is then corrected by the meridian power ``-sum(e)``.
    """
    pos = start - 1
    w = Word()
    total = 0
    while True:
        values = [Word([j + 1]) for j in range(b.strands)]
        for a in b.letters:
            i = abs(a) - 1
            u, v = values[i], values[i + 1]
            if a > 0 and pos == i + 1:
                w = u * w
                total += 1
                pos = i
            elif a < 0 and pos == i:
                w = v.inverse() * w
                total -= 1
                pos = i + 1
            elif pos in (i, i + 1):
                pos = i + 1 if pos == i else i
            _artin_step(values, a, Word.__mul__, Word.inverse)
        if pos == start - 1:
            break
    return w * Word.gen(start, -total)


def braid_to_wirtinger(b: BraidWord) -> tuple[Presentation, list[int]]:
    """Arc-generator presentation of the closure plus the map strand j -> arc generator.

    Used for homomorphism search: every crossing gives a relation
    ``new = o^e old o^-e`` so images propagate arc by arc.
    """
    n = b.strands
    parent: list[int] = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    current = list(range(n))
    rels: list[tuple[int, int, int, int]] = []  # new, over, old, sign
    for a in b.letters:
        i = abs(a) - 1
        new = len(parent)
        parent.append(new)
        if a > 0:
            over, old = current[i], current[i + 1]
            rels.append((new, over, old, 1))
            current[i], current[i + 1] = new, over
        else:
            over, old = current[i + 1], current[i]
            rels.append((new, over, old, -1))
            current[i], current[i + 1] = over, new
    for j in range(n):
        ra, rb = find(current[j]), find(j)
        if ra != rb:
            lo, hi = min(ra, rb), max(ra, rb)
            parent[hi] = lo
    classes: dict[int, int] = {}
    for x in range(len(parent)):
        r = find(x)
        if r not in classes:
            classes[r] = len(classes) + 1
    gen_of = [classes[find(x)] for x in range(len(parent))]
    relators = []
    for new, over, old, sign in rels:
        o = Word([gen_of[over]])
        rel = Word([-gen_of[new]]) * Word([gen_of[old]]).conjugate_by(o if sign > 0 else o.inverse())
        if rel.letters:
            relators.append(rel)
    names = tuple(f"a{j}" for j in range(1, len(classes) + 1))
    pres = Presentation(names, tuple(relators), tuple([1] * len(names)), BOUNDARY_TORI, f"wirtinger({b})", meridional=b.components() == 1)
    return pres, [gen_of[j] for j in range(n)]


# ---------------------------------------------------------------------------
# surgery


def zero_surgery(p: Presentation, longitude: Word) -> Presentation:
    """Fill along the zero-framed longitude: append it as a relator, kind becomes closed."""
    if p.phi is None:
        p = derive_phi(p)
    if longitude.max_generator() > p.num_generators:
        raise PresentationError("longitude references an undeclared generator")
    if longitude.weight(p.phi) != 0:
        raise PresentationError("phi(longitude) != 0: not the zero-framed curve")
    return replace(
        p,
        relators=p.relators + ((longitude,) if longitude.letters else ()),
        kind=CLOSED,
        label=(p.label + " [0-surgery]").strip(),
    )
