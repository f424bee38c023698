"""Homomorphisms to symmetric groups and their matrix realisations.

Permutations are tuples ``s`` of 0-based images, composed right to left:
``(s*t)(x) = s(t(x))``.  A word ``g1 g2 ... gm`` is sent to the product
``h(g1) h(g2) ... h(gm)``, which matches the matrix product of permutation
matrices ``P_s e_i = e_{s(i)}``.
"""
from __future__ import annotations

import re
import time
from dataclasses import dataclass, field
from itertools import permutations
from typing import Iterator, Sequence

from .algebra.fields import Field
from .algebra.matrix import mat_inverse, mat_mul, mat_transpose
from .fpgroup import BraidWord, Presentation, PresentationError, Word, braid_to_wirtinger

Perm = tuple[int, ...]

TRIVIAL = "trivial"
PERMUTATION = "permutation"
STANDARD = "standard"
FLAVORS = (TRIVIAL, PERMUTATION, STANDARD)
_FLAVOR_ALIASES = {"trivial": TRIVIAL, "perm": PERMUTATION, "permutation": PERMUTATION, "std": STANDARD, "standard": STANDARD}


def flavor_name(text: str) -> str:
    try:
        return _FLAVOR_ALIASES[text.lower()]
    except KeyError:
        raise ValueError(f"unknown flavor {text!r}") from None


# ---------------------------------------------------------------------------
# permutations


def compose(s: Perm, t: Perm) -> Perm:
    return tuple(s[i] for i in t)


def perm_inverse(s: Perm) -> Perm:
    out = [0] * len(s)
    for i, j in enumerate(s):
        out[j] = i
    return tuple(out)


def perm_identity(k: int) -> Perm:
    return tuple(range(k))


def cycle_type(s: Perm) -> tuple[int, ...]:
    seen = [False] * len(s)
    lengths = []
    for i in range(len(s)):
        if not seen[i]:
            n = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = s[j]
                n += 1
            lengths.append(n)
    return tuple(sorted(lengths, reverse=True))


def format_cycles(s: Perm) -> str:
    """Cycle notation with 1-based points, e.g. ``(1 4 2)``; identity is ``()``."""
    seen = [False] * len(s)
    parts = []
    for i in range(len(s)):
        if seen[i] or s[i] == i:
            seen[i] = True
            continue
        cyc = []
        j = i
        while not seen[j]:
            seen[j] = True
            cyc.append(str(j + 1))
            j = s[j]
        parts.append("(" + " ".join(cyc) + ")")
    return "".join(parts) or "()"


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, k: int) -> Perm:
    """Parse ``(1 4 2)(3 5)``; compact single-digit cycles like ``(142)`` are accepted when k < 10."""
    text = text.strip()
    rest = _CYCLE_RE.sub("", text).strip()
    if rest:
        raise ValueError(f"bad cycle notation {text!r}")
    img = list(range(k))
    used: set[int] = set()
    for body in _CYCLE_RE.findall(text):
        body = body.strip()
        if not body:
            continue
        if " " in body or "," in body:
            pts = [int(x) for x in re.split(r"[\s,]+", body)]
        elif k < 10:
            pts = [int(c) for c in body]
        else:
            pts = [int(body)]
        for p in pts:
            if not 1 <= p <= k:
                raise ValueError(f"point {p} out of range 1..{k}")
            if p in used:
                raise ValueError(f"point {p} repeated in {text!r}")
            used.add(p)
        for a, b in zip(pts, pts[1:] + pts[:1]):
            img[a - 1] = b - 1
    return tuple(img)


def evaluate_perm_word(images: Sequence[Perm], w: Word, k: int) -> Perm:
    acc = list(range(k))
    # right-to-left action: apply the last letter first
    for a in reversed(w.letters):
        s = images[a - 1] if a > 0 else perm_inverse(images[-a - 1])
        acc = [s[x] for x in acc]
    return tuple(acc)


def partitions(k: int, largest: int | None = None) -> list[tuple[int, ...]]:
    largest = k if largest is None else largest
    if k == 0:
        return [()]
    out = []
    for first in range(min(k, largest), 0, -1):
        for rest in partitions(k - first, first):
            out.append((first,) + rest)
    return out


def perms_of_type(k: int, ctype: tuple[int, ...]) -> list[Perm]:
    return sorted(s for s in permutations(range(k)) if cycle_type(s) == ctype)


def parse_cycle_type(label: str | Sequence[int], k: int) -> tuple[int, ...]:
    """``"3"`` (a 3-cycle in S_k), ``"3,1,1"`` or a tuple; padded with fixed points."""
    if isinstance(label, str):
        parts = [int(x) for x in re.split(r"[\s,]+", label.strip()) if x]
    else:
        parts = list(label)
    if sum(parts) > k or any(p < 1 for p in parts):
        raise ValueError(f"cycle type {label!r} does not fit S_{k}")
    parts += [1] * (k - sum(parts))
    return tuple(sorted(parts, reverse=True))


# ---------------------------------------------------------------------------
# homomorphisms


@dataclass(frozen=True)
class PermHom:
    """Images of the generators in S_k."""

    degree: int
    images: tuple[Perm, ...]

    def __post_init__(self):
        for s in self.images:
            if len(s) != self.degree or sorted(s) != list(range(self.degree)):
                raise ValueError(f"{s} is not a permutation of {self.degree} points")

    def evaluate(self, w: Word) -> Perm:
        return evaluate_perm_word(self.images, w, self.degree)

    def satisfies(self, p: Presentation) -> bool:
        ident = perm_identity(self.degree)
        return len(self.images) == p.num_generators and all(self.evaluate(r) == ident for r in p.relators)

    def is_transitive(self) -> bool:
        reached = {0}
        frontier = [0]
        while frontier:
            x = frontier.pop()
            for s in self.images:
                y = s[x]
                if y not in reached:
                    reached.add(y)
                    frontier.append(y)
        return len(reached) == self.degree

    def is_meridional(self) -> bool:
        return len({cycle_type(s) for s in self.images}) <= 1

    def conjugate(self, c: Perm) -> "PermHom":
        ci = perm_inverse(c)
        return PermHom(self.degree, tuple(compose(compose(c, s), ci) for s in self.images))

    def format(self, names: Sequence[str]) -> str:
        return ", ".join(f"{nm}: {format_cycles(s)}" for nm, s in zip(names, self.images))


@dataclass(frozen=True)
class SearchOptions:
    """Knobs for :func:`search_homs`.

    ``cycle_type`` restricts every generator image to one conjugacy class;
    ``meridional`` (default: taken from the presentation) requires all images
    to share some class.  ``budget`` is wall-clock seconds.
    """

    cycle_type: tuple[int, ...] | str | None = None
    transitive_only: bool = True
    dedup_conjugacy: bool = True
    budget: float | None = None
    meridional: bool | None = None
    limit: int | None = None

    def __post_init__(self):
        if self.budget is not None and self.budget <= 0:
            raise ValueError("budget must be positive")


class _Relator:
    __slots__ = ("letters", "gens")

    def __init__(self, w: Word):
        self.letters = w.letters
        self.gens = {abs(a) - 1 for a in w.letters}


def _eval_letters(letters, images, k) -> Perm:
    acc = list(range(k))
    for a in reversed(letters):
        if a > 0:
            s = images[a - 1]
            acc = [s[x] for x in acc]
        else:
            s = images[-a - 1]
            inv = [0] * k
            for i, j in enumerate(s):
                inv[j] = i
            acc = [inv[x] for x in acc]
    return tuple(acc)


class HomSearch:
    """Lazy backtracking enumeration of homomorphisms ``pi -> S_k``.

    Iterating yields :class:`PermHom` values in lexicographic order of the
    images of the branching generators (see :func:`branching_order`), class
    by class for the first generator.
    After iteration ``complete`` tells whether the search space was
    exhausted or the budget / limit cut it short.
    """

    def __init__(self, p: Presentation, k: int, opts: SearchOptions | None = None):
        if k < 1:
            raise ValueError("k must be >= 1")
        self.presentation = p
        self.k = k
        self.opts = opts or SearchOptions()
        self.complete = False
        self.count = 0
        self.nodes = 0
        self._deadline = None

    # strategy: braid presentations are searched through their arc presentation,
    # whose conjugation relators let single assignments propagate.
    def _target(self) -> tuple[Presentation, list[int] | None]:
        p = self.presentation
        if isinstance(p.source, BraidWord) and p.meridional:
            wp, top = braid_to_wirtinger(p.source)
            return wp, top
        return p, None

    def _classes(self, meridional: bool) -> list[tuple[int, ...] | None]:
        ct = self.opts.cycle_type
        if ct is not None:
            return [parse_cycle_type(ct, self.k)]
        if meridional:
            return partitions(self.k)
        return [None]

    def __iter__(self) -> Iterator[PermHom]:
        p = self.presentation
        target, top = self._target()
        meridional = self.opts.meridional if self.opts.meridional is not None else target.meridional
        if self.opts.budget is not None:
            self._deadline = time.monotonic() + self.opts.budget
        self.complete = False
        self.count = 0
        for ctype in self._classes(meridional):
            for images in self._search(target, ctype):
                if top is not None:
                    images = tuple(images[j - 1] for j in top)
                h = PermHom(self.k, images)
                if not h.satisfies(p):
                    if top is None:
                        raise ArithmeticError("search produced a tuple violating a relator")
                    # extra relators (e.g. a surgery longitude) are not in the arc presentation
                    continue
                if self.opts.transitive_only and not h.is_transitive():
                    continue
                self.count += 1
                yield h
                if self.opts.limit is not None and self.count >= self.opts.limit:
                    return
            if self._expired():
                return
        self.complete = True

    def _expired(self) -> bool:
        return self._deadline is not None and time.monotonic() > self._deadline

    def _search(self, p: Presentation, ctype) -> Iterator[tuple[Perm, ...]]:
        k = self.k
        n = p.num_generators
        if ctype is None:
            cands = sorted(permutations(range(k)))
            first_choices = [min(perms_of_type(k, c)) for c in partitions(k)]
        else:
            cands = perms_of_type(k, ctype)
            first_choices = [cands[0]]
        if not self.opts.dedup_conjugacy:
            first_choices = cands
        cand_set = set(cands)
        rels = [_Relator(r) for r in p.relators]
        by_gen: list[list[_Relator]] = [[] for _ in range(n)]
        for r in rels:
            for g in r.gens:
                by_gen[g].append(r)
        ident = perm_identity(k)
        images: list[Perm | None] = [None] * n

        def propagate(start: int) -> list[int] | None:
            """Assign forced generators; return the list assigned (for undo) or None on conflict."""
            assigned = []
            queue = [start]
            while queue:
                g = queue.pop()
                for r in by_gen[g]:
                    missing = [x for x in r.gens if images[x] is None]
                    if not missing:
                        if _eval_letters(r.letters, images, k) != ident:
                            for x in assigned:
                                images[x] = None
                            return None
                        continue
                    if len(missing) != 1:
                        continue
                    x = missing[0]
                    pos = [i for i, a in enumerate(r.letters) if abs(a) - 1 == x]
                    if len(pos) != 1:
                        continue
                    i = pos[0]
                    u = _eval_letters(r.letters[:i], images, k)
                    v = _eval_letters(r.letters[i + 1:], images, k)
                    # u x^e v = 1
                    val = perm_inverse(compose(v, u)) if r.letters[i] > 0 else compose(v, u)
                    if val not in cand_set:
                        for y in assigned:
                            images[y] = None
                        return None
                    images[x] = val
                    assigned.append(x)
                    queue.append(x)
            return assigned

        centralizer_cache: dict[Perm, list[Perm]] = {}

        def centralizer(s: Perm) -> list[Perm]:
            if s not in centralizer_cache:
                centralizer_cache[s] = [c for c in permutations(range(k)) if compose(c, s) == compose(s, c) and c != ident]
            return centralizer_cache[s]

        def canonical(tup: tuple[Perm, ...]) -> bool:
            for c in centralizer(tup[0]):
                ci = perm_inverse(c)
                for s in tup[1:]:
                    t = compose(compose(c, s), ci)
                    if t < s:
                        return False
                    if t > s:
                        break
            return True

        order = branching_order(p)

        def rec() -> Iterator[tuple[Perm, ...]]:
            self.nodes += 1
            if self.nodes % 256 == 0 and self._expired():
                return
            g = next((x for x in order if images[x] is None), None)
            if g is None:
                tup = tuple(images)  # type: ignore[arg-type]
                if not self.opts.dedup_conjugacy or canonical(tup):
                    yield tup
                return
            choices = first_choices if g == 0 else cands
            for s in choices:
                images[g] = s
                undo = propagate(g)
                if undo is not None:
                    yield from rec()
                    for x in undo:
                        images[x] = None
                images[g] = None
                if self._expired():
                    return

        if n == 0:
            yield ()
            return
        yield from rec()


def _closure(rels: list[_Relator], known: set[int]) -> set[int]:
    known = set(known)
    changed = True
    while changed:
        changed = False
        for r in rels:
            missing = r.gens - known
            if len(missing) == 1:
                (x,) = missing
                if sum(1 for a in r.letters if abs(a) - 1 == x) == 1:
                    known.add(x)
                    changed = True
    return known


def branching_order(p: Presentation) -> list[int]:
    """Generators to branch on, greedily chosen so that each choice forces the most others.

    Generator 0 always comes first (its image is fixed up to conjugacy); the
    order is a pure function of the presentation, so enumeration is
    reproducible.
    """
    n = p.num_generators
    if n == 0:
        return []
    rels = [_Relator(r) for r in p.relators]
    order = [0]
    known = _closure(rels, {0})
    while len(known) < n:
        best, best_size = None, -1
        for g in range(n):
            if g in known:
                continue
            size = len(_closure(rels, known | {g}))
            if size > best_size:
                best, best_size = g, size
        order.append(best)
        known = _closure(rels, known | {best})
    return order


def search_homs(p: Presentation, k: int, opts: SearchOptions | None = None) -> HomSearch:
    """Homomorphisms ``pi_1 -> S_k`` satisfying ``opts``; iterate the result lazily."""
    return HomSearch(p, k, opts)


# ---------------------------------------------------------------------------
# matrix representations


def _perm_matrix(s: Perm) -> list[list[int]]:
    k = len(s)
    m = [[0] * k for _ in range(k)]
    for j in range(k):
        m[s[j]][j] = 1
    return m


def _standard_matrix(s: Perm) -> list[list[int]]:
    """Action on the sum-zero subspace in the basis f_j = e_j - e_{j+1}."""
    k = len(s)
    m = [[0] * (k - 1) for _ in range(k - 1)]
    for j in range(k - 1):
        a, b = s[j], s[j + 1]
        # e_a - e_b has f-coordinates c_i = [a <= i] - [b <= i]
        for i in range(k - 1):
            m[i][j] = (1 if a <= i else 0) - (1 if b <= i else 0)
    return m


@dataclass(frozen=True)
class Representation:
    """Matrices over ``field`` for each generator; entries are reduced field values."""

    field: Field
    dim: int
    matrices: tuple[tuple[tuple, ...], ...]
    flavor: str = "custom"
    hom: PermHom | None = None
    inverses: tuple = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        red = self.field.reduce
        mats = tuple(tuple(tuple(red(x) for x in row) for row in m) for m in self.matrices)
        for m in mats:
            if len(m) != self.dim or any(len(r) != self.dim for r in m):
                raise ValueError("matrix shape does not match dim")
        object.__setattr__(self, "matrices", mats)
        try:
            invs = tuple(tuple(tuple(r) for r in mat_inverse(self.field, [list(r) for r in m])) for m in mats)
        except ValueError:
            raise ValueError("representation matrices must be invertible") from None
        object.__setattr__(self, "inverses", invs)

    @property
    def num_generators(self) -> int:
        return len(self.matrices)

    def letter_matrix(self, a: int):
        return self.matrices[a - 1] if a > 0 else self.inverses[-a - 1]

    def evaluate(self, w: Word) -> list[list]:
        acc = [[1 if i == j else 0 for j in range(self.dim)] for i in range(self.dim)]
        for a in w.letters:
            acc = mat_mul(self.field, acc, [list(r) for r in self.letter_matrix(a)])
        return acc

    def satisfies(self, p: Presentation) -> bool:
        ident = [[1 if i == j else 0 for j in range(self.dim)] for i in range(self.dim)]
        return self.num_generators == p.num_generators and all(self.evaluate(r) == ident for r in p.relators)

    def over(self, field: Field) -> "Representation":
        """Same integer matrices read in another field (only for integral reps)."""
        return Representation(field, self.dim, self.matrices, self.flavor, self.hom)


def build_representation(h: PermHom | None, flavor: str, field: Field, num_generators: int | None = None) -> Representation:
    """Trivial (1x1 identity), permutation (k x k) or standard (V_{k-1}) matrices."""
    flavor = flavor_name(flavor)
    if flavor == TRIVIAL:
        n = num_generators if h is None else len(h.images)
        if n is None:
            raise ValueError("trivial representation needs the number of generators")
        return Representation(field, 1, tuple(((1,),) for _ in range(n)), TRIVIAL, h)
    if h is None:
        raise ValueError(f"{flavor} representation needs a homomorphism")
    if flavor == PERMUTATION:
        mats = tuple(_perm_matrix(s) for s in h.images)
        return Representation(field, h.degree, mats, PERMUTATION, h)
    if h.degree < 2:
        raise ValueError("standard representation needs k >= 2")
    mats = tuple(_standard_matrix(s) for s in h.images)
    return Representation(field, h.degree - 1, mats, STANDARD, h)


def adjoint(r: Representation) -> Representation:
    """``g -> transpose(alpha(g^-1))``."""
    mats = tuple(tuple(tuple(x) for x in mat_transpose([list(row) for row in inv])) for inv in r.inverses)
    flavor = r.flavor if r.flavor in (TRIVIAL, PERMUTATION) else f"adjoint-{r.flavor}"
    if r.flavor.startswith("adjoint-"):
        flavor = r.flavor[len("adjoint-"):]
    return Representation(r.field, r.dim, mats, flavor, r.hom)


def hom_from_mapping(p: Presentation, k: int, images: dict[str, Perm]) -> PermHom:
    missing = [g for g in p.generators if g not in images]
    if missing:
        raise PresentationError(f"hom does not assign generators {missing}")
    extra = [g for g in images if g not in p.generators]
    if extra:
        raise PresentationError(f"hom assigns unknown generators {extra}")
    return PermHom(k, tuple(images[g] for g in p.generators))
