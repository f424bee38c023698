"""Smith normal form over Euclidean rings (Z and F[t^{+-1}]) and derived module orders.

The core routine works on lists of lists and is shared by the integer and the
Laurent-polynomial front ends; a small ring adaptor supplies the Euclidean
norm, division with remainder and the unit normalisation.
"""
from __future__ import annotations

from dataclasses import dataclass

from .fields import Field
from .laurent import LaurentPoly
from .matrix import PolyMatrix


class ContractError(ValueError):
    """A caller violated a documented precondition."""


class _IntRing:
    zero = 0
    one = 1

    @staticmethod
    def norm(x: int) -> int:
        return abs(x)

    @staticmethod
    def divmod(a: int, b: int):
        return divmod(a, b)

    @staticmethod
    def is_unit(x: int) -> bool:
        return abs(x) == 1

    @staticmethod
    def normalizer(x: int) -> int:
        return -1 if x < 0 else 1

    reduce = None


class _LaurentRing:
    def __init__(self, field: Field):
        self.zero = LaurentPoly.zero(field)
        self.one = LaurentPoly.one(field)

    @staticmethod
    def norm(x: LaurentPoly) -> int:
        return len(x.coeffs) - 1

    @staticmethod
    def divmod(a: LaurentPoly, b: LaurentPoly):
        return a.divmod(b)

    @staticmethod
    def is_unit(x: LaurentPoly) -> bool:
        return len(x.coeffs) == 1

    @staticmethod
    def normalizer(x: LaurentPoly) -> LaurentPoly:
        return x.unit_part().unit_inverse()

    reduce = None


def _poly_divmod(a: LaurentPoly, b: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    """Division in F[t] for polynomials (no negative exponents): ``deg r < deg b``."""
    field = a.field
    if not a.coeffs:
        return a, a
    da, db = a.max_exp, b.max_exp
    if da < db:
        return LaurentPoly.zero(field), a
    red, inv = field.reduce, field.inv(b.coeffs[-1])
    rem = [0] * a.shift + list(a.coeffs)
    bb = [0] * b.shift + list(b.coeffs)
    q = [0] * (da - db + 1)
    for i in range(da - db, -1, -1):
        c = red(rem[i + db] * inv)
        if c:
            q[i] = c
            for j in range(b.shift, db + 1):
                if bb[j]:
                    rem[i + j] = red(rem[i + j] - c * bb[j])
    return LaurentPoly.from_int_coeffs(field, q), LaurentPoly.from_int_coeffs(field, rem[:db])


def _row_shifts(rows: list[list[LaurentPoly]]) -> list[int]:
    """Lowest exponent of each row (0 for zero rows)."""
    return [min((e.shift for e in r if e.coeffs), default=0) for r in rows]


class _QuotientRing(_LaurentRing):
    """F[t^{+-1}] / (modulus): representatives are remainders of span below deg(modulus)."""

    def __init__(self, field: Field, modulus: LaurentPoly):
        super().__init__(field)
        self.modulus = modulus

    def reduce(self, x: LaurentPoly) -> LaurentPoly:
        if len(x.coeffs) < len(self.modulus.coeffs):
            return x
        return x.divmod(self.modulus)[1]


def _identity(ring, n):
    return [[ring.one if i == j else ring.zero for j in range(n)] for i in range(n)]


def _smith(A: list[list], nrows: int, ncols: int, ring, track: bool):
    """In-place Smith reduction. Returns (U, V, rank) with U A_in V = A_out."""
    U = _identity(ring, nrows) if track else None
    V = _identity(ring, ncols) if track else None
    norm, rdivmod, red = ring.norm, ring.divmod, ring.reduce

    def add_row(dst, src, q, start):
        # row_dst -= q * row_src
        rs, rd = A[src], A[dst]
        for j in range(start, ncols):
            a = rs[j]
            if a:
                rd[j] = rd[j] - q * a
                if red is not None:
                    rd[j] = red(rd[j])
        if track:
            us, ud = U[src], U[dst]
            for j in range(nrows):
                a = us[j]
                if a:
                    ud[j] = ud[j] - q * a

    def add_col(dst, src, q, start):
        for i in range(start, nrows):
            row = A[i]
            a = row[src]
            if a:
                row[dst] = row[dst] - q * a
                if red is not None:
                    row[dst] = red(row[dst])
        if track:
            for row in V:
                a = row[src]
                if a:
                    row[dst] = row[dst] - q * a

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        if track:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        if track:
            for row in V:
                row[i], row[j] = row[j], row[i]

    rank = 0
    for s in range(min(nrows, ncols)):
        best = None
        best_norm = None
        for i in range(s, nrows):
            row = A[i]
            for j in range(s, ncols):
                e = row[j]
                if e:
                    ne = norm(e)
                    if best is None or ne < best_norm:
                        best, best_norm = (i, j), ne
                        if ne == 0:
                            break
            if best_norm == 0:
                break
        if best is None:
            break
        if best[0] != s:
            swap_rows(s, best[0])
        if best[1] != s:
            swap_cols(s, best[1])
        while True:
            clean = True
            for i in range(s + 1, nrows):
                e = A[i][s]
                if e:
                    q, _ = rdivmod(e, A[s][s])
                    add_row(i, s, q, s)
                    if A[i][s]:
                        swap_rows(i, s)
                        clean = False
            for j in range(s + 1, ncols):
                e = A[s][j]
                if e:
                    q, _ = rdivmod(e, A[s][s])
                    add_col(j, s, q, s)
                    if A[s][j]:
                        swap_cols(j, s)
                        clean = False
            if not clean:
                continue
            p = A[s][s]
            if ring.is_unit(p):
                break
            bad = None
            for i in range(s + 1, nrows):
                for j in range(s + 1, ncols):
                    e = A[i][j]
                    if e and rdivmod(e, p)[1]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            # row_s += row_bad brings a non-multiple into the pivot row
            add_row(s, bad, -ring.one, s)
        u = ring.normalizer(A[s][s])
        if u != ring.one:
            A[s][s] = A[s][s] * u
            if red is not None:
                A[s][s] = red(A[s][s])
            if track:
                U[s] = [x * u for x in U[s]]
        rank += 1
    return U, V, rank


# ---------------------------------------------------------------------------
# integers


@dataclass(frozen=True)
class IntSmith:
    U: list[list[int]]
    D: list[list[int]]
    V: list[list[int]]
    divisors: list[int]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.divisors if d)


def int_smith(A: list[list[int]], cols: int | None = None) -> IntSmith:
    """Integer Smith form ``U A V = D`` with unimodular ``U``, ``V``."""
    nrows = len(A)
    ncols = cols if cols is not None else (len(A[0]) if A else 0)
    D = [list(map(int, r)) for r in A]
    U, V, _ = _smith(D, nrows, ncols, _IntRing, True)
    divisors = [D[i][i] for i in range(min(nrows, ncols))]
    return IntSmith(U, D, V, divisors)


# ---------------------------------------------------------------------------
# Laurent polynomials


@dataclass(frozen=True)
class SmithDecomposition:
    U: PolyMatrix
    D: PolyMatrix
    V: PolyMatrix
    divisors: tuple[LaurentPoly, ...]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.divisors if d)


def _poly_ext_gcd(a: LaurentPoly, b: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly, LaurentPoly]:
    """``(g, x, y)`` with ``x a + y b = g`` monic in F[t]; inputs are polynomials, not both zero."""
    field = a.field
    one, zero = LaurentPoly.one(field), LaurentPoly.zero(field)
    r0, r1, x0, x1, y0, y1 = a, b, one, zero, zero, one
    while r1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    c = field.inv(r0.coeffs[-1])
    return r0 * c, x0 * c, y0 * c


class _Tracked:
    """Row-operation workspace: ``rows`` with companion ``trans`` rows (``trans @ input == rows``)."""

    def __init__(self, rows, trans):
        self.rows, self.trans = rows, trans

    def combine(self, i, j, a, b, c, d):
        """``(row_i, row_j) <- (a row_i + b row_j, c row_i + d row_j)``."""
        for M in (self.rows, self.trans):
            ri, rj = M[i], M[j]
            M[i] = [a * x + b * y for x, y in zip(ri, rj)]
            M[j] = [c * x + d * y for x, y in zip(ri, rj)]

    def sub(self, i, j, q):
        """``row_i -= q row_j``."""
        for M in (self.rows, self.trans):
            ri, rj = M[i], M[j]
            M[i] = [x - q * y if y else x for x, y in zip(ri, rj)]

    def scale(self, i, u):
        for M in (self.rows, self.trans):
            M[i] = [x * u for x in M[i]]


def _lead_col(row) -> int | None:
    for j, e in enumerate(row):
        if e:
            return j
    return None


def _hermite(ws: _Tracked) -> None:
    """Row Hermite form over F[t] in place, inserting one row at a time.

    Pivots are monic and the entries above each pivot have smaller degree,
    so the partial basis is unique and its degrees stay bounded by those of
    the leading minors; this is what keeps the growth polynomial.
    """
    n = len(ws.rows)
    pivots: dict[int, int] = {}  # column -> row index
    order = []
    for i in range(n):
        while True:
            c = _lead_col(ws.rows[i])
            if c is None:
                break
            if c not in pivots:
                u = ws.rows[i][c].field.inv(ws.rows[i][c].coeffs[-1])
                if u != 1:
                    ws.scale(i, u)
                pivots[c] = i
                break
            h = pivots[c]
            x, y = ws.rows[h][c], ws.rows[i][c]
            g, s, t = _poly_ext_gcd(x, y)
            a, _ = _poly_divmod(x, g)
            b, _ = _poly_divmod(y, g)
            # [[s, t], [-b, a]] has determinant s a + t b = 1
            ws.combine(h, i, s, t, -b, a)
        # keep every pivot column reduced
        for c in sorted(pivots):
            h = pivots[c]
            p = ws.rows[h][c]
            for c2, h2 in pivots.items():
                if c2 < c:
                    e = ws.rows[h2][c]
                    if e and e.max_exp >= p.max_exp:
                        ws.sub(h2, h, _poly_divmod(e, p)[0])
    # echelon order: pivot rows by column, then the rest
    for c in sorted(pivots):
        order.append(pivots[c])
    order += [i for i in range(n) if i not in order]
    ws.rows[:] = [ws.rows[i] for i in order]
    ws.trans[:] = [ws.trans[i] for i in order]


def _transpose(M, ncols):
    return [list(c) for c in zip(*M)] if M else [[] for _ in range(ncols)]


def _is_diagonal_prefix(M) -> bool:
    return all(not e for i, row in enumerate(M) for j, e in enumerate(row) if i != j)


def smith_normal_form(A: PolyMatrix) -> SmithDecomposition:
    """``U A V = D`` over F[t^{+-1}]; divisors are canonical and form a divisibility chain.

    Alternates row and column Hermite forms until the matrix is diagonal,
    then repairs divisibility with 2x2 gcd/lcm moves.  Transforms are kept,
    so this is meant for modest sizes; :func:`smith_divisors` is the fast path.
    """
    f = A.field
    m, n = A.rows, A.cols
    one, zero = LaurentPoly.one(f), LaurentPoly.zero(f)

    def ident(k):
        return [[one if i == j else zero for j in range(k)] for i in range(k)]

    rows = A.to_lists()
    shifts = _row_shifts(rows)
    rows = [[e.shifted(-s) for e in row] for row, s in zip(rows, shifts)]
    U = [[one.shifted(-shifts[i]) if i == j else zero for j in range(m)] for i in range(m)]
    Vt = ident(n)  # transpose of V, so column operations are row operations here

    while True:
        ws = _Tracked(rows, U)
        _hermite(ws)
        rows, U = ws.rows, ws.trans
        if _is_diagonal_prefix(rows):
            break
        cols = _transpose(rows, n)
        ws = _Tracked(cols, Vt)
        _hermite(ws)
        rows, Vt = _transpose(ws.rows, m), ws.trans
        if _is_diagonal_prefix(rows):
            break

    r = sum(1 for i in range(min(m, n)) if rows[i][i])
    row_ws = _Tracked(rows, U)
    for i in range(r):
        for j in range(i + 1, r):
            a, b = rows[i][i], rows[j][j]
            if _poly_divmod(b, a)[1]:
                g, s, t = _poly_ext_gcd(a, b)
                # diag(a, b) -> diag(g, ab/g):
                # add column j to column i, Bezout on the rows, then clear (i, j)
                col_ws = _Tracked(_transpose(rows, n), Vt)
                col_ws.sub(i, j, -one)
                rows, Vt = _transpose(col_ws.rows, m), col_ws.trans
                row_ws = _Tracked(rows, U)
                bg = _poly_divmod(b, g)[0]
                ag = _poly_divmod(a, g)[0]
                row_ws.combine(i, j, s, t, -bg, ag)
                rows, U = row_ws.rows, row_ws.trans
                col_ws = _Tracked(_transpose(rows, n), Vt)
                col_ws.sub(j, i, _poly_divmod(rows[i][j], g)[0])
                rows, Vt = _transpose(col_ws.rows, m), col_ws.trans
                if rows[j][j].coeffs and rows[j][j].coeffs[-1] != 1:
                    row_ws = _Tracked(rows, U)
                    row_ws.scale(j, f.inv(rows[j][j].coeffs[-1]))
                    rows, U = row_ws.rows, row_ws.trans
    # Laurent-canonical diagonal: strip powers of t
    for i in range(r):
        u = rows[i][i].unit_part().unit_inverse()
        if u != one:
            row_ws = _Tracked(rows, U)
            row_ws.scale(i, u)
            rows, U = row_ws.rows, row_ws.trans
    divisors = tuple(rows[i][i] for i in range(min(m, n)))
    return SmithDecomposition(
        PolyMatrix(f, m, m, U),
        PolyMatrix(f, m, n, rows),
        PolyMatrix(f, n, n, _transpose(Vt, n)),
        divisors,
    )


def _bareiss(M: list[list], nrows: int, ncols: int, field: Field) -> tuple[int, LaurentPoly, int]:
    """Fraction-free elimination in place; returns ``(rank, minor, sign)``.

    ``minor`` is ``sign`` times a nonzero ``rank x rank`` minor of the input
    (the leading one after the recorded row and column swaps).  Entries stay
    minors of the input, so degrees grow at most linearly.
    """
    prev = LaurentPoly.one(field)
    sign = 1
    norm = _LaurentRing.norm
    for k in range(min(nrows, ncols)):
        best, best_norm = None, None
        for i in range(k, nrows):
            row = M[i]
            for j in range(k, ncols):
                e = row[j]
                if e and (best is None or norm(e) < best_norm):
                    best, best_norm = (i, j), norm(e)
        if best is None:
            return k, prev, sign
        i, j = best
        if i != k:
            M[k], M[i] = M[i], M[k]
            sign = -sign
        if j != k:
            for row in M:
                row[k], row[j] = row[j], row[k]
            sign = -sign
        pk = M[k]
        p = pk[k]
        for i in range(k + 1, nrows):
            ri = M[i]
            a = ri[k]
            for j in range(k + 1, ncols):
                v = p * ri[j]
                if a and pk[j]:
                    v = v - a * pk[j]
                ri[j] = v.exact_div(prev) if v else v
            ri[k] = LaurentPoly.zero(field)
        prev = p
    return min(nrows, ncols), prev, sign


def rank_and_minor(A: PolyMatrix) -> tuple[int, LaurentPoly]:
    """Rank over F(t) and a nonzero maximal minor (normalized; 1 when the rank is 0)."""
    if not A.rows or not A.cols:
        return 0, LaurentPoly.one(A.field)
    rank, minor, _ = _bareiss(A.to_lists(), A.rows, A.cols, A.field)
    return rank, minor.normalize()


def smith_divisors(A: PolyMatrix) -> list[LaurentPoly]:
    """Nonzero elementary divisors of ``A`` (no transforms kept).

    Plain Euclidean reduction inflates degrees exponentially on larger
    matrices, so the reduction runs modulo a nonzero maximal minor ``D``:
    every nonzero divisor divides ``D`` and is recovered as ``gcd(e_i, D)``.
    """
    rank, D = rank_and_minor(A)
    field = A.field
    if rank == 0:
        return []
    one = LaurentPoly.one(field)
    if D.degree() == 0:
        return [one] * rank
    ring = _QuotientRing(field, D)
    M = [[ring.reduce(e) if e else e for e in row] for row in A.to_lists()]
    _, _, r = _smith(M, A.rows, A.cols, ring, False)
    divs = [M[i][i].gcd(D) if M[i][i] else D for i in range(rank)]
    return divs


def _product(field: Field, polys) -> LaurentPoly:
    out = LaurentPoly.one(field)
    for p in polys:
        out = out * p
    return out.normalize()


@dataclass(frozen=True)
class ModuleOrder:
    """Order data of a finitely presented F[t^{+-1}]-module."""

    order: LaurentPoly
    torsion: LaurentPoly
    free_rank: int
    divisors: tuple[LaurentPoly, ...]


def coker_invariants(A: PolyMatrix, ambient_rank: int) -> ModuleOrder:
    """Module ``F[t^{+-1}]^ambient_rank / (column space of A)``."""
    if A.rows != ambient_rank:
        raise ContractError(f"ambient rank {ambient_rank} does not match {A.rows} rows")
    divs = smith_divisors(A) if A.rows and A.cols else []
    torsion = _product(A.field, divs)
    free_rank = ambient_rank - len(divs)
    order = torsion if free_rank == 0 else LaurentPoly.zero(A.field)
    return ModuleOrder(order, torsion, free_rank, tuple(divs))


def coker_order(A: PolyMatrix, ambient_rank: int) -> LaurentPoly:
    """Order of the cokernel: 0 with positive free rank, else the product of divisors."""
    return coker_invariants(A, ambient_rank).order


def torsion_order(A: PolyMatrix, ambient_rank: int) -> LaurentPoly:
    """Order of the torsion part of the cokernel, regardless of free rank."""
    return coker_invariants(A, ambient_rank).torsion


# ---------------------------------------------------------------------------
# homology of row-vector complexes


def homology_presentation(d_out: PolyMatrix, d_in: PolyMatrix) -> tuple[int, PolyMatrix]:
    """Present ``ker(d_out) / im(d_in)`` for row vectors ``C2 -d_in-> C1 -d_out-> C0``.

    ``d_in`` is ``m x N`` and ``d_out`` is ``N x k`` with ``d_in @ d_out == 0``.
    Row operations bring ``d_out`` to echelon form ``W d_out``; the matching
    change of basis ``d_in W^{-1}`` is applied column-wise on the fly.  The last
    ``N - r`` echelon rows vanish, so those coordinates are a free basis of
    the kernel and the returned ``m x (N - r)`` matrix ``C`` satisfies
    ``ker/im == coker(C^T)``.  Returns ``(r, C)`` with ``r = rank(d_out)``.
    """
    if d_in.cols != d_out.rows:
        raise ContractError("boundary maps are not composable")
    field = d_out.field
    N, k, m = d_out.rows, d_out.cols, d_in.rows
    A = d_out.to_lists()
    B = d_in.to_lists()
    # scale row i of d_out by t^-m_i and column i of d_in by t^m_i so that
    # the elimination stays inside F[t]
    shifts = _row_shifts(A)
    A = [[e.shifted(-m) for e in row] for row, m in zip(A, shifts)]
    B = [[e.shifted(m) for e, m in zip(row, shifts)] for row in B]

    def add_row(dst, src, q, start):
        rs, rd = A[src], A[dst]
        for j in range(start, k):
            if rs[j]:
                rd[j] = rd[j] - q * rs[j]
        # inverse operation on companion columns: col_src += q * col_dst
        for row in B:
            a = row[dst]
            if a:
                row[src] = row[src] + q * a

    def swap(i, j):
        A[i], A[j] = A[j], A[i]
        for row in B:
            row[i], row[j] = row[j], row[i]

    r = 0
    for c in range(k):
        while True:
            best, best_norm = None, None
            for i in range(r, N):
                e = A[i][c]
                if e:
                    ne = e.max_exp
                    if best is None or ne < best_norm:
                        best, best_norm = i, ne
                        if ne == 0:
                            break
            if best is None:
                break
            if best != r:
                swap(r, best)
            p = A[r][c]
            clean = True
            for i in range(r + 1, N):
                e = A[i][c]
                if e:
                    q, rem = _poly_divmod(e, p)
                    add_row(i, r, q, c)
                    if rem:
                        clean = False
            if clean:
                r += 1
                break
    for row in B:
        if any(row[j] for j in range(r)):
            raise ArithmeticError("image of d_in is not contained in ker(d_out)")
    C = PolyMatrix(field, m, N - r, [row[r:] for row in B])
    return r, C


# ---------------------------------------------------------------------------
# determinants


def determinant(A: PolyMatrix) -> LaurentPoly:
    """Exact determinant by fraction-free elimination."""
    if A.rows != A.cols:
        raise ContractError("determinant of a non-square matrix")
    field = A.field
    if A.rows == 0:
        return LaurentPoly.one(field)
    rank, minor, sign = _bareiss(A.to_lists(), A.rows, A.cols, field)
    if rank < A.rows:
        return LaurentPoly.zero(field)
    return minor * sign
