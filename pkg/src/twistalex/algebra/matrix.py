"""Matrices over F[t^{+-1}] and plain matrices over a field."""
from __future__ import annotations

from typing import Sequence

from .fields import Field
from .laurent import LaurentPoly


class PolyMatrix:
    """Immutable rows x cols matrix of Laurent polynomials over one field."""

    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field: Field, rows: int, cols: int, entries: Sequence[Sequence[LaurentPoly]] | None = None):
        self.field = field
        self.rows = rows
        self.cols = cols
        if entries is None:
            z = LaurentPoly.zero(field)
            entries = [[z] * cols for _ in range(rows)]
        if len(entries) != rows or any(len(r) != cols for r in entries):
            raise ValueError(f"entries do not match shape {rows}x{cols}")
        for r in entries:
            for e in r:
                if e.field != field:
                    raise ValueError("all entries must share one coefficient field")
        self.entries = tuple(tuple(r) for r in entries)

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence], cols: int | None = None) -> "PolyMatrix":
        """Rows of LaurentPoly, ints or polynomial strings."""
        conv = []
        for r in rows:
            out = []
            for e in r:
                if isinstance(e, LaurentPoly):
                    out.append(e)
                elif isinstance(e, str):
                    out.append(LaurentPoly.from_string(field, e))
                else:
                    out.append(LaurentPoly.monomial(field, e))
            conv.append(out)
        ncols = cols if cols is not None else (len(conv[0]) if conv else 0)
        return cls(field, len(conv), ncols, conv)

    @classmethod
    def identity(cls, field: Field, n: int) -> "PolyMatrix":
        one, z = LaurentPoly.one(field), LaurentPoly.zero(field)
        return cls(field, n, n, [[one if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "PolyMatrix":
        return cls(field, rows, cols)

    def __getitem__(self, ij) -> LaurentPoly:
        i, j = ij
        return self.entries[i][j]

    def to_lists(self) -> list[list[LaurentPoly]]:
        return [list(r) for r in self.entries]

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(self.field, self.cols, self.rows, [list(c) for c in zip(*self.entries)] if self.rows else [[] for _ in range(self.cols)])

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        z = LaurentPoly.zero(self.field)
        out = []
        ocols = list(zip(*other.entries)) if other.rows else [() for _ in range(other.cols)]
        for row in self.entries:
            nz = [(k, a) for k, a in enumerate(row) if a]
            out_row = []
            for col in ocols:
                acc = z
                for k, a in nz:
                    b = col[k]
                    if b:
                        acc = acc + a * b
                out_row.append(acc)
            out.append(out_row)
        return PolyMatrix(self.field, self.rows, other.cols, out)

    def is_zero(self) -> bool:
        return not any(e for r in self.entries for e in r)

    def is_diagonal(self) -> bool:
        return all(not e for i, r in enumerate(self.entries) for j, e in enumerate(r) if i != j)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "PolyMatrix":
        return PolyMatrix(self.field, len(rows), len(cols), [[self.entries[i][j] for j in cols] for i in rows])

    def max_degree(self) -> int:
        return max((e.degree() for r in self.entries for e in r if e), default=0)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PolyMatrix)
            and self.field == other.field
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.field, self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"PolyMatrix({self.rows}x{self.cols} over {self.field})"

    def pretty(self) -> str:
        cells = [[str(e) for e in r] for r in self.entries]
        width = max((len(c) for r in cells for c in r), default=1)
        return "\n".join("[ " + "  ".join(c.rjust(width) for c in r) + " ]" for r in cells)


# --- dense matrices over a field (lists of lists of reduced values) ---------


def mat_identity(n: int) -> list[list]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(field: Field, a: list[list], b: list[list]) -> list[list]:
    red = field.reduce
    bt = list(zip(*b))
    return [[red(sum(x * y for x, y in zip(row, col))) for col in bt] for row in a]


def mat_transpose(a: list[list]) -> list[list]:
    return [list(c) for c in zip(*a)]


def mat_inverse(field: Field, a: list[list]) -> list[list]:
    n = len(a)
    red = field.reduce
    m = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(a)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        m[c], m[piv] = m[piv], m[c]
        inv = field.inv(m[c][c])
        m[c] = [red(x * inv) for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [red(x - f * y) for x, y in zip(m[r], m[c])]
    return [row[n:] for row in m]


def mat_rank(field: Field, a: list[list]) -> int:
    m = [list(r) for r in a]
    red = field.reduce
    rank = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        piv = next((r for r in range(rank, len(m)) if m[r][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = field.inv(m[rank][c])
        for r in range(rank + 1, len(m)):
            if m[r][c] != 0:
                f = red(m[r][c] * inv)
                m[r] = [red(x - f * y) for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


def mat_det(field: Field, a: list[list]):
    n = len(a)
    m = [list(r) for r in a]
    red = field.reduce
    det = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det = red(det * m[c][c])
        inv = field.inv(m[c][c])
        for r in range(c + 1, n):
            if m[r][c] != 0:
                f = red(m[r][c] * inv)
                m[r] = [red(x - f * y) for x, y in zip(m[r], m[c])]
    return red(det)
