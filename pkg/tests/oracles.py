"""Independent reference computations used by the tests.

Everything here goes through sympy or brute force, never through the
package's own normal-form code.
"""
from itertools import combinations, permutations, product

import sympy

from twistalex.algebra import LaurentPoly

T = sympy.Symbol("t")


def to_sympy(f: LaurentPoly, modulus=None, base: int | None = None):
    """``t^-base * f`` as a sympy Poly; ``base`` defaults to the lowest exponent of ``f``."""
    lift = 0 if base is None or not f.coeffs else f.shift - base
    coeffs = (list(reversed(f.coeffs)) + [0] * lift) or [0]
    if modulus is None:
        return sympy.Poly([sympy.Rational(c) for c in coeffs], T, domain="QQ")
    return sympy.Poly(coeffs, T, modulus=modulus)


def sympy_matrix(rows, modulus=None):
    """Entries as polynomials after one common shift, so minors change only by units."""
    base = min((e.shift for r in rows for e in r if e.coeffs), default=0)
    return [[to_sympy(e, modulus, base) for e in r] for r in rows]


def _det(rows, modulus):
    n = len(rows)
    if n == 0:
        return sympy.Poly(1, T, modulus=modulus) if modulus else sympy.Poly(1, T, domain="QQ")
    expr = sympy.Matrix(n, n, lambda i, j: rows[i][j].as_expr()).det(method="berkowitz")
    return sympy.Poly(sympy.expand(expr), T, modulus=modulus) if modulus else sympy.Poly(sympy.expand(expr), T, domain="QQ")


def minors_gcd(rows, size, modulus=None):
    """gcd of all ``size x size`` minors of a matrix of sympy Polys (0 if all vanish)."""
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    zero = sympy.Poly(0, T, modulus=modulus) if modulus else sympy.Poly(0, T, domain="QQ")
    acc = zero
    for rs in combinations(range(nrows), size):
        for cs in combinations(range(ncols), size):
            d = _det([[rows[i][j] for j in cs] for i in rs], modulus)
            acc = d if acc.is_zero else sympy.gcd(acc, d)
    return acc


def rank_over_fraction_field(rows, modulus=None):
    """Rank over F(t), by evaluating minors symbolically (small matrices only)."""
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    for size in range(min(nrows, ncols), 0, -1):
        if not minors_gcd(rows, size, modulus).is_zero:
            return size
    return 0


def coker_oracle(A, modulus):
    """``(free_rank, torsion_order)`` of ``F[t]^rows / col-span(A)`` via determinantal divisors."""
    rows = sympy_matrix(A.to_lists(), modulus)
    r = rank_over_fraction_field(rows, modulus)
    tors = minors_gcd(rows, r, modulus) if r else sympy.Poly(1, T, modulus=modulus)
    return A.rows - r, tors


def burau_alexander(strands, letters):
    """Classical Alexander polynomial of a braid closure via the reduced Burau matrix.

    Uses the identity ``det(I - B_r(beta)) = Delta(t) (1 + t + ... + t^(n-1))``.
    """
    n = strands
    t = T

    def reduced(i, sign):
        m = sympy.eye(n - 1)
        i -= 1
        # reduced Burau of sigma_{i+1}
        m[i, i] = -t
        if i > 0:
            m[i, i - 1] = t
        if i < n - 2:
            m[i, i + 1] = 1
        return m if sign > 0 else m.inv()

    acc = sympy.eye(n - 1)
    for a in letters:
        acc = acc * reduced(abs(a), 1 if a > 0 else -1)
    num = sympy.factor((sympy.eye(n - 1) - acc).det())
    den = sum(t**j for j in range(n))
    q = sympy.cancel(num / den)
    return sympy.Poly(sympy.numer(sympy.together(q)), t, domain="QQ"), sympy.Poly(sympy.denom(sympy.together(q)), t, domain="QQ")


def normalized_coeffs(poly) -> tuple:
    """Coefficients of a sympy Poly up to units: strip powers of t and make it monic."""
    cs = list(reversed(poly.all_coeffs()))
    while cs and cs[0] == 0:
        cs.pop(0)
    if not cs:
        return ()
    lead = cs[-1]
    mod = poly.get_modulus() if poly.domain.is_FiniteField else None
    if mod:
        inv = pow(int(lead) % mod, -1, mod)
        return tuple(int(c) * inv % mod for c in cs)
    return tuple(sympy.Rational(c) / lead for c in cs)


def brute_force_homs(relators, ngens, k):
    """All tuples of permutations of range(k) killing every relator (right-to-left composition)."""
    perms = list(permutations(range(k)))
    inv = {s: tuple(sorted(range(k), key=lambda i: s[i])) for s in perms}
    ident = tuple(range(k))
    out = []
    for tup in product(perms, repeat=ngens):
        ok = True
        for rel in relators:
            acc = ident
            for a in rel:
                s = tup[a - 1] if a > 0 else inv[tup[-a - 1]]
                acc = tuple(acc[s[i]] for i in range(k))
            if acc != ident:
                ok = False
                break
        if ok:
            out.append(tup)
    return out


def conjugacy_classes_of_tuples(tuples, k):
    perms = list(permutations(range(k)))
    seen = set()
    reps = []
    for tup in tuples:
        if tup in seen:
            continue
        reps.append(tup)
        for c in perms:
            ci = tuple(sorted(range(k), key=lambda i: c[i]))
            seen.add(tuple(tuple(c[s[ci[i]]] for i in range(k)) for s in tup))
    return reps


def transitive(tup, k):
    reached = {0}
    frontier = [0]
    while frontier:
        x = frontier.pop()
        for s in tup:
            if s[x] not in reached:
                reached.add(s[x])
                frontier.append(s[x])
    return len(reached) == k


def generated_order(tup, k):
    ident = tuple(range(k))
    group = {ident}
    frontier = [ident]
    while frontier:
        g = frontier.pop()
        for s in tup:
            h = tuple(g[s[i]] for i in range(k))
            if h not in group:
                group.add(h)
                frontier.append(h)
    return len(group)
