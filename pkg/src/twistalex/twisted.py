"""Twisted chain complexes, twisted Alexander polynomials and the bounds they give.

Chains are row vectors.  For a presentation with generators ``x_1..x_n``
and relators ``r_1..r_m`` and a representation ``rho(g) = alpha(g) t^phi(g)``
of rank ``k``::

    C_2 = F[t^{+-1}]^{mk} --d2--> C_1 = F[t^{+-1}]^{nk} --d1--> C_0 = F[t^{+-1}]^k

with ``d2`` built from the blocks ``rho(dr_j/dx_i)`` and ``d1`` from the
blocks ``rho(x_i) - 1``.  The fundamental formula of Fox calculus gives
``d2 @ d1 == 0``.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .algebra.fields import QQ, Field, GF
from .algebra.laurent import LaurentPoly
from .algebra.matrix import PolyMatrix
from .algebra.normal_forms import (
    ContractError,
    coker_invariants,
    determinant,
    homology_presentation,
)
from .fpgroup import CLOSED, Presentation, derive_phi, homology_rank, is_primitive
from .reps import PermHom, Representation, adjoint, build_representation, flavor_name


class InvariantError(ArithmeticError):
    """An identity that must hold mathematically failed (a bug or corrupt input)."""


@dataclass(frozen=True)
class TwistedComplex:
    d2: PolyMatrix
    d1: PolyMatrix
    k: int
    num_generators: int
    num_relators: int


def _accumulate(block, mat, exp, sign, red):
    for a, row in enumerate(mat):
        brow = block[a]
        for b, c in enumerate(row):
            if c:
                cell = brow[b]
                cell[exp] = red(cell.get(exp, 0) + sign * c)


def _to_poly(field: Field, terms: dict) -> LaurentPoly:
    return LaurentPoly.from_dict(field, terms) if terms else LaurentPoly.zero(field)


def _mat_mul(red, a, b):
    bt = list(zip(*b))
    return [[red(sum(x * y for x, y in zip(row, col) if x and y)) for col in bt] for row in a]


def chain_complex(p: Presentation, r: Representation, phi: Sequence[int] | None = None) -> TwistedComplex:
    """Boundary matrices of the twisted complex; raises ContractError if ``r`` is not a rep of ``p``."""
    return _chain_complex_cached(p, r, tuple(phi) if phi is not None else None)


@lru_cache(maxsize=64)
def _chain_complex_cached(p: Presentation, r: Representation, phi) -> TwistedComplex:
    if phi is None:
        if p.phi is None:
            p = derive_phi(p)
        phi = p.phi
    if r.num_generators != p.num_generators:
        raise ContractError("representation and presentation have different generator counts")
    if not r.satisfies(p):
        raise ContractError("representation does not satisfy the relators")
    F = r.field
    red = F.reduce
    k, n, m = r.dim, p.num_generators, len(p.relators)
    ident = [[1 if i == j else 0 for j in range(k)] for i in range(k)]
    mats = [[list(row) for row in M] for M in r.matrices]
    invs = [[list(row) for row in M] for M in r.inverses]

    d2_rows: list[list[LaurentPoly]] = []
    for rel in p.relators:
        blocks = [[[{} for _ in range(k)] for _ in range(k)] for _ in range(n)]
        prefix, exp = ident, 0
        for a in rel.letters:
            g = abs(a) - 1
            if a > 0:
                _accumulate(blocks[g], prefix, exp, 1, red)
                prefix = _mat_mul(red, prefix, mats[g])
                exp += phi[g]
            else:
                prefix = _mat_mul(red, prefix, invs[g])
                exp -= phi[g]
                _accumulate(blocks[g], prefix, exp, -1, red)
        if exp != 0 or prefix != ident:
            raise ContractError("relator does not evaluate to the identity")
        for a in range(k):
            d2_rows.append([_to_poly(F, blocks[g][a][b]) for g in range(n) for b in range(k)])
    d1_rows = []
    for g in range(n):
        for a in range(k):
            row = []
            for b in range(k):
                terms = {phi[g]: mats[g][a][b]} if mats[g][a][b] else {}
                if a == b:
                    terms[0] = red(terms.get(0, 0) - 1)
                row.append(_to_poly(F, terms))
            d1_rows.append(row)
    d2 = PolyMatrix(F, m * k, n * k, d2_rows)
    d1 = PolyMatrix(F, n * k, k, d1_rows)
    return TwistedComplex(d2, d1, k, n, m)


def check_chain_condition(c: TwistedComplex) -> bool:
    return (c.d2 @ c.d1).is_zero() if c.d2.rows else True


# ---------------------------------------------------------------------------
# homology orders


def delta0(p: Presentation, r: Representation, phi: Sequence[int] | None = None) -> LaurentPoly:
    """Order of H_0: cokernel of ``d1`` acting on row vectors."""
    c = chain_complex(p, r, phi)
    out = coker_invariants(c.d1.transpose(), c.k).order
    if not out:
        raise InvariantError("Delta_0 vanished; phi must be nontrivial")
    return out


@dataclass(frozen=True)
class FirstHomology:
    order: LaurentPoly
    torsion: LaurentPoly
    free_rank: int
    divisors: tuple[LaurentPoly, ...]


def first_homology(p: Presentation, r: Representation, phi: Sequence[int] | None = None) -> FirstHomology:
    c = chain_complex(p, r, phi)
    rank, C = homology_presentation(c.d1, c.d2)
    mod = coker_invariants(C.transpose(), C.cols)
    return FirstHomology(mod.order, mod.torsion, mod.free_rank, mod.divisors)


def delta1(p: Presentation, r: Representation, phi: Sequence[int] | None = None) -> tuple[LaurentPoly, LaurentPoly]:
    """``(Delta_1, torsion-part order)``; Delta_1 is 0 when H_1 has free rank."""
    h = first_homology(p, r, phi)
    return h.order, h.torsion


def delta2(p: Presentation, r: Representation, phi: Sequence[int] | None = None) -> LaurentPoly:
    """1 for exteriors with toroidal boundary; for closed manifolds the duality formula."""
    if p.kind != CLOSED:
        return LaurentPoly.one(r.field)
    if phi is None:
        phi = (p.phi if p.phi is not None else derive_phi(p).phi)
    neg = tuple(-v for v in phi)
    return delta0(p, adjoint(r), neg).substitute_inverse().normalize()


# ---------------------------------------------------------------------------
# reports


def _deg(f: LaurentPoly) -> int | None:
    return f.degree()


@dataclass(frozen=True)
class InvariantReport:
    delta0: LaurentPoly
    delta1: LaurentPoly
    delta2: LaurentPoly | None
    delta1_torsion: LaurentPoly
    k: int
    field: Field
    kind: str
    phi: tuple[int, ...]
    knot_like: bool = True
    flavor: str = ""
    hom: PermHom | None = None
    timings: dict = field(default_factory=dict, compare=False)

    @property
    def b3(self) -> int:
        return 1 if self.kind == CLOSED else 0

    @property
    def degrees(self) -> dict:
        return {
            "d0": _deg(self.delta0),
            "d1": _deg(self.delta1),
            "d2": _deg(self.delta2) if self.delta2 is not None else None,
            "d1torsion": _deg(self.delta1_torsion),
        }

    @property
    def torsion_degree(self) -> int | None:
        return torsion_degree(self)

    @property
    def norm_bound(self) -> Fraction | None:
        return norm_bound(self)

    @property
    def genus_bound(self) -> tuple[Fraction, int] | None:
        return genus_bound(self)


def compute_invariants(p: Presentation, r: Representation, phi: Sequence[int] | None = None) -> InvariantReport:
    t0 = time.perf_counter()
    if phi is None:
        if p.phi is None:
            p = derive_phi(p)
        phi = p.phi
    phi = tuple(phi)
    d0 = delta0(p, r, phi)
    t1 = time.perf_counter()
    h1 = first_homology(p, r, phi)
    t2 = time.perf_counter()
    d2 = delta2(p, r, phi) if h1.order else None
    t3 = time.perf_counter()
    return InvariantReport(
        delta0=d0,
        delta1=h1.order,
        delta2=d2,
        delta1_torsion=h1.torsion,
        k=r.dim,
        field=r.field,
        kind=p.kind,
        phi=phi,
        knot_like=homology_rank(p) == 1,
        flavor=r.flavor,
        hom=r.hom,
        timings={"delta0": t1 - t0, "delta1": t2 - t1, "delta2": t3 - t2},
    )


def torsion_degree(report: InvariantReport) -> int | None:
    """``deg Delta_1 - deg Delta_0 - deg Delta_2``; None when Delta_1 = 0."""
    if not report.delta1 or report.delta2 is None:
        return None
    return report.delta1.degree() - report.delta0.degree() - report.delta2.degree()


def norm_bound(report: InvariantReport) -> Fraction | None:
    """Lower bound ``deg(tau) / k`` for the Thurston norm of phi."""
    td = torsion_degree(report)
    return None if td is None else Fraction(td, report.k)


def genus_bound(report: InvariantReport) -> tuple[Fraction, int] | None:
    """Genus lower bound for a knot: exact rational and its ceiling.

    Exterior: ``||phi|| = 2g - 1``; zero surgery: ``||phi|| = 2g - 2``.
    """
    nb = norm_bound(report)
    if nb is None or not report.knot_like:
        return None
    g = nb / 2 + (1 if report.kind == CLOSED else Fraction(1, 2))
    g = max(g, Fraction(0))
    return g, math.ceil(g)


def boundary_class_bound(report: InvariantReport) -> Fraction:
    """``deg(torsion part of H_1) / k - 1``; the boundary-injectivity hypothesis is the caller's."""
    return Fraction(report.delta1_torsion.degree(), report.k) - 1


# ---------------------------------------------------------------------------
# determinant-ratio oracle


@dataclass(frozen=True)
class WadaQuotient:
    numerator: LaurentPoly
    denominator: LaurentPoly
    column: int

    @property
    def degree(self) -> int | None:
        if not self.numerator:
            return None
        return self.numerator.degree() - self.denominator.degree()


class OracleUnavailable(ArithmeticError):
    pass


def torsion_wada(p: Presentation, r: Representation, phi: Sequence[int] | None = None) -> WadaQuotient:
    """``det(d2 without block column j) / det(rho(x_j) - 1)`` for deficiency-one presentations."""
    if p.deficiency != 1:
        raise ContractError("determinant-ratio torsion needs a deficiency-one presentation")
    c = chain_complex(p, r, phi)
    k, n = c.k, c.num_generators
    for j in range(n):
        block = c.d1.submatrix(range(j * k, (j + 1) * k), range(k))
        den = determinant(block)
        if den:
            keep = [col for col in range(n * k) if not j * k <= col < (j + 1) * k]
            num = determinant(c.d2.submatrix(range(c.d2.rows), keep)) if c.d2.rows else LaurentPoly.one(r.field)
            return WadaQuotient(num.normalize(), den.normalize(), j)
    raise OracleUnavailable("no generator with det(rho(x_j) - 1) != 0")


# ---------------------------------------------------------------------------
# fibering


OBSTRUCTED = "obstructed"
NO_OBSTRUCTION = "no-obstruction-found"
INAPPLICABLE = "inapplicable"

DEFAULT_PRIMES = (2, 3, 5, 7, 11, 13)


@dataclass(frozen=True)
class FiberingCertificate:
    source: str  # "twisted" or "classical"
    hom: PermHom | None
    flavor: str
    prime: int | None
    k: int
    deg_d0: int | None
    deg_d1: int | None
    deg_d2: int | None
    twisted_side: Fraction | None
    untwisted_side: int | None
    reason: str


@dataclass(frozen=True)
class FiberingVerdict:
    status: str
    certificate: FiberingCertificate | None
    classical: "MonicityReport | None"
    checked: int
    complete: bool
    primes: tuple[int, ...]
    known_genus: int | None = None
    neuwirth_ok: bool | None = None
    assumptions: tuple[str, ...] = ()

    def __post_init__(self):
        if self.status == OBSTRUCTED and self.certificate is None:
            raise ValueError("an obstructed verdict needs a certificate")


@dataclass(frozen=True)
class MonicityReport:
    delta_q: LaurentPoly
    integer_poly: LaurentPoly
    monic: bool
    degree_q: int | None
    degrees_mod_p: dict
    caveat: str = "only finitely many primes were sampled"


def monicity_check(p: Presentation, r: Representation, primes: Iterable[int] = DEFAULT_PRIMES) -> MonicityReport:
    """Delta_1 of an integral representation over Q, its primitive integer form and degrees mod p."""
    rq = r.over(QQ)
    d1q, _ = delta1(p, rq)
    ip = d1q.primitive_integer() if d1q else d1q
    monic = bool(ip) and abs(ip.coeffs[0]) == 1 and abs(ip.coeffs[-1]) == 1
    mod_p = {}
    for q in primes:
        d, _ = delta1(p, r.over(GF(q)))
        mod_p[q] = d.degree()
    return MonicityReport(d1q, ip, monic, d1q.degree(), mod_p)


def classical_alexander(p: Presentation) -> LaurentPoly:
    """Delta_1 for the trivial rank-one representation over Q."""
    r = build_representation(None, "trivial", QQ, p.num_generators)
    return delta1(p, r)[0]


def fibering_check(
    p: Presentation,
    homs: Iterable[PermHom],
    primes: Iterable[int] = DEFAULT_PRIMES,
    flavors: Iterable[str] = ("standard", "permutation"),
    known_genus: int | None = None,
    budget: float | None = None,
    stop_at_first: bool = True,
) -> FiberingVerdict:
    """Search for a twisted or classical violation of the fibred-manifold identities."""
    if p.phi is None:
        p = derive_phi(p)
    if not is_primitive(p.phi):
        raise ContractError("phi must be primitive")
    primes = tuple(primes)
    flavors = tuple(flavor_name(f) for f in flavors)
    deadline = None if budget is None else time.monotonic() + budget
    b3 = p.b3
    triv = build_representation(None, "trivial", QQ, p.num_generators)
    classical = monicity_check(p, triv, primes)
    dk = classical.delta_q
    assumptions = ("finitely many primes sampled: " + ",".join(map(str, primes)),)
    neuwirth = None
    if known_genus is not None and dk:
        neuwirth = classical.monic and dk.degree() == 2 * known_genus
    if not dk:
        cert = FiberingCertificate("classical", None, "trivial", None, 1, None, None, None, None, None, "classical Alexander polynomial vanishes")
        return FiberingVerdict(OBSTRUCTED, cert, classical, 0, True, primes, known_genus, neuwirth, assumptions)
    if not classical.monic:
        cert = FiberingCertificate("classical", None, "trivial", None, 1, None, dk.degree(), None, None, dk.degree(), "classical Alexander polynomial is not monic")
        return FiberingVerdict(OBSTRUCTED, cert, classical, 0, True, primes, known_genus, neuwirth, assumptions)
    untwisted = dk.degree()
    checked = 0
    complete = True
    found = None
    for h in homs:
        for flavor in flavors:
            for q in primes:
                if deadline is not None and time.monotonic() > deadline:
                    complete = False
                    break
                r = build_representation(h, flavor, GF(q))
                rep = compute_invariants(p, r)
                checked += 1
                td = rep.torsion_degree
                degs = rep.degrees
                if td is None:
                    cert = FiberingCertificate("twisted", h, flavor, q, r.dim, degs["d0"], None, degs["d2"], None, untwisted, "twisted Delta_1 vanishes")
                else:
                    side = Fraction(td, r.dim) + 1 + b3
                    if side == untwisted:
                        continue
                    cert = FiberingCertificate("twisted", h, flavor, q, r.dim, degs["d0"], degs["d1"], degs["d2"], side, untwisted, "twisted and untwisted degrees differ")
                if found is None:
                    found = cert
                if stop_at_first:
                    return FiberingVerdict(OBSTRUCTED, found, classical, checked, complete, primes, known_genus, neuwirth, assumptions)
            if not complete:
                break
        if not complete:
            break
    complete = complete and getattr(homs, "complete", True)
    status = OBSTRUCTED if found else NO_OBSTRUCTION
    return FiberingVerdict(status, found, classical, checked, complete, primes, known_genus, neuwirth, assumptions)
