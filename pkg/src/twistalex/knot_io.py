"""Text formats, the bundled fixture corpus and report serialisation.

Every format may start with a header line ``%format <kind> <version>``;
emitters always write it.  Lines starting with ``#`` are comments.
"""
from __future__ import annotations

import json
import re
import os
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Sequence

from .algebra.laurent import LaurentPoly
from .algebra.fields import QQ
from .fpgroup import (
    BOUNDARY_TORI,
    CLOSED,
    BraidWord,
    Presentation,
    PresentationError,
    Word,
    braid_to_presentation,
    parse_word,
)
from .reps import PermHom, format_cycles, parse_cycles

FORMAT_VERSION = 1
REPORT_SCHEMA = "twistalex-report/1"
FIXTURE_ENV = "TWISTALEX_FIXTURES"


class InputError(ValueError):
    """Grammar or validation failure, with a 1-based line and column when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


def _lines(text: str):
    """Yield (lineno, stripped line) skipping blanks and comments; checks the header."""
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("%format"):
            parts = line.split()
            if len(parts) != 3 or not parts[2].isdigit():
                raise InputError("malformed header, expected '%format <kind> <version>'", no, 1)
            if int(parts[2]) > FORMAT_VERSION:
                raise InputError(f"unsupported format version {parts[2]}", no, len(parts[0]) + len(parts[1]) + 3)
            continue
        yield no, line, raw


def _column(raw: str, fragment: str) -> int:
    i = raw.find(fragment)
    return i + 1 if i >= 0 else 1


# ---------------------------------------------------------------------------
# braids and presentations


def parse_braid(text: str) -> BraidWord:
    """``braid <n>: i1 i2 ...``"""
    body = [(no, line, raw) for no, line, raw in _lines(text)]
    if len(body) != 1:
        raise InputError("expected exactly one braid line", body[1][0] if len(body) > 1 else None)
    no, line, raw = body[0]
    head, sep, rest = line.partition(":")
    parts = head.split()
    if not sep or len(parts) != 2 or parts[0] != "braid":
        raise InputError("expected 'braid <n>: letters'", no, 1)
    try:
        n = int(parts[1])
    except ValueError:
        raise InputError(f"bad strand count {parts[1]!r}", no, _column(raw, parts[1])) from None
    letters = []
    for tok in rest.split():
        try:
            letters.append(int(tok))
        except ValueError:
            raise InputError(f"bad braid letter {tok!r}", no, _column(raw, tok)) from None
    try:
        return BraidWord(n, tuple(letters))
    except PresentationError as e:
        raise InputError(str(e), no) from None


def format_braid(b: BraidWord, header: bool = False) -> str:
    line = f"braid {b.strands}: " + " ".join(str(a) for a in b.letters)
    return (f"%format braid {FORMAT_VERSION}\n" if header else "") + line.rstrip() + "\n"


def parse_presentation(text: str) -> Presentation:
    """Presentation DSL.

    ``gens: a b c``, ``rel: <word>`` or ``rel: <word> = <word>``,
    ``wirtinger: x = w y w^-1`` (conjugation relation; the last one given is
    dropped as redundant and generators are marked meridional),
    ``phi: a=1 b=0``, ``kind: closed``, ``label: text``, ``meridional: yes``.
    """
    gens: list[str] | None = None
    relators: list[Word] = []
    wirt: list[Word] = []
    phi: dict[str, int] | None = None
    kind = BOUNDARY_TORI
    label = ""
    meridional = False
    for no, line, raw in _lines(text):
        key, sep, value = line.partition(":")
        key = key.strip()
        value = value.strip()
        if not sep:
            raise InputError("expected '<key>: <value>'", no, 1)
        col = _column(raw, value) if value else len(raw) + 1
        if key == "gens":
            if gens is not None:
                raise InputError("generators declared twice", no, 1)
            gens = value.split()
            if len(set(gens)) != len(gens):
                raise InputError("duplicate generator name", no, col)
            continue
        if key == "label":
            label = value
            continue
        if key == "kind":
            if value not in (CLOSED, BOUNDARY_TORI):
                raise InputError(f"unknown kind {value!r}", no, col)
            kind = value
            continue
        if key == "meridional":
            meridional = value.lower() in ("yes", "true", "1")
            continue
        if gens is None:
            raise InputError(f"'{key}' before 'gens:'", no, 1)
        try:
            if key == "rel":
                lhs, eq, rhs = value.partition("=")
                w = parse_word(lhs, gens)
                if eq:
                    w = w * parse_word(rhs, gens).inverse()
                relators.append(w)
            elif key == "wirtinger":
                lhs, eq, rhs = value.partition("=")
                x = parse_word(lhs, gens)
                if not eq or len(x) != 1 or x.letters[0] < 0:
                    raise PresentationError("expected 'x = w y w^-1'")
                r = parse_word(rhs, gens)
                _check_conjugation(r)
                wirt.append(x * r.inverse())
            elif key == "phi":
                phi = {}
                for item in value.split():
                    name, eq, v = item.partition("=")
                    if not eq or name not in gens:
                        raise PresentationError(f"bad phi entry {item!r}")
                    phi[name] = int(v)
            else:
                raise InputError(f"unknown key {key!r}", no, 1)
        except (PresentationError, ValueError) as e:
            if isinstance(e, InputError):
                raise
            raise InputError(str(e), no, col) from None
    if gens is None:
        raise InputError("missing 'gens:' line")
    if wirt:
        relators.extend(wirt[:-1])
        meridional = True
        if phi is None:
            phi = {g: 1 for g in gens}
    phi_t = None
    if phi is not None:
        missing = [g for g in gens if g not in phi]
        if missing:
            raise InputError(f"phi missing for generators {missing}")
        phi_t = tuple(phi[g] for g in gens)
    try:
        return Presentation(tuple(gens), tuple(relators), phi_t, kind, label, meridional)
    except PresentationError as e:
        raise InputError(str(e)) from None


def _check_conjugation(w: Word) -> None:
    """``w`` must read ``u y u^-1`` for a single letter y."""
    n = len(w.letters)
    if n % 2 == 0:
        raise PresentationError("right-hand side is not a conjugate of a generator")
    h = n // 2
    u = Word(w.letters[:h])
    if w.letters[h] < 0 or Word(w.letters[h + 1:]) != u.inverse():
        raise PresentationError("right-hand side is not a conjugate of a generator")


def format_presentation(p: Presentation, header: bool = True) -> str:
    out = [f"%format presentation {FORMAT_VERSION}"] if header else []
    if p.label:
        out.append(f"label: {p.label}")
    out.append("gens: " + " ".join(p.generators))
    for r in p.relators:
        out.append("rel: " + r.format(p.generators))
    if p.phi is not None:
        out.append("phi: " + " ".join(f"{g}={v}" for g, v in zip(p.generators, p.phi)))
    if p.kind == CLOSED:
        out.append(f"kind: {CLOSED}")
    if p.meridional:
        out.append("meridional: yes")
    return "\n".join(out) + "\n"


def parse_input(text: str) -> Presentation | BraidWord:
    """Braid line or presentation DSL, decided by the first content line."""
    for _, line, _ in _lines(text):
        if line.startswith("braid"):
            return parse_braid(text)
        return parse_presentation(text)
    raise InputError("empty input")


# ---------------------------------------------------------------------------
# homomorphism files


def parse_hom(text: str, p: Presentation, k: int | None = None) -> PermHom:
    """``gen: (1 4 2)`` per generator; optional ``degree: 5`` line (default: largest point used)."""
    entries: dict[str, tuple[int, str, str]] = {}
    for no, line, raw in _lines(text):
        key, sep, value = line.partition(":")
        key = key.strip()
        if not sep:
            raise InputError("expected '<generator>: <cycles>'", no, 1)
        if key == "degree":
            try:
                k = int(value)
            except ValueError:
                raise InputError(f"bad degree {value.strip()!r}", no, _column(raw, value.strip())) from None
            continue
        if key not in p.generators:
            raise InputError(f"unknown generator {key!r}", no, 1)
        if key in entries:
            raise InputError(f"generator {key!r} assigned twice", no, 1)
        entries[key] = (no, value.strip(), raw)
    if k is None:
        pts = []
        for _, value, _ in entries.values():
            for body in re.findall(r"\(([^()]*)\)", value):
                body = body.strip()
                # compact cycles such as (142) carry single-digit points
                tokens = body.replace(",", " ").split() if (" " in body or "," in body) else list(body)
                pts += [int(t) for t in tokens if t.isdigit()]
        k = max(pts, default=1)
    images = []
    for g in p.generators:
        if g not in entries:
            raise InputError(f"no image given for generator {g!r}")
        no, value, raw = entries[g]
        try:
            images.append(parse_cycles(value, k))
        except ValueError as e:
            raise InputError(str(e), no, _column(raw, value)) from None
    h = PermHom(k, tuple(images))
    if not h.satisfies(p):
        bad = [r.format(p.generators) for r in p.relators if h.evaluate(r) != tuple(range(k))]
        raise InputError(f"the assignment violates relators: {bad[:3]}")
    return h


def format_hom(h: PermHom, names: Sequence[str], header: bool = True) -> str:
    out = [f"%format hom {FORMAT_VERSION}"] if header else []
    out.append(f"degree: {h.degree}")
    out += [f"{g}: {format_cycles(s)}" for g, s in zip(names, h.images)]
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# knot tables


@dataclass(frozen=True)
class KnotTableEntry:
    name: str
    input: BraidWord | Presentation
    known_genus: int | None = None
    known_fibered: bool | None = None
    classical_alexander: LaurentPoly | None = None
    note: str = ""

    def presentation(self) -> Presentation:
        if isinstance(self.input, BraidWord):
            return braid_to_presentation(self.input, label=self.name)
        return self.input


def _optional(value: str):
    value = value.strip()
    return None if value in ("", "-", "?") else value


def load_table(path: str | os.PathLike) -> list[KnotTableEntry]:
    """Tab-separated rows: name, input, genus, fibered (Y/N), classical Alexander, note."""
    text = Path(path).read_text()
    return parse_table(text)


def parse_table(text: str) -> list[KnotTableEntry]:
    entries: list[KnotTableEntry] = []
    seen: set[str] = set()
    for no, line, raw in _lines(text):
        cols = raw.rstrip("\n").split("\t")
        if len(cols) < 2:
            raise InputError("expected at least name and input columns", no)
        cols += [""] * (6 - len(cols))
        name = cols[0].strip()
        if not name:
            raise InputError("empty knot name", no, 1)
        if name in seen:
            raise InputError(f"duplicate entry {name!r}", no, 1)
        seen.add(name)
        try:
            inp = parse_input(cols[1].replace(";", "\n"))
            genus = _optional(cols[2])
            fib = _optional(cols[3])
            alex = _optional(cols[4])
            entries.append(
                KnotTableEntry(
                    name,
                    inp,
                    int(genus) if genus is not None else None,
                    None if fib is None else fib.upper().startswith("Y"),
                    LaurentPoly.from_string(QQ, alex) if alex is not None else None,
                    cols[5].strip(),
                )
            )
        except InputError as e:
            raise InputError(f"row {name!r}: {e}", no) from None
        except ValueError as e:
            raise InputError(f"row {name!r}: {e}", no) from None
    return entries


# ---------------------------------------------------------------------------
# fixtures


def fixture_dir() -> Path:
    override = os.environ.get(FIXTURE_ENV)
    if override:
        return Path(override)
    return Path(str(resources.files("twistalex") / "data"))


def fixture_path(name: str) -> Path:
    return fixture_dir() / name


def knot_table() -> list[KnotTableEntry]:
    return load_table(fixture_path("knots.tsv"))


def table_entry(name: str) -> KnotTableEntry:
    for e in knot_table():
        if e.name == name:
            return e
    raise InputError(f"no fixture knot named {name!r}")


@dataclass(frozen=True)
class ResolvedInput:
    presentation: Presentation
    label: str
    braid: BraidWord | None = None
    entry: KnotTableEntry | None = None


def _from_parsed(obj, label: str, entry=None) -> ResolvedInput:
    if isinstance(obj, BraidWord):
        return ResolvedInput(braid_to_presentation(obj, label=label), label, obj, entry)
    p = obj if obj.label else Presentation(obj.generators, obj.relators, obj.phi, obj.kind, label, obj.meridional)
    return ResolvedInput(p, label, None, entry)


def resolve_input(source: str) -> ResolvedInput:
    """A file path, a fixture file (``conway.pres`` or ``conway``), a fixture knot name, or inline text."""
    source = source.strip()
    if source.startswith("braid") or "\n" in source or source.startswith("gens:"):
        return _from_parsed(parse_input(source), source.splitlines()[0])
    path = Path(source)
    if path.is_file():
        return _from_parsed(parse_input(path.read_text()), path.stem)
    for candidate in (fixture_path(source), fixture_path(source + ".pres")):
        if candidate.is_file():
            return _from_parsed(parse_input(candidate.read_text()), candidate.stem)
    return resolve_entry(table_entry(source))


def resolve_entry(entry: KnotTableEntry) -> ResolvedInput:
    return _from_parsed(entry.input, entry.name, entry)


def resolve_hom(source: str, p: Presentation, k: int | None = None) -> PermHom:
    path = Path(source)
    if not path.is_file():
        for candidate in (fixture_path(source), fixture_path(source + ".hom")):
            if candidate.is_file():
                path = candidate
                break
        else:
            if ":" in source:
                return parse_hom(source.replace(";", "\n").replace(",", "\n"), p, k)
            raise InputError(f"hom file {source!r} not found")
    return parse_hom(path.read_text(), p, k)


# ---------------------------------------------------------------------------
# reports


def fraction_text(x: Fraction | None) -> str | None:
    if x is None:
        return None
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _poly(f: LaurentPoly | None) -> str | None:
    return None if f is None else str(f)


def invariant_document(report, label: str, generators: Sequence[str], include_timings: bool = False) -> dict:
    """Structured form of an :class:`~twistalex.twisted.InvariantReport`."""
    from .twisted import boundary_class_bound

    gb = report.genus_bound
    doc = {
        "schema": REPORT_SCHEMA,
        "input": label,
        "kind": report.kind,
        "phi": dict(zip(generators, report.phi)),
        "hom": None if report.hom is None else {g: format_cycles(s) for g, s in zip(generators, report.hom.images)},
        "flavor": report.flavor,
        "field": str(report.field),
        "k": report.k,
        "polynomials": {
            "d0": _poly(report.delta0),
            "d1": _poly(report.delta1),
            "d2": _poly(report.delta2),
            "d1torsion": _poly(report.delta1_torsion),
        },
        "degrees": report.degrees,
        "torsionDegree": report.torsion_degree,
        "normBound": fraction_text(report.norm_bound),
        "genusBound": None if gb is None else {"rational": fraction_text(gb[0]), "rounded": gb[1]},
        "boundaryClassBound": fraction_text(boundary_class_bound(report)),
        "verdict": None,
        "certificate": None,
        "assumptions": [
            "boundaryClassBound assumes H^1(M) -> H^1(boundary component) is injective",
        ],
    }
    if include_timings:
        doc["timings"] = {k: round(v, 6) for k, v in report.timings.items()}
    return doc


def verdict_document(verdict, label: str, generators: Sequence[str], include_timings: bool = False, timings: dict | None = None) -> dict:
    cert = verdict.certificate
    cdoc = None
    if cert is not None:
        cdoc = {
            "source": cert.source,
            "reason": cert.reason,
            "hom": None if cert.hom is None else {g: format_cycles(s) for g, s in zip(generators, cert.hom.images)},
            "flavor": cert.flavor,
            "k": cert.k,
            "p": cert.prime,
            "degD0": cert.deg_d0,
            "degD1": cert.deg_d1,
            "degD2": cert.deg_d2,
            "twistedSide": fraction_text(cert.twisted_side),
            "untwistedSide": cert.untwisted_side,
        }
    cl = verdict.classical
    doc = {
        "schema": REPORT_SCHEMA,
        "input": label,
        "verdict": {"status": verdict.status, "checked": verdict.checked, "complete": verdict.complete},
        "certificate": cdoc,
        "neuwirth": None
        if cl is None
        else {
            "alexander": _poly(cl.integer_poly),
            "monic": cl.monic,
            "degree": cl.degree_q,
            "knownGenus": verdict.known_genus,
            "degreeIsTwiceGenus": verdict.neuwirth_ok,
        },
        "primes": list(verdict.primes),
        "assumptions": list(verdict.assumptions),
    }
    if include_timings and timings:
        doc["timings"] = {k: round(v, 6) for k, v in timings.items()}
    return doc


def emit_report(doc, fmt: str = "json") -> bytes:
    """``json``: sorted keys, two-space indent, trailing newline.  ``text``: indented key/value lines."""
    if fmt == "json":
        return (json.dumps(doc, sort_keys=True, indent=2) + "\n").encode()
    if fmt == "text":
        return ("\n".join(_text_lines(doc, 0)) + "\n").encode()
    raise ValueError(f"unknown report format {fmt!r}")


def parse_report(data: bytes) -> dict:
    return json.loads(data.decode())


def _text_lines(obj, depth: int) -> list[str]:
    pad = "  " * depth
    out = []
    if isinstance(obj, list):
        for item in obj:
            if isinstance(item, (dict, list)):
                out.append(f"{pad}-")
                out += _text_lines(item, depth + 1)
            else:
                out.append(f"{pad}- {item}")
        return out
    for key, value in obj.items():
        if isinstance(value, dict):
            out.append(f"{pad}{key}:")
            out += _text_lines(value, depth + 1)
        elif isinstance(value, list):
            out.append(f"{pad}{key}:" + ("" if value else " []"))
            out += _text_lines(value, depth + 1)
        else:
            out.append(f"{pad}{key}: {'-' if value is None else value}")
    return out
