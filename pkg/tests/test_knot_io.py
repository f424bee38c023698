import pytest
from hypothesis import given
from hypothesis import strategies as st

from twistalex.algebra import GF, QQ, LaurentPoly
from twistalex.fpgroup import CLOSED, BraidWord, Presentation, Word, braid_to_presentation
from twistalex.knot_io import (
    FIXTURE_ENV,
    InputError,
    emit_report,
    format_braid,
    format_hom,
    format_presentation,
    invariant_document,
    knot_table,
    parse_braid,
    parse_hom,
    parse_input,
    parse_presentation,
    parse_report,
    parse_table,
    resolve_hom,
    resolve_input,
    table_entry,
)
from twistalex.reps import PermHom, build_representation, search_homs
from twistalex.twisted import compute_invariants

NAMES = ["a", "b", "c", "x1", "y_2"]


@st.composite
def presentations(draw):
    n = draw(st.integers(1, len(NAMES)))
    gens = tuple(NAMES[:n])
    letter = st.integers(1, n).flatmap(lambda g: st.sampled_from([g, -g]))
    rels = tuple(Word(w) for w in draw(st.lists(st.lists(letter, min_size=1, max_size=8), max_size=4)))
    rels = tuple(r for r in rels if r.letters)
    kind = draw(st.sampled_from([CLOSED, "boundary-tori"]))
    return Presentation(gens, rels, None, kind, draw(st.sampled_from(["", "sample knot"])), draw(st.booleans()))


@st.composite
def braids(draw):
    n = draw(st.integers(2, 5))
    letters = draw(st.lists(st.integers(1, n - 1).flatmap(lambda i: st.sampled_from([i, -i])), max_size=10))
    return BraidWord(n, tuple(letters))


class TestRoundTrips:
    @given(presentations())
    def test_presentation(self, p):
        q = parse_presentation(format_presentation(p))
        assert q == p

    @given(braids())
    def test_presentation_with_phi(self, b):
        p = braid_to_presentation(b, label="closure")
        assert parse_presentation(format_presentation(p)) == Presentation(p.generators, p.relators, p.phi, p.kind, p.label, p.meridional)

    @given(braids(), st.booleans())
    def test_braid(self, b, header):
        assert parse_braid(format_braid(b, header)) == b
        assert parse_input(format_braid(b)) == b

    @given(st.data())
    def test_hom(self, data):
        p = braid_to_presentation(BraidWord(3, (1, -2, 1, -2)))
        homs = list(search_homs(p, 4))
        h = data.draw(st.sampled_from(homs))
        text = format_hom(h, p.generators, header=data.draw(st.booleans()))
        assert parse_hom(text, p) == h

    @given(st.sampled_from([QQ, GF(2), GF(13)]), st.lists(st.integers(-20, 20), max_size=6), st.integers(-4, 4))
    def test_polynomial_text(self, field, coeffs, shift):
        f = LaurentPoly.from_int_coeffs(field, coeffs, shift)
        assert LaurentPoly.from_string(field, str(f)) == f


class TestParseErrors:
    def test_braid_letter_column(self):
        with pytest.raises(InputError) as e:
            parse_braid("braid 3: 1 x 2")
        assert (e.value.line, e.value.column) == (1, 12)

    def test_braid_letter_out_of_range(self):
        with pytest.raises(InputError):
            parse_braid("braid 2: 1 2")

    def test_unknown_generator_in_relator(self):
        with pytest.raises(InputError) as e:
            parse_presentation("gens: a b\nrel: a c")
        assert e.value.line == 2

    def test_future_format_version(self):
        with pytest.raises(InputError) as e:
            parse_presentation("%format presentation 9\ngens: a")
        assert e.value.line == 1

    def test_wirtinger_must_be_conjugation(self):
        with pytest.raises(InputError):
            parse_presentation("gens: a b\nwirtinger: a = b a")

    def test_empty_input(self):
        with pytest.raises(InputError):
            parse_input("# nothing\n\n")

    def test_hom_violating_relators(self):
        p = braid_to_presentation(BraidWord(2, (1, 1, 1)))
        with pytest.raises(InputError):
            parse_hom("x1: (1 2 3)\nx2: (1 2)", p)

    def test_hom_bad_degree(self):
        p = braid_to_presentation(BraidWord(2, (1, 1, 1)))
        with pytest.raises(InputError) as e:
            parse_hom("degree: five\nx1: (1 2)\nx2: (1 2)", p)
        assert e.value.line == 1

    def test_hom_missing_generator(self):
        p = braid_to_presentation(BraidWord(2, (1, 1, 1)))
        with pytest.raises(InputError):
            parse_hom("x1: (1 2)", p)

    def test_hom_degree_inferred(self):
        p = braid_to_presentation(BraidWord(2, (1, 1, 1)))
        assert parse_hom("x1: (1 2)\nx2: (2 3)", p).degree == 3


class TestTables:
    def test_bundled_table(self):
        names = [e.name for e in knot_table()]
        assert len(names) == len(set(names)) == 52
        assert table_entry("3_1").known_genus == 1

    def test_duplicates_rejected(self):
        text = "3_1\tbraid 2: 1 1 1\n3_1\tbraid 2: 1 1 1\n"
        with pytest.raises(InputError) as e:
            parse_table(text)
        assert e.value.line == 2

    def test_empty_table(self):
        assert parse_table("%format knot-table 1\n# nothing\n") == []

    def test_optional_columns(self):
        (e,) = parse_table("k\tbraid 2: 1\t-\t?\n")
        assert e.known_genus is None and e.known_fibered is None and e.classical_alexander is None

    def test_presentation_rows(self):
        (e,) = parse_table("t\tgens: a b; wirtinger: a = b a b^-1; wirtinger: b = a b a^-1\t1\tY\t1-t+t^2\n")
        assert e.presentation().meridional

    def test_unknown_knot(self):
        with pytest.raises(InputError):
            table_entry("99_1")

    def test_fixture_override(self, tmp_path, monkeypatch):
        (tmp_path / "knots.tsv").write_text("only\tbraid 2: 1 1 1\t1\tY\t1-t+t^2\n")
        monkeypatch.setenv(FIXTURE_ENV, str(tmp_path))
        assert [e.name for e in knot_table()] == ["only"]

    def test_resolve_inline_and_fixture(self):
        assert resolve_input("braid 2: 1 1 1").braid == BraidWord(2, (1, 1, 1))
        assert resolve_input("conway").presentation.num_generators == 11
        assert resolve_input("4_1").entry.name == "4_1"


class TestReports:
    def _doc(self):
        p = resolve_input("conway").presentation
        h = resolve_hom("conway.hom", p)
        rep = compute_invariants(p, build_representation(h, "standard", GF(13)))
        return invariant_document(rep, "conway", p.generators)

    def test_json_is_byte_stable(self):
        a = emit_report(self._doc())
        b = emit_report(self._doc())
        assert a == b and a.endswith(b"\n")
        assert parse_report(a)["genusBound"] == {"rational": "9/4", "rounded": 3}

    def test_timings_are_opt_in(self):
        assert "timings" not in self._doc()

    def test_text_format(self):
        text = emit_report(self._doc(), "text").decode()
        assert "torsionDegree: 14" in text
        with pytest.raises(ValueError):
            emit_report({}, "yaml")

    def test_hom_in_report_round_trips(self):
        doc = self._doc()
        p = resolve_input("conway").presentation
        text = "\n".join(f"{g}: {c}" for g, c in doc["hom"].items())
        assert isinstance(parse_hom(text, p, 5), PermHom)
