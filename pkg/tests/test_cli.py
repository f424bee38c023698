import io
import json
import subprocess
import sys

import pytest

from twistalex.knot_io import InputError
from twistalex.cli import EXIT_BUDGET, EXIT_INPUT, EXIT_OK, RunConfig, build_parser, config_from_args, main, run


def invoke(*argv):
    out = io.BytesIO()
    err = io.StringIO()
    code = run(config_from_args(build_parser().parse_args(list(argv))), out, err)
    return code, out.getvalue(), err.getvalue()


def invoke_json(*argv):
    code, out, err = invoke(*argv, "--json")
    return code, (json.loads(out) if out else None), err


class TestCompute:
    def test_conway(self):
        code, doc, _ = invoke_json("compute", "--input", "conway.pres", "--hom", "conway.hom", "--k", "5", "--prime", "13", "--flavor", "std")
        assert code == EXIT_OK
        assert doc["degrees"]["d1"] == 14 and doc["degrees"]["d0"] == 0
        assert doc["torsionDegree"] == 14
        assert doc["genusBound"] == {"rational": "9/4", "rounded": 3}

    def test_trivial_flavor_needs_no_hom(self):
        code, doc, _ = invoke_json("compute", "--input", "3_1", "--flavor", "trivial", "--prime", "7")
        assert code == EXIT_OK
        assert doc["degrees"]["d1"] == 2

    def test_several_primes_give_a_list(self):
        code, docs, _ = invoke_json("compute", "--input", "3_1", "--flavor", "trivial", "--prime", "2,3")
        assert [d["field"] for d in docs] == ["F_2", "F_3"]

    def test_text_output(self):
        code, out, _ = invoke("compute", "--input", "3_1", "--flavor", "trivial")
        assert code == EXIT_OK and b"torsionDegree: 1" in out and b"rounded: 1" in out

    def test_zero_surgery(self):
        code, doc, _ = invoke_json("compute", "--input", "3_1", "--flavor", "trivial", "--longitude", "auto")
        assert doc["kind"] == "closed"
        assert doc["degrees"] == {"d0": 1, "d1": 2, "d2": 1, "d1torsion": 2}


class TestErrors:
    def test_missing_hom(self):
        code, out, err = invoke("compute", "--input", "3_1", "--flavor", "std")
        assert code == EXIT_INPUT and out == b"" and "needs --hom" in err

    def test_bad_prime(self):
        code, _, err = invoke("compute", "--input", "3_1", "--flavor", "trivial", "--prime", "4")
        assert code == EXIT_INPUT and "not prime" in err

    def test_unknown_input(self):
        code, _, _ = invoke("compute", "--input", "no_such_knot", "--flavor", "trivial")
        assert code == EXIT_INPUT

    def test_parse_error_has_location(self):
        code, _, err = invoke("compute", "--input", "braid 3: 1 q", "--flavor", "trivial")
        assert code == EXIT_INPUT and "column" in err

    def test_bad_longitude(self):
        code, _, _ = invoke("compute", "--input", "3_1", "--flavor", "trivial", "--longitude", "x1")
        assert code == EXIT_INPUT

    def test_argparse_rejects_bad_flavor(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(["compute", "--input", "3_1", "--flavor", "adjoint"])


class TestSearchAndGenus:
    def test_search_lists_homs(self):
        code, doc, _ = invoke_json("search", "--input", "3_1", "--k", "3")
        assert code == EXIT_OK and doc["count"] == 2 and doc["complete"]

    def test_genus_certifies_table_entry(self):
        code, doc, _ = invoke_json("genus", "--input", "12_1601", "--k", "3,4,5", "--prime", "13")
        assert code == EXIT_OK
        assert doc["genusBound"]["rational"] == "5/4"
        assert doc["certified"] is True and doc["knownGenus"] == 2

    def test_classical_bound_reported(self):
        code, doc, _ = invoke_json("genus", "--input", "3_1", "--k", "3")
        assert doc["classicalGenusBound"] == "1"

    def test_tiny_budget_reports_incomplete(self):
        code, doc, _ = invoke_json("genus", "--input", "conway.pres", "--k", "7", "--budget", "0.001")
        assert code in (EXIT_OK, EXIT_BUDGET)
        if code == EXIT_BUDGET:
            assert doc["search"]["complete"] is False


class TestFiber:
    def test_obstructed_knot(self):
        code, doc, _ = invoke_json("fiber", "--input", "12_1345", "--k", "4", "--prime", "3")
        assert code == EXIT_OK
        assert doc["verdict"]["status"] == "obstructed"
        cert = doc["certificate"]
        assert cert["source"] == "twisted" and cert["p"] == 3
        assert cert["twistedSide"] != str(cert["untwistedSide"])

    def test_fibered_knot(self):
        code, doc, _ = invoke_json("fiber", "--input", "4_1", "--k", "3,4", "--prime", "2,3")
        assert doc["verdict"]["status"] == "no-obstruction-found"
        assert doc["neuwirth"]["degreeIsTwiceGenus"] is True


class TestBatch:
    NAMES = "3_1,4_1,12_1601,11_440"

    def test_worker_count_does_not_change_output(self):
        a = invoke("batch", "--names", self.NAMES, "--k", "3", "--json")
        b = invoke("batch", "--names", self.NAMES, "--k", "3", "--json", "--workers", "3")
        assert a[0] == b[0] == EXIT_OK
        assert a[1] == b[1]
        docs = json.loads(a[1])
        assert [d["input"] for d in docs] == ["3_1", "4_1", "11_440", "12_1601"]

    def test_unknown_names(self):
        code, _, err = invoke("batch", "--names", "3_1,nope")
        assert code == EXIT_INPUT and "nope" in err


def test_main_entry_point(capsysbinary):
    assert main(["search", "--input", "3_1", "--k", "2", "--json"]) == EXIT_OK
    assert json.loads(capsysbinary.readouterr().out)["count"] == 1


def test_module_invocation():
    res = subprocess.run([sys.executable, "-m", "twistalex.cli", "search", "--input", "3_1", "--k", "3", "--json"], capture_output=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["count"] == 2


def test_config_validation():
    with pytest.raises(InputError):
        RunConfig("compute", "3_1", (0,), (13,), ("standard",)).validate()
