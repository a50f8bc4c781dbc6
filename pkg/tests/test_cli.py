import json

import pytest

from padicdual.cli import CliConfig, main
from padicdual.io import dump_factored_form, load_group_spec, parse_matrix, parse_vector_list

from conftest import bundled


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out.strip(), out.err


def test_dual_ex21(capsys):
    code, out, _ = run(capsys, "dual", "ex21.json", "--p", "3", "--precision", "3")
    assert code == 0
    doc = json.loads(out)
    assert doc["exceptional"] == [{"p": 3, "rows": [["1", "7"]]}]


def test_dual_identity(capsys):
    code, out, _ = run(capsys, "dual", "identity.json")
    assert json.loads(out)["exceptional"] == []


def test_dual_ex22(capsys):
    code, out, _ = run(capsys, "dual", "ex22.json", "--p", "3", "--oracle")
    assert code == 0
    assert len(json.loads(out)["exceptional"][0]["rows"]) == 2


def test_dual_rejects_group_spec(capsys):
    code, _, err = run(capsys, "dual", "ttf.json")
    assert code == 2


def test_dual_singular(capsys, tmp_path):
    f = tmp_path / "sing.json"
    f.write_text('{"limit_matrix": [[1, 2], [2, 4]]}')
    assert run(capsys, "dual", str(f))[0] == 3


def test_member(capsys):
    assert run(capsys, "member", "ttf.json", "1/5,1/5")[:2] == (0, "true")
    code, out, _ = run(capsys, "member", "ttf.json", "1/5,0", "--json")
    assert code == 1
    doc = json.loads(out)
    assert doc["verdict"] is False and doc["checked_primes"] == [2, 3, 5] and doc["precision"] == 32


def test_metric(capsys):
    assert run(capsys, "metric", "ex21.json", "-1,1", "--p", "3")[:2] == (0, "3^-1")
    code, out, _ = run(capsys, "metric", "ex21.json", "-115,1", "--p", "3", "--json", "--oracle")
    assert json.loads(out)["exponent"] == 5


def test_divisible(capsys):
    assert run(capsys, "divisible", "ex21.json", "-7,1", "--p", "3", "--k", "2", "--oracle")[:2] == (0, "true")
    assert run(capsys, "divisible", "ex21.json", "-1,1", "--p", "3", "--k", "2")[0] == 1


def test_precision_exhausted(capsys):
    code, _, err = run(capsys, "divisible", "ex21.json", "1,0", "--p", "3", "--k", "30")
    assert code == 4 and "--precision" in err


def test_hom_iso(capsys):
    assert run(capsys, "iso", "z.json", "nine.json", "--V", "1/9", "--oracle")[0] == 0
    assert run(capsys, "hom", "ttf.json", "ttf.json", "--V", "[[0,1],[1,0]]")[0] == 1
    assert run(capsys, "hom", "ex21.json", "ex21.json", "--V", "identity")[0] == 0
    code, out, _ = run(capsys, "iso", "z.json", "zhalf.json", "--V", "1", "--json")
    assert code == 1 and json.loads(out)["per_prime"] == {"2": False}


def test_type_quotient_simple(capsys):
    assert run(capsys, "type", "zhalf.json")[1] == "{2: inf}"
    assert run(capsys, "quotient", "ex21.json", "--p", "3", "--k", "2", "--oracle")[1] == "[9]"
    assert run(capsys, "simple", "ex21.json", "--p", "3")[1] == "simple_not_divisible"


def test_extend_and_separate(capsys):
    code, out, _ = run(capsys, "extend", "ex21.json", "--p", "3", "--gens", "1,0", "--values", "1", "--at", "0,1", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["functional"]["coefficients"] == ["1"]
    code, out, _ = run(capsys, "extend", "ex21.json", "--p", "3", "--gens", "1,0;0,1", "--values", "0,1", "--json")
    assert code == 1 and json.loads(out)["index"] == 1
    code, out, _ = run(capsys, "separate", "ex21.json", "--p", "3", "--h", "3,0;0,3", "--g", "1,0", "--m", "1")
    assert code == 0
    assert run(capsys, "separate", "z.json", "--p", "3", "--h", "1", "--g", "1", "--m", "0")[0] == 1


def test_validate(capsys, tmp_path):
    assert run(capsys, "validate", "ttf.json")[0] == 0
    f = tmp_path / "bad.json"
    f.write_text('{"rank": 2, "exceptional": [{"p": 3, "rows": [["1", "0"], ["1", "0"]]}]}')
    assert run(capsys, "validate", str(f))[0] == 1


@pytest.mark.parametrize(
    "argv,code",
    [
        (["member", "missing.json", "1"], 2),
        (["member", "ttf.json", "1/0,1"], 2),
        (["member", "ttf.json", "a,b"], 2),
        (["metric", "ex21.json", "1,0"], 2),
        (["metric", "ex21.json", "1,0", "--p", "4"], 3),
        (["metric", "ex21.json", "1/3,0", "--p", "3"], 3),
        (["member", "ttf.json", "1,2,3"], 2),
        (["hom", "ttf.json", "z.json", "--V", "1"], 2),
    ],
)
def test_error_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_low_precision_warns(caplog):
    with caplog.at_level("WARNING"):
        CliConfig(precision=3)
    assert "below 8" in caplog.text
    with pytest.raises(ValueError):
        CliConfig(precision=0)


def test_round_trip_through_dual(capsys, tmp_path):
    code, out, _ = run(capsys, "dual", "ex21.json")
    f = tmp_path / "form.json"
    f.write_text(out)
    assert run(capsys, "metric", str(f), "-1,1", "--p", "3")[1] == "3^-1"
    assert run(capsys, "divisible", str(f), "-115,1", "--p", "3", "--k", "5")[0] == 0
    code, out, _ = run(capsys, "dual", "ex22.json")
    f.write_text(out)
    assert run(capsys, "metric", str(f), "3,1,0", "--p", "3")[0] == 0


def test_oracle_never_disagrees_on_fixtures(capsys):
    for spec, vecs in (("ex21.json", ["-1,1", "-7,1", "1,0", "2,5"]), ("ex22.json", ["1,0,0", "3,1,1", "0,0,1"])):
        for v in vecs:
            for k in ("1", "2", "3"):
                assert run(capsys, "divisible", spec, v, "--p", "3", "--k", k, "--oracle")[0] in (0, 1)
            assert run(capsys, "metric", spec, v, "--p", "3", "--oracle")[0] == 0
        for k in ("1", "2", "3"):
            assert run(capsys, "quotient", spec, "--p", "3", "--k", k, "--oracle")[0] == 0
    assert run(capsys, "dual", "ex21.json", "--oracle")[0] == 0
    assert run(capsys, "member", "ex21.json", "1/3,-1/3", "--oracle")[0] == 0


def test_load_and_dump_roundtrip():
    ff = bundled("ttf.json")
    again = load_group_spec(dump_factored_form(ff, comment="x"))
    assert again == ff


def test_literal_precision_is_checked():
    from padicdual import InvalidForm

    doc = {"rank": 1, "precision": 8, "exceptional": [{"p": 3, "rows": [["9+O(3^4)"]]}]}
    with pytest.raises(InvalidForm):
        load_group_spec(doc)
    doc["precision"] = 4
    assert load_group_spec(doc).exceptional[3].to_lists() == [[9]]


def test_parse_helpers(tmp_path):
    assert parse_vector_list("3,0; 0,3") == [(3, 0), (0, 3)]
    assert parse_vector_list("") == []
    assert parse_matrix("1/9", 1, 1) == parse_matrix("[[1/9]]", 1, 1)
    f = tmp_path / "v.json"
    f.write_text("[[0, 1], [1, 0]]")
    assert parse_matrix("@" + str(f), 2, 2).entries == ((0, 1), (1, 0))
    assert parse_matrix("identity", 2, 2).entries == ((1, 0), (0, 1))
    with pytest.raises(ValueError):
        parse_matrix("identity", 2, 3)
