import io
import json
from importlib import resources

import jsonschema
import pytest

from bfreeflow import cli
from bfreeflow.words import BinaryWord


def run_cli(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), out=out)
    return code, out.getvalue()


@pytest.fixture(scope="module")
def schema():
    with resources.files("bfreeflow").joinpath("schemas/report.schema.json").open() as fh:
        return json.load(fh)


def validate(report, schema):
    jsonschema.validate(report, schema)


def test_sieve_squarefree_text():
    code, out = run_cli("sieve", "--squarefree", "-n", "12")
    assert code == 0
    assert out == "111011100110\n"


def test_sieve_bfree_and_hex_roundtrip():
    code, out = run_cli("sieve", "--bfree", "--basis", "4", "-n", "8")
    assert (code, out) == (0, "11101110\n")
    code, out = run_cli("sieve", "--bfree", "--basis", "4", "-n", "8", "--format", "hex")
    assert code == 0
    assert BinaryWord.from_hex(out.strip()).to_text() == "11101110"


def test_sieve_rle(schema):
    code, out = run_cli("sieve", "--squarefree", "-n", "12", "--format", "rle")
    assert code == 0
    report = json.loads(out)
    validate(report, schema)
    expanded = "".join(str(v) * n for v, n in report["result"]["rle"])
    assert expanded == "111011100110"


def test_sieve_mobius():
    code, out = run_cli("sieve", "--mobius", "-n", "6")
    assert code == 0
    assert out == "1,-1,-1,0,-1,1\n"


def test_admissible(schema):
    code, out = run_cli(
        "admissible", "--basis", "4", "--word", "1111", "--format", "json"
    )
    assert code == 0
    report = json.loads(out)
    validate(report, schema)
    assert report["result"]["admissible"] is False
    code, out = run_cli("admissible", "--basis", "4", "--word", "0101")
    assert (code, out) == (0, "admissible\n")


def test_insert_extract_paper_example(monkeypatch):
    code, out = run_cli(
        "insert", "--basis", "4", "--g", "3", "--length", "19",
        "--y", "01110110101101",
    )
    assert code == 0
    assert out == "0101100110010101010\n"
    code, out = run_cli(
        "extract", "--basis", "4", "--g", "3", "--x", "0101100110010101010"
    )
    assert (code, out) == (0, "01110110101101\n")
    # same through stdin
    monkeypatch.setattr("sys.stdin", io.StringIO("01110110101101\n"))
    code, out = run_cli("insert", "--basis", "4", "--g", "3", "--length", "19")
    assert out == "0101100110010101010\n"


def test_orbit_lines(schema):
    code, out = run_cli("orbit", "--basis", "4", "--g", "3", "--steps", "4", "--seed", "1")
    assert code == 0
    lines = out.strip().split("\n")
    header = json.loads(lines[0])
    assert header["command"] == "orbit"
    step_schema = schema["definitions"]["orbit_step"]
    steps = [json.loads(line) for line in lines[1:]]
    for step in steps:
        jsonschema.validate(step, step_schema)
    assert [s["g"][0] for s in steps] == [3, 2, 1, 0, 3]
    assert [s["cursor"] for s in steps] == [0, 1, 2, 2, 3]


def test_entropy_report(schema):
    code, out = run_cli("entropy", "--basis", "4", "--omit", "1", "--length", "4")
    assert code == 0
    report = json.loads(out)
    validate(report, schema)
    res = report["result"]
    assert res["exact_count"] == 15
    assert [res["count_lower"], res["count_upper"]] == [8, 32]
    assert res["formula_nats"] == pytest.approx(0.519860, abs=1e-6)


def test_entropy_non_period_length(schema):
    code, out = run_cli("entropy", "--basis", "4", "--omit", "1", "--length", "5")
    report = json.loads(out)
    validate(report, schema)
    assert report["result"]["count_lower"] is None
    assert report["result"]["exact_count"] == 29  # witness-oracle count at length 5


def test_entropy_sweep_csv_and_plot(tmp_path, schema):
    plot = tmp_path / "sweep.png"
    code, out = run_cli(
        "entropy", "--basis", "4", "--omit", "1", "--sweep", "m=1..3",
        "--format", "csv", "--plot", str(plot),
    )
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0].startswith("# config ")
    assert lines[1].split(",")[:4] == ["moduli", "omit", "length", "formula_nats"]
    assert len(lines) == 5  # comment + header + three rows
    assert plot.exists() and plot.stat().st_size > 0
    # the same sweep as json validates
    code, out = run_cli("entropy", "--basis", "4", "--omit", "1", "--sweep", "m=1..3")
    validate(json.loads(out), schema)


def test_sample_json(schema):
    code, out = run_cli(
        "sample", "--basis", "4,9", "--length", "2000", "--seed", "9",
        "--emit", "all", "--format", "json",
    )
    assert code == 0
    report = json.loads(out)
    validate(report, schema)
    res = report["result"]
    assert res["admissible"] is True
    assert len(res["x"]) == 2000
    assert res["expected_density"] == pytest.approx(1 / 3)


def test_sample_density_plot(tmp_path):
    plot = tmp_path / "density.png"
    code, _ = run_cli(
        "sample", "--basis", "4", "--length", "5000", "--seed", "1",
        "--plot", str(plot),
    )
    assert code == 0
    assert plot.exists() and plot.stat().st_size > 0


def test_verify_all(schema):
    code, out = run_cli(
        "verify", "--all", "--basis", "4,9,25", "--seed", "7",
        "--samples", "50", "--horizon", "60", "--steps", "50",
        "--draws", "20000", "--format", "json",
    )
    assert code == 0
    report = json.loads(out)
    validate(report, schema)
    assert report["result"]["all_ok"] is True
    names = {s["name"] for s in report["result"]["suites"]}
    assert names == {"commutation", "roundtrip", "product", "crt", "kac"}


def test_verify_text_single_suite():
    code, out = run_cli(
        "verify", "--basis", "4", "--kac", "--seed", "3", "--draws", "20000"
    )
    assert code == 0
    assert "kac" in out and "all ok" in out


def test_determinism_byte_identical():
    for argv in (
        ["sieve", "--squarefree", "-n", "100"],
        ["entropy", "--basis", "4", "--omit", "1", "--length", "8"],
        ["sample", "--basis", "4,9", "--length", "500", "--seed", "5",
         "--emit", "all", "--format", "json"],
        ["orbit", "--basis", "4,9", "--g", "3,5", "--steps", "20", "--seed", "2"],
        ["verify", "--basis", "4", "--kac", "--seed", "1", "--draws", "5000"],
    ):
        first = run_cli(*argv)
        second = run_cli(*argv)
        assert first == second, argv


def test_exit_code_domain_error(capsys):
    code, _ = run_cli("sieve", "--bfree", "--basis", "4,6", "-n", "5")
    assert code == 1  # moduli not coprime: domain error
    code, _ = run_cli("entropy", "--basis", "4", "--omit", "4", "--length", "4")
    assert code == 1  # omission count out of range
    code, _ = run_cli("extract", "--basis", "4", "--g", "3", "--x", "00100")
    assert code == 1  # word does not omit the class


def test_exit_code_usage_error():
    with pytest.raises(SystemExit) as exc:
        run_cli("entropy", "--basis", "4")  # missing required --omit
    assert exc.value.code == 2
    code, _ = run_cli("entropy", "--basis", "4", "--omit", "1")  # no length/sweep
    assert code == 2
    code, _ = run_cli("sieve", "--bfree", "-n", "5")  # --bfree without --basis
    assert code == 2


def test_parse_basis_squarefree_shorthand():
    assert cli.parse_basis("squarefree:3").moduli == (4, 9, 25)
    assert cli.parse_basis("25,4,9").moduli == (4, 9, 25)


def test_entropy_bits_flag():
    code, out = run_cli(
        "entropy", "--basis", "4", "--omit", "1", "--length", "4", "--bits"
    )
    report = json.loads(out)
    assert report["result"]["formula_bits"] == pytest.approx(0.75)
