import json

import pytest

from project.cli import main, parse_bounds, parse_checkpoints, parse_count
from project.errors import InvalidInputError


def test_parse_count():
    assert parse_count("2e6") == 2_000_000
    assert parse_count("1000") == 1000
    for bad in ("1.5", "0", "-3", "abc", "inf"):
        with pytest.raises(InvalidInputError):
            parse_count(bad)


def test_parse_checkpoints():
    assert parse_checkpoints("1e1..1e3,5000") == [10, 100, 1000, 5000]
    assert parse_checkpoints("1e5") == [100000]
    assert parse_checkpoints("1e1..1e7") == [10**k for k in range(1, 8)]
    for bad in ("2e1..1e3", "1e3..1e1", ","):
        with pytest.raises(InvalidInputError):
            parse_checkpoints(bad)


def test_parse_bounds():
    assert parse_bounds(["n_max=1e3"], ["identity-weak-equivalence", "lambda-156"]) == {
        "identity-weak-equivalence": {"n_max": 1000}
    }
    assert parse_bounds(["table1.x=1e4"], ["table1"]) == {"table1": {"x": 10**4}}
    with pytest.raises(InvalidInputError):
        parse_bounds(["a_max=5"], ["lambda-156"])
    with pytest.raises(InvalidInputError):
        parse_bounds(["nope.x=5"], ["lambda-156"])


def test_test_negative_verdict(capsys):
    assert main(["test", "75", "--f", "phi"]) == 1
    out = capsys.readouterr().out
    assert "not f-practical" in out
    assert "witness: 16" in out


def test_test_positive_verdict(capsys):
    assert main(["test", "12", "--f", "identity"]) == 0
    out = capsys.readouterr().out
    assert "n=12 f=identity: f-practical" in out
    assert "weights: 1 2 3 4 6 12" in out


def test_test_weak_chain(capsys):
    assert main(["test", "75", "--f", "phi", "--weak"]) == 1
    out = capsys.readouterr().out
    assert "\nweakly f-practical" in out
    assert "f(5) = 4 <= S_f(3) + 1 = 4" in out


def test_test_json(capsys):
    assert main(["test", "75", "--f", "phi", "--format", "json", "--weak"]) == 1
    payload = json.loads(capsys.readouterr().out)
    assert payload["witness"] == 16
    assert payload["weak"]["holds"] is True


def test_test_lambda_def53(capsys):
    assert main(["test", "156", "--f", "lambda-def53"]) == 0


def test_test_config_file(tmp_path, capsys):
    path = tmp_path / "f.json"
    path.write_text(json.dumps({"name": "totient", "base": "phi"}))
    assert main(["test", "75", "--config", str(path)]) == 1
    assert "f=totient" in capsys.readouterr().out


@pytest.mark.parametrize(
    "argv",
    [
        ["test", "10", "--f", "fn"],
        ["test", "10", "--f", "nope"],
        ["test", "0", "--f", "phi"],
        ["test", "10"],
        ["frobnicate"],
        ["census", "--f", "phi"],
        ["census", "--f", "phi", "--checkpoints", "1e3", "--sieve-limit", "100"],
        ["verify", "no-such-suite"],
        ["verify", "lambda-156", "--bound", "zzz=3"],
        ["density"],
    ],
)
def test_usage_errors_exit_2(argv):
    assert main(argv) == 2


def test_census_against_golden(capsys):
    argv = [
        "census", "--f", "lambda-star", "--checkpoints", "1e1..1e4",
        "--golden", "table1", "--format", "csv", "--threads", "1",
    ]
    assert main(argv) == 0
    out = capsys.readouterr().out
    assert out.startswith("X,count,ratio\n10,6,1.381551\n")
    assert "10000,1015,0.934850" in out


def test_census_golden_mismatch():
    argv = ["census", "--f", "identity", "--checkpoints", "1e1", "--golden", "table1", "--threads", "1"]
    assert main(argv) == 1


def test_census_output_and_membership(tmp_path):
    output = tmp_path / "census.json"
    members = tmp_path / "members.txt"
    argv = [
        "census", "--f", "fn", "--param", "2", "--checkpoints", "100",
        "--format", "json", "--output", str(output), "--membership", str(members),
        "--threads", "1",
    ]
    assert main(argv) == 0
    report = json.loads(output.read_text())
    assert report["checkpoints"][0]["count"] == 51
    assert len(members.read_text().split()) == 51


def test_verify(capsys):
    assert main(["verify", "lambda-156", "s-identity", "--bound", "a_max=20", "--threads", "1"]) == 0
    out = capsys.readouterr().out
    assert "PASS lambda-156" in out
    assert "PASS s-identity (a_max=20)" in out


def test_density_target(capsys):
    assert main(["density", "--target", "0.1", "--eps", "0.01"]) == 0
    assert "n = 11" in capsys.readouterr().out


def test_density_target_not_found():
    assert main(["density", "--target", "0.9", "--bound", "1000"]) == 1


def test_density_estimate(capsys):
    assert main(["density", "--f", "fn", "--param", "6", "--limit", "1e4", "--threads", "1"]) == 0
    out = capsys.readouterr().out
    assert "6668 of 10000" in out
    assert "2/3" in out


def test_scan(capsys):
    assert main(["scan", "every-integer", "--f", "phi", "--p-max", "10", "--k-max", "5"]) == 1
    assert "counterexample at p=3, k=2" in capsys.readouterr().out
    assert main(["scan", "convenience", "--f", "identity", "--p-max", "20"]) == 0


def test_nonconstructible(capsys):
    assert main(["nonconstructible", "--f", "phi", "--limit", "1000"]) == 0
    found = capsys.readouterr().out.split()
    assert "315" in found
    assert "45" not in found
