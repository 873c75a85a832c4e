import json
import math

import pytest
from click.testing import CliRunner

from weilheight.cli import main


def invoke(*args):
    result = CliRunner().invoke(main, ["--quiet", *args])
    return result.exit_code, result.output


def report_of(*args):
    exit_code, output = invoke(*args)
    assert exit_code == 0, output
    return json.loads(output)


def test_height():
    report = report_of("height", "--field", "Q", "--elem", "2")
    assert abs(float(report["value"]) - math.log(2)) < 1e-12
    assert abs(float(report["mahler"]) - math.log(2)) < 1e-12
    assert abs(float(report["defect"])) < 1e-12
    assert report["method_agreement"]
    assert not report["torsion"]
    assert report["precision_bits"] == 128


def test_height_of_a_root_of_unity():
    report = report_of("height", "--field", "Q(zeta5)", "--elem", "-t")
    assert abs(float(report["value"])) < 1e-12
    assert report["torsion"]


def test_precision_option():
    report = report_of("--precision", "256", "height", "--field", "Q", "--elem", "3")
    assert report["precision_bits"] == 256


def test_output_file(tmp_path):
    path = tmp_path / "report.json"
    exit_code, output = invoke(
        "--output", str(path), "height", "--field", "Q", "--elem", "2"
    )
    assert exit_code == 0
    assert output == ""
    assert json.loads(path.read_text())["field"] == "Q"


def test_places():
    report = report_of("places", "--field", "Q(i)", "--place", "5", "--elem", "2 + t")
    assert report["place"] == "5"
    rows = {row["id"]: row for row in report["places"]}
    assert set(rows) == {"fin:5:2.1", "fin:5:3.1"}
    assert rows["fin:5:2.1"]["weight"] == "1/2"
    assert rows["fin:5:2.1"]["e"] == 1
    assert rows["fin:5:2.1"]["valuation"] == 1
    assert abs(float(rows["fin:5:2.1"]["log_abs"]) + math.log(5)) < 1e-12
    assert rows["fin:5:3.1"]["valuation"] == 0


def test_archimedean_places():
    report = report_of("places", "--field", "Q(sqrt2)")
    assert report["place"] == "inf"
    assert [row["local_degree"] for row in report["places"]] == [1, 1]


def test_fa():
    report = report_of("fa", "--tower", "Q<Q(i)", "--elem", "2 + t")
    assert report["level"] == 1
    assert report["support"] == ["inf", "5"]
    assert abs(float(report["integral"])) < 1e-12
    assert abs(float(report["l1_norm"]) - math.log(5)) < 1e-12
    assert abs(float(report["twice_height"]) - math.log(5)) < 1e-12


def test_partition():
    report = report_of("partition", "--tower", "Q<Q(i)", "--level", "1", "--place", "5")
    assert [cell["weight"] for cell in report["cells"]] == ["1/2", "1/2"]
    assert report["total"] == "1"
    assert report["lies_over"] == {"fin:5:2.1": "fin:5:0.1", "fin:5:3.1": "fin:5:0.1"}


def test_partition_of_the_base():
    report = report_of("partition", "--tower", "Q<Q(i)", "--level", "0")
    assert report["cells"] == [{"id": "arch:r0", "weight": "1"}]
    assert "lies_over" not in report


def test_galois():
    report = report_of("galois", "--field", "Q(i)", "--place", "5")
    assert report["orbits"] == [["fin:5:2.1", "fin:5:3.1"]]
    mappings = [entry["mapping"] for entry in report["automorphisms"]]
    assert {"fin:5:2.1": "fin:5:3.1", "fin:5:3.1": "fin:5:2.1"} in mappings


def test_approx_from_values():
    report = report_of(
        "--den",
        "100",
        "approx",
        "--tower",
        "Q",
        "--value",
        "arch:r0=1",
        "--value",
        "fin:2:0.1=-1",
        "--basis",
        "2",
    )
    assert report["coefficients"] == ["88/61"]
    assert report["denominator_bound"] == 100
    assert abs(report["real_coefficients"][0] - 1 / math.log(2)) < 1e-12


def test_approx_from_a_function_file(tmp_path):
    fa = report_of("fa", "--tower", "Q<Q(i)", "--elem", "(2 + t)^2 / (2 - t)")
    path = tmp_path / "target.json"
    path.write_text(json.dumps(fa))
    report = report_of(
        "approx", "--target", str(path), "--basis", "2 + t", "--basis", "2 - t"
    )
    assert report["coefficients"] == ["2", "-1"]
    assert abs(float(report["residual_l1"])) < 1e-12


def test_check(tmp_path):
    path = tmp_path / "corpus.json"
    corpus = {
        "label": "tiny",
        "elements": [{"tower": "Q", "elem": "12/5"}],
        "sunits": [{"field": "Q", "primes": [2, 3], "generators": ["2", "3"]}],
    }
    path.write_text(json.dumps(corpus))
    report = report_of("check", "--corpus", str(path))
    assert report["corpus"] == "tiny"
    assert report["passed"] == 7
    assert report["failed"] == 0


def test_check_exits_1_on_a_failure(tmp_path):
    path = tmp_path / "corpus.json"
    corpus = {"sunits": [{"field": "Q", "primes": [2, 3], "generators": ["2", "4"]}]}
    path.write_text(json.dumps(corpus))
    exit_code, output = invoke("check", "--corpus", str(path))
    assert exit_code == 1
    assert json.loads(output)["failed"] == 1


@pytest.mark.parametrize(
    "args, code",
    [
        (("height", "--field", "Q", "--elem", "0"), "ZeroElement"),
        (("height", "--field", "Q(j)", "--elem", "2"), "ParserException"),
        (("height", "--field", "Q", "--elem", "2 +"), "ParserException"),
        (("height", "--field", "Q", "--elem", "t^99999999"), "ParserException"),
        (("fa", "--tower", "Q<Q(i)", "--level", "3", "--elem", "2"), "NoSuchLevel"),
        (("approx", "--tower", "Q", "--value", "arch:r0=1", "--basis", "2"), "NotInX"),
    ],
)
def test_domain_errors(args, code):
    exit_code, output = invoke(*args)
    assert exit_code == 1
    assert json.loads(output)["error"] == code


def test_internal_errors_are_reported_as_json(monkeypatch):
    def broken(reference):
        raise ValueError("cannot factor 0")

    monkeypatch.setattr("weilheight.cli.load_field", broken)
    exit_code, output = invoke("height", "--field", "Q", "--elem", "2")
    assert exit_code == 1
    assert json.loads(output) == {
        "error": "InternalError",
        "message": "ValueError: cannot factor 0",
    }


@pytest.mark.parametrize(
    "args",
    [
        ("places", "--field", "Q", "--place", "4"),
        ("--precision", "20", "height", "--field", "Q", "--elem", "2"),
        ("height", "--field", "Q"),
        ("approx", "--basis", "2"),
        ("approx", "--tower", "Q", "--value", "arch:r0", "--basis", "2"),
    ],
)
def test_usage_errors(args):
    exit_code, _ = invoke(*args)
    assert exit_code == 2
