"""CLI dispatch: exit codes, report schema, determinism, set parsing."""

from __future__ import annotations

import json

import pytest

from sumsetlab.cli import dispatch, load_constants, parse_set, run_experiment, validate_report
from sumsetlab.pipelines import ConstantsConfig


def run_cli(capsys, argv):
    code = dispatch(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_oracle_longest_ap_exact_output(capsys):
    code, report = run_cli(capsys, ["oracle", "longest-ap", "--set", "[1,3,5,7]", "--json-only"])
    assert code == 0
    assert report["result"] == {"length": 4, "step": 2, "base": 1}
    validate_report(report)


def test_usage_error_exit_code(capsys):
    code, payload = run_cli(capsys, ["no-such-command"])
    assert code == 1
    assert "error" in payload


def test_input_error_exit_code(capsys):
    code, payload = run_cli(capsys, ["bohr", "--group", "zN:0", "--frequencies", "[1]", "--delta", "0.5"])
    assert code == 1
    assert payload["error"]["kind"] == "ValueError"


def test_missing_required_flags_are_input_errors(capsys):
    for argv in (
        ["find-ap", "dense", "--A", "[1]", "--B", "[1]"],
        ["find-ap", "ff", "--A", "[0]", "--B", "[0]"],
        ["oracle", "longest-ap"],
        ["oracle", "periods", "--A", "[0]"],
        ["bounds"],
    ):
        code, payload = run_cli(capsys, argv)
        assert code == 1, argv
        assert "error" in payload


def test_verification_failure_exit_code(capsys):
    # an absurd Bohr radius constant makes the translate check fail -> exit 2
    code, report = run_cli(
        capsys,
        [
            "almost-periods",
            "--group", "zN:31",
            "--A", "[0,1,2,3]",
            "--B", "[0,5,9]",
            "--epsilon", "0.2",
            "--seed", "1",
            "--constants", "c_bohr_radius=10",
            "--json-only",
        ],
    )
    assert code == 2
    assert report["verification"] == {"passed": False}


def test_bad_constants_rejected(capsys):
    code, payload = run_cli(
        capsys,
        ["bounds", "--N", "1e10", "--constants", "c_sample=-3"],
    )
    assert code == 1
    with pytest.raises(ValueError):
        load_constants(["c_sample=0"])
    assert load_constants(["c_sample=8"]).c_sample == 8.0
    assert load_constants(None) == ConstantsConfig()


def test_constants_from_file_and_manifest_echo(tmp_path, capsys):
    path = tmp_path / "constants.json"
    path.write_text(json.dumps({"C_sample": 8, "c_p": 2.0}))
    code, report = run_cli(
        capsys,
        ["bounds", "--N", "1e10", "--constants", str(path), "--json-only"],
    )
    assert code == 0
    assert report["manifest"]["constants"]["c_sample"] == 8.0
    assert report["manifest"]["constants"]["c_p"] == 2.0


def test_parse_set_variants(tmp_path):
    assert parse_set("[1, 2, 3]") == [1, 2, 3]
    assert parse_set('{"group": "zN:7", "support": [0, 2]}') == [0, 2]
    path = tmp_path / "set.json"
    path.write_text("[4, 5]")
    assert parse_set(str(path)) == [4, 5]


def test_find_ap_dense_cli_and_determinism(capsys):
    argv = [
        "find-ap", "dense",
        "--N", "30",
        "--A", json.dumps(list(range(1, 25))),
        "--B", json.dumps(list(range(1, 25))),
        "--seed", "7",
        "--oracle",
        "--json-only",
    ]
    code1, rep1 = run_cli(capsys, argv)
    code2, rep2 = run_cli(capsys, argv)
    assert code1 == code2 == 0
    assert rep1["result"]["witness"]["verified"] is True
    rep1["manifest"].pop("timestamp")
    rep2["manifest"].pop("timestamp")
    assert json.dumps(rep1, sort_keys=True) == json.dumps(rep2, sort_keys=True)


def test_embed_cli(capsys):
    code, report = run_cli(
        capsys, ["embed", "--A", "[0,1]", "--B", "[0,2]", "--k", "2", "--json-only"]
    )
    assert code == 0
    assert report["verification"] == {"passed": True}
    assert report["result"]["certificate"]["xi"]["den"] >= 1


def test_fourier_cli_direct_flag(capsys):
    code, report = run_cli(
        capsys,
        ["fourier", "--group", "zN:5", "--support", "[0,1]", "--convolve-with", "[0,1]", "--direct", "--json-only"],
    )
    assert code == 0
    values = [v[0] for v in report["result"]["function"]["values"]]
    assert values == pytest.approx([0.2, 0.4, 0.2, 0.0, 0.0], abs=1e-12)


def test_bohr_cli_with_chang(capsys):
    code, report = run_cli(
        capsys,
        [
            "bohr", "--group", "zN:13", "--frequencies", "[1]", "--delta", "1.0",
            "--materialize", "--find-ap", "--chang", "0.5", "--json-only",
        ],
    )
    assert code == 0
    assert report["result"]["size_bound"]["passed"]
    assert report["result"]["progression"]["length"] == 5
    assert report["result"]["members"] == [0, 1, 2, 11, 12]
    assert report["result"]["chang"]["dissociated"]


def test_sample_cli_trials(capsys):
    code, report = run_cli(
        capsys,
        [
            "sample", "--mode", "physical", "--group", "zN:31",
            "--A", json.dumps(list(range(10))), "--B", json.dumps(list(range(0, 30, 3))),
            "--epsilon", "0.4", "--trials", "20", "--seed", "3", "--json-only",
        ],
    )
    assert code == 0
    assert report["result"]["failure_rate"]["trials"] == 20


def test_experiment_zero_trials(tmp_path, capsys):
    spec = {"pipeline": "almost-periods", "trials": 0, "seed": 1,
            "instance": {"group": "zN:31"}, "params": {"epsilon": 0.4}}
    path = tmp_path / "batch.json"
    path.write_text(json.dumps(spec))
    code, report = run_cli(capsys, ["experiment", "--spec", str(path), "--json-only"])
    assert code == 0
    agg = report["result"]["aggregate"]
    assert agg["trials"] == 0 and agg["successes"] == 0 and agg["success_rate"] is None


def test_experiment_reproducible_aggregate():
    spec = {
        "pipeline": "sample-fourier",
        "trials": 10,
        "seed": 5,
        "instance": {"group": "zN:64", "size_a": 32, "size_b": 32},
        "params": {"epsilon": 0.3, "p": 2},
    }
    agg1 = run_experiment(spec, ConstantsConfig())
    agg2 = run_experiment(spec, ConstantsConfig())
    assert agg1 == agg2
    assert agg1["trials"] == 10


def test_experiment_plot_written(tmp_path):
    spec = {
        "pipeline": "find-ap-dense",
        "trials": 3,
        "seed": 2,
        "instance": {"N": 20, "density_a": 0.6, "density_b": 0.6},
        "plot": str(tmp_path / "lengths.svg"),
    }
    agg = run_experiment(spec, ConstantsConfig())
    assert (tmp_path / "lengths.svg").exists()
    assert agg["plot"] == str(tmp_path / "lengths.svg")


def test_experiment_remaining_generators():
    ff = {
        "pipeline": "find-ap-ff",
        "trials": 2,
        "seed": 3,
        "instance": {"group": "vec:2^5", "density_a": 0.5, "density_b": 0.5},
        "params": {"variant": "improved"},
    }
    agg = run_experiment(ff, ConstantsConfig())
    assert agg["successes"] == 2
    bog = {
        "pipeline": "bogolyubov",
        "trials": 2,
        "seed": 3,
        "instance": {"group": "vec:2^6", "subspace_dim": 3},
    }
    agg2 = run_experiment(bog, ConstantsConfig())
    assert agg2["successes"] == 2
    doubling = {
        "pipeline": "find-ap-doubling",
        "trials": 2,
        "seed": 3,
        "instance": {"size": 12, "range": 20, "equal": True},
    }
    agg3 = run_experiment(doubling, ConstantsConfig())
    assert agg3["successes"] == 2
    physical = {
        "pipeline": "sample-physical",
        "trials": 5,
        "seed": 3,
        "instance": {"group": "zN:31", "size_a": 10, "size_b": 10},
        "params": {"epsilon": 0.4, "p": 2},
    }
    agg4 = run_experiment(physical, ConstantsConfig())
    assert agg4["failure_rate"] == 0.0


def test_threads_env_does_not_change_results(monkeypatch):
    spec = {
        "pipeline": "sample-fourier",
        "trials": 8,
        "seed": 6,
        "instance": {"group": "zN:64", "size_a": 20, "size_b": 24},
        "params": {"epsilon": 0.3, "p": 2},
    }
    serial = run_experiment(spec, ConstantsConfig())
    monkeypatch.setenv("SUMSETLAB_THREADS", "4")
    threaded = run_experiment(spec, ConstantsConfig())
    assert serial == threaded


def test_schema_rejects_malformed_report():
    import jsonschema

    with pytest.raises(jsonschema.ValidationError):
        validate_report({"command": "x", "result": {}})
