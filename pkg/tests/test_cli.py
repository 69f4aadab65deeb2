"""End-to-end tests for the command-line front end.

All tests drive ``anonmix.cli.main`` in-process and inspect the files it
writes, the exit code, and what it prints.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import pytest

from anonmix import cli

RUN_ARTIFACTS = ("release.csv", "classes.json", "loss.json", "loss.csv", "partition_tree.json")

SWEEP_FIXED_COLUMNS = [
    "k",
    "lambda",
    "strategy",
    "ncp_total",
    "ncp_relational",
    "ncp_textual",
    "partitions",
    "mean_size",
    "std_size",
    "relational_splits",
    "textual_splits",
]


def io_argv(bundle) -> list[str]:
    return [
        "--schema", str(bundle.paths["schema"]),
        "--data", str(bundle.paths["data"]),
        "--annotations", str(bundle.paths["annotations"]),
    ]


def anonymize_argv(bundle, out: Path, *extra: str) -> list[str]:
    return ["anonymize", *io_argv(bundle), "--out", str(out), *extra]


def read_csv(path: Path) -> list[list[str]]:
    with path.open(newline="", encoding="utf-8") as handle:
        return [list(row) for row in csv.reader(handle)]


class TestAnonymize:
    def test_writes_all_artifacts(self, example, tmp_path):
        out = tmp_path / "run"
        rc = cli.main(anonymize_argv(example, out, "--k", "2", "--strategy", "gdf"))
        assert rc == cli.EXIT_OK
        for name in RUN_ARTIFACTS:
            assert (out / name).is_file(), name

    def test_release_matches_documented_output(self, example, golden_release, tmp_path):
        out = tmp_path / "run"
        cli.main(anonymize_argv(example, out, "--k", "2", "--strategy", "gdf"))
        assert (out / "release.csv").read_text(encoding="utf-8") == golden_release

    def test_prints_audit_verdict(self, example, tmp_path, capsys):
        cli.main(anonymize_argv(example, tmp_path / "run", "--k", "2", "--strategy", "gdf"))
        assert "audit passed" in capsys.readouterr().out

    def test_loss_json_shape(self, example, tmp_path):
        out = tmp_path / "run"
        cli.main(anonymize_argv(example, out, "--k", "2", "--strategy", "gdf"))
        loss = json.loads((out / "loss.json").read_text(encoding="utf-8"))
        assert loss["k"] == 2
        assert loss["lambda"] is None
        assert loss["strategy"] == "gdf"
        assert loss["partitions"] == 3
        assert 0.0 <= loss["ncp_total"] <= 1.0
        assert set(loss["per_attribute"]) == {"gender", "age", "topic", "sign", "date"}

    def test_loss_csv_matches_loss_json(self, example, tmp_path):
        out = tmp_path / "run"
        cli.main(anonymize_argv(example, out, "--k", "2", "--strategy", "gdf"))
        loss = json.loads((out / "loss.json").read_text(encoding="utf-8"))
        header, row = read_csv(out / "loss.csv")
        values = dict(zip(header, row))
        assert values["k"] == "2"
        assert values["lambda"] == ""
        assert values["strategy"] == "gdf"
        assert float(values["ncp_total"]) == loss["ncp_total"]

    def test_classes_json_shape(self, example, tmp_path):
        out = tmp_path / "run"
        cli.main(anonymize_argv(example, out, "--k", "2", "--strategy", "gdf"))
        classes = json.loads((out / "classes.json").read_text(encoding="utf-8"))
        assert sorted(tuple(c["members"]) for c in classes) == [("1", "2"), ("3", "5"), ("4", "6")]
        for cls in classes:
            assert set(cls["cells"]) == {"gender", "age", "topic", "sign", "date"}
            assert isinstance(cls["retained_terms"], list)
            assert isinstance(cls["suppressed_term_count"], int)

    def test_partition_tree_covers_all_persons(self, example, tmp_path):
        out = tmp_path / "run"
        cli.main(anonymize_argv(example, out, "--k", "2", "--strategy", "gdf"))
        tree = json.loads((out / "partition_tree.json").read_text(encoding="utf-8"))
        assert "split" in tree and tree["split"]["kind"] == "textual"

        def leaves(node):
            if "members" in node:
                yield from node["members"]
            else:
                for child in node["children"]:
                    yield from leaves(child)

        assert sorted(leaves(tree)) == ["1", "2", "3", "4", "5", "6"]

    def test_defaults_to_mondrian_half_lambda(self, example, tmp_path):
        out = tmp_path / "run"
        rc = cli.main(anonymize_argv(example, out, "--k", "2"))
        assert rc == cli.EXIT_OK
        loss = json.loads((out / "loss.json").read_text(encoding="utf-8"))
        assert loss["strategy"] == "mondrian"
        assert loss["lambda"] == 0.5

    def test_drop_direct_id_blanks_first_column(self, example, tmp_path):
        out = tmp_path / "run"
        cli.main(anonymize_argv(example, out, "--k", "2", "--drop-direct-id"))
        header, *rows = read_csv(out / "release.csv")
        assert header[0] == "id"
        assert all(row[0] == "" for row in rows)

    def test_entity_filter_restricts_terms(self, example, tmp_path):
        out = tmp_path / "run"
        rc = cli.main(
            anonymize_argv(example, out, "--k", "2", "--entities", "LOCATION")
        )
        assert rc == cli.EXIT_OK
        loss = json.loads((out / "loss.json").read_text(encoding="utf-8"))
        assert set(loss["per_entity_type"]) == {"LOCATION"}

    @pytest.mark.parametrize(
        ("extra", "message"),
        [
            (["--k", "7"], "fewer than k=7"),
            (["--k", "2", "--lambda", "1.5"], "lambda must lie in [0,1]"),
            (["--k", "2", "--wa", "-1"], "weights"),
            (["--k", "2", "--jobs", "0"], "jobs must be at least 1"),
        ],
    )
    def test_configuration_errors_exit_2(self, example, tmp_path, capsys, extra, message):
        rc = cli.main(anonymize_argv(example, tmp_path / "run", *extra))
        assert rc == cli.EXIT_VALIDATION
        err = capsys.readouterr().err
        assert err.startswith("error:")
        assert message in err

    def test_missing_data_file_exits_2(self, example, tmp_path, capsys):
        argv = anonymize_argv(example, tmp_path / "run", "--k", "2")
        argv[argv.index("--data") + 1] = str(tmp_path / "absent.csv")
        rc = cli.main(argv)
        assert rc == cli.EXIT_VALIDATION
        assert capsys.readouterr().err.startswith("error:")

    def test_malformed_schema_exits_2(self, example, tmp_path, capsys):
        bad_schema = tmp_path / "schema.json"
        bad_schema.write_text("{\"attributes\": []}", encoding="utf-8")
        argv = anonymize_argv(example, tmp_path / "run", "--k", "2")
        argv[argv.index("--schema") + 1] = str(bad_schema)
        rc = cli.main(argv)
        assert rc == cli.EXIT_VALIDATION
        assert "error:" in capsys.readouterr().err

    def test_unknown_strategy_rejected_by_parser(self, example, tmp_path, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(anonymize_argv(example, tmp_path / "run", "--k", "2",
                                    "--strategy", "random"))
        assert exc.value.code == 2

    def test_no_artifacts_on_failure(self, example, tmp_path):
        out = tmp_path / "run"
        rc = cli.main(anonymize_argv(example, out, "--k", "7"))
        assert rc == cli.EXIT_VALIDATION
        assert not out.exists()


class TestSweep:
    def sweep_argv(self, bundle, out: Path, *extra: str) -> list[str]:
        return ["sweep", *io_argv(bundle), "--out", str(out), *extra]

    def test_grid_order_and_shape(self, example, tmp_path):
        out = tmp_path / "grid"
        rc = cli.main(
            self.sweep_argv(
                example, out,
                "--k-list", "3,2",
                "--lambda-list", "1,0,0.5",
                "--strategy", "gdf,mondrian",
            )
        )
        assert rc == cli.EXIT_OK
        header, *rows = read_csv(out / "sweep.csv")
        assert header[: len(SWEEP_FIXED_COLUMNS)] == SWEEP_FIXED_COLUMNS
        entity_columns = header[len(SWEEP_FIXED_COLUMNS):]
        assert entity_columns == sorted(entity_columns)
        assert all(column.startswith("ncp_") for column in entity_columns)
        cells = [(row[0], row[1], row[2]) for row in rows]
        assert cells == [
            ("2", "", "gdf"),
            ("2", "0.0", "mondrian"),
            ("2", "0.5", "mondrian"),
            ("2", "1.0", "mondrian"),
            ("3", "", "gdf"),
            ("3", "0.0", "mondrian"),
            ("3", "0.5", "mondrian"),
            ("3", "1.0", "mondrian"),
        ]

    def test_single_strategy_without_lambdas(self, example, tmp_path):
        out = tmp_path / "grid"
        rc = cli.main(self.sweep_argv(example, out, "--k-list", "2", "--strategy", "gdf"))
        assert rc == cli.EXIT_OK
        header, *rows = read_csv(out / "sweep.csv")
        assert [(row[0], row[2]) for row in rows] == [("2", "gdf")]

    def test_parallel_run_is_byte_identical(self, example, tmp_path):
        args = ["--k-list", "2,3", "--lambda-list", "0,0.5,1", "--strategy", "gdf,mondrian"]
        serial = tmp_path / "serial"
        parallel = tmp_path / "parallel"
        assert cli.main(self.sweep_argv(example, serial, *args, "--jobs", "1")) == cli.EXIT_OK
        assert cli.main(self.sweep_argv(example, parallel, *args, "--jobs", "2")) == cli.EXIT_OK
        assert (serial / "sweep.csv").read_bytes() == (parallel / "sweep.csv").read_bytes()

    @pytest.mark.parametrize(
        ("extra", "message"),
        [
            (["--k-list", "2", "--strategy", "simulated-annealing"], "unknown strategy"),
            (["--k-list", "two"], "cannot parse"),
            (["--k-list", ""], "no values given"),
            (["--k-list", "2", "--lambda-list", "half"], "cannot parse"),
        ],
    )
    def test_bad_grid_arguments_exit_2(self, example, tmp_path, capsys, extra, message):
        rc = cli.main(self.sweep_argv(example, tmp_path / "grid", *extra))
        assert rc == cli.EXIT_VALIDATION
        assert message in capsys.readouterr().err


class TestEvaluate:
    def evaluate_argv(self, bundle, release: Path, *extra: str) -> list[str]:
        return ["evaluate", *io_argv(bundle), "--release", str(release), *extra]

    @pytest.fixture()
    def release_dir(self, example, tmp_path) -> Path:
        out = tmp_path / "run"
        assert cli.main(anonymize_argv(example, out, "--k", "2", "--strategy", "gdf")) == cli.EXIT_OK
        return out

    def test_accepts_own_release(self, example, release_dir, tmp_path, capsys):
        report_dir = tmp_path / "report"
        rc = cli.main(
            self.evaluate_argv(
                example, release_dir / "release.csv", "--k", "2", "--out", str(report_dir)
            )
        )
        assert rc == cli.EXIT_OK
        assert "audit passed" in capsys.readouterr().out
        evaluation = json.loads((report_dir / "evaluation.json").read_text(encoding="utf-8"))
        loss = json.loads((release_dir / "loss.json").read_text(encoding="utf-8"))
        assert evaluation["strategy"] == "evaluate"
        assert evaluation["ncp_total"] == pytest.approx(loss["ncp_total"], abs=1e-12)

    def test_report_is_optional(self, example, release_dir, tmp_path):
        rc = cli.main(self.evaluate_argv(example, release_dir / "release.csv", "--k", "2"))
        assert rc == cli.EXIT_OK

    def test_tampered_release_exits_3(self, example, release_dir, tmp_path, capsys):
        rows = read_csv(release_dir / "release.csv")
        rows[1][2] = "[20-40]"
        tampered = tmp_path / "tampered.csv"
        with tampered.open("w", newline="", encoding="utf-8") as handle:
            csv.writer(handle, lineterminator="\n").writerows(rows)
        rc = cli.main(self.evaluate_argv(example, tampered, "--k", "2"))
        assert rc == cli.EXIT_AUDIT
        assert "FAILED" in capsys.readouterr().out

    def test_unreachable_k_exits_3(self, example, release_dir, capsys):
        rc = cli.main(self.evaluate_argv(example, release_dir / "release.csv", "--k", "3"))
        assert rc == cli.EXIT_AUDIT
        assert "FAILED" in capsys.readouterr().out

    def test_empty_release_exits_2(self, example, tmp_path, capsys):
        empty = tmp_path / "release.csv"
        empty.write_text("", encoding="utf-8")
        rc = cli.main(self.evaluate_argv(example, empty, "--k", "2"))
        assert rc == cli.EXIT_VALIDATION
        assert "is empty" in capsys.readouterr().err

    def test_drop_direct_id_round_trip(self, example, tmp_path):
        out = tmp_path / "run"
        cli.main(anonymize_argv(example, out, "--k", "2", "--drop-direct-id"))
        rc = cli.main(
            self.evaluate_argv(example, out / "release.csv", "--k", "2", "--drop-direct-id")
        )
        assert rc == cli.EXIT_OK


def test_subcommand_is_required():
    with pytest.raises(SystemExit) as exc:
        cli.main([])
    assert exc.value.code == 2
