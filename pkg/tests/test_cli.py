import csv
import json

import pytest

jsonschema = pytest.importorskip("jsonschema")

from varclust.cli import main

from .conftest import DATA_DIR

SCHEMA_DIR = None


def schema(name):
    global SCHEMA_DIR
    if SCHEMA_DIR is None:
        import varclust
        from pathlib import Path

        SCHEMA_DIR = Path(varclust.__file__).parent / "schemas"
    with open(SCHEMA_DIR / name, encoding="utf-8") as fh:
        return json.load(fh)


def read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def read_csv_rows(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.reader(fh))


DECATHLON = str(DATA_DIR / "decathlon.csv")
WINE = str(DATA_DIR / "wine.csv")


class TestHclustCommand:
    def test_decathlon_outputs(self, tmp_path):
        out = tmp_path / "o"
        code = main(
            ["hclust", DECATHLON, "--quali", "", "--levels-csv", "--newick",
             "--svg", "--out", str(out)]
        )
        assert code == 0
        rows = read_csv_rows(out / "levels.csv")
        assert rows[0] == ["K", "height"]
        assert len(rows) - 1 == 9
        payload = read_json(out / "hierarchy.json")
        jsonschema.validate(payload, schema("hierarchy.schema.json"))
        assert len(payload["leaves"]) == 10
        assert len(payload["merges"]) == 9
        assert (out / "tree.nwk").read_text().count(",") == 9
        assert (out / "dendrogram.svg").read_text().startswith("<svg")
        report = read_json(out / "run_report.json")
        jsonschema.validate(report, schema("run_report.schema.json"))

    def test_wine_has_31_leaves(self, tmp_path):
        out = tmp_path / "o"
        code = main(["hclust", WINE, "--quali", "Label,Soil", "--out", str(out)])
        assert code == 0
        payload = read_json(out / "hierarchy.json")
        assert len(payload["leaves"]) == 31

    def test_missing_file_exits_2(self, tmp_path, capsys):
        code = main(["hclust", str(tmp_path / "nope.csv"), "--out", str(tmp_path)])
        assert code == 2
        assert "error" in capsys.readouterr().err


class TestCutCommand:
    def test_decathlon_k3_scores(self, tmp_path):
        out = tmp_path / "o"
        code = main(
            ["cut", DECATHLON, "3", "--quali", "", "--matsim", "--out", str(out)]
        )
        assert code == 0
        payload = read_json(out / "partition.json")
        jsonschema.validate(payload, schema("partition.schema.json"))
        rows = read_csv_rows(out / "scores.csv")
        assert len(rows) - 1 == 41
        assert rows[0] == ["", "cluster1", "cluster2", "cluster3"]
        first = [abs(float(v)) for v in rows[1][1:]]
        assert first == pytest.approx(
            [0.2640687, 1.0353928, 1.4405915], abs=1e-3
        )
        assert payload["sim"] is not None
        assert payload["cluster"]["100m"] == 1

    def test_wine_k6_soil_loading(self, tmp_path):
        out = tmp_path / "o"
        code = main(["cut", WINE, "6", "--quali", "Label,Soil", "--out", str(out)])
        assert code == 0
        payload = read_json(out / "partition.json")
        soil_cluster = payload["cluster"]["Soil"]
        loadings = payload["var"][f"cluster{soil_cluster}"]
        assert loadings["Soil"] == pytest.approx(0.7768805, abs=1e-3)

    def test_k1_gain_zero(self, tmp_path):
        out = tmp_path / "o"
        assert main(["cut", DECATHLON, "1", "--quali", "", "--out", str(out)]) == 0
        payload = read_json(out / "partition.json")
        assert payload["E"] == pytest.approx(0.0, abs=1e-10)

    def test_invalid_k_exits_2(self, tmp_path):
        assert main(["cut", DECATHLON, "0", "--quali", "", "--out", str(tmp_path)]) == 2
        assert main(["cut", DECATHLON, "99", "--quali", "", "--out", str(tmp_path)]) == 2


class TestKmeansCommand:
    def test_wine_kmeans_runs(self, tmp_path):
        out = tmp_path / "o"
        code = main(
            ["kmeans", WINE, "6", "--quali", "Label,Soil", "--nstart", "10",
             "--seed", "1", "--out", str(out)]
        )
        assert code == 0
        payload = read_json(out / "partition.json")
        jsonschema.validate(payload, schema("partition.schema.json"))
        assert payload["meta"]["converged"] is True
        assert payload["meta"]["seed"] == 1
        assert 0.0 < payload["E"] < 100.0

    def test_seeded_rerun_is_byte_identical(self, tmp_path):
        outs = []
        for sub in ("a", "b"):
            out = tmp_path / sub
            main(
                ["kmeans", WINE, "6", "--quali", "Label,Soil", "--nstart", "3",
                 "--seed", "9", "--out", str(out)]
            )
            outs.append((out / "partition.json").read_bytes())
        assert outs[0] == outs[1]

    def test_init_from_partition(self, tmp_path):
        base = tmp_path / "base"
        main(["cut", DECATHLON, "3", "--quali", "", "--out", str(base)])
        out = tmp_path / "km"
        code = main(
            ["kmeans", DECATHLON, "3", "--quali", "", "--init-from",
             str(base / "partition.json"), "--out", str(out)]
        )
        assert code == 0
        payload = read_json(out / "partition.json")
        start = read_json(base / "partition.json")
        assert payload["wss"] >= start["wss"] - 1e-10

    def test_k_exceeding_p_exits_2(self, tmp_path):
        code = main(
            ["kmeans", DECATHLON, "11", "--quali", "", "--out", str(tmp_path)]
        )
        assert code == 2


class TestStabilityCommand:
    def test_decathlon_curve(self, tmp_path):
        out = tmp_path / "o"
        code = main(
            ["stability", DECATHLON, "--quali", "", "--B", "5", "--seed", "7",
             "--svg", "--out", str(out)]
        )
        assert code == 0
        rows = read_csv_rows(out / "stability_curve.csv")
        assert rows[0] == ["K", "mean_ARI"]
        assert len(rows) - 1 == 8
        mat = read_csv_rows(out / "stability_matCR.csv")
        assert len(mat) - 1 == 5
        assert len(mat[0]) == 8
        report = read_json(out / "stability_report.json")
        jsonschema.validate(report, schema("stability_report.schema.json"))
        assert (out / "stability_curve.svg").read_text().startswith("<svg")

    def test_strict_rare_on_wine_exits_3(self, tmp_path, capsys):
        # Soil's rarest level sits on 2 of 21 rows; with enough replicates
        # a resample missing both rows is certain to appear
        code = main(
            ["stability", WINE, "--quali", "Label,Soil", "--B", "40",
             "--seed", "7", "--strict-rare", "--out", str(tmp_path)]
        )
        assert code == 3
        assert "Soil" in capsys.readouterr().err


class TestSimCommand:
    def test_fixture_pair(self, capsys):
        assert main(["sim", DECATHLON, "100m", "Long.jump", "--quali", ""]) == 0
        out = capsys.readouterr().out.strip()
        assert float(out) == pytest.approx(0.36, abs=0.005)

    def test_self_similarity_prints_seven_digits(self, capsys):
        assert main(["sim", DECATHLON, "400m", "400m", "--quali", ""]) == 0
        assert capsys.readouterr().out.strip() == "1.0000000"

    def test_unknown_column_exits_2(self, capsys):
        assert main(["sim", DECATHLON, "400m", "nope", "--quali", ""]) == 2


class TestInspectCommand:
    def test_wine_summary(self, capsys):
        assert main(["inspect", WINE, "--quali", "Label,Soil"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["n_obs"] == 21
        assert payload["p_quantitative"] == 29
        assert payload["p_qualitative"] == 2
        soil = next(v for v in payload["variables"] if v["name"] == "Soil")
        assert len(soil["levels"]) == 4


class TestReproducibility:
    def test_hclust_payload_byte_identical(self, tmp_path):
        blobs = []
        for sub in ("a", "b"):
            out = tmp_path / sub
            main(["hclust", DECATHLON, "--quali", "", "--newick", "--out", str(out)])
            blobs.append(
                (out / "hierarchy.json").read_bytes()
                + (out / "tree.nwk").read_bytes()
            )
        assert blobs[0] == blobs[1]
