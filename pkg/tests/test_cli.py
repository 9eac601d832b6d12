"""End-to-end CLI tests, run in-process through main(argv)."""

import json

import pytest

from melplag.cli import main
from melplag.core import serialize_notelist
from melplag.datagen import random_melody, synth_corpus

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


@pytest.fixture
def piece_file(tmp_path):
    piece = random_melody("solo", seed=12, min_notes=30, max_notes=30)
    path = tmp_path / "solo.json"
    path.write_text(serialize_notelist(piece))
    return path


@pytest.fixture
def corpus(tmp_path):
    directory = tmp_path / "corpus"
    synth_corpus(directory, 8, seed=77)
    return directory


class TestCompare:
    def test_self_compare(self, piece_file, capsys):
        assert main(["compare", str(piece_file), str(piece_file)]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["degree"] == pytest.approx(1.0, abs=1e-12)
        assert payload["left"] == "solo"
        assert payload["right"] == "solo"
        assert "version" in payload

    def test_missing_file_exits_2(self, piece_file, capsys):
        rc = main(["compare", "no-such-file.json", str(piece_file)])
        assert rc == 2
        assert "no-such-file.json" in capsys.readouterr().err

    def test_params_echoed(self, piece_file, capsys):
        rc = main(["compare", str(piece_file), str(piece_file), "--l", "8", "--r", "0.5"])
        assert rc == 0
        params = json.loads(capsys.readouterr().out)["params"]
        assert params["l"] == 8
        assert params["r"] == 0.5

    def test_bad_l_exits_3(self, piece_file, capsys):
        rc = main(["compare", str(piece_file), str(piece_file), "--l", "1"])
        assert rc == 3

    def test_pretty_table(self, piece_file, capsys):
        rc = main(["compare", str(piece_file), str(piece_file), "--pretty"])
        assert rc == 0
        out = capsys.readouterr().out
        assert "degree: 1.0000" in out
        assert "suspect" in out

    def test_out_file(self, piece_file, tmp_path, capsys):
        out = tmp_path / "report.json"
        assert main(["compare", str(piece_file), str(piece_file), "--out", str(out)]) == 0
        written = json.loads(out.read_text())
        assert written == json.loads(capsys.readouterr().out)

    def test_figures(self, piece_file, tmp_path, capsys):
        figdir = tmp_path / "figs"
        rc = main(["compare", str(piece_file), str(piece_file), "--figures", str(figdir)])
        assert rc == 0
        (png,) = figdir.glob("*.png")
        assert png.read_bytes().startswith(PNG_MAGIC)

    def test_config_file_and_flag_precedence(self, piece_file, tmp_path, capsys):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"l": 8, "r": 0.25}))
        rc = main(
            ["compare", str(piece_file), str(piece_file), "--config", str(config), "--l", "4"]
        )
        assert rc == 0
        params = json.loads(capsys.readouterr().out)["params"]
        assert params["l"] == 4  # flag wins
        assert params["r"] == 0.25  # config file beats default

    def test_unknown_config_key_exits_3(self, piece_file, tmp_path, capsys):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"window": 9}))
        rc = main(["compare", str(piece_file), str(piece_file), "--config", str(config)])
        assert rc == 3


class TestUsageErrors:
    def test_no_command(self):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 3

    def test_unknown_command(self):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 3

    def test_bad_detector_choice(self, piece_file, corpus):
        with pytest.raises(SystemExit) as exc:
            main(["rank", str(piece_file), str(corpus), "--detector", "magic"])
        assert exc.value.code == 3

    def test_gen_requires_seed(self, corpus):
        with pytest.raises(SystemExit) as exc:
            main(["gen", "--corpus", str(corpus)])
        assert exc.value.code == 3

    def test_bad_counts_syntax(self, corpus):
        with pytest.raises(SystemExit) as exc:
            main(["gen", "--corpus", str(corpus), "--seed", "1", "--counts", "t:2"])
        assert exc.value.code == 3

    def test_version(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--version"])
        assert exc.value.code == 0
        assert "melplag" in capsys.readouterr().out


class TestRank:
    def test_exact_copy_ranks_first(self, corpus, capsys):
        query = sorted(corpus.glob("*.json"))[0]
        assert main(["rank", str(query), str(corpus)]) == 0
        lines = capsys.readouterr().out.strip().split("\n")
        assert lines[0] == "rank\tscore\tid"
        first = lines[1].split("\t")
        assert first == ["1", "1.000000", query.stem]
        assert len(lines) == 1 + 8

    def test_top_truncation(self, corpus, capsys):
        query = sorted(corpus.glob("*.json"))[0]
        assert main(["rank", str(query), str(corpus), "--top", "1"]) == 0
        lines = capsys.readouterr().out.strip().split("\n")
        assert len(lines) == 2

    def test_detector_flag(self, corpus, capsys):
        query = sorted(corpus.glob("*.json"))[1]
        assert main(["rank", str(query), str(corpus), "--detector", "ukkonen"]) == 0
        lines = capsys.readouterr().out.strip().split("\n")
        scores = [float(line.split("\t")[1]) for line in lines[1:]]
        assert scores == sorted(scores, reverse=True)
        assert all(0.0 <= s <= 1.0 for s in scores)

    def test_empty_corpus_exits_2(self, piece_file, tmp_path, capsys):
        empty = tmp_path / "empty"
        empty.mkdir()
        assert main(["rank", str(piece_file), str(empty)]) == 2


class TestGenEval:
    def test_gen_and_eval_pipeline(self, corpus, tmp_path, capsys):
        cases = tmp_path / "cases"
        rc = main(
            ["gen", "--corpus", str(corpus), "--seed", "9",
             "--counts", "t=2,p=2,d=2", "--out", str(cases)]
        )
        assert rc == 0
        out = capsys.readouterr().out
        assert "6 cases" in out
        assert (cases / "manifest.json").is_file()
        assert len(list(cases.glob("case*.json"))) == 6

        results = tmp_path / "results.json"
        rc = main(
            ["eval", "--manifest", str(cases / "manifest.json"),
             "--detectors", "bmm,ukkonen", "--out", str(results)]
        )
        assert rc == 0
        table = capsys.readouterr().out
        assert table.splitlines()[0].split() == ["detector", "type", "cases", "ARI", "Acc"]
        assert sum(1 for line in table.splitlines() if line.startswith("bmm")) == 3
        assert sum(1 for line in table.splitlines() if line.startswith("ukkonen")) == 3
        payload = json.loads(results.read_text())
        assert set(payload["results"]) == {"bmm", "ukkonen"}
        assert "version" in payload

    def test_gen_deterministic_bytes(self, corpus, tmp_path, capsys):
        for name in ("a", "b"):
            rc = main(
                ["gen", "--corpus", str(corpus), "--seed", "4",
                 "--counts", "t=1,p=1", "--out", str(tmp_path / name)]
            )
            assert rc == 0
        capsys.readouterr()
        a = (tmp_path / "a" / "manifest.json").read_bytes()
        b = (tmp_path / "b" / "manifest.json").read_bytes()
        assert a == b

    def test_eval_figures(self, corpus, tmp_path, capsys):
        cases = tmp_path / "cases"
        main(["gen", "--corpus", str(corpus), "--seed", "9",
              "--counts", "t=1,p=1,d=1", "--out", str(cases)])
        figdir = tmp_path / "figs"
        rc = main(
            ["eval", "--manifest", str(cases / "manifest.json"), "--figures", str(figdir)]
        )
        assert rc == 0
        capsys.readouterr()
        png = figdir / "eval-metrics.png"
        assert png.read_bytes().startswith(PNG_MAGIC)

    def test_eval_missing_manifest_exits_2(self, tmp_path, capsys):
        rc = main(["eval", "--manifest", str(tmp_path / "nope.json")])
        assert rc == 2
