import json
import subprocess
import sys

import pytest

from alblid.cli import main
from conftest import ARTICLES, FOLDERS


@pytest.fixture(scope="module")
def model_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "models.tsv"
    assert main(["train", str(ARTICLES), "-o", str(path)]) == 0
    return path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


class TestTrain:
    def test_folders(self, tmp_path, capsys):
        code, out, _ = run(capsys, "train", FOLDERS, "-o", tmp_path / "m.tsv")
        assert code == 0
        rows = out.splitlines()[1:]
        assert 2 <= len(rows) <= 3
        assert all(int(r.split("\t")[1]) > 0 for r in rows)

    def test_retrain_identical_bytes(self, tmp_path, capsys, model_file):
        again = tmp_path / "again.tsv"
        run(capsys, "train", ARTICLES, "-o", again)
        assert again.read_bytes() == model_file.read_bytes()

    def test_empty_folder(self, tmp_path, capsys):
        (tmp_path / "corpus").mkdir()
        code, _, err = run(capsys, "train", tmp_path / "corpus", "-o", tmp_path / "m.tsv")
        assert code != 0 and "error" in err
        assert not (tmp_path / "m.tsv").exists()

    @pytest.mark.parametrize("flags", [["--alpha", "0"], ["--ngram-min", "3", "--ngram-max", "2"], ["--rank-max", "9"]])
    def test_invalid_config(self, tmp_path, capsys, flags):
        code, _, err = run(capsys, "train", FOLDERS, "-o", tmp_path / "m.tsv", *flags)
        assert code != 0
        assert len(err.strip().splitlines()) == 1

    def test_bad_flag_value(self, tmp_path, capsys):
        with pytest.raises(SystemExit) as info:
            main(["train", str(FOLDERS), "-o", str(tmp_path / "m"), "--profile-size", "zero"])
        assert info.value.code == 2


class TestIdentify:
    def test_albanian(self, tmp_path, capsys, model_file):
        path = tmp_path / "in.txt"
        path.write_text("Ndryshimet u ruajtën me sukses në bazën e të dhënave.", encoding="utf-8")
        code, out, _ = run(capsys, "identify", model_file, path)
        assert code == 0 and out.split("\t")[0] == "sq"

    @pytest.mark.parametrize("method", ["rank-order", "cfa", "cosine", "short-words"])
    def test_methods(self, tmp_path, capsys, model_file, method):
        path = tmp_path / "in.txt"
        path.write_text("The changes were saved to the database successfully.", encoding="utf-8")
        code, out, _ = run(capsys, "identify", model_file, path, "--method", method, "--verbose")
        assert code == 0 and out.split("\t")[0] == "en"
        assert len(out.splitlines()) >= 4

    def test_empty_input(self, tmp_path, capsys, model_file):
        path = tmp_path / "empty.txt"
        path.write_text("  \n", encoding="utf-8")
        code, _, err = run(capsys, "identify", model_file, path)
        assert code != 0 and "empty" in err

    def test_missing_model(self, tmp_path, capsys):
        code, _, err = run(capsys, "identify", tmp_path / "none.tsv", ARTICLES)
        assert code == 1 and err.startswith("alblid identify: error:")

    def test_stdin(self, model_file):
        result = subprocess.run([sys.executable, "-m", "alblid", "identify", str(model_file)],
                                input="Questo è un testo italiano molto semplice.".encode(), capture_output=True)
        assert result.returncode == 0
        assert result.stdout.decode().split("\t")[0] == "it"

    def test_empty_stdin(self, model_file):
        result = subprocess.run([sys.executable, "-m", "alblid", "identify", str(model_file)],
                                input=b"", capture_output=True)
        assert result.returncode != 0


def read_articles(path):
    return [json.loads(line) for line in path.read_text(encoding="utf-8").splitlines()]


class TestPerturb:
    def test_strip_all(self, tmp_path, capsys):
        out = tmp_path / "stripped.jsonl"
        assert run(capsys, "perturb", ARTICLES, "--variant", "strip-all", "-o", out)[0] == 0
        text = out.read_text(encoding="utf-8")
        assert not set(text) & set("ËëÇç")
        assert [r["id"] for r in read_articles(out)] == [r["id"] for r in read_articles(ARTICLES)]

    def test_strip_half_repeatable(self, tmp_path, capsys):
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        run(capsys, "perturb", ARTICLES, "--variant", "strip-half", "--seed", "42", "-o", a)
        run(capsys, "perturb", ARTICLES, "--variant", "strip-half", "--seed", "42", "-o", b)
        assert a.read_bytes() == b.read_bytes()
        assert set(a.read_text(encoding="utf-8")) & set("ëç")

    def test_strip_half_needs_seed(self, tmp_path, capsys):
        code, _, err = run(capsys, "perturb", ARTICLES, "--variant", "strip-half", "-o", tmp_path / "x")
        assert code != 0 and "--seed" in err

    def test_bad_probability(self, tmp_path):
        with pytest.raises(SystemExit) as info:
            main(["perturb", str(ARTICLES), "--variant", "strip-half", "--seed", "1", "--p", "1.5"])
        assert info.value.code == 2


class TestExcerpt:
    def test_counts(self, tmp_path, capsys):
        out = tmp_path / "ex.jsonl"
        code, stdout, _ = run(capsys, "excerpt", ARTICLES, "-o", out)
        assert code == 0
        records = read_articles(ARTICLES)
        long_enough = sum(len(r["content"].encode("utf-8")) >= 500 for r in records)
        assert stdout == f"kept\t{long_enough}\nexcluded\t{len(records) - long_enough}\n"
        assert all(len(r["content"].encode("utf-8")) <= 500 for r in read_articles(out))


class TestEvalCompare:
    def test_table(self, tmp_path, capsys, model_file):
        code, out, _ = run(capsys, "eval", model_file, ARTICLES, "--method", "naive-bayes", "--method", "cfa")
        assert code == 0
        lines = out.splitlines()
        assert len(lines) == 5
        for line in lines[1:]:
            accuracy = line.split()[3]
            assert len(accuracy.split(".")[1]) == 4

    def test_excerpt_variant_title_na(self, capsys, model_file):
        code, out, _ = run(capsys, "eval", model_file, ARTICLES, "--method", "naive-bayes", "--variant", "excerpt")
        assert code == 0
        assert "N/A" in out.splitlines()[1]

    def test_compare(self, tmp_path, capsys, model_file):
        clean, stripped = tmp_path / "clean.tsv", tmp_path / "stripped.tsv"
        common = ["--method", "naive-bayes", "--method", "rank-order", "--fields", "title", "--format", "tab-separated"]
        run(capsys, "eval", model_file, ARTICLES, *common, "-o", clean)
        run(capsys, "eval", model_file, ARTICLES, *common, "--variant", "strip-all", "-o", stripped)

        code, out, _ = run(capsys, "compare", clean, clean)
        assert code == 0
        assert [line.split("\t")[2] for line in out.splitlines()[1:]] == ["+0.0000", "+0.0000"]

        code, out, _ = run(capsys, "compare", clean, stripped)
        assert code == 0
        assert all(line.split("\t")[2].startswith("-") for line in out.splitlines()[1:])

    def test_compare_mismatch(self, tmp_path, capsys, model_file):
        a, b = tmp_path / "a.tsv", tmp_path / "b.tsv"
        run(capsys, "eval", model_file, ARTICLES, "--method", "cfa", "--format", "tab-separated", "-o", a)
        run(capsys, "eval", model_file, ARTICLES, "--method", "cosine", "--format", "tab-separated", "-o", b)
        code, _, err = run(capsys, "compare", a, b)
        assert code == 1 and "only one report" in err

    def test_unknown_field(self, capsys, model_file):
        code, _, err = run(capsys, "eval", model_file, ARTICLES, "--method", "cfa", "--fields", "body")
        assert code == 1 and len(err.strip().splitlines()) == 1
