import json

import pytest

from betaink.cli import main


def run(args):
    return main(args)


def test_full_cli_chain(tmp_path, capsys):
    ink = tmp_path / "corpus.json"
    assert run(["synth", "--out", str(ink), "--per-class", "4", "--seed", "3"]) == 0

    clean = tmp_path / "clean.json"
    assert run(["preprocess", "--in", str(ink), "--out", str(clean)]) == 0

    strokes = tmp_path / "corpus.strokes.json"
    assert run(["segment", "--in", str(ink), "--out", str(strokes)]) == 0
    docs = json.loads(strokes.read_text())
    assert len(docs) == 40
    first = docs[0]["strokes"][0]
    assert set(first) >= {"p", "q", "t0", "t1", "amplitude", "a", "b", "x0", "y0", "theta"}

    seqs = tmp_path / "corpus.seq.json"
    assert run(["encode", "--in", str(strokes), "--out", str(seqs), "--with-beta"]) == 0
    seq_docs = json.loads(seqs.read_text())
    assert len(seq_docs) == 40
    item = seq_docs[0]["items"][0]
    assert len(item["mu"]) == 4 and len(item["beta"]) == 10

    grown = tmp_path / "grown.json"
    assert run(["augment", "--in", str(ink), "--out", str(grown), "--multiplier", "2", "--seed", "1"]) == 0
    assert len(json.loads(grown.read_text())) == 80

    model = tmp_path / "model.json"
    report = tmp_path / "report.json"
    assert run([
        "train", "--in", str(ink), "--model", str(model), "--report", str(report),
        "--pipeline", "perceptual", "--epochs", "3", "--hidden", "8", "--split", "0.75",
    ]) == 0
    doc = json.loads(report.read_text())
    assert 0.0 <= doc["recognition_rate"] <= 1.0

    scores = tmp_path / "eval.json"
    assert run(["eval", "--in", str(ink), "--model", str(model), "--out", str(scores)]) == 0
    assert 0.0 <= json.loads(scores.read_text())["recognition_rate"] <= 1.0

    out = capsys.readouterr().out
    assert "recognition rate" in out


def test_gradcheck_verb(capsys):
    assert run(["gradcheck", "--repeats", "2", "--hidden", "4", "--steps", "5"]) == 0
    assert "gradient error" in capsys.readouterr().out


def test_text_format_round_trip(tmp_path):
    ink = tmp_path / "c.txt"
    assert run(["synth", "--out", str(ink), "--per-class", "1", "--format", "text", "--set", "letters"]) == 0
    out = tmp_path / "c2.txt"
    assert run(["preprocess", "--in", str(ink), "--out", str(out), "--format", "text"]) == 0
    assert out.read_bytes().startswith(b"@label")
