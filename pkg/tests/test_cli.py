import shutil
from pathlib import Path

import pytest

from etrforge.cli import main

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


@pytest.fixture
def work(tmp_path):
    for p in SAMPLES.rglob("*"):
        if p.is_file():
            dest = tmp_path / p.relative_to(SAMPLES)
            dest.parent.mkdir(parents=True, exist_ok=True)
            shutil.copy(p, dest)
    return tmp_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_qbf_pipeline_matches_direct_evaluation(work, capsys):
    code, out, _ = run(capsys, "eval", "--qbf", work / "xor.qbf")
    direct = out.strip()
    assert run(capsys, "reduce", "--pass", "qbf-to-pietr", "--in", work / "xor.qbf", "--out", work / "xor.etr")[0] == 0
    code2, out2, _ = run(capsys, "decide", "--in", work / "xor.etr")
    assert out2.strip() == direct
    assert code2 == code


def test_exit_codes(work, capsys):
    assert run(capsys, "decide", "--in", work / "sum.etr")[0] == 0
    assert run(capsys, "check-witness", "--in", work / "unit.etr", "--witness", work / "unit.wit")[0] == 0
    assert run(capsys, "check-witness", "--in", work / "unit.etr", "--witness", work / "norm2.wit")[0] == 1
    code, _, err = run(capsys, "decide", "--in", work / "half.etr")
    assert code == 3 and "UNDECIDABLE" in err
    code, _, err = run(capsys, "parse", "--kind", "sigma-etr", "--in", work / "invalid" / "bad-sigma.etr")
    assert code == 2 and "DIALECT_VIOLATION" in err
    assert run(capsys, "no-such-command")[0] == 2
    assert run(capsys, "parse", "--in", work / "missing.etr")[0] == 2


def test_expansion_cap_is_a_capability_error(work, capsys):
    code, _, err = run(capsys, "eval", "--in", work / "unit.etr", "--witness", work / "unit.wit", "--cap", "1")
    assert code == 3


def test_witness_pipeline(work, capsys):
    code, _, _ = run(capsys, "reduce", "--pass", "sigmaetr-half-to-smsat,normalize-prob,smsat-to-sigmaetr",
                     "--in", work / "half.etr", "--witness", work / "half.wit",
                     "--out", work / "out.etr", "--witness-out", work / "out.wit")
    assert code == 0
    code, out, _ = run(capsys, "check-witness", "--in", work / "out.etr", "--witness", work / "out.wit")
    assert (code, out.strip()) == (0, "true")


def test_reduce_with_param(work, capsys):
    code, _, _ = run(capsys, "reduce", "--pass", "sumvi-to-sumvi1", "--param", "m=2", "--in", work / "unit.etr",
                     "--witness", work / "unit.wit", "--out", work / "o.etr", "--witness-out", work / "o.wit")
    assert code == 0
    assert run(capsys, "check-witness", "--in", work / "o.etr", "--witness", work / "o.wit")[0] == 0
    assert run(capsys, "reduce", "--pass", "bogus", "--in", work / "unit.etr")[0] == 2


def test_succinct_commands(work, capsys):
    code, out, _ = run(capsys, "succ-expand", "--in", work / "tree.succ")
    assert code == 0 and "formula:" in out
    assert run(capsys, "succ-denneg", "--in", work / "tree.succ", "--out", work / "d.succ")[0] == 0
    code, out2, _ = run(capsys, "succ-expand", "--in", work / "d.succ")
    assert code == 0 and "(not" not in out2 and "(le" not in out2
    assert run(capsys, "succ-compile", "--in", work / "sum.etr")[0] == 0


def test_succ18_commands(work, capsys):
    assert run(capsys, "check-witness", "--in", work / "consistent.succ18", "--witness", work / "consistent.wit")[0] == 0
    code, _, _ = run(capsys, "reduce", "--pass", "succ18-to-leso", "--in", work / "consistent.succ18",
                     "--witness", work / "consistent.wit", "--out", work / "l.eso", "--witness-out", work / "l.wit")
    assert code == 0
    assert run(capsys, "check-witness", "--in", work / "l.eso", "--witness", work / "l.wit")[0] == 0


def test_probabilistic_witness(work, capsys):
    code, out, _ = run(capsys, "check-witness", "--in", work / "small.prob", "--witness", work / "small.wit")
    assert (code, out.strip()) == (0, "true")


def test_output_is_deterministic(work, capsys):
    outs = []
    for _ in range(2):
        run(capsys, "reduce", "--pass", "emajsat-to-sigmaetr", "--in", work / "half.emajsat", "--out", work / "e.etr")
        outs.append((work / "e.etr").read_bytes())
    assert outs[0] == outs[1]


def test_parse_is_canonical(work, capsys):
    for name in ("sum.etr", "small.prob", "xor.qbf", "tree.succ"):
        code, out, _ = run(capsys, "parse", "--in", work / name)
        assert code == 0
        (work / "again").write_text(out)
        assert run(capsys, "parse", "--in", work / "again")[1] == out


def test_corpus_files(work, capsys):
    code, out, _ = run(capsys, "corpus", "--suite", "files", "--dir", work)
    assert code == 0 and "14/14" in out
