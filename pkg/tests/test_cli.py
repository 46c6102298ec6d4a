import subprocess
import sys

import pytest

from contile.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestSynth:
    def test_blocks_to_file(self, tmp_path, capsys):
        out = tmp_path / "d.spm"
        code, _, err = run(capsys, "synth", "blocks", "--blocks", "6", "--size", "20",
                           "--overlap", "5", "--noise", "0.1", "--rng", "7", "-o", str(out))
        assert code == 0
        assert "95x95" in err
        assert out.read_text().startswith("95 95\n")

    def test_random_to_stdout(self, capsys):
        code, out, err = run(capsys, "synth", "random", "--n", "16", "--density", "0.24", "--rng", "1")
        assert code == 0
        assert out.startswith("16 16\n")
        assert "16x16" in err

    def test_dense_format(self, tmp_path, capsys):
        out = tmp_path / "d.dns"
        code, _, _ = run(capsys, "synth", "blocks", "--blocks", "2", "--size", "3",
                         "--overlap", "1", "-o", str(out))
        assert code == 0
        assert set(out.read_text().strip()) <= {"0", "1", "\n"}

    def test_bad_parameters(self, capsys):
        code, _, err = run(capsys, "synth", "blocks", "--overlap", "30")
        assert code == 2 and "error" in err


@pytest.fixture
def blocks_file(tmp_path, capsys):
    path = tmp_path / "blocks.spm"
    assert main(["synth", "blocks", "--blocks", "3", "--size", "5", "--overlap", "1",
                 "-o", str(path)]) == 0
    capsys.readouterr()
    return path


class TestFactorize:
    def test_symmetric_exact(self, blocks_file, capsys):
        code, out, _ = run(capsys, "factorize", str(blocks_file), "-k", "3", "--variant", "sym")
        assert code == 0
        assert "ERROR 0 RELERR 0.0000" in out
        assert "NODE-ORDER" in out

    def test_sampled_seeds_deterministic(self, blocks_file, capsys):
        args = ("factorize", str(blocks_file), "-k", "2", "--seeds", "sample:0.5", "--rng", "3")
        code1, out1, _ = run(capsys, *args)
        code2, out2, _ = run(capsys, *args)
        assert code1 == code2 == 0 and out1 == out2

    def test_zero_rank_usage_error(self, blocks_file, capsys):
        code, _, err = run(capsys, "factorize", str(blocks_file), "-k", "0")
        assert code == 2 and "rank" in err

    def test_symmetric_needs_square(self, tmp_path, capsys):
        p = tmp_path / "r.spm"
        p.write_text("2 3\n0 0\n1 2\n")
        code, _, err = run(capsys, "factorize", str(p), "-k", "1", "--variant", "sym")
        assert code == 2 and "square" in err

    def test_writes_factor_file(self, blocks_file, tmp_path, capsys):
        out = tmp_path / "f.txt"
        code, stdout, _ = run(capsys, "factorize", str(blocks_file), "-k", "3", "-o", str(out))
        assert code == 0 and out.read_text() == stdout

    def test_threads_env(self, blocks_file, capsys, monkeypatch):
        monkeypatch.setenv("CONTILE_THREADS", "2")
        code, out, _ = run(capsys, "factorize", str(blocks_file), "-k", "2")
        assert code == 0

    def test_bad_seeds_spec(self, blocks_file, capsys):
        code, _, err = run(capsys, "factorize", str(blocks_file), "-k", "1", "--seeds", "few")
        assert code == 2


@pytest.fixture
def factor_file(blocks_file, tmp_path, capsys):
    path = tmp_path / "f.txt"
    assert main(["factorize", str(blocks_file), "-k", "3", "--variant", "sym",
                 "-o", str(path)]) == 0
    capsys.readouterr()
    return path


class TestEval:
    def test_exact_fit(self, blocks_file, factor_file, capsys):
        code, out, _ = run(capsys, "eval", "--factors", str(factor_file),
                           "--matrix", str(blocks_file))
        assert code == 0
        assert "ERROR 0 RELERR 0.0000" in out

    def test_multiple_matrices(self, blocks_file, factor_file, tmp_path, capsys):
        noisy = tmp_path / "noisy.spm"
        assert main(["synth", "blocks", "--blocks", "3", "--size", "5", "--overlap", "1",
                     "--noise", "0.1", "--rng", "1", "-o", str(noisy)]) == 0
        capsys.readouterr()
        code, out, _ = run(capsys, "eval", "--factors", str(factor_file),
                           "--matrix", str(blocks_file), "--matrix", str(noisy))
        assert code == 0 and len(out.strip().splitlines()) == 2

    def test_missing_factor_file(self, blocks_file, capsys):
        code, _, err = run(capsys, "eval", "--factors", "/nonexistent.txt",
                           "--matrix", str(blocks_file))
        assert code == 2

    def test_shape_mismatch(self, factor_file, tmp_path, capsys):
        other = tmp_path / "other.spm"
        other.write_text("3 3\n0 0\n")
        code, _, err = run(capsys, "eval", "--factors", str(factor_file),
                           "--matrix", str(other))
        assert code == 2 and "shape" in err


class TestRender:
    def test_all_layouts(self, blocks_file, factor_file, tmp_path, capsys):
        for layout, extra in (("circular", []), ("linear", []),
                              ("heatmap", ["--matrix", str(blocks_file)])):
            out = tmp_path / f"{layout}.svg"
            code, _, err = run(capsys, "render", "--factors", str(factor_file),
                               "--layout", layout, *extra, "-o", str(out))
            assert code == 0, (layout, err)
            assert out.read_text().startswith("<?xml")

    def test_heatmap_needs_matrix(self, factor_file, capsys):
        code, _, err = run(capsys, "render", "--factors", str(factor_file),
                           "--layout", "heatmap")
        assert code == 2 and "matrix" in err

    def test_layout_variant_mismatch(self, blocks_file, tmp_path, capsys):
        plain = tmp_path / "plain.txt"
        assert main(["factorize", str(blocks_file), "-k", "2", "-o", str(plain)]) == 0
        capsys.readouterr()
        code, _, err = run(capsys, "render", "--factors", str(plain), "--layout", "circular")
        assert code == 2 and "symmetric" in err

    def test_labels(self, factor_file, tmp_path, capsys):
        labels = tmp_path / "labels.txt"
        labels.write_text("".join(f"node{i}\n" for i in range(13)))
        out = tmp_path / "labelled.svg"
        code, _, _ = run(capsys, "render", "--factors", str(factor_file),
                         "--labels", str(labels), "-o", str(out))
        assert code == 0 and "node12" in out.read_text()


class TestCheck:
    def test_passes(self, capsys):
        code, out, _ = run(capsys, "check", "--cases", "25", "--rng", "1")
        assert code == 0
        assert "all 75 cases passed" in out

    def test_zero_cases_usage_error(self, capsys):
        code, _, err = run(capsys, "check", "--cases", "0")
        assert code == 2


class TestEntryPoint:
    def test_console_script(self):
        proc = subprocess.run([sys.executable, "-m", "contile.cli", "check", "--cases", "5"],
                              capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr

    def test_format_error_exit_code(self, tmp_path, capsys):
        bad = tmp_path / "bad.spm"
        bad.write_text("2 2\n5 5\n")
        code, _, err = run(capsys, "factorize", str(bad), "-k", "1")
        assert code == 2 and "line 2" in err
