"""Command-line surface: roundtrips, exit codes, and output channels."""

import csv
import io
import subprocess
import sys

import numpy as np
import pytest

from onepass.cli import main
from onepass.debruijn import DeBruijnSpec, adversarial_corpus


def _cli(*args) -> int:
    return main([str(a) for a in args])


def _diag(capsys) -> str:
    return capsys.readouterr().err


def _corpus_files(tmp_path):
    rng = np.random.default_rng(20)
    files = {
        "text.txt": b"a small press edition, set and bound by hand\n" * 64,
        "binary.bin": rng.integers(0, 256, 1 << 16, dtype=np.uint8).tobytes(),
        "one": b"\x00",
        "two": b"\xffQ",
        "three": b"abc",
        "big.bin": rng.integers(0, 256, 1 << 20, dtype=np.uint8).tobytes(),
        "debruijn28.bin": adversarial_corpus(DeBruijnSpec(2, 8), 4_096, seed=3),
        "debruijn33.bin": adversarial_corpus(DeBruijnSpec(3, 3), 2_000, seed=4),
    }
    for name, data in files.items():
        (tmp_path / name).write_bytes(data)
    return files


class TestCompressDecompress:
    def test_corpus_roundtrip(self, tmp_path, capsys):
        files = _corpus_files(tmp_path)
        for name, data in files.items():
            src = tmp_path / name
            packed = tmp_path / (name + ".opc")
            out = tmp_path / (name + ".out")
            assert _cli(
                "compress", "--c", 0.7, "--eps", 0.2, "-i", src, "-o", packed
            ) == 0
            assert "mode=known-n" in _diag(capsys)
            assert _cli("decompress", "-i", packed, "-o", out) == 0
            assert out.read_bytes() == data, name

    def test_pipe_roundtrip_is_unknown_n(self):
        data = b"pipeline payload " * 999
        env_cmd = [sys.executable, "-m", "onepass.cli"]
        packed = subprocess.run(
            env_cmd + ["compress", "--c", "0.5", "--eps", "0.2", "-i", "-", "-o", "-"],
            input=data, capture_output=True, check=True,
        )
        assert b"mode=unknown-n" in packed.stderr
        assert packed.stdout.startswith(b"OPC1")
        plain = subprocess.run(
            env_cmd + ["decompress", "-i", "-", "-o", "-"],
            input=packed.stdout, capture_output=True, check=True,
        )
        assert plain.stdout == data
        # data channel carries only data; diagnostics stay on stderr
        assert b"elapsed_ms" in plain.stderr

    def test_stream_flag_forces_unknown_n(self, tmp_path, capsys):
        src = tmp_path / "f"
        src.write_bytes(b"x" * 5_000)
        packed = tmp_path / "f.opc"
        assert _cli(
            "compress", "--c", 0.5, "--eps", 0.2, "--stream",
            "-i", src, "-o", packed,
        ) == 0
        assert "mode=unknown-n" in _diag(capsys)
        out = tmp_path / "f.out"
        assert _cli("decompress", "-i", packed, "-o", out) == 0
        assert out.read_bytes() == src.read_bytes()

    def test_empty_file_roundtrip(self, tmp_path, capsys):
        src = tmp_path / "empty"
        src.write_bytes(b"")
        packed = tmp_path / "empty.opc"
        out = tmp_path / "empty.out"
        assert _cli(
            "compress", "--c", 0.5, "--eps", 0.2, "-i", src, "-o", packed
        ) == 0
        # zero length cannot be declared up front; falls back to unknown-n
        assert "mode=unknown-n" in _diag(capsys)
        assert _cli("decompress", "-i", packed, "-o", out) == 0
        assert out.read_bytes() == b""

    def test_c_zero_gives_constant_peak_memory(self, tmp_path, capsys):
        peaks = []
        for size in (1_000, 4_000):
            src = tmp_path / f"s{size}"
            src.write_bytes(b"z" * size)
            assert _cli(
                "compress", "--c", 0, "--eps", 0.1,
                "-i", src, "-o", tmp_path / f"s{size}.opc",
            ) == 0
            err = _diag(capsys)
            peaks.append(int(err.split("peak_buffer_bytes=")[1].split()[0]))
        assert peaks[0] == peaks[1]

    def test_eps_zero_is_a_validation_error(self, tmp_path, capsys):
        src = tmp_path / "f"
        src.write_bytes(b"abc")
        assert _cli(
            "compress", "--c", 0.5, "--eps", 0, "-i", src, "-o", tmp_path / "o"
        ) == 1
        assert "eps" in _diag(capsys)

    def test_missing_input_is_a_validation_error(self, tmp_path, capsys):
        assert _cli(
            "compress", "--c", 0.5, "--eps", 0.2,
            "-i", tmp_path / "absent", "-o", tmp_path / "o",
        ) == 1
        assert "error" in _diag(capsys)

    def test_wrong_magic_exits_2(self, tmp_path, capsys):
        bad = tmp_path / "bad"
        bad.write_bytes(b"not a container at all, just plain prose bytes")
        assert _cli("decompress", "-i", bad, "-o", tmp_path / "o") == 2
        assert "magic" in _diag(capsys)

    def test_truncated_container_exits_2(self, tmp_path, capsys):
        src = tmp_path / "f"
        src.write_bytes(bytes(range(256)) * 40)
        packed = tmp_path / "f.opc"
        assert _cli(
            "compress", "--c", 0.5, "--eps", 0.2, "-i", src, "-o", packed
        ) == 0
        capsys.readouterr()
        whole = packed.read_bytes()
        packed.write_bytes(whole[: len(whole) // 2])
        assert _cli("decompress", "-i", packed, "-o", tmp_path / "o") == 2

    def test_cut_record_names_its_index(self, tmp_path, capsys):
        src = tmp_path / "f"
        src.write_bytes(b"abcdefgh" * 2_000)
        packed = tmp_path / "f.opc"
        assert _cli(
            "compress", "--c", 0.5, "--eps", 0.2, "-i", src, "-o", packed
        ) == 0
        capsys.readouterr()
        whole = packed.read_bytes()
        # drop the terminator and part of the final record's body
        packed.write_bytes(whole[:-16])
        assert _cli("decompress", "-i", packed, "-o", tmp_path / "o") == 2
        assert "record" in _diag(capsys)


class TestEntropyCommand:
    def _rows(self, capsys):
        out = capsys.readouterr().out
        reader = csv.DictReader(io.StringIO(out))
        assert reader.fieldnames == ["k", "H_k"]
        return {int(r["k"]): float(r["H_k"]) for r in reader}

    def test_all_identical_file(self, tmp_path, capsys):
        src = tmp_path / "same"
        src.write_bytes(b"g" * 500)
        assert _cli("entropy", "--kmax", 3, "-i", src) == 0
        rows = self._rows(capsys)
        assert rows == {0: 0.0, 1: 0.0, 2: 0.0, 3: 0.0}

    def test_debruijn_corpus_hits_zero_at_its_order(self, tmp_path, capsys):
        src = tmp_path / "db"
        src.write_bytes(adversarial_corpus(DeBruijnSpec(2, 6), 1_024, seed=0))
        assert _cli("entropy", "--kmax", 6, "-i", src) == 0
        rows = self._rows(capsys)
        assert rows[6] == 0.0
        assert rows[5] > 0.0

    def test_uniform_binary_order_zero(self, tmp_path, capsys):
        rng = np.random.default_rng(0)
        src = tmp_path / "coin"
        src.write_bytes(rng.integers(0, 2, 10**6, dtype=np.uint8).tobytes())
        assert _cli("entropy", "--kmax", 0, "-i", src) == 0
        assert self._rows(capsys)[0] == pytest.approx(1.0, abs=0.01)

    def test_empty_input_is_a_validation_error(self, tmp_path, capsys):
        src = tmp_path / "empty"
        src.write_bytes(b"")
        assert _cli("entropy", "--kmax", 1, "-i", src) == 1


class TestDeBruijnCommand:
    def test_emit_canonical(self, capsysbinary):
        assert _cli("debruijn", "--sigma", 2, "--order", 2, "--emit") == 0
        assert capsysbinary.readouterr().out == bytes([0, 0, 1, 1, 0])

    def test_count(self, capsys):
        assert _cli("debruijn", "--sigma", 2, "--order", 3, "--count") == 0
        assert capsys.readouterr().out.strip() == "16"

    def test_corpus_whole_periods(self, capsysbinary):
        assert _cli(
            "debruijn", "--sigma", 2, "--order", 2, "--corpus", 10, "--seed", 7
        ) == 0
        out = capsysbinary.readouterr().out
        assert len(out) == 8  # largest multiple of 2^2 at most 10
        assert out[:4] == out[4:]

    def test_corpus_too_short_is_a_validation_error(self, capsys):
        assert _cli(
            "debruijn", "--sigma", 2, "--order", 4, "--corpus", 7
        ) == 1
        assert "minimum feasible" in _diag(capsys)

    def test_count_above_enumeration_bound(self, capsys):
        assert _cli("debruijn", "--sigma", 2, "--order", 5, "--count") == 1

    def test_modes_are_exclusive(self, capsys):
        assert _cli(
            "debruijn", "--sigma", 2, "--order", 2, "--emit", "--count"
        ) == 1


class TestExperimentCommands:
    def test_tradeoff_writes_csv(self, tmp_path, capsys):
        src = tmp_path / "in"
        src.write_bytes(b"alternating structure " * 500)
        out = tmp_path / "rows.csv"
        assert _cli(
            "experiment", "tradeoff", "--input", src,
            "--c-list", "0.5,0.9", "--eps", 0.2, "--kmax", 2, "--out", out,
        ) == 0
        lines = out.read_text().splitlines()
        body = [ln for ln in lines if not ln.startswith("#")]
        rows = list(csv.DictReader(body))
        assert len(rows) == 2 * 3
        assert {r["c"] for r in rows} == {"0.5", "0.9"}
        assert "beta" in _diag(capsys)

    def test_tradeoff_to_stdout(self, tmp_path, capsys):
        src = tmp_path / "in"
        src.write_bytes(b"ababab" * 200)
        assert _cli(
            "experiment", "tradeoff", "--input", src,
            "--c-list", "0.5", "--eps", 0.2, "--kmax", 1, "--out", "-",
        ) == 0
        out = capsys.readouterr().out
        assert out.startswith("# onepass experiment: tradeoff")

    def test_bad_c_list_is_a_validation_error(self, tmp_path, capsys):
        src = tmp_path / "in"
        src.write_bytes(b"data")
        assert _cli(
            "experiment", "tradeoff", "--input", src,
            "--c-list", "0.5,oops", "--eps", 0.2, "--kmax", 1, "--out", "-",
        ) == 1
        assert "c-list" in _diag(capsys)

    def test_adversarial_writes_csv(self, tmp_path, capsys):
        out = tmp_path / "adv.csv"
        assert _cli(
            "experiment", "adversarial", "--sigma", 2, "--c", 0.5,
            "--eps", 0.2, "--n", 1 << 13, "--seed", 0, "--out", out,
        ) == 0
        lines = out.read_text().splitlines()
        body = [ln for ln in lines if not ln.startswith("#")]
        rows = list(csv.DictReader(body))
        assert len(rows) == 2
        assert {r["c"] for r in rows} == {"0.5", "1.0"}
        assert "verdict" in _diag(capsys)

    def test_adversarial_n_too_small(self, capsys):
        assert _cli(
            "experiment", "adversarial", "--sigma", 2, "--c", 0.9,
            "--eps", 0.2, "--n", 5, "--seed", 0, "--out", "-",
        ) == 1
        assert "minimum feasible" in _diag(capsys)


class TestUsage:
    def test_unknown_command(self, capsys):
        assert _cli("polish") == 1

    def test_missing_required_flag(self, capsys):
        assert _cli("entropy", "-i", "-") == 1
        assert "kmax" in _diag(capsys)
