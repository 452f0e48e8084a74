import numpy as np
import pytest

import rank1tensor.cli as cli
from rank1tensor import BreakdownError, UnitTuple, io
from rank1tensor.bench import CSV_HEADER

from conftest import planted_rank1


@pytest.fixture
def plant_files(tmp_path):
    t, axes = planted_rank1((3, 3, 3), 7.0, 0)
    tensor_path = tmp_path / "plant.txt"
    tuple_path = tmp_path / "axes.txt"
    io.write_tensor_text(t, tensor_path)
    io.write_tuple_text(axes, tuple_path)
    return t, axes, str(tensor_path), str(tuple_path)


def parse_report(text):
    out = {}
    for line in text.strip().splitlines():
        key, _, value = line.partition(" ")
        out[key] = value
    return out


class TestDecompose:
    @pytest.mark.parametrize("method", ["als", "asvd", "mals", "masvd"])
    def test_planted_rank_one(self, plant_files, capsys, method):
        _, _, tensor_path, _ = plant_files
        code = cli.main(
            ["decompose", "--input", tensor_path, "--method", method, "--seed", "1"]
        )
        report = parse_report(capsys.readouterr().out)
        assert code == 0
        assert float(report["lambda"]) == pytest.approx(7.0, rel=1e-8)
        assert report["converged_by"] == "fitchange"

    def test_malformed_dims_line(self, tmp_path, capsys):
        bad = tmp_path / "bad.txt"
        bad.write_text("3\n2 x 2\n1 2 3 4 5 6 7 8\n")
        code = cli.main(["decompose", "--input", str(bad)])
        err = capsys.readouterr().err
        assert code == 1
        assert "line 2" in err

    def test_missing_file(self, capsys):
        assert cli.main(["decompose", "--input", "/nonexistent/t.txt"]) == 1

    def test_deterministic_output(self, plant_files, capsys):
        _, _, tensor_path, _ = plant_files
        args = ["decompose", "--input", tensor_path, "--method", "mals", "--seed", "5"]
        assert cli.main(args) == 0
        first = capsys.readouterr().out
        assert cli.main(args) == 0
        second = capsys.readouterr().out
        assert first == second

    def test_trace_file(self, plant_files, tmp_path, capsys):
        _, _, tensor_path, _ = plant_files
        trace = tmp_path / "trace.csv"
        code = cli.main(
            ["decompose", "--input", tensor_path, "--trace", str(trace)]
        )
        assert code == 0
        lines = trace.read_text().strip().splitlines()
        assert lines[0] == "iteration,substep,modes,chosen,f_after,opt_calls"
        assert len(lines) > 1

    def test_unknown_flag_is_input_error(self, plant_files, capsys):
        _, _, tensor_path, _ = plant_files
        with pytest.raises(SystemExit) as exc:
            cli.main(["decompose", "--input", tensor_path, "--bogus"])
        assert exc.value.code == 1

    def test_solver_breakdown_maps_to_exit_two(self, plant_files, monkeypatch, capsys):
        _, _, tensor_path, _ = plant_files

        def boom(*args, **kwargs):
            raise BreakdownError("synthetic")

        monkeypatch.setattr(cli, "solve", boom)
        assert cli.main(["decompose", "--input", tensor_path]) == 2


class TestVerify:
    def test_exact_axes_pass(self, plant_files, capsys):
        _, _, tensor_path, tuple_path = plant_files
        code = cli.main(
            ["verify", "--input", tensor_path, "--tuple", tuple_path, "--level", "2"]
        )
        report = parse_report(capsys.readouterr().out)
        assert code == 0
        assert report["semi_max"] == "pass"
        assert float(report["max_residual"]) <= 1e-10

    def test_perturbed_axes_fail_with_reported_residual(
        self, plant_files, tmp_path, capsys
    ):
        t, axes, tensor_path, _ = plant_files
        rng = np.random.default_rng(1)
        bumped = []
        for v in axes.vectors:
            w = v + 1e-2 * rng.standard_normal(v.size)
            bumped.append(w / np.linalg.norm(w))
        tuple_path = tmp_path / "bumped.txt"
        io.write_tuple_text(UnitTuple(bumped), tuple_path)
        code = cli.main(
            ["verify", "--input", tensor_path, "--tuple", str(tuple_path)]
        )
        report = parse_report(capsys.readouterr().out)
        assert code == 3
        assert 1e-4 <= float(report["max_residual"]) <= 1.0  # about 1e-2 scale

    def test_level_two_needs_three_modes(self, tmp_path, capsys):
        t, axes = planted_rank1((2, 2, 2, 2), 1.0, 2)
        tensor_path = tmp_path / "t4.txt"
        tuple_path = tmp_path / "u4.txt"
        io.write_tensor_text(t, tensor_path)
        io.write_tuple_text(axes, tuple_path)
        code = cli.main(
            [
                "verify",
                "--input",
                str(tensor_path),
                "--tuple",
                str(tuple_path),
                "--level",
                "2",
            ]
        )
        assert code == 1

    def test_off_sphere_tuple_warns_and_normalizes(self, plant_files, tmp_path, capsys):
        t, axes, tensor_path, _ = plant_files
        text = io.format_tuple_text(axes).splitlines()
        text[2] = " ".join(str(2.0 * float(x)) for x in text[2].split())
        tuple_path = tmp_path / "scaled.txt"
        tuple_path.write_text("\n".join(text) + "\n")
        code = cli.main(["verify", "--input", tensor_path, "--tuple", str(tuple_path)])
        captured = capsys.readouterr()
        assert code == 0
        assert "normalized" in captured.err


class TestBench:
    def test_counts_and_header(self, tmp_path, capsys):
        out = tmp_path / "bench.csv"
        code = cli.main(
            [
                "bench",
                "--sizes",
                "4",
                "--methods",
                "als",
                "--runs",
                "2",
                "--out",
                str(out),
            ]
        )
        assert code == 0
        lines = out.read_text(encoding="ascii").strip().splitlines()
        assert lines[0] == CSV_HEADER
        assert len(lines) == 3

    def test_rerun_identical_modulo_timing(self, tmp_path, capsys):
        args = lambda path: [
            "bench",
            "--sizes",
            "4,8",
            "--methods",
            "als,masvd",
            "--runs",
            "3",
            "--seed",
            "7",
            "--out",
            path,
        ]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert cli.main(args(str(a))) == 0
        assert cli.main(args(str(b))) == 0
        capsys.readouterr()
        strip = lambda text: [
            ",".join(line.split(",")[:-1]) for line in text.strip().splitlines()
        ]
        assert strip(a.read_text()) == strip(b.read_text())


class TestAmi:
    def write_h(self, tmp_path, h, sizes, name="h.txt"):
        path = tmp_path / name
        lines = [str(h.shape[0]), " ".join(str(m) for m in sizes)]
        for row in h:
            lines.append(" ".join(f"{x:.17g}" for x in row))
        path.write_text("\n".join(lines) + "\n", encoding="ascii")
        return str(path)

    def test_positive_definite_fixture(self, tmp_path, capsys):
        g = np.random.default_rng(3).standard_normal((5, 5))
        path = self.write_h(tmp_path, g.T @ g + np.eye(5), (2, 3))
        code = cli.main(["ami", "--input", path])
        report = parse_report(capsys.readouterr().out)
        assert code == 0
        assert report["theorem_holds"] == "True"
        assert report["ostrowski"] == "True"
        assert report["alpha"] == "5"

    def test_singular_block_named(self, tmp_path, capsys):
        h = np.eye(4)
        h[2, 2] = h[3, 3] = 0.0
        path = self.write_h(tmp_path, h, (2, 2))
        code = cli.main(["ami", "--input", path])
        err = capsys.readouterr().err
        assert code == 1
        assert "block 1" in err

    def test_basin_on_null_vector_stays_constant(self, tmp_path, capsys):
        rng = np.random.default_rng(4)
        h0 = np.eye(4) + 0.2 * rng.standard_normal((4, 4))
        h0 = (h0 + h0.T) / 2
        w = rng.standard_normal(4)
        hw = h0 @ w
        h = h0 - np.outer(hw, hw) / float(w @ hw)
        h = (h + h.T) / 2
        path = self.write_h(tmp_path, h, (2, 2))
        xi_path = tmp_path / "xi.txt"
        xi_path.write_text(" ".join(f"{x:.17g}" for x in w) + "\n")
        code = cli.main(
            ["ami", "--input", path, "--basin", str(xi_path), "--sweeps", "25"]
        )
        report = parse_report(capsys.readouterr().out)
        assert code == 0
        assert float(report["basin_norm_last"]) == pytest.approx(
            float(report["basin_norm_first"]), rel=1e-8
        )
        assert report["basin_converged_to_zero"] == "False"
