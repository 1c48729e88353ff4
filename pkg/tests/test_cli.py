import os

import numpy as np
import pytest

from randiter import cli, io, linalg


def run_cli(*argv):
    return cli.main(list(argv))


@pytest.fixture
def consistent_dir(tmp_path):
    out = tmp_path / "prob"
    assert run_cli("generate", "consistent", "50", "20", "--seed", "1",
                   "--out", str(out)) == 0
    return str(out)


class TestFileFormats:
    def test_matrix_round_trip_full_precision(self, tmp_path):
        rng = np.random.default_rng(0)
        X = linalg.dense_matrix(rng.standard_normal((7, 3)))
        path = str(tmp_path / "X.mtx")
        io.write_matrix(path, X)
        back = io.read_matrix(path)
        assert back.shape == X.shape
        assert np.all(back == X)

    def test_vector_round_trip_full_precision(self, tmp_path):
        v = np.random.default_rng(1).standard_normal(11)
        path = str(tmp_path / "v.vec")
        io.write_vector(path, v)
        assert np.all(io.read_vector(path) == v)

    def test_meta_round_trip(self, tmp_path):
        path = str(tmp_path / "meta.txt")
        io.write_meta(path, {"regime": "consistent", "n": 5, "noise_scale": 0.5})
        meta = io.read_meta(path)
        assert meta["regime"] == "consistent"
        assert float(meta["noise_scale"]) == 0.5

    def test_rejects_non_matrixmarket(self, tmp_path):
        path = tmp_path / "bad.mtx"
        path.write_text("not a matrix\n")
        with pytest.raises(IOError):
            io.read_matrix(str(path))


class TestGenerate:
    def test_writes_all_files(self, consistent_dir):
        for name in ("X.mtx", "y.vec", "reference.vec", "meta.txt"):
            assert os.path.exists(os.path.join(consistent_dir, name))

    def test_rerun_is_byte_identical(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        for out in (a, b):
            assert run_cli("generate", "consistent", "30", "10", "--seed", "3",
                           "--out", str(out)) == 0
        for name in ("X.mtx", "y.vec", "reference.vec", "meta.txt"):
            assert (a / name).read_bytes() == (b / name).read_bytes()

    def test_inconsistent_metadata_records_noise(self, tmp_path):
        out = tmp_path / "inc"
        assert run_cli("generate", "inconsistent", "30", "10", "--noise", "0.5",
                       "--out", str(out)) == 0
        meta = io.read_meta(str(out / "meta.txt"))
        assert float(meta["norm_z"]) == pytest.approx(0.5, abs=1e-10)

    def test_underdetermined_round_trip_consistency(self, tmp_path):
        out = tmp_path / "und"
        assert run_cli("generate", "underdetermined", "20", "50", "--seed", "2",
                       "--out", str(out)) == 0
        X = io.read_matrix(str(out / "X.mtx"))
        y = io.read_vector(str(out / "y.vec"))
        ref = io.read_vector(str(out / "reference.vec"))
        assert np.max(np.abs(X @ ref - y)) <= 1e-9

    def test_shape_incompatibility_is_usage_error(self, tmp_path):
        assert run_cli("generate", "consistent", "10", "40",
                       "--out", str(tmp_path / "x")) == cli.EXIT_USAGE


class TestSolve:
    def test_rk_converges_end_to_end(self, consistent_dir, tmp_path):
        trace_out = str(tmp_path / "trace.csv")
        code = run_cli("solve", consistent_dir, "--method", "rk",
                       "--iters", "10000", "--seed", "4", "--out", trace_out)
        assert code == 0
        lines = open(trace_out).read().splitlines()
        assert lines[0] == "iter,err_sq,energy_err_sq,residual_sq,bound"
        final_err = float(lines[-1].split(",")[1])
        assert final_err <= 1e-12

    def test_rcd_on_inconsistent_hits_least_squares(self, tmp_path):
        prob = tmp_path / "inc"
        run_cli("generate", "inconsistent", "30", "10", "--noise", "0.5",
                "--seed", "5", "--out", str(prob))
        trace_out = str(tmp_path / "trace.csv")
        assert run_cli("solve", str(prob), "--method", "rcd",
                       "--iters", "50000", "--seed", "6", "--out", trace_out) == 0
        final_err = float(open(trace_out).read().splitlines()[-1].split(",")[1])
        assert final_err <= 1e-10

    def test_identical_runs_are_byte_identical(self, consistent_dir, tmp_path):
        outs = [str(tmp_path / f"t{i}.csv") for i in range(2)]
        for out in outs:
            assert run_cli("solve", consistent_dir, "--method", "rcd",
                           "--iters", "20000", "--seed", "9", "--out", out) == 0
        assert open(outs[0], "rb").read() == open(outs[1], "rb").read()

    def test_nonconvergence_exit_code(self, consistent_dir, tmp_path):
        code = run_cli("solve", consistent_dir, "--method", "rk", "--iters", "5",
                       "--tol", "1e-13", "--seed", "1", "--out", str(tmp_path / "t.csv"))
        assert code == cli.EXIT_NO_CONVERGENCE

    def test_missing_problem_dir_is_io_error(self, tmp_path):
        code = run_cli("solve", str(tmp_path / "nope"), "--method", "rk",
                       "--out", str(tmp_path / "t.csv"))
        assert code == cli.EXIT_IO

    def test_ridge_requires_lambda(self, consistent_dir, tmp_path):
        code = run_cli("solve", consistent_dir, "--method", "rk-ridge",
                       "--out", str(tmp_path / "t.csv"))
        assert code == cli.EXIT_USAGE

    def test_trials_emit_mean_trace(self, consistent_dir, tmp_path):
        out = str(tmp_path / "t.csv")
        assert run_cli("solve", consistent_dir, "--method", "rk", "--iters", "20000",
                       "--trials", "3", "--seed", "2", "--out", out) == 0
        assert os.path.exists(out + ".mean.csv")

    def test_krr_solve(self, tmp_path):
        prob = tmp_path / "krr"
        run_cli("generate", "consistent", "25", "5", "--seed", "8", "--out", str(prob))
        out = str(tmp_path / "t.csv")
        assert run_cli("solve", str(prob), "--method", "rk-krr", "--lambda", "0.1",
                       "--kernel", "gaussian", "--gamma", "0.5",
                       "--iters", "20000", "--out", out) == 0
        final_err = float(open(out).read().splitlines()[-1].split(",")[1])
        assert final_err <= 1e-12


class TestCompare:
    def test_rk_vs_rcd_contraction_below_rate(self, consistent_dir, tmp_path):
        out = str(tmp_path / "cmp.csv")
        assert run_cli("compare", consistent_dir, "--method", "rk", "--method", "rcd",
                       "--iters", "3000", "--seed", "3", "--out", out) == 0
        lines = open(out).read().splitlines()
        assert len(lines) == 3
        for line in lines[1:]:
            fields = line.split(",")
            rate = float(fields[6])
            contraction = float(fields[7])
            assert contraction <= rate + 0.05

    def test_underdetermined_rk_wins(self, tmp_path):
        prob = tmp_path / "und"
        run_cli("generate", "underdetermined", "20", "50", "--seed", "4", "--out", str(prob))
        out = str(tmp_path / "cmp.csv")
        assert run_cli("compare", str(prob), "--method", "rk", "--method", "rcd",
                       "--iters", "60000", "--seed", "5", "--tol", "1e-6",
                       "--out", out) == 0
        rows = {line.split(",")[0]: line.split(",") for line in open(out).read().splitlines()[1:]}
        assert float(rows["rk"][3]) <= 1e-12       # ||beta - beta_MN||^2
        assert float(rows["rcd"][3]) > 1e-4        # floor above 1e-2 in norm

    def test_single_config_degenerates_to_solve_summary(self, consistent_dir, tmp_path):
        out = str(tmp_path / "cmp.csv")
        assert run_cli("compare", consistent_dir, "--method", "rk",
                       "--iters", "2000", "--seed", "1", "--out", out) == 0
        assert len(open(out).read().splitlines()) == 2
