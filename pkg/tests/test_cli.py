"""
명령행 인터페이스 테스트
"""

import pandas as pd
import pytest

import sys
sys.path.insert(0, "src")

from topoess.main import (
    EXIT_DATA,
    EXIT_DEGENERATE,
    EXIT_OK,
    EXIT_USAGE,
    build_parser,
    main,
)
from topoess.simulation.sampler import iid_sample, run_chain
from topoess.trees.io import write_chain


@pytest.fixture
def tree_files(tmp_path, toy):
    """독립 표본 체인 두 개와 로그 파일"""
    paths = []
    for i in range(2):
        chain = iid_sample(toy, 200, seed=i, name=f"run{i + 1}")
        tree_path = tmp_path / f"run{i + 1}.trees"
        log_path = tmp_path / f"run{i + 1}.log.tsv"
        write_chain(chain, tree_path, log_path)
        paths.append((tree_path, log_path))
    return paths


@pytest.fixture
def constant_file(tmp_path, constant_chain):
    path = tmp_path / "constant.trees"
    write_chain(constant_chain, path)
    return path


class TestParser:
    """인자 파서 테스트"""

    def test_commands(self):
        parser = build_parser()
        args = parser.parse_args(["ess", "a.trees", "--out", "x.tsv"])
        assert args.command == "ess"
        assert args.methods is None

    def test_unknown_method(self):
        with pytest.raises(SystemExit) as e:
            main(["ess", "a.trees", "--methods", "bogus", "--out", "x.tsv"])
        assert e.value.code == EXIT_USAGE

    def test_missing_command(self):
        with pytest.raises(SystemExit) as e:
            main([])
        assert e.value.code == EXIT_USAGE

    def test_target_required(self, tmp_path):
        with pytest.raises(SystemExit) as e:
            main(["simulate", "--iterations", "100", "--seed", "1", "--out-dir", str(tmp_path)])
        assert e.value.code == EXIT_USAGE


class TestEssCommand:
    """ess 명령 테스트"""

    def test_table(self, tmp_path, tree_files):
        out = tmp_path / "ess.tsv"
        code = main([
            "ess", str(tree_files[0][0]), str(tree_files[1][0]),
            "--methods", "fixedN,splitFrequency,cmds", "--out", str(out),
        ])
        assert code == EXIT_OK
        frame = pd.read_csv(out, sep="\t")
        assert list(frame.columns) == ["chain", "n", "fixedN", "splitFrequency", "cmds", "degenerate"]
        assert frame["chain"].tolist() == ["run1", "run2"]
        assert frame["fixedN"].tolist() == [200, 200]

    def test_log_posterior(self, tmp_path, tree_files):
        out = tmp_path / "ess.tsv"
        tree_path, log_path = tree_files[0]
        code = main([
            "ess", str(tree_path), "--logs", str(log_path),
            "--methods", "logPosterior", "--out", str(out),
        ])
        assert code == EXIT_OK
        assert pd.read_csv(out, sep="\t")["logPosterior"].iloc[0] >= 1

    def test_log_posterior_needs_logs(self, tmp_path, tree_files):
        code = main([
            "ess", str(tree_files[0][0]), "--methods", "logPosterior", "--out", str(tmp_path / "x.tsv"),
        ])
        assert code == EXIT_USAGE

    def test_jump_needs_seed(self, tmp_path, tree_files):
        code = main([
            "ess", str(tree_files[0][0]), "--methods", "jumpDistanceBootstrap",
            "--out", str(tmp_path / "x.tsv"),
        ])
        assert code == EXIT_USAGE

    def test_missing_file(self, tmp_path):
        code = main(["ess", str(tmp_path / "nope.trees"), "--methods", "fixedN", "--out", str(tmp_path / "x.tsv")])
        assert code == EXIT_DATA

    def test_bad_newick(self, tmp_path):
        path = tmp_path / "bad.trees"
        path.write_text("((A,B),(C,D);\n", encoding="utf-8")
        code = main(["ess", str(path), "--methods", "fixedN", "--out", str(tmp_path / "x.tsv")])
        assert code == EXIT_DATA

    def test_strict_degenerate(self, tmp_path, constant_file):
        out = tmp_path / "ess.tsv"
        args = ["ess", str(constant_file), "--methods", "cmds,splitFrequency", "--out", str(out)]
        assert main(args) == EXIT_OK
        assert main(args + ["--strict"]) == EXIT_DEGENERATE
        assert pd.read_csv(out, sep="\t")["degenerate"].iloc[0] == "cmds,splitFrequency"

    def test_reproducible(self, tmp_path, toy):
        chain = run_chain(toy, 3000, thin=10, seed=4, name="mcmc")
        tree_path = tmp_path / "mcmc.trees"
        write_chain(chain, tree_path)
        outputs = []
        for name in ("a.tsv", "b.tsv"):
            out = tmp_path / name
            main(["ess", str(tree_path), "--methods", "jumpDistanceBootstrap,cmds", "--seed", "7", "--out", str(out)])
            outputs.append(out.read_bytes())
        assert outputs[0] == outputs[1]

    def test_dump_distances(self, tmp_path, tree_files):
        dump = tmp_path / "dist"
        main([
            "ess", str(tree_files[0][0]), "--methods", "cmds",
            "--dump-distances", str(dump), "--out", str(tmp_path / "x.tsv"),
        ])
        assert (dump / "1_run1.dist.tsv").exists()


class TestCompareCommand:
    """compare 명령 테스트"""

    def test_outputs(self, tmp_path, tree_files):
        out = tmp_path / "compare.tsv"
        code = main([
            "compare", str(tree_files[0][0]), str(tree_files[1][0]),
            "--method", "fixedN", "--out", str(out),
        ])
        assert code == EXIT_OK
        rows = pd.read_csv(out, sep="\t")
        pairs = pd.read_csv(tmp_path / "compare_pairs.tsv", sep="\t")
        assert set(rows["flag"]) <= {"pass", "fail"}
        assert pairs[["chain_i", "chain_j"]].values.tolist() == [["run1", "run2"], ["run2", "run1"]]

    def test_log_posterior_rejected(self, tmp_path, tree_files):
        code = main([
            "compare", str(tree_files[0][0]), str(tree_files[1][0]),
            "--method", "logPosterior", "--out", str(tmp_path / "x.tsv"),
        ])
        assert code == EXIT_USAGE


class TestSimulateCommand:
    """simulate 명령 테스트"""

    def test_outputs(self, tmp_path):
        out_dir = tmp_path / "sim"
        code = main([
            "simulate", "--toy", "toy", "--iterations", "1000", "--thin", "10",
            "--chains", "2", "--seed", "1", "--out-dir", str(out_dir),
        ])
        assert code == EXIT_OK
        for i in (1, 2):
            lines = (out_dir / f"chain{i}.trees").read_text(encoding="utf-8").splitlines()
            assert len(lines) == 100
            log = pd.read_csv(out_dir / f"chain{i}.log.tsv", sep="\t")
            assert list(log.columns) == ["sample", "lnP"]

    def test_byte_identical(self, tmp_path):
        contents = []
        for name in ("a", "b"):
            main([
                "simulate", "--toy", "two-mode", "--iterations", "500",
                "--seed", "3", "--out-dir", str(tmp_path / name),
            ])
            contents.append((tmp_path / name / "chain1.trees").read_bytes())
        assert contents[0] == contents[1]

    def test_target_file(self, tmp_path):
        target = tmp_path / "target.tsv"
        target.write_text(
            "newick\tprobability\n((A,B),(C,D));\t0.6\n((A,C),(B,D));\t0.4\n", encoding="utf-8"
        )
        code = main([
            "simulate", "--target", str(target), "--iterations", "200",
            "--seed", "1", "--out-dir", str(tmp_path / "sim"),
        ])
        assert code == EXIT_OK

    def test_bad_target(self, tmp_path):
        target = tmp_path / "target.tsv"
        target.write_text("newick\tprobability\n((A,B),(C,D));\t0.6\n", encoding="utf-8")
        code = main([
            "simulate", "--target", str(target), "--iterations", "200",
            "--seed", "1", "--out-dir", str(tmp_path / "sim"),
        ])
        assert code == EXIT_DATA


class TestBenchmarkCommand:
    """benchmark 명령 테스트"""

    def test_outputs(self, tmp_path):
        out = tmp_path / "bench.tsv"
        code = main([
            "benchmark", "--toy", "toy", "--m", "3", "--iterations", "500", "--thin", "5",
            "--methods", "fixedN,splitFrequency", "--nruns", "2", "--seed", "1", "--out", str(out),
        ])
        assert code == EXIT_OK
        frame = pd.read_csv(out, sep="\t")
        assert set(frame["method"]) == {"fixedN", "splitFrequency", "nRuns2"}
        assert (tmp_path / "bench_chain_ess.tsv").exists()
        summary = (tmp_path / "bench_summary.md").read_text(encoding="utf-8")
        assert "| fixedN |" in summary
        assert "구간 (250)" in summary

    def test_iterations_required(self, tmp_path):
        code = main(["benchmark", "--toy", "toy", "--seed", "1", "--out", str(tmp_path / "b.tsv")])
        assert code == EXIT_USAGE

    def test_invalid_config(self, tmp_path):
        code = main([
            "benchmark", "--toy", "toy", "--m", "1", "--iterations", "500",
            "--seed", "1", "--out", str(tmp_path / "b.tsv"),
        ])
        assert code == EXIT_DATA

    @pytest.mark.slow
    def test_normal_calibration(self, tmp_path):
        out = tmp_path / "calibration.tsv"
        code = main([
            "benchmark", "--normal-calibration", "--m", "5", "--lengths", "2",
            "--seed", "1", "--out", str(out),
        ])
        assert code == EXIT_OK
        assert pd.read_csv(out, sep="\t")["length"].tolist() == [1000, 100000]


class TestBootstrapCommand:
    """bootstrap 명령 테스트"""

    def test_outputs(self, tmp_path, tree_files):
        out = tmp_path / "trace.tsv"
        code = main([
            "bootstrap", str(tree_files[0][0]), "--kind", "consensus_rf", "--sizes", "20,100",
            "--replicates", "10", "--thresholds", "0.5,0.9", "--seed", "1", "--out", str(out),
        ])
        assert code == EXIT_OK
        frame = pd.read_csv(out, sep="\t")
        assert len(frame) == 4
        assert frame["threshold"].tolist() == [0.5, 0.9, 0.5, 0.9]

    def test_sizes_too_large(self, tmp_path, tree_files):
        code = main([
            "bootstrap", str(tree_files[0][0]), "--sizes", "20,500",
            "--seed", "1", "--out", str(tmp_path / "t.tsv"),
        ])
        assert code == EXIT_DATA


class TestSummarizeCommand:
    """summarize 명령 테스트"""

    def test_outputs(self, tmp_path, tree_files):
        out_dir = tmp_path / "summary"
        code = main([
            "summarize", str(tree_files[0][0]), str(tree_files[1][0]), "--out-dir", str(out_dir),
        ])
        assert code == EXIT_OK
        splits = pd.read_csv(out_dir / "splits.tsv", sep="\t")
        trees = pd.read_csv(out_dir / "trees.tsv", sep="\t")
        assert splits["probability"].is_monotonic_decreasing
        assert trees["count"].sum() == 400
        assert (out_dir / "mrc.nwk").read_text(encoding="utf-8").endswith(";\n")

    def test_burnin_removes_everything(self, tmp_path, tree_files):
        code = main([
            "summarize", str(tree_files[0][0]), "--burnin", "500", "--out-dir", str(tmp_path / "s"),
        ])
        assert code == EXIT_DATA
