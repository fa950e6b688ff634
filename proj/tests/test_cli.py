"""End-to-end checks of the punfold command line tool.

Requires PUNFOLD_BIN and PUNFOLD_TESTGEN in the environment (set by ctest).
"""

import json
import os
import shutil
import subprocess
import sys
import tempfile
import unittest

BIN = os.environ["PUNFOLD_BIN"]
TESTGEN = os.environ["PUNFOLD_TESTGEN"]


def run(*args, cwd=None):
    return subprocess.run(
        [BIN, *args], capture_output=True, text=True, cwd=cwd, timeout=600
    )


def load_json(path):
    with open(path) as f:
        return json.load(f)


def read_text(path):
    with open(path) as f:
        return f.read()


def read_bytes(path):
    with open(path, "rb") as f:
        return f.read()


def strip_timings(report):
    report = dict(report)
    metrics = dict(report.get("metrics", {}))
    metrics.pop("wall_seconds", None)
    report["metrics"] = metrics
    return report


class CliTest(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.dir = tempfile.mkdtemp(prefix="punfold-cli-")
        subprocess.run([TESTGEN, cls.dir], check=True, timeout=120)

    @classmethod
    def tearDownClass(cls):
        shutil.rmtree(cls.dir, ignore_errors=True)

    def path(self, name):
        return os.path.join(self.dir, name)

    def test_unfold_success_writes_svg_and_report(self):
        svg = self.path("tetra.svg")
        rep = self.path("tetra.json")
        proc = run(
            "unfold", self.path("tetrahedron.obj"),
            "--seed", "3", "--svg", svg, "--report", rep,
        )
        self.assertEqual(proc.returncode, 0, proc.stderr)
        report = load_json(rep)
        self.assertEqual(report["status"], "success")
        self.assertEqual(report["faces_input"], 4)
        self.assertEqual(report["faces_output"], 4)
        self.assertEqual(report["remaining_uncollapses"], 0)
        self.assertAlmostEqual(
            report["metrics"]["coverage_percent"], 50.0, places=6
        )
        body = read_text(svg)
        self.assertEqual(body.count("<polygon"), 4)
        self.assertIn("</svg>", body)
        # stdout carries the same report.
        self.assertEqual(json.loads(proc.stdout)["status"], "success")

    def test_unfold_approximative_exit_and_hausdorff(self):
        rep = self.path("approx.json")
        proc = run(
            "unfold", self.path("icosphere320.obj"),
            "--seed", "1", "--step-budget", "0", "--report", rep,
        )
        self.assertEqual(proc.returncode, 1, proc.stderr)
        report = load_json(rep)
        self.assertEqual(report["status"], "approximative")
        self.assertGreater(report["remaining_uncollapses"], 0)
        self.assertLess(report["faces_output"], report["faces_input"])
        self.assertGreater(report["metrics"]["hausdorff_percent"], 0.0)

    def test_unfold_failed_exit(self):
        proc = run(
            "unfold", self.path("blob320.obj"),
            "--direct", "--seed", "1", "--budget-factor", "0",
        )
        self.assertEqual(proc.returncode, 2, proc.stderr)
        self.assertEqual(json.loads(proc.stdout)["status"], "failed")

    def test_nonmanifold_input_is_rejected(self):
        proc = run("unfold", self.path("nonmanifold.obj"))
        self.assertEqual(proc.returncode, 3)
        self.assertIn("error:", proc.stderr)

    def test_missing_file_is_rejected(self):
        proc = run("unfold", self.path("no-such-mesh.obj"))
        self.assertEqual(proc.returncode, 3)
        self.assertIn("error:", proc.stderr)

    def test_boundary_requires_flag(self):
        proc = run("unfold", self.path("disk.obj"), "--direct")
        self.assertEqual(proc.returncode, 3)
        proc = run(
            "unfold", self.path("disk.obj"),
            "--direct", "--allow-boundary", "--seed", "3",
        )
        self.assertEqual(proc.returncode, 0, proc.stderr)

    def test_same_seed_reproduces_svg_and_report(self):
        outs = []
        for tag in ("a", "b"):
            svg = self.path(f"det-{tag}.svg")
            rep = self.path(f"det-{tag}.json")
            proc = run(
                "unfold", self.path("icosphere320.obj"),
                "--seed", "9", "--svg", svg, "--report", rep,
            )
            self.assertEqual(proc.returncode, 0, proc.stderr)
            outs.append((read_bytes(svg), load_json(rep)))
        self.assertEqual(outs[0][0], outs[1][0])
        self.assertEqual(strip_timings(outs[0][1]), strip_timings(outs[1][1]))

    def test_decimate_then_metrics(self):
        dec = self.path("dec.obj")
        recs = self.path("dec.records")
        proc = run(
            "decimate", self.path("icosphere320.obj"),
            "--target", "80", "--obj-out", dec, "--records", recs,
        )
        self.assertEqual(proc.returncode, 0, proc.stderr)
        report = json.loads(proc.stdout)
        self.assertEqual(report["faces_output"], 80)
        self.assertEqual(report["collapses"], (320 - 80) // 2)
        self.assertGreater(os.path.getsize(recs), 0)

        proc = run("metrics", dec)
        self.assertEqual(proc.returncode, 0, proc.stderr)
        info = json.loads(proc.stdout)
        self.assertEqual(info["faces"], 80)
        self.assertTrue(info["manifold"])
        self.assertEqual(info["genus"], 0)

        proc = run(
            "metrics", self.path("icosphere320.obj"), "--compare", dec
        )
        self.assertEqual(proc.returncode, 0, proc.stderr)
        self.assertGreater(json.loads(proc.stdout)["hausdorff_percent"], 0.0)

    def test_bench_over_toy_corpus(self):
        corpus = self.path("corpus")
        os.makedirs(corpus, exist_ok=True)
        for name in ("tetrahedron.obj", "cube.obj", "icosphere80.obj"):
            shutil.copy(self.path(name), corpus)
        rep = self.path("bench.json")
        csv = self.path("bench.csv")
        proc = run(
            "bench", corpus,
            "--resolutions", "40", "--seed", "5", "--jobs", "2",
            "--report", rep, "--csv", csv,
        )
        self.assertEqual(proc.returncode, 0, proc.stderr)
        report = load_json(rep)
        self.assertEqual(len(report["rows"]), 3 * 1 * 4)
        for variant in ("q/q", "se/mp", "se/q", "direct"):
            agg = report["aggregates"][variant]
            self.assertEqual(agg["runs"], 3)
            self.assertEqual(agg["errors"], 0)
            self.assertGreaterEqual(
                agg["success_with_approx_rate"], agg["success_rate"]
            )
        lines = read_text(csv).strip().splitlines()
        self.assertEqual(len(lines), 1 + 12)
        self.assertTrue(lines[0].startswith("mesh,resolution,variant"))

        # Same seed again: identical report once timing fields are dropped.
        def strip_times(node):
            if isinstance(node, dict):
                return {
                    k: strip_times(v)
                    for k, v in node.items()
                    if k not in ("seconds", "median_seconds", "mean_seconds")
                }
            if isinstance(node, list):
                return [strip_times(v) for v in node]
            return node

        again = run(
            "bench", corpus,
            "--resolutions", "40", "--seed", "5", "--jobs", "2",
        )
        self.assertEqual(again.returncode, 0, again.stderr)
        self.assertEqual(
            strip_times(json.loads(again.stdout)), strip_times(report)
        )

    def test_bench_empty_corpus(self):
        empty = self.path("empty-corpus")
        os.makedirs(empty, exist_ok=True)
        proc = run("bench", empty)
        self.assertEqual(proc.returncode, 0, proc.stderr)
        self.assertEqual(json.loads(proc.stdout)["rows"], [])


if __name__ == "__main__":
    unittest.main(verbosity=2)
