"""End-to-end checks of the edvrp command line. Usage: test_cli.py <edvrp> <scratch dir>"""

import csv
import io
import json
import os
import shutil
import subprocess
import sys
import unittest
import xml.etree.ElementTree as ET

EXE = None
WORK = None


def run(*args, env=None):
    return subprocess.run([EXE, *map(str, args)], capture_output=True, text=True, env=env)


def read(path):
    with open(path, "rb") as f:
        return f.read()


def load(path):
    with open(path) as f:
        return json.load(f)


def text(path):
    with open(path) as f:
        return f.read()


def idle_and_metrics(inst, routes):
    """Recomputes per-machine metrics straight from the instance JSON."""
    L = inst["tensor"]["L"]
    t = inst["tensor"]["data"]

    def d(i, j, a, b):
        return t[(i * (L + 1) + j) * 4 + a * 2 + b]

    lengths = {l["id"]: l["length_m"] for l in inst["lines"]}
    s_P, t_P, c_P = 0.0, 0.0, 0.0
    for route, m in zip(routes, inst["machines"]):
        if not route:
            continue
        s = d(0, route[0][0], 0, route[0][1])
        for (l1, e1), (l2, e2) in zip(route, route[1:]):
            s += d(l1, l2, 1 - e1, e2)
        s += d(route[-1][0], 0, 1 - route[-1][1], 0)
        w = sum(lengths[l] for l, _ in route)
        s_P += s
        t_P = max(t_P, s / m["vv"] + w / m["vw"])
        c_P += s / m["vv"] * m["cv"] + w / m["vw"] * m["cw"]
    return s_P, t_P, c_P


def split_csv(text):
    rows_part, _, summary_part = text.partition("\n\n")
    rows = list(csv.DictReader(io.StringIO(rows_part)))
    summary = list(csv.DictReader(io.StringIO(summary_part)))
    return rows, summary


class Generate(unittest.TestCase):
    def test_files_and_determinism(self):
        a, b = os.path.join(WORK, "gen_a"), os.path.join(WORK, "gen_b")
        for out in (a, b):
            shutil.rmtree(out, ignore_errors=True)
            r = run("generate", "--fields", 3, "--machines", 5, "--cases", 10, "--seed", 7, "--out", out)
            self.assertEqual(r.returncode, 0, r.stderr)
        names = sorted(os.listdir(a))
        self.assertEqual(len([n for n in names if n.startswith("case-")]), 10)
        self.assertIn("manifest.json", names)
        for n in names:
            self.assertEqual(read(os.path.join(a, n)), read(os.path.join(b, n)), n)
        inst = load(os.path.join(a, "case-0000.json"))
        self.assertEqual(len(inst["machines"]), 5)
        self.assertEqual(len(inst["fields"]), 3)
        self.assertEqual(len(inst["lines"]), 39)

    def test_rejects_unsupported_field_count(self):
        r = run("generate", "--fields", 5, "--out", os.path.join(WORK, "bad"))
        self.assertEqual(r.returncode, 1)
        self.assertIn("5", r.stderr)

    def test_case_study(self):
        out = os.path.join(WORK, "cs")
        r = run("generate", "--cases", 0, "--case-study", "--out", out)
        self.assertEqual(r.returncode, 0, r.stderr)
        inst = load(os.path.join(out, "case_study.json"))
        self.assertEqual([m["vv"] for m in inst["machines"]], [4.5, 5, 5.5, 6])


class Solve(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.dir = os.path.join(WORK, "solve")
        shutil.rmtree(cls.dir, ignore_errors=True)
        r = run("generate", "--fields", 2, "--machines", 3, "--cases", 1, "--seed", 3, "--out", cls.dir)
        assert r.returncode == 0, r.stderr
        cls.farm = os.path.join(cls.dir, "case-0000.json")
        cls.inst = load(cls.farm)

    def solve(self, name, *args):
        out = os.path.join(self.dir, name)
        r = run("solve", self.farm, *args, "--out", out)
        self.assertEqual(r.returncode, 0, r.stderr)
        return load(out)

    def check_metrics(self, sol):
        s, t, c = idle_and_metrics(self.inst, sol["routes"])
        agg = sol["aggregate"]
        self.assertAlmostEqual(agg["s_P"] / s, 1.0, delta=1e-9)
        self.assertAlmostEqual(agg["t_P"] / t, 1.0, delta=1e-9)
        self.assertAlmostEqual(agg["c_P"] / c, 1.0, delta=1e-9)
        lines = sorted(l for r in sol["routes"] for l, _ in r)
        self.assertEqual(lines, list(range(1, len(self.inst["lines"]) + 1)))

    def test_oga(self):
        sol = self.solve("oga.json", "--objective", "s", "--algo", "oga", "--seed", 1)
        self.assertEqual(sol["algorithm"], "OGA")
        self.check_metrics(sol)
        trace = sol["trace"]["best_objective_per_iteration"]
        self.assertEqual(len(trace), 200)
        self.assertEqual(trace[-1], sol["aggregate"]["s_P"])
        self.assertTrue(all(b <= a for a, b in zip(trace, trace[1:])))

    def test_rand(self):
        sol = self.solve("rand.json", "--algo", "rand", "--budget-evals", 20000, "--objective", "c")
        self.assertEqual(sol["algorithm"], "rand")
        self.assertNotIn("trace", sol)
        self.check_metrics(sol)

    def test_ablation_flags(self):
        sol = self.solve("noorder.json", "--algo", "oga", "--no-sort", "--no-greedy", "--objective", "t",
                         "--iterations", 20)
        self.assertEqual(sol["algorithm"], "GA-no-order")
        self.check_metrics(sol)
        self.assertEqual(self.solve("sortonly.json", "--no-greedy", "--iterations", 5)["algorithm"], "OGA-sort")

    def test_usage_and_data_errors(self):
        self.assertEqual(run("solve", self.farm, "--objective", "x").returncode, 1)
        self.assertEqual(run("solve", self.farm, "--algo", "tabu").returncode, 1)
        self.assertEqual(run("solve", os.path.join(self.dir, "missing.json")).returncode, 2)
        broken = os.path.join(self.dir, "broken.json")
        with open(broken, "w") as f:
            f.write("{not json")
        self.assertEqual(run("solve", broken).returncode, 2)
        self.assertEqual(run("frobnicate").returncode, 1)


class Suites(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.dir = os.path.join(WORK, "suite")
        shutil.rmtree(cls.dir, ignore_errors=True)
        r = run("generate", "--cases", 10, "--seed", 11, "--target-nodes", 16, "--out", cls.dir)
        assert r.returncode == 0, r.stderr
        cls.manifest = os.path.join(cls.dir, "manifest.json")

    def test_bench_counts_and_means(self):
        out = os.path.join(self.dir, "bench.csv")
        r = run("bench", self.manifest, "--algos", "rand,OGA", "--objectives", "s", "--iterations", 30,
                "--budget-evals", 2000, "--verify", "--out", out)
        self.assertEqual(r.returncode, 0, r.stderr)
        content = text(out)
        rows, summary = split_csv(content)
        self.assertEqual(content.splitlines()[0], "case_id,algorithm,objective,s_P_m,t_P_s,c_P_L,wall_time_s,seed,status")
        self.assertEqual(len(rows), 20)
        self.assertEqual([s["label"] for s in summary], ["rand(s)", "OGA(s)"])
        for s in summary:
            algo = s["label"].split("(")[0]
            vals = [float(r["s_P_m"]) for r in rows if r["algorithm"] == algo]
            self.assertAlmostEqual(float(s["avg_s_P_m"]), sum(vals) / len(vals), delta=1e-5)
        self.assertEqual([r["case_id"] for r in rows], sorted(r["case_id"] for r in rows))
        self.assertTrue(all(r["wall_time_s"] == "0.000000" for r in rows))

    def test_thread_cap_does_not_change_bytes(self):
        outs = []
        for threads in ("1", "3"):
            env = dict(os.environ, EDVRP_THREADS=threads)
            out = os.path.join(self.dir, f"bench_{threads}.csv")
            r = run("bench", self.manifest, "--objectives", "t,c", "--iterations", 10, "--population", 20,
                    "--budget-evals", 500, "--out", out, env=env)
            self.assertEqual(r.returncode, 0, r.stderr)
            outs.append(read(out))
        self.assertEqual(outs[0], outs[1])

    def test_ablate_shape(self):
        out = os.path.join(self.dir, "ablate.csv")
        r = run("ablate", self.manifest, "--iterations", 10, "--population", 20, "--out", out)
        self.assertEqual(r.returncode, 0, r.stderr)
        rows, summary = split_csv(text(out))
        self.assertEqual(len(rows), 12 * 10)
        labels = [s["label"] for s in summary]
        self.assertEqual(len(labels), 12)
        self.assertEqual(labels[:3], ["OGA(s)", "OGA(t)", "OGA(c)"])
        self.assertEqual(labels[-1], "GA-no-order(c)")
        self.assertIn("ordering s: OGA", r.stderr)

    def test_missing_case_file_is_an_error_row(self):
        d = os.path.join(WORK, "suite_broken")
        shutil.rmtree(d, ignore_errors=True)
        shutil.copytree(self.dir, d)
        os.remove(os.path.join(d, "case-0002.json"))
        r = run("bench", os.path.join(d, "manifest.json"), "--algos", "rand", "--objectives", "s",
                "--budget-evals", 100)
        self.assertEqual(r.returncode, 0, r.stderr)
        rows, summary = split_csv(r.stdout)
        bad = [x for x in rows if x["case_id"] == "case-0002"]
        self.assertEqual(len(bad), 1)
        self.assertTrue(bad[0]["status"].startswith("error"))
        self.assertEqual(summary[0]["n"], "9")

    def test_unknown_algorithm(self):
        self.assertEqual(run("bench", self.manifest, "--algos", "tabu").returncode, 1)


class OracleAndPlot(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.dir = os.path.join(WORK, "oracle")
        shutil.rmtree(cls.dir, ignore_errors=True)
        for name, nodes in (("one", 2), ("eight", 9), ("six", 7)):
            r = run("generate", "--fields", 1, "--machines", 3, "--cases", 1, "--target-nodes", nodes,
                    "--seed", 5, "--out", os.path.join(cls.dir, name))
            assert r.returncode == 0, r.stderr

    def test_single_line(self):
        path = os.path.join(self.dir, "one", "case-0000.json")
        out = os.path.join(self.dir, "one_opt.json")
        r = run("oracle", path, "--objective", "s", "--out", out)
        self.assertEqual(r.returncode, 0, r.stderr)
        inst = load(path)
        d = inst["tensor"]["data"]
        # d[0][1][0][b] + d[1][0][1-b][0], L = 1
        trips = [d[4 + b] + d[8 + 2 * (1 - b)] for b in (0, 1)]
        sol = load(out)
        self.assertAlmostEqual(sol["aggregate"]["s_P"], min(trips), delta=1e-9)
        self.assertIn("optimum s", r.stdout)

    def test_size_bound(self):
        r = run("oracle", os.path.join(self.dir, "eight", "case-0000.json"))
        self.assertEqual(r.returncode, 2)
        self.assertIn("1..7 lines", r.stderr)

    def test_oracle_bounds_solve(self):
        path = os.path.join(self.dir, "six", "case-0000.json")
        out = os.path.join(self.dir, "six_opt.json")
        self.assertEqual(run("oracle", path, "--objective", "t", "--out", out).returncode, 0)
        opt = load(out)["aggregate"]["t_P"]
        ga_out = os.path.join(self.dir, "six_ga.json")
        self.assertEqual(run("solve", path, "--objective", "t", "--out", ga_out).returncode, 0)
        self.assertGreaterEqual(load(ga_out)["aggregate"]["t_P"], opt - 1e-9)

    def test_plot(self):
        path = os.path.join(self.dir, "six", "case-0000.json")
        sol = os.path.join(self.dir, "six_plot_sol.json")
        self.assertEqual(run("solve", path, "--iterations", 15, "--out", sol).returncode, 0)
        svg = os.path.join(self.dir, "map.svg")
        r = run("plot", path, sol, "--out", svg)
        self.assertEqual(r.returncode, 0, r.stderr)
        ns = {"s": "http://www.w3.org/2000/svg"}
        root = ET.parse(svg).getroot()
        self.assertEqual(len(root.findall(".//s:path", ns)), 3)
        conv = ET.parse(os.path.join(self.dir, "map-convergence.svg")).getroot()
        curve = conv.find(".//s:polyline[@id='best-objective']", ns)
        values = [float(v) for v in curve.get("data-values").split()]
        self.assertEqual(values, load(sol)["trace"]["best_objective_per_iteration"])

    def test_plot_rejects_mismatch(self):
        six = os.path.join(self.dir, "six", "case-0000.json")
        one = os.path.join(self.dir, "one", "case-0000.json")
        sol = os.path.join(self.dir, "mismatch_sol.json")
        self.assertEqual(run("solve", one, "--iterations", 2, "--population", 4, "--out", sol).returncode, 0)
        r = run("plot", six, sol, "--out", os.path.join(self.dir, "nope.svg"))
        self.assertEqual(r.returncode, 2)


if __name__ == "__main__":
    EXE, WORK = sys.argv[1], sys.argv[2]
    os.makedirs(WORK, exist_ok=True)
    unittest.main(argv=sys.argv[:1], verbosity=2)
