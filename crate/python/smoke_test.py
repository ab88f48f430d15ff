"""Smoke test for the paradox_lens extension module.

Build and install first, e.g. `pip install --no-build-isolation ./crates/py`
(needs maturin), then run `python python/smoke_test.py`.
"""

import math
import os
import tempfile

import paradox_lens as pl


def check(cond, msg):
    if not cond:
        raise SystemExit(f"FAIL: {msg}")
    print(f"ok   {msg}")


star = pl.Graph(5, [(0, i) for i in range(1, 5)])
check(star.node_count == 5 and star.edge_count == 4, "star has 5 nodes and 4 edges")
check(star.observed_paradox().global_p == 0.8, "star global_p is 0.8")
check(star.observed_paradox().observed_ratio() == (4, 5), "star exact ratio 4/5")
check(star.degree_stats()["assortativity"] == -1.0, "star assortativity is -1")

k5 = pl.Graph(5, [(u, v) for u in range(5) for v in range(u + 1, 5)])
check(k5.observed_paradox("xbar-majority").global_p == 0.0, "K5 has no paradox")
for model in ("2k", "2k-gauss", "3k"):
    check(all(f == 0.0 for f in k5.predict(model).f.values()), f"K5 {model} predicts zero")

with tempfile.TemporaryDirectory() as tmp:
    path = os.path.join(tmp, "star.txt")
    star.write_edge_list(path)
    loaded, report = pl.Graph.load(path)
    check(loaded.edges() == star.edges(), "edge list round trip")
    check(report["parsed_edges"] == 4, "ingestion report")

ln = pl.LogNormal(2.5, 1.25, -0.75)
check(abs(ln.assortativity() + 0.18) < 0.01, "log-normal r(-0.75) near -0.18")
points = pl.sweep(2.5, 1.25, [-0.5, 0.0, 0.5])
check(points[0][2] > points[1][2] > points[2][2], "sweep P decreases in c")
check(points[1][1] == 0.0, "sweep r(0) is 0")

g, rep = pl.LogNormal(2.5, 1.25, 0.0).generate(nodes=20000, seed=3)
check(g.node_count == 20000 and rep["repair_tv"] <= 1e-3, "log-normal generation")
check(abs(rep["realized_assortativity"]) < 0.05, "c = 0 graph is nearly uncorrelated")

cp = pl.generate_core_periphery(50, 3000, 7000, seed=7)
observed = cp.observed_paradox("xbar-majority").f
errors = {}
for model in ("2k", "3k"):
    pred = cp.predict(model).f
    errors[model] = sum(abs(pred[k] - f) for k, f in observed.items()) / len(observed)
check(errors["3k"] < errors["2k"], f"3K error {errors['3k']:.4f} below 2K {errors['2k']:.4f}")

prof = cp.exceedance_profile()
mid = prof[10]
check(0.0 <= mid["mu"] <= 1.0 and not math.isnan(mid["rho"]), "exceedance profile exposes mu and rho")

print("all smoke checks passed")
