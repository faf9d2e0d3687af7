import csv
import io
import json
import math
import os
from pathlib import Path

import numpy as np
import pytest

import glctkit

SOURCE = Path(os.environ.get("GLCTKIT_SOURCE_DIR", Path(__file__).resolve().parents[2]))


def test_round_trip_and_unitarity():
    g = glctkit.cycle_graph(16)
    op = glctkit.build_operator(g, glctkit.GlctParams(0.8, 16.0, 0.5, 1.0))
    rng = np.random.default_rng(0)
    x = rng.normal(size=16) + 1j * rng.normal(size=16)
    y = glctkit.glct(op, x)
    assert np.linalg.norm(glctkit.iglct(op, y) - x) / np.linalg.norm(x) < 1e-10
    assert abs(np.linalg.norm(y) - np.linalg.norm(x)) < 1e-10 * np.linalg.norm(x)


def test_gft_matches_numpy_eigenvectors():
    g = glctkit.cycle_graph(8, directed=True)
    op = glctkit.build_operator(g, glctkit.GlctParams())
    a = glctkit.adjacency(g)
    # every operator row is a left eigenvector of A
    f = op.forward
    lam = op.shift_values
    assert np.allclose(f @ a, np.diag(lam) @ f, atol=1e-10)


def test_graph_io_round_trip(tmp_path):
    g = glctkit.Graph(4, [(0, 1, 0.5), (1, 2, 1.0), (2, 3, 2.0)])
    path = tmp_path / "g.txt"
    glctkit.write_graph(g, path)
    assert glctkit.load_graph(path) == g


def test_errors_map_to_python_exceptions(tmp_path):
    with pytest.raises(ValueError):
        glctkit.GlctParams(1.0, -1.0)
    bad = tmp_path / "bad.txt"
    bad.write_text("3 undirected\n0 0 1.0\n")
    with pytest.raises(ValueError, match="self-loop"):
        glctkit.load_graph(bad)


def test_selection_and_recovery():
    g = glctkit.cycle_graph(10)
    op = glctkit.build_operator(g, glctkit.GlctParams(0.8, 10.0, 0.5, 1.0))
    greedy = glctkit.greedy_select("MaxSig", op, 3, 3)
    assert greedy == [2, 1, 8]
    assert sorted(glctkit.exhaustive_select("MaxVol", op, 3, 3)) == [1, 3, 8]
    assert glctkit.is_qualified(op, 3, greedy)
    assert glctkit.recoverability_margin(op, 3, greedy) < 1.0
    r = glctkit.recovery_operator(op, 3, greedy)
    x = glctkit.bandlimit(np.arange(10, dtype=complex), op, 3)
    assert glctkit.nmse(x, r @ x[greedy]) < 1e-20


def test_silhouette_hand_example():
    pts = np.array([[0.0, 0.0], [0.0, 1.0], [10.0, 0.0], [10.0, 1.0]])
    assert glctkit.silhouette(pts, [0, 0, 1, 1]) == pytest.approx(1 - 2 / (10 + math.sqrt(101)), abs=1e-12)


def test_run_experiment_outputs_consumable_tables():
    cfg = json.loads((SOURCE / "configs" / "region.json").read_text())
    cfg["trials"] = 50
    results, summary, artifacts = glctkit.run_experiment(json.dumps(cfg))
    rows = list(csv.DictReader(io.StringIO(results)))
    assert rows and set(rows[0]) == {"experiment", "basis", "strategy", "m", "trial", "metric", "value"}
    s = json.loads(summary)
    assert s["all_passed"] is True
    region = list(csv.DictReader(io.StringIO(artifacts["region.csv"])))
    assert {r["corner"] for r in region} == {"UR", "UL", "LR", "LL"}
    assert all(0.0 <= float(r["zeta"]) <= 1.0 for r in region)


def test_sweep_artifact_schema():
    cfg = {
        "experiment": "sweep",
        "id": "py",
        "graph": {"type": "cycle", "n": 16},
        "params": {"alpha": 0.8, "beta": 16, "chirp_l": 0.5, "chirp_f": 1},
        "bandwidth": 3,
        "strategies": ["MaxSigMin"],
        "samples": [3, 6],
        "trials": 2,
        "noise_sigma": 0.01,
        "seed": 1,
    }
    _, _, artifacts = glctkit.run_experiment(json.dumps(cfg))
    sweep = list(csv.DictReader(io.StringIO(artifacts["nmse_sweep.csv"])))
    assert set(sweep[0]) == {"strategy", "m", "trial", "nmse"}
    assert len(sweep) == 4
