import csv
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from prism_hedgehog.cli import (
    ATLAS_HEADER,
    FIELD_HEADER,
    atlas_text,
    config_from_dict,
    config_to_dict,
    field_samples,
    main,
)
from prism_hedgehog.quadrature import PrismGeometry
from prism_hedgehog.representative import build_representative
from prism_hedgehog.topology import VertexTopology, sweep_topologies

NONCONFORMAL = ["--e", "+,+,+", "--k", "1,1,0", "--m", "-1"]
HEDGEHOG = ["--e", "+,+,+", "--k", "0,0,0", "--m", "-1"]


def read_csv(path):
    with open(path, encoding="utf-8") as fh:
        return list(csv.reader(fh))


def test_classify_exit_codes(capsys):
    assert main(["classify", *HEDGEHOG]) == 0
    assert "conformal (boundary)" in capsys.readouterr().out
    assert main(["classify", "--e", "+,+,+", "--k", "0,0,0", "--m", "1"]) == 2
    assert "divisible by 8" in capsys.readouterr().err
    assert main(["classify", "--e", "+,+", "--k", "0,0,0", "--m", "-1"]) == 1
    with pytest.raises(SystemExit) as info:
        main(["classify", "--k", "0,0,0"])
    assert info.value.code == 1


def test_classify_json(capsys):
    assert main(["classify", *NONCONFORMAL, "--json"]) == 0
    info = json.loads(capsys.readouterr().out)
    assert info["classification"] == "nonconformal"
    assert info["sum_abs_w"] == 3 and info["m_minus"] == 9
    assert sorted(info["w"].values()) == [-1, -1, 0, 0, 0, 0, 0, 1]


def test_negative_values_after_flags(capsys):
    assert main(["classify", "--e", "+,-,+", "--k", "-1,1,0", "--m", "1", "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["k"] == [-1, 1, 0]


def test_config_json_round_trip():
    for vt in [
        VertexTopology((1, 1, 1), (0, 1, 1), -9),
        VertexTopology((1, -1, 1), (-1, 1, 0), 9),
        VertexTopology((1, 1, 1), (1, 1, 0), -1),
    ]:
        cfg = build_representative(vt)
        data = json.loads(json.dumps(config_to_dict(cfg)))
        assert config_from_dict(data) == cfg


def test_build_then_verify(tmp_path, capsys):
    path = tmp_path / "identity.json"
    assert main(["build", *HEDGEHOG, "--out", str(path)]) == 0
    assert main(["verify", str(path), *HEDGEHOG]) == 0
    capsys.readouterr()
    assert main(["verify", str(path), "--e", "+,+,+", "--k", "0,0,0", "--m", "7"]) == 4
    report = json.loads(capsys.readouterr().out)
    assert report["measured"]["m"] == -1


def test_bounds_command(capsys):
    assert main(["bounds", *NONCONFORMAL, "--measure"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["chain_ok"]
    assert report["lower_new"] == pytest.approx(12 * math.pi)
    assert main(["bounds", "--e", "+,+,+", "--k", "1,1,0", "--m", "0"]) == 2


def test_unwritable_output(tmp_path):
    target = tmp_path / "missing" / "out.json"
    assert main(["build", *HEDGEHOG, "--out", str(target)]) == 3


def test_atlas_is_deterministic_and_consistent(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert main(["atlas", "--kmax", "1", "--m-window", "-9..9", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()
    rows = read_csv(a)
    assert rows[0] == ATLAS_HEADER
    assert len(rows) - 1 == len(list(sweep_topologies(1, -9, 9)))

    row = dict(zip(rows[0], rows[1]))
    vt = VertexTopology(
        (int(row["e_x"]), int(row["e_y"]), int(row["e_z"])),
        (int(row["k_x"]), int(row["k_y"]), int(row["k_z"])),
        int(row["m"]),
    )
    sign = {1: "+", -1: "-"}
    args = ["--e", ",".join(sign[s] for s in vt.e), "--k", ",".join(map(str, vt.k)), "--m", str(vt.m)]
    capsys.readouterr()
    assert main(["classify", *args, "--json"]) == 0
    info = json.loads(capsys.readouterr().out)
    assert info["classification"] == row["classification"]
    assert info["sum_abs_w"] == int(row["sum_abs_w"])


def test_atlas_json_and_boundary_rows():
    rows = json.loads(atlas_text(0, (-1, 7), PrismGeometry(), fmt="json"))
    assert {(tuple(r[k] for k in ("e_x", "e_y", "e_z")), r["m"]) for r in rows} >= {((1, 1, 1), -1)}
    for r in rows:
        if r["m"] in (-1, 1):
            assert r["boundary"]
        assert r["lower_new"] >= r["lower_old"]


def test_field_export(tmp_path):
    cfg_path, out = tmp_path / "cfg.json", tmp_path / "field.csv"
    assert main(["build", *NONCONFORMAL, "--out", str(cfg_path)]) == 0
    assert main(["field", "--config", str(cfg_path), "--grid", "8", "--geometry", "2,1.5,1", "--out", str(out)]) == 0
    rows = read_csv(out)
    assert rows[0] == FIELD_HEADER
    data = np.array(rows[1:], dtype=float)
    p, n = data[:, :3], data[:, 3:]
    assert len(data) == 6 * 64
    assert np.max(np.abs(np.linalg.norm(n, axis=1) - 1)) <= 1e-12

    L = np.array([2.0, 1.5, 1.0])
    for axis in range(3):
        on_face = np.isclose(p[:, axis], 0) | np.isclose(p[:, axis], L[axis])
        assert np.max(np.abs(n[on_face, axis])) < 1e-10


def test_field_reflection_symmetry():
    cfg = build_representative(VertexTopology((1, 1, 1), (1, 1, 0), -9))
    geom = PrismGeometry(2.0, 1.5, 1.0)
    rng = np.random.default_rng(4)
    p = rng.uniform(0.01, 0.99, (200, 3)) * np.array(geom.lengths)
    n = field_samples(cfg, geom, p)
    for axis in range(3):
        q = p.copy()
        q[:, axis] = geom.lengths[axis] - q[:, axis]
        assert np.max(np.abs(field_samples(cfg, geom, q) - n)) < 1e-12


def test_identity_field_near_vertex_follows_edges():
    from prism_hedgehog.representative import Configuration, RationalSpec

    cfg = Configuration(RationalSpec())
    geom = PrismGeometry()
    delta = 1e-9
    points = np.array([[0.1, delta, delta], [delta, 0.1, delta], [delta, delta, 0.1]])
    n = field_samples(cfg, geom, points)
    assert np.allclose(n, np.eye(3), atol=1e-7)


def test_field_usage_errors(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    assert main(["build", *HEDGEHOG, "--out", str(cfg_path)]) == 0
    out = str(tmp_path / "f.csv")
    assert main(["field", "--config", str(cfg_path), "--slice", "z=5", "--out", out]) == 1
    assert main(["field", "--config", str(tmp_path / "nope.json"), "--out", out]) == 5


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "prism_hedgehog", "classify", *HEDGEHOG],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0 and "conformal" in proc.stdout
    help_text = subprocess.run(
        [sys.executable, "-m", "prism_hedgehog", "--help"], capture_output=True, text=True, check=False
    ).stdout
    assert "exit codes" in help_text
