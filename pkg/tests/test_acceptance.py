"""The ten acceptance criteria, each at its stated tolerance and time limit.

Every test records one PASS/FAIL line; conftest prints them after the run.
"""

import contextlib
import json
import math
import time

import numpy as np
import pytest

from prism_hedgehog.bounds import bound_ratio, lower_bound_new, lower_bound_old, upper_bound_formula
from prism_hedgehog.cli import atlas_text
from prism_hedgehog.quadrature import (
    DENSITY_CHECKS,
    PrismGeometry,
    QuadratureConfig,
    energy,
    trapped_area,
    unoriented_area,
)
from prism_hedgehog.representative import (
    Configuration,
    RationalSpec,
    build_anticonformal,
    build_conformal,
    build_nonconformal,
    config_invariants,
    conformal_case,
    random_spec,
    spec_invariants,
)
from prism_hedgehog.topology import (
    Kind,
    VertexTopology,
    classify,
    conjugate_topology,
    sweep_topologies,
    wrapping_numbers,
)
from prism_hedgehog.verify import verify

from test_representative import derivative_classes, fd_errors

RESULTS = {}
HALF_PI = math.pi / 2
CUBE = PrismGeometry()
NONCONFORMAL = VertexTopology((1, 1, 1), (1, 1, 0), -1)


@contextlib.contextmanager
def criterion(number, title):
    """Record a PASS/FAIL line for ``number`` and let failures propagate."""
    detail = {}
    start = time.perf_counter()
    try:
        yield detail
    except BaseException as exc:
        reason = str(exc).splitlines()[0] if str(exc) else ""
        RESULTS[number] = f"criterion {number:2d} FAIL  {title}: {type(exc).__name__}: {reason}"
        print(RESULTS[number])
        raise
    elapsed = time.perf_counter() - start
    extra = "  ".join(f"{k}={v}" for k, v in detail.items())
    RESULTS[number] = f"criterion {number:2d} PASS  {title} ({elapsed:.1f} s)  {extra}".rstrip()
    print(RESULTS[number])


def brute_class(values):
    if all(v <= 0 for v in values):
        return Kind.CONFORMAL
    if all(v >= 0 for v in values):
        return Kind.ANTICONFORMAL
    return Kind.NONCONFORMAL


def test_criterion_01_exact_sweep():
    with criterion(1, "exact-algebra sweep |k|<=3, m in [-63, 63]") as d:
        start = time.perf_counter()
        count = 0
        for vt in sweep_topologies(3, -63, 63):
            w = wrapping_numbers(vt)
            assert sum(w.values) == vt.m, vt
            assert classify(vt).kind is brute_class(w.values), vt
            count += 1
        elapsed = time.perf_counter() - start
        d["cases"] = count
        assert count > 2000
        assert elapsed < 5, f"sweep took {elapsed:.2f} s"


def test_criterion_02_round_trip_synthesis():
    with criterion(2, "round-trip synthesis of every conformal topology") as d:
        cases, rotated, count = set(), 0, 0
        for vt in sweep_topologies(3, -63, 63):
            if classify(vt).kind is not Kind.CONFORMAL:
                continue
            cfg = build_conformal(vt)
            if cfg.rotations == 0:
                assert spec_invariants(cfg.base) == vt, vt
            else:
                rotated += 1
            assert config_invariants(cfg) == vt, vt
            bar = conjugate_topology(vt)
            assert config_invariants(build_anticonformal(bar)) == bar, bar
            cases.add(conformal_case(vt)[0])
            count += 1
        assert cases == {"1a", "1b", "2a", "2b"}
        assert rotated > 0
        d["topologies"] = count
        d["rotated"] = rotated


def test_criterion_03_numeric_invariants():
    with criterion(3, "measured (e, k, m) of 200 random specs") as d:
        rng = np.random.default_rng(2024)
        start = time.perf_counter()
        worst = 0.0
        for _ in range(200):
            rs = random_spec(rng)
            report = verify(Configuration(rs), spec_invariants(rs))
            assert report.passed, (rs, report.errors, report.measured)
            worst = max(worst, report.residuals["area"])
        elapsed = time.perf_counter() - start
        assert worst < 1e-6 * HALF_PI
        assert elapsed < 120, f"took {elapsed:.1f} s"
        d["max_area_residual"] = f"{worst:.2e}"


def test_criterion_04_nonconformal_example():
    with criterion(4, "nonconformal worked example (+,+,+; 1,1,0; -1)") as d:
        w = wrapping_numbers(NONCONFORMAL)
        assert sorted(w.values) == [-1, -1, 0, 0, 0, 0, 0, 1]
        assert lower_bound_new(NONCONFORMAL, CUBE) == pytest.approx(12 * math.pi, rel=1e-15)
        assert lower_bound_old(NONCONFORMAL, CUBE) == pytest.approx(4 * math.pi, rel=1e-15)
        cfg = build_nonconformal(NONCONFORMAL)
        assert verify(cfg, NONCONFORMAL).passed
        qc = QuadratureConfig()
        A = unoriented_area(cfg, qc)
        E = energy(cfg, CUBE, qc)
        tol_a = 10 * qc.rel_tol * A.value
        tol_e = 10 * qc.rel_tol * E.value
        assert A.value <= 17 * HALF_PI + tol_a
        assert 12 * math.pi - tol_e <= E.value <= 8 * CUBE.L * A.value + tol_e
        d["A"] = f"{A.value:.6f}"
        d["E"] = f"{E.value:.6f}"


def test_criterion_05_identity_hedgehog():
    with criterion(5, "identity hedgehog on the unit cube") as d:
        identity = Configuration(RationalSpec())
        qc = QuadratureConfig(rel_tol=1e-8)
        start = time.perf_counter()
        omega = trapped_area(identity, qc).value
        E = energy(identity, CUBE, qc).value
        elapsed = time.perf_counter() - start
        vt = VertexTopology((1, 1, 1), (0, 0, 0), -1)
        assert abs(omega + HALF_PI) < 1e-6
        assert lower_bound_new(vt, CUBE) == 4 * math.pi
        assert upper_bound_formula(vt, CUBE) == 4 * math.pi * CUBE.L
        assert CUBE.L == math.sqrt(3)
        assert 4 * math.pi <= E <= 4 * math.sqrt(3) * math.pi
        assert elapsed < 10, f"took {elapsed:.1f} s"
        d["E"] = f"{E:.10f}"


def test_criterion_06_conformal_area_equality():
    with criterion(6, "A = |Omega| on 20 random conformal builds") as d:
        rng = np.random.default_rng(6)
        conformal = [vt for vt in sweep_topologies(3, -63, 63) if classify(vt).kind is Kind.CONFORMAL]
        worst = 0.0
        for i in rng.choice(len(conformal), 20, replace=False):
            cfg = build_conformal(conformal[i])
            omega = trapped_area(cfg).value
            A = unoriented_area(cfg).value
            rel = abs(A - abs(omega)) / abs(omega)
            assert rel < 1e-6, (conformal[i], A, omega)
            worst = max(worst, rel)
        d["max_rel_gap"] = f"{worst:.2e}"


def test_criterion_07_density_inequality():
    # run after the quadrature criteria above so the counters cover them
    with criterion(7, "pointwise |oriented| <= unoriented density") as d:
        assert DENSITY_CHECKS["samples"] > 0
        assert DENSITY_CHECKS["violations"] == 0
        d["samples"] = DENSITY_CHECKS["samples"]


def test_criterion_08_derivative_oracle():
    with criterion(8, "Wirtinger derivatives vs central differences") as d:
        for name, (cfg, points) in derivative_classes().items():
            assert len(points) >= 95, name
            err = fd_errors(cfg, points)
            assert err < 1e-6, (name, err)
            d[name.replace(" ", "_")] = f"{err:.1e}"


def test_criterion_09_ratios():
    with criterion(9, "upper/lower ratios L/Lmin and 9 L/Lmin") as d:
        geoms = [CUBE, PrismGeometry(2, 1.5, 1), PrismGeometry(3, 3, 0.25)]
        checked = 0
        for vt in sweep_topologies(3, -63, 63):
            nonconformal = classify(vt).kind is Kind.NONCONFORMAL
            for geom in geoms:
                expected = (9 if nonconformal else 1) * (geom.L / geom.Lmin)
                assert bound_ratio(vt, geom) == expected, (vt, geom)
                checked += 1
        assert bound_ratio(NONCONFORMAL, CUBE) == 9 * math.sqrt(3)
        d["checked"] = checked


def test_criterion_10_atlas_determinism(tmp_path):
    with criterion(10, "atlas kmax=2, m in -17..17 byte-identical twice") as d:
        start = time.perf_counter()
        paths = []
        for name in ("a.csv", "b.csv"):
            path = tmp_path / name
            path.write_text(atlas_text(2, (-17, 17), CUBE), encoding="utf-8")
            paths.append(path)
        elapsed = time.perf_counter() - start
        assert paths[0].read_bytes() == paths[1].read_bytes()
        assert elapsed < 60
        d["rows"] = len(paths[0].read_text(encoding="utf-8").splitlines()) - 1
        j = atlas_text(2, (-17, 17), CUBE, fmt="json")
        assert j == atlas_text(2, (-17, 17), CUBE, fmt="json")
        assert len(json.loads(j)) == d["rows"]
