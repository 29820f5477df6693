import math

import numpy as np
import pytest

from prism_hedgehog.errors import AccuracyError
from prism_hedgehog.representative import (
    Configuration,
    RationalSpec,
    build_anticonformal,
    build_conformal,
    build_nonconformal,
    build_representative,
    config_invariants,
    random_spec,
    spec_invariants,
)
from prism_hedgehog.topology import (
    VertexTopology,
    conjugate_topology,
    rotate_topology,
    sweep_topologies,
)
from prism_hedgehog.verify import (
    KINK_SIGNS,
    check_tangent_bc,
    measure_edge_signs,
    measure_kink_numbers,
    measure_trapped_area,
    verify,
)
from prism_hedgehog.verify import _kink, _unwrapped_change

IDENTITY = Configuration(RationalSpec())
CASE_1A = RationalSpec(epsilon=-1, n=1, real_factors=((0.5, -1),), imag_factors=((0.5, -1),))


def test_calibration_fixture():
    """The kink signs are fixed by the case-1a spec with k = (1, 1, 1)."""
    assert tuple(spec_invariants(CASE_1A).k) == (1, 1, 1)
    raw = [_kink(_unwrapped_change(Configuration(CASE_1A), axis), 1)[0] for axis in "xyz"]
    assert tuple(int(math.copysign(1, r)) for r in raw) == KINK_SIGNS
    assert tuple(measure_kink_numbers(Configuration(CASE_1A))) == (1, 1, 1)


def test_independent_specs_agree_with_closed_form():
    case_1b = build_conformal(VertexTopology((1, 1, 1), (1, 1, 0), -9))
    assert tuple(measure_kink_numbers(case_1b)) == (1, 1, 0)
    assert tuple(measure_kink_numbers(IDENTITY)) == (0, 0, 0)
    rng = np.random.default_rng(99)
    for _ in range(10):
        rs = random_spec(rng, max_real=3, max_imag=3, max_interior=2, max_abs_n=5)
        assert tuple(measure_kink_numbers(Configuration(rs))) == tuple(spec_invariants(rs).k), rs


def test_edge_sign_examples():
    assert tuple(measure_edge_signs(IDENTITY)) == (1, 1, 1)
    assert tuple(measure_edge_signs(Configuration(RationalSpec(n=-3)))) == (1, 1, -1)
    assert tuple(measure_edge_signs(Configuration(RationalSpec(), conjugated=True))) == (1, -1, 1)


def test_trapped_area_examples():
    m, residual = measure_trapped_area(IDENTITY)
    assert m == -1 and residual < 1e-6
    case_2b = Configuration(RationalSpec(n=-3, interior_factors=((0.5 * np.exp(0.25j * math.pi), 1),)))
    assert measure_trapped_area(case_2b)[0] == -7
    glued = build_nonconformal(VertexTopology((1, 1, 1), (1, 1, 0), -1))
    assert measure_trapped_area(glued)[0] == -1


def test_tangent_bc_residuals():
    report = check_tangent_bc(lambda w: w + 0.01)
    assert report.real_interval == 0
    assert report.arc == pytest.approx(0.01, rel=0.02)
    assert not report.ok()
    assert check_tangent_bc(Configuration(RationalSpec(), conjugated=True)).max < 1e-10


def test_wrong_declaration_fails():
    report = verify(IDENTITY, VertexTopology((1, 1, 1), (1, 1, 0), -9))
    assert not report.passed
    assert report.measured_m == -1
    assert report.as_dict()["measured"]["m"] == -1


def test_verify_passes_on_worked_examples():
    for vt in [
        VertexTopology((1, 1, 1), (0, 0, 0), -1),
        VertexTopology((1, -1, 1), (0, 0, 0), 1),
        VertexTopology((1, 1, 1), (1, 1, 0), -1),
        VertexTopology((1, -1, 1), (-1, 1, 0), 1),
        VertexTopology((1, 1, -1), (0, 0, 1), -3),
    ]:
        report = verify(build_representative(vt), vt)
        assert report.passed, (vt, report)


def test_rotated_and_conjugated_builds():
    for vt in [VertexTopology((1, 1, 1), (0, 1, 1), -9), VertexTopology((1, 1, 1), (1, 0, 1), -9)]:
        cfg = build_conformal(vt)
        assert cfg.rotations > 0
        expected = spec_invariants(cfg.base)
        for _ in range(cfg.rotations):
            expected = rotate_topology(expected)
        assert expected == vt
        assert verify(cfg, vt).passed

        bar = conjugate_topology(vt)
        assert verify(build_anticonformal(bar), bar).passed


def test_random_builds_verify():
    rng = np.random.default_rng(1)
    vts = list(sweep_topologies(2, -30, 30))
    for i in rng.choice(len(vts), 12, replace=False):
        vt = vts[i]
        cfg = build_representative(vt)
        assert config_invariants(cfg) == vt
        report = verify(cfg, vt)
        assert report.passed, (vt, report.errors, report.measured)


def test_winding_is_refinement_invariant():
    cfg = build_conformal(VertexTopology((1, 1, 1), (1, 1, 0), -9))
    for axis in "xyz":
        a = _kink(_unwrapped_change(cfg, axis, 512), 1)[0]
        b = _kink(_unwrapped_change(cfg, axis, 1024), 1)[0]
        assert a == b


def test_rounding_failure_is_reported():
    # residuals are non-negative, so a negative threshold always trips the check
    with pytest.raises(AccuracyError, match="pi/2") as info:
        measure_trapped_area(IDENTITY, threshold=-1.0)
    assert info.value.partial.value == pytest.approx(-math.pi / 2, abs=1e-9)
