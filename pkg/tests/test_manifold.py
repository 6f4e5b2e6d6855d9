import json

import numpy as np
import pytest

from papm.expr import finite_difference_jet2
from papm.harness.fixtures import FIXTURES, get
from papm.manifold import (
    FormatError,
    OddDimension,
    SpecSyntaxError,
    StructureViolation,
    evaluate_frame,
    load_spec,
    validate_structure,
)

from conftest import chart, spec_from

I4 = [["1" if i == j else "0" for j in range(4)] for i in range(4)]
FLAT_P = [["1", "0", "0", "0"], ["0", "1", "0", "0"], ["0", "0", "-1", "0"], ["0", "0", "0", "-1"]]


def test_flat_product_loads():
    spec = get("flat_product").spec()
    assert spec.dimension == 4
    assert spec.coordinates == ("x1", "x2", "x3", "x4")
    assert spec.tolerance == 1e-9


def test_odd_dimension_rejected():
    text = chart([["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]], [["1", "0", "0"]] * 3, [[0, 0, 0]])
    with pytest.raises(OddDimension, match="even-dimensional manifold"):
        load_spec(text)


def test_syntax_error_is_located():
    P = [row[:] for row in FLAT_P]
    P[0][0] = "x1 +"
    with pytest.raises(SpecSyntaxError) as info:
        load_spec(chart(I4, P, [[0, 0, 0, 0]]))
    assert info.value.location == "structure[0][0]"
    assert "structure[0][0]" in str(info.value)


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d.pop("points"),
        lambda d: d.update(dimension="4"),
        lambda d: d.update(coordinates=["x1", "x1", "x3", "x4"]),
        lambda d: d.update(metric=d["metric"][:3]),
        lambda d: d.update(points=[[0, 0, 0]]),
        lambda d: d.update(points=[]),
        lambda d: d.update(tolerance=-1),
        lambda d: d["metric"][0].__setitem__(3, None),
        lambda d: d["structure"][1].__setitem__(1, "y"),
    ],
)
def test_format_errors(mutate):
    doc = json.loads(chart(I4, FLAT_P, [[0, 0, 0, 0]]))
    mutate(doc)
    with pytest.raises(FormatError):
        load_spec(json.dumps(doc))


def test_not_json():
    with pytest.raises(FormatError):
        load_spec("{")


def test_digest_is_stable_and_content_sensitive():
    a = load_spec(chart(I4, FLAT_P, [[0, 0, 0, 0]]))
    b = load_spec(chart(I4, FLAT_P, [[0, 0, 0, 0]]))
    c = load_spec(chart(I4, FLAT_P, [[0, 0, 0, 1]]))
    assert a.digest == b.digest != c.digest


def test_flat_product_validates_exactly():
    spec = get("flat_product").spec()
    rep = validate_structure(spec, (0, 0, 0, 0))
    assert rep.passed
    assert rep.metric_symmetry == rep.involution == rep.compatibility == rep.trace == 0.0
    assert rep.min_eigenvalue == 1.0


def test_rotating_2d_validates_at_every_point():
    spec = get("rotating_2d").spec()
    for point in [*spec.points, (5.3, -2.0), (-11.0, 0.1)]:
        rep = validate_structure(spec, point)
        assert rep.passed
        assert max(rep.involution, rep.compatibility, rep.trace) <= 1e-12


def test_trace_violation_reported_not_raised():
    P = [row[:] for row in FLAT_P]
    P[3][3] = "-0.5"
    spec = spec_from(I4, P, [[0, 0, 0, 0]])
    rep = validate_structure(spec, (0, 0, 0, 0))
    assert not rep.passed
    assert rep.trace == 0.5
    assert "trace" in rep.failures()
    with pytest.raises(StructureViolation):
        evaluate_frame(spec, (0, 0, 0, 0))


def test_indefinite_metric_fails_validation():
    g = [row[:] for row in I4]
    g[0][0] = "-1"
    rep = validate_structure(spec_from(g, FLAT_P, [[0, 0, 0, 0]]), (0, 0, 0, 0))
    assert rep.failures() == ["positive_definite"]


def test_incompatible_structure_fails_validation():
    # P swaps x1 and x3 but g weights them differently
    g = [row[:] for row in I4]
    g[0][0] = "2"
    P = [["0", "0", "1", "0"], ["0", "1", "0", "0"], ["1", "0", "0", "0"], ["0", "0", "0", "-1"]]
    rep = validate_structure(spec_from(g, P, [[0, 0, 0, 0]]), (0, 0, 0, 0))
    assert rep.failures() == ["compatibility"]


@pytest.mark.parametrize("fx", FIXTURES, ids=lambda f: f.name)
def test_every_fixture_point_validates(fx):
    spec = fx.spec()
    assert len(spec.points) == len(fx.expected)
    for point in spec.points:
        assert validate_structure(spec, point, 1e-9).passed


def test_flat_product_frame_derivatives_vanish():
    f = evaluate_frame(get("flat_product").spec(), (0.3, -0.2, 0.5, 1.1))
    for arr in (f.dg, f.ddg, f.dP, f.ddP):
        assert not arr.any()
    np.testing.assert_array_equal(f.P_lower, f.g @ f.P)


def test_rotating_frame_at_zero_angle():
    f = evaluate_frame(get("rotating_2d").spec(), (0.0, 0.0))
    np.testing.assert_allclose(f.dP[0], [[0.0, 1.0], [1.0, 0.0]], atol=1e-15)
    assert not f.dP[1].any()


def test_warped_metric_derivative():
    spec = get("warped").spec()
    for point in spec.points:
        f = evaluate_frame(spec, point)
        x1 = point[0]
        assert f.dg[0, 2, 2] == pytest.approx(2 * x1, abs=1e-15)
        fd = finite_difference_jet2(spec.metric[2][2], point)
        assert abs(fd.gradient[0] - 2 * x1) <= 1e-6 * (1 + abs(2 * x1))


def test_frame_is_read_only_and_symmetric():
    f = evaluate_frame(get("heisenberg_w3").spec(), (0.3, -0.5, 0.8, 0.6))
    with pytest.raises(ValueError):
        f.g[0, 0] = 2.0
    assert np.array_equal(f.g, f.g.T)
    assert np.array_equal(f.ddg, f.ddg.transpose(1, 0, 2, 3))
    np.testing.assert_allclose(f.g @ f.g_inv, np.eye(4), atol=1e-12)


@pytest.mark.parametrize("fx", FIXTURES, ids=lambda f: f.name)
def test_frame_jets_match_finite_differences(fx):
    spec = fx.spec()
    for point in spec.points:
        f = evaluate_frame(spec, point)
        for matrix, d1, d2 in ((spec.metric, f.dg, f.ddg), (spec.structure, f.dP, f.ddP)):
            for i, row in enumerate(matrix):
                for j, e in enumerate(row):
                    fd = finite_difference_jet2(e, point)
                    assert np.all(np.abs(d1[:, i, j] - fd.gradient) <= 1e-6 * (1 + np.abs(d1[:, i, j])))
                    assert np.all(np.abs(d2[:, :, i, j] - fd.hessian) <= 1e-6 * (1 + np.abs(d2[:, :, i, j])))


def test_numeric_entries_are_accepted_as_literals():
    g = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    spec = load_spec(chart(g, FLAT_P, [[0, 0, 0, 0]]))
    assert validate_structure(spec, (0, 0, 0, 0)).passed
