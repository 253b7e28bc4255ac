import numpy as np
import pytest
from numpy.testing import assert_allclose

from gaugeplastic.errors import (
    AmbiguousNormalError,
    HypothesisError,
    InvalidBodyError,
    NondifferentiablePointError,
    ZeroVectorError,
)
from gaugeplastic.geometry import (
    DiskBody,
    EllipseBody,
    PBallBody,
    PolygonBody,
    fourier_body,
    hausdorff_distance,
    hessian_bound_diagnostic,
    smooth_approximation,
    square_body,
)

SMOOTH_BODIES = {
    "disk": DiskBody(1.0),
    "ellipse": EllipseBody(2.0, 1.0),
    "p_ball4": PBallBody(4.0),
}


@pytest.fixture(params=sorted(SMOOTH_BODIES))
def smooth_body(request):
    return SMOOTH_BODIES[request.param]


@pytest.fixture
def points(rng):
    return rng.normal(size=(200, 2))


def test_euler_identity(smooth_body, points):
    lhs = np.sum(smooth_body.grad_gauge(points) * points, axis=1)
    assert_allclose(lhs, smooth_body.gauge(points), rtol=0, atol=1e-8)
    lhs = np.sum(smooth_body.grad_polar_gauge(points) * points, axis=1)
    assert_allclose(lhs, smooth_body.polar_gauge(points), rtol=0, atol=1e-8)


def test_positive_homogeneity(smooth_body, points):
    for lam in (0.25, 3.0):
        assert_allclose(smooth_body.gauge(lam * points), lam * smooth_body.gauge(points), rtol=1e-12)
        assert_allclose(smooth_body.grad_gauge(lam * points), smooth_body.grad_gauge(points), atol=1e-10)


def test_gradient_duality(smooth_body, points):
    # Dγ(Dγ°(ξ)) = ξ/γ°(ξ) and γ(Dγ°(ξ)) = 1
    boundary = smooth_body.grad_polar_gauge(points)
    assert_allclose(smooth_body.gauge(boundary), 1.0, atol=1e-8)
    expected = points / smooth_body.polar_gauge(points)[:, None]
    assert_allclose(smooth_body.grad_gauge(boundary), expected, atol=1e-8)


def test_generalized_cauchy_schwarz(smooth_body, rng):
    x = rng.normal(size=(200, 2))
    xi = rng.normal(size=(200, 2))
    slack = smooth_body.gauge(x) * smooth_body.polar_gauge(xi) - np.sum(x * xi, axis=1)
    assert np.all(slack >= -1e-8)


def test_gradient_matches_finite_differences(smooth_body, rng):
    x = rng.normal(size=(20, 2))
    step = 1e-6
    fd = np.stack(
        [
            (smooth_body.gauge(x + step * e) - smooth_body.gauge(x - step * e)) / (2 * step)
            for e in np.eye(2)
        ],
        axis=1,
    )
    assert_allclose(smooth_body.grad_gauge(x), fd, atol=1e-6)


def test_hessian_is_degenerate_along_x(smooth_body, rng):
    x = rng.normal(size=(50, 2))
    hess = smooth_body.hess_gauge(x)
    assert_allclose(np.einsum("aij,aj->ai", hess, x), 0.0, atol=1e-8)


def test_square_gauge_values():
    square = square_body(1.0)
    assert square.gauge(np.array([0.5, 0.2])) == pytest.approx(0.5)
    assert square.gauge(np.array([-0.3, 0.9])) == pytest.approx(0.9)
    assert square.polar_gauge(np.array([1.0, 1.0])) == pytest.approx(2.0)
    assert not square.is_smooth
    assert not square.is_strictly_convex
    assert square.is_symmetric


def test_polygon_kinks_raise():
    square = square_body(1.0)
    with pytest.raises(NondifferentiablePointError):
        square.grad_gauge(np.array([1.0, 1.0]))
    with pytest.raises(AmbiguousNormalError) as info:
        square.grad_polar_gauge(np.array([1.0, 0.0]))
    assert_allclose(info.value.midpoint, [1.0, 0.0], atol=1e-12)
    assert_allclose(square.grad_polar_gauge(np.array([1.0, 0.0]), on_ambiguous="midpoint"), [1.0, 0.0])


def test_zero_vector_raises():
    with pytest.raises(ZeroVectorError):
        DiskBody(1.0).grad_gauge(np.zeros(2))


@pytest.mark.parametrize(
    "vertices",
    [
        [[1.0, 1.0], [1.0, -1.0], [-1.0, -1.0], [-1.0, 1.0]],  # clockwise
        [[1.0, 1.0], [2.0, 1.0], [2.0, 2.0], [1.0, 2.0]],  # origin outside
        [[0.0, 0.0], [1.0, 0.0]],
    ],
)
def test_invalid_polygons(vertices):
    with pytest.raises(InvalidBodyError):
        PolygonBody(vertices)


def test_reflected_polygon_gauge(rng):
    body = PolygonBody([[1.0, -0.5], [1.0, 1.0], [-0.5, 1.0], [-0.5, -0.5]])
    assert not body.is_symmetric
    x = rng.normal(size=(30, 2))
    assert_allclose(body.reflect().gauge(x), body.gauge(-x))


def test_radius_of_curvature():
    assert DiskBody(2.0).radius_of_curvature(np.array([0.3, -0.4])) == pytest.approx(2.0)
    # At (a, 0) the ellipse has radius of curvature b²/a
    assert EllipseBody(2.0, 1.0).radius_of_curvature(np.array([1.0, 0.0])) == pytest.approx(0.5)
    assert EllipseBody(2.0, 1.0).radius_of_curvature(np.array([0.0, 1.0])) == pytest.approx(4.0)


def test_polar_of_polar_is_identity(rng):
    x = rng.normal(size=(20, 2))
    for body in (EllipseBody(2.0, 1.0), PBallBody(3.0)):
        assert_allclose(body.polar_body().gauge(x), body.polar_gauge(x), rtol=1e-10)


def test_fourier_body_matches_disk(rng):
    body = fourier_body([1.5])
    x = rng.normal(size=(20, 2))
    assert_allclose(body.gauge(x), np.hypot(x[:, 0], x[:, 1]) / 1.5, rtol=1e-10)
    assert_allclose(body.polar_gauge(x), 1.5 * np.hypot(x[:, 0], x[:, 1]), rtol=1e-8)


def test_fourier_body_rejects_nonconvex():
    with pytest.raises(InvalidBodyError):
        fourier_body([1.0, 0.0, 0.0, 0.5])


def test_smooth_approximation_contains_and_converges():
    square = square_body(1.0)
    distances = []
    dirs = np.stack([np.cos(np.linspace(0, 2 * np.pi, 97)), np.sin(np.linspace(0, 2 * np.pi, 97))], axis=1)
    for k in range(1, 5):
        approx = smooth_approximation(square, k)
        assert approx.is_smooth and approx.is_strictly_convex
        assert np.all(approx.polar_gauge(dirs) >= square.polar_gauge(dirs) - 1e-12)
        distances.append(hausdorff_distance(approx, square))
    assert all(b < a for a, b in zip(distances, distances[1:]))


def test_smooth_approximation_keeps_smooth_bodies():
    disk = DiskBody(1.0)
    assert smooth_approximation(disk, 3) is disk
    with pytest.raises(ValueError):
        smooth_approximation(square_body(), 0)


def test_hessian_bound_diagnostic():
    assert hessian_bound_diagnostic(DiskBody(1.0)) == pytest.approx(2.0, rel=1e-9)
    with pytest.raises(HypothesisError):
        hessian_bound_diagnostic(square_body())
