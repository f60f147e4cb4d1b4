import numpy as np
import pytest

import kinreg


def test_linear_target_is_reproduced_inside_the_hull():
    rng = np.random.default_rng(0)
    x = rng.random((200, 2))
    y = 0.3 + 1.5 * x[:, 0] - 0.7 * x[:, 1]
    model = kinreg.fit(x, y, theta=0.01, level=1)
    q = 0.3 + 0.4 * rng.random((50, 2))
    pred, failed = model.predict(q)
    assert failed == 0
    np.testing.assert_allclose(pred, 0.3 + 1.5 * q[:, 0] - 0.7 * q[:, 1], atol=1e-6)


def test_model_properties():
    x = np.linspace(0.0, 1.0, 21)
    model = kinreg.fit(x, x**2, theta=0.002, level=2)
    assert len(model) == 21
    assert model.dim == 1
    assert model.level == 2
    assert model.theta == 0.002
    assert model.psi.shape == (21,)
    assert np.all(model.psi[5:-5] < (x**2)[5:-5])


def test_search_and_benchmark_functions():
    x, y = kinreg.sample("franke2d", 400, seed=3)
    assert x.shape == (400, 2)
    np.testing.assert_allclose(kinreg.benchmark("franke2d", x), y)
    xn, yn, transform = kinreg.normalize(x, y)
    assert xn.min() >= 0.0 and xn.max() <= 1.0
    assert yn.min() == -1.0 and yn.max() == 1.0
    assert set(transform) == {"in_min", "in_max", "out_min", "out_max"}
    res = kinreg.search_theta(x, y, level=0)
    assert res.theta > 0.0
    assert np.isfinite(res.best_rmse)
    assert len(res.as_dict()["trace"]) >= 1


def test_rbf_interpolates_nodes():
    x, y = kinreg.sample("weierstrass", 30, seed=1)
    model = kinreg.rbf_fit(x, y, theta=0.002)
    np.testing.assert_allclose(model.predict(x), y, atol=1e-8 * np.abs(y).max())


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError):
        kinreg.fit(np.zeros((3, 2)), np.zeros(2), theta=0.1)
    with pytest.raises(ValueError):
        kinreg.fit(np.zeros((3, 2)), np.zeros(3), theta=-1.0)
    model = kinreg.fit(np.array([[0.0, 0.0], [1.0, 1.0]]), np.array([0.0, 1.0]), theta=0.1, level=0)
    with pytest.raises(ValueError):
        model.predict(np.zeros((2, 3)))
