"""
Q-network: forward pass, analytic gradients, Adam and weight copies.
"""

import numpy as np
import pytest

from models.network import DEFAULT_LAYER_DIMS, AdamState, Gradients, Mlp
from services.network_service import NetworkService
from utils.errors import DimensionError, DomainError


def _random_net(dims, seed):
    """He-initialised weights with small random biases so every parameter matters"""
    rng = np.random.default_rng(seed)
    net = NetworkService.create_network(dims, rng)
    for b in net.biases:
        b[...] = rng.normal(0.0, 0.1, size=b.shape)
    return net


def _reference_forward(net, x):
    h = np.asarray(x, dtype=np.float64)
    for i, (w, b) in enumerate(zip(net.weights, net.biases)):
        z = np.array([sum(w[j, k] * h[k] for k in range(len(h))) for j in range(w.shape[0])]) + b
        h = np.maximum(z, 0.0) if i < net.num_layers - 1 else z
    return h


# ----------------------------------------------------------------------------
# forward
# ----------------------------------------------------------------------------

def test_zero_network_outputs_zeros():
    net = NetworkService.create_network()
    q = NetworkService.forward(net, np.random.default_rng(0).uniform(size=26))
    np.testing.assert_array_equal(q, np.zeros(5))


def test_single_path_network():
    net = NetworkService.create_network()
    net.weights[0][0, 0] = 1.0
    net.weights[1][0, 0] = 1.0
    net.weights[2][0, 0] = 1.0
    net.weights[3][2, 0] = 1.0
    x = np.zeros(26)
    x[0] = 0.7
    np.testing.assert_array_equal(NetworkService.forward(net, x), [0.0, 0.0, 0.7, 0.0, 0.0])


def test_forward_matches_reference_arithmetic():
    net = _random_net([26, 16, 12, 5], seed=1)
    rng = np.random.default_rng(2)
    for _ in range(20):
        x = rng.uniform(size=26)
        np.testing.assert_allclose(NetworkService.forward(net, x), _reference_forward(net, x),
                                   rtol=1e-12, atol=1e-12)


def test_batched_forward_matches_rows():
    net = _random_net(DEFAULT_LAYER_DIMS, seed=3)
    batch = np.random.default_rng(4).uniform(size=(32, 26))
    q = NetworkService.forward(net, batch)
    assert q.shape == (32, 5)
    for row, expected in zip(batch, q):
        np.testing.assert_allclose(NetworkService.forward(net, row), expected, rtol=1e-10, atol=1e-12)


@pytest.mark.parametrize('shape', [(25,), (3, 27), (2, 3, 26)])
def test_forward_wrong_input_width(shape):
    with pytest.raises(DimensionError):
        NetworkService.forward(NetworkService.create_network(), np.zeros(shape))


# ----------------------------------------------------------------------------
# gradients
# ----------------------------------------------------------------------------

def test_zero_residual_gives_zero_gradient():
    net = _random_net(DEFAULT_LAYER_DIMS, seed=5)
    x = np.random.default_rng(6).uniform(size=26)
    q = NetworkService.forward(net, x)
    loss, grads = NetworkService.backward(net, x, 3, q[3])
    assert loss == 0.0
    assert grads.global_norm() == 0.0


def test_unchosen_outputs_get_no_gradient():
    net = _random_net(DEFAULT_LAYER_DIMS, seed=7)
    x = np.random.default_rng(8).uniform(size=26)
    _, grads = NetworkService.backward(net, x, 1, 50.0)
    out_w, out_b = grads.weights[-1], grads.biases[-1]
    for j in (0, 2, 3, 4):
        assert out_b[j] == 0.0
        assert not np.any(out_w[j])
    assert out_b[1] != 0.0


def _numeric_check(net, x, a, y, indices=None, h=1e-6):
    _, grads = NetworkService.backward(net, x, a, y)
    for param, grad in zip(net.parameters(), grads.arrays()):
        flat_p, flat_g = param.reshape(-1), grad.reshape(-1)
        picks = range(flat_p.size) if indices is None else indices(flat_p.size)
        for k in picks:
            original = flat_p[k]
            flat_p[k] = original + h
            up = NetworkService.backward(net, x, a, y)[0]
            flat_p[k] = original - h
            down = NetworkService.backward(net, x, a, y)[0]
            flat_p[k] = original
            numeric = (up - down) / (2 * h)
            analytic = flat_g[k]
            # exact zeros (dead units) are compared absolutely
            assert abs(analytic - numeric) <= 1e-4 * max(abs(analytic), abs(numeric)) + 1e-7, \
                (param.shape, k, analytic, numeric)


def test_gradients_match_finite_differences():
    rng = np.random.default_rng(10)
    for draw in range(100):
        hidden = [int(d) for d in rng.integers(3, 9, size=rng.integers(1, 4))]
        net = _random_net([26] + hidden + [5], seed=draw)
        x = rng.uniform(size=26)
        _numeric_check(net, x, int(rng.integers(5)), float(rng.normal(0.0, 5.0)))


def test_gradients_match_finite_differences_full_size():
    net = _random_net(DEFAULT_LAYER_DIMS, seed=11)
    x = np.random.default_rng(12).uniform(size=26)
    pick_rng = np.random.default_rng(13)
    _numeric_check(net, x, 4, 3.0, indices=lambda n: pick_rng.choice(n, size=min(n, 25), replace=False))


def test_batch_loss_is_mean_of_single_losses():
    net = _random_net([26, 32, 32, 5], seed=14)
    rng = np.random.default_rng(15)
    obs = rng.uniform(size=(8, 26))
    actions = rng.integers(5, size=8)
    targets = rng.normal(size=8)
    loss, grads = NetworkService.backward_batch(net, obs, actions, targets)
    singles = [NetworkService.backward(net, o, a, y) for o, a, y in zip(obs, actions, targets)]
    assert loss == pytest.approx(np.mean([s[0] for s in singles]), rel=1e-12)
    for k, g in enumerate(grads.arrays()):
        mean = np.mean([s[1].arrays()[k] for s in singles], axis=0)
        np.testing.assert_allclose(g, mean, rtol=1e-10, atol=1e-14)


def test_backward_rejects_bad_batches():
    net = NetworkService.create_network([26, 4, 5])
    with pytest.raises(DimensionError):
        NetworkService.backward_batch(net, np.zeros((2, 26)), [0], [1.0, 2.0])
    with pytest.raises(DimensionError):
        NetworkService.backward(net, np.zeros(26), 5, 1.0)
    with pytest.raises(DomainError):
        NetworkService.backward(net, np.zeros(26), 0, float('nan'))


def test_clip_gradients():
    net = NetworkService.create_network([2, 2])
    grads = Gradients.zeros_like(net)
    grads.weights[0][...] = 30.0
    norm = NetworkService.clip_gradients(grads, 10.0)
    assert norm == pytest.approx(60.0)
    assert grads.global_norm() == pytest.approx(10.0)
    assert NetworkService.clip_gradients(grads, 100.0) == pytest.approx(10.0)
    assert grads.global_norm() == pytest.approx(10.0)


# ----------------------------------------------------------------------------
# Adam
# ----------------------------------------------------------------------------

def _scalar_net(w):
    net = Mlp.create([1, 1])
    net.weights[0][0, 0] = w
    return net


def _quadratic_grads(net):
    grads = Gradients.zeros_like(net)
    grads.weights[0][0, 0] = 2.0 * (net.weights[0][0, 0] - 1.0)
    return grads


def test_adam_zero_gradient_is_a_no_op():
    net = _random_net([26, 8, 5], seed=16)
    before = [p.copy() for p in net.parameters()]
    state = AdamState.create(net)
    NetworkService.adam_step(net, Gradients.zeros_like(net), state)
    assert state.t == 1
    for a, b in zip(before, net.parameters()):
        np.testing.assert_array_equal(a, b)


def test_adam_first_step():
    net = _scalar_net(0.0)
    state = AdamState.create(net, lr=0.1)
    NetworkService.adam_step(net, _quadratic_grads(net), state)
    assert net.weights[0][0, 0] == pytest.approx(0.1, abs=1e-6)
    assert state.t == 1


def test_adam_converges_on_quadratic():
    net = _scalar_net(0.0)
    state = AdamState.create(net, lr=0.1)
    for _ in range(500):
        NetworkService.adam_step(net, _quadratic_grads(net), state)
    assert abs(net.weights[0][0, 0] - 1.0) < 1e-3
    assert state.t == 500


def test_adam_rejects_mismatched_gradients():
    net = NetworkService.create_network([26, 8, 5])
    other = NetworkService.create_network([26, 9, 5])
    with pytest.raises(DimensionError):
        NetworkService.adam_step(net, Gradients.zeros_like(other), AdamState.create(net))


# ----------------------------------------------------------------------------
# initialisation and copies
# ----------------------------------------------------------------------------

def test_init_is_seeded():
    a = NetworkService.create_network(rng=np.random.default_rng(21))
    b = NetworkService.create_network(rng=np.random.default_rng(21))
    for p, q in zip(a.parameters(), b.parameters()):
        np.testing.assert_array_equal(p, q)


def test_init_bounds_and_statistics():
    net = NetworkService.create_network(rng=np.random.default_rng(22))
    bound = np.sqrt(6.0 / 26)
    assert np.abs(net.weights[0]).max() <= bound
    for b in net.biases:
        assert not np.any(b)
    for w in net.weights:
        fan_in_bound = np.sqrt(6.0 / w.shape[1])
        assert np.abs(w).max() <= fan_in_bound
    hidden = np.concatenate([net.weights[1].ravel(), net.weights[2].ravel()])
    stderr = np.sqrt(6.0 / 256) / np.sqrt(3.0) / np.sqrt(hidden.size)
    assert abs(hidden.mean()) < 3 * stderr


def test_copy_weights_is_independent():
    src = _random_net(DEFAULT_LAYER_DIMS, seed=23)
    dst = NetworkService.create_network()
    NetworkService.copy_weights(src, dst)
    x = np.random.default_rng(24).uniform(size=(10, 26))
    np.testing.assert_array_equal(NetworkService.forward(src, x), NetworkService.forward(dst, x))
    src.weights[0][0, 0] += 1.0
    assert dst.weights[0][0, 0] != src.weights[0][0, 0]


def test_copy_weights_dimension_mismatch():
    with pytest.raises(DimensionError):
        NetworkService.copy_weights(NetworkService.create_network([26, 8, 5]),
                                    NetworkService.create_network([26, 8, 3]))
