import logging
from typing import List, Sequence, Tuple

import numpy as np

from models.network import DEFAULT_LAYER_DIMS, AdamState, Gradients, Mlp
from utils.errors import DimensionError, DomainError

logger = logging.getLogger(__name__)


class NetworkService:
    """Forward pass, analytic backpropagation and Adam for the Q-network"""

    @staticmethod
    def create_network(layer_dims: Sequence[int] = tuple(DEFAULT_LAYER_DIMS),
                       rng: np.random.Generator = None) -> Mlp:
        net = Mlp.create(layer_dims)
        if rng is not None:
            NetworkService.init_weights(net, rng)
        return net

    @staticmethod
    def init_weights(net: Mlp, rng: np.random.Generator) -> None:
        """He-uniform weights, bound sqrt(6 / fan_in); zero biases"""
        for i, w in enumerate(net.weights):
            bound = np.sqrt(6.0 / w.shape[1])
            net.weights[i] = rng.uniform(-bound, bound, size=w.shape)
            net.biases[i] = np.zeros_like(net.biases[i])

    @staticmethod
    def _as_batch(net: Mlp, obs: np.ndarray) -> Tuple[np.ndarray, bool]:
        x = np.asarray(obs, dtype=np.float64)
        single = x.ndim == 1
        if single:
            x = x[None, :]
        if x.ndim != 2 or x.shape[1] != net.n_inputs:
            raise DimensionError(f"Network expects {net.n_inputs} inputs, got shape {np.shape(obs)}")
        return x, single

    @staticmethod
    def _forward_layers(net: Mlp, x: np.ndarray) -> Tuple[List[np.ndarray], List[np.ndarray]]:
        """Layer inputs and pre-activations; the last pre-activation is the Q output"""
        inputs, pre = [], []
        h = x
        for i, (w, b) in enumerate(zip(net.weights, net.biases)):
            inputs.append(h)
            z = h @ w.T + b
            pre.append(z)
            h = np.maximum(z, 0.0) if i < net.num_layers - 1 else z
        return inputs, pre

    @staticmethod
    def forward(net: Mlp, obs: np.ndarray) -> np.ndarray:
        """Q-values for one observation (n_in,) or a batch (B, n_in)"""
        x, single = NetworkService._as_batch(net, obs)
        q = NetworkService._forward_layers(net, x)[1][-1]
        return q[0] if single else q

    @staticmethod
    def backward_batch(net: Mlp, obs: np.ndarray, actions: Sequence[int],
                       td_targets: Sequence[float]) -> Tuple[float, Gradients]:
        """Mean of (y - q[a])^2 over the batch and its gradient"""
        x, _ = NetworkService._as_batch(net, obs)
        actions = np.asarray(actions, dtype=np.int64).reshape(-1)
        td_targets = np.asarray(td_targets, dtype=np.float64).reshape(-1)
        batch = x.shape[0]
        if actions.shape[0] != batch or td_targets.shape[0] != batch:
            raise DimensionError(
                f"Batch of {batch} inputs needs as many actions and targets "
                f"(got {actions.shape[0]} and {td_targets.shape[0]})"
            )
        if np.any(actions < 0) or np.any(actions >= net.n_outputs):
            raise DimensionError(f"Action index outside [0, {net.n_outputs - 1}]")
        if not np.all(np.isfinite(td_targets)):
            raise DomainError("TD targets must be finite")

        inputs, pre = NetworkService._forward_layers(net, x)
        rows = np.arange(batch)
        residual = pre[-1][rows, actions] - td_targets
        loss = float(np.mean(residual ** 2))

        grads = Gradients.zeros_like(net)
        # Only the chosen action's unit carries error
        delta = np.zeros_like(pre[-1])
        delta[rows, actions] = 2.0 * residual / batch
        for i in range(net.num_layers - 1, -1, -1):
            grads.weights[i] = delta.T @ inputs[i]
            grads.biases[i] = delta.sum(axis=0)
            if i > 0:
                delta = (delta @ net.weights[i]) * (pre[i - 1] > 0.0)
        return loss, grads

    @staticmethod
    def backward(net: Mlp, obs: np.ndarray, action_index: int, td_target: float) -> Tuple[float, Gradients]:
        return NetworkService.backward_batch(net, np.asarray(obs)[None, :], [action_index], [td_target])

    @staticmethod
    def _check_shapes(net: Mlp, arrays_w: List[np.ndarray], arrays_b: List[np.ndarray], label: str) -> None:
        if len(arrays_w) != net.num_layers or len(arrays_b) != net.num_layers:
            raise DimensionError(f"{label} has {len(arrays_w)} layers, network has {net.num_layers}")
        for i in range(net.num_layers):
            if arrays_w[i].shape != net.weights[i].shape or arrays_b[i].shape != net.biases[i].shape:
                raise DimensionError(
                    f"{label} layer {i} shape {arrays_w[i].shape} does not match {net.weights[i].shape}"
                )

    @staticmethod
    def clip_gradients(grads: Gradients, max_norm: float) -> float:
        """Scale in place to global norm max_norm; returns the norm before clipping"""
        norm = grads.global_norm()
        if max_norm > 0 and norm > max_norm:
            grads.scale(max_norm / norm)
            logger.debug("Clipped gradient norm %.3f to %.3f", norm, max_norm)
        return norm

    @staticmethod
    def adam_step(net: Mlp, grads: Gradients, state: AdamState) -> None:
        """Bias-corrected Adam update of every parameter, in place"""
        NetworkService._check_shapes(net, grads.weights, grads.biases, 'Gradients')
        NetworkService._check_shapes(net, state.m_weights, state.m_biases, 'Adam state')
        state.t += 1
        b1, b2 = state.beta1, state.beta2
        correction1 = 1.0 - b1 ** state.t
        correction2 = 1.0 - b2 ** state.t
        groups = (
            (net.weights, grads.weights, state.m_weights, state.v_weights),
            (net.biases, grads.biases, state.m_biases, state.v_biases),
        )
        for params, gs, ms, vs in groups:
            for p, g, m, v in zip(params, gs, ms, vs):
                m *= b1
                m += (1.0 - b1) * g
                v *= b2
                v += (1.0 - b2) * g * g
                p -= state.lr * (m / correction1) / (np.sqrt(v / correction2) + state.eps)

    @staticmethod
    def copy_weights(src: Mlp, dst: Mlp) -> None:
        """Overwrite dst parameters with a bitwise copy of src"""
        if list(src.layer_dims) != list(dst.layer_dims):
            raise DimensionError(f"Cannot copy {src.layer_dims} weights into {dst.layer_dims}")
        dst.weights = [w.copy() for w in src.weights]
        dst.biases = [b.copy() for b in src.biases]
