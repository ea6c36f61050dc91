from dataclasses import dataclass, field
from typing import Dict, List, Sequence

import numpy as np

from models.navigation import N_ACTIONS, OBSERVATION_SIZE

DEFAULT_LAYER_DIMS: List[int] = [OBSERVATION_SIZE, 256, 256, 256, N_ACTIONS]


@dataclass(eq=False)
class Mlp:
    """Fully-connected Q-network; weights[i] has shape (layer_dims[i+1], layer_dims[i])"""
    layer_dims: List[int]
    weights: List[np.ndarray] = field(default_factory=list)
    biases: List[np.ndarray] = field(default_factory=list)

    @classmethod
    def create(cls, layer_dims: Sequence[int] = tuple(DEFAULT_LAYER_DIMS)) -> 'Mlp':
        """Zero-initialised network with the given dimension chain"""
        dims = [int(d) for d in layer_dims]
        weights = [np.zeros((dims[i + 1], dims[i]), dtype=np.float64) for i in range(len(dims) - 1)]
        biases = [np.zeros(dims[i + 1], dtype=np.float64) for i in range(len(dims) - 1)]
        return cls(layer_dims=dims, weights=weights, biases=biases)

    @property
    def num_layers(self) -> int:
        return len(self.weights)

    @property
    def n_inputs(self) -> int:
        return self.layer_dims[0]

    @property
    def n_outputs(self) -> int:
        return self.layer_dims[-1]

    def parameters(self) -> List[np.ndarray]:
        """Weights then bias of each layer, in layer order"""
        params = []
        for w, b in zip(self.weights, self.biases):
            params.extend([w, b])
        return params

    def all_finite(self) -> bool:
        return all(np.all(np.isfinite(p)) for p in self.parameters())


@dataclass(eq=False)
class Gradients:
    weights: List[np.ndarray]
    biases: List[np.ndarray]

    @classmethod
    def zeros_like(cls, net: Mlp) -> 'Gradients':
        return cls([np.zeros_like(w) for w in net.weights], [np.zeros_like(b) for b in net.biases])

    def arrays(self) -> List[np.ndarray]:
        arrays = []
        for w, b in zip(self.weights, self.biases):
            arrays.extend([w, b])
        return arrays

    def global_norm(self) -> float:
        return float(np.sqrt(sum(float(np.sum(a * a)) for a in self.arrays())))

    def scale(self, factor: float) -> None:
        for a in self.arrays():
            a *= factor


@dataclass(eq=False)
class AdamState:
    m_weights: List[np.ndarray]
    m_biases: List[np.ndarray]
    v_weights: List[np.ndarray]
    v_biases: List[np.ndarray]
    t: int = 0
    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    @classmethod
    def create(cls, net: Mlp, lr: float = 1e-3, beta1: float = 0.9,
               beta2: float = 0.999, eps: float = 1e-8) -> 'AdamState':
        return cls(
            m_weights=[np.zeros_like(w) for w in net.weights],
            m_biases=[np.zeros_like(b) for b in net.biases],
            v_weights=[np.zeros_like(w) for w in net.weights],
            v_biases=[np.zeros_like(b) for b in net.biases],
            t=0, lr=lr, beta1=beta1, beta2=beta2, eps=eps
        )

    def hyperparameters(self) -> Dict[str, float]:
        return {'lr': self.lr, 'beta1': self.beta1, 'beta2': self.beta2, 'eps': self.eps}
