from dataclasses import dataclass, field, fields
from enum import Enum
from typing import Any, Dict, List

from models.network import AdamState, Mlp
from utils.errors import ConfigurationError


class Algo(str, Enum):
    DQN = 'dqn'
    DDQN = 'ddqn'

    @classmethod
    def parse(cls, value: Any) -> 'Algo':
        if isinstance(value, Algo):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError as e:
            raise ConfigurationError(f"Unknown algorithm '{value}' (expected dqn or ddqn)") from e

    @property
    def label(self) -> str:
        return self.value.upper()


@dataclass
class EpsilonSchedule:
    """Linear decay from eps_start to eps_end over decay_steps environment steps"""
    eps_start: float = 1.0
    eps_end: float = 0.05
    decay_steps: int = 45_000

    def to_dict(self) -> Dict[str, Any]:
        return {'eps_start': self.eps_start, 'eps_end': self.eps_end, 'decay_steps': self.decay_steps}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'EpsilonSchedule':
        unknown = sorted(set(data) - {'eps_start', 'eps_end', 'decay_steps'})
        if unknown:
            raise ConfigurationError(f"Unknown epsilon key(s): {', '.join(unknown)}")
        default = cls()
        return cls(
            eps_start=float(data.get('eps_start', default.eps_start)),
            eps_end=float(data.get('eps_end', default.eps_end)),
            decay_steps=int(data.get('decay_steps', default.decay_steps))
        )


@dataclass
class AgentConfig:
    algo: Algo = Algo.DDQN
    gamma: float = 0.99
    batch_size: int = 64
    target_sync_interval: int = 2000
    epsilon: EpsilonSchedule = field(default_factory=EpsilonSchedule)
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    adam_eps: float = 1e-8
    max_grad_norm: float = 10.0
    warmup: int = 1000
    buffer_capacity: int = 100_000
    hidden_dims: List[int] = field(default_factory=lambda: [256, 256, 256])

    def to_dict(self) -> Dict[str, Any]:
        data = {f.name: getattr(self, f.name) for f in fields(self)}
        data['algo'] = self.algo.value
        data['epsilon'] = self.epsilon.to_dict()
        data['hidden_dims'] = list(self.hidden_dims)
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'AgentConfig':
        """Defaults overridden key by key; unknown keys are rejected"""
        known = {f.name: f for f in fields(cls)}
        unknown = sorted(set(data) - set(known))
        if unknown:
            raise ConfigurationError(f"Unknown agent config key(s): {', '.join(unknown)}")
        values: Dict[str, Any] = {}
        for name, value in data.items():
            try:
                if name == 'algo':
                    values[name] = Algo.parse(value)
                elif name == 'epsilon':
                    values[name] = EpsilonSchedule.from_dict(dict(value))
                elif name == 'hidden_dims':
                    values[name] = [int(d) for d in value]
                elif known[name].type is int:
                    values[name] = int(value)
                else:
                    values[name] = float(value)
            except (TypeError, ValueError) as e:
                raise ConfigurationError(f"Agent config key '{name}' has invalid value {value!r}") from e
        return cls(**values)


@dataclass(eq=False)
class DqnAgent:
    """Learner state: online net (theta), target net (theta-), optimizer, step counter"""
    config: AgentConfig
    online: Mlp
    target: Mlp
    adam: AdamState
    global_step: int = 0
