from dataclasses import dataclass, field, fields
from typing import Any, Dict, List

from utils.errors import ConfigurationError


@dataclass
class OverestimationConfig:
    """Two-step chain: start -> middle (reward 0) -> terminal (reward ~ N(0, noise_std))"""
    seeds: List[int] = field(default_factory=lambda: list(range(10)))
    steps: int = 20_000
    measure_last: int = 1_000
    noise_std: float = 1.0
    gamma: float = 0.99
    learning_rate: float = 0.05
    batch_size: int = 16
    target_sync_interval: int = 500
    warmup: int = 100
    buffer_capacity: int = 20_000

    def to_dict(self) -> Dict[str, Any]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'OverestimationConfig':
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigurationError(f"Unknown study config key(s): {', '.join(unknown)}")
        values = dict(data)
        if 'seeds' in values:
            values['seeds'] = [int(s) for s in values['seeds']]
        return cls(**values)


@dataclass
class SeedOutcome:
    """Mean max_a Q(start) over the final measured steps, per algorithm"""
    seed: int
    dqn_max_q: float
    ddqn_max_q: float

    @property
    def dqn_higher(self) -> bool:
        return self.dqn_max_q > self.ddqn_max_q

    def to_row(self) -> Dict[str, Any]:
        return {'seed': self.seed, 'dqn_max_q': self.dqn_max_q, 'ddqn_max_q': self.ddqn_max_q,
                'dqn_higher': self.dqn_higher}


STUDY_COLUMNS = ['seed', 'dqn_max_q', 'ddqn_max_q', 'dqn_higher']
