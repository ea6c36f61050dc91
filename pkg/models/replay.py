from dataclasses import dataclass, field
from typing import Iterator, List, Optional

import numpy as np

from utils.errors import ConfigurationError, NotReadyError


@dataclass(frozen=True, eq=False)
class Transition:
    """One (s, a, r, s', done) record"""
    s: np.ndarray
    a: int
    r: float
    s_next: np.ndarray
    done: bool


@dataclass
class ReplayBuffer:
    """Fixed-capacity FIFO ring of transitions"""
    capacity: int
    storage: List[Optional[Transition]] = field(default_factory=list)
    size: int = 0
    cursor: int = 0

    def __post_init__(self):
        if self.capacity < 1:
            raise ConfigurationError(f"Replay capacity must be >= 1, got {self.capacity}")
        if not self.storage:
            self.storage = [None] * self.capacity

    def __len__(self) -> int:
        return self.size

    def __iter__(self) -> Iterator[Transition]:
        """Oldest to newest"""
        start = self.cursor if self.size == self.capacity else 0
        for i in range(self.size):
            yield self.storage[(start + i) % self.capacity]

    def push(self, transition: Transition) -> None:
        self.storage[self.cursor] = transition
        self.cursor = (self.cursor + 1) % self.capacity
        self.size = min(self.size + 1, self.capacity)

    def is_ready(self, min_size: int) -> bool:
        return self.size >= max(1, min_size)

    def sample_batch(self, batch_size: int, rng: np.random.Generator) -> List[Transition]:
        """Uniform draw with replacement; contents are left untouched"""
        if self.size == 0:
            raise NotReadyError("Replay buffer is empty")
        indices = rng.integers(0, self.size, size=batch_size)
        return [self.storage[i] for i in indices]
