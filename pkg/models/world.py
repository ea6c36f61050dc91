import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Tuple, Union

import numpy as np

from utils.errors import DomainError


def _check_finite(*values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise DomainError(f"Non-finite coordinate {v!r}")


@dataclass(frozen=True)
class Vec2:
    """Planar point or displacement in meters"""
    x: float
    y: float

    def __post_init__(self):
        object.__setattr__(self, 'x', float(self.x))
        object.__setattr__(self, 'y', float(self.y))
        _check_finite(self.x, self.y)

    def __sub__(self, other: 'Vec2') -> 'Vec2':
        return Vec2(self.x - other.x, self.y - other.y)

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def to_list(self) -> List[float]:
        return [self.x, self.y]


@dataclass(frozen=True)
class Segment:
    a: Vec2
    b: Vec2

    def __post_init__(self):
        if self.a == self.b:
            raise DomainError(f"Zero-length segment at ({self.a.x}, {self.a.y})")

    def to_list(self) -> List[List[float]]:
        return [self.a.to_list(), self.b.to_list()]


@dataclass(frozen=True)
class Circle:
    center: Vec2
    radius: float

    def __post_init__(self):
        object.__setattr__(self, 'radius', float(self.radius))
        _check_finite(self.radius)
        if self.radius <= 0:
            raise DomainError(f"Circle radius must be positive, got {self.radius}")

    def to_list(self) -> List[float]:
        return [self.center.x, self.center.y, self.radius]


@dataclass(frozen=True)
class Polygon:
    """Solid obstacle bounded by a closed vertex loop"""
    vertices: Tuple[Vec2, ...]

    def __post_init__(self):
        object.__setattr__(self, 'vertices', tuple(self.vertices))
        if len(self.vertices) < 3:
            raise DomainError(f"Polygon needs at least 3 vertices, got {len(self.vertices)}")

    def edges(self) -> List[Segment]:
        n = len(self.vertices)
        return [Segment(self.vertices[i], self.vertices[(i + 1) % n]) for i in range(n)]

    def to_list(self) -> List[List[float]]:
        return [v.to_list() for v in self.vertices]


Obstacle = Union[Segment, Circle, Polygon]

_OBSTACLE_RANK = {Segment: 0, Circle: 1, Polygon: 2}


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle [xmin, ymin, xmax, ymax]"""
    xmin: float
    ymin: float
    xmax: float
    ymax: float

    def __post_init__(self):
        for name in ('xmin', 'ymin', 'xmax', 'ymax'):
            object.__setattr__(self, name, float(getattr(self, name)))
        _check_finite(self.xmin, self.ymin, self.xmax, self.ymax)
        if self.xmin > self.xmax or self.ymin > self.ymax:
            raise DomainError(f"Empty rectangle {self.to_list()}")

    def corners(self) -> List[Vec2]:
        return [Vec2(self.xmin, self.ymin), Vec2(self.xmax, self.ymin),
                Vec2(self.xmax, self.ymax), Vec2(self.xmin, self.ymax)]

    def contains(self, p: Vec2) -> bool:
        return self.xmin <= p.x <= self.xmax and self.ymin <= p.y <= self.ymax

    def sample(self, rng: np.random.Generator) -> Vec2:
        return Vec2(rng.uniform(self.xmin, self.xmax), rng.uniform(self.ymin, self.ymax))

    def to_list(self) -> List[float]:
        return [self.xmin, self.ymin, self.xmax, self.ymax]


@dataclass(frozen=True)
class World:
    """Static arena: closed boundary, obstacles, spawn and goal regions"""
    name: str
    bounds: Tuple[Segment, ...]
    obstacles: Tuple[Obstacle, ...] = field(default_factory=tuple)
    spawn_region: Rect = field(default_factory=lambda: Rect(0.0, 0.0, 0.0, 0.0))
    goal_region: Rect = field(default_factory=lambda: Rect(0.0, 0.0, 0.0, 0.0))

    def __post_init__(self):
        object.__setattr__(self, 'bounds', tuple(self.bounds))
        # Canonical order: free segments, circles, polygons (stable within a kind)
        ordered = sorted(self.obstacles, key=lambda o: _OBSTACLE_RANK[type(o)])
        object.__setattr__(self, 'obstacles', tuple(ordered))

    @property
    def is_chain(self) -> bool:
        """True when bounds[i].b == bounds[i+1].a cyclically"""
        n = len(self.bounds)
        return n >= 3 and all(self.bounds[i].b == self.bounds[(i + 1) % n].a for i in range(n))

    @property
    def boundary_vertices(self) -> List[Vec2]:
        return [s.a for s in self.bounds]

    @property
    def circles(self) -> List[Circle]:
        return [o for o in self.obstacles if isinstance(o, Circle)]

    @property
    def polygons(self) -> List[Polygon]:
        return [o for o in self.obstacles if isinstance(o, Polygon)]

    @property
    def free_segments(self) -> List[Segment]:
        return [o for o in self.obstacles if isinstance(o, Segment)]

    # Packed geometry for the vectorised ray and distance queries.

    @cached_property
    def segment_array(self) -> np.ndarray:
        """(N, 4) rows ax, ay, bx, by over bounds, free segments and polygon edges"""
        segs = list(self.bounds) + self.free_segments
        for poly in self.polygons:
            segs.extend(poly.edges())
        return np.array([[s.a.x, s.a.y, s.b.x, s.b.y] for s in segs], dtype=np.float64).reshape(-1, 4)

    @cached_property
    def bounds_array(self) -> np.ndarray:
        return np.array([[s.a.x, s.a.y, s.b.x, s.b.y] for s in self.bounds], dtype=np.float64).reshape(-1, 4)

    @cached_property
    def circle_array(self) -> np.ndarray:
        """(M, 3) rows cx, cy, r"""
        return np.array([c.to_list() for c in self.circles], dtype=np.float64).reshape(-1, 3)

    @cached_property
    def diagonal(self) -> float:
        """Diagonal of the boundary's bounding box"""
        pts = self.bounds_array.reshape(-1, 2)
        span = pts.max(axis=0) - pts.min(axis=0)
        return float(math.hypot(span[0], span[1]))

    def to_dict(self) -> Dict:
        return {
            'name': self.name,
            'bounds': ([v.to_list() for v in self.boundary_vertices] if self.is_chain
                       else [s.to_list() for s in self.bounds]),
            'segments': [s.to_list() for s in self.free_segments],
            'circles': [c.to_list() for c in self.circles],
            'polygons': [p.to_list() for p in self.polygons],
            'spawn_region': self.spawn_region.to_list(),
            'goal_region': self.goal_region.to_list()
        }

    @classmethod
    def from_dict(cls, data: Dict) -> 'World':
        """Build a World from parsed world-file data (no invariant validation)"""
        raw_bounds = data['bounds']
        if raw_bounds and isinstance(raw_bounds[0][0], (list, tuple)):
            # Explicit segment form [[x1, y1], [x2, y2]]; closure is checked by validation
            bounds = [Segment(Vec2(*a), Vec2(*b)) for a, b in raw_bounds]
        else:
            vertices = [Vec2(*p) for p in raw_bounds]
            if len(vertices) > 3 and vertices[0] == vertices[-1]:
                vertices = vertices[:-1]
            bounds = [Segment(vertices[i], vertices[(i + 1) % len(vertices)]) for i in range(len(vertices))]
        obstacles: List[Obstacle] = []
        obstacles.extend(Segment(Vec2(*a), Vec2(*b)) for a, b in data.get('segments', []))
        obstacles.extend(Circle(Vec2(cx, cy), r) for cx, cy, r in data.get('circles', []))
        obstacles.extend(Polygon(tuple(Vec2(*p) for p in verts)) for verts in data.get('polygons', []))
        return cls(
            name=data['name'],
            bounds=tuple(bounds),
            obstacles=tuple(obstacles),
            spawn_region=Rect(*data['spawn_region']),
            goal_region=Rect(*data['goal_region'])
        )
