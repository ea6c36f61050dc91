import json
import logging
import math
import os
from functools import lru_cache
from typing import Any, Dict, List, Sequence

import numpy as np

from models.world import Circle, Polygon, Rect, Segment, Vec2, World
from utils.errors import DomainError, NavError, WorldParseError, WorldValidationError
from utils.file_utils import FileUtils
from utils.validation_utils import ValidationUtils

logger = logging.getLogger(__name__)

SCENARIO_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'scenarios')

_REQUIRED_KEYS = ('name', 'bounds', 'spawn_region', 'goal_region')
_OPTIONAL_KEYS = ('segments', 'circles', 'polygons')


class WorldService:
    """Geometry queries and world-file I/O"""

    # Ray casting

    @staticmethod
    def _hit_distances(world: World, origin: Vec2, directions: np.ndarray) -> np.ndarray:
        """Nearest positive hit along each unit direction (K, 2); inf where nothing is hit"""
        ox, oy = origin.x, origin.y
        dx = directions[:, 0][:, None]
        dy = directions[:, 1][:, None]
        best = np.full(len(directions), np.inf)

        segs = world.segment_array
        if len(segs):
            ax, ay = segs[:, 0][None, :], segs[:, 1][None, :]
            ex, ey = segs[:, 2][None, :] - ax, segs[:, 3][None, :] - ay
            wx, wy = ax - ox, ay - oy
            denom = dx * ey - dy * ex
            parallel = denom == 0.0
            safe = np.where(parallel, 1.0, denom)
            t = (wx * ey - wy * ex) / safe
            u = (wx * dy - wy * dx) / safe
            hit = ~parallel & (t > 0.0) & (u >= 0.0) & (u <= 1.0)
            t = np.where(hit, t, np.inf)

            # Collinear overlap: the ray runs along the segment, first contact is the nearer endpoint
            collinear = parallel & ((wx * dy - wy * dx) == 0.0)
            if np.any(collinear):
                ta = wx * dx + wy * dy
                tb = (wx + ex) * dx + (wy + ey) * dy
                ta = np.where(ta > 0.0, ta, np.inf)
                tb = np.where(tb > 0.0, tb, np.inf)
                t = np.where(collinear, np.minimum(t, np.minimum(ta, tb)), t)
            best = np.minimum(best, t.min(axis=1))

        circles = world.circle_array
        if len(circles):
            fx = ox - circles[:, 0][None, :]
            fy = oy - circles[:, 1][None, :]
            b = fx * dx + fy * dy
            c = fx * fx + fy * fy - circles[:, 2][None, :] ** 2
            disc = b * b - c
            root = np.sqrt(np.maximum(disc, 0.0))
            near = -b - root
            far = -b + root
            # Tangent rays give near == far
            t = np.where(near > 0.0, near, np.where(far > 0.0, far, np.inf))
            t = np.where(disc >= 0.0, t, np.inf)
            best = np.minimum(best, t.min(axis=1))

        return best

    @staticmethod
    def cast_rays(world: World, origin: Vec2, angles: Sequence[float], max_range: float) -> np.ndarray:
        """Distances along every absolute angle, clipped to max_range"""
        if not max_range > 0:
            raise DomainError(f"max_range must be > 0, got {max_range}")
        if not WorldService.contains(world, origin):
            raise DomainError(f"Ray origin ({origin.x}, {origin.y}) is outside the boundary of '{world.name}'")
        angles = np.asarray(angles, dtype=np.float64).reshape(-1)
        directions = np.stack([np.cos(angles), np.sin(angles)], axis=1)
        hits = WorldService._hit_distances(world, origin, directions)
        return np.minimum(hits, max_range)

    @staticmethod
    def ray_cast(world: World, origin: Vec2, angle: float, max_range: float) -> float:
        return float(WorldService.cast_rays(world, origin, [angle], max_range)[0])

    # Point queries

    @staticmethod
    def _segment_distances(segs: np.ndarray, point: Vec2) -> np.ndarray:
        ax, ay, bx, by = segs[:, 0], segs[:, 1], segs[:, 2], segs[:, 3]
        ex, ey = bx - ax, by - ay
        s = ((point.x - ax) * ex + (point.y - ay) * ey) / (ex * ex + ey * ey)
        s = np.clip(s, 0.0, 1.0)
        return np.hypot(ax + s * ex - point.x, ay + s * ey - point.y)

    @staticmethod
    def contains(world: World, point: Vec2) -> bool:
        """Strictly inside the boundary polygon (points on a boundary segment are outside)"""
        edges = world.bounds_array
        if not ValidationUtils.point_in_polygon(point.x, point.y, edges):
            return False
        return bool(WorldService._segment_distances(edges, point).min() > 0.0)

    @staticmethod
    def in_free_space(world: World, point: Vec2) -> bool:
        """Inside the boundary and outside every solid obstacle"""
        return WorldService.contains(world, point) and WorldService.min_obstacle_distance(world, point) > 0.0

    @staticmethod
    def min_obstacle_distance(world: World, point: Vec2) -> float:
        """Distance to the nearest wall, segment or obstacle surface; 0 inside solids or outside the boundary"""
        if not ValidationUtils.point_in_polygon(point.x, point.y, world.bounds_array):
            return 0.0
        for poly in world.polygons:
            edges = np.array([[s.a.x, s.a.y, s.b.x, s.b.y] for s in poly.edges()])
            if ValidationUtils.point_in_polygon(point.x, point.y, edges):
                return 0.0
        best = float(WorldService._segment_distances(world.segment_array, point).min())
        circles = world.circle_array
        if len(circles):
            gaps = np.hypot(circles[:, 0] - point.x, circles[:, 1] - point.y) - circles[:, 2]
            best = min(best, float(max(gaps.min(), 0.0)))
        return best

    # World files

    @staticmethod
    def _parse_element(data: Dict[str, Any], key: str, build):
        try:
            return build(data[key])
        except NavError as e:
            raise WorldValidationError(f"Invalid '{key}': {e}") from e
        except (KeyError, TypeError, ValueError, IndexError) as e:
            raise WorldParseError(f"Malformed '{key}': {e!r}") from e

    @staticmethod
    def world_from_dict(data: Any) -> World:
        if not isinstance(data, dict):
            raise WorldParseError("World file must contain a JSON object")
        missing = [k for k in _REQUIRED_KEYS if k not in data]
        if missing:
            raise WorldParseError(f"World file is missing key(s): {', '.join(missing)}")
        unknown = sorted(set(data) - set(_REQUIRED_KEYS) - set(_OPTIONAL_KEYS))
        if unknown:
            raise WorldParseError(f"Unknown world file key(s): {', '.join(unknown)}")
        if not isinstance(data['name'], str):
            raise WorldParseError("'name' must be a string")

        def build_bounds(raw) -> World:
            return World.from_dict({'name': data['name'], 'bounds': raw,
                                    'spawn_region': [0, 0, 0, 0], 'goal_region': [0, 0, 0, 0]})

        bounds = WorldService._parse_element(data, 'bounds', build_bounds).bounds
        obstacles: List = []
        for key, build in (
            ('segments', lambda raw: [Segment(Vec2(*a), Vec2(*b)) for a, b in raw]),
            ('circles', lambda raw: [Circle(Vec2(cx, cy), r) for cx, cy, r in raw]),
            ('polygons', lambda raw: [Polygon(tuple(Vec2(*p) for p in verts)) for verts in raw]),
        ):
            if key in data:
                obstacles.extend(WorldService._parse_element(data, key, build))
        spawn = WorldService._parse_element(data, 'spawn_region', lambda raw: Rect(*raw))
        goal = WorldService._parse_element(data, 'goal_region', lambda raw: Rect(*raw))

        world = World(name=data['name'], bounds=bounds, obstacles=tuple(obstacles),
                      spawn_region=spawn, goal_region=goal)
        ok, message = ValidationUtils.validate_world(world)
        if not ok:
            raise WorldValidationError(message)
        return world

    @staticmethod
    def load_world(text: str) -> World:
        """Parse and validate a world file"""
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise WorldParseError(f"World file is not valid JSON: {e}") from e
        return WorldService.world_from_dict(data)

    @staticmethod
    def load_world_file(file_path: str) -> World:
        try:
            text = FileUtils.read_text(file_path)
        except OSError as e:
            raise WorldParseError(f"Cannot read world file {file_path}: {e}") from e
        return WorldService.load_world(text)

    @staticmethod
    def serialize_world(world: World) -> str:
        return json.dumps(world.to_dict(), indent=2) + '\n'

    @staticmethod
    @lru_cache(maxsize=None, typed=True)
    def builtin_scenario(scenario_id: int) -> World:
        """Stage 1 (empty), 2 (four squares) or 3 (two bars and two posts)"""
        if isinstance(scenario_id, bool) or scenario_id not in (1, 2, 3):
            raise DomainError(f"Scenario id must be 1, 2 or 3, got {scenario_id!r}")
        world = WorldService.load_world_file(os.path.join(SCENARIO_DIR, f'stage{scenario_id}.json'))
        logger.debug("Loaded scenario %s with %d obstacles", world.name, len(world.obstacles))
        return world

    @staticmethod
    def rotate_world(world: World, angle: float) -> World:
        """Rotate about the origin; regions become bounding boxes of their rotated corners"""
        c, s = math.cos(angle), math.sin(angle)

        def rot(p: Vec2) -> Vec2:
            return Vec2(c * p.x - s * p.y, s * p.x + c * p.y)

        def rot_rect(r: Rect) -> Rect:
            pts = [rot(p) for p in r.corners()]
            return Rect(min(p.x for p in pts), min(p.y for p in pts),
                        max(p.x for p in pts), max(p.y for p in pts))

        obstacles = []
        for o in world.obstacles:
            if isinstance(o, Segment):
                obstacles.append(Segment(rot(o.a), rot(o.b)))
            elif isinstance(o, Circle):
                obstacles.append(Circle(rot(o.center), o.radius))
            else:
                obstacles.append(Polygon(tuple(rot(v) for v in o.vertices)))
        return World(
            name=world.name,
            bounds=tuple(Segment(rot(b.a), rot(b.b)) for b in world.bounds),
            obstacles=tuple(obstacles),
            spawn_region=rot_rect(world.spawn_region),
            goal_region=rot_rect(world.goal_region)
        )
