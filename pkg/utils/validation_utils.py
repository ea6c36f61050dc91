# utils/validation_utils.py

from __future__ import annotations

import math
from collections import Counter
from typing import TYPE_CHECKING, List, Tuple

import numpy as np

if TYPE_CHECKING:
    from models.agent import AgentConfig
    from models.navigation import EnvConfig
    from models.run import RunConfig
    from models.world import Rect, World


class ValidationUtils:
    """Validators returning (ok, message); callers decide which error to raise"""

    @staticmethod
    def point_in_polygon(px: float, py: float, edges: np.ndarray) -> bool:
        """Even-odd rule over (N, 4) edge rows; order of edges is irrelevant"""
        if len(edges) == 0:
            return False
        ax, ay, bx, by = edges[:, 0], edges[:, 1], edges[:, 2], edges[:, 3]
        straddles = (ay > py) != (by > py)
        with np.errstate(divide='ignore', invalid='ignore'):
            x_cross = ax + (py - ay) * (bx - ax) / (by - ay)
        crossings = np.count_nonzero(straddles & (px < x_cross))
        return crossings % 2 == 1

    @staticmethod
    def segment_hits_rect(ax: float, ay: float, bx: float, by: float, rect: Rect) -> bool:
        """Liang-Barsky clip of segment ab against a closed rectangle"""
        t0, t1 = 0.0, 1.0
        dx, dy = bx - ax, by - ay
        for p, q in ((-dx, ax - rect.xmin), (dx, rect.xmax - ax),
                     (-dy, ay - rect.ymin), (dy, rect.ymax - ay)):
            if p == 0:
                if q < 0:
                    return False
                continue
            t = q / p
            if p < 0:
                t0 = max(t0, t)
            else:
                t1 = min(t1, t)
            if t0 > t1:
                return False
        return True

    @staticmethod
    def validate_boundary_closed(world: World) -> Tuple[bool, str]:
        """Each boundary endpoint must be shared by exactly two segments"""
        if len(world.bounds) < 3:
            return False, f"Boundary needs at least 3 segments, got {len(world.bounds)}"
        counts = Counter()
        for seg in world.bounds:
            counts[(seg.a.x, seg.a.y)] += 1
            counts[(seg.b.x, seg.b.y)] += 1
        for (x, y), n in counts.items():
            if n != 2:
                return False, f"Boundary is not closed at vertex ({x}, {y}): shared by {n} segment(s)"
        return True, "Boundary is closed"

    @staticmethod
    def validate_region(world: World, region: Rect, label: str) -> Tuple[bool, str]:
        edges = world.bounds_array
        for corner in region.corners():
            if not ValidationUtils.point_in_polygon(corner.x, corner.y, edges):
                return False, f"{label} corner ({corner.x}, {corner.y}) lies outside the boundary"
        for i, (ax, ay, bx, by) in enumerate(edges):
            if ValidationUtils.segment_hits_rect(ax, ay, bx, by, region):
                return False, f"{label} {region.to_list()} touches boundary segment {i}"
        return True, f"{label} is inside the boundary"

    @staticmethod
    def validate_world(world: World) -> Tuple[bool, str]:
        """Check closure of the boundary and placement of spawn/goal regions"""
        if not isinstance(world.name, str) or not world.name:
            return False, "World name must be a non-empty string"
        ok, message = ValidationUtils.validate_boundary_closed(world)
        if not ok:
            return ok, message
        for region, label in ((world.spawn_region, 'spawn_region'), (world.goal_region, 'goal_region')):
            ok, message = ValidationUtils.validate_region(world, region, label)
            if not ok:
                return ok, message
        return True, f"World '{world.name}' is valid with {len(world.obstacles)} obstacles"

    @staticmethod
    def validate_env_config(cfg: EnvConfig) -> Tuple[bool, str]:
        from models.navigation import LIDAR_BEAMS
        problems: List[str] = []
        if not cfg.dt > 0:
            problems.append(f"dt must be > 0 (got {cfg.dt})")
        if not cfg.max_steps > 0:
            problems.append(f"max_steps must be > 0 (got {cfg.max_steps})")
        if not cfg.c_o < cfg.c_d:
            problems.append(f"c_o ({cfg.c_o}) must be smaller than c_d ({cfg.c_d})")
        if cfg.c_o <= 0:
            problems.append(f"c_o must be > 0 (got {cfg.c_o})")
        if cfg.lidar_beams != LIDAR_BEAMS:
            problems.append(f"lidar_beams must be {LIDAR_BEAMS} (got {cfg.lidar_beams})")
        if not cfg.lidar_max_range > 0:
            problems.append(f"lidar_max_range must be > 0 (got {cfg.lidar_max_range})")
        if cfg.max_rejections < 1:
            problems.append(f"max_rejections must be >= 1 (got {cfg.max_rejections})")
        if not all(math.isfinite(v) for v in (cfg.r_arrive, cfg.r_collide, cfg.r_idle, cfg.v_lin)):
            problems.append("rewards and v_lin must be finite")
        if problems:
            return False, "; ".join(problems)
        return True, "Env config is valid"

    @staticmethod
    def validate_agent_config(cfg: AgentConfig) -> Tuple[bool, str]:
        problems: List[str] = []
        if not 0.0 <= cfg.gamma < 1.0:
            problems.append(f"gamma must be in [0, 1) (got {cfg.gamma})")
        if cfg.batch_size < 1:
            problems.append(f"batch_size must be >= 1 (got {cfg.batch_size})")
        if cfg.target_sync_interval < 1:
            problems.append(f"target_sync_interval must be >= 1 (got {cfg.target_sync_interval})")
        eps = cfg.epsilon
        if not 0.0 <= eps.eps_end <= eps.eps_start <= 1.0:
            problems.append(f"epsilon needs 0 <= eps_end <= eps_start <= 1 (got {eps.eps_end}, {eps.eps_start})")
        if eps.decay_steps < 1:
            problems.append(f"epsilon.decay_steps must be >= 1 (got {eps.decay_steps})")
        if not 0.0 < cfg.beta1 < 1.0 or not 0.0 < cfg.beta2 < 1.0:
            problems.append("beta1 and beta2 must be in (0, 1)")
        if not cfg.learning_rate > 0:
            problems.append(f"learning_rate must be > 0 (got {cfg.learning_rate})")
        if cfg.buffer_capacity < 1:
            problems.append(f"buffer_capacity must be >= 1 (got {cfg.buffer_capacity})")
        if cfg.warmup < 0:
            problems.append(f"warmup must be >= 0 (got {cfg.warmup})")
        if any(d < 1 for d in cfg.hidden_dims):
            problems.append(f"hidden_dims must be positive (got {cfg.hidden_dims})")
        if problems:
            return False, "; ".join(problems)
        return True, "Agent config is valid"

    @staticmethod
    def validate_run_config(cfg: RunConfig) -> Tuple[bool, str]:
        if cfg.scenario_id not in (1, 2, 3):
            return False, f"scenario_id must be 1, 2 or 3 (got {cfg.scenario_id})"
        if cfg.episodes < 1:
            return False, f"episodes must be >= 1 (got {cfg.episodes})"
        if cfg.checkpoint_interval < 1:
            return False, f"checkpoint_interval must be >= 1 (got {cfg.checkpoint_interval})"
        if not cfg.output_directory:
            return False, "output_directory is required"
        return True, "Run config is valid"

