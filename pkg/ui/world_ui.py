import math
from typing import Optional

import numpy as np
import plotly.graph_objects as go
import streamlit as st

from models.navigation import EnvConfig, RobotPose
from models.world import World
from services.env_service import EnvService
from services.world_service import WorldService


class WorldUI:
    """Scenario geometry and lidar preview"""

    @staticmethod
    def build_world_figure(world: World, height: int = 520) -> go.Figure:
        """Boundary, obstacles and the spawn/goal regions of a world"""
        fig = go.Figure()
        seg_x, seg_y = [], []
        for ax, ay, bx, by in world.segment_array:
            seg_x += [ax, bx, None]
            seg_y += [ay, by, None]
        fig.add_trace(go.Scatter(x=seg_x, y=seg_y, mode='lines', name='walls',
                                 line=dict(color='#333333', width=3)))
        for c in world.circles:
            fig.add_shape(type='circle', x0=c.center.x - c.radius, y0=c.center.y - c.radius,
                          x1=c.center.x + c.radius, y1=c.center.y + c.radius,
                          line=dict(color='#333333'), fillcolor='rgba(80,80,80,0.4)')
        for region, color, label in ((world.spawn_region, 'rgba(0,120,255,0.12)', 'spawn'),
                                     (world.goal_region, 'rgba(0,180,0,0.06)', 'goal')):
            fig.add_shape(type='rect', x0=region.xmin, y0=region.ymin, x1=region.xmax, y1=region.ymax,
                          line=dict(dash='dot', width=1), fillcolor=color, name=label)
        fig.update_layout(height=height, showlegend=True, margin=dict(l=10, r=10, t=30, b=10))
        fig.update_yaxes(scaleanchor='x', scaleratio=1)
        return fig

    def render_world_viewer(self, world: World):
        st.markdown(f"#### Scenario - {world.name}")
        col1, col2, col3 = st.columns(3)
        with col1:
            st.metric("Obstacles", len(world.obstacles))
        with col2:
            st.metric("Circles", len(world.circles))
        with col3:
            st.metric("Arena diagonal", f"{world.diagonal:.2f} m")

        region = world.spawn_region
        x = st.slider("Robot x", float(region.xmin), float(region.xmax), float((region.xmin + region.xmax) / 2))
        y = st.slider("Robot y", float(region.ymin), float(region.ymax), float((region.ymin + region.ymax) / 2))
        heading = st.slider("Heading (deg)", -180, 180, 0)
        pose = RobotPose(x, y, math.radians(heading))
        fig = self.build_world_figure(world)
        self._add_lidar(fig, world, pose)
        st.plotly_chart(fig, use_container_width=True)

        with st.expander("World file"):
            st.code(WorldService.serialize_world(world), language='json')

    def _add_lidar(self, fig: go.Figure, world: World, pose: RobotPose, cfg: Optional[EnvConfig] = None):
        cfg = cfg or EnvConfig()
        if not WorldService.in_free_space(world, pose.position):
            st.warning("Pose is not in free space")
            return
        ranges = EnvService.lidar_scan(world, pose, cfg)
        angles = EnvService.beam_angles(pose.theta, cfg.lidar_beams)
        xs, ys = [], []
        for r, a in zip(ranges, angles):
            xs += [pose.x, pose.x + r * np.cos(a), None]
            ys += [pose.y, pose.y + r * np.sin(a), None]
        fig.add_trace(go.Scatter(x=xs, y=ys, mode='lines', name='lidar',
                                 line=dict(color='rgba(255,75,75,0.6)', width=1)))
        fig.add_trace(go.Scatter(x=[pose.x], y=[pose.y], mode='markers', name='robot',
                                 marker=dict(size=10, color='#1f77b4')))
        st.caption(f"Closest reading {ranges.min():.3f} m (collision below {cfg.c_o} m)")
