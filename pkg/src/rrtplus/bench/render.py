"""Standalone SVG drawings of a chain world and a solution path."""

from __future__ import annotations

from pathlib import Path
from typing import Optional, Sequence
from xml.sax.saxutils import quoteattr

import numpy as np

from ..chain_env import ChainRobot, Environment, forward_kinematics

START_COLOR = "#d62728"
GOAL_COLOR = "#2ca02c"
POSE_COLOR = "#7f7f7f"
OBSTACLE_COLOR = "#1f1f1f"


def sample_poses(path: Sequence[np.ndarray], every: float) -> list[np.ndarray]:
    """Configurations spaced ``every`` apart (C-space arc length) along ``path``."""
    if not path:
        return []
    pts = np.asarray(path, dtype=float)
    if len(pts) == 1:
        return [pts[0]]
    seg = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    cum = np.concatenate(([0.0], np.cumsum(seg)))
    total = cum[-1]
    if total == 0.0:
        return [pts[0]]
    count = max(2, int(np.ceil(total / every)) + 1)
    out = []
    for s in np.linspace(0.0, total, count):
        i = min(int(np.searchsorted(cum, s, side="right")) - 1, len(seg) - 1)
        u = 0.0 if seg[i] == 0 else (s - cum[i]) / seg[i]
        out.append(pts[i] + min(max(u, 0.0), 1.0) * (pts[i + 1] - pts[i]))
    return out


def _points_attr(pts: np.ndarray) -> str:
    return " ".join(f"{x:.6f},{y:.6f}" for x, y in pts)


def render_svg(
    robot: ChainRobot,
    env: Environment,
    q_init: np.ndarray,
    q_goal: np.ndarray,
    path: Optional[Sequence[np.ndarray]] = None,
    pose_spacing: float = 0.25,
    size_px: int = 600,
    title: str = "",
) -> str:
    """SVG with obstacles, intermediate poses, start chain (red) and goal chain (green).

    Each chain polyline carries its joint positions in ``data-fk`` so tools
    can read the drawn geometry back without parsing ``points``.
    """
    xmin, ymin, xmax, ymax = env.workspace
    w, h = xmax - xmin, ymax - ymin
    stroke = 0.004 * max(w, h)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size_px}" '
        f'height="{int(size_px * h / w)}" viewBox="{xmin} {-ymax} {w} {h}">',
    ]
    if title:
        lines.append(f"<title>{title}</title>")
    lines.append(
        f'<rect x="{xmin}" y="{-ymax}" width="{w}" height="{h}" fill="white" '
        f'stroke="black" stroke-width="{stroke}"/>'
    )
    # y axis flipped so the drawing matches the usual math orientation
    lines.append('<g transform="scale(1,-1)">')
    lines.append(f'<g id="obstacles" stroke="{OBSTACLE_COLOR}" stroke-width="{2 * stroke}">')
    for x1, y1, x2, y2 in env.obstacles:
        lines.append(f'<line x1="{x1:.6f}" y1="{y1:.6f}" x2="{x2:.6f}" y2="{y2:.6f}"/>')
    lines.append("</g>")

    def chain(q, cls, color, width, opacity=1.0):
        pts = forward_kinematics(robot, q)
        attr = _points_attr(pts)
        return (
            f'<polyline class="{cls}" points="{attr}" data-fk={quoteattr(attr)} fill="none" '
            f'stroke="{color}" stroke-width="{width}" stroke-opacity="{opacity}"/>'
        )

    lines.append('<g id="path">')
    if path:
        for q in sample_poses(path, pose_spacing):
            lines.append(chain(q, "pose", POSE_COLOR, stroke, 0.6))
    lines.append("</g>")
    lines.append(chain(q_init, "start", START_COLOR, 2 * stroke))
    lines.append(chain(q_goal, "goal", GOAL_COLOR, 2 * stroke))
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def write_svg(out: str | Path, *args, **kwargs) -> Path:
    out = Path(out)
    out.write_text(render_svg(*args, **kwargs), encoding="utf-8")
    return out
