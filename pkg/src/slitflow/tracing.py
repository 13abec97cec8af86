"""Exact straight-line flow on a translation surface.

A trajectory is advanced polygon by polygon; edge crossings are solved with
exact cross products, vertex hits are detected exactly, and travel along
polygon edges (direction parallel to an edge) is handled as its own mode so
that separatrices lying on edges trace deterministically.

Trajectories terminate at node vertex classes (cone points and marked vertex
classes), at marked interior points when requested, or at the budget.
Regular (angle 2*pi) vertex classes are passed through in a straight line.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .field import QuadExt, Vec2
from . import geom
from .surface import Corner, TranslationSurface


class BudgetExceeded(RuntimeError):
    """An iteration budget ran out before the computation finished."""


class Terminal(Enum):
    CONE = "cone"
    MARKED_VERTEX = "marked-vertex"
    MARKED_POINT = "marked-point"
    BOUND = "bound"


@dataclass(frozen=True)
class Crossing:
    poly: int
    edge: int
    point: Vec2
    param: QuadExt


@dataclass(frozen=True)
class TraceSegment:
    """Portion of the trajectory inside one polygon.

    kind 'chord' for a transversal pass, 'edge' for travel along a polygon
    edge (recorded on the forward representative).
    """

    kind: str
    poly: int
    start: Vec2
    end: Vec2
    edge: Optional[int] = None


@dataclass
class Trajectory:
    surface: TranslationSurface
    direction: Vec2
    crossings: list[Crossing] = field(default_factory=list)
    segments: list[TraceSegment] = field(default_factory=list)
    passages: list[tuple[str, QuadExt]] = field(default_factory=list)
    terminal: Terminal = Terminal.BOUND
    terminal_param: Optional[QuadExt] = None
    terminal_class: Optional[int] = None
    terminal_label: Optional[str] = None
    terminal_poly: Optional[int] = None
    terminal_point: Optional[Vec2] = None

    @property
    def holonomy(self) -> Vec2:
        return self.direction * self.terminal_param

    def hit_node(self) -> bool:
        return self.terminal in (Terminal.CONE, Terminal.MARKED_VERTEX)


def _strictly_in_sector(a: Vec2, b: Vec2, u: Vec2) -> bool:
    return geom.ccw_arc_contains(a, b, u) and not geom.same_direction(u, b)


class _Tracer:
    """State machine: states are ('interior', poly, pos),
    ('edge', corner), ('edge_mid', poly, edge, pos), ('corner', corner)."""

    def __init__(
        self,
        s: TranslationSurface,
        direction: Vec2,
        max_param: Optional[QuadExt] = None,
        max_len2: Optional[QuadExt] = None,
        stop_labels: Optional[set] = None,
        max_steps: int = 200_000,
    ):
        if direction.is_zero():
            raise ValueError("trace direction must be nonzero")
        self.s = s
        self.u = direction
        self.n2 = direction.norm2()
        self.max_param = max_param
        self.max_len2 = max_len2
        self.stop_labels = stop_labels
        self.max_steps = max_steps
        self.t = s.zero()
        self.traj = Trajectory(surface=s, direction=direction)
        self.done = False
        self.marks: dict[int, list[tuple[str, Vec2]]] = {}
        for label, (p, pos) in s.marked_points.items():
            self.marks.setdefault(p, []).append((label, pos))

    # -- budget and termination helpers ------------------------------------

    def _over_length_budget(self) -> bool:
        if self.max_len2 is None:
            return False
        return ((self.t * self.t) * self.n2 - self.max_len2).sign() > 0

    def _param_left(self) -> Optional[QuadExt]:
        if self.max_param is None:
            return None
        return self.max_param - self.t

    def _finish_bound(self, poly: int, point: Vec2):
        self.traj.terminal = Terminal.BOUND
        self.traj.terminal_param = self.t
        self.traj.terminal_poly = poly
        self.traj.terminal_point = point
        self.done = True

    def _finish_node(self, corner: Corner):
        cls = self.s.vertex_class_of(corner)
        self.traj.terminal = Terminal.CONE if cls.is_cone else Terminal.MARKED_VERTEX
        self.traj.terminal_param = self.t
        self.traj.terminal_class = cls.index
        self.traj.terminal_poly = corner[0]
        self.traj.terminal_point = self.s.vertex_position(corner)
        if cls.labels:
            self.traj.terminal_label = cls.labels[0]
        self.done = True

    def _record_passages(self, poly: int, start: Vec2, t0: QuadExt, span: QuadExt):
        """Marked points passed strictly inside (t0, t0 + span); returns the
        earliest passage that must stop the trace, as (label, param, point)."""
        best = None
        for label, pos in self.marks.get(poly, ()):
            w = pos - start
            if not self.u.cross(w).is_zero():
                continue
            tm = self.u.dot(w) / self.n2
            if tm.sign() <= 0 or (tm - span).sign() >= 0:
                continue
            param = t0 + tm
            self.traj.passages.append((label, param))
            if self.stop_labels is not None and label in self.stop_labels:
                if best is None or (param - best[1]).sign() < 0:
                    best = (label, param, pos)
        return best

    # -- state handlers ------------------------------------------------------

    def _polygon_exit(self, poly: int, pos: Vec2):
        """First boundary contact of the ray pos + t*u, t > 0: returns
        (t, edge, vertex_index|None)."""
        pts = self.s.polygons[poly]
        n = len(pts)
        one = self.s.one()
        best = None
        for e in range(n):
            a, b = pts[e], pts[(e + 1) % n]
            hit = geom.segment_intersection_param(pos, self.u, a, b)
            if hit is None:
                continue
            t, sp = hit
            if t.sign() <= 0 or sp.sign() < 0 or (sp - one).sign() > 0:
                continue
            if best is None or (t - best[0]).sign() < 0:
                vertex = None
                if sp.sign() == 0:
                    vertex = e
                elif (sp - one).sign() == 0:
                    vertex = (e + 1) % n
                best = (t, e, vertex)
        if best is None:
            raise ValueError(
                f"ray from {pos} in direction {self.u} does not exit polygon {poly}"
            )
        return best

    def _step_interior(self, poly: int, pos: Vec2):
        t_step, edge, vertex_idx = self._polygon_exit(poly, pos)

        left = self._param_left()
        if left is not None and (t_step - left).sign() > 0:
            end = pos + self.u * left
            self.traj.segments.append(TraceSegment("chord", poly, pos, end))
            self._record_passages(poly, pos, self.t, left)
            self.t = self.max_param
            self._finish_bound(poly, end)
            return None

        stop = self._record_passages(poly, pos, self.t, t_step)
        if stop is not None:
            label, param, mpos = stop
            self.traj.segments.append(TraceSegment("chord", poly, pos, mpos))
            self.t = param
            self.traj.terminal = Terminal.MARKED_POINT
            self.traj.terminal_param = param
            self.traj.terminal_label = label
            self.traj.terminal_poly = poly
            self.traj.terminal_point = mpos
            self.done = True
            return None

        exit_point = pos + self.u * t_step
        self.traj.segments.append(TraceSegment("chord", poly, pos, exit_point))
        self.t = self.t + t_step

        if vertex_idx is not None:
            return self._vertex_arrival((poly, vertex_idx))

        self.traj.crossings.append(Crossing(poly, edge, exit_point, self.t))
        q, f = self.s.partner(poly, edge)
        new_pos = exit_point + self.s.gluing_translation(poly, edge)
        if self._over_length_budget():
            self._finish_bound(q, new_pos)
            return None
        return ("interior", q, new_pos)

    def _vertex_arrival(self, corner: Corner):
        cls = self.s.vertex_class_of(corner)
        if self.s.is_node_class(cls):
            self._finish_node(corner)
            return None
        if self._over_length_budget():
            self._finish_bound(corner[0], self.s.vertex_position(corner))
            return None
        for c in cls.corners:
            a, b = self.s.corner_sector(c)
            if _strictly_in_sector(a, b, self.u):
                return ("interior", c[0], self.s.vertex_position(c))
            if geom.same_direction(self.u, a):
                return ("edge", c)
        raise ValueError("no continuation sector at a regular vertex")  # pragma: no cover

    def _step_edge(self, corner: Corner):
        """Travel the full polygon edge leaving this corner."""
        p, i = corner
        a, b = self.s.edge_endpoints(p, i)
        return self._edge_advance(p, i, a, b)

    def _step_edge_mid(self, poly: int, edge: int, pos: Vec2):
        _, b = self.s.edge_endpoints(poly, edge)
        return self._edge_advance(poly, edge, pos, b)

    def _edge_advance(self, p: int, i: int, start: Vec2, head: Vec2):
        t_step = self.u.dot(head - start) / self.n2
        left = self._param_left()
        if left is not None and (t_step - left).sign() > 0:
            end = start + self.u * left
            self.traj.segments.append(TraceSegment("edge", p, start, end, edge=i))
            self.t = self.max_param
            self._finish_bound(p, end)
            return None
        self.traj.segments.append(TraceSegment("edge", p, start, head, edge=i))
        self.t = self.t + t_step
        return self._vertex_arrival((p, (i + 1) % len(self.s.polygons[p])))

    # -- run loop ------------------------------------------------------------

    def run(self, state):
        steps = 0
        while state is not None and not self.done:
            steps += 1
            if steps > self.max_steps:
                raise BudgetExceeded(
                    f"trace exceeded {self.max_steps} steps "
                    f"(param so far {float(self.t):.6g})"
                )
            kind = state[0]
            if kind == "interior":
                state = self._step_interior(state[1], state[2])
            elif kind == "edge":
                state = self._step_edge(state[1])
            elif kind == "edge_mid":
                state = self._step_edge_mid(state[1], state[2], state[3])
            elif kind == "corner":
                state = self._corner_departure(state[1])
            else:  # pragma: no cover
                raise RuntimeError(f"unknown tracer state {kind}")

    def _corner_departure(self, corner: Corner):
        a, b = self.s.corner_sector(corner)
        if _strictly_in_sector(a, b, self.u):
            return ("interior", corner[0], self.s.vertex_position(corner))
        if geom.same_direction(self.u, a):
            return ("edge", corner)
        if geom.same_direction(self.u, b):
            p, i = corner
            n = len(self.s.polygons[p])
            partner = self.s.partner(p, (i - 1) % n)
            return ("edge", partner)
        raise ValueError(f"direction {self.u} not in the sector of corner {corner}")

    def initial_state(self, poly: int, pos: Vec2):
        kind, idx = self.s.locate_in_polygon(poly, pos)
        if kind == "outside":
            raise ValueError(f"start point {pos} is outside polygon {poly}")
        if kind == "vertex":
            return ("corner", (poly, idx))
        if kind == "edge":
            a, b = self.s.edge_endpoints(poly, idx)
            ev = b - a
            if self.u.cross(ev).is_zero():
                if self.u.dot(ev).sign() > 0:
                    return ("edge_mid", poly, idx, pos)
                q, f = self.s.partner(poly, idx)
                return (
                    "edge_mid",
                    q,
                    f,
                    pos + self.s.gluing_translation(poly, idx),
                )
        return ("interior", poly, pos)


def trace(
    s: TranslationSurface,
    start,
    direction: Vec2,
    *,
    max_param: Optional[QuadExt] = None,
    max_length2=None,
    stop_labels: Optional[set] = None,
    max_steps: int = 200_000,
) -> Trajectory:
    """Trace the straight-line flow from ``start`` in ``direction``.

    ``start`` is ``(poly, Vec2)``, a marked point label, or
    ``("corner", (poly, vertex))``.  Budgets: ``max_param`` limits the exact
    affine parameter (length / |direction|) with exact truncation;
    ``max_length2`` is a squared Euclidean length budget, reported after the
    first event past it.
    """
    if max_length2 is not None and not isinstance(max_length2, QuadExt):
        max_length2 = QuadExt(max_length2, 0, s.d)
    tracer = _Tracer(s, direction, max_param, max_length2, stop_labels, max_steps)
    if isinstance(start, str):
        poly, pos = s.marked_point(start)
        state = tracer.initial_state(poly, pos)
    elif isinstance(start, tuple) and start and start[0] == "corner":
        state = ("corner", tuple(start[1]))
    else:
        poly, pos = start
        state = tracer.initial_state(poly, pos)
    tracer.run(state)
    return tracer.traj


def trace_segment(
    s: TranslationSurface, poly: int, pos: Vec2, holonomy: Vec2, max_steps: int = 200_000
) -> Trajectory:
    """Trace exactly the segment from ``pos`` with the given holonomy."""
    return trace(s, (poly, pos), holonomy, max_param=s.one(), max_steps=max_steps)
