"""Slits: marked segments from a singularity (or marked point) to a marked
point, their carrier saddle connections / loops, exact ratios, and affine
twists in sub-cylinders.

A slit is anchored at its end marked point and validated by tracing the
segment backwards; all derived data (carrier, ratio, cylinder location) is
recomputed exactly from traces, so twisted slits are re-certified rather
than trusted.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .cylinders import CylinderDecomposition, _segment_subchords
from .field import QuadExt, Vec2
from .surface import TranslationSurface
from .tracing import Terminal, TraceSegment, trace


class SlitError(ValueError):
    pass


@dataclass(frozen=True)
class Slit:
    surface: TranslationSurface
    end_label: str
    holonomy: Vec2  # from start to end
    start_kind: str  # "cone" | "marked"
    start_label: Optional[str]
    start_poly: int
    start_pos: Vec2
    segments: tuple[TraceSegment, ...]  # ordered start -> end

    @property
    def length2(self) -> QuadExt:
        return self.holonomy.norm2()

    @property
    def end_point(self) -> tuple[int, Vec2]:
        return self.surface.marked_point(self.end_label)

    def start_key(self) -> tuple:
        return self.surface.canonical_point_key(self.start_poly, self.start_pos)

    def point_at_param(self, t: QuadExt) -> tuple[int, Vec2]:
        n2 = self.holonomy.norm2()
        acc = self.surface.zero()
        for seg in self.segments:
            span = self.holonomy.dot(seg.end - seg.start) / n2
            if ((acc + span) - t).sign() >= 0:
                return seg.poly, seg.start + self.holonomy * (t - acc)
            acc = acc + span
        raise SlitError("parameter beyond the slit")

    def midpoint(self) -> tuple[int, Vec2]:
        return self.point_at_param(QuadExt(Fraction(1, 2), 0, self.surface.d))

    def __repr__(self):
        return (
            f"Slit({self.start_kind}->{self.end_label}, "
            f"hol=({float(self.holonomy.x):.6g}, {float(self.holonomy.y):.6g}))"
        )


def make_slit(s: TranslationSurface, end_label: str, holonomy: Vec2) -> Slit:
    """Validating constructor: traces backwards from the end marked point.

    The segment must reach a cone point or another marked point at parameter
    exactly 1 with no node or marked point in its interior.
    """
    if holonomy.is_zero():
        raise SlitError("slit holonomy must be nonzero")
    end_poly, end_pos = s.marked_point(end_label)
    traj = trace(
        s,
        (end_poly, end_pos),
        -holonomy,
        max_param=s.one(),
        stop_labels=set(s.marked_points),
    )
    if traj.terminal_param != s.one():
        raise SlitError(
            "slit interior hits a singularity or marked point, or does not "
            "end at one"
        )
    if traj.terminal in (Terminal.CONE, Terminal.MARKED_VERTEX):
        # Marked vertex classes (the torus origin) play the singularity role.
        start_kind, start_label = "cone", traj.terminal_label
    elif traj.terminal == Terminal.MARKED_POINT:
        start_kind, start_label = "marked", traj.terminal_label
    else:
        # The trace ran out exactly at parameter 1: valid only when it landed
        # on a marked point (a vertex hit at parameter 1 reports CONE).
        start_label = None
        for label, (p, pos) in s.marked_points.items():
            if s.same_point(p, pos, traj.terminal_poly, traj.terminal_point):
                start_label = label
                break
        if start_label is None:
            raise SlitError("slit does not start at a singularity or marked point")
        start_kind = "marked"
    # Reverse the backward chain into start -> end order.
    segments = tuple(
        TraceSegment(seg.kind, seg.poly, seg.end, seg.start, seg.edge)
        for seg in reversed(traj.segments)
    )
    for seg in segments:
        if seg.kind != "chord":
            raise SlitError("slit travels along a polygon edge")
    return Slit(
        surface=s,
        end_label=end_label,
        holonomy=holonomy,
        start_kind=start_kind,
        start_label=start_label,
        start_poly=traj.terminal_poly,
        start_pos=traj.terminal_point,
        segments=segments,
    )


@dataclass(frozen=True)
class Carrier:
    """The saddle connection or closed loop containing a slit."""

    kind: str  # "saddle" | "loop" | "budget"
    holonomy: Optional[Vec2]  # oriented with the slit; None for "budget"
    back_param: QuadExt  # carrier start -> slit start, in slit-holonomy units
    ratio: QuadExt  # |slit| / |carrier|; 0 for "budget"

    @property
    def found(self) -> bool:
        return self.kind in ("saddle", "loop")


def slit_carrier(slit: Slit, budget_param: int = 4096) -> Carrier:
    """Extend the slit to the saddle connection or loop containing it.

    Forward from the end point until a cone point or a return to the end
    point; backward from the start likewise.  Budget exhaustion yields
    ratio 0 with the "budget" annotation.
    """
    s = slit.surface
    zero, one = s.zero(), s.one()
    budget = QuadExt(budget_param, 0, s.d)
    end_poly, end_pos = slit.end_point

    fwd = trace(s, (end_poly, end_pos), slit.holonomy, max_param=budget)
    # Earliest return to the slit's own geodesic: a passage through the end
    # marked point closes a loop.
    loop_t = None
    for label, t in fwd.passages:
        if label == slit.end_label:
            loop_t = t
            break
    if loop_t is not None and (
        fwd.terminal_param is None
        or not fwd.hit_node()
        or (fwd.terminal_param - loop_t).sign() > 0
    ):
        total = loop_t
        ratio = one / total
        back = _loop_back_param(slit, total)
        return Carrier("loop", slit.holonomy * total, back, ratio)
    if not fwd.hit_node():
        return Carrier("budget", None, zero, zero)
    t_f = fwd.terminal_param

    if slit.start_kind == "cone":
        t_b = zero
    else:
        bwd = trace(s, (slit.start_poly, slit.start_pos), -slit.holonomy, max_param=budget)
        if not bwd.hit_node():
            return Carrier("budget", None, zero, zero)
        t_b = bwd.terminal_param

    total = one + t_f + t_b
    return Carrier("saddle", slit.holonomy * total, t_b, one / total)


def _loop_back_param(slit: Slit, loop_total: QuadExt) -> QuadExt:
    # Loop through the slit: take the carrier to start at the slit start.
    return slit.surface.zero()


def slit_ratio(slit: Slit, budget_param: int = 4096) -> QuadExt:
    """The exact ratio |slit| / |carrier|, or 0 when the budget runs out."""
    return slit_carrier(slit, budget_param).ratio


def carrier_segments(slit: Slit, car: Carrier) -> list[TraceSegment]:
    """Chain of trace segments covering the whole carrier, start to end.

    For a saddle carrier: from its initial cone point through the slit to
    the final cone point; for a loop: one full period based at the slit end.
    """
    s = slit.surface
    one = s.one()
    end_poly, end_pos = slit.end_point
    if car.kind == "loop":
        total = slit.holonomy.dot(car.holonomy) / slit.holonomy.norm2()
        traj = trace(s, (end_poly, end_pos), slit.holonomy, max_param=total)
        return list(traj.segments)
    if car.kind != "saddle":
        raise SlitError("carrier was not found within budget")
    total = slit.holonomy.dot(car.holonomy) / slit.holonomy.norm2()
    t_b = car.back_param
    t_f = total - one - t_b
    segments: list[TraceSegment] = []
    if t_b.sign() > 0:
        bwd = trace(
            s, (slit.start_poly, slit.start_pos), -slit.holonomy, max_param=t_b
        )
        segments.extend(
            TraceSegment(seg.kind, seg.poly, seg.end, seg.start, seg.edge)
            for seg in reversed(bwd.segments)
        )
    segments.extend(slit.segments)
    if t_f.sign() > 0:
        fwd = trace(s, (end_poly, end_pos), slit.holonomy, max_param=t_f)
        segments.extend(fwd.segments)
    return segments


@dataclass(frozen=True)
class SlitLocation:
    """Position of a slit relative to a cylinder decomposition."""

    cylinder: int
    y_low: QuadExt  # transverse extent of the slit inside the cylinder
    y_high: QuadExt
    spans_full_height: bool


def locate_slit(dec: CylinderDecomposition, slit: Slit) -> Optional[SlitLocation]:
    """The cylinder strictly containing the slit's interior, or None.

    None when the slit touches or crosses the spine away from its endpoints
    (endpoints on the spine are fine: the cone start always is).
    """
    s = dec.surface
    if dec.direction.cross(slit.holonomy).is_zero():
        return None
    cyls = set()
    ys: list[QuadExt] = []
    frame = dec.frame
    for si, seg in enumerate(slit.segments):
        subs = _segment_subchords(dec, seg.poly, seg.start, seg.end)
        if len(subs) != 1:
            return None  # interior spine crossing
        p0, p1 = subs[0]
        mid = Vec2((p0.x + p1.x) / 2, (p0.y + p1.y) / 2)
        hit = dec.locate_face(seg.poly, mid)
        if hit is None:
            return None
        ci, fi = hit
        cyls.add(ci)
        if len(cyls) > 1:
            return None
        cf = dec.cylinders[ci].faces[fi]
        ys.append((frame * p0).y + cf.y_off)
        ys.append((frame * p1).y + cf.y_off)
    # Interior chord junctions (polygon-edge crossings) must stay off the
    # spine; the per-polygon split above cannot see touches at its own chord
    # endpoints or crossings of cut edge pairs.
    for a in slit.segments[:-1]:
        if dec._on_spine(a.poly, a.end):
            return None
    ci = cyls.pop()
    lo = hi = ys[0]
    for y in ys[1:]:
        if (y - lo).sign() < 0:
            lo = y
        if (y - hi).sign() > 0:
            hi = y
    h = dec.cylinders[ci].height
    full = lo.sign() == 0 and (hi - h).sign() == 0
    return SlitLocation(ci, lo, hi, full)


def subcylinder_area(dec: CylinderDecomposition, loc: SlitLocation) -> QuadExt:
    """True area of the smallest sub-cylinder (full circumference band)
    spanned by the slit's transverse extent."""
    c = dec.cylinders[loc.cylinder]
    dy = loc.y_high - loc.y_low
    return c.circumference_frame * dy * dec.direction.norm2()


def twist_slit(
    slit: Slit,
    dec: CylinderDecomposition,
    k: int,
    loc: Optional[SlitLocation] = None,
) -> Slit:
    """Image of the slit under k full twists in the sub-cylinder it spans.

    k must be even (odd powers break the double cover's sheet parity);
    endpoints are fixed, the holonomy gains k core-curve vectors, and the
    result is re-validated by tracing.
    """
    if k % 2 != 0:
        raise SlitError("twist power must be even")
    if loc is None:
        loc = locate_slit(dec, slit)
    if loc is None:
        raise SlitError("slit is not contained in a single cylinder")
    if k == 0:
        return slit
    core = dec.cylinders[loc.cylinder].core_holonomy
    new_hol = slit.holonomy + core * k
    out = make_slit(slit.surface, slit.end_label, new_hol)
    if out.start_key() != slit.start_key():
        raise SlitError("twist moved the slit start")  # pragma: no cover
    return out
