"""Change of area between the splittings induced by two slits.

Both slits share endpoints and induce the same double cover (their
difference is an even multiple of a core curve).  Cutting the cover along
both lifted slit pairs partitions it into regions labelled by the crossing
parity against each curve; the change of area is twice the smaller of the
two parity-class areas downstairs.  The computation is an exact overlay of
the two chord systems; a Monte Carlo estimator over the same parity
function serves as an independent oracle.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .arrangement import Chord, subdivide_polygon
from .cylinders import CylinderDecomposition
from .field import QuadExt, Vec2
from . import geom
from .slits import Slit, SlitError, SlitLocation, locate_slit, subcylinder_area
from .surface import SurfaceError, TranslationSurface


@dataclass
class ExchangeData:
    area: QuadExt  # the change of area a(sigma, sigma'), cover units
    crossings: int  # interior crossing count m (odd)
    parity_region_area: QuadExt  # smaller parity-class area on the base


def _overlay_parity_faces(s: TranslationSurface, slit1: Slit, slit2: Slit):
    """Per-polygon list of (face, parity); parity toggles across either slit."""
    faces_by_poly, parity, ids, _ = _overlay(s, slit1, slit2)
    out = {}
    for p, faces in faces_by_poly.items():
        out[p] = [(face, parity[ids[(p, fi)]]) for fi, face in enumerate(faces)]
    return out


def _overlay(s: TranslationSurface, slit1: Slit, slit2: Slit):
    chords_by_poly: dict[int, list[Chord]] = {}
    for tag, slit in (("s1", slit1), ("s2", slit2)):
        for si, seg in enumerate(slit.segments):
            chords_by_poly.setdefault(seg.poly, []).append(
                Chord(seg.start, seg.end, (tag, si))
            )

    crossings = 0
    for p, chords in chords_by_poly.items():
        for i in range(len(chords)):
            for j in range(i + 1, len(chords)):
                a, b = chords[i], chords[j]
                if a.chord_id[0] == b.chord_id[0]:
                    if _open_cross(a, b):
                        raise SlitError(
                            f"slit {a.chord_id[0]} crosses itself; not embedded"
                        )
                    continue
                if _open_cross(a, b):
                    crossings += 1
    # Crossings at polygon-edge junctions: both slits' chord chains break at
    # every edge crossing, so a surface crossing on a glued edge shows up as
    # a shared interior junction point rather than an interior intersection.
    junctions1 = {
        s.canonical_point_key(seg.poly, seg.end) for seg in slit1.segments[:-1]
    }
    junctions2 = {
        s.canonical_point_key(seg.poly, seg.end) for seg in slit2.segments[:-1]
    }
    crossings += len(junctions1 & junctions2)

    faces_by_poly = {
        p: subdivide_polygon(s.polygons[p], chords_by_poly.get(p, []))
        for p in range(len(s.polygons))
    }

    # Face adjacency: across subdivided original gluings parity is constant;
    # across a chord of s1/s2 it toggles.
    ids = {}
    for p, faces in faces_by_poly.items():
        for fi in range(len(faces)):
            ids[(p, fi)] = len(ids)
    neighbors: dict[int, list[tuple[int, int]]] = {i: [] for i in ids.values()}

    sub_edges = {}
    for p, faces in faces_by_poly.items():
        for fi, face in enumerate(faces):
            for ti, tag in enumerate(face.tags):
                a, b = face.edge_endpoints(ti)
                kk = frozenset((a.key(), b.key()))
                if tag[0] == "boundary":
                    sub_edges[(p, tag[1], kk)] = (p, fi)
                else:
                    pass
    chord_pairs: dict[tuple, list[tuple[int, int]]] = {}
    for p, faces in faces_by_poly.items():
        for fi, face in enumerate(faces):
            for ti, tag in enumerate(face.tags):
                if tag[0] != "boundary":
                    _, cid, _side = tag
                    a, b = face.edge_endpoints(ti)
                    kk = frozenset((a.key(), b.key()))
                    chord_pairs.setdefault((cid, kk), []).append((p, fi))

    for (p, e, kk), (pp, fi) in sub_edges.items():
        q, f = s.gluings[(p, e)]
        t = s.gluing_translation(p, e)
        ka, kb = tuple(kk)
        from .delaunay import _vec_from_key

        a = _vec_from_key(ka, s.d) + t
        b = _vec_from_key(kb, s.d) + t
        other = sub_edges.get((q, f, frozenset((a.key(), b.key()))))
        if other is None:  # pragma: no cover
            raise SurfaceError("overlay gluing interval mismatch")
        neighbors[ids[(pp, fi)]].append((ids[other], 0))

    for (cid, kk), sides in chord_pairs.items():
        if len(sides) != 2:  # pragma: no cover
            raise SurfaceError(f"chord {cid} does not have two sides")
        i, j = ids[sides[0]], ids[sides[1]]
        neighbors[i].append((j, 1))
        neighbors[j].append((i, 1))

    parity: dict[int, int] = {}
    for start in ids.values():
        if start in parity:
            continue
        if parity:
            # The complement of the slits is connected on these surfaces;
            # a second component would leave the parity convention free.
            raise SurfaceError("overlay complement is disconnected")  # pragma: no cover
        parity[start] = 0
        stack = [start]
        while stack:
            cur = stack.pop()
            for nxt, toggle in neighbors[cur]:
                want = parity[cur] ^ toggle
                if nxt in parity:
                    if parity[nxt] != want:
                        raise SlitError(
                            "slit pair has even crossing parity: the curves "
                            "do not jointly bound"
                        )
                else:
                    parity[nxt] = want
                    stack.append(nxt)

    return faces_by_poly, parity, ids, crossings


def _overlay_parity_areas(s: TranslationSurface, slit1: Slit, slit2: Slit):
    """(area of parity-1 region, crossing count) for the chord overlay."""
    faces_by_poly, parity, ids, crossings = _overlay(s, slit1, slit2)
    area1 = s.zero()
    for p, faces in faces_by_poly.items():
        for fi, face in enumerate(faces):
            if parity[ids[(p, fi)]] == 1:
                area1 = area1 + face.area()
    return area1, crossings


def _open_cross(a: Chord, b: Chord) -> bool:
    return geom.segment_interiors_intersect(a.a, a.b, b.a, b.b)


def area_exchange(
    slit1: Slit,
    slit2: Slit,
    expect_odd: bool = True,
) -> ExchangeData:
    """a(sigma, sigma') for slits sharing both endpoints, exactly.

    Identical slits return 0 by convention.  Raises when the slits do not
    share endpoints or their crossing parity is even (no common cover).
    """
    s = slit1.surface
    if slit2.surface is not s:
        raise SlitError("slits live on different surfaces")
    if slit1.holonomy == slit2.holonomy and slit1.start_key() == slit2.start_key():
        return ExchangeData(s.zero(), 0, s.zero())
    if slit1.end_label != slit2.end_label:
        raise SlitError("slits must share their end point")
    if slit1.start_key() != slit2.start_key():
        raise SlitError("slits must share their start point")

    area1, crossings = _overlay_parity_areas(s, slit1, slit2)
    if expect_odd and crossings % 2 == 0:
        raise SlitError(f"interior crossing count {crossings} is even")

    total = s.area
    other = total - area1
    small = area1 if (area1 - other).sign() <= 0 else other
    # Upstairs both parity classes double.
    return ExchangeData(small * 2, crossings, small)


def area_exchange_bound(
    ratio: QuadExt, k: int, ell: int, kappa: QuadExt, total_area: QuadExt
) -> QuadExt:
    """Per-instance bound 2 * rho * k * ell * kappa (times the surface area).

    This dominates the exact exchange for twists performed in a cylinder of
    the profiled direction: the twist sub-cylinder has area at most
    rho * k * ell * kappa * area(X), and the exchange at most twice that.
    """
    if ratio.sign() <= 0:
        raise ValueError("bound requires a slit lying on a saddle connection")
    return ratio * (2 * k * ell) * kappa * total_area
