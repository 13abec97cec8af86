"""Seeded Monte Carlo estimator for the change of area.

Samples uniform points on the base surface and classifies them by the
crossing parity of a straight probe segment (from a per-polygon anchor)
against the two slits' chords, with exact per-polygon anchor parities taken
from the exact overlay.  Diagnostic only: the estimator never feeds a
decision; it cross-checks the exact overlay computation.

Determinism: samples are drawn in fixed-size chunks, each chunk from its own
child generator of the master seed, so worker scheduling cannot change the
stream.
"""
from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .delaunay import triangulate_polygon
from .field import Vec2
from . import geom
from .slits import Slit

CHUNK = 65_536


@dataclass
class ExchangeEstimate:
    estimate: float
    stderr: float
    samples: int
    seed: int

    def within_sigmas(self, exact: float, sigmas: float = 3.0) -> bool:
        spread = max(self.stderr, 1e-12)
        return abs(self.estimate - exact) <= sigmas * spread


def _polygon_triangles(poly):
    pts = [v.float_tuple() for v in poly]
    tris = []
    for (i, j, k) in triangulate_polygon(list(poly)):
        tris.append((pts[i], pts[j], pts[k]))
    return tris


def _anchor_point(poly) -> Vec2:
    # Interior anchor: centroid of the first ear triangle (exact coords).
    i, j, k = triangulate_polygon(list(poly))[0]
    a, b, c = poly[i], poly[j], poly[k]
    return Vec2((a.x + b.x + c.x) / 3, (a.y + b.y + c.y) / 3)


def estimate_exchange(
    slit1: Slit, slit2: Slit, samples: int = 1_000_000, seed: int = 0
) -> ExchangeEstimate:
    """Monte Carlo estimate of a(sigma, sigma'), in cover area units."""
    s = slit1.surface
    polys = s.polygons

    # Exact anchor parities via the overlay machinery.
    anchor_parity = _exact_anchor_parities(slit1, slit2)

    # Per-polygon chord lists as float arrays.
    chords: dict[int, np.ndarray] = {}
    for slit in (slit1, slit2):
        for seg in slit.segments:
            arr = chords.setdefault(seg.poly, [])
            arr.append(seg.start.float_tuple() + seg.end.float_tuple())
    chords = {p: np.asarray(v, dtype=float) for p, v in chords.items()}

    areas = np.array([abs(float(geom.polygon_area(p))) for p in polys])
    weights = areas / areas.sum()
    total_area = float(areas.sum())

    tri_data = []
    for p, poly in enumerate(polys):
        tris = _polygon_triangles(poly)
        t_areas = np.array(
            [
                abs(
                    (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1])
                )
                / 2
                for a, b, c in tris
            ]
        )
        tri_data.append((np.asarray(tris, dtype=float), t_areas / t_areas.sum()))
    anchors = [np.asarray(_anchor_point(p).float_tuple()) for p in polys]

    odd = 0
    used = 0
    n_chunks = (samples + CHUNK - 1) // CHUNK
    master = np.random.SeedSequence(seed)
    children = master.spawn(n_chunks)
    for ci in range(n_chunks):
        n = min(CHUNK, samples - ci * CHUNK)
        rng = np.random.default_rng(children[ci])
        pi = rng.choice(len(polys), size=n, p=weights)
        u = rng.random(n)
        v = rng.random(n)
        flip = u + v > 1
        u = np.where(flip, 1 - u, u)
        v = np.where(flip, 1 - v, v)
        pts = np.empty((n, 2))
        par = np.zeros(n, dtype=np.int64)
        ok = np.ones(n, dtype=bool)
        for p in range(len(polys)):
            mask = pi == p
            if not mask.any():
                continue
            tris, tw = tri_data[p]
            ti = rng.choice(len(tw), size=int(mask.sum()), p=tw)
            a = tris[ti, 0]
            b = tris[ti, 1]
            c = tris[ti, 2]
            uu = u[mask][:, None]
            vv = v[mask][:, None]
            x = a + uu * (b - a) + vv * (c - a)
            pts[mask] = x
            par[mask] = anchor_parity[p]
            if p in chords:
                cnt, good = _crossings(anchors[p], x, chords[p])
                par[mask] ^= cnt & 1
                m2 = np.where(mask)[0]
                ok[m2[~good]] = False
        odd += int(par[ok].sum())
        used += int(ok.sum())

    frac = odd / max(used, 1)
    region = frac * total_area
    small = min(region, total_area - region)
    est = 2.0 * small
    stderr = 2.0 * total_area * math.sqrt(max(frac * (1 - frac), 1e-12) / max(used, 1))
    return ExchangeEstimate(est, stderr, used, seed)


def _exact_anchor_parities(slit1: Slit, slit2: Slit):
    """Exact parity of each polygon's anchor point, from the overlay faces."""
    from .exchange import _overlay_parity_faces

    s = slit1.surface
    parity_faces = _overlay_parity_faces(s, slit1, slit2)
    anchors = {}
    for p in range(len(s.polygons)):
        anchor = _anchor_point(s.polygons[p])
        found = None
        for face, parity in parity_faces[p]:
            if geom.point_in_polygon(face.vertices, anchor) > 0:
                found = parity
                break
        if found is None:  # pragma: no cover
            raise RuntimeError("anchor not inside any overlay face")
        anchors[p] = found
    return anchors


def _crossings(anchor: np.ndarray, x: np.ndarray, chords: np.ndarray):
    """Count proper crossings of segments anchor->x[i] with each chord.

    Returns (counts, good_mask); samples with near-degenerate predicates are
    flagged for resampling exclusion.
    """
    eps = 1e-12
    n = x.shape[0]
    counts = np.zeros(n, dtype=np.int64)
    good = np.ones(n, dtype=bool)
    ax, ay = anchor
    for (cx1, cy1, cx2, cy2) in chords:
        dx, dy = cx2 - cx1, cy2 - cy1
        # Side of chord endpoints relative to segment anchor->x.
        sx = x[:, 0] - ax
        sy = x[:, 1] - ay
        d1 = sx * (cy1 - ay) - sy * (cx1 - ax)
        d2 = sx * (cy2 - ay) - sy * (cx2 - ax)
        d3 = dx * (ay - cy1) - dy * (ax - cx1)
        d4 = dx * (x[:, 1] - cy1) - dy * (x[:, 0] - cx1)
        scale = np.maximum(np.abs(sx) + np.abs(sy), 1.0)
        near = (
            (np.abs(d1) < eps * scale)
            | (np.abs(d2) < eps * scale)
            | (np.abs(d4) < eps * scale)
        )
        good &= ~near
        cross = (d1 * d2 < 0) & (d3 * d4 < 0)
        counts += cross.astype(np.int64)
    return counts, good
