"""The inductive slit tree: small-ratio searches, twist cylinders with exact
irrationality certificates, level-by-level growth, and verification of the
non-unique-ergodicity criterion's finite conditions.

Representation of deep nodes.  Every node's slit is the image of a short,
fully traced slit under an affine automorphism of the base (a product of
parabolic powers fixing the slit endpoints).  The node stores the short
representative plus the automorphism's derivative matrix, so exact
holonomies, angles, ratios, and exchanged areas are all available without
ever tracing the (combinatorially enormous) image slit.  Every inequality
the construction consumes is re-verified in exact arithmetic on every node.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .affine import parabolic_generator
from .cylinders import (
    CylinderDecomposition,
    NotPeriodic,
    crossing_profile,
    decompose,
    direction_key,
)
from .exchange import area_exchange, area_exchange_bound
from .field import Mat2, QuadExt, Vec2, unit_horizontal_frame
from .saddles import connection_directions
from .slits import (
    Carrier,
    Slit,
    SlitError,
    SlitLocation,
    carrier_segments,
    locate_slit,
    make_slit,
    slit_carrier,
    twist_slit,
)
from .surface import TranslationSurface
from .tracing import BudgetExceeded
from .weierstrass import weierstrass_points


class PipelineError(RuntimeError):
    """Internal consistency failure: a certified bound failed verification."""


@dataclass
class Budgets:
    """Search budgets, scaled by the SLITFLOW_BUDGET_SCALE environment knob."""

    direction_rounds: int = 6  # doubling rounds of the direction search
    initial_direction_bound: Fraction = Fraction(2)
    twist_max_k: int = 400
    carrier_scale: int = 8  # extension budget ~ carrier_scale / target ratio
    tau_power_guard: int = 64

    @classmethod
    def from_env(cls, **overrides) -> "Budgets":
        import os

        scale = int(os.environ.get("SLITFLOW_BUDGET_SCALE", "1"))
        b = cls(**overrides)
        if scale != 1:
            b.direction_rounds += max(0, scale.bit_length() - 1)
            b.twist_max_k *= scale
            b.tau_power_guard *= scale
        return b


@dataclass(frozen=True)
class TwistCertificate:
    direction: Vec2  # decomposition direction on the base
    cylinder: int
    transverse_span: QuadExt  # slit (or half-slit) transverse extent
    height: QuadExt
    half: bool  # symmetric half-slit mode (midpoint on the spine)

    @property
    def span_ratio(self) -> QuadExt:
        return self.transverse_span / self.height


@dataclass
class SlitNode:
    level: int
    path: str
    u: Slit  # short validated representative on the base
    matrix: Mat2  # derivative of the automorphism carrying u to the slit
    carrier: Carrier  # carrier of u (ratio and holonomy are invariants)
    hol: Vec2  # fixed-frame holonomy of the actual slit
    carrier_hol: Vec2
    parent: Optional["SlitNode"] = None
    a_exact: Optional[QuadExt] = None  # exchange with parent, base-area units
    a_bound: Optional[QuadExt] = None
    theta_tan: Optional[QuadExt] = None
    theta_bound: Optional[QuadExt] = None
    twist: Optional[TwistCertificate] = None
    twist_k: int = 0
    tau_power: int = 0

    @property
    def ratio(self) -> QuadExt:
        return self.carrier.ratio

    @property
    def length2(self) -> QuadExt:
        return self.hol.norm2()


def point_in_CQ(
    dec: CylinderDecomposition, cylinder: int, transverse: QuadExt
) -> bool:
    """Is the point (given by its transverse coordinate) twist-periodic?

    True iff transverse / height is rational; boundary points are rejected.
    """
    h = dec.cylinders[cylinder].height
    if transverse.sign() <= 0 or (transverse - h).sign() >= 0:
        raise ValueError("point on the cylinder boundary")
    return (transverse / h).is_rational()


def _weierstrass_keys(s: TranslationSurface) -> frozenset:
    if "weierstrass_keys" not in s._cache:
        pts = weierstrass_points(s)
        s._cache["weierstrass_keys"] = frozenset(
            s.canonical_point_key(p, pos) for p, pos in pts
        )
    return s._cache["weierstrass_keys"]


def _half_slit_location(
    s: TranslationSurface, dec: CylinderDecomposition, slit: Slit
):
    """Symmetric (half-slit) location: the slit crosses the spine exactly at
    its Weierstrass midpoint; locate the start->midpoint half."""
    mid_poly, mid_pos = slit.midpoint()
    mid_key = s.canonical_point_key(mid_poly, mid_pos)
    if mid_key not in _weierstrass_keys(s):
        return None
    # All interior spine contacts must be the midpoint itself.
    for seg in slit.segments[:-1]:
        if dec._on_spine(seg.poly, seg.end):
            if s.canonical_point_key(seg.poly, seg.end) != mid_key:
                return None
    half = QuadExt(Fraction(1, 2), 0, s.d)
    frame = dec.frame
    n2 = slit.holonomy.norm2()
    acc = s.zero()
    ys = []
    cyls = set()
    for seg in slit.segments:
        span = slit.holonomy.dot(seg.end - seg.start) / n2
        lo = acc
        hi = acc + span
        acc = hi
        if (lo - half).sign() >= 0:
            break
        a = seg.start
        b = seg.end if (hi - half).sign() <= 0 else seg.start + slit.holonomy * (
            half - lo
        )
        from .cylinders import _segment_subchords

        subs = _segment_subchords(dec, seg.poly, a, b)
        if len(subs) != 1:
            return None
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
    if not cyls:
        return None
    ci = cyls.pop()
    lo = hi = ys[0]
    for y in ys[1:]:
        if (y - lo).sign() < 0:
            lo = y
        if (y - hi).sign() > 0:
            hi = y
    return SlitLocation(ci, lo, hi, False)


def iter_twist_candidates(
    base: TranslationSurface,
    slit: Slit,
    carrier: Carrier,
    budgets: Optional[Budgets] = None,
    symmetric: bool = False,
):
    """Cylinders containing the slit (or half-slit) whose twist moves the
    free endpoint along an infinite orbit: exact irrationality certificates.

    Directions are enumerated by increasing saddle-connection length on the
    carrier-normalized copy of the surface, so the search cost is bounded by
    the renormalized geometry rather than the slit's absolute size.
    """
    budgets = budgets or Budgets.from_env()
    if not carrier.found:
        raise SlitError("slit carrier unknown; cannot search for twist cylinders")
    g = unit_horizontal_frame(carrier.holonomy)
    base_g = base.transform(g)
    g_inv = g.inverse()

    tried = set()
    bound = Fraction(budgets.initial_direction_bound)
    for _round in range(budgets.direction_rounds):
        dirs = connection_directions(base_g, bound)
        ordered = sorted(dirs, key=lambda v: (float(v.norm2()), v.key()))
        for dir_g in ordered:
            key = direction_key(dir_g)
            if key in tried:
                continue
            tried.add(key)
            direction = g_inv * dir_g
            if direction.cross(slit.holonomy).is_zero():
                continue
            dec = decompose(base, direction, unbounded=True)
            if not isinstance(dec, CylinderDecomposition):
                continue
            loc = locate_slit(dec, slit)
            if loc is not None:
                span = loc.y_high - loc.y_low
                h = dec.cylinders[loc.cylinder].height
                if not (span / h).is_rational():
                    cert = TwistCertificate(
                        dec.direction, loc.cylinder, span, h, False
                    )
                    yield dec, loc, cert
                continue
            if symmetric:
                hloc = _half_slit_location(base, dec, slit)
                if hloc is not None:
                    span = hloc.y_high - hloc.y_low
                    h = dec.cylinders[hloc.cylinder].height
                    if not (span / h).is_rational():
                        cert = TwistCertificate(
                            dec.direction, hloc.cylinder, span, h, True
                        )
                        yield dec, hloc, cert
        bound *= 2


def find_twist_cylinder(
    base: TranslationSurface,
    slit: Slit,
    carrier: Carrier,
    budgets: Optional[Budgets] = None,
    symmetric: bool = False,
):
    """First twist-cylinder candidate; raises when the budget runs out."""
    for cand in iter_twist_candidates(base, slit, carrier, budgets, symmetric):
        return cand
    raise BudgetExceeded(
        "no twist cylinder with an irrational transverse certificate found; "
        "possible arithmetic surface or twist-periodic configuration"
    )


def twist_symmetric_slit(
    slit: Slit, dec: CylinderDecomposition, loc: SlitLocation, k: int
) -> Slit:
    """Twist half of a Weierstrass-midpoint slit and extend by the involution.

    The half from the start to the midpoint gains k core curves; the full
    slit gains 2k, keeping the midpoint on the same Weierstrass point.
    """
    if k % 2 != 0:
        raise SlitError("symmetric twist power must be even")
    s = slit.surface
    mid_poly, mid_pos = slit.midpoint()
    mid_key = s.canonical_point_key(mid_poly, mid_pos)
    if mid_key not in _weierstrass_keys(s):
        raise SlitError("slit midpoint is not a Weierstrass point")
    if k == 0:
        return slit
    core = dec.cylinders[loc.cylinder].core_holonomy
    new_hol = slit.holonomy + core * (2 * k)
    out = make_slit(s, slit.end_label, new_hol)
    if out.start_key() != slit.start_key():
        raise SlitError("symmetric twist moved the slit start")  # pragma: no cover
    mp, mpos = out.midpoint()
    if s.canonical_point_key(mp, mpos) != mid_key:
        raise SlitError("symmetric twist moved the midpoint")  # pragma: no cover
    return out


def _twist_once(
    slit: Slit,
    dec: CylinderDecomposition,
    loc: SlitLocation,
    cert: TwistCertificate,
    k: int,
) -> Slit:
    if cert.half:
        return twist_symmetric_slit(slit, dec, loc, k)
    return twist_slit(slit, dec, k, loc)


def reduce_ratio(
    base: TranslationSurface,
    slit: Slit,
    carrier: Carrier,
    target: QuadExt,
    budgets: Optional[Budgets] = None,
    symmetric: bool = False,
    require_longer: bool = False,
):
    """Twist the slit by even powers until its ratio drops below ``target``.

    Returns (new slit, its carrier, decomposition, certificate, k used).
    """
    budgets = budgets or Budgets.from_env()
    if target.sign() <= 0:
        raise ValueError("ratio target must be positive")
    dec, loc, cert = find_twist_cylinder(base, slit, carrier, budgets, symmetric)
    carrier_budget = budgets.carrier_scale * max(
        64, int(4.0 / max(float(target), 1e-12)) + 1
    )
    length2 = slit.length2
    for step in range(1, budgets.twist_max_k + 1):
        for k in (2 * step, -2 * step):
            twisted = _twist_once(slit, dec, loc, cert, k)
            car = slit_carrier(twisted, budget_param=carrier_budget)
            if not car.found or car.ratio.sign() <= 0:
                continue
            if (car.ratio - target).sign() >= 0:
                continue
            if require_longer and (twisted.length2 - length2).sign() <= 0:
                continue
            return twisted, car, dec, cert, k
    raise BudgetExceeded(
        f"no even twist within {budgets.twist_max_k} steps reached ratio "
        f"< {float(target):.3g}"
    )


def find_initial_slit(
    base: TranslationSurface,
    slit: Slit,
    delta: Fraction,
    budgets: Optional[Budgets] = None,
    symmetric: bool = False,
) -> tuple[Slit, Carrier]:
    """A slit inducing the same cover with ratio below delta."""
    budgets = budgets or Budgets.from_env()
    if delta <= 0:
        raise ValueError("delta must be positive (delta = 0 is unachievable)")
    target = QuadExt(Fraction(delta), 0, base.d)
    car = slit_carrier(slit)
    if car.found and car.ratio.sign() > 0 and (car.ratio - target).sign() < 0:
        return slit, car
    out, car2, _dec, _cert, _k = reduce_ratio(
        base, slit, car, target, budgets, symmetric
    )
    return out, car2


# -- tree growth -----------------------------------------------------------


def _tan_quarter_bound(tan_delta: Optional[QuadExt], d: int) -> QuadExt:
    """Exact B such that tan(theta) <= B implies theta <= delta / 4.

    For acute delta with tan(delta) <= 1 use the series lower bound
    arctan(x) >= x - x^3/3; otherwise delta > pi/4 and the constant 1/6
    (< tan(pi/16)) suffices.
    """
    fallback = QuadExt(Fraction(1, 6), 0, d)
    if tan_delta is None:
        return fallback
    if tan_delta.sign() <= 0:
        raise PipelineError("level has coincident directions")
    if (tan_delta - QuadExt(1, 0, d)).sign() > 0:
        return fallback
    cube = tan_delta * tan_delta * tan_delta
    bound = (tan_delta - cube / 3) / 4
    return bound if (bound - fallback).sign() < 0 else fallback


def _tan_between(u: Vec2, v: Vec2) -> Optional[QuadExt]:
    """tan of the angle between directions, None when >= pi/2."""
    dot = u.dot(v)
    if dot.sign() <= 0:
        return None
    cross = u.cross(v)
    cross = cross if cross.sign() >= 0 else -cross
    return cross / dot


def _level_min_tan(nodes: list[SlitNode]) -> Optional[QuadExt]:
    """tan of the minimum pairwise angle; None when fewer than 2 nodes or
    all pairs are obtuse (delta >= pi/2)."""
    best = None
    for i in range(len(nodes)):
        for j in range(i + 1, len(nodes)):
            t = _tan_between(nodes[i].hol, nodes[j].hol)
            if t is None:
                continue
            if best is None or (t - best).sign() < 0:
                best = t
    return best


def _ceil_div(num: QuadExt, den: QuadExt) -> int:
    q = num / den
    return -((-q).floor())


def make_children(
    node: SlitNode,
    delta: Fraction,
    budgets: Budgets,
    level_min_tan: Optional[QuadExt],
    symmetric: bool,
) -> tuple[SlitNode, SlitNode]:
    """Both children of a node, with every certified bound re-verified."""
    base = node.u.surface
    d = base.d
    n = node.level
    if not node.carrier.found:
        raise PipelineError("node carrier unknown")

    a_cap = QuadExt(Fraction(1, 2 ** (n + 1)), 0, d)
    delta_q = QuadExt(Fraction(delta), 0, d)
    segs = carrier_segments(node.u, node.carrier)

    # Scan certified twist cylinders until one both (a) keeps the exact
    # exchange below 2^-(n+1) -- the exchange for a twist pair equals the
    # slit's sub-cylinder area, independent of the twist power -- and
    # (b) admits an even twist reaching the ratio schedule's target.
    chosen = None
    candidates = 0
    for dec, loc, cert in iter_twist_candidates(
        base, node.u, node.carrier, budgets, symmetric
    ):
        candidates += 1
        prof = crossing_profile(dec, segs, node.carrier.holonomy)
        area_coeff = QuadExt(2 * prof.k * prof.ell, 0, d) * prof.kappa
        # Spec schedule: rho(child) < min(delta, 2^-(n+1) / (2 k ell kappa)).
        target = a_cap / area_coeff
        if (delta_q - target).sign() < 0:
            target = delta_q

        carrier_budget = budgets.carrier_scale * max(
            64, int(4.0 / max(float(target), 1e-12)) + 1
        )
        u_next = car_next = k_used = None
        exchange = None
        for step in range(1, budgets.twist_max_k + 1):
            found = False
            for k in (2 * step, -2 * step):
                twisted = _twist_once(node.u, dec, loc, cert, k)
                if exchange is None:
                    # Same for every twist power in this cylinder.
                    exchange = area_exchange(node.u, twisted).area / base.area
                    if (exchange - a_cap).sign() > 0:
                        break
                car = slit_carrier(twisted, budget_param=carrier_budget)
                if not car.found or car.ratio.sign() <= 0:
                    continue
                if (car.ratio - target).sign() < 0:
                    u_next, car_next, k_used = twisted, car, k
                    found = True
                    break
            if found or (exchange is not None and (exchange - a_cap).sign() > 0):
                break
        if u_next is not None:
            chosen = (dec, loc, cert, prof, u_next, car_next, k_used, exchange)
            break
        if candidates >= 24:
            break
    if chosen is None:
        raise BudgetExceeded(
            f"level {n}: no certified cylinder produced an even twist with "
            f"a small enough ratio and exchange"
        )
    dec, loc, cert, prof, u_next, car_next, k_used, a_units = chosen

    if (a_units - a_cap).sign() > 0:  # pragma: no cover
        raise PipelineError("exchange exceeds 2^-(n+1) despite the search cap")
    # Lemma-style certified bound, using the untwisted slit's ratio and the
    # carrier profile: exchange <= 2 rho(sigma_n) k ell kappa.
    a_bound_units = area_exchange_bound(
        node.carrier.ratio, prof.k, prof.ell, prof.kappa, base.area
    ) / base.area

    # Parabolic in the carrier direction of the parent.
    dec_par = decompose(base, node.carrier.holonomy, unbounded=True)
    if not isinstance(dec_par, CylinderDecomposition):
        raise PipelineError("parent carrier direction failed to decompose")
    tau = parabolic_generator(base, dec_par)

    # Affine images: hol_c(m) = M_n (I + m N) hol(u'); N = tau - I is
    # nilpotent so everything is linear in m.
    ident = Mat2.identity(d)
    n_mat = Mat2(
        tau.a - ident.a, tau.b - ident.b, tau.c - ident.c, tau.e - ident.e
    )
    check = n_mat * n_mat
    if any(not e.is_zero() for e in check.entries()):
        raise PipelineError("parabolic generator is not unipotent")

    h_parent = node.hol
    c_vec = node.matrix * u_next.holonomy
    d_vec = node.matrix * (n_mat * u_next.holonomy)
    cross_c = h_parent.cross(c_vec)
    dot_c = h_parent.dot(c_vec)
    dot_d = h_parent.dot(d_vec)
    if h_parent.cross(d_vec).sign() != 0:
        raise PipelineError("parabolic displacement not parallel to parent")
    if dot_d.sign() == 0:
        raise PipelineError("degenerate parabolic displacement")
    sign = 1 if dot_d.sign() > 0 else -1

    t_bound = QuadExt(Fraction(1, 2**n), 0, d) / node.length2
    quarter = _tan_quarter_bound(level_min_tan, d)
    tan_cap = t_bound if (t_bound - quarter).sign() <= 0 else quarter

    abs_cross = cross_c if cross_c.sign() >= 0 else -cross_c
    if abs_cross.sign() == 0:
        raise PipelineError("child direction equals parent direction")
    # Need dot > 0 and |cross| <= tan_cap * dot: dot >= |cross| / tan_cap.
    need_dot = abs_cross / tan_cap
    m_min = _ceil_div(need_dot - dot_c, dot_d * sign)
    m_min = max(m_min, 1)

    def child_ok(m: int) -> Optional[tuple]:
        mm = m * sign
        h_child = Vec2(c_vec.x + d_vec.x * mm, c_vec.y + d_vec.y * mm)
        dot = h_parent.dot(h_child)
        if dot.sign() <= 0:
            return None
        cr = h_parent.cross(h_child)
        cr = cr if cr.sign() >= 0 else -cr
        if (cr - tan_cap * dot).sign() > 0:
            return None
        if (h_child.norm2() - node.length2).sign() <= 0:
            return None
        return h_child, cr / dot, mm

    picks = []
    m = m_min
    guard = 0
    while len(picks) < 2:
        guard += 1
        if guard > budgets.tau_power_guard + 2:
            raise BudgetExceeded("tau power search exceeded its guard")
        res = child_ok(m)
        if res is not None:
            picks.append(res)
        m += 1

    children = []
    for idx, (h_child, tan_theta, mm) in enumerate(picks):
        m_mat = node.matrix * (tau**mm)
        child = SlitNode(
            level=n + 1,
            path=node.path + str(idx),
            u=u_next,
            matrix=m_mat,
            carrier=car_next,
            hol=h_child,
            carrier_hol=m_mat * car_next.holonomy,
            parent=node,
            a_exact=a_units,
            a_bound=a_bound_units,
            theta_tan=tan_theta,
            theta_bound=t_bound,
            twist=cert,
            twist_k=k_used,
            tau_power=mm,
        )
        _verify_child(node, child, a_cap)
        children.append(child)
    return children[0], children[1]


def _verify_child(parent: SlitNode, child: SlitNode, a_cap: QuadExt):
    """Exact re-verification of every certified inequality."""
    if (child.theta_tan - child.theta_bound).sign() > 0:
        raise PipelineError("child angle bound violated")  # pragma: no cover
    if (child.a_exact - a_cap).sign() > 0:
        raise PipelineError("child area bound violated")  # pragma: no cover
    if (child.length2 - parent.length2).sign() <= 0:
        raise PipelineError("slit lengths must strictly increase")  # pragma: no cover
    if child.a_bound is not None and (child.a_exact - child.a_bound).sign() > 0:
        raise PipelineError("exchange exceeds its certified bound")  # pragma: no cover
    expected = child.matrix * child.u.holonomy
    if expected != child.hol:  # pragma: no cover
        raise PipelineError("holonomy bookkeeping mismatch")


@dataclass
class TreeLevel:
    level: int
    nodes: list[SlitNode]
    min_tan: Optional[QuadExt]


@dataclass
class SlitTree:
    base: TranslationSurface
    root: SlitNode
    levels: list[TreeLevel]
    delta: Fraction
    symmetric: bool

    def leaves(self) -> list[SlitNode]:
        return self.levels[-1].nodes

    def path_nodes(self, bits: str) -> list[SlitNode]:
        nodes = [self.root]
        cur = self.root
        for depth, b in enumerate(bits):
            nxt = None
            for cand in self.levels[depth + 1].nodes:
                if cand.parent is cur and cand.path == cur.path + b:
                    nxt = cand
                    break
            if nxt is None:
                raise KeyError(f"path {bits} not materialized")
            nodes.append(nxt)
            cur = nxt
        return nodes


def root_node(base: TranslationSurface, slit: Slit, carrier: Carrier) -> SlitNode:
    return SlitNode(
        level=0,
        path="",
        u=slit,
        matrix=Mat2.identity(base.d),
        carrier=carrier,
        hol=slit.holonomy,
        carrier_hol=carrier.holonomy,
    )


def grow_tree(
    base: TranslationSurface,
    slit: Slit,
    depth: int,
    delta: Fraction = Fraction(1, 2),
    budgets: Optional[Budgets] = None,
    symmetric: bool = False,
    path: Optional[str] = None,
    workers: int = 1,
) -> SlitTree:
    """Grow the binary slit tree to the given depth.

    ``path``: grow only along the given bit string (both children are still
    built at each step; the off-path child is kept for the level minimum but
    not extended).  ``workers`` parallelizes sibling subtree construction
    with a deterministic, order-independent merge.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if path is not None and len(path) != depth:
        raise ValueError("path length must equal depth")
    budgets = budgets or Budgets.from_env()
    start, car = find_initial_slit(base, slit, delta, budgets, symmetric)
    root = root_node(base, start, car)
    levels = [TreeLevel(0, [root], None)]
    frontier = [root]
    for n in range(depth):
        min_tan = _level_min_tan(levels[n].nodes)
        expand = frontier
        if path is not None:
            expand = [frontier[0]]

        def build(nd):
            return make_children(nd, delta, budgets, min_tan, symmetric)

        if workers > 1 and len(expand) > 1:
            from concurrent.futures import ThreadPoolExecutor

            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(build, expand))
        else:
            results = [build(nd) for nd in expand]

        new_nodes = []
        for c1, c2 in results:
            new_nodes.extend((c1, c2))
        levels.append(TreeLevel(n + 1, new_nodes, None))
        if path is not None:
            bit = int(path[n])
            frontier = [results[0][bit]]
        else:
            frontier = new_nodes
    for lvl in levels:
        lvl.min_tan = _level_min_tan(lvl.nodes)
    return SlitTree(base, root, levels, delta, symmetric)


# -- criterion verification --------------------------------------------------


@dataclass
class CriterionRow:
    level: int
    path: str
    sigma_len: float
    theta_bound: Optional[float]
    theta_actual: Optional[float]
    a_exact: Optional[str]
    a_partial_sum: str
    h_n: float
    dir_err_bound: float


@dataclass
class CriterionReport:
    rows: list[CriterionRow]
    sum_a: QuadExt
    partial_sums_bounded: bool  # condition (1): sums <= 1/2
    partitions_equal: bool  # condition (2)
    component_area: QuadExt  # c: each component's area, base units
    h_decay: bool  # condition (3) proxy: exact bound at every level
    h_last_below_first: bool

    @property
    def all_pass(self) -> bool:
        return self.partial_sums_bounded and self.partitions_equal and self.h_decay


def verify_criterion(nodes: list[SlitNode], cover=None) -> CriterionReport:
    """Check the finite criterion conditions along a path, exactly.

    (1) partial sums of exchanges stay below 1/2 (in base-area units);
    (2) the two components of every splitting have equal area (certified on
        the cover built from the root slit: all later slits are images of it
        under area-preserving automorphisms and even twists);
    (3) the perpendicular components h_n shrink: each node's angle to the
        deepest direction satisfies the tangent form of the summed bound.
    """
    if len(nodes) < 2:
        raise ValueError("need a path of length >= 2")
    base = nodes[0].u.surface
    d = base.d
    limit = nodes[-1].hol
    limit_len2 = limit.norm2()

    if cover is None:
        from .covers import build_cover

        cover = build_cover(base, nodes[0].u)
    a0, a1 = cover.omega_areas
    partitions_equal = a0 == a1
    component_area = a0 / base.area

    rows = []
    partial = base.zero()
    half = QuadExt(Fraction(1, 2), 0, d)
    sums_ok = True
    h_ok = True
    h_values = []
    for node in nodes:
        if node.a_exact is not None:
            partial = partial + node.a_exact
            if (partial - half).sign() > 0:
                sums_ok = False
        n = node.level
        cross = node.hol.cross(limit)
        cross = cross if cross.sign() >= 0 else -cross
        # h_n = |perpendicular component| = |cross| / |limit|.
        h2 = (cross * cross) / limit_len2
        h_values.append(h2)
        # Exact check in tangent form: the angle alpha_n to the limiting
        # estimate obeys tan(alpha_n) <= B (1 + B^2) with
        # B = 2^(1-n) / |sigma_n|^2 (the summed angle bound).
        bnd = QuadExt(Fraction(2, 2**n), 0, d) / node.length2
        tan_cap = bnd * (QuadExt(1, 0, d) + bnd * bnd)
        dot = node.hol.dot(limit)
        if node is not nodes[-1]:
            if dot.sign() <= 0 or (cross - tan_cap * dot).sign() > 0:
                h_ok = False
        err = float(QuadExt(Fraction(2, 2**n), 0, d) / node.length2)
        rows.append(
            CriterionRow(
                level=n,
                path=node.path,
                sigma_len=float(node.length2) ** 0.5,
                theta_bound=None if node.theta_bound is None else float(node.theta_bound),
                theta_actual=None if node.theta_tan is None else float(node.theta_tan),
                a_exact=None if node.a_exact is None else str(node.a_exact),
                a_partial_sum=str(partial),
                h_n=float(h2) ** 0.5,
                dir_err_bound=err,
            )
        )

    h_last_below_first = True
    if len(h_values) > 4:
        # Deepest nontrivial h (level N-1; h_N vanishes against itself)
        # against the level-2 value.
        h_last_below_first = (h_values[-2] - h_values[2]).sign() < 0

    return CriterionReport(
        rows=rows,
        sum_a=partial,
        partial_sums_bounded=sums_ok,
        partitions_equal=partitions_equal,
        component_area=component_area,
        h_decay=h_ok,
        h_last_below_first=h_last_below_first,
    )


def direction_intervals_disjoint(a: SlitNode, b: SlitNode) -> bool:
    """Exact sufficient test that the limiting-direction intervals of two
    depth-N leaves are disjoint: angle(a, b) > R_a + R_b with
    R = 2^(1-N) / |sigma_N|^2 bounding all remaining rotation."""
    d = a.u.surface.d

    def radius_tan(node):
        r = QuadExt(Fraction(2, 2**node.level), 0, d) / node.length2
        return r * (QuadExt(1, 0, d) + r * r)  # >= tan(R)

    ua, ub = radius_tan(a), radius_tan(b)
    dot = a.hol.dot(b.hol)
    if dot.sign() <= 0:
        # Angle >= pi/2 while both radii are far below pi/4.
        one = QuadExt(1, 0, d)
        return (ua - one).sign() < 0 and (ub - one).sign() < 0
    cross = a.hol.cross(b.hol)
    cross = cross if cross.sign() >= 0 else -cross
    denom = QuadExt(1, 0, d) - ua * ub
    if denom.sign() <= 0:
        return False
    # tan is superadditive on acute angles: tan(Ra + Rb) <= (ua+ub)/(1-ua ub).
    rhs = (ua + ub) / denom
    return (cross - rhs * dot).sign() > 0
