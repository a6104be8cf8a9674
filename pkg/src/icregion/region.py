"""Assembly of the achievable-rate region for a fixed input distribution.

For one joint the region in the 18 split coordinates is an intersection,
over all decoding conditions, of unions of halfspaces (one per saturation
alternative).  Resolving every condition's choice gives a SelectionAssignment
and an ordinary polyhedron; the region is the union over all selections, and
the 3-D region is its projection onto the per-sender sum rates followed by a
convex hull (time sharing).

Pointwise membership never enumerates selections: the best alternative for a
(j, k) pair does not depend on the own-signal row index, so the minimum is
memoized per pair.

Everything emitted is an inner approximation: every reported boundary point
carries an 18-coordinate witness that re-verifies under membership.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .channel import interferers
from .constraints import MutualInfo, all_systems, condition_rows, rates_array_to_dict
from .errors import InvalidSelection, NotDegenerate
from .joint import FullJoint
from .polytope import (Hull3, RatePolyhedron, enumerate_vertices, fm_optimize,
                       fm_project_rates, hull3, lift_point)
from .tables import RATE_COORDS, choices

MEMBER_TOL = 1e-9


# -- membership ---------------------------------------------------------------


@dataclass(frozen=True)
class MembershipReport:
    member: bool
    violations: tuple  # (label, slack) pairs, slack < 0

    def __bool__(self):
        return self.member


def membership(joint: FullJoint, rates, tol: float = MEMBER_TOL) -> MembershipReport:
    """Check an 18-coordinate rate point against all three receiver systems."""
    rates = _as_rate_dict(rates)
    violations = []
    for name in RATE_COORDS:
        v = rates.get(name, 0.0)
        if v < -tol:
            violations.append((f"nonneg[{name}]", v))
    for sys in all_systems(joint):
        for ineq in sys.marton:
            s = ineq.slack(rates)
            if s < -tol:
                violations.append((ineq.label, s))
        minima = {}
        for cond in sys.conditions:
            jk = (cond.j, cond.k)
            if jk not in minima:  # alternatives do not depend on i
                minima[jk] = min(
                    sum(rates.get(v, 0.0) for v in alt.rate) + alt.mi_value
                    for alt in cond.alternatives)
            lhs = sum(rates.get(v, 0.0) for v in cond.base_rate) + minima[jk]
            s = cond.rhs_value - lhs
            if s < -tol:
                violations.append((cond.label(), s))
    return MembershipReport(member=not violations, violations=tuple(violations))


def _as_rate_dict(rates) -> dict:
    if isinstance(rates, dict):
        return {k: float(v) for k, v in rates.items()}
    values = list(rates)
    if len(values) != len(RATE_COORDS):
        raise ValueError(f"need {len(RATE_COORDS)} coordinates")
    return rates_array_to_dict(values)


# -- selections ---------------------------------------------------------------


@dataclass(frozen=True)
class SelectionAssignment:
    """One resolved choice (j', k') per receiver and interference pair."""

    choices: dict  # (l, j, k) -> (jp, kp)

    def get(self, l, j, k):
        return self.choices[(l, j, k)]

    def validate(self):
        for (l, j, k), (jp, kp) in self.choices.items():
            if not (1 <= jp <= choices(j) and 1 <= kp <= choices(k)):
                raise InvalidSelection(f"(j'={jp},k'={kp}) invalid for (l={l},j={j},k={k})")
        if set(self.choices) != {(l, j, k) for l in (1, 2, 3)
                                 for j in (1, 2, 3) for k in (1, 2, 3)}:
            raise InvalidSelection("assignment must cover all 27 (l,j,k) pairs")
        return self


def argmin_selection(joint: FullJoint) -> SelectionAssignment:
    """Per (l, j, k) the alternative with the smallest saturation constant,
    ties broken by lexicographically smallest (j', k')."""
    out = {}
    for sys in all_systems(joint):
        for cond in sys.conditions:
            if cond.i != 1:
                continue
            best = min(cond.alternatives, key=lambda a: (a.mi_value, a.jp, a.kp))
            out[(sys.receiver, cond.j, cond.k)] = (best.jp, best.kp)
    return SelectionAssignment(out)


def polyhedron_for_selection(joint: FullJoint, sel: SelectionAssignment) -> RatePolyhedron:
    """18-coordinate polyhedron of a resolved selection: contained in the
    region; the union over all selections is the whole region."""
    sel.validate()
    poly = RatePolyhedron(RATE_COORDS, nonneg=True)
    for c in RATE_COORDS:
        poly.add({c: Fraction(1)}, ">=", 0)
    for sys in all_systems(joint):
        for ineq in sys.marton:
            poly.add(dict(ineq.coeffs), ineq.sense, Fraction(float(ineq.rhs)))
        for cond in sys.conditions:
            jp, kp = sel.get(sys.receiver, cond.j, cond.k)
            alt = next((a for a in cond.alternatives if (a.jp, a.kp) == (jp, kp)), None)
            if alt is None:
                raise InvalidSelection(f"(j'={jp},k'={kp}) not available at "
                                       f"(l={sys.receiver},j={cond.j},k={cond.k})")
            coeffs = dict(cond.base_rate)
            for v, c in alt.rate.items():
                coeffs[v] = coeffs.get(v, Fraction(0)) + c
            poly.add(coeffs, "<=", Fraction(cond.rhs_value - alt.mi_value))
    return poly


@dataclass
class _Group:
    """Conditions with identical rows share one choice; alternatives are
    deduplicated and (on the nonnegative orthant) domination-pruned."""

    receiver: int
    jk_pairs: list            # the merged (j, k) pairs
    alt_ids: list             # surviving alternatives as (jp, kp)
    rows: list                # rows[a][i] = (coeffs dict, rhs float) for alt a, own-row i
    mi_values: list


def _build_groups(joint: FullJoint):
    groups = {}
    order = []
    for sys in all_systems(joint):
        by_i = {}
        for cond in sys.conditions:
            by_i.setdefault((cond.j, cond.k), {})[cond.i] = cond
        for (j, k), conds in sorted(by_i.items()):
            base = conds[1]
            alts = list(base.alternatives)
            # alternative rows for all i; rhs differences are i-independent
            rows = []
            for a_idx, alt in enumerate(alts):
                per_i = []
                for i in sorted(conds):
                    cond = conds[i]
                    coeffs = dict(cond.base_rate)
                    for v, c in alt.rate.items():
                        coeffs[v] = coeffs.get(v, Fraction(0)) + c
                    per_i.append((coeffs, cond.rhs_value - alt.mi_value))
                rows.append(per_i)
            # prune dominated alternatives (valid with nonnegative rates):
            # b dominates a when b's rate atoms are a subset and its
            # saturation constant is no larger.  The 1e-12 slack absorbs
            # float noise between mathematically equal constants; it can
            # shave at most that much off the union (still an inner bound).
            alive = list(range(len(alts)))
            for a, b in itertools.permutations(range(len(alts)), 2):
                if a not in alive or b not in alive:
                    continue
                sub = set(alts[b].rate) <= set(alts[a].rate)
                if sub and alts[b].mi_value <= alts[a].mi_value + 1e-12:
                    tie = (set(alts[b].rate) == set(alts[a].rate)
                           and abs(alts[b].mi_value - alts[a].mi_value) <= 1e-12)
                    if tie and (alts[b].jp, alts[b].kp) > (alts[a].jp, alts[a].kp):
                        continue  # tie: keep the lexicographically smaller
                    alive.remove(a)
            key = (sys.receiver, tuple(
                (tuple(sorted((v, str(c)) for v, c in rows[a][i][0].items())),
                 round(rows[a][i][1], 12))
                for a in alive for i in range(len(rows[a]))))
            if key in groups:
                groups[key].jk_pairs.append((j, k))
            else:
                g = _Group(receiver=sys.receiver, jk_pairs=[(j, k)],
                           alt_ids=[(alts[a].jp, alts[a].kp) for a in alive],
                           rows=[rows[a] for a in alive],
                           mi_values=[alts[a].mi_value for a in alive])
                groups[key] = g
                order.append(g)
    return order


def _selection_space_size(groups) -> int:
    n = 1
    for g in groups:
        n *= len(g.alt_ids)
    return n


def _enumerate_group_choices(groups, budget):
    """Selection tuples over groups: the full product if it fits the budget,
    otherwise the argmin choice plus its single-group perturbations."""
    total = _selection_space_size(groups)
    if total <= budget:
        return list(itertools.product(*[range(len(g.alt_ids)) for g in groups])), True
    base = tuple(min(range(len(g.alt_ids)),
                     key=lambda a: (g.mi_values[a], g.alt_ids[a]))
                 for g in groups)
    picks = [base]
    for gi, g in enumerate(groups):
        for a in range(len(g.alt_ids)):
            if a != base[gi] and len(picks) < budget:
                picks.append(base[:gi] + (a,) + base[gi + 1:])
    return picks, False


def _poly_for_group_choice(joint, groups, choice) -> RatePolyhedron:
    poly = RatePolyhedron(RATE_COORDS, nonneg=True)
    for c in RATE_COORDS:
        poly.add({c: Fraction(1)}, ">=", 0)
    for sys in all_systems(joint):
        for ineq in sys.marton:
            poly.add(dict(ineq.coeffs), ineq.sense, Fraction(float(ineq.rhs)))
    for g, a in zip(groups, choice):
        for coeffs, rhs in g.rows[a]:
            poly.add(dict(coeffs), "<=", Fraction(rhs))
    return poly


def selection_from_group_choice(groups, choice) -> SelectionAssignment:
    out = {}
    for g, a in zip(groups, choice):
        for (j, k) in g.jk_pairs:
            out[(g.receiver, j, k)] = g.alt_ids[a]
    return SelectionAssignment(out)


# -- region -------------------------------------------------------------------


@dataclass
class RegionPoint:
    xyz: tuple                # (R1, R2, R3) floats
    witness: dict             # full 18-coordinate split
    selection_id: int
    source: str               # "vertex" or "ray"


@dataclass
class Region3:
    """Inner approximation of the 3-D region for one input distribution."""

    points: list = field(default_factory=list)      # RegionPoint, re-verified
    hull: Hull3 | None = None
    selections: list = field(default_factory=list)  # SelectionAssignment per id
    projected: list = field(default_factory=list)   # 3-D RatePolyhedron per id
    stages: list = field(default_factory=list)      # lifting stages per id
    exact_vertices: list = field(default_factory=list)  # Fraction triples per id
    complete: bool = False    # full selection space enumerated
    budget_exceeded: bool = False
    pmf_id: str = "pmf0"
    seed: int = 0

    def support(self, direction) -> float:
        """Exact support over the union of projected selection polyhedra.

        The polyhedra are bounded, so the support is attained at a vertex."""
        d = [Fraction(repr(float(x))) for x in direction]
        best = None
        for sid, verts in enumerate(self.exact_vertices):
            if not verts:
                continue
            m = max(sum(c * x for c, x in zip(d, v)) for v in verts)
            if best is None or m > best:
                best = m
        if best is None:  # no vertices recorded: fall back to exact LP
            for poly in self.projected:
                try:
                    m = fm_optimize(poly, dict(zip(poly.vars, d)))
                except ValueError:
                    continue
                if m is not None and (best is None or m > best):
                    best = m
        return float(best) if best is not None else float("-inf")

    def contains(self, point, tol=MEMBER_TOL) -> bool:
        """Membership in the union of enumerated selection polyhedra
        (exact up to the float tolerance applied to the point)."""
        p = [Fraction(repr(float(x))) for x in point]
        if any(poly.substitute(p) for poly in self.projected):
            return True
        if tol:
            shrunk = [max(x - Fraction(repr(tol)), 0) for x in p]
            return any(poly.substitute(shrunk) for poly in self.projected)
        return False


def project_region(joint: FullJoint, budget: int = 512, rays: int = 32,
                   seed: int = 0, pmf_id: str = "pmf0") -> Region3:
    """Project the fixed-pmf region to (R1, R2, R3).

    Exact path: enumerate the (deduplicated) selection space up to `budget`,
    project each selection polyhedron exactly, and collect its vertices with
    exactly lifted witnesses.  Sampling path: shoot `rays` seeded directions
    from the origin against the projected polyhedra.  The result is the hull
    of all achieved points; every stored point re-verifies under membership.
    """
    groups = _build_groups(joint)
    picks, complete = _enumerate_group_choices(groups, budget)

    region = Region3(complete=complete, budget_exceeded=not complete,
                     pmf_id=pmf_id, seed=seed)
    points = []
    for sid, choice in enumerate(picks):
        poly = _poly_for_group_choice(joint, groups, choice)
        proj, stages = fm_project_rates(poly, record_stages=True)
        region.selections.append(selection_from_group_choice(groups, choice))
        region.projected.append(proj)
        region.stages.append(stages)
        region.exact_vertices.append([])
        if proj.is_obviously_infeasible():
            continue
        verts = enumerate_vertices(proj)
        region.exact_vertices[-1] = verts
        for vtx in verts:
            lift = lift_point(stages, proj.vars, vtx)
            witness = {v: float(x) for v, x in lift.items() if v in RATE_COORDS}
            xyz = tuple(float(x) for x in vtx)
            if membership(joint, witness).member:
                points.append(RegionPoint(xyz=xyz, witness=witness,
                                          selection_id=sid, source="vertex"))

    rng = np.random.default_rng(seed)
    for _ in range(rays):
        d = np.abs(rng.normal(size=3))
        n = np.linalg.norm(d)
        if n == 0:
            continue
        d = d / n
        best_t, best_sid = None, None
        for sid, proj in enumerate(region.projected):
            t = _ray_support(proj, d)
            if t is not None and (best_t is None or t > best_t):
                best_t, best_sid = t, sid
        if best_t is None:
            continue
        xyz = tuple(float(best_t) * float(x) for x in d)
        try:
            lift = lift_point(region.stages[best_sid], region.projected[best_sid].vars,
                              [Fraction(best_t) * Fraction(repr(float(x))) for x in d])
        except ValueError:
            continue
        witness = {v: float(x) for v, x in lift.items() if v in RATE_COORDS}
        if membership(joint, witness).member:
            points.append(RegionPoint(xyz=xyz, witness=witness,
                                      selection_id=best_sid, source="ray"))

    region.points = points
    if points:
        region.hull = hull3([p.xyz for p in points])
    return region


def _ray_support(poly: RatePolyhedron, direction):
    """max t >= 0 with t * direction in the polyhedron (exact Fraction),
    or None when the ray misses it or t is unbounded."""
    d = [Fraction(repr(float(x))) for x in direction]
    t_hi, t_lo = None, Fraction(0)
    for r in poly.rows:
        ad = sum(c * x for c, x in zip(r.coeffs, d))
        if ad > 0:
            t = r.rhs / ad
            t_hi = t if t_hi is None else min(t_hi, t)
        elif ad < 0:
            t_lo = max(t_lo, r.rhs / ad)
        elif r.rhs < 0:
            return None
    if t_hi is None or t_hi < t_lo:
        return None
    return t_hi


# -- feasibility of a 3-D point ----------------------------------------------


def feasible_3d(joint: FullJoint, point, strategy: str = "selection-exact",
                budget: int = 512, grid: int = 4):
    """Is (R1, R2, R3) achievable for this joint?  Returns (bool, witness).

    selection-exact: exact feasibility of each enumerated selection
    polyhedron intersected with the three sum pins; the witness is an exact
    lift.  grid: coarse lattice of splits checked by membership, with the
    multicoding excesses set to two thirds of the price (which satisfies the
    excess system identically).
    """
    point = [float(x) for x in point]
    if any(x < -MEMBER_TOL for x in point):
        return False, None
    if strategy == "selection-exact":
        return _feasible_selection_exact(joint, point, budget)
    if strategy == "grid":
        return _feasible_grid(joint, point, grid)
    raise ValueError(f"unknown strategy {strategy!r}")


_SUM_PARTS = {1: ("R10", "R11", "R12", "R13"),
              2: ("R20", "R22", "R23", "R21"),
              3: ("R30", "R33", "R31", "R32")}


def _feasible_selection_exact(joint, point, budget):
    from .polytope import fm_eliminate_all

    groups = _build_groups(joint)
    picks, _ = _enumerate_group_choices(groups, budget)
    for choice in picks:
        poly = _poly_for_group_choice(joint, groups, choice)
        for l, parts in _SUM_PARTS.items():
            target = Fraction(repr(point[l - 1]))
            for sense in ("<=", ">="):
                poly.add({p: Fraction(1) for p in parts}, sense, target)
        work, stages = fm_eliminate_all(poly, list(poly.vars), record_stages=True)
        if work.is_obviously_infeasible():
            continue
        lift = lift_point(stages, (), ())
        witness = {v: float(x) for v, x in lift.items()}
        if membership(joint, witness).member:
            return True, witness
    return False, None


def _feasible_grid(joint, point, grid):
    from .constraints import marton_penalty

    penalties = {l: marton_penalty(l).evaluate(joint) for l in (1, 2, 3)}
    fracs = [Fraction(i, grid) for i in range(grid + 1)]
    per_sender = []
    for l in (1, 2, 3):
        r = point[l - 1]
        m, n = interferers(l)
        options = []
        for f0 in fracs:
            for f1 in fracs:
                for f2 in fracs:
                    if f0 + f1 + f2 > 1:
                        continue
                    f3 = 1 - f0 - f1 - f2
                    e = 2.0 * penalties[l] / 3.0
                    split = {f"R{l}0": float(f0 * Fraction(repr(r))),
                             f"R{l}{l}": float(f1 * Fraction(repr(r))),
                             f"R{l}{m}": float(f2 * Fraction(repr(r))),
                             f"R{l}{n}": float(f3 * Fraction(repr(r)))}
                    split[f"Rt{l}{m}"] = split[f"R{l}{m}"] + e
                    split[f"Rt{l}{n}"] = split[f"R{l}{n}"] + e
                    options.append(split)
        per_sender.append(options)
    for s1 in per_sender[0]:
        for s2 in per_sender[1]:
            for s3 in per_sender[2]:
                witness = {**s1, **s2, **s3}
                if membership(joint, witness).member:
                    return True, witness
    return False, None


# -- reference points and oracles ----------------------------------------------


def tin_point(joint: FullJoint):
    """The treat-interference-as-noise corner (I(X_l; Y_l | Q))_l.

    Requires a joint built with U_l = X_l.  Asserts that the prescribed
    split (everything on the common rate) is a member.
    """
    if not joint.pmf.ux_identity:
        raise ValueError("the baseline point needs a joint with U_l = X_l")
    coords = tuple(joint.cond_mutual_info((f"X{l}",), (f"Y{l}",), ("Q",))
                   for l in (1, 2, 3))
    witness = {f"R{l}0": coords[l - 1] for l in (1, 2, 3)}
    report = membership(joint, witness)
    assert report.member, f"baseline split rejected: {report.violations}"
    return coords


def tin_box_support(coords, direction):
    """Support of the box [0,r1]x[0,r2]x[0,r3] along a nonnegative direction."""
    return sum(max(float(d), 0.0) * float(r) for d, r in zip(direction, coords))


def hk_oracle(joint: FullJoint) -> RatePolyhedron:
    """Independent compact two-pair inner-bound oracle on a degenerate joint.

    The channel must have the third pair silenced (singleton X3, X13, X23).
    The two-layer superposition structure of the surviving senders exposes
    (U_l, X_lm) as the decodable-at-the-other-receiver part, so those pairs
    play the common-auxiliary role in the standard compact formulation:

        R1 <= I(X1; Y1 | W2, Q)
        R2 <= I(X2; Y2 | W1, Q)
        R1+R2 <= I(X1,W2; Y1 | Q)     + I(X2; Y2 | W1, W2, Q)
        R1+R2 <= I(X1; Y1 | W1,W2,Q)  + I(X2,W1; Y2 | Q)
        R1+R2 <= I(X1,W2; Y1 | W1, Q) + I(X2,W1; Y2 | W2, Q)
        2R1+R2 <= I(X1,W2; Y1 | Q) + I(X1; Y1 | W1,W2,Q) + I(X2,W1; Y2 | W2, Q)
        R1+2R2 <= I(X2,W1; Y2 | Q) + I(X2; Y2 | W1,W2,Q) + I(X1,W2; Y1 | W1, Q)

    with W1 = (U1, X12), W2 = (U2, X21).  Used purely as a cross-check.
    """
    spec = joint.channel.spec
    if not (spec.x_sizes[2] == 1 and spec.comp_sizes[0][2] == 1
            and spec.comp_sizes[1][2] == 1):
        raise NotDegenerate("third pair still active")

    w1 = ("U1", "X12")
    w2 = ("U2", "X21")
    q = ("Q",)

    def mi(a, b, cond):
        return MutualInfo(a=a, b=b, cond=cond).evaluate(joint)

    a1 = mi(("X1",), ("Y1",), (*w2, *q))
    a2 = mi(("X2",), ("Y2",), (*w1, *q))
    b1 = mi(("X1", *w2), ("Y1",), q) + mi(("X2",), ("Y2",), (*w1, *w2, *q))
    b2 = mi(("X1",), ("Y1",), (*w1, *w2, *q)) + mi(("X2", *w1), ("Y2",), q)
    b3 = mi(("X1", *w2), ("Y1",), (*w1, *q)) + mi(("X2", *w1), ("Y2",), (*w2, *q))
    c1 = (mi(("X1", *w2), ("Y1",), q) + mi(("X1",), ("Y1",), (*w1, *w2, *q))
          + mi(("X2", *w1), ("Y2",), (*w2, *q)))
    c2 = (mi(("X2", *w1), ("Y2",), q) + mi(("X2",), ("Y2",), (*w1, *w2, *q))
          + mi(("X1", *w2), ("Y1",), (*w1, *q)))

    poly = RatePolyhedron(("R1", "R2"), nonneg=True)
    poly.add({"R1": 1}, ">=", 0)
    poly.add({"R2": 1}, ">=", 0)
    poly.add({"R1": 1}, "<=", Fraction(a1))
    poly.add({"R2": 1}, "<=", Fraction(a2))
    for bound in (b1, b2, b3):
        poly.add({"R1": 1, "R2": 1}, "<=", Fraction(bound))
    poly.add({"R1": 2, "R2": 1}, "<=", Fraction(c1))
    poly.add({"R1": 1, "R2": 2}, "<=", Fraction(c2))
    return poly


# -- region comparison ----------------------------------------------------------


@dataclass(frozen=True)
class InclusionReport:
    directions: int
    max_deficit_a: float   # how far A sticks out of B (bits); <= 0 means A in B
    max_deficit_b: float
    worst_direction_a: tuple
    worst_direction_b: tuple

    def a_inside_b(self, tol):
        return self.max_deficit_a <= tol

    def b_inside_a(self, tol):
        return self.max_deficit_b <= tol


def _support_of(obj, direction):
    if isinstance(obj, Region3):
        return obj.support(direction)
    if isinstance(obj, RatePolyhedron):
        d = {v: Fraction(repr(float(x))) for v, x in zip(obj.vars, direction)}
        m = fm_optimize(obj, d)
        return float(m) if m is not None else float("inf")
    if isinstance(obj, Hull3):
        return float(max(obj.vertices @ np.asarray(direction, dtype=float)))
    if isinstance(obj, (tuple, list)) and np.ndim(obj) == 1:
        return tin_box_support(obj, direction)  # box corner
    if isinstance(obj, (list, np.ndarray)):
        arr = np.asarray(obj, dtype=float)
        return float(np.max(arr @ np.asarray(direction, dtype=float)))
    raise TypeError(f"cannot take supports of {type(obj)}")


def compare_regions(a, b, directions: int = 64, seed: int = 0, dim: int = 3) -> InclusionReport:
    """Support-function comparison along random nonnegative directions.

    Accepts Region3 objects, exact polyhedra, hulls, corner tuples (boxes),
    or point arrays.  Deficits are in bits; max_deficit_a <= tol certifies
    A inside B along the sampled directions.
    """
    rng = np.random.default_rng(seed)
    worst_a = worst_b = 0.0
    dir_a = dir_b = (0.0,) * dim
    for _ in range(directions):
        d = np.abs(rng.normal(size=dim))
        n = np.linalg.norm(d)
        if n == 0:
            continue
        d = tuple(float(x) for x in d / n)
        ha, hb = _support_of(a, d), _support_of(b, d)
        if ha - hb > worst_a:
            worst_a, dir_a = ha - hb, d
        if hb - ha > worst_b:
            worst_b, dir_b = hb - ha, d
    return InclusionReport(directions=directions, max_deficit_a=worst_a,
                           max_deficit_b=worst_b, worst_direction_a=dir_a,
                           worst_direction_b=dir_b)
