"""Exact rational polyhedra: elimination, feasibility, and 3-D hulls.

Inequality systems are stored as integer-normalized rows  c . x <= r  over
named variables; all projection arithmetic is exact.  Variable elimination
is the classic pairing of upper and lower bounds, kept tractable by

  * equality detection: a variable constrained by a matched pair of
    opposite rows is removed by exact substitution, with no row growth;
  * canonical scaling plus duplicate/domination removal (systems declared
    nonnegative also drop rows implied coordinatewise by another row);
  * history pruning: a derived row combining more than |E|+1 original rows,
    where E is the set of eliminated variables in its derivation, is
    redundant (Imbert/Kohler) and is discarded;
  * a final exact redundancy sweep once few variables remain.

Convex hulls of 3-D point clouds are computed in floats (they feed sampling
and export, not proofs), with degenerate inputs flagged and reduced.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm

import numpy as np

from .errors import DimensionMismatch
from .rationals import to_fraction


def _normalize(coeffs, rhs):
    """Scale by a positive rational so coefficients are coprime integers."""
    denoms = [c.denominator for c in coeffs] + [1]
    m = lcm(*denoms)
    ints = [int(c * m) for c in coeffs]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    if g > 1:
        ints = [v // g for v in ints]
        m = Fraction(m, g)
    return tuple(ints), rhs * m


@dataclass(frozen=True)
class Row:
    """coeffs . x <= rhs with coprime integer coefficients.

    history: indices of the original rows combined into this one.
    evars:   eliminated variables involved in the derivation.
    """

    coeffs: tuple
    rhs: Fraction
    history: frozenset = field(default=frozenset(), compare=False)
    evars: frozenset = field(default=frozenset(), compare=False)

    @staticmethod
    def make(coeffs, rhs, history=frozenset()):
        fr = [to_fraction(c) for c in coeffs]
        c, r = _normalize(fr, to_fraction(rhs))
        return Row(c, r, history)

    def is_trivial(self):
        return all(c == 0 for c in self.coeffs) and self.rhs >= 0

    def is_contradiction(self):
        return all(c == 0 for c in self.coeffs) and self.rhs < 0

    def drop_column(self, idx):
        return Row(self.coeffs[:idx] + self.coeffs[idx + 1:], self.rhs,
                   self.history, self.evars)


class RatePolyhedron:
    """Conjunction of <=-rows over named coordinates, exact rationals.

    nonneg=True asserts every variable is >= 0 (the rate systems), which
    enables coordinatewise domination pruning; the explicit nonnegativity
    rows must still be present for elimination to be correct.
    """

    def __init__(self, variables, rows=(), nonneg=False):
        self.vars = tuple(variables)
        if len(set(self.vars)) != len(self.vars):
            raise ValueError("duplicate variable names")
        self.rows: list[Row] = list(rows)
        self.nonneg = nonneg

    # -- construction ------------------------------------------------------

    def add(self, coeffs_by_name: dict, sense: str, rhs, history=None):
        """Add one inequality; ">=" rows are negated into <= form."""
        vec = [Fraction(0)] * len(self.vars)
        for name, c in coeffs_by_name.items():
            if name not in self.vars:
                raise DimensionMismatch(f"unknown variable {name}")
            vec[self.vars.index(name)] = to_fraction(c)
        r = to_fraction(rhs)
        if sense == ">=":
            vec = [-c for c in vec]
            r = -r
        elif sense != "<=":
            raise ValueError(f"bad sense {sense!r}")
        h = frozenset([len(self.rows)]) if history is None else history
        self.rows.append(Row.make(vec, r, h))

    def copy(self):
        p = RatePolyhedron(self.vars, list(self.rows), self.nonneg)
        return p

    def with_fresh_histories(self):
        p = RatePolyhedron(self.vars, nonneg=self.nonneg)
        p.rows = [Row(r.coeffs, r.rhs, frozenset([i])) for i, r in enumerate(self.rows)]
        return p

    # -- bookkeeping -------------------------------------------------------

    def cleaned(self):
        """Drop trivial rows, duplicates, and dominated rows."""
        best = {}
        contradiction = None
        for r in self.rows:
            if r.is_contradiction():
                if contradiction is None or r.rhs < contradiction.rhs:
                    contradiction = r
                continue
            if r.is_trivial():
                continue
            cur = best.get(r.coeffs)
            if cur is None or r.rhs < cur.rhs or (r.rhs == cur.rhs and
                                                  len(r.history) < len(cur.history)):
                best[r.coeffs] = r
        rows = list(best.values())
        if contradiction is not None:
            p = RatePolyhedron(self.vars, nonneg=self.nonneg)
            p.rows = rows + [contradiction]
            return p
        if self.nonneg and 1 < len(rows) <= 3000:
            rows = _dominance_prune_nonneg(rows, len(self.vars))
        p = RatePolyhedron(self.vars, nonneg=self.nonneg)
        p.rows = rows
        return p

    def substitute(self, values) -> bool:
        """Exact check that a full assignment satisfies every row."""
        if len(values) != len(self.vars):
            raise DimensionMismatch(f"need {len(self.vars)} values")
        vals = [to_fraction(v) for v in values]
        return all(sum(c * v for c, v in zip(r.coeffs, vals)) <= r.rhs
                   for r in self.rows)

    def is_obviously_infeasible(self):
        return any(r.is_contradiction() for r in self.rows)

    # -- serialization -----------------------------------------------------

    def to_json_dict(self):
        return {
            "vars": list(self.vars),
            "rows": [{
                "coeffs": [str(c) for c in r.coeffs],
                "sense": "<=",
                "rhs": f"{r.rhs.numerator}/{r.rhs.denominator}",
            } for r in self.rows],
        }

    @staticmethod
    def from_json_dict(d):
        p = RatePolyhedron(tuple(d["vars"]))
        for i, row in enumerate(d["rows"]):
            coeffs = {v: Fraction(str(c)) for v, c in zip(p.vars, row["coeffs"])}
            p.add(coeffs, row.get("sense", "<="), Fraction(str(row["rhs"])),
                  history=frozenset([i]))
        return p

    def __repr__(self):
        return f"RatePolyhedron({len(self.vars)} vars, {len(self.rows)} rows)"


def _is_canonical_nonneg(row: Row) -> bool:
    """A row of the form -k x_i <= 0: the witness of x_i >= 0."""
    return (row.rhs == 0 and sum(1 for c in row.coeffs if c) == 1
            and all(c <= 0 for c in row.coeffs))


def _dominance_prune_nonneg(rows, n_vars):
    """With all variables nonnegative, row A is implied by row B when A's
    coefficients are <= B's coordinatewise and A's rhs >= B's rhs.

    Sound only while the nonnegativity witnesses stay in the system, so the
    rule requires a canonical -x_i <= 0 row per variable and never drops
    those rows.
    """
    protected = [_is_canonical_nonneg(r) for r in rows]
    covered = set()
    for r, p in zip(rows, protected):
        if p:
            covered.add(next(i for i, c in enumerate(r.coeffs) if c))
    if len(covered) < n_vars:
        return rows
    if any(abs(c) > 2 ** 31 for r in rows for c in r.coeffs):
        return rows  # keep the vectorized test exact
    mat = np.array([r.coeffs for r in rows], dtype=np.int64)
    rhs = [r.rhs for r in rows]
    order = np.argsort([sum(r.coeffs) for r in rows])  # likely dominators first
    alive = [True] * len(rows)
    for i in order:
        if not alive[i]:
            continue
        le = (mat <= mat[i]).all(axis=1)
        for k in np.flatnonzero(le):
            if k != i and alive[k] and not protected[k] and rhs[k] >= rhs[i]:
                alive[k] = False
    return [r for r, a in zip(rows, alive) if a]


# -- Fourier-Motzkin machinery ----------------------------------------------


def _combine(pos: Row, neg: Row, idx: int, var, use_history: bool) -> Row | None:
    """Pair an upper and a lower bound on variable idx.

    With use_history (generic systems), Imbert's criterion applies: a row
    combining more than |E|+1 originals is redundant.  It is switched off
    when domination pruning is active, since that pruning can reroute a
    facet's derivation through rows with larger histories.
    """
    hist = pos.history | neg.history
    evars = pos.evars | neg.evars | {var}
    if use_history and len(hist) > len(evars) + 1:
        return None  # Imbert: provably redundant
    a, b = pos.coeffs[idx], neg.coeffs[idx]  # a > 0, b < 0
    coeffs = [(-b) * p + a * n for p, n in zip(pos.coeffs, neg.coeffs)]
    rhs = (-b) * pos.rhs + a * neg.rhs
    del coeffs[idx]
    c, r = _normalize([Fraction(v) for v in coeffs], Fraction(rhs))
    return Row(c, r, hist, evars)


def _find_equality(rows, idx):
    """A pair of opposite rows pinning variable idx, if one exists."""
    seen = {}
    for r in rows:
        if r.coeffs[idx] == 0:
            continue
        key = r.coeffs
        neg_key = tuple(-c for c in key)
        if neg_key in seen and seen[neg_key][0] == -r.rhs:
            return seen[neg_key][1], r
        seen[key] = (r.rhs, r)
    return None


def _substitute_out(poly, idx, var, eq_pos: Row, eq_neg: Row):
    """Gaussian elimination of one equality-pinned variable."""
    out = RatePolyhedron(poly.vars[:idx] + poly.vars[idx + 1:], nonneg=poly.nonneg)
    e = eq_pos
    for r in poly.rows:
        if r is eq_pos or r is eq_neg:
            continue
        c = r.coeffs[idx]
        if c == 0:
            out.rows.append(r.drop_column(idx))
            continue
        # lam * e has -c at idx; the sign picks which direction of e is used
        lam = Fraction(-c, e.coeffs[idx])
        coeffs = [Fraction(rc) + lam * ec for rc, ec in zip(r.coeffs, e.coeffs)]
        rhs = r.rhs + lam * e.rhs
        del coeffs[idx]
        used = e if lam > 0 else eq_neg
        cc, rr = _normalize(coeffs, rhs)
        out.rows.append(Row(cc, rr, r.history | used.history,
                            r.evars | used.evars | {var}))
    return out.cleaned()


def _eliminate_index(poly: RatePolyhedron, idx: int) -> RatePolyhedron:
    var = poly.vars[idx]
    eq = _find_equality(poly.rows, idx)
    if eq is not None:
        return _substitute_out(poly, idx, var, eq[0], eq[1])
    zero, pos, neg = [], [], []
    for r in poly.rows:
        c = r.coeffs[idx]
        if c == 0:
            zero.append(r.drop_column(idx))
        elif c > 0:
            pos.append(r)
        else:
            neg.append(r)
    out = RatePolyhedron(poly.vars[:idx] + poly.vars[idx + 1:], nonneg=poly.nonneg)
    out.rows = zero
    for p, n in itertools.product(pos, neg):
        row = _combine(p, n, idx, var, use_history=not poly.nonneg)
        if row is not None:
            out.rows.append(row)
    return out.cleaned()


def fm_eliminate(poly: RatePolyhedron, var: str) -> RatePolyhedron:
    """Exact projection of the solution set onto the remaining variables."""
    if var not in poly.vars:
        raise DimensionMismatch(f"unknown variable {var}")
    return _eliminate_index(poly.with_fresh_histories(), poly.vars.index(var))


def _pick_variable(poly: RatePolyhedron, candidates):
    """Equality-pinned variables first, then smallest upper*lower product."""
    best, best_cost = None, None
    for v in candidates:
        idx = poly.vars.index(v)
        if _find_equality(poly.rows, idx) is not None:
            return v
        p = sum(1 for r in poly.rows if r.coeffs[idx] > 0)
        n = sum(1 for r in poly.rows if r.coeffs[idx] < 0)
        cost = (p * n - p - n, p + n)
        if best_cost is None or cost < best_cost:
            best, best_cost = v, cost
    return best


PRUNE_ROW_THRESHOLD = 400


def fm_eliminate_all(poly: RatePolyhedron, targets, record_stages=False):
    """Eliminate several variables with growth control.

    Past PRUNE_ROW_THRESHOLD rows an exact incremental redundancy sweep runs
    between steps (it preserves the solution set, so recorded stages remain
    valid for lifting).  Returns (projected polyhedron, stages), where stages
    is the list of (eliminated variable, system before that step) used for
    exact lifting, or None when record_stages is false.
    """
    work = poly.with_fresh_histories().cleaned()
    remaining = list(targets)
    stages = [] if record_stages else None
    while remaining:
        if len(work.rows) > PRUNE_ROW_THRESHOLD:
            work = prune_redundant(work, minimal=False)
        v = _pick_variable(work, remaining)
        remaining.remove(v)
        if record_stages:
            stages.append((v, work))
        work = _eliminate_index(work, work.vars.index(v))
    return work, stages


def lift_point(stages, final_vars, point) -> dict:
    """Exact feasible preimage of a point through recorded elimination stages.

    Walks the stages backwards; at each one the eliminated variable has a
    nonempty exact interval by the projection property, and the midpoint (or
    the finite end) is chosen.
    """
    values = {v: to_fraction(x) for v, x in zip(final_vars, point)}
    for var, system in reversed(stages):
        lo, hi = None, None
        ok = True
        idx = system.vars.index(var)
        for r in system.rows:
            c = r.coeffs[idx]
            rest = sum(ci * values[vi] for ci, vi in zip(r.coeffs, system.vars)
                       if vi != var and ci != 0)
            if c == 0:
                ok = ok and rest <= r.rhs
            elif c > 0:
                bound = (r.rhs - rest) / c
                hi = bound if hi is None else min(hi, bound)
            else:
                bound = (r.rhs - rest) / c
                lo = bound if lo is None else max(lo, bound)
        if not ok or (lo is not None and hi is not None and lo > hi):
            raise ValueError(f"point does not lift through {var}")
        if lo is None and hi is None:
            values[var] = Fraction(0)
        elif lo is None:
            values[var] = min(hi, Fraction(0))
        elif hi is None:
            values[var] = max(lo, Fraction(0))
        else:
            values[var] = (lo + hi) / 2
    return values


def fm_project_rates(poly: RatePolyhedron, record_stages=False):
    """Project an 18-coordinate system onto the three per-sender sums.

    Adds R_l = R_l0 + R_ll + R_lm + R_ln as paired inequalities, eliminates
    all 18 split coordinates, and reduces redundancy in the result.  Returns
    the (R1, R2, R3) polyhedron, plus the lifting stages when requested.
    """
    from .tables import RATE_COORDS  # local import to avoid cycles

    if set(RATE_COORDS) - set(poly.vars):
        raise DimensionMismatch("expected the 18 split-rate coordinates")
    sums = {1: ("R10", "R11", "R12", "R13"),
            2: ("R20", "R22", "R23", "R21"),
            3: ("R30", "R33", "R31", "R32")}
    ext = RatePolyhedron(poly.vars + ("R1", "R2", "R3"), nonneg=poly.nonneg)
    for r in poly.rows:
        ext.rows.append(Row(r.coeffs + (0, 0, 0), r.rhs, r.history))
    for l, parts in sums.items():
        for sense in ("<=", ">="):
            ext.add({f"R{l}": Fraction(1), **{p: Fraction(-1) for p in parts}},
                    sense, 0)
        ext.add({f"R{l}": Fraction(1)}, ">=", 0)  # implied; keeps the
        # nonnegativity witness explicit for the pruning rules
    proj, stages = fm_eliminate_all(ext, list(poly.vars), record_stages=record_stages)
    proj = prune_redundant(proj)
    if record_stages:
        return proj, stages
    return proj


# -- feasibility and optimization -------------------------------------------


def feasible(poly: RatePolyhedron) -> bool:
    """Exact feasibility by complete elimination."""
    work, _ = fm_eliminate_all(poly, list(poly.vars))
    return not work.is_obviously_infeasible()


def lp_feasible(poly: RatePolyhedron, point=None) -> bool:
    """Exact feasibility; with a point this is substitute-and-check."""
    if point is not None:
        return poly.substitute(point)
    return feasible(poly)


def fm_optimize(poly: RatePolyhedron, objective: dict):
    """Exact max of objective . x; returns a Fraction, None if unbounded,
    or raises ValueError on an infeasible system."""
    if "_t" in poly.vars:
        raise ValueError("variable name _t is reserved")
    ext = RatePolyhedron(poly.vars + ("_t",))
    for r in poly.rows:
        ext.rows.append(Row(r.coeffs + (0,), r.rhs, r.history))
    obj = {v: -to_fraction(c) for v, c in objective.items()}
    ext.add({"_t": Fraction(1), **obj}, "<=", 0)
    ext.add({"_t": Fraction(1), **obj}, ">=", 0)
    work, _ = fm_eliminate_all(ext, list(poly.vars))
    if work.is_obviously_infeasible():
        raise ValueError("infeasible system")
    upper = lower = None
    for r in work.rows:
        c = r.coeffs[0]
        if c > 0:
            b = r.rhs / c
            upper = b if upper is None else min(upper, b)
        elif c < 0:
            b = r.rhs / c
            lower = b if lower is None else max(lower, b)
    if lower is not None and upper is not None and lower > upper:
        raise ValueError("infeasible system")
    return upper


def _implied_by(rows, vars_, row: Row) -> bool:
    """Exact check that `rows` imply `row` (max of its lhs stays below rhs)."""
    trial = RatePolyhedron(vars_)
    trial.rows = list(rows)
    obj = {v: Fraction(c) for v, c in zip(vars_, row.coeffs)}
    try:
        m = fm_optimize(trial, obj)
    except ValueError:
        return False  # infeasible base: keep conservatively
    return m is not None and m <= row.rhs


def prune_redundant(poly: RatePolyhedron, minimal: bool = True) -> RatePolyhedron:
    """Exact redundancy removal.

    In up to four dimensions a bounded core polytope is grown row by row
    with incrementally maintained exact vertices; a row whose maximum over
    the core vertices stays below its rhs is implied by the core (which only
    grows), hence redundant.  Otherwise an elimination-based incremental
    pass is used.  With minimal=True a final sweep over the small survivor
    set removes rows implied by the rest, leaving no strictly redundant row.
    """
    poly = poly.cleaned()
    if poly.is_obviously_infeasible() or len(poly.rows) <= 1:
        return poly

    def tightness(r):
        scale = max(abs(c) for c in r.coeffs) or 1
        return (0 if _is_canonical_nonneg(r) else 1, r.rhs / scale)

    rows = sorted(poly.rows, key=tightness)
    keep = None
    if len(poly.vars) <= 4:
        keep = _prune_by_core_vertices(poly.vars, rows)
    if keep is None:
        keep = []
        for r in rows:
            if keep and _implied_by(keep, poly.vars, r):
                continue
            keep.append(r)
    if minimal and len(keep) <= 60:
        final = list(keep)
        for r in list(final):
            if len(final) == 1:
                break
            others = [x for x in final if x is not r]
            if _implied_by(others, poly.vars, r):
                final = others
        keep = final
    out = RatePolyhedron(poly.vars, nonneg=poly.nonneg)
    out.rows = keep
    return out


def _prune_by_core_vertices(vars_, rows):
    """Low-dimensional redundancy pass; None when no bounded seed exists.

    The seed core takes, per coordinate, the tightest upper and lower bound
    rows, making it bounded, so its exact maximum over any direction is
    attained on its vertex set, which is maintained incrementally.
    """
    d = len(vars_)
    core = []
    for i in range(d):
        for sign in (1, -1):
            cands = [r for r in rows if sign * r.coeffs[i] > 0]
            if not cands:
                return None  # unbounded: checker would be unsound
            core.append(min(cands, key=lambda r: r.rhs / (sign * r.coeffs[i])))
    core = list(dict.fromkeys(core))
    verts = enumerate_vertices(_make_poly(vars_, core))

    def vmax(row):
        if not verts:
            return None  # empty core implies everything
        return max(sum(c * x for c, x in zip(row.coeffs, v)) for v in verts)

    keep = list(core)
    for r in rows:
        if r in keep:
            continue
        m = vmax(r)
        if m is not None and m > r.rhs:
            # genuinely cuts the core: add it and update vertices exactly
            inside = [v for v in verts if sum(c * x for c, x in zip(r.coeffs, v)) <= r.rhs]
            on_plane = []
            sys_rows = keep + [r]
            for combo in itertools.combinations(keep, d - 1):
                sol = _solve_square([list(r.coeffs)] + [list(c.coeffs) for c in combo],
                                    [r.rhs] + [c.rhs for c in combo])
                if sol is None:
                    continue
                if all(sum(c * x for c, x in zip(row.coeffs, sol)) <= row.rhs
                       for row in sys_rows):
                    on_plane.append(tuple(sol))
            verts = list(dict.fromkeys(inside + on_plane))
            keep.append(r)
    return keep


def _make_poly(vars_, rows):
    p = RatePolyhedron(vars_)
    p.rows = list(rows)
    return p


def enumerate_vertices(poly: RatePolyhedron):
    """Exact vertex enumeration by basis inspection (small dimensions only)."""
    d = len(poly.vars)
    rows = [r for r in poly.rows if any(c != 0 for c in r.coeffs)]
    verts = []
    seen = set()
    for combo in itertools.combinations(rows, d):
        sol = _solve_square([list(r.coeffs) for r in combo],
                            [r.rhs for r in combo])
        if sol is None:
            continue
        key = tuple(sol)
        if key in seen:
            continue
        if poly.substitute(sol):
            seen.add(key)
            verts.append(tuple(sol))
    return verts


def _solve_square(mat, rhs):
    """Exact solution of a d x d system; None when singular."""
    d = len(mat)
    a = [[Fraction(v) for v in row] + [Fraction(r)] for row, r in zip(mat, rhs)]
    for col in range(d):
        piv = next((i for i in range(col, d) if a[i][col] != 0), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        inv = a[col][col]
        a[col] = [v / inv for v in a[col]]
        for i in range(d):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [v - f * w for v, w in zip(a[i], a[col])]
    return [a[i][d] for i in range(d)]


# -- 3-D hulls ----------------------------------------------------------------


@dataclass
class Hull3:
    """Convex hull of a 3-D point cloud; dim < 3 flags a degenerate hull."""

    vertices: np.ndarray          # (m, 3) float
    facets: tuple                 # triangles as vertex-index triples
    halfspaces: np.ndarray        # rows (a1, a2, a3, b): a . x <= b
    dim: int

    def contains(self, point, tol=1e-9) -> bool:
        p = np.asarray(point, dtype=float)
        if self.halfspaces.size:
            if (self.halfspaces[:, :3] @ p > self.halfspaces[:, 3] + tol).any():
                return False
        if self.dim == 3:
            return True
        # degenerate hulls: also require membership of the affine hull
        base = self.vertices[0]
        if len(self.vertices) > 1:
            rel = self.vertices - base
            _, _, vt = np.linalg.svd(rel, full_matrices=True)
            normals = vt[self.dim:]
        else:
            normals = np.eye(3)
        return bool(np.all(np.abs(normals @ (p - base)) <= max(tol, 1e-7)))


def hull3(points) -> Hull3:
    """Hull of >= 1 points; coplanar/collinear inputs give a flagged
    lower-dimensional hull whose halfspaces still bound the set."""
    from scipy.spatial import ConvexHull, QhullError

    pts = np.array([[float(x) for x in p] for p in points], dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 3:
        raise DimensionMismatch("need 3-D points")
    uniq = np.unique(np.round(pts, 12), axis=0)
    center = uniq.mean(axis=0)
    rel = uniq - center
    rank = int(np.linalg.matrix_rank(rel, tol=1e-9)) if len(uniq) > 1 else 0

    if rank == 3:
        try:
            h = ConvexHull(uniq)
            hs = np.column_stack([h.equations[:, :3], -h.equations[:, 3]])
            return Hull3(vertices=uniq[h.vertices], facets=tuple(map(tuple, h.simplices)),
                         halfspaces=hs, dim=3)
        except QhullError:
            rank = 2  # numerically flat; fall through

    if rank == 0:
        return Hull3(vertices=uniq[:1], facets=(), halfspaces=np.zeros((0, 4)), dim=0)
    if rank == 1:
        t = rel @ rel[np.argmax(np.linalg.norm(rel, axis=1))]
        order = np.argsort(t)
        v = np.array([uniq[order[0]], uniq[order[-1]]])
        return Hull3(vertices=v, facets=(), halfspaces=np.zeros((0, 4)), dim=1)

    # rank 2: hull inside the best-fit plane
    _, _, vt = np.linalg.svd(rel, full_matrices=True)
    basis = vt[:2]
    flat = rel @ basis.T
    try:
        h2 = ConvexHull(flat)
        idx = h2.vertices
        halfspaces = []
        for eq in h2.equations:  # a1 u + a2 v + b <= 0 in plane coordinates
            a3 = eq[:2] @ basis
            b = -eq[2] + a3 @ center
            halfspaces.append([*a3, b])
        return Hull3(vertices=uniq[idx], facets=(), halfspaces=np.array(halfspaces), dim=2)
    except QhullError:
        order = np.argsort(flat[:, 0])
        v = np.array([uniq[order[0]], uniq[order[-1]]])
        return Hull3(vertices=v, facets=(), halfspaces=np.zeros((0, 4)), dim=1)
