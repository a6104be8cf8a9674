"""Product input distributions p(q) * prod_l p(u_l, x_l | q).

The product structure is structural: the three per-sender factors are stored
separately, so independence across senders given Q holds by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .channel import SENDERS, ChannelSpec
from .errors import DimensionMismatch
from .rationals import parse_prob

ROW_SUM_TOL = 1e-12


@dataclass(frozen=True)
class InputPmf:
    """p_q over the time-sharing symbol and, per sender, p(u_l, x_l | q).

    tables[l-1][q][u][x] is the conditional mass; rows (per q) sum to one.
    Entries are Fractions (exact) or floats.
    """

    p_q: tuple
    tables: tuple  # three nested tuples, shape (|Q|, |U_l|, |X_l|)
    ux_identity: bool = field(default=False)

    @property
    def q_size(self) -> int:
        return len(self.p_q)

    @property
    def u_sizes(self) -> tuple[int, int, int]:
        return tuple(len(self.tables[l - 1][0]) for l in SENDERS)

    @property
    def x_sizes(self) -> tuple[int, int, int]:
        return tuple(len(self.tables[l - 1][0][0]) for l in SENDERS)

    @property
    def is_rational(self) -> bool:
        if not all(isinstance(p, (Fraction, int)) for p in self.p_q):
            return False
        return all(isinstance(p, (Fraction, int))
                   for t in self.tables for qt in t for row in qt for p in row)

    def validate(self):
        tot = sum(self.p_q)
        if isinstance(tot, (Fraction, int)):
            ok = tot == 1
        else:
            ok = abs(tot - 1.0) <= ROW_SUM_TOL
        if not ok:
            raise ValueError(f"p_q sums to {tot}")
        for l in SENDERS:
            for q, qt in enumerate(self.tables[l - 1]):
                s = sum(p for row in qt for p in row)
                if isinstance(s, (Fraction, int)):
                    ok = s == 1
                else:
                    ok = abs(s - 1.0) <= ROW_SUM_TOL
                if not ok:
                    raise ValueError(f"p(u{l},x{l}|q={q}) sums to {s}")
        return self


def _normalize_weights(weights):
    t = sum(weights)
    return tuple(Fraction(w, t) for w in weights)


def uniform_ux_identity(channel: ChannelSpec, q_size: int = 1) -> InputPmf:
    """U_l = X_l with X_l uniform; the treat-interference-as-noise shape."""
    tables = []
    for l in SENDERS:
        nx = channel.x_sizes[l - 1]
        qt = tuple(tuple(tuple(Fraction(1, nx) if u == x else Fraction(0)
                               for x in range(nx)) for u in range(nx))
                   for _ in range(q_size))
        tables.append(qt)
    p_q = tuple(Fraction(1, q_size) for _ in range(q_size))
    return InputPmf(p_q=p_q, tables=tuple(tables), ux_identity=True).validate()


def ux_identity_pmf(channel: ChannelSpec, px, q_size: int = 1) -> InputPmf:
    """U_l = X_l with an arbitrary per-sender marginal px[l-1][q][x]."""
    tables = []
    for l in SENDERS:
        nx = channel.x_sizes[l - 1]
        qt = []
        for q in range(q_size):
            marg = [parse_prob(p) for p in px[l - 1][q]]
            if len(marg) != nx:
                raise DimensionMismatch(f"px[{l}] has {len(marg)} entries, need {nx}")
            qt.append(tuple(tuple(marg[x] if u == x else 0 * marg[x] for x in range(nx))
                            for u in range(nx)))
        tables.append(tuple(qt))
    p_q = tuple(Fraction(1, q_size) for _ in range(q_size))
    return InputPmf(p_q=p_q, tables=tuple(tables), ux_identity=True).validate()


def random_input_pmf(rng, channel: ChannelSpec, u_sizes=None, q_size: int = 1,
                     rational: bool = True, max_weight: int = 9,
                     ux_identity: bool = False) -> InputPmf:
    """Random product pmf; rational mode draws small integer weights."""
    if ux_identity:
        u_sizes = channel.x_sizes
    elif u_sizes is None:
        u_sizes = tuple(int(rng.integers(2, 3)) for _ in SENDERS)

    def rand_vector(n):
        if rational:
            w = [int(rng.integers(0, max_weight + 1)) for _ in range(n)]
            if sum(w) == 0:
                w[int(rng.integers(0, n))] = 1
            return _normalize_weights(w)
        v = rng.dirichlet(np.ones(n))
        return tuple(float(x) for x in v)

    p_q = rand_vector(q_size)
    tables = []
    for l in SENDERS:
        nu, nx = u_sizes[l - 1], channel.x_sizes[l - 1]
        qt = []
        for _ in range(q_size):
            if ux_identity:
                marg = rand_vector(nx)
                qt.append(tuple(tuple(marg[x] if u == x else marg[x] * 0 for x in range(nx))
                                for u in range(nx)))
            else:
                flat = rand_vector(nu * nx)
                qt.append(tuple(tuple(flat[u * nx + x] for x in range(nx)) for u in range(nu)))
        tables.append(tuple(qt))
    return InputPmf(p_q=p_q, tables=tuple(tables), ux_identity=ux_identity).validate()
