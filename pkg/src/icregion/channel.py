"""Finite-alphabet model of the three-pair interference channel.

Each sender l holds an input alphabet {0..|X_l|-1}.  Link maps g_lk carry
sender l's symbol to the component X_lk seen at receiver k.  At receiver l
the two interfering components are merged by a combiner h_l into the
combined interference symbol S_l, a memoryless noise kernel p(s'|s)
produces S'_l, and the receiver map f_l merges the direct component X_ll
with S'_l into the observation Y_l.  Both h_l and f_l must be injective in
each argument: fixing either input makes them one-to-one.

Receiver l's interferers are listed in cyclic order: the first argument of
h_l comes from sender l+1, the second from sender l+2 (indices mod 3).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .errors import ChannelValidationError, NonInjective, NonStochastic, TableShape
from .rationals import parse_prob

ROW_SUM_TOL = 1e-12

SENDERS = (1, 2, 3)


def interferers(l: int) -> tuple[int, int]:
    """The two senders interfering at receiver l, in combiner-argument order."""
    return (l % 3 + 1, (l + 1) % 3 + 1)


@dataclass(frozen=True)
class ChannelSpec:
    """Lookup-table description of one channel instance.

    All alphabets are {0..n-1}; codomain sizes are declared explicitly, so
    maps need not be surjective (unused symbols simply get zero probability).

    x_sizes     -- |X_l| per sender, length 3
    comp_sizes  -- comp_sizes[l-1][k-1] = |X_lk| (codomain of g_lk)
    s_sizes     -- |S_l| per receiver (codomain of h_l)
    sp_sizes    -- |S'_l| per receiver (noise output alphabet)
    y_sizes     -- |Y_l| per receiver (codomain of f_l)
    g           -- g[l-1][k-1] is a tuple of length |X_l| with values < |X_lk|
    h           -- h[l-1][a][b], a over X_{ml}, b over X_{nl}, (m,n)=interferers(l)
    noise       -- noise[l-1][s][s'], row-stochastic; Fraction or float entries
    f           -- f[l-1][x_ll][s'], values < |Y_l|
    """

    x_sizes: tuple[int, int, int]
    comp_sizes: tuple[tuple[int, int, int], ...]
    s_sizes: tuple[int, int, int]
    sp_sizes: tuple[int, int, int]
    y_sizes: tuple[int, int, int]
    g: tuple
    h: tuple
    noise: tuple
    f: tuple

    def g_map(self, l: int, k: int):
        return self.g[l - 1][k - 1]

    def h_map(self, l: int):
        return self.h[l - 1]

    def f_map(self, l: int):
        return self.f[l - 1]

    def noise_kernel(self, l: int):
        return self.noise[l - 1]

    @property
    def is_rational(self) -> bool:
        return all(isinstance(p, (Fraction, int))
                   for mat in self.noise for row in mat for p in row)

    @property
    def is_noiseless(self) -> bool:
        """True when every kernel is an identity matrix (S'_l = S_l)."""
        for l in SENDERS:
            mat = self.noise[l - 1]
            if self.s_sizes[l - 1] != self.sp_sizes[l - 1]:
                return False
            for s, row in enumerate(mat):
                for sp, p in enumerate(row):
                    if p != (1 if s == sp else 0):
                        return False
        return True


def _injectivity_violations(name, table, n_rows, n_cols):
    out = []
    # fix first argument, vary second
    for a in range(n_rows):
        seen = {}
        for b in range(n_cols):
            v = table[a][b]
            if v in seen:
                out.append(NonInjective(name, 0, a, (seen[v], b), v))
            else:
                seen[v] = b
    # fix second argument, vary first
    for b in range(n_cols):
        seen = {}
        for a in range(n_rows):
            v = table[a][b]
            if v in seen:
                out.append(NonInjective(name, 1, b, (seen[v], a), v))
            else:
                seen[v] = a
    return out


def channel_violations(spec: ChannelSpec) -> list:
    """All structural violations of a channel spec (empty list = valid)."""
    bad = []
    for l in SENDERS:
        for k in SENDERS:
            gm = spec.g_map(l, k)
            if len(gm) != spec.x_sizes[l - 1]:
                bad.append(TableShape(f"g{l}{k}", f"expected {spec.x_sizes[l-1]} entries, got {len(gm)}"))
                continue
            cod = spec.comp_sizes[l - 1][k - 1]
            for x, v in enumerate(gm):
                if not 0 <= v < cod:
                    bad.append(TableShape(f"g{l}{k}", f"value {v} at input {x} outside codomain {cod}"))

    for l in SENDERS:
        m, n = interferers(l)
        rows, cols = spec.comp_sizes[m - 1][l - 1], spec.comp_sizes[n - 1][l - 1]
        tab = spec.h_map(l)
        if len(tab) != rows or any(len(r) != cols for r in tab):
            bad.append(TableShape(f"h{l}", f"expected shape {rows}x{cols}"))
            continue
        cod = spec.s_sizes[l - 1]
        oob = [TableShape(f"h{l}", f"value {tab[a][b]} outside codomain {cod}")
               for a in range(rows) for b in range(cols) if not 0 <= tab[a][b] < cod]
        if oob:
            bad.extend(oob)
            continue
        bad.extend(_injectivity_violations(f"h{l}", tab, rows, cols))

    for l in SENDERS:
        mat = spec.noise_kernel(l)
        if len(mat) != spec.s_sizes[l - 1] or any(len(r) != spec.sp_sizes[l - 1] for r in mat):
            bad.append(TableShape(f"noise{l}", f"expected shape {spec.s_sizes[l-1]}x{spec.sp_sizes[l-1]}"))
            continue
        for s, row in enumerate(mat):
            if any(p < 0 or p > 1 for p in row):
                bad.append(TableShape(f"noise{l}", f"row {s} has entries outside [0,1]"))
            total = sum(row)
            if isinstance(total, (Fraction, int)):
                if total != 1:
                    bad.append(NonStochastic(l, s, total))
            elif abs(total - 1.0) > ROW_SUM_TOL:
                bad.append(NonStochastic(l, s, total))

    for l in SENDERS:
        rows, cols = spec.comp_sizes[l - 1][l - 1], spec.sp_sizes[l - 1]
        tab = spec.f_map(l)
        if len(tab) != rows or any(len(r) != cols for r in tab):
            bad.append(TableShape(f"f{l}", f"expected shape {rows}x{cols}"))
            continue
        cod = spec.y_sizes[l - 1]
        oob = [TableShape(f"f{l}", f"value {tab[a][b]} outside codomain {cod}")
               for a in range(rows) for b in range(cols) if not 0 <= tab[a][b] < cod]
        if oob:
            bad.extend(oob)
            continue
        bad.extend(_injectivity_violations(f"f{l}", tab, rows, cols))
    return bad


class ValidatedChannel:
    """A ChannelSpec that passed validation, with array views for fast lookups.

    Immutable after construction; safe to share across threads.
    """

    def __init__(self, spec: ChannelSpec):
        bad = channel_violations(spec)
        if bad:
            raise ChannelValidationError(bad)
        self.spec = spec
        self.g_arr = [[np.asarray(spec.g_map(l, k), dtype=np.int64) for k in SENDERS]
                      for l in SENDERS]
        self.h_arr = [np.asarray(spec.h_map(l), dtype=np.int64) for l in SENDERS]
        self.f_arr = [np.asarray(spec.f_map(l), dtype=np.int64) for l in SENDERS]
        self.noise_float = [np.array([[float(p) for p in row] for row in spec.noise_kernel(l)])
                            for l in SENDERS]

    @property
    def x_sizes(self):
        return self.spec.x_sizes

    def __repr__(self):
        return f"ValidatedChannel(x_sizes={self.spec.x_sizes})"


def validate_channel(spec: ChannelSpec) -> ValidatedChannel:
    """Validate totality, row-stochasticity and per-argument injectivity.

    Raises ChannelValidationError carrying the violation records on failure.
    """
    return ValidatedChannel(spec)


def build_modulo_example(q: int, noise_flip=0) -> ChannelSpec:
    """Canonical test instance: all alphabets Z_q, identity links, mod-q adders.

    The noise kernel is the q-ary symmetric channel: a symbol survives with
    probability 1-noise_flip and flips to each wrong symbol with probability
    noise_flip/(q-1).  Integer/Fraction/str flips stay exact; float flips are
    interpreted by their shortest decimal representation (0.1 means 1/10).
    """
    if q < 2:
        raise ValueError("q must be >= 2")
    if isinstance(noise_flip, float):
        flip = Fraction(repr(noise_flip))
    else:
        flip = parse_prob(noise_flip)
    if not 0 <= flip <= 1:
        raise ValueError(f"noise_flip {noise_flip} outside [0, 1]")

    ident = tuple(range(q))
    add = tuple(tuple((a + b) % q for b in range(q)) for a in range(q))
    off = flip / (q - 1)
    kernel = tuple(tuple(1 - flip if s == sp else off for sp in range(q)) for s in range(q))
    three = lambda v: (v, v, v)
    return ChannelSpec(
        x_sizes=(q, q, q),
        comp_sizes=tuple(three(q) for _ in SENDERS),
        s_sizes=three(q),
        sp_sizes=three(q),
        y_sizes=three(q),
        g=tuple(three(ident) for _ in SENDERS),
        h=three(add),
        noise=three(kernel),
        f=three(add),
    )


def degenerate_third_pair(spec: ChannelSpec) -> ChannelSpec:
    """Silence the third pair: |X_3| = 1 and all components touching it collapse.

    Sender 3 transmits only its symbol 0, and the components directed at the
    (absent) third receiver become singletons, so X_3, X_31, X_32, X_13, X_23,
    S_3, S'_3 and Y_3 are all constant.  Combiners at receivers 1 and 2 keep
    their surviving argument (the column/row selected by sender 3's symbol 0),
    so they remain injective there.  Idempotent.
    """
    const3 = (0,)

    # sender 3: single symbol, all links constant
    g = [list(spec.g[i]) for i in range(3)]
    comp = [list(spec.comp_sizes[i]) for i in range(3)]
    x31 = spec.g_map(3, 1)[0]
    x32 = spec.g_map(3, 2)[0]
    g[2] = [const3, const3, const3]
    comp[2] = [1, 1, 1]
    # links into receiver 3 collapse too
    g[0][2] = tuple(0 for _ in range(spec.x_sizes[0]))
    comp[0][2] = 1
    g[1][2] = tuple(0 for _ in range(spec.x_sizes[1]))
    comp[1][2] = 1

    # receiver 1: keep the column picked by sender 3's constant component
    h1 = tuple((row[x31],) for row in spec.h_map(1))
    # receiver 2: sender 3 feeds the first combiner argument
    h2 = (tuple(spec.h_map(2)[x32]),)
    h3 = ((0,),)

    noise = (spec.noise[0], spec.noise[1], ((Fraction(1),),))
    f = (spec.f[0], spec.f[1], ((0,),))

    return replace(
        spec,
        x_sizes=(spec.x_sizes[0], spec.x_sizes[1], 1),
        comp_sizes=tuple(tuple(c) for c in comp),
        s_sizes=(spec.s_sizes[0], spec.s_sizes[1], 1),
        sp_sizes=(spec.sp_sizes[0], spec.sp_sizes[1], 1),
        y_sizes=(spec.y_sizes[0], spec.y_sizes[1], 1),
        g=tuple(tuple(row) for row in g),
        h=(h1, h2, h3),
        noise=noise,
        f=f,
    )


def _random_injective_table(rng, n_rows, n_cols, cod):
    """Random table injective in each argument: modular Latin rectangle,
    relabeled through a random injection into the declared codomain."""
    base = max(n_rows, n_cols)
    if cod < base:
        raise ValueError("codomain too small for injectivity")
    row_emb = rng.permutation(base)[:n_rows]
    col_emb = rng.permutation(base)[:n_cols]
    relabel = rng.permutation(cod)[:base]
    return tuple(tuple(int(relabel[(row_emb[a] + col_emb[b]) % base])
                       for b in range(n_cols)) for a in range(n_rows))


def _random_stochastic_row(rng, n, rational, max_weight=9):
    if rational:
        w = [int(rng.integers(0, max_weight + 1)) for _ in range(n)]
        if sum(w) == 0:
            w[int(rng.integers(0, n))] = 1
        t = sum(w)
        return tuple(Fraction(x, t) for x in w)
    p = rng.dirichlet(np.ones(n))
    return tuple(float(x) for x in p)


def random_channel(rng, max_size: int = 3, rational: bool = True,
                   noiseless: bool = False) -> ChannelSpec:
    """Random valid instance; used by randomized test suites.

    Component codomains may exceed the map images (unused symbols allowed).
    """
    x_sizes = tuple(int(rng.integers(2, max_size + 1)) for _ in SENDERS)
    comp_sizes = [[0] * 3 for _ in SENDERS]
    g = [[None] * 3 for _ in SENDERS]
    for l in SENDERS:
        for k in SENDERS:
            cod = int(rng.integers(2, max_size + 1))
            comp_sizes[l - 1][k - 1] = cod
            g[l - 1][k - 1] = tuple(int(rng.integers(0, cod)) for _ in range(x_sizes[l - 1]))

    s_sizes, h = [], []
    for l in SENDERS:
        m, n = interferers(l)
        rows, cols = comp_sizes[m - 1][l - 1], comp_sizes[n - 1][l - 1]
        size = max(rows, cols) + int(rng.integers(0, 2))
        s_sizes.append(size)
        h.append(_random_injective_table(rng, rows, cols, size))

    sp_sizes, noise = [], []
    for l in SENDERS:
        if noiseless:
            sp = s_sizes[l - 1]
            kern = tuple(tuple(Fraction(1) if s == t else Fraction(0) for t in range(sp))
                         for s in range(s_sizes[l - 1]))
        else:
            sp = int(rng.integers(2, max_size + 1))
            kern = tuple(_random_stochastic_row(rng, sp, rational) for _ in range(s_sizes[l - 1]))
        sp_sizes.append(sp)
        noise.append(kern)

    y_sizes, f = [], []
    for l in SENDERS:
        rows, cols = comp_sizes[l - 1][l - 1], sp_sizes[l - 1]
        size = max(rows, cols) + int(rng.integers(0, 2))
        y_sizes.append(size)
        f.append(_random_injective_table(rng, rows, cols, size))

    return ChannelSpec(
        x_sizes=x_sizes,
        comp_sizes=tuple(tuple(r) for r in comp_sizes),
        s_sizes=tuple(s_sizes),
        sp_sizes=tuple(sp_sizes),
        y_sizes=tuple(y_sizes),
        g=tuple(tuple(r) for r in g),
        h=tuple(h),
        noise=tuple(noise),
        f=tuple(f),
    )
