"""Joint distributions induced by a product input pmf and a channel.

The joint is stored over the free coordinates only:

    (Q, U1, X1, U2, X2, U3, X3, S1p, S2p, S3p)

Deterministic coordinates (components X_lk, combined signals S_l and
observations Y_l) are evaluated through the channel lookup tables on demand,
so memory scales with the product of the free alphabet sizes.

Two arithmetic paths coexist.  The float path evaluates entropies in bits
directly.  When both the pmf and the channel are rational, an exact path
stores integer cell weights over one common denominator; entropies become
formal sums  sum_i c_i * log2(a_i)  with integer coefficients and rational
arguments, and identities between them are decided exactly.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .channel import SENDERS, ValidatedChannel, interferers
from .errors import DimensionMismatch, OverlappingSets, UnknownVariable
from .pmf import InputPmf
from .rationals import common_denominator

FREE_VARS = ("Q", "U1", "X1", "U2", "X2", "U3", "X3", "S1p", "S2p", "S3p")

VAR_ORDER = (
    "Q", "U1", "X1", "U2", "X2", "U3", "X3",
    "X11", "X12", "X13", "X21", "X22", "X23", "X31", "X32", "X33",
    "S1", "S2", "S3", "S1p", "S2p", "S3p", "Y1", "Y2", "Y3",
)
_VAR_INDEX = {v: i for i, v in enumerate(VAR_ORDER)}

MASS_TOL = 1e-12

# is_zero gives up beyond this estimated bit size for the exact product check
_PRODUCT_BIT_BUDGET = 4_000_000


def canon_vars(names) -> tuple[str, ...]:
    """Deduplicate and sort variable names into the canonical order."""
    if isinstance(names, str):
        names = (names,)
    seen = set()
    out = []
    for n in names:
        if n not in _VAR_INDEX:
            raise UnknownVariable(n)
        if n not in seen:
            seen.add(n)
            out.append(n)
    return tuple(sorted(out, key=_VAR_INDEX.__getitem__))


class LogComb:
    """Formal sum  (1/denom) * sum_a coeff[a] * log2(a)  with exact terms.

    Arguments a are positive Fractions, coefficients are integers.  Equal
    quantities cancel termwise after merging by argument value, which is how
    exact identity checks avoid evaluating any logarithm.
    """

    __slots__ = ("terms", "denom")

    def __init__(self, terms=None, denom=1):
        self.terms: dict[Fraction, int] = dict(terms or {})
        self.denom = denom

    def add_term(self, arg: Fraction, coeff: int):
        if coeff == 0 or arg == 1:
            return
        c = self.terms.get(arg, 0) + coeff
        if c:
            self.terms[arg] = c
        else:
            self.terms.pop(arg, None)

    def _combine(self, other, sign):
        if self.denom != other.denom:
            raise ValueError("cannot combine formal sums over different denominators")
        out = LogComb(self.terms, self.denom)
        out.terms = dict(self.terms)
        for a, c in other.terms.items():
            out.add_term(a, sign * c)
        return out

    def __add__(self, other):
        return self._combine(other, +1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def value(self) -> float:
        """Float evaluation in bits."""
        return sum(c * math.log2(a) for a, c in self.terms.items()) / self.denom

    def is_zero(self) -> bool:
        """Exact zero test: termwise cancellation, then a product-of-powers
        certificate (sum c*log a = 0  iff  prod a^c = 1) on any residue."""
        residue = [(a, c) for a, c in self.terms.items() if c != 0 and a != 1]
        if not residue:
            return True
        if abs(sum(c * math.log2(a) for a, c in residue)) > 1e-6:
            return False
        bits = sum(abs(c) * (a.numerator.bit_length() + a.denominator.bit_length())
                   for a, c in residue)
        if bits > _PRODUCT_BIT_BUDGET:
            raise RuntimeError("exact zero test exceeds size budget")
        num = den = 1
        for a, c in residue:
            if c > 0:
                num *= a.numerator ** c
                den *= a.denominator ** c
            else:
                num *= a.denominator ** (-c)
                den *= a.numerator ** (-c)
        return num == den


class FullJoint:
    """Distribution over the free coordinates with lazy deterministic columns."""

    def __init__(self, pmf: InputPmf, channel: ValidatedChannel):
        if tuple(pmf.x_sizes) != tuple(channel.x_sizes):
            raise DimensionMismatch(
                f"pmf inputs {pmf.x_sizes} vs channel inputs {channel.x_sizes}")
        self.pmf = pmf
        self.channel = channel

        spec = channel.spec
        self.sizes: dict[str, int] = {"Q": pmf.q_size}
        for l in SENDERS:
            self.sizes[f"U{l}"] = pmf.u_sizes[l - 1]
            self.sizes[f"X{l}"] = pmf.x_sizes[l - 1]
            self.sizes[f"S{l}"] = spec.s_sizes[l - 1]
            self.sizes[f"S{l}p"] = spec.sp_sizes[l - 1]
            self.sizes[f"Y{l}"] = spec.y_sizes[l - 1]
            for k in SENDERS:
                self.sizes[f"X{l}{k}"] = spec.comp_sizes[l - 1][k - 1]

        free_dims = [self.sizes[v] for v in FREE_VARS]
        self.n_cells = int(np.prod(free_dims))
        grids = np.meshgrid(*[np.arange(d, dtype=np.int32) for d in free_dims],
                            indexing="ij")
        self._cols: dict[str, np.ndarray] = {
            v: g.reshape(-1) for v, g in zip(FREE_VARS, grids)
        }

        self.probs = self._build_float_probs()
        total = float(self.probs.sum())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"joint mass {total} != 1")

        self.weights = None
        self.denom = None
        if pmf.is_rational and spec.is_rational:
            self._build_int_weights()

        self._marg_float: dict[tuple, np.ndarray] = {}
        self._marg_int: dict[tuple, np.ndarray] = {}
        self._entropy_cache: dict[tuple, float] = {}
        self._expr_cache: dict[tuple, LogComb] = {}

    # -- columns ---------------------------------------------------------

    def column(self, name: str) -> np.ndarray:
        """Value of a variable in every cell; deterministic ones are derived."""
        col = self._cols.get(name)
        if col is not None:
            return col
        if name not in _VAR_INDEX:
            raise UnknownVariable(name)
        ch = self.channel
        if len(name) == 3 and name.startswith("X"):
            l, k = int(name[1]), int(name[2])
            col = ch.g_arr[l - 1][k - 1][self.column(f"X{l}")]
        elif name.startswith("S"):
            l = int(name[1])
            m, n = interferers(l)
            col = ch.h_arr[l - 1][self.column(f"X{m}{l}"), self.column(f"X{n}{l}")]
        elif name.startswith("Y"):
            l = int(name[1])
            col = ch.f_arr[l - 1][self.column(f"X{l}{l}"), self.column(f"S{l}p")]
        else:
            raise UnknownVariable(name)
        self._cols[name] = col
        return col

    def _build_float_probs(self) -> np.ndarray:
        pmf, ch = self.pmf, self.channel
        q = self.column("Q")
        p = np.array([float(x) for x in pmf.p_q])[q]
        for l in SENDERS:
            tab = np.array([[[float(x) for x in row] for row in qt]
                            for qt in pmf.tables[l - 1]])
            p = p * tab[q, self.column(f"U{l}"), self.column(f"X{l}")]
        for l in SENDERS:
            p = p * ch.noise_float[l - 1][self.column(f"S{l}"), self.column(f"S{l}p")]
        return p

    def _build_int_weights(self):
        pmf, spec = self.pmf, self.channel.spec
        factors = []  # (numerator array indexed like column tuple, denominator)

        dq = common_denominator(pmf.p_q)
        nq = np.array([int(Fraction(x) * dq) for x in pmf.p_q], dtype=object)
        factors.append((nq[self.column("Q")], dq))

        for l in SENDERS:
            flat = [Fraction(x) for qt in pmf.tables[l - 1] for row in qt for x in row]
            d = common_denominator(flat)
            tab = np.array(
                [[[int(Fraction(x) * d) for x in row] for row in qt]
                 for qt in pmf.tables[l - 1]], dtype=object)
            factors.append((tab[self.column("Q"), self.column(f"U{l}"),
                                self.column(f"X{l}")], d))

        for l in SENDERS:
            flat = [Fraction(x) for row in spec.noise_kernel(l) for x in row]
            d = common_denominator(flat)
            mat = np.array([[int(Fraction(x) * d) for x in row]
                            for row in spec.noise_kernel(l)], dtype=object)
            factors.append((mat[self.column(f"S{l}"), self.column(f"S{l}p")], d))

        denom = 1
        for _, d in factors:
            denom *= d
        if denom < 2 ** 62:
            w = np.ones(self.n_cells, dtype=np.int64)
            for arr, _ in factors:
                w = w * arr.astype(np.int64)
        else:  # exact fallback for huge denominators
            w = np.ones(self.n_cells, dtype=object)
            for arr, _ in factors:
                w = w * arr
        self.weights = w
        self.denom = denom

    @property
    def is_rational(self) -> bool:
        return self.weights is not None

    # -- marginals -------------------------------------------------------

    def _key_and_dims(self, names):
        dims = [self.sizes[v] for v in names]
        cols = [self.column(v) for v in names]
        if not names:
            return np.zeros(self.n_cells, dtype=np.int64), [1]
        key = np.ravel_multi_index(cols, dims)
        return key, dims

    def marginal(self, names) -> np.ndarray:
        """Float marginal over the canonicalized variable set, flattened."""
        names = canon_vars(names)
        vec = self._marg_float.get(names)
        if vec is None:
            key, dims = self._key_and_dims(names)
            vec = np.bincount(key, weights=self.probs,
                              minlength=int(np.prod(dims)))
            self._marg_float[names] = vec
        return vec

    def marginal_int(self, names) -> np.ndarray:
        """Exact integer-weight marginal (over the common denominator)."""
        if self.weights is None:
            raise ValueError("joint has no exact path (non-rational inputs)")
        names = canon_vars(names)
        vec = self._marg_int.get(names)
        if vec is None:
            key, dims = self._key_and_dims(names)
            size = int(np.prod(dims))
            if self.weights.dtype == object:
                vec = np.zeros(size, dtype=object)
                for k, w in zip(key, self.weights):
                    vec[k] += w
            else:
                vec = np.zeros(size, dtype=np.int64)
                np.add.at(vec, key, self.weights)
            self._marg_int[names] = vec
        return vec

    # -- information measures (float path) --------------------------------

    def _plain_entropy(self, names) -> float:
        names = canon_vars(names)
        h = self._entropy_cache.get(names)
        if h is None:
            p = self.marginal(names)
            p = p[p > 0]
            h = float(-(p * np.log2(p)).sum()) if p.size else 0.0
            self._entropy_cache[names] = h
        return h

    def cond_entropy(self, a, c=()) -> float:
        """H(A | C) in bits; 0 log 0 = 0, zero-mass conditions contribute 0."""
        a, c = canon_vars(a), canon_vars(c)
        if set(a) & set(c):
            raise OverlappingSets(f"A={a} overlaps C={c}")
        return self._plain_entropy(a + c) - self._plain_entropy(c)

    def cond_mutual_info(self, a, b, c=()) -> float:
        """I(A ; B | C) = H(A|C) - H(A|B,C) in bits."""
        a, b, c = canon_vars(a), canon_vars(b), canon_vars(c)
        for s, t in ((a, b), (a, c), (b, c)):
            if set(s) & set(t):
                raise OverlappingSets(f"sets overlap: {s} vs {t}")
        return (self._plain_entropy(a + c) + self._plain_entropy(b + c)
                - self._plain_entropy(c) - self._plain_entropy(a + b + c))

    # -- information measures (exact path) --------------------------------

    def entropy_expr(self, a, c=()) -> LogComb:
        """H(A | C) as a formal log-combination with integer coefficients."""
        a, c = canon_vars(a), canon_vars(c)
        if set(a) & set(c):
            raise OverlappingSets(f"A={a} overlaps C={c}")
        if not a:
            return LogComb(denom=self.denom)
        key = (a, c)
        expr = self._expr_cache.get(key)
        if expr is not None:
            return expr
        names = canon_vars(a + c)
        vec = self.marginal_int(names)
        dims = [self.sizes[v] for v in names]
        c_axes = tuple(i for i, v in enumerate(names) if v not in a)
        arr = vec.reshape(dims or [1])
        a_axes = tuple(i for i in range(len(names)) if i not in c_axes)
        group = arr.sum(axis=a_axes, keepdims=True) if a_axes else arr
        group = np.broadcast_to(group, arr.shape).reshape(-1)
        flat = arr.reshape(-1)
        expr = LogComb(denom=self.denom)
        for w, g in zip(flat.tolist(), group.tolist()):
            if w:
                expr.add_term(Fraction(int(g), int(w)), int(w))
        self._expr_cache[key] = expr
        return expr

    def mi_expr(self, a, b, c=()) -> LogComb:
        """I(A ; B | C) as a formal log-combination.

        Expanded on the second argument, H(B|C) - H(B|A,C): with B the
        channel-output side, the terms of equal identities then cancel by
        value instead of needing a huge product certificate.
        """
        a, b, c = canon_vars(a), canon_vars(b), canon_vars(c)
        return self.entropy_expr(b, c) - self.entropy_expr(b, canon_vars(a + c))


def build_full_joint(input_pmf: InputPmf, channel: ValidatedChannel) -> FullJoint:
    """Assemble the joint distribution; see the module docstring."""
    return FullJoint(input_pmf, channel)


def cond_entropy(joint: FullJoint, a, c=()) -> float:
    return joint.cond_entropy(a, c)


def cond_mutual_info(joint: FullJoint, a, b, c=()) -> float:
    return joint.cond_mutual_info(a, b, c)
