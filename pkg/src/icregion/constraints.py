"""Generation of the 18-dimensional constraint system for each receiver.

A receiver system consists of the five multicoding (excess-rate) constraints
of its transmitter plus 45 indexed decoding conditions.  Condition (i, j, k)
states that the own-signal rate term r_i plus, for SOME saturation
alternative (j', k'), the decoded interference rates and the residual
saturation information I(S_l; S'_l | c_j', c_k', Q), stays below
I(X1,X2,X3; Y_l | c_i, c_j, c_k, Q) plus the multicoding bonus.

Alternatives are kept as an explicit list (never pre-minimized) so that both
the pointwise-minimum membership test and the polyhedral union backend can
consume the same objects.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from .channel import interferers
from .joint import FullJoint, canon_vars
from .tables import (J_LEVEL_SETS, J_TABLE, K_LEVEL_SETS, K_TABLE, OWN_ROWS,
                     RATE_COORDS, choices, rename, rename_all)


def _label_set(names) -> str:
    return ",".join(names) if names else "-"


@dataclass(frozen=True)
class MutualInfo:
    """Symbolic I(A ; B | C); overlapping names are dropped from A and B."""

    a: tuple
    b: tuple
    cond: tuple

    def _effective(self):
        c = canon_vars(self.cond)
        a = tuple(v for v in canon_vars(self.a) if v not in c)
        b = tuple(v for v in canon_vars(self.b) if v not in c and v not in a)
        return a, b, c

    def evaluate(self, joint: FullJoint) -> float:
        a, b, c = self._effective()
        if not a or not b:
            return 0.0
        return joint.cond_mutual_info(a, b, c)

    def expr(self, joint: FullJoint):
        a, b, c = self._effective()
        return joint.mi_expr(a, b, c)

    def label(self) -> str:
        return f"I({_label_set(self.a)};{_label_set(self.b)}|{_label_set(self.cond)})"


@dataclass(frozen=True)
class CondEntropy:
    """Symbolic H(A | C)."""

    a: tuple
    cond: tuple

    def evaluate(self, joint: FullJoint) -> float:
        c = canon_vars(self.cond)
        a = tuple(v for v in canon_vars(self.a) if v not in c)
        if not a:
            return 0.0
        return joint.cond_entropy(a, c)

    def label(self) -> str:
        return f"H({_label_set(self.a)}|{_label_set(self.cond)})"


@dataclass(frozen=True)
class LinearIneq:
    """sum(coeffs * rates)  <sense>  rhs, with rational coefficients.

    rhs is a number once evaluated, or a symbolic constant (MutualInfo).
    """

    coeffs: dict
    sense: str  # "<=" or ">="
    rhs: object
    label: str = ""

    def evaluate(self, joint: FullJoint) -> "LinearIneq":
        rhs = self.rhs
        if hasattr(rhs, "evaluate"):
            rhs = rhs.evaluate(joint)
        return replace(self, rhs=rhs)

    def satisfied(self, rates: dict, tol: float = 1e-9) -> bool:
        lhs = sum(float(c) * rates.get(v, 0.0) for v, c in self.coeffs.items())
        rhs = float(self.rhs)
        return lhs <= rhs + tol if self.sense == "<=" else lhs >= rhs - tol

    def slack(self, rates: dict) -> float:
        """Nonnegative when satisfied."""
        lhs = sum(float(c) * rates.get(v, 0.0) for v, c in self.coeffs.items())
        rhs = float(self.rhs)
        return rhs - lhs if self.sense == "<=" else lhs - rhs


@dataclass(frozen=True)
class Alternative:
    """One saturation alternative (j', k') of a decoding condition."""

    jp: int
    kp: int
    rate: dict            # decoded interference rate atoms, coefficient 1
    j_set: tuple          # conditioning contributed by the first interferer
    k_set: tuple
    mi: object            # MutualInfo, or None in split-saturation mode
    mi_label: str
    mi_value: float | None = None

    def lhs(self, base_rate: dict, rates: dict) -> float:
        r = sum(rates.get(v, 0.0) for v in base_rate)
        r += sum(rates.get(v, 0.0) for v in self.rate)
        return r + self.mi_value


@dataclass(frozen=True)
class MinCondition:
    """Decoding condition (i, j, k) at one receiver with all alternatives."""

    receiver: int
    i: int
    j: int
    k: int
    base_rate: dict       # own-signal rate atoms (coefficient 1)
    own_cond: tuple
    penalty: bool         # rhs carries the multicoding bonus term
    j_cond: tuple
    k_cond: tuple
    alternatives: tuple
    rhs_mi: object
    rhs_value: float | None = None   # I(...) + bonus, once evaluated

    def min_lhs(self, rates: dict) -> tuple[float, "Alternative"]:
        best, best_alt = None, None
        for alt in self.alternatives:
            v = alt.lhs(self.base_rate, rates)
            if best is None or v < best - 1e-15:
                best, best_alt = v, alt
        return best, best_alt

    def satisfied(self, rates: dict, tol: float = 1e-9) -> bool:
        lhs, _ = self.min_lhs(rates)
        return lhs <= self.rhs_value + tol

    def key(self):
        return (self.receiver, self.i, self.j, self.k)

    def label(self) -> str:
        return f"cond[l={self.receiver},i={self.i},j={self.j},k={self.k}]"


@dataclass(frozen=True)
class ReceiverSystem:
    """Transmitter-l multicoding rows plus receiver-l decoding conditions."""

    receiver: int
    marton: tuple         # five evaluated LinearIneq
    conditions: tuple     # 45 MinCondition, ordered by (i, j, k)
    penalty_value: float

    def condition(self, i: int, j: int, k: int) -> MinCondition:
        for c in self.conditions:
            if (c.i, c.j, c.k) == (i, j, k):
                return c
        raise KeyError((i, j, k))


def marton_penalty(l: int) -> MutualInfo:
    """The multicoding price I(X_lm ; X_ln | U_l, Q) for transmitter l."""
    return MutualInfo(a=(rename("X12", l),), b=(rename("X13", l),),
                      cond=(rename("U1", l), "Q"))


def marton_system(l: int) -> list[LinearIneq]:
    """The five excess-rate constraints for transmitter l (symbolic rhs).

    With e_m = Rt_lm - R_lm and e_n = Rt_ln - R_ln and P the multicoding
    price: e_m + e_n >= P, e_m + e_n/2 <= P, e_m/2 + e_n <= P, e_m >= 0,
    e_n >= 0.
    """
    rm, rn = rename("R12", l), rename("R13", l)
    tm, tn = rename("Rt12", l), rename("Rt13", l)
    penalty = marton_penalty(l)
    half = Fraction(1, 2)
    one = Fraction(1)
    return [
        LinearIneq({tm: one, rm: -one, tn: one, rn: -one}, ">=", penalty,
                   label=f"excess-sum[{l}]"),
        LinearIneq({tm: one, rm: -one, tn: half, rn: -half}, "<=", penalty,
                   label=f"excess-cap-a[{l}]"),
        LinearIneq({tm: half, rm: -half, tn: one, rn: -one}, "<=", penalty,
                   label=f"excess-cap-b[{l}]"),
        LinearIneq({tm: one, rm: -one}, ">=", Fraction(0), label=f"excess-nonneg-a[{l}]"),
        LinearIneq({tn: one, rn: -one}, ">=", Fraction(0), label=f"excess-nonneg-b[{l}]"),
    ]


def _build_condition(joint, l, i, j, k, saturation) -> MinCondition:
    m, n = interferers(l)
    own_atoms, own_cond_t, penalty = OWN_ROWS[i]
    base_rate = {rename(a, l): Fraction(1) for a in own_atoms}
    own_cond = rename_all(own_cond_t, l)
    j_cond = rename_all(J_LEVEL_SETS[j], l)
    k_cond = rename_all(K_LEVEL_SETS[k], l)

    alts = []
    for kp in range(1, choices(k) + 1):
        k_rate_t, k_set_t = K_TABLE[(k, kp)]
        for jp in range(1, choices(j) + 1):
            j_rate_t, j_set_t = J_TABLE[(j, jp)]
            rate = {rename(a, l): Fraction(1) for a in (*j_rate_t, *k_rate_t)}
            j_set = rename_all(j_set_t, l)
            k_set = rename_all(k_set_t, l)
            if saturation == "joint":
                mi = MutualInfo(a=(f"S{l}",), b=(f"S{l}p",),
                                cond=(*j_set, *k_set, "Q"))
                value = mi.evaluate(joint)
                label = mi.label()
            else:  # split: per-interferer entropies (the weaker book-keeping)
                hj = CondEntropy(a=(f"X{m}{l}",), cond=(*j_set, "Q"))
                hk = CondEntropy(a=(f"X{n}{l}",), cond=(*k_set, "Q"))
                mi = None
                value = hj.evaluate(joint) + hk.evaluate(joint)
                label = f"{hj.label()}+{hk.label()}"
            alts.append(Alternative(jp=jp, kp=kp, rate=rate, j_set=j_set,
                                    k_set=k_set, mi=mi, mi_label=label,
                                    mi_value=value))

    rhs_mi = MutualInfo(a=("X1", "X2", "X3"), b=(f"Y{l}",),
                        cond=(*own_cond, *j_cond, *k_cond, "Q"))
    rhs_value = rhs_mi.evaluate(joint)
    if penalty:
        rhs_value += marton_penalty(l).evaluate(joint)
    return MinCondition(receiver=l, i=i, j=j, k=k, base_rate=base_rate,
                        own_cond=own_cond, penalty=penalty, j_cond=j_cond,
                        k_cond=k_cond, alternatives=tuple(alts),
                        rhs_mi=rhs_mi, rhs_value=rhs_value)


def receiver_system(joint: FullJoint, l: int, saturation: str = "joint") -> ReceiverSystem:
    """All 45 evaluated decoding conditions and 5 multicoding rows.

    saturation="joint" uses the residual information of the combined
    interference signal; "split" books each interferer separately (a weaker
    variant kept for comparisons, meaningful on noiseless kernels).
    """
    if saturation not in ("joint", "split"):
        raise ValueError(f"unknown saturation mode {saturation!r}")
    marton = tuple(ineq.evaluate(joint) for ineq in marton_system(l))
    conditions = tuple(_build_condition(joint, l, i, j, k, saturation)
                       for i in range(1, 6)
                       for j in range(1, 4)
                       for k in range(1, 4))
    return ReceiverSystem(receiver=l, marton=marton, conditions=conditions,
                          penalty_value=marton_penalty(l).evaluate(joint))


def all_systems(joint: FullJoint, saturation: str = "joint") -> tuple[ReceiverSystem, ...]:
    """Receiver systems for l = 1, 2, 3, cached on the joint."""
    cache = getattr(joint, "_systems_cache", None)
    if cache is None:
        cache = {}
        joint._systems_cache = cache
    if saturation not in cache:
        cache[saturation] = tuple(receiver_system(joint, l, saturation)
                                  for l in (1, 2, 3))
    return cache[saturation]


def to_alternative_form(cond: MinCondition, joint: FullJoint) -> list[LinearIneq]:
    """Rewrite each alternative as a plain rate inequality.

    Moving the saturation term to the right-hand side turns alternative
    (j', k') into  r_i + r_j' + r_k' <= I(X_l, c_j', c_k' ; Y_l | c_i, c_j,
    c_k, Q) + bonus, which is how the treat-interference-as-noise baseline
    falls out.
    """
    l = cond.receiver
    out = []
    bonus = marton_penalty(l).evaluate(joint) if cond.penalty else 0.0
    fixed_cond = (*cond.own_cond, *cond.j_cond, *cond.k_cond, "Q")
    for alt in cond.alternatives:
        coeffs = dict(cond.base_rate)
        for v, c in alt.rate.items():
            coeffs[v] = coeffs.get(v, Fraction(0)) + c
        mi = MutualInfo(a=(f"X{l}", *alt.j_set, *alt.k_set), b=(f"Y{l}",),
                        cond=fixed_cond)
        out.append(LinearIneq(
            coeffs=coeffs, sense="<=", rhs=mi.evaluate(joint) + bonus,
            label=f"{cond.label()}@(j'={alt.jp},k'={alt.kp})"))
    return out


def condition_rows(cond: MinCondition) -> list[tuple[dict, float, object]]:
    """(coeffs, rhs, alternative) rows in the min-form: selecting one row
    per condition yields a polyhedral member of the union."""
    rows = []
    for alt in cond.alternatives:
        coeffs = dict(cond.base_rate)
        for v, c in alt.rate.items():
            coeffs[v] = coeffs.get(v, Fraction(0)) + c
        rows.append((coeffs, cond.rhs_value - alt.mi_value, alt))
    return rows


def rates_array_to_dict(values) -> dict:
    return {c: float(v) for c, v in zip(RATE_COORDS, values)}
