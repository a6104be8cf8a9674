"""Numerical verification of the information identities behind the system.

Three families are checked on a joint, per receiver l with interferers m, n:

  (1) For every condition index (i, j, k) and alternative (j', k'):
      I(X1,X2,X3; Y_l | c_i, c_j, c_k, Q) - I(S_l; S'_l | c_j', c_k', Q)
        = I(X_l, c_j', c_k' ; Y_l | c_i, c_j, c_k, Q),
      i.e. the min-form and the alternative-form constants agree.
  (2) H(S'_l | U_m, U_n, S_l) = H(S'_l | S_l)      (noise acts on S_l only)
  (3) H(Y_l | U_l, X_lm, U_n, X1, X2, X3) = H(S'_l | S_l)
      (receiver map bijective once the direct component is fixed)

On rational joints the same identities are certified exactly through formal
log-combinations.
"""

from __future__ import annotations

from dataclasses import dataclass

from .channel import interferers
from .constraints import MutualInfo
from .joint import FullJoint, canon_vars
from .tables import J_LEVEL_SETS, J_TABLE, K_LEVEL_SETS, K_TABLE, OWN_ROWS, choices, rename_all


@dataclass(frozen=True)
class IdentityReport:
    receiver: int
    max_discrepancy: float
    worst: str
    n_checked: int
    exact: bool | None  # None when the joint has no exact path


def _expr_mi(joint, mi: MutualInfo):
    return mi.expr(joint)


def verify_identity_chain(joint: FullJoint, l: int, exact: bool | None = None) -> IdentityReport:
    """Evaluate all identity instances at receiver l; report the worst error.

    exact=None runs the exact certification whenever the joint is rational;
    exact=False skips it; exact=True requires it.
    """
    if exact is None:
        exact = joint.is_rational
    if exact and not joint.is_rational:
        raise ValueError("exact verification requires a rational joint")

    m, n = interferers(l)
    worst = 0.0
    worst_label = ""
    checked = 0
    exact_ok = True if exact else None

    def record(delta, label, lhs_expr=None, rhs_expr=None):
        nonlocal worst, worst_label, checked, exact_ok
        checked += 1
        if abs(delta) > worst:
            worst, worst_label = abs(delta), label
        if exact and lhs_expr is not None:
            if not (lhs_expr - rhs_expr).is_zero():
                exact_ok = False

    s, sp, y, x_all = f"S{l}", f"S{l}p", f"Y{l}", ("X1", "X2", "X3")

    for i in range(1, 6):
        own = rename_all(OWN_ROWS[i][1], l)
        for j in range(1, 4):
            cj = rename_all(J_LEVEL_SETS[j], l)
            for k in range(1, 4):
                ck = rename_all(K_LEVEL_SETS[k], l)
                fixed = canon_vars((*own, *cj, *ck, "Q"))
                big = MutualInfo(a=x_all, b=(y,), cond=fixed)
                big_v = big.evaluate(joint)
                for jp in range(1, choices(j) + 1):
                    cjp = rename_all(J_TABLE[(j, jp)][1], l)
                    for kp in range(1, choices(k) + 1):
                        ckp = rename_all(K_TABLE[(k, kp)][1], l)
                        sat = MutualInfo(a=(s,), b=(sp,), cond=(*cjp, *ckp, "Q"))
                        alt = MutualInfo(a=(f"X{l}", *cjp, *ckp), b=(y,), cond=fixed)
                        delta = big_v - sat.evaluate(joint) - alt.evaluate(joint)
                        label = (f"form-equivalence[l={l},i={i},j={j},k={k},"
                                 f"j'={jp},k'={kp}]")
                        if exact:
                            record(delta, label,
                                   _expr_mi(joint, big) - _expr_mi(joint, sat),
                                   _expr_mi(joint, alt))
                        else:
                            record(delta, label)

    # noise keeps no memory of the senders' cloud centers
    lhs = joint.cond_entropy((sp,), canon_vars((f"U{m}", f"U{n}", s)))
    rhs = joint.cond_entropy((sp,), (s,))
    if exact:
        record(lhs - rhs, f"noise-markov[l={l}]",
               joint.entropy_expr((sp,), canon_vars((f"U{m}", f"U{n}", s))),
               joint.entropy_expr((sp,), (s,)))
    else:
        record(lhs - rhs, f"noise-markov[l={l}]")

    # observation uncertainty given everything known equals the noise residue
    cset = canon_vars((f"U{l}", f"X{l}{m}", f"U{n}", "X1", "X2", "X3"))
    lhs = joint.cond_entropy((y,), cset)
    if exact:
        record(lhs - rhs, f"receiver-bijectivity[l={l}]",
               joint.entropy_expr((y,), cset), joint.entropy_expr((sp,), (s,)))
    else:
        record(lhs - rhs, f"receiver-bijectivity[l={l}]")

    return IdentityReport(receiver=l, max_discrepancy=worst, worst=worst_label,
                          n_checked=checked, exact=exact_ok)
