"""Shorthand tables for the per-receiver decoding conditions.

Everything is written once for receiver 1 and transported to the other
receivers by digit substitution: receiver 2 uses the cyclic replacement
1->2->3->1 and receiver 3 uses 1->3->2->1.  Under these maps the first
interferer ("j" role) at receiver l is sender l+1 and the second ("k" role)
is sender l+2, cyclically.

Rate coordinates (18, fixed order):  per sender l the common rate Rl0, the
private rate Rll, the two per-receiver split rates Rlk, and the auxiliary
multicoding rates Rtlk >= Rlk used for bin selection.
"""

from __future__ import annotations

RATE_COORDS = (
    "R10", "R11", "R12", "R13", "Rt12", "Rt13",
    "R20", "R22", "R23", "R21", "Rt23", "Rt21",
    "R30", "R33", "R31", "R32", "Rt31", "Rt32",
)
COORD_INDEX = {c: i for i, c in enumerate(RATE_COORDS)}

# receiver permutations: template digit -> actual digit
PERMUTATIONS = {
    1: {1: 1, 2: 2, 3: 3},
    2: {1: 2, 2: 3, 3: 1},
    3: {1: 3, 2: 1, 3: 2},
}

# Own-signal rows for receiver 1 (template form).
# i -> (rate atoms, known own layers, penalty flag).  When the flag is set,
# the right-hand side carries the extra multicoding term
# I(X12; X13 | U1, Q).
OWN_ROWS = {
    1: (("R11",), ("U1", "X12", "X13"), False),
    2: (("Rt12", "R11"), ("U1", "X13"), True),
    3: (("Rt13", "R11"), ("U1", "X12"), True),
    4: (("Rt12", "Rt13", "R11"), ("U1",), True),
    5: (("R10", "Rt12", "Rt13", "R11"), (), True),
}

# Interference-level sets for the first interferer (template sender 2 at
# receiver 1): level 1 = codeword known, level 2 = cloud center known,
# level 3 = nothing known.
J_LEVEL_SETS = {1: ("X2",), 2: ("U2",), 3: ()}

# (j, j') -> (decoded rate atoms, conditioning set) for the first
# interferer.  j' = 1 keeps level j; larger j' decodes further layers.
J_TABLE = {
    (1, 1): ((), ("X2",)),
    (2, 1): ((), ("U2",)),
    (2, 2): (("Rt21",), ("X2",)),
    (3, 1): ((), ()),
    (3, 2): (("R20",), ("U2",)),
    (3, 3): (("R20", "Rt21"), ("X2",)),
}

# Second interferer (template sender 3 at receiver 1): same structure.
K_LEVEL_SETS = {1: ("X3",), 2: ("U3",), 3: ()}
K_TABLE = {
    (1, 1): ((), ("X3",)),
    (2, 1): ((), ("U3",)),
    (2, 2): (("Rt31",), ("X3",)),
    (3, 1): ((), ()),
    (3, 2): (("R30",), ("U3",)),
    (3, 3): (("R30", "Rt31"), ("X3",)),
}


def choices(index: int) -> int:
    """Number of saturation alternatives available at interference level j/k."""
    return index


def rename(symbol: str, receiver: int) -> str:
    """Transport a template symbol (rate atom or variable) to a receiver.

    Digits in the symbol are sender indices and are mapped through the
    receiver's permutation: e.g. "Rt21" at receiver 2 becomes "Rt32",
    "X12" becomes "X23", "Q" is fixed.
    """
    perm = PERMUTATIONS[receiver]
    head = symbol.rstrip("0123456789")
    digits = symbol[len(head):]
    if head in ("R", "Rt") and len(digits) == 2 and digits[1] == "0":
        # common-rate coordinate Rl0: only the sender digit moves
        return f"{head}{perm[int(digits[0])]}0"
    return head + "".join(str(perm[int(d)]) for d in digits)


def rename_all(symbols, receiver: int) -> tuple[str, ...]:
    return tuple(rename(s, receiver) for s in symbols)


def table_row(which: int, index):
    """Literal template table rows (receiver-1 form).

    which=1: index i in 1..5    -> (rate atoms, own conditioning, penalty flag)
    which=2: index (j, j')      -> (rate atoms, conditioning set)
    which=3: index (k, k')      -> (rate atoms, conditioning set)
    """
    try:
        if which == 1:
            return OWN_ROWS[index]
        if which == 2:
            return J_TABLE[index]
        if which == 3:
            return K_TABLE[index]
    except KeyError:
        raise IndexError(f"table {which} has no row {index}") from None
    raise IndexError(f"no table {which}")
