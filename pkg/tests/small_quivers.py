"""Exhaustive corpus of small quivers for the toric and saturation suites."""

import itertools

from mdsquiver.presentation import Collection, build_presentation
from mdsquiver.quiver import Arrow, Quiver

# labels are exponent vectors in two variables; the grading is not used by the suites
PLANE = build_presentation(["u", "v"], [[1, 1]], [], [1])
COLLECTIONS = {2: Collection(((0,), (1,))), 3: Collection(((0,), (1,), (2,)))}
LABELS = [(a, b) for a in range(3) for b in range(3)]


def _slots(n):
    return [(t, h, lab) for t in range(n) for h in range(t + 1, n) for lab in LABELS]


def corpus(max_arrows=4):
    """All quivers on 2 or 3 vertices with at most ``max_arrows`` arrows, label exponents
    at most 2, distinct labels on parallel arrows and every vertex but 0 entered."""
    out = []
    for n, coll in COLLECTIONS.items():
        slots = _slots(n)
        for k in range(n - 1, max_arrows + 1):
            for combo in itertools.combinations(slots, k):
                if {h for _, h, _ in combo} != set(range(1, n)):
                    continue
                raw = sorted(combo, key=lambda s: (s[0], s[1], tuple(-e for e in s[2])))
                arrows = tuple(Arrow(i, t, h, lab) for i, (t, h, lab) in enumerate(raw))
                out.append(Quiver(PLANE, coll, arrows))
    return out
