"""Independent brute-force reference implementations for property tests."""

import itertools
from typing import Dict, Optional, Sequence

from multicyl.curves import CurveConfiguration


def brute_force_angle_feasible(entries) -> bool:
    """Decide angle feasibility by enumerating generic configurations.

    Every constraint is an open condition (a strict half-turn interval
    or an inequality), so a satisfiable sign table always has solutions
    with all angles and antipodes pairwise distinct, and equal-angle
    rules never decide feasibility.  A generic configuration is just a
    slope order plus, per curve, which end of its slope line the curve
    points along: with slopes ranked r_c and half-turn bits s_c, the
    crossing sign of a against b comes out as
    (-1)^(s_a + s_b) * sign(r_b - r_a).  Enumerating the (N-1)! * 2^(N-1)
    combinations with the first curve fixed at rank 0, bit 0 is
    exhaustive.
    """
    m = len(entries)
    n = len(entries[0]) if entries else 0
    total = m + n
    if total == 0:
        return True
    pairs = [
        (i, m + j, entries[i][j])
        for i in range(m)
        for j in range(n)
        if entries[i][j] != 0
    ]
    for ranks_rest in itertools.permutations(range(1, total)):
        ranks = (0,) + ranks_rest
        for bits in itertools.product((0, 1), repeat=total - 1):
            s = (0,) + bits
            ok = True
            for a, b, want in pairs:
                got = 1 if ranks[b] > ranks[a] else -1
                if (s[a] + s[b]) % 2:
                    got = -got
                if got != want:
                    ok = False
                    break
            if ok:
                return True
    return False


def brute_force_orientable(
    config: CurveConfiguration, families: Sequence[str]
) -> Optional[Dict[int, int]]:
    """Try all 2^n orientations; return the first that makes every family
    pair cross with a uniform sign, or None."""
    member = {}
    for f in dict.fromkeys(families):
        for c in config.curves_of(f):
            member[c.id] = f
    ids = sorted(member)
    xs = [
        x
        for x in config.crossings
        if x.curve_a in member and x.curve_b in member
    ]
    for bits in itertools.product([1, -1], repeat=len(ids)):
        eps = dict(zip(ids, bits))
        per_pair = {}
        good = True
        for x in xs:
            pair = tuple(sorted((member[x.curve_a], member[x.curve_b])))
            s = x.sign * eps[x.curve_a] * eps[x.curve_b]
            if per_pair.setdefault(pair, s) != s:
                good = False
                break
        if good:
            out = {c.id: 1 for c in config.curves}
            out.update(eps)
            return out
    return None
