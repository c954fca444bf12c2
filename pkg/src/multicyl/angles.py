"""Angle assignments compatible with a table of crossing signs.

When two curve families are both made of constant-slope curves, every
crossing constrains the pair of directions: a positive crossing forces
the second curve's angle into the open half-turn counterclockwise of
the first's, a negative crossing into the other open half-turn.
Whether angles satisfying a whole sign table exist depends only on the
circular weak order of the angles together with their antipodes, so an
exhaustive search over those orders decides feasibility exactly.  A
feasible table proves nothing by itself; an infeasible one rules out
realizing both families as parallel-core cylinder systems at once.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from .curves import ConfigError, CurveConfiguration, validate

__all__ = [
    "SignMatrix",
    "AngleOrder",
    "Feasible",
    "Infeasible",
    "NotPairwiseCoherent",
    "angle_feasible",
    "angle_order_holds",
    "necessary_filter",
]

_TOKENS = {"+": 1, "-": -1, "0": 0}
_GLYPHS = {1: "+", -1: "-", 0: "0"}


@dataclass(frozen=True)
class SignMatrix:
    """Crossing signs of one family (rows) against another (columns)."""

    entries: Tuple[Tuple[int, ...], ...]
    row_ids: Tuple[int, ...] = ()
    col_ids: Tuple[int, ...] = ()

    def __init__(self, entries, row_ids=(), col_ids=()):
        rows = tuple(tuple(int(e) for e in row) for row in entries)
        widths = {len(r) for r in rows}
        if len(widths) > 1:
            raise ConfigError("sign matrix rows have unequal lengths")
        for row in rows:
            for e in row:
                if e not in (-1, 0, 1):
                    raise ConfigError(f"sign entry {e} not in -1/0/+1")
        row_ids = tuple(int(i) for i in row_ids)
        col_ids = tuple(int(j) for j in col_ids)
        if row_ids and len(row_ids) != len(rows):
            raise ConfigError("one row id per row expected")
        if col_ids and rows and len(col_ids) != len(rows[0]):
            raise ConfigError("one column id per column expected")
        object.__setattr__(self, "entries", rows)
        object.__setattr__(self, "row_ids", row_ids)
        object.__setattr__(self, "col_ids", col_ids)

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.entries), len(self.entries[0]) if self.entries else 0

    def labels(self) -> Tuple[str, ...]:
        """Row curves then column curves, as short printable names."""
        m, n = self.shape
        rid = self.row_ids or tuple(range(1, m + 1))
        cid = self.col_ids or tuple(range(1, n + 1))
        return tuple(f"a{i}" for i in rid) + tuple(f"b{j}" for j in cid)

    @classmethod
    def from_tokens(cls, lines: Iterable[str]) -> "SignMatrix":
        rows = []
        for line in lines:
            toks = line.split()
            if not toks:
                continue
            try:
                rows.append([_TOKENS[t] for t in toks])
            except KeyError as bad:
                raise ConfigError(f"sign token {bad.args[0]!r} not in + - 0")
        if not rows:
            raise ConfigError("empty sign matrix")
        return cls(rows)

    def to_tokens(self) -> str:
        return "\n".join(" ".join(_GLYPHS[e] for e in row) for row in self.entries)

    def to_doc(self) -> dict:
        doc = {"rows": [list(r) for r in self.entries]}
        if self.row_ids:
            doc["row_ids"] = list(self.row_ids)
        if self.col_ids:
            doc["col_ids"] = list(self.col_ids)
        return doc

    @classmethod
    def from_doc(cls, doc: Mapping) -> "SignMatrix":
        return cls(
            doc["rows"],
            tuple(doc.get("row_ids", ())),
            tuple(doc.get("col_ids", ())),
        )


@dataclass(frozen=True)
class AngleOrder:
    """A circular weak order of curve angles, with rational witnesses.

    ``blocks`` lists groups of equal-angle curves counterclockwise from
    the pinned first curve; ``angles`` maps each curve to its block's
    representative angle in turns; ``merged`` maps each curve to the
    first member of its block.
    """

    blocks: Tuple[Tuple[str, ...], ...]
    angles: Mapping[str, Fraction]
    merged: Mapping[str, str]

    def to_doc(self) -> dict:
        return {
            "blocks": [list(b) for b in self.blocks],
            "angles": {c: str(q) for c, q in sorted(self.angles.items())},
        }

    @classmethod
    def from_doc(cls, doc: Mapping) -> "AngleOrder":
        try:
            blocks = tuple(tuple(str(c) for c in b) for b in doc["blocks"])
            angles = {str(c): Fraction(q) for c, q in doc["angles"].items()}
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"malformed angle order document: {exc}") from exc
        merged = {c: b[0] for b in blocks for c in b}
        return cls(blocks, angles, merged)


@dataclass(frozen=True)
class Feasible:
    order: AngleOrder

    def to_doc(self) -> dict:
        return {"feasible": True, "order": self.order.to_doc()}


@dataclass(frozen=True)
class Infeasible:
    """Search exhausted; ``trace`` is the deepest partial assignment."""

    trace: Tuple[Tuple[str, Fraction], ...]
    explored: int

    def to_doc(self) -> dict:
        return {
            "feasible": False,
            "deepest": [[c, str(q)] for c, q in self.trace],
            "explored": self.explored,
        }


@dataclass(frozen=True)
class NotPairwiseCoherent:
    """Two crossings of one curve pair with opposite signs."""

    curve_a: int
    curve_b: int
    crossings: Tuple[int, int]

    def to_doc(self) -> dict:
        return {
            "pairwise_coherent": False,
            "pair": [self.curve_a, self.curve_b],
            "crossings": list(self.crossings),
        }


def _sign_of(matrix: SignMatrix, i: int, j: int) -> int:
    return matrix.entries[i][j]


def _mergeable_tables(matrix: SignMatrix) -> tuple[list, list]:
    """Which same-family curves may share an angle.

    Sharing an angle puts both curves on one directed foliation, so any
    curve of the other family must cross the two of them identically;
    only identical sign rows (or columns) survive that.
    """
    m, n = matrix.shape
    rows_ok = [[matrix.entries[i] == matrix.entries[j] for j in range(m)] for i in range(m)]
    cols = [tuple(matrix.entries[i][j] for i in range(m)) for j in range(n)]
    cols_ok = [[cols[i] == cols[j] for j in range(n)] for i in range(n)]
    return rows_ok, cols_ok


def angle_feasible(matrix: SignMatrix, *, bound: int = 6):
    """Search circular weak orders for one satisfying every sign.

    Angles are searched on the uniform grid of 1/(2N) turns, N the
    number of curves: any feasible circular weak order of the N angles
    and their N antipodes occupies at most 2N distinct positions and
    embeds in that grid with its antipodal symmetry intact, so the grid
    search is exact.  Curves whose sign vector is all zero only ever
    constrain equal-angle merges, so they are assigned after everything
    else and never force backtracking; the first assigned curve is
    pinned at angle 0 and values are tried ascending, which makes the
    witness deterministic.
    """
    m, n = matrix.shape
    if m > bound or n > bound:
        raise ConfigError(
            f"sign matrix {m}x{n} exceeds the {bound}x{bound} search bound"
        )
    labels = matrix.labels()
    total = m + n
    if total == 0:
        return Feasible(AngleOrder((), {}, {}))
    grid = 2 * total
    half = total
    rows_ok, cols_ok = _mergeable_tables(matrix)

    def constrained(k: int) -> bool:
        if k < m:
            return any(matrix.entries[k])
        return any(matrix.entries[i][k - m] for i in range(m))

    order = [k for k in range(total) if constrained(k)]
    order += [k for k in range(total) if not constrained(k)]

    values: Dict[int, int] = {}
    explored = 0
    deepest: Tuple[Tuple[str, Fraction], ...] = ()

    def snapshot() -> Tuple[Tuple[str, Fraction], ...]:
        return tuple(
            (labels[k], Fraction(values[k], grid)) for k in order if k in values
        )

    def compatible(k: int, v: int) -> bool:
        for t, w in values.items():
            if (k < m) == (t < m):
                if v == w:
                    table = rows_ok if k < m else cols_ok
                    off = 0 if k < m else m
                    if not table[k - off][t - off]:
                        return False
                continue
            i, j = (k, t - m) if k < m else (t, k - m)
            s = matrix.entries[i][j]
            if s == 0:
                continue
            va, vb = (v, w) if k < m else (w, v)
            diff = (vb - va) % grid
            if s > 0 and not 0 < diff < half:
                return False
            if s < 0 and not half < diff < grid:
                return False
        return True

    def search(pos: int) -> bool:
        nonlocal explored, deepest
        if pos == total:
            return True
        k = order[pos]
        choices = [0] if pos == 0 else range(grid)
        for v in choices:
            explored += 1
            if compatible(k, v):
                values[k] = v
                if len(values) > len(deepest):
                    deepest = snapshot()
                if search(pos + 1):
                    return True
                del values[k]
        return False

    if not search(0):
        return Infeasible(deepest, explored)

    angles = {labels[k]: Fraction(values[k], grid) for k in range(total)}
    by_value: Dict[int, List[str]] = {}
    for k in range(total):
        by_value.setdefault(values[k], []).append(labels[k])
    blocks = tuple(tuple(by_value[v]) for v in sorted(by_value))
    merged = {c: block[0] for block in blocks for c in block}
    return Feasible(AngleOrder(blocks, angles, merged))


def angle_order_holds(matrix: SignMatrix, order: AngleOrder) -> bool:
    """Substitute the order's representative angles and check every sign."""
    labels = matrix.labels()
    m, n = matrix.shape
    if set(order.angles) != set(labels):
        return False
    flat = [c for block in order.blocks for c in block]
    if sorted(flat) != sorted(labels):
        return False
    for block in order.blocks:
        if {order.angles[c] for c in block} != {order.angles[block[0]]}:
            return False
        for c in block:
            if order.merged.get(c) != block[0]:
                return False
    for q in order.angles.values():
        if not 0 <= q < 1:
            return False
    half = Fraction(1, 2)
    for i in range(m):
        for j in range(n):
            s = matrix.entries[i][j]
            if s == 0:
                continue
            diff = (order.angles[labels[m + j]] - order.angles[labels[i]]) % 1
            if s > 0 and not 0 < diff < half:
                return False
            if s < 0 and not half < diff < 1:
                return False
    rows_ok, cols_ok = _mergeable_tables(matrix)
    for (off, count, table) in ((0, m, rows_ok), (m, n, cols_ok)):
        for x in range(count):
            for y in range(x + 1, count):
                if order.angles[labels[off + x]] == order.angles[labels[off + y]]:
                    if not table[x][y]:
                        return False
    return True


def necessary_filter(config: CurveConfiguration):
    """The uniform sign of every curve pair, or a pair that has none.

    A configuration can only carry two families of constant-slope
    curves if each pair crosses with a single sign; the resulting table
    is what ``angle_feasible`` consumes.  Pairs that never cross get 0.
    """
    report = validate(config)
    if not report.ok:
        raise ConfigError("invalid configuration: " + "; ".join(report.names()))
    families = sorted({c.family for c in config.curves})
    if len(families) != 2:
        raise ConfigError(f"exactly two families expected, got {families}")
    fam_a, fam_b = families
    rows = sorted(c.id for c in config.curves_of(fam_a))
    cols = sorted(c.id for c in config.curves_of(fam_b))
    row_pos = {cid: i for i, cid in enumerate(rows)}
    col_pos = {cid: j for j, cid in enumerate(cols)}
    entries = [[0] * len(cols) for _ in rows]
    seen: Dict[Tuple[int, int], Tuple[int, int]] = {}
    for x in config.crossings:
        if x.curve_a in row_pos and x.curve_b in col_pos:
            a, b, s = x.curve_a, x.curve_b, x.sign
        elif x.curve_b in row_pos and x.curve_a in col_pos:
            a, b, s = x.curve_b, x.curve_a, x.sign
        else:
            continue
        prev = seen.get((a, b))
        if prev is not None and prev[0] != s:
            return NotPairwiseCoherent(a, b, (prev[1], x.id))
        seen[(a, b)] = (s, x.id)
        entries[row_pos[a]][col_pos[b]] = s
    return SignMatrix(entries, tuple(rows), tuple(cols))
