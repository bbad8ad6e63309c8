"""Schiffer variations on decorated chord diagrams.

A move is read off three consecutive germs ``g1, g2, g3``: ``g1`` and
``g3`` point the same way (angle 2 pi apart) and belong to chords of
different lengths, ``g2`` is the central germ between them.  Calling the
shorter of the two outer chords *short*:

* the germ pair ``{central, long}`` next to the short germ is moved, in the
  same order, to the other end of the circle interval cut out by the short
  chord;
* ``[long] <- [long] - [short]`` and ``[central] <- [central] + [short]``.

The period homomorphism is untouched, so every move is isoperiodic.
"""

from __future__ import annotations

from dataclasses import dataclass

from .chord import ChordDiagram, DecoratedDiagram, DecorationError, decoration_violations
from .homology import add, sub

__all__ = ["SchifferMove", "MoveError", "applicable_moves", "find_move", "apply", "inverse", "verify_isoperiodic"]


class MoveError(ValueError):
    pass


@dataclass(frozen=True)
class SchifferMove:
    short: int
    long: int
    central: int
    positions: tuple

    def to_json(self) -> dict:
        return {
            "type": "schiffer",
            "short": self.short,
            "long": self.long,
            "central": self.central,
            "positions": list(self.positions),
        }

    @classmethod
    def from_json(cls, obj) -> "SchifferMove":
        if obj.get("type", "schiffer") != "schiffer":
            raise ValueError("not a schiffer step")
        return cls(int(obj["short"]), int(obj["long"]), int(obj["central"]), tuple(int(x) for x in obj["positions"]))

    def __str__(self):
        return f"schiffer(short={self.short}, long={self.long}, central={self.central} @ {list(self.positions)})"


def _candidate(dec: DecoratedDiagram, t: int):
    dgm = dec.diagram
    n = dgm.size
    g = [(t + j) % n for j in range(3)]
    (c1, d1), (c2, d2), (c3, d3) = (dgm.germ_at(x) for x in g)
    if d1 != d3 or d2 == d1:
        return None
    if c2 in (c1, c3) or c1 == c3:
        return None
    l1, l3 = dec.length(c1), dec.length(c3)
    if l1 == l3:
        return None
    if l1 < l3:
        return SchifferMove(c1, c3, c2, tuple(g))
    return SchifferMove(c3, c1, c2, tuple(g))


def applicable_moves(dec: DecoratedDiagram) -> list[SchifferMove]:
    """Every legal move, in order of the first germ position."""
    out = []
    for t in range(dec.diagram.size):
        mv = _candidate(dec, t)
        if mv is not None:
            out.append(mv)
    return out


def find_move(dec: DecoratedDiagram, short: int, long: int, central: int) -> SchifferMove:
    """The applicable move with the given chord roles (unique when it exists)."""
    found = [m for m in applicable_moves(dec) if (m.short, m.long, m.central) == (short, long, central)]
    if not found:
        raise MoveError(f"no applicable move with short={short}, long={long}, central={central}")
    if len(found) > 1:
        raise MoveError(f"ambiguous move with short={short}, long={long}, central={central}: {found}")
    return found[0]


def _check_move(dec: DecoratedDiagram, mv: SchifferMove):
    if len(mv.positions) != 3:
        raise MoveError("a move needs three germ positions")
    dgm = dec.diagram
    n = dgm.size
    g1, g2, g3 = mv.positions
    if not all(isinstance(x, int) and 0 <= x < n for x in mv.positions):
        raise MoveError("germ position out of range")
    if (g2 - g1) % n != 1 or (g3 - g2) % n != 1:
        raise MoveError("germ positions are not consecutive")
    want = _candidate(dec, g1)
    if want != mv:
        raise MoveError(f"{mv} is not applicable here (expected {want})")


def _relocate(dgm: ChordDiagram, mv: SchifferMove) -> ChordDiagram:
    n = dgm.size
    g1, g2, g3 = mv.positions
    germs = [dgm.germ_at(j) for j in range(n)]
    short_at_start = germs[g1][0] == mv.short
    s = g1 if short_at_start else g3
    other = dgm.out_pos(mv.short) if germs[s][1] == "in" else dgm.in_pos(mv.short)
    # linear order starting at the short germ
    seq = [germs[(s + j) % n] for j in range(n)]
    if short_at_start:
        # seq = [short, central, long, ..., other_end, ...]: pair goes just before other_end
        pair = seq[1:3]
        rest = [seq[0]] + seq[3:]
        idx = rest.index(germs[other])
        new = rest[:idx] + pair + rest[idx:]
    else:
        # seq = [short, ..., other_end, ..., long, central]: pair goes just after other_end
        pair = seq[-2:]
        rest = seq[:-2]
        idx = rest.index(germs[other])
        new = rest[: idx + 1] + pair + rest[idx + 1 :]
    # position s keeps the short germ
    placed = [None] * n
    for j, germ in enumerate(new):
        placed[(s + j) % n] = germ
    chords = [[None, None] for _ in range(dgm.k)]
    for pos, (c, kind) in enumerate(placed):
        chords[c][0 if kind == "out" else 1] = pos
    positions = tuple(kind for _, kind in placed)
    return ChordDiagram(dgm.k, positions, tuple(tuple(c) for c in chords))


def apply(dec: DecoratedDiagram, mv: SchifferMove, check: bool = True) -> DecoratedDiagram:
    """Perform the move; with ``check`` the result is fully re-validated."""
    _check_move(dec, mv)
    dgm = _relocate(dec.diagram, mv)
    classes = list(dec.classes)
    short = classes[mv.short]
    classes[mv.long] = sub(classes[mv.long], short)
    classes[mv.central] = add(classes[mv.central], short)
    after = DecoratedDiagram(dgm, dec.model, tuple(classes), dec.period)
    if check:
        v = decoration_violations(dgm, dec.model, classes, dec.period)
        if v:
            raise DecorationError(f"move {mv} produced an invalid decoration: {v[0]}")
    return after


def inverse(after: DecoratedDiagram, mv: SchifferMove) -> SchifferMove:
    """The move undoing ``mv`` on ``after = apply(before, mv)``.

    The relocated pair now sits against the other end of the short chord;
    the inverse uses the same short chord with long and central exchanged.
    """
    dgm = after.diagram
    n = dgm.size
    p0, _, p2 = mv.positions
    if not all(isinstance(x, int) and 0 <= x < n for x in mv.positions):
        raise MoveError("germ position out of range")
    # the short germ keeps its position
    short_at_start = dgm.germ_at(p0)[0] == mv.short
    s_kind = dgm.germ_at(p0 if short_at_start else p2)[1]
    flip = "out" if s_kind == "in" else "in"
    where = {g: j for j, g in enumerate(dgm._germs())}
    central, long_, other = where[(mv.central, flip)], where[(mv.long, s_kind)], where[(mv.short, flip)]
    triple = (central, long_, other) if short_at_start else (other, long_, central)
    cand = _candidate(after, triple[0])
    if cand is None or cand.positions != triple or (cand.short, cand.long, cand.central) != (mv.short, mv.central, mv.long):
        raise MoveError(f"{mv} has no inverse on this diagram")
    return cand


def verify_isoperiodic(before: DecoratedDiagram, after: DecoratedDiagram) -> bool:
    if before.model != after.model or before.period != after.period:
        return False
    for d in (before, after):
        if decoration_violations(d.diagram, d.model, d.classes, d.period):
            return False
    p, q = before.period, after.period
    return all(p.eval(pi) == q.eval(pi) for pi in before.model.peripherals())
