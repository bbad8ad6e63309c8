"""Oriented chord diagrams of single-zero forms with real periods.

The 2k germs of saddle connections at the zero sit at circle positions
``0 .. 2k-1`` in counterclockwise order, alternately ``"out"`` and ``"in"``.
Chord ``i`` is stored as ``(out_position, in_position)`` and is oriented like
its saddle connection, from the out-germ to the in-germ.

Conventions (checked against every marking formula used by
:mod:`isoflat.connect13`):

* ``x . y = +1`` when chord ``y`` ends on the counterclockwise arc from the
  in-germ of ``x`` to its out-germ and starts on the other arc.
* Boundary cycles follow a chord to its in-germ and turn: a *right* cycle
  steps clockwise to the out-germ at ``in - 1``, a *left* cycle
  counterclockwise to ``in + 1``.  Right cycles are positive poles (their
  class sum is a peripheral class), left cycles negative poles (minus the
  class sum is one).

The one-chord diagram has one cycle of each kind: the flat cylinder with
g = 0 and n = 2.
"""

from __future__ import annotations

import itertools
import json
import warnings
from dataclasses import dataclass, field

from .homology import HomologyModel, Submodule, add
from .period import PeriodHom

__all__ = [
    "OUT",
    "IN",
    "ChordDiagram",
    "DecoratedDiagram",
    "DecorationError",
    "Octopus",
    "Butterfly",
    "RealizabilityWarning",
    "validate",
    "cycles",
    "genus",
    "decorate",
    "decoration_violations",
    "canonical_form",
    "enumerate_diagrams",
    "classify_13",
    "arm_module",
    "octopus_diagram",
    "butterfly_diagram",
    "make_octopus",
    "make_butterfly",
]

OUT, IN = "out", "in"
RIGHT, LEFT = "right", "left"

# circle step from an in-germ to the next out-germ in a right cycle
_RIGHT_STEP = -1


class RealizabilityWarning(UserWarning):
    """A diagram with a single boundary cycle (one simple pole) was emitted."""


class DecorationError(ValueError):
    pass


@dataclass(frozen=True)
class ChordDiagram:
    k: int
    positions: tuple
    chords: tuple

    def __post_init__(self):
        object.__setattr__(self, "positions", tuple(self.positions))
        object.__setattr__(self, "chords", tuple(tuple(c) for c in self.chords))

    @classmethod
    def from_chords(cls, chords, first: str = OUT) -> "ChordDiagram":
        """Build from ``(out, in)`` pairs; the alternation starts with ``first`` at 0."""
        k = len(chords)
        other = IN if first == OUT else OUT
        return cls(k, tuple(first if j % 2 == 0 else other for j in range(2 * k)), chords)

    @property
    def size(self) -> int:
        return 2 * self.k

    def out_pos(self, i: int) -> int:
        return self.chords[i][0]

    def in_pos(self, i: int) -> int:
        return self.chords[i][1]

    def germ_at(self, pos: int) -> tuple[int, str]:
        """``(chord index, "out"|"in")`` of the germ at ``pos`` (mod 2k)."""
        return self._germs()[pos % self.size]

    def _germs(self):
        g = [None] * self.size
        for i, (o, n) in enumerate(self.chords):
            g[o] = (i, OUT)
            g[n] = (i, IN)
        return g

    def validate(self) -> list[str]:
        return validate(self)

    def is_valid(self) -> bool:
        return not validate(self)

    def cycles(self, side: str) -> list[tuple]:
        return cycles(self, side)

    def n_cycles(self) -> int:
        return len(cycles(self, RIGHT)) + len(cycles(self, LEFT))

    def genus(self) -> int:
        return genus(self)

    def crossing(self, i: int, j: int) -> int:
        """Signed intersection of chords ``i`` and ``j`` inside the disc."""
        if i == j:
            return 0
        n = self.size
        si, ti = self.in_pos(i), self.out_pos(i)

        def on_arc(x):  # open ccw arc from si to ti
            return 0 < (x - si) % n < (ti - si) % n

        a, b = on_arc(self.in_pos(j)), on_arc(self.out_pos(j))
        if a == b:
            return 0
        return 1 if a else -1

    def crossing_matrix(self) -> list[list[int]]:
        return [[self.crossing(i, j) for j in range(self.k)] for i in range(self.k)]

    def rotate(self, r: int) -> "ChordDiagram":
        """Relabel positions ``j -> j + r``; chord order is kept."""
        n = self.size
        pos = [None] * n
        for j, v in enumerate(self.positions):
            pos[(j + r) % n] = v
        return ChordDiagram(self.k, tuple(pos), tuple(((o + r) % n, (i + r) % n) for o, i in self.chords))

    def reversed(self) -> "ChordDiagram":
        """Every chord reversed (the diagram of ``-omega``): out and in swap."""
        flip = {OUT: IN, IN: OUT}
        return ChordDiagram(self.k, tuple(flip[v] for v in self.positions), tuple((i, o) for o, i in self.chords))

    def encoding(self) -> tuple:
        return (self.positions, tuple(sorted(self.chords)))

    def canonical_form(self) -> "ChordDiagram":
        return canonical_form(self)

    def to_json(self) -> dict:
        return {"k": self.k, "positions": list(self.positions), "chords": [list(c) for c in self.chords]}

    @classmethod
    def from_json(cls, obj) -> "ChordDiagram":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(int(obj["k"]), tuple(obj["positions"]), tuple(tuple(int(x) for x in c) for c in obj["chords"]))

    def to_dot(self, classes=None, model=None, period=None) -> str:
        return _to_dot(self, classes, model, period)

    def __str__(self):
        body = " ".join(f"{o}->{i}" for o, i in self.chords)
        return f"ChordDiagram(k={self.k}: {body})"


def validate(dgm: ChordDiagram) -> list[str]:
    """Alternation and matching violations (empty list when the diagram is valid)."""
    out = []
    n = 2 * dgm.k
    if dgm.k < 1:
        return ["k must be at least 1"]
    if len(dgm.positions) != n:
        return [f"expected {n} positions, got {len(dgm.positions)}"]
    if any(v not in (OUT, IN) for v in dgm.positions):
        out.append("positions must be 'out' or 'in'")
    for j in range(n):
        if dgm.positions[j] == dgm.positions[(j + 1) % n]:
            out.append(f"alternation: positions {j} and {(j + 1) % n} are both {dgm.positions[j]}")
            break
    if len(dgm.chords) != dgm.k:
        out.append(f"expected {dgm.k} chords, got {len(dgm.chords)}")
        return out
    seen = set()
    for i, c in enumerate(dgm.chords):
        if len(c) != 2 or not all(isinstance(x, int) and 0 <= x < n for x in c):
            out.append(f"matching: chord {i} has invalid endpoints {c}")
            continue
        o, m = c
        if dgm.positions[o] != OUT or dgm.positions[m] != IN:
            out.append(f"matching: chord {i} must join an out position to an in position")
        for x in c:
            if x in seen:
                out.append(f"matching: position {x} used twice")
            seen.add(x)
    if not out and len(seen) != n:
        out.append("matching: not every position is used")
    return out


def _require_valid(dgm: ChordDiagram):
    v = validate(dgm)
    if v:
        raise ValueError(f"invalid chord diagram: {v[0]}")


def cycles(dgm: ChordDiagram, side: str) -> list[tuple]:
    """Boundary cycles as chord-index tuples, each starting at its smallest chord."""
    _require_valid(dgm)
    if side not in (RIGHT, LEFT):
        raise ValueError("side must be 'right' or 'left'")
    step = _RIGHT_STEP if side == RIGHT else -_RIGHT_STEP
    germs = dgm._germs()
    n = dgm.size
    succ = {}
    for i in range(dgm.k):
        j, kind = germs[(dgm.in_pos(i) + step) % n]
        assert kind == OUT
        succ[i] = j
    todo = set(range(dgm.k))
    out = []
    while todo:
        s = min(todo)
        cyc = []
        while s in todo:
            todo.discard(s)
            cyc.append(s)
            s = succ[s]
        out.append(tuple(cyc))
    return out


def genus(dgm: ChordDiagram) -> int:
    n = dgm.n_cycles()
    twice = (dgm.k - 1 - n) + 2
    assert twice % 2 == 0 and twice >= 0, "cycle count inconsistent with a closed surface"
    g = twice // 2
    assert 1 - dgm.k + n == 2 - 2 * g
    return g


def canonical_form(dgm: ChordDiagram) -> ChordDiagram:
    """Lexicographically least rotation, chords listed by out position."""
    _require_valid(dgm)
    best = None
    for r in range(dgm.size):
        e = dgm.rotate(r).encoding()
        if best is None or e < best:
            best = e
    positions, chords = best
    return ChordDiagram(dgm.k, positions, chords)


def _rotation_and_order(dgm: ChordDiagram, key=None):
    """Rotation ``r`` and chord permutation realizing the canonical form.

    ``key(i)`` optionally breaks ties between symmetric rotations (decorations).
    """
    best = None
    for r in range(dgm.size):
        rd = dgm.rotate(r)
        order = sorted(range(dgm.k), key=lambda i: rd.chords[i])
        enc = (rd.positions, tuple(rd.chords[i] for i in order))
        tie = tuple(key(i) for i in order) if key else ()
        cand = (enc, tie)
        if best is None or cand < best[0]:
            best = (cand, r, order)
    return best[1], best[2]


def _canonical_chunk(k: int, first: int) -> set:
    # canonical forms of the diagrams whose chord 0 ends at ``first``
    outs = list(range(0, 2 * k, 2))
    rest = [x for x in range(1, 2 * k, 2) if x != first]
    return {
        canonical_form(ChordDiagram.from_chords(list(zip(outs, (first,) + perm))))
        for perm in itertools.permutations(rest)
    }


def enumerate_diagrams(
    k: int,
    n_cycles: int | None = None,
    genus_filter: int | None = None,
    signed: bool = False,
    jobs: int = 1,
) -> list[ChordDiagram]:
    """Isomorphism classes of valid ``k``-chord diagrams, optionally filtered.

    By default a diagram and its chord-reversed twin (the form ``-omega``,
    all pole signs flipped) count once; the representative kept has at
    least as many left (negative) cycles as right ones.  ``signed=True``
    lists all rotation classes instead.  ``jobs > 1`` spreads the
    canonicalization over a process pool; the result does not depend on it.
    """
    if k < 1 or k > 8:
        raise ValueError("enumeration supports 1 <= k <= 8")
    firsts = list(range(1, 2 * k, 2))
    if jobs > 1 and k >= 6:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as ex:
            chunks = list(ex.map(_canonical_chunk, [k] * len(firsts), firsts))
    else:
        chunks = [_canonical_chunk(k, f) for f in firsts]
    forms = sorted(set().union(*chunks), key=lambda d: d.encoding())
    seen = set()
    result = []
    key = lambda d: (len(d.cycles(RIGHT)) - len(d.cycles(LEFT)), d.encoding())  # noqa: E731
    for can in forms:
        if can in seen:
            continue
        seen.add(can)
        if not signed:
            twin = canonical_form(can.reversed())
            seen.add(twin)
            can = min(can, twin, key=key)
        n = can.n_cycles()
        if n_cycles is not None and n != n_cycles:
            continue
        if genus_filter is not None and can.genus() != genus_filter:
            continue
        if n == 1:
            warnings.warn(
                f"{can} has a single boundary cycle; a lone simple pole violates the residue theorem",
                RealizabilityWarning,
                stacklevel=2,
            )
        result.append(can)
    result.sort(key=lambda d: d.encoding())
    return result


# -- decorations -----------------------------------------------------------------

def _neg(x):
    return tuple(-v for v in x)


def _sum(classes, idx):
    out = None
    for i in idx:
        out = classes[i] if out is None else add(out, classes[i])
    return out


def decoration_violations(dgm: ChordDiagram, model: HomologyModel, classes, p: PeriodHom | None) -> list[str]:
    """Every violated condition of a marked ribbon graph, in a fixed order."""
    v = validate(dgm)
    if v:
        return v
    classes = [tuple(c) for c in classes]
    out = []
    if len(classes) != dgm.k:
        return [f"expected {dgm.k} classes, got {len(classes)}"]
    for i, c in enumerate(classes):
        if len(c) != model.rank or not all(isinstance(x, int) for x in c):
            return [f"class of chord {i} is not an integer vector of length {model.rank}"]
    n = dgm.n_cycles()
    if n != model.n:
        out.append(f"diagram has {n} boundary cycles, model has {model.n} poles")
    if dgm.genus() != model.g:
        out.append(f"diagram has genus {dgm.genus()}, model has genus {model.g}")
    for i in range(dgm.k):
        for j in range(i + 1, dgm.k):
            want = dgm.crossing(i, j)
            got = model.intersection(classes[i], classes[j])
            if want != got:
                out.append(f"intersection: chords {i},{j} cross with sign {want} but classes give {got}")
    peripherals = {pi: idx for idx, pi in enumerate(model.peripherals(), start=1)}
    hit = []
    for side, sign in ((RIGHT, 1), (LEFT, -1)):
        for cyc in dgm.cycles(side):
            s = _sum(classes, cyc)
            if sign < 0:
                s = _neg(s)
            if s not in peripherals:
                out.append(f"cycle {side} {list(cyc)}: signed class sum {model.format(s)} is not a positive peripheral class")
            else:
                hit.append(peripherals[s])
    if len(hit) == len(set(hit)) == model.n and set(hit) != set(range(1, model.n + 1)):
        out.append("cycle sums do not cover every pole")
    elif len(hit) != len(set(hit)):
        out.append("two boundary cycles give the same peripheral class")
    if p is not None:
        if p.model != model:
            out.append("period is defined on a different model")
        else:
            for i, c in enumerate(classes):
                z = p.eval(c)
                if z.im:
                    out.append(f"length: chord {i} has non-real period {z}")
                elif not z.re > 0:
                    out.append(f"length: chord {i} has non-positive period {z.re}")
    return out


@dataclass(frozen=True)
class DecoratedDiagram:
    diagram: ChordDiagram
    model: HomologyModel
    classes: tuple
    period: PeriodHom = field(compare=False)

    def lengths(self):
        return [self.period.eval(c).re for c in self.classes]

    def length(self, i: int):
        return self.period.eval(self.classes[i]).re

    def canonical(self) -> "DecoratedDiagram":
        """Canonical rotation and chord order; ties broken by the classes."""
        r, order = _rotation_and_order(self.diagram, key=lambda i: self.classes[i])
        rd = self.diagram.rotate(r)
        dgm = ChordDiagram(rd.k, rd.positions, tuple(rd.chords[i] for i in order))
        return DecoratedDiagram(dgm, self.model, tuple(self.classes[i] for i in order), self.period)

    def same_as(self, other: "DecoratedDiagram") -> bool:
        a, b = self.canonical(), other.canonical()
        return a.diagram == b.diagram and a.classes == b.classes and self.period == other.period

    def to_json(self) -> dict:
        out = self.diagram.to_json()
        out["classes"] = [list(c) for c in self.classes]
        return out

    @classmethod
    def from_json(cls, obj, model: HomologyModel, period: PeriodHom, check: bool = True) -> "DecoratedDiagram":
        dgm = ChordDiagram.from_json(obj)
        classes = tuple(tuple(int(x) for x in c) for c in obj["classes"])
        if check:
            return decorate(dgm, model, classes, period)
        return cls(dgm, model, classes, period)

    def to_dot(self) -> str:
        return _to_dot(self.diagram, self.classes, self.model, self.period)

    def __str__(self):
        parts = [f"{o}->{i}: {self.model.format(c)}" for (o, i), c in zip(self.diagram.chords, self.classes)]
        return "Decorated(" + "; ".join(parts) + ")"


def decorate(dgm: ChordDiagram, model: HomologyModel, classes, p: PeriodHom) -> DecoratedDiagram:
    """Attach classes to chords, raising :class:`DecorationError` on the first violation."""
    v = decoration_violations(dgm, model, classes, p)
    if v:
        raise DecorationError(v[0])
    return DecoratedDiagram(dgm, model, tuple(tuple(c) for c in classes), p)


# -- genus one, three poles ---------------------------------------------------------

def _in_order_after(dgm: ChordDiagram, i: int) -> list[int]:
    """Other chords in counterclockwise order of their in-germs, starting after chord ``i``."""
    n = dgm.size
    start = dgm.in_pos(i)
    others = [j for j in range(dgm.k) if j != i]
    return sorted(others, key=lambda j: (dgm.in_pos(j) - start) % n)


@dataclass(frozen=True)
class Octopus:
    """``O_p(a, b, c | d)``: chord indices of the arms and the head."""

    dec: DecoratedDiagram
    arms: tuple
    head: int
    large: bool

    @property
    def a(self):
        return self.dec.classes[self.arms[0]]

    @property
    def b(self):
        return self.dec.classes[self.arms[1]]

    @property
    def c(self):
        return self.dec.classes[self.arms[2]]

    @property
    def d(self):
        return self.dec.classes[self.head]

    @property
    def labels(self):
        return (self.a, self.b, self.c, self.d)

    @property
    def kind(self) -> str:
        return "LargeHeadOctopus" if self.large else "SmallHeadOctopus"

    def rotated(self, r: int = 1) -> "Octopus":
        """Relabel ``(a, b, c) -> (b, c, a)`` (applied ``r`` times)."""
        r %= 3
        return Octopus(self.dec, self.arms[r:] + self.arms[:r], self.head, self.large)

    def __str__(self):
        f = self.dec.model.format
        tag = "LHO" if self.large else "SHO"
        return f"{tag}({f(self.a)}, {f(self.b)}, {f(self.c)} | {f(self.d)})"


@dataclass(frozen=True)
class Butterfly:
    """``B_p(a, c | b, d)`` with chord indices listed as ``(a, b, c, d)``."""

    dec: DecoratedDiagram
    order: tuple

    @property
    def labels(self):
        return tuple(self.dec.classes[i] for i in self.order)

    @property
    def kind(self) -> str:
        return "Butterfly"

    def swapped(self) -> "Butterfly":
        """The other admissible labelling ``(c, d, a, b)``."""
        o = self.order
        return Butterfly(self.dec, (o[2], o[3], o[0], o[1]))

    def __str__(self):
        f = self.dec.model.format
        a, b, c, d = (f(x) for x in self.labels)
        return f"B({a}, {c} | {b}, {d})"


def _check_normalized(p: PeriodHom):
    model = p.model
    v1, v2, v3 = (p.eval(model.peripheral(i)) for i in (1, 2, 3))
    if v1.im or v2.im or v3.im:
        raise ValueError("classification needs a real period")
    if not (v2.re <= v1.re < 0 < v3.re):
        raise ValueError("classification needs p(pi2) <= p(pi1) < 0 < p(pi3)")


def classify_13(dec: DecoratedDiagram) -> Octopus | Butterfly:
    model = dec.model
    if (model.g, model.n) != (1, 3):
        raise ValueError("classify_13 needs a (1,3) decoration")
    _check_normalized(dec.period)
    dgm = dec.diagram
    per = set(model.peripherals())
    heads = [i for i, c in enumerate(dec.classes) if c in per or _neg(c) in per]
    if heads:
        (h,) = heads
        arms = tuple(_in_order_after(dgm, h))
        p = dec.period
        s = p.eval(_sum(dec.classes, arms)).re
        return Octopus(dec, arms, h, s <= p.eval(dec.classes[h]).re)
    # butterfly: in-germ order, started so that a + c = -pi_1
    first = 0
    order = [first] + _in_order_after(dgm, first)
    target = _neg(model.peripheral(1))
    for r in range(4):
        o = order[r:] + order[:r]
        if add(dec.classes[o[0]], dec.classes[o[2]]) == target:
            o = tuple(o)
            return Butterfly(dec, min(o, (o[2], o[3], o[0], o[1])))
    raise AssertionError("butterfly without an a + c = -pi1 labelling")


def arm_module(oct: Octopus) -> Submodule:
    return Submodule.span([oct.a, oct.b, oct.c], oct.dec.model.rank)


# -- standard diagrams ---------------------------------------------------------------

def _standard(kind: str) -> ChordDiagram:
    (oct_,) = (d for d in enumerate_diagrams(4, 3) if any(len(c) == 1 for c in d.cycles(LEFT)))
    (bfly,) = (d for d in enumerate_diagrams(4, 3) if d != oct_)
    if kind == "octopus":
        (h,) = (c[0] for c in oct_.cycles(LEFT) if len(c) == 1)
        order = _in_order_after(oct_, h) + [h]
        return ChordDiagram(4, oct_.positions, tuple(oct_.chords[i] for i in order))
    order = [0] + _in_order_after(bfly, 0)
    return ChordDiagram(4, bfly.positions, tuple(bfly.chords[i] for i in order))


_STANDARD = {}


def octopus_diagram() -> ChordDiagram:
    """The octopus diagram with chords listed as ``(a, b, c, d)``, ``d`` the head."""
    if "octopus" not in _STANDARD:
        _STANDARD["octopus"] = _standard("octopus")
    return _STANDARD["octopus"]


def butterfly_diagram() -> ChordDiagram:
    """The butterfly diagram with chords ``(a, b, c, d)`` in counterclockwise in-germ order."""
    if "butterfly" not in _STANDARD:
        _STANDARD["butterfly"] = _standard("butterfly")
    return _STANDARD["butterfly"]


def make_octopus(model: HomologyModel, p: PeriodHom, a, b, c, d) -> Octopus:
    """Decorate the standard octopus by ``O_p(a, b, c | d)`` (validated)."""
    dec = decorate(octopus_diagram(), model, [a, b, c, d], p)
    out = classify_13(dec)
    assert isinstance(out, Octopus) and out.arms == (0, 1, 2) and out.head == 3
    return out


def make_butterfly(model: HomologyModel, p: PeriodHom, a, b, c, d) -> Butterfly:
    """Decorate the standard butterfly by ``B_p(a, c | b, d)`` (validated)."""
    dec = decorate(butterfly_diagram(), model, [a, b, c, d], p)
    return Butterfly(dec, (0, 1, 2, 3))


# -- DOT export -------------------------------------------------------------------------

def _to_dot(dgm: ChordDiagram, classes=None, model=None, period=None) -> str:
    lines = [
        "// lengths are decimal approximations of exact values, for display only",
        "digraph chord {",
        "  layout=circo;",
    ]
    n = dgm.size
    for j in range(n):
        lines.append(f'  g{j} [label="{j}:{dgm.positions[j]}", shape=circle];')
    for j in range(n):
        lines.append(f"  g{j} -> g{(j + 1) % n} [arrowhead=none, color=gray];")
    for i, (o, m) in enumerate(dgm.chords):
        label = f"s{i}"
        if classes is not None and model is not None:
            label += f" {model.format(classes[i])}"
            if period is not None:
                label += f" ~{float(period.eval(classes[i]).re):.6g}"
        lines.append(f'  g{m} -> g{o} [label="{label}", color=blue];')
    lines.append("}")
    return "\n".join(lines) + "\n"
