"""Isoperiodic connection certificates for genus one with three simple poles.

Everything here assumes a real period normalized so that
``p(pi2) <= p(pi1) = -1 < 0 < p(pi3)``.  :func:`check_hypothesis` finds the
pole renumbering and scaling that achieve it.

A certificate is a start state, a list of steps and an end state.  Schiffer
steps are replayed exactly by :func:`verify`.  Arm-equivalence steps are
axioms: two octopodes with the same arm module and the same head are
isoperiodically equivalent, which the chord calculus cannot show by itself
(the argument passes through boundary strata).  The verifier only checks
that the arm modules and the heads agree.

Routing, for two diagrams ``x`` and ``y``::

    x -> LHO(M)  ~arm~  LHO2 chain over arm modules  ~arm~  LHO(M') <- y

where ``LHO`` is a large head octopus and the middle part is built from
:func:`lho2_path`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd

from . import linalg
from .chord import (
    Butterfly,
    DecoratedDiagram,
    DecorationError,
    Octopus,
    arm_module,
    classify_13,
    decorate,
    decoration_violations,
    make_octopus,
)
from .homology import (
    HomologyModel,
    Submodule,
    add,
    dual_to_cycle,
    is_E_module,
    lift,
    make_model,
    module_translate,
    normalized_lift,
    p_M_closed,
    scale,
    star,
    sub,
)
from .numbers import ComplexExact, QuadExt, format_rational, parse_rational
from .period import PeriodHom, PreconditionError, UnsupportedCase
from .schiffer import MoveError, SchifferMove, applicable_moves, apply, inverse

__all__ = [
    "SCHEMA_VERSION",
    "DEFAULT_FUEL",
    "ARM_CITATION",
    "HypothesisError",
    "FuelExhausted",
    "ConnectError",
    "SchemaError",
    "Normalization",
    "SchifferStep",
    "ArmEquivalenceStep",
    "Certificate",
    "VerifyResult",
    "check_hypothesis",
    "normalize_period",
    "route_to_lho",
    "sho_to_butterfly",
    "butterfly_to_lho",
    "lho1_step",
    "lho2_path",
    "connect_arm_modules",
    "connect",
    "verify",
]

SCHEMA_VERSION = 1
DEFAULT_FUEL = 10**6
ARM_CITATION = "same-arm-module lemma: O(a,b,c|d) ~ O(a',b',c'|d) when span{a,b,c} = span{a',b',c'}"


class HypothesisError(UnsupportedCase):
    """The real period lies in the rational span of the peripheral periods."""


class FuelExhausted(RuntimeError):
    pass


class ConnectError(ValueError):
    """A construction step could not be realized on the diagram."""


class SchemaError(ValueError):
    pass


# -- normalization ------------------------------------------------------------

def _permute_class(model: HomologyModel, perm, x):
    # perm[j] is the new index of old pole j+1; pi3 is implied
    out = list(x[:2]) + [0, 0]
    for j, k in enumerate(x[2:]):
        if k:
            out = list(add(out, scale(k, model.peripheral(perm[j]))))
    return tuple(out)


@dataclass(frozen=True)
class Normalization:
    """Pole renumbering ``perm`` followed by the real scaling ``scale``.

    Classes map by ``x -> sign(scale) * T(x)`` where ``T`` renumbers the poles;
    periods by ``p -> scale * p o T^-1``.  A negative scale reverses every chord.
    """

    perm: tuple
    scale: QuadExt

    @property
    def flip(self) -> bool:
        return self.scale.sign() < 0

    def inverse_perm(self) -> tuple:
        inv = [0, 0, 0]
        for j, k in enumerate(self.perm):
            inv[k - 1] = j + 1
        return tuple(inv)

    def map_class(self, model, x):
        y = _permute_class(model, self.perm, x)
        return scale(-1, y) if self.flip else y

    def map_period(self, p: PeriodHom) -> PeriodHom:
        inv = self.inverse_perm()
        m = p.model
        return PeriodHom(m, [p.eval(_permute_class(m, inv, m.basis(j))) * self.scale for j in range(m.rank)])

    def map_decorated(self, dec: DecoratedDiagram, check: bool = True) -> DecoratedDiagram:
        dgm = dec.diagram.reversed() if self.flip else dec.diagram
        classes = [self.map_class(dec.model, c) for c in dec.classes]
        q = self.map_period(dec.period)
        if check:
            return decorate(dgm, dec.model, classes, q)
        return DecoratedDiagram(dgm, dec.model, tuple(classes), q)

    def is_identity(self) -> bool:
        return self.perm == (1, 2, 3) and self.scale == 1

    def to_json(self) -> dict:
        return {
            "perm": list(self.perm),
            "scale": [format_rational(self.scale.q0), format_rational(self.scale.q1)],
        }

    @classmethod
    def from_json(cls, obj, d: int) -> "Normalization":
        q0, q1 = (parse_rational(x) for x in obj["scale"])
        perm = tuple(int(x) for x in obj["perm"])
        if sorted(perm) != [1, 2, 3]:
            raise SchemaError(f"bad pole permutation {perm}")
        s = QuadExt(q0, q1, d)
        if not s:
            raise SchemaError("zero scale")
        return cls(perm, s)


def _require_13(p: PeriodHom):
    if (p.model.g, p.model.n) != (1, 3):
        raise PreconditionError("connectivity is implemented for surfaces of type (1,3) only")
    if not p.is_real():
        raise PreconditionError("connectivity needs a real period")


def normalize_period(p: PeriodHom) -> Normalization:
    """Renumbering and scaling with ``p(pi2) <= p(pi1) = -1 < 0 < p(pi3)`` afterwards."""
    _require_13(p)
    vals = [v.re for v in p.peripheral_values()]
    if any(not v for v in vals):
        raise PreconditionError("p vanishes on a peripheral class")
    neg = [j for j, v in enumerate(vals) if v.sign() < 0]
    sign = 1 if len(neg) == 2 else -1
    vals_s = [v * sign for v in vals]
    negs = sorted((j for j in range(3) if vals_s[j].sign() < 0), key=lambda j: (-vals_s[j], j))
    (pos,) = (j for j in range(3) if vals_s[j].sign() > 0)
    order = negs + [pos]  # old pole indices (0-based) in new order
    perm = [0, 0, 0]
    for new, old in enumerate(order):
        perm[old] = new + 1
    s = QuadExt(sign, 0, p.d) / (-vals_s[order[0]])
    return Normalization(tuple(perm), s)


def _span_coords(p: PeriodHom):
    # Q-span of the peripheral periods, as rows of (q0, q1)
    return [[v.re.q0, v.re.q1] for v in p.peripheral_values()]


def _in_peripheral_span(p: PeriodHom, x: QuadExt) -> bool:
    return linalg.rational_solve(_span_coords(p), [x.q0, x.q1]) is not None


def check_hypothesis(p: PeriodHom) -> Normalization:
    """Normalize ``p`` and check that its image is not inside ``Q (x) p(Pi)``.

    Returns the normalization; raises :class:`HypothesisError` otherwise.
    """
    norm = normalize_period(p)
    q = norm.map_period(p)
    if all(_in_peripheral_span(q, v.re) for v in q.closed_values()):
        raise HypothesisError(
            "the real period lies in the rational span of its peripheral periods; "
            "the (1,3) connectedness theorem assumes it does not"
        )
    return norm


def _check_normalized(p: PeriodHom):
    _require_13(p)
    m = p.model
    v1, v2, v3 = (p.eval(m.peripheral(i)).re for i in (1, 2, 3))
    if v1 != -1 or not (v2 <= v1 and v3.sign() > 0):
        raise PreconditionError("period is not normalized (need p(pi2) <= p(pi1) = -1)")


# -- certificates -------------------------------------------------------------

@dataclass(frozen=True)
class SchifferStep:
    move: SchifferMove

    def to_json(self) -> dict:
        return self.move.to_json()


@dataclass(frozen=True)
class ArmEquivalenceStep:
    """Jump to ``target``, an octopus with the same arm module and head."""

    target: DecoratedDiagram
    arm_module: Submodule
    head: tuple
    citation: str = ARM_CITATION

    def to_json(self) -> dict:
        return {
            "type": "arm_equivalence",
            "target": self.target.to_json(),
            "arm_module": self.arm_module.to_json(),
            "head": list(self.head),
            "citation": self.citation,
        }


def _arm_data(dec: DecoratedDiagram):
    o = classify_13(dec)
    if not isinstance(o, Octopus):
        raise ConnectError("arm equivalence needs octopus states")
    return arm_module(o), dec.classes[o.head]


def _arm_step(target: DecoratedDiagram) -> ArmEquivalenceStep:
    M, h = _arm_data(target)
    return ArmEquivalenceStep(target, M, h)


def _same_state(x: DecoratedDiagram, y: DecoratedDiagram) -> bool:
    return x.diagram == y.diagram and x.classes == y.classes and x.period == y.period


@dataclass
class Certificate:
    model: HomologyModel
    period: PeriodHom
    start: DecoratedDiagram
    end: DecoratedDiagram
    steps: list = field(default_factory=list)
    normalization: Normalization | None = None
    original_period: PeriodHom | None = None
    schema: int = SCHEMA_VERSION

    def __len__(self):
        return len(self.steps)

    @property
    def n_schiffer(self) -> int:
        return sum(isinstance(s, SchifferStep) for s in self.steps)

    def states(self) -> list[DecoratedDiagram]:
        out = [self.start]
        for st in self.steps:
            if isinstance(st, SchifferStep):
                out.append(apply(out[-1], st.move))
            else:
                out.append(st.target)
        return out

    def arm_trace(self) -> list[Submodule]:
        """Arm modules of the octopus states met along the way (consecutive duplicates dropped)."""
        out = []
        for s in self.states():
            o = classify_13(s)
            if isinstance(o, Octopus) and o.large:
                M = arm_module(o)
                if not out or out[-1] != M:
                    out.append(M)
        return out

    def reversed(self) -> "Certificate":
        states = self.states()
        steps = []
        for i in range(len(self.steps) - 1, -1, -1):
            st = self.steps[i]
            if isinstance(st, SchifferStep):
                steps.append(SchifferStep(inverse(states[i + 1], st.move)))
            else:
                steps.append(_arm_step(states[i]))
        return Certificate(
            self.model, self.period, self.end, self.start, steps, self.normalization, self.original_period, self.schema
        )

    def to_json(self) -> dict:
        out = {
            "schema": self.schema,
            "kind": "isoflat-certificate",
            "model": self.model.to_json(),
            "d": self.period.d,
            "p": [v.to_json() for v in self.period.values],
            "renumbering": None,
            "start": self.start.to_json(),
            "end": self.end.to_json(),
            "steps": [s.to_json() for s in self.steps],
        }
        if self.normalization is not None:
            r = self.normalization.to_json()
            r["original_p"] = [v.to_json() for v in self.original_period.values]
            out["renumbering"] = r
        return out

    @classmethod
    def from_json(cls, obj) -> "Certificate":
        """Parse without checking the mathematics (that is :func:`verify`'s job)."""
        try:
            schema = obj["schema"]
        except (KeyError, TypeError):
            raise SchemaError("missing schema version") from None
        if schema != SCHEMA_VERSION:
            raise SchemaError(f"unsupported certificate schema {schema!r} (expected {SCHEMA_VERSION})")
        try:
            m = obj["model"]
            model = make_model((int(m["genus"]), int(m["points"])))
            d = int(obj["d"])
            p = PeriodHom(model, [ComplexExact.from_json(v, d) for v in obj["p"]])
            start = DecoratedDiagram.from_json(obj["start"], model, p, check=False)
            end = DecoratedDiagram.from_json(obj["end"], model, p, check=False)
            steps = [_step_from_json(s, model, p) for s in obj["steps"]]
            norm = orig = None
            if obj.get("renumbering"):
                r = obj["renumbering"]
                norm = Normalization.from_json(r, d)
                orig = PeriodHom(model, [ComplexExact.from_json(v, d) for v in r["original_p"]])
        except SchemaError:
            raise
        except (KeyError, TypeError, ValueError, IndexError) as e:
            raise SchemaError(f"malformed certificate: {e}") from None
        return cls(model, p, start, end, steps, norm, orig, schema)


def _step_from_json(obj, model, p):
    t = obj.get("type")
    if t == "schiffer":
        return SchifferStep(SchifferMove.from_json(obj))
    if t == "arm_equivalence":
        target = DecoratedDiagram.from_json(obj["target"], model, p, check=False)
        M = Submodule(model.rank, tuple(tuple(int(x) for x in r) for r in obj["arm_module"]))
        head = tuple(int(x) for x in obj["head"])
        return ArmEquivalenceStep(target, M, head, str(obj.get("citation", ARM_CITATION)))
    raise SchemaError(f"unknown step type {t!r}")


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    step: int | None = None
    message: str = ""

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "verified"
        where = "header" if self.step is None else f"step {self.step}"
        return f"verification failed at {where}: {self.message}"


def verify(cert: Certificate) -> VerifyResult:
    """Replay ``cert``; the first failure is reported with its step index.

    Step index -1 refers to the start state, ``len(steps)`` to the end state.
    """
    if cert.schema != SCHEMA_VERSION:
        return VerifyResult(False, None, f"schema version {cert.schema} != {SCHEMA_VERSION}")
    p = cert.period
    model = cert.model
    if (model.g, model.n) != (1, 3):
        return VerifyResult(False, None, "model is not of type (1,3)")
    try:
        _check_normalized(p)
    except PreconditionError as e:
        return VerifyResult(False, None, str(e))
    if cert.normalization is not None:
        if cert.original_period is None or cert.normalization.map_period(cert.original_period) != p:
            return VerifyResult(False, None, "renumbering does not map the original period to p")
    for name, s in (("start", cert.start), ("end", cert.end)):
        if s.model != model or s.period != p:
            return VerifyResult(False, None, f"{name} state has another model or period")
    v = decoration_violations(cert.start.diagram, model, cert.start.classes, p)
    if v:
        return VerifyResult(False, -1, f"start state invalid: {v[0]}")
    state = cert.start
    for i, st in enumerate(cert.steps):
        if isinstance(st, SchifferStep):
            try:
                state = apply(state, st.move)
            except (MoveError, DecorationError, IndexError, ValueError) as e:
                return VerifyResult(False, i, f"schiffer step does not replay: {e}")
        elif isinstance(st, ArmEquivalenceStep):
            t = st.target
            if t.model != model or t.period != p:
                return VerifyResult(False, i, "arm-equivalence target has another model or period")
            v = decoration_violations(t.diagram, model, t.classes, p)
            if v:
                return VerifyResult(False, i, f"arm-equivalence target invalid: {v[0]}")
            try:
                M0, h0 = _arm_data(state)
                M1, h1 = _arm_data(t)
            except ConnectError as e:
                return VerifyResult(False, i, str(e))
            if h0 != h1 or tuple(st.head) != h0:
                return VerifyResult(False, i, "arm equivalence between different heads")
            if M0 != M1 or st.arm_module != M0:
                return VerifyResult(False, i, "arm equivalence between different arm modules")
            state = t
        else:
            return VerifyResult(False, i, f"unknown step {st!r}")
    if not _same_state(state, cert.end):
        return VerifyResult(False, len(cert.steps), "replay does not end at the recorded end state")
    return VerifyResult(True)


# -- path builder ----------------------------------------------------------------

class _Path:
    def __init__(self, start: DecoratedDiagram, fuel: int):
        self.start = start
        self.state = start
        self.steps = []
        self.fuel = fuel

    def _burn(self):
        self.fuel -= 1
        if self.fuel < 0:
            raise FuelExhausted(f"fuel exhausted after {len(self.steps)} steps at {self.state}")

    def move(self, short: int, long: int, central: int, expect=None) -> DecoratedDiagram:
        """Apply a move with the given chord roles.

        When several germ triples carry the same roles, ``expect`` (a predicate
        on the classification of the result) picks the first one that fits.
        """
        self._burn()
        tried = []
        for mv in applicable_moves(self.state):
            if (mv.short, mv.long, mv.central) != (short, long, central):
                continue
            after = apply(self.state, mv)
            tried.append(mv)
            if expect is None or expect(classify_13(after)):
                self.steps.append(SchifferStep(mv))
                self.state = after
                return after
        what = "no triple" if not tried else f"no triple with the expected outcome among {len(tried)}"
        raise ConnectError(f"{what} for short={short}, long={long}, central={central} on {self.state}")

    def arm(self, target: DecoratedDiagram):
        if _same_state(self.state, target):
            return
        self._burn()
        st = _arm_step(target)
        M0, h0 = _arm_data(self.state)
        if (M0, h0) != (st.arm_module, st.head):
            raise ConnectError("arm equivalence requested between octopodes with different arm module or head")
        self.steps.append(st)
        self.state = target

    def extend(self, cert: Certificate):
        self.arm(cert.start)
        self.steps.extend(cert.steps)
        self.state = cert.end

    def certificate(self) -> Certificate:
        return Certificate(self.start.model, self.start.period, self.start, self.state, list(self.steps))


def _is_octopus(large=None, head=None):
    def pred(o):
        if not isinstance(o, Octopus):
            return False
        if large is not None and o.large != large:
            return False
        return head is None or o.head == head

    return pred


def _is_butterfly(o) -> bool:
    return isinstance(o, Butterfly)


def _independent(x: QuadExt, y: QuadExt) -> bool:
    """``x / y`` irrational."""
    return x.q0 * y.q1 - x.q1 * y.q0 != 0


# -- part 1: small head octopus to butterfly ----------------------------------------

def sho_to_butterfly(sho: Octopus, fuel: int = DEFAULT_FUEL) -> Certificate:
    if sho.large:
        raise PreconditionError("expected a small head octopus")
    dec = sho.dec
    _check_normalized(dec.period)
    path = _Path(dec, fuel)
    L = path.state.length
    a, b, c = sho.arms
    d = sho.head
    if not any(L(x) < L(d) for x in (a, b, c)):
        pairs = [(x, y) for x, y in ((a, b), (b, c), (c, a)) if _independent(L(x), L(y))]
        if not pairs:
            raise HypothesisError("no two arms have rationally independent lengths")
        x, y = pairs[0]
        (z,) = {a, b, c} - {x, y}
        while not any(L(t) < L(d) for t in (a, b, c)):
            L = path.state.length
            short, long_ = (x, y) if L(x) < L(y) else (y, x)
            path.move(short, long_, z, _is_octopus(False, d))
            L = path.state.length
    o = classify_13(path.state)
    assert isinstance(o, Octopus) and o.head == d
    L = path.state.length
    # arm positions are read off the current state; rotate so the short arm is c
    arms = o.arms
    r = next(r for r in (0, 1, 2) if L(arms[(2 + r) % 3]) < L(d))
    if r:
        rot = arms[r:] + arms[:r]
        cls = [path.state.classes[i] for i in rot] + [path.state.classes[d]]
        target = make_octopus(dec.model, dec.period, *cls)
        path.arm(target.dec)
        o = target
    a, b, c = o.arms
    path.move(c, o.head, b, _is_butterfly)
    return path.certificate()


# -- part 2: butterfly to large head octopus ----------------------------------------

def _part2_labels(bf: Butterfly):
    """Chord indices ``(A, B, C, D)`` with ``A + C`` the large head.

    The classification lists the butterfly as ``(a, b, c, d)`` with
    ``a + c = -pi1``; here the cyclic order is reversed so that
    ``A + C = -pi2`` and ``p(A + C) >= p(B + D)``.
    """
    a, b, c, d = bf.order
    return b, a, d, c


def butterfly_to_lho(bf: Butterfly, fuel: int = DEFAULT_FUEL) -> Certificate:
    dec = bf.dec
    p = dec.period
    _check_normalized(p)
    model = dec.model
    A, B, C, D = _part2_labels(bf)
    assert add(dec.classes[A], dec.classes[C]) == scale(-1, model.peripheral(2))
    path = _Path(dec, fuel)
    L = dec.length
    lho = _is_octopus(True)
    for short, long_, central in ((A, D, C), (A, B, C), (C, B, A), (C, D, A)):
        if L(short) < L(long_):
            try:
                path.move(short, long_, central, lho)
                return path.certificate()
            except ConnectError:
                continue
    # no one-move case: p(B), p(D) <= p(A), p(C)
    for x, y, central in ((A, B, C), (A, D, C), (C, D, A), (C, B, A)):
        if _independent(L(x), L(y)):
            break
    else:
        raise HypothesisError("all four butterfly length pairs are rationally dependent")
    # subtract y from x until x < y, keeping a butterfly, then one final move
    while path.state.length(x) > path.state.length(y):
        path.move(y, x, central, _is_butterfly)
    path.move(x, y, central, lho)
    return path.certificate()


def route_to_lho(dec: DecoratedDiagram, fuel: int = DEFAULT_FUEL) -> Certificate:
    """Certificate from any normalized (1,3) state to a large head octopus."""
    o = classify_13(dec)
    if isinstance(o, Octopus) and o.large:
        return Certificate(dec.model, dec.period, dec, dec, [])
    path = _Path(dec, fuel)
    if isinstance(o, Octopus):
        path.extend(sho_to_butterfly(o, fuel))
        o = classify_13(path.state)
    path.extend(butterfly_to_lho(o, path.fuel))
    return path.certificate()


# -- LHO1 ---------------------------------------------------------------------------

def lho1_step(lho: Octopus, fuel: int = DEFAULT_FUEL) -> Certificate:
    """From ``LHO(a, b, c | d)`` to a large head octopus with arm module ``M + a*``."""
    if not lho.large:
        raise PreconditionError("expected a large head octopus")
    dec = lho.dec
    _check_normalized(dec.period)
    a, b, c = lho.arms
    d = lho.head
    path = _Path(dec, fuel)
    # B(a, b+c | d-c, c): chord d now carries d - c, chord b carries b + c
    path.move(c, d, b, _is_butterfly)
    finish = _is_octopus(True)
    L = lambda i: path.state.length(i)  # noqa: E731
    while L(d) > L(b):
        path.move(b, d, c, _is_butterfly)
    if L(d) == L(b):
        if not L(a) < L(d):
            raise ConnectError("degenerate LHO1 chain: p(a) >= p(d-c) = p(b+c)")
        path.move(a, d, c, _is_butterfly)
        if not L(d) < L(b):
            raise ConnectError("degenerate LHO1 chain after the intermediate move")
    path.move(d, b, c, finish)
    return path.certificate()


# -- LHO2 ---------------------------------------------------------------------------

def _closed_dual(z):
    """Some closed ``w`` with ``z . w = 1`` for primitive ``z`` (genus one)."""
    z1, z2 = z
    # z . w = z1*w2 - z2*w1
    u = linalg.solve_integer([[z1], [-z2]], [1])
    if u is None:
        raise PreconditionError(f"{z} is not primitive")
    return (u[1], u[0])


def _lho_for(model, M: Submodule, psi, p: PeriodHom) -> Octopus:
    z = dual_to_cycle(model, psi)
    a = normalized_lift(model, M, p, z)
    pa = p.eval(a).re
    if not pa or pa.is_rational():
        raise PreconditionError("p_M(psi*) is rational")
    w0 = _closed_dual(z)
    one = QuadExt(1, 0, p.d)
    for k in itertools.chain([0], itertools.chain.from_iterable((j, -j) for j in itertools.count(1))):
        w = tuple(x + k * y for x, y in zip(w0, z))
        t = p_M_closed(model, M, p, w)
        if t.sign() > 0 and t < one - pa:
            break
    b = normalized_lift(model, M, p, w)
    c = sub(scale(-1, model.peripheral(1)), add(a, b))
    d = scale(-1, model.peripheral(2))
    o = make_octopus(model, p, a, b, c, d)
    if not o.large:
        raise ConnectError("constructed octopus does not have a large head")
    return o


def lho2_path(M: Submodule, psi, p: PeriodHom, fuel: int = DEFAULT_FUEL) -> Certificate:
    """Certificate between large head octopodes with arm modules ``M`` and ``M + psi``."""
    _check_normalized(p)
    model = p.model
    if not is_E_module(model, M, (2, 3)):
        raise PreconditionError("M is not a {pi2, pi3}-module")
    psi = tuple(int(x) for x in psi)
    u = gcd(*psi)
    if u == 0:
        raise PreconditionError("psi = 0")
    psi0 = tuple(x // u for x in psi)
    val = p_M_closed(model, M, p, dual_to_cycle(model, psi0))
    if val.is_rational():
        raise PreconditionError(f"p_M(psi*) = {val} is rational")
    path = None
    cur = M
    for _ in range(u):
        o = _lho_for(model, cur, psi0, p)
        assert star(model, cur, o.a) == psi0
        cert = lho1_step(o, fuel if path is None else path.fuel)
        nxt = module_translate(model, cur, psi0)
        end = classify_13(cert.end)
        if arm_module(end) != nxt:
            raise ConnectError("LHO1 did not advance the arm module by a*")
        if path is None:
            path = _Path(cert.start, fuel)
        path.extend(cert)
        cur = nxt
    return path.certificate()


# -- connecting arm modules ----------------------------------------------------------

def module_difference(model, M: Submodule, M2: Submodule):
    """The dual vector ``psi`` with ``M2 = M + psi`` (both {pi2, pi3}-modules)."""
    psi = []
    for h in ((1, 0), (0, 1)):
        # two lifts of h differ by k*pi1 + psi(h)*pi2
        diff = sub(lift(model, M2, h), lift(model, M, h))
        psi.append(diff[3])
    out = tuple(psi)
    if module_translate(model, M, out) != M2:
        raise ConnectError("arm modules do not differ by a translation")
    return out


def _dual_vectors():
    """Nonzero integer pairs by max-abs, then lexicographically."""
    for r in itertools.count(1):
        for v in itertools.product(range(-r, r + 1), repeat=2):
            if max(abs(t) for t in v) == r:
                yield v


def connect_arm_modules(M: Submodule, M2: Submodule, p: PeriodHom, fuel: int = DEFAULT_FUEL) -> Certificate | None:
    """LHO certificate from arm module ``M`` to ``M2``; ``None`` when they are equal."""
    _check_normalized(p)
    model = p.model
    if M == M2:
        return None
    psi = module_difference(model, M, M2)
    val = p_M_closed(model, M, p, dual_to_cycle(model, psi)) if gcd(*psi) else None
    if val is not None and not val.is_rational():
        return lho2_path(M, psi, p, fuel)
    for count, phi in enumerate(_dual_vectors()):
        if count > fuel:
            raise FuelExhausted("no auxiliary dual vector found")
        w = p_M_closed(model, M2, p, dual_to_cycle(model, phi))
        if not _in_peripheral_span(p, w):
            break
    tot = tuple(x + y for x, y in zip(psi, phi))
    first = lho2_path(M, tot, p, fuel)
    second = lho2_path(M2, phi, p, fuel)
    path = _Path(first.start, fuel)
    path.extend(first)
    path.extend(second.reversed())
    return path.certificate()


# -- assembly ------------------------------------------------------------------------

def connect(x: DecoratedDiagram, y: DecoratedDiagram, fuel: int = DEFAULT_FUEL) -> Certificate:
    """Certificate joining ``x`` to ``y`` (after the common normalization)."""
    if x.model != y.model:
        raise PreconditionError("the two diagrams live on different models")
    if x.period != y.period:
        bad = next(lab for lab, u, v in zip(x.model.labels, x.period.values, y.period.values) if u != v)
        raise PreconditionError(f"periods differ at class {bad}")
    if x.diagram.k != 4:
        raise UnsupportedCase("only single-zero (1,3) diagrams with four chords are supported")
    norm = check_hypothesis(x.period)
    xs, ys = norm.map_decorated(x), norm.map_decorated(y)
    p = xs.period
    vals = p.peripheral_values()
    if vals[0] == vals[1]:
        raise UnsupportedCase("p(pi1) = p(pi2): the large head is not determined")
    header = dict(normalization=None if norm.is_identity() else norm, original_period=None if norm.is_identity() else x.period)
    if _same_state(xs, ys):
        return Certificate(xs.model, p, xs, ys, [], **header)
    cx = route_to_lho(xs, fuel)
    cy = route_to_lho(ys, fuel)
    ox, oy = classify_13(cx.end), classify_13(cy.end)
    path = _Path(xs, fuel)
    path.extend(cx)
    mid = connect_arm_modules(arm_module(ox), arm_module(oy), p, fuel)
    if mid is not None:
        path.extend(mid)
    path.extend(cy.reversed())
    cert = path.certificate()
    cert.normalization = header["normalization"]
    cert.original_period = header["original_period"]
    return cert
