"""Period homomorphisms and their Mod-invariants.

A :class:`PeriodHom` assigns an exact complex value to every basis class of
a :class:`~isoflat.homology.HomologyModel`.  Everything here is decided
exactly inside Q(sqrt d): the closure of the image subgroup, discrete
factors, volume and Haupt degree, the V-invariant, orbit-closure membership
and the leaf-closure case split.

Closure of a finitely generated subgroup of C = R^2
---------------------------------------------------
Each value is a vector of Q^4 in the basis ``1, sqrt d, i, i sqrt d``.  Let
``W`` be the Q-span of the generators and ``r = dim W``.  Collinear
generators give ``Cyclic`` (r = 1) or ``DenseLine`` (r = 2).  Otherwise
r = 2 is a lattice, r = 4 is dense in the plane, and for r = 3 the closure is
a line plus a discrete transverse step exactly when ``W`` contains a
Q(sqrt d)-line, i.e. when ``U = {v in W : sqrt(d) v in W}`` is non-zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
import math

from . import linalg
from .homology import HomologyModel, apply_matrix, make_model
from .numbers import ComplexExact, QuadExt, cross

__all__ = [
    "PeriodHom",
    "ClosureDescriptor",
    "DiscreteFactor",
    "HauptReport",
    "LeafClosure",
    "PreconditionError",
    "UnsupportedCase",
    "PeripheralMismatch",
    "subgroup_closure",
    "image_closure",
    "discrete_factors",
    "volume",
    "haupt_check",
    "v_invariant",
    "in_orbit_closure",
    "normalize",
    "sphere_form",
    "classify_leaf_closure",
]


class PreconditionError(ValueError):
    """An operation's mathematical precondition does not hold."""


class UnsupportedCase(ValueError):
    """Real periods inside Q (x) p(Pi): the leaf-closure theorem does not cover it."""


class PeripheralMismatch(ValueError):
    pass


class PeriodHom:
    """``p : H_1(S - R, Z) -> C`` given by its values on the model basis."""

    __slots__ = ("model", "values")

    def __init__(self, model: HomologyModel, values):
        values = tuple(v if isinstance(v, ComplexExact) else ComplexExact(v) for v in values)
        if len(values) != model.rank:
            raise ValueError(f"need {model.rank} values, got {len(values)}")
        if len({v.d for v in values}) > 1:
            raise ValueError("values come from different quadratic fields")
        object.__setattr__(self, "model", model)
        object.__setattr__(self, "values", values)

    def __setattr__(self, name, value):
        raise AttributeError("PeriodHom is immutable")

    @classmethod
    def from_labels(cls, model: HomologyModel, d: int | None = None, **vals) -> "PeriodHom":
        """``from_labels(model, A=..., B=..., pi1=...)``; missing labels are 0."""
        values = []
        for lab in model.labels:
            v = vals.pop(lab, 0)
            values.append(v if isinstance(v, ComplexExact) else ComplexExact(v, 0, d))
        if vals:
            raise KeyError(f"unknown labels {sorted(vals)}")
        return cls(model, values)

    @property
    def d(self) -> int:
        return self.values[0].d if self.values else 2

    def eval(self, x) -> ComplexExact:
        x = self.model.check(x)
        out = ComplexExact(0, 0, self.d)
        for k, v in zip(x, self.values):
            if k:
                out = out + v * k
        return out

    __call__ = eval

    def peripheral_values(self) -> list[ComplexExact]:
        return [self.eval(pi) for pi in self.model.peripherals()]

    def closed_values(self) -> list[ComplexExact]:
        return list(self.values[: 2 * self.model.g])

    def compose(self, T) -> "PeriodHom":
        """``p o T`` for an integer matrix ``T`` acting on column vectors."""
        m = self.model.rank
        return PeriodHom(self.model, [self.eval(apply_matrix(T, self.model.basis(j))) for j in range(m)])

    def is_real(self) -> bool:
        return all(v.is_real() for v in self.values)

    def map_values(self, f) -> "PeriodHom":
        return PeriodHom(self.model, [f(v) for v in self.values])

    def __eq__(self, other):
        if not isinstance(other, PeriodHom):
            return NotImplemented
        return self.model == other.model and self.values == other.values

    def __hash__(self):
        return hash((self.model, self.values))

    def __repr__(self):
        body = ", ".join(f"{lab}={v}" for lab, v in zip(self.model.labels, self.values))
        return f"PeriodHom({body})"

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "genus": self.model.g,
            "points": self.model.n,
            "values": [v.to_json() for v in self.values],
        }

    @classmethod
    def from_json(cls, obj) -> "PeriodHom":
        """Period file: ``{"d", "genus", "points", "values": [[re_q0, re_q1, im_q0, im_q1], ...]}``."""
        model = make_model((int(obj["genus"]), int(obj["points"])))
        d = int(obj["d"])
        return cls(model, [ComplexExact.from_json(v, d) for v in obj["values"]])


# -- closure of a subgroup of C ------------------------------------------------

TAGS = ("Zero", "Cyclic", "Lattice", "DenseLine", "LinePlusDiscrete", "Plane")


@dataclass(frozen=True)
class ClosureDescriptor:
    """Closure of a finitely generated subgroup of C.

    ``generators``: the cyclic generator, or a canonical lattice basis.
    ``direction``: the line direction (normalized: real part 1, or imaginary
    part 1 for a vertical line).  ``step``: the positive generator of
    ``cross(direction, .)`` on the group for ``LinePlusDiscrete``.
    ``transverse`` is one group element realizing that step.
    """

    tag: str
    generators: tuple = ()
    direction: ComplexExact | None = None
    step: QuadExt | None = None
    transverse: ComplexExact | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ValueError(f"unknown closure tag {self.tag!r}")

    @property
    def is_discrete(self) -> bool:
        return self.tag in ("Zero", "Cyclic", "Lattice")

    def covolume(self) -> QuadExt:
        if self.tag != "Lattice":
            raise ValueError("covolume is only defined for lattices")
        return abs(cross(*self.generators))

    def contains(self, z: ComplexExact) -> bool:
        """Exact membership of ``z`` in the closed subgroup."""
        if self.tag == "Plane":
            return True
        if self.tag == "Zero":
            return not z
        if self.tag == "DenseLine":
            return not cross(self.direction, z)
        if self.tag == "LinePlusDiscrete":
            t = cross(self.direction, z) / self.step
            return t.is_rational() and t.q0.denominator == 1
        return _in_group(list(self.generators), z)

    def __str__(self):
        if self.tag in ("Zero", "Plane"):
            return self.tag
        if self.tag in ("Cyclic", "Lattice"):
            return f"{self.tag}({', '.join(map(str, self.generators))})"
        if self.tag == "DenseLine":
            return f"DenseLine(direction {self.direction})"
        return f"LinePlusDiscrete(line {self.direction}, step {self.step})"


def _normalize_direction(v: ComplexExact) -> ComplexExact:
    if v.re:
        return ComplexExact(QuadExt(1, 0, v.d), v.im / v.re)
    return ComplexExact(QuadExt(0, 0, v.d), QuadExt(1, 0, v.d))


def _orient(z: ComplexExact) -> ComplexExact:
    # canonical representative of {z, -z}
    s = z.re.sign() or z.im.sign()
    return z if s > 0 else -z


def _cyclic_gen(values, d: int) -> QuadExt | None:
    """Non-negative generator of the subgroup of R generated by ``values``.

    Returns 0 for the zero group and ``None`` if the group is not cyclic.
    """
    nz = [v for v in values if v]
    if not nz:
        return QuadExt(0, 0, d)
    c0 = nz[0]
    ratios = []
    for v in nz:
        t = v / c0
        if not t.is_rational():
            return None
        ratios.append(t.q0)
    return abs(c0 * linalg.rational_gcd(ratios))


def _z_basis(vectors: list[list[Fraction]], basis_rows: list[list[Fraction]], pivots: list[int]):
    """Z-basis (as Q^4 vectors) of the group generated by ``vectors`` inside span(basis_rows)."""
    coords = [[v[c] for c in pivots] for v in vectors]
    flat = [x for row in coords for x in row]
    _, L = linalg.clear_denominators(flat)
    ints = [[int(x * L) for x in row] for row in coords]
    H = linalg.hnf(ints, len(pivots))
    out = []
    for row in H:
        vec = [sum(Fraction(row[i], L) * basis_rows[i][j] for i in range(len(pivots))) for j in range(4)]
        out.append(vec)
    return out


def _in_group(gens: list[ComplexExact], z: ComplexExact) -> bool:
    vecs = [list(g.coords()) for g in gens]
    target = list(z.coords())
    flat = [x for v in vecs for x in v] + target
    _, L = linalg.clear_denominators(flat)
    rows = [[int(x * L) for x in v] for v in vecs]
    return linalg.solve_integer(rows, [int(x * L) for x in target]) is not None


def subgroup_closure(gens, d: int | None = None) -> ClosureDescriptor:
    """Exact closure in C of the subgroup generated by ``gens``."""
    gens = [g for g in gens if g]
    if not gens:
        return ClosureDescriptor("Zero")
    d = gens[0].d
    vecs = [list(g.coords()) for g in gens]
    R, piv = linalg.rational_rref(vecs)
    r = len(piv)
    base = next(g for g in gens)
    collinear = all(not cross(base, g) for g in gens)
    if collinear:
        if r == 1:
            (w,) = _z_basis(vecs, R, piv)
            return ClosureDescriptor("Cyclic", (_orient(ComplexExact.from_coords(w, d)),))
        return ClosureDescriptor("DenseLine", direction=_normalize_direction(base))
    if r == 2:
        w1, w2 = (ComplexExact.from_coords(w, d) for w in _z_basis(vecs, R, piv))
        return ClosureDescriptor("Lattice", (w1, w2))
    if r == 4:
        return ClosureDescriptor("Plane")
    # r == 3: look for a Q(sqrt d)-line inside W
    line = _quadratic_line(R, d)
    if line is None:
        return ClosureDescriptor("Plane")
    v = _normalize_direction(line)
    steps = [cross(v, g) for g in gens]
    nz = [(s, g) for s, g in zip(steps, gens) if s]
    c0 = nz[0][0]
    ratios = [(s / c0).q0 for s, _ in nz]
    step_ratio = linalg.rational_gcd(ratios)
    step = abs(c0 * step_ratio)
    k = linalg.extended_gcd_combination(ratios)
    w = ComplexExact(0, 0, d)
    for ki, (_, g) in zip(k, nz):
        w = w + g * ki
    if cross(v, w) < 0:
        w = -w
    return ClosureDescriptor("LinePlusDiscrete", direction=v, step=step, transverse=w)


def _times_sqrt_d(c, d: int):
    # multiplication by sqrt(d) on the Q^4 coordinates (re0, re1, im0, im1)
    return [d * c[1], c[0], d * c[3], c[2]]


def _quadratic_line(R, d: int) -> ComplexExact | None:
    """A non-zero ``v`` with both ``v`` and ``sqrt(d) v`` in ``W = rowspan(R)``, or None."""
    # v = sum x_i R_i ; need sqrt(d) v in W, i.e. orthogonal to W's annihilator
    ann = linalg.rational_nullspace(R, 4)
    img = [_times_sqrt_d(row, d) for row in R]
    # conditions: for each a in ann, sum_i x_i <img_i, a> = 0
    cond = [[sum(img[i][j] * a[j] for j in range(4)) for i in range(len(R))] for a in ann]
    sols = linalg.rational_nullspace(cond, len(R)) if cond else [[Fraction(int(i == j)) for j in range(len(R))] for i in range(len(R))]
    if not sols:
        return None
    x = sols[0]
    v = [sum(x[i] * R[i][j] for i in range(len(R))) for j in range(4)]
    return ComplexExact.from_coords(v, d)


def image_closure(p: PeriodHom) -> ClosureDescriptor:
    """Closure of ``p(H_1)`` in C."""
    return subgroup_closure(p.values)


# -- discrete factors -----------------------------------------------------------

@dataclass(frozen=True)
class DiscreteFactor:
    """``phi = alpha*Re + beta*Im`` with ``phi(p(H_1)) = delta*Z``.

    ``(alpha, beta)`` is normalized up to positive scaling (first non-zero
    coefficient is +-1).  ``delta == 0`` marks a degenerate factor (image {0}).
    """

    alpha: QuadExt
    beta: QuadExt
    delta: QuadExt

    @property
    def degenerate(self) -> bool:
        return not self.delta

    def __call__(self, z: ComplexExact) -> QuadExt:
        return self.alpha * z.re + self.beta * z.im

    def same_kernel(self, other: "DiscreteFactor") -> bool:
        return not (self.alpha * other.beta - self.beta * other.alpha)

    def image_of(self, values) -> QuadExt | None:
        """Generator of ``phi(<values>)``; None when that image is not discrete."""
        vals = [self(v) for v in values]
        d = self.alpha.d
        return _cyclic_gen(vals, d)

    def __str__(self):
        flag = " (degenerate)" if self.degenerate else ""
        return f"{self.alpha}*Re + {self.beta}*Im, image {self.delta}Z{flag}"


def _make_factor(alpha: QuadExt, beta: QuadExt, values) -> DiscreteFactor | None:
    lead = alpha if alpha else beta
    s = abs(lead)
    alpha, beta = alpha / s, beta / s
    f = DiscreteFactor(alpha, beta, QuadExt(0, 0, alpha.d))
    delta = f.image_of(values)
    if delta is None:
        return None
    return DiscreteFactor(alpha, beta, delta)


def _kernel_factor(v: ComplexExact, values) -> DiscreteFactor | None:
    # the factor cross(v, .) vanishes on the real line through v
    return _make_factor(-v.im, v.re, values)


def discrete_factors(p) -> list[DiscreteFactor]:
    """Non-trivial discrete factors up to positive scaling (0, 1 or 2 of them).

    Accepts a :class:`PeriodHom` or a list of complex values.
    """
    values = list(p.values) if isinstance(p, PeriodHom) else list(p)
    cl = subgroup_closure(values)
    if not values:
        return []
    d = values[0].d
    one, zero = QuadExt(1, 0, d), QuadExt(0, 0, d)
    if cl.tag in ("Zero", "Plane"):
        return []
    if cl.tag == "Cyclic":
        (g,) = cl.generators
        return [f for f in (_kernel_factor(g, values), _make_factor(g.re, g.im, values)) if f]
    if cl.tag == "Lattice":
        re_f = _make_factor(one, zero, values)
        im_f = _make_factor(zero, one, values)
        if re_f is not None and im_f is not None:
            return [re_f, im_f]
        w1, w2 = cl.generators
        return [_kernel_factor(w2, values), _kernel_factor(w1, values)]
    return [_kernel_factor(cl.direction, values)]


# -- volume and Haupt ------------------------------------------------------------

def volume(p) -> QuadExt:
    """``sum_i Re p(a_i) Im p(b_i) - Re p(b_i) Im p(a_i)`` over the symplectic block.

    Accepts a :class:`PeriodHom` or a flat list ``[p(a1), p(b1), p(a2), ...]``.
    """
    vals = p.closed_values() if isinstance(p, PeriodHom) else list(p)
    if len(vals) % 2:
        raise ValueError("symplectic block needs an even number of values")
    total = QuadExt(0, 0, vals[0].d if vals else None)
    for i in range(0, len(vals), 2):
        total = total + cross(vals[i], vals[i + 1])
    return total


@dataclass(frozen=True)
class HauptReport:
    volume: QuadExt
    image: ClosureDescriptor
    degree: int | float
    passes: bool

    def __str__(self):
        deg = "inf" if self.degree == math.inf else str(self.degree)
        verdict = "passes" if self.passes else "fails"
        return f"volume {self.volume}, image {self.image}, degree {deg}: {verdict}"


def haupt_check(p) -> HauptReport:
    """Haupt conditions ``vol > 0`` and ``deg >= 2`` (degree 1 is allowed in genus 1)."""
    vals = p.closed_values() if isinstance(p, PeriodHom) else list(p)
    g = len(vals) // 2
    if g < 1:
        raise PreconditionError("Haupt conditions need genus >= 1")
    vol = volume(vals)
    image = subgroup_closure(vals)
    if image.tag == "Lattice":
        ratio = vol / image.covolume()
        if not ratio.is_rational() or ratio.q0.denominator != 1:
            raise AssertionError("volume is not an integer multiple of the covolume")
        degree = int(ratio.q0)
    elif image.is_discrete:
        degree = 0 if not vol else math.inf  # collinear periods have zero volume
    else:
        degree = math.inf
    passes = vol > 0 and (g == 1 or degree >= 2)
    return HauptReport(vol, image, degree, passes)


# -- V invariant -------------------------------------------------------------------

def _peripheral_generator(p: PeriodHom) -> ClosureDescriptor:
    return subgroup_closure(p.peripheral_values())


def v_invariant(p: PeriodHom, section=None) -> QuadExt:
    """``V(p) = Vol(p o sigma) mod delta`` for normalized ``p``.

    Requires ``p(Pi) = Z`` and ``Im`` a non-degenerate discrete factor with
    image ``delta Z``.  ``section`` optionally lists the lifts of
    ``a_1, b_1, ..., a_g, b_g`` used as sigma (default: the basis classes).
    """
    model = p.model
    if model.g < 1:
        raise PreconditionError("V needs genus >= 1")
    pcl = _peripheral_generator(p)
    one = QuadExt(1, 0, p.d)
    if not (pcl.tag == "Cyclic" and pcl.generators[0] == ComplexExact(one, 0)):
        raise PreconditionError("peripheral periods must generate exactly Z (clause p(Pi) = Z)")
    delta = _cyclic_gen([v.im for v in p.values], p.d)
    if delta is None:
        raise PreconditionError("Im is not a discrete factor (imaginary parts are not cyclic)")
    if not delta:
        raise PreconditionError("Im factor is degenerate (delta = 0): all periods are real")
    if section is None:
        vals = p.closed_values()
    else:
        if len(section) != 2 * model.g:
            raise ValueError("section needs one lift per symplectic basis class")
        for j, s in enumerate(section):
            if model.closed_part(s) != model.closed_part(model.basis(j)):
                raise ValueError("section entry does not lift the basis class")
        vals = [p.eval(s) for s in section]
    vol = volume(vals)
    k = (vol / delta).floor()
    return vol - delta * k


def _v_frame(p: PeriodHom):
    """Real-linear ``T`` with ``T p(Pi) = Z`` and closure ``R + iZ``, if one exists."""
    pcl = _peripheral_generator(p)
    if pcl.tag != "Cyclic":
        return None
    cl = image_closure(p)
    if cl.tag != "LinePlusDiscrete":
        return None
    (z0,) = pcl.generators
    if cross(cl.direction, z0):
        return None
    w = cl.transverse
    if cross(z0, w) < 0:
        w = -w
    return _inverse_columns(z0, w)


# -- GL2(R) normalization ----------------------------------------------------------

def _inverse_columns(u: ComplexExact, v: ComplexExact):
    """Matrix of the real-linear map sending ``u -> 1`` and ``v -> i``."""
    det = cross(u, v)
    if not det:
        raise PreconditionError("columns are R-collinear")
    # inverse of [[u.re, v.re], [u.im, v.im]]
    return ((v.im / det, -v.re / det), (-u.im / det, u.re / det))


def _rotation_scaling(z0: ComplexExact):
    w = z0.inverse()
    return ((w.re, -w.im), (w.im, w.re))


def apply_real_linear(T, z: ComplexExact) -> ComplexExact:
    (a, b), (c, e) = T
    return ComplexExact(a * z.re + b * z.im, c * z.re + e * z.im)


def normalize(p: PeriodHom):
    """Return ``(T, T o p)`` with ``T`` real-linear, invertible, entries in Q(sqrt d).

    Cyclic peripheral group ``Z z0`` -> ``z0 -> 1`` by rotation-scaling.
    Peripherals on a dense line -> a peripheral value goes to 1 (with the
    transverse step of the whole image sent to i when there is one).
    Otherwise: line + step peripherals send line to R and step to i; lattice
    peripherals send the basis to (1, i); planar peripherals rotate a
    peripheral value to 1.
    """
    pv = p.peripheral_values()
    nz = [v for v in pv if v]
    if not nz:
        raise PreconditionError("all peripheral periods are zero")
    pcl = subgroup_closure(pv)
    if pcl.tag == "Cyclic":
        T = _rotation_scaling(pcl.generators[0])
    elif pcl.tag == "DenseLine":
        z0 = _orient(nz[0])
        full = image_closure(p)
        if full.tag == "LinePlusDiscrete" and not cross(full.direction, z0):
            w = full.transverse if cross(z0, full.transverse) > 0 else -full.transverse
            T = _inverse_columns(z0, w)
        else:
            T = _rotation_scaling(z0)
    elif pcl.tag == "LinePlusDiscrete":
        T = _inverse_columns(pcl.direction, pcl.transverse)
    elif pcl.tag == "Lattice":
        w1, w2 = pcl.generators
        if cross(w1, w2) < 0:
            w2 = -w2
        T = _inverse_columns(w1, w2)
    else:
        T = _rotation_scaling(_orient(nz[0]))
    return T, p.map_values(lambda z: apply_real_linear(T, z))


# -- orbit closures ------------------------------------------------------------------

def _same_subgroup(a: list[ComplexExact], b: list[ComplexExact]) -> bool:
    ca, cb = subgroup_closure(a), subgroup_closure(b)
    if not (ca.is_discrete and cb.is_discrete):
        return False
    return ca == cb


def in_orbit_closure(p: PeriodHom, q: PeriodHom) -> bool:
    """Is ``q`` in the closure of the Mod-orbit of ``p``?

    Checks: ``q(H_1)`` inside the closure of ``p(H_1)``; every discrete
    factor of ``p`` is one of ``q`` with the same image (for a discrete image
    this means ``q(H_1) = p(H_1)``, since C -> C itself is then a discrete
    factor); equal V-values when ``p`` normalizes to ``p(Pi) = Z`` with closure
    ``R + iZ``.
    """
    if p.model != q.model:
        raise ValueError("periods live on different models")
    for i, (u, v) in enumerate(zip(p.peripheral_values(), q.peripheral_values()), start=1):
        if u != v:
            raise PeripheralMismatch(f"peripheral periods differ at pi{i}: {u} vs {v}")
    cl = image_closure(p)
    if not all(cl.contains(z) for z in q.values):
        return False
    if cl.is_discrete:
        if not _same_subgroup(list(p.values), list(q.values)):
            return False
    else:
        for f in discrete_factors(p):
            if f.image_of(q.values) != f.delta:
                return False
    T = _v_frame(p)
    if T is not None:
        pn = p.map_values(lambda z: apply_real_linear(T, z))
        qn = q.map_values(lambda z: apply_real_linear(T, z))
        try:
            if v_invariant(pn) != v_invariant(qn):
                return False
        except PreconditionError:
            return False
    return True


# -- genus zero -------------------------------------------------------------------------

def sphere_form(peripherals) -> list[ComplexExact]:
    """Residue data of ``sum_j alpha_j dz / (z - z_j)`` (the 1/(2 pi i) factor implied).

    Any genus-zero period with these peripheral values is realized by it.
    """
    vals = [v if isinstance(v, ComplexExact) else ComplexExact(v) for v in peripherals]
    if len(vals) < 2:
        raise PreconditionError("need at least two poles")
    if any(not v for v in vals):
        raise PreconditionError("every peripheral period must be non-zero")
    total = ComplexExact(0, 0, vals[0].d)
    for v in vals:
        total = total + v
    if total:
        raise PreconditionError(f"peripheral periods sum to {total}, not 0")
    return vals


# -- leaf closures --------------------------------------------------------------------------

@dataclass(frozen=True)
class LeafClosure:
    case: str
    closure: ClosureDescriptor
    data: dict = field(default_factory=dict)
    notes: tuple = ()

    def __str__(self):
        extra = ", ".join(f"{k}={v}" for k, v in self.data.items())
        return f"case {self.case}: {self.closure}" + (f" [{extra}]" if extra else "")


def in_rational_span_of_peripherals(p: PeriodHom) -> bool:
    """Is ``p(H_1)`` contained in ``Q (x) p(Pi)``?"""
    rows = [list(v.coords()) for v in p.peripheral_values()]
    return all(linalg.rational_solve(rows, list(v.coords())) is not None for v in p.values)


def classify_leaf_closure(p: PeriodHom) -> LeafClosure:
    """Case 1, 2, 3a-3d of the leaf-closure classification for a normalized ``p``."""
    d = p.d
    one = ComplexExact(QuadExt(1, 0, d), 0)
    pv = p.peripheral_values()
    pcl = subgroup_closure(pv)
    if not pcl.contains(one) or not _in_group(pv, one) and pcl.is_discrete:
        raise PreconditionError("not normalized: Z must be contained in p(Pi)")
    if pcl.tag == "Cyclic" and pcl.generators[0] != one:
        raise PreconditionError("not normalized: cyclic p(Pi) must equal Z")
    if not _in_group(pv, one):
        raise PreconditionError("not normalized: 1 must be a peripheral period combination")
    if p.is_real() and in_rational_span_of_peripherals(p):
        raise UnsupportedCase("real periods inside Q (x) p(Pi): this case is not covered")
    cl = image_closure(p)
    if cl.is_discrete:
        return LeafClosure("1", cl, notes=("closed leaf",))
    if cl.tag == "Plane":
        return LeafClosure("2", cl)
    if cl.tag == "DenseLine":
        return LeafClosure("3a", cl)
    v = cl.direction
    if not v.im:
        data = {"delta": cl.step}
        if pcl.tag == "Cyclic":
            data["V"] = v_invariant(p)
            return LeafClosure("3c", cl, data)
        return LeafClosure("3b", cl, data)
    beta = -v.re / v.im
    f = _make_factor(QuadExt(1, 0, d), beta, list(p.values))
    return LeafClosure(
        "3d",
        cl,
        {"beta": beta, "delta": f.delta},
        notes=("(Re + beta Im)(Lambda) is reported as discrete; a finite subgroup of R would be {0}",),
    )
