"""Reference homology ``H_1(S - R, Z)`` of a pointed surface of type (g, n).

Classes are plain integer tuples in the basis
``(a_1, b_1, ..., a_g, b_g, pi_1, ..., pi_{n-1})``.  The last peripheral
class ``pi_n`` is not a basis vector: it is stored as ``-(pi_1 + ... + pi_{n-1})``
so the relation ``sum(pi_i) = 0`` holds by construction.

Submodules are kept in Hermite normal form, which makes equality of
submodules (arm modules, E-modules) a tuple comparison.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import linalg
from .numbers import QuadExt

__all__ = [
    "SurfaceType",
    "HomologyModel",
    "Submodule",
    "make_model",
    "intersection",
    "is_E_module",
    "star",
    "dual_to_cycle",
    "module_translate",
    "lift",
    "p_M",
    "random_modular_element",
    "peripheral_translation",
    "transvection",
    "is_modular",
]

HClass = tuple


@dataclass(frozen=True)
class SurfaceType:
    g: int
    n: int

    def __post_init__(self):
        if self.g < 0 or self.n < 0:
            raise ValueError("genus and number of points must be non-negative")
        if 2 * self.g + self.n - 1 < 0:
            raise ValueError("the sphere with no marked point has no reference homology here")

    @property
    def rank(self) -> int:
        return 2 * self.g + max(self.n - 1, 0)


@dataclass(frozen=True)
class HomologyModel:
    surface_type: SurfaceType
    labels: tuple = field(init=False)
    J: tuple = field(init=False, repr=False)

    def __post_init__(self):
        g, n = self.surface_type.g, self.surface_type.n
        if g == 1:
            labels = ["A", "B"]
        else:
            labels = [f"{s}{i}" for i in range(1, g + 1) for s in ("a", "b")]
        labels += [f"pi{i}" for i in range(1, n)]
        m = len(labels)
        J = [[0] * m for _ in range(m)]
        for i in range(g):
            J[2 * i][2 * i + 1] = 1
            J[2 * i + 1][2 * i] = -1
        object.__setattr__(self, "labels", tuple(labels))
        object.__setattr__(self, "J", tuple(tuple(r) for r in J))

    @property
    def g(self) -> int:
        return self.surface_type.g

    @property
    def n(self) -> int:
        return self.surface_type.n

    @property
    def rank(self) -> int:
        return self.surface_type.rank

    def zero(self) -> HClass:
        return (0,) * self.rank

    def basis(self, i: int) -> HClass:
        v = [0] * self.rank
        v[i] = 1
        return tuple(v)

    def vec(self, **coeffs) -> HClass:
        """Build a class from label coefficients, e.g. ``vec(A=1, pi1=-1)``.

        ``pi{n}`` is accepted and expanded into the negated sum.
        """
        v = [0] * self.rank
        for name, k in coeffs.items():
            if name == f"pi{self.n}" and self.n >= 1:
                v = list(add(v, scale(k, self.peripheral(self.n))))
                continue
            try:
                v[self.labels.index(name)] += k
            except ValueError:
                raise KeyError(f"unknown basis label {name!r}") from None
        return tuple(v)

    def peripheral(self, i: int) -> HClass:
        """Peripheral class ``pi_i`` for ``1 <= i <= n``."""
        if not 1 <= i <= self.n:
            raise IndexError(f"peripheral index {i} out of range 1..{self.n}")
        v = [0] * self.rank
        off = 2 * self.g
        if i < self.n:
            v[off + i - 1] = 1
        else:
            for j in range(self.n - 1):
                v[off + j] = -1
        return tuple(v)

    def peripherals(self) -> list[HClass]:
        return [self.peripheral(i) for i in range(1, self.n + 1)]

    def closed_part(self, x: HClass) -> HClass:
        """Image of ``x`` under ``H_1(S - R) -> H_1(S)`` (drop peripheral coordinates)."""
        return tuple(x[: 2 * self.g])

    def check(self, x) -> HClass:
        x = tuple(int(t) for t in x)
        if len(x) != self.rank:
            raise ValueError(f"class {x} has length {len(x)}, model rank is {self.rank}")
        return x

    def intersection(self, x: HClass, y: HClass) -> int:
        x, y = self.check(x), self.check(y)
        total = 0
        for i in range(self.g):
            total += x[2 * i] * y[2 * i + 1] - x[2 * i + 1] * y[2 * i]
        return total

    def format(self, x: HClass) -> str:
        terms = []
        for k, lab in zip(x, self.labels):
            if k == 0:
                continue
            coef = "" if k == 1 else "-" if k == -1 else f"{k}*"
            terms.append(f"{coef}{lab}")
        if not terms:
            return "0"
        return " + ".join(terms).replace("+ -", "- ")

    def to_json(self) -> dict:
        return {"genus": self.g, "points": self.n}


def make_model(t: SurfaceType | tuple) -> HomologyModel:
    if not isinstance(t, SurfaceType):
        t = SurfaceType(*t)
    return HomologyModel(t)


def intersection(model: HomologyModel, x: HClass, y: HClass) -> int:
    return model.intersection(x, y)


def add(x, y) -> HClass:
    return tuple(a + b for a, b in zip(x, y))


def sub(x, y) -> HClass:
    return tuple(a - b for a, b in zip(x, y))


def scale(k: int, x) -> HClass:
    return tuple(k * a for a in x)


def combo(*terms) -> HClass:
    """``combo((2, a), (-1, b))`` is ``2a - b``."""
    out = None
    for k, x in terms:
        out = scale(k, x) if out is None else add(out, scale(k, x))
    return out


@dataclass(frozen=True)
class Submodule:
    """A submodule of Z^rank, stored by its canonical (Hermite) basis."""

    rank: int
    rows: tuple

    @classmethod
    def span(cls, gens, rank: int | None = None) -> "Submodule":
        gens = [tuple(int(t) for t in g) for g in gens]
        if rank is None:
            if not gens:
                raise ValueError("rank required for an empty generator list")
            rank = len(gens[0])
        if any(len(g) != rank for g in gens):
            raise ValueError("generator length mismatch")
        rows = linalg.hnf(gens, rank) if gens else ()
        return cls(rank, rows)

    @classmethod
    def full(cls, rank: int) -> "Submodule":
        return cls(rank, tuple(tuple(r) for r in linalg.identity(rank)))

    def generators(self) -> list[HClass]:
        return list(self.rows)

    def dim(self) -> int:
        return len(self.rows)

    def __contains__(self, x) -> bool:
        return linalg.solve_integer(list(self.rows), list(x)) is not None

    def coefficients(self, x) -> list[int] | None:
        return linalg.solve_integer(list(self.rows), list(x))

    def __add__(self, other: "Submodule") -> "Submodule":
        return Submodule.span(list(self.rows) + list(other.rows), self.rank)

    def __and__(self, other: "Submodule") -> "Submodule":
        if not self.rows or not other.rows:
            return Submodule(self.rank, ())
        stacked = list(self.rows) + list(other.rows)
        ker = linalg.integer_kernel(stacked)
        k = len(self.rows)
        gens = []
        for u in ker:
            gens.append(tuple(sum(u[i] * self.rows[i][j] for i in range(k)) for j in range(self.rank)))
        return Submodule.span(gens, self.rank) if gens else Submodule(self.rank, ())

    def is_full(self) -> bool:
        return self == Submodule.full(self.rank)

    def to_json(self) -> list:
        return [list(r) for r in self.rows]


def peripheral_module(model: HomologyModel, E) -> Submodule:
    return Submodule.span([model.peripheral(e) for e in E], model.rank)


def peripheral_sum(model: HomologyModel, E) -> HClass:
    out = model.zero()
    for e in E:
        out = add(out, model.peripheral(e))
    return out


def is_E_module(model: HomologyModel, M: Submodule, E) -> bool:
    """``H_1 = M + Pi_E`` and ``M & Pi_E = Z pi_E``."""
    E = sorted(set(E))
    if len(E) < 2:
        raise ValueError("an E-module needs |E| >= 2")
    PE = peripheral_module(model, E)
    if not (M + PE).is_full():
        return False
    return (M & PE) == Submodule.span([peripheral_sum(model, E)], model.rank)


def _check_13(model: HomologyModel):
    if (model.g, model.n) != (1, 3):
        raise ValueError("this operation is specific to surfaces of type (1,3)")


def star(model: HomologyModel, M: Submodule, x: HClass):
    """The linear form ``x*`` on ``H_1(S) = Z^2g`` given by intersection with ``i_M(x)``.

    Convention: ``x*(y) = y . i_M(x)``.  With it, a large head octopus
    ``LHO(a,b,c|d)`` with ``a.b = 1`` is moved by one LHO1 step to ``M + a*``
    (see ``connect13.lho1_step``).  Values are returned on the basis
    ``(a_1, b_1, ..., a_g, b_g)``.
    """
    x = model.check(x)
    if x not in M:
        raise ValueError(f"{model.format(x)} is not in the module")
    xb = model.closed_part(x)
    g = model.g
    out = []
    for j in range(2 * g):
        y = [0] * (2 * g)
        y[j] = 1
        out.append(_closed_intersection(y, xb, g))
    return tuple(out)


def _closed_intersection(x, y, g) -> int:
    return sum(x[2 * i] * y[2 * i + 1] - x[2 * i + 1] * y[2 * i] for i in range(g))


def dual_to_cycle(model: HomologyModel, phi) -> tuple:
    """The closed cycle ``z`` in ``H_1(S)`` with ``phi(y) = y . z``; inverse of :func:`star`."""
    g = model.g
    z = [0] * (2 * g)
    for i in range(g):
        # phi(a_i) = z_{b_i}, phi(b_i) = -z_{a_i}
        z[2 * i + 1] = phi[2 * i]
        z[2 * i] = -phi[2 * i + 1]
    return tuple(z)


def eval_dual(phi, y) -> int:
    return sum(a * b for a, b in zip(phi, y))


def module_translate(model: HomologyModel, M: Submodule, phi, direction: int = 2) -> Submodule:
    """``M + phi = {x + phi(i_M(x)) pi_direction : x in M}``.

    The translation direction defaults to ``pi_2``, the convention used for
    {pi_2, pi_3}-modules of the (1,3) surface.
    """
    _check_13(model)
    if not is_E_module(model, M, (2, 3)):
        raise ValueError("module is not a {pi_2, pi_3}-module")
    pd = model.peripheral(direction)
    gens = []
    for x in M.rows:
        k = eval_dual(phi, model.closed_part(x))
        gens.append(add(x, scale(k, pd)))
    return Submodule.span(gens, model.rank)


def lift(model: HomologyModel, M: Submodule, h) -> HClass:
    """Some ``x`` in ``M`` whose image in ``H_1(S)`` is ``h``."""
    g2 = 2 * model.g
    proj = [list(r[:g2]) for r in M.rows]
    u = linalg.solve_integer(proj, list(h))
    if u is None:
        raise ValueError(f"{h} is not in the image of the module")
    return tuple(sum(u[i] * M.rows[i][j] for i in range(len(u))) for j in range(model.rank))


def _real_value(p, x) -> QuadExt:
    z = p.eval(x)
    if z.im:
        raise ValueError("p_M requires a real-valued period")
    return z.re


def check_pm_normalization(model: HomologyModel, p) -> None:
    _check_13(model)
    if p.eval(model.peripheral(1)) != -1:
        raise ValueError("p_M requires the normalization p(pi_1) = -1")


def p_M(model: HomologyModel, M: Submodule, p, x: HClass) -> QuadExt:
    """Fractional part of ``p(x)``, i.e. ``p_M(x + Z pi_1)`` in ``R/Z``."""
    check_pm_normalization(model, p)
    x = model.check(x)
    if x not in M:
        raise ValueError(f"{model.format(x)} is not in the module")
    return _real_value(p, x).floor_frac()[1]


def p_M_closed(model: HomologyModel, M: Submodule, p, h) -> QuadExt:
    """``p_M`` evaluated on a closed class ``h`` of ``H_1(S) = M / Z pi_1``."""
    return p_M(model, M, p, lift(model, M, h))


def normalized_lift(model: HomologyModel, M: Submodule, p, h) -> HClass:
    """The unique lift ``x`` of ``h`` in ``M`` with ``p(x)`` in ``[0, 1)``."""
    check_pm_normalization(model, p)
    x = lift(model, M, h)
    k = _real_value(p, x).floor()
    # p(pi_1) = -1, so adding k*pi_1 subtracts k
    return add(x, scale(k, model.peripheral(1)))


# -- modular group ------------------------------------------------------------

def transvection(model: HomologyModel, v: HClass, sign: int = 1):
    """Matrix of ``x -> x + sign*(x . v) v``; preserves ``J`` and fixes peripherals."""
    m = model.rank
    T = linalg.identity(m)
    for j in range(m):
        k = sign * model.intersection(model.basis(j), v)
        for i in range(m):
            T[i][j] += k * v[i]
    return T


def peripheral_translation(model: HomologyModel, beta: HClass, target: int):
    """Matrix of ``gamma -> gamma + (beta . gamma) pi_target`` (point pushing)."""
    m = model.rank
    T = linalg.identity(m)
    pt = model.peripheral(target)
    for j in range(m):
        k = model.intersection(beta, model.basis(j))
        for i in range(m):
            T[i][j] += k * pt[i]
    return T


def is_modular(model: HomologyModel, T) -> bool:
    """``T^t J T == J`` and ``T pi_i == pi_i`` for every peripheral class."""
    J = [list(r) for r in model.J]
    if linalg.mat_mul(linalg.transpose(T), linalg.mat_mul(J, T)) != J:
        return False
    return all(tuple(linalg.mat_vec(T, list(pi))) == pi for pi in model.peripherals())


def random_modular_element(model: HomologyModel, seed=None, length: int = 8, max_coeff: int = 2):
    """A random word in transvections and peripheral translations.

    Returns an integer ``rank x rank`` matrix acting on column vectors.
    ``length=0`` gives the identity.
    """
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    m = model.rank
    T = linalg.identity(m)
    if m == 0:
        return T
    for _ in range(length):
        v = tuple(rng.randint(-max_coeff, max_coeff) for _ in range(m))
        if model.n >= 2 and rng.random() < 0.4:
            G = peripheral_translation(model, v, rng.randint(1, model.n))
        else:
            G = transvection(model, v, rng.choice((1, -1)))
        T = linalg.mat_mul(G, T)
    return T


def apply_matrix(T, x) -> HClass:
    return tuple(linalg.mat_vec(T, list(x)))


