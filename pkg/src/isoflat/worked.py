"""The worked (1,3) example used by the self test, the tests and the docs.

``p(pi1) = -1``, ``p(pi2) = -2``, ``p(A) = sqrt2/4``, ``p(B) = 1/4`` and the
large head octopus ``LHO(A, B, -pi1-A-B | -pi2)`` with arm module
``span{A, B, pi1}``.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .chord import DecoratedDiagram, Octopus, make_octopus
from .homology import HomologyModel, add, make_model, scale
from .numbers import QuadExt
from .period import PeriodHom
from .schiffer import applicable_moves, apply


def model() -> HomologyModel:
    return make_model((1, 3))


def period(pA=None, pB=None) -> PeriodHom:
    """The worked period over Q(sqrt 2); ``pA``, ``pB`` override the closed values."""
    m = model()
    pA = QuadExt(0, Fraction(1, 4), 2) if pA is None else pA
    pB = QuadExt(Fraction(1, 4), 0, 2) if pB is None else pB
    return PeriodHom.from_labels(m, d=2, A=pA, B=pB, pi1=-1, pi2=-2)


def lho(p: PeriodHom | None = None) -> Octopus:
    p = period() if p is None else p
    m = p.model
    A, B = m.vec(A=1), m.vec(B=1)
    c = scale(-1, add(m.peripheral(1), add(A, B)))
    d = scale(-1, m.peripheral(2))
    return make_octopus(m, p, A, B, c, d)


def random_walk(dec: DecoratedDiagram, steps: int, rng: random.Random) -> DecoratedDiagram:
    """``steps`` uniformly chosen Schiffer moves."""
    for _ in range(steps):
        dec = apply(dec, rng.choice(applicable_moves(dec)))
    return dec
