"""Fast end-to-end checks behind ``isoflat selftest``."""

from __future__ import annotations

import random
import sys
import warnings

from . import connect13 as c13
from . import worked
from .chord import LEFT, RealizabilityWarning, arm_module, classify_13, enumerate_diagrams
from .homology import module_translate, star
from .numbers import ComplexExact
from .period import haupt_check
from .schiffer import MoveError


def _types_lemma() -> bool:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RealizabilityWarning)
        found = enumerate_diagrams(4, 3)
    heads = sorted(any(len(c) == 1 for c in d.cycles(LEFT)) for d in found)
    return len(found) == 2 and heads == [False, True]


def _lho1() -> bool:
    o = worked.lho()
    m = o.dec.model
    M = arm_module(o)
    cert = c13.lho1_step(o)
    end = classify_13(cert.end)
    return bool(c13.verify(cert)) and arm_module(end) == module_translate(m, M, star(m, M, o.a))


def _haupt() -> bool:
    r = haupt_check([ComplexExact(1, 0, 2), ComplexExact(0, 1, 2)])
    return r.passes and r.volume == 1


def _connect(seed: int, fuel: int) -> bool:
    rng = random.Random(seed)
    start = worked.lho().dec
    x = worked.random_walk(start, rng.randint(1, 10), rng)
    y = worked.random_walk(start, rng.randint(1, 10), rng)
    cert = c13.connect(x, y, fuel=fuel)
    if not c13.verify(cert):
        return False
    steps = [i for i, s in enumerate(cert.steps) if isinstance(s, c13.SchifferStep)]
    if not steps:
        return True
    i = rng.choice(steps)
    mv = cert.steps[i].move
    bad = c13.SchifferStep(type(mv)(mv.long, mv.short, mv.central, mv.positions))
    tampered = c13.Certificate(cert.model, cert.period, cert.start, cert.end, cert.steps[:i] + [bad] + cert.steps[i + 1 :])
    try:
        return not c13.verify(tampered)
    except MoveError:
        return False


def run(seed: int = 0, fuel: int = c13.DEFAULT_FUEL, out=sys.stdout) -> bool:
    checks = [
        ("two (1,3) diagram types", _types_lemma),
        ("LHO1 advances the arm module by a*", _lho1),
        ("Haupt (1, i) passes with volume 1", _haupt),
        ("random connect verifies and tampering is caught", lambda: _connect(seed, fuel)),
    ]
    ok = True
    for name, fn in checks:
        try:
            res = fn()
        except Exception as e:  # report, keep going
            res = False
            name += f" ({type(e).__name__}: {e})"
        ok &= res
        print(f"{'PASS' if res else 'FAIL'}  {name}", file=out)
    return ok
