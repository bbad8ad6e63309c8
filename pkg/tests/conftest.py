import sys
import warnings
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from isoflat import worked  # noqa: E402
from isoflat.chord import RealizabilityWarning, make_butterfly  # noqa: E402
from isoflat.homology import make_model, scale, sub  # noqa: E402
from isoflat.numbers import QuadExt  # noqa: E402
from isoflat.period import PeriodHom  # noqa: E402

warnings.simplefilter("ignore", RealizabilityWarning)

DATA = Path(__file__).resolve().parent.parent / "data"


def q(a=0, b=0):
    """``a + b*sqrt2``."""
    return QuadExt(Fraction(a), Fraction(b), 2)


SQRT2 = q(0, 1)


def period13(pA, pB, v=2):
    """Normalized (1,3) period over Q(sqrt2) with ``p(pi1) = -1``, ``p(pi2) = -v``."""
    m = make_model((1, 3))
    return PeriodHom.from_labels(m, d=2, A=pA, B=pB, pi1=-1, pi2=-v)


def lho13(pA, pB, v=2):
    """``LHO(A, B, -pi1-A-B | -pi2)`` over :func:`period13`."""
    return worked.lho(period13(pA, pB, v))


def butterfly13(x, y, v):
    """Butterfly with classify labels ``a = A``, ``b = B``, ``c = -pi1-A``, ``d = -pi2-B``.

    ``p(A) = x`` in (0, 1), ``p(B) = y`` in (0, v).
    """
    p = period13(x, y, v)
    m = p.model
    A, B = m.vec(A=1), m.vec(B=1)
    c = sub(scale(-1, m.peripheral(1)), A)
    d = sub(scale(-1, m.peripheral(2)), B)
    return make_butterfly(m, p, A, B, c, d)


@pytest.fixture
def m13():
    return make_model((1, 3))


@pytest.fixture
def wp():
    return worked.period()


@pytest.fixture
def wlho():
    return worked.lho()


# -- acceptance summary ------------------------------------------------------------

_ACCEPTANCE = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if item.module.__name__.endswith("test_acceptance") and item.name.startswith("test_criterion"):
        if rep.when == "call" or (rep.when == "setup" and rep.failed):
            title = (item.function.__doc__ or item.name).strip().splitlines()[0]
            _ACCEPTANCE[item.name] = (title, rep.outcome, rep.duration)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE, key=lambda s: int(s.split("_")[2])):
        title, outcome, dur = _ACCEPTANCE[name]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{verdict}  {title}  ({dur:.2f}s)")
