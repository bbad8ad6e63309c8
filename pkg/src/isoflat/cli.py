"""Command line interface: ``isoflat <command> ...``.

Exit codes: 0 ok, 1 verification or logic failure, 2 bad input or schema,
3 a case the theory here does not cover.

File formats
------------
period file
    ``{"d": 2, "genus": g, "points": n, "values": [[re_q0, re_q1, im_q0, im_q1], ...]}``
decorated diagram file
    a period file with the diagram keys ``k``, ``positions``, ``chords`` and
    ``classes`` added at top level
generators file (``closure``)
    ``{"d": 2, "generators": [[re_q0, re_q1, im_q0, im_q1], ...]}``, or a period file
certificate
    as written by ``connect``
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import warnings

from . import __version__
from . import connect13 as c13
from .chord import (
    LEFT,
    RIGHT,
    DecoratedDiagram,
    DecorationError,
    Octopus,
    RealizabilityWarning,
    arm_module,
    classify_13,
    enumerate_diagrams,
)
from .numbers import ComplexExact, FieldMismatch, is_squarefree, set_default_d
from .period import (
    PeriodHom,
    PreconditionError,
    UnsupportedCase,
    classify_leaf_closure,
    discrete_factors,
    haupt_check,
    image_closure,
    normalize,
    subgroup_closure,
    v_invariant,
    volume,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_UNSUPPORTED = 0, 1, 2, 3


class InputError(ValueError):
    pass


# -- i/o helpers ----------------------------------------------------------------

def _load(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path} is not valid JSON: {e}") from None


def _check_d(obj, cfg):
    d = int(obj["d"])
    if cfg.d_explicit is not None and d != cfg.d_explicit:
        raise FieldMismatch(f"file uses d={d} but --d={cfg.d_explicit}")
    return d


def _read_period(path, cfg) -> PeriodHom:
    obj = _load(path)
    _check_d(obj, cfg)
    return PeriodHom.from_json(obj)


def _read_decorated(path, cfg) -> DecoratedDiagram:
    obj = _load(path)
    _check_d(obj, cfg)
    p = PeriodHom.from_json(obj)
    return DecoratedDiagram.from_json(obj, p.model, p)


def decorated_to_json(dec: DecoratedDiagram) -> dict:
    out = dec.period.to_json()
    out.update(dec.to_json())
    return out


def _emit(cfg, obj):
    print(json.dumps(obj, indent=2))


# -- commands ---------------------------------------------------------------------

def cmd_enumerate(args, cfg) -> int:
    if not 1 <= args.chords <= 8:
        raise InputError("--chords must be between 1 and 8")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RealizabilityWarning)
        found = enumerate_diagrams(args.chords, args.cycles, args.genus, signed=args.signed, jobs=cfg.jobs)
    if args.count:
        print(len(found))
        return EXIT_OK
    if cfg.format == "json":
        _emit(cfg, [d.to_json() for d in found])
    elif cfg.format == "dot":
        print("\n".join(d.to_dot() for d in found))
    else:
        for d in found:
            print(f"{d}  cycles={d.n_cycles()} (right {len(d.cycles(RIGHT))}, left {len(d.cycles(LEFT))}) genus={d.genus()}")
    return EXIT_OK


def _describe(dec: DecoratedDiagram) -> dict:
    out = {
        "diagram": str(dec.diagram),
        "genus": dec.diagram.genus(),
        "cycles": dec.diagram.n_cycles(),
        "lengths": [str(x) for x in dec.lengths()],
    }
    model = dec.model
    if (model.g, model.n) == (1, 3) and dec.diagram.k == 4:
        norm = c13.normalize_period(dec.period)
        if not norm.is_identity():
            out["renumbering"] = norm.to_json()
            dec = norm.map_decorated(dec)
        o = classify_13(dec)
        out["kind"] = o.kind
        out["marking"] = str(o)
        if isinstance(o, Octopus):
            out["arm_module"] = arm_module(o).to_json()
    return out


def cmd_classify(args, cfg) -> int:
    dec = _read_decorated(args.file, cfg)
    info = _describe(dec)
    if cfg.format == "json":
        _emit(cfg, info)
    elif cfg.format == "dot":
        print(dec.to_dot())
    else:
        for k, v in info.items():
            print(f"{k}: {v}")
    return EXIT_OK


def _invariants(p: PeriodHom) -> dict:
    out = {"image_closure": str(image_closure(p))}
    out["discrete_factors"] = [str(f) for f in discrete_factors(p)]
    if p.model.g >= 1:
        out["volume"] = str(volume(p))
        out["haupt"] = str(haupt_check(p))
    try:
        T, q = normalize(p)
    except PreconditionError as e:
        out["leaf_closure"] = f"not normalizable: {e}"
        return out
    try:
        out["V"] = str(v_invariant(q))
    except PreconditionError:
        pass
    lc = classify_leaf_closure(q)
    out["leaf_closure"] = str(lc)
    out["case"] = lc.case
    notes = list(lc.notes)
    if (p.model.g, p.model.n) == (1, 3) and p.is_real():
        try:
            c13.check_hypothesis(p)
            notes.append("hypothesis of the (1,3) connectedness theorem holds")
        except (c13.HypothesisError, PreconditionError) as e:
            notes.append(str(e))
    out["notes"] = notes
    return out


def cmd_invariants(args, cfg) -> int:
    p = _read_period(args.file, cfg)
    info = _invariants(p)
    if cfg.format == "json":
        _emit(cfg, info)
    else:
        for k, v in info.items():
            print(f"{k}: {v}")
    return EXIT_OK


def cmd_closure(args, cfg) -> int:
    obj = _load(args.file)
    d = _check_d(obj, cfg)
    if "generators" in obj:
        cl = subgroup_closure([ComplexExact.from_json(v, d) for v in obj["generators"]], d)
    else:
        cl = image_closure(PeriodHom.from_json(obj))
    if cfg.format == "json":
        _emit(cfg, {"tag": cl.tag, "closure": str(cl), "discrete": cl.is_discrete})
    else:
        print(cl)
    return EXIT_OK


def cmd_connect(args, cfg) -> int:
    x = _read_decorated(args.x, cfg)
    y = _read_decorated(args.y, cfg)
    cert = c13.connect(x, y, fuel=cfg.fuel)
    res = c13.verify(cert)
    text = json.dumps(cert.to_json(), indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    elif cfg.format == "json":
        print(text)
    trace = cert.arm_trace()
    out = sys.stderr if (cfg.format == "json" and not args.out) else sys.stdout
    print(f"steps: {len(cert)} ({cert.n_schiffer} schiffer)", file=out)
    print("arm-module trace:", file=out)
    for M in trace:
        print(f"  {M.to_json()}", file=out)
    print(f"verified = {str(bool(res)).lower()}", file=out)
    return EXIT_OK if res else EXIT_FAIL


def cmd_verify(args, cfg) -> int:
    cert = c13.Certificate.from_json(_load(args.file))
    res = c13.verify(cert)
    print(res)
    return EXIT_OK if res else EXIT_FAIL


def cmd_selftest(args, cfg) -> int:
    from .selftest import run

    ok = run(seed=cfg.seed, fuel=cfg.fuel, out=sys.stdout)
    return EXIT_OK if ok else EXIT_FAIL


# -- parser -----------------------------------------------------------------------

class Config:
    def __init__(self, args):
        env = os.environ.get("ISOFLAT_D")
        self.d_explicit = args.d
        try:
            self.d = args.d if args.d is not None else int(env) if env else 2
        except ValueError:
            raise InputError(f"ISOFLAT_D={env!r} is not an integer") from None
        if self.d < 2 or not is_squarefree(self.d):
            raise InputError(f"d must be square-free and >= 2, got {self.d}")
        self.fuel = args.fuel
        if self.fuel < 1:
            raise InputError("--fuel must be >= 1")
        self.format = args.format
        self.seed = args.seed
        self.jobs = args.jobs if args.jobs else (os.cpu_count() or 1)
        if self.jobs < 1:
            raise InputError("--jobs must be >= 1")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--d", type=int, default=argparse.SUPPRESS, help="field parameter d of Q(sqrt d)")
    p.add_argument("--fuel", type=int, default=argparse.SUPPRESS, help="loop bound for constructions")
    p.add_argument("--format", choices=("text", "json", "dot"), default=argparse.SUPPRESS)
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    p.add_argument("--jobs", type=int, default=argparse.SUPPRESS, help="worker processes (default: all cores)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = argparse.ArgumentParser(prog="isoflat", description=__doc__.splitlines()[0], parents=[common])
    ap.add_argument("--version", action="version", version=f"isoflat {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", parents=[common], help="list chord diagram classes")
    p.add_argument("--chords", "-k", type=int, required=True)
    p.add_argument("--cycles", "-n", type=int)
    p.add_argument("--genus", "-g", type=int)
    p.add_argument("--count", action="store_true", help="print only the number of classes")
    p.add_argument("--signed", action="store_true", help="do not identify a diagram with its reversal")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("classify", parents=[common], help="describe a decorated diagram")
    p.add_argument("file")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("invariants", parents=[common], help="period invariants and leaf-closure case")
    p.add_argument("file")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("closure", parents=[common], help="closure of a subgroup of C")
    p.add_argument("file")
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("connect", parents=[common], help="certificate joining two (1,3) diagrams")
    p.add_argument("x")
    p.add_argument("y")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_connect)

    p = sub.add_parser("verify", parents=[common], help="replay a certificate")
    p.add_argument("file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("selftest", parents=[common], help="quick end-to-end checks")
    p.set_defaults(func=cmd_selftest)
    return ap


_DEFAULTS = {"d": None, "fuel": c13.DEFAULT_FUEL, "format": "text", "seed": 0, "jobs": None}


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    for k, v in _DEFAULTS.items():
        if not hasattr(args, k):
            setattr(args, k, v)
    try:
        cfg = Config(args)
        set_default_d(cfg.d)
        random.seed(cfg.seed)
        return args.func(args, cfg)
    except UnsupportedCase as e:
        print(f"unsupported: {e}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except c13.SchemaError as e:
        print(f"schema error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (c13.ConnectError, c13.FuelExhausted) as e:
        print(f"failed: {e}", file=sys.stderr)
        return EXIT_FAIL
    except (InputError, DecorationError, PreconditionError, FieldMismatch) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (KeyError, TypeError, ValueError) as e:
        print(f"error: malformed input: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
