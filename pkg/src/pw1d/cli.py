"""``pw1d``: command-line front end.

Three command groups share one output convention: every report starts with
the header line ``pw1d-format 1`` (a ``//`` comment in DOT), scalars are
always printed exactly, and orderings are fixed so output is reproducible.

Exit codes: 0 success, 1 usage or parse error, 2 validation error,
3 resource bound exceeded.
"""

import argparse
import json
import os
import sys

from . import partial as pa
from . import piecewise as pw
from . import regularize as rg
from .errors import NotHausdorff, ParseError, Pw1dError, ResourceError, ValidationError
from .scalar import format_point
from .textio import FORMAT_HEADER, parse_map, parse_maps

__all__ = ["main", "build_parser"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _common():
    p = _Parser(add_help=False)
    p.add_argument("--sqrt", type=int, default=None, metavar="K",
                   help="work in Q(sqrt K); scalars may use 'a+b*rt'")
    p.add_argument("--format", choices=("text", "json", "dot"), default="text")
    return p


def build_parser():
    common = _common()
    top = _Parser(prog="pw1d", description="Exact piecewise projective circle maps.")
    groups = top.add_subparsers(dest="group", required=True, parser_class=_Parser)

    p_pw = groups.add_parser("pw", help="single maps and compositions")
    pw_sub = p_pw.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    for name, nargs in (("canon", "+"), ("compose", "+"), ("inverse", "+"),
                        ("classify", "+"), ("order", "+"), ("convert", "+")):
        sp = pw_sub.add_parser(name, parents=[common])
        sp.add_argument("maps", nargs=nargs, help="map strings or files of maps")
        if name == "order":
            sp.add_argument("--bound", type=int, default=100)

    p_glob = groups.add_parser("glob", help="partial actions and globalization")
    glob_sub = p_glob.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    for name in ("ball", "commensurated", "trim", "ends", "verify"):
        sp = glob_sub.add_parser(name, parents=[common])
        sp.add_argument("spec", help="JSON spec file")
        sp.add_argument("--radius", type=int, default=2)
        if name == "ends":
            sp.add_argument("--collar", type=int, default=2)
        if name == "trim":
            sp.add_argument("--bound", type=int, default=3,
                            help="largest finite subset checked for a translate into X")
        if name == "verify":
            sp.add_argument("--samples", type=int, default=20)
            sp.add_argument("--seed", type=int, default=0)

    p_reg = groups.add_parser("reg", help="regularization of finite groups")
    reg_sub = p_reg.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    for name in ("build", "classify", "conjugate", "verify"):
        sp = reg_sub.add_parser(name, parents=[common])
        sp.add_argument("generators", help="file with one generator per line")
        sp.add_argument("--bound", type=int, default=1000, help="largest group enumerated")
        sp.add_argument("--mode", choices=(rg.AFFINE, rg.PROJECTIVE), default=None)
        sp.add_argument("--no-trim", dest="trim", action="store_false",
                        help="keep conflicting gluings instead of dropping them")
    return top


# -- helpers ----------------------------------------------------------------

def _read(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _maps(args):
    out = []
    for item in args.maps:
        if os.path.isfile(item):
            out.extend(parse_maps(_read(item), args.sqrt))
        else:
            out.append(parse_map(item, args.sqrt))
    if not out:
        raise ValidationError("no maps given")
    return out


def _emit(args, lines=(), data=None, dot=None):
    if args.format == "json":
        payload = {"format": FORMAT_HEADER}
        payload.update(data or {})
        return json.dumps(payload, indent=2) + "\n"
    if args.format == "dot":
        if dot is None:
            raise UsageError("this command has no DOT output")
        return dot
    return "\n".join([FORMAT_HEADER, *lines]) + "\n"


def _flag(v):
    return "true" if v else "false"


# -- pw ---------------------------------------------------------------------

def _run_pw(args):
    maps = _maps(args)
    cmd = args.cmd
    if cmd == "canon":
        res = [str(pw.canonicalize(f)) for f in maps]
        return _emit(args, res, {"maps": res})
    if cmd == "compose":
        h = maps[-1]
        for f in reversed(maps[:-1]):
            h = pw.compose(f, h)
        return _emit(args, [str(h)], {"map": str(h)})
    if cmd == "inverse":
        res = [str(pw.inverse(f)) for f in maps]
        return _emit(args, res, {"maps": res})
    if cmd == "convert":
        res = [str(pw.convert_model(f)) for f in maps]
        return _emit(args, res, {"maps": res})
    if cmd == "order":
        res = []
        for f in maps:
            n = pw.order_of(f, args.bound)
            res.append(f"order {n}" if isinstance(n, int) else f"order >{args.bound}")
        return _emit(args, res, {"orders": [r.split()[1] for r in res]})
    lines, data = [], []
    for f in maps:
        props = {
            "global": pw.is_global(f),
            "continuous": pw.is_continuous(f),
            "c1": pw.is_C1(f),
            "piecewise-affine": pw.is_piecewise_affine(f),
            "iet": pw.is_IET(f),
        }
        bps = [format_point(b) for b in pw.breakpoints(f)]
        sing = [format_point(b) for b in pw.singular_points(f)]
        lines.append(f"map {f}")
        lines.extend(f"{k}={_flag(v)}" for k, v in props.items())
        lines.append("breakpoints " + (" ".join(bps) or "-"))
        lines.append("singular " + (" ".join(sing) or "-"))
        data.append({"map": str(f), **props, "breakpoints": bps, "singular": sing})
    return _emit(args, lines, {"maps": data})


# -- glob -------------------------------------------------------------------

def _seed_copy(ball):
    return [c.id for c in ball.classes if not c.word]


def _run_glob(args):
    spec = pa.load_spec(_read(args.spec), args.sqrt)
    ball = pa.globalize_ball(spec, args.radius)
    cmd = args.cmd
    if cmd == "ball":
        data = ball.to_dict()
        data.pop("format")
        return _emit(args, ball.to_text().splitlines()[1:], data, ball.to_dot())
    if cmd == "commensurated":
        res = pa.commensurated_check(ball, _seed_copy(ball))
        lines, data = [], {}
        for name, c in res.items():
            lines.append(f"letter {name} difference {len(c.difference)} classes "
                         f"{' '.join(map(str, c.difference)) or '-'} "
                         f"stale {_flag(c.stale)}")
            data[name] = {"difference": list(c.difference), "stale": c.stale}
        return _emit(args, lines, {"letters": data})
    if cmd == "trim":
        res = pa.neumann_trim(ball, _seed_copy(ball), bound=args.bound)
        lines = ["y " + (" ".join(map(str, res.y)) or "-")]
        lines.extend("removed " + " ".join(map(str, o)) for o in res.removed_orbits)
        names = spec.generators
        lines.append(f"witnesses {len(res.witnesses)}")
        for F, w in res.witnesses.items():
            lines.append(f"witness {' '.join(map(str, F))} {pa.format_word(w, names)}")
        data = {"y": list(res.y), "removed": [list(o) for o in res.removed_orbits],
                "witnesses": [[list(F), pa.format_word(w, names)]
                              for F, w in res.witnesses.items()]}
        return _emit(args, lines, data)
    if cmd == "ends":
        rep = pa.ends_estimate(ball, args.collar)
        lines = [f"ends {rep.estimate} stable-from {rep.stable_from}"]
        lines.extend(f"radius {r} components {n}" for r, n in rep.counts)
        data = {"ends": rep.estimate, "stable_from": rep.stable_from,
                "counts": [list(c) for c in rep.counts]}
        return _emit(args, lines, data)
    rep = pa.verify_axioms(spec, args.radius, samples=args.samples, seed=args.seed)
    lines = [f"axioms ok words {rep.words} points {rep.points} checks {rep.checks}"]
    return _emit(args, lines, {"ok": True, "words": rep.words, "points": rep.points,
                               "checks": rep.checks})


# -- reg --------------------------------------------------------------------

def _run_reg(args):
    gens = parse_maps(_read(args.generators), args.sqrt)
    group = rg.enumerate_group(gens, args.bound)
    man = rg.cut_and_glue(group, mode=args.mode, trim=args.trim)
    head = [f"group order {len(group)} model {group[0].model} mode {man.mode}"]
    cmd = args.cmd
    if cmd == "build":
        data = man.to_dict()
        data.pop("format")
        return _emit(args, head + man.to_text().splitlines()[1:], data, man.to_dot())
    if cmd == "classify":
        comps = man.components()
        lines = head + [f"components {len(comps)}"]
        data = []
        for i, comp in enumerate(comps):
            try:
                label = str(rg.classify_component(man, i))
            except NotHausdorff:
                label = "NotHausdorff"
            lines.append(f"component {i} arcs {' '.join(map(str, comp))} {label}")
            data.append({"arcs": comp, "classification": label})
        return _emit(args, lines, {"components": data})
    k = rg.conjugator(group, man)
    if cmd == "conjugate":
        return _emit(args, [str(k)], {"conjugator": str(k)})
    ok = rg.verify_regularized(group, k)
    return _emit(args, [f"verified {_flag(ok)}"], {"verified": ok})


def _exit_code(exc):
    if isinstance(exc, (UsageError, ParseError, json.JSONDecodeError, OSError)):
        return 1
    if isinstance(exc, ResourceError):
        return 3
    return 2


def main(argv=None, stdout=None, stderr=None):
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        args = build_parser().parse_args(argv)
        run = {"pw": _run_pw, "glob": _run_glob, "reg": _run_reg}[args.group]
        stdout.write(run(args))
        return 0
    except (UsageError, Pw1dError, ValueError, OSError, KeyError) as exc:
        hint = ""
        if type(exc).__name__ in ("BallTooSmall", "NotClosed"):
            hint = " (try a larger --radius)"
        stderr.write(f"error: {type(exc).__name__}: {exc}{hint}\n")
        return _exit_code(exc)


if __name__ == "__main__":
    sys.exit(main())
