"""Command-line front end.

Subcommands::

    adelcoh cohomology --instance FILE [--window LO..HI] [--format json|csv|pretty]
    adelcoh check SUITE [--seed N] [--max-vertices N] [--instance FILE]
    adelcoh dump --instance FILE
    adelcoh split --target P=VALUE ... [--precision K] [--convention complex|difference]

Every failure prints one line ``E_CODE: message`` on stderr and exits non-zero.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .adelic import AssemblyError, POLICIES, adelic_cohomology, assemble, decompose_by_dimension
from .coeff import NonStabilizingError
from .exactla.abelian import UndeterminedExtension, UnsupportedScalars
from .exactla.complex import ComplexError, WindowError
from .exactla.modules import ModuleError, Window

EXIT = {"E_PARSE": 2, "E_SCHEMA": 3, "E_ASSEMBLY": 4, "E_STABILIZATION": 5, "E_PRECISION": 6,
        "E_WINDOW": 7, "E_SUITE": 8, "E_IO": 9}
KINDS = ("number-ring", "polynomial", "torus", "poset")


class CliError(Exception):
    def __init__(self, code: str, message: str):
        self.code = code
        super().__init__(message)


# ---------------------------------------------------------------- parsing


def parse_window(text, n: int | None = None) -> Window:
    """``"lo..hi"`` (a cube) or ``"a,b..c,d"``; lists ``[lo, hi]`` are accepted too."""
    if isinstance(text, list):
        if len(text) != 2:
            raise CliError("E_SCHEMA", "window list must be [lo, hi]")
        text = f"{text[0]}..{text[1]}"
    if not isinstance(text, str) or ".." not in text:
        raise CliError("E_WINDOW", f"malformed window {text!r}; expected LO..HI")
    a, b = text.split("..", 1)
    try:
        lo = tuple(int(x) for x in a.split(","))
        hi = tuple(int(x) for x in b.split(","))
    except ValueError:
        raise CliError("E_WINDOW", f"malformed window {text!r}") from None
    if len(lo) != len(hi):
        raise CliError("E_WINDOW", f"window bounds {text!r} have different lengths")
    if n is not None:
        if len(lo) == 1:
            lo, hi = lo * n, hi * n
        elif len(lo) != n:
            raise CliError("E_WINDOW", f"window has {len(lo)} coordinates, instance needs {n}")
    w = Window(lo, hi)
    if w.empty:
        raise CliError("E_WINDOW", f"empty window {text}")
    return w


def read_instance(path: str) -> dict:
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as e:
        raise CliError("E_IO", f"cannot read {path}: {e.strerror}") from None
    except tomllib.TOMLDecodeError as e:
        raise CliError("E_PARSE", f"{path}: {e}") from None
    if data.get("format") != 1:
        raise CliError("E_SCHEMA", f"{path}: expected 'format = 1', got {data.get('format')!r}")
    kind = data.get("kind")
    if kind not in KINDS:
        raise CliError("E_SCHEMA", f"{path}: 'kind' must be one of {', '.join(KINDS)}")
    return data


def _need(data: dict, key: str, typ, what: str):
    if key not in data:
        raise CliError("E_SCHEMA", f"missing field '{key}' ({what})")
    v = data[key]
    if not isinstance(v, typ) or isinstance(v, bool):
        raise CliError("E_SCHEMA", f"field '{key}' must be {what}")
    return v


def _integer(x) -> int:
    if isinstance(x, int) and not isinstance(x, bool):
        return x
    if isinstance(x, str):
        try:
            f = Fraction(x)
        except ValueError:
            raise CliError("E_SCHEMA", f"matrix entry {x!r} is not a number") from None
        if f.denominator == 1:
            return int(f)
    raise CliError("E_SCHEMA", f"matrix entry {x!r} is not an integer")


def _matrix(rows) -> list:
    if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
        raise CliError("E_SCHEMA", "'module' must be a list of rows")
    return [[_integer(x) for x in r] for r in rows]


# ---------------------------------------------------------------- building


def build(data: dict, args) -> tuple:
    """``(spec or None, runner)`` where ``runner()`` returns a CohomologyTable."""
    kind = data["kind"]
    if kind == "number-ring":
        return _number_ring(data, args)
    if kind == "polynomial":
        return _polynomial(data, args)
    if kind == "torus":
        return _torus(data, args)
    return _poset(data, args)


def _number_ring(data, args):
    from .instances.numberring import VARIANTS, hasse_spec

    primes = _need(data, "primes", list, "a list of primes")
    rel = _matrix(data.get("module", []))
    ngens = data.get("generators")
    if ngens is None and not rel:
        raise CliError("E_SCHEMA", "a module without relations needs 'generators'")
    variant = args.variant or data.get("variant", "L,LambdaR")
    policy = args.policy or data.get("policy", "specializations")
    if variant not in VARIANTS:
        raise CliError("E_SCHEMA", f"unknown variant {variant!r}; expected one of {', '.join(VARIANTS)}")
    if policy not in POLICIES:
        raise CliError("E_SCHEMA", f"unknown policy {policy!r}; expected one of {', '.join(POLICIES)}")
    precision = args.precision or data.get("precision", 32)
    if not isinstance(precision, int) or precision < 1:
        raise CliError("E_SCHEMA", "precision must be a positive integer")
    try:
        spec = hasse_spec(primes, rel, ngens, variant=variant, policy=policy, precision=precision,
                          split=tuple(data.get("split", (0,))))
    except ValueError as e:
        raise CliError("E_SCHEMA", str(e)) from None
    return spec, lambda: adelic_cohomology(spec)


def _polynomial(data, args):
    from .exactla.modules import PresentedModule, graded_atom
    from .instances.cech import koszul_local_cohomology, koszul_spec, parse_monomial, polynomial_ring

    names = _need(data, "vars", list, "a list of variable names")
    gens = _need(data, "generators", list, "a list of monomials")
    g, R = polynomial_ring(names)
    mod = data.get("module", {})
    try:
        if mod:
            ideal = [parse_monomial(m, g) for m in mod.get("ideal", [])]
            shift = tuple(mod.get("shift", [0] * len(names)))
            a = graded_atom(g, "R", range(len(names)), shift, ideal)
            R = PresentedModule(() if a is None else (a,), g)
        mons = [parse_monomial(m, g) for m in gens]
    except (ValueError, ModuleError) as e:
        raise CliError("E_SCHEMA", str(e)) from None
    w = parse_window(args.window if args.window else _need(data, "window", (str, list), "LO..HI"), len(names))
    augmented = data.get("augmented", True)
    spec = koszul_spec(g, mons, R, w)
    return spec, lambda: koszul_local_cohomology(g, mons, R, w, augmented=augmented)


def _torus(data, args):
    from .instances.torus import TorusRank1Instance, torus_rank1_spec

    orders = _need(data, "orders", list, "a list of subgroup orders")
    w = parse_window(args.window if args.window else data.get("window", "-12..4"), 1)
    try:
        inst = TorusRank1Instance(tuple(orders), w.lo[0], w.hi[0])
    except ValueError as e:
        raise CliError("E_SCHEMA", str(e)) from None
    spec = torus_rank1_spec(inst)
    return spec, lambda: adelic_cohomology(spec)


def _poset(data, args):
    from .coeff import LocalizationSystem, constant_system, identity_rule
    from .adelic import AdelicSpec
    from .exactla.modules import PresentedModule, abelian_atom
    from .exactla.scalars import Q
    from .poset import Poset

    elements = _need(data, "elements", list, "a list of elements")
    key = "covers" if "covers" in data else "relations"
    rel = data.get(key, [])
    if not isinstance(rel, list) or any(not isinstance(r, list) or len(r) != 2 for r in rel):
        raise CliError("E_SCHEMA", f"'{key}' must be a list of [larger, smaller] pairs")
    try:
        P = Poset(elements, [tuple(r) for r in rel])
    except ValueError as e:
        raise CliError("E_SCHEMA", str(e)) from None
    q = PresentedModule((abelian_atom(Q),))
    spec = AdelicSpec(P, constant_system(P, q), LocalizationSystem(P, {p: identity_rule for p in P.elements}),
                      policy=args.policy or data.get("policy", "specializations"))
    return spec, lambda: adelic_cohomology(spec)


# ---------------------------------------------------------------- output


def table_rows(table) -> list[dict]:
    return table.rows()


def render(rows: list[dict], fmt: str, pretty: str, extra: dict | None = None) -> str:
    if fmt == "json":
        payload = dict(extra or {})
        payload["rows"] = rows
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["degree", "multidegree", "rank", "torsion"])
        for r in rows:
            md = "" if r["multidegree"] is None else ";".join(map(str, r["multidegree"]))
            w.writerow([r["degree"], md, r["rank"], ";".join(map(str, r["torsion"]))])
        return buf.getvalue()
    return pretty + "\n"


def _entry(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _dense(f) -> list:
    return [[_entry(x) for x in row] for row in f.dense()]


def dump_spec(spec) -> dict:
    cube = decompose_by_dimension(spec)
    ac = assemble(spec)
    verts = []
    for v in sorted(cube.vertices, key=lambda d: (len(d), d.dims)):
        m = cube.vertices[v]
        verts.append({"dimensions": list(v.dims), "atoms": [str(a) for a in m.atoms]})
    edges = []
    for (v, w), f in sorted(cube.edges.items(), key=lambda kv: (kv[0][0].dims, kv[0][1].dims)):
        edges.append({"from": list(v.dims), "to": list(w.dims), "matrix": _dense(f)})
    cx = ac.complex
    return {
        "poset": {"elements": [str(e) for e in spec.poset.elements],
                  "covers": [[str(a), str(b)] for a, b in spec.poset.covers]},
        "cube": {"rank": cube.r, "vertices": verts, "edges": edges},
        "complex": {"start": cx.start,
                    "objects": [[str(a) for a in o.atoms] for o in cx.objects],
                    "differentials": [_dense(d) for d in cx.differentials]},
        "window": None if spec.window is None else [list(spec.window.lo), list(spec.window.hi)],
    }


# ---------------------------------------------------------------- commands


def cmd_cohomology(args) -> str:
    data = read_instance(args.instance)
    _, run = build(data, args)
    table = run()
    extra = {"kind": data["kind"], "instance": data.get("name", "")}
    return render(table_rows(table), args.format, table.pretty(), extra)


def cmd_check(args) -> tuple[str, bool]:
    from .suites import SUITES

    if args.suite not in SUITES:
        raise CliError("E_SUITE", f"unknown suite {args.suite!r}; expected one of {', '.join(sorted(SUITES))}")
    kw = {}
    if args.suite == "subdivision" and args.max_vertices:
        kw["max_vertices"] = min(args.max_vertices, 4)
        kw["random_vertices"] = args.max_vertices
    if args.suite == "absorbative" and args.instance:
        data = read_instance(args.instance)
        if data["kind"] != "number-ring":
            raise CliError("E_SCHEMA", "the absorbative suite needs a number-ring instance")
        kw["primes"] = _need(data, "primes", list, "a list of primes")
    rep = SUITES[args.suite](seed=args.seed, **kw)
    if args.format == "json":
        return json.dumps(rep.as_dict(), sort_keys=True, indent=2) + "\n", rep.ok
    lines = [f"{'PASS' if r.ok else 'FAIL'} {rep.suite}: {r.name} ({r.checked} checked)"
             + (f" {r.detail}" if r.detail and not r.ok else "") for r in rep.results]
    return "\n".join(lines) + "\n", rep.ok


def cmd_dump(args) -> str:
    data = read_instance(args.instance)
    spec, _ = build(data, args)
    return json.dumps(dump_spec(spec), sort_keys=True, indent=2) + "\n"


def parse_target(text: str, precision: int):
    """``P=3/4`` (exact rational) or ``P=digits:V:d0,d1,...`` (``sum d_i P^(V+i)``)."""
    from .exactla.scalars import is_prime
    from .instances.padic import PAdic

    if "=" not in text:
        raise CliError("E_PARSE", f"malformed target {text!r}; expected P=VALUE")
    p_s, val = text.split("=", 1)
    try:
        p = int(p_s)
    except ValueError:
        raise CliError("E_PARSE", f"malformed prime in {text!r}") from None
    if not is_prime(p):
        raise CliError("E_SCHEMA", f"{p} is not prime")
    if val.startswith("digits:"):
        try:
            _, v, ds = val.split(":", 2)
            digits = [int(d) for d in ds.split(",") if d != ""]
            return p, PAdic.from_digits(p, int(v), digits)
        except ValueError as e:
            raise CliError("E_PARSE", f"malformed digit literal {val!r}: {e}") from None
    try:
        return p, PAdic.from_rational(Fraction(val), p, precision)
    except (ValueError, ZeroDivisionError):
        raise CliError("E_PARSE", f"malformed rational {val!r}") from None


def cmd_split(args) -> str:
    from .instances.numberring import apply_delta, adelic_split, hasse_spec

    if not args.target:
        raise CliError("E_SCHEMA", "give at least one --target P=VALUE")
    targets = dict(parse_target(t, args.precision or 32) for t in args.target)
    sp = adelic_split(targets, args.convention)
    k = max(b.k for b in targets.values()) or 1
    back = apply_delta(hasse_spec(sorted(targets), [], 1), sp, k)
    ok = all(back[p].agrees(targets[p]) for p in targets)
    out = {"q": _entry(sp.q), "convention": sp.convention, "round_trip": ok,
           "a": {str(p): str(a) for p, a in sorted(sp.a.items())}}
    if args.format == "json":
        return json.dumps(out, sort_keys=True, indent=2) + "\n"
    lines = [f"q = {out['q']}"] + [f"a_{p} = {a}" for p, a in out["a"].items()]
    lines.append(f"round trip: {'ok' if ok else 'FAILED'}")
    return "\n".join(lines) + "\n"


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="adelcoh", description="Exact adelic cohomology computations.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, instance_required=True):
        p.add_argument("--instance", required=instance_required, help="TOML instance file")
        p.add_argument("--window", help="degree window LO..HI (or a,b..c,d)")
        p.add_argument("--precision", type=int, help="p-adic digits (default 32)")
        p.add_argument("--format", choices=("json", "csv", "pretty"), default="pretty")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--variant")
        p.add_argument("--policy")

    common(sub.add_parser("cohomology", help="cohomology table of an instance"))
    pc = sub.add_parser("check", help="run a seeded property suite")
    pc.add_argument("suite")
    pc.add_argument("--max-vertices", type=int)
    common(pc, instance_required=False)
    common(sub.add_parser("dump", help="JSON dump of the cube and the complex"))
    ps = sub.add_parser("split", help="split a degree-one adelic target")
    ps.add_argument("--target", action="append", help="P=RATIONAL or P=digits:V:d0,d1,...")
    ps.add_argument("--convention", choices=("complex", "difference"), default="complex")
    common(ps, instance_required=False)
    return ap


def _code_of(exc: BaseException) -> str:
    from .instances.padic import InsufficientPrecision

    if isinstance(exc, InsufficientPrecision):
        return "E_PRECISION"
    if isinstance(exc, NonStabilizingError):
        return "E_STABILIZATION"
    if isinstance(exc, WindowError):
        return "E_WINDOW"
    if isinstance(exc, (AssemblyError, ComplexError, ModuleError, UndeterminedExtension, UnsupportedScalars)):
        return "E_ASSEMBLY"
    return ""


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = make_parser().parse_args(argv)
    if args.precision is not None and args.precision < 1:
        print("E_SCHEMA: precision must be at least 1", file=stderr)
        return EXIT["E_SCHEMA"]
    ok = True
    try:
        if getattr(args, "window", None) is not None:
            parse_window(args.window)
        if args.command == "cohomology":
            out = cmd_cohomology(args)
        elif args.command == "check":
            out, ok = cmd_check(args)
        elif args.command == "dump":
            out = cmd_dump(args)
        else:
            out = cmd_split(args)
    except CliError as e:
        print(f"{e.code}: {e}", file=stderr)
        return EXIT[e.code]
    except ArithmeticError as e:
        code = _code_of(e) or "E_ASSEMBLY"
        print(f"{code}: {' '.join(str(e).split())}", file=stderr)
        return EXIT[code]
    except ValueError as e:
        code = _code_of(e)
        if not code:
            raise
        print(f"{code}: {' '.join(str(e).split())}", file=stderr)
        return EXIT[code]
    stdout.write(out)
    return 0 if ok else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
