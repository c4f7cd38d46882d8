"""Command-line front end.

Every subcommand prints a line-oriented report and exits with 0 when every
check passes, 1 when at least one check fails and 2 on usage or input errors.
Report lines are ``PASS <check> <detail>`` or ``FAIL <check> at <instance>``,
preceded by ``#`` header lines that echo the effective caps and followed by a
``summary:`` line.  The layout is stable: identical invocations print
identical bytes.
"""

from __future__ import annotations

import argparse
import sys

from .errors import HyperaffineError
from .report import Report

DEFAULT_MAX_ARITY = 3
DEFAULT_MAX_RING = 8


class UsageError(Exception):
    pass


def _ring(args):
    from .rings import parse_ring_spec
    r = parse_ring_spec(args.ring)
    if r.size > args.max_ring_size:
        raise UsageError(f"ring {r.spec} has {r.size} elements, above --max-ring-size {args.max_ring_size}")
    return r


def _caps(args):
    out = [f"ring {args.ring}", f"max-ring-size {args.max_ring_size}"]
    if hasattr(args, "max_arity"):
        out.append(f"max-arity {args.max_arity}")
    return out


def _emit(rep: Report, out) -> int:
    out.write(rep.render() + "\n")
    return rep.exit_code


def cmd_ring_info(args, out):
    from .rings import format_ring, is_boolean, is_commutative, ring_axiom_failures
    r = _ring(args)
    out.write(format_ring(r) + "\n")
    rep = Report(header=_caps(args))
    bad = ring_axiom_failures(r)
    rep.add("ring-axioms", not bad, "", ", ".join(bad) or None)
    rep.notes.append(f"commutative {'yes' if is_commutative(r) else 'no'}")
    rep.notes.append(f"boolean {'yes' if is_boolean(r) else 'no'}")
    return _emit(rep, out)


def _theory(args):
    from .theory import make_theory
    return make_theory(_ring(args), args.flavor)


def cmd_theory_verify(args, out):
    from .theory import verify_theory
    if args.max_arity < 1:
        raise UsageError("--max-arity must be at least 1")
    rep = verify_theory(_theory(args), args.max_arity, method=args.method)
    rep.header = _caps(args) + [f"flavor {args.flavor}", f"method {args.method}"]
    return _emit(rep, out)


def cmd_theory_roundtrip(args, out):
    from .theory import roundtrip_theory
    rep = roundtrip_theory(_theory(args), args.max_arity, method=args.method)
    rep.header = _caps(args) + [f"flavor {args.flavor}"]
    return _emit(rep, out)


def cmd_nba_check(args, out):
    from .nba import check_axioms, check_coordinate_algebra, nba_from_theory, psi_reconstruct
    from .theory import hyperaffine_theory
    if args.dim < 1:
        raise UsageError("--dim must be at least 1")
    t = hyperaffine_theory(_ring(args))
    a = nba_from_theory(t, args.dim)
    rep = check_axioms(a, exhaustive_cap=args.exhaustive_cap, samples=args.samples, seed=args.seed)
    rep.header = _caps(args) + [f"dimension {args.dim}", f"carrier {a.carrier_size}",
                                f"exhaustive-cap {args.exhaustive_cap}", f"samples {args.samples} seed {args.seed}"]
    if args.dim >= 2 and not t.is_degenerate:
        rep.extend(check_coordinate_algebra(a, t.ring))
        rep.extend(psi_reconstruct(a, t).report)
    return _emit(rep, out)


def _load_model(path):
    from .models import parse_model
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return parse_model(text)


def cmd_model_check(args, out):
    from . import models as M
    m = _load_model(args.file)
    if m.ring.size > args.max_ring_size:
        raise UsageError(f"ring has {m.ring.size} elements, above --max-ring-size {args.max_ring_size}")
    wanted = args.suite.split(",") if args.suite else None
    rep = Report(title=f"model check {args.file}",
                 header=[f"carrier {m.carrier_size} over {m.ring.spec}", f"max-ring-size {args.max_ring_size}"])
    suites = [("b", lambda: M.check_b_axioms(m), True),
              ("r", lambda: M.check_r_axioms(m, include_r5=True), True),
              ("a", lambda: M.check_a_axioms(m), m.p_table is not None),
              ("group", lambda: M.check_group(m), m.add_table is not None and m.o is not None),
              ("l1", lambda: M.check_l1(m), m.add_table is not None),
              ("comb", lambda: M.check_comb(m), m.add_table is not None and m.o is not None)]
    known = {name for name, _, _ in suites}
    for w in wanted or []:
        if w not in known:
            raise UsageError(f"unknown suite {w!r}; choose from {', '.join(sorted(known))}")
    for name, run, applicable in suites:
        if wanted is None and not applicable:
            continue
        if wanted is not None and name not in wanted:
            continue
        if not applicable:
            raise UsageError(f"suite {name!r} needs tables the model file does not provide")
        rep.extend(run())
    return _emit(rep, out)


def cmd_model_decompose(args, out):
    from .models import decompose_to_stalks, vect_sheaf_decompose
    m = _load_model(args.file)
    o = args.o if args.o is not None else m.o
    if args.vector:
        if o is None:
            raise UsageError("--vector needs a base point (--o or an 'o :' line)")
        dec = vect_sheaf_decompose(m, o)
    else:
        dec = decompose_to_stalks(m)
    rep = dec.report
    rep.title = f"model decompose {args.file}"
    rep.header = [f"carrier {m.carrier_size} over {m.ring.spec}"]
    view_atoms = len(dec.sheaf.stalks)
    rep.notes.append("stalks " + " ".join(str(k) for k in dec.sheaf.stalks) if view_atoms else "stalks none")
    rep.notes.append("map " + " ".join(f"{m.labels[x]}->{dec.canonical.labels[y]}"
                                       for x, y in enumerate(dec.eval_map)))
    return _emit(rep, out)


def cmd_ite_normalize(args, out):
    from .ite import eval_to_operation, normalize, parse, to_text
    r = _ring(args)
    e = parse(args.expr, r, args.arity)
    nf = normalize(e, r, args.arity)
    out.write(to_text(nf, r) + "\n")
    coeffs = eval_to_operation(e, r, args.arity).coeffs
    out.write("coefficients " + " ".join(r.label(c) for c in coeffs) + "\n")
    return 0


def cmd_ite_equiv(args, out):
    from .ite import equiv, parse
    r = _ring(args)
    e1 = parse(args.expr1, r, args.arity)
    e2 = parse(args.expr2, r, args.arity)
    same = equiv(e1, e2, r, args.arity)
    out.write("EQUIV\n" if same else "NOT-EQUIV\n")
    return 0 if same else 1


def cmd_malcev_search(args, out):
    from .theory import malcev_binary_expressibility
    r = _ring(args)
    res = malcev_binary_expressibility(r, args.depth_cap)
    rep = Report(title=f"malcev search {r.spec}", header=_caps(args) + [f"depth-cap {args.depth_cap}"])
    if res.found:
        rep.notes.append(f"witness {res.witness} at depth {res.depth}")
    elif res.exhausted:
        rep.notes.append(f"exhausted at depth {res.depth}: no term equals (1,-1,1)")
    else:
        rep.notes.append(f"undecided at depth cap {res.depth}")
    rep.notes.append(f"homs-to-F2 {len(res.homs)}")
    rep.add("criterion", res.consistent and (res.found or res.exhausted),
            "(witness iff no hom to F2)", None if res.consistent else "witness despite a hom to F2")
    return _emit(rep, out)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hyperaffine", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="group", required=True)

    def common(sp, ring_required=True, arity=True):
        sp.add_argument("--ring", required=ring_required, help="ring spec: zmod:n, bool:k or prod(a,b)")
        sp.add_argument("--max-ring-size", type=int, default=DEFAULT_MAX_RING)
        if arity:
            sp.add_argument("--max-arity", type=int, default=DEFAULT_MAX_ARITY)

    ring = sub.add_parser("ring").add_subparsers(dest="cmd", required=True)
    sp = ring.add_parser("info")
    common(sp, arity=False)
    sp.set_defaults(func=cmd_ring_info)

    theory = sub.add_parser("theory").add_subparsers(dest="cmd", required=True)
    for name, func, default in (("verify", cmd_theory_verify, "hyperaffine"),
                                ("roundtrip", cmd_theory_roundtrip, "affine")):
        sp = theory.add_parser(name)
        common(sp)
        sp.add_argument("--flavor", choices=["full", "affine", "hyperaffine"], default=default)
        sp.add_argument("--method", choices=["symbolic", "enumerate"], default="symbolic")
        sp.set_defaults(func=func)

    nba = sub.add_parser("nba").add_subparsers(dest="cmd", required=True)
    sp = nba.add_parser("check")
    common(sp, arity=False)
    sp.add_argument("--dim", type=int, default=3)
    sp.add_argument("--exhaustive-cap", type=int, default=10**15)
    sp.add_argument("--samples", type=int, default=10_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_nba_check)

    model = sub.add_parser("model").add_subparsers(dest="cmd", required=True)
    sp = model.add_parser("check")
    sp.add_argument("file")
    sp.add_argument("--suite", help="comma list of b, r, a, group, l1, comb (default: all applicable)")
    sp.add_argument("--max-ring-size", type=int, default=DEFAULT_MAX_RING)
    sp.set_defaults(func=cmd_model_check)
    sp = model.add_parser("decompose")
    sp.add_argument("file")
    sp.add_argument("--vector", action="store_true", help="decompose as an exponent-2 vector space")
    sp.add_argument("--o", type=int, help="base point (overrides the file)")
    sp.set_defaults(func=cmd_model_decompose)

    ite = sub.add_parser("ite").add_subparsers(dest="cmd", required=True)
    sp = ite.add_parser("normalize")
    common(sp, arity=False)
    sp.add_argument("--arity", type=int, required=True)
    sp.add_argument("expr")
    sp.set_defaults(func=cmd_ite_normalize)
    sp = ite.add_parser("equiv")
    common(sp, arity=False)
    sp.add_argument("--arity", type=int, required=True)
    sp.add_argument("expr1")
    sp.add_argument("expr2")
    sp.set_defaults(func=cmd_ite_equiv)

    malcev = sub.add_parser("malcev").add_subparsers(dest="cmd", required=True)
    sp = malcev.add_parser("search")
    common(sp, arity=False)
    sp.add_argument("--depth-cap", type=int, default=6)
    sp.set_defaults(func=cmd_malcev_search)
    return p


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except (UsageError, HyperaffineError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
