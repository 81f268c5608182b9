"""Batch front end: automaton inspection, system derivation and
elimination, and identity verification.

Exit codes: 0 success, 1 verification mismatch, 2 usage or input errors.
"""

from __future__ import annotations

import argparse
import sys

from . import automata, linked, murraymiller, partitions, qseries
from .linked import SpecError


def _load_spec(path):
    if path is None:
        return linked.nandi_spec()
    return linked.load_spec(path)


def _state_arg(value):
    return int(value[1:]) if value.startswith("q") else int(value)


def _print_dfa_text(dfa, out):
    print(f"states: {dfa.num_states}   start: q{dfa.start}   "
          f"accept: {' '.join(f'q{v}' for v in sorted(dfa.accept))}", file=out)
    head = "v\\j |" + "".join(f"{s:>4}" for s in dfa.alphabet)
    print(head, file=out)
    print("-" * len(head), file=out)
    for v, row in enumerate(dfa.transitions):
        print(f"q{v:<3}|" + "".join(f"{t:>4}" for t in row), file=out)


def cmd_dfa(args, out):
    spec = _load_spec(args.spec)
    dfa = linked.build_forbidden_dfa(spec)
    if args.action in ("build", "minimize", "table"):
        if args.format == "structured":
            out.write(automata.dfa_to_text(dfa))
        else:
            print("minimal forbidden-language DFA", file=out)
            _print_dfa_text(dfa, out)
        return 0
    # prefixes <state>
    istar = automata.Star(automata.union_all(
        [automata.Symbol(s) for s in spec.alphabet]))
    x_pattern = automata.dfa_from_regex(
        automata.Concat(istar, spec.forbidden_patterns), spec.alphabet)
    try:
        v = _state_arg(args.state)
        result = automata.min_forbidden_prefixes(dfa, v, x_pattern)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    if args.format == "structured":
        out.write(automata.dfa_to_text(result))
    else:
        print(f"minimal forbidden prefixes from state q{v}", file=out)
        _print_dfa_text(result, out)
    return 0


def cmd_derive(args, out):
    spec = _load_spec(args.spec)
    if args.target is None:
        # default: the spec's own prefix language, i.e. the start state
        extra = spec.forbidden_prefixes
    else:
        try:
            extra = automata.parse_regex(args.target, spec.alphabet)
        except ValueError as e:
            print(f"error: bad target regex: {e}", file=sys.stderr)
            return 2
    state = linked.state_for_class(spec, extra)
    if state is None:
        print("error: no state matches the target prefix language", file=sys.stderr)
        return 2
    system = linked.derive_system(spec)
    system = murraymiller.reorder_first(system, state)
    l_prime, p = murraymiller.triangularize(system)
    eq = murraymiller.normalize_equation(
        murraymiller.eliminate(l_prime, p, system.step))
    if args.format == "structured":
        out.write(f"target-state: {state}\n")
        out.write(f"labels: {' '.join(str(v) for v in system.labels)}\n")
        for i, row in enumerate(system.matrix.entries):
            out.write(f"system row {i}: " + " | ".join(str(e) for e in row) + "\n")
        out.write(f"l-prime: {l_prime}\n")
        for i, row in enumerate(p.entries):
            out.write(f"reduced row {i}: " + " | ".join(str(e) for e in row) + "\n")
        out.write(murraymiller.equation_to_text(eq))
        return 0
    print(f"target state: q{state}", file=out)
    print(f"\ncoupled system (step {system.step}), rows/cols "
          + " ".join(f"q{v}" for v in system.labels), file=out)
    for row in system.matrix.entries:
        print("  [" + ", ".join(str(e) for e in row) + "]", file=out)
    print(f"\ntriangularized after {l_prime} steps:", file=out)
    for row in p.entries:
        print("  [" + ", ".join(str(e) for e in row) + "]", file=out)
    print("\nsingle equation, 0 = sum_i p_i(x,q) F(x*q^(step*i)):", file=out)
    for i, c in enumerate(eq.coeffs):
        print(f"  p{eq.step * i}: {c}", file=out)
    return 0


def _check(label, ok, out, details=""):
    tail = f"  ({details})" if details else ""
    print(f"{'PASS' if ok else 'FAIL'}  {label}{tail}", file=out)
    return ok


def _verify_class(spec, a, order, x_order, out, counts=None):
    ok = True
    if counts is None:
        counts = partitions.count_class_series(a, order)
    brute = qseries.QSeries(counts, order)
    product = qseries.nandi_product(a, order)
    n = brute.first_mismatch(product)
    ok &= _check(f"class {a}: enumeration vs product through q^{order}",
                 n is None, out, "" if n is None else f"first mismatch at q^{n}")
    dsum = qseries.double_sum(a, order)
    n = product.first_mismatch(dsum)
    ok &= _check(f"class {a}: product vs double sum", n is None, out,
                 "" if n is None else f"first mismatch at q^{n}")
    try:
        eq = qseries.class_equation(spec, a)
        series = qseries.evaluate_x1(
            qseries.solve_equation(eq, x_order, order), order)
    except (RuntimeError, ValueError, ZeroDivisionError) as e:
        ok &= _check(f"class {a}: product vs derived equation at x=1",
                     False, out, str(e))
        return ok
    n = product.first_mismatch(series)
    ok &= _check(f"class {a}: product vs derived equation at x=1", n is None,
                 out, "" if n is None else f"first mismatch at q^{n}")
    return ok


def cmd_verify(args, out):
    spec = _load_spec(args.spec)
    order = args.order
    x_order = args.x_order if args.x_order is not None else order
    classes = (1, 2, 3) if args.which == "all" else (int(args.which),)
    all_counts = (partitions.count_all_class_series(order)
                  if len(classes) > 1 else {})
    ok = True
    for a in classes:
        ok &= _verify_class(spec, a, order, x_order, out, all_counts.get(a))
    if args.which == "all":
        for bst in ((3, 0, 0), (1, 0, 1), (5, 1, 1)):
            ok &= _check(f"single-sum/product identity {bst}",
                         qseries.slater_check(bst, order), out)
        for which, x in (("A", (1, 1)), ("A", (1, 2)), ("B", (1, 1)), ("B", (1, 2))):
            ok &= _check(f"series-product identity ({which}) at x=q^{x[1]}",
                         qseries.euler_check(which, x, order), out)
        for a in classes:
            ok &= _check(f"class {a}: single-sum route",
                         qseries.remark_single_sum_check(a, order), out)
    print("all checks passed" if ok else "verification FAILED", file=out)
    return 0 if ok else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="reglinked",
        description="derive and verify q-difference equations for "
                    "automaton-defined partition classes")
    sub = parser.add_subparsers(dest="command", required=True)

    p_dfa = sub.add_parser("dfa", help="build/inspect the forbidden-language DFA")
    p_dfa.add_argument("--spec", default=None, help="spec file (default: shipped mod-14 spec)")
    p_dfa.add_argument("--format", choices=("text", "structured"), default="text")
    p_dfa.add_argument("action", choices=("build", "minimize", "table", "prefixes"))
    p_dfa.add_argument("state", nargs="?", help="state label for 'prefixes' (e.g. q7)")

    p_der = sub.add_parser("derive", help="derive the single q-difference equation")
    p_der.add_argument("--spec", default=None)
    p_der.add_argument("--target", default=None,
                       help="prefix regex selecting the class (e.g. '3U4'); "
                            "omitted: the spec's own prefixes (its start state)")
    p_der.add_argument("--format", choices=("text", "structured"), default="text")

    p_ver = sub.add_parser("verify", help="run the truncated identity checks")
    p_ver.add_argument("which", choices=("1", "2", "3", "all"))
    p_ver.add_argument("--spec", default=None)
    p_ver.add_argument("--order", type=int, default=40)
    p_ver.add_argument("--x-order", type=int, default=None, dest="x_order")
    p_ver.add_argument("--format", choices=("text", "structured"), default="text")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    out = sys.stdout
    try:
        if args.command == "dfa":
            if args.action == "prefixes" and not args.state:
                parser.error("'prefixes' needs a state label")
            return cmd_dfa(args, out)
        if args.command == "derive":
            return cmd_derive(args, out)
        if args.command == "verify":
            if args.order < 0:
                parser.error("--order must be >= 0")
            return cmd_verify(args, out)
    except (SpecError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
