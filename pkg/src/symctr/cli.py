"""Command-line front end.

Exit codes: 0 = success with all assertions passing, 1 = computation
succeeded but a verification reported a nonzero residual, 2 = usage or
parse error.  Identical invocations produce byte-identical output; the
``SYMCTR_THREADS`` environment variable caps internal parallelism (the
engine is sequential, so any positive cap is honored and output is
unaffected).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import exprio, liealg, models, opalg, solver
from .coeffring import GaussianRational, ONE
from .errors import ExprParseError, SymctrError
from .opalg import OperatorBasis, OperatorWord


def _threads_cap() -> int:
    raw = os.environ.get("SYMCTR_THREADS")
    if raw is None:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise SystemExit2(f"SYMCTR_THREADS must be a positive integer, got {raw!r}")
    if value < 1:
        raise SystemExit2(f"SYMCTR_THREADS must be a positive integer, got {raw!r}")
    return value


class SystemExit2(Exception):
    """Usage-level failure; rendered on stderr with exit code 2."""


def _split_vars(raw: str):
    names = [v.strip() for v in raw.split(",") if v.strip()]
    if not names:
        raise SystemExit2("expected a comma-separated variable list")
    return names


def _parse_indices(raw: str, count: int, what: str):
    out = []
    for piece in raw.split(","):
        piece = piece.strip()
        if not piece:
            continue
        try:
            k = int(piece)
        except ValueError:
            raise SystemExit2(f"{what} must be a comma-separated list of integers")
        if not 1 <= k <= count:
            raise SystemExit2(f"{what} index {k} out of range 1..{count}")
        out.append(k - 1)
    if not out:
        raise SystemExit2(f"{what} is empty")
    return out


def _build_model(args) -> models.ModelSpec:
    name = args.model
    if name == "schrodinger1d":
        return models.model_schrodinger1d()
    if name == "kg":
        return models.model_klein_gordon(args.spatial_dim)
    if name == "kg4th":
        return models.model_klein_gordon4(
            args.spatial_dim, exprio.parse_scalar(args.mass_scale)
        )
    raise SystemExit2(f"unknown model {name!r}")


def _central_and_vars(args):
    if args.model:
        model = _build_model(args)
        return model, model.central, list(model.var_names)
    if not args.central or not args.vars:
        raise SystemExit2("need either --model or both --central and --vars")
    names = _split_vars(args.vars)
    return None, exprio.parse_operator(args.central, names), names


def _ansatz_spec(args, model, central, names) -> solver.AnsatzSpec:
    order = args.order
    degree = args.degree if args.degree is not None else order + 1
    if args.laurent_min is not None:
        laurent = tuple(int(v) for v in args.laurent_min.split(","))
        if len(laurent) != len(names):
            raise SystemExit2("--laurent-min needs one entry per variable")
    elif model is not None:
        laurent = tuple(
            -1 if v == model.time_index else 0 for v in range(len(names))
        )
    else:
        laurent = (0,) * len(names)
    exp_args = []
    for raw in args.exp_arg or ():
        values = [exprio.parse_scalar(v) for v in raw.split(",")]
        if len(values) != len(names):
            raise SystemExit2("--exp-arg needs one scalar per variable")
        exp_args.append(tuple(values))
    return solver.AnsatzSpec(order, len(names), degree, laurent, tuple(exp_args))


def _print_basis(basis, names, fmt, header):
    if fmt == "json":
        doc = exprio.basis_to_json(list(basis), names, order=basis.order)
        sys.stdout.write(exprio.dump_json(doc))
        return
    print(header)
    for k, op in enumerate(basis, start=1):
        print(f"{k}: {exprio.print_operator(op, names, style=fmt)}")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_solve(args) -> int:
    model, central, names = _central_and_vars(args)
    spec = _ansatz_spec(args, model, central, names)
    basis = solver.solve_centralizer(central, spec)
    for op in basis:
        if not opalg.commutator(central, op).is_zero:
            raise ArithmeticError("recommutation check failed")
    label = args.model or "custom"
    if args.grow:
        grown_basis = solver.solve_centralizer(central, spec.grown())
        same = len(grown_basis) == len(basis)
        _print_basis(
            basis,
            names,
            args.format,
            f"# model {label}  order {args.order}  dimension {len(basis)}",
        )
        print(
            f"# grown bounds dimension {len(grown_basis)}: "
            + ("unchanged" if same else "CHANGED (truncation artifact)")
        )
        return 0 if same else 1
    _print_basis(
        basis,
        names,
        args.format,
        f"# model {label}  order {args.order}  dimension {len(basis)}"
        f"  (recommutation exact)",
    )
    return 0


def _binary_operands(args):
    names = _split_vars(args.vars)
    a = exprio.parse_operator(args.A, names)
    b = exprio.parse_operator(args.B, names)
    return names, a, b


def cmd_commute(args) -> int:
    names, a, b = _binary_operands(args)
    result = opalg.commutator(a, b)
    if args.format == "json":
        sys.stdout.write(exprio.dump_json(exprio.operator_to_json(result, names)))
    else:
        print(exprio.print_operator(result, names, style=args.format))
    return 0


def cmd_compose(args) -> int:
    names, a, b = _binary_operands(args)
    result = opalg.compose(a, b)
    if args.format == "json":
        sys.stdout.write(exprio.dump_json(exprio.operator_to_json(result, names)))
    else:
        print(exprio.print_operator(result, names, style=args.format))
    return 0


def _basis_for(args, model, names):
    """Operator basis selected by --order/--source for structure/subalgebra."""
    if args.basis:
        with open(args.basis) as handle:
            doc = json.load(handle)
        ops, file_names, _ = exprio.basis_from_json(doc)
        return OperatorBasis(tuple(ops)), file_names
    if args.order is None:
        return model.generators, names
    if getattr(args, "source", "engine") == "reference":
        if args.model != "schrodinger1d":
            raise SystemExit2("reference tables exist for schrodinger1d only")
        refs = models.reference_basis(args.order)
        return OperatorBasis(tuple(op for _, op in refs)), names
    basis = solver.solve_centralizer(model.central, model.ansatz_spec(args.order))
    return basis.as_operator_basis(), names


def cmd_structure(args) -> int:
    model = None
    names = None
    if args.model:
        model = _build_model(args)
        names = list(model.var_names)
    elif not args.basis:
        raise SystemExit2("need --model or --basis")
    basis, names = _basis_for(args, model, names)
    try:
        constants = liealg.structure_constants(basis)
    except SymctrError as err:
        from .errors import ClosureError

        if isinstance(err, ClosureError):
            i, j = err.pair
            print(
                f"closure failure: bracket of members {i + 1} and {j + 1} "
                f"is outside the span"
            )
            print(
                f"residual: {exprio.print_operator(err.residual, names)}"
            )
            return 1
        raise
    if args.format == "json":
        sys.stdout.write(
            exprio.dump_json(exprio.structure_constants_to_json(constants))
        )
        return 0
    n = constants.size
    print(f"# closed basis of size {n} (antisymmetry and Jacobi verified)")
    for i in range(n):
        for j in range(i + 1, n):
            coords = constants.table[i][j]
            if all(c.is_zero for c in coords):
                continue
            body = " + ".join(
                f"({c}) * D{k + 1}" for k, c in enumerate(coords) if not c.is_zero
            )
            print(f"[D{i + 1}, D{j + 1}] = {body}")
    return 0


def cmd_subalgebra(args) -> int:
    model = _build_model(args) if args.model else None
    names = list(model.var_names) if model else None
    if model is None and not args.basis:
        raise SystemExit2("need --model or --basis")
    basis, names = _basis_for(args, model, names)
    subset = _parse_indices(args.subset, len(basis), "--subset")
    closed, witness = liealg.check_subalgebra_closed(basis, subset)
    labels = ",".join(str(k + 1) for k in sorted(subset))
    if closed:
        print(f"subset {{{labels}}} is closed under brackets")
        return 0
    i, j, residual = witness
    print(f"subset {{{labels}}} is NOT closed: bracket of members {i + 1} and {j + 1} escapes the span")
    print(f"residual: {exprio.print_operator(residual, names)}")
    return 1


def cmd_reduce(args) -> int:
    model = _build_model(args)
    constants = liealg.structure_constants(model.generators)
    factors = _parse_indices(args.word, len(model.generators), "--word")
    words = [OperatorWord(ONE, tuple(factors))]
    reduced = opalg.lie_reduce(words, constants)
    before = opalg.word_value(words, model.generators)
    after = opalg.word_value(reduced, model.generators)
    if before != after:
        raise ArithmeticError("reduction changed the concrete operator")
    for word in reduced:
        body = "*".join(f"D{k + 1}" for k in word.factors) or "1"
        print(f"({word.scalar}) * {body}")
    print("# concrete operator preserved")
    return 0


def cmd_symmetrize(args) -> int:
    model = _build_model(args)
    indices = _parse_indices(args.indices, len(model.generators), "--indices")
    result = opalg.symmetrize(model.generators, indices)
    if args.format == "json":
        sys.stdout.write(
            exprio.dump_json(exprio.operator_to_json(result, list(model.var_names)))
        )
    else:
        print(exprio.print_operator(result, list(model.var_names), style=args.format))
    return 0


def cmd_fracpow(args) -> int:
    cap = args.K
    alg = liealg.truncated_nilpotent_algebra(cap)
    if args.element:
        coords = [exprio.parse_scalar(v) for v in args.element.split(",")]
        if len(coords) != cap:
            raise SystemExit2(f"--element needs {cap} coordinates")
        element = alg.element(coords)
    else:
        coords = [ONE, ONE] + [GaussianRational(0)] * (cap - 2) if cap >= 2 else [ONE]
        element = alg.element(coords)
    result = liealg.frac_power(alg, element, args.p, args.m, cap)
    print(f"tau exponent: {result.tau_exponent}")
    print(
        "coefficients: "
        + ", ".join(str(c) for c in result.g_coefficients)
        + f"  (nilpotency degree {result.nilpotent_degree})"
    )
    if result.tau == ONE and args.p >= 0:
        reconstructed = result.reconstruct()
        power = reconstructed
        for _ in range(args.m - 1):
            power = alg.product(power, reconstructed)
        direct = alg.unit_element()
        base = alg.unit_element() + result.nilpotent_part
        for _ in range(args.p):
            direct = alg.product(direct, base)
        exact = power == direct
        print(f"verification (m-th power vs integer power): {'exact' if exact else 'FAILED'}")
        return 0 if exact else 1
    print("verification: skipped (tau != 1 stays formal)")
    return 0


def _report_lines(items, names, heading):
    print(heading)
    bad = 0
    for item in items:
        if item.exact:
            print(f"{item.label}: exact")
        else:
            bad += 1
            print(
                f"{item.label}: RESIDUAL = "
                f"{exprio.print_operator(item.residual, names)}"
            )
    return bad


def cmd_verify(args) -> int:
    check = args.check
    fmt = args.format
    if check == "published":
        if args.model != "schrodinger1d":
            raise SystemExit2("published tables exist for schrodinger1d only")
        if args.order not in (2, 3):
            raise SystemExit2("published tables exist for orders 2 and 3")
        model = models.model_schrodinger1d()
        names = list(model.var_names)
        basis = solver.solve_centralizer(model.central, model.ansatz_spec(args.order))
        checks = models.cross_check_reference(args.order, list(basis))
        bad = 0
        items = []
        for entry in checks:
            note = "in computed span" if entry.in_span else "NOT in computed span"
            items.append(
                {
                    "label": f"entry {entry.label}",
                    "exact": entry.commutes and entry.in_span,
                    "residual": entry.residual,
                    "note": note,
                }
            )
        if fmt == "json":
            doc = exprio.report_to_json(
                "schrodinger1d",
                "published",
                items,
                names,
                metadata={"order": args.order, "computed_dimension": len(basis)},
            )
            sys.stdout.write(exprio.dump_json(doc))
        else:
            print(
                f"# published order-{args.order} table vs computed basis "
                f"(dimension {len(basis)})"
            )
            for entry in checks:
                if entry.commutes:
                    note = "in span" if entry.in_span else "NOT in span"
                    print(f"entry {entry.label}: commutes exactly; {note}")
                else:
                    print(
                        f"entry {entry.label}: RESIDUAL [H, entry] = "
                        f"{exprio.print_operator(entry.residual, names)}"
                    )
        bad = sum(1 for entry in checks if not (entry.commutes and entry.in_span))
        return 1 if bad else 0
    if check == "dilation":
        reports = models.verify_dilation_tower(args.n, args.spatial_dim)
        names = list(models.kg_variable_names(args.spatial_dim + 1))
        if fmt == "json":
            items = [
                {
                    "label": r.label,
                    "exact": r.exact,
                    "lhs": r.lhs,
                    "rhs": r.rhs,
                    "residual": r.residual,
                }
                for r in reports
            ]
            doc = exprio.report_to_json(args.model or "kg4th", "dilation", items, names)
            sys.stdout.write(exprio.dump_json(doc))
            return 1 if any(not r.exact for r in reports) else 0
        bad = _report_lines(
            [
                models.CheckItem(r.label, r.lhs, r.rhs)
                for r in reports
            ],
            names,
            "# bracket of box^n with the dilation generator vs (2 box)^n",
        )
        return 1 if bad else 0
    if check == "brackets":
        alpha = models.AlphaMatrix.ones(args.spatial_dim + 1)
        report = models.check_deformed_brackets(alpha)
        names = list(models.kg_variable_names(args.spatial_dim + 1))
        if fmt == "json":
            items = [
                {"label": it.label, "exact": it.exact, "residual": it.residual}
                for it in report.items
            ]
            info = [
                {"label": it.label, "exact": it.exact, "residual": it.residual}
                for it in report.informational
            ]
            doc = exprio.report_to_json(
                args.model or "kg", "brackets", items, names, informational=info
            )
            sys.stdout.write(exprio.dump_json(doc))
            return 0 if report.all_exact else 1
        bad = _report_lines(
            report.items, names, "# deformed bracket identities (asserted)"
        )
        print("# informational (not asserted):")
        for it in report.informational:
            status = "0" if it.exact else exprio.print_operator(it.residual, names)
            print(f"{it.label}: {status}")
        return 1 if bad else 0
    if check == "harmonic":
        c1 = exprio.parse_scalar(args.c1)
        coupling = exprio.parse_scalar(args.coupling)
        strength = exprio.parse_scalar(args.k) if args.k else None
        rep = models.verify_harmonic_perturbation(c1, coupling, strength)
        names = list(rep.var_names)
        if fmt == "json":
            items = [
                {
                    "label": rep.bracket.label,
                    "exact": rep.bracket.exact,
                    "lhs": rep.bracket.lhs,
                    "rhs": rep.bracket.rhs,
                    "residual": rep.bracket.residual,
                }
            ]
            info = []
            if rep.potential_bracket is not None:
                info.append(
                    {
                        "label": "[box + k x^2, D] decomposition attempt",
                        "exact": rep.decomposition is not None,
                        "lhs": rep.potential_bracket,
                    }
                )
            doc = exprio.report_to_json(
                "harmonic-pert", "harmonic", items, names, informational=info
            )
            sys.stdout.write(exprio.dump_json(doc))
            return 0 if rep.bracket.exact else 1
        print("# deformed-generator bracket vs claimed right-hand side")
        print(f"engine [dx, D] = {exprio.print_operator(rep.bracket.lhs, names)}")
        print(f"claimed value  = {exprio.print_operator(rep.bracket.rhs, names)}")
        if rep.bracket.exact:
            print("residual: 0")
        else:
            print(
                f"residual: {exprio.print_operator(rep.bracket.residual, names)}"
            )
        if rep.potential_bracket is not None:
            print(
                f"[box + k x^2, D] = "
                f"{exprio.print_operator(rep.potential_bracket, names)}"
            )
            if rep.decomposition is None:
                print("decomposition over candidate family: not expressible")
            else:
                print(
                    "decomposition coordinates: "
                    + ", ".join(str(c) for c in rep.decomposition)
                )
        return 0 if rep.bracket.exact else 1
    if check == "clifford":
        signature = (1, -1, -1, -1)[: args.spatial_dim + 1]
        alg = models.gamma_shadow_algebra(signature, GaussianRational(4))
        metric = [
            [GaussianRational(signature[a]) if a == b else GaussianRational(0)
             for b in range(len(signature))]
            for a in range(len(signature))
        ]
        ok = models.clifford_condition_check(
            alg, metric=metric, scale=GaussianRational(4)
        )
        print(f"clifford condition: {'holds' if ok else 'FAILS'}")
        return 0 if ok else 1
    raise SystemExit2(f"unknown check {check!r}")


def cmd_count(args) -> int:
    print(solver.count_formula(args.N, args.n))
    return 0


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def _add_model_args(p, with_order=False):
    p.add_argument("--model", choices=sorted(models.MODEL_BUILDERS), default=None)
    p.add_argument("--spatial-dim", type=int, default=3)
    p.add_argument("--mass-scale", default="1")
    if with_order:
        p.add_argument("--order", type=int, required=True)


def _add_format(p):
    p.add_argument("--format", choices=("text", "json", "latex"), default="text")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="symctr",
        description="Exact construction and verification of operators "
        "commuting with a central differential operator.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="compute a centralizer basis")
    _add_model_args(p, with_order=True)
    p.add_argument("--central", help="central operator expression")
    p.add_argument("--vars", help="comma-separated variable names")
    p.add_argument("--degree", type=int, default=None)
    p.add_argument("--laurent-min", default=None)
    p.add_argument("--exp-arg", action="append", default=None)
    p.add_argument("--grow", action="store_true")
    _add_format(p)
    p.set_defaults(func=cmd_solve)

    for name, func, blurb in (
        ("commute", cmd_commute, "commutator of two operator expressions"),
        ("compose", cmd_compose, "composition of two operator expressions"),
    ):
        p = sub.add_parser(name, help=blurb)
        p.add_argument("--vars", required=True)
        p.add_argument("--A", required=True)
        p.add_argument("--B", required=True)
        _add_format(p)
        p.set_defaults(func=func)

    p = sub.add_parser("structure", help="structure constants of a basis")
    _add_model_args(p)
    p.add_argument("--order", type=int, default=None)
    p.add_argument("--source", choices=("engine", "reference"), default="engine")
    p.add_argument("--basis", help="basis JSON file")
    _add_format(p)
    p.set_defaults(func=cmd_structure)

    p = sub.add_parser("subalgebra", help="check a subset for bracket closure")
    _add_model_args(p)
    p.add_argument("--order", type=int, default=None)
    p.add_argument("--source", choices=("engine", "reference"), default="reference")
    p.add_argument("--basis", help="basis JSON file")
    p.add_argument("--subset", required=True)
    p.set_defaults(func=cmd_subalgebra)

    p = sub.add_parser("reduce", help="normal-order a word over a model basis")
    _add_model_args(p)
    p.add_argument("--word", required=True, help="1-based factor indices, e.g. 2,1")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("symmetrize", help="cyclic symmetrized product")
    _add_model_args(p)
    p.add_argument("--indices", required=True)
    _add_format(p)
    p.set_defaults(func=cmd_symmetrize)

    p = sub.add_parser("fracpow", help="nilpotent-truncated fractional power")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--K", type=int, required=True, help="nilpotency cap")
    p.add_argument("--element", help="comma-separated coordinates")
    p.set_defaults(func=cmd_fracpow)

    p = sub.add_parser("verify", help="run a built-in verification")
    p.add_argument(
        "--model",
        choices=sorted(models.MODEL_BUILDERS) + ["harmonic-pert"],
        default=None,
    )
    p.add_argument("--spatial-dim", type=int, default=3)
    p.add_argument("--mass-scale", default="1")
    p.add_argument(
        "--check",
        required=True,
        choices=("published", "dilation", "brackets", "harmonic", "clifford"),
    )
    p.add_argument("--order", type=int, default=None)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--c1", default="1")
    p.add_argument("--coupling", default="1")
    p.add_argument("--k", default=None)
    _add_format(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("count", help="basis-count law")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_count)

    return parser


# flags whose values are expressions and may start with '-'
_EXPRESSION_FLAGS = {
    "--A",
    "--B",
    "--central",
    "--element",
    "--c1",
    "--coupling",
    "--k",
    "--laurent-min",
    "--exp-arg",
    "--mass-scale",
}


def _join_expression_flags(argv):
    out = []
    k = 0
    while k < len(argv):
        token = argv[k]
        if token in _EXPRESSION_FLAGS and k + 1 < len(argv) and argv[k + 1].startswith("-"):
            out.append(f"{token}={argv[k + 1]}")
            k += 2
            continue
        out.append(token)
        k += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    argv = _join_expression_flags(list(argv))
    try:
        args = parser.parse_args(argv)
        _threads_cap()
        return args.func(args)
    except SystemExit2 as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except ExprParseError as err:
        print(f"parse error: {err}", file=sys.stderr)
        return 2
    except (SymctrError, ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
