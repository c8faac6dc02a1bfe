"""Command-line front end.

Exit codes: 0 success, 1 infeasible, 2 certificate or invariant failure,
3 usage or input error. Output is JSON unless ``--human`` is given; failures
print a JSON diagnostic on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import errors
from .serialize import jsonify

EXIT_OK, EXIT_INFEASIBLE, EXIT_CERT, EXIT_USAGE = 0, 1, 2, 3

_CERT_ERRORS = (errors.CertFailed, errors.LemmaViolation, errors.CSViolation,
                errors.ContractExceeded, errors.P1Violation, errors.P3Violation,
                errors.AdditiveViolation, errors.InternalInvariant, errors.NotInPolytope,
                errors.SearchBudgetExceeded)
_USAGE_ERRORS = (errors.ValidationFailed, errors.TooLarge, errors.UnknownEdge,
                 errors.UnknownPiece, errors.DependentContraction, errors.NumericOverflow)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _rational(text: str) -> Fraction:
    from .rational import to_fraction

    try:
        return to_fraction(text)
    except (ValueError, ZeroDivisionError, TypeError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None


def _rationals(text: str) -> list[Fraction]:
    return [_rational(t) for t in text.split(",") if t.strip()]


def _load(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _instance(args, override: bool = True):
    from .instance import validate_instance

    raw = _load(args.input)
    if override and getattr(args, "lam", None) is not None:
        raw = dict(raw, **{"lambda": str(args.lam)})
    return validate_instance(raw)


def _point(args, inst):
    from .instance import FractionalPoint, point_from_json
    from .lp.spanning import solve_chain_lp

    if args.point:
        return point_from_json(_load(args.point))
    sol, _ = solve_chain_lp(inst, inst.lam)
    if not sol.optimal:
        raise errors.InfeasibleLP("the inflated LP is infeasible", status=sol.status)
    return FractionalPoint(sol.primal)


# -- subcommands ------------------------------------------------------------

def cmd_solve_lp(args):
    from .lp.spanning import solve_chain_lp

    inst = _instance(args, override=False)
    lam = inst.lam if args.lam is None else args.lam
    if lam < 1:
        raise errors.ValidationFailed(["lambda must be at least 1 for the LP"])
    sol, _ = solve_chain_lp(inst, lam)
    out = sol.to_json()
    out["rounds"] = sol.rounds
    return out, EXIT_OK if sol.optimal else EXIT_INFEASIBLE


def cmd_decompose(args):
    from .decomposition import laminar_decomposition

    inst = _instance(args)
    x = _point(args, inst)
    return laminar_decomposition(x, inst.graph).to_json(), EXIT_OK


def cmd_rainbow(args):
    from .decomposition import laminar_decomposition
    from .rainbow import find_rainbows, make_rainbow_free

    inst = _instance(args)
    x = _point(args, inst)
    dec = laminar_decomposition(x, inst.graph)
    before = find_rainbows(x, dec, inst.chain)
    xp, decp = make_rainbow_free(x, dec, inst)
    after = find_rainbows(xp, decp, inst.chain)
    g = inst.graph
    return jsonify({
        "x_prime": dict(xp.items()),
        "family_prime": [list(g.sort_nodes(s)) for s in decp.family],
        "rainbows_before": [r.to_json(g) for r in before],
        "rainbows_after": [r.to_json(g) for r in after],
    }), EXIT_OK


def cmd_round(args):
    from .decomposition import laminar_decomposition
    from .instance import cut_value
    from .rainbow import find_rainbows, make_rainbow_free
    from .rounding import face_preserving_round, is_on_minimal_face

    inst = _instance(args)
    g, chain = inst.graph, inst.chain
    x = _point(args, inst)
    dec = laminar_decomposition(x, g)
    converted = bool(find_rainbows(x, dec, chain))
    if converted:
        x, dec = make_rainbow_free(x, dec, inst)
    tree = face_preserving_round(x, dec, chain, budget=args.search_budget, jobs=args.jobs)
    crossing = [sum(1 for e in g.cut_edges(s) if e in tree.edges) for s in chain.sets]
    frac = [cut_value(x, g, s) for s in chain.sets]
    return jsonify({
        "tree": tree.sorted(g),
        "cost": sum((g.edge(e).cost for e in tree.edges), Fraction(0)),
        "crossing": crossing,
        "fractional_cut": frac,
        "violation_ratios": [Fraction(c) / f if f else 0 for c, f in zip(crossing, frac)],
        "made_rainbow_free": converted,
        "on_minimal_face": is_on_minimal_face(x, tree, g),
    }), EXIT_OK


def cmd_pipeline(args):
    from .rounding import mcst_pipeline

    inst = _instance(args)
    cert = mcst_pipeline(inst, budget=args.search_budget, jobs=args.jobs)
    return cert.to_json(), EXIT_OK if cert.ok else EXIT_CERT


def cmd_verify(args):
    from .verify import verify_pipeline_certificate

    inst = _instance(args)
    report = verify_pipeline_certificate(inst, _load(args.certificate))
    return report, EXIT_OK if report["ok"] else EXIT_CERT


def cmd_reduce(args):
    from . import reduction as red

    raw = _load(args.input)
    if "nodes" in raw:
        from .instance import validate_instance

        inst = validate_instance(raw)
        problem = red.mcst_problem(inst)
        default_fpra = red.McstFpra(inst, budget=args.search_budget, jobs=args.jobs)
    elif "matroid" in raw:
        from .budget import BnFpra, budgeted_from_json, to_problem

        binst = budgeted_from_json(raw)
        problem = to_problem(binst)
        default_fpra = BnFpra(binst, args.nu) if args.mode == "additive" else None
    else:
        problem = red.problem_from_json(raw)
        default_fpra = None

    if args.mode == "lambda":
        lam = args.lam if args.lam is not None else Fraction(2)
        fpra = default_fpra if isinstance(default_fpra, red.McstFpra) else red.OracleFpra()
        _, cert = red.reduce_weighted(problem, lam, fpra)
    elif args.mode == "two-sided":
        alpha = args.alpha if args.alpha is not None else Fraction(1)
        beta = args.beta if args.beta is not None else Fraction(1)
        fpra = red.OracleFpra("two-sided", alpha=alpha)
        _, cert = red.reduce_two_sided(problem, alpha, beta, fpra)
    else:
        if default_fpra is not None and args.delta is None:
            fpra = default_fpra
            delta = fpra.delta
        else:
            if args.delta is None:
                raise UsageError("--delta is required for this problem in additive mode")
            delta = args.delta * problem.m if len(args.delta) == 1 else args.delta
            fpra = red.OracleFpra("additive", delta=delta)
        _, cert = red.reduce_additive(problem, delta, fpra)
    return cert.to_json(), EXIT_OK


def cmd_matroid_basis(args):
    from .budget import budgeted_from_json, kbudget_solve

    inst = budgeted_from_json(_load(args.input))
    eps = args.epsilon if args.epsilon is not None else Fraction(1, 2)
    res = kbudget_solve(inst, eps, args.nu, jobs=args.jobs)
    out = res.to_json(inst.matroid)
    out.update(epsilon=str(eps), nu=str(args.nu))
    return out, EXIT_OK if res.feasible else EXIT_INFEASIBLE


def cmd_oracle(args):
    from . import oracle

    raw = _load(args.input)
    if "matroid" in raw:
        from .budget import budgeted_from_json

        rep = oracle.kbudget_feasible_bases(budgeted_from_json(raw))
        return rep.to_json(), EXIT_OK if rep.feasible else EXIT_INFEASIBLE
    from .instance import validate_instance
    from .lp.spanning import solve_chain_lp

    inst = validate_instance(raw)
    rep = oracle.integral_opt(inst, with_table=args.table)
    out = rep.to_json()
    out["tree_count_matrix_tree"] = oracle.spanning_tree_count(inst.graph)
    out["lp_value_one"] = jsonify(solve_chain_lp(inst, 1)[1])
    out["lp_value_lambda"] = jsonify(solve_chain_lp(inst, inst.lam)[1])
    return out, EXIT_OK if rep.feasible else EXIT_INFEASIBLE


def cmd_gen_random(args):
    if args.matroid:
        from .budget import gen_matroid_instance

        return gen_matroid_instance(args.seed, n=args.nodes, k=args.k).to_json(), EXIT_OK
    from .generate import gen_random
    from .instance import instance_to_json

    lam = args.lam if args.lam is not None else 2
    inst = gen_random(args.seed, n_nodes=args.nodes, n_chain=args.chain, slack=args.slack,
                      lam=lam)
    return instance_to_json(inst), EXIT_OK


# -- parser -----------------------------------------------------------------

def _positive(text):
    v = _rational(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--output", "-o", help="write the JSON result here instead of stdout")
    common.add_argument("--human", action="store_true", help="print a readable summary")
    common.add_argument("--search-budget", type=int, default=10**7,
                        help="node budget of the rounding search")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")

    lam = _Parser(add_help=False)
    lam.add_argument("--lambda", dest="lam", type=_rational,
                     help="inflation factor (> 1); overrides the instance")

    parser = _Parser(prog="mcst", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help, parents=(common,), point=False, inp=True):
        p = sub.add_parser(name, help=help, parents=list(parents))
        if inp:
            p.add_argument("input", help="JSON file, or - for stdin")
        if point:
            p.add_argument("--point", help="fractional point JSON (default: LP optimum)")
        p.set_defaults(func=func)
        return p

    add("solve-lp", cmd_solve_lp, "solve the inflated LP", (common, lam))
    add("decompose", cmd_decompose, "laminar decomposition", (common, lam), point=True)
    add("rainbow", cmd_rainbow, "rainbow-free conversion", (common, lam), point=True)
    add("round", cmd_round, "face-preserving rounding", (common, lam), point=True)
    add("pipeline", cmd_pipeline, "full pipeline with certificate", (common, lam))
    p = add("verify", cmd_verify, "re-check a pipeline certificate", (common,))
    p.add_argument("certificate", help="certificate JSON produced by pipeline")
    p = add("reduce", cmd_reduce, "packing-problem reductions", (common, lam))
    p.add_argument("--mode", choices=["lambda", "two-sided", "additive"], default="lambda")
    p.add_argument("--alpha", type=_rational)
    p.add_argument("--beta", type=_rational)
    p.add_argument("--delta", type=_rationals, help="comma-separated, or one value for all rows")
    p.add_argument("--nu", type=_positive, default=Fraction(1))
    p = add("matroid-basis", cmd_matroid_basis, "budgeted matroid basis", (common,))
    p.add_argument("--epsilon", type=_positive)
    p.add_argument("--nu", type=_positive, default=Fraction(1))
    p = add("oracle", cmd_oracle, "brute-force ground truth", (common,))
    p.add_argument("--table", action="store_true", help="include every candidate")
    p = add("gen-random", cmd_gen_random, "seeded random instance", (common, lam), inp=False)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--nodes", type=int, default=6, help="|V|, or |U| with --matroid")
    p.add_argument("--chain", type=int, default=3)
    p.add_argument("--slack", type=int, default=1)
    p.add_argument("--matroid", action="store_true", help="budgeted matroid instance")
    p.add_argument("--k", type=int, default=2, help="number of budgets with --matroid")
    return parser


def _human(result) -> str:
    lines = []

    def walk(prefix, value):
        if isinstance(value, dict) and not set(value) == {"num", "den"}:
            for k, v in value.items():
                walk(f"{prefix}{k}.", v)
        elif isinstance(value, dict):
            lines.append(f"{prefix[:-1]:<40} {value['num']}/{value['den']}")
        elif isinstance(value, list) and value and isinstance(value[0], (dict, list)):
            for i, v in enumerate(value):
                walk(f"{prefix}{i}.", v)
        else:
            lines.append(f"{prefix[:-1]:<40} {value}")

    walk("", result)
    return "\n".join(lines)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "lam", None) is not None and args.lam <= 1 \
                and args.command not in ("solve-lp", "gen-random"):
            raise errors.ValidationFailed(["lambda must exceed 1"])
        result, code = args.func(args)
    except UsageError as exc:
        _diag({"error": "USAGE", "message": str(exc)})
        return EXIT_USAGE
    except (errors.Infeasible, errors.InfeasibleLP) as exc:
        _diag(exc.to_json())
        return EXIT_INFEASIBLE
    except _CERT_ERRORS as exc:
        _diag(exc.to_json())
        return EXIT_CERT
    except _USAGE_ERRORS as exc:
        _diag(exc.to_json())
        return EXIT_USAGE
    except ValueError as exc:
        _diag({"error": "USAGE", "message": str(exc)})
        return EXIT_USAGE

    text = _human(result) if args.human else json.dumps(result, indent=2)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(json.dumps(result, indent=2) + "\n")
        if args.human:
            print(text)
    else:
        print(text)
    return code


def _diag(payload):
    print(json.dumps(payload), file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
