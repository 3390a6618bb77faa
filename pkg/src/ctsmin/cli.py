"""Command line front end.

Exit codes: 0 success (or a positive check), 1 negative check result,
2 usage errors, 3 validation errors in the input model.
"""

from __future__ import annotations

import argparse
import json
import sys

from .equivalence import (
    greatest_conditional_bisimilarity_naive,
    lattice_bisim_fixpoint,
)
from .minimise import (
    chain_result_dot,
    chain_result_json,
    minimise_chain,
    minimise_fixpoint_kernel,
)
from .modelfile import ParseError, convert_model, parse_model, serialise_model
from .models import (
    Cts,
    NotDownwardClosed,
    check_upgrade_preserving,
    coalgebra_encode,
    lats_to_cts,
    project,
)
from .order import AntisymmetryViolation, OrderError


def _read_model(path: str, close: bool):
    with open(path, encoding="utf-8") as handle:
        return parse_model(handle.read(), close=close)


def _as_cts(model) -> Cts:
    return model if isinstance(model, Cts) else lats_to_cts(model)


def _relation_report(relation, algorithm: str, iterations: int) -> dict:
    pairs = {}
    for ((x, y), conds) in relation.table().items():
        if conds:
            pairs[f"{x},{y}"] = sorted(conds)
    return {"algorithm": algorithm, "iterations": iterations, "pairs": pairs}


def _emit_json(payload: dict) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def _cmd_validate(args) -> int:
    try:
        model = _read_model(args.file, args.close)
    except (ParseError, NotDownwardClosed, AntisymmetryViolation, OrderError) as err:
        print(f"invalid: {err}")
        return 1
    as_cts = _as_cts(model)
    kind = "lats" if not isinstance(model, Cts) else "cts"
    print(
        f"ok: {kind} with {len(as_cts.states)} states,"
        f" {len(as_cts.actions)} actions,"
        f" {len(as_cts.conditions.elements)} conditions,"
        f" {len(as_cts.edges())} transitions"
    )
    return 0


def _cmd_convert(args) -> int:
    model = _read_model(args.file, args.close)
    sys.stdout.write(serialise_model(convert_model(model, args.to)))
    return 0


def _cmd_project(args) -> int:
    as_cts = _as_cts(_read_model(args.file, args.close))
    as_cts.conditions.check_element(args.condition)
    flat = project(as_cts, args.condition)
    for (src, act, dst) in sorted(flat.edges):
        print(f"{src} {act} {dst}")
    return 0


def _cmd_bisim(args) -> int:
    as_cts = _as_cts(_read_model(args.file, args.close))
    if args.algo == "naive":
        family, iterations = greatest_conditional_bisimilarity_naive(as_cts)
        pairs = {}
        for x in as_cts.states:
            for y in as_cts.states:
                conds = sorted(
                    phi
                    for phi in as_cts.conditions.elements
                    if (x, y) in family.relation(phi)
                )
                if conds:
                    pairs[f"{x},{y}"] = conds
        report = {"algorithm": "naive", "iterations": iterations, "pairs": pairs}
    else:
        relation, iterations = lattice_bisim_fixpoint(as_cts)
        report = _relation_report(relation, "fixpoint", iterations)
    _emit_json(report)
    return 0


def _cmd_check(args) -> int:
    as_cts = _as_cts(_read_model(args.file, args.close))
    for state in (args.x, args.y):
        if state not in as_cts.states:
            print(f"unknown state {state!r}", file=sys.stderr)
            return 2
    as_cts.conditions.check_element(args.condition)
    relation, _ = lattice_bisim_fixpoint(as_cts)
    if args.condition in relation.value(args.x, args.y):
        print(f"{args.x} and {args.y} are bisimilar under {args.condition}")
        return 0
    print(f"{args.x} and {args.y} are not bisimilar under {args.condition}")
    return 1


def _cmd_minimise(args) -> int:
    as_cts = _as_cts(_read_model(args.file, args.close))
    if args.algo == "fixpoint-kernel":
        result = minimise_fixpoint_kernel(as_cts)
    else:
        result = minimise_chain(coalgebra_encode(as_cts))
    _emit_json(chain_result_json(result))
    if args.dot is not None:
        with open(args.dot, "w", encoding="utf-8") as handle:
            handle.write(chain_result_dot(result, as_cts.conditions))
    return 0


def _cmd_filters_check(args) -> int:
    as_cts = _as_cts(_read_model(args.file, args.close))
    ok, witness = check_upgrade_preserving(coalgebra_encode(as_cts))
    if ok:
        print("upgrade preserving")
        return 0
    x, act, phi, psi = witness
    print(
        "not upgrade preserving:"
        f" state {x}, action {act}, downgrade {phi} -> {psi}"
    )
    return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ctsmin",
        description="conditional transition system tools",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("file", help="model file")
        p.add_argument(
            "--close",
            action="store_true",
            help="close transition labels downward instead of rejecting",
        )

    p = sub.add_parser("validate", help="parse and validate a model file")
    common(p)
    p.set_defaults(run=_cmd_validate)

    p = sub.add_parser("convert", help="convert between cts and lats form")
    common(p)
    p.add_argument("--to", choices=("cts", "lats"), required=True)
    p.set_defaults(run=_cmd_convert)

    p = sub.add_parser("project", help="print the plain system at one condition")
    common(p)
    p.add_argument("--condition", required=True)
    p.set_defaults(run=_cmd_project)

    p = sub.add_parser("bisim", help="compute conditional bisimilarity")
    common(p)
    p.add_argument("--algo", choices=("fixpoint", "naive"), default="fixpoint")
    p.set_defaults(run=_cmd_bisim)

    p = sub.add_parser("check", help="decide bisimilarity of two states")
    common(p)
    p.add_argument("x")
    p.add_argument("y")
    p.add_argument("--condition", required=True)
    p.set_defaults(run=_cmd_check)

    p = sub.add_parser("minimise", help="minimise via the behaviour chain")
    common(p)
    p.add_argument(
        "--algo", choices=("chain", "fixpoint-kernel"), default="chain"
    )
    p.add_argument("--dot", help="also write the quotient as a dot graph")
    p.set_defaults(run=_cmd_minimise)

    p = sub.add_parser(
        "filters-check", help="check that upgrades preserve behaviour"
    )
    common(p)
    p.set_defaults(run=_cmd_filters_check)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except FileNotFoundError as err:
        print(f"cannot read {err.filename}", file=sys.stderr)
        return 2
    except (ParseError, NotDownwardClosed, AntisymmetryViolation) as err:
        print(f"invalid model: {err}", file=sys.stderr)
        return 3
    except OrderError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
