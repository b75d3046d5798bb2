"""Command-line front end.

Every subcommand prints one JSON object (UTF-8, newline-terminated, keys in
a fixed order).  Exit status is 0 on success, 2 for invalid input and 3
when a size guard rejects the request; errors print
``{"error": code, "detail": text}``.  Spins are always twice-spin integers.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Sequence

from .engine import Permutation, ResourceError, evaluate_amplitude, plan_moves
from .exact import SurdSum
from .ponzano_regge import (
    ClosedTriangulation,
    CobordismError,
    FlipCobordism,
    closed_amplitude_truncated,
    flip_cobordism_amplitude,
    genus,
)
from .recoupling import DomainError, recoupling_tensor, sixj, twist_phase
from .symrep import (
    TwoRowDiagram,
    TwoRowTableau,
    character_estimate,
    character_exact,
    dimension_two_row,
    hoeffding_samples,
    standard_tableaux,
    yof_full_matrix,
    yof_matrix_element,
)
from .trees import (
    LabeledTree,
    TreeError,
    TreeShape,
    count_tree_shapes,
    enumerate_labelings,
    enumerate_shapes,
    tree_from_json,
    tree_to_json,
)

DEFAULT_MAX_N = 20


class InputError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def max_n() -> int:
    raw = os.environ.get("SPINRECOUPLE_MAX_N", str(DEFAULT_MAX_N))
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"SPINRECOUPLE_MAX_N must be an integer, got {raw!r}") from None


def _guard_n(n: int) -> None:
    if n > max_n():
        raise ResourceError(f"n = {n} exceeds SPINRECOUPLE_MAX_N = {max_n()}")


def parse_tree_json(text: str | dict) -> LabeledTree:
    if isinstance(text, str):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise TreeError(f"malformed JSON: {exc}") from None
    else:
        doc = text
    return tree_from_json(doc)


def serialize_tree(tree: LabeledTree) -> str:
    return json.dumps(tree_to_json(tree))


def _surd(value: SurdSum) -> dict:
    return {"terms": value.to_json()["terms"], "float": float(value)}


def _perm(text: str) -> Permutation:
    try:
        return Permutation(tuple(int(x) for x in text.replace(",", " ").split()))
    except ValueError as exc:
        raise InputError(f"--perm: {exc}") from None


def _diagram(text: str) -> TwoRowDiagram:
    try:
        parts = [int(x) for x in text.split(",")]
    except ValueError:
        raise InputError(f"--diagram must look like R1,R2, got {text!r}") from None
    if len(parts) == 1:
        parts.append(0)
    if len(parts) != 2:
        raise InputError("--diagram takes at most two rows")
    try:
        return TwoRowDiagram(*parts)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _tableau(text: str, d: TwoRowDiagram) -> TwoRowTableau:
    try:
        t = TwoRowTableau(tuple(int(x) for x in text.split(",")))
    except ValueError as exc:
        raise InputError(f"tableau {text!r}: {exc}") from None
    if t.diagram != d:
        raise InputError(f"tableau {text} does not have shape {d}")
    return t


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: {exc}") from None


def _spins(values: Sequence[int]) -> None:
    for v in values:
        if v < 0:
            raise InputError("twice-spin arguments must be non-negative")


# --- subcommands -----------------------------------------------------------

def cmd_sixj(args) -> dict:
    _spins(args.spins)
    value = sixj(*args.spins)
    return {"value": _surd(value), "float": float(value)}


def cmd_recouple(args) -> dict:
    _spins(args.spins)
    value = recoupling_tensor(*args.spins)
    return {"value": _surd(value), "float": float(value)}


def cmd_twist(args) -> dict:
    _spins(args.spins)
    try:
        value = twist_phase(*args.spins)
    except DomainError as exc:
        raise InputError(str(exc)) from None
    return {"value": _surd(value), "float": float(value)}


def cmd_amplitude(args) -> dict:
    doc = _load_json(args.input)
    if not isinstance(doc, dict) or set(doc) != {"lambda", "pi", "lambda_prime"}:
        raise InputError("amplitude input must have exactly the fields lambda, pi, lambda_prime")
    lam = parse_tree_json(doc["lambda"])
    lam2 = parse_tree_json(doc["lambda_prime"])
    try:
        p = Permutation(tuple(doc["pi"]))
    except (TypeError, ValueError) as exc:
        raise InputError(f"pi: {exc}") from None
    if not (lam.n == lam2.n == p.n):
        raise InputError("lambda, pi and lambda_prime must have the same n")
    _guard_n(lam.n)
    value = evaluate_amplitude(lam, p, lam2)
    out = {"amplitude": _surd(value), "float": float(value), "imag": 0.0}
    if args.moves:
        out["plan"] = plan_moves(lam.shape, p, lam2.shape).to_json()
    return out


def cmd_trees(args) -> dict:
    if args.shape is not None:
        try:
            shape = TreeShape(json.loads(args.shape))
        except (json.JSONDecodeError, TreeError) as exc:
            raise InputError(f"--shape: {exc}") from None
        if args.root is None:
            raise InputError("--shape requires --root")
        _guard_n(shape.n)
        found = enumerate_labelings(shape, None, args.root)
        return {"count": str(len(found)), "labelings": [tree_to_json(t) for t in found]}
    if args.n is None or args.n < 1:
        raise InputError("trees needs --n N (N >= 1) or --shape")
    _guard_n(args.n)
    out = {"count": str(count_tree_shapes(args.n))}
    if args.list:
        out["shapes"] = [s.to_json() for s in enumerate_shapes(range(1, args.n + 1))]
    return out


def cmd_yof(args) -> dict:
    d = _diagram(args.diagram)
    p = _perm(args.perm)
    if p.n != d.n:
        raise InputError(f"permutation degree {p.n} does not match diagram size {d.n}")
    _guard_n(d.n)
    if args.element:
        row_t, col_t = (_tableau(x, d) for x in args.element)
        value = yof_matrix_element(d, p, row_t, col_t)
        return {"element": _surd(value), "float": float(value)}
    matrix = yof_full_matrix(d, p, workers=args.parallel)
    return {
        "tableaux": [str(t) for t in standard_tableaux(d)],
        "matrix": [[_surd(x) for x in row] for row in matrix],
    }


def cmd_character(args) -> dict:
    d = _diagram(args.diagram)
    p = _perm(args.perm)
    if p.n != d.n:
        raise InputError(f"permutation degree {p.n} does not match diagram size {d.n}")
    _guard_n(d.n)
    if args.exact:
        chi = character_exact(d, p, workers=args.parallel)
        value = chi.rational_part()
        return {"character": str(value), "normalized": float(value / dimension_two_row(d))}
    if args.epsilon is None or args.delta is None:
        raise InputError("character needs --exact or both --epsilon and --delta")
    try:
        samples = hoeffding_samples(args.epsilon, args.delta)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    estimate = character_estimate(d, p, args.epsilon, args.delta, args.seed)
    return {"estimate": estimate, "samples": samples, "seed": args.seed}


def cmd_pr_amplitude(args) -> dict:
    doc = _load_json(args.input)
    if not isinstance(doc, dict) or set(doc) != {"start", "flips", "end"}:
        raise InputError("cobordism input must have exactly the fields start, flips, end")
    start = parse_tree_json(doc["start"])
    end = parse_tree_json(doc["end"])
    _guard_n(start.n)
    value = flip_cobordism_amplitude(FlipCobordism(start, tuple(int(x) for x in doc["flips"]), end))
    return {"amplitude": _surd(value), "float": float(value), "imag": 0.0}


def cmd_pr_closed(args) -> dict:
    doc = _load_json(args.input)
    if not isinstance(doc, dict) or set(doc) != {"tets", "num_edges", "face_gluings"}:
        raise InputError("closed input must have exactly the fields tets, num_edges, face_gluings")
    if args.cutoff < 0:
        raise InputError("--cutoff must be non-negative")
    m = ClosedTriangulation(doc["tets"], doc["num_edges"], doc["face_gluings"])
    result = closed_amplitude_truncated(m, args.cutoff)
    return {
        "value": _surd(result.value),
        "float": float(result.value),
        "touched_cutoff": result.touched_cutoff,
        "labelings": result.admissible_labelings,
    }


def cmd_genus(args) -> dict:
    try:
        return {"genus": genus(args.v, args.e, args.f)}
    except ValueError as exc:
        raise InputError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="spinrecouple", description="Exact spin-network and permutational amplitudes.")
    parser.add_argument("--parallel", type=int, default=1, metavar="N",
                        help="worker processes for matrix and character evaluation")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, func, count, helptext in (
        ("sixj", cmd_sixj, 6, "6j symbol {a b f; c e d} from six twice-spins"),
        ("recouple", cmd_recouple, 6, "recoupling tensor [a b f; c e d]"),
        ("twist", cmd_twist, 3, "exchange phase of j1, j2 coupled to j"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("spins", type=int, nargs=count)
        p.set_defaults(func=func)

    p = sub.add_parser("amplitude", help="<lambda'|U_pi|lambda> for two tree documents")
    p.add_argument("--input", required=True)
    p.add_argument("--moves", action="store_true", help="also dump the compiled move plan")
    p.set_defaults(func=cmd_amplitude)

    p = sub.add_parser("trees", help="count or list coupling-tree shapes and labelings")
    p.add_argument("--n", type=int)
    p.add_argument("--count", action="store_true")
    p.add_argument("--list", action="store_true")
    p.add_argument("--shape", help="nested JSON shape, e.g. '[[1,2],3]'")
    p.add_argument("--root", type=int, help="total twice-spin for --shape")
    p.set_defaults(func=cmd_trees)

    p = sub.add_parser("yof", help="Young's orthogonal form of a permutation")
    p.add_argument("--diagram", required=True)
    p.add_argument("--perm", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--element", nargs=2, metavar=("ROW_T", "COL_T"))
    group.add_argument("--full", action="store_true")
    p.set_defaults(func=cmd_yof)

    p = sub.add_parser("character", help="exact or sampled character of a two-row irrep")
    p.add_argument("--diagram", required=True)
    p.add_argument("--perm", required=True)
    p.add_argument("--exact", action="store_true")
    p.add_argument("--epsilon", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_character)

    p = sub.add_parser("pr-amplitude", help="Ponzano-Regge amplitude of a flip cobordism")
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_pr_amplitude)

    p = sub.add_parser("pr-closed", help="truncated Ponzano-Regge state sum of a closed triangulation")
    p.add_argument("--input", required=True)
    p.add_argument("--cutoff", type=int, required=True)
    p.set_defaults(func=cmd_pr_closed)

    p = sub.add_parser("genus", help="genus from vertex, edge and face counts")
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--e", type=int, required=True)
    p.add_argument("--f", type=int, required=True)
    p.set_defaults(func=cmd_genus)
    return parser


def _dump(obj: dict) -> str:
    return json.dumps(obj) + "\n"


def run(argv: Sequence[str]) -> tuple[int, str]:
    """Execute one command; returns the exit code and the exact output text."""
    try:
        args = build_parser().parse_args(list(argv))
        if args.parallel < 1:
            raise InputError("--parallel must be at least 1")
        return 0, _dump(args.func(args))
    except ResourceError as exc:
        return 3, _dump({"error": "resource_limit", "detail": str(exc)})
    except (InputError, TreeError, CobordismError, DomainError, ValueError) as exc:
        return 2, _dump({"error": "invalid_input", "detail": str(exc)})


def main(argv: Sequence[str] | None = None) -> int:
    code, text = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
