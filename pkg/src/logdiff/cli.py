"""Command-line interface.

Subcommands: ``check-free`` (Saito certification), ``decompose`` (write a
tangent operator as words in a basis), ``tangent`` (truncated tangency
table), and ``verify`` (seeded randomized checks of the core identities).

Exit codes: 0 success, 1 mathematical negative, 2 usage or parse error.
Arrangements come from JSON files ``{"dim": l, "forms": [[coeff, ...],
...], "basis": ["op text", ...]}`` or from the named fixtures
``builtin:boolean1``, ``builtin:boolean2``, ``builtin:boolean3``,
``builtin:triple2``, ``builtin:generic3``.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from math import comb
from typing import Sequence

from .arrangement import Arrangement, builtin_arrangement, saito_check
from .exprparse import ParseError, parse_diffop, render
from .jacobian import OpFamily, higher_jacobian, jacobian_power_identity, product_family
from .linalg import sym_indices, sym_power_det_identity_holds
from .polyring import LinearForm, Poly, coordinates, divides_power
from .tangent import (
    DecompositionError,
    decompose,
    decomposition_to_json,
    reassemble,
    tangency_table,
)
from .weyl import Derivation, DiffOp


class CliError(Exception):
    """Input could not be loaded or validated; maps to exit code 2."""


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise CliError(f"{path} is not valid JSON: {exc}") from None


def _parse_basis_texts(texts, dim: int) -> tuple[Derivation, ...]:
    thetas = []
    for i, text in enumerate(texts, start=1):
        try:
            op = parse_diffop(str(text), dim)
            thetas.append(Derivation.from_diffop(op))
        except (ParseError, ValueError) as exc:
            raise CliError(f"basis entry {i} ({text!r}): {exc}") from None
    return tuple(thetas)


def _load_arrangement(source: str) -> tuple[Arrangement, tuple[Derivation, ...] | None]:
    if source.startswith("builtin:"):
        try:
            return builtin_arrangement(source[len("builtin:"):])
        except ValueError as exc:
            raise CliError(str(exc)) from None
    data = _load_json(source)
    if not isinstance(data, dict) or "dim" not in data or "forms" not in data:
        raise CliError(f"{source}: expected an object with 'dim' and 'forms'")
    dim = data["dim"]
    try:
        forms = [
            LinearForm(tuple(Fraction(str(c)) for c in row))
            for row in data["forms"]
        ]
        arr = Arrangement(forms)
    except (ValueError, ZeroDivisionError) as exc:
        raise CliError(f"{source}: {exc}") from None
    if arr.dim != dim:
        raise CliError(f"{source}: forms have {arr.dim} coefficients but dim is {dim}")
    thetas = _parse_basis_texts(data["basis"], dim) if "basis" in data else None
    return arr, thetas


def _load_basis_file(path: str, dim: int) -> tuple[Derivation, ...]:
    data = _load_json(path)
    if isinstance(data, dict):
        data = data.get("basis")
    if not isinstance(data, list):
        raise CliError(f"{path}: expected a list of operator strings (or a 'basis' key)")
    return _parse_basis_texts(data, dim)


def _resolve_basis(args, arr, builtin_thetas) -> tuple[Derivation, ...]:
    if getattr(args, "basis", None):
        return _load_basis_file(args.basis, arr.dim)
    if builtin_thetas is not None:
        return builtin_thetas
    raise CliError("no candidate basis: pass --basis or use a builtin with one")


def _parse_op(text: str, dim: int) -> DiffOp:
    try:
        return parse_diffop(text, dim)
    except ParseError as exc:
        raise CliError(f"operator {text!r}: {exc}") from None


def cmd_check_free(args) -> int:
    arr, builtin_thetas = _load_arrangement(args.arrangement)
    thetas = _resolve_basis(args, arr, builtin_thetas)
    try:
        result = saito_check(arr, thetas)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    if result.ok:
        print(f"free, lambda = {result.scalar}, degrees = {list(result.degrees)}")
        return 0
    where = f" (derivation {result.index})" if result.index is not None else ""
    print(f"not free under this candidate: {result.reason}{where}")
    if result.determinant is not None:
        print(f"determinant = {render(result.determinant)}")
    return 1


def _dpart_text(beta) -> str:
    pieces = [f"d{i}" if e == 1 else f"d{i}^{e}" for i, e in enumerate(beta, 1) if e]
    return "*".join(pieces) if pieces else "1"


def cmd_tangent(args) -> int:
    arr, _ = _load_arrangement(args.arrangement)
    op = _parse_op(args.op, arr.dim)
    if args.tmax < 1:
        raise CliError("--tmax must be at least 1")
    rows = tangency_table(op, arr, args.tmax)
    all_ok = True
    for i, form in enumerate(arr.forms, start=1):
        cells = [r for r in rows if r.form_index == i]
        line = ", ".join(f"t={r.t} {'pass' if r.ok else 'FAIL'}" for r in cells)
        print(f"form {i} ({render(form.as_poly())}): {line}")
        for r in cells:
            if not r.ok:
                all_ok = False
                beta, coeff = r.witness
                print(
                    f"  witness at t={r.t}: coefficient {render(coeff)} of "
                    f"{_dpart_text(beta)} not divisible by "
                    f"({render(form.as_poly())})^{r.t}"
                )
    if all_ok:
        print(f"overall: tangent up to t_max = {args.tmax}")
        return 0
    print(f"overall: not tangent (t_max = {args.tmax})")
    return 1


def cmd_decompose(args) -> int:
    arr, builtin_thetas = _load_arrangement(args.arrangement)
    thetas = _resolve_basis(args, arr, builtin_thetas)
    result = saito_check(arr, thetas)
    if not result.ok:
        raise CliError(f"candidate basis fails the Saito check: {result.reason}")
    op = _parse_op(args.op, arr.dim)
    try:
        dec = decompose(op, arr, result, t_max=args.tmax)
    except DecompositionError as exc:
        print(f"not decomposable: {exc}")
        return 1
    if reassemble(dec) != op and op:
        raise AssertionError("internal error: reassembly does not match the input")
    if not dec.words and op:
        raise AssertionError("internal error: nonzero operator gave no words")
    payload = decomposition_to_json(dec)
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        if not payload:
            print("0")
        for item in payload:
            print(f"word {item['word']}: coeff {item['coeff']}")
    return 0


def _random_monomial(rng: random.Random, nvars: int, max_degree: int):
    exps = [0] * nvars
    for _ in range(rng.randint(0, max_degree)):
        exps[rng.randrange(nvars)] += 1
    return tuple(exps)


def _random_poly(rng: random.Random, nvars: int, max_degree: int, nonzero: bool = False) -> Poly:
    terms = {}
    for _ in range(rng.randint(0, 3)):
        terms[_random_monomial(rng, nvars, max_degree)] = rng.randint(-4, 4)
    p = Poly(nvars, terms)
    if nonzero and not p:
        return Poly.constant(nvars, rng.choice([1, 2, -1, -2, 3]))
    return p


def _random_order_one_op(rng: random.Random, nvars: int, max_degree: int) -> DiffOp:
    op = DiffOp.from_poly(_random_poly(rng, nvars, max_degree))
    for i in range(1, nvars + 1):
        op = op + _random_poly(rng, nvars, max_degree) * DiffOp.partial(nvars, i)
    return op


def _report(name: str, details: str, trials: int, seed: int, failures: list[str]) -> int:
    passed = trials - len(failures)
    print(f"{name}: {details} trials={trials} seed={seed} passed={passed} failed={len(failures)}")
    for line in failures:
        print(f"  reproduce: {line}")
    return 0 if not failures else 1


def _verify_sym_power(args) -> int:
    rng = random.Random(args.seed)
    failures = []
    for trial in range(args.trials):
        m = [[rng.randint(-5, 5) for _ in range(args.l)] for _ in range(args.l)]
        if not sym_power_det_identity_holds(m, args.p):
            failures.append(f"trial {trial}: matrix {m}")
    return _report("sym-power", f"l={args.l} p={args.p}", args.trials, args.seed, failures)


def _verify_jacobian_power(args) -> int:
    dim = args.l
    fixture_thetas = None
    if args.arrangement:
        arr, fixture_thetas = _load_arrangement(args.arrangement)
        dim = arr.dim
    rng = random.Random(args.seed)
    fs = coordinates(dim)
    failures = []
    for trial in range(args.trials):
        if trial == 0 and fixture_thetas is not None:
            ops: Sequence = fixture_thetas
            label = "fixture basis"
        else:
            ops = [_random_order_one_op(rng, dim, 2) for _ in range(dim)]
            label = "; ".join(render(op) for op in ops)
        if not jacobian_power_identity(fs, ops, args.p):
            failures.append(f"trial {trial}: ops {label}")
    return _report("jacobian-power", f"l={dim} p={args.p}", args.trials, args.seed, failures)


def _random_word_entry(rng: random.Random, thetas, max_len: int, nvars: int) -> DiffOp:
    length = rng.randint(0, max_len)
    letters = sorted(rng.randint(1, len(thetas)) for _ in range(length))
    op = DiffOp.from_poly(_random_poly(rng, nvars, 2, nonzero=True))
    for i in letters:
        op = op * thetas[i - 1].as_diffop()
    return op


def _verify_divisibility(args) -> int:
    if not args.arrangement:
        raise CliError("--lemma divisibility needs --arrangement (with a basis)")
    arr, thetas = _load_arrangement(args.arrangement)
    if getattr(args, "basis", None):
        thetas = _load_basis_file(args.basis, arr.dim)
    if thetas is None:
        raise CliError("divisibility check needs a basis of tangent derivations")
    rng = random.Random(args.seed)
    fs = coordinates(arr.dim)
    exponent = comb(args.p + arr.dim - 1, arr.dim)
    failures = []
    for trial in range(args.trials):
        entries = tuple(
            _random_word_entry(rng, thetas, args.p, arr.dim)
            for _ in sym_indices(arr.dim, args.p)
        )
        fam = OpFamily(arr.dim, args.p, entries)
        jac = higher_jacobian(fs, fam)
        if not divides_power(arr.q, exponent, jac):
            failures.append(
                f"trial {trial}: entries {[render(e) for e in entries]}"
            )
    return _report(
        "divisibility", f"arrangement={args.arrangement} p={args.p}",
        args.trials, args.seed, failures,
    )


def cmd_verify(args) -> int:
    if args.p < 0:
        raise CliError("--p must be non-negative")
    if args.trials < 1:
        raise CliError("--trials must be at least 1")
    if args.lemma == "sym-power":
        return _verify_sym_power(args)
    if args.lemma == "jacobian-power":
        if args.p < 1:
            raise CliError("--p must be at least 1 for jacobian-power")
        return _verify_jacobian_power(args)
    return _verify_divisibility(args)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="logdiff",
        description="Exact computations with differential operators tangent "
                    "to central hyperplane arrangements.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-free", help="run the Saito criterion on a candidate basis")
    p.add_argument("--arrangement", required=True, help="JSON file or builtin:<name>")
    p.add_argument("--basis", help="JSON file with a list of operator strings")
    p.set_defaults(func=cmd_check_free)

    p = sub.add_parser("decompose", help="write a tangent operator as words in a basis")
    p.add_argument("--arrangement", required=True)
    p.add_argument("--basis")
    p.add_argument("--op", required=True, help="operator text, e.g. 'x1^2*d1^2'")
    p.add_argument("--tmax", type=int, default=None,
                   help="tangency pre-check cutoff (default: the operator order)")
    p.add_argument("--json", action="store_true", help="emit the word list as JSON")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("tangent", help="truncated tangency table for an operator")
    p.add_argument("--arrangement", required=True)
    p.add_argument("--op", required=True)
    p.add_argument("--tmax", type=int, required=True)
    p.set_defaults(func=cmd_tangent)

    p = sub.add_parser("verify", help="seeded randomized checks of the core identities")
    p.add_argument("--lemma", required=True,
                   choices=["sym-power", "jacobian-power", "divisibility"])
    p.add_argument("--l", type=int, default=2, help="ambient dimension")
    p.add_argument("--p", type=int, default=2, help="power / level")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--arrangement", help="fixture for jacobian-power / divisibility")
    p.add_argument("--basis")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
