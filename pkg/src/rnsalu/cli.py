"""Command-line interface: ``rnsalu <command> ...``.

Exit codes: 0 success, 2 usage error, 3 range/budget/division error,
4 I/O error.  Randomized demos draw from Python's ``random.Random``
(Mersenne Twister MT19937) seeded with ``--seed``.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import random
import re
import sys
from fractions import Fraction
from pathlib import Path

from . import costmodel
from .convert import forward_int, from_mixed_radix, reverse_int, to_mixed_radix
from .errors import NotCoprimeError, RangeError, RnsError
from .fraction import FracSplit, RnsFixed, format_decimal, forward_frac, parse_value, reverse_frac
from .fraction import add as fadd, div as fdiv, mul as fmul, sub as fsub
from .linalg import FixedMatrix, matmul_delayed
from .number_system import (
    RnsSystem,
    first_primes,
    max_system_for_digit_width,
    metrics,
    natural_system,
    power_augmented_system,
    top_prime_count,
)
from .rns_int import RnsInt
from .steps import StepCounter

EXIT_USAGE, EXIT_RANGE, EXIT_IO = 2, 3, 4


class UsageError(Exception):
    pass


class ParseError(UsageError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


# -- argument helpers ---------------------------------------------------------


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _q_range(text: str) -> range:
    m = re.fullmatch(r"\s*(\d+)\s*(?:\.\.\s*(\d+)\s*)?", text)
    if not m:
        raise argparse.ArgumentTypeError(f"expected A..B, got {text!r}")
    lo = int(m.group(1))
    hi = int(m.group(2) or lo)
    if hi < lo:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return range(lo, hi + 1)


def _add_system_args(parser: argparse.ArgumentParser, required: bool = True) -> None:
    g = parser.add_mutually_exclusive_group(required=required)
    g.add_argument("--Q", type=int, help="all primes below 2**Q")
    g.add_argument("--p", type=int, help="the first p primes")
    g.add_argument("--moduli", type=_int_list, help="explicit comma-separated moduli")


def _add_format(parser: argparse.ArgumentParser, default: str = "text") -> None:
    parser.add_argument("--format", choices=("text", "csv", "json"), default=default)


def _system_from(args) -> RnsSystem | None:
    try:
        if args.Q is not None:
            return max_system_for_digit_width(args.Q)
        if args.p is not None:
            return natural_system(args.p)
        if args.moduli is not None:
            return RnsSystem(args.moduli)
    except NotCoprimeError as exc:
        a, b = exc.pair
        raise UsageError(f"invalid moduli: {a} and {b} share a factor (gcd {math.gcd(a, b)})")
    except ValueError as exc:
        raise UsageError(str(exc))
    return None


def _default_system_for(frac_moduli: list[int]) -> RnsSystem:
    """Smallest natural system containing ``frac_moduli`` with ``R >= 32 F**2``."""
    F = math.prod(frac_moduli)
    p = 1
    while True:
        mods = first_primes(p)
        if set(frac_moduli) <= set(mods) and math.prod(mods) >= 32 * F * F:
            return RnsSystem(mods)
        p += 1
        if p > 10_000:
            raise UsageError("fractional moduli must be primes")


def _split_from(args, system: RnsSystem) -> FracSplit:
    try:
        if getattr(args, "frac_moduli", None):
            return FracSplit(system, args.frac_moduli)
        if getattr(args, "frac_bits", None):
            return FracSplit.for_precision(system, 1 << args.frac_bits)
        return FracSplit.for_precision(system, max(2, math.isqrt(system.R // 128)))
    except ValueError as exc:
        raise UsageError(str(exc))


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# -- commands -----------------------------------------------------------------


def cmd_system(args) -> int:
    if args.select != "natural":
        if args.Q is None:
            raise UsageError("--select needs --Q")
        count = None
        if args.select == "power-augmented-top":
            count = args.count or top_prime_count(args.Q)
        system = power_augmented_system(args.Q, count)
    else:
        system = _system_from(args)
    m = metrics(system)
    info = {
        "p": m.p,
        "P": m.P,
        "Q": m.Q,
        "R": system.R if system.R.bit_length() <= 256 else None,
        "n_e": round(m.n_e, 4),
        "decimal_digits": m.decimal_digits,
        "E_R": round(m.E_R, 4),
        "p/n_e": round(m.ratio_p_over_ne, 4),
        "binary_digits": m.binary_digits,
    }
    if args.show_moduli or system.p <= 16:
        info["moduli"] = list(system.moduli)
    if args.format == "json":
        _write(json.dumps(info, indent=2) + "\n", None)
    elif args.format == "csv":
        keys = [k for k in info if k != "moduli"]
        _write(",".join(keys) + "\n" + ",".join(str(info[k]) for k in keys) + "\n", None)
    else:
        lines = [f"{k:>15}: {v}" for k, v in info.items() if v is not None]
        _write("\n".join(lines) + "\n", None)
    return 0


def cmd_tables(args) -> int:
    table = costmodel.emit_table(args.id, args.q, args.select)
    _write(table.render(args.format), args.out)
    return 0


def cmd_graph(args) -> int:
    default = range(6, 15) if args.id == "3" else range(1, 33)
    table = costmodel.emit_graph_data(args.id, args.range or default)
    _write(table.render(args.format), args.out)
    return 0


def cmd_convert(args) -> int:
    system = _system_from(args)
    counter = StepCounter()
    out: dict = {"moduli": list(system.moduli)}
    if args.reverse:
        if args.digits is None:
            raise UsageError("--reverse needs --digits")
        try:
            a = RnsInt(system, args.digits)
        except ValueError as exc:
            raise UsageError(str(exc))
        mr = to_mixed_radix(a)
        if args.frac_moduli:
            split = _split_from(args, system)
            value = reverse_frac(RnsFixed(a, split), counter)
            out.update(value=str(value), decimal=format_decimal(value, args.places), F=split.F)
        else:
            out["value"] = str(reverse_int(a, counter))
        out["mixed_radix"] = list(mr.mr_digits)
        out["unsigned"] = str(from_mixed_radix(mr))
    elif args.frac is not None:
        split = _split_from(args, system)
        x = forward_frac(args.frac, split, counter)
        out.update(F=split.F, payload=str(reverse_int(x.payload)), digits=list(x.payload.digits))
    elif args.int is not None:
        a = forward_int(args.int, system, counter)
        out["digits"] = list(a.digits)
    else:
        raise UsageError("convert needs --int, --frac or --reverse --digits")
    out["steps"] = counter.steps
    if args.format == "json":
        _write(json.dumps(out, indent=2) + "\n", None)
    else:
        for k, v in out.items():
            if isinstance(v, list):
                v = ",".join(map(str, v))
            _write(f"{k}: {v}\n", None)
    return 0


_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d+)?(?:/\d+)?)|(.))")


def _tokenize(expr: str) -> list[tuple[str, str, int]]:
    tokens, pos = [], 0
    while pos < len(expr):
        m = _TOKEN.match(expr, pos)
        if m.group(1) is not None:
            tokens.append(("num", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            if m.group(2) not in "+-*/()":
                raise ParseError(f"unexpected character {m.group(2)!r}", m.start(2))
            tokens.append(("op", m.group(2), m.start(2)))
        pos = m.end()
    tokens.append(("end", "", len(expr)))
    return tokens


class _Evaluator:
    """Recursive-descent evaluator over fixed-point residue values.

    A literal such as ``3/5`` (no spaces) is one rational constant; a
    spaced ``/`` is division.
    """

    def __init__(self, expr: str, split: FracSplit):
        self.tokens = _tokenize(expr)
        self.i = 0
        self.split = split
        self.counter = StepCounter()
        self.log: list[tuple[str, int]] = []

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def run(self) -> RnsFixed:
        v = self.expr()
        kind, text, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {text!r}", pos)
        return v

    def _apply(self, op: str, a: RnsFixed, b: RnsFixed) -> RnsFixed:
        fn = {"+": fadd, "-": fsub, "*": fmul, "/": fdiv}[op]
        before = self.counter.steps
        r = fn(a, b, self.counter)
        self.log.append((op, self.counter.steps - before))
        return r

    def expr(self):
        v = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            v = self._apply(op, v, self.term())
        return v

    def term(self):
        v = self.unary()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            v = self._apply(op, v, self.unary())
        return v

    def unary(self):
        if self.peek()[:2] == ("op", "-"):
            self.take()
            v = self.unary()
            r = -v
            self.log.append(("neg", 1))
            self.counter.tick()
            return r
        return self.atom()

    def atom(self):
        kind, text, pos = self.take()
        if kind == "num":
            try:
                return forward_frac(parse_value(text), self.split)
            except ValueError as exc:
                raise ParseError(str(exc), pos)
        if (kind, text) == ("op", "("):
            v = self.expr()
            kind, text, pos = self.take()
            if (kind, text) != ("op", ")"):
                raise ParseError("expected ')'", pos)
            return v
        raise ParseError(f"unexpected {text or 'end of input'!r}", pos)


def cmd_eval(args) -> int:
    system = _system_from(args)
    if system is None:
        if not args.frac_moduli:
            raise UsageError("eval needs a system (--Q/--p/--moduli) or --frac-moduli")
        system = _default_system_for(args.frac_moduli)
    split = _split_from(args, system)
    ev = _Evaluator(args.expression, split)
    result = ev.run()
    value = reverse_frac(result)
    out = {
        "value": str(value),
        "decimal": format_decimal(value, args.places),
        "F": split.F,
        "p": system.p,
        "moduli": list(system.moduli),
        "ops": [{"op": op, "steps": n} for op, n in ev.log],
        "steps": ev.counter.steps,
    }
    if args.format == "json":
        _write(json.dumps(out, indent=2) + "\n", None)
    else:
        _write(f"value: {out['value']}\ndecimal: {out['decimal']}\n", None)
        _write(f"system: p={system.p} F={split.F}\n", None)
        for op, n in ev.log:
            _write(f"  {op}: {n} steps\n", None)
        _write(f"steps: {ev.counter.steps}\n", None)
    return 0


def read_matrix_csv(path: str) -> list[list[Fraction]]:
    with open(path, newline="") as fh:
        rows = [[parse_value(tok) for tok in row] for row in csv.reader(fh) if row]
    return rows


def random_payloads(M: int, bound: int, rng: random.Random) -> list[list[int]]:
    return [[rng.randint(-bound, bound) for _ in range(M)] for _ in range(M)]


def _exact_matmul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def cmd_matmul(args) -> int:
    system = _system_from(args) or natural_system(8)
    split = _split_from(args, system)
    if args.random:
        M = args.random
        rng = random.Random(args.seed)
        bound = min(split.F, math.isqrt(system.max_abs // M))
        A = FixedMatrix.from_payloads(random_payloads(M, bound, rng), split)
        B = FixedMatrix.from_payloads(random_payloads(M, bound, rng), split)
    elif args.a and args.b:
        A = FixedMatrix.from_values(read_matrix_csv(args.a), split)
        B = FixedMatrix.from_values(read_matrix_csv(args.b), split)
    else:
        raise UsageError("matmul needs --random M or both --a and --b")
    counter = StepCounter()
    C = matmul_delayed(A, B, counter)
    exact = _exact_matmul(A.to_fractions(), B.to_fractions())
    got = C.to_fractions()
    max_err = max(abs(g - e) for gr, er in zip(got, exact) for g, e in zip(gr, er))
    n, m = C.shape
    M = A.shape[1]
    report = costmodel.cost_report(system.p, system.Q, metrics(system).n_e)
    clocks = report.matrix(M)
    summary = {
        "shape": [n, m],
        "F": split.F if split.F.bit_length() <= 64 else f"2^{math.log2(split.F):.2f}",
        "p": system.p,
        "normalizations": counter.normalizations,
        "steps": counter.steps,
        "max_error_ulp": f"{float(max_err * split.F):.6f}",
        "error_bound_ulp": "0.5",
        "within_bound": max_err <= Fraction(1, 2 * split.F),
        "model_rns_delayed": clocks["rns_delayed"],
        "model_binary_standard": clocks["binary_standard"],
    }
    matrix = [[format_decimal(v, args.places) for v in row] for row in got]
    if args.format == "json":
        _write(json.dumps({**summary, "result": matrix}, indent=2) + "\n", args.out)
    elif args.format == "csv":
        _write("".join(",".join(r) + "\n" for r in matrix), args.out)
    else:
        text = "".join(f"{k}: {v}\n" for k, v in summary.items())
        text += "result:\n" + "".join("  " + "  ".join(r) + "\n" for r in matrix)
        _write(text, args.out)
    return 0


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rnsalu", description="Residue number system arithmetic and cost model")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("system", help="print metrics of a modulus set")
    _add_system_args(p, required=False)
    p.add_argument(
        "--select",
        choices=("natural", "power-augmented", "power-augmented-top"),
        default="natural",
        help="modulus selection for --Q",
    )
    p.add_argument("--count", type=int, help="moduli kept by power-augmented-top")
    p.add_argument("--show-moduli", action="store_true")
    _add_format(p)
    p.set_defaults(func=cmd_system)

    p = sub.add_parser("tables", help="regenerate digit-growth tables")
    p.add_argument("--id", choices=("2", "3", "5"), required=True)
    p.add_argument("--q", type=_q_range, default=range(8, 15), help="digit widths, e.g. 4..14")
    p.add_argument(
        "--select",
        choices=tuple(costmodel.CONSTRUCTIONS),
        default="natural",
        help="modulus construction behind each row",
    )
    p.add_argument("--out")
    _add_format(p)
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("graph", help="emit plot series")
    p.add_argument("--id", choices=("1", "2", "3"), required=True)
    p.add_argument("--range", type=_q_range, help="p range (graphs 1, 2) or Q range (graph 3)")
    p.add_argument("--out")
    _add_format(p, "csv")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("convert", help="forward or reverse conversion")
    _add_system_args(p)
    p.add_argument("--int", type=int)
    p.add_argument("--frac")
    p.add_argument("--reverse", action="store_true")
    p.add_argument("--digits", type=_int_list)
    p.add_argument("--frac-moduli", type=_int_list)
    p.add_argument("--frac-bits", type=int)
    p.add_argument("--places", type=int, default=10)
    _add_format(p)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("eval", help="evaluate a fractional expression")
    _add_system_args(p, required=False)
    p.add_argument("expression")
    p.add_argument("--frac-moduli", type=_int_list)
    p.add_argument("--frac-bits", type=int)
    p.add_argument("--places", type=int, default=10)
    _add_format(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("matmul", help="delayed-normalization matrix product")
    _add_system_args(p, required=False)
    p.add_argument("--a", help="CSV file for the left matrix")
    p.add_argument("--b", help="CSV file for the right matrix")
    p.add_argument("--random", type=int, metavar="M", help="random M x M operands")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--frac-moduli", type=_int_list)
    p.add_argument("--frac-bits", type=int)
    p.add_argument("--places", type=int, default=10)
    p.add_argument("--out")
    _add_format(p)
    p.set_defaults(func=cmd_matmul)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"rnsalu: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RangeError, ZeroDivisionError) as exc:
        print(f"rnsalu: range error: {exc}", file=sys.stderr)
        return EXIT_RANGE
    except OSError as exc:
        print(f"rnsalu: I/O error: {exc.filename or ''}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_IO
    except (RnsError, ValueError) as exc:
        print(f"rnsalu: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
