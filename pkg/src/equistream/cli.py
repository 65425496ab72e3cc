"""Command-line front end.

File formats (tokens are whitespace-separated; ``#`` starts a comment that
runs to the end of the line; every number is an exact rational written as
``p/q``, an integer, or a decimal literal, with decimals read exactly):

* game file:  ``game n m``, ``A:`` followed by n rows of m entries,
  ``B:`` followed by n rows of m entries.
* inequality file: ``ineq n m``, ``A:`` followed by n rows of m entries,
  ``b:`` followed by one row of n entries.
* correlated file: ``corr n m`` followed by n rows of m entries.

Exit codes: 0 success, 1 invalid verdict, 2 usage or parse error,
3 no solution, 4 oracle unanswerable.
"""

from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction

from .algebra import mp_gadget, product_game
from .errors import (ArgumentError, ContractError, FormatError,
                     UnanswerableError)
from .fourier_motzkin import IneqSystem, fm_solve_exact, fm_solve_stream
from .games import (BiMatrixGame, CorrelatedMatrix, MixedProfile,
                    enumerate_pure, first_correlated_violation,
                    first_nash_violation)
from .oracles import ExactOracle
from .reductions import CATALOG, run
from .solvers import solve_correlated, solve_nash
from .streams import NatStream, RealStream, const


# ---------------------------------------------------------------------------
# Tokens and numbers
# ---------------------------------------------------------------------------

def parse_rational(token: str) -> Fraction:
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError("not a rational number: %r" % token) from exc


def format_rational(value: Fraction) -> str:
    return str(Fraction(value))


def _tokenize(text: str) -> list:
    tokens = []
    for line in text.splitlines():
        body = line.split("#", 1)[0]
        tokens.extend(body.split())
    return tokens


class _TokenReader:
    def __init__(self, text: str, source: str):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.source = source

    def next(self) -> str:
        if self.pos >= len(self.tokens):
            raise FormatError("%s: unexpected end of file" % self.source)
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def expect(self, literal: str):
        token = self.next()
        if token != literal:
            raise FormatError("%s: expected %r, found %r"
                              % (self.source, literal, token))

    def natural(self) -> int:
        token = self.next()
        if not token.isdigit() or int(token) < 1:
            raise FormatError("%s: expected a positive integer, found %r"
                              % (self.source, token))
        return int(token)

    def rational(self) -> Fraction:
        return parse_rational(self.next())

    def matrix(self, n: int, m: int) -> list:
        return [[self.rational() for _ in range(m)] for _ in range(n)]

    def done(self):
        if self.pos != len(self.tokens):
            raise FormatError("%s: trailing tokens starting at %r"
                              % (self.source, self.tokens[self.pos]))


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise FormatError("cannot read %s: %s" % (path, exc)) from exc


def read_game_file(path: str) -> BiMatrixGame:
    reader = _TokenReader(_read(path), path)
    reader.expect("game")
    n = reader.natural()
    m = reader.natural()
    reader.expect("A:")
    a = reader.matrix(n, m)
    reader.expect("B:")
    b = reader.matrix(n, m)
    reader.done()
    return BiMatrixGame(a, b)


def render_game_file(game: BiMatrixGame) -> str:
    lines = ["game %d %d" % (game.rows, game.cols), "A:"]
    for row in game.a:
        lines.append(" ".join(format_rational(x) for x in row))
    lines.append("B:")
    for row in game.b:
        lines.append(" ".join(format_rational(x) for x in row))
    return "\n".join(lines) + "\n"


def write_game_file(game: BiMatrixGame, path: str):
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(render_game_file(game))


def read_ineq_file(path: str) -> IneqSystem:
    reader = _TokenReader(_read(path), path)
    reader.expect("ineq")
    n = reader.natural()
    m = reader.natural()
    reader.expect("A:")
    a = reader.matrix(n, m)
    reader.expect("b:")
    b = [reader.rational() for _ in range(n)]
    reader.done()
    return IneqSystem(a, b)


def read_corr_file(path: str) -> CorrelatedMatrix:
    reader = _TokenReader(_read(path), path)
    reader.expect("corr")
    n = reader.natural()
    m = reader.natural()
    c = reader.matrix(n, m)
    reader.done()
    return CorrelatedMatrix(c)


def parse_profile(text: str, rows: int, cols: int) -> MixedProfile:
    parts = text.split(";")
    if len(parts) != 2:
        raise FormatError("profile must be two ';'-separated weight lists")
    x = [parse_rational(t) for t in parts[0].split()]
    y = [parse_rational(t) for t in parts[1].split()]
    if len(x) != rows or len(y) != cols:
        raise FormatError("profile has %d+%d weights, game needs %d+%d"
                          % (len(x), len(y), rows, cols))
    try:
        return MixedProfile(x, y)
    except ArgumentError as exc:
        raise FormatError(str(exc)) from exc


def parse_tape(text: str) -> NatStream:
    """Comma-separated naturals; the final value repeats forever."""
    items = text.split(",")
    try:
        values = [int(t) for t in items]
    except ValueError as exc:
        raise FormatError("not a tape: %r" % text) from exc
    if not values or any(v < 0 for v in values):
        raise FormatError("tapes need at least one natural number")
    return NatStream.from_prefix(values[:-1], tail=values[-1])


# ---------------------------------------------------------------------------
# Approximation output
# ---------------------------------------------------------------------------

def format_stage_decimal(value: Fraction, precision: int) -> str:
    """Decimal rendering within 2**-(precision+2) of the exact stage value."""
    digits = ((precision + 2) * 30103 + 99999) // 100000
    scaled = value * 10 ** digits
    n = math.floor(scaled + Fraction(1, 2))
    sign = "-" if n < 0 else ""
    whole, frac = divmod(abs(n), 10 ** digits)
    return "%s%d.%0*d" % (sign, whole, digits, frac)


def approx_token(stream: RealStream, precision: int) -> str:
    # Stage precision+2 plus the rounding error keeps the printed value
    # within 2**-precision of the stream's limit.
    return format_stage_decimal(stream.approx(precision + 2), precision)


def approx_line(label: str, streams, precision: int) -> str:
    body = " ".join(approx_token(s, precision) for s in streams)
    return "%s = %s (+/- 2^-%d)" % (label, body, precision)


def exact_line(label: str, values) -> str:
    return "%s = %s" % (label, " ".join(format_rational(v) for v in values))


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_solve(args) -> int:
    game = read_game_file(args.file)
    if args.concept == "pure":
        cells = enumerate_pure(game)
        if not cells:
            print("no pure equilibrium")
            return 3
        for i, j in cells:
            print("(%d,%d)" % (i, j))
        return 0
    if args.concept == "nash":
        if args.mode == "exact":
            profile = solve_nash(game)
            print(exact_line("x", profile.x))
            print(exact_line("y", profile.y))
        else:
            profile = solve_nash(game, mode="oracle")
            print(approx_line("x", profile.x, args.precision))
            print(approx_line("y", profile.y, args.precision))
        return 0
    if args.mode == "exact":
        matrix = solve_correlated(game)
        print("C = " + " ; ".join(
            " ".join(format_rational(v) for v in row) for row in matrix.c))
    else:
        matrix = solve_correlated(game, mode="oracle")
        body = " ; ".join(
            " ".join(approx_token(s, args.precision) for s in row)
            for row in matrix.c)
        print("C = %s (+/- 2^-%d)" % (body, args.precision))
    return 0


def cmd_check(args) -> int:
    game = read_game_file(args.file)
    if args.profile is not None:
        profile = parse_profile(args.profile, game.rows, game.cols)
        violation = first_nash_violation(game, profile)
    else:
        matrix = read_corr_file(args.corr)
        violation = first_correlated_violation(game, matrix)
    if violation is None:
        print("VALID")
        return 0
    print("INVALID: %s" % violation)
    return 1


def cmd_product(args) -> int:
    product = product_game(read_game_file(args.file1), read_game_file(args.file2))
    write_game_file(product, args.output)
    return 0


def cmd_gadget(args) -> int:
    if args.kind != "mp":
        raise FormatError("unknown gadget %r" % args.kind)
    game = mp_gadget(parse_rational(args.a), parse_rational(args.b))
    write_game_file(game, args.output)
    return 0


def cmd_ineq(args) -> int:
    system = read_ineq_file(args.file)
    if args.mode == "exact":
        solution = fm_solve_exact(system)
        if solution is None:
            print("infeasible")
            return 3
        print(exact_line("v", solution))
        return 0
    lifted = IneqSystem([[const(x) for x in row] for row in system.rows],
                        [const(x) for x in system.rhs])
    try:
        vector = fm_solve_stream(lifted, ExactOracle())
    except ContractError:
        print("infeasible")
        return 3
    print(approx_line("v", vector, args.precision))
    return 0


def _reduction_index(machine: str, spec, value) -> int:
    result = run(spec, value)
    print("index = %d" % result)
    return 0


def _print_stream_result(stream: RealStream, precision: int) -> None:
    print(exact_line("value", [stream.witness]))
    print(approx_line("approx", [stream], precision))


def cmd_reduction(args) -> int:
    name = args.name
    if name not in CATALOG:
        raise FormatError("unknown reduction %r" % name)
    params = args.args
    precision = args.precision
    if name == "mlpo_to_1pure":
        tapes = [parse_tape(t) for t in params]
        if len(tapes) < 2:
            raise FormatError("need at least two tapes")
        return _reduction_index(name, CATALOG[name](len(tapes)), tapes)
    if name == "one_pure_to_mlpo":
        payoffs = [const(parse_rational(t)) for t in params]
        if not payoffs:
            raise FormatError("need at least one payoff")
        return _reduction_index(name, CATALOG[name](len(payoffs)), payoffs)
    if name == "pure_via_mlpo2_products":
        payoffs = [const(parse_rational(t)) for t in params]
        if len(payoffs) < 2:
            raise FormatError("need at least two payoffs")
        return _reduction_index(name, CATALOG[name](len(payoffs) - 1), payoffs)
    if name == "mlpo2_via_rdiv":
        if len(params) != 2:
            raise FormatError("need exactly two tapes")
        tapes = tuple(parse_tape(t) for t in params)
        return _reduction_index(name, CATALOG[name](), tapes)
    if name == "rdiv_via_blinineq":
        pairs = []
        for token in params:
            parts = token.split(":")
            if len(parts) != 2:
                raise FormatError("pairs are written p:q, got %r" % token)
            pairs.append((const(parse_rational(parts[0])),
                          const(parse_rational(parts[1]))))
        if not pairs:
            raise FormatError("need at least one pair")
        vector = run(CATALOG[name](len(pairs)), pairs)
        print(exact_line("v", [s.witness for s in vector]))
        print(approx_line("approx", vector, precision))
        return 0
    if name in ("rdiv_via_sep", "rdiv_via_zcorr22"):
        if len(params) != 2:
            raise FormatError("need the two operands a b")
        a, b = (const(parse_rational(t)) for t in params)
        stream = run(CATALOG[name](), (a, b))
        _print_stream_result(stream, precision)
        return 0
    if name == "sep_pair_merge":
        if len(params) != 4:
            raise FormatError("need the four tapes p1 q1 p2 q2")
        p1, q1, p2, q2 = (parse_tape(t) for t in params)
        bits1, bits2 = run(CATALOG[name](), ((p1, q1), (p2, q2)))
        print("bits = %d %d" % (bits1(args.index), bits2(args.index)))
        return 0
    raise FormatError("unknown reduction %r" % name)


# ---------------------------------------------------------------------------
# Parser and entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="equistream",
        description="exact bi-matrix equilibria, approximation streams, and "
                    "oracle reduction machines")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve a game file for an equilibrium")
    p.add_argument("file")
    p.add_argument("--concept", choices=["pure", "nash", "corr"], required=True)
    p.add_argument("--mode", choices=["exact", "oracle"], default="exact")
    p.add_argument("--precision", type=int, default=8)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("check", help="verify a candidate equilibrium")
    p.add_argument("file")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--profile", help='mixed profile as "x1 x2 ...; y1 y2 ..."')
    group.add_argument("--corr", help="correlated matrix file")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("product", help="write the product of two game files")
    p.add_argument("file1")
    p.add_argument("file2")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_product)

    p = sub.add_parser("gadget", help="write a gadget game file")
    p.add_argument("kind", help="gadget family (mp)")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_gadget)

    p = sub.add_parser("ineq", help="solve an inequality system file")
    p.add_argument("file")
    p.add_argument("--mode", choices=["exact", "oracle"], default="exact")
    p.add_argument("--precision", type=int, default=8)
    p.set_defaults(func=cmd_ineq)

    p = sub.add_parser("reduction", help="run a named reduction machine")
    p.add_argument("name")
    p.add_argument("args", nargs="*")
    p.add_argument("--precision", type=int, default=8)
    p.add_argument("--index", type=int, default=0,
                   help="query index for sep_pair_merge")
    p.set_defaults(func=cmd_reduction)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except (FormatError, ArgumentError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except UnanswerableError as exc:
        print("oracle unanswerable: %s" % exc, file=sys.stderr)
        return 4
    except ContractError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
