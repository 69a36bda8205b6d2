"""Command-line front end.

Subcommands: compress, decompress, entropy, debruijn, and experiment
(tradeoff / adversarial).  Data goes to the requested output; diagnostics
(memory report, timings) go to stderr.  Exit status: 0 on success, 1 on a
validation problem, 2 on corrupt input.
"""

import argparse
import contextlib
import os
import stat
import sys
import time

from .debruijn import DeBruijnSpec, adversarial_corpus, enumerate_count, generate
from .entropy import BYTE_ALPHABET, AlphabetSpec, entropy_profile
from .errors import CorruptionError, ValidationError
from .experiments import experiment_adversarial, experiment_tradeoff
from .stream import TradeoffParams, decode_to, encode_to

__all__ = ["main"]


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on usage errors; that status is reserved
    for corrupt input here, so usage problems are rethrown as validation."""

    def error(self, message):
        raise ValidationError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="onepass", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compress", help="encode a byte stream")
    p.add_argument("--c", type=float, required=True,
                   help="memory exponent in [0, 1]")
    p.add_argument("--eps", type=float, required=True,
                   help="slack exponent, > 0")
    p.add_argument("--stream", action="store_true",
                   help="force unknown-length mode even for regular files")
    p.add_argument("--sigma", type=int, default=256,
                   help="alphabet size (default 256)")
    p.add_argument("-i", "--input", required=True, metavar="PATH|-")
    p.add_argument("-o", "--output", required=True, metavar="PATH|-")

    p = sub.add_parser("decompress", help="decode a container")
    p.add_argument("-i", "--input", required=True, metavar="PATH|-")
    p.add_argument("-o", "--output", required=True, metavar="PATH|-")

    p = sub.add_parser("entropy", help="context entropy table, CSV on stdout")
    p.add_argument("--kmax", type=int, required=True,
                   help="largest context order to report")
    p.add_argument("-i", "--input", required=True, metavar="PATH|-")

    p = sub.add_parser("debruijn", help="cycle generation and counting")
    p.add_argument("--sigma", type=int, required=True)
    p.add_argument("--order", type=int, required=True)
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--emit", action="store_true",
                      help="write the canonical sequence as raw bytes")
    mode.add_argument("--count", action="store_true",
                      help="print the number of distinct sequences")
    mode.add_argument("--corpus", type=int, metavar="N",
                      help="write N bytes of repeated-period corpus")
    p.add_argument("--seed", type=int, default=0,
                   help="seed for --corpus (default 0)")

    p = sub.add_parser("experiment", help="CSV experiment runners")
    ex = p.add_subparsers(dest="experiment", required=True)

    t = ex.add_parser("tradeoff", help="size vs context entropy per c")
    t.add_argument("--input", required=True, metavar="PATH|-")
    t.add_argument("--c-list", required=True, metavar="F,F,...",
                   help="comma-separated memory exponents")
    t.add_argument("--eps", type=float, required=True)
    t.add_argument("--kmax", type=int, required=True)
    t.add_argument("--out", required=True, metavar="CSV|-")

    a = ex.add_parser("adversarial",
                      help="repeated-period corpus, small memory vs whole")
    a.add_argument("--sigma", type=int, required=True)
    a.add_argument("--c", type=float, required=True)
    a.add_argument("--eps", type=float, required=True)
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--out", required=True, metavar="CSV|-")

    return parser


def _open_in(stack: contextlib.ExitStack, path: str):
    if path == "-":
        return sys.stdin.buffer
    return stack.enter_context(open(path, "rb"))


def _open_out(stack: contextlib.ExitStack, path: str):
    if path == "-":
        return sys.stdout.buffer
    return stack.enter_context(open(path, "wb"))


def _regular_file_size(path: str):
    """Size of path if it is a plain file, else None (pipes, devices)."""
    try:
        st = os.stat(path)
    except OSError as exc:
        raise ValidationError(f"cannot stat input: {exc}") from None
    if stat.S_ISREG(st.st_mode):
        return st.st_size
    return None


def _cmd_compress(args) -> int:
    alphabet = AlphabetSpec(args.sigma)
    n = None
    if args.input != "-" and not args.stream:
        n = _regular_file_size(args.input)
    if n == 0:
        # a zero-length declared stream is not encodable; the unknown-length
        # path emits a headers-only container that decodes to empty
        n = None
    known = n is not None
    params = TradeoffParams(
        c=args.c, eps=args.eps, known_n=known, n_hint=n if known else None
    )
    start = time.perf_counter()
    with contextlib.ExitStack() as stack:
        src = _open_in(stack, args.input)
        dst = _open_out(stack, args.output)
        report = encode_to(src, dst, params, alphabet, n=n)
        dst.flush()
    elapsed = (time.perf_counter() - start) * 1000.0
    print(
        f"compress: mode={'known-n' if known else 'unknown-n'} "
        f"blocks={report.block_count} largest={report.largest_block_len} "
        f"peak_buffer_bytes={report.peak_buffer_bytes} "
        f"regimes={report.regime_count} elapsed_ms={elapsed:.1f}",
        file=sys.stderr,
    )
    return 0


def _cmd_decompress(args) -> int:
    start = time.perf_counter()
    with contextlib.ExitStack() as stack:
        src = _open_in(stack, args.input)
        dst = _open_out(stack, args.output)
        total = decode_to(src, dst)
        dst.flush()
    elapsed = (time.perf_counter() - start) * 1000.0
    print(
        f"decompress: chars={total} elapsed_ms={elapsed:.1f}",
        file=sys.stderr,
    )
    return 0


def _cmd_entropy(args) -> int:
    with contextlib.ExitStack() as stack:
        data = _open_in(stack, args.input).read()
    profile = entropy_profile(data, args.kmax, BYTE_ALPHABET)
    print("k,H_k")
    for k, value in enumerate(profile.values):
        print(f"{k},{value!r}")
    return 0


def _cmd_debruijn(args) -> int:
    spec = DeBruijnSpec(args.sigma, args.order)
    if args.count:
        print(enumerate_count(spec))
    elif args.emit:
        sys.stdout.buffer.write(generate(spec))
        sys.stdout.buffer.flush()
    else:
        sys.stdout.buffer.write(adversarial_corpus(spec, args.corpus, args.seed))
        sys.stdout.buffer.flush()
    return 0


def _parse_c_list(text: str):
    values = []
    for piece in text.split(","):
        piece = piece.strip()
        if not piece:
            continue
        try:
            values.append(float(piece))
        except ValueError:
            raise ValidationError(f"--c-list entry {piece!r} is not a number")
    if not values:
        raise ValidationError("--c-list is empty")
    return values


def _write_result_csv(result, out_path: str) -> None:
    if out_path == "-":
        result.write_csv(sys.stdout)
        sys.stdout.flush()
    else:
        with open(out_path, "w", newline="") as fileobj:
            result.write_csv(fileobj)


def _cmd_experiment(args) -> int:
    start = time.perf_counter()
    if args.experiment == "tradeoff":
        with contextlib.ExitStack() as stack:
            data = _open_in(stack, args.input).read()
        result = experiment_tradeoff(
            data, _parse_c_list(args.c_list), args.eps, args.kmax
        )
        summary = (
            f"tradeoff: rows={len(result.rows)} beta={result.beta:.3f}"
        )
    else:
        result = experiment_adversarial(
            args.sigma, args.c, args.eps, args.n, args.seed
        )
        summary = (
            f"adversarial: k={result.k} period={result.period} "
            f"verdict={'pass' if result.verdict else 'fail'}"
        )
    _write_result_csv(result, args.out)
    elapsed = (time.perf_counter() - start) * 1000.0
    print(f"{summary} elapsed_ms={elapsed:.1f}", file=sys.stderr)
    return 0


_COMMANDS = {
    "compress": _cmd_compress,
    "decompress": _cmd_decompress,
    "entropy": _cmd_entropy,
    "debruijn": _cmd_debruijn,
    "experiment": _cmd_experiment,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except CorruptionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
