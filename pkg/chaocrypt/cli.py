"""Command-line front end of chaocrypt."""

import argparse
import logging
import sys
import time

import numpy as np

from . import __version__
from .cipher_engine import (
    DEFAULT_BLOCK_SIZE,
    ENCRYPT_PHASES,
    ImageBuffer,
    MasterKey,
    decrypt,
    encrypt,
    key_space_bits,
)
from .envelope_io import (
    is_envelope,
    read_envelope,
    read_key,
    read_ppm,
    write_envelope,
    write_key,
    write_ppm,
)
from .exceptions import ChaocryptError, FormatError
from .metrics import analyze_image, differential_report
from .robustness import AttackSpec, robustness_report


__all__ = [
    "EXIT_DOMAIN",
    "EXIT_FORMAT",
    "EXIT_IO",
    "EXIT_USAGE",
    "main",
]

logger = logging.getLogger(__name__)

#: Exit statuses, one per failure class.
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_FORMAT = 3
EXIT_DOMAIN = 4

_PROG = "chaocrypt"
_SEED_LIMIT = 2 ** 64

# Bounds of the initial conditions drawn by keygen.
_KEYGEN_RANGE = (0.01, 0.99)


class _Parser(argparse.ArgumentParser):
    """An argument parser reporting usage errors with the usage exit status."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if value < 1:
        raise argparse.ArgumentTypeError(f"{value} is not positive")
    return value


def _seed(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if not 0 <= value < _SEED_LIMIT:
        raise argparse.ArgumentTypeError(f"{value} is not an unsigned 64-bit seed")
    return value


def _variance(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number")
    if not value >= 0 or value == float("inf"):
        raise argparse.ArgumentTypeError(f"{value} is not a non-negative variance")
    return value


def _fraction(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number")
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"{value} does not lie in [0, 1]")
    return value


def _read_image(path):
    # Envelopes are analysed as their ciphertext image.
    if is_envelope(path):
        return read_envelope(path).as_image()
    return read_ppm(path)


def _random_key(rng):
    x, y, v, w = rng.uniform(*_KEYGEN_RANGE, size=4)
    return MasterKey(x=float(x), y=float(y), v=float(v), w=float(w))


def _keygen(args):
    key = _random_key(np.random.default_rng(args.seed))
    write_key(key, args.out)
    logger.debug("Key space: %.2f bits.", key_space_bits())


def _encrypt(args):
    key = read_key(args.key)
    image = read_ppm(args.input)
    write_envelope(encrypt(image, key, args.block), args.out)


def _decrypt(args):
    key = read_key(args.key)
    envelope = read_envelope(args.input)
    write_ppm(decrypt(envelope, key), args.out)


def _analyze(args):
    image = _read_image(args.input)
    against = None if args.against is None else _read_image(args.against)
    report = analyze_image(image, against=against)
    # Histogram files are written before the report.
    if args.histogram_prefix is not None:
        for channel in report.channels:
            path = f"{args.histogram_prefix}-{channel}.csv"
            with open(path, "w") as file:
                file.write(report.histogram_csv(channel))
    sys.stdout.write(report.to_text())


def _diff(args):
    report = differential_report(_read_image(args.a), _read_image(args.b))
    sys.stdout.write(report.to_text())


def _attack(args):
    attacks = [AttackSpec.speckle(alpha, args.seed) for alpha in args.speckle]
    attacks.extend(AttackSpec.crop(fraction) for fraction in args.crop)
    key = read_key(args.key)
    image = read_ppm(args.input)
    report = robustness_report(image, key, args.block, attacks)
    sys.stdout.write(report.to_csv())


def _bench(args):
    rng = np.random.default_rng(args.seed)
    image = ImageBuffer(
        rng.integers(0, 256, size=(args.size, args.size, 3), dtype=np.uint8)
    )
    key = _random_key(rng)
    samples = []
    for run in range(args.iterations):
        timings = {}
        start = time.perf_counter()
        encrypt(image, key, args.block, timings=timings)
        timings["total"] = time.perf_counter() - start
        samples.append(timings)
        logger.debug("Run %d took %.4f s.", run, timings["total"])

    lines = [
        f"size={args.size}",
        f"block={args.block}",
        f"iterations={args.iterations}",
    ]
    for run, timings in enumerate(samples):
        for name in ("total",) + ENCRYPT_PHASES:
            lines.append(f"run.{run}.{name}={timings[name]:.6f}")
    for name in ("total",) + ENCRYPT_PHASES:
        values = [timings[name] for timings in samples]
        lines.append(f"{name}.mean={np.mean(values):.6f}")
        lines.append(f"{name}.min={np.min(values):.6f}")
    sys.stdout.write("\n".join(lines) + "\n")


def _fail(command, error, status):
    sys.stderr.write(f"{_PROG} {command}: {error}\n")
    return status


def _make_parser():
    parser = _Parser(
        prog=_PROG,
        description="Chaotic block-permutation and XOR image cipher.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument(
        "--verbose", action="store_true", help="log diagnostics to standard error"
    )
    commands = parser.add_subparsers(dest="command", metavar="command")
    commands.required = True

    keygen = commands.add_parser("keygen", help="generate a random key file")
    keygen.add_argument("--out", required=True, help="key file to write")
    keygen.add_argument("--seed", type=_seed, help="seed for reproducible keys")
    keygen.set_defaults(handler=_keygen)

    enc = commands.add_parser("encrypt", help="encrypt a P6 pixmap")
    enc.add_argument("--in", dest="input", required=True, help="pixmap to encrypt")
    enc.add_argument("--key", required=True, help="key file")
    enc.add_argument(
        "--block",
        type=_positive_int,
        default=DEFAULT_BLOCK_SIZE,
        help=f"block edge in pixels (default {DEFAULT_BLOCK_SIZE})",
    )
    enc.add_argument("--out", required=True, help="envelope to write")
    enc.set_defaults(handler=_encrypt)

    dec = commands.add_parser("decrypt", help="decrypt an envelope")
    dec.add_argument("--in", dest="input", required=True, help="envelope to decrypt")
    dec.add_argument("--key", required=True, help="key file")
    dec.add_argument("--out", required=True, help="pixmap to write")
    dec.set_defaults(handler=_decrypt)

    analyze = commands.add_parser(
        "analyze", help="report entropy, uniformity and correlation"
    )
    analyze.add_argument(
        "--in", dest="input", required=True, help="pixmap or envelope to analyse"
    )
    analyze.add_argument("--against", help="reference image for MSE and PSNR")
    analyze.add_argument(
        "--histogram-prefix",
        help="write PREFIX-<channel>.csv histograms of 256 value,count lines",
    )
    analyze.set_defaults(handler=_analyze)

    diff = commands.add_parser("diff", help="report NPCR and UACI of two envelopes")
    diff.add_argument("--a", required=True, help="first envelope")
    diff.add_argument("--b", required=True, help="second envelope")
    diff.set_defaults(handler=_diff)

    attack = commands.add_parser(
        "attack", help="decrypt after noise or data loss and report PSNR"
    )
    attack.add_argument("--in", dest="input", required=True, help="plaintext pixmap")
    attack.add_argument("--key", required=True, help="key file")
    attack.add_argument(
        "--block", type=_positive_int, default=DEFAULT_BLOCK_SIZE, help="block edge"
    )
    attack.add_argument(
        "--speckle",
        type=_variance,
        nargs="+",
        default=[],
        metavar="ALPHA",
        help="speckle noise variances",
    )
    attack.add_argument(
        "--crop",
        type=_fraction,
        nargs="+",
        default=[],
        metavar="FRACTION",
        help="area fractions to zero",
    )
    attack.add_argument("--seed", type=_seed, default=0, help="speckle noise seed")
    attack.set_defaults(handler=_attack)

    bench = commands.add_parser("bench", help="time encryption of a random image")
    bench.add_argument("--size", type=_positive_int, default=512, help="image edge")
    bench.add_argument(
        "--block", type=_positive_int, default=DEFAULT_BLOCK_SIZE, help="block edge"
    )
    bench.add_argument(
        "--iterations", type=_positive_int, default=5, help="number of timed runs"
    )
    bench.add_argument("--seed", type=_seed, default=0, help="random image seed")
    bench.set_defaults(handler=_bench)

    return parser


def main(argv=None):
    """
    Run the command line.

    Parameters
    ----------
    argv : list of str, optional
        Arguments without the program name. Defaults to ``sys.argv[1:]``.

    Returns
    -------
    int
        The exit status: 0 on success, 1 for usage errors, 2 for I/O errors,
        3 for malformed files and 4 for values outside an operation's domain.

    """
    parser = _make_parser()
    args = parser.parse_args(argv)
    if args.command == "attack" and not (args.speckle or args.crop):
        parser.error("attack needs at least one --speckle or --crop value")

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    try:
        args.handler(args)
    except OSError as error:
        return _fail(args.command, error, EXIT_IO)
    except FormatError as error:
        return _fail(args.command, error, EXIT_FORMAT)
    except ChaocryptError as error:
        return _fail(args.command, error, EXIT_DOMAIN)
    return 0
