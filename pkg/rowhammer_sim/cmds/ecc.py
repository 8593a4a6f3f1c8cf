from __future__ import annotations as __future_annotations__

import logging
import sys
from typing import TYPE_CHECKING

from ..ecc import SecdedCodec, default_parity_matrix, exhaustive_check, load_pmatrix, save_pmatrix
from ..model import InvariantError
from ..simulator.rng import CounterRng
from .__types__ import SubCommand

if TYPE_CHECKING:
    from argparse import Namespace, _SubParsersAction

logger = logging.getLogger(__name__)


def random_words(count: int, seed: int = 0) -> list[int]:
    """
    Draw `count` reproducible 64-bit words.
    """
    rng = CounterRng(seed, "ecc.words")
    return [rng.bits(i) for i in range(count)]


class EccCheckSubCommand(SubCommand):
    """
    Command to validate a parity-check matrix.
    """

    pmatrix: str | None
    exhaustive: bool
    words: int
    seed: int
    write_default: str | None

    @staticmethod
    def register(parser: _SubParsersAction):
        ecc_parser = parser.add_parser(
            "ecc-check",
            help="Validate a parity-check matrix, optionally against every single and double error",
        )

        ecc_parser.add_argument(
            "--pmatrix",
            type=str,
            help="Parity-check matrix file, defaults to the shipped Hsiao matrix",
        )
        ecc_parser.add_argument(
            "--exhaustive",
            action="store_true",
            help="Corrupt random words at every single and double position",
        )
        ecc_parser.add_argument(
            "--words",
            type=int,
            default=100,
            help="Random words to corrupt with --exhaustive",
        )
        ecc_parser.add_argument(
            "--seed",
            type=int,
            default=0,
            help="Seed of the random words",
        )
        ecc_parser.add_argument(
            "--write-default",
            type=str,
            help="Write the shipped matrix to this file and exit",
        )

        ecc_parser.set_defaults(func=EccCheckSubCommand)

    def __init__(self, args: Namespace):
        self.pmatrix = args.pmatrix
        self.exhaustive = args.exhaustive
        self.words = args.words
        self.seed = args.seed
        self.write_default = args.write_default

    def run(self):
        if self.write_default:
            save_pmatrix(default_parity_matrix(), self.write_default)
            return

        pm = load_pmatrix(self.pmatrix) if self.pmatrix else default_parity_matrix()
        kind = "odd-weight" if pm.is_odd_weight else "general"
        print(f"matrix ok: 72 distinct non-zero columns, {kind}")
        if not self.exhaustive:
            return

        report = exhaustive_check(SecdedCodec(pm), random_words(self.words, self.seed))
        sys.stdout.write(report.to_json(indent=2, sort_keys=True) + "\n")
        if not report.passed:
            msg = (
                f"{report.singles - report.singles_corrected} uncorrected single(s), "
                f"{report.doubles - report.doubles_flagged} unflagged double(s), "
                f"{report.silent} silent corruption(s)"
            )
            raise InvariantError(msg)
