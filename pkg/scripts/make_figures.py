#!/usr/bin/env python3
"""Regenerate every figure dataset (thin wrapper over `cybermodels figures`)."""

import argparse
import sys

from cybermodels.cli import main as cli_main


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="figures", help="output directory")
    args = parser.parse_args()
    return cli_main(["figures", "--out", args.out])


if __name__ == "__main__":
    sys.exit(main())
