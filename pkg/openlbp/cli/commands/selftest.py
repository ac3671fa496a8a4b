"""
``selftest``: run the built-in golden-value checks.
"""
import argparse
from typing import TextIO

from openlbp.services.golden import run_golden_checks

HELP = "verify the toolkit against built-in golden values"


def add_arguments(parser: argparse.ArgumentParser) -> None:
    pass


def execute(args: argparse.Namespace, out: TextIO) -> int:
    results = run_golden_checks()
    for result in results:
        out.write(f"{'PASS' if result.passed else 'FAIL'} {result.name}: {result.detail}\n")
    passed = sum(1 for result in results if result.passed)
    out.write(f"# passed={passed}/{len(results)}\n")
    return 0 if passed == len(results) else 1
