"""
Subcommand registry.
"""
import argparse
from types import ModuleType
from typing import Tuple, Type

from openlbp import __version__
from openlbp.cli.commands import classify, cluster, describe, describe_video, evaluate, reduce, selftest

# (subcommand, module); each module provides HELP, add_arguments and execute
COMMANDS: Tuple[Tuple[str, ModuleType], ...] = (
    ("describe", describe),
    ("describe-video", describe_video),
    ("classify", classify),
    ("cluster", cluster),
    ("reduce", reduce),
    ("eval", evaluate),
    ("selftest", selftest),
)


def build_parser(parser_class: Type[argparse.ArgumentParser]) -> argparse.ArgumentParser:
    parser = parser_class(
        prog="openlbp",
        description="Local Binary Pattern texture descriptors, classification and evaluation.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)
    for name, module in COMMANDS:
        command = subparsers.add_parser(name, help=module.HELP, description=module.HELP)
        module.add_arguments(command)
        command.set_defaults(handler=module.execute)
    return parser
