"""
Entry point of the ``openlbp`` command.

Exit status: 0 success, 1 data or processing error, 2 usage error.
"""
import argparse
import io
import sys
from contextlib import redirect_stdout
from pathlib import Path
from typing import List, NoReturn, Optional, Sequence, TextIO

from pydantic import ValidationError

from openlbp.cli.routes import build_parser
from openlbp.core.exceptions import DataFileError, OpenLBPError, UsageError
from openlbp.core.logging import run_logger, setup_logging
from openlbp.schemas.cli import CommandSpec, RunReport

NON_FLAG_KEYS = {"command", "handler", "output", "images", "directories", "features", "scores"}


class CliArgumentParser(argparse.ArgumentParser):
    """Parser that reports bad command lines as ``UsageError`` instead of exiting."""

    def error(self, message: str) -> NoReturn:
        raise UsageError(f"{self.prog}: {message}")


def _command_spec(args: argparse.Namespace) -> CommandSpec:
    values = vars(args)
    inputs: List[str] = []
    for key in ("images", "directories"):
        inputs.extend(values.get(key) or [])
    for key in ("features", "scores"):
        if values.get(key):
            inputs.append(values[key])
    flags = {k: v for k, v in values.items() if k not in NON_FLAG_KEYS}
    return CommandSpec(
        subcommand=args.command, flags=flags, inputs=tuple(inputs), output=values.get("output")
    )


def _describe_error(exc: Exception) -> str:
    if isinstance(exc, ValidationError):
        error = exc.errors()[0]
        return f"error: invalid-value: {exc.title}: {error['msg']}"
    return f"error: {exc}"


def run(
    argv: Sequence[str], stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None
) -> RunReport:
    """Run one command line; results go to ``stdout`` or the ``--output`` file."""
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    setup_logging()

    parser = build_parser(CliArgumentParser)
    command = "openlbp"
    try:
        with redirect_stdout(stdout):
            try:
                args = parser.parse_args(list(argv))
            except SystemExit as exc:
                # --help and --version
                return RunReport(exit_code=0 if not exc.code else 2)
        spec = _command_spec(args)
        command = spec.subcommand

        buffer = io.StringIO()
        exit_code = args.handler(args, buffer)
        if spec.output:
            try:
                Path(spec.output).write_text(buffer.getvalue(), encoding="utf-8")
            except OSError as exc:
                raise DataFileError(f"cannot write output: {exc.strerror}", spec.output) from exc
        else:
            stdout.write(buffer.getvalue())
        diagnostics = () if exit_code == 0 else (f"error: {command} reported failures",)
    except UsageError as exc:
        exit_code, diagnostics = 2, (f"usage error: {exc.message}",)
    except (OpenLBPError, ValidationError) as exc:
        exit_code, diagnostics = 1, (_describe_error(exc),)

    for line in diagnostics:
        stderr.write(line + "\n")
    run_logger.log_command_finished(command, exit_code)
    return RunReport(exit_code=exit_code, diagnostics=diagnostics)


def main() -> NoReturn:
    report = run(sys.argv[1:])
    sys.exit(report.exit_code)


if __name__ == "__main__":
    main()
