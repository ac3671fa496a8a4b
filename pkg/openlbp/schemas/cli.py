"""
Command-line request and report schemas.
"""
from typing import Any, Dict, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

SUBCOMMANDS = (
    "describe",
    "describe-video",
    "classify",
    "cluster",
    "reduce",
    "eval",
    "selftest",
)


class CommandSpec(BaseModel):
    """One parsed invocation."""

    model_config = ConfigDict(frozen=True)

    subcommand: str
    flags: Dict[str, Any] = Field(default_factory=dict)
    inputs: Tuple[str, ...] = ()
    output: Optional[str] = None

    @model_validator(mode="after")
    def _known(self) -> "CommandSpec":
        if self.subcommand not in SUBCOMMANDS:
            raise ValueError(f"unknown subcommand {self.subcommand!r}")
        return self


class RunReport(BaseModel):
    """Outcome of ``run``: exit status 0 success, 1 data error, 2 usage error."""

    model_config = ConfigDict(frozen=True)

    exit_code: int = Field(..., ge=0, le=2)
    diagnostics: Tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return self.exit_code == 0


class CheckResult(BaseModel):
    """Outcome of one built-in golden-value check."""

    model_config = ConfigDict(frozen=True)

    name: str
    passed: bool
    detail: str = ""
