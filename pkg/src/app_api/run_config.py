from __future__ import annotations

import argparse
import logging
import pathlib
from dataclasses import dataclass, field, fields
from typing import Any, Optional

from src.app_api import utils
from src.knot_algebra.exceptions import ArgumentError, ResourceError
from src.knot_algebra.relations.relations import Conventions


logger = logging.getLogger("knotforge_logger")

FORMATS = ("text", "json")


@dataclass
class RunParams:
    """
    Command parameters. Only the ones a command reads matter; the rest keep their defaults.
    """

    degree: int = 1
    window: int = 3
    order: int = 10
    max_k: int = 6
    max_exponent: int = 3
    p: int = 0
    q: int = 0
    n: int = 1
    input: Optional[pathlib.Path] = None
    nh_only: bool = False
    chord_only: bool = False
    suite: Optional[pathlib.Path] = None
    regenerate: bool = False

    def as_dict(self) -> dict[str, Any]:
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            out[f.name] = value.name if isinstance(value, pathlib.Path) else value
        return out


@dataclass
class RunConfig:
    """
    One fully resolved invocation: the command, its parameters, the relation conventions and
    the output settings. Built from AppData/defaults.yaml, then overridden by the CLI.
    """

    command: str
    subcommand: Optional[str] = None
    params: RunParams = field(default_factory=RunParams)
    ihx_sign: str = "A"
    stu_order: str = "A"
    output: Optional[pathlib.Path] = None
    threads: int = 1
    fmt: str = "text"

    def __post_init__(self):
        if self.threads < 1:
            raise ArgumentError(f"--threads must be >= 1, got {self.threads}")
        if self.fmt not in FORMATS:
            raise ArgumentError(f"--format must be one of {FORMATS}, got {self.fmt!r}")
        max_degree = int(utils.read_defaults().get("max_degree", 3))
        if self.params.degree > max_degree:
            raise ResourceError(f"degree {self.params.degree} exceeds max_degree {max_degree}")
        # validates the toggles
        self.conventions

    @property
    def conventions(self) -> Conventions:
        return Conventions(self.ihx_sign, self.stu_order)

    @property
    def name(self) -> str:
        return f"{self.command} {self.subcommand}" if self.subcommand else self.command

    def echo(self) -> dict[str, Any]:
        """
        The command echo stored in reports. Paths are reduced to file names and output settings
        are left out, so the echo does not depend on where files live.
        """
        return {
            "command": self.command,
            "subcommand": self.subcommand,
            "params": self.params.as_dict(),
            "conventions": {"ihx_sign": self.ihx_sign, "stu_order": self.stu_order},
        }

    @classmethod
    def from_defaults(cls, command: str, subcommand: Optional[str] = None, **overrides) -> RunConfig:
        defaults = utils.read_defaults()
        param_names = {f.name for f in fields(RunParams)}
        params = RunParams(
            window=int(defaults.get("window", 3)),
            order=int(defaults.get("series_order", 10)),
        )
        top: dict[str, Any] = {
            "ihx_sign": defaults.get("ihx_sign_convention", "A"),
            "stu_order": defaults.get("stu_term_order", "A"),
            "threads": int(defaults.get("threads", 1)),
            "fmt": defaults.get("format", "text"),
        }
        for key, value in overrides.items():
            if value is None:
                continue
            if key in param_names:
                setattr(params, key, pathlib.Path(value) if key in ("input", "suite") else value)
            elif key in ("ihx_sign", "stu_order", "threads", "fmt", "output"):
                top[key] = pathlib.Path(value) if key == "output" else value
            else:
                raise ArgumentError(f"unknown configuration key {key!r}")
        return cls(command, subcommand, params, **top)

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> RunConfig:
        overrides = {
            k: v
            for k, v in vars(args).items()
            if k not in ("func", "command", "subcommand", "verbosity")
        }
        return cls.from_defaults(args.command, getattr(args, "subcommand", None), **overrides)

    @classmethod
    def from_manifest(cls, manifest: dict[str, Any], base_dir: pathlib.Path, threads: int = 1) -> RunConfig:
        """
        The config of one golden-suite case. Relative `input` paths resolve against the
        manifest's directory.
        """
        params = dict(manifest.get("params") or {})
        if "input" in params:
            params["input"] = base_dir / params["input"]
        conventions = manifest.get("conventions") or {}
        return cls.from_defaults(
            manifest["command"],
            manifest.get("subcommand"),
            threads=threads,
            fmt="json",
            ihx_sign=conventions.get("ihx_sign"),
            stu_order=conventions.get("stu_order"),
            **params,
        )
