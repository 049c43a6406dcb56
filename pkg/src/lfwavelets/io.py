"""Run configuration and JSON file loading for the command line."""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path

from .cascade import FATHER_CHAIN, MODES
from .characters import Sequence
from .errors import ConfigurationError
from .first_stage import PREFACTORS, FilterBank, haar_bank, lazy_bank
from .lambda_indexing import LambdaLattice, NumraParams

NU_FLAGS = {"scalar": "ScalarModP", "coset": "CosetRep"}
BUILTIN_BANKS = {"haar": haar_bank, "lazy": lazy_bank}


@dataclass(frozen=True)
class RunConfig:
    params: NumraParams
    window: int = 3
    resolution: int | None = None
    tolerance: float = 1e-10
    seed: int = 0
    cascade_mode: str = FATHER_CHAIN
    normalization: str = "block"
    strict: bool = False
    omega: str = "dual"

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ConfigurationError("tolerance must be positive")
        if self.window < 1:
            raise ConfigurationError("window must be >= 1")
        if self.resolution is not None and self.resolution < 0:
            raise ConfigurationError("resolution must be >= 0")
        if self.cascade_mode not in MODES:
            raise ConfigurationError(f"cascade_mode must be one of {MODES}")
        if self.normalization not in PREFACTORS:
            raise ConfigurationError(f"normalization must be one of {sorted(PREFACTORS)}")
        if self.omega not in ("dual", "shifted"):
            raise ConfigurationError("omega must be 'dual' or 'shifted'")

    def to_json(self) -> dict:
        return {
            "params": self.params.to_json(),
            "window": self.window,
            "resolution": self.resolution,
            "tolerance": self.tolerance,
            "seed": self.seed,
            "cascade_mode": self.cascade_mode,
            "normalization": self.normalization,
            "strict": self.strict,
            "omega": self.omega,
        }

    @classmethod
    def from_json(cls, d: dict) -> "RunConfig":
        if not isinstance(d, dict):
            raise ConfigurationError("config must be a JSON object")
        params = d.get("params", {k: v for k, v in d.items() if k in ("p", "c", "modulus", "N", "r", "nu_policy")})
        if "p" not in params:
            raise ConfigurationError("config needs params.p")
        try:
            return cls(
                NumraParams.from_json(params),
                window=int(d.get("window", 3)),
                resolution=None if d.get("resolution") is None else int(d["resolution"]),
                tolerance=float(d.get("tolerance", 1e-10)),
                seed=int(d.get("seed", 0)),
                cascade_mode=str(d.get("cascade_mode", FATHER_CHAIN)).lower(),
                normalization=str(d.get("normalization", "block")),
                strict=bool(d.get("strict", False)),
                omega=str(d.get("omega", "dual")),
            )
        except (TypeError, ValueError) as e:
            if isinstance(e, ConfigurationError):
                raise
            raise ConfigurationError(f"bad config value: {e}") from e

    def with_nu(self, flag: str | None) -> "RunConfig":
        if flag is None:
            return self
        p = self.params
        return replace(self, params=NumraParams(p.field, p.N, p.r, NU_FLAGS[flag]))


def read_json(path: str | Path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"{path}: malformed JSON ({e.msg} at line {e.lineno})") from e
    except OSError as e:
        raise ConfigurationError(f"{path}: {e.strerror}") from e


def write_json(path: str | Path, obj) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def load_config(path: str | Path | None) -> RunConfig:
    if path is None:
        return RunConfig(NumraParams.from_json({"p": 2, "c": 1}))
    return RunConfig.from_json(read_json(path))


def load_bank(spec: str, lattice: LambdaLattice) -> FilterBank:
    """A bank file, or ``builtin:haar`` / ``builtin:lazy``."""
    if spec.startswith("builtin:"):
        name = spec.split(":", 1)[1]
        if name not in BUILTIN_BANKS:
            raise ConfigurationError(f"unknown builtin bank {name!r}")
        return BUILTIN_BANKS[name](lattice)
    d = read_json(spec)
    try:
        return FilterBank.from_json(d, lattice)
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, ConfigurationError):
            raise
        raise ConfigurationError(f"{spec}: bad bank file ({e!r})") from e


def load_signal(path: str | Path) -> Sequence:
    d = read_json(path)
    try:
        return Sequence.from_json(d)
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigurationError(f"{path}: bad signal file ({e!r})") from e
