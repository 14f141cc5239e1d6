"""Numeric defaults, environment settings and JSON model-file loading."""

import json
import os
import re
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any

from .errors import ConfigError

THREADS_ENV = "MARKOVIA_THREADS"


@dataclass(frozen=True)
class Settings:
    """Tolerances, enumeration caps and parallelism for one run."""

    discrete_tol: float = 1e-9
    gaussian_tol: float = 1e-8
    axiom_cap: int = 7
    condition_cap: float = 1e12
    eigen_cap: int = 400
    enumeration_cap: int = 22
    symmetry_probes: int = 1000
    # Random instantiations per axiom when an audit exceeds axiom_cap.
    axiom_samples: int = 2000
    threads: int = 1

    @classmethod
    def from_env(cls, environ: dict[str, str] | None = None) -> "Settings":
        """Read MARKOVIA_THREADS from the environment."""
        environ = os.environ if environ is None else environ
        raw = environ.get(THREADS_ENV)
        if raw is None or raw.strip() == "":
            return cls()
        try:
            threads = int(raw)
        except ValueError:
            raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}")
        if threads < 1:
            raise ConfigError(f"{THREADS_ENV} must be at least 1, got {threads}")
        return cls(threads=threads)

    def with_overrides(self, **overrides: Any) -> "Settings":
        """Return a copy with the non-None overrides applied."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


DEFAULT_SETTINGS = Settings()


@dataclass(frozen=True)
class RunConfig:
    """One parsed command-line invocation."""

    command: str
    model: str | None = None
    tol: float | None = None
    sizes: tuple[int, ...] = ()
    seed: int = 0
    out: str | None = None
    csv: str | None = None
    verbose: bool = False
    # Command-specific flags such as --m, --nmax or --trials.
    options: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "RunConfig":
        """Build from a mapping, rejecting keys that are not fields."""
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown run option(s): {', '.join(unknown)}")
        if "command" not in data:
            raise ConfigError("run config needs a command")
        data = dict(data)
        data["sizes"] = tuple(int(n) for n in data.get("sizes") or ())
        data["options"] = dict(data.get("options") or {})
        return cls(**data)

    @classmethod
    def from_namespace(cls, args: Any) -> "RunConfig":
        """Split an argparse namespace into common fields and options."""
        values = {k: v for k, v in vars(args).items() if k != "handler"}
        common = {f.name for f in fields(cls)} - {"options"}
        return cls.from_dict(
            {
                **{k: v for k, v in values.items() if k in common},
                "options": {k: v for k, v in values.items() if k not in common},
            }
        )

    def settings(self, base: Settings | None = None) -> Settings:
        """Settings with --tol applied to both CI tolerances."""
        base = base or Settings.from_env()
        return base.with_overrides(discrete_tol=self.tol, gaussian_tol=self.tol)

    def to_dict(self) -> dict[str, Any]:
        return {
            "command": self.command,
            "model": self.model,
            "tol": self.tol,
            "sizes": list(self.sizes),
            "seed": self.seed,
            "options": dict(sorted(self.options.items())),
        }


# Allowed top-level keys per model-file kind.
_SCHEMAS: dict[str, frozenset[str]] = {
    "graph": frozenset(
        {"kind", "vertices", "edges", "order", "size", "dimension", "hub", "n"}
    ),
    "covariance": frozenset(
        {
            "variant",
            "matrix",
            "coefficients",
            "delta",
            "dimension",
            "alpha",
            "scale",
            "epsilon",
            "cap",
            "envelope",
            "K",
            "eps",
            "sizes",
        }
    ),
    "envelope": frozenset({"kind", "c", "rho", "scale"}),
    "ising": frozenset(
        {
            "family",
            "regime",
            "rate",
            "coupling",
            "field",
            "edges",
            "nodes",
            "mass_bound",
            "shift",
        }
    ),
    "chain": frozenset({"pi1", "p", "t", "length"}),
    "relation": frozenset(
        {"kind", "ground_set", "statements", "n", "table", "cov", "labels", "graph"}
    ),
    "parity": frozenset({"M", "p", "tail"}),
    "theta_shift": frozenset({"weight", "base", "alpha", "n"}),
}

_DISCRIMINATORS = {
    "graph": "kind",
    "covariance": "variant",
    "envelope": "kind",
    "ising": "family",
    "relation": "kind",
}

# Nested objects validated against their own schema.
_NESTED = {("covariance", "envelope"): "envelope", ("relation", "graph"): "graph"}


def _locate(text: str, key: str) -> tuple[int | None, int | None]:
    """Find the line and column of the first occurrence of a JSON key."""
    match = re.search(r'"' + re.escape(key) + r'"\s*:', text)
    if match is None:
        return None, None
    line = text.count("\n", 0, match.start()) + 1
    column = match.start() - (text.rfind("\n", 0, match.start()) + 1) + 1
    return line, column


def validate_keys(
    data: Any, kind: str, path: str | None = None, text: str | None = None
) -> dict[str, Any]:
    """Reject unknown keys and missing discriminators for a config kind."""
    if kind not in _SCHEMAS:
        raise ConfigError(f"unknown config kind {kind!r}", path)
    if not isinstance(data, dict):
        raise ConfigError(f"{kind} config must be a JSON object", path, 1, 1)

    allowed = _SCHEMAS[kind]
    for key in data:
        if key not in allowed:
            line, column = _locate(text, key) if text else (None, None)
            raise ConfigError(
                f"unknown key {key!r} in {kind} config "
                f"(allowed: {', '.join(sorted(allowed))})",
                path,
                line,
                column,
            )

    discriminator = _DISCRIMINATORS.get(kind)
    if discriminator is not None and discriminator not in data:
        raise ConfigError(f"{kind} config needs a {discriminator!r} field", path, 1, 1)

    for (parent, key), nested_kind in _NESTED.items():
        if parent == kind and key in data:
            validate_keys(data[key], nested_kind, path, text)
    return data


def load_json_config(path: str | Path, kind: str) -> dict[str, Any]:
    """Load a JSON model file and validate it against its kind.

    Syntax and schema errors are reported as `file:line:col: message`.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ConfigError(f"cannot read config: {e.strerror}", str(path))
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(e.msg, str(path), e.lineno, e.colno)
    return validate_keys(data, kind, str(path), text)
