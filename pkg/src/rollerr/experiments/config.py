"""Sweep configuration: a flat key-value text format and the cell grid.

Config files are plain ``key = value`` lines. Values are typed: ``true`` /
``false``, integers, floats, double-quoted strings, and bracketed arrays
(one level of nesting allowed, for layer-width lists). ``#`` starts a
comment. Example::

    # compare two poles
    name = "custom"
    system = "statespace"
    poles = [0.1, 0.5]
    models = ["det_delta", "linear"]
    hidden_sizes = [[256, 256]]
    train_trajs = [100]
    horizon = 100
    seed = 7

The grid axes (poles, noise_mults, dims, models, train_trajs, hidden_sizes,
modes, angle_expansions) cross-multiply into cells; scalar keys apply to
every cell. In the results CSV, axis columns not applicable to the system
family are left empty.
"""

from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass, field, fields

MODEL_TAGS = ("zero", "zero_persist", "linear", "det_delta", "det_state",
              "prob_ens_delta", "prob_ens_state", "det_ens_delta")
SYSTEMS = ("statespace", "lorenz", "cartpole")
MODES = ("logged", "recomputed", "one_step")


class ConfigError(ValueError):
    pass


@dataclass
class SweepConfig:
    name: str = "custom"
    system: str = "statespace"
    # grid axes
    poles: list = field(default_factory=lambda: [0.5])
    noise_mults: list = field(default_factory=lambda: [1.0])
    dims: list = field(default_factory=lambda: [3])
    models: list = field(default_factory=lambda: ["det_delta"])
    train_trajs: list = field(default_factory=lambda: [100])
    hidden_sizes: list = field(default_factory=lambda: [[256, 256]])
    modes: list = field(default_factory=lambda: ["logged"])
    angle_expansions: list = field(default_factory=lambda: [False])
    # scalar settings
    regularized: bool = False
    zero_inputs: bool = False
    normalization: bool = True
    ensemble_size: int = 5
    epochs: int = 20
    n_test: int = 100
    horizon: int = 100
    lorenz_init: list = field(default_factory=lambda: [5.0, 10.0])
    lorenz_test_length: int = 200
    snr_dts: list = field(default_factory=lambda: [0.25, 0.5, 0.75])
    snr_sigma: float = 3.0
    snr_trajectories: int = 1000
    table_systems: int = 1000
    seed: int = 0

    def validate(self):
        if self.system not in SYSTEMS:
            raise ConfigError(f"unknown system {self.system!r}; pick from {SYSTEMS}")
        for m in self.models:
            if m not in MODEL_TAGS:
                raise ConfigError(f"unknown model {m!r}; pick from {MODEL_TAGS}")
        for m in self.modes:
            if m not in MODES:
                raise ConfigError(f"unknown mode {m!r}; pick from {MODES}")
        for axis in ("poles", "noise_mults", "dims", "models", "train_trajs",
                     "hidden_sizes", "modes", "angle_expansions"):
            if not getattr(self, axis):
                raise ConfigError(f"grid axis {axis} is empty")
        if self.system != "statespace":
            for axis in ("poles", "noise_mults", "dims"):
                if len(getattr(self, axis)) != 1:
                    raise ConfigError(f"{axis} only applies to statespace sweeps")
        if self.system != "cartpole" and any(self.angle_expansions):
            raise ConfigError("angle expansion only applies to cartpole")
        if self.horizon < 1 or self.n_test < 1:
            raise ConfigError("horizon and n_test must be >= 1")
        return self

    def cells(self):
        """Cross product of the grid axes, in deterministic order."""
        grid = itertools.product(self.poles, self.noise_mults, self.dims,
                                 self.models, self.train_trajs,
                                 self.hidden_sizes, self.modes,
                                 self.angle_expansions)
        return [CellParams(i, *values) for i, values in enumerate(grid)]

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, data):
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data).validate()


@dataclass(frozen=True)
class CellParams:
    index: int
    pole: float
    noise_mult: float
    dim: int
    model: str
    train_trajs: int
    hidden: tuple
    mode: str
    expand_angles: bool


def _tokenize(text):
    tokens = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "[],":
            tokens.append(c)
            i += 1
        elif c == '"':
            j = text.index('"', i + 1)
            tokens.append(("str", text[i + 1:j]))
            i = j + 1
        else:
            j = i
            while j < len(text) and text[j] not in "[], \t":
                j += 1
            tokens.append(("atom", text[i:j]))
            i = j
    return tokens


def _parse_atom(atom):
    if atom == "true":
        return True
    if atom == "false":
        return False
    try:
        return int(atom)
    except ValueError:
        pass
    try:
        return float(atom)
    except ValueError:
        raise ConfigError(f"cannot parse value {atom!r} (strings need quotes)")


def _parse_tokens(tokens, pos):
    tok = tokens[pos]
    if tok == "[":
        out = []
        pos += 1
        while tokens[pos] != "]":
            value, pos = _parse_tokens(tokens, pos)
            out.append(value)
            if tokens[pos] == ",":
                pos += 1
        return out, pos + 1
    if isinstance(tok, tuple):
        kind, text = tok
        return (text if kind == "str" else _parse_atom(text)), pos + 1
    raise ConfigError(f"unexpected token {tok!r}")


def parse_value(text):
    tokens = _tokenize(text)
    if not tokens:
        raise ConfigError("empty value")
    value, pos = _parse_tokens(tokens, 0)
    if pos != len(tokens):
        raise ConfigError(f"trailing junk in value: {text!r}")
    return value


def parse_config_text(text) -> dict:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        try:
            out[key] = parse_value(value.strip())
        except ConfigError as exc:
            raise ConfigError(f"line {lineno} ({key}): {exc}") from None
        except (ValueError, IndexError):
            raise ConfigError(f"line {lineno} ({key}): malformed value") from None
    return out


def load_config(path) -> SweepConfig:
    with open(path) as fh:
        return SweepConfig.from_dict(parse_config_text(fh.read()))
